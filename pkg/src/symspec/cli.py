"""Command-line front door: ``symspec {verify,sample,bench,pfaffian}``."""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field, fields
from pathlib import Path

from . import __version__
from .checks import (
    FAMILIES, PRNG_NAME, SampleSpec, derive_seed, field_allows, resolve_families, run_spec, sample_specs,
)
from .linalg import Matrix, det
from .pfaffian import pf_eliminate, pf_matching, pfaffian, random_antisymmetric
from .rings import FieldSpec, MultiPoly
from .symplectic import SAMPLER_KINDS, CommutingTuple, sample_commuting, standard_space

MAX_N = 6


class ConfigError(ValueError):
    pass


@dataclass
class CampaignConfig:
    n: int = 2
    d: int = 2
    field: str = "q"
    seed: int = 0
    samples: int = 20
    checks: list = dc_field(default_factory=lambda: list(FAMILIES))
    kinds: list = dc_field(default_factory=lambda: list(SAMPLER_KINDS))
    output: str | None = None
    input: str | None = None

    def validate(self) -> FieldSpec:
        """Check every field; returns the parsed base field."""
        for name in ("n", "d", "seed", "samples"):
            if not isinstance(getattr(self, name), int) or isinstance(getattr(self, name), bool):
                raise ConfigError(f"field '{name}': expected an integer, got {getattr(self, name)!r}")
        if not 1 <= self.n <= MAX_N:
            raise ConfigError(f"field 'n': must satisfy 1 <= n <= {MAX_N} (matching-sum cost ceiling), got {self.n}")
        if self.d < 1:
            raise ConfigError(f"field 'd': must be positive, got {self.d}")
        if self.samples < 1:
            raise ConfigError(f"field 'samples': must be positive, got {self.samples}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"field 'seed': must be a 64-bit unsigned integer, got {self.seed}")
        try:
            field = FieldSpec.parse(str(self.field))
            field.require_char_above(2 * self.n, "symplectic context")
        except ValueError as exc:
            raise ConfigError(f"field 'field': {exc}") from None
        try:
            self.checks = resolve_families(self.checks)
        except KeyError as exc:
            raise ConfigError(f"field 'checks': {exc.args[0]}") from None
        bad = [k for k in self.kinds if k not in SAMPLER_KINDS]
        if bad:
            raise ConfigError(f"field 'kind': unknown sampler(s) {bad}; expected {list(SAMPLER_KINDS)}")
        return field


def load_config_file(path: str) -> dict:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    known = {f.name for f in fields(CampaignConfig)} | {"kind"}
    for key in data:
        if key not in known:
            raise ConfigError(f"{path}: unknown field '{key}'")
    if "kind" in data:
        data["kinds"] = [data.pop("kind")] if isinstance(data["kind"], str) else data.pop("kind")
    return data


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SYMSPEC_THREADS", "1")))
    except ValueError:
        return 1


def _run_all(jobs: list) -> list:
    """Run (spec, tuple) jobs; results come back in submission order."""
    workers = min(_threads(), os.cpu_count() or 1, max(1, len(jobs)))
    if workers == 1:
        return [run_spec(spec, tup) for spec, tup in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_job, jobs, chunksize=8))


def _run_job(job):
    return run_spec(*job)


def load_tuples(path: str) -> list[CommutingTuple]:
    data = json.loads(Path(path).read_text())
    items = data if isinstance(data, list) else [data]
    return [CommutingTuple.from_json(item) for item in items]


def run_campaign(config: CampaignConfig) -> dict:
    field = config.validate()
    jobs = []
    skipped = []
    if config.input:
        tuples = load_tuples(config.input)
        for fam in config.checks:
            if not FAMILIES[fam].needs_tuple:
                skipped.append(fam)
                continue
            for i, tup in enumerate(tuples):
                spec = SampleSpec(fam, tup.space.n, tup.d, tup.space.field, tup.kind or "input",
                                  tup.seed if tup.seed is not None else i, i)
                jobs.append((spec, tup))
    else:
        for fam in config.checks:
            if not field_allows(fam, config.n, field):
                skipped.append(fam)
                continue
            for spec in sample_specs(fam, config.n, config.d, field, config.seed, config.samples, tuple(config.kinds)):
                jobs.append((spec, None))
    results = _run_all(jobs)
    failed = [r for r in results if not r.passed]
    by_family = {}
    for r in results:
        entry = by_family.setdefault(r.check_id, {"total": 0, "failed": 0})
        entry["total"] += 1
        entry["failed"] += 0 if r.passed else 1
    return {
        "metadata": {"tool": "symspec", "version": __version__, "prng": PRNG_NAME},
        # the output path is where the report goes, not part of the campaign
        "config": {**{k: v for k, v in asdict(config).items() if k != "output"}, "seed": str(config.seed)},
        "results": [r.to_json() for r in results],
        "summary": {"total": len(results), "failed": len(failed), "skipped_families": skipped,
                    "by_family": by_family},
    }


def _write(text: str, output: str | None) -> None:
    if output and output != "-":
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    config = _config_from_args(args)
    report = run_campaign(config)
    _write(json.dumps(report, indent=1, sort_keys=True) + "\n", config.output)
    summary = report["summary"]
    for fam, entry in summary["by_family"].items():
        status = "PASS" if entry["failed"] == 0 else "FAIL"
        print(f"{status} {fam}: {entry['total'] - entry['failed']}/{entry['total']}", file=sys.stderr)
    for fam in summary["skipped_families"]:
        print(f"SKIP {fam}", file=sys.stderr)
    return 0 if summary["failed"] == 0 else 1


def cmd_sample(args) -> int:
    config = _config_from_args(args)
    field = config.validate()
    space = standard_space(config.n, field)
    dumps = []
    for kind in config.kinds:
        for i in range(config.samples):
            seed = derive_seed(config.seed, "tuple", config.n, config.d, field, kind, i)
            tup = sample_commuting(space, config.d, random.Random(seed), kind)
            dumps.append({**tup.to_json(), "kind": kind, "seed": str(seed)})
    payload = dumps[0] if len(dumps) == 1 else dumps
    _write(json.dumps(payload, indent=1) + "\n", config.output)
    return 0


def cmd_bench(args) -> int:
    field = FieldSpec.parse(args.field)
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = []
    all_agree = True
    for size in sizes:
        if size % 2:
            raise ConfigError(f"field 'sizes': {size} is odd")
        for i in range(args.samples):
            rng = random.Random(derive_seed(args.seed, "bench", size, field, i))
            m = random_antisymmetric(field, size, rng)
            values = {}
            for name, fn in (("matching", pf_matching), ("elimination", pf_eliminate)):
                start = time.perf_counter()
                values[name] = fn(m)
                values[name + "_time"] = time.perf_counter() - start
            agree = values["matching"] == values["elimination"]
            all_agree &= agree
            for name in ("matching", "elimination"):
                rows.append({"algorithm": name, "size": size, "sample": i,
                             "seconds": f"{values[name + '_time']:.6f}", "agree": agree})
    out = open(args.output, "w", newline="") if args.output and args.output != "-" else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=["algorithm", "size", "sample", "seconds", "agree"])
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0 if all_agree else 1


def cmd_pfaffian(args) -> int:
    text = sys.stdin.read() if args.matrix == "-" else Path(args.matrix).read_text()
    m = Matrix.from_json(json.loads(text))
    pf = pfaffian(m, verify=args.verify)
    d = det(m)
    enc = (lambda x: x.to_json()) if isinstance(pf, MultiPoly) else (lambda x: m.field.format_scalar(x))
    out = {"pfaffian": enc(pf), "det": enc(d), "square_check": pf * pf == d}
    _write(json.dumps(out) + "\n", args.output)
    return 0 if out["square_check"] else 1


def _config_from_args(args) -> CampaignConfig:
    data = load_config_file(args.config) if getattr(args, "config", None) else {}
    for name in ("n", "d", "field", "seed", "samples", "output", "input"):
        value = getattr(args, name, None)
        if value is not None:
            data[name] = value
    if getattr(args, "checks", None):
        data["checks"] = [c.strip() for c in args.checks.split(",") if c.strip()]
    if getattr(args, "kind", None):
        data["kinds"] = [k.strip() for k in args.kind.split(",") if k.strip()]
    return CampaignConfig(**data)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symspec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def campaign_flags(p):
        p.add_argument("--config", help="JSON file with campaign fields; flags override it")
        p.add_argument("--n", type=int)
        p.add_argument("--d", type=int)
        p.add_argument("--field", help="q or fp:<p>")
        p.add_argument("--seed", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--kind", help=f"comma list from {','.join(SAMPLER_KINDS)}")
        p.add_argument("--output", help="report path (default: stdout)")

    p = sub.add_parser("verify", help="run seeded check families")
    campaign_flags(p)
    p.add_argument("--checks", help=f"comma list from {','.join(FAMILIES)} (or 'deligne')")
    p.add_argument("--input", help="commuting-tuple JSON from `symspec sample`")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="dump seeded commuting tuples as JSON")
    campaign_flags(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("bench", help="time matching vs elimination Pfaffians, CSV out")
    p.add_argument("--field", default="q")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=3)
    p.add_argument("--sizes", default="4,6,8,10,12")
    p.add_argument("--output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("pfaffian", help="Pfaffian and determinant of a matrix JSON")
    p.add_argument("matrix", help="path to matrix JSON, or - for stdin")
    p.add_argument("--verify", action="store_true", help="run both algorithms and compare")
    p.add_argument("--output")
    p.set_defaults(func=cmd_pfaffian)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
