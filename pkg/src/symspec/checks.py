"""Seeded check families. Each sample yields one :class:`CheckResult`.

A family is a function ``(SampleSpec, tuple | None) -> CheckResult``. Families
that consume a commuting tuple get it either from a sampler or from a dump.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import asdict, dataclass, field as dc_field
from typing import Callable

from .linalg import Matrix, char_poly, det, trace
from .pfaffian import PfaffianMismatch, pf_char_poly, pfaffian, random_antisymmetric
from .rings import FieldSpec, MultiPoly, PolyRing
from .spectral import (
    MonomialCache, ParityError, chevalley_restrict, deligne_det_eval, multi_indices, phi, polarized_psi,
    psi, psi_invariant, round_trip_check, source_ring, spectral_eval, spectral_eval_pure,
)
from .symplectic import (
    SAMPLER_KINDS, CommutingTuple, WeylElement, random_cartan_point, random_gplus,
    sample_commuting, sample_gplus_pair, standard_space, weyl_act,
)

PRNG_NAME = "MT19937 (Python random.Random), per-sample seeds from SHA-256"


def derive_seed(*labels) -> int:
    digest = hashlib.sha256(":".join(str(x) for x in labels).encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@dataclass(frozen=True)
class SampleSpec:
    family: str
    n: int
    d: int
    field: FieldSpec
    kind: str
    seed: int
    index: int


@dataclass
class CheckResult:
    check_id: str
    paper_ref: str
    n: int
    d: int
    field: str
    seed: int
    kind: str
    passed: bool
    lhs: object
    rhs: object
    witness: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        out = asdict(self)
        out["seed"] = str(self.seed)
        out["pass"] = out.pop("passed")
        return out


def fmt(x):
    if isinstance(x, MultiPoly):
        return x.to_json()
    if isinstance(x, (list, tuple)):
        return [fmt(v) for v in x]
    return str(x)


def _result(spec: SampleSpec, identity: str, passed: bool, lhs, rhs, **witness) -> CheckResult:
    return CheckResult(spec.family, identity, spec.n, spec.d, str(spec.field), spec.seed,
                       spec.kind, bool(passed), fmt(lhs), fmt(rhs), witness)


# -- families without tuples ------------------------------------------------------------


def pfaffian_square(spec: SampleSpec, _tup=None) -> CheckResult:
    rng = random.Random(spec.seed)
    m = random_antisymmetric(spec.field, 2 * spec.n, rng)
    pf = pfaffian(m, verify=True)
    det_m = det(m)
    return _result(spec, "Pf(m)^2 = det(m)", pf * pf == det_m, pf * pf, det_m,
                   pfaffian=str(pf), pf_routes_agree=True)


def norm_square(spec: SampleSpec, _tup=None) -> CheckResult:
    space = standard_space(spec.n, spec.field)
    x = random_gplus(space, random.Random(spec.seed))
    nx = space.pfaffian_norm(x, verify=True)
    det_x = det(x)
    return _result(spec, "det(x) = N+(x)^2", nx * nx == det_x, nx * nx, det_x,
                   norm=str(nx), pf_routes_agree=True)


def multiplicativity(spec: SampleSpec, _tup=None) -> CheckResult:
    space = standard_space(spec.n, spec.field)
    x, y = sample_gplus_pair(space, random.Random(spec.seed), spec.kind)
    xy = x @ y
    if not space.in_gplus(xy):
        return _result(spec, "N+(xy) = N+(x) N+(y)", False, "xy not in g+", "", error="closure")
    lhs = space.pfaffian_norm(xy, verify=True)
    nx = space.pfaffian_norm(x, verify=True)
    ny = space.pfaffian_norm(y, verify=True)
    return _result(spec, "N+(xy) = N+(x) N+(y)", lhs == nx * ny, lhs, nx * ny,
                   n_x=str(nx), n_y=str(ny), degenerate=not lhs, pf_routes_agree=True)


def poly_multiplicativity(spec: SampleSpec, _tup=None) -> CheckResult:
    """P_xy = P_x P_y in k[alpha, beta] plus the degree and top-coefficient claims."""
    space = standard_space(spec.n, spec.field)
    x, y = sample_gplus_pair(space, random.Random(spec.seed), spec.kind)
    ring = PolyRing(spec.field, ("alpha", "beta"))
    alpha, beta = ring.gens
    ident = Matrix.identity(space.dim, ring)
    ax = ident + x * alpha
    by = ident + y * beta
    p_x = space.pfaffian_norm(ax)
    p_y = space.pfaffian_norm(by)
    p_xy = space.pfaffian_norm(ax @ by)
    n = space.n
    nx, ny = space.pfaffian_norm(x), space.pfaffian_norm(y)
    bounds = (
        p_x.degree("alpha") <= n and p_x.degree("beta") <= 0
        and p_y.degree("beta") <= n and p_y.degree("alpha") <= 0
        and p_xy.degree("alpha") <= n and p_xy.degree("beta") <= n
        and p_x.coeff({"alpha": n}) == nx
        and p_y.coeff({"beta": n}) == ny
        and p_xy.coeff({"alpha": n, "beta": n}) == space.pfaffian_norm(x @ y)
        and p_x.constant_term() == 1 and p_y.constant_term() == 1 and p_xy.constant_term() == 1
    )
    product = p_x * p_y
    return _result(spec, "N+((1+ax)(1+by)) = N+(1+ax) N+(1+by)", p_xy == product and bounds,
                   p_xy, product, degree_and_top_coefficients=bounds)


def pf_charpoly_square(spec: SampleSpec, _tup=None) -> CheckResult:
    space = standard_space(spec.n, spec.field)
    m = random_gplus(space, random.Random(spec.seed))
    q = pf_char_poly(space, m)
    q_interp = pf_char_poly(space, m, method="interpolate")
    cp = char_poly(m)
    half_trace = -trace(m) / spec.field(2)
    top = q.coeff({"t": space.n - 1})
    ok = q * q == cp and q == q_interp and top == half_trace and q.coeff({"t": space.n}) == 1
    return _result(spec, "N+(tI - m)^2 = det(tI - m)", ok, q * q, cp,
                   routes_agree=q == q_interp, next_to_top=str(top))


def chevalley(spec: SampleSpec, _tup=None) -> CheckResult:
    """c(phi_a) = psi_a on a Cartan point, every even |a| <= 6, plus W-invariance of psi."""
    space = standard_space(spec.n, spec.field)
    rng = random.Random(spec.seed)
    pt = random_cartan_point(spec.n, spec.d, rng)
    moved = [weyl_act(w, pt) for w in WeylElement.generators(spec.n)]
    moved.append(weyl_act(WeylElement.random(spec.n, rng), pt))
    lhs, rhs, bad = [], [], []
    for a in multi_indices(spec.d, 6, parity=0):
        c = chevalley_restrict(a, pt, space)
        p = psi(a, pt, spec.field)
        lhs.append(c)
        rhs.append(p)
        if c != p or any(psi(a, q, spec.field) != p for q in moved):
            bad.append(list(a.a))
    return _result(spec, "psi_a = c(phi_a)", not bad, lhs, rhs, point=fmt(pt.b), failures=bad)


def _random_s_poly(ring: PolyRing, rng: random.Random, max_degree: int, even: bool) -> MultiPoly:
    d = ring.nvars
    out = ring.zero
    for _ in range(rng.randint(1, 3)):
        deg = rng.choice([k for k in range(max_degree + 1) if not even or k % 2 == 0])
        e = [0] * d
        for _ in range(deg):
            e[rng.randrange(d)] += 1
        out = out + ring.monomial(e, rng.choice([-2, -1, 1, 2, 3]))
    return out if out else ring.one


def deligne_gl(spec: SampleSpec, _tup=None) -> CheckResult:
    """det(q1 q2 (x)) = det(q1(x)) det(q2(x)) for commuting matrices in gl."""
    rng = random.Random(spec.seed)
    size = 2 * spec.n
    base = Matrix([[rng.randint(-2, 2) for _ in range(size)] for _ in range(size)], spec.field)
    powers = [Matrix.identity(size, spec.field), base, base @ base]
    xs = []
    for _ in range(spec.d):
        m = Matrix.zeros(size, spec.field)
        for p in powers:
            m = m + p * rng.randint(-2, 2)
        xs.append(m)
    ring = source_ring(spec.field, spec.d)
    q1 = _random_s_poly(ring, rng, 2, even=False)
    q2 = _random_s_poly(ring, rng, 2, even=False)
    lhs = deligne_det_eval(q1 * q2, xs)
    rhs = deligne_det_eval(q1, xs) * deligne_det_eval(q2, xs)
    return _result(spec, "det(p(q1 q2)) = det(p(q1)) det(p(q2))", lhs == rhs, lhs, rhs,
                   q1=str(q1), q2=str(q2))


# -- families on commuting tuples ----------------------------------------------------------


def sample_tuple(spec: SampleSpec) -> CommutingTuple:
    space = standard_space(spec.n, spec.field)
    return sample_commuting(space, spec.d, random.Random(spec.seed), spec.kind)


def parity(spec: SampleSpec, tup: CommutingTuple) -> CheckResult:
    cache = MonomialCache(tup.xs)
    values, bad = [], []
    for a in multi_indices(tup.d, 5, parity=1):
        try:
            values.append(phi(a, tup, cache))
        except ParityError as exc:
            bad.append([list(a.a), str(exc)])
    return _result(spec, "phi_a = 0 for odd |a|", not bad, values, [0] * len(values), failures=bad)


def roundtrip(spec: SampleSpec, tup: CommutingTuple) -> CheckResult:
    cache = MonomialCache(tup.xs)
    traces, pf_route, bad = [], [], []
    for a in multi_indices(tup.d, 6, parity=0):
        report = round_trip_check(a, tup, cache=cache)
        traces.append(report.trace)
        pf_route.append(report.pfaffian_route)
        if not report.passed:
            bad.append({"a": list(a.a), "trace": str(report.trace),
                        "charpoly": str(report.charpoly_route), "pfaffian": str(report.pfaffian_route)})
    return _result(spec, "s(psi_a) = phi_a", not bad, traces, pf_route,
                   indices=len(traces), failures=bad)


def polarization(spec: SampleSpec, tup: CommutingTuple) -> CheckResult:
    """spectral_eval through pure powers against the Pfaffian char-poly coefficient."""
    cache = MonomialCache(tup.xs)
    space = tup.space
    n = space.n
    via_polar, via_coeff, bad = [], [], []
    for a in multi_indices(tup.d, 6, parity=0):
        combo = polarized_psi(a.a, n, space.field)
        s_val = spectral_eval(psi_invariant(a, n, space.field), tup, combo=combo, cache=cache)
        coeff = -2 * pf_char_poly(space, cache.monomial(a.a)).coeff({"t": n - 1})
        via_polar.append(s_val)
        via_coeff.append(coeff)
        if s_val != coeff:
            bad.append(list(a.a))
    return _result(spec, "s(beta(q^n)) = N+(p(q)) via polarization", not bad, via_polar, via_coeff,
                   failures=bad)


def deligne_symplectic(spec: SampleSpec, tup: CommutingTuple) -> CheckResult:
    """det(q(x)) = N+(q(x))^2 for even q."""
    rng = random.Random(derive_seed(spec.seed, "q"))
    ring = source_ring(tup.space.field, tup.d)
    q = _random_s_poly(ring, rng, 4, even=True)
    lhs = deligne_det_eval(q, tup.xs)
    norm = spectral_eval_pure(q, tup)
    return _result(spec, "det(p(q)) = N+(p(q))^2", lhs == norm * norm, lhs, norm * norm, q=str(q))


# -- registry ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class Family:
    name: str
    run: Callable
    needs_tuple: bool
    uses_kind: bool
    uses_d: bool
    min_char: Callable[[int], int] = lambda n: 2 * n


FAMILIES = {
    f.name: f
    for f in (
        Family("pfaffian_square", pfaffian_square, False, False, False, lambda n: 2),
        Family("norm_square", norm_square, False, False, False),
        Family("multiplicativity", multiplicativity, False, True, False),
        Family("poly_multiplicativity", poly_multiplicativity, False, True, False),
        Family("pf_charpoly", pf_charpoly_square, False, False, False),
        Family("chevalley", chevalley, False, False, True),
        Family("deligne_gl", deligne_gl, False, False, True, lambda n: 2),
        Family("parity", parity, True, True, True),
        Family("roundtrip", roundtrip, True, True, True),
        Family("polarization", polarization, True, True, True),
        Family("deligne_symplectic", deligne_symplectic, True, True, True),
    )
}

ALIASES = {"deligne": ("deligne_gl", "deligne_symplectic")}


def resolve_families(names) -> list[str]:
    out = []
    for name in names:
        for real in ALIASES.get(name, (name,)):
            if real not in FAMILIES:
                raise KeyError(f"unknown check family {name!r}; known: {sorted(FAMILIES) + sorted(ALIASES)}")
            if real not in out:
                out.append(real)
    return out


def sample_specs(family: str, n: int, d: int, field: FieldSpec, seed: int, samples: int,
                 kinds=SAMPLER_KINDS) -> list[SampleSpec]:
    fam = FAMILIES[family]
    kinds = kinds if fam.uses_kind else ("-",)
    d_eff = d if fam.uses_d else 1
    specs = []
    for kind in kinds:
        for i in range(samples):
            # tuple families share seeds so every tuple check sees the same tuples
            label = "tuple" if fam.needs_tuple else family
            s = derive_seed(seed, label, n, d_eff, field, kind, i)
            specs.append(SampleSpec(family, n, d_eff, field, kind, s, i))
    return specs


def run_spec(spec: SampleSpec, tup: CommutingTuple | None = None) -> CheckResult:
    fam = FAMILIES[spec.family]
    try:
        if fam.needs_tuple:
            return fam.run(spec, tup if tup is not None else sample_tuple(spec))
        return fam.run(spec, None)
    except (PfaffianMismatch, ParityError, ArithmeticError, ValueError) as exc:
        return _result(spec, spec.family, False, "error", "", error=f"{type(exc).__name__}: {exc}")


def field_allows(family: str, n: int, field: FieldSpec) -> bool:
    p = field.characteristic
    if not p:
        return True
    bound = FAMILIES[family].min_char(n)
    if family == "polarization":
        bound = max(bound, n)
    return p > bound


def run_grid(family: str, ns, ds, fields, samples: int, seed: int = 0, kinds=SAMPLER_KINDS) -> list[CheckResult]:
    """Every (n, d, field) combination the family accepts, ``samples`` per sampler kind."""
    results = []
    d_values = ds if FAMILIES[family].uses_d else (1,)
    for field in fields:
        for n in ns:
            if not field_allows(family, n, field):
                continue
            for d in d_values:
                for spec in sample_specs(family, n, d, field, seed, samples, kinds):
                    results.append(run_spec(spec))
    return results
