"""Acceptance criteria, each at its stated sample counts and time budget.

All arithmetic is exact, so every identity is checked for equality. Each test
appends one PASS/FAIL line that is printed in the terminal summary.
"""

import functools
import time

import pytest

from symspec.checks import run_grid
from symspec.rings import FieldSpec
from symspec.symplectic import SAMPLER_KINDS

pytestmark = pytest.mark.acceptance

QQ = FieldSpec("q")
F101 = FieldSpec("fp", 101)
F1009 = FieldSpec("fp", 1009)
SEED = 0


@functools.lru_cache(maxsize=None)
def timed_grid(family, ns, ds, fields, samples, kinds=SAMPLER_KINDS):
    start = time.perf_counter()
    results = run_grid(family, ns, ds, fields, samples, seed=SEED, kinds=kinds)
    return results, time.perf_counter() - start


def grids(*specs):
    results, elapsed = [], 0.0
    for spec in specs:
        r, t = timed_grid(*spec)
        results.extend(r)
        elapsed += t
    return results, elapsed


def report(log, number, title, results, elapsed, limit, expected=None, extra_ok=True, detail=None):
    failed = [r for r in results if not r.passed]
    count_ok = expected is None or len(results) == expected
    ok = not failed and elapsed < limit and count_ok and extra_ok
    detail = detail or (f"{len(results) - len(failed)}/{len(results)} exact, "
                        f"{elapsed:.1f}s (limit {limit:.0f}s)")
    line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}"
    log.append(line)
    print(line)
    assert count_ok, f"expected {expected} samples, ran {len(results)}"
    assert not failed, f"first failure: {failed[0]}"
    assert elapsed < limit, f"took {elapsed:.1f}s"
    assert extra_ok


C1 = [("pfaffian_square", (1, 2, 3, 4), (1,), (QQ, F101), 200)]
C2 = [("norm_square", (1, 2, 3, 4), (1,), (QQ,), 200)]
C3 = [("multiplicativity", (1, 2, 3), (1,), (QQ, F101, F1009), 100)]
C7 = [("roundtrip", (1, 2, 3), (1, 2, 3), (QQ, F101, F1009), 100)]


def test_criterion_01_pfaffian_square(acceptance_log):
    results, elapsed = grids(*C1)
    report(acceptance_log, 1, "Pf(m)^2 = det(m), 2n in {2,4,6,8}, Q and F101", results, elapsed, 60,
           expected=200 * 4 * 2)


def test_criterion_02_norm_square(acceptance_log):
    results, elapsed = grids(*C2)
    report(acceptance_log, 2, "det(x) = N+(x)^2 on g+, n <= 4", results, elapsed, 60, expected=200 * 4)


def test_criterion_03_multiplicativity(acceptance_log):
    results, elapsed = grids(*C3)
    degenerate = sum(1 for r in results if r.witness.get("degenerate"))
    report(acceptance_log, 3, f"N+(xy) = N+(x)N+(y), {degenerate} degenerate pairs", results, elapsed, 120,
           expected=100 * 3 * 3 * 3, extra_ok=degenerate >= 100 * 3 * 3)


def test_criterion_04_polynomial_multiplicativity(acceptance_log):
    results, elapsed = grids(("poly_multiplicativity", (1, 2, 3), (1,), (QQ,), 25))
    bounds = all(r.witness.get("degree_and_top_coefficients") for r in results)
    report(acceptance_log, 4, "N+((1+ax)(1+by)) factors in k[a,b], degree and top coefficients",
           results, elapsed, 120, expected=25 * 3 * 3, extra_ok=bounds)


def test_criterion_05_parity_vanishing(acceptance_log):
    results, elapsed = grids(("parity", (1, 2, 3), (1, 2, 3), (QQ, F101, F1009), 50))
    report(acceptance_log, 5, "phi_a = 0 for odd |a| <= 5", results, elapsed, 60, expected=50 * 3 * 27)


def test_criterion_06_chevalley_restriction(acceptance_log):
    results, elapsed = grids(("chevalley", (1, 2, 3), (1, 2, 3), (QQ,), 100))
    report(acceptance_log, 6, "c(phi_a) = psi_a for even |a| <= 6, n, d <= 3", results, elapsed, 60,
           expected=100 * 9)


def test_criterion_07_round_trip(acceptance_log):
    results, elapsed = grids(*C7)
    report(acceptance_log, 7, "trace = charpoly route = Pfaffian route, even |a| <= 6", results, elapsed, 300,
           expected=100 * 3 * 27)


def test_criterion_08_pf_charpoly_square(acceptance_log):
    results, elapsed = grids(("pf_charpoly", (1, 2, 3), (1,), (QQ,), 50))
    report(acceptance_log, 8, "N+(tI - m)^2 = det(tI - m) on g+, n <= 3", results, elapsed, 120,
           expected=50 * 3)


def test_criterion_09_polarization(acceptance_log):
    # same (seed, n, d, field, kind) grid as criterion 7, so the same tuples; every field has p > n
    results, elapsed = grids(("polarization", (1, 2, 3), (1, 2, 3), (QQ, F101, F1009), 100))
    report(acceptance_log, 9, "polarized spectral_eval = coefficient route on criterion-7 tuples",
           results, elapsed, 180, expected=100 * 3 * 27)


def test_criterion_10_deligne(acceptance_log):
    results, elapsed = grids(("deligne_gl", (1, 2, 3), (1, 2, 3), (QQ,), 100),
                             ("deligne_symplectic", (1, 2, 3), (1, 2, 3), (QQ,), 20))
    report(acceptance_log, 10, "det(q1 q2) multiplicative on GL tuples, det = N+^2 on symplectic tuples",
           results, elapsed, 120, expected=100 * 9 + 20 * 27)


def test_criterion_11_pfaffian_routes_agree(acceptance_log):
    # reuses the cached results of criteria 1-3; every Pfaffian there ran with verify=True
    results, _ = grids(*C1, *C2, *C3)
    mismatches = [r for r in results if "PfaffianMismatch" in str(r.witness.get("error", ""))]
    agreed = all(r.witness.get("pf_routes_agree") for r in results if r.passed)
    report(acceptance_log, 11, "matching = elimination on every field input of criteria 1-3",
           mismatches, 0.0, float("inf"), extra_ok=agreed and len(results) == 1600 + 800 + 2700,
           detail=f"{len(mismatches)} mismatches over {len(results)} verified samples, no extra runtime")
