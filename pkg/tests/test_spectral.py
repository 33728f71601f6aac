import random

import pytest
from hypothesis import given, settings, strategies as st

from symspec.linalg import Matrix, conjugate
from symspec.rings import PolyRing
from symspec.spectral import (
    InvariantElement, MonomialCache, MultiIndex, ParityError, block_ring, cartan_round_trip, chevalley_restrict,
    deligne_det_eval, elementary_symmetric_in_squares, eval_at_matrices, express_in_psi, multi_indices, phi,
    polarize, psi, psi_invariant, psi_poly, round_trip_check, source_ring, spectral_eval, spectral_eval_pure,
    weyl_transform,
)
from symspec.symplectic import (
    CartanPoint, CommutingTuple, WeylElement, cartan_embed, random_cartan_point, random_symplectic,
    sample_commuting, standard_space, symplectic_inverse, weyl_act,
)

from conftest import F101, F1009, QQ

FIELDS = [QQ, F101, F1009]


def cartan_value(inv: InvariantElement, pt: CartanPoint):
    """Oracle: evaluate the invariant polynomial at X{j}_{i} = b_j(y_i)."""
    values = {f"X{j + 1}_{i + 1}": pt.b[i][j] for j in range(pt.n) for i in range(pt.d)}
    return inv.to_poly().eval(values)


def random_invariant(rng, n, d, field, max_block=2, terms=3):
    inv = InvariantElement(n, d, field)
    for _ in range(terms):
        blocks = []
        for _ in range(n):
            deg = 2 * rng.randint(0, max_block // 2 + (max_block % 2))
            b = [0] * d
            for _ in range(deg):
                b[rng.randrange(d)] += 1
            blocks.append(b)
        inv = inv + InvariantElement.orbit_sum(blocks, field, rng.randint(-3, 3))
    return inv


def test_multi_indices():
    assert [m.a for m in multi_indices(1, 4)] == [(0,), (1,), (2,), (3,), (4,)]
    assert len(multi_indices(2, 2, parity=0)) == 4
    assert all(m.parity == 1 for m in multi_indices(3, 5, parity=1))
    with pytest.raises(ValueError):
        MultiIndex((1, -1))


def test_phi_psi_examples():
    sp = standard_space(2, QQ)
    pt = CartanPoint(((2, 3),))
    tup = cartan_embed(sp, pt)
    assert phi((2,), tup) == 26 == psi((2,), pt)
    assert phi((0,), tup) == 4 == psi((0,), pt)
    assert phi((3,), tup) == 0 == psi((3,), pt)
    pt2 = CartanPoint(((1, 2), (3, 4)))
    assert psi((1, 1), pt2) == 2 * (3 + 8) == 22
    assert chevalley_restrict((1, 1), pt2, sp) == 22
    for n in (1, 2, 3):
        assert phi((0, 0), cartan_embed(standard_space(n, QQ), random_cartan_point(n, 2, random.Random(n)))) == 2 * n


def test_phi_rejects_mismatched_input():
    sp = standard_space(1, QQ)
    tup = cartan_embed(sp, CartanPoint(((1,),)))
    with pytest.raises(ValueError):
        phi((1, 1), tup)
    mixed = CommutingTuple(sp, (sp.identity(),))
    with pytest.raises(ValueError):
        phi((2,), mixed)


def test_parity_error_on_odd_trace():
    sp = standard_space(1, QQ)
    # CommutingTuple validation would reject this, so bypass it to reach the odd-trace guard
    tup = CommutingTuple(sp, (Matrix([[1, 0], [0, -1]], QQ),))
    assert phi((3,), tup) == 0
    fake = CommutingTuple.__new__(CommutingTuple)
    object.__setattr__(fake, "space", sp)
    object.__setattr__(fake, "xs", (Matrix([[1, 0], [0, 0]], QQ),))
    object.__setattr__(fake, "parity", ("in_g",))
    with pytest.raises(ParityError):
        phi((1,), fake)


@pytest.mark.parametrize("field", FIELDS, ids=str)
def test_odd_traces_vanish(field):
    for n in (1, 2, 3):
        sp = standard_space(n, field)
        for kind in ("conjugated_cartan", "single_generator", "nilpotent"):
            tup = sample_commuting(sp, 2, 31 + n, kind)
            cache = MonomialCache(tup.xs)
            for a in multi_indices(2, 5, parity=1):
                assert phi(a, tup, cache) == 0


@given(st.integers(0, 2 ** 32), st.integers(1, 3), st.integers(1, 3))
def test_psi_is_weyl_invariant(seed, n, d):
    rng = random.Random(seed)
    pt = random_cartan_point(n, d, rng)
    w = WeylElement.random(n, rng)
    for a in multi_indices(d, 4, parity=0):
        assert psi(a, weyl_act(w, pt)) == psi(a, pt)


def test_eval_at_matrices_keeps_extra_variables():
    x = Matrix.diag([1, 2], QQ)
    ring = PolyRing(QQ, ("t", "X1"))
    t, x1 = ring.gens
    m = eval_at_matrices(t - x1, [x])
    assert m[0, 0] == t.ring.gen("t") - 1
    with pytest.raises(ValueError):
        eval_at_matrices(source_ring(QQ, 2).gen("X2"), [x])


def test_spectral_eval_pure_examples():
    sp = standard_space(2, QQ)
    tup = cartan_embed(sp, CartanPoint(((2, 3), (1, -1))))
    ring = source_ring(QQ, 2)
    x1, x2 = ring.gens
    assert spectral_eval_pure(ring.one, tup) == 1
    assert spectral_eval_pure(x1 * x1, tup) == 36
    assert spectral_eval_pure(x1 * x2, tup) == (2 * 1) * (3 * -1)
    assert spectral_eval_pure(ring.zero, tup) == 0
    with pytest.raises(ValueError):
        spectral_eval_pure(x1, tup)


def test_polarize_small_cases():
    ring = source_ring(QQ, 1)
    x = ring.gen("X1")
    inv1 = InvariantElement.orbit_sum([(4,)], QQ, 3)
    combo = polarize(inv1)
    assert combo.pairs == ((QQ(3), x ** 4),)
    inv2 = InvariantElement.orbit_sum([(2,), (0,)], QQ)
    combo2 = dict((q, c) for c, q in polarize(inv2).pairs)
    assert combo2 == {x ** 2 + 1: 1, x ** 2: -1, ring.one: -1}
    assert polarize(inv2).expand() == inv2.to_poly()
    with pytest.raises(ValueError):
        polarize(InvariantElement.orbit_sum([(2,)] * 4, F101.__class__.parse("fp:3")))


@settings(max_examples=50)
@given(st.integers(0, 2 ** 32), st.integers(1, 3), st.integers(1, 2), st.sampled_from([QQ, F101]))
def test_polarization_reexpands(seed, n, d, field):
    inv = random_invariant(random.Random(seed), n, d, field)
    assert polarize(inv).expand() == inv.to_poly()


def test_invariant_element_basics():
    inv = InvariantElement.orbit_sum([(2, 0), (0, 2)], QQ)
    p = inv.to_poly()
    r = block_ring(QQ, 2, 2)
    assert p == r.gen("X1_1") ** 2 * r.gen("X2_2") ** 2 + r.gen("X2_1") ** 2 * r.gen("X1_2") ** 2
    assert inv.is_invariant()
    assert InvariantElement.from_poly(p, 2, 2) == inv
    assert inv - inv == InvariantElement(2, 2, QQ)
    with pytest.raises(ValueError):
        InvariantElement.orbit_sum([(1, 0), (1, 0)], QQ)
    odd = block_ring(QQ, 2, 1).gen("X1_1")
    with pytest.raises(ValueError):
        InvariantElement.from_poly(odd, 2, 1)
    w = WeylElement((-1, 1), (1, 0))
    assert weyl_transform(p, 2, 2, w) == p
    assert psi_invariant((1, 1), 2, QQ).to_poly() == psi_poly((1, 1), 2, QQ)


@pytest.mark.parametrize("field", FIELDS, ids=str)
def test_spectral_eval_on_cartan_matches_polynomial(field):
    rng = random.Random(41)
    for _ in range(15):
        n, d = rng.randint(1, 3), rng.randint(1, 2)
        if field.characteristic and field.characteristic <= 2 * n:
            continue
        sp = standard_space(n, field)
        pt = random_cartan_point(n, d, rng)
        inv = random_invariant(rng, n, d, field)
        tup = cartan_embed(sp, pt)
        expected = cartan_value(inv, pt)
        assert spectral_eval(inv, tup) == expected
        # G-invariance: the conjugated tuple gives the same value
        g = random_symplectic(sp, rng)
        g_inv = symplectic_inverse(sp, g)
        moved = CommutingTuple(sp, tuple(conjugate(g, x, g_inv) for x in tup.xs))
        assert spectral_eval(inv, moved) == expected


def test_spectral_eval_linearity_and_constants():
    rng = random.Random(42)
    sp = standard_space(2, QQ)
    tup = sample_commuting(sp, 2, 5, "single_generator")
    assert spectral_eval(InvariantElement.constant(2, 2, QQ), tup) == 1
    for _ in range(10):
        u = random_invariant(rng, 2, 2, QQ)
        v = random_invariant(rng, 2, 2, QQ)
        c = rng.randint(-3, 3)
        assert spectral_eval(u + v * c, tup) == spectral_eval(u, tup) + c * spectral_eval(v, tup)


def test_spectral_eval_homogeneity():
    # an orbit sum whose blocks have total degree k scales by c^k when the tuple scales by c
    sp = standard_space(2, QQ)
    tup = sample_commuting(sp, 1, 9, "conjugated_cartan")
    inv = InvariantElement.orbit_sum([(2,), (4,)], QQ)
    scaled = CommutingTuple(sp, tuple(x * 3 for x in tup.xs))
    assert spectral_eval(inv, scaled) == QQ(3) ** 6 * spectral_eval(inv, tup)


def test_round_trip_examples():
    sp = standard_space(2, QQ)
    pt = CartanPoint(((2, 3),))
    report = round_trip_check((2,), cartan_embed(sp, pt))
    assert report.trace == report.charpoly_route == report.pfaffian_route == 26
    assert report.passed
    assert cartan_round_trip((2,), pt, sp) == (26, 26)
    report0 = round_trip_check((0,), cartan_embed(sp, pt))
    assert report0.pfaffian_route == 4
    with pytest.raises(ParityError):
        round_trip_check((1,), cartan_embed(sp, pt))


@pytest.mark.parametrize("field", FIELDS, ids=str)
@pytest.mark.parametrize("kind", ["conjugated_cartan", "single_generator", "nilpotent"])
def test_round_trip_and_polarization_agree(field, kind):
    for n in (1, 2):
        sp = standard_space(n, field)
        tup = sample_commuting(sp, 2, 43, kind)
        cache = MonomialCache(tup.xs)
        for a in multi_indices(2, 4, parity=0):
            report = round_trip_check(a, tup, cache=cache)
            assert report.passed
            assert report.pfaffian_route == round_trip_check(a, tup, method="interpolate").pfaffian_route
            assert spectral_eval(psi_invariant(a, n, field), tup, cache=cache) == report.trace


def test_deligne_examples():
    ring = PolyRing(QQ, ("t", "X1"))
    t, x1 = ring.gens
    value = deligne_det_eval(t - x1, [Matrix.diag([1, 2], QQ)])
    tt = PolyRing(QQ, ("t",)).gen("t")
    assert value == (tt - 1) * (tt - 2)
    with pytest.raises(ValueError):
        deligne_det_eval(x1, [Matrix.diag([1, 2], QQ), Matrix([[0, 1], [0, 0]], QQ)])
    sp = standard_space(2, QQ)
    tup = sample_commuting(sp, 2, 3, "conjugated_cartan")
    src = source_ring(QQ, 2)
    x1, x2 = src.gens
    q = x1 * x1 + x1 * x2 * 2 - 3
    assert deligne_det_eval(q, tup.xs) == spectral_eval_pure(q, tup) ** 2


def test_express_elementary_symmetric():
    for n in (1, 2, 3):
        for k in range(1, n + 1):
            target = elementary_symmetric_in_squares(k, n, QQ)
            combo = express_in_psi(target, n, 1)
            assert combo is not None
            rebuilt = block_ring(QQ, n, 1).zero
            for c, prod in combo:
                term = block_ring(QQ, n, 1).one
                for a in prod:
                    term = term * psi_poly(a, n, QQ)
                rebuilt = rebuilt + term * c
            assert rebuilt == target
    e1 = express_in_psi(elementary_symmetric_in_squares(1, 2, QQ), 2, 1)
    assert e1 == [(QQ(1) / 2, ((2,),))]


@pytest.mark.parametrize("field", [QQ, F1009], ids=str)
def test_express_mixed_orbit_sums(field):
    n, d = 2, 2
    for blocks in ([(2, 0), (0, 2)], [(1, 1), (1, 1)], [(2, 2), (0, 0)], [(1, 1), (2, 0)]):
        target = InvariantElement.orbit_sum(blocks, field).to_poly()
        combo = express_in_psi(target, n, d)
        assert combo is not None
        rebuilt = block_ring(field, n, d).zero
        for c, prod in combo:
            term = block_ring(field, n, d).one
            for a in prod:
                term = term * psi_poly(a, n, field)
            rebuilt = rebuilt + term * c
        assert rebuilt == target


def test_express_rejects_non_invariant():
    x = block_ring(QQ, 2, 1).gen("X1_1")
    assert express_in_psi(x * x, 2, 1) is None


@given(st.integers(0, 2 ** 32), st.integers(1, 3), st.integers(-4, 4))
def test_pure_eval_is_homogeneous_of_degree_n(seed, n, c):
    rng = random.Random(seed)
    sp = standard_space(n, QQ)
    tup = sample_commuting(sp, 2, rng, rng.choice(["conjugated_cartan", "single_generator"]))
    x1, x2 = source_ring(QQ, 2).gens
    q = x1 * x1 * rng.randint(-2, 2) + x1 * x2 * rng.randint(-2, 2) + rng.randint(-2, 2)
    assert spectral_eval_pure(q * c, tup) == QQ(c) ** n * spectral_eval_pure(q, tup)
