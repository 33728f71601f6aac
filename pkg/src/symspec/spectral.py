"""Trace invariants, the Chevalley restriction on generators, and the spectral data map.

Polynomials on the tuple side live in ``S = k[X1, ..., Xd]``. Invariants on the
Cartan side are written in the variables ``X{j}_{i}`` (block j, tuple slot i),
which stand for the diagonal coordinate b_j of the i-th Cartan element.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .linalg import Matrix, berkowitz, commutes, det, solve, trace
from .pfaffian import pf_char_poly, pfaffian
from .rings import FieldSpec, MultiPoly, PolyRing
from .symplectic import CartanPoint, CommutingTuple, SymplecticSpace, cartan_embed


class ParityError(ArithmeticError):
    """A parity rule (odd traces vanish, even monomials land in g+) was violated."""


@dataclass(frozen=True)
class MultiIndex:
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        if any(x < 0 for x in self.a):
            raise ValueError(f"multi-index entries must be non-negative: {self.a}")

    @property
    def d(self) -> int:
        return len(self.a)

    @property
    def degree(self) -> int:
        return sum(self.a)

    @property
    def parity(self) -> int:
        return self.degree % 2

    def __iter__(self):
        return iter(self.a)


def _index(a) -> MultiIndex:
    return a if isinstance(a, MultiIndex) else MultiIndex(tuple(a))


def multi_indices(d: int, max_degree: int, parity: int | None = None) -> list[MultiIndex]:
    """All a in Z_{>=0}^d with |a| <= max_degree, optionally of a fixed parity."""
    out = []
    for a in itertools.product(range(max_degree + 1), repeat=d):
        if sum(a) <= max_degree and (parity is None or sum(a) % 2 == parity):
            out.append(MultiIndex(a))
    out.sort(key=lambda m: (m.degree, m.a))
    return out


def source_ring(field: FieldSpec, d: int) -> PolyRing:
    return PolyRing(field, tuple(f"X{i + 1}" for i in range(d)))


def block_ring(field: FieldSpec, n: int, d: int) -> PolyRing:
    return PolyRing(field, tuple(f"X{j + 1}_{i + 1}" for j in range(n) for i in range(d)))


# -- evaluating polynomials at commuting matrices ---------------------------------


class MonomialCache:
    """Caches x_1^a_1 ... x_d^a_d for one commuting tuple."""

    def __init__(self, xs: Sequence[Matrix]):
        self.xs = tuple(xs)
        self._powers = [[Matrix.identity(x.dim, x.ring)] for x in self.xs]
        self._monos: dict = {}

    def power(self, i: int, k: int) -> Matrix:
        table = self._powers[i]
        while len(table) <= k:
            table.append(table[-1] @ self.xs[i])
        return table[k]

    def monomial(self, a: Sequence[int]) -> Matrix:
        a = tuple(a)
        if a not in self._monos:
            m = None
            for i, k in enumerate(a):
                if k:
                    p = self.power(i, k)
                    m = p if m is None else m @ p
            if m is None:
                m = self.power(0, 0)
            self._monos[a] = m
        return self._monos[a]


def eval_at_matrices(q: MultiPoly, xs: Sequence[Matrix], cache: MonomialCache | None = None) -> Matrix:
    """Substitute X_i -> xs[i-1]; any other variables of ``q`` stay symbolic."""
    cache = cache or MonomialCache(xs)
    d = len(xs)
    names = q.ring.names
    slot = {}
    for pos, name in enumerate(names):
        if name.startswith("X") and name[1:].isdigit():
            i = int(name[1:])
            if not 1 <= i <= d:
                raise ValueError(f"variable {name} has no matrix (d={d})")
            slot[pos] = i - 1
    rest = tuple(n for pos, n in enumerate(names) if pos not in slot)
    rest_ring = PolyRing(q.field, rest) if rest else None
    grouped: dict = {}
    for e, c in q.terms.items():
        mexp = [0] * d
        cexp = []
        for pos, x in enumerate(e):
            if pos in slot:
                mexp[slot[pos]] += x
            else:
                cexp.append(x)
        mexp = tuple(mexp)
        if rest_ring is not None:
            c = MultiPoly(rest_ring, {tuple(cexp): c})
        grouped[mexp] = grouped[mexp] + c if mexp in grouped else c
    size = xs[0].dim
    ring = rest_ring if rest_ring is not None else xs[0].ring
    out = Matrix.zeros(size, ring)
    for mexp, c in grouped.items():
        if c:
            out = out + cache.monomial(mexp) * c
    return out


# -- trace generators -----------------------------------------------------------------


def phi(a, tup: CommutingTuple, cache: MonomialCache | None = None):
    """tr(x_1^a_1 ... x_d^a_d); the trace is computed even when |a| is odd and must vanish."""
    a = _index(a)
    if a.d != tup.d:
        raise ValueError(f"multi-index of length {a.d} for a {tup.d}-tuple")
    if not tup.all_in_g():
        raise ValueError("phi is defined on tuples of elements of g")
    cache = cache or MonomialCache(tup.xs)
    value = trace(cache.monomial(a.a))
    if a.parity and value:
        raise ParityError(f"odd trace {a.a} evaluated to {value}")
    return value


def psi(a, pt: CartanPoint, field: FieldSpec | None = None):
    """2 * sum_j prod_i b_j(y_i)^a_i for even |a|, zero for odd |a|."""
    a = _index(a)
    field = field or FieldSpec("q")
    if a.d != pt.d:
        raise ValueError(f"multi-index of length {a.d} for a point with d={pt.d}")
    if a.parity:
        return field.zero
    total = field.zero
    for j in range(pt.n):
        term = field.one
        for i, k in enumerate(a.a):
            if k:
                term = term * field(pt.b[i][j]) ** k
        total = total + term
    return 2 * total


def chevalley_restrict(a, pt: CartanPoint, space: SymplecticSpace):
    """phi evaluated on the Cartan embedding of ``pt``."""
    return phi(a, cartan_embed(space, pt))


# -- spectral data map -------------------------------------------------------------------


def _source_slots(q: MultiPoly, d: int) -> list[int]:
    slots = []
    for name in q.ring.names:
        if not (name.startswith("X") and name[1:].isdigit() and 1 <= int(name[1:]) <= d):
            raise ValueError(f"{name} is not a variable of k[X1..X{d}]")
        slots.append(int(name[1:]) - 1)
    return slots


def spectral_eval_pure(q: MultiPoly, tup: CommutingTuple, *, cache: MonomialCache | None = None,
                       verify: bool = False):
    """N+(q(x_1, ..., x_d)) for an even polynomial q."""
    if not q.is_even():
        raise ValueError(f"{q} has odd-degree terms")
    if not tup.all_in_g():
        raise ValueError("the spectral data map is evaluated on tuples in g")
    _source_slots(q, tup.d)
    m = eval_at_matrices(q, tup.xs, cache) if q.terms else Matrix.zeros(tup.space.dim, tup.space.field)
    space = tup.space
    if not space.in_gplus(m):
        raise ParityError("an even polynomial in elements of g did not land in g+")
    return pfaffian(space.apply_J(m), verify=verify) / space.pfJ


def _orbit_key(blocks: Iterable[Sequence[int]]) -> tuple:
    return tuple(sorted(tuple(b) for b in blocks))


class InvariantElement:
    """Linear combination of W-orbit sums of monomials in X{j}_{i}.

    ``terms`` maps a sorted tuple of n block exponent vectors to its coefficient;
    every block has even total degree, so sign flips act trivially.
    """

    __slots__ = ("n", "d", "field", "terms")

    def __init__(self, n: int, d: int, field: FieldSpec, terms: Mapping | None = None):
        self.n, self.d, self.field = n, d, field
        out = {}
        for key, c in (terms or {}).items():
            key = _orbit_key(key)
            if len(key) != n or any(len(b) != d for b in key):
                raise ValueError(f"orbit key {key} does not have shape {n}x{d}")
            if any(sum(b) % 2 for b in key):
                raise ValueError(f"orbit key {key} has a block of odd degree")
            c = field(c) + out.get(key, field.zero)
            if c:
                out[key] = c
            else:
                out.pop(key, None)
        self.terms = out

    @classmethod
    def orbit_sum(cls, blocks: Sequence[Sequence[int]], field: FieldSpec, coeff=1) -> "InvariantElement":
        blocks = [tuple(b) for b in blocks]
        return cls(len(blocks), len(blocks[0]), field, {_orbit_key(blocks): coeff})

    @classmethod
    def constant(cls, n: int, d: int, field: FieldSpec, value=1) -> "InvariantElement":
        return cls(n, d, field, {((0,) * d,) * n: value})

    def _same_shape(self, other: "InvariantElement"):
        if (self.n, self.d, self.field) != (other.n, other.d, other.field):
            raise ValueError("invariants of different shapes")

    def __add__(self, other):
        if not isinstance(other, InvariantElement):
            return NotImplemented
        self._same_shape(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return InvariantElement(self.n, self.d, self.field, terms)

    def __mul__(self, c):
        c = self.field(c)
        return InvariantElement(self.n, self.d, self.field, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + other * -1

    def __eq__(self, other):
        if not isinstance(other, InvariantElement):
            return NotImplemented
        return (self.n, self.d, self.field) == (other.n, other.d, other.field) and self.terms == other.terms

    def __repr__(self):
        return f"InvariantElement(n={self.n}, d={self.d}, {self.terms})"

    def to_poly(self) -> MultiPoly:
        ring = block_ring(self.field, self.n, self.d)
        terms = {}
        for key, c in self.terms.items():
            for arrangement in set(itertools.permutations(key)):
                e = tuple(x for block in arrangement for x in block)
                terms[e] = terms.get(e, self.field.zero) + c
        return MultiPoly.from_terms(ring, terms)

    @classmethod
    def from_poly(cls, p: MultiPoly, n: int, d: int) -> "InvariantElement":
        """Decompose a W-invariant polynomial in X{j}_{i}; raises if it is not invariant."""
        ring = block_ring(p.field, n, d)
        p = ring(p)
        result = cls(n, d, p.field)
        rest = p
        while rest.terms:
            e, c = next(iter(rest.terms.items()))
            blocks = [e[j * d:(j + 1) * d] for j in range(n)]
            if any(sum(b) % 2 for b in blocks):
                raise ValueError(f"{p} is not invariant under sign changes")
            piece = cls.orbit_sum(blocks, p.field, c)
            result = result + piece
            rest = rest - piece.to_poly()
        return result

    def is_invariant(self) -> bool:
        p = self.to_poly()
        return all(weyl_transform(p, self.n, self.d, w) == p for w in _weyl_generators(self.n))


def _weyl_generators(n: int):
    from .symplectic import WeylElement

    return WeylElement.generators(n)


def weyl_transform(p: MultiPoly, n: int, d: int, w) -> MultiPoly:
    """Signed block permutation of a polynomial in X{j}_{i}: block j goes to block w.perm[j]."""
    ring = block_ring(p.field, n, d)
    p = ring(p)
    out = {}
    for e, c in p.terms.items():
        new = [0] * (n * d)
        sign = 1
        for j in range(n):
            block = e[j * d:(j + 1) * d]
            target = w.perm[j]
            new[target * d:(target + 1) * d] = block
            if w.signs[target] < 0 and sum(block) % 2:
                sign = -sign
        out[tuple(new)] = c if sign > 0 else -c
    return MultiPoly(ring, out)


def psi_invariant(a, n: int, field: FieldSpec) -> InvariantElement:
    """The Cartan-side generator 2 * sum_j prod_i X{j}_{i}^a_i as an orbit-sum combination."""
    return _psi_invariant(_index(a).a, n, field)


@functools.lru_cache(maxsize=4096)
def _psi_invariant(a: tuple, n: int, field: FieldSpec) -> InvariantElement:
    a = MultiIndex(a)
    if a.parity:
        return InvariantElement(n, a.d, field)
    ring = block_ring(field, n, a.d)
    terms = {}
    for j in range(n):
        e = [0] * (n * a.d)
        e[j * a.d:(j + 1) * a.d] = a.a
        terms[tuple(e)] = terms.get(tuple(e), 0) + 2
    return InvariantElement.from_poly(MultiPoly.from_terms(ring, terms), n, a.d)


@dataclass(frozen=True)
class PurePowerCombo:
    """sum_k c_k * q_k^{(x)n}; every q_k is an even polynomial in k[X1..Xd]."""

    n: int
    d: int
    field: FieldSpec
    pairs: tuple

    def expand(self) -> MultiPoly:
        """Re-expand symbolically: q^{(x)n} -> prod_j q(X{j}_1, ..., X{j}_d)."""
        ring = block_ring(self.field, self.n, self.d)
        total = ring.zero
        for c, q in self.pairs:
            prod = ring.one
            for j in range(self.n):
                prod = prod * _to_block(q, j, self.d, ring)
            total = total + prod * c
        return total


def _to_block(q: MultiPoly, j: int, d: int, ring: PolyRing) -> MultiPoly:
    slots = _source_slots(q, d)
    size = ring.nvars
    terms = {}
    for e, c in q.terms.items():
        vec = [0] * size
        for s, x in zip(slots, e):
            vec[j * d + s] += x
        terms[tuple(vec)] = c
    return MultiPoly(ring, terms)


def polarize(inv: InvariantElement) -> PurePowerCombo:
    """Write each orbit sum as an alternating sum of n-th pure tensor powers.

    sum_{sigma} q_sigma(1) (x) ... (x) q_sigma(n) = sum_{S nonempty} (-1)^(n-|S|) (sum_{k in S} q_k)^{(x)n},
    and the orbit sum is that symmetrization divided by the product of multiplicity factorials.
    """
    inv.field.require_char_above(inv.n, "polarization divides by factorials up to n!")
    ring = source_ring(inv.field, inv.d)
    field = inv.field
    acc: dict = {}
    for key, coeff in inv.terms.items():
        qs = [ring.monomial(block) for block in key]
        mult = 1
        for _, group in itertools.groupby(key):
            mult *= math.factorial(len(list(group)))
        scale = coeff / field(mult)
        for size in range(1, inv.n + 1):
            sign = -1 if (inv.n - size) % 2 else 1
            for subset in itertools.combinations(range(inv.n), size):
                q = ring.zero
                for k in subset:
                    q = q + qs[k]
                acc[q] = acc[q] + scale * sign if q in acc else scale * sign
    pairs = tuple((c, q) for q, c in acc.items() if c)
    return PurePowerCombo(inv.n, inv.d, field, pairs)


@functools.lru_cache(maxsize=4096)
def polarized_psi(a: tuple, n: int, field: FieldSpec) -> PurePowerCombo:
    return polarize(psi_invariant(a, n, field))


def spectral_eval(inv: InvariantElement, tup: CommutingTuple, *, verify: bool = False,
                  combo: PurePowerCombo | None = None, cache: MonomialCache | None = None):
    """Value of the spectral data map on ``inv`` at the point ``tup``.

    ``combo`` may carry a precomputed ``polarize(inv)``.
    """
    if inv.n != tup.space.n or inv.d != tup.d:
        raise ValueError("invariant shape does not match the tuple")
    combo = combo or polarize(inv)
    cache = cache or MonomialCache(tup.xs)
    total = inv.field.zero
    for c, q in combo.pairs:
        total = total + c * spectral_eval_pure(q, tup, cache=cache, verify=verify)
    return total


@dataclass(frozen=True)
class RoundTripReport:
    a: tuple
    trace: object
    charpoly_route: object
    pfaffian_route: object

    @property
    def passed(self) -> bool:
        return self.trace == self.charpoly_route == self.pfaffian_route


def round_trip_check(a, tup: CommutingTuple, *, cache: MonomialCache | None = None,
                     method: str = "matching") -> RoundTripReport:
    """Three computations of phi_a: trace, char-poly coefficient, Pfaffian char-poly coefficient."""
    a = _index(a)
    if a.parity:
        raise ParityError("round trip needs an even multi-index")
    if a.d != tup.d:
        raise ValueError(f"multi-index of length {a.d} for a {tup.d}-tuple")
    if not tup.all_in_g():
        raise ValueError("round trip is checked on tuples in g")
    space = tup.space
    cache = cache or MonomialCache(tup.xs)
    m = cache.monomial(a.a)
    n = space.n
    tr = trace(m)
    # berkowitz()[1] is the t^(2n-1) coefficient of det(tI - m)
    via_charpoly = -berkowitz(m)[1]
    q = pf_char_poly(space, m, method=method)
    via_pf = -2 * q.coeff({"t": n - 1})
    return RoundTripReport(a.a, tr, via_charpoly, via_pf)


def cartan_round_trip(a, pt: CartanPoint, space: SymplecticSpace) -> tuple:
    """(psi(a, pt), Pfaffian-route value on the embedded point): c o s on a generator."""
    a = _index(a)
    report = round_trip_check(a, cartan_embed(space, pt))
    return psi(a, pt, space.field), report.pfaffian_route


def deligne_det_eval(q: MultiPoly, xs: Sequence[Matrix]):
    """det(q(x_1, ..., x_d)) for pairwise commuting matrices of any size."""
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if not commutes(xs[i], xs[j]):
                raise ValueError(f"matrices {i} and {j} do not commute")
    return det(eval_at_matrices(q, xs))


# -- generation by the psi_a -------------------------------------------------------------


def psi_poly(a, n: int, field: FieldSpec) -> MultiPoly:
    return psi_invariant(a, n, field).to_poly()


def express_in_psi(target: MultiPoly, n: int, d: int) -> list | None:
    """Coefficients writing a homogeneous W-invariant as a combination of products of psi_a.

    Returns ``[(coeff, (a, a', ...)), ...]`` or None when no combination exists.
    """
    field = target.field
    ring = block_ring(field, n, d)
    target = ring(target)
    degree = target.total_degree()
    if degree <= 0:
        return [(target.constant_term() / field(2 * n), ((0,) * d,))] if degree == 0 else []
    gens = [m for m in multi_indices(d, degree, parity=0) if m.degree > 0]
    products = []

    def extend(start: int, remaining: int, chosen: list):
        if remaining == 0:
            products.append(tuple(chosen))
            return
        for k in range(start, len(gens)):
            if gens[k].degree <= remaining:
                extend(k, remaining - gens[k].degree, chosen + [gens[k].a])

    extend(0, degree, [])
    cache = {}
    columns = []
    for prod in products:
        p = ring.one
        for a in prod:
            if a not in cache:
                cache[a] = ring(psi_poly(a, n, field))
            p = p * cache[a]
        columns.append(p)
    monomials = sorted({e for p in columns + [target] for e in p.terms})
    rows = [[p.terms.get(e, field.zero) for p in columns] for e in monomials]
    rhs = [target.terms.get(e, field.zero) for e in monomials]
    sol = solve(rows, rhs, field)
    if sol is None:
        return None
    return [(c, prod) for c, prod in zip(sol, products) if c]


def elementary_symmetric_in_squares(k: int, n: int, field: FieldSpec) -> MultiPoly:
    """e_k(b_1^2, ..., b_n^2) for d = 1."""
    ring = block_ring(field, n, 1)
    squares = [g * g for g in ring.gens]
    out = ring.zero
    for subset in itertools.combinations(squares, k):
        term = ring.one
        for s in subset:
            term = term * s
        out = out + term
    return out
