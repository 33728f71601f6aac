"""Exact Pfaffians.

Two independent routes: the signed sum over perfect matchings (works over any
commutative ring, exponential cost) and skew-symmetric elimination (fields
only, cubic cost).
"""

from __future__ import annotations

import random
from typing import TYPE_CHECKING

from .linalg import Matrix, char_poly
from .rings import FieldSpec, MultiPoly, PolyRing

if TYPE_CHECKING:
    from .symplectic import SymplecticSpace


class PfaffianMismatch(RuntimeError):
    """The matching and elimination routes disagreed."""


def require_antisymmetric(m: Matrix) -> None:
    n = m.dim
    if n % 2:
        raise ValueError(f"Pfaffian needs even dimension, got {n}")
    a = m.rows
    for i in range(n):
        if a[i][i]:
            raise ValueError(f"diagonal entry ({i},{i}) is nonzero")
        for j in range(i + 1, n):
            if a[i][j] != -a[j][i]:
                raise ValueError(f"entries ({i},{j}) and ({j},{i}) are not opposite")


def is_antisymmetric(m: Matrix) -> bool:
    try:
        require_antisymmetric(m)
    except ValueError:
        return False
    return True


def pf_matching(m: Matrix, *, check: bool = True):
    """Signed sum over all perfect matchings, expanded along the first free index."""
    if check:
        require_antisymmetric(m)
    a = m.rows
    zero, one = m.ring.zero, m.ring.one

    def expand(idx: tuple):
        if not idx:
            return one
        i, rest = idx[0], idx[1:]
        total = zero
        for pos, j in enumerate(rest):
            entry = a[i][j]
            if not entry:
                continue
            sub = expand(rest[:pos] + rest[pos + 1:])
            if not sub:
                continue
            term = entry * sub
            total = total - term if pos % 2 else total + term
        return total

    return expand(tuple(range(m.dim)))


def pf_eliminate(m: Matrix, *, check: bool = True):
    """Skew-symmetric Gaussian elimination with pivoting; field entries only."""
    if not isinstance(m.ring, FieldSpec):
        raise TypeError("pf_eliminate needs field entries; use pf_matching over polynomial rings")
    if check:
        require_antisymmetric(m)
    a = [list(r) for r in m.rows]
    n = m.dim
    result = m.ring.one
    for k in range(0, n, 2):
        piv = next((j for j in range(k + 1, n) if a[k][j]), None)
        if piv is None:
            return m.ring.zero
        if piv != k + 1:
            # simultaneous row/column swap flips the sign
            a[k + 1], a[piv] = a[piv], a[k + 1]
            for r in a:
                r[k + 1], r[piv] = r[piv], r[k + 1]
            result = -result
        p = a[k][k + 1]
        result = result * p
        inv = m.ring.one / p
        u = a[k]
        v = a[k + 1]
        # trailing block B <- B + (v u^T - u v^T) / p
        for i in range(k + 2, n):
            ui, vi = u[i], v[i]
            if not (ui or vi):
                continue
            ri = a[i]
            for j in range(k + 2, n):
                ri[j] = ri[j] + (vi * u[j] - ui * v[j]) * inv
    return result


def pfaffian(m: Matrix, *, verify: bool = False):
    """Pf(m): elimination over fields, matching sum otherwise.

    With ``verify`` both routes run on field input and must agree.
    """
    require_antisymmetric(m)
    if not isinstance(m.ring, FieldSpec):
        return pf_matching(m, check=False)
    value = pf_eliminate(m, check=False)
    if verify:
        oracle = pf_matching(m, check=False)
        if oracle != value:
            raise PfaffianMismatch(f"elimination gave {value}, matching gave {oracle}")
    return value


def random_antisymmetric(field: FieldSpec, size: int, rng: random.Random, bound: int = 5) -> Matrix:
    """Small-integer antisymmetric matrix; about one sample in eight is forced to rank 2."""
    rows = [[0] * size for _ in range(size)]
    if size >= 4 and rng.random() < 0.125:
        u = [rng.randint(-bound, bound) for _ in range(size)]
        v = [rng.randint(-bound, bound) for _ in range(size)]
        for i in range(size):
            for j in range(size):
                rows[i][j] = u[i] * v[j] - v[i] * u[j]
    else:
        for i in range(size):
            for j in range(i + 1, size):
                x = rng.randint(-bound, bound)
                rows[i][j], rows[j][i] = x, -x
    return Matrix(rows, field)


def pf_char_poly(space: "SymplecticSpace", m: Matrix, *, method: str = "matching", var: str = "t") -> MultiPoly:
    """N+(t*I - m) = Pf(J (t*I - m)) / Pf(J), a monic degree-n polynomial in ``var``."""
    if not space.in_gplus(m):
        raise ValueError("pf_char_poly needs an element of g+")
    if method == "matching":
        ring = PolyRing(space.field, (var,)) if isinstance(m.ring, FieldSpec) else m.ring.extend(var)
        t = ring.gen(var)
        shifted = Matrix.identity(m.dim, ring) * t - m
        return pf_matching(space.apply_J(shifted), check=False) / space.pfJ
    if method == "interpolate":
        if not isinstance(m.ring, FieldSpec):
            raise TypeError("interpolation route needs field entries")
        return _pf_char_poly_interpolate(space, m, var)
    raise ValueError(f"unknown method {method!r}")


def _pf_char_poly_interpolate(space, m: Matrix, var: str) -> MultiPoly:
    field = space.field
    n = space.n
    ring = PolyRing(field, (var,))
    t = ring.gen(var)
    ident = Matrix.identity(m.dim, field)
    nodes = [field(c) for c in range(n + 1)]
    values = [pfaffian(space.apply_J(ident * c - m)) / space.pfJ for c in nodes]
    # Lagrange interpolation through n+1 nodes; distinct since char > 2n
    out = ring.zero
    for i, (xi, yi) in enumerate(zip(nodes, values)):
        basis = ring.one
        denom = field.one
        for j, xj in enumerate(nodes):
            if j != i:
                basis = basis * (t - xj)
                denom = denom * (xi - xj)
        out = out + basis * (yi / denom)
    return out


def pf_char_poly_square_check(space: "SymplecticSpace", m: Matrix) -> bool:
    q = pf_char_poly(space, m)
    return q * q == char_poly(m)
