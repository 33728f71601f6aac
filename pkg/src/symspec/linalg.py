"""Dense square matrices over a field or a polynomial ring.

The characteristic polynomial is computed with Berkowitz's division-free
recurrence, so it is valid for matrices whose entries are polynomials.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .rings import FieldSpec, MultiPoly, PolyRing, is_scalar

Ring = FieldSpec | PolyRing


def common_ring(r1: Ring, r2: Ring) -> Ring:
    if r1 == r2:
        return r1
    f1 = r1 if isinstance(r1, FieldSpec) else r1.field
    f2 = r2 if isinstance(r2, FieldSpec) else r2.field
    if f1 != f2:
        raise ValueError(f"ring mismatch: {r1} vs {r2}")
    if isinstance(r1, FieldSpec):
        return r2
    if isinstance(r2, FieldSpec):
        return r1
    return r1.merge(r2)


def base_field(ring: Ring) -> FieldSpec:
    return ring if isinstance(ring, FieldSpec) else ring.field


def ring_of(x, default: Ring) -> Ring:
    if isinstance(x, MultiPoly):
        return x.ring
    return default


class Matrix:
    """Immutable square matrix; ``rows`` is a tuple of tuples of ring elements."""

    __slots__ = ("rows", "ring")

    def __init__(self, rows: Iterable[Sequence], ring: Ring, *, _trusted: bool = False):
        if _trusted:
            self.rows = rows
        else:
            self.rows = tuple(tuple(ring(x) for x in row) for row in rows)
            n = len(self.rows)
            if n == 0 or any(len(r) != n for r in self.rows):
                raise ValueError("matrix must be square and non-empty")
        self.ring = ring

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, n: int, ring: Ring) -> "Matrix":
        zero, one = ring.zero, ring.one
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), ring, _trusted=True)

    @classmethod
    def zeros(cls, n: int, ring: Ring) -> "Matrix":
        zero = ring.zero
        return cls(tuple((zero,) * n for _ in range(n)), ring, _trusted=True)

    @classmethod
    def diag(cls, values: Sequence, ring: Ring) -> "Matrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], ring)

    def _new(self, rows, ring=None) -> "Matrix":
        return Matrix(rows, ring or self.ring, _trusted=True)

    # -- basics -----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def field(self) -> FieldSpec:
        return base_field(self.ring)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.dim == other.dim and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "\n ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix[{self.ring}](\n [{body}])"

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def is_scalar_valued(self) -> bool:
        return isinstance(self.ring, FieldSpec)

    def map(self, f: Callable, ring: Ring | None = None) -> "Matrix":
        ring = ring or self.ring
        return Matrix([[f(x) for x in r] for r in self.rows], ring)

    def to_ring(self, ring: Ring) -> "Matrix":
        if ring == self.ring:
            return self
        return Matrix(self.rows, ring)

    @property
    def T(self) -> "Matrix":
        return self._new(tuple(zip(*self.rows)))

    def transpose(self) -> "Matrix":
        return self.T

    # -- arithmetic -------------------------------------------------------

    def _align(self, other: "Matrix"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        ring = common_ring(self.ring, other.ring)
        return ring, self.to_ring(ring), other.to_ring(ring)

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        ring, a, b = self._align(other)
        return a._new(tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a.rows, b.rows)), ring)

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        ring, a, b = self._align(other)
        return a._new(tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a.rows, b.rows)), ring)

    def __neg__(self):
        return self._new(tuple(tuple(-x for x in r) for r in self.rows))

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        ring, a, b = self._align(other)
        cols = tuple(zip(*b.rows))
        zero = ring.zero
        rows = []
        for r in a.rows:
            row = []
            for c in cols:
                s = zero
                for x, y in zip(r, c):
                    if x and y:
                        s = s + x * y
                row.append(s)
            rows.append(tuple(row))
        return a._new(tuple(rows), ring)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return self @ c
        if not (is_scalar(c) or isinstance(c, MultiPoly)):
            return NotImplemented
        ring = common_ring(self.ring, ring_of(c, self.ring))
        c = ring(c)
        m = self.to_ring(ring)
        return m._new(tuple(tuple(c * x for x in r) for r in m.rows), ring)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("matrix powers must be non-negative integers")
        result = Matrix.identity(self.dim, self.ring)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        if isinstance(self.ring, FieldSpec):
            rows = [[self.ring.format_scalar(x) for x in r] for r in self.rows]
        else:
            rows = [[x.to_json() for x in r] for r in self.rows]
        return {"dim": self.dim, "ring": ring_to_str(self.ring), "rows": rows}

    @classmethod
    def from_json(cls, data: dict) -> "Matrix":
        ring = ring_from_str(data["ring"])
        rows = data["rows"]
        if "dim" in data and len(rows) != int(data["dim"]):
            raise ValueError(f"dim {data['dim']} does not match {len(rows)} rows")
        if isinstance(ring, FieldSpec):
            return cls([[ring.parse_scalar(str(x)) for x in r] for r in rows], ring)
        return cls(
            [[MultiPoly.from_json(ring, x) if isinstance(x, list) else ring(ring.field.parse_scalar(str(x)))
              for x in r] for r in rows],
            ring,
        )


def ring_to_str(ring: Ring) -> str:
    if isinstance(ring, FieldSpec):
        return str(ring)
    return f"{ring.field}[{','.join(ring.names)}]"


def ring_from_str(text: str) -> Ring:
    text = text.strip()
    if "[" in text:
        field, _, rest = text.partition("[")
        names = [s.strip() for s in rest.rstrip("]").split(",") if s.strip()]
        return PolyRing(FieldSpec.parse(field), names)
    return FieldSpec.parse(text)


def mat_arith(lhs: Matrix, op: str, rhs) -> Matrix:
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs @ rhs
    if op == "scale":
        return lhs * rhs
    raise ValueError(f"unknown matrix operation {op!r}")


def trace(m: Matrix):
    s = m.ring.zero
    for i in range(m.dim):
        s = s + m.rows[i][i]
    return s


def berkowitz(m: Matrix) -> list:
    """Coefficients ``[1, c1, ..., cn]`` of det(t*I - m), highest degree first.

    Division-free: only ring additions and multiplications are used.
    """
    a = m.rows
    n = m.dim
    zero = m.ring.zero
    poly = [m.ring.one, -a[n - 1][n - 1]]
    for k in range(n - 2, -1, -1):
        size = n - 1 - k
        row = a[k][k + 1:]
        col = [a[i][k] for i in range(k + 1, n)]
        sub = [r[k + 1:] for r in a[k + 1:]]
        toeplitz = [m.ring.one, -a[k][k]]
        vec = col
        for _ in range(size):
            s = zero
            for x, y in zip(row, vec):
                if x and y:
                    s = s + x * y
            toeplitz.append(-s)
            vec = [_dot(r, vec, zero) for r in sub]
        new = []
        for i in range(size + 2):
            s = zero
            for j in range(max(0, i - size - 1), min(i, size) + 1):
                s = s + toeplitz[i - j] * poly[j]
            new.append(s)
        poly = new
    return poly


def _dot(r, v, zero):
    s = zero
    for x, y in zip(r, v):
        if x and y:
            s = s + x * y
    return s


def char_poly(m: Matrix, var: str = "t") -> MultiPoly:
    """det(var*I - m) as a polynomial; entries may already be polynomials."""
    if isinstance(m.ring, FieldSpec):
        ring = PolyRing(m.ring, (var,))
    else:
        ring = m.ring.extend(var)
    t = ring.gen(var)
    coeffs = berkowitz(m)
    n = m.dim
    out = ring.zero
    for k, c in enumerate(coeffs):
        out = out + ring(c) * t ** (n - k)
    return out


def det(m: Matrix):
    """(-1)^dim times the constant term of the Berkowitz characteristic polynomial."""
    c = berkowitz(m)[-1]
    return -c if m.dim % 2 else c


def det_bareiss(m: Matrix):
    """Fraction-free elimination with row pivoting; exact division only."""
    a = [list(r) for r in m.rows]
    n = m.dim
    sign = 1
    prev = m.ring.one
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return m.ring.zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def inverse(m: Matrix) -> Matrix:
    """Gauss-Jordan inverse; entries must be field elements."""
    if not isinstance(m.ring, FieldSpec):
        raise TypeError("inverse needs field entries")
    n = m.dim
    one, zero = m.ring.one, m.ring.zero
    a = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(m.rows)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is not invertible")
        a[k], a[piv] = a[piv], a[k]
        inv = one / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return m._new(tuple(tuple(r[n:]) for r in a))


def solve(rows: Sequence[Sequence], rhs: Sequence, field: FieldSpec):
    """One solution of the (possibly non-square) linear system, or None if inconsistent."""
    ncols = len(rows[0]) if rows else 0
    a = [[field(x) for x in r] + [field(b)] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.one / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] for row in a[r:]):
        return None
    sol = [field.zero] * ncols
    for i, c in enumerate(pivots):
        sol[c] = a[i][-1]
    return sol


def commutes(x: Matrix, y: Matrix) -> bool:
    return (x @ y - y @ x).is_zero()


def conjugate(g: Matrix, x: Matrix, g_inv: Matrix | None = None) -> Matrix:
    """g x g^-1; ``g`` must have field entries."""
    if g_inv is None:
        g_inv = inverse(g)
    return g @ x @ g_inv


def poly_at_matrix(p: MultiPoly, m: Matrix, var: str = "t") -> Matrix:
    """Substitute a matrix for the univariate variable ``var`` of ``p``."""
    if p.variables() - {var}:
        raise ValueError("only univariate substitution is supported")
    n = m.dim
    out = Matrix.zeros(n, m.ring)
    power = Matrix.identity(n, m.ring)
    deg = p.degree(var)
    for k in range(deg + 1):
        c = p.coeff({var: k})
        if c:
            out = out + power * c
        if k < deg:
            power = power @ m
    return out
