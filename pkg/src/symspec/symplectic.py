"""The standard symplectic space, the splitting gl = g + g+, the Pfaffian norm,
the diagonal Cartan, the Weyl group and seeded samplers."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .linalg import Matrix, commutes, conjugate
from .pfaffian import pf_matching, pfaffian
from .rings import FieldSpec

IN_G = "in_g"
IN_GPLUS = "in_gplus"
GENERAL = "general"
SAMPLER_KINDS = ("conjugated_cartan", "single_generator", "nilpotent")


def standard_form(n: int, field: FieldSpec) -> Matrix:
    size = 2 * n
    rows = [[0] * size for _ in range(size)]
    for i in range(size):
        j = size - 1 - i
        rows[i][j] = 1 if i < n else -1
    return Matrix(rows, field)


@dataclass(frozen=True)
class SymplecticSpace:
    n: int
    field: FieldSpec
    J: Matrix = dc_field(repr=False, compare=False)
    pfJ: object = dc_field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def J_inv(self) -> Matrix:
        # J^2 = -I for the antidiagonal form
        return -self.J

    def apply_J(self, x: Matrix) -> Matrix:
        """J @ x without a full product: J reverses the rows and negates the bottom half."""
        self._check_dim(x)
        size, n = self.dim, self.n
        rows = tuple(
            x.rows[size - 1 - r] if r < n else tuple(-v for v in x.rows[size - 1 - r]) for r in range(size)
        )
        return Matrix(rows, x.ring, _trusted=True)

    def in_g(self, x: Matrix) -> bool:
        """J x is symmetric."""
        a = self.apply_J(x).rows
        size = self.dim
        return all(a[i][j] == a[j][i] for i in range(size) for j in range(i + 1, size))

    def in_gplus(self, x: Matrix) -> bool:
        """J x is antisymmetric."""
        a = self.apply_J(x).rows
        size = self.dim
        return all(
            not a[i][i] and all(a[i][j] == -a[j][i] for j in range(i + 1, size)) for i in range(size)
        )

    def parity_of(self, x: Matrix) -> str:
        if self.in_g(x):
            return IN_G
        if self.in_gplus(x):
            return IN_GPLUS
        return GENERAL

    def _check_dim(self, x: Matrix) -> None:
        if x.dim != self.dim:
            raise ValueError(f"expected a {self.dim}x{self.dim} matrix, got {x.dim}x{x.dim}")

    def split(self, x: Matrix) -> tuple[Matrix, Matrix]:
        """(g part, g+ part) with x = g part + g+ part."""
        self._check_dim(x)
        s = self.apply_J(x)
        half = self.field(1) / 2
        sym = (s + s.T) * half
        anti = (s - s.T) * half
        return self.J_inv @ sym, self.J_inv @ anti

    def pfaffian_norm(self, x: Matrix, *, verify: bool = False):
        """N+(x) = Pf(J x) / Pf(J) for x in g+."""
        if not self.in_gplus(x):
            raise ValueError("the Pfaffian norm is only defined on g+")
        return pfaffian(self.apply_J(x), verify=verify) / self.pfJ

    def identity(self) -> Matrix:
        return Matrix.identity(self.dim, self.field)


def standard_space(n: int, field: FieldSpec | None = None) -> SymplecticSpace:
    field = field or FieldSpec("q")
    if n < 1:
        raise ValueError("n must be positive")
    field.require_char_above(2 * n, f"symplectic space of dimension {2 * n}")
    J = standard_form(n, field)
    pfJ = pf_matching(J)
    if not pfJ:
        raise ArithmeticError("standard form is degenerate")
    return SymplecticSpace(n, field, J, pfJ)


def in_g(space: SymplecticSpace, x: Matrix) -> bool:
    return space.in_g(x)


def in_gplus(space: SymplecticSpace, x: Matrix) -> bool:
    return space.in_gplus(x)


def split(space: SymplecticSpace, x: Matrix) -> tuple[Matrix, Matrix]:
    return space.split(x)


def pfaffian_norm(space: SymplecticSpace, x: Matrix, *, verify: bool = False):
    return space.pfaffian_norm(x, verify=verify)


# -- Cartan data and Weyl group ------------------------------------------------


@dataclass(frozen=True)
class CartanPoint:
    """``b[i][j]`` is the j-th diagonal coordinate of the i-th tuple member."""

    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(tuple(row) for row in self.b))
        if len({len(row) for row in self.b}) > 1:
            raise ValueError("all rows of a Cartan point need the same length")

    @property
    def d(self) -> int:
        return len(self.b)

    @property
    def n(self) -> int:
        return len(self.b[0]) if self.b else 0


@dataclass(frozen=True)
class WeylElement:
    """Signed permutation: ``perm[j]`` is the image of coordinate j (0-based)."""

    signs: tuple
    perm: tuple

    def __post_init__(self):
        object.__setattr__(self, "signs", tuple(self.signs))
        object.__setattr__(self, "perm", tuple(self.perm))
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"{self.perm} is not a permutation")
        if len(self.signs) != len(self.perm) or any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be a vector of +-1 matching the permutation")

    @classmethod
    def identity(cls, n: int) -> "WeylElement":
        return cls((1,) * n, tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.perm)

    def inverse_perm(self) -> tuple:
        inv = [0] * self.n
        for j, image in enumerate(self.perm):
            inv[image] = j
        return tuple(inv)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        # (w w').pt == w.(w'.pt)
        inv = self.inverse_perm()
        perm = tuple(self.perm[other.perm[j]] for j in range(self.n))
        signs = tuple(self.signs[j] * other.signs[inv[j]] for j in range(self.n))
        return WeylElement(signs, perm)

    @classmethod
    def generators(cls, n: int) -> list["WeylElement"]:
        """Sign flip of the first coordinate and the adjacent transpositions."""
        gens = [cls(tuple(-1 if j == 0 else 1 for j in range(n)), tuple(range(n)))]
        for k in range(n - 1):
            perm = list(range(n))
            perm[k], perm[k + 1] = perm[k + 1], perm[k]
            gens.append(cls((1,) * n, tuple(perm)))
        return gens

    @classmethod
    def random(cls, n: int, rng: random.Random) -> "WeylElement":
        perm = list(range(n))
        rng.shuffle(perm)
        return cls(tuple(rng.choice((1, -1)) for _ in range(n)), tuple(perm))


def weyl_act(w: WeylElement, pt: CartanPoint) -> CartanPoint:
    if w.n != pt.n:
        raise ValueError(f"Weyl element of rank {w.n} on a point of rank {pt.n}")
    inv = w.inverse_perm()
    return CartanPoint(tuple(
        tuple(w.signs[j] * row[inv[j]] for j in range(w.n)) for row in pt.b
    ))


def cartan_matrix(space: SymplecticSpace, bs: Sequence) -> Matrix:
    """diag(b_1, ..., b_n, -b_n, ..., -b_1)."""
    if len(bs) != space.n:
        raise ValueError(f"expected {space.n} Cartan coordinates, got {len(bs)}")
    values = [space.field(b) for b in bs]
    return Matrix.diag(values + [-b for b in reversed(values)], space.field)


# -- commuting tuples -------------------------------------------------------------


@dataclass(frozen=True)
class CommutingTuple:
    space: SymplecticSpace
    xs: tuple
    parity: tuple = ()
    kind: str = ""
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(self.xs))
        if not self.parity:
            object.__setattr__(self, "parity", tuple(self.space.parity_of(x) for x in self.xs))
        else:
            object.__setattr__(self, "parity", tuple(self.parity))
        if len(self.parity) != len(self.xs):
            raise ValueError("one parity tag per matrix")
        for k, (x, tag) in enumerate(zip(self.xs, self.parity)):
            if tag == IN_G and not self.space.in_g(x):
                raise ValueError(f"matrix {k} is tagged in_g but is not in g")
            if tag == IN_GPLUS and not self.space.in_gplus(x):
                raise ValueError(f"matrix {k} is tagged in_gplus but is not in g+")
            if tag not in (IN_G, IN_GPLUS, GENERAL):
                raise ValueError(f"unknown parity tag {tag!r}")
        for i in range(len(self.xs)):
            for j in range(i + 1, len(self.xs)):
                if not commutes(self.xs[i], self.xs[j]):
                    raise ValueError(f"matrices {i} and {j} do not commute")

    @property
    def d(self) -> int:
        return len(self.xs)

    def all_in_g(self) -> bool:
        return all(tag == IN_G for tag in self.parity)

    def to_json(self) -> dict:
        return {
            "n": self.space.n,
            "d": self.d,
            "field": str(self.space.field),
            "kind": self.kind,
            "seed": None if self.seed is None else str(self.seed),
            "matrices": [x.to_json() for x in self.xs],
            "parity": list(self.parity),
        }

    @classmethod
    def from_json(cls, data: dict) -> "CommutingTuple":
        field = FieldSpec.parse(data["field"])
        space = standard_space(int(data["n"]), field)
        xs = [Matrix.from_json(m) for m in data["matrices"]]
        if len(xs) != int(data["d"]):
            raise ValueError(f"d={data['d']} but {len(xs)} matrices given")
        seed = data.get("seed")
        return cls(space, tuple(xs), tuple(data["parity"]), data.get("kind", ""),
                   None if seed is None else int(seed))


def cartan_embed(space: SymplecticSpace, pt: CartanPoint) -> CommutingTuple:
    if pt.n != space.n:
        raise ValueError(f"Cartan point of rank {pt.n} in a space of rank {space.n}")
    xs = tuple(cartan_matrix(space, row) for row in pt.b)
    return CommutingTuple(space, xs, (IN_G,) * len(xs), kind="cartan")


# -- samplers ------------------------------------------------------------------------


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _antidiag(n: int) -> list:
    return [[1 if i + j == n - 1 else 0 for j in range(n)] for i in range(n)]


def _matmul_int(a, b):
    return [[sum(x * y for x, y in zip(r, c)) for c in zip(*b)] for r in a]


def _blocks(a, b, c, d) -> list:
    return [ra + rb for ra, rb in zip(a, b)] + [rc + rd for rc, rd in zip(c, d)]


def _elementary_symplectic(n: int, rng: random.Random, bound: int = 2) -> list:
    """One generator as an integer matrix: a unipotent block or a block-diagonal (h, K h^-T K)."""
    K = _antidiag(n)
    eye = [[int(i == j) for j in range(n)] for i in range(n)]
    zero = [[0] * n for _ in range(n)]
    kind = rng.randrange(3)
    if kind < 2:
        s = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                s[i][j] = s[j][i] = rng.randint(-bound, bound)
        ks = _matmul_int(K, s)
        return _blocks(eye, ks, zero, eye) if kind == 0 else _blocks(eye, zero, ks, eye)
    # h = I + c E_ij has inverse I - c E_ij, so everything stays integral
    h = [row[:] for row in eye]
    h_inv = [row[:] for row in eye]
    if n > 1:
        i, j = rng.sample(range(n), 2)
        c = rng.choice([x for x in range(-bound, bound + 1) if x])
        h[i][j] = c
        h_inv[i][j] = -c
    else:
        sign = rng.choice((1, -1))
        h[0][0] = h_inv[0][0] = sign
    h_inv_t = [list(r) for r in zip(*h_inv)]
    d = _matmul_int(_matmul_int(K, h_inv_t), K)
    return _blocks(h, zero, zero, d)


def random_symplectic(space: SymplecticSpace, seed, steps: int = 3) -> Matrix:
    """Product of ``steps`` elementary symplectic matrices with small integer parameters."""
    rng = _rng(seed)
    size = space.dim
    g = [[int(i == j) for j in range(size)] for i in range(size)]
    for _ in range(steps):
        g = _matmul_int(g, _elementary_symplectic(space.n, rng))
    return Matrix(g, space.field)


def symplectic_inverse(space: SymplecticSpace, g: Matrix) -> Matrix:
    """g^-1 = J^-1 g^T J for g in Sp."""
    return space.J_inv @ g.T @ space.J


def random_cartan_point(n: int, d: int, rng: random.Random, bound: int = 3) -> CartanPoint:
    return CartanPoint(tuple(tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(d)))


def random_g(space: SymplecticSpace, rng: random.Random, bound: int = 3) -> Matrix:
    """x = J^-1 S for a random symmetric S, so J x = S."""
    size = space.dim
    s = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            s[i][j] = s[j][i] = rng.randint(-bound, bound)
    return space.J_inv @ Matrix(s, space.field)


def random_gplus(space: SymplecticSpace, rng: random.Random, bound: int = 3) -> Matrix:
    """x = J^-1 A for a random antisymmetric A, so J x = A."""
    size = space.dim
    a = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            x = rng.randint(-bound, bound)
            a[i][j], a[j][i] = x, -x
    return space.J_inv @ Matrix(a, space.field)


def regular_nilpotent(space: SymplecticSpace) -> Matrix:
    """Superdiagonal nilpotent in g: entries +1 for the first n steps, -1 after."""
    n, size = space.n, space.dim
    rows = [[0] * size for _ in range(size)]
    for k in range(size - 1):
        rows[k][k + 1] = 1 if k < n else -1
    return Matrix(rows, space.field)


def sample_commuting(space: SymplecticSpace, d: int, seed, kind: str = "conjugated_cartan",
                     *, parity: str = "g") -> CommutingTuple:
    """A seeded commuting d-tuple of the requested kind.

    ``parity="g"`` keeps every member in g. For the nilpotent kind,
    ``parity="mixed"`` also allows even powers (tagged in_gplus).
    """
    rng = _rng(seed)
    label = seed if isinstance(seed, int) else None
    if kind == "conjugated_cartan":
        pt = random_cartan_point(space.n, d, rng)
        g = random_symplectic(space, rng, steps=rng.randint(1, 3))
        g_inv = symplectic_inverse(space, g)
        xs = [conjugate(g, y, g_inv) for y in cartan_embed(space, pt).xs]
        tags = [IN_G] * d
    elif kind == "single_generator":
        x = random_g(space, rng)
        x2 = x @ x
        powers = [x]
        for _ in range(2):
            powers.append(powers[-1] @ x2)
        xs, tags = [], []
        for _ in range(d):
            coeffs = [rng.randint(-2, 2) for _ in powers]
            if not any(coeffs):
                coeffs[0] = 1
            m = Matrix.zeros(space.dim, space.field)
            for c, p in zip(coeffs, powers):
                if c:
                    m = m + p * c
            xs.append(m)
            tags.append(IN_G)
    elif kind == "nilpotent":
        e = regular_nilpotent(space)
        top = 2 * space.n - 1
        if parity == "g":
            choices = list(range(1, top + 1, 2))
        elif parity == "mixed":
            choices = list(range(1, top + 1))
        else:
            raise ValueError(f"unknown parity request {parity!r}")
        exps = [rng.choice(choices) for _ in range(d)]
        xs = [e ** k for k in exps]
        tags = [IN_G if k % 2 else IN_GPLUS for k in exps]
    else:
        raise ValueError(f"unknown sampler kind {kind!r}; expected one of {SAMPLER_KINDS}")
    return CommutingTuple(space, tuple(xs), tuple(tags), kind, label)


def sample_gplus_pair(space: SymplecticSpace, seed, kind: str = "conjugated_cartan") -> tuple[Matrix, Matrix]:
    """Two commuting elements of g+ built from a commuting pair in g.

    Both are combinations of I, x1^2, x1 x2, x2^2. The nilpotent kind drops
    the identity term, so both norms vanish.
    """
    rng = _rng(seed)
    tup = sample_commuting(space, 2, rng, kind)
    x1, x2 = tup.xs
    basis = [x1 @ x1, x1 @ x2, x2 @ x2]
    ident = space.identity()
    out = []
    for _ in range(2):
        m = Matrix.zeros(space.dim, space.field)
        if kind != "nilpotent":
            m = m + ident * rng.randint(-2, 2)
        for b in basis:
            c = rng.randint(-2, 2)
            if c:
                m = m + b * c
        out.append(m)
    return out[0], out[1]
