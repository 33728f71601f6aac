"""Exact base arithmetic: rationals, odd prime fields, sparse multivariate polynomials.

Rationals are ``gmpy2.mpq`` values, residues are :class:`Residue` values and
polynomials are :class:`MultiPoly` values living in a :class:`PolyRing`.
Everything is immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import gmpy2
from gmpy2 import mpq


class Residue:
    """An element of Z/pZ, stored as its representative in [0, p)."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        self.value = int(value) % modulus
        self.modulus = modulus

    def _other(self, other):
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ValueError(f"mixing residues mod {self.modulus} and mod {other.modulus}")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, (Fraction, type(mpq()))):
            return int(other.numerator) * pow(int(other.denominator), -1, self.modulus)
        return None

    def __add__(self, other):
        if type(other) is Residue and other.modulus == self.modulus:
            return _residue(self.value + other.value, self.modulus)
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Residue(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is Residue and other.modulus == self.modulus:
            return _residue(self.value - other.value, self.modulus)
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Residue(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Residue(o - self.value, self.modulus)

    def __mul__(self, other):
        if type(other) is Residue and other.modulus == self.modulus:
            return _residue(self.value * other.value, self.modulus)
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Residue(self.value * o, self.modulus)

    __rmul__ = __mul__

    def inverse(self) -> "Residue":
        if self.value == 0:
            raise ZeroDivisionError(f"0 is not invertible mod {self.modulus}")
        return Residue(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * Residue(o, self.modulus).inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Residue(o, self.modulus) * self.inverse()

    def __neg__(self):
        return _residue(-self.value, self.modulus)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Residue(pow(self.value, k, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.modulus == other.modulus and self.value == other.value
        o = self._other(other)
        if o is None:
            return NotImplemented
        return (o - self.value) % self.modulus == 0

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} mod {self.modulus}"

    __str__ = __repr__


def _residue(value: int, modulus: int) -> Residue:
    # trusted constructor: value is already an int
    r = object.__new__(Residue)
    r.value = value % modulus
    r.modulus = modulus
    return r


Scalar = Union[int, "mpq", Residue]
_MPQ = type(mpq())
_SCALAR_TYPES = (int, _MPQ, Fraction, Residue)


def is_scalar(x) -> bool:
    return isinstance(x, _SCALAR_TYPES) and not isinstance(x, bool)


@dataclass(frozen=True)
class FieldSpec:
    """Base field: ``FieldSpec("q")`` for the rationals, ``FieldSpec("fp", p)`` for F_p."""

    kind: str = "q"
    modulus: int | None = None

    def __post_init__(self):
        if self.kind == "q":
            if self.modulus is not None:
                raise ValueError("the rational field takes no modulus")
        elif self.kind == "fp":
            p = self.modulus
            if not isinstance(p, int) or p < 3 or not gmpy2.is_prime(p):
                raise ValueError(f"modulus must be an odd prime, got {p!r}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``"q"`` or ``"fp:<p>"``."""
        text = text.strip().lower()
        if text in ("q", "qq", "rationals"):
            return cls("q")
        if text.startswith("fp:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise ValueError(f"bad modulus in field {text!r}") from None
            return cls("fp", p)
        raise ValueError(f"unknown field {text!r}; expected 'q' or 'fp:<p>'")

    def __str__(self):
        return "q" if self.kind == "q" else f"fp:{self.modulus}"

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == "q" else self.modulus

    def require_char_above(self, bound: int, reason: str = "") -> None:
        """Raise unless the characteristic is 0 or strictly greater than ``bound``."""
        p = self.characteristic
        if p and p <= bound:
            why = f" ({reason})" if reason else ""
            raise ValueError(f"characteristic {p} must exceed {bound}{why}")

    def __call__(self, value) -> Scalar:
        if isinstance(value, MultiPoly):
            if not value.is_constant():
                raise TypeError(f"non-constant polynomial {value} is not a scalar")
            value = value.constant_term()
        if self.kind == "q":
            if isinstance(value, Residue):
                raise TypeError("cannot coerce a residue into the rationals")
            if isinstance(value, str):
                return mpq(value)
            return mpq(value)
        p = self.modulus
        if isinstance(value, Residue):
            if value.modulus != p:
                raise ValueError(f"residue mod {value.modulus} in field mod {p}")
            return value
        if isinstance(value, str):
            return self.parse_scalar(value)
        if isinstance(value, int):
            return Residue(value, p)
        if isinstance(value, (Fraction, _MPQ)):
            return Residue(int(value.numerator) * pow(int(value.denominator), -1, p), p)
        raise TypeError(f"cannot coerce {value!r} into {self}")

    @property
    def zero(self) -> Scalar:
        return self(0)

    @property
    def one(self) -> Scalar:
        return self(1)

    def format_scalar(self, x) -> str:
        """``"num/den"`` (den omitted when 1) or ``"r mod p"``."""
        return str(self(x))

    def parse_scalar(self, text: str) -> Scalar:
        text = text.strip()
        if self.kind == "q":
            return mpq(text)
        if "mod" in text:
            r, _, p = text.partition("mod")
            if int(p) != self.modulus:
                raise ValueError(f"residue {text!r} does not belong to {self}")
            return Residue(int(r), self.modulus)
        return self(mpq(text))


QQ = FieldSpec("q")


def _glex_key(exps):
    return (sum(exps), exps)


class PolyRing:
    """``field[names...]`` with a fixed variable order."""

    __slots__ = ("field", "names", "_index")

    def __init__(self, field: FieldSpec, names: Sequence[str] = ()):
        names = tuple(names)
        seen = set()
        for name in names:
            if not isinstance(name, str) or not name:
                raise ValueError(f"bad variable name {name!r}")
            if name in seen:
                raise ValueError(f"variable {name!r} already bound in this ring")
            seen.add(name)
        self.field = field
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}

    def __eq__(self, other):
        return isinstance(other, PolyRing) and (self.field, self.names) == (other.field, other.names)

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        return f"{self.field}[{','.join(self.names)}]"

    __str__ = __repr__

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self._index[name]

    def extend(self, *names: str) -> "PolyRing":
        return PolyRing(self.field, self.names + names)

    def gen(self, name: str) -> "MultiPoly":
        i = self._index[name]
        exps = tuple(1 if j == i else 0 for j in range(len(self.names)))
        return MultiPoly(self, {exps: self.field.one})

    @property
    def gens(self) -> tuple:
        return tuple(self.gen(name) for name in self.names)

    @property
    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    @property
    def one(self) -> "MultiPoly":
        return self.constant(1)

    def constant(self, value) -> "MultiPoly":
        c = self.field(value)
        return MultiPoly(self, {(0,) * len(self.names): c} if c else {})

    def monomial(self, exps: Mapping[str, int] | Sequence[int], coeff=1) -> "MultiPoly":
        return MultiPoly.from_terms(self, {self._exponent_vector(exps): coeff})

    def _exponent_vector(self, exps) -> tuple:
        if isinstance(exps, Mapping):
            vec = [0] * len(self.names)
            for name, e in exps.items():
                if name not in self._index:
                    raise KeyError(f"unknown variable {name!r} in {self}")
                vec[self._index[name]] = int(e)
            return tuple(vec)
        vec = tuple(int(e) for e in exps)
        if len(vec) != len(self.names):
            raise ValueError(f"exponent vector {vec} has wrong length for {self}")
        return vec

    def __call__(self, value) -> "MultiPoly":
        if isinstance(value, MultiPoly):
            if value.ring == self:
                return value
            if value.ring.field != self.field:
                raise ValueError(f"cannot move {value.ring} into {self}")
            pos = []
            for name in value.ring.names:
                if name not in self._index:
                    if any(e[value.ring.index(name)] for e in value.terms):
                        raise ValueError(f"variable {name!r} is not in {self}")
                    pos.append(None)
                else:
                    pos.append(self._index[name])
            terms = {}
            for exps, c in value.terms.items():
                vec = [0] * len(self.names)
                for e, j in zip(exps, pos):
                    if e:
                        vec[j] = e
                terms[tuple(vec)] = c
            return MultiPoly(self, terms)
        return self.constant(value)

    def merge(self, other: "PolyRing") -> "PolyRing":
        if self == other:
            return self
        if self.field != other.field:
            raise ValueError(f"ring mismatch: {self} vs {other}")
        extra = tuple(n for n in other.names if n not in self._index)
        return PolyRing(self.field, self.names + extra)


class MultiPoly:
    """Sparse polynomial: exponent tuple -> nonzero coefficient."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        # trusted constructor: terms already coerced, no zero coefficients
        self.ring = ring
        self.terms = terms

    @classmethod
    def from_terms(cls, ring: PolyRing, terms: Mapping) -> "MultiPoly":
        field = ring.field
        out = {}
        for exps, c in terms.items():
            exps = ring._exponent_vector(exps)
            c = field(c)
            if exps in out:
                c = out[exps] + c
            if c:
                out[exps] = c
            else:
                out.pop(exps, None)
        return cls(ring, out)

    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    # -- coercion ---------------------------------------------------------

    def _pair(self, other):
        if isinstance(other, MultiPoly):
            if other.ring == self.ring:
                return self.ring, self.terms, other.terms
            ring = self.ring.merge(other.ring)
            return ring, ring(self).terms, ring(other).terms
        if is_scalar(other):
            c = self.field(other)
            return self.ring, self.terms, ({(0,) * self.ring.nvars: c} if c else {})
        return None

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        ring, a, b = pair
        out = dict(a)
        for e, c in b.items():
            s = out[e] + c if e in out else c
            if s:
                out[e] = s
            else:
                del out[e]
        return MultiPoly(ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        ring, a, b = pair
        out = dict(a)
        for e, c in b.items():
            s = out[e] - c if e in out else -c
            if s:
                out[e] = s
            else:
                del out[e]
        return MultiPoly(ring, out)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        ring, a, b = pair
        if len(b) == 1 and not any(next(iter(b))):
            c = next(iter(b.values()))
            return MultiPoly(ring, {e: v * c for e, v in a.items()})
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                if e in out:
                    out[e] = out[e] + c1 * c2
                else:
                    out[e] = c1 * c2
        return MultiPoly(ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if is_scalar(other):
            inv = self.field.one / self.field(other)
            return MultiPoly(self.ring, {e: c * inv for e, c in self.terms.items()})
        if isinstance(other, MultiPoly):
            if other.is_constant():
                return self / other.constant_term()
            return self.exact_div(other)
        return NotImplemented

    def __rtruediv__(self, other):
        if is_scalar(other):
            return self.ring(other) / self
        return NotImplemented

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        """Quotient of an exact division; raises ArithmeticError on a nonzero remainder."""
        ring, a, b = self._pair(divisor)
        if not b:
            raise ZeroDivisionError("division by the zero polynomial")
        lead_e = max(b, key=_glex_key)
        lead_inv = self.field.one / b[lead_e]
        rem = MultiPoly(ring, dict(a))
        q_terms = {}
        div = MultiPoly(ring, b)
        while rem.terms:
            e = max(rem.terms, key=_glex_key)
            shift = tuple(x - y for x, y in zip(e, lead_e))
            if min(shift) < 0:
                raise ArithmeticError(f"{divisor} does not divide {self}")
            c = rem.terms[e] * lead_inv
            q_terms[shift] = c
            rem = rem - MultiPoly(ring, {shift: c}) * div
        return MultiPoly(ring, q_terms)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        _, a, b = pair
        return a == b

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_term())
        names = self.ring.names
        return hash(frozenset(
            (tuple((names[i], x) for i, x in enumerate(e) if x), c) for e, c in self.terms.items()
        ))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection -------------------------------------------------------

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, self.field.zero)

    def sorted_terms(self) -> list:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: _glex_key(t[0]), reverse=True)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, name: str) -> int:
        if name not in self.ring._index:
            return 0 if self.terms else -1
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def coeff(self, exps) -> Scalar:
        if isinstance(exps, Mapping):
            if any(n not in self.ring._index for n, e in exps.items() if e):
                return self.field.zero
            exps = {n: e for n, e in exps.items() if n in self.ring._index}
        return self.terms.get(self.ring._exponent_vector(exps), self.field.zero)

    def coeff_in(self, name: str, k: int) -> "MultiPoly":
        """Coefficient of ``name**k`` as a polynomial in the remaining variables."""
        i = self.ring.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                out[e[:i] + (0,) + e[i + 1:]] = c
        return MultiPoly(self.ring, out)

    def variables(self) -> set:
        return {self.ring.names[i] for e in self.terms for i, x in enumerate(e) if x}

    def eval(self, assignment: Mapping[str, object]):
        """Substitute every occurring variable; returns a field element."""
        missing = self.variables() - set(assignment)
        if missing:
            raise KeyError(f"no value for variable(s) {sorted(missing)}")
        field = self.field
        values = [field(assignment[n]) if n in assignment else None for n in self.ring.names]
        total = field.zero
        for e, c in self.terms.items():
            term = c
            for v, x in zip(values, e):
                if x:
                    term = term * v ** x
            total = total + term
        return total

    def subs(self, assignment: Mapping[str, object]) -> "MultiPoly":
        """Partial substitution of scalars; result stays in the same ring."""
        field = self.field
        idx = {self.ring.index(n): field(v) for n, v in assignment.items() if n in self.ring._index}
        out = self.ring.zero
        for e, c in self.terms.items():
            coeff = c
            rest = list(e)
            for i, v in idx.items():
                if rest[i]:
                    coeff = coeff * v ** rest[i]
                    rest[i] = 0
            out = out + MultiPoly(self.ring, {tuple(rest): coeff} if coeff else {})
        return out

    def is_even(self) -> bool:
        """Invariant under X -> -X for every variable (all total degrees even)."""
        return all(sum(e) % 2 == 0 for e in self.terms)

    # -- display / serialization -----------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if x == 1 else f"{n}^{x}" for n, x in zip(self.ring.names, e) if x
            )
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}" if " " in cs else f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list:
        return [
            {"exponents": list(e), "coeff": self.field.format_scalar(c)} for e, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, ring: PolyRing, data: Iterable[Mapping]) -> "MultiPoly":
        return cls.from_terms(
            ring, {tuple(t["exponents"]): ring.field.parse_scalar(str(t["coeff"])) for t in data}
        )


def make_variable(ring: FieldSpec | PolyRing, name: str) -> MultiPoly:
    """The generator ``name`` of ``ring`` extended by ``name``; errors if already bound."""
    if isinstance(ring, FieldSpec):
        ring = PolyRing(ring)
    return ring.extend(name).gen(name)


def poly_eval(p: MultiPoly, assignment: Mapping[str, object]):
    return p.eval(assignment)


def poly_coeff(p: MultiPoly, exps) -> Scalar:
    return p.coeff(exps)
