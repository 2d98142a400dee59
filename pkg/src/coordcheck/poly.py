"""Sparse multivariate polynomials over the rationals.

A :class:`RingPresentation` names the variables of ``Q[x1, ..., xn] / J``
together with a monomial order; a :class:`Polynomial` is a finite map from
exponent tuples to :class:`fractions.Fraction` coefficients bound to one
presentation.  Arithmetic is carried out in the free ring; the relations
``J`` only enter through ideal computations (see :mod:`coordcheck.groebner`).

Example:
    >>> R = RingPresentation(["x", "y"])
    >>> x, y = R.gens()
    >>> str((x + y) * (x - y))
    'x^2 - y^2'
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from operator import add
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from .errors import (
    NoLeadingTermError,
    PresentationMismatchError,
    UnknownVariableError,
)

Monomial = Tuple[int, ...]
Rational = Fraction
Scalar = Union[int, Fraction]


def coeff(c) -> Scalar:
    """Canonical stored coefficient: ``int`` when integral, else ``Fraction``.

    Integral coefficients stay machine ints because Fraction arithmetic is
    several times slower; accessors hand out ``Fraction`` values.
    """
    if type(c) is int:
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def qdiv(a: Scalar, b: Scalar) -> Scalar:
    """Exact quotient of two stored coefficients."""
    if b == 1:
        return a
    if type(a) is int and type(b) is int:
        return coeff(Fraction(a, b))
    return coeff(a / b)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """Return ``a / b``; the caller guarantees ``b`` divides ``a``."""
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(b: Monomial, a: Monomial) -> bool:
    return all(y <= x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class MonomialOrder:
    """An admissible monomial order.

    ``kind`` is ``"lex"``, ``"degrevlex"`` or ``"block"``.  A block order
    compares the first ``split`` exponents with ``first`` and breaks ties on
    the remaining exponents with ``second``.
    """

    kind: str
    first: Optional["MonomialOrder"] = None
    split: int = 0
    second: Optional["MonomialOrder"] = None

    def __post_init__(self):
        if self.kind not in ("lex", "degrevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block":
            if self.first is None or self.second is None or self.split < 0:
                raise ValueError("block order needs two sub-orders and a split index")

    def key(self, m: Monomial) -> Tuple[int, ...]:
        """Flat integer sort key; larger keys are larger monomials."""
        if self.kind == "lex":
            return m
        if self.kind == "degrevlex":
            return (sum(m),) + tuple(-e for e in reversed(m))
        return self.first.key(m[: self.split]) + self.second.key(m[self.split:])

    def fits(self, nvars: int) -> bool:
        if self.kind != "block":
            return True
        return self.split <= nvars and self.first.fits(self.split) and self.second.fits(nvars - self.split)

    def __str__(self):
        if self.kind == "block":
            return f"block({self.first}, {self.split}, {self.second})"
        return self.kind


LEX = MonomialOrder("lex")
DEGREVLEX = MonomialOrder("degrevlex")


def block_order(first: MonomialOrder, split: int, second: MonomialOrder) -> MonomialOrder:
    return MonomialOrder("block", first, split, second)


class RingPresentation:
    """``Q[variables] / (relations)`` with a monomial order.

    The first ``base_count`` variables belong to the base ring ``R``; the
    rest are the polynomial variables of ``B = R[...]``.  Relations may be
    given as polynomials over any presentation whose variables are a subset
    of ``variables``; they are re-expressed over this presentation.
    """

    __slots__ = ("variables", "order", "base_count", "relations", "_index", "_key", "_hash")

    def __init__(
        self,
        variables: Iterable[str],
        order: MonomialOrder = DEGREVLEX,
        relations: Iterable["Polynomial"] = (),
        base_count: int = 0,
    ):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        if not 0 <= base_count <= len(self.variables):
            raise ValueError("base_count out of range")
        if not order.fits(len(self.variables)):
            raise ValueError(f"order {order} does not fit {len(self.variables)} variables")
        self.order = order
        self.base_count = base_count
        self._index = {v: i for i, v in enumerate(self.variables)}
        rels = []
        for r in relations:
            r = self.convert(r)
            if r:
                rels.append(r)
        self.relations = tuple(rels)
        self._key = (
            self.variables,
            self.order,
            self.base_count,
            tuple(tuple(sorted(r.terms.items())) for r in self.relations),
        )
        self._hash = hash(self._key)

    # presentation-level helpers

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def base_variables(self) -> Tuple[str, ...]:
        return self.variables[: self.base_count]

    @property
    def fibre_variables(self) -> Tuple[str, ...]:
        return self.variables[self.base_count:]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {name!r} in {self}") from None

    def __contains__(self, name) -> bool:
        return name in self._index

    def gen(self, name: str) -> "Polynomial":
        i = self.index(name)
        m = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial._raw(self, {m: 1})

    def gens(self) -> Tuple["Polynomial", ...]:
        return tuple(self.gen(v) for v in self.variables)

    def zero(self) -> "Polynomial":
        return Polynomial._raw(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: Scalar) -> "Polynomial":
        c = coeff(c)
        if not c:
            return self.zero()
        return Polynomial._raw(self, {(0,) * self.nvars: c})

    def convert(self, p: Union["Polynomial", Scalar]) -> "Polynomial":
        """Re-express ``p`` over this presentation, matching variables by name."""
        if not isinstance(p, Polynomial):
            return self.constant(p)
        if p.ring is self:
            return p
        if p.ring.variables == self.variables:
            return Polynomial._raw(self, dict(p.terms))
        positions = []
        for v in p.ring.variables:
            positions.append(self._index.get(v))
        terms = {}
        for m, c in p.terms.items():
            new = [0] * self.nvars
            for e, pos, name in zip(m, positions, p.ring.variables):
                if e:
                    if pos is None:
                        raise UnknownVariableError(f"variable {name!r} is not declared in {self}")
                    new[pos] = e
            terms[tuple(new)] = c
        return Polynomial._raw(self, terms)

    __call__ = convert

    def extend(
        self,
        new_variables: Iterable[str],
        relations: Iterable["Polynomial"] = (),
        order: Optional[MonomialOrder] = None,
    ) -> "RingPresentation":
        """Return ``self[new_variables] / (relations)`` flattened into one presentation."""
        new_variables = tuple(new_variables)
        return RingPresentation(
            self.variables + new_variables,
            order if order is not None else DEGREVLEX,
            tuple(self.relations) + tuple(relations),
            base_count=self.nvars,
        )

    def quotient(self, relations: Iterable["Polynomial"]) -> "RingPresentation":
        return RingPresentation(
            self.variables, self.order, tuple(self.relations) + tuple(relations), self.base_count
        )

    def with_order(self, order: MonomialOrder) -> "RingPresentation":
        return RingPresentation(self.variables, order, self.relations, self.base_count)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, RingPresentation):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __hash__(self):
        return self._hash

    def __str__(self):
        s = "Q[" + ", ".join(self.variables) + "]"
        if self.relations:
            s += " / (" + ", ".join(str(r) for r in self.relations) + ")"
        return s

    def __repr__(self):
        return f"RingPresentation({list(self.variables)!r}, order={self.order}, base_count={self.base_count})"


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingPresentation, terms: Mapping[Monomial, Scalar] = ()):
        clean: Dict[Monomial, Scalar] = {}
        for m, c in dict(terms).items():
            m = tuple(m)
            if len(m) != ring.nvars or any(e < 0 for e in m):
                raise ValueError(f"bad exponent vector {m} for {ring.nvars} variables")
            c = coeff(c)
            if c:
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self.ring = ring
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: RingPresentation, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        # terms must already be zero-free with canonical coefficients
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    # coercion

    def _coerce(self, other) -> Optional["Polynomial"]:
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise PresentationMismatchError(
                    f"cannot combine polynomials over {self.ring} and {other.ring}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return None

    # arithmetic

    def __add__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        if len(q.terms) > len(self.terms):
            big, small = q.terms, self.terms
        else:
            big, small = self.terms, q.terms
        out = dict(big)
        for m, c in small.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return q + (-self)

    def __mul__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        if not self.terms or not q.terms:
            return self.ring.zero()
        if q.is_constant():
            c = q.terms[(0,) * self.ring.nvars]
            return self.scale(c)
        out: Dict[Monomial, Scalar] = {}
        other_terms = list(q.terms.items())
        for m1, c1 in self.terms.items():
            for m2, c2 in other_terms:
                m = tuple(map(add, m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "Polynomial":
        c = coeff(c)
        if not c:
            return self.ring.zero()
        return Polynomial._raw(self.ring, {m: v * c for m, v in self.terms.items()})

    def mul_term(self, m: Monomial, c: Scalar = 1) -> "Polynomial":
        c = coeff(c)
        if not c:
            return self.ring.zero()
        return Polynomial._raw(
            self.ring, {tuple(map(add, k, m)): v * c for k, v in self.terms.items()}
        )

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("polynomial division by zero")
            return self.scale(qdiv(1, coeff(other)))
        if isinstance(other, Polynomial) and other.is_constant() and other:
            return self.scale(qdiv(1, coeff(other.constant_value())))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # comparison

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (other.ring is self.ring or other.ring == self.ring) and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self.ring.constant(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return Fraction(self.terms.get((0,) * self.ring.nvars, 0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def used_variables(self) -> Tuple[str, ...]:
        used = [False] * self.ring.nvars
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.ring.variables, used) if u)

    def sorted_terms(self, order: Optional[MonomialOrder] = None):
        key = (order or self.ring.order).key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self, order: Optional[MonomialOrder] = None) -> Tuple[Monomial, Fraction]:
        if not self.terms:
            raise NoLeadingTermError("the zero polynomial has no leading term")
        key = (order or self.ring.order).key
        m = max(self.terms, key=key)
        return m, Fraction(self.terms[m])

    def leading_monomial(self, order: Optional[MonomialOrder] = None) -> Monomial:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: Optional[MonomialOrder] = None) -> Fraction:
        return self.leading_term(order)[1]

    def monic(self, order: Optional[MonomialOrder] = None) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(qdiv(1, coeff(self.leading_coefficient(order))))

    # calculus and substitution

    def partial(self, var: str) -> "Polynomial":
        i = self.ring.index(var)
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                out[m[:i] + (e - 1,) + m[i + 1:]] = c * e
        return Polynomial._raw(self.ring, out)

    def substitute(self, mapping: Mapping[str, Union["Polynomial", Scalar]]) -> "Polynomial":
        """Apply the ring endomorphism fixing every unmapped variable."""
        ring = self.ring
        images = {}
        for name, img in mapping.items():
            images[ring.index(name)] = ring.convert(img)
        if not images:
            return self
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = images[i] if e == 1 else power(i, e - 1) * images[i]
            return powers[key]

        result = ring.zero()
        for m, c in self.terms.items():
            kept = tuple(0 if i in images else e for i, e in enumerate(m))
            term = Polynomial._raw(ring, {kept: c})
            for i, e in enumerate(m):
                if e and i in images:
                    term = term * power(i, e)
            result = result + term
        return result

    # printing

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.variables
        parts = []
        for idx, (m, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(names, m) if e
            )
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if idx == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial({self})"


def partial(p: Polynomial, var: str) -> Polynomial:
    return p.partial(var)


def substitute(p: Polynomial, mapping: Mapping[str, Union[Polynomial, Scalar]]) -> Polynomial:
    return p.substitute(mapping)


def leading_term(p: Polynomial, order: Optional[MonomialOrder] = None) -> Tuple[Monomial, Fraction]:
    return p.leading_term(order)


def exact_quotient(p: Polynomial, q: Polynomial) -> Polynomial:
    """Return ``p / q`` when ``q`` divides ``p`` in the free ring.

    Raises :class:`ArithmeticError` when the division leaves a remainder.
    """
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    if q.ring is not p.ring and q.ring != p.ring:
        raise PresentationMismatchError("exact_quotient across presentations")
    key = p.ring.order.key
    lm, lc = q.leading_term()
    rest = p.terms.copy()
    lc = coeff(lc)
    quot: Dict[Monomial, Scalar] = {}
    while rest:
        m = max(rest, key=key)
        if not mono_divides(lm, m):
            raise ArithmeticError(f"{q} does not divide {p}")
        shift = mono_div(m, lm)
        c = qdiv(rest[m], lc)
        quot[shift] = c
        for qm, qc in q.terms.items():
            k = mono_mul(qm, shift)
            v = rest.get(k, 0) - c * qc
            if v:
                rest[k] = v
            else:
                rest.pop(k, None)
    return Polynomial._raw(p.ring, quot)
