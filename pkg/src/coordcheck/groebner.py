"""Buchberger's algorithm, normal forms and ideal predicates.

Quotient presentations are handled by appending the relations of the
ambient ring to every ideal computation, so one engine serves both
``Q[X]`` and ``Q[X]/J``.
"""

from __future__ import annotations

import heapq
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import BudgetExhaustedError, PresentationMismatchError
from .poly import (
    Monomial,
    coeff,
    qdiv,
    MonomialOrder,
    Polynomial,
    RingPresentation,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

_step_budget: ContextVar[Optional[int]] = ContextVar("step_budget", default=None)


@contextmanager
def step_budget(steps: Optional[int]):
    """Cap the number of S-pair reductions of each Groebner computation."""
    token = _step_budget.set(steps)
    try:
        yield
    finally:
        _step_budget.reset(token)


Terms = Dict[Monomial, Fraction]


def _reduce(f: Terms, basis: Sequence[Tuple[Monomial, Fraction, Terms]], key, track: bool):
    """Fully reduce ``f`` by ``basis``; returns (quotients or None, remainder)."""
    p = dict(f)
    rem: Terms = {}
    quotients = [dict() for _ in basis] if track else None
    heap = [(tuple(-k for k in key(m)), m) for m in p]
    heapq.heapify(heap)
    queued = set(p)
    while heap:
        _, m = heapq.heappop(heap)
        queued.discard(m)
        c = p.get(m)
        if c is None:
            continue
        for i, (lm, lc, g) in enumerate(basis):
            if mono_divides(lm, m):
                shift = mono_div(m, lm)
                qc = c if lc == 1 else qdiv(c, lc)
                for gm, gc in g.items():
                    k = mono_mul(gm, shift)
                    v = p.get(k, 0) - qc * gc
                    if v:
                        p[k] = v
                        if k not in queued:
                            queued.add(k)
                            heapq.heappush(heap, (tuple(-x for x in key(k)), k))
                    else:
                        p.pop(k, None)
                if track:
                    q = quotients[i]
                    v = q.get(shift, 0) + qc
                    if v:
                        q[shift] = v
                    else:
                        q.pop(shift, None)
                break
        else:
            rem[m] = c
            del p[m]
    return quotients, rem


def _lead(terms: Terms, key) -> Tuple[Monomial, Fraction]:
    m = max(terms, key=key)
    return m, terms[m]


def _common_ring(polys: Sequence[Polynomial]) -> RingPresentation:
    ring = polys[0].ring
    for p in polys[1:]:
        if p.ring is not ring and p.ring != ring:
            raise PresentationMismatchError(f"polynomials over {ring} and {p.ring}")
    return ring


def divide(
    f: Polynomial, basis: Sequence[Polynomial], order: Optional[MonomialOrder] = None
) -> Tuple[List[Polynomial], Polynomial]:
    """Multivariate division: ``f = sum(q_i * basis_i) + r``.

    Returns ``(quotients, r)`` where no term of ``r`` is divisible by a
    leading monomial of ``basis``.
    """
    ring = f.ring
    basis = [ring.convert(b) for b in basis]
    key = (order or ring.order).key
    data = [(*_lead(b.terms, key), b.terms) for b in basis if b]
    quotients, rem = _reduce(f.terms, data, key, True)
    out, it = [], iter(quotients)
    for b in basis:
        out.append(Polynomial._raw(ring, next(it)) if b else ring.zero())
    return out, Polynomial._raw(ring, rem)


def normal_form(
    f: Polynomial, basis: Sequence[Polynomial], order: Optional[MonomialOrder] = None
) -> Polynomial:
    ring = f.ring
    key = (order or ring.order).key
    data = [(*_lead(b.terms, key), b.terms) for b in (ring.convert(b) for b in basis) if b]
    return Polynomial._raw(ring, _reduce(f.terms, data, key, False)[1])


def s_polynomial(f: Polynomial, g: Polynomial, order: Optional[MonomialOrder] = None) -> Polynomial:
    order = order or f.ring.order
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    lcm = mono_lcm(mf, mg)
    return f.mul_term(mono_div(lcm, mf), qdiv(1, coeff(cf))) - g.mul_term(mono_div(lcm, mg), qdiv(1, coeff(cg)))


class _Engine:
    """State of one Buchberger run, optionally tracking cofactors."""

    def __init__(self, ring, gens, key, track):
        self.ring = ring
        self.key = key
        self.track = track
        self.polys: List[Terms] = []
        self.leads: List[Monomial] = []
        self.cofactors: List[List[Polynomial]] = []
        self.ninputs = len(gens)
        for i, g in enumerate(gens):
            cof = None
            if track:
                cof = [ring.zero()] * self.ninputs
                cof[i] = ring.one()
            self._append(dict(g.terms), cof)

    def _append(self, terms: Terms, cof):
        lm, lc = _lead(terms, self.key)
        inv = qdiv(1, lc)
        self.polys.append({m: coeff(c * inv) for m, c in terms.items()})
        self.leads.append(lm)
        if self.track:
            self.cofactors.append([c.scale(inv) for c in cof])

    def _combine(self, cof, quotients, indices):
        out = list(cof)
        for q, i in zip(quotients, indices):
            if q:
                qp = Polynomial._raw(self.ring, q)
                for k, c in enumerate(self.cofactors[i]):
                    if c:
                        out[k] = out[k] - qp * c
        return out

    def reduce_against(self, terms: Terms, indices: Sequence[int], cof=None, always=False):
        indices = list(indices)
        data = [(self.leads[i], 1, self.polys[i]) for i in indices]
        quotients, rem = _reduce(terms, data, self.key, self.track)
        if self.track and (rem or always):
            cof = self._combine(cof, quotients, indices)
        return rem, cof

    def run(self):
        budget = _step_budget.get()
        steps = 0
        n = len(self.polys)
        pairs = {(i, j) for j in range(n) for i in range(j)}
        while pairs:
            i, j = min(
                pairs, key=lambda p: (sum(mono_lcm(self.leads[p[0]], self.leads[p[1]])), p[1], p[0])
            )
            pairs.discard((i, j))
            li, lj = self.leads[i], self.leads[j]
            lcm = mono_lcm(li, lj)
            if lcm == mono_mul(li, lj):
                continue
            if self._chain_criterion(i, j, lcm, pairs):
                continue
            steps += 1
            if budget is not None and steps > budget:
                raise BudgetExhaustedError(f"budget exhausted after {budget} S-pair reductions")
            si, sj = mono_div(lcm, li), mono_div(lcm, lj)
            s: Terms = {}
            for m, c in self.polys[i].items():
                s[mono_mul(m, si)] = c
            for m, c in self.polys[j].items():
                k = mono_mul(m, sj)
                v = s.get(k, 0) - c
                if v:
                    s[k] = v
                else:
                    s.pop(k, None)
            cof = None
            if self.track:
                cof = [
                    a.mul_term(si) - b.mul_term(sj)
                    for a, b in zip(self.cofactors[i], self.cofactors[j])
                ]
            rem, cof = self.reduce_against(s, range(len(self.polys)), cof)
            if rem:
                new = len(self.polys)
                self._append(rem, cof)
                pairs |= {(k, new) for k in range(new)}
        return self.reduced()

    def _chain_criterion(self, i, j, lcm, pairs):
        for k in range(len(self.polys)):
            if k == i or k == j:
                continue
            if not mono_divides(self.leads[k], lcm):
                continue
            if (min(i, k), max(i, k)) in pairs or (min(j, k), max(j, k)) in pairs:
                continue
            return True
        return False

    def reduced(self):
        n = len(self.polys)
        keep = []
        for i in range(n):
            li = self.leads[i]
            redundant = False
            for j in range(n):
                if j == i or not mono_divides(self.leads[j], li):
                    continue
                if self.leads[j] != li or j < i:
                    redundant = True
                    break
            if not redundant:
                keep.append(i)
        result = []
        for i in keep:
            others = [k for k in keep if k != i]
            terms = self.polys[i]
            lm = self.leads[i]
            tail = {m: c for m, c in terms.items() if m != lm}
            rem, cof = self.reduce_against(
                tail, others, self.cofactors[i] if self.track else None, always=True
            )
            rem[lm] = 1
            self.polys[i] = rem
            if self.track:
                self.cofactors[i] = cof
            result.append(i)
        result.sort(key=lambda i: self.key(self.leads[i]), reverse=True)
        basis = [Polynomial._raw(self.ring, self.polys[i]) for i in result]
        cofs = [self.cofactors[i] for i in result] if self.track else None
        return basis, cofs


def _prepare(gens: Iterable[Polynomial]):
    return [g for g in gens if g]


def buchberger(
    gens: Sequence[Polynomial], order: Optional[MonomialOrder] = None
) -> List[Polynomial]:
    """Reduced, monic Groebner basis of ``gens``, sorted by decreasing leading monomial."""
    gens = _prepare(gens)
    if not gens:
        return []
    ring = _common_ring(gens)
    key = (order or ring.order).key
    return _Engine(ring, gens, key, False).run()[0]


def buchberger_with_cofactors(
    gens: Sequence[Polynomial], order: Optional[MonomialOrder] = None
) -> Tuple[List[Polynomial], List[List[Polynomial]]]:
    """Reduced basis plus, for each basis element ``b``, cofactors ``c`` with
    ``b = sum(c_k * gens_k)`` over the nonzero inputs, in input order."""
    gens = _prepare(gens)
    if not gens:
        return [], []
    ring = _common_ring(gens)
    key = (order or ring.order).key
    return _Engine(ring, gens, key, True).run()


@dataclass(frozen=True)
class UnitCertificate:
    """An explicit identity ``1 = sum(cofactor_k * generator_k)``."""

    generators: Tuple[Polynomial, ...]
    cofactors: Tuple[Polynomial, ...]
    labels: Tuple[str, ...]

    def combination(self) -> Polynomial:
        ring = self.generators[0].ring
        total = ring.zero()
        for g, c in zip(self.generators, self.cofactors):
            total = total + g * c
        return total

    def verify(self) -> bool:
        return bool(self.generators) and self.combination() == 1

    def __str__(self):
        parts = [f"({c})*({g})" for g, c in zip(self.generators, self.cofactors) if c]
        return "1 = " + " + ".join(parts)


class Ideal:
    """Ideal of ``Q[X]/J`` generated by ``generators``; zero generators are dropped.

    The reduced Groebner basis of ``generators`` together with the ring's
    relations is computed on first use and cached.
    """

    def __init__(self, generators: Iterable, ring: Optional[RingPresentation] = None):
        generators = list(generators)
        if ring is None:
            polys = [g for g in generators if isinstance(g, Polynomial)]
            if not polys:
                raise ValueError("cannot infer the ring of an ideal without polynomial generators")
            ring = _common_ring(polys)
        self.ring = ring
        self.generators = tuple(g for g in (ring.convert(g) for g in generators) if g)

    def _inputs(self):
        return list(self.generators) + list(self.ring.relations)

    @cached_property
    def basis(self) -> Tuple[Polynomial, ...]:
        return tuple(buchberger(self._inputs()))

    def normal_form(self, f: Polynomial) -> Polynomial:
        return normal_form(self.ring.convert(f), self.basis)

    def contains(self, f) -> bool:
        return not self.normal_form(f)

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0] == 1

    def equals(self, other: "Ideal") -> bool:
        if other.ring != self.ring:
            raise PresentationMismatchError("ideals live in different presentations")
        return self.basis == other.basis

    @cached_property
    def unit_certificate(self) -> Optional[UnitCertificate]:
        """Cofactors expressing 1 in terms of the generators and relations."""
        if not self.is_unit():
            return None
        inputs = self._inputs()
        basis, cofs = buchberger_with_cofactors(inputs)
        labels = tuple(["generator"] * len(self.generators) + ["relation"] * len(self.ring.relations))
        cert = UnitCertificate(tuple(inputs), tuple(cofs[0]), labels)
        if not cert.verify():
            raise AssertionError("cofactor certificate failed to reproduce 1")
        return cert

    def __repr__(self):
        return "Ideal(" + ", ".join(str(g) for g in self.generators) + ")"


def contains(ideal: Ideal, f: Polynomial) -> bool:
    return ideal.contains(f)


def is_unit_ideal(ideal: Ideal) -> bool:
    return ideal.is_unit()


def ideal_equals(a: Ideal, b: Ideal) -> bool:
    return a.equals(b)


@lru_cache(maxsize=256)
def relation_ideal(ring: RingPresentation) -> Ideal:
    return Ideal([], ring)


def reduce_mod_relations(f: Polynomial) -> Polynomial:
    """Normal form of ``f`` modulo the relations of its own presentation."""
    if not f.ring.relations:
        return f
    return relation_ideal(f.ring).normal_form(f)
