"""Random inputs shared by the property tests and the acceptance suite."""

import random
from fractions import Fraction

from coordcheck import Matrix, RingPresentation

# PASS/FAIL lines from the acceptance suite, echoed in the terminal summary
ACCEPTANCE = []


def ring(n, order=None, names=None):
    names = names or tuple(f"x{i}" for i in range(1, n + 1))
    if order is None:
        return RingPresentation(names)
    return RingPresentation(names, order)


def rational(rng, span=3, dens=(1, 1, 1, 2)):
    return Fraction(rng.randint(-span, span), rng.choice(dens))


def monomial(rng, nvars, degree):
    e = [0] * nvars
    for _ in range(rng.randint(0, degree)):
        e[rng.randrange(nvars)] += 1
    return tuple(e)


def poly(rng, R, degree=3, nterms=None, span=3):
    nterms = rng.randint(1, 4) if nterms is None else nterms
    terms = {}
    for _ in range(nterms):
        m = monomial(rng, R.nvars, degree)
        terms[m] = terms.get(m, 0) + rational(rng, span)
    return R.zero() + type(R.zero())(R, terms)


def nonzero_poly(rng, R, degree=3, nterms=None):
    while True:
        p = poly(rng, R, degree, nterms)
        if not p.is_zero():
            return p


def poly_in(rng, gens, degree, nterms, span=3):
    """Random polynomial in the given polynomials (used for coordinate changes)."""
    out = gens[0] * 0
    for _ in range(nterms):
        m = gens[0] * 0 + rng.randint(-span, span)
        for _ in range(rng.randint(0, degree)):
            m = m * rng.choice(gens)
        out = out + m
    return out


def matrix(rng, R, size, degree=2):
    return Matrix([[poly(rng, R, degree, rng.randint(0, 2)) for _ in range(size)] for _ in range(size)])


def invertible_int_matrix(rng, n, span=2):
    from coordcheck.derivations import determinant

    R = RingPresentation(("c",))
    while True:
        rows = [[rng.randint(-span, span) for _ in range(n)] for _ in range(n)]
        if not determinant(Matrix([[R.constant(v) for v in row] for row in rows])).is_zero():
            return rows


def elementary(rng, span=2, max_degree=3):
    """A random elementary automorphism of Q[X1, X2] as a map on pairs."""
    kind = rng.choice(["affine", "lower", "upper"])
    c = lambda: rng.randint(-span, span)
    if kind == "affine":
        while True:
            a, b, cc, d = c(), c(), c(), c()
            if a * d - b * cc:
                break
        s, t = c(), c()
        return lambda u, v: (u * a + v * b + s, u * cc + v * d + t)
    coeffs = [c() for _ in range(rng.randint(1, max_degree) + 1)]
    unit = rng.choice([1, -1, 2, -2])
    if kind == "lower":
        return lambda u, v: (u * unit, v * unit + sum((u ** k * co for k, co in enumerate(coeffs)), u * 0))
    return lambda u, v: (u * unit + sum((v ** k * co for k, co in enumerate(coeffs)), v * 0), v * unit)


def tame_coordinate(rng, R, steps=5):
    u, v = R.gens()
    for _ in range(rng.randint(1, steps)):
        u, v = elementary(rng)(u, v)
    return u, v


def seeded(seed):
    return random.Random(seed)
