import pytest
import sympy
from hypothesis import given, settings, strategies as st

from coordcheck import DEGREVLEX, LEX, Ideal, RingPresentation, buchberger, divide, normal_form, step_budget
from coordcheck.errors import BudgetExhaustedError, PresentationMismatchError
from coordcheck.groebner import buchberger_with_cofactors, contains, ideal_equals, is_unit_ideal, s_polynomial

import generators as gen

L = RingPresentation(("x", "y", "z"), LEX)
lx, ly, lz = L.gens()
D = RingPresentation(("x", "y", "z"))
x, y, z = D.gens()
SPHERE = D.quotient([x**2 + y**2 + z**2 - 1])


def to_sympy(p):
    syms = sympy.symbols(p.ring.variables)
    env = dict(zip(p.ring.variables, syms))
    return sympy.sympify(str(p).replace("^", "**"), locals=env)


def test_normal_form_examples():
    assert normal_form(x**2, [x]) == 0
    assert normal_form(x**2 + y, [x]) == y
    assert normal_form(x**2 + y**2 + z**2, [x**2 + y**2 + z**2 - 1]) == 1


def test_buchberger_examples():
    assert buchberger([lx]) == [lx]
    assert buchberger([D.constant(2)]) == [D.one()]
    assert buchberger([lx - ly, ly - lz]) == [lx - lz, ly - lz]
    assert buchberger([]) == []


def test_buchberger_matches_sympy_fixed():
    # frozen from sympy.groebner(..., order="lex")
    f, g = -lx**2 + ly, -lx**3 + lz
    assert buchberger([f, g]) == [lx**2 - ly, lx * ly - lz, lx * lz - ly**2, ly**3 - lz**2]


def test_membership_examples():
    assert contains(Ideal([x, y]), x + y)
    assert not contains(Ideal([x**2]), x)
    assert contains(Ideal([y, z, x**2 + y**2 + z**2 - 1]), x**2 - 1)


def test_unit_examples():
    B = SPHERE.extend(("U", "V", "W"))
    rel_free = [B.zero(), B.gen("z"), -B.gen("y")]
    assert not is_unit_ideal(Ideal(rel_free, B))
    assert is_unit_ideal(Ideal([D.one()]))
    assert is_unit_ideal(Ideal([x, x - 1]))


def test_ideal_equals_examples():
    assert ideal_equals(Ideal([x, y]), Ideal([x + y, y]))
    assert not ideal_equals(Ideal([x]), Ideal([x**2]))
    with pytest.raises(PresentationMismatchError):
        ideal_equals(Ideal([x]), Ideal([lx]))


def test_quotient_membership():
    # in Q[x,y,z]/(sphere), x^2 - 1 = -(y^2 + z^2)
    I = Ideal([SPHERE.gen("y"), SPHERE.gen("z")], SPHERE)
    a = SPHERE.gen("x")
    assert I.contains(a**2 - 1)
    assert not I.is_unit()
    assert [str(b) for b in I.basis] == ["x^2 - 1", "y", "z"]


def test_unit_certificate():
    I = Ideal([x * y - 1, x])
    cert = I.unit_certificate
    assert cert.verify()
    assert cert.combination() == 1
    assert str(cert) == "1 = (-1)*(x*y - 1) + (y)*(x)"
    assert Ideal([x]).unit_certificate is None


def test_certificate_uses_relations():
    a, b, c = SPHERE.gens()
    I = Ideal([a, b, c], SPHERE)
    cert = I.unit_certificate
    assert cert.verify()
    assert "relation" in cert.labels


def test_step_budget():
    gens = [x**2 * y - z**3, x * y**2 - z, x * y * z - 1]
    with step_budget(2):
        with pytest.raises(BudgetExhaustedError):
            buchberger(gens)
    assert buchberger(gens)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["lex", "degrevlex"]))
def test_against_sympy(seed, order):
    rng = gen.seeded(seed)
    R = gen.ring(3, LEX if order == "lex" else DEGREVLEX)
    gens = [gen.nonzero_poly(rng, R, 3, rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
    ours = buchberger(gens)
    syms = sympy.symbols(R.variables)
    theirs = sympy.groebner([to_sympy(g) for g in gens], *syms, order="lex" if order == "lex" else "grevlex", domain="QQ")
    assert [sympy.expand(to_sympy(b)) for b in ours] == [sympy.expand(e) for e in theirs.exprs]


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_cofactors_reconstruct_basis(seed):
    rng = gen.seeded(seed)
    R = gen.ring(3)
    gens = [gen.nonzero_poly(rng, R, 2, 2) for _ in range(3)]
    basis, cofs = buchberger_with_cofactors(gens)
    for b, row in zip(basis, cofs):
        assert sum((c * g for c, g in zip(row, gens)), R.zero()) == b


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_s_polynomials_reduce_to_zero(seed):
    rng = gen.seeded(seed)
    R = gen.ring(3)
    basis = buchberger([gen.nonzero_poly(rng, R, 3) for _ in range(rng.randint(1, 3))])
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            assert normal_form(s_polynomial(basis[i], basis[j]), basis) == 0


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_division_identity(seed):
    rng = gen.seeded(seed)
    R = gen.ring(3)
    f = gen.poly(rng, R, 4, 5)
    divisors = [gen.nonzero_poly(rng, R, 2) for _ in range(rng.randint(1, 3))]
    qs, r = divide(f, divisors)
    assert sum((q * g for q, g in zip(qs, divisors)), R.zero()) + r == f
    lms = [g.leading_monomial() for g in divisors]
    for m in r.terms:
        assert not any(all(a <= b for a, b in zip(lm, m)) for lm in lms)
