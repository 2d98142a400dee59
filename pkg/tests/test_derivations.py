import pytest
import sympy
from hypothesis import given, settings, strategies as st

from coordcheck import (
    Derivation,
    Matrix,
    RingPresentation,
    apply,
    determinant,
    find_slice,
    is_fixed_point_free,
    is_locally_nilpotent,
    is_retraction,
    jacobian_derivation,
    jacobian_matrix,
    minors,
)
from coordcheck.errors import ArityError, IllDefinedDerivationError
from coordcheck.verdict import Status

import generators as gen

P = RingPresentation(("X", "Y"))
X, Y = P.gens()

SPHERE = RingPresentation(("x", "y", "z"))
SPHERE = SPHERE.quotient([SPHERE.gen("x") ** 2 + SPHERE.gen("y") ** 2 + SPHERE.gen("z") ** 2 - 1])
B = SPHERE.extend(("U", "V", "W"))
x, y, z, U, V, W = B.gens()
s = x * U + y * V + z * W
PHI = {"U": U - x * s, "V": V - y * s, "W": W - z * s}


def test_apply_examples():
    d = Derivation({"X": P.zero(), "Y": P.one()})
    assert apply(d, Y**2) == 2 * Y
    assert d(P.constant(7)) == 0
    assert Derivation({"X": Y, "Y": 0}, P).apply(X * Y) == Y**2


def test_missing_images_default_to_zero():
    d = Derivation({"Y": P.one()}, P)
    assert d(X) == 0


def test_jacobian_matrix_examples():
    assert jacobian_matrix([X, Y], ["X", "Y"]) == Matrix([[P.one(), P.zero()], [P.zero(), P.one()]])
    assert jacobian_matrix([z * V - y * W], ["U", "V", "W"]).rows == ((0, z, -y),)
    T = RingPresentation(("t", "X", "Y"))
    t, tX, tY = T.gens()
    m = jacobian_matrix([tY + t * tX**2 * tY**2, tX], ["X", "Y"])
    assert m.rows == ((2 * t * tX * tY**2, 1 + 2 * t * tX**2 * tY), (1, 0))


def test_determinant_examples():
    R = RingPresentation(("x", "y", "z"))
    a, b, c = R.gens()
    assert determinant(Matrix([[R.one(), R.zero()], [R.zero(), R.one()]])) == 1
    assert determinant(Matrix([[a, b], [a, b]])) == 0
    m = Matrix([[R.zero(), c, -b], [a, b, c], [R.one(), R.zero(), R.zero()]])
    # cofactor expansion along the last row: 1 * (c*c - (-b)*b)
    assert determinant(m) == b**2 + c**2
    assert determinant(m, "cofactor") == b**2 + c**2
    with pytest.raises(ArityError):
        determinant(Matrix([[a, b]]))


def test_minors_examples():
    R = RingPresentation(("x", "y", "z"))
    a, b, c = R.gens()
    assert minors(Matrix([[R.zero(), c, -b]]), 1) == [0, c, -b]
    assert minors(Matrix([[R.one(), R.zero()], [R.zero(), R.one()]]), 2) == [1]
    T = RingPresentation(("X1", "X2", "T1"))
    m = jacobian_matrix([T.gen("X1"), T.gen("T1")], T.variables)
    # column pairs (1,2), (1,3), (2,3)
    assert minors(m, 2) == [0, 1, 0]


def test_jacobian_derivation_examples():
    d = jacobian_derivation([X], ["X", "Y"])
    assert d.images == {"X": P.zero(), "Y": P.one()}
    R = RingPresentation(("X1", "X2", "X3"))
    a, b, c = R.gens()
    d = jacobian_derivation([a * b, c], R.variables)
    # the reference pattern is {-X1, X2, 0}; this convention is its negative
    assert d.image_list() == [a, -b, 0]
    assert d(a * b) == 0 and d(c) == 0


def test_jacobian_derivation_arity():
    with pytest.raises(ArityError):
        jacobian_derivation([X, Y], ["X", "Y"])


def test_fpf_examples():
    v = is_fixed_point_free(Derivation({"X": 0, "Y": 1}, P))
    assert v.status is Status.PROVEN and v.witness.verify()
    v = is_fixed_point_free(Derivation({"X": Y, "Y": -X}, P))
    assert v.status is Status.REFUTED
    assert list(v.witness) == [X, Y]
    g = z * V - y * W
    v = is_fixed_point_free(jacobian_derivation([g, s], ["U", "V", "W"], B))
    assert v.refuted
    assert [str(b) for b in v.witness] == ["x^2 - 1", "y", "z"]


def test_hochster_jacobian_derivation():
    d = jacobian_derivation([z * V - y * W, s], ["U", "V", "W"], B)
    # frozen from sympy det of the 3x3 Jacobian with a unit last row
    assert d.image_list() == [0, 0, 0, y**2 + z**2, -x * y, -x * z]
    v = is_locally_nilpotent(d, 8)
    assert v.proven


def test_lnd_examples():
    v = is_locally_nilpotent(Derivation({"X": Y, "Y": 0}, P), 8)
    assert v.proven and v.witness == {"X": 2, "Y": 1}
    v = is_locally_nilpotent(Derivation({"X": 1, "Y": X**2}, P), 8)
    # Y -> X^2 -> 2X -> 2 -> 0
    assert v.proven and v.witness == {"X": 2, "Y": 4}
    v = is_locally_nilpotent(Derivation({"X": 1, "Y": X**2}, P), 3)
    assert v.exhausted and v.witness == 3
    for bound in (1, 2, 5, 17, 64):
        v = is_locally_nilpotent(Derivation({"X": X}, P), bound)
        assert v.status is Status.EXHAUSTED and v.witness == bound


def test_slice_examples():
    assert find_slice(Derivation({"X": 0, "Y": 1}, P), 1) == Y
    for bound in (0, 1, 3):
        assert find_slice(Derivation({"X": Y, "Y": 0}, P), bound) is None
    g = find_slice(Derivation({"X": 2}, P), 1)
    assert g == X / 2


def test_slice_of_field_coordinate():
    d = jacobian_derivation([Y + X**2], ["X", "Y"])
    assert d.images == {"X": P.constant(-1), "Y": 2 * X}
    g = find_slice(d, 2)
    assert d(g) == 1


def test_retraction_examples():
    v = is_retraction(PHI, B)
    assert v.proven
    # s is sent to zero modulo the sphere relation
    from coordcheck.groebner import reduce_mod_relations

    assert reduce_mod_relations(s.substitute(PHI)) == 0
    assert is_retraction({}, B).proven
    v = is_retraction({"U": V, "V": W, "W": U}, B)
    assert v.refuted and v.witness["variable"] == "U"


def test_retraction_must_fix_base():
    v = is_retraction({"x": y}, B)
    assert v.refuted


def test_ill_defined_derivation():
    with pytest.raises(IllDefinedDerivationError):
        Derivation({"x": B.one()}, B)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_bareiss_matches_sympy(seed):
    rng = gen.seeded(seed)
    R = gen.ring(3)
    m = gen.matrix(rng, R, rng.randint(1, 4))
    syms = sympy.symbols(R.variables)
    env = dict(zip(R.variables, syms))
    sm = sympy.Matrix([[sympy.sympify(str(e).replace("^", "**"), locals=env) for e in row] for row in m.rows])
    assert sympy.expand(sympy.sympify(str(determinant(m)).replace("^", "**"), locals=env) - sm.det()) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_leibniz_and_jacobian_alternation(seed):
    rng = gen.seeded(seed)
    R = gen.ring(3)
    d = Derivation({v: gen.poly(rng, R, 2) for v in R.variables}, R)
    f, g = gen.poly(rng, R), gen.poly(rng, R)
    assert d(f * g) == f * d(g) + g * d(f)
    fs = [gen.poly(rng, R, 2) for _ in range(2)]
    j = jacobian_derivation(fs, R.variables)
    for f in fs:
        assert j(f) == 0
