import pytest

from coordcheck import (
    Conclusion,
    RingPresentation,
    corollary_b_report,
    field_coordinate_2var,
    parse,
    theorem_a_check,
)
from coordcheck.criterion import FPF_LND, LND_SLICE, MINORS, PARTIALS
from coordcheck.errors import ArityError
from coordcheck.verdict import Status

SPHERE = RingPresentation(("x", "y", "z"))
SPHERE = SPHERE.quotient([SPHERE.gen("x") ** 2 + SPHERE.gen("y") ** 2 + SPHERE.gen("z") ** 2 - 1])
B = SPHERE.extend(("U", "V", "W"))
x, y, z, U, V, W = B.gens()
s = x * U + y * V + z * W
g = z * V - y * W
h = y * U - x * V

AB = RingPresentation(("a", "b"))
AB = AB.quotient([AB.gen("a") ** 3 - AB.gen("b") ** 2]).extend(("X", "Y1", "Y2"))


def test_hochster_negative():
    for f, basis in ((g, ["x^2 - 1", "y", "z"]), (h, ["z^2 - 1", "x", "y"])):
        rep = theorem_a_check(f, B, stably_polynomial=True)
        assert rep.conclusion is Conclusion.NOT_RESIDUAL
        assert rep.conditions[PARTIALS].refuted
        assert [str(b) for b in rep.conditions[PARTIALS].witness] == basis


def test_hochster_without_stably_flag_is_inconclusive():
    rep = theorem_a_check(g, B)
    assert rep.conclusion is Conclusion.INCONCLUSIVE
    assert rep.conditions[PARTIALS].refuted


def test_hochster_with_stable_variable():
    for f in (g, h):
        rep = corollary_b_report(f, None, [s], B, lnd_bound=8)
        assert rep.conclusion is Conclusion.NOT_RESIDUAL
        assert all(rep.conditions[k].refuted for k in (PARTIALS, FPF_LND, MINORS, LND_SLICE))
        assert all(rep.identities.values())
        assert rep.kernel["lnd"].proven


def test_hochster_needs_stable_variables():
    with pytest.raises(ArityError):
        corollary_b_report(g, None, [], B)


def test_asanuma_bhatwadekar_positive():
    rep = theorem_a_check(AB.gen("X"), AB, generic_asserted=True)
    assert rep.conclusion is Conclusion.RESIDUAL
    cert = rep.conditions[PARTIALS].witness
    assert cert.verify()
    assert theorem_a_check(AB.gen("X"), AB).conclusion is Conclusion.INCONCLUSIVE


def test_trivial_coordinate():
    R = RingPresentation(("X1", "X2"))
    rep = theorem_a_check(R.gen("X1"), R, generic_asserted=True)
    assert rep.conclusion is Conclusion.RESIDUAL


def test_equivalence_report_coordinate():
    R = RingPresentation(("X1", "X2", "T1"))
    rep = corollary_b_report(R.gen("X1"), ["X1", "X2", "T1"], ["T1"], R, generic_asserted=True)
    assert all(v.status is Status.PROVEN for v in rep.conditions.values())
    assert rep.conclusion is Conclusion.RESIDUAL
    assert rep.conclusion.exit_code == 0


def test_equivalence_report_square():
    R = RingPresentation(("X1", "X2", "T1"))
    rep = corollary_b_report(R.gen("X1") ** 2, ["X1", "X2", "T1"], ["T1"], R)
    assert rep.conditions[PARTIALS].refuted
    assert [str(b) for b in rep.conditions[PARTIALS].witness] == ["X1"]
    assert rep.conclusion is Conclusion.NOT_RESIDUAL
    assert rep.conclusion.exit_code == 1


def test_minors_identity_example():
    R = RingPresentation(("X1", "X2", "X3"))
    a, b, c = R.gens()
    rep = corollary_b_report(a * b, None, [c], R)
    assert rep.identities["minors ideal = derivation image ideal"]


def test_field_coordinate_2var():
    P = RingPresentation(("X", "Y"))
    X, Y = P.gens()
    v = field_coordinate_2var(Y + X**2)
    assert v.proven
    assert v.witness["derivation"].images == {"X": P.constant(-1), "Y": 2 * X}
    assert v.witness["derivation"](v.witness["slice"]) == 1
    assert field_coordinate_2var(X).proven
    v = field_coordinate_2var(X**2)
    assert v.refuted
    assert [str(b) for b in v.witness["fpf"].witness] == ["X"]
    with pytest.raises(ArityError):
        field_coordinate_2var(B.gen("U"))


def test_report_records_hypotheses():
    rep = theorem_a_check(g, B, stably_polynomial=True, generic_asserted=True)
    joined = " ".join(rep.hypotheses)
    assert "stably polynomial" in joined
    assert "Q" in joined
    assert "asserted" in joined


def test_script_subject_conversion():
    sc = parse("ring B = Q[X1,X2]; let F = X1 + X2^2;")
    rep = theorem_a_check(sc.bindings["F"], sc.rings["B"], generic_asserted=True)
    assert rep.conclusion is Conclusion.RESIDUAL
