"""Residual-coordinate decision procedures assembled from the kernel.

``theorem_a_check`` runs the one-directional unit-ideal test on the partial
derivatives of F.  ``corollary_b_report`` covers the stably polynomial
setting ``A[T] = R[X]``, where the partials test, the Jacobian derivation
conditions and the minors test are all equivalent.  ``field_coordinate_2var``
decides whether F is a coordinate of ``Q[X, Y]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Union

from .derivations import (
    DEFAULT_LND_BOUND,
    DEFAULT_SLICE_DEGREE,
    find_slice,
    is_fixed_point_free,
    is_locally_nilpotent,
    jacobian_derivation,
    jacobian_matrix,
    minors,
)
from .errors import ArityError, UnknownVariableError
from .groebner import Ideal
from .poly import Polynomial, RingPresentation
from .verdict import Status, Verdict, exhausted, proven, refuted

PARTIALS = "I-partials-unit"
LND_SLICE = "IV-lnd-with-slice"
FPF_LND = "V-fpf-lnd"
MINORS = "VI-minors-unit"

FIELD_NOTE = "coefficients are exact rationals (Q); examples stated over R or C are computed over Q"
RETRACT_NOTE = "A is a retract of B with fibre transcendence degree 2 (assumed, not checked)"
GENERIC_NOTE = "A (x) Qt(R/P) = Qt(R/P)[F]^[1] for every minimal prime P (asserted by user)"
STABLY_NOTE = "stably polynomial structure A[T] = R[X] asserted by user"
MEMBER_NOTE = "F lies in the subalgebra A (asserted; not checkable without a presentation of A)"


class Conclusion(str, Enum):
    RESIDUAL = "ResidualCoordinate"
    NOT_RESIDUAL = "NotResidualCoordinate"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value

    @property
    def exit_code(self) -> int:
        return {"ResidualCoordinate": 0, "NotResidualCoordinate": 1, "Inconclusive": 2}[self.value]


@dataclass
class CriterionReport:
    subject: Polynomial
    conditions: Dict[str, Verdict]
    conclusion: Conclusion
    hypotheses: List[str]
    reason: str
    identities: Dict[str, bool] = field(default_factory=dict)
    # raw kernel verdicts behind the conditions (fpf, lnd)
    kernel: Dict[str, Verdict] = field(default_factory=dict)


def _partials_verdict(f: Polynomial, variables: Sequence[str]) -> Verdict:
    ideal = Ideal([f.partial(v) for v in variables], f.ring)
    if ideal.is_unit():
        return proven(ideal.unit_certificate, "partial derivatives generate the unit ideal")
    return refuted(ideal.basis, "reduced basis of the partials ideal is not {1}")


def _check_subject(f: Polynomial, ring: Optional[RingPresentation]) -> Polynomial:
    if ring is None:
        return f
    if f.ring != ring:
        try:
            return ring.convert(f)
        except UnknownVariableError as exc:
            raise UnknownVariableError(f"subject mentions undeclared variables: {exc}") from None
    return f


def _conclude(partials: Verdict, generic: bool, stably: bool):
    if partials.proven:
        if generic:
            return Conclusion.RESIDUAL, "partial derivatives generate the unit ideal and F is a generic coordinate"
        return (
            Conclusion.INCONCLUSIVE,
            "partial derivatives generate the unit ideal, but the generic-coordinate hypothesis was not asserted",
        )
    if stably:
        return (
            Conclusion.NOT_RESIDUAL,
            "partials ideal is not the unit ideal; in the stably polynomial setting this is equivalent "
            "to F not being a residual coordinate",
        )
    return (
        Conclusion.INCONCLUSIVE,
        "partials ideal is not the unit ideal, but the criterion is sufficient only; "
        "a negative answer needs the stably-polynomial hypothesis",
    )


def theorem_a_check(
    f: Polynomial,
    ring: Optional[RingPresentation] = None,
    generic_asserted: bool = False,
    stably_polynomial: bool = False,
    variables: Optional[Sequence[str]] = None,
) -> CriterionReport:
    """Unit-ideal test on ``(dF/dX_1, ..., dF/dX_n)B``.

    The derivatives are taken with respect to ``variables`` (default: the
    polynomial variables of the presentation, i.e. everything outside the
    base ring).  A positive test concludes ``ResidualCoordinate`` only when
    the generic-coordinate hypothesis is asserted; a negative test concludes
    ``NotResidualCoordinate`` only under ``stably_polynomial``.
    """
    f = _check_subject(f, ring)
    ring = f.ring
    variables = tuple(variables) if variables is not None else ring.fibre_variables
    for v in variables:
        ring.index(v)
    partials = _partials_verdict(f, variables)
    conclusion, reason = _conclude(partials, generic_asserted, stably_polynomial)
    hypotheses = [RETRACT_NOTE, MEMBER_NOTE]
    if generic_asserted:
        hypotheses.append(GENERIC_NOTE)
    if stably_polynomial:
        hypotheses.append(STABLY_NOTE)
    hypotheses.append(FIELD_NOTE)
    return CriterionReport(f, {PARTIALS: partials}, conclusion, hypotheses, reason)


def _resolve_t(t_vars, ring: RingPresentation) -> List[Polynomial]:
    out = []
    for t in t_vars:
        out.append(ring.gen(t) if isinstance(t, str) else ring.convert(t))
    return out


def corollary_b_report(
    f: Polynomial,
    x_vars: Optional[Sequence[str]],
    t_vars: Sequence[Union[str, Polynomial]],
    ring: Optional[RingPresentation] = None,
    generic_asserted: bool = False,
    lnd_bound: int = DEFAULT_LND_BOUND,
    slice_degree: int = DEFAULT_SLICE_DEGREE,
) -> CriterionReport:
    """Evaluate the equivalent conditions of the stably polynomial setting.

    ``x_vars`` are the n+2 polynomial variables (default: the presentation's
    non-base variables) and ``t_vars`` the n stable variables, given as
    names or as polynomials.  The report cross-checks that the minors ideal
    equals the ideal of the Jacobian derivation's images and that a unit
    minors ideal forces a unit partials ideal.
    """
    f = _check_subject(f, ring)
    ring = f.ring
    x_vars = tuple(x_vars) if x_vars is not None else ring.fibre_variables
    ts = _resolve_t(t_vars, ring)
    n = len(ts)
    if len(x_vars) != n + 2:
        raise ArityError(
            f"need n+2 = {n + 2} X-variables for {n} stable variables, got {len(x_vars)}"
        )

    partials = _partials_verdict(f, x_vars)
    delta = jacobian_derivation([f] + ts, x_vars, ring)
    fpf = is_fixed_point_free(delta)
    lnd = is_locally_nilpotent(delta, lnd_bound)

    if fpf.refuted:
        fpf_lnd = refuted({"fpf": fpf, "lnd": lnd}, "Jacobian derivation is not fixed point free")
    elif lnd.proven:
        fpf_lnd = proven({"fpf": fpf, "lnd": lnd}, "fixed point free and locally nilpotent")
    else:
        fpf_lnd = exhausted(lnd_bound, "fixed point free; local nilpotency undecided within the bound")

    if fpf.refuted:
        lnd_slice = refuted(fpf.witness, "no slice exists: the images do not generate the unit ideal")
    elif not lnd.proven:
        lnd_slice = exhausted(lnd_bound, "local nilpotency undecided within the bound")
    else:
        g = find_slice(delta, slice_degree)
        if g is None:
            lnd_slice = exhausted(slice_degree, "no slice found up to the degree bound")
        else:
            lnd_slice = proven({"slice": g, "lnd": lnd}, "locally nilpotent with slice")

    jac = jacobian_matrix([f] + ts, x_vars)
    minor_list = minors(jac, n + 1)
    minor_ideal = Ideal(minor_list, ring)
    if minor_ideal.is_unit():
        minors_v = proven(minor_ideal.unit_certificate, "maximal minors generate the unit ideal")
    else:
        minors_v = refuted(minor_ideal.basis, "reduced basis of the minors ideal is not {1}")

    image_ideal = Ideal(delta.image_list(), ring)
    identities = {
        "minors ideal = derivation image ideal": minor_ideal.equals(image_ideal),
        "unit minors ideal implies unit partials ideal": not minors_v.proven or partials.proven,
    }
    for name, ok in identities.items():
        if not ok:
            raise AssertionError(f"consistency check failed: {name}")

    conclusion, reason = _conclude(partials, generic_asserted, True)
    hypotheses = [STABLY_NOTE, MEMBER_NOTE]
    if generic_asserted:
        hypotheses.append(GENERIC_NOTE)
    hypotheses.append(FIELD_NOTE)
    return CriterionReport(
        f,
        {PARTIALS: partials, LND_SLICE: lnd_slice, FPF_LND: fpf_lnd, MINORS: minors_v},
        conclusion,
        hypotheses,
        reason,
        identities,
        {"fpf": fpf, "lnd": lnd},
    )


def field_coordinate_2var(
    f: Polynomial, lnd_bound: int = DEFAULT_LND_BOUND, slice_degree: int = DEFAULT_SLICE_DEGREE
) -> Verdict:
    """Decide whether F is a coordinate of ``Q[X, Y]`` via its Jacobian derivation.

    ``Proven`` when the derivation is fixed point free and locally nilpotent;
    the witness includes a complementary coordinate when a slice is found.
    """
    ring = f.ring
    if ring.nvars != 2 or ring.relations:
        raise ArityError("field_coordinate_2var needs a free presentation in exactly two variables")
    delta = jacobian_derivation([f], ring.variables, ring)
    fpf = is_fixed_point_free(delta)
    if fpf.refuted:
        return refuted({"fpf": fpf, "derivation": delta}, "Jacobian derivation is not fixed point free")
    lnd = is_locally_nilpotent(delta, lnd_bound)
    if not lnd.proven:
        return exhausted(lnd_bound, "fixed point free; local nilpotency undecided within the bound")
    witness = {"fpf": fpf, "lnd": lnd, "derivation": delta}
    g = find_slice(delta, slice_degree)
    if g is not None:
        witness["slice"] = g
    return proven(witness, "fixed point free locally nilpotent Jacobian derivation")


def status_of(report_or_verdict) -> Status:
    if isinstance(report_or_verdict, CriterionReport):
        return report_or_verdict.conditions[PARTIALS].status
    return report_or_verdict.status
