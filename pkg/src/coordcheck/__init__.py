"""Exact polynomial algebra for residual-coordinate checks over Q."""

from .criterion import (
    Conclusion,
    CriterionReport,
    corollary_b_report,
    field_coordinate_2var,
    theorem_a_check,
)
from .derivations import (
    Derivation,
    Matrix,
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
from .errors import *  # noqa: F401,F403
from .groebner import (
    Ideal,
    UnitCertificate,
    buchberger,
    contains,
    divide,
    ideal_equals,
    is_unit_ideal,
    normal_form,
    step_budget,
)
from .parser import parse, parse_polynomial, parse_ring, print_script
from .poly import DEGREVLEX, LEX, MonomialOrder, Polynomial, RingPresentation, block_order
from .verdict import Status, Verdict

__version__ = "0.1.0"
