"""Commuting graphs of matrix rings over p-adic and finite fields."""

__version__ = "0.1.0"

from .arith import GF, QQ, PrimeField, PrimeFieldElem, RationalField, is_prime, reduce_mod_p, vp
from .classifier import DiameterVerdict, classify, render_table
from .errors import (
    BudgetExceeded,
    CommGraphError,
    HypothesisViolated,
    InvalidArgument,
    NotFound,
    NotPAdicInteger,
    ShapeMismatch,
    SingularMatrix,
    SoundnessError,
)
from .graph import (
    Budget,
    CommutingGraphSummary,
    distance_at_most_2,
    ff_distance,
    ff_graph_summary,
    verify_chain,
)
from .localfields import count_ramified_quadratic, is_connected
from .matrix import (
    Polynomial,
    SquareMatrix,
    commutant_basis,
    commute,
    companion,
    is_scalar,
    joint_commutant_basis,
    min_poly,
)

__all__ = [
    "Budget", "BudgetExceeded", "CommGraphError", "CommutingGraphSummary", "DiameterVerdict", "GF",
    "HypothesisViolated", "InvalidArgument", "NotFound", "NotPAdicInteger", "Polynomial", "PrimeField",
    "PrimeFieldElem", "QQ", "RationalField", "ShapeMismatch", "SingularMatrix", "SoundnessError",
    "SquareMatrix", "classify", "commutant_basis", "commute", "companion", "count_ramified_quadratic",
    "distance_at_most_2", "ff_distance", "ff_graph_summary", "is_connected", "is_prime", "is_scalar",
    "joint_commutant_basis", "min_poly", "reduce_mod_p", "render_table", "verify_chain", "vp",
]
