"""Exact Maurer–Cartan calculus for nilpotent dg Lie algebras over Q.

Everything is computed with :class:`fractions.Fraction`; there is no floating
point anywhere in the package.
"""

from .dgla import (
    Dgla,
    DglaError,
    NotMaurerCartan,
    NotNilpotent,
    PreconditionFailed,
    ValidationError,
    bch,
    curvature,
    gauge_act,
    gauge_lift,
    is_maurer_cartan,
    stabilizer_check,
    twist,
    twisted_d,
    validate,
)
from .dold_kan import (
    ChainElement,
    boundary,
    integration_I,
    normalize,
    shuffle_bracket,
    shuffles,
)
from .forms import PolyForm, contract_h, extend_nu, integrate, volume_form, volume_primitive
from .homotopy import connecting_identity, homotopy_groups, pi1_action_check, samelson
from .scalar_linear import Vec, cohomology
from .simplicial import (
    HornProblem,
    LieForm,
    SimplicialGroup,
    deligne_compare,
    discreteness_check,
    gauge_act_level,
    gauge_solve_to_vertex,
    mc_check,
    mc_horn_filler,
    moore_filler,
)

__version__ = "0.1.0"

__all__ = [
    "ChainElement",
    "Dgla",
    "DglaError",
    "HornProblem",
    "LieForm",
    "NotMaurerCartan",
    "NotNilpotent",
    "PolyForm",
    "PreconditionFailed",
    "SimplicialGroup",
    "ValidationError",
    "Vec",
    "bch",
    "boundary",
    "cohomology",
    "connecting_identity",
    "contract_h",
    "curvature",
    "deligne_compare",
    "discreteness_check",
    "extend_nu",
    "gauge_act",
    "gauge_act_level",
    "gauge_lift",
    "gauge_solve_to_vertex",
    "homotopy_groups",
    "integrate",
    "integration_I",
    "is_maurer_cartan",
    "mc_check",
    "mc_horn_filler",
    "moore_filler",
    "normalize",
    "pi1_action_check",
    "samelson",
    "shuffle_bracket",
    "shuffles",
    "stabilizer_check",
    "twist",
    "twisted_d",
    "validate",
    "volume_form",
    "volume_primitive",
]
