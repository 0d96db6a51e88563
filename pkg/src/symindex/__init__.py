"""Index iteration theory for symplectic paths built from normal-form blocks."""

__version__ = "0.1.0"

from .angles import PI, ZERO, Angle  # noqa: E402
from .core import (  # noqa: E402
    Tolerances,
    check_symplectic,
    classify_cnu,
    direct_sum,
    nullity,
    unit_spectrum,
)
from .generators import (  # noqa: E402
    GenericQ,
    HyperbolicBlock,
    PathSpec,
    Q0Block,
    QSignBlock,
    RotationBlock,
    ZeroForm,
    assemble_quadratic_form,
    degenerate_split,
    invariants_of,
    iterate,
    phi0,
)
from .paths import char_poly_check, evaluate, index_at_iterate, mean_index, mu_pm  # noqa: E402
from .splitting import bott_splitting, splitting_numbers, splitting_profile  # noqa: E402

__all__ = [
    "Angle", "PI", "ZERO", "Tolerances", "check_symplectic", "classify_cnu", "direct_sum",
    "nullity", "unit_spectrum", "GenericQ", "HyperbolicBlock", "PathSpec", "Q0Block",
    "QSignBlock", "RotationBlock", "ZeroForm", "assemble_quadratic_form", "degenerate_split",
    "invariants_of", "iterate", "phi0", "char_poly_check", "evaluate", "index_at_iterate",
    "mean_index", "mu_pm", "bott_splitting", "splitting_numbers", "splitting_profile",
]
