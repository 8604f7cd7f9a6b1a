"""Exact computations on the tree of valuations at infinity of the affine plane."""

from .errors import (
    DomainError,
    IndeterminateForm,
    InsufficientTruncation,
    NeedsFieldExtension,
    PrecisionExceeded,
)
from .valuations import (
    ROOT,
    Curve,
    Divisorial,
    Monomial,
    Root,
    curve_of_series,
    evaluate,
    meet,
    skewness,
    thinness,
)
from .potential import (
    DiscreteMeasure,
    EdgePoint,
    FiniteTree,
    build_tree,
    dirac,
    dirichlet,
    measure,
    point_skewness,
    retract,
    value,
)
from .puiseux import (
    branches_at_infinity,
    log_laplacian,
    log_value,
    logplus_laplacian,
)
from .richness import (
    Classification,
    ValuationSet,
    chi_of,
    classify,
    kernel_function,
    reduce,
    star_system,
    thinness_integral,
)
from .polyfinder import (
    find_nonnegative_nonconstant,
    find_positive,
    valuation_conditions,
)
from .adelic import (
    ARCH,
    AdelicBranch,
    abs_value,
    algebraize,
    branch_membership,
)
from .scenario import load_scenario, parse_scenario, serialize_scenario

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "IndeterminateForm",
    "InsufficientTruncation",
    "NeedsFieldExtension",
    "PrecisionExceeded",
    "ROOT",
    "Curve",
    "Divisorial",
    "Monomial",
    "Root",
    "curve_of_series",
    "evaluate",
    "meet",
    "skewness",
    "thinness",
    "DiscreteMeasure",
    "EdgePoint",
    "FiniteTree",
    "build_tree",
    "dirac",
    "dirichlet",
    "measure",
    "point_skewness",
    "retract",
    "value",
    "branches_at_infinity",
    "log_laplacian",
    "log_value",
    "logplus_laplacian",
    "Classification",
    "ValuationSet",
    "chi_of",
    "classify",
    "kernel_function",
    "reduce",
    "star_system",
    "thinness_integral",
    "find_nonnegative_nonconstant",
    "find_positive",
    "valuation_conditions",
    "ARCH",
    "AdelicBranch",
    "abs_value",
    "algebraize",
    "branch_membership",
    "load_scenario",
    "parse_scenario",
    "serialize_scenario",
    "__version__",
]
