"""String topology of closed oriented surfaces of genus at least 2.

Words and conjugacy classes in the surface group, the hyperbolic
representation, the Goldman bracket computed from closed geodesics, and the
BV algebra (string product, BV operator, string coproduct) on loop space
homology.
"""

from .goldman import (
    BracketResult,
    BudgetWarning,
    CoincidentAxesError,
    IntersectionPoint,
    TangencyError,
    bracket_linear,
    enumerate_intersections,
    goldman_bracket,
)
from .hyperbolic import (
    Geodesic,
    IsometryKind,
    Mobius,
    NotHyperbolicError,
    Representation,
    RepresentationError,
    axis,
    build_representation,
    classify,
    translation_length,
)
from .render import render_svg
from .string_topology import (
    CoproductResult,
    ElementSyntaxError,
    HomologyElement,
    IntegralityError,
    basis,
    component_homology,
    coproduct,
    delta,
    parse_element,
    product,
)
from .words import ConjugacyClass, LevelUndefinedError, SurfaceGroup, WordSyntaxError, inverse, power

__all__ = [
    "BracketResult",
    "BudgetWarning",
    "CoincidentAxesError",
    "ConjugacyClass",
    "CoproductResult",
    "ElementSyntaxError",
    "Geodesic",
    "HomologyElement",
    "IntegralityError",
    "IntersectionPoint",
    "IsometryKind",
    "LevelUndefinedError",
    "Mobius",
    "NotHyperbolicError",
    "Representation",
    "RepresentationError",
    "SurfaceGroup",
    "TangencyError",
    "WordSyntaxError",
    "axis",
    "basis",
    "bracket_linear",
    "build_representation",
    "classify",
    "component_homology",
    "coproduct",
    "delta",
    "enumerate_intersections",
    "goldman_bracket",
    "inverse",
    "parse_element",
    "power",
    "product",
    "render_svg",
    "translation_length",
]

__version__ = "0.1.0"
