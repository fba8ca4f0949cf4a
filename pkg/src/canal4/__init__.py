"""Canal and tubular hypersurfaces generated by non-null curves in
Lorentz-Minkowski 4-space: construction, differential invariants, and
numerically verified structural theorems."""

from .analysis import (TheoremReport, check_kh_relation, classify_flat,
                       classify_minimal, solve_minimal_radius, weingarten_check)
from .canal import (CanalConfig, GridSpec, RadiusProfile, SurfacePatch,
                    Variant, canal_point, nullcone_point, sample_grid,
                    validate_config)
from .curvature import (CurvatureReport, Route, curvature_report, curvatures,
                        fundamental_forms, shape_operator, tubular_curvatures,
                        unit_normal)
from .curve import CurveSpec, DerivativeMode, FrenetFrame
from .expr import Expr, differentiate, evaluate, parse
from .minkowski import (CausalCharacter, Vec4, causal_character, inner, norm,
                        normalize, triple_cross)

__version__ = "0.1.0"

__all__ = [
    "CanalConfig", "CausalCharacter", "CurvatureReport", "CurveSpec",
    "DerivativeMode", "Expr", "FrenetFrame", "GridSpec", "RadiusProfile",
    "Route", "SurfacePatch", "TheoremReport", "Variant", "Vec4",
    "canal_point", "causal_character", "check_kh_relation", "classify_flat",
    "classify_minimal", "curvature_report", "curvatures", "differentiate",
    "evaluate", "fundamental_forms", "inner", "norm", "normalize",
    "nullcone_point", "parse", "sample_grid", "shape_operator",
    "solve_minimal_radius", "triple_cross", "tubular_curvatures",
    "unit_normal", "validate_config", "weingarten_check",
]
