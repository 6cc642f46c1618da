"""Isophote curves on parametric surfaces.

Frenet and Darboux frames, arc-length reparametrization, isophote tracing
and certification (axis recovery, mu invariant, family classification),
canal and tube surfaces, and a scene-driven command-line front end.
"""

from .canal import (CanalBranch, CanalSpec, LawKind, RadiusLaw, canal_surface, canal_unit_normal,
                    constant_radius, envelope_residuals, radius_law_integral_cor3b,
                    radius_law_linear_cor3a, radius_law_prop1, sweep_radius_laws,
                    theorem4_residual, tube_parameter_isophotes)
from .curves import (ArcLengthMap, HelixKind, HelixVerdict, SpaceCurve, classify_helix,
                     frenet_arrays, frenet_at, reparametrize_arclength)
from .errors import IsophoteError
from .isophotes import (Branch, IsophoteAxis, IsophoteKind, axis_derivative_check,
                        classify_isophote, gauss_map_image, mu_invariant, recover_axis)
from .surfaces import (CurveOnSurface, DarbouxSample, ParamSurface, darboux_along,
                       reparametrize_on_surface, unit_normal)
from .tolerances import DEFAULT, Tolerances
from .tracing import IsophoteTrace, contour_curve, isophote_samples, silhouette, trace_isophote

__version__ = "0.1.0"

__all__ = [
    "ArcLengthMap", "Branch", "CanalBranch", "CanalSpec", "CurveOnSurface", "DEFAULT",
    "DarbouxSample", "HelixKind", "HelixVerdict", "IsophoteAxis", "IsophoteError",
    "IsophoteKind", "IsophoteTrace", "LawKind", "ParamSurface", "RadiusLaw", "SpaceCurve",
    "Tolerances", "axis_derivative_check", "canal_surface", "canal_unit_normal",
    "classify_helix", "classify_isophote", "constant_radius", "contour_curve", "darboux_along",
    "envelope_residuals", "frenet_arrays", "frenet_at", "gauss_map_image", "isophote_samples",
    "mu_invariant", "radius_law_integral_cor3b", "radius_law_linear_cor3a", "radius_law_prop1",
    "recover_axis", "reparametrize_arclength", "reparametrize_on_surface", "silhouette",
    "sweep_radius_laws", "theorem4_residual", "trace_isophote", "tube_parameter_isophotes",
    "unit_normal",
]
