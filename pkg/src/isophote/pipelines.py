"""End-to-end chains shared by the command-line jobs and the test suite."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import make_interp_spline

from . import catalog
from . import numerics as nm
from .canal import (CanalBranch, CanalSpec, canal_surface, constant_radius, parameter_curve,
                    theorem4_residual, tube_parameter_isophotes)
from .curves import classify_helix, sigma_profile
from .errors import DegenerateNormalData, NotCertifiedIsophote
from .isophotes import (axis_derivative_check, best_slant_helix_axis, classify_isophote,
                        gauss_map_image, mu_invariant, recover_axis)
from .surfaces import (CurveOnSurface, ParamSurface, darboux_along, darboux_residuals,
                       reparametrize_on_surface, unit_normal)
from .tolerances import DEFAULT, Tolerances
from .tracing import isophote_samples, trace_isophote


def uv_line(surface: ParamSurface, start, direction, t_range, unit_speed: bool = False,
            name: str = "uv_line") -> CurveOnSurface:
    """The straight parameter-domain curve start + t * direction."""
    p0, w = np.asarray(start, float), np.asarray(direction, float)

    def uv(t):
        t = np.asarray(t, float)
        return p0 + t[..., None] * w

    def duv(t):
        return np.broadcast_to(w, np.shape(t) + (2,)).copy()

    def d2uv(t):
        return np.zeros(np.shape(t) + (2,))

    return CurveOnSurface(surface, uv, tuple(t_range), duv, d2uv, is_unit_speed=unit_speed, name=name)


def perturbed_curve(curve: CurveOnSurface, amplitude: float = 1e-3, waves: float = 3.0,
                    axis: Optional[int] = None, nodes: int = 1025) -> CurveOnSurface:
    """``curve`` with a sinusoidal offset of one parameter coordinate.

    By default the coordinate along which the curve moves least is offset,
    so the perturbation is transverse.  The base curve is replaced by a
    quintic spline through ``nodes`` samples first; the perturbation is far
    larger than the fit error and the spline has cheap exact derivatives.
    """
    t0, t1 = curve.param_range
    tt = np.linspace(t0, t1, nodes)
    base = make_interp_spline(tt, curve.uv(tt), k=5)
    if axis is None:
        axis = int(np.argmin(np.abs(base.derivative(1)(tt)).mean(axis=0)))
    w = 2 * np.pi * waves / (t1 - t0)
    e = np.zeros(2)
    e[axis] = amplitude

    def offset(t, k):
        ph = w * (np.asarray(t, float) - t0) + 0.5 * np.pi * k
        return (w**k * np.sin(ph))[..., None] * e

    return CurveOnSurface(curve.surface, lambda t: base(t) + offset(t, 0), curve.param_range,
                          lambda t: base(t, 1) + offset(t, 1), lambda t: base(t, 2) + offset(t, 2),
                          name=curve.name + "~jitter")


def samples_on(curve: CurveOnSurface, samples: int = 400, margin: float = 0.0):
    """Arc-length Darboux samples of a surface curve (reparametrized if needed)."""
    c = curve if curve.is_unit_speed else reparametrize_on_surface(curve)
    L0, L1 = c.param_range
    pad = margin * (L1 - L0)
    if c.closed:
        s = np.linspace(L0, L1, samples, endpoint=False)
    else:
        s = np.linspace(L0 + pad, L1 - pad, samples)
    return c, darboux_along(c, s_values=s)


@dataclass
class IsophoteStudy:
    """Everything computed about one isophote candidate."""

    name: str
    samples: list
    theta: float
    d_true: Optional[np.ndarray]
    profile: object = None
    axis: object = None
    classification: object = None
    gauss: object = None
    checks: dict = field(default_factory=dict)


def study(name: str, samples, theta: float, d_true=None, tol: Tolerances = DEFAULT,
          strict: bool = False) -> IsophoteStudy:
    """mu, axis, classification and Gauss-map checks on a sample list."""
    out = IsophoteStudy(name, samples, float(theta),
                        None if d_true is None else nm.unit(np.asarray(d_true, float)))
    try:
        out.profile = mu_invariant(samples, tol.const_atol, tol.const_rtol, tol.eps_deg)
    except DegenerateNormalData:
        out.profile = None
    hint = out.d_true
    out.axis = recover_axis(samples, theta, tol.axis_tol, tol.eps_deg, strict=strict, hint=hint)
    c = out.checks
    c["axis_residual"] = out.axis.residual
    c["axis_certified"] = out.axis.certified
    c["axis_derivative"] = axis_derivative_check(samples, out.axis)
    if out.d_true is not None:
        err = float(nm.angle_between(out.axis.d, out.d_true))
        if abs(np.cos(theta)) <= tol.class_tol:
            # <N, d> = 0 leaves the orientation of d free
            err = min(err, np.pi - err)
        c["axis_angle_error"] = err
    if out.profile is not None:
        c["mu_spread"] = out.profile.stats.spread
        c["mu_constant"] = out.profile.constant
        c["theta_estimate"] = out.profile.theta_estimate
        c["theta_error"] = abs(out.profile.theta_estimate - min(theta, np.pi - theta))
        try:
            out.gauss = gauss_map_image(samples, tol.eps_deg)
            c["plane_fit_residual"] = out.gauss.plane_fit_residual
            c["kbar_g_mu_discrepancy"] = out.gauss.mu_discrepancy
        except DegenerateNormalData:
            pass
    if out.axis.certified and (out.profile is None or out.profile.constant):
        try:
            out.classification = classify_isophote(samples, out.profile, tol.class_tol, theta,
                                                   out.axis, tol.const_atol, tol.const_rtol,
                                                   tol.eps_deg)
            c["kind"] = out.classification.kind.value
        except NotCertifiedIsophote:
            pass
    return out


def traced_study(surface: ParamSurface, d, theta: float, grid=(128, 128), index: int = 0,
                 samples: int = 400, margin: float = 0.02, tol: Tolerances = DEFAULT,
                 name: Optional[str] = None):
    """Trace, rebuild a smooth curve, then study it.  Returns (trace, curve, study)."""
    tr = trace_isophote(surface, d, theta, grid, tol.trace_tol, tol.eps_deg)
    curve, ds = isophote_samples(surface, tr, index, samples, margin, tol.eps_deg)
    st = study(name or f"{surface.name} isophote", ds, theta, d, tol)
    st.checks["trace_residual"] = tr.field_residual
    return tr, curve, st


# ------------------------------------------------------------------ Example 1

@dataclass
class Example1Result:
    kappa_error: float
    tau_error: float
    sigma_stats: nm.Stats
    ratio_stats: nm.Stats
    helix_kind: str
    study: IsophoteStudy
    max_abs_k_g: float
    closed_form_axis_error: float
    closed_form_signs: tuple
    darboux: dict


def example1(a: float = 2.0, b: float = 1.0, samples: int = 200,
             tol: Tolerances = DEFAULT) -> Example1Result:
    """The slant helix of Example 1, its invariants, and its isophote on the
    rectifying developable (u = 0 curve)."""
    gamma = catalog.slant_helix_example(a, b)
    s = np.linspace(*gamma.param_range, samples)
    kappa, tau, ratio, sigma = sigma_profile(gamma, s, tol.eps_deg)
    c = np.sqrt(a * a - b * b)
    verdict = classify_helix(gamma, samples, tol.const_atol, tol.const_rtol, tol.eps_deg)
    dev = catalog.rectifying_developable(gamma)
    curve = uv_line(dev, (0.0, 0.0), (0.0, 1.0), gamma.param_range, unit_speed=True,
                    name="gamma on its rectifying developable")
    ds = darboux_along(curve, s_values=np.linspace(*gamma.param_range, 2 * samples))
    prof = mu_invariant(ds, tol.const_atol, tol.const_rtol, tol.eps_deg)
    st = study("example1", ds, prof.theta_estimate, None, tol)
    signs, err, _ = best_slant_helix_axis(ds, st.axis.theta, st.axis.d)
    return Example1Result(
        kappa_error=float(np.max(np.abs(kappa - c * np.cos(b * s)))),
        tau_error=float(np.max(np.abs(tau - c * np.sin(b * s)))),
        sigma_stats=nm.stats(sigma), ratio_stats=nm.stats(ratio),
        helix_kind=verdict.kind.value, study=st,
        max_abs_k_g=float(np.max(np.abs([x.k_g for x in ds]))),
        closed_form_axis_error=err, closed_form_signs=signs,
        darboux=darboux_residuals(ds),
    )


# --------------------------------------------------------------------- tubes

@dataclass
class TubeCurveCheck:
    v0: float
    d: np.ndarray
    source: str
    stdev: float
    theta: float
    identity: object
    study: IsophoteStudy


def tube_checks(spine, r: float, v0s=None, d=None, samples: int = 300, margin: float = 0.02,
                branch: CanalBranch = CanalBranch.MINUS, tol: Tolerances = DEFAULT):
    """Constancy of <N(s, v0), d> along tube parameter curves.

    With ``v0s`` None the predicted curves of ``tube_parameter_isophotes``
    are used with their axes; otherwise ``d`` (or the first predicted axis)
    is used for every listed v0.
    """
    spec = CanalSpec(spine, constant_radius(r), branch)
    surf = canal_surface(spec)
    verdict = classify_helix(spine, 200, tol.const_atol, tol.const_rtol, tol.eps_deg)
    predicted = tube_parameter_isophotes(verdict, spine, branch=branch)
    if v0s is None:
        items = [(p.v0, p.d, p.source) for p in predicted]
    else:
        dd = predicted[0].d if d is None else nm.unit(np.asarray(d, float))
        items = [(float(v0), dd, "given") for v0 in v0s]
    s = np.linspace(*spine.param_range, samples)
    out = []
    for v0, dv, src in items:
        vals = unit_normal(surf, s, v0 + 0.0 * s) @ dv
        theta = float(np.arccos(np.clip(np.mean(vals), -1.0, 1.0)))
        _, ds = samples_on(parameter_curve(surf, v0), samples, margin)
        try:
            t4 = theorem4_residual(spec, ds, dv, theta, tol.eps_deg)
        except DegenerateNormalData as exc:
            t4 = exc
        st = study(f"tube v0={v0:.6g}", ds, theta, dv, tol)
        out.append(TubeCurveCheck(v0, dv, src, float(np.std(vals)), theta, t4, st))
    return spec, surf, verdict, out

