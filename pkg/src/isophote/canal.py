"""Canal surfaces, tubes and isophotes on them.

A canal surface is the envelope of spheres centred on a unit-speed spine
C(s) with radius r(s):

    K(s, v) = C - r r' T -+ r sqrt(1 - r'^2) (cos v n + sin v b)

with unit normal (K - C)/r.  The radius laws below are closed-form
candidates that are always checked against the quadratic they are meant
to solve before use.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import numerics as nm
from .curves import HelixKind, HelixVerdict, SpaceCurve, frenet_arrays, sigma_profile
from .errors import (DegenerateNormalData, DomainViolation, FormulaInconsistent, NotAHelix,
                     NotUnitSpeed, RadiusSlopeTooLarge)
from .surfaces import DarbouxSample, ParamSurface, sample_arrays
from .tolerances import COR3B_TOL, EPS_DEG, LAW_TOL


class CanalBranch(str, enum.Enum):
    """Which sign of the -+ in the canal parametrization is taken."""

    MINUS = "minus"
    PLUS = "plus"

    @property
    def sign(self) -> float:
        return 1.0 if self is CanalBranch.MINUS else -1.0


class LawKind(str, enum.Enum):
    LINEAR_COR3A = "LinearCor3a"
    INTEGRAL_COR3B = "IntegralCor3b"
    LINEAR_PROP1 = "LinearProp1"
    CONSTANT = "Constant"


@dataclass
class RadiusLaw:
    """r(s) = slope * s + intercept, plus the evidence behind the slope.

    ``residual`` is the defining-quadratic residual of ``slope``;
    ``validated`` says whether it met ``tolerance``.
    """

    kind: LawKind
    slope: float
    intercept: float = 1.0
    params: dict = field(default_factory=dict)
    residual: float = 0.0
    tolerance: float = LAW_TOL
    validated: bool = True
    roots: tuple = ()
    notes: dict = field(default_factory=dict)

    def r(self, s) -> np.ndarray:
        return self.slope * np.asarray(s, float) + self.intercept

    def dr(self, s) -> np.ndarray:
        return self.slope + 0.0 * np.asarray(s, float)

    def d2r(self, s) -> np.ndarray:
        return 0.0 * np.asarray(s, float)

    def with_intercept(self, c: float) -> "RadiusLaw":
        return RadiusLaw(self.kind, self.slope, float(c), dict(self.params), self.residual,
                         self.tolerance, self.validated, self.roots, dict(self.notes))

    def as_dict(self) -> dict:
        return {"kind": self.kind.value, "slope": self.slope, "intercept": self.intercept,
                "params": self.params, "residual": self.residual, "tolerance": self.tolerance,
                "validated": self.validated, "roots": list(self.roots), "notes": self.notes}


def constant_radius(r: float) -> RadiusLaw:
    if not r > 0:
        raise DomainViolation(f"radius must be positive, got {r}")
    return RadiusLaw(LawKind.CONSTANT, 0.0, float(r), {"r": float(r)})


@dataclass
class CanalSpec:
    """Spine, radius law and branch of a canal surface.

    Construction checks r > 0, |r'| < 1 and regular spine curvature on
    ``checks`` equally spaced spine samples.
    """

    spine: SpaceCurve
    radius: RadiusLaw
    branch: CanalBranch = CanalBranch.MINUS
    s_range: Optional[tuple[float, float]] = None
    v_range: tuple[float, float] = (0.0, 2 * np.pi)
    eps_deg: float = EPS_DEG
    checks: int = 257

    def __post_init__(self):
        if not self.spine.is_unit_speed:
            raise NotUnitSpeed("canal spine must be arc-length parametrized")
        if self.s_range is None:
            self.s_range = tuple(self.spine.param_range)
        self.branch = CanalBranch(self.branch)
        s = np.linspace(*self.s_range, self.checks)
        r, rp = self.radius.r(s), self.radius.dr(s)
        if np.any(r <= 0):
            raise DomainViolation(f"radius not positive on the spine range (min {r.min():.3g})")
        if np.any(np.abs(rp) >= 1):
            raise RadiusSlopeTooLarge(f"|r'| reaches {np.max(np.abs(rp)):.17g}; need |r'| < 1")
        frenet_arrays(self.spine, s, self.eps_deg)

    @property
    def is_tube(self) -> bool:
        return self.radius.kind is LawKind.CONSTANT or self.radius.slope == 0.0


def _spine_frame(spec: CanalSpec, s):
    T, n, b, k, t = frenet_arrays(spec.spine, s, spec.eps_deg)
    return spec.spine(s), T, n, b, k[..., None], t[..., None]


def _radial(spec: CanalSpec, s, v):
    """Pieces shared by K and its partials, broadcast over (s, v)."""
    s, v = np.broadcast_arrays(np.asarray(s, float), np.asarray(v, float))
    C, T, n, b, k, t = _spine_frame(spec, s)
    r, rp, rpp = (f(s)[..., None] for f in (spec.radius.r, spec.radius.dr, spec.radius.d2r))
    if np.any(np.abs(rp) >= 1):
        raise RadiusSlopeTooLarge("|r'| >= 1 at an evaluation point")
    root = np.sqrt(1 - rp**2)
    cv, sv = np.cos(v)[..., None], np.sin(v)[..., None]
    e = cv * n + sv * b
    e_v = -sv * n + cv * b
    return dict(C=C, T=T, n=n, b=b, k=k, t=t, r=r, rp=rp, rpp=rpp, root=root,
                cv=cv, sv=sv, e=e, e_v=e_v, sg=spec.branch.sign)


def canal_surface(spec: CanalSpec) -> ParamSurface:
    """The canal surface of ``spec`` as a ParamSurface in (s, v).

    The orientation is fixed so that the surface normal is (K - C)/r.
    """

    def K(s, v):
        q = _radial(spec, s, v)
        return q["C"] - q["r"] * q["rp"] * q["T"] - q["sg"] * q["r"] * q["root"] * q["e"]

    def Ks(s, v):
        q = _radial(spec, s, v)
        k, t, T, n, b = q["k"], q["t"], q["T"], q["n"], q["b"]
        r, rp, rpp, root, sg = q["r"], q["rp"], q["rpp"], q["root"], q["sg"]
        g = r * root
        g1 = rp * root - r * rp * rpp / root
        e_s = q["cv"] * (-k * T + t * b) - q["sv"] * t * n
        return T - (rp**2 + r * rpp) * T - r * rp * k * n - sg * (g1 * q["e"] + g * e_s)

    def Kv(s, v):
        q = _radial(spec, s, v)
        return -q["sg"] * q["r"] * q["root"] * q["e_v"]

    def Ksv(s, v):
        q = _radial(spec, s, v)
        k, t, T, n, b = q["k"], q["t"], q["T"], q["n"], q["b"]
        r, rp, rpp, root = q["r"], q["rp"], q["rpp"], q["root"]
        g = r * root
        g1 = rp * root - r * rp * rpp / root
        e_vs = -q["sv"] * (-k * T + t * b) - q["cv"] * t * n
        return -q["sg"] * (g1 * q["e_v"] + g * e_vs)

    def Kvv(s, v):
        q = _radial(spec, s, v)
        return q["sg"] * q["r"] * q["root"] * q["e"]

    closed = bool(spec.spine.closed and np.allclose(spec.spine(spec.s_range[0]),
                                                    spec.spine(spec.s_range[1]), atol=1e-8))
    surf = ParamSurface(K, Ks, Kv, (tuple(spec.s_range), tuple(spec.v_range)),
                        None, Ksv, Kvv, periodic=(closed, True), name="canal",
                        params={"spec": spec})
    s0 = 0.5 * (spec.s_range[0] + spec.s_range[1])
    su, sv = surf.partials(s0, 0.3)
    outward = K(s0, 0.3) - spec.spine(s0)
    flip = float(np.dot(np.cross(su, sv), outward)) < 0
    return ParamSurface(K, Ks, Kv, surf.domain, None, Ksv, Kvv, periodic=surf.periodic,
                        flip_normal=flip, name="tube" if spec.is_tube else "canal",
                        params={"spec": spec})


def canal_unit_normal(spec: CanalSpec, s, v) -> np.ndarray:
    """N = -r' T -+ sqrt(1 - r'^2)(cos v n + sin v b)."""
    q = _radial(spec, s, v)
    return -q["rp"] * q["T"] - q["sg"] * q["root"] * q["e"]


def envelope_residuals(spec: CanalSpec, s, v) -> dict[str, float]:
    """Sphere-family envelope conditions and the normal cross-check.

    ``sphere``: max | |K - C| - r |; ``tangency``: max |(K - C).C' + r r'|;
    ``normal_angle``: max angle between the closed-form normal and the
    S_s x S_v normal of the assembled surface, up to a global sign.
    """
    surf = canal_surface(spec)
    s, v = np.broadcast_arrays(np.asarray(s, float), np.asarray(v, float))
    K = surf(s, v)
    C = spec.spine(s)
    r, rp = spec.radius.r(s), spec.radius.dr(s)
    T = spec.spine.derivative(s, 1)
    su, sv = surf.partials(s, v)
    m = nm.unit(np.cross(su, sv))
    N = canal_unit_normal(spec, s, v)
    ang = np.minimum(nm.angle_between(m, N), nm.angle_between(-m, N))
    return {
        "sphere": float(np.max(np.abs(np.linalg.norm(K - C, axis=-1) - r))),
        "tangency": float(np.max(np.abs(nm.dot(K - C, T) + r * rp))),
        "normal_angle": float(np.max(ang)),
        "unit_norm": float(np.max(np.abs(np.linalg.norm(N, axis=-1) - 1))),
    }


# ------------------------------------------------------------ isophote identity

@dataclass
class Theorem4Report:
    """Residuals of the canal isophote identity on a sample list.

    ``residual`` is the smaller of the two branch residuals with <B, d>
    taken from the isophote axis formula (sin(theta) included);
    ``residual_proof_form`` uses <B, d> = k_n/sqrt(k_n^2 + tau_g^2) as in
    the original derivation; ``normal_identity`` checks the exact relation
    <N, d> = -r' <T_C, d> -+ sqrt(1 - r'^2)(cos v <n_C, d> + sin v <b_C, d>)
    with the spine frame, as a control on the data.

    The two ``spine_frame_*`` entries evaluate the identity with T the
    spine tangent, N the canal normal, B = N x T and phi the rotation
    taking (B, N) to the spine (n, b): once as printed, once with the -+
    applied to the whole bracket cos(v+phi)<B,d> + sin(v+phi)<N,d>.
    """

    residual: float
    branch: CanalBranch
    by_branch: dict
    residual_proof_form: float
    by_branch_proof_form: dict
    measured_B_residual: float
    normal_identity: float
    spine_frame_printed: float = float("nan")
    spine_frame_regrouped: float = float("nan")

    def as_dict(self) -> dict:
        return {"residual": self.residual, "branch": self.branch.value,
                "by_branch": self.by_branch, "residual_proof_form": self.residual_proof_form,
                "by_branch_proof_form": self.by_branch_proof_form,
                "measured_B_residual": self.measured_B_residual,
                "normal_identity": self.normal_identity,
                "spine_frame_printed": self.spine_frame_printed,
                "spine_frame_regrouped": self.spine_frame_regrouped}


def theorem4_residual(spec: CanalSpec, samples: list[DarbouxSample], d, theta: float,
                      eps_deg: float = EPS_DEG) -> Theorem4Report:
    """Evaluate -r'<T,d> -+ sqrt(1-r'^2) cos(v+phi) <B,d> + (sqrt(1-r'^2) sin(v+phi) - 1)<N,d>.

    T, B, N and phi are the Darboux/Frenet data of the sampled curve; s and
    v are read from the sample's (u, v) surface coordinates, so the samples
    must come from a curve on ``canal_surface(spec)``.
    """
    a = sample_arrays(samples)
    if np.any(np.isnan(a["phi"])):
        raise DegenerateNormalData("phi undefined (vanishing curvature) at some samples")
    rho = np.hypot(a["k_n"], a["tau_g"])
    if np.any(rho < eps_deg):
        raise DegenerateNormalData("k_n^2 + tau_g^2 vanishes")
    d = nm.unit(np.asarray(d, float))
    s, v, phi = a["u"], a["v"], a["phi"]
    rp = spec.radius.dr(s)
    root = np.sqrt(1 - rp**2)
    Td, Nd = nm.dot(a["T"], d), nm.dot(a["N"], d)
    Bd_measured = nm.dot(a["B"], d)

    def lhs(Bd, sg):
        return -rp * Td - sg * root * np.cos(v + phi) * Bd + (root * np.sin(v + phi) - 1) * Nd

    by, by_proof = {}, {}
    for br in CanalBranch:
        sg = br.sign
        # <B, d> from the axis formula carries its own -+ sign; try both
        eq = min(float(np.max(np.abs(lhs(e * a["k_n"] / rho * np.sin(theta), sg)))) for e in (1, -1))
        pf = min(float(np.max(np.abs(lhs(e * a["k_n"] / rho, sg)))) for e in (1, -1))
        by[br.value], by_proof[br.value] = eq, pf
    best = min(CanalBranch, key=lambda br: by[br.value])
    meas = min(float(np.max(np.abs(lhs(Bd_measured, br.sign)))) for br in CanalBranch)

    _, Tc, nc, bc, _, _ = _spine_frame(spec, s)
    sg = spec.branch.sign
    direct = -rp * nm.dot(Tc, d) - sg * root * (np.cos(v) * nm.dot(nc, d) + np.sin(v) * nm.dot(bc, d))
    Nc = canal_unit_normal(spec, s, v)
    Bc = np.cross(Nc, Tc)
    phic = np.arctan2(nm.dot(nc, Nc), nm.dot(nc, Bc))
    TdC, BdC, NdC = nm.dot(Tc, d), nm.dot(Bc, d), nm.dot(Nc, d)
    printed = -rp * TdC - sg * root * np.cos(v + phic) * BdC + (root * np.sin(v + phic) - 1) * NdC
    regrouped = -rp * TdC - sg * root * (np.cos(v + phic) * BdC + np.sin(v + phic) * NdC) - NdC
    return Theorem4Report(residual=by[best.value], branch=best, by_branch=by,
                          residual_proof_form=min(by_proof.values()), by_branch_proof_form=by_proof,
                          measured_B_residual=meas,
                          normal_identity=float(np.max(np.abs(direct - Nd))),
                          spine_frame_printed=float(np.max(np.abs(printed))),
                          spine_frame_regrouped=float(np.max(np.abs(regrouped))))


# ------------------------------------------------------------------ radius laws

def radius_law_linear_cor3a(theta: float, v: float, sign: int = 1, intercept: float = 1.0,
                            tol: float = LAW_TOL) -> RadiusLaw:
    """lambda = sqrt(X^2 - 1)/X with X = tan(theta) cos(v+theta) -+ sin(v+theta).

    ``sign`` = +1 takes the upper (minus) sign.  The slope is checked
    against 1 - lambda^2 = 1/(cos^2(v+theta)(tan(theta) -+ tan(v+theta))^2).
    """
    sg = 1.0 if sign >= 0 else -1.0
    c = np.cos(v + theta)
    if abs(c) < 1e-12:
        raise DomainViolation("cos(v + theta) = 0: the defining relation is singular")
    X = np.tan(theta) * c - sg * np.sin(v + theta)
    if not X * X > 1:
        raise DomainViolation(f"(tan(theta) cos(v+theta) -+ sin(v+theta))^2 = {X * X:.6g} <= 1")
    lam = float(np.sqrt(X * X - 1) / X)
    rhs = 1.0 / (c**2 * (np.tan(theta) - sg * np.tan(v + theta)) ** 2)
    res = float(abs((1 - lam**2) - rhs))
    printed = bool(abs(np.sin(v + 2 * theta)) > np.cos(theta)
                   and np.cos(theta) < np.sin(v) < -np.cos(theta))
    law = RadiusLaw(LawKind.LINEAR_COR3A, lam, intercept,
                    {"theta": float(theta), "v": float(v), "sign": int(sg)},
                    residual=res, tolerance=tol, validated=res <= tol,
                    notes={"printed_domain_holds": printed, "X": float(X)})
    if not law.validated:
        raise FormulaInconsistent(f"slope {lam:.17g} misses the defining relation by {res:.3g}", res)
    return law


def radius_law_integral_cor3b(beta: float, v: float, phi: float, intercept: float = 1.0,
                              tol: float = COR3B_TOL) -> RadiusLaw:
    """Slope tan(beta)/sqrt(tan^2(beta) + cos^2(v+phi)) for constant v + phi."""
    if not 0 < beta < np.pi / 2:
        raise DomainViolation(f"beta must lie in (0, pi/2), got {beta}")
    tb2, c2 = np.tan(beta) ** 2, np.cos(v + phi) ** 2
    slope = float(np.tan(beta) / np.sqrt(tb2 + c2))
    res = float(abs((tb2 + c2) * slope**2 - tb2) / max(1.0, tb2))
    law = RadiusLaw(LawKind.INTEGRAL_COR3B, slope, intercept,
                    {"beta": float(beta), "v": float(v), "phi": float(phi)},
                    residual=res, tolerance=tol, validated=res <= tol)
    if not law.validated:
        raise FormulaInconsistent(f"slope {slope:.17g} misses its quadratic by {res:.3g}", res)
    return law


def prop1_roots(theta: float, v: float) -> tuple[float, float]:
    """Roots of (l1^2 + l2^2 sin^2 v) x^2 + 2 l1^2 x + l1^2 - l2^2 sin^2 v = 0."""
    l1, l2, S = np.cos(theta), np.sin(theta), np.sin(v) ** 2
    A, B, C = l1**2 + l2**2 * S, 2 * l1**2, l1**2 - l2**2 * S
    disc = np.sqrt(max(B * B - 4 * A * C, 0.0))
    return float((-B + disc) / (2 * A)), float((-B - disc) / (2 * A))


def radius_law_prop1(theta: float, v: float, intercept: float = 1.0,
                     tol: float = LAW_TOL, strict: bool = True) -> RadiusLaw:
    """omega = (-1 + sin^2 v tan(theta))/(1 + sin^2 v tan^2(theta)), checked as a root
    of the quadratic above.

    With ``strict=False`` a failed check returns the law with
    ``validated=False`` instead of raising; the root closest to omega is
    recorded under ``notes['nearest_root']``.
    """
    t, S = np.tan(theta), np.sin(v) ** 2
    if not (t > 1 and -1 + S * t > 0):
        raise DomainViolation("need tan(theta) > 1 and sin^2(v) tan(theta) > 1")
    omega = float((-1 + S * t) / (1 + S * t * t))
    l1, l2 = np.cos(theta), np.sin(theta)
    res = float(abs((l1**2 + l2**2 * S) * omega**2 + 2 * l1**2 * omega + l1**2 - l2**2 * S))
    roots = prop1_roots(theta, v)
    nearest = min(roots, key=lambda x: abs(x - omega))
    law = RadiusLaw(LawKind.LINEAR_PROP1, omega, intercept, {"theta": float(theta), "v": float(v)},
                    residual=res, tolerance=tol, validated=res <= tol, roots=roots,
                    notes={"nearest_root": nearest})
    if strict and not law.validated:
        raise FormulaInconsistent(
            f"omega = {omega:.17g} is not a root (residual {res:.3g}); roots are {roots}", res)
    return law


def sweep_radius_laws(n: int = 50) -> dict[str, list[dict]]:
    """Evaluate every radius law on an n x n parameter grid.

    Each record holds the grid point and one of the outcomes ``validated``,
    ``inconsistent`` or ``domain``, plus the residual when computed.
    """
    out: dict[str, list[dict]] = {"cor3a": [], "cor3b": [], "prop1": []}
    thetas = np.linspace(0.0, np.pi / 2, n + 2)[1:-1]
    vs = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    betas = np.linspace(0.0, np.pi / 2, n + 2)[1:-1]

    def record(key, point, fn):
        try:
            law = fn()
            out[key].append({**point, "outcome": "validated", "residual": law.residual,
                             "slope": law.slope, "notes": law.notes})
        except FormulaInconsistent as exc:
            out[key].append({**point, "outcome": "inconsistent", "residual": exc.residual})
        except DomainViolation:
            out[key].append({**point, "outcome": "domain", "residual": None})

    for th, v in itertools.product(thetas, vs):
        for sign in (1, -1):
            record("cor3a", {"theta": th, "v": v, "sign": sign},
                   lambda: radius_law_linear_cor3a(th, v, sign))
        record("prop1", {"theta": th, "v": v}, lambda: radius_law_prop1(th, v))
    for beta, w in itertools.product(betas, vs):
        record("cor3b", {"beta": beta, "v_plus_phi": w},
               lambda: radius_law_integral_cor3b(beta, w, 0.0))
    return out


# ------------------------------------------------------- tube parameter curves

@dataclass
class TubeIsophote:
    v0: float
    d: np.ndarray
    source: str
    axis_spread: float


def general_helix_axis(spine: SpaceCurve, s) -> tuple[np.ndarray, float]:
    """Unit Darboux direction (tau T + kappa b)/|.|, constant on a general helix."""
    T, _, b, k, t = frenet_arrays(spine, s)
    w = nm.unit(t[:, None] * T + k[:, None] * b)
    dbar = nm.unit(w.mean(axis=0))
    return dbar, float(np.max(np.linalg.norm(w - dbar, axis=-1)))


def slant_helix_spine_axis(spine: SpaceCurve, s) -> tuple[np.ndarray, float, float]:
    """Axis of a slant helix from its Frenet data.

    The angle theta between n and the axis satisfies cot(theta) = sigma;
    the sign pattern giving the most constant vector is kept.
    Returns (d, theta, spread).
    """
    T, n, b, k, t = frenet_arrays(spine, s)
    sigma = sigma_profile(spine, s)[3]
    theta = float(np.arctan2(1.0, np.median(sigma)))
    w = np.sqrt(k**2 + t**2)[:, None]
    st, ct = np.sin(theta), np.cos(theta)
    best = None
    for e1, e3 in itertools.product((1, -1), repeat=2):
        dd = e1 * t[:, None] / w * st * T + ct * n + e3 * k[:, None] / w * st * b
        dbar = nm.unit(dd.mean(axis=0))
        spread = float(np.max(np.linalg.norm(dd - dbar, axis=-1)))
        if best is None or spread < best[2]:
            best = (dbar, theta, spread)
    return best


def tube_parameter_isophotes(spine_verdict: HelixVerdict, spine: SpaceCurve,
                             samples: int = 200,
                             branch: CanalBranch = CanalBranch.MINUS) -> list[TubeIsophote]:
    """Parameter curves v = v0 of a tube that are isophotes, with predicted axes.

    General helix: v0 in {pi/2, 3pi/2} about the helix axis (the plane
    normal for plane curves).  Slant helix: v0 in {0, pi} about the
    slant-helix axis.  Each d is oriented so that <N(s, v0), d> >= 0 on
    the tube of the given ``branch``.
    """
    if spine_verdict.kind is HelixKind.NEITHER:
        raise NotAHelix("spine is neither a general nor a slant helix")
    s = np.linspace(*spine.param_range, samples)
    out = []
    if spine_verdict.is_general:
        if spine_verdict.planar:
            b = frenet_arrays(spine, s)[2]
            d = nm.unit(b.mean(axis=0))
            spread = float(np.max(np.linalg.norm(b - d, axis=-1)))
            src = "plane normal"
        else:
            d, spread = general_helix_axis(spine, s)
            src = "general helix axis"
        out += [TubeIsophote(np.pi / 2, d, src, spread), TubeIsophote(3 * np.pi / 2, d, src, spread)]
    if spine_verdict.is_slant:
        d, _, spread = slant_helix_spine_axis(spine, s)
        src = "slant helix axis"
        out += [TubeIsophote(0.0, d, src, spread), TubeIsophote(np.pi, d, src, spread)]
    _, n, b, _, _ = frenet_arrays(spine, s)
    sg = CanalBranch(branch).sign
    for item in out:
        N = -sg * (np.cos(item.v0) * n + np.sin(item.v0) * b)
        if np.mean(N @ item.d) < -1e-12:
            item.d = -item.d
    return sorted(out, key=lambda x: x.v0)


def parameter_curve(surface: ParamSurface, v0: float, s_range=None):
    """The s-parameter curve v = v0 of a canal surface as a CurveOnSurface."""
    from .surfaces import CurveOnSurface

    s_range = tuple(surface.domain[0]) if s_range is None else tuple(s_range)

    def uv(t):
        t = np.asarray(t, float)
        return np.stack(np.broadcast_arrays(t, v0 + 0.0 * t), axis=-1)

    def duv(t):
        t = np.asarray(t, float)
        return np.stack(np.broadcast_arrays(1.0 + 0.0 * t, 0.0 * t), axis=-1)

    def d2uv(t):
        t = np.asarray(t, float)
        return np.zeros(t.shape + (2,))

    return CurveOnSurface(surface, uv, s_range, duv, d2uv, name=f"v0={v0:.6g}")
