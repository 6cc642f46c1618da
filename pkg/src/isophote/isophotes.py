"""Isophote certification from Darboux data.

Given Darboux samples of a unit-speed surface curve, this module computes
the Gauss-map geodesic curvature mu(s) (constant exactly for isophotes),
reconstructs the fixed axis d, checks that it does not move, and sorts the
curve into the special families (line of curvature, geodesic/slant helix,
asymptotic/general helix, silhouette).

Every +/- ambiguity is resolved by evaluating all branches and keeping the
one with the smallest residual; the discarded branches' residuals are
reported alongside.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import numerics as nm
from .errors import DegenerateNormalData, NoConsistentAxis, NotCertifiedIsophote
from .surfaces import DarbouxSample, sample_arrays
from .tolerances import AXIS_TOL, CLASS_TOL, CONST_ATOL, CONST_RTOL, EPS_DEG


class Branch(str, enum.Enum):
    PLUS = "Plus"
    MINUS = "Minus"

    @property
    def sign(self) -> float:
        return 1.0 if self is Branch.PLUS else -1.0


class IsophoteKind(str, enum.Enum):
    LINE_OF_CURVATURE = "LineOfCurvaturePlanar"
    GEODESIC_SLANT_HELIX = "GeodesicSlantHelix"
    ASYMPTOTIC_GENERAL_HELIX = "AsymptoticGeneralHelix"
    SILHOUETTE = "Silhouette"
    GENERIC = "Generic"


@dataclass(frozen=True)
class MuProfile:
    s: np.ndarray
    mu: np.ndarray
    constant: bool
    theta_estimate: float
    dk_n: np.ndarray = field(repr=False)
    dtau_g: np.ndarray = field(repr=False)

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.s.tolist(), self.mu.tolist()))

    @property
    def stats(self) -> nm.Stats:
        return nm.stats(self.mu)


@dataclass(frozen=True)
class IsophoteAxis:
    d: np.ndarray
    theta: float
    sign_branch: Branch
    residual: float
    other_residual: float
    certified: bool
    degenerate: bool = False


@dataclass(frozen=True)
class IsophoteClassification:
    kind: IsophoteKind
    evidence: dict


@dataclass(frozen=True)
class GaussMapImage:
    points: np.ndarray
    kbar_g: np.ndarray
    kbar_n: float
    plane_fit_residual: float
    image_curvature: np.ndarray
    kbar_g_signed: np.ndarray
    mu: Optional[np.ndarray] = None

    @property
    def mu_discrepancy(self) -> float:
        if self.mu is None:
            return float("nan")
        return float(np.max(np.abs(self.kbar_g - self.mu)))


def _normal_rate(a) -> np.ndarray:
    return np.sqrt(a["k_n"] ** 2 + a["tau_g"] ** 2)


def mu_invariant(samples: list[DarbouxSample], atol: float = CONST_ATOL, rtol: float = CONST_RTOL,
                 eps_deg: float = EPS_DEG) -> MuProfile:
    """mu = (k_n tau_g' - k_n' tau_g + k_g (k_n^2 + tau_g^2)) / (k_n^2 + tau_g^2)^(3/2).

    This quotient form equals the textbook k_n^2 (tau_g/k_n)' expression
    wherever k_n != 0 and stays finite on asymptotic stretches.
    """
    a = sample_arrays(samples)
    rho2 = a["k_n"] ** 2 + a["tau_g"] ** 2
    if np.any(rho2 < eps_deg**2):
        raise DegenerateNormalData("k_n^2 + tau_g^2 vanishes: Gauss map is singular")
    dkn = nm.grid_derivative(a["k_n"], a["s"])
    dtg = nm.grid_derivative(a["tau_g"], a["s"])
    mu = (a["k_n"] * dtg - dkn * a["tau_g"] + a["k_g"] * rho2) / rho2**1.5
    theta = float(np.arctan2(1.0, abs(np.median(mu))))
    return MuProfile(s=a["s"], mu=mu, constant=nm.is_constant(mu, atol, rtol),
                     theta_estimate=theta, dk_n=dkn, dtau_g=dtg)


def axis_field(samples: list[DarbouxSample], theta: float, branch: Branch) -> np.ndarray:
    """Per-sample candidate axis d(s) for one sign branch."""
    a = sample_arrays(samples)
    rho = _normal_rate(a)[:, None]
    sg = branch.sign
    st, ct = np.sin(theta), np.cos(theta)
    return (sg * a["tau_g"][:, None] / rho * st * a["T"]
            - sg * a["k_n"][:, None] / rho * st * a["B"]
            + ct * a["N"])


def _mean_direction(d: np.ndarray) -> tuple[np.ndarray, float]:
    dbar = nm.unit(d.mean(axis=0))
    return dbar, float(np.max(np.linalg.norm(d - dbar, axis=-1)))


def recover_axis(samples: list[DarbouxSample], theta: float, axis_tol: float = AXIS_TOL,
                 eps_deg: float = EPS_DEG, strict: bool = True, hint=None) -> IsophoteAxis:
    """Fixed axis of an isophote from its Darboux data and angle ``theta``.

    Both sign branches are averaged over the samples; the branch whose
    per-sample vectors stay closest to their mean wins.  With
    ``strict=False`` an uncertified axis is returned instead of raising.

    When the Gauss map collapses to a point (k_n = tau_g = 0 everywhere, a
    ruling of a cylinder say) the axis is not determined by the data; a
    caller-supplied ``hint`` direction is then projected to make the angle
    ``theta`` with the normal.
    """
    a = sample_arrays(samples)
    rho = _normal_rate(a)
    degenerate = rho < eps_deg
    if np.all(degenerate):
        if hint is None:
            raise DegenerateNormalData("Gauss map is a point; pass a hint direction")
        return _axis_from_hint(a, theta, np.asarray(hint, float), axis_tol)
    if np.any(degenerate):
        raise DegenerateNormalData("k_n^2 + tau_g^2 vanishes at some samples")
    results = []
    for br in (Branch.PLUS, Branch.MINUS):
        dbar, res = _mean_direction(axis_field(samples, theta, br))
        results.append((res, br, dbar))
    results.sort(key=lambda r: r[0])
    (res, br, dbar), (other, _, _) = results
    certified = res <= axis_tol
    if strict and not certified:
        raise NoConsistentAxis(f"no sign branch gives a constant axis (best residual {res:.3g})")
    if np.median(nm.dot(a["N"], dbar)) < 0:
        dbar = -dbar
    return IsophoteAxis(d=dbar, theta=float(theta), sign_branch=br, residual=res,
                        other_residual=other, certified=bool(certified))


def _axis_from_hint(a, theta, hint, axis_tol) -> IsophoteAxis:
    N = a["N"]
    perp = hint - N * nm.dot(N, hint)[:, None]
    d = np.cos(theta) * N + np.sin(theta) * nm.unit(perp)
    dbar, res = _mean_direction(d)
    return IsophoteAxis(d=dbar, theta=float(theta), sign_branch=Branch.PLUS, residual=res,
                        other_residual=res, certified=bool(res <= axis_tol), degenerate=True)


def axis_derivative_check(samples: list[DarbouxSample], axis: IsophoteAxis) -> float:
    """max_i |d(s_{i+1}) - d(s_i)|, i.e. |d'| times the sample spacing."""
    if axis.degenerate:
        a = sample_arrays(samples)
        N = a["N"]
        perp = axis.d - N * nm.dot(N, axis.d)[:, None]
        d = np.cos(axis.theta) * N + np.sin(axis.theta) * nm.unit(perp)
    else:
        d = axis_field(samples, axis.theta, axis.sign_branch)
    return float(np.max(np.linalg.norm(np.diff(d, axis=0), axis=-1)))


def tangent_alignment(samples: list[DarbouxSample], d) -> float:
    """max |<T, d>| over the samples."""
    a = sample_arrays(samples)
    return float(np.max(np.abs(nm.dot(a["T"], np.asarray(d, float)))))


def cot_theta_branches(samples: list[DarbouxSample], profile: MuProfile) -> dict[tuple[int, int], np.ndarray]:
    """cot(theta) from the tan(theta) quotient, for each sign pairing
    (sign of the k_g term, sign of the k_n tau_g' - k_n' tau_g term)."""
    a = sample_arrays(samples)
    rho2 = a["k_n"] ** 2 + a["tau_g"] ** 2
    cross = a["k_n"] * profile.dtau_g - profile.dk_n * a["tau_g"]
    return {(p, q): (p * a["k_g"] * rho2 + q * cross) / rho2**1.5
            for p, q in itertools.product((1, -1), repeat=2)}


def cot_theta_consistency(samples, profile: MuProfile, theta: float) -> dict:
    """Residuals |cot(theta) - cot_formula| for every sign pairing; the best
    pairing is reported first."""
    target = 1.0 / np.tan(theta) if theta > 1e-12 else np.inf
    res = {k: float(np.max(np.abs(v - target))) for k, v in cot_theta_branches(samples, profile).items()}
    best = min(res, key=res.get)
    return {"best": best, "residual": res[best], "all": res}


def slant_helix_axis(samples: list[DarbouxSample], theta: float, signs=(1, 1, 1)) -> np.ndarray:
    """d = e1 tau/sqrt(k^2+t^2) sin(theta) T + e2 cos(theta) n + e3 k/sqrt(k^2+t^2) sin(theta) b."""
    a = sample_arrays(samples)
    k, t = a["kappa"][:, None], a["tau"][:, None]
    w = np.sqrt(k**2 + t**2)
    e1, e2, e3 = signs
    st, ct = np.sin(theta), np.cos(theta)
    return e1 * t / w * st * a["T"] + e2 * ct * a["n"] + e3 * k / w * st * a["b"]


def best_slant_helix_axis(samples, theta: float, target) -> tuple[tuple[int, int, int], float, np.ndarray]:
    """Sign triple of the closed-form slant-helix axis closest to ``target``."""
    best = None
    for signs in itertools.product((1, -1), repeat=3):
        d = slant_helix_axis(samples, theta, signs)
        err = float(np.max(nm.angle_between(d, np.asarray(target, float))))
        if best is None or err < best[1]:
            best = (signs, err, d)
    return best


def _sigma_on_grid(a) -> np.ndarray:
    k, t = a["kappa"], a["tau"]
    return k**2 * nm.grid_derivative(t / k, a["s"]) / (k**2 + t**2) ** 1.5


def _phi_theta_residual(phi: np.ndarray, theta: float) -> float:
    cands = np.stack([phi, -phi, np.pi - phi, phi - np.pi])
    return float(np.max(np.min(np.abs(nm.wrap_angle(theta - cands)), axis=0)))


def classify_isophote(samples: list[DarbouxSample], profile: Optional[MuProfile],
                      class_tol: float = CLASS_TOL, theta: Optional[float] = None,
                      axis: Optional[IsophoteAxis] = None, atol: float = CONST_ATOL,
                      rtol: float = CONST_RTOL, eps_deg: float = EPS_DEG) -> IsophoteClassification:
    """Priority-ordered family rules for a certified isophote.

    1. |tau_g| <= tol: line of curvature (planar, theta = -+phi mod pi)
    2. |k_g| <= tol: geodesic, hence slant helix
    3. |k_n| <= tol: asymptotic, hence general helix
    4. theta ~ pi/2: silhouette
    5. otherwise generic

    ``profile`` may be None only when the Gauss map is a single point
    (constant normal along the curve), which certifies every axis.  Rule 1
    needs the Frenet frame; straight segments skip it.
    """
    a = sample_arrays(samples)
    rho = _normal_rate(a)
    gauss_point = bool(np.all(rho < eps_deg))
    if profile is None and not gauss_point:
        raise NotCertifiedIsophote("mu profile required unless the normal is constant")
    if profile is not None and not profile.constant:
        raise NotCertifiedIsophote(f"mu is not constant (spread {profile.stats.spread:.3g})")
    if theta is None:
        theta = profile.theta_estimate if profile is not None else np.pi / 2
    frenet = bool(np.all(~np.isnan(a["phi"])))

    ev: dict = {
        "max_abs_k_g": float(np.max(np.abs(a["k_g"]))),
        "max_abs_k_n": float(np.max(np.abs(a["k_n"]))),
        "max_abs_tau_g": float(np.max(np.abs(a["tau_g"]))),
        "frenet_defined": frenet,
        "gauss_map_point": gauss_point,
        "theta": float(theta),
    }
    if profile is not None:
        ev["mu_stats"] = tuple(profile.stats)
    if axis is None and not gauss_point:
        axis = recover_axis(samples, theta, strict=False, eps_deg=eps_deg)
    if axis is not None:
        ev["axis"] = axis.d.tolist()
        ev["axis_residual"] = axis.residual
        ev["max_abs_<T,d>"] = tangent_alignment(samples, axis.d)
        # <n, d> = 0 is expected when asymptotic or when tau_g/k_n is constant
        if frenet:
            ev["max_abs_<n,d>"] = float(np.max(np.abs(nm.dot(a["n"], axis.d))))
        nz = np.abs(a["k_n"]) > eps_deg
        if np.count_nonzero(nz) >= 2:
            ratio = a["tau_g"][nz] / a["k_n"][nz]
            ev["tau_g/k_n_stats"] = tuple(nm.stats(ratio))
            ev["tau_g/k_n_constant"] = nm.is_constant(ratio, atol, rtol)

    if frenet and ev["max_abs_tau_g"] <= class_tol:
        ev["max_abs_tau"] = float(np.nanmax(np.abs(a["tau"])))
        ev["planar"] = ev["max_abs_tau"] <= class_tol
        ev["phi_theta_residual"] = _phi_theta_residual(a["phi"], theta)
        return IsophoteClassification(IsophoteKind.LINE_OF_CURVATURE, ev)

    # a straight segment is geodesic and asymptotic at once; without a Frenet
    # frame the sigma test cannot run, so it goes to the asymptotic rule
    if ev["max_abs_k_g"] <= class_tol and (frenet or ev["max_abs_k_n"] > class_tol):
        if frenet:
            sigma = _sigma_on_grid(a)
            ev["sigma_stats"] = tuple(nm.stats(sigma))
            ev["sigma_constant"] = nm.is_constant(sigma, atol, rtol)
            if axis is not None:
                signs, err, _ = best_slant_helix_axis(samples, theta, axis.d)
                ev["slant_axis_signs"] = signs
                ev["slant_axis_angle_error"] = err
        return IsophoteClassification(IsophoteKind.GEODESIC_SLANT_HELIX, ev)

    if ev["max_abs_k_n"] <= class_tol:
        if frenet:
            ratio = a["tau"] / a["kappa"]
            ev["tau/kappa_stats"] = tuple(nm.stats(ratio))
            ev["tau/kappa_constant"] = nm.is_constant(ratio, atol, rtol)
            ev["tan_theta_residual"] = float(np.max(np.abs(np.abs(ratio) - np.tan(theta))))
        else:
            ev["tau/kappa_skipped"] = "kappa vanishes; Frenet frame undefined"
        return IsophoteClassification(IsophoteKind.ASYMPTOTIC_GENERAL_HELIX, ev)

    if abs(theta - np.pi / 2) <= class_tol:
        return IsophoteClassification(IsophoteKind.SILHOUETTE, ev)
    return IsophoteClassification(IsophoteKind.GENERIC, ev)


def gauss_map_image(samples: list[DarbouxSample], eps_deg: float = EPS_DEG,
                    with_mu: bool = True) -> GaussMapImage:
    """Spherical image s -> N(s) and its geodesic curvature.

    The curvature kappa of the image comes from finite differences of the
    normals themselves and k_g-bar = sqrt(kappa^2 - 1), signed by the
    orientation of N x N'; ``mu`` from the Darboux invariants is attached
    for comparison.
    """
    a = sample_arrays(samples)
    if np.any(_normal_rate(a) < eps_deg):
        raise DegenerateNormalData("N' vanishes; spherical image is not regular")
    pts, s = a["N"], a["s"]
    d1 = nm.grid_derivative(pts, s, order=1)
    d2 = nm.grid_derivative(pts, s, order=2)
    sp2 = nm.dot(d1, d1)
    sp3 = sp2**1.5
    # on the unit sphere <N, N''> = -|N'|^2 exactly; splitting N'' into that
    # part and its tangential remainder gives kappa^2 - 1 = |N' x N''_t|^2/|N'|^6
    # without the cancellation of the direct difference
    d2t = d2 - pts * nm.dot(d2, pts)[..., None]
    crt = np.cross(d1, d2t)
    kappa = np.sqrt(nm.dot(crt, crt) / sp3**2 + 1.0)
    signed = nm.dot(crt, pts) / sp3
    kbar_g = np.sign(signed) * np.linalg.norm(crt, axis=-1) / sp3
    centered = pts - pts.mean(axis=0)
    normal = np.linalg.svd(centered, full_matrices=False)[2][-1]
    plane_res = float(np.max(np.abs(centered @ normal)))
    mu = mu_invariant(samples, eps_deg=eps_deg).mu if with_mu else None
    return GaussMapImage(points=pts, kbar_g=kbar_g, kbar_n=1.0, plane_fit_residual=plane_res,
                         image_curvature=kappa, kbar_g_signed=signed, mu=mu)
