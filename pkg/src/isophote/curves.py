"""Space curves, arc-length reparametrization and the Frenet apparatus.

Curves are plain callables ``t -> R^3`` that broadcast over arrays of
parameters (an input of shape ``(n,)`` returns ``(n, 3)``).  Closed-form
derivative suppliers are optional; when absent, derivatives come from
Richardson-extrapolated central differences of the next lower supplier.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import numerics as nm
from .errors import NotUnitSpeed, SingularSpeed, TooFewSamples, VanishingCurvature
from .tolerances import CONST_ATOL, CONST_RTOL, EPS_DEG

Vectorfn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SpaceCurve:
    eval: Vectorfn
    param_range: tuple[float, float]
    d1: Optional[Vectorfn] = None
    d2: Optional[Vectorfn] = None
    d3: Optional[Vectorfn] = None
    is_unit_speed: bool = False
    closed: bool = False
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __call__(self, t) -> np.ndarray:
        return np.asarray(self.eval(np.asarray(t, dtype=float)), dtype=float)

    @property
    def length_scale(self) -> float:
        return max(1.0, abs(self.param_range[1] - self.param_range[0]) / (2 * np.pi))

    def derivative(self, t, order: int) -> np.ndarray:
        """``order``-th derivative w.r.t. the curve parameter (1 <= order <= 3)."""
        t = np.asarray(t, dtype=float)
        suppliers = [self.eval, self.d1, self.d2, self.d3]
        if suppliers[order] is not None:
            return np.asarray(suppliers[order](t), dtype=float)
        base = max(k for k in range(order) if suppliers[k] is not None)
        return nm.richardson_derivative(suppliers[base], t, order - base)

    def derivatives(self, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.derivative(t, 1), self.derivative(t, 2), self.derivative(t, 3)


@dataclass(frozen=True)
class FrenetData:
    T: np.ndarray
    n: np.ndarray
    b: np.ndarray
    kappa: float
    tau: float
    s: float


class HelixKind(str, enum.Enum):
    GENERAL = "GeneralHelix"
    SLANT = "SlantHelix"
    BOTH = "Both"
    NEITHER = "Neither"


@dataclass(frozen=True)
class HelixVerdict:
    kind: HelixKind
    tau_over_kappa_stats: nm.Stats
    sigma_stats: nm.Stats
    planar: bool = False

    @property
    def is_general(self) -> bool:
        return self.kind in (HelixKind.GENERAL, HelixKind.BOTH)

    @property
    def is_slant(self) -> bool:
        return self.kind in (HelixKind.SLANT, HelixKind.BOTH)


class ArcLengthMap:
    """Cumulative arc length s(t) on a panel table with inverse t(s).

    Forward lengths use composite Gauss-Legendre quadrature; the inverse
    starts from a monotone cubic (PCHIP) interpolant of the table and is
    polished by Newton iterations on the exact quadrature, so the
    reparametrized curve is unit speed to rounding error.
    """

    def __init__(self, speed: Vectorfn, t0: float, t1: float, nodes: int = 256,
                 quad_tol: float = 1e-12, order: int = 10, eps_deg: float = EPS_DEG):
        self.speed = speed
        self.t0, self.t1 = float(t0), float(t1)
        self.order = order
        self.eps_deg = eps_deg
        for _ in range(6):
            table = np.linspace(self.t0, self.t1, nodes + 1)
            lo, hi = table[:-1], table[1:]
            pieces = self._panel_integrals(lo, hi, order)
            check = self._panel_integrals(lo, hi, order + 6)
            if abs(pieces.sum() - check.sum()) <= quad_tol * max(1.0, check.sum()):
                break
            nodes *= 2
        self.table_t = table
        self.table_s = np.concatenate([[0.0], np.cumsum(check)])
        self.length = float(self.table_s[-1])
        self._guess = PchipInterpolator(self.table_s, self.table_t, extrapolate=True)

    def _panel_integrals(self, lo, hi, order):
        x, w = nm.gauss_legendre(order)
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        pts = mid[:, None] + half[:, None] * x[None, :]
        sp = np.asarray(self.speed(pts.ravel()), dtype=float).reshape(pts.shape)
        if np.any(sp < self.eps_deg):
            raise SingularSpeed(f"speed below {self.eps_deg:g} at a quadrature node")
        return half * (sp @ w)

    def s_of_t(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        k = np.clip(np.searchsorted(self.table_t, t, side="right") - 1, 0, len(self.table_t) - 2)
        a = self.table_t[k]
        x, w = nm.gauss_legendre(self.order + 6)
        mid, half = 0.5 * (a + t), 0.5 * (t - a)
        pts = mid[..., None] + half[..., None] * x
        sp = np.asarray(self.speed(pts.ravel()), dtype=float).reshape(pts.shape)
        return self.table_s[k] + half * (sp @ w)

    def t_of_s(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        t = np.asarray(self._guess(s), dtype=float)
        scale = max(1.0, abs(self.t1 - self.t0))
        prev = np.inf
        for _ in range(12):
            step = (self.s_of_t(t) - s) / np.asarray(self.speed(t), dtype=float)
            t = t - step
            size = float(np.max(np.abs(step), initial=0.0))
            # quadratic convergence: stop once steps reach rounding level
            if size <= 4e-16 * scale or (size < 1e-12 * scale and size >= 0.5 * prev):
                break
            prev = size
        return t


def unit_speed_chain(c1, c2, c3):
    """Derivatives 1..3 w.r.t. arc length from derivatives w.r.t. any
    regular parameter (arrays of shape (..., 3))."""
    v = np.linalg.norm(c1, axis=-1)[..., None]
    vt = nm.dot(c1, c2)[..., None] / v
    vtt = (nm.dot(c2, c2)[..., None] + nm.dot(c1, c3)[..., None] - vt**2) / v
    a1 = c1 / v
    a1t = c2 / v - c1 * vt / v**2
    a1tt = c3 / v - 2 * c2 * vt / v**2 - c1 * vtt / v**2 + 2 * c1 * vt**2 / v**3
    return a1, a1t / v, (a1tt / v - a1t * vt / v**2) / v


def reparametrize_arclength(curve: SpaceCurve, quad_tol: float = 1e-12, nodes: int = 256,
                            eps_deg: float = EPS_DEG) -> SpaceCurve:
    """Arc-length reparametrization of ``curve`` over its parameter range.

    The returned curve is defined on ``[0, L]`` and carries closed-form
    derivative suppliers built from the chain rule.
    """
    t0, t1 = curve.param_range

    def speed(t):
        return np.linalg.norm(curve.derivative(t, 1), axis=-1)

    amap = ArcLengthMap(speed, t0, t1, nodes=nodes, quad_tol=quad_tol, eps_deg=eps_deg)

    def ev(s):
        return curve(amap.t_of_s(s))

    def chain(s):
        return unit_speed_chain(*curve.derivatives(amap.t_of_s(s)))

    return SpaceCurve(
        eval=ev,
        param_range=(0.0, amap.length),
        d1=lambda s: chain(s)[0],
        d2=lambda s: chain(s)[1],
        d3=lambda s: chain(s)[2],
        is_unit_speed=True,
        closed=curve.closed,
        name=curve.name,
        meta={"arclength_map": amap, "base": curve},
    )


def frenet_arrays(curve: SpaceCurve, s, eps_deg: float = EPS_DEG):
    """Vectorized Frenet apparatus: (T, n, b, kappa, tau) at arc lengths ``s``."""
    if not curve.is_unit_speed:
        raise NotUnitSpeed("Frenet apparatus requires a unit-speed curve")
    a1, a2, a3 = curve.derivatives(s)
    kappa = np.linalg.norm(a2, axis=-1)
    if np.any(kappa < eps_deg):
        raise VanishingCurvature(f"curvature below {eps_deg:g}; Frenet frame undefined")
    T = a1 / np.linalg.norm(a1, axis=-1)[..., None]
    n = a2 / kappa[..., None]
    b = np.cross(T, n)
    tau = nm.dot(np.cross(a1, a2), a3) / kappa**2
    return T, n, b, kappa, tau


def frenet_at(curve: SpaceCurve, s: float, eps_deg: float = EPS_DEG) -> FrenetData:
    T, n, b, kappa, tau = frenet_arrays(curve, np.float64(s), eps_deg)
    return FrenetData(T=T, n=n, b=b, kappa=float(kappa), tau=float(tau), s=float(s))


def frenet_serret_residuals(curve: SpaceCurve, s, eps_deg: float = EPS_DEG) -> np.ndarray:
    """Max of |T' - kn|, |n' + kT - tb|, |b' + tn| at each ``s``, with the
    frame derivatives taken by finite differences of the frame itself."""
    s = np.asarray(s, dtype=float)
    T, n, b, k, t = frenet_arrays(curve, s, eps_deg)
    dT = nm.richardson_derivative(lambda x: frenet_arrays(curve, x, eps_deg)[0], s)
    dn = nm.richardson_derivative(lambda x: frenet_arrays(curve, x, eps_deg)[1], s)
    db = nm.richardson_derivative(lambda x: frenet_arrays(curve, x, eps_deg)[2], s)
    k, t = k[..., None], t[..., None]
    r1 = np.linalg.norm(dT - k * n, axis=-1)
    r2 = np.linalg.norm(dn + k * T - t * b, axis=-1)
    r3 = np.linalg.norm(db + t * n, axis=-1)
    return np.maximum(np.maximum(r1, r2), r3)


def orthonormality_residual(T, n, b) -> np.ndarray:
    frame = np.stack([T, n, b], axis=-2)
    gram = frame @ np.swapaxes(frame, -1, -2)
    res = np.abs(gram - np.eye(3)).max(axis=(-1, -2))
    return np.maximum(res, np.linalg.norm(b - np.cross(T, n), axis=-1))


def sigma_profile(curve: SpaceCurve, s, eps_deg: float = EPS_DEG):
    """kappa, tau, tau/kappa and the slant-helix invariant
    sigma = kappa^2 (tau/kappa)' / (kappa^2 + tau^2)^(3/2) at ``s``."""
    s = np.asarray(s, dtype=float)
    _, _, _, kappa, tau = frenet_arrays(curve, s, eps_deg)
    ratio = tau / kappa
    dratio = nm.richardson_derivative(lambda x: _ratio(curve, x, eps_deg), s)
    sigma = kappa**2 * dratio / (kappa**2 + tau**2) ** 1.5
    return kappa, tau, ratio, sigma


def _ratio(curve, s, eps_deg):
    _, _, _, k, t = frenet_arrays(curve, s, eps_deg)
    return t / k


def classify_helix(curve: SpaceCurve, samples: int = 200, atol: float = CONST_ATOL,
                   rtol: float = CONST_RTOL, eps_deg: float = EPS_DEG) -> HelixVerdict:
    """General/slant helix detection by the constancy of tau/kappa and sigma.

    Plane curves (tau == 0 within ``atol``) are reported as degenerate
    general helices with ``planar=True``.
    """
    if samples < 8:
        raise TooFewSamples(f"need at least 8 samples, got {samples}")
    s = np.linspace(*curve.param_range, samples)
    kappa, tau, ratio, sigma = sigma_profile(curve, s, eps_deg)
    if np.any(kappa**2 + tau**2 < eps_deg):
        raise VanishingCurvature("kappa^2 + tau^2 vanishes; sigma undefined")
    rstats, sstats = nm.stats(ratio), nm.stats(sigma)
    if np.max(np.abs(tau)) <= atol:
        return HelixVerdict(HelixKind.GENERAL, rstats, sstats, planar=True)
    general = nm.is_constant(ratio, atol, rtol)
    slant = nm.is_constant(sigma, atol, rtol)
    kind = {(True, True): HelixKind.BOTH, (True, False): HelixKind.GENERAL,
            (False, True): HelixKind.SLANT, (False, False): HelixKind.NEITHER}[(general, slant)]
    return HelixVerdict(kind, rstats, sstats)
