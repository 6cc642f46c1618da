"""Parametric surfaces, unit normals and Darboux frames of surface curves."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import numerics as nm
from .curves import ArcLengthMap, SpaceCurve
from .errors import NotUnitSpeed, SingularPoint, VanishingCurvature
from .tolerances import EPS_DEG, FRAME_RTOL

Surfacefn = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ParamSurface:
    """A regular map (u, v) -> R^3 with first (and optionally second) partials.

    ``flip_normal`` reverses the S_u x S_v orientation; it is set by
    constructions whose natural parameter order would point the normal
    inward (canal surfaces).
    """

    eval: Surfacefn
    su: Surfacefn
    sv: Surfacefn
    domain: tuple[tuple[float, float], tuple[float, float]]
    suu: Optional[Surfacefn] = None
    suv: Optional[Surfacefn] = None
    svv: Optional[Surfacefn] = None
    periodic: tuple[bool, bool] = (False, False)
    flip_normal: bool = False
    name: str = ""
    params: dict = field(default_factory=dict, compare=False)

    def __call__(self, u, v) -> np.ndarray:
        return np.asarray(self.eval(np.asarray(u, float), np.asarray(v, float)), dtype=float)

    def partials(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        return np.asarray(self.su(u, v), float), np.asarray(self.sv(u, v), float)

    def second_partials(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        suu = self.suu(u, v) if self.suu else nm.richardson_derivative(lambda x: self.su(x, v), u)
        suv = self.suv(u, v) if self.suv else nm.richardson_derivative(lambda y: self.su(u, y), v)
        svv = self.svv(u, v) if self.svv else nm.richardson_derivative(lambda y: self.sv(u, y), v)
        return np.asarray(suu, float), np.asarray(suv, float), np.asarray(svv, float)

    @property
    def periods(self) -> tuple[Optional[float], Optional[float]]:
        return tuple(d[1] - d[0] if p else None for d, p in zip(self.domain, self.periodic))

    def normal_frame(self, u, v, eps_deg: float = EPS_DEG):
        """Unit normal and its partials (N, N_u, N_v)."""
        su, sv = self.partials(u, v)
        suu, suv, svv = self.second_partials(u, v)
        m = np.cross(su, sv)
        mu = np.cross(suu, sv) + np.cross(su, suv)
        mv = np.cross(suv, sv) + np.cross(su, svv)
        if self.flip_normal:
            m, mu, mv = -m, -mu, -mv
        mn = np.linalg.norm(m, axis=-1)[..., None]
        if np.any(mn < eps_deg):
            raise SingularPoint(f"|S_u x S_v| below {eps_deg:g}")
        N = m / mn
        Nu = (mu - N * nm.dot(N, mu)[..., None]) / mn
        Nv = (mv - N * nm.dot(N, mv)[..., None]) / mn
        return N, Nu, Nv

    def regularity(self, u, v) -> np.ndarray:
        su, sv = self.partials(u, v)
        return np.linalg.norm(np.cross(su, sv), axis=-1)


def unit_normal(surface: ParamSurface, u, v, eps_deg: float = EPS_DEG) -> np.ndarray:
    su, sv = surface.partials(u, v)
    m = np.cross(su, sv)
    if surface.flip_normal:
        m = -m
    mn = np.linalg.norm(m, axis=-1)[..., None]
    if np.any(mn < eps_deg):
        raise SingularPoint(f"|S_u x S_v| below {eps_deg:g} at ({u}, {v})")
    return m / mn


@dataclass(frozen=True)
class CurveOnSurface:
    """A curve t -> (u(t), v(t)) in the parameter domain of ``surface``.

    ``uv`` returns an array (..., 2).  Derivative suppliers are optional.
    """

    surface: ParamSurface
    uv: Callable[[np.ndarray], np.ndarray]
    param_range: tuple[float, float]
    duv: Optional[Callable] = None
    d2uv: Optional[Callable] = None
    is_unit_speed: bool = False
    closed: bool = False
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def uv_derivs(self, t, order: int = 2):
        t = np.asarray(t, dtype=float)
        p = np.asarray(self.uv(t), float)
        if self.duv is not None:
            d1 = np.asarray(self.duv(t), float)
        else:
            d1 = nm.richardson_derivative(self.uv, t)
        if order < 2:
            return p, d1, None
        if self.d2uv is not None:
            d2 = np.asarray(self.d2uv(t), float)
        elif self.duv is not None:
            d2 = nm.richardson_derivative(self.duv, t)
        else:
            d2 = nm.richardson_derivative(self.uv, t, order=2)
        return p, d1, d2

    def lifted_derivs(self, t, order: int = 2):
        """Point, first and second derivative of t -> S(uv(t))."""
        return self.surface_lift(*self.uv_derivs(t, order))

    def surface_lift(self, p, d1, d2=None):
        u, v = p[..., 0], p[..., 1]
        su, sv = self.surface.partials(u, v)
        u1, v1 = d1[..., :1], d1[..., 1:]
        a1 = su * u1 + sv * v1
        if d2 is None:
            return self.surface(u, v), a1, None
        suu, suv, svv = self.surface.second_partials(u, v)
        u2, v2 = d2[..., :1], d2[..., 1:]
        a2 = suu * u1**2 + 2 * suv * u1 * v1 + svv * v1**2 + su * u2 + sv * v2
        return self.surface(u, v), a1, a2

    def lifted(self) -> SpaceCurve:
        return SpaceCurve(
            eval=lambda t: self.lifted_derivs(t, order=1)[0],
            param_range=self.param_range,
            d1=lambda t: self.lifted_derivs(t, order=1)[1],
            d2=lambda t: self.lifted_derivs(t)[2],
            is_unit_speed=self.is_unit_speed,
            closed=self.closed,
            name=self.name,
        )


def reparametrize_on_surface(curve: CurveOnSurface, quad_tol: float = 1e-12, nodes: int = 256,
                             eps_deg: float = EPS_DEG) -> CurveOnSurface:
    """Arc-length reparametrization of a surface curve (lifted length)."""

    def speed(t):
        return np.linalg.norm(curve.lifted_derivs(t, order=1)[1], axis=-1)

    amap = ArcLengthMap(speed, *curve.param_range, nodes=nodes, quad_tol=quad_tol, eps_deg=eps_deg)

    def derivs(s, order):
        t = amap.t_of_s(s)
        p, d1, d2 = curve.uv_derivs(t, order)
        _, a1, a2 = curve.surface_lift(p, d1, d2)
        tp = 1.0 / np.linalg.norm(a1, axis=-1)
        if order < 2:
            return d1 * tp[..., None]
        tpp = -nm.dot(a1, a2) * tp**4
        return d2 * (tp**2)[..., None] + d1 * tpp[..., None]

    return CurveOnSurface(
        surface=curve.surface,
        uv=lambda s: curve.uv(amap.t_of_s(s)),
        param_range=(0.0, amap.length),
        duv=lambda s: derivs(s, 1),
        d2uv=lambda s: derivs(s, 2),
        is_unit_speed=True,
        closed=curve.closed,
        name=curve.name,
        meta={"arclength_map": amap, "base": curve},
    )


@dataclass(frozen=True)
class DarbouxSample:
    s: float
    u: float
    v: float
    point: np.ndarray
    T: np.ndarray
    B: np.ndarray
    N: np.ndarray
    k_g: float
    k_n: float
    tau_g: float
    kappa: float
    tau: Optional[float] = None
    phi: Optional[float] = None
    n: Optional[np.ndarray] = None
    b: Optional[np.ndarray] = None

    @property
    def has_frenet(self) -> bool:
        return self.phi is not None


def _frame_arrays(curve: CurveOnSurface, s, eps_deg):
    p, d1, d2 = curve.uv_derivs(s)
    pt, a1, a2 = curve.surface_lift(p, d1, d2)
    N, Nu, Nv = curve.surface.normal_frame(p[..., 0], p[..., 1], eps_deg)
    dN = Nu * d1[..., :1] + Nv * d1[..., 1:]
    T = a1 / np.linalg.norm(a1, axis=-1)[..., None]
    B = np.cross(N, T)
    return p, pt, a1, a2, T, B, N, dN


def _principal_normal(curve, s, eps_deg):
    _, _, a1, a2, T, _, _, _ = _frame_arrays(curve, s, eps_deg)
    a2 = a2 - T * nm.dot(a2, T)[..., None]
    return a2 / np.linalg.norm(a2, axis=-1)[..., None]


def darboux_along(curve: CurveOnSurface, samples: int = 200, s_values=None,
                  eps_deg: float = EPS_DEG, speed_tol: float = FRAME_RTOL) -> list[DarbouxSample]:
    """Darboux frame {T, B = N x T, N} and (k_g, k_n, tau_g) along ``curve``.

    Frenet quantities (kappa > eps_deg only) are attached as well: n, b, the
    rotation angle phi = atan2(k_n, k_g) unwrapped along s, and tau from the
    derivative of the principal normal.
    """
    if not curve.is_unit_speed:
        raise NotUnitSpeed("darboux_along requires an arc-length parametrized curve")
    s = np.linspace(*curve.param_range, samples) if s_values is None else np.asarray(s_values, float)
    p, pt, a1, a2, T, B, N, dN = _frame_arrays(curve, s, eps_deg)
    speed = np.linalg.norm(a1, axis=-1)
    if np.max(np.abs(speed - 1.0)) > speed_tol:
        raise NotUnitSpeed(f"lifted speed deviates from 1 by {np.max(np.abs(speed - 1)):.3g}")
    k_g = nm.dot(a2, B)
    k_n = nm.dot(a2, N)
    tau_g = -nm.dot(B, dN)
    kappa = np.linalg.norm(a2 - T * nm.dot(a2, T)[..., None], axis=-1)
    ok = kappa >= eps_deg

    phi = np.full(len(s), np.nan)
    tau = np.full(len(s), np.nan)
    n = np.full((len(s), 3), np.nan)
    b = np.full((len(s), 3), np.nan)
    if np.any(ok):
        idx = np.flatnonzero(ok)
        phi[idx] = np.arctan2(k_n[idx], k_g[idx])
        # unwrap each contiguous run of defined samples
        runs = np.split(idx, np.flatnonzero(np.diff(idx) > 1) + 1)
        for run in runs:
            phi[run] = np.unwrap(phi[run])
        n[idx] = _principal_normal(curve, s[idx], eps_deg)
        b[idx] = np.cross(T[idx], n[idx])
        dn = nm.richardson_derivative(lambda x: _principal_normal(curve, x, eps_deg), s[idx])
        tau[idx] = nm.dot(dn, b[idx])

    out = []
    for i in range(len(s)):
        frenet = bool(ok[i])
        out.append(DarbouxSample(
            s=float(s[i]), u=float(p[i, 0]), v=float(p[i, 1]), point=pt[i],
            T=T[i], B=B[i], N=N[i],
            k_g=float(k_g[i]), k_n=float(k_n[i]), tau_g=float(tau_g[i]), kappa=float(kappa[i]),
            tau=float(tau[i]) if frenet else None,
            phi=float(phi[i]) if frenet else None,
            n=n[i] if frenet else None,
            b=b[i] if frenet else None,
        ))
    return out


def rotate_to_frenet(sample: DarbouxSample, eps_deg: float = EPS_DEG):
    """(n, b) from the Darboux frame rotated by phi about T."""
    if sample.phi is None or sample.kappa < eps_deg:
        raise VanishingCurvature("phi undefined where kappa vanishes")
    c, s = np.cos(sample.phi), np.sin(sample.phi)
    return c * sample.B + s * sample.N, -s * sample.B + c * sample.N


def sample_arrays(samples: list[DarbouxSample]) -> dict[str, np.ndarray]:
    """Column view of a sample list; undefined Frenet entries become NaN."""
    def col(name):
        vals = [getattr(x, name) for x in samples]
        return np.array([np.nan if v is None else v for v in vals], dtype=float)

    def vec(name):
        return np.array([getattr(x, name) if getattr(x, name) is not None else [np.nan] * 3
                         for x in samples], dtype=float)

    out = {k: col(k) for k in ("s", "u", "v", "k_g", "k_n", "tau_g", "kappa", "tau", "phi")}
    out.update({k: vec(k) for k in ("point", "T", "B", "N", "n", "b")})
    return out


def darboux_residuals(samples: list[DarbouxSample]) -> dict[str, float]:
    """Finite-difference checks of the Darboux equations and the
    Darboux/Frenet identities over a sample list."""
    a = sample_arrays(samples)
    s = a["s"]
    dT, dB, dN = (nm.grid_derivative(a[k], s) for k in ("T", "B", "N"))
    kg, kn, tg = a["k_g"][:, None], a["k_n"][:, None], a["tau_g"][:, None]
    res = {
        "T'": float(np.max(np.linalg.norm(dT - (kg * a["B"] + kn * a["N"]), axis=-1))),
        "B'": float(np.max(np.linalg.norm(dB - (-kg * a["T"] + tg * a["N"]), axis=-1))),
        "N'": float(np.max(np.linalg.norm(dN - (-kn * a["T"] - tg * a["B"]), axis=-1))),
        "B-NxT": float(np.max(np.linalg.norm(a["B"] - np.cross(a["N"], a["T"]), axis=-1))),
    }
    ok = ~np.isnan(a["phi"])
    if np.count_nonzero(ok) >= 9 and np.all(ok):
        k, phi = a["kappa"], a["phi"]
        dphi = nm.grid_derivative(phi, s)
        res["kappa^2"] = float(np.max(np.abs(k**2 - a["k_g"] ** 2 - a["k_n"] ** 2)))
        res["k_g=k cos(phi)"] = float(np.max(np.abs(a["k_g"] - k * np.cos(phi))))
        res["k_n=k sin(phi)"] = float(np.max(np.abs(a["k_n"] - k * np.sin(phi))))
        res["tau_g=tau-phi'"] = float(np.max(np.abs(a["tau_g"] - (a["tau"] - dphi))))
    return res
