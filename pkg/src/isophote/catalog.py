"""Built-in curves and surfaces with closed-form derivatives.

Surfaces are oriented so that ``S_u x S_v`` points outward where that
makes sense (sphere, cylinder, torus).
"""

from __future__ import annotations

import numpy as np

from .curves import SpaceCurve
from .surfaces import ParamSurface


def _trig(kind: str, w: float, t, order: int):
    """order-th derivative of cos(w t) or sin(w t)."""
    phase = order * np.pi / 2
    if kind == "cos":
        return w**order * np.cos(w * t + phase)
    return w**order * np.sin(w * t + phase)


def _stack(*cols):
    return np.stack(np.broadcast_arrays(*cols), axis=-1)


# --------------------------------------------------------------------- curves

def circle(radius: float = 1.0, rate: float = 1.0, t_range=(0.0, 2 * np.pi)) -> SpaceCurve:
    """(r cos(w t), r sin(w t), 0).  Unit speed iff r*w == 1."""
    r, w = float(radius), float(rate)

    def deriv(k):
        return lambda t: _stack(r * _trig("cos", w, t, k), r * _trig("sin", w, t, k), 0.0 * t)

    closed = np.isclose(abs(w) * (t_range[1] - t_range[0]), 2 * np.pi)
    return SpaceCurve(deriv(0), tuple(t_range), deriv(1), deriv(2), deriv(3),
                      is_unit_speed=bool(np.isclose(abs(r * w), 1.0, rtol=1e-14, atol=0)),
                      closed=bool(closed), name="circle", meta={"radius": r, "rate": w})


def circular_helix(a: float = 1.0, b: float = 1.0, s_range=None) -> SpaceCurve:
    """Unit-speed helix (a cos(s/c), a sin(s/c), b s/c), c = sqrt(a^2 + b^2).

    Curvature a/c^2, torsion b/c^2, axis +z.
    """
    c = float(np.hypot(a, b))
    w = 1.0 / c
    if s_range is None:
        s_range = (0.0, 2 * np.pi * c)

    def deriv(k):
        def f(s):
            z = b * w * s if k == 0 else (b * w + 0.0 * s if k == 1 else 0.0 * s)
            return _stack(a * _trig("cos", w, s, k), a * _trig("sin", w, s, k), z)
        return f

    return SpaceCurve(deriv(0), tuple(s_range), deriv(1), deriv(2), deriv(3),
                      is_unit_speed=True, name="circular_helix",
                      meta={"a": a, "b": b, "axis": np.array([0.0, 0.0, 1.0]),
                            "kappa": a / c**2, "tau": b / c**2})


def slant_helix_example(a: float = 2.0, b: float = 1.0, t_range=(-1.2, 1.2)) -> SpaceCurve:
    """The Izumiya-Takeuchi slant helix, unit speed in its own parameter.

    kappa = sqrt(a^2 - b^2) cos(b t), tau = sqrt(a^2 - b^2) sin(b t); the
    default range keeps cos(b t) > 0.
    """
    if not a > b > 0:
        raise ValueError("need a > b > 0")
    amp = (a * a - b * b) / (2 * a)
    p, q = a + b, a - b
    zc = np.sqrt(a * a - b * b) / (a * b)

    def deriv(k):
        def f(t):
            x = -amp * (_trig("cos", p, t, k) / p**2 + _trig("cos", q, t, k) / q**2)
            y = -amp * (_trig("sin", p, t, k) / p**2 + _trig("sin", q, t, k) / q**2)
            z = -zc * _trig("cos", b, t, k)
            return _stack(x, y, z)
        return f

    return SpaceCurve(deriv(0), tuple(t_range), deriv(1), deriv(2), deriv(3),
                      is_unit_speed=True, name="slant_helix", meta={"a": a, "b": b})


CURVES = {
    "circle": circle,
    "circular_helix": circular_helix,
    "slant_helix": slant_helix_example,
}


# ------------------------------------------------------------------- surfaces

def sphere(radius: float = 1.0) -> ParamSurface:
    """(r cos u cos v, r sin u cos v, r sin v), u in [0, 2pi), v in [-pi/2, pi/2]."""
    r = float(radius)

    def S(u, v):
        return r * _stack(np.cos(u) * np.cos(v), np.sin(u) * np.cos(v), np.sin(v))

    def Su(u, v):
        return r * _stack(-np.sin(u) * np.cos(v), np.cos(u) * np.cos(v), 0.0 * v)

    def Sv(u, v):
        return r * _stack(-np.cos(u) * np.sin(v), -np.sin(u) * np.sin(v), np.cos(v))

    def Suu(u, v):
        return r * _stack(-np.cos(u) * np.cos(v), -np.sin(u) * np.cos(v), 0.0 * v)

    def Suv(u, v):
        return r * _stack(np.sin(u) * np.sin(v), -np.cos(u) * np.sin(v), 0.0 * v)

    def Svv(u, v):
        return -S(u, v)

    return ParamSurface(S, Su, Sv, ((0.0, 2 * np.pi), (-np.pi / 2, np.pi / 2)),
                        Suu, Suv, Svv, periodic=(True, False), name="sphere",
                        params={"radius": r})


def cylinder(radius: float = 1.0, height=(-2.0, 2.0)) -> ParamSurface:
    """(r cos u, r sin u, v)."""
    r = float(radius)

    def S(u, v):
        return _stack(r * np.cos(u), r * np.sin(u), v + 0.0 * u)

    def Su(u, v):
        return _stack(-r * np.sin(u), r * np.cos(u), 0.0 * (u + v))

    def Sv(u, v):
        z = 0.0 * (u + v)
        return _stack(z, z, z + 1.0)

    def Suu(u, v):
        return _stack(-r * np.cos(u), -r * np.sin(u), 0.0 * (u + v))

    def zero(u, v):
        z = 0.0 * (u + v)
        return _stack(z, z, z)

    return ParamSurface(S, Su, Sv, ((0.0, 2 * np.pi), tuple(height)), Suu, zero, zero,
                        periodic=(True, False), name="cylinder", params={"radius": r})


def torus(major: float = 2.0, minor: float = 0.5) -> ParamSurface:
    """((R + r cos v) cos u, (R + r cos v) sin u, r sin v); v is the tube angle."""
    R, r = float(major), float(minor)
    if not R > r > 0:
        raise ValueError("need major > minor > 0")

    def S(u, v):
        rho = R + r * np.cos(v)
        return _stack(rho * np.cos(u), rho * np.sin(u), r * np.sin(v) + 0.0 * u)

    def Su(u, v):
        rho = R + r * np.cos(v)
        return _stack(-rho * np.sin(u), rho * np.cos(u), 0.0 * (u + v))

    def Sv(u, v):
        return _stack(-r * np.sin(v) * np.cos(u), -r * np.sin(v) * np.sin(u), r * np.cos(v) + 0.0 * u)

    def Suu(u, v):
        rho = R + r * np.cos(v)
        return _stack(-rho * np.cos(u), -rho * np.sin(u), 0.0 * (u + v))

    def Suv(u, v):
        return _stack(r * np.sin(v) * np.sin(u), -r * np.sin(v) * np.cos(u), 0.0 * (u + v))

    def Svv(u, v):
        return _stack(-r * np.cos(v) * np.cos(u), -r * np.cos(v) * np.sin(u), -r * np.sin(v) + 0.0 * u)

    return ParamSurface(S, Su, Sv, ((0.0, 2 * np.pi), (0.0, 2 * np.pi)), Suu, Suv, Svv,
                        periodic=(True, True), name="torus", params={"major": R, "minor": r})


def rectifying_developable(curve: SpaceCurve, ruling=(-0.5, 0.5)) -> ParamSurface:
    """R(u, v) = c(v) + u D(v), D = (tau/kappa) T + b (modified Darboux vector).

    ``curve`` must be unit speed; the u = 0 curve is ``curve`` itself and is
    a geodesic, with surface normal equal to the principal normal.
    """
    from .curves import frenet_arrays
    from .numerics import richardson_derivative

    def frame(v):
        T, n, b, k, t = frenet_arrays(curve, v)
        return T, n, b, k, t

    def D(v):
        T, _, b, k, t = frame(v)
        return (t / k)[..., None] * T + b

    def dratio(v):
        return richardson_derivative(lambda x: frame(x)[4] / frame(x)[3], v)

    def Dp(v):
        T = frame(v)[0]
        return dratio(v)[..., None] * T

    def Dpp(v):
        T, n, _, k, _ = frame(v)
        r2 = richardson_derivative(lambda x: frame(x)[4] / frame(x)[3], v, order=2)
        return r2[..., None] * T + (dratio(v) * k)[..., None] * n

    def S(u, v):
        u = np.asarray(u, dtype=float)[..., None]
        return curve(v) + u * D(v)

    def Su(u, v):
        return D(np.broadcast_to(v, np.broadcast(u, v).shape))

    def Sv(u, v):
        u = np.asarray(u, dtype=float)[..., None]
        return curve.derivative(v, 1) + u * Dp(v)

    def Suu(u, v):
        z = 0.0 * (np.asarray(u, dtype=float) + v)
        return _stack(z, z, z)

    def Suv(u, v):
        return Dp(np.broadcast_to(v, np.broadcast(u, v).shape))

    def Svv(u, v):
        u = np.asarray(u, dtype=float)[..., None]
        return curve.derivative(v, 2) + u * Dpp(v)

    return ParamSurface(S, Su, Sv, (tuple(ruling), tuple(curve.param_range)), Suu, Suv, Svv,
                        periodic=(False, False), name="rectifying_developable",
                        params={"curve": curve.name})


def graph_wave(amplitude: float = 0.3) -> ParamSurface:
    """z = a sin(u) cos(v) over [-pi, pi]^2; a non-developable test patch."""
    a = float(amplitude)

    def S(u, v):
        return _stack(u + 0.0 * v, v + 0.0 * u, a * np.sin(u) * np.cos(v))

    def Su(u, v):
        z = 0.0 * (u + v)
        return _stack(z + 1.0, z, a * np.cos(u) * np.cos(v))

    def Sv(u, v):
        z = 0.0 * (u + v)
        return _stack(z, z + 1.0, -a * np.sin(u) * np.sin(v))

    def Suu(u, v):
        z = 0.0 * (u + v)
        return _stack(z, z, -a * np.sin(u) * np.cos(v))

    def Suv(u, v):
        z = 0.0 * (u + v)
        return _stack(z, z, -a * np.cos(u) * np.sin(v))

    def Svv(u, v):
        z = 0.0 * (u + v)
        return _stack(z, z, -a * np.sin(u) * np.cos(v))

    return ParamSurface(S, Su, Sv, ((-np.pi, np.pi), (-np.pi, np.pi)), Suu, Suv, Svv,
                        periodic=(False, False), name="graph", params={"amplitude": a})
