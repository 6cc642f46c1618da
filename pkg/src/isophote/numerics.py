"""Small numerical kernels shared by the geometry modules.

Finite differences with Richardson extrapolation, Fornberg weights for
derivatives on sampled grids, the constancy test and a few vector helpers.
Everything here broadcasts over leading array axes.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .tolerances import CONST_ATOL, CONST_RTOL

# Base step per derivative order for Richardson-extrapolated 5-point stencils.
# Higher orders need larger steps to keep cancellation error down.
_BASE_STEP = {1: 1e-3, 2: 2e-3, 3: 5e-3}
_STENCIL_ORDER = {1: 4, 2: 4, 3: 2}


def _five_point(f: Callable, x, h: float, order: int) -> np.ndarray:
    fm2, fm1 = np.asarray(f(x - 2 * h)), np.asarray(f(x - h))
    fp1, fp2 = np.asarray(f(x + h)), np.asarray(f(x + 2 * h))
    if order == 1:
        return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    if order == 2:
        f0 = np.asarray(f(x))
        return (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    if order == 3:
        return (-fm2 + 2 * fm1 - 2 * fp1 + fp2) / (2 * h**3)
    raise ValueError(f"unsupported derivative order {order}")


def richardson_derivative(f: Callable, x, order: int = 1, h: float | None = None, scale: float = 1.0):
    """Derivative of ``f`` at ``x`` by a 5-point central stencil plus one
    Richardson extrapolation step (step h and h/2).

    ``f`` may be vector valued and ``x`` may be an array; the stencil is
    applied elementwise, so ``f`` must broadcast over ``x``.
    """
    if h is None:
        h = _BASE_STEP[order] * max(1.0, abs(scale))
    x = np.asarray(x, dtype=float)
    coarse = _five_point(f, x, h, order)
    fine = _five_point(f, x, h / 2, order)
    p = 2.0 ** _STENCIL_ORDER[order]
    return (p * fine - coarse) / (p - 1)


def fornberg_weights(z: float, x: np.ndarray, m: int) -> np.ndarray:
    """Finite-difference weights for derivatives 0..m at ``z`` on nodes ``x``.

    Returns an array of shape (m + 1, len(x)).  Classic recursion from
    Fornberg, "Generation of finite difference formulas on arbitrarily
    spaced grids" (Math. Comp. 1988).
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    c = np.zeros((m + 1, n))
    c1 = 1.0
    c4 = x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


def grid_derivative(values, s, order: int = 1, width: int = 9) -> np.ndarray:
    """Derivative of sampled ``values`` (first axis = samples) w.r.t. the
    sample coordinates ``s``, using ``width`` nearest nodes at every point.

    Interior points get centred stencils; ends fall back to one-sided ones.
    """
    values = np.asarray(values, dtype=float)
    s = np.asarray(s, dtype=float)
    n = len(s)
    if n < 2:
        raise ValueError("need at least two samples")
    width = min(width, n)
    half = width // 2
    out = np.empty_like(values)
    for i in range(n):
        lo = min(max(i - half, 0), n - width)
        idx = slice(lo, lo + width)
        w = fornberg_weights(s[i], s[idx], order)[order]
        out[i] = np.tensordot(w, values[idx], axes=(0, 0))
    return out


class Stats(NamedTuple):
    min: float
    max: float
    median: float

    @property
    def spread(self) -> float:
        return self.max - self.min


def stats(values) -> Stats:
    v = np.asarray(values, dtype=float)
    return Stats(float(np.min(v)), float(np.max(v)), float(np.median(v)))


def is_constant(values, atol: float = CONST_ATOL, rtol: float = CONST_RTOL) -> bool:
    """(max - min) <= atol + rtol * max(1, |median|)."""
    st = stats(values)
    return st.spread <= atol + rtol * max(1.0, abs(st.median))


def unit(v, eps: float = 0.0) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    nrm = np.linalg.norm(v, axis=-1, keepdims=True)
    if eps and np.any(nrm < eps):
        raise ZeroDivisionError("vector norm below threshold")
    return v / nrm


def angle_between(a, b) -> np.ndarray:
    """Angle between vectors, accurate near 0 and pi."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    cr = np.linalg.norm(np.cross(a, b), axis=-1)
    dt = np.sum(a * b, axis=-1)
    return np.arctan2(cr, dt)


def dot(a, b) -> np.ndarray:
    return np.sum(np.asarray(a) * np.asarray(b), axis=-1)


def wrap_angle(x):
    """Map angles into (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2 * np.pi)


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)
