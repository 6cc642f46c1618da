"""Level-set tracing of f(u, v) = <N(u, v), d> - cos(theta) on a surface grid.

Marching squares over the parameter rectangle: sign changes on grid edges
are refined with a bracketing root finder on the exact field, linked into
polylines cell by cell, and stitched across periodic seams.  Saddle cells
are split by the sign at the cell centre.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import make_interp_spline
from scipy.optimize import brentq

from . import numerics as nm
from .surfaces import CurveOnSurface, ParamSurface, reparametrize_on_surface, darboux_along
from .tolerances import EPS_DEG, TRACE_TOL


@dataclass
class IsophoteTrace:
    uv_polylines: list[np.ndarray]
    xyz_polylines: list[np.ndarray]
    closed: list[bool]
    d: np.ndarray
    theta: float
    field_residual: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def is_empty(self) -> bool:
        return not self.uv_polylines


def isophote_field(surface: ParamSurface, d, theta: float, u, v) -> np.ndarray:
    su, sv = surface.partials(u, v)
    m = np.cross(su, sv)
    if surface.flip_normal:
        m = -m
    N = m / np.linalg.norm(m, axis=-1)[..., None]
    return nm.dot(N, d) - np.cos(theta)


def field_gradient(surface: ParamSurface, d, u, v) -> np.ndarray:
    """(df/du, df/dv) = (<N_u, d>, <N_v, d>)."""
    _, Nu, Nv = surface.normal_frame(u, v)
    return np.stack([nm.dot(Nu, d), nm.dot(Nv, d)], axis=-1)


def poeschl_slope(surface: ParamSurface, d, u, v) -> np.ndarray:
    """dv/du = -<N_u, d>/<N_v, d> along the isophote through (u, v)."""
    g = field_gradient(surface, d, u, v)
    return -g[..., 0] / g[..., 1]


def _grid_axis(lo, hi, cells, periodic):
    if periodic:
        return lo + (hi - lo) * np.arange(cells) / cells, cells
    return np.linspace(lo, hi, cells + 1), cells + 1


def trace_isophote(surface: ParamSurface, d, theta: float, grid=(64, 64),
                   trace_tol: float = TRACE_TOL, eps_deg: float = EPS_DEG,
                   polish: bool = False) -> IsophoteTrace:
    """Trace the isophote with axis ``d`` and angle ``theta`` on ``surface``.

    ``grid`` counts cells per direction.  An empty result (no sign change)
    is returned with min/max of the field in ``diagnostics``.
    """
    nu, nv = map(int, grid)
    if nu < 8 or nv < 8:
        raise ValueError("grid must be at least 8x8")
    d = nm.unit(np.asarray(d, dtype=float))
    (u0, u1), (v0, v1) = surface.domain
    pu, pv = surface.periodic
    us, mu_nodes = _grid_axis(u0, u1, nu, pu)
    vs, mv_nodes = _grid_axis(v0, v1, nv, pv)
    du, dv = (u1 - u0) / nu, (v1 - v0) / nv
    U, V = np.meshgrid(us, vs, indexing="ij")

    regular = surface.regularity(U, V) >= eps_deg
    F = np.full(U.shape, np.nan)
    F[regular] = isophote_field(surface, d, theta, U[regular], V[regular])
    ct = np.cos(theta)

    def f_at(u, v):
        return float(isophote_field(surface, d, theta, np.float64(u), np.float64(v)))

    def node(i, j):
        return i % mu_nodes, j % mv_nodes

    crossings: dict = {}

    def crossing(key):
        if key in crossings:
            return crossings[key]
        kind, i, j = key
        ua, va = us[i], vs[j]
        if kind == "h":
            g = lambda x: f_at(x, va)
            fa, fb = F[node(i, j)], F[node(i + 1, j)]
            x = ua if fa == 0 else (ua + du if fb == 0 else brentq(g, ua, ua + du, xtol=1e-15, rtol=1e-15))
            pt = (x, va)
        else:
            g = lambda y: f_at(ua, y)
            fa, fb = F[node(i, j)], F[node(i, j + 1)]
            y = va if fa == 0 else (va + dv if fb == 0 else brentq(g, va, va + dv, xtol=1e-15, rtol=1e-15))
            pt = (ua, y)
        if polish:
            pt = _polish(surface, d, ct, np.array(pt))
        crossings[key] = np.array(pt, dtype=float)
        return crossings[key]

    links: dict = defaultdict(list)
    singular_cells, saddles = [], 0
    for i in range(nu):
        for j in range(nv):
            corners = [node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)]
            vals = np.array([F[c] for c in corners])
            if np.any(np.isnan(vals)):
                singular_cells.append((i, j))
                continue
            pos = vals >= 0
            if pos.all() or not pos.any():
                continue
            ip, jp = (i + 1) % mu_nodes, (j + 1) % mv_nodes
            ii, jj = i % mu_nodes, j % mv_nodes
            edges = [("h", ii, jj), ("v", ip, jj), ("h", ii, jp), ("v", ii, jj)]
            # edge k joins corners (k, k+1) except the top edge which joins 3 and 2
            ends = [(0, 1), (1, 2), (3, 2), (0, 3)]
            cut = [k for k, (a, b) in enumerate(ends) if pos[a] != pos[b]]
            if len(cut) == 2:
                pairs = [tuple(cut)]
            else:
                saddles += 1
                centre = f_at(us[ii] + du / 2, vs[jj] + dv / 2) >= 0
                if centre == pos[0]:
                    pairs = [(0, 1), (2, 3)]
                else:
                    pairs = [(3, 0), (1, 2)]
            for a, b in pairs:
                ea, eb = edges[a], edges[b]
                links[ea].append(eb)
                links[eb].append(ea)

    polylines, closed = _chain(links)
    uv_lines, xyz_lines, resid = [], [], 0.0
    for keys in polylines:
        pts = np.array([crossing(k) for k in keys])
        pts = _unwrap(pts, surface.periods)
        vals = isophote_field(surface, d, theta, pts[:, 0], pts[:, 1])
        resid = max(resid, float(np.max(np.abs(vals))))
        uv_lines.append(pts)
        xyz_lines.append(surface(pts[:, 0], pts[:, 1]))
    finite = F[~np.isnan(F)]
    diag = {
        "f_min": float(finite.min()) if finite.size else float("nan"),
        "f_max": float(finite.max()) if finite.size else float("nan"),
        "singular_cells": singular_cells,
        "saddle_cells": saddles,
        "grid": (nu, nv),
        "trace_tol": trace_tol,
        "within_trace_tol": resid <= trace_tol,
    }
    return IsophoteTrace(uv_lines, xyz_lines, closed, d, float(theta), resid, diag)


def silhouette(surface: ParamSurface, d, grid=(64, 64), trace_tol: float = TRACE_TOL,
               eps_deg: float = EPS_DEG) -> IsophoteTrace:
    return trace_isophote(surface, d, np.pi / 2, grid, trace_tol, eps_deg)


def _polish(surface, d, ct, pt):
    u, v = pt
    f0 = float(nm.dot(surface.normal_frame(u, v)[0], d) - ct)
    g = field_gradient(surface, d, u, v)
    cand = pt - f0 * g / float(g @ g)
    f1 = float(nm.dot(surface.normal_frame(*cand)[0], d) - ct)
    return cand if abs(f1) < abs(f0) else pt


def _chain(links) -> tuple[list[list], list[bool]]:
    seen = set()
    chains, closed = [], []
    ends = [k for k, nb in links.items() if len(nb) == 1]
    for start in ends + list(links):
        if start in seen:
            continue
        chain, cur = [start], start
        seen.add(start)
        while True:
            nxt = [k for k in links[cur] if k not in seen]
            if not nxt:
                break
            cur = nxt[0]
            chain.append(cur)
            seen.add(cur)
        chains.append(chain)
        closed.append(len(chain) > 2 and start in links[cur])
    return chains, closed


def _unwrap(pts: np.ndarray, periods) -> np.ndarray:
    out = pts.copy()
    for axis, period in enumerate(periods):
        if period:
            out[:, axis] = np.unwrap(pts[:, axis], period=period)
    return out


# ----------------------------------------------------------- smooth contour

def contour_curve(surface: ParamSurface, trace: IsophoteTrace, index: int = 0,
                  newton_tol: float = 1e-15) -> CurveOnSurface:
    """A smooth parametrization lying exactly on a traced isophote.

    A quintic spline through the polyline gives a base curve c(t) in the
    parameter plane.  Each point is moved along the unit normal w(t) of c
    onto the level set, q(t) = c(t) + lam(t) w(t), by a scalar Newton solve.
    Implicit differentiation of f(q(t)) = 0 gives q'(t) in closed form.
    """
    pts = trace.uv_polylines[index]
    closed = trace.closed[index]
    d, ct = trace.d, np.cos(trace.theta)
    xyz = surface(pts[:, 0], pts[:, 1])
    if closed:
        wind = _closing_shift(pts, surface.periods)
        pts = np.vstack([pts, pts[:1] + wind])
        xyz = np.vstack([xyz, xyz[:1]])
    else:
        wind = np.zeros(2)
    t = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(xyz, axis=0), axis=-1))])
    total = t[-1]
    if closed:
        spl = make_interp_spline(t, pts - np.outer(t / total, wind), k=5, bc_type="periodic")
    else:
        spl = make_interp_spline(t, pts, k=5)
    dspl, d2spl = spl.derivative(1), spl.derivative(2)
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])

    def base(tt):
        c = spl(tt) + (tt / total)[..., None] * wind
        c1 = dspl(tt) + wind / total
        c2 = d2spl(tt)
        speed = np.linalg.norm(c1, axis=-1)[..., None]
        w = (c1 / speed) @ rot.T
        w1 = (c2 / speed - c1 * nm.dot(c1, c2)[..., None] / speed**3) @ rot.T
        return c, c1, w, w1

    def solve(tt):
        tt = np.asarray(tt, dtype=float)
        c, c1, w, w1 = base(tt)
        lam = np.zeros(tt.shape)
        prev = np.inf
        for _ in range(30):
            q = c + lam[..., None] * w
            N, Nu, Nv = surface.normal_frame(q[..., 0], q[..., 1])
            grad = np.stack([nm.dot(Nu, d), nm.dot(Nv, d)], axis=-1)
            step = (nm.dot(N, d) - ct) / nm.dot(grad, w)
            lam = lam - step
            size = float(np.max(np.abs(step), initial=0.0))
            if size <= newton_tol or (size < 1e-12 and size >= 0.5 * prev):
                break
            prev = size
        q = c + lam[..., None] * w
        _, Nu, Nv = surface.normal_frame(q[..., 0], q[..., 1])
        grad = np.stack([nm.dot(Nu, d), nm.dot(Nv, d)], axis=-1)
        lam1 = -nm.dot(grad, c1 + lam[..., None] * w1) / nm.dot(grad, w)
        return q, c1 + lam1[..., None] * w + lam[..., None] * w1

    return CurveOnSurface(surface=surface, uv=lambda tt: solve(tt)[0],
                          param_range=(0.0, float(total)),
                          duv=lambda tt: solve(tt)[1],
                          closed=closed, name=f"isophote[{index}]",
                          meta={"trace": trace, "index": index})


def _closing_shift(pts, periods) -> np.ndarray:
    shift = np.zeros(2)
    jump = pts[-1] - pts[0]
    for axis, period in enumerate(periods):
        if period:
            shift[axis] = period * np.round(jump[axis] / period)
    return shift


def isophote_samples(surface: ParamSurface, trace: IsophoteTrace, index: int = 0,
                     samples: int = 400, margin: float = 0.0, eps_deg: float = EPS_DEG):
    """Arc-length Darboux samples of traced polyline ``index``.

    Open polylines are sampled away from their ends by ``margin`` (a
    fraction of the length), where the spline base curve is least smooth.
    """
    curve = reparametrize_on_surface(contour_curve(surface, trace, index), eps_deg=eps_deg)
    L = curve.param_range[1]
    if trace.closed[index]:
        s = np.linspace(0.0, L, samples, endpoint=False)
    else:
        s = np.linspace(margin * L, (1 - margin) * L, samples)
    return curve, darboux_along(curve, s_values=s, eps_deg=eps_deg)
