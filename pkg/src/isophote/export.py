"""Artifact writers: curve CSV, triangle-mesh OBJ, parameter-domain SVG."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .surfaces import ParamSurface
from .tolerances import EPS_DEG
from .tracing import IsophoteTrace, isophote_field

CSV_HEADER = ("s", "u", "v", "x", "y", "z")


def _num(x: float) -> str:
    return f"{x:.17g}"


# ------------------------------------------------------------------------ CSV

def write_curve_csv(path, s, uv, xyz) -> Path:
    """One row per sample: s, u, v, x, y, z with 17 significant digits."""
    path = Path(path)
    rows = np.column_stack([np.asarray(s, float), np.asarray(uv, float), np.asarray(xyz, float)])
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([_num(x) for x in r])
    return path


def read_curve_csv(path) -> dict[str, np.ndarray]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {rows[0]}")
    data = np.array(rows[1:], dtype=float).reshape(-1, len(CSV_HEADER))
    return {k: data[:, i] for i, k in enumerate(CSV_HEADER)}


def polyline_arclength(xyz) -> np.ndarray:
    xyz = np.asarray(xyz, float)
    return np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(xyz, axis=0), axis=-1))])


# ------------------------------------------------------------------------ OBJ

@dataclass
class Mesh:
    vertices: np.ndarray
    normals: np.ndarray
    faces: np.ndarray  # (m, 3) zero-based, counter-clockwise about the normal
    uv: np.ndarray
    degenerate_faces: list[int]
    singular_vertices: list[int]
    shape: tuple[int, int]


def build_mesh(surface: ParamSurface, resolution=(32, 32), eps_deg: float = EPS_DEG) -> Mesh:
    """Triangulated (u, v) grid of ``surface``.

    Vertices are row-major in (u, v); a periodic direction gets no
    duplicate seam row, so the mesh is welded there.  Triangles wind
    counter-clockwise seen from the side the surface normal points to.
    Vertices where S_u x S_v vanishes take the normal of a nearby interior
    point and every face touching them, or of zero area, is flagged.
    """
    nu, nv = map(int, resolution)
    if nu < 4 or nv < 4:
        raise ValueError("mesh resolution must be at least 4 in each direction")
    (u0, u1), (v0, v1) = surface.domain
    pu, pv = surface.periodic
    us = u0 + (u1 - u0) * np.arange(nu) / nu if pu else np.linspace(u0, u1, nu + 1)
    vs = v0 + (v1 - v0) * np.arange(nv) / nv if pv else np.linspace(v0, v1, nv + 1)
    mu, mv = len(us), len(vs)
    U, V = np.meshgrid(us, vs, indexing="ij")
    P = surface(U, V).reshape(-1, 3)
    su, sv = surface.partials(U, V)
    m = np.cross(su, sv).reshape(-1, 3)
    if surface.flip_normal:
        m = -m
    size = np.linalg.norm(m, axis=-1)
    singular = np.flatnonzero(size < eps_deg)
    N = np.empty_like(m)
    ok = size >= eps_deg
    N[ok] = m[ok] / size[ok, None]
    uvf, vvf = U.ravel(), V.ravel()
    for k in singular:
        # step a hundredth of a cell toward the domain centre
        cu = uvf[k] + 0.01 * (u1 - u0) / nu * np.sign(0.5 * (u0 + u1) - uvf[k])
        cv = vvf[k] + 0.01 * (v1 - v0) / nv * np.sign(0.5 * (v0 + v1) - vvf[k])
        a, b = surface.partials(cu, cv)
        n = np.cross(a, b) * (-1 if surface.flip_normal else 1)
        N[k] = n / np.linalg.norm(n)

    def idx(i, j):
        return (i % mu) * mv + (j % mv)

    faces = []
    for i in range(nu):
        for j in range(nv):
            a, b, c, d = idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)
            faces += [(a, b, c), (a, c, d)]
    F = np.array(faces, dtype=np.int64)
    if surface.flip_normal:
        F = F[:, ::-1]
    area = 0.5 * np.linalg.norm(np.cross(P[F[:, 1]] - P[F[:, 0]], P[F[:, 2]] - P[F[:, 0]]), axis=-1)
    sing = set(singular.tolist())
    scale = max(1.0, float(np.ptp(P, axis=0).max()))
    degenerate = [int(f) for f in range(len(F))
                  if area[f] <= 1e-14 * scale**2 or sing.intersection(F[f].tolist())]
    return Mesh(P, N, F, np.column_stack([uvf, vvf]), degenerate, singular.tolist(), (mu, mv))


def write_obj(path, mesh: Mesh, comment: str = "") -> Path:
    path = Path(path)
    with path.open("w") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        fh.write(f"# vertices {len(mesh.vertices)} faces {len(mesh.faces)} "
                 f"degenerate {len(mesh.degenerate_faces)}\n")
        for p in mesh.vertices:
            fh.write("v " + " ".join(_num(x) for x in p) + "\n")
        for n in mesh.normals:
            fh.write("vn " + " ".join(_num(x) for x in n) + "\n")
        for f in mesh.faces + 1:
            fh.write("f " + " ".join(f"{k}//{k}" for k in f) + "\n")
    return path


def read_obj(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    v, vn, f = [], [], []
    for line in Path(path).read_text().splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            v.append([float(x) for x in parts[1:4]])
        elif parts[0] == "vn":
            vn.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            f.append([int(x.split("/")[0]) - 1 for x in parts[1:]])
    return np.array(v), np.array(vn), np.array(f, dtype=np.int64)


# ------------------------------------------------------------------------ SVG

def _color(t: float) -> str:
    """Diverging blue-white-red for t in [-1, 1]."""
    t = float(np.clip(t, -1, 1))
    if t < 0:
        r = g = int(255 * (1 + t))
        b = 255
    else:
        r = 255
        g = b = int(255 * (1 - t))
    return f"#{r:02x}{g:02x}{b:02x}"


def _wrap_segments(pts: np.ndarray, domain, periodic) -> list[np.ndarray]:
    """Map an unwrapped polyline back into the domain, split at seams."""
    out = pts.copy()
    for ax in range(2):
        if periodic[ax]:
            lo, hi = domain[ax]
            out[:, ax] = lo + np.mod(out[:, ax] - lo, hi - lo)
    jumps = np.flatnonzero(np.any(np.abs(np.diff(out, axis=0)) >
                                  0.5 * np.array([d[1] - d[0] for d in domain]), axis=1))
    return np.split(out, jumps + 1)


def write_svg(path, surface: ParamSurface, trace: IsophoteTrace, heat: int = 64,
              size: int = 512, eps_deg: float = EPS_DEG) -> Path:
    """Heat map of <N, d> - cos(theta) over the parameter domain with the
    traced polylines on top; u runs right, v runs up."""
    (u0, u1), (v0, v1) = surface.domain
    margin = 40
    W = H = size

    def X(u):
        return margin + (u - u0) / (u1 - u0) * W

    def Y(v):
        return margin + H - (v - v0) / (v1 - v0) * H

    cu = u0 + (np.arange(heat) + 0.5) * (u1 - u0) / heat
    cv = v0 + (np.arange(heat) + 0.5) * (v1 - v0) / heat
    U, V = np.meshgrid(cu, cv, indexing="ij")
    reg = surface.regularity(U, V) >= eps_deg
    F = np.full(U.shape, np.nan)
    F[reg] = isophote_field(surface, trace.d, trace.theta, U[reg], V[reg])
    scale = max(float(np.nanmax(np.abs(F))) if np.any(reg) else 1.0, 1e-300)
    cw, ch = W / heat, H / heat
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W + 2 * margin}" '
             f'height="{H + 2 * margin}" viewBox="0 0 {W + 2 * margin} {H + 2 * margin}">',
             f'<title>{surface.name}: d = {np.round(trace.d, 6).tolist()}, '
             f'theta = {trace.theta:.10g} rad</title>',
             '<g shape-rendering="crispEdges">']
    for i in range(heat):
        for j in range(heat):
            fill = "#808080" if np.isnan(F[i, j]) else _color(F[i, j] / scale)
            lines.append(f'<rect x="{X(u0) + i * cw:.3f}" y="{Y(v0) - (j + 1) * ch:.3f}" '
                         f'width="{cw + 0.05:.3f}" height="{ch + 0.05:.3f}" fill="{fill}"/>')
    lines.append("</g>")
    lines.append('<g fill="none" stroke="#000000" stroke-width="1.5">')
    for pts in trace.uv_polylines:
        for seg in _wrap_segments(pts, surface.domain, surface.periodic):
            if len(seg) < 2:
                continue
            coords = " ".join(f"{X(u):.3f},{Y(v):.3f}" for u, v in seg)
            lines.append(f'<polyline points="{coords}"/>')
    lines.append("</g>")
    lines.append(f'<rect x="{margin}" y="{margin}" width="{W}" height="{H}" fill="none" '
                 'stroke="#333333"/>')
    lines.append(f'<text x="{margin}" y="{margin + H + 25}" font-size="14">u: [{u0:.4g}, {u1:.4g}]'
                 f'   v: [{v0:.4g}, {v1:.4g}]   |f| max {scale:.3g}</text>')
    lines.append("</svg>")
    path = Path(path)
    path.write_text("\n".join(lines) + "\n")
    return path

