import numpy as np
import pytest

from isophote import catalog as cat
from isophote import numerics as nm
from isophote.surfaces import unit_normal
from isophote.tracing import (contour_curve, isophote_field, isophote_samples, poeschl_slope,
                              silhouette, trace_isophote)


def test_sphere_latitude_single_closed_polyline():
    tr = trace_isophote(cat.sphere(), (0, 0, 1), np.pi / 3, (128, 128))
    assert len(tr.uv_polylines) == 1 and tr.closed == [True]
    assert tr.field_residual <= 1e-9
    assert np.allclose(tr.uv_polylines[0][:, 1], np.pi / 6, atol=1e-9)
    assert tr.diagnostics["singular_cells"]  # the poles are reported, not hidden


def test_cylinder_rulings():
    tr = trace_isophote(cat.cylinder(), (1, 0, 0), np.pi / 3, (64, 64))
    us = sorted(float(np.mean(nm.wrap_angle(p[:, 0]))) for p in tr.uv_polylines)
    assert us == pytest.approx([-np.pi / 3, np.pi / 3], abs=1e-9)
    assert tr.closed == [False, False]


def test_cylinder_axis_gives_empty_trace():
    tr = trace_isophote(cat.cylinder(), (0, 0, 1), np.pi / 4, (32, 32))
    assert tr.is_empty


def test_sphere_silhouette_is_equator():
    tr = silhouette(cat.sphere(), (0, 0, 1), (64, 64))
    assert len(tr.uv_polylines) == 1
    assert np.allclose(tr.uv_polylines[0][:, 1], 0.0, atol=1e-12)


def test_cylinder_silhouette_rulings():
    tr = silhouette(cat.cylinder(), (1, 0, 0), (64, 64))
    us = sorted(abs(float(np.mean(nm.wrap_angle(p[:, 0])))) for p in tr.uv_polylines)
    assert us == pytest.approx([np.pi / 2, np.pi / 2], abs=1e-9)


def test_torus_silhouette_two_circles():
    tr = silhouette(cat.torus(2.0, 0.5), (0, 0, 1), (64, 64))
    vs = sorted(float(np.mean(p[:, 1])) for p in tr.uv_polylines)
    assert vs == pytest.approx([0.0, np.pi], abs=1e-9)
    assert all(tr.closed)


def test_polish_keeps_points_on_level_set():
    tr = trace_isophote(cat.torus(), (0.3, 0.2, 1.0), 1.0, (48, 48), polish=True)
    assert tr.field_residual <= 1e-9


def test_poeschl_slope_flat_on_latitude():
    u = np.linspace(0, 2 * np.pi, 9)
    assert np.allclose(poeschl_slope(cat.sphere(), (0, 0, 1), u, np.pi / 6 + 0 * u), 0, atol=1e-12)


def test_contour_curve_lies_on_level_set():
    s = cat.torus()
    d = nm.unit(np.array([0.3, 0.2, 1.0]))
    tr = trace_isophote(s, d, 1.0, (64, 64))
    c = contour_curve(s, tr)
    t = np.linspace(*c.param_range, 301)
    uv = c.uv(t)
    assert np.max(np.abs(isophote_field(s, d, 1.0, uv[:, 0], uv[:, 1]))) <= 1e-12
    # the closed-form derivative agrees with a finite difference
    h = 1e-6
    fd = (c.uv(t[1:-1] + h) - c.uv(t[1:-1] - h)) / (2 * h)
    _, d1, _ = c.uv_derivs(t[1:-1], order=1)
    assert np.max(np.abs(fd - d1)) <= 1e-6


def test_isophote_samples_are_unit_speed_and_on_isophote():
    s = cat.sphere()
    tr = trace_isophote(s, (0, 0, 1), np.pi / 3, (64, 64))
    _, ds = isophote_samples(s, tr, samples=100)
    N = np.array([x.N for x in ds])
    assert np.allclose(N[:, 2], 0.5, atol=1e-12)
    assert np.allclose(N, unit_normal(s, [x.u for x in ds], [x.v for x in ds]), atol=1e-12)
