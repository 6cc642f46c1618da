"""Randomized checks of closed forms and round trips."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from isophote import catalog as cat
from isophote.canal import (CanalSpec, constant_radius, envelope_residuals,
                            radius_law_integral_cor3b)
from isophote.curves import frenet_arrays, frenet_serret_residuals, orthonormality_residual
from isophote.isophotes import mu_invariant, recover_axis
from isophote.pipelines import samples_on, uv_line
from isophote.scene import parse_scene, serialize

FAST = settings(max_examples=25, deadline=None)


@FAST
@given(a=st.floats(0.3, 3.0), b=st.floats(0.1, 3.0))
def test_helix_frame_closed_form(a, b):
    h = cat.circular_helix(a, b)
    s = np.linspace(*h.param_range, 17)
    T, n, bb, k, t = frenet_arrays(h, s)
    assert np.max(orthonormality_residual(T, n, bb)) <= 1e-12
    assert np.allclose(k, a / (a * a + b * b), rtol=1e-12)
    assert np.allclose(t, b / (a * a + b * b), rtol=1e-12)
    assert np.max(frenet_serret_residuals(h, s[:5])) <= 1e-6


@FAST
@given(v0=st.floats(0.15, 1.3), sign=st.sampled_from([1.0, -1.0]))
def test_sphere_latitude_mu_is_tan(v0, sign):
    v0 *= sign
    _, ds = samples_on(uv_line(cat.sphere(), (0.0, v0), (1.0, 0.0), (0.0, 2 * np.pi)), 64)
    p = mu_invariant(ds)
    assert p.constant
    assert np.allclose(np.abs(p.mu), np.tan(abs(v0)), rtol=1e-8)
    theta = np.arccos(np.sin(v0))
    axis = recover_axis(ds, theta)
    assert min(np.linalg.norm(axis.d - [0, 0, 1]), np.linalg.norm(axis.d + [0, 0, 1])) <= 1e-6


@FAST
@given(beta=st.floats(0.02, np.pi / 2 - 0.02), v=st.floats(-np.pi, np.pi))
def test_integral_law_always_validates(beta, v):
    law = radius_law_integral_cor3b(beta, v, 0.0)
    assert law.validated and law.residual <= 1e-12
    assert 0 < law.slope <= 1


@FAST
@given(a=st.floats(0.5, 3.0), b=st.floats(0.2, 2.0), frac=st.floats(0.05, 0.9),
       seed=st.integers(0, 2**32 - 1))
def test_tube_envelope_identities(a, b, frac, seed):
    h = cat.circular_helix(a, b)
    r = frac * (a * a + b * b) / a  # below the focal radius 1/kappa
    spec = CanalSpec(h, constant_radius(r))
    rng = np.random.default_rng(seed)
    s = rng.uniform(*h.param_range, 50)
    v = rng.uniform(0, 2 * np.pi, 50)
    res = envelope_residuals(spec, s, v)
    assert max(res["sphere"], res["tangency"]) <= 1e-8 * max(1.0, r)
    assert res["normal_angle"] <= 1e-7


@FAST
@given(radius=st.floats(0.01, 100, allow_nan=False), major=st.floats(1.0, 5.0),
       minor=st.floats(0.05, 0.9), theta=st.floats(0.0, np.pi))
def test_scene_round_trip(radius, major, minor, theta):
    text = (f"seed: 5\nsurfaces:\n  - {{id: s, kind: sphere, params: {{radius: {radius!r}}}}}\n"
            f"  - {{id: t, kind: torus, params: {{major: {major!r}, minor: {minor!r}}}}}\n"
            f"jobs:\n  - {{verb: trace, args: {{surface: t, d: [0, 1, 2], theta: {theta!r}}},\n"
            f"     tolerances: {{trace_tol: 1.0e-10}}}}\n")
    cfg = parse_scene(text)
    assert parse_scene(serialize(cfg)) == cfg
    assert cfg.surfaces[0].params["radius"] == radius
