import numpy as np
import pytest
from scipy.integrate import quad

from isophote import catalog as cat
from isophote.curves import (HelixKind, SpaceCurve, classify_helix, frenet_arrays, frenet_at,
                             frenet_serret_residuals, orthonormality_residual,
                             reparametrize_arclength, sigma_profile)
from isophote.errors import NotUnitSpeed, TooFewSamples, VanishingCurvature


def test_double_speed_circle_rescales_to_length_2pi():
    c = reparametrize_arclength(cat.circle(1.0, 2.0, (0.0, np.pi)))
    assert c.is_unit_speed
    assert c.param_range[1] == pytest.approx(2 * np.pi, abs=1e-12)
    s = np.linspace(0, 2 * np.pi, 33)
    assert np.allclose(c(s), np.stack([np.cos(s), np.sin(s), 0 * s], -1), atol=1e-12)
    assert np.allclose(np.linalg.norm(c.derivative(s, 1), axis=-1), 1.0, atol=1e-12)


def test_unit_speed_helix_is_unchanged():
    h = cat.circular_helix(1.0, 1.0)
    r = reparametrize_arclength(h)
    s = np.linspace(*h.param_range, 57)
    assert r.param_range[1] == pytest.approx(h.param_range[1], rel=1e-12)
    assert np.allclose(r(s), h(s), atol=1e-11)


def test_example1_length_matches_adaptive_quadrature():
    g = cat.slant_helix_example(2.0, 1.0, (0.0, 2 * np.pi))
    # the catalog curve is unit speed, so feed a deliberately non-unit-speed copy
    slow = SpaceCurve(lambda t: g(t ** 2 / (2 * np.pi)), (0.0, 2 * np.pi),
                      d1=lambda t: g.derivative(t ** 2 / (2 * np.pi), 1) * (t / np.pi)[..., None])
    r = reparametrize_arclength(slow)
    oracle, _ = quad(lambda t: np.linalg.norm(slow.d1(np.array(t))), 0, 2 * np.pi,
                     epsabs=1e-13, epsrel=1e-13, limit=200)
    assert r.param_range[1] == pytest.approx(oracle, abs=1e-10)


def test_helix_a1_b1_curvature_and_torsion_half():
    f = frenet_at(cat.circular_helix(1.0, 1.0), 0.7)
    assert f.kappa == pytest.approx(0.5, abs=1e-12)
    assert f.tau == pytest.approx(0.5, abs=1e-12)


def test_unit_circle_frame_at_zero():
    f = frenet_at(cat.circle(), 0.0)
    assert np.allclose(f.T, [0, 1, 0]) and np.allclose(f.n, [-1, 0, 0])
    assert f.kappa == pytest.approx(1.0) and f.tau == pytest.approx(0.0, abs=1e-14)


def test_example1_closed_forms():
    g = cat.slant_helix_example(2.0, 1.0)
    s = np.linspace(*g.param_range, 200)
    _, _, _, k, t = frenet_arrays(g, s)
    assert np.allclose(k, np.sqrt(3) * np.cos(s), atol=1e-12)
    assert np.allclose(t, np.sqrt(3) * np.sin(s), atol=1e-12)


def test_frenet_requires_unit_speed():
    with pytest.raises(NotUnitSpeed):
        frenet_at(cat.circle(2.0), 0.0)


def test_straight_line_has_no_frenet_frame():
    line = SpaceCurve(lambda s: np.stack([s, 0 * s, 0 * s], -1), (0.0, 1.0),
                      d1=lambda s: np.stack([1 + 0 * s, 0 * s, 0 * s], -1),
                      d2=lambda s: np.zeros(np.shape(s) + (3,)),
                      d3=lambda s: np.zeros(np.shape(s) + (3,)), is_unit_speed=True)
    with pytest.raises(VanishingCurvature):
        frenet_at(line, 0.5)


@pytest.mark.parametrize("curve", [cat.circular_helix(2.0, 1.0), cat.slant_helix_example()])
def test_frame_is_orthonormal_and_obeys_frenet_serret(curve):
    s = np.linspace(*curve.param_range, 31)[1:-1]
    T, n, b, _, _ = frenet_arrays(curve, s)
    assert np.max(orthonormality_residual(T, n, b)) <= 1e-13
    assert np.max(frenet_serret_residuals(curve, s)) <= 1e-6


def test_classify_circular_helix_both():
    v = classify_helix(cat.circular_helix(2.0, 1.0))
    assert v.kind is HelixKind.BOTH and v.is_general and v.is_slant


def test_classify_example1_slant_only():
    v = classify_helix(cat.slant_helix_example(2.0, 1.0))
    assert v.kind is HelixKind.SLANT
    assert v.sigma_stats.median == pytest.approx(1 / np.sqrt(3), abs=1e-9)
    assert v.tau_over_kappa_stats.max - v.tau_over_kappa_stats.min > 0.1


def test_classify_plane_circle_as_degenerate_general_helix():
    v = classify_helix(cat.circle())
    assert v.kind is HelixKind.GENERAL and v.planar


def test_classify_needs_samples():
    with pytest.raises(TooFewSamples):
        classify_helix(cat.circle(), samples=4)


def test_sigma_of_example1_is_b_over_sqrt_a2_minus_b2():
    g = cat.slant_helix_example(3.0, 1.0, (-0.4, 0.4))
    _, _, ratio, sigma = sigma_profile(g, np.linspace(-0.4, 0.4, 21))
    assert np.allclose(sigma, 1 / np.sqrt(8), atol=1e-9)
    assert np.allclose(ratio, np.tan(np.linspace(-0.4, 0.4, 21)), atol=1e-12)
