import numpy as np
import pytest
from scipy.optimize import brentq

from isophote import catalog as cat
from isophote.canal import (CanalBranch, CanalSpec, canal_surface, canal_unit_normal,
                            constant_radius, envelope_residuals, prop1_roots,
                            radius_law_integral_cor3b, radius_law_linear_cor3a, radius_law_prop1,
                            tube_parameter_isophotes)
from isophote.curves import classify_helix
from isophote.errors import (DomainViolation, FormulaInconsistent, NotUnitSpeed,
                             RadiusSlopeTooLarge)
from isophote.surfaces import unit_normal


def test_spec_validation():
    helix = cat.circular_helix(2.0, 1.0)
    with pytest.raises(DomainViolation):
        CanalSpec(helix, constant_radius(-0.1))
    with pytest.raises(NotUnitSpeed):
        CanalSpec(cat.circle(2.0), constant_radius(0.1))
    law = radius_law_integral_cor3b(np.pi / 4, np.pi / 2, 0.0)  # cos(v + phi) = 0: slope 1
    assert law.slope == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(RadiusSlopeTooLarge):
        CanalSpec(helix, law.with_intercept(20.0))


@pytest.mark.parametrize("branch", list(CanalBranch))
def test_envelope_identities_both_branches(branch, rng):
    spec = CanalSpec(cat.slant_helix_example(), radius_law_integral_cor3b(0.4, 1.0, 0.0)
                     .with_intercept(0.3), branch, s_range=(-0.2, 0.2))
    r = envelope_residuals(spec, rng.uniform(-0.2, 0.2, 500), rng.uniform(0, 2 * np.pi, 500))
    assert r["sphere"] <= 1e-12 and r["tangency"] <= 1e-12
    assert r["normal_angle"] <= 1e-9 and r["unit_norm"] <= 1e-14


def test_surface_normal_points_away_from_spine(rng):
    spec = CanalSpec(cat.circular_helix(2.0, 1.0), constant_radius(0.3), CanalBranch.PLUS)
    surf = canal_surface(spec)
    s, v = rng.uniform(0, 10, 50), rng.uniform(0, 2 * np.pi, 50)
    N = unit_normal(surf, s, v)
    assert np.allclose(N, canal_unit_normal(spec, s, v), atol=1e-12)
    assert np.all(np.sum(N * (surf(s, v) - spec.spine(s)), -1) > 0)


def test_tube_periodicity_rule():
    open_tube = canal_surface(CanalSpec(cat.circular_helix(2.0, 1.0), constant_radius(0.3)))
    closed_tube = canal_surface(CanalSpec(cat.circle(1.0), constant_radius(0.3)))
    assert open_tube.periodic == (False, True)
    assert closed_tube.periodic == (True, True)


def test_linear_law_solves_for_lambda_inverse_sqrt2():
    theta = np.pi / 3  # |X| reaches sec(theta) = 2 > sqrt(2)
    X = lambda v: np.tan(theta) * np.cos(v + theta) - np.sin(v + theta)  # noqa: E731
    grid = np.linspace(0, 2 * np.pi, 721)
    k = np.flatnonzero(np.diff(np.sign(X(grid) - np.sqrt(2))))[0]
    v = brentq(lambda v: X(v) - np.sqrt(2), grid[k], grid[k + 1])
    law = radius_law_linear_cor3a(theta, v)
    assert law.slope == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert law.residual <= 1e-12


def test_linear_law_singular_and_generic():
    with pytest.raises(DomainViolation):
        radius_law_linear_cor3a(np.pi / 4, np.pi / 4)  # cos(v + theta) = 0
    law = radius_law_linear_cor3a(np.pi / 4, np.pi / 2)
    assert law.validated and law.slope == pytest.approx(-1 / np.sqrt(2), abs=1e-12)
    # the stated range cos(theta) < sin(v) < -cos(theta) is empty on [0, pi/2]
    assert law.notes["printed_domain_holds"] is False


def test_integral_law_values():
    assert radius_law_integral_cor3b(np.pi / 4, 0.0, 0.0).slope == pytest.approx(1 / np.sqrt(2))
    assert radius_law_integral_cor3b(np.pi / 4, 0.3, -0.3).residual <= 1e-15
    assert radius_law_integral_cor3b(1e-9, 0.5, 0.0).slope < 1e-8
    with pytest.raises(DomainViolation):
        radius_law_integral_cor3b(0.0, 0.5, 0.0)


def test_tan_slope_law_is_not_a_root():
    omega = (np.sqrt(3) - 1) / 4
    with pytest.raises(FormulaInconsistent) as info:
        radius_law_prop1(np.pi / 3, np.pi / 2)
    assert info.value.residual > 1e-3
    law = radius_law_prop1(np.pi / 3, np.pi / 2, strict=False)
    assert law.slope == pytest.approx(omega, abs=1e-15) and not law.validated
    # the quadratic's roots carry tan^2(theta) where the printed slope has tan(theta)
    t2, S = 3.0, 1.0
    expected = sorted([(-1 + S * t2) / (1 + S * t2), (-1 - S * t2) / (1 + S * t2)])
    assert sorted(prop1_roots(np.pi / 3, np.pi / 2)) == pytest.approx(expected, abs=1e-14)


def test_tan_slope_law_domain():
    with pytest.raises(DomainViolation):
        radius_law_prop1(np.pi / 6, np.pi / 2)  # tan(theta) < 1
    with pytest.raises(DomainViolation):
        radius_law_prop1(np.pi / 3, 0.0)  # sin v = 0 gives omega = -1


def test_tube_parameter_isophotes_helix():
    h = cat.circular_helix(2.0, 1.0)
    got = tube_parameter_isophotes(classify_helix(h), h)
    assert sorted(round(p.v0, 12) for p in got) == sorted(
        round(x, 12) for x in (0.0, np.pi / 2, np.pi, 3 * np.pi / 2))


def test_tube_parameter_isophotes_slant():
    g = cat.slant_helix_example()
    got = tube_parameter_isophotes(classify_helix(g), g)
    assert [round(p.v0, 12) for p in got] == [0.0, round(np.pi, 12)]
    assert all(p.axis_spread <= 1e-9 for p in got)


def test_tube_parameter_isophotes_plane_circle():
    c = cat.circle()
    got = tube_parameter_isophotes(classify_helix(c), c)
    assert sorted(p.v0 for p in got) == pytest.approx([np.pi / 2, 3 * np.pi / 2])
    assert all(abs(abs(p.d[2]) - 1) <= 1e-12 for p in got)


def test_tube_identity_findings_on_helix_tube():
    from conftest import helix_tube
    curves = {round(c.v0, 6): c for c in helix_tube()[3]}
    for v0 in (0.0, round(np.pi, 6)):
        assert curves[v0].identity.residual <= 1e-8
    for v0 in (round(np.pi / 2, 6), round(3 * np.pi / 2, 6)):
        r = curves[v0].identity
        nd = abs(float(np.mean([x.N @ curves[v0].d for x in curves[v0].study.samples])))
        assert r.normal_identity <= 1e-12
        # printed form with spine data misses by 2|<N,d>|; the regrouped form always vanishes
        assert r.spine_frame_printed == pytest.approx(2 * nd, abs=1e-9)
        assert r.spine_frame_regrouped <= 1e-12
