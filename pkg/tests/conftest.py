"""Shared fixtures: the catalog isophote suite is built once per session."""

from __future__ import annotations

import functools

import numpy as np
import pytest

from isophote import catalog as cat
from isophote.pipelines import (example1, perturbed_curve, samples_on, study, traced_study,
                                tube_checks, uv_line)

CRITERIA: dict[int, tuple[bool, str]] = {}


def record(number: int, passed: bool, detail: str) -> None:
    """Remember one acceptance verdict for the terminal summary."""
    CRITERIA[number] = (bool(passed), detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


TRACED = {
    # name: (surface factory, d, theta, grid)
    "sphere_latitude": (cat.sphere, (0.0, 0.0, 1.0), np.pi / 3, (128, 128)),
    "sphere_equator": (cat.sphere, (0.0, 0.0, 1.0), np.pi / 2, (64, 64)),
    "torus": (cat.torus, (0.3, 0.2, 1.0), 1.0, (128, 128)),
    "cylinder_ruling": (cat.cylinder, (1.0, 0.0, 0.0), np.pi / 3, (64, 64)),
}


@functools.lru_cache(maxsize=None)
def traced(name: str):
    factory, d, theta, grid = TRACED[name]
    return traced_study(factory(), d, theta, grid)


@functools.lru_cache(maxsize=None)
def jittered(name: str):
    _, d, theta, _ = TRACED[name]
    _, curve, _ = traced(name)
    _, ds = samples_on(perturbed_curve(curve, 1e-3), 300, 0.02)
    return study(f"{name} jitter", ds, theta, d)


@functools.lru_cache(maxsize=None)
def cylinder_helix():
    """A helix on the unit cylinder: the silhouette for d = z."""
    curve = uv_line(cat.cylinder(), (0.0, -1.5), (1.0, 0.5), (0.0, 6.0))
    _, ds = samples_on(curve, 300)
    return study("cylinder helix", ds, np.pi / 2, (0.0, 0.0, 1.0))


@functools.lru_cache(maxsize=None)
def helix_tube(v0s=None):
    return tube_checks(cat.circular_helix(2.0, 1.0), 0.3, v0s)


@functools.lru_cache(maxsize=None)
def slant_tube(v0s=None):
    return tube_checks(cat.slant_helix_example(), 0.2, v0s)


@functools.lru_cache(maxsize=None)
def ex1():
    return example1(2.0, 1.0, 200)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240601)
