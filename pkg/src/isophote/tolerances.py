"""Named tolerances used by every certification in the package.

Each check that reports pass/fail cites one of these names together with the
value that was in force, so reports stay traceable when defaults are
overridden per job.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace

EPS_DEG = 1e-9
FRAME_RTOL = 1e-6
TRACE_TOL = 1e-9
AXIS_TOL = 1e-6
CLASS_TOL = 1e-6
CONST_ATOL = 1e-6
CONST_RTOL = 1e-6

# thresholds of individual verification checks
THETA_GRID_TOL = 1e-4
PLANE_FIT_TOL = 1e-6
KBAR_MU_TOL = 1e-5
COT_THETA_TOL = 1e-5
GENERAL_STDEV_TOL = 1e-9
SLANT_STDEV_TOL = 1e-8
CONTROL_MIN = 1e-3
IDENTITY_TOL = 1e-8
JITTER_MIN = 1e-4
ENVELOPE_TOL = 1e-8
NORMAL_ANGLE_TOL = 1e-7
LAW_TOL = 1e-10
COR3B_TOL = 1e-12
SIGMA_TOL = 1e-6
THETA_DEG_TOL = 1e-2
NONCONST_MIN = 0.1


@dataclass(frozen=True)
class Tolerances:
    eps_deg: float = EPS_DEG
    frame_rtol: float = FRAME_RTOL
    trace_tol: float = TRACE_TOL
    axis_tol: float = AXIS_TOL
    class_tol: float = CLASS_TOL
    const_atol: float = CONST_ATOL
    const_rtol: float = CONST_RTOL
    theta_grid_tol: float = THETA_GRID_TOL
    plane_fit_tol: float = PLANE_FIT_TOL
    kbar_mu_tol: float = KBAR_MU_TOL
    cot_theta_tol: float = COT_THETA_TOL
    general_stdev_tol: float = GENERAL_STDEV_TOL
    slant_stdev_tol: float = SLANT_STDEV_TOL
    control_min: float = CONTROL_MIN
    identity_tol: float = IDENTITY_TOL
    jitter_min: float = JITTER_MIN
    envelope_tol: float = ENVELOPE_TOL
    normal_angle_tol: float = NORMAL_ANGLE_TOL
    law_tol: float = LAW_TOL
    cor3b_tol: float = COR3B_TOL
    sigma_tol: float = SIGMA_TOL
    theta_deg_tol: float = THETA_DEG_TOL
    nonconst_min: float = NONCONST_MIN

    def override(self, **changes: float) -> "Tolerances":
        unknown = set(changes) - set(asdict(self))
        if unknown:
            raise KeyError(f"unknown tolerance name(s): {sorted(unknown)}")
        return replace(self, **{k: float(v) for k, v in changes.items()})

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


DEFAULT = Tolerances()
