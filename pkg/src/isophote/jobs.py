"""Job execution: resolve scene entities, run a verb, write artifacts, report.

Every pass/fail record names the tolerance it was judged against and the
value in force, so a report can be audited without the code at hand.
"""

from __future__ import annotations

import datetime as _dt
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import catalog
from . import numerics as nm
from .canal import (CanalBranch, CanalSpec, canal_surface, constant_radius,
                    envelope_residuals, radius_law_integral_cor3b, radius_law_linear_cor3a,
                    radius_law_prop1, sweep_radius_laws)
from .curves import HelixKind, SpaceCurve
from .errors import IsophoteError, UnknownCatalogId
from .export import build_mesh, polyline_arclength, read_obj, write_curve_csv, write_obj, write_svg
from .pipelines import (example1, perturbed_curve, samples_on, study, tube_checks, uv_line)
from .canal import parameter_curve, theorem4_residual
from .scene import CURVE_KINDS, SURFACE_KINDS, Entity, Job, SceneConfig
from .surfaces import CurveOnSurface, ParamSurface
from .tolerances import DEFAULT, Tolerances
from .tracing import isophote_samples, trace_isophote

OUT_ENV = "ISOPHOTE_OUT"

EXIT_CODES = {
    0: "every check passed",
    1: "at least one check failed",
    2: "scene or command-line error (parse, unknown id, parameter out of range)",
    3: "geometric degeneracy (singular point, vanishing curvature, no consistent axis)",
    4: "input outside the valid domain (radius slope, non-unit speed, too few samples)",
    5: "formula validation failed",
}


# -------------------------------------------------------------- report model

@dataclass
class Check:
    """One pass/fail verdict: ``value`` compared with a named tolerance."""

    name: str
    value: Any
    tolerance_name: str
    tolerance: float
    relation: str = "<="
    passed: bool = False

    @classmethod
    def at_most(cls, name, value, tol_name, tol):
        value = float(value)
        return cls(name, value, tol_name, float(tol), "<=", bool(value <= tol))

    @classmethod
    def at_least(cls, name, value, tol_name, tol):
        value = float(value)
        return cls(name, value, tol_name, float(tol), ">=", bool(value >= tol))

    @classmethod
    def equals(cls, name, value, expected, tol_name="class_tol", tol=DEFAULT.class_tol):
        c = cls(name, value, tol_name, float(tol), f"== {expected}", value == expected)
        return c

    def as_dict(self) -> dict:
        return {"name": self.name, "value": _jsonable(self.value), "relation": self.relation,
                "tolerance_name": self.tolerance_name, "tolerance": self.tolerance,
                "passed": self.passed}

    def line(self) -> str:
        v = f"{self.value:.6g}" if isinstance(self.value, float) else str(self.value)
        verdict = "PASS" if self.passed else "FAIL"
        return (f"  [{verdict}] {self.name}: {v} {self.relation} "
                f"({self.tolerance_name} = {self.tolerance:g})")


@dataclass
class JobReport:
    index: int
    verb: str
    args: dict
    tolerances: dict
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    artifacts: list[str] = field(default_factory=list)
    error: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {"index": self.index, "verb": self.verb, "args": _jsonable(self.args),
                "passed": self.passed, "checks": [c.as_dict() for c in self.checks],
                "data": _jsonable(self.data), "artifacts": self.artifacts,
                "error": self.error, "tolerances": self.tolerances}


@dataclass
class VerificationReport:
    created: str
    out_dir: str
    seed: Optional[int]
    jobs: list[JobReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(j.passed for j in self.jobs)

    @property
    def exit_code(self) -> int:
        for j in self.jobs:
            if j.error is not None:
                return int(j.error["exit_code"])
        return 0 if self.passed else 1

    def as_dict(self) -> dict:
        return {"created": self.created, "out_dir": self.out_dir, "seed": self.seed,
                "passed": self.passed, "exit_code": self.exit_code,
                "jobs": [j.as_dict() for j in self.jobs]}

    def text(self) -> str:
        lines = [f"isophote verification report  {self.created}",
                 f"output: {self.out_dir}", f"seed: {self.seed}", ""]
        for j in self.jobs:
            head = "PASS" if j.passed else ("ERROR" if j.error else "FAIL")
            args = ", ".join(f"{k}={_short(v)}" for k, v in j.args.items())
            lines.append(f"[{head}] job {j.index}: {j.verb} {args}")
            if j.error:
                lines.append(f"  error {j.error['type']} (exit {j.error['exit_code']}): "
                             f"{j.error['message']}")
            lines += [c.line() for c in j.checks]
            for k, v in j.data.items():
                if isinstance(v, (int, float, str, bool)) or v is None:
                    lines.append(f"  {k}: {_short(v)}")
            for a in j.artifacts:
                lines.append(f"  artifact: {a}")
            lines.append("")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'} (exit code {self.exit_code})")
        return "\n".join(lines) + "\n"


def _short(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_short(x) for x in v) + "]"
    return str(v)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if np.isfinite(x) else str(x)
    if hasattr(x, "value") and not isinstance(x, (int, str)):
        return x.value
    return x


# ---------------------------------------------------------- entity resolution

class Scene:
    """Lazily built curves and surfaces of a scene, cached by id.

    An id missing from the scene that names a catalog kind with no required
    parameters resolves to that kind with defaults, so ad-hoc command-line
    jobs such as ``trace sphere ...`` need no scene file.
    """

    def __init__(self, config: SceneConfig):
        self.config = config
        self._cache: dict[tuple[str, str], Any] = {}

    def _lookup(self, kind: str, ident: str) -> Entity:
        try:
            return self.config.entity(kind, ident)
        except UnknownCatalogId:
            kinds = CURVE_KINDS if kind == "curve" else SURFACE_KINDS
            if ident in kinds and not any(p.required for p in kinds[ident].values()):
                return Entity(ident, ident, {k: p.default for k, p in kinds[ident].items()})
            raise

    def curve(self, ident: str):
        key = ("curve", ident)
        if key not in self._cache:
            self._cache[key] = self._build_curve(self._lookup("curve", ident))
        return self._cache[key]

    def surface(self, ident: str) -> ParamSurface:
        key = ("surface", ident)
        if key not in self._cache:
            self._cache[key] = self._build_surface(self._lookup("surface", ident))
        return self._cache[key]

    def canal_spec(self, ident: str) -> CanalSpec:
        e = self._lookup("surface", ident)
        if e.kind not in ("tube", "canal"):
            raise UnknownCatalogId(f"surface {ident!r} is a {e.kind}, not a tube or canal")
        return self._spec(e)

    def _spec(self, e: Entity) -> CanalSpec:
        p = e.params
        spine = self.space_curve(p["spine"])
        law = constant_radius(p["r"]) if e.kind == "tube" else build_law(p["law"])
        return CanalSpec(spine, law, CanalBranch(p["branch"]))

    def space_curve(self, ident: str) -> SpaceCurve:
        c = self.curve(ident)
        if not isinstance(c, SpaceCurve):
            raise UnknownCatalogId(f"curve {ident!r} lies on a surface; a space curve is required")
        return c

    def _build_curve(self, e: Entity):
        p = e.params
        if e.kind == "circle":
            return catalog.circle(p["radius"], p["rate"])
        if e.kind == "circular_helix":
            return catalog.circular_helix(p["a"], p["b"])
        if e.kind == "slant_helix":
            return catalog.slant_helix_example(p["a"], p["b"], tuple(p["t_range"]))
        if e.kind == "uv_line":
            return uv_line(self.surface(p["surface"]), p["start"], p["direction"],
                           p["t_range"], name=e.id)
        raise UnknownCatalogId(f"unknown curve kind {e.kind!r}")

    def _build_surface(self, e: Entity) -> ParamSurface:
        p = e.params
        if e.kind == "sphere":
            return catalog.sphere(p["radius"])
        if e.kind == "cylinder":
            return catalog.cylinder(p["radius"], tuple(p["height"]))
        if e.kind == "torus":
            return catalog.torus(p["major"], p["minor"])
        if e.kind == "graph_wave":
            return catalog.graph_wave(p["amplitude"])
        if e.kind == "rectifying_developable":
            return catalog.rectifying_developable(self.space_curve(p["curve"]), tuple(p["ruling"]))
        if e.kind in ("tube", "canal"):
            return canal_surface(self._spec(e))
        raise UnknownCatalogId(f"unknown surface kind {e.kind!r}")


def build_law(params: dict):
    """A radius law from its scene mapping (``kind`` plus the law's parameters)."""
    from .scene import convert_law
    p = convert_law(params)
    kind = p["kind"]
    if kind == "Constant":
        return constant_radius(p["r"])
    if kind == "LinearCor3a":
        return radius_law_linear_cor3a(p["theta"], p["v"], p["sign"], p["intercept"])
    if kind == "IntegralCor3b":
        return radius_law_integral_cor3b(p["beta"], p["v"], p["phi"], p["intercept"])
    return radius_law_prop1(p["theta"], p["v"], p["intercept"])


# --------------------------------------------------------------- job context

@dataclass
class Context:
    scene: Scene
    job: Job
    report: JobReport
    tol: Tolerances
    out: Path
    rng: np.random.Generator

    def path(self, name: str) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        return self.out / name

    def artifact(self, p: Path) -> None:
        self.report.artifacts.append(str(p))

    def check(self, c: Check) -> Check:
        self.report.checks.append(c)
        return c


def _write_curve(ctx: Context, name: str, curve: CurveOnSurface, samples: list) -> None:
    s = np.array([x.s for x in samples])
    uv = curve.uv(s)
    xyz = np.array([x.point for x in samples])
    ctx.artifact(write_curve_csv(ctx.path(name), s, uv, xyz))


def _write_trace(ctx: Context, surface: ParamSurface, trace) -> None:
    for i, (uv, xyz) in enumerate(zip(trace.uv_polylines, trace.xyz_polylines)):
        ctx.artifact(write_curve_csv(ctx.path(f"polyline_{i}.csv"), polyline_arclength(xyz), uv, xyz))
    ctx.artifact(write_svg(ctx.path("domain.svg"), surface, trace, eps_deg=ctx.tol.eps_deg))


def _write_mesh(ctx: Context, surface: ParamSurface, resolution, name="mesh.obj"):
    mesh = build_mesh(surface, resolution, ctx.tol.eps_deg)
    p = write_obj(ctx.path(name), mesh, comment=surface.name)
    ctx.artifact(p)
    ctx.report.data["mesh_vertices"] = len(mesh.vertices)
    ctx.report.data["mesh_faces"] = len(mesh.faces)
    ctx.report.data["mesh_degenerate_faces"] = mesh.degenerate_faces
    return mesh, p


# --------------------------------------------------------------------- verbs

def _trace(ctx: Context, theta=None):
    a, tol = ctx.job.args, ctx.tol
    surface = ctx.scene.surface(a["surface"])
    theta = a["theta"] if theta is None else theta
    tr = trace_isophote(surface, a["d"], theta, tuple(a["grid"]), tol.trace_tol, tol.eps_deg,
                        polish=a.get("polish", False))
    d = ctx.report.data
    d["polylines"] = len(tr.uv_polylines)
    d["closed"] = tr.closed
    d["lengths"] = [float(polyline_arclength(x)[-1]) for x in tr.xyz_polylines]
    d["singular_cells"] = len(tr.diagnostics.get("singular_cells", []))
    d["diagnostics"] = {k: v for k, v in tr.diagnostics.items() if k != "singular_cells"}
    ctx.check(Check.at_most("field_residual", tr.field_residual, "trace_tol", tol.trace_tol))
    if a.get("expect_polylines") is not None:
        ctx.check(Check.equals("polylines", len(tr.uv_polylines), a["expect_polylines"]))
    _write_trace(ctx, surface, tr)
    return surface, tr


def _studied(ctx: Context):
    """Samples for the study verbs: a traced isophote or a scene curve."""
    a, tol = ctx.job.args, ctx.tol
    if a.get("surface") is not None:
        surface, tr = _trace(ctx)
        curve, ds = isophote_samples(surface, tr, a["index"], a["samples"], 0.02, tol.eps_deg)
    else:
        c = ctx.scene.curve(a["curve"])
        if not isinstance(c, CurveOnSurface):
            raise UnknownCatalogId(f"curve {a['curve']!r} does not lie on a surface")
        curve, ds = samples_on(c, a["samples"])
    _write_curve(ctx, "isophote_samples.csv", curve, ds)
    return study(ctx.job.verb, ds, a["theta"], a["d"], tol)


def _verb_trace(ctx):
    _trace(ctx)


def _verb_silhouette(ctx):
    _trace(ctx, np.pi / 2)


def _verb_axis(ctx):
    st, tol = _studied(ctx), ctx.tol
    c = st.checks
    ctx.report.data.update(axis=st.axis.d, branch=st.axis.sign_branch.value,
                           axis_certified=st.axis.certified)
    ctx.check(Check.at_most("axis_residual", c["axis_residual"], "axis_tol", tol.axis_tol))
    ctx.check(Check.at_most("axis_derivative", c["axis_derivative"], "axis_tol", tol.axis_tol))
    ctx.check(Check.at_most("axis_angle_error", c["axis_angle_error"], "axis_tol", tol.axis_tol))


def _verb_mu(ctx):
    st, tol = _studied(ctx), ctx.tol
    if st.profile is None:
        raise IsophoteError("mu undefined: k_n and tau_g vanish together on the samples")
    s = st.profile.stats
    ctx.report.data.update(mu_min=s.min, mu_max=s.max, mu_median=s.median,
                           theta_estimate=st.profile.theta_estimate)
    bound = tol.const_atol + tol.const_rtol * max(1.0, abs(s.median))
    ctx.check(Check.at_most("mu_spread", s.spread, "const_atol+const_rtol*max(1,|median|)", bound))
    ctx.check(Check.at_most("theta_error", st.checks["theta_error"], "theta_grid_tol",
                            tol.theta_grid_tol))


def _verb_classify(ctx):
    st, tol = _studied(ctx), ctx.tol
    ctx.check(Check.at_most("axis_residual", st.checks["axis_residual"], "axis_tol", tol.axis_tol))
    ctx.check(Check.equals("mu_constant", bool(st.checks.get("mu_constant", False)), True,
                           "const_rtol", tol.const_rtol))
    if st.classification is not None:
        ctx.report.data["kind"] = st.classification.kind.value
        ctx.report.data["evidence"] = st.classification.evidence
    else:
        ctx.report.data["kind"] = None


def _verb_gauss_map(ctx):
    st, tol = _studied(ctx), ctx.tol
    if st.gauss is None:
        raise IsophoteError("Gauss-map image unavailable (mu undefined on the samples)")
    ctx.report.data.update(kbar_n=st.gauss.kbar_n, kbar_g_median=float(np.median(st.gauss.kbar_g)))
    ctx.check(Check.at_most("plane_fit_residual", st.gauss.plane_fit_residual, "plane_fit_tol",
                            tol.plane_fit_tol))
    ctx.check(Check.at_most("kbar_g_mu_discrepancy", st.gauss.mu_discrepancy, "kbar_mu_tol",
                            tol.kbar_mu_tol))


def _envelope_checks(ctx: Context, spec: CanalSpec, n: int, label=""):
    tol = ctx.tol
    (s0, s1) = spec.s_range or spec.spine.param_range
    s = ctx.rng.uniform(s0, s1, n)
    v = ctx.rng.uniform(*spec.v_range, n)
    r = envelope_residuals(spec, s, v)
    ctx.report.data[f"envelope{label}"] = r
    ctx.check(Check.at_most(f"sphere_residual{label}", r["sphere"], "envelope_tol", tol.envelope_tol))
    ctx.check(Check.at_most(f"tangency_residual{label}", r["tangency"], "envelope_tol",
                            tol.envelope_tol))
    ctx.check(Check.at_most(f"normal_angle{label}", r["normal_angle"], "normal_angle_tol",
                            tol.normal_angle_tol))


def _mesh_spot_check(ctx: Context, spec: CanalSpec, mesh, path, n=100):
    """Re-read the OBJ and test the envelope identities on exported vertices."""
    V, _, _ = read_obj(path)
    k = ctx.rng.choice(len(V), size=min(n, len(V)), replace=False)
    s = mesh.uv[k, 0]
    C = spec.spine(s)
    T = spec.spine.derivative(s, 1)
    r, rp = spec.radius.r(s), spec.radius.dr(s)
    sphere = float(np.max(np.abs(np.linalg.norm(V[k] - C, axis=-1) - r)))
    tangency = float(np.max(np.abs(nm.dot(V[k] - C, T) + r * rp)))
    ctx.report.data["mesh_spot_check"] = {"vertices": len(k), "sphere": sphere,
                                          "tangency": tangency}
    ctx.check(Check.at_most("mesh_sphere_residual", sphere, "envelope_tol", ctx.tol.envelope_tol))
    ctx.check(Check.at_most("mesh_tangency_residual", tangency, "envelope_tol",
                            ctx.tol.envelope_tol))


def _verb_canal(ctx):
    a = ctx.job.args
    spec = ctx.scene.canal_spec(a["surface"])
    surface = ctx.scene.surface(a["surface"])
    ctx.report.data["radius_law"] = spec.radius.as_dict()
    _envelope_checks(ctx, spec, a["samples"])
    mesh, p = _write_mesh(ctx, surface, a["resolution"])
    _mesh_spot_check(ctx, spec, mesh, p)


def _tube_report(ctx: Context, curves, stdev_tol_name: str, label: str):
    for c in curves:
        ctx.check(Check.at_most(f"stdev_{label}_v0={c.v0:.6g}", c.stdev, stdev_tol_name,
                                getattr(ctx.tol, stdev_tol_name)))


def _tube_common(ctx: Context, v0s=None):
    a = ctx.job.args
    spine = ctx.scene.space_curve(a["spine"])
    spec, surf, verdict, curves = tube_checks(spine, a["r"], v0s, samples=a["samples"],
                                              branch=CanalBranch(a["branch"]), tol=ctx.tol)
    ctx.report.data["spine_kind"] = verdict.kind.value
    ctx.report.data["curves"] = [
        {"v0": c.v0, "d": c.d, "source": c.source, "stdev": c.stdev, "theta": c.theta,
         "identity": c.identity.as_dict() if hasattr(c.identity, "as_dict") else str(c.identity)}
        for c in curves]
    for c in curves:
        spl = parameter_curve(surf, c.v0)
        _write_curve(ctx, f"tube_v0_{c.v0:.6f}.csv", spl, c.study.samples)
    return spec, surf, verdict, curves


def _stdev_tol(verdict) -> str:
    return "general_stdev_tol" if verdict.is_general else "slant_stdev_tol"


def _verb_tube(ctx):
    spec, surf, verdict, curves = _tube_common(ctx)
    _tube_report(ctx, curves, _stdev_tol(verdict), "predicted")
    _envelope_checks(ctx, spec, 1000)
    mesh, p = _write_mesh(ctx, surf, ctx.job.args["resolution"])
    _mesh_spot_check(ctx, spec, mesh, p)


def _prop(ctx, want: str, certified_v0s, tol_name):
    a = ctx.job.args
    spine = ctx.scene.space_curve(a["spine"])
    spec, surf, verdict, curves = _tube_common(ctx)
    ok = verdict.is_general if want == "general" else verdict.is_slant
    ctx.check(Check("spine_kind", verdict.kind.value, "const_rtol", ctx.tol.const_rtol,
                    f"is {want} helix", bool(ok)))
    main = [c for c in curves if any(np.isclose(c.v0 % (2 * np.pi), v) for v in certified_v0s)]
    _tube_report(ctx, main, tol_name, "certified")
    d = main[0].d if main else None
    _, _, _, controls = tube_checks(spine, a["r"], a["control"], d, a["samples"],
                                    branch=spec.branch, tol=ctx.tol)
    ctx.report.data["controls"] = [{"v0": c.v0, "stdev": c.stdev} for c in controls]
    for c in controls:
        ctx.check(Check.at_least(f"stdev_control_v0={c.v0:.6g}", c.stdev, "control_min",
                                 ctx.tol.control_min))


def _verb_prop2(ctx):
    _prop(ctx, "general", (np.pi / 2, 3 * np.pi / 2), "general_stdev_tol")


def _verb_prop3(ctx):
    _prop(ctx, "slant", (0.0, np.pi), "slant_stdev_tol")


def _verb_theorem4(ctx):
    a, tol = ctx.job.args, ctx.tol
    spec, surf, verdict, curves = _tube_common(ctx, a.get("v0"))
    for c in curves:
        if isinstance(c.identity, Exception):
            raise c.identity
        r = c.identity
        ctx.check(Check.at_most(f"theorem4_residual_v0={c.v0:.6g}", r.residual, "identity_tol",
                                tol.identity_tol))
        ctx.check(Check.at_most(f"normal_identity_v0={c.v0:.6g}", r.normal_identity,
                                "identity_tol", tol.identity_tol))
    # jittered control: a perturbed copy of the first curve
    c0 = curves[0]
    jit = perturbed_curve(parameter_curve(surf, c0.v0))
    _, ds = samples_on(jit, a["samples"], 0.02)
    r = theorem4_residual(spec, ds, c0.d, c0.theta, tol.eps_deg)
    ctx.report.data["jitter_control"] = r.as_dict()
    ctx.check(Check.at_least("theorem4_residual_jitter", r.residual, "jitter_min", tol.jitter_min))


def _verb_radius_law(ctx):
    a, tol = ctx.job.args, ctx.tol
    if a["law"] == "sweep":
        sweep = sweep_radius_laws(a["n"])
        p = ctx.path("radius_law_sweep.json")
        p.write_text(json.dumps(_jsonable(sweep), indent=1))
        ctx.artifact(p)
        summary = {}
        for key, recs in sweep.items():
            counts: dict[str, int] = {}
            for rec in recs:
                counts[rec["outcome"]] = counts.get(rec["outcome"], 0) + 1
            summary[key] = counts
        ctx.report.data["outcomes"] = summary
        b = [r["residual"] for r in sweep["cor3b"]]
        ctx.check(Check.equals("cor3b_all_validated",
                               all(r["outcome"] == "validated" for r in sweep["cor3b"]), True,
                               "cor3b_tol", tol.cor3b_tol))
        ctx.check(Check.at_most("cor3b_max_residual", max(b), "cor3b_tol", tol.cor3b_tol))
        for key in ("cor3a", "prop1"):
            good = [r["residual"] for r in sweep[key] if r["outcome"] == "validated"]
            if good:
                ctx.check(Check.at_most(f"{key}_validated_max_residual", max(good), "law_tol",
                                        tol.law_tol))
        return
    need = {"LinearCor3a": ("theta", "v"), "LinearProp1": ("theta", "v"),
            "IntegralCor3b": ("beta", "v")}[a["law"]]
    missing = [k for k in need if a.get(k) is None]
    if missing:
        from .errors import ParseError
        raise ParseError(f"radius-law {a['law']}: missing {', '.join(missing)}")
    if a["law"] == "LinearCor3a":
        law = radius_law_linear_cor3a(a["theta"], a["v"], a["sign"], tol=tol.law_tol)
        name, t = "law_tol", tol.law_tol
    elif a["law"] == "LinearProp1":
        law = radius_law_prop1(a["theta"], a["v"], tol=tol.law_tol)
        name, t = "law_tol", tol.law_tol
    else:
        law = radius_law_integral_cor3b(a["beta"], a["v"], a["phi"], tol=tol.cor3b_tol)
        name, t = "cor3b_tol", tol.cor3b_tol
    ctx.report.data["law"] = law.as_dict()
    ctx.check(Check.at_most("quadratic_residual", law.residual, name, t))


def _verb_example1(ctx):
    a, tol = ctx.job.args, ctx.tol
    res = example1(a["a"], a["b"], a["samples"], tol)
    st = res.study
    d = ctx.report.data
    d.update(sigma_median=res.sigma_stats.median, sigma_spread=res.sigma_stats.spread,
             ratio_spread=res.ratio_stats.spread, helix_kind=res.helix_kind,
             theta_estimate_deg=float(np.degrees(st.profile.theta_estimate)),
             mu_median=st.profile.stats.median, axis=st.axis.d,
             closed_form_signs=list(res.closed_form_signs), darboux=res.darboux,
             kind=st.checks.get("kind"))
    ctx.check(Check.at_most("kappa_error", res.kappa_error, "frame_rtol", tol.frame_rtol))
    ctx.check(Check.at_most("tau_error", res.tau_error, "frame_rtol", tol.frame_rtol))
    ctx.check(Check.at_most("sigma_spread", res.sigma_stats.spread, "sigma_tol", tol.sigma_tol))
    ctx.check(Check.at_most("sigma_vs_1/sqrt3", abs(res.sigma_stats.median - 1 / np.sqrt(3)),
                            "sigma_tol", tol.sigma_tol))
    ctx.check(Check.at_least("tau_over_kappa_spread", res.ratio_stats.spread, "nonconst_min",
                             tol.nonconst_min))
    ctx.check(Check.equals("helix_kind", res.helix_kind, HelixKind.SLANT.value))
    ctx.check(Check.at_most("max_abs_k_g", res.max_abs_k_g, "class_tol", tol.class_tol))
    ctx.check(Check.at_most("mu_spread", st.profile.stats.spread, "const_atol", tol.const_atol))
    ctx.check(Check.at_most("mu_vs_1/sqrt3", abs(st.profile.stats.median - 1 / np.sqrt(3)),
                            "const_atol", tol.const_atol))
    ctx.check(Check.at_most("theta_deg_error", abs(np.degrees(st.profile.theta_estimate) - 60.0),
                            "theta_deg_tol", tol.theta_deg_tol))
    ctx.check(Check.at_most("axis_residual", st.axis.residual, "axis_tol", tol.axis_tol))
    ctx.check(Check.at_most("closed_form_axis_error", res.closed_form_axis_error, "axis_tol",
                            tol.axis_tol))
    gamma = catalog.slant_helix_example(a["a"], a["b"])
    dev = catalog.rectifying_developable(gamma)
    curve = uv_line(dev, (0.0, 0.0), (0.0, 1.0), gamma.param_range, unit_speed=True)
    _write_curve(ctx, "gamma_on_developable.csv", curve, st.samples)
    _write_mesh(ctx, dev, (16, 64), "rectifying_developable.obj")


VERB_RUNNERS = {
    "trace": _verb_trace, "silhouette": _verb_silhouette, "axis": _verb_axis, "mu": _verb_mu,
    "classify": _verb_classify, "gauss-map": _verb_gauss_map, "canal": _verb_canal,
    "tube": _verb_tube, "radius-law": _verb_radius_law, "verify-theorem4": _verb_theorem4,
    "verify-prop2": _verb_prop2, "verify-prop3": _verb_prop3, "example1": _verb_example1,
}


# ------------------------------------------------------------------- driver

def output_root(override: Optional[str] = None) -> Path:
    return Path(override or os.environ.get(OUT_ENV) or "isophote_out")


def new_run_dir(root: Path) -> Path:
    stamp = _dt.datetime.now().strftime("%Y%m%d-%H%M%S-%f")
    out = root / f"run-{stamp}"
    out.mkdir(parents=True, exist_ok=False)
    return out


def run_job(config: SceneConfig, job: Job, out_dir, index: int = 0,
            seed: Optional[int] = None, scene: Optional[Scene] = None) -> JobReport:
    """Run one job; module errors are captured in the report, not raised."""
    tol = DEFAULT.override(**{**config.tolerances, **job.tolerances})
    rep = JobReport(index, job.verb, dict(job.args), tol.as_dict())
    base = seed if seed is not None else config.seed
    rng = np.random.default_rng(None if base is None else [base, index])
    ctx = Context(scene or Scene(config), job, rep, tol,
                  Path(out_dir) / f"{index:02d}-{job.verb}", rng)
    try:
        VERB_RUNNERS[job.verb](ctx)
    except IsophoteError as exc:
        rep.error = {"type": type(exc).__name__, "message": str(exc),
                     "exit_code": exc.exit_code}
    return rep


def run_scene(config: SceneConfig, out_root=None, seed: Optional[int] = None) -> VerificationReport:
    """Run every job in order into a fresh timestamped directory."""
    out = new_run_dir(output_root(out_root))
    eff_seed = seed if seed is not None else config.seed
    report = VerificationReport(_dt.datetime.now().isoformat(timespec="seconds"), str(out), eff_seed)
    scene = Scene(config)
    for i, job in enumerate(config.jobs):
        report.jobs.append(run_job(config, job, out, i, eff_seed, scene))
    manifest = {"created": report.created, "seed": eff_seed,
                "artifacts": [{"job": j.index, "verb": j.verb,
                               "path": str(Path(a).relative_to(out))}
                              for j in report.jobs for a in j.artifacts]}
    for j in report.jobs:
        j.artifacts = [str(Path(a).relative_to(out)) for a in j.artifacts]
    (out / "report.json").write_text(json.dumps(report.as_dict(), indent=1))
    (out / "report.txt").write_text(report.text())
    manifest["artifacts"] += [{"job": None, "verb": None, "path": p}
                              for p in ("report.json", "report.txt")]
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1))
    return report
