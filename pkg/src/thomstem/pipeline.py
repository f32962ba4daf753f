"""Scenario plumbing: building manifolds from structured specs, running the
manifold -> bundle -> complex -> assembly pipeline, and rendering reports.

The built-in presets live here as read-only scenario builders; custom
scenarios come in through the versioned JSON schema documented in the
README (quad-form rows are written "[i,j,k,l] = value").
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import stems
from .ahss import (GroupReport, assemble, evaluate_class,
                   vanishing_certificate)
from .chern import (SIGN_CONVENTION_NOTE, BundleData, ManifoldData,
                    connected_sum, index_bundle, make_homology_torus)
from .thom import (BASEPOINT_NOTE, StableCell, StableCellComplex,
                   complex_to_dict, infer_attachments, skeletal_quotient,
                   sphere_bundle_quotient, suspend, thom_cells)

SCHEMA_SCENARIO = "thomstem-scenario/1"
SCHEMA_REPORT = "thomstem-report/1"

PIPELINE_THOM = "thom"
PIPELINE_SPHERE = "sphere_quotient"

PRESET_NAMES = ("paper-sec3", "paper-sec4", "paper-sec5")


class SpecError(ValueError):
    """Malformed scenario input; `pointer` names the offending field."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer


@dataclass(frozen=True)
class ScenarioSpec:
    """A fully resolved scenario: what to build and what class to evaluate."""

    name: str
    manifolds: Tuple[Mapping, ...]
    pipeline: str = PIPELINE_THOM
    suspensions: int = 0
    skeletal_cut: Optional[int] = None
    target_shift: int = 0
    target_override: Optional[int] = None
    class_assignment: Tuple[Tuple[object, str], ...] = ()

    def with_overrides(self, target: Optional[int] = None,
                       extra_suspensions: int = 0) -> "ScenarioSpec":
        spec = self
        if extra_suspensions:
            spec = ScenarioSpec(**{**_as_kwargs(spec),
                                   "suspensions": spec.suspensions + extra_suspensions})
        if target is not None:
            spec = ScenarioSpec(**{**_as_kwargs(spec), "target_override": target})
        return spec


def _as_kwargs(spec: ScenarioSpec) -> dict:
    return {
        "name": spec.name,
        "manifolds": spec.manifolds,
        "pipeline": spec.pipeline,
        "suspensions": spec.suspensions,
        "skeletal_cut": spec.skeletal_cut,
        "target_shift": spec.target_shift,
        "target_override": spec.target_override,
        "class_assignment": spec.class_assignment,
    }


def preset(name: str, det: int = 1, det1: int = 1, det2: int = 1) -> ScenarioSpec:
    """The read-only built-in presets."""
    if name == "paper-sec3":
        return ScenarioSpec(
            name=name,
            manifolds=({"determinant": det},),
            pipeline=PIPELINE_THOM,
            suspensions=0,
            skeletal_cut=5,
            class_assignment=(("top", "eta"),),
        )
    if name == "paper-sec4":
        return ScenarioSpec(
            name=name,
            manifolds=({"determinant": det1}, {"determinant": det2}),
            pipeline=PIPELINE_THOM,
            suspensions=1,
            class_assignment=(("top", "nu_multiple(12)"),),
        )
    if name == "paper-sec5":
        return ScenarioSpec(
            name=name,
            manifolds=({"determinant": det1}, {"determinant": det2}),
            pipeline=PIPELINE_SPHERE,
            suspensions=2,
            class_assignment=(("top", "eta_sq"),),
        )
    raise SpecError("scenario", f"unknown preset {name!r}")


# -- structured-text scenario files ------------------------------------

_QUAD_ROW = re.compile(r"^\s*\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]"
                       r"\s*=\s*(-?\d+)\s*$")


def parse_scenario(data: Mapping, source: str = "spec") -> ScenarioSpec:
    """Validate a scenario mapping (already JSON-decoded) into a spec."""
    if not isinstance(data, Mapping):
        raise SpecError(source, "scenario must be a JSON object")
    schema = data.get("schema")
    if schema != SCHEMA_SCENARIO:
        raise SpecError(f"{source}.schema",
                        f"expected {SCHEMA_SCENARIO!r}, got {schema!r}")
    name = data.get("name", "custom")
    pipeline = data.get("pipeline", PIPELINE_THOM)
    if pipeline not in (PIPELINE_THOM, PIPELINE_SPHERE):
        raise SpecError(f"{source}.pipeline",
                        f"must be {PIPELINE_THOM!r} or {PIPELINE_SPHERE!r}")
    manifolds = data.get("manifolds")
    if not isinstance(manifolds, Sequence) or isinstance(manifolds, (str, bytes)):
        raise SpecError(f"{source}.manifolds", "must be a list")
    resolved = []
    for i, m in enumerate(manifolds):
        resolved.append(_check_manifold(m, f"{source}.manifolds[{i}]"))
    for key, kind in (("suspensions", int), ("target_shift", int)):
        if key in data and not isinstance(data[key], int):
            raise SpecError(f"{source}.{key}", "must be an integer")
    if data.get("suspensions", 0) < 0:
        raise SpecError(f"{source}.suspensions", "must be nonnegative")
    cut = data.get("skeletal_cut")
    if cut is not None and not isinstance(cut, int):
        raise SpecError(f"{source}.skeletal_cut", "must be an integer or null")
    assignment = []
    for i, row in enumerate(data.get("class_assignment", ())):
        where = f"{source}.class_assignment[{i}]"
        if not isinstance(row, Mapping) or "cell" not in row or "element" not in row:
            raise SpecError(where, "needs 'cell' and 'element' fields")
        _parse_element(row["element"], where + ".element")  # validate early
        assignment.append((_freeze_selector(row["cell"], where + ".cell"),
                           row["element"]))
    return ScenarioSpec(
        name=name,
        manifolds=tuple(resolved),
        pipeline=pipeline,
        suspensions=data.get("suspensions", 0),
        skeletal_cut=cut,
        target_shift=data.get("target_shift", 0),
        class_assignment=tuple(assignment),
    )


def _check_manifold(m, where: str) -> Mapping:
    if not isinstance(m, Mapping):
        raise SpecError(where, "must be an object")
    if "determinant" in m:
        if not isinstance(m["determinant"], int) or m["determinant"] == 0:
            raise SpecError(f"{where}.determinant", "must be a nonzero integer")
        return {"determinant": m["determinant"]}
    if "b1" not in m:
        raise SpecError(where, "needs 'determinant' or an explicit 'b1' block")
    out = {"b1": m["b1"], "signature": m.get("signature", 0),
           "b_plus": m.get("b_plus", 3), "label": m.get("label", "M"),
           "quad_form": {}}
    if not isinstance(out["b1"], int) or out["b1"] < 0:
        raise SpecError(f"{where}.b1", "must be a nonnegative integer")
    rows = m.get("quad_form", [])
    if isinstance(rows, Mapping):
        rows = [f"[{','.join(str(k) for k in key)}] = {val}"
                for key, val in rows.items()]
    for j, row in enumerate(rows):
        match = _QUAD_ROW.match(row) if isinstance(row, str) else None
        if not match:
            raise SpecError(f"{where}.quad_form[{j}]",
                            'rows must look like "[i,j,k,l] = value"')
        subset = tuple(int(g) for g in match.groups()[:4])
        out["quad_form"][subset] = int(match.group(5))
    return out


def _freeze_selector(selector, where: str):
    if selector == "top":
        return "top"
    if isinstance(selector, Mapping) and "base" in selector:
        base = selector["base"]
        if not isinstance(base, Sequence) or isinstance(base, (str, bytes)):
            raise SpecError(f"{where}.base", "must be a list of generator indices")
        return (tuple(int(k) for k in base), selector.get("fiber", "thom"))
    raise SpecError(where, 'must be "top" or {"base": [...], "fiber": ...}')


_ELEMENT_CALL = re.compile(r"^(one|nu_multiple)\((-?\d+)\)$")


def _parse_element(text, where: str):
    """Element spec -> a builder taking the cell's stem (for zero)."""
    if not isinstance(text, str):
        raise SpecError(where, "element must be a string")
    plain = {"eta": stems.eta, "eta_sq": stems.eta_sq}
    if text in plain:
        return lambda q: plain[text]()
    if text == "zero":
        return lambda q: stems.zero(q)
    match = _ELEMENT_CALL.match(text.replace(" ", ""))
    if match:
        builder = {"one": stems.one, "nu_multiple": stems.nu_multiple}[match.group(1)]
        value = int(match.group(2))
        return lambda q: builder(value)
    raise SpecError(where, f"unknown stem element {text!r}; use zero, eta, "
                    "eta_sq, one(d) or nu_multiple(k)")


# -- running ------------------------------------------------------------

@dataclass
class RunResult:
    spec: ScenarioSpec
    manifold: ManifoldData
    bundle: BundleData
    built_complex: StableCellComplex   # labeled, before cut/suspension
    final_complex: StableCellComplex
    target_n: int
    report: GroupReport
    assignment: Dict[StableCell, stems.StemElement]
    verdict: str
    certificate: str


def resolve_manifold(spec: ScenarioSpec) -> ManifoldData:
    built = []
    for m in spec.manifolds:
        if "determinant" in m:
            built.append(make_homology_torus(m["determinant"]))
        else:
            built.append(ManifoldData(
                b1=m["b1"], quad_form=m["quad_form"],
                signature=m.get("signature", 0), b_plus=m.get("b_plus", 3),
                label=m.get("label", "M")))
    if not built:
        raise SpecError("manifolds", "at least one manifold is required")
    out = built[0]
    for m in built[1:]:
        out = connected_sum(out, m)
    return out


def resolve_target(spec: ScenarioSpec, manifold: ManifoldData,
                   bundle: BundleData) -> int:
    if spec.target_override is not None:
        return spec.target_override
    return 4 * bundle.sphere_shift + manifold.b_plus + spec.target_shift


def build_complex(spec: ScenarioSpec, bundle: BundleData) -> StableCellComplex:
    if spec.pipeline == PIPELINE_SPHERE:
        built = sphere_bundle_quotient(bundle)
    else:
        built = thom_cells(bundle)
    return infer_attachments(built)


def resolve_assignment(spec: ScenarioSpec, final: StableCellComplex,
                       target_n: int) -> Dict[StableCell, stems.StemElement]:
    out: Dict[StableCell, stems.StemElement] = {}
    for selector, element_text in spec.class_assignment:
        if selector == "top":
            cell = final.top_cell
        else:
            base, fiber = selector
            cell = final.find_cell(base, fiber)
        builder = _parse_element(element_text, "class_assignment.element")
        out[cell] = builder(cell.dim - target_n)
    return out


def run_scenario(spec: ScenarioSpec) -> RunResult:
    manifold = resolve_manifold(spec)
    bundle = index_bundle(manifold)
    built = build_complex(spec, bundle)
    final = built
    if spec.skeletal_cut is not None:
        final = skeletal_quotient(final, spec.skeletal_cut)
    if spec.suspensions:
        final = suspend(final, spec.suspensions)
    target_n = resolve_target(spec, manifold, bundle)
    report = assemble(final, target_n)
    assignment = resolve_assignment(spec, final, target_n)
    verdict = evaluate_class(report, assignment)
    certificate = vanishing_certificate(report, assignment)
    return RunResult(spec, manifold, bundle, built, final, target_n, report,
                     assignment, verdict, certificate)


# -- rendering ----------------------------------------------------------

def _manifold_dict(m: ManifoldData) -> dict:
    return {
        "label": m.label,
        "b1": m.b1,
        "signature": m.signature,
        "b_plus": m.b_plus,
        "quad_form": [f"[{','.join(str(k) for k in subset)}] = {value}"
                      for subset, value in sorted(m.quad_form.items())],
    }


def _bundle_dict(b: BundleData) -> dict:
    return {
        "base_rank": b.base_rank,
        "field": b.field,
        "rank": b.rank,
        "sphere_shift": b.sphere_shift,
        "c1": b.c1.format(),
        "c2": b.c2.format(),
        "w": [w.format() for w in b.w],
    }


def report_dict(result: RunResult) -> dict:
    """The JSON report: stable key order, no timestamps, byte-reproducible."""
    spec = result.spec
    return {
        "schema": SCHEMA_REPORT,
        "scenario": {
            "name": spec.name,
            "pipeline": spec.pipeline,
            "suspensions": spec.suspensions,
            "skeletal_cut": spec.skeletal_cut,
            "target": result.target_n,
            "manifolds": [dict(m) if "determinant" in m else
                          {k: v for k, v in m.items() if k != "quad_form"}
                          for m in spec.manifolds],
        },
        "conventions": {
            "sign": SIGN_CONVENTION_NOTE,
            "basepoint": BASEPOINT_NOTE,
        },
        "manifold": _manifold_dict(result.manifold),
        "bundle": _bundle_dict(result.bundle),
        "complex": complex_to_dict(result.final_complex),
        "assembly": result.report.to_dict(),
        "class_assignment": [
            {"cell": cell.name(), "element": str(element)}
            for cell, element in sorted(result.assignment.items(),
                                        key=lambda kv: kv[0].sort_key())],
        "verdict": result.verdict,
        "certificate": result.certificate.split("\n"),
    }


def report_json(result: RunResult) -> str:
    return json.dumps(report_dict(result), indent=2, sort_keys=True) + "\n"


def explain_text(spec: ScenarioSpec) -> str:
    """Pipeline stages, cell tables, Sq detections and labels, without
    assembling anything. Deterministic for golden-file diffs."""
    manifold = resolve_manifold(spec)
    bundle = index_bundle(manifold)
    built = build_complex(spec, bundle)
    target_n = resolve_target(spec, manifold, bundle)

    lines: List[str] = []
    lines.append(f"scenario: {spec.name}")
    lines.append(f"pipeline: {spec.pipeline}")
    md = _manifold_dict(manifold)
    lines.append(f"manifold: {md['label']} (b1={md['b1']}, "
                 f"signature={md['signature']}, b+={md['b_plus']})")
    if md["quad_form"]:
        lines.append("quad form: " + "; ".join(md["quad_form"]))
    else:
        lines.append("quad form: empty")
    if manifold.b1 == 0 and not manifold.quad_form:
        lines.append("trivial bundle, sphere model")
    elif bundle.c2.is_zero:
        lines.append("trivial bundle (c2 = 0)")
    lines.append(f"index bundle: rank-{bundle.rank} {bundle.field} over "
                 f"T^{bundle.base_rank}, c1 = {bundle.c1.format()}, "
                 f"c2 = {bundle.c2.format()}")
    lines.append(f"stiefel-whitney: w2 = {bundle.w_class(2).format()}, "
                 f"w4 = {bundle.w_class(4).format()}")
    if built.bundle is not bundle:
        qb = built.bundle
        lines.append(f"quotient bundle: rank-{qb.rank} {qb.field}, "
                     f"w1 = w2 = w3 = 0")
    lines.append(f"target: S^{target_n}")
    lines.append(f"cells by dimension (as built): " + ", ".join(
        f"{d}:{n}" for d, n in sorted(built.cells_by_dim().items())))
    if spec.skeletal_cut is not None or spec.suspensions:
        final = built
        if spec.skeletal_cut is not None:
            final = skeletal_quotient(final, spec.skeletal_cut)
            lines.append(f"skeleton cut: cells of dim <= {spec.skeletal_cut} "
                         "collapsed")
        if spec.suspensions:
            final = suspend(final, spec.suspensions)
            lines.append(f"suspensions: {spec.suspensions}")
        lines.append("cells by dimension (final): " + ", ".join(
            f"{d}:{n}" for d, n in sorted(final.cells_by_dim().items())))
    info = complex_to_dict(built)
    lines.append("labels by gap: " + (", ".join(
        f"{k}={v}" for k, v in info["label_counts"].items()) or "none"))
    if info["detected_labels"]:
        lines.append("Sq detections:")
        for det in info["detected_labels"]:
            lines.append(f"  {det['label']}: {det['upper']} (dim {det['dims'][0]})"
                         f" -> {det['lower']} (dim {det['dims'][1]})")
    else:
        lines.append("Sq detections: none")
    for selector, element in spec.class_assignment:
        where = selector if isinstance(selector, str) else \
            f"base {list(selector[0])} fiber {selector[1]}"
        lines.append(f"class assignment: {element} on {where}")
    return "\n".join(lines) + "\n"
