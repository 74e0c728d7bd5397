"""Execute problem-file tasks and render their reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import __version__
from .calculus import euler_operator
from .errors import NotADivergence, NotASymmetry, PluriError, SearchFailure
from .jet import Expr
from .pluri import classify_el_system, closure_residual, exterior_derivative, multi_time_el, tag_label
from .printer import print_expr
from .problem import Problem, ProblemError, Task
from .reduction import reduce
from .symmetry import (
    Ansatz,
    check_variational_symmetry,
    conservation_law,
    find_divergence_witnesses,
    euler_images,
)


@dataclass
class TaskResult:
    name: str
    kind: str
    passed: bool
    residual: str
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def as_dict(self) -> dict:
        return {
            "task": self.name,
            "kind": self.kind,
            "status": self.status,
            "residual": self.residual,
            "details": self.details,
        }


def _flag(task: Task, key: str, default: bool) -> bool:
    val = task.params.get(key)
    if val is None:
        return default
    if val.lower() in ("true", "yes", "1", "on"):
        return True
    if val.lower() in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"parameter {key}={val!r} is not a boolean")


def _int(prob: Problem, task: Task, key: str, default=None):
    val = task.params.get(key)
    if val is None:
        return default
    try:
        return int(val)
    except ValueError:
        raise ProblemError(prob.path, task.line, f"parameter {key}={val!r} is not an integer") from None


def _require(prob: Problem, task: Task, *keys):
    missing = [k for k in keys if k not in task.params]
    if missing:
        raise ProblemError(prob.path, task.line, f"task {task.name!r} is missing parameter(s) {missing}")


def _dep(prob: Problem, task: Task) -> int:
    name = task.params.get("dep", prob.ctx.dep[0])
    if name not in prob.ctx.dep:
        raise ProblemError(prob.path, task.line, f"unknown dependent variable {name!r}")
    return prob.ctx.dep.index(name)


def _up_to_sign(a: Expr, b: Expr) -> bool:
    return a == b or a == -b


def run_check_symmetry(prob, task):
    _require(prob, task, "lagrangian", "field", "witnesses")
    L = prob.expr(task.params["lagrangian"], task.line)
    V = prob.vector_field(task.params["field"], task.line)
    M = prob.expr_list(task.params["witnesses"], task.line)
    if len(M) != prob.ctx.p:
        raise ProblemError(prob.path, task.line, f"expected {prob.ctx.p} witnesses, got {len(M)}")
    S = prob.equation_system(task.params["system"], task.line) if "system" in task.params else None
    cert = check_variational_symmetry(L, V, M, S)
    details = {"exact": cert.exact}
    if S is not None:
        details["reduced_residual"] = print_expr(cert.reduced_residual)
    return TaskResult(task.name, task.kind, cert.on_shell, print_expr(cert.residual), details)


def run_euler(prob, task):
    _require(prob, task, "expr")
    f = prob.expr(task.params["expr"], task.line)
    E = euler_operator(f, _dep(prob, task))
    ok = True
    details = {"euler": print_expr(E)}
    residual = E
    if "expect" in task.params:
        residual = E - prob.expr(task.params["expect"], task.line)
        ok = ok and residual.is_zero()
    if "system" in task.params:
        red = reduce(E, prob.equation_system(task.params["system"], task.line))
        details["reduced"] = print_expr(red)
        ok = ok and red.is_zero()
    return TaskResult(task.name, task.kind, ok, print_expr(residual), details)


def run_reduce(prob, task):
    _require(prob, task, "expr", "system")
    f = prob.expr(task.params["expr"], task.line)
    S = prob.equation_system(task.params["system"], task.line)
    red = reduce(f, S)
    ok = True
    residual = print_expr(red)
    details = {"reduced": print_expr(red)}
    if "expect" in task.params:
        diff = red - prob.expr(task.params["expect"], task.line)
        residual = print_expr(diff)
        ok = diff.is_zero()
    if _flag(task, "divergence", False):
        images = euler_images(red)
        div = all(e.is_zero() for e in images)
        details["total_divergence"] = div
        if "expect" not in task.params:
            # for a divergence check the Euler images are what must vanish
            residual = "; ".join(print_expr(e) for e in images)
        ok = ok and div
    return TaskResult(task.name, task.kind, ok, residual, details)


def _form_details(F) -> dict:
    return {",".join(F.ctx.indep[j] for j in J): print_expr(F[J]) for J in F.tuples()}


def run_dform(prob, task):
    _require(prob, task, "form")
    F = prob.lagrangian_form(task.params["form"], task.line)
    dF = exterior_derivative(F)
    details = {"degree": dF.degree, "coefficients": _form_details(dF)}
    ok = True
    residual = "0"
    if "expect" in task.params:
        tuples = dF.tuples()
        if len(tuples) != 1:
            raise ProblemError(prob.path, task.line, "expect= needs a result with exactly one coefficient")
        diff = dF[tuples[0]] - prob.expr(task.params["expect"], task.line)
        ok = diff.is_zero()
        residual = print_expr(diff)
    if _flag(task, "zero", False):
        ok = ok and dF.is_zero()
    return TaskResult(task.name, task.kind, ok, residual, details)


def run_closure(prob, task):
    _require(prob, task, "form", "system")
    F = prob.lagrangian_form(task.params["form"], task.line)
    S = prob.equation_system(task.params["system"], task.line)
    entries = closure_residual(F, S)
    ok = all(e.reduced.is_zero() for e in entries.values())
    raw = {",".join(F.ctx.indep[j] for j in J): print_expr(e.raw) for J, e in entries.items()}
    red = {",".join(F.ctx.indep[j] for j in J): print_expr(e.reduced) for J, e in entries.items()}
    details = {"raw": raw, "closed_on_solutions": ok}
    if "expect" in task.params:
        if len(entries) != 1:
            raise ProblemError(prob.path, task.line, "expect= needs a result with exactly one coefficient")
        (entry,) = entries.values()
        match = entry.raw == prob.expr(task.params["expect"], task.line)
        details["raw_matches_expect"] = match
        ok = ok and match
    residual = "; ".join(f"{k}: {v}" for k, v in red.items()) or "0"
    return TaskResult(task.name, task.kind, ok, residual, details)


def _el_listing(ctx, eqs) -> dict:
    return {tag_label(ctx, e.tag): print_expr(e.expr) for e in eqs}


def run_derive_el(prob, task):
    _require(prob, task, "form")
    F = prob.lagrangian_form(task.params["form"], task.line)
    E = multi_time_el(F, _dep(prob, task))
    expected = _int(prob, task, "count")
    ok = expected is None or len(E) == expected
    details = {
        "count": len(E),
        "breakdown": E.counts(),
        "nontrivial": _el_listing(prob.ctx, E.nontrivial()),
    }
    return TaskResult(task.name, task.kind, ok, str(len(E)), details)


def run_classify_el(prob, task):
    _require(prob, task, "form", "system")
    F = prob.lagrangian_form(task.params["form"], task.line)
    S = prob.equation_system(task.params["system"], task.line)
    E = multi_time_el(F, _dep(prob, task))
    report = classify_el_system(E, S)
    want_independent = _int(prob, task, "independent", 0)
    ok = len(report.independent) == want_independent
    details = {
        "counts": report.counts,
        "reducible": _el_listing(prob.ctx, report.reducible),
        "independent": _el_listing(prob.ctx, report.independent),
    }
    if "count" in task.params:
        ok = ok and len(E) == _int(prob, task, "count")
    if "matches" in task.params:
        targets = prob.expr_list(task.params["matches"], task.line)
        nontrivial = E.nontrivial()
        every_eq_known = all(any(_up_to_sign(e.expr, t) for t in targets) for e in nontrivial)
        every_target_hit = all(any(_up_to_sign(e.expr, t) for e in nontrivial) for t in targets)
        details["matches_targets"] = every_eq_known and every_target_hit
        ok = ok and every_eq_known and every_target_hit
    residual = "; ".join(f"{k}: {v}" for k, v in details["independent"].items()) or "0"
    return TaskResult(task.name, task.kind, ok, residual, details)


def run_conservation(prob, task):
    _require(prob, task, "lagrangian", "field", "witnesses")
    L = prob.expr(task.params["lagrangian"], task.line)
    V = prob.vector_field(task.params["field"], task.line)
    M = prob.expr_list(task.params["witnesses"], task.line)
    if len(M) != prob.ctx.p:
        raise ProblemError(prob.path, task.line, f"expected {prob.ctx.p} witnesses, got {len(M)}")
    try:
        F = conservation_law(L, V, M)
    except NotASymmetry as exc:
        return TaskResult(task.name, task.kind, False, "nonzero", {"error": str(exc)})
    details = {"fluxes": {prob.ctx.indep[i]: print_expr(f) for i, f in enumerate(F)}, "noether_identity": True}
    ok = True
    residual = "0"
    if "expect" in task.params:
        want = prob.expr_list(task.params["expect"], task.line)
        diffs = [f - w for f, w in zip(F, want)]
        ok = len(want) == len(F) and all(d.is_zero() for d in diffs)
        residual = "; ".join(print_expr(d) for d in diffs)
    return TaskResult(task.name, task.kind, ok, residual, details)


def run_witness_search(prob, task):
    _require(prob, task, "expr")
    f = prob.expr(task.params["expr"], task.line)
    ansatz = Ansatz(
        max_order=_int(prob, task, "order", 2),
        max_degree=_int(prob, task, "degree", 4),
        allow_trig=_flag(task, "trig", True),
    )
    expect = task.params.get("expect", "found")
    if expect not in ("found", "not-divergence", "exhausted"):
        raise ProblemError(prob.path, task.line, f"expect must be found, not-divergence or exhausted, not {expect!r}")
    details = {"ansatz": {"order": ansatz.max_order, "degree": ansatz.max_degree, "trig": ansatz.allow_trig}}
    try:
        M = find_divergence_witnesses(f, ansatz)
        outcome = "found"
        details["witnesses"] = {prob.ctx.indep[i]: print_expr(m) for i, m in enumerate(M)}
        residual = "0"
    except NotADivergence as exc:
        outcome = "not-divergence"
        residual = "; ".join(print_expr(e) for e in exc.euler_images)
    except SearchFailure:
        outcome = "exhausted"
        residual = "ansatz exhausted"
    details["outcome"] = outcome
    return TaskResult(task.name, task.kind, outcome == expect, residual, details)


RUNNERS = {
    "check-symmetry": run_check_symmetry,
    "euler": run_euler,
    "reduce": run_reduce,
    "dform": run_dform,
    "closure": run_closure,
    "derive-el": run_derive_el,
    "classify-el": run_classify_el,
    "conservation": run_conservation,
    "witness-search": run_witness_search,
}


def run_task(prob: Problem, task: Task) -> TaskResult:
    try:
        return RUNNERS[task.kind](prob, task)
    except ProblemError:
        raise
    except ValueError as exc:
        raise ProblemError(prob.path, task.line, str(exc)) from None
    except PluriError as exc:
        return TaskResult(task.name, task.kind, False, "error", {"error": f"{type(exc).__name__}: {exc}"})


def _render_value(value, indent: str) -> list[str]:
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, dict):
                lines.append(f"{indent}{k}:")
                lines.extend(_render_value(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {_scalar(v)}")
        return lines
    return [f"{indent}{_scalar(value)}"]


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render_text(results, header: str) -> str:
    lines = [header]
    for r in results:
        lines.append("")
        lines.append(f"task: {r.name}")
        lines.append(f"kind: {r.kind}")
        lines.append(f"status: {r.status}")
        lines.append(f"residual: {r.residual}")
        if r.details:
            lines.append("details:")
            lines.extend(_render_value(r.details, "  "))
    passed = sum(r.passed for r in results)
    lines.append("")
    lines.append(f"summary: {passed}/{len(results)} passed")
    return "\n".join(lines) + "\n"


def render_json(results, meta: dict) -> str:
    doc = {
        "meta": {"version": __version__, **meta},
        "tasks": [r.as_dict() for r in results],
        "summary": {"passed": sum(r.passed for r in results), "total": len(results)},
    }
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
