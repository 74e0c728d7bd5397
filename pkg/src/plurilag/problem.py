"""Line-oriented problem files.

A problem file has sections; blank lines and ``#`` comments are ignored::

    [context]
    independent = x y z
    dependent = u

    [expr]                      # name = expression (may use earlier names)
    L = 1/2*u_x*u_y - cos(u)

    [field]                     # name.dep = characteristic
    phi.u = u_xxx + 1/2*u_x^3

    [form]                      # name[i,j,...] = coefficient, or name.degree = k
    sg[x,y] = L
    sg[y,z] = -N

    [system]                    # name: lead = rhs, rules kept in file order
    SG: u_xy = sin(u)

    [task]                      # name = kind key=value ...
    sym = check-symmetry lagrangian=L field=phi witnesses=N,M,0

Values in task parameters contain no spaces; they are names or short inline
expressions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .calculus import EvolutionaryField
from .errors import ParseError, PluriError
from .jet import Context, Expr
from .parser import parse_expr
from .pluri import LagrangianForm
from .reduction import EquationSystem, Rule

SECTIONS = ("context", "expr", "field", "form", "system", "task")
TASK_KINDS = (
    "check-symmetry",
    "euler",
    "reduce",
    "dform",
    "closure",
    "derive-el",
    "classify-el",
    "conservation",
    "witness-search",
)

_NAME = r"[A-Za-z][A-Za-z0-9_]*"
_ASSIGN_RE = re.compile(rf"({_NAME})\s*=\s*(.+)\Z")
_FIELD_RE = re.compile(rf"({_NAME})\.({_NAME})\s*=\s*(.+)\Z")
_FORM_RE = re.compile(rf"({_NAME})\[([^\]]*)\]\s*=\s*(.+)\Z")
_DEGREE_RE = re.compile(rf"({_NAME})\.degree\s*=\s*(\d+)\Z")
_SYSTEM_RE = re.compile(rf"({_NAME})\s*:\s*([^=]+?)\s*=\s*(.+)\Z")


class ProblemError(PluriError):
    def __init__(self, path, line, message):
        self.path = str(path)
        self.line = line
        where = f"{self.path}:{line}" if line else self.path
        super().__init__(f"{where}: {message}")


@dataclass
class Task:
    name: str
    kind: str
    params: dict
    line: int


@dataclass
class Problem:
    path: str
    ctx: Context
    exprs: dict = field(default_factory=dict)
    fields: dict = field(default_factory=dict)
    forms: dict = field(default_factory=dict)
    systems: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)

    # lookups used by the task runner; all raise ProblemError with the task line
    def expr(self, text: str, line: int) -> Expr:
        try:
            return parse_expr(text, self.ctx, self.exprs)
        except ParseError as exc:
            raise ProblemError(self.path, line, f"cannot resolve expression {text!r}: {exc}") from None

    def expr_list(self, text: str, line: int) -> list[Expr]:
        return [self.expr(t, line) for t in text.split(",")]

    def vector_field(self, name: str, line: int) -> EvolutionaryField:
        if name not in self.fields:
            raise ProblemError(self.path, line, f"unknown field {name!r}")
        return self.fields[name]

    def lagrangian_form(self, name: str, line: int) -> LagrangianForm:
        if name not in self.forms:
            raise ProblemError(self.path, line, f"unknown form {name!r}")
        return self.forms[name]

    def equation_system(self, text: str, line: int) -> EquationSystem:
        rules = []
        for name in text.split(","):
            if name not in self.systems:
                raise ProblemError(self.path, line, f"unknown system {name!r}")
            rules.extend(self.systems[name].rules)
        return EquationSystem(tuple(rules))


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def load_problem(path) -> Problem:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ProblemError(path, 0, f"cannot read problem file: {exc}") from None
    return parse_problem(text, str(path))


def parse_problem(text: str, path: str = "<problem>") -> Problem:
    section = None
    indep = dep = None
    context_line = None
    raw: dict = {s: [] for s in SECTIONS}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = _strip(line)
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            section = m.group(1)
            if section not in SECTIONS:
                raise ProblemError(path, lineno, f"unknown section [{section}]")
            if section == "context":
                if context_line is not None:
                    raise ProblemError(path, lineno, "context declared more than once")
                context_line = lineno
            continue
        if section is None:
            raise ProblemError(path, lineno, "content before the first section header")
        if section == "context":
            m = _ASSIGN_RE.fullmatch(line)
            if not m or m.group(1) not in ("independent", "dependent"):
                raise ProblemError(path, lineno, "expected 'independent = ...' or 'dependent = ...'")
            names = tuple(m.group(2).split())
            if m.group(1) == "independent":
                indep = names
            else:
                dep = names
        else:
            raw[section].append((lineno, line))
    if context_line is None or indep is None or dep is None:
        raise ProblemError(path, context_line or 0, "missing [context] with independent and dependent variables")
    try:
        ctx = Context(indep, dep)
    except PluriError as exc:
        raise ProblemError(path, context_line, str(exc)) from None
    prob = Problem(path, ctx)
    taken = set(indep) | set(dep)

    def expr_at(lineno, src):
        try:
            return parse_expr(src, ctx, prob.exprs)
        except ParseError as exc:
            raise ProblemError(path, lineno, str(exc)) from None

    for lineno, line in raw["expr"]:
        m = _ASSIGN_RE.fullmatch(line)
        if not m:
            raise ProblemError(path, lineno, "expected 'name = expression'")
        name, src = m.groups()
        if name in taken or name in prob.exprs or name in ("sin", "cos", "D") or name.split("_")[0] in dep:
            raise ProblemError(path, lineno, f"name {name!r} is already in use")
        prob.exprs[name] = expr_at(lineno, src)

    chars: dict = {}
    for lineno, line in raw["field"]:
        m = _FIELD_RE.fullmatch(line)
        if not m:
            raise ProblemError(path, lineno, "expected 'field.dep = expression'")
        name, depname, src = m.groups()
        if depname not in ctx.dep:
            raise ProblemError(path, lineno, f"unknown dependent variable {depname!r}")
        slot = chars.setdefault(name, [Expr.zero(ctx)] * ctx.q)
        slot[ctx.dep.index(depname)] = expr_at(lineno, src)
    prob.fields = {n: EvolutionaryField(tuple(v)) for n, v in chars.items()}

    degrees: dict = {}
    coeffs: dict = {}
    for lineno, line in raw["form"]:
        m = _DEGREE_RE.fullmatch(line)
        if m:
            degrees[m.group(1)] = (int(m.group(2)), lineno)
            coeffs.setdefault(m.group(1), [])
            continue
        m = _FORM_RE.fullmatch(line)
        if not m:
            raise ProblemError(path, lineno, "expected 'form[i,j] = expression' or 'form.degree = k'")
        name, idx, src = m.groups()
        names = [s.strip() for s in idx.split(",") if s.strip()]
        bad = [s for s in names if s not in ctx.indep]
        if bad:
            raise ProblemError(path, lineno, f"unknown independent variable(s) {bad}")
        coeffs.setdefault(name, []).append((lineno, tuple(ctx.indep.index(s) for s in names), expr_at(lineno, src)))
    for name, items in coeffs.items():
        degs = {len(J) for _, J, _ in items}
        if name in degrees:
            degs.add(degrees[name][0])
        if len(degs) != 1:
            line = items[0][0] if items else degrees[name][1]
            raise ProblemError(path, line, f"form {name!r} has inconsistent degrees {sorted(degs)}")
        deg = degs.pop()
        acc: dict = {}
        for _, J, e in items:
            acc.setdefault(J, []).append(e)
        merged = {}
        for J, es in acc.items():
            total = Expr.zero(ctx)
            for e in es:
                total = total + e
            merged[J] = total
        try:
            prob.forms[name] = LagrangianForm(ctx, deg, merged)
        except PluriError as exc:
            raise ProblemError(path, (items[0][0] if items else degrees[name][1]), str(exc)) from None

    rules: dict = {}
    for lineno, line in raw["system"]:
        m = _SYSTEM_RE.fullmatch(line)
        if not m:
            raise ProblemError(path, lineno, "expected 'system: lead = rhs'")
        name, lead_src, rhs_src = m.groups()
        lead, rhs = expr_at(lineno, lead_src), expr_at(lineno, rhs_src)
        vs = lead.jet_vars()
        if len(vs) != 1 or lead != Expr.jet(ctx, vs[0].dep, vs[0].idx):
            raise ProblemError(path, lineno, f"rule lead must be a single jet variable, got {lead_src!r}")
        try:
            rules.setdefault(name, []).append(Rule(vs[0], rhs))
        except ValueError as exc:
            raise ProblemError(path, lineno, str(exc)) from None
    prob.systems = {n: EquationSystem(tuple(r)) for n, r in rules.items()}

    seen = set()
    for lineno, line in raw["task"]:
        m = _ASSIGN_RE.fullmatch(line)
        if not m:
            raise ProblemError(path, lineno, "expected 'name = kind key=value ...'")
        name, rest = m.groups()
        if name in seen:
            raise ProblemError(path, lineno, f"duplicate task name {name!r}")
        seen.add(name)
        kind, *pairs = rest.split()
        if kind not in TASK_KINDS:
            raise ProblemError(path, lineno, f"unknown task kind {kind!r}")
        params = {}
        for pair in pairs:
            key, eq, val = pair.partition("=")
            if not eq or not key or not val:
                raise ProblemError(path, lineno, f"malformed task parameter {pair!r}")
            params[key] = val
        prob.tasks.append(Task(name, kind, params, lineno))
    return prob
