"""Equation systems as oriented rewrite rules, and normal forms modulo them.

A rule ``u^a_J -> rhs`` stands for the equation ``u^a_J = rhs`` together with
all of its differential consequences: any jet variable ``u^a_I`` with
``I >= J`` componentwise is replaced by ``D_{I-J} rhs``.  Reduction is
repeated until no reducible jet variable remains.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .calculus import _DerivativeTable
from .errors import ContextError, ReductionDivergence, UnsupportedOperation
from .jet import JET, Context, Expr, JetVar, mi_ge, mi_sub, substitute

DEFAULT_STEP_BUDGET = 10**6


@dataclass(frozen=True)
class Rule:
    lead: JetVar
    rhs: Expr

    def __post_init__(self):
        lead = JetVar(self.lead[0], tuple(self.lead[1]))
        object.__setattr__(self, "lead", lead)
        for v in self.rhs.jet_vars():
            if v.dep == lead.dep and mi_ge(v.idx, lead.idx):
                raise ValueError(f"rule right-hand side contains the lead {lead} or a derivative of it")

    def applies_to(self, dep: int, idx) -> bool:
        return dep == self.lead.dep and mi_ge(idx, self.lead.idx)


@dataclass(frozen=True)
class EquationSystem:
    """Rules in priority order (earlier rules win ties)."""

    rules: tuple
    step_budget: int = DEFAULT_STEP_BUDGET
    _tables: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        ctxs = {r.rhs.ctx for r in self.rules}
        if len(ctxs) > 1:
            raise ContextError("rules belong to different contexts")

    @classmethod
    def of(cls, *pairs, step_budget: int = DEFAULT_STEP_BUDGET) -> "EquationSystem":
        """Build from ``(lead_expr, rhs)`` pairs where ``lead_expr`` is a single jet variable."""
        rules = []
        for lead, rhs in pairs:
            vs = lead.jet_vars()
            if len(lead) != 1 or len(vs) != 1 or lead != Expr.jet(lead.ctx, vs[0].dep, vs[0].idx):
                raise ValueError(f"rule lead must be a single jet variable, got {lead}")
            rules.append(Rule(vs[0], rhs))
        return cls(tuple(rules), step_budget)

    def permuted(self, order) -> "EquationSystem":
        return EquationSystem(tuple(self.rules[k] for k in order), self.step_budget)

    def rule_for(self, dep: int, idx):
        for r in self.rules:
            if r.applies_to(dep, idx):
                return r
        return None

    def derived_rhs(self, rule: Rule, idx) -> Expr:
        """``D_{idx - lead} rhs``, memoised per rule."""
        table = self._tables.get(rule)
        if table is None:
            table = self._tables[rule] = _DerivativeTable(rule.rhs)
        return table(mi_sub(idx, rule.lead.idx))


class _Reducer:
    def __init__(self, system: EquationSystem, ctx: Context):
        self.system = system
        self.ctx = ctx
        self.memo: dict = {}
        self.active: set = set()
        self.steps = 0
        self.order0_leads = {r.lead.dep for r in system.rules if r.lead.order == 0}

    def atom_image(self, atom):
        if atom[1] != JET:
            if atom[0] in self.order0_leads:
                raise UnsupportedOperation("cannot reduce sin/cos of a dependent variable that is itself a rule lead")
            return None
        if atom in self.memo:
            return self.memo[atom]
        dep, idx = atom[0], atom[3]
        rule = self.system.rule_for(dep, idx)
        if rule is None:
            self.memo[atom] = None
            return None
        if atom in self.active:
            raise ReductionDivergence(f"reduction of u^{dep}_{idx} loops back on itself")
        self.steps += 1
        if self.steps > self.system.step_budget:
            raise ReductionDivergence(f"step budget of {self.system.step_budget} rewrites exceeded")
        self.active.add(atom)
        try:
            result = self.reduce(self.system.derived_rhs(rule, idx))
        finally:
            self.active.discard(atom)
        self.memo[atom] = result
        return result

    def reduce(self, f: Expr) -> Expr:
        if not any(self.atom_image_needed(a) for a in f.atoms()):
            return f
        return substitute(f, self.atom_image)

    def atom_image_needed(self, atom) -> bool:
        if atom[1] != JET:
            return atom[0] in self.order0_leads
        return self.system.rule_for(atom[0], atom[3]) is not None


def reduce(f: Expr, S: EquationSystem) -> Expr:
    """Normal form of *f* modulo the system and its differential consequences."""
    if S.rules and S.rules[0].rhs.ctx != f.ctx:
        raise ContextError("expression and system belong to different contexts")
    return _Reducer(S, f.ctx).reduce(f)


def is_consequence(f: Expr, S: EquationSystem) -> bool:
    return reduce(f, S).is_zero()


@dataclass
class ConfluenceReport:
    samples: list
    agree: list
    normal_forms: list  # per sample: {permutation: Expr}

    @property
    def all_agree(self) -> bool:
        return all(self.agree)


def check_confluence_samples(S: EquationSystem, samples) -> ConfluenceReport:
    """Reduce every sample under every rule-priority permutation and compare."""
    perms = list(itertools.permutations(range(len(S.rules))))
    systems = {perm: S.permuted(perm) for perm in perms}
    agree, forms = [], []
    for f in samples:
        nfs = {perm: reduce(f, sys_) for perm, sys_ in systems.items()}
        values = list(nfs.values())
        agree.append(all(v == values[0] for v in values))
        forms.append(nfs)
    return ConfluenceReport(list(samples), agree, forms)
