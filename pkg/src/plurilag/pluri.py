"""Lagrangian k-forms on multi-time and the multi-time Euler-Lagrange system.

Sign convention for the sine-Gordon 2-form in ``(x, y, z)``: the stored
coefficients are ``L12 = L``, ``L13 = M``, ``L23 = -N``, so the single
coefficient of ``dF`` is ``L_z - M_y - N_x``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .calculus import (
    restricted_delta_u,
    restricted_delta_u_k,
    restricted_delta_u_km,
    total_derivative,
)
from .errors import DegreeOverflowError, OrderOverflowError, UnsupportedOperation
from .jet import JET, Context, Expr
from .reduction import EquationSystem, reduce


def _perm_sign(seq) -> int:
    sign = 1
    seq = list(seq)
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class LagrangianForm:
    """A k-form ``sum_J L_J dx^J`` with coefficients on increasing index tuples."""

    ctx: Context
    degree: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.degree <= self.ctx.p:
            raise DegreeOverflowError(f"degree {self.degree} impossible in {self.ctx.p} dimensions")
        clean = {}
        for J, e in self.coeffs.items():
            J = tuple(self.ctx.indep_index(j) for j in J)
            if len(J) != self.degree:
                raise ValueError(f"index tuple {J} does not match degree {self.degree}")
            if len(set(J)) != len(J):
                continue  # repeated index: coefficient is 0 by antisymmetry
            s = _perm_sign(J)
            key = tuple(sorted(J))
            val = clean.get(key, Expr.zero(self.ctx)) + (e if s > 0 else -e)
            clean[key] = val
        object.__setattr__(self, "coeffs", {k: v for k, v in sorted(clean.items()) if not v.is_zero()})

    @property
    def dim(self) -> int:
        return self.ctx.p

    def __getitem__(self, J) -> Expr:
        J = tuple(self.ctx.indep_index(j) for j in J)
        if len(set(J)) != len(J):
            return Expr.zero(self.ctx)
        e = self.coeffs.get(tuple(sorted(J)), Expr.zero(self.ctx))
        return e if _perm_sign(J) > 0 else -e

    def tuples(self):
        return list(itertools.combinations(range(self.dim), self.degree))

    def is_zero(self) -> bool:
        return not self.coeffs


def exterior_derivative(F: LagrangianForm) -> LagrangianForm:
    if F.degree >= F.dim:
        raise DegreeOverflowError(f"a {F.degree}-form in {F.dim} dimensions has no exterior derivative")
    out = {}
    for J in itertools.combinations(range(F.dim), F.degree + 1):
        acc = Expr.zero(F.ctx)
        for r, j in enumerate(J):
            term = total_derivative(F[J[:r] + J[r + 1:]], j)
            acc = acc - term if r % 2 else acc + term
        out[J] = acc
    return LagrangianForm(F.ctx, F.degree + 1, out)


@dataclass(frozen=True)
class ClosureEntry:
    raw: Expr
    reduced: Expr


def closure_residual(F: LagrangianForm, S: EquationSystem) -> dict:
    """``{J: ClosureEntry}`` over every increasing (k+1)-tuple; closed on solutions iff all reduced are 0."""
    dF = exterior_derivative(F)
    return {J: ClosureEntry(dF[J], reduce(dF[J], S)) for J in dF.tuples()}


def is_closed_on_solutions(F: LagrangianForm, S: EquationSystem) -> bool:
    return all(e.reduced.is_zero() for e in closure_residual(F, S).values())


@dataclass(frozen=True)
class ELEquation:
    tag: tuple  # ("pluri1", i, j), ("pluri4", i, j, j2), ...
    expr: Expr

    @property
    def trivial(self) -> bool:
        return self.expr.is_zero()

    @property
    def kind(self) -> str:
        return self.tag[0]


@dataclass(frozen=True)
class MultiTimeELSystem:
    ctx: Context
    equations: tuple

    def __len__(self):
        return len(self.equations)

    def nontrivial(self) -> list[ELEquation]:
        return [e for e in self.equations if not e.trivial]

    def counts(self) -> dict:
        out: dict = {}
        for e in self.equations:
            out[e.kind] = out.get(e.kind, 0) + 1
        return out


def _check_form(F: LagrangianForm):
    if F.degree != 2:
        raise UnsupportedOperation("multi-time Euler-Lagrange equations are implemented for 2-forms only")
    for J, e in F.coeffs.items():
        order = max((a[2] for a in e.atoms() if a[1] == JET), default=0)
        if order > 2:
            raise OrderOverflowError(f"coefficient {J} has jet order {order} > 2")


def multi_time_el(F: LagrangianForm, dep=0) -> MultiTimeELSystem:
    """Generate the full multi-time Euler-Lagrange system of a second-order 2-form.

    "Does not depend on j" conditions are encoded as all pairwise
    differences over the admissible ``j``; for the mixed second-order
    conditions ``k`` ranges over indices different from ``i``, since
    ``k == i`` is covered by the cyclic triple sums.
    """
    _check_form(F)
    n = F.dim
    L = lambda i, j: F[(i, j)]  # noqa: E731
    eqs = []
    pairs = list(itertools.combinations(range(n), 2))
    for i, j in pairs:
        eqs.append(ELEquation(("pluri1", i, j), restricted_delta_u(L(i, j), i, j, dep)))
    for i, j in pairs:
        for k in range(n):
            if k not in (i, j):
                eqs.append(ELEquation(("pluri2", i, j, k), restricted_delta_u_k(L(i, j), k, i, j, dep)))
    for i, j in pairs:
        rest = [k for k in range(n) if k not in (i, j)]
        for k, m in itertools.combinations_with_replacement(rest, 2):
            eqs.append(ELEquation(("pluri3", i, j, k, m), restricted_delta_u_km(L(i, j), k, m, dep)))
    for i in range(n):
        js = [j for j in range(n) if j != i]
        vals = {j: restricted_delta_u_k(L(i, j), j, i, j, dep) for j in js}
        for j, j2 in itertools.combinations(js, 2):
            eqs.append(ELEquation(("pluri4", i, j, j2), vals[j] - vals[j2]))
    for i in range(n):
        js = [j for j in range(n) if j != i]
        for k in range(n):
            if k == i:
                continue
            vals = {j: restricted_delta_u_km(L(i, j), j, k, dep) for j in js}
            for j, j2 in itertools.combinations(js, 2):
                eqs.append(ELEquation(("pluri5", i, k, j, j2), vals[j] - vals[j2]))
    for i, j, k in itertools.combinations(range(n), 3):
        e = (
            restricted_delta_u_km(L(i, j), i, j, dep)
            + restricted_delta_u_km(L(j, k), j, k, dep)
            + restricted_delta_u_km(L(k, i), k, i, dep)
        )
        eqs.append(ELEquation(("pluri6", i, j, k), e))
    return MultiTimeELSystem(F.ctx, tuple(eqs))


@dataclass
class ELClassification:
    trivial: list = field(default_factory=list)
    reducible: list = field(default_factory=list)
    independent: list = field(default_factory=list)

    @property
    def counts(self) -> dict:
        return {
            "total": len(self.trivial) + len(self.reducible) + len(self.independent),
            "trivial": len(self.trivial),
            "reducible": len(self.reducible),
            "independent": len(self.independent),
        }


def classify_el_system(E: MultiTimeELSystem, S: EquationSystem) -> ELClassification:
    report = ELClassification()
    for eq in E.equations:
        if eq.trivial:
            report.trivial.append(eq)
        elif reduce(eq.expr, S).is_zero():
            report.reducible.append(eq)
        else:
            report.independent.append(eq)
    return report


def tag_label(ctx: Context, tag) -> str:
    names = [ctx.indep[t] for t in tag[1:]]
    return f"{tag[0]}({','.join(names)})"
