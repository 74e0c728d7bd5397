"""Variational symmetries, divergence tests, witness search and Noether fluxes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .calculus import (
    EvolutionaryField,
    divergence,
    euler_operator,
    prolong_apply,
    total_derivative,
)
from .errors import (
    ArityError,
    InternalInconsistency,
    NotADivergence,
    NotASymmetry,
    SearchFailure,
)
from .jet import COS, JET, SIN, Context, Expr, partial
from .linsolve import solve_sparse
from .reduction import EquationSystem, reduce


@dataclass(frozen=True)
class SymmetryCertificate:
    field: EvolutionaryField
    lagrangian: Expr
    witnesses: tuple
    residual: Expr
    reduced_residual: Expr | None = None

    @property
    def exact(self) -> bool:
        return self.residual.is_zero()

    @property
    def on_shell(self) -> bool:
        if self.reduced_residual is None:
            return self.exact
        return self.reduced_residual.is_zero()


def check_variational_symmetry(
    L: Expr, V: EvolutionaryField, M: Sequence[Expr], S: EquationSystem | None = None
) -> SymmetryCertificate:
    """Residual ``D_phi L - sum_i D_i M_i``, optionally reduced modulo *S*."""
    if len(M) != L.ctx.p:
        raise ArityError(f"expected {L.ctx.p} witnesses, got {len(M)}")
    residual = prolong_apply(V, L) - divergence(list(M))
    reduced = reduce(residual, S) if S is not None else None
    return SymmetryCertificate(V, L, tuple(M), residual, reduced)


def euler_images(f: Expr) -> list[Expr]:
    return [euler_operator(f, a) for a in range(f.ctx.q)]


def is_total_divergence(f: Expr) -> bool:
    return all(e.is_zero() for e in euler_images(f))


@dataclass(frozen=True)
class Ansatz:
    """Bounds on the monomial basis used for each witness component."""

    max_order: int = 2
    max_degree: int = 4
    allow_trig: bool = True


def _jet_basis_vars(ctx: Context, deps, dirs, max_order: int) -> list[tuple]:
    atoms = []
    for dep in deps:
        for order in range(max_order + 1):
            for combo in itertools.combinations_with_replacement(dirs, order):
                idx = [0] * ctx.p
                for d in combo:
                    idx[d] += 1
                atoms.append((dep, JET, order, tuple(idx)))
    return sorted(set(atoms))


def ansatz_basis(ctx: Context, ansatz: Ansatz, deps=None, dirs=None) -> list[Expr]:
    """Non-constant monomials within the bounds, optionally with one sin/cos factor."""
    deps = range(ctx.q) if deps is None else deps
    dirs = range(ctx.p) if dirs is None else dirs
    jets = _jet_basis_vars(ctx, deps, list(dirs), ansatz.max_order)
    trig = [None]
    if ansatz.allow_trig:
        for dep in deps:
            trig += [(dep, SIN), (dep, COS)]
    basis = []
    for deg in range(ansatz.max_degree + 1):
        for combo in itertools.combinations_with_replacement(jets, deg):
            for t in trig:
                if deg == 0 and t is None:
                    continue
                m = Expr.const(ctx, 1)
                for a in combo:
                    m = m * Expr.atom(ctx, a)
                if t is not None:
                    m = m * Expr.atom(ctx, t)
                basis.append(m)
    return basis


def find_divergence_witnesses(f: Expr, ansatz: Ansatz = Ansatz()) -> list[Expr]:
    """Witnesses ``M`` with ``divergence(M) == f`` drawn from the ansatz.

    Raises :class:`NotADivergence` when some Euler image of *f* is nonzero and
    :class:`SearchFailure` when the ansatz is too small.
    """
    ctx = f.ctx
    images = euler_images(f)
    if not all(e.is_zero() for e in images):
        raise NotADivergence("expression is not a total divergence", images)
    if f.is_zero():
        return [Expr.zero(ctx) for _ in range(ctx.p)]
    # Variables and directions absent from f can be projected out of any
    # witness identity (the projection commutes with the remaining D_i and
    # kills D_i for dropped directions), so the search is restricted to them.
    atoms = f.atoms()
    deps = sorted({a[0] for a in atoms})
    dirs = sorted({d for a in atoms if a[1] == JET for d in range(ctx.p) if a[3][d]})
    basis = ansatz_basis(ctx, ansatz, deps, dirs)
    unknowns = [(i, b) for i in dirs for b in basis]
    columns: dict = {}
    for col, (i, b) in enumerate(unknowns):
        for key, c in total_derivative(b, i)._terms.items():
            columns.setdefault(key, {})[col] = c
    target = f._terms
    if any(key not in columns for key in target):
        raise SearchFailure(f"ansatz exhausted: {ansatz}")
    keys = sorted(columns, key=repr)
    rows = [columns[k] for k in keys]
    rhs = [target.get(k, Fraction(0)) for k in keys]
    solution = solve_sparse(rows, rhs)
    if solution is None:
        raise SearchFailure(f"ansatz exhausted: {ansatz}")
    M = [Expr.zero(ctx) for _ in range(ctx.p)]
    for col, val in solution.items():
        i, b = unknowns[col]
        M[i] = M[i] + b.scale(val)
    if divergence(M) != f:
        raise InternalInconsistency("witness verification failed")
    return M


def _noether_fluxes(L: Expr, V: EvolutionaryField) -> list[Expr]:
    """``G`` with ``D_phi L = sum_a phi^a E_a(L) + sum_i D_i G_i`` by repeated integration by parts."""
    ctx = L.ctx
    G = [Expr.zero(ctx) for _ in range(ctx.p)]
    for v in L.jet_vars():
        if v.order == 0:
            continue
        P = partial(L, v)
        cur = list(v.idx)
        sign = 1
        while any(cur):
            i = next(k for k, n in enumerate(cur) if n)
            cur[i] -= 1
            # (D_i D_rest phi) P = D_i((D_rest phi) P) - (D_rest phi) D_i P
            term = V.prolonged(v.dep, tuple(cur)) * P
            G[i] = G[i] + (term if sign > 0 else -term)
            P = total_derivative(P, i)
            sign = -sign
    return G


def conservation_law(L: Expr, V: EvolutionaryField, M: Sequence[Expr]) -> list[Expr]:
    """Fluxes ``F`` with ``sum_i D_i F_i == sum_a phi^a * E_a(L)`` exactly."""
    cert = check_variational_symmetry(L, V, M)
    if not cert.exact:
        raise NotASymmetry(f"not a variational symmetry with these witnesses; residual {cert.residual}")
    G = _noether_fluxes(L, V)
    F = [m - g for m, g in zip(M, G)]
    lhs = divergence(F)
    rhs = Expr.zero(L.ctx)
    for a, phi in enumerate(V.chars):
        rhs = rhs + phi * euler_operator(L, a)
    if lhs != rhs:
        raise InternalInconsistency(f"Noether identity failed; residual {lhs - rhs}")
    return F
