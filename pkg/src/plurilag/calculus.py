"""Total derivatives, prolonged evolutionary fields and variational derivatives.

Expressions are autonomous: there is no explicit dependence on the
independent variables, so ``D_j f`` is just the sum over jet variables of
``u_{I+e_j} * df/du_I`` (with the chain rule through sin/cos).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import ArityError, ContextError, OrderOverflowError
from .jet import (
    JET,
    Context,
    Expr,
    JetVar,
    apply_derivation,
    expr_sum,
    mi_key,
    partial,
    trig_image,
)


def total_derivative(f: Expr, j) -> Expr:
    ctx = f.ctx
    j = ctx.indep_index(j)

    def image(atom):
        if atom[1] == JET:
            idx = list(atom[3])
            idx[j] += 1
            return Expr.jet(ctx, atom[0], idx)
        return trig_image(ctx, atom, Expr.jet(ctx, atom[0], ctx.unit(j)))

    return apply_derivation(f, image)


def total_derivative_multi(f: Expr, idx) -> Expr:
    """``D_I f`` applied as ``D_1^{i_1} ... D_p^{i_p}`` (the order is immaterial)."""
    idx = f.ctx.multi_index(idx)
    for j, n in enumerate(idx):
        for _ in range(n):
            f = total_derivative(f, j)
    return f


class _DerivativeTable:
    """Memoised ``D_I g`` for a fixed ``g``, built one direction at a time."""

    def __init__(self, g: Expr):
        self.ctx = g.ctx
        self._cache = {(0,) * g.ctx.p: g}

    def __call__(self, idx) -> Expr:
        idx = tuple(idx)
        hit = self._cache.get(idx)
        if hit is not None:
            return hit
        j = next(k for k, n in enumerate(idx) if n)
        prev = list(idx)
        prev[j] -= 1
        val = total_derivative(self(prev), j)
        self._cache[idx] = val
        return val


@dataclass(frozen=True)
class EvolutionaryField:
    """Characteristics ``phi^a``, one per dependent variable."""

    chars: tuple
    _tables: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "chars", tuple(self.chars))
        if not self.chars:
            raise ArityError("an evolutionary field needs one characteristic per dependent variable")
        ctx = self.chars[0].ctx
        if len(self.chars) != ctx.q:
            raise ArityError(f"expected {ctx.q} characteristics, got {len(self.chars)}")
        if any(c.ctx != ctx for c in self.chars):
            raise ContextError("characteristics belong to different contexts")

    @classmethod
    def zero(cls, ctx: Context) -> "EvolutionaryField":
        return cls(tuple(Expr.zero(ctx) for _ in range(ctx.q)))

    @property
    def ctx(self) -> Context:
        return self.chars[0].ctx

    def prolonged(self, dep: int, idx) -> Expr:
        """``D_I phi^dep``, cached across calls."""
        table = self._tables.get(dep)
        if table is None:
            table = self._tables[dep] = _DerivativeTable(self.chars[dep])
        return table(idx)


def prolong_apply(V: EvolutionaryField, f: Expr) -> Expr:
    """``D_phi f = sum_{a,I} (D_I phi^a) df/du^a_I``."""
    if V.ctx != f.ctx:
        raise ContextError("field and expression belong to different contexts")
    zero_idx = (0,) * f.ctx.p

    def image(atom):
        if atom[1] == JET:
            return V.prolonged(atom[0], atom[3])
        return trig_image(f.ctx, atom, V.prolonged(atom[0], zero_idx))

    return apply_derivation(f, image)


def divergence(M: Sequence[Expr]) -> Expr:
    if not M:
        raise ArityError("divergence needs one component per independent variable")
    ctx = M[0].ctx
    if len(M) != ctx.p:
        raise ArityError(f"expected {ctx.p} components, got {len(M)}")
    return expr_sum(ctx, (total_derivative(m, i) for i, m in enumerate(M)))


def euler_operator(f: Expr, dep=0) -> Expr:
    """Full variational derivative ``sum_I (-D)_I df/du^a_I``.

    Only jet variables actually present contribute, which truncates the sum at
    the componentwise maximum multi-index of *f*.
    """
    ctx = f.ctx
    dep = ctx.dep_index(dep)
    idxs = {a[3] for a in f.atoms() if a[0] == dep and a[1] == JET}
    if any(a[0] == dep and a[1] != JET for a in f.atoms()):
        idxs.add((0,) * ctx.p)
    out = Expr.zero(ctx)
    for idx in sorted(idxs, key=mi_key):
        term = total_derivative_multi(partial(f, JetVar(dep, idx)), idx)
        out = out - term if sum(idx) % 2 else out + term
    return out


def _check_second_order(L: Expr):
    order = max(
        (a[2] for a in L.atoms() if a[1] == JET),
        default=0,
    )
    if order > 2:
        raise OrderOverflowError(f"restricted variational derivatives need order <= 2, got {order}")


def _jv(ctx: Context, dep: int, *dirs) -> JetVar:
    idx = [0] * ctx.p
    for d in dirs:
        idx[d] += 1
    return JetVar(dep, tuple(idx))


def restricted_delta_u(L: Expr, i, j, dep=0) -> Expr:
    """Variational derivative of ``L`` confined to the coordinate plane ``(i, j)``."""
    _check_second_order(L)
    ctx = L.ctx
    i, j, dep = ctx.indep_index(i), ctx.indep_index(j), ctx.dep_index(dep)
    D = total_derivative
    return (
        partial(L, _jv(ctx, dep))
        - D(partial(L, _jv(ctx, dep, i)), i)
        - D(partial(L, _jv(ctx, dep, j)), j)
        + D(D(partial(L, _jv(ctx, dep, i, i)), i), i)
        + D(D(partial(L, _jv(ctx, dep, i, j)), j), i)
        + D(D(partial(L, _jv(ctx, dep, j, j)), j), j)
    )


def restricted_delta_u_k(L: Expr, k, i, j, dep=0) -> Expr:
    """``dL/du_k - D_i dL/du_ik - D_j dL/du_jk``."""
    _check_second_order(L)
    ctx = L.ctx
    k, i, j = ctx.indep_index(k), ctx.indep_index(i), ctx.indep_index(j)
    dep = ctx.dep_index(dep)
    return (
        partial(L, _jv(ctx, dep, k))
        - total_derivative(partial(L, _jv(ctx, dep, i, k)), i)
        - total_derivative(partial(L, _jv(ctx, dep, j, k)), j)
    )


def restricted_delta_u_km(L: Expr, k, m, dep=0) -> Expr:
    # plain partial, exactly as displayed; no first-order correction for mixed indices
    ctx = L.ctx
    k, m, dep = ctx.indep_index(k), ctx.indep_index(m), ctx.dep_index(dep)
    return partial(L, _jv(ctx, dep, k, m))


__all__ = [
    "EvolutionaryField",
    "divergence",
    "euler_operator",
    "prolong_apply",
    "restricted_delta_u",
    "restricted_delta_u_k",
    "restricted_delta_u_km",
    "total_derivative",
    "total_derivative_multi",
]
