"""Deterministic text rendering of canonical expressions.

The output is accepted by :func:`plurilag.parser.parse_expr`, and parsing it
back gives the same canonical :class:`~plurilag.jet.Expr`.
"""

from __future__ import annotations

from fractions import Fraction

from .jet import JET, SIN, Context, Expr


def jet_name(ctx: Context, dep: int, idx) -> str:
    base = ctx.dep[dep]
    if not any(idx):
        return base
    if all(len(n) == 1 for n in ctx.indep):
        return base + "_" + "".join(ctx.indep[j] * n for j, n in enumerate(idx))
    return f"{base}[{','.join(str(n) for n in idx)}]"


def atom_name(ctx: Context, atom) -> str:
    if atom[1] == JET:
        return jet_name(ctx, atom[0], atom[3])
    fn = "sin" if atom[1] == SIN else "cos"
    return f"{fn}({ctx.dep[atom[0]]})"


def _display_key(atom):
    # graded order with the first independent variable leading: u_x before u_y
    if atom[1] == JET:
        return (atom[0], 0, atom[2], tuple(-c for c in atom[3]))
    return (atom[0], atom[1])


def _term_key(item):
    key, _ = item
    return (sum(p for _, p in key), sorted((_display_key(a), p) for a, p in key))


def _monomial(ctx: Context, key, coeff: Fraction) -> tuple[str, str]:
    sign = "-" if coeff < 0 else "+"
    mag = abs(coeff)
    factors = sorted(key, key=lambda ap: _display_key(ap[0]))
    parts = [atom_name(ctx, a) + (f"^{p}" if p > 1 else "") for a, p in factors]
    if mag != 1 or not parts:
        parts.insert(0, str(mag))
    return sign, "*".join(parts)


def print_expr(e: Expr) -> str:
    if e.is_zero():
        return "0"
    chunks = []
    for i, (key, coeff) in enumerate(sorted(e.terms, key=_term_key)):
        sign, body = _monomial(e.ctx, key, coeff)
        if i == 0:
            chunks.append(body if sign == "+" else "-" + body)
        else:
            chunks.append(f" {sign} {body}")
    return "".join(chunks)
