"""Random expression generators shared by the property tests."""

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from plurilag import Context, Expr, parse_expr
from plurilag.jet import COS, JET, SIN, JetVar

CTX2 = Context(("x", "y"), ("u",))
CTX3 = Context(("x", "y", "z"), ("u",))
CTX_2DEP = Context(("x", "t"), ("u", "v"))

COEFFS = [Fraction(n, d) for n in range(-3, 4) if n for d in (1, 2, 3)]


def multi_indices(p, max_order):
    out = []
    for order in range(max_order + 1):
        for combo in itertools.combinations_with_replacement(range(p), order):
            idx = [0] * p
            for d in combo:
                idx[d] += 1
            out.append(tuple(idx))
    return out


def atoms(ctx, max_order=2, trig=True):
    out = [(dep, JET, sum(i), i) for dep in range(ctx.q) for i in multi_indices(ctx.p, max_order)]
    if trig:
        out += [(dep, kind) for dep in range(ctx.q) for kind in (SIN, COS)]
    return out


def random_expr(rng: random.Random, ctx, max_terms=3, max_order=2, max_power=2, max_factors=3, trig=True):
    pool = atoms(ctx, max_order, trig)
    e = Expr.zero(ctx)
    for _ in range(rng.randint(1, max_terms)):
        term = Expr.const(ctx, rng.choice(COEFFS))
        for _ in range(rng.randint(0, max_factors)):
            term = term * Expr.atom(ctx, rng.choice(pool)) ** rng.randint(1, max_power)
        e = e + term
    return e


def random_jetvar(rng, ctx, min_order=0, max_order=2):
    choices = [i for i in multi_indices(ctx.p, max_order) if sum(i) >= min_order]
    return JetVar(rng.randrange(ctx.q), rng.choice(choices))


def random_raw_terms(rng, ctx, max_terms=4):
    """A list of raw monomial trees (coefficient, factors) for normalize tests."""
    pool = atoms(ctx, 2, True)
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        factors = []
        for _ in range(rng.randint(0, 3)):
            a = rng.choice(pool)
            node = JetVar(a[0], a[3]) if a[1] == JET else ("sin" if a[1] == SIN else "cos", a[0])
            factors.append(("^", node, rng.randint(1, 3)))
        terms.append((rng.choice(COEFFS), factors))
    return terms


def assemble(rng, terms, shuffle=True):
    """Raw tree from monomial pieces, with random order and association."""
    terms = list(terms)
    if shuffle:
        rng.shuffle(terms)
    nodes = []
    for coeff, factors in terms:
        factors = list(factors)
        if shuffle:
            rng.shuffle(factors)
        parts = [coeff] + factors
        if shuffle:
            rng.shuffle(parts)
        nodes.append(_assoc(rng, "*", parts, shuffle))
    return _assoc(rng, "+", nodes, shuffle)


def _assoc(rng, op, items, shuffle):
    if len(items) == 1:
        return items[0]
    if not shuffle:
        return (op, *items)
    cut = rng.randint(1, len(items) - 1)
    return (op, _assoc(rng, op, items[:cut], shuffle), _assoc(rng, op, items[cut:], shuffle))


@st.composite
def exprs(draw, ctx=CTX3, max_terms=3, max_order=2, trig=True):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_expr(random.Random(seed), ctx, max_terms=max_terms, max_order=max_order, trig=trig)


def sine_gordon(ctx=CTX3):
    P = lambda s: parse_expr(s, ctx)  # noqa: E731
    data = {
        "L": P("1/2*u_x*u_y - cos(u)"),
        "phi": P("u_xxx + 1/2*u_x^3"),
        "M": P("1/2*(u_xxx + 1/2*u_x^3)*u_x - 1/8*u_x^4 + 1/2*u_xx^2"),
        "N": P("1/2*(u_xxx + 1/2*u_x^3)*u_y - 1/2*u_x^2*cos(u) - u_xx*(u_xy - sin(u))"),
        "Mz": P("1/2*u_x*u_z - 1/8*u_x^4 + 1/2*u_xx^2"),
        "Nz": P("1/2*u_y*u_z - 1/2*u_x^2*cos(u) - u_xx*(u_xy - sin(u))"),
    }
    return data
