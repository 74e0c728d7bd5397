import random

import pytest

from helpers import CTX2, CTX3, random_expr
from plurilag import Context, EvolutionaryField, Expr, restricted_delta_u
from plurilag.errors import DegreeOverflowError, OrderOverflowError, UnsupportedOperation
from plurilag.pluri import (
    LagrangianForm,
    classify_el_system,
    closure_residual,
    exterior_derivative,
    is_closed_on_solutions,
    multi_time_el,
    tag_label,
)
from plurilag.symmetry import check_variational_symmetry

CTX4 = Context(("x", "y", "z", "t"), ("u",))


@pytest.fixture
def form(sg, ctx):
    return LagrangianForm(ctx, 2, {("x", "y"): sg["L"], ("x", "z"): sg["Mz"], ("y", "z"): -sg["Nz"]})


@pytest.fixture
def targets(P):
    return [
        P("u_xy - sin(u)"),
        P("u_z - u_xxx - 1/2*u_x^3"),
        P("u_xz - 3/2*u_x^2*u_xx - u_xxxx"),
        P("u_yz - u_xx*cos(u) - 1/2*u_x^2*sin(u)"),
        P("u_xxy - u_x*cos(u)"),
    ]


def test_antisymmetric_access(form, sg):
    assert form["y", "x"] == -sg["L"]
    assert form[2, 0] == -sg["Mz"]
    assert form["x", "x"].is_zero()
    swapped = LagrangianForm(form.ctx, 2, {("y", "x"): -sg["L"], (0, 2): sg["Mz"], (2, 1): sg["Nz"]})
    assert swapped.coeffs == form.coeffs


def test_exterior_derivative_constant_coefficients(ctx, P):
    F = LagrangianForm(ctx, 1, {("x",): P("3"), ("y",): P("-1/2")})
    assert exterior_derivative(F).is_zero()
    G = LagrangianForm(ctx, 1, {("x",): P("u_y"), ("y",): P("u")})
    # d(u_y dx + u dy) = (D_x u - D_y u_y) dx^dy
    assert exterior_derivative(G)["x", "y"] == P("u_x - u_yy")


def test_exterior_derivative_of_sine_gordon_form(form, P):
    dF = exterior_derivative(form)
    assert dF.tuples() == [(0, 1, 2)]
    assert dF[0, 1, 2] == P("-(u_z - 1/2*u_x^3 - u_xxx)*(u_xy - sin(u))")


def test_closure(form, SG, MKDV, SG_MKDV):
    for S in (SG, MKDV, SG_MKDV):
        assert is_closed_on_solutions(form, S)
    entry = closure_residual(form, SG)[(0, 1, 2)]
    assert not entry.raw.is_zero() and entry.reduced.is_zero()


def test_zero_form_is_closed(ctx, SG):
    Z = LagrangianForm(ctx, 2, {})
    assert Z.is_zero()
    assert exterior_derivative(Z).is_zero()
    assert is_closed_on_solutions(Z, SG)


def test_d_squared_vanishes():
    rng = random.Random(29)
    for _ in range(25):
        F = LagrangianForm(CTX4, 1, {(i,): random_expr(rng, CTX4, max_terms=2) for i in range(4)})
        assert exterior_derivative(exterior_derivative(F)).is_zero()
        G = LagrangianForm(CTX4, 2, {J: random_expr(rng, CTX4, max_terms=2) for J in [(0, 1), (0, 3), (1, 2)]})
        assert exterior_derivative(exterior_derivative(G)).is_zero()


def test_degree_limits(ctx, form):
    with pytest.raises(DegreeOverflowError):
        exterior_derivative(exterior_derivative(form))
    with pytest.raises(DegreeOverflowError):
        LagrangianForm(ctx, 4, {})
    with pytest.raises(ValueError):
        LagrangianForm(ctx, 2, {("x",): Expr.zero(ctx)})


def test_el_system_size(form):
    E = multi_time_el(form)
    assert len(E) == 19
    assert E.counts() == {"pluri1": 3, "pluri2": 3, "pluri3": 3, "pluri4": 3, "pluri5": 6, "pluri6": 1}


def test_el_system_matches_targets(form, targets):
    found = [e.expr for e in multi_time_el(form).nontrivial()]
    assert len(found) == 6
    for e in found:
        assert e in targets or -e in targets
    for t in targets:
        assert t in found or -t in found


def test_classification(form, SG, SG_MKDV):
    E = multi_time_el(form)
    full = classify_el_system(E, SG_MKDV)
    assert full.counts == {"total": 19, "trivial": 13, "reducible": 6, "independent": 0}
    # without the mKdV flow the equations involving u_z stay independent
    partial_ = classify_el_system(E, SG)
    assert partial_.counts["independent"] == 3
    assert all(any(v.idx[2] for v in e.expr.jet_vars()) for e in partial_.independent)


def test_zero_form_gives_trivial_system(ctx):
    E = multi_time_el(LagrangianForm(ctx, 2, {}))
    assert len(E) == 19 and not E.nontrivial()


def test_single_plane_restricts_to_euler(ctx):
    rng = random.Random(31)
    for _ in range(20):
        f = random_expr(rng, CTX2, max_terms=3, max_order=2)
        lifted = _lift(f)
        E = multi_time_el(LagrangianForm(ctx, 2, {("x", "y"): lifted}))
        by_tag = {e.tag: e.expr for e in E.equations}
        assert by_tag[("pluri1", 0, 1)] == restricted_delta_u(lifted, 0, 1)
        assert by_tag[("pluri1", 0, 2)].is_zero() and by_tag[("pluri1", 1, 2)].is_zero()


def _lift(f):
    out = Expr.zero(CTX3)
    for key, c in f.terms:
        term = Expr.const(CTX3, c)
        for atom, p in key:
            if len(atom) == 4:
                atom = (atom[0], atom[1], atom[2], atom[3] + (0,))
            term = term * Expr.atom(CTX3, atom) ** p
        out = out + term
    return out


def test_coherence_with_symmetry_residual(sg, form, ctx):
    # with phi = u_z and (N, M) in their u_z form the symmetry residual is the dF coefficient
    V = EvolutionaryField((ctx.jet(0, "z"),))
    cert = check_variational_symmetry(sg["L"], V, [sg["Nz"], sg["Mz"], Expr.zero(ctx)])
    assert cert.residual == exterior_derivative(form)[0, 1, 2]


def test_el_input_errors(ctx, P):
    with pytest.raises(OrderOverflowError):
        multi_time_el(LagrangianForm(ctx, 2, {("x", "y"): P("u_xxx^2")}))
    with pytest.raises(UnsupportedOperation):
        multi_time_el(LagrangianForm(ctx, 1, {("x",): P("u_x")}))


def test_tag_label(ctx):
    assert tag_label(ctx, ("pluri4", 2, 0, 1)) == "pluri4(z,x,y)"
