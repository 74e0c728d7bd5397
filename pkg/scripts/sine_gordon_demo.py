"""Walk through the sine-Gordon / mKdV identities and print each result."""

from plurilag import Context, EquationSystem, EvolutionaryField, Expr, euler_operator, parse_expr, reduce
from plurilag.pluri import LagrangianForm, classify_el_system, exterior_derivative, multi_time_el, tag_label
from plurilag.symmetry import check_variational_symmetry, conservation_law

ctx = Context(("x", "y", "z"), ("u",))


def P(text):
    return parse_expr(text, ctx)


def main():
    L = P("1/2*u_x*u_y - cos(u)")
    phi = P("u_xxx + 1/2*u_x^3")
    M = P("1/2*(u_xxx + 1/2*u_x^3)*u_x - 1/8*u_x^4 + 1/2*u_xx^2")
    N = P("1/2*(u_xxx + 1/2*u_x^3)*u_y - 1/2*u_x^2*cos(u) - u_xx*(u_xy - sin(u))")
    Mz = P("1/2*u_x*u_z - 1/8*u_x^4 + 1/2*u_xx^2")
    Nz = P("1/2*u_y*u_z - 1/2*u_x^2*cos(u) - u_xx*(u_xy - sin(u))")
    zero = Expr.zero(ctx)
    V = EvolutionaryField((phi,))
    SG = EquationSystem.of((P("u_xy"), P("sin(u)")))
    both = EquationSystem.of((P("u_xy"), P("sin(u)")), (P("u_z"), phi))

    print("E(L)              =", euler_operator(L))
    print("D_phi L - div M   =", check_variational_symmetry(L, V, [N, M, zero]).residual)
    F = conservation_law(L, V, [N, M, zero])
    for name, flux in zip(ctx.indep, F):
        print(f"flux {name}            =", flux)

    form = LagrangianForm(ctx, 2, {("x", "y"): L, ("x", "z"): Mz, ("y", "z"): -Nz})
    dF = exterior_derivative(form)[0, 1, 2]
    print("dF                =", dF)
    print("dF mod SG         =", reduce(dF, SG))

    E = multi_time_el(form)
    print(f"EL system: {len(E)} equations {E.counts()}")
    report = classify_el_system(E, both)
    for eq in report.reducible:
        print(f"  {tag_label(ctx, eq.tag):18} {eq.expr}")
    print("independent modulo SG, mKdV:", len(report.independent))
    print("u_yz reduces to  ", reduce(P("u_yz"), both))


if __name__ == "__main__":
    main()
