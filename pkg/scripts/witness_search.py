"""Recover divergence witnesses for D_phi L of sine-Gordon and compare ansatz sizes."""

import argparse
import time

from plurilag import Context, EvolutionaryField, Expr, divergence, parse_expr, prolong_apply
from plurilag.errors import SearchFailure
from plurilag.symmetry import Ansatz, find_divergence_witnesses


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--max-degree", type=int, default=4)
    ap.add_argument("--no-trig", action="store_true")
    args = ap.parse_args(argv)

    ctx = Context(("x", "y", "z"), ("u",))
    P = lambda s: parse_expr(s, ctx)  # noqa: E731
    L = P("1/2*u_x*u_y - cos(u)")
    target = prolong_apply(EvolutionaryField((P("u_xxx + 1/2*u_x^3"),)), L)
    known = [
        P("1/2*(u_xxx + 1/2*u_x^3)*u_y - 1/2*u_x^2*cos(u) - u_xx*(u_xy - sin(u))"),
        P("1/2*(u_xxx + 1/2*u_x^3)*u_x - 1/8*u_x^4 + 1/2*u_xx^2"),
        Expr.zero(ctx),
    ]
    print("target:", target)
    for order in args.max_order:
        ansatz = Ansatz(max_order=order, max_degree=args.max_degree, allow_trig=not args.no_trig)
        t0 = time.perf_counter()
        try:
            M = find_divergence_witnesses(target, ansatz)
        except SearchFailure as exc:
            print(f"{ansatz}: {exc} ({time.perf_counter() - t0:.2f}s)")
            continue
        print(f"{ansatz}: found ({time.perf_counter() - t0:.2f}s)")
        for name, m in zip(ctx.indep, M):
            print(f"  M_{name} = {m}")
        gauge = divergence([a - b for a, b in zip(M, known)])
        print("  differs from the known witnesses by a null divergence:", gauge.is_zero())


if __name__ == "__main__":
    main()
