"""Reduce every jet variable up to a given order under all rule priorities."""

import argparse
import itertools

from plurilag import Context, EquationSystem, Expr, check_confluence_samples, parse_expr


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=6)
    args = ap.parse_args(argv)

    ctx = Context(("x", "y", "z"), ("u",))
    P = lambda s: parse_expr(s, ctx)  # noqa: E731
    S = EquationSystem.of((P("u_xy"), P("sin(u)")), (P("u_z"), P("u_xxx + 1/2*u_x^3")))
    samples = []
    for order in range(args.max_order + 1):
        for combo in itertools.combinations_with_replacement(range(ctx.p), order):
            samples.append(Expr.jet(ctx, 0, tuple(combo.count(i) for i in range(ctx.p))))
    report = check_confluence_samples(S, samples)
    print(f"{len(samples)} jet variables, {sum(report.agree)} agree under both priorities")
    if not report.all_agree:
        for sample, ok in zip(samples, report.agree):
            if not ok:
                print("  disagreement at", sample)


if __name__ == "__main__":
    main()
