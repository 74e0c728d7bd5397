"""Sparse Gaussian elimination over the rationals.

Rows are dicts ``{column: Fraction}``; the right-hand side is kept separately.
Free columns are set to zero in the returned particular solution.
"""

from __future__ import annotations

from fractions import Fraction


def solve_sparse(rows, rhs):
    """Return a particular solution ``{column: value}`` or ``None`` if inconsistent."""
    pivots: dict = {}  # column -> (row, rhs) with row[column] == 1
    order: list = []
    for row, b in zip(rows, rhs):
        row = {c: Fraction(v) for c, v in row.items() if v}
        b = Fraction(b)
        # eliminate known pivots until none remain in the row
        while True:
            hit = next((c for c in row if c in pivots), None)
            if hit is None:
                break
            f = row[hit]
            prow, pb = pivots[hit]
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            b -= f * pb
        if not row:
            if b:
                return None
            continue
        col = min(row, key=lambda c: (len(str(row[c])), c))
        inv = 1 / row[col]
        row = {c: v * inv for c, v in row.items()}
        pivots[col] = (row, b * inv)
        order.append(col)
    solution: dict = {}
    for col in reversed(order):
        prow, pb = pivots[col]
        val = pb - sum(v * solution.get(c, 0) for c, v in prow.items() if c != col)
        if val:
            solution[col] = val
        else:
            solution[col] = Fraction(0)
    return {c: v for c, v in solution.items() if v}
