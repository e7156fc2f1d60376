"""Exact rational simplex for small polytope-membership problems.

Maximizes c.y subject to A y <= b, y >= 0 with b >= 0, so the slack
basis is feasible from the start and no phase-one is needed.  Bland's
rule guarantees termination.  Everything is Fraction arithmetic.
"""

from __future__ import annotations

from fractions import Fraction

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"


def simplex_maximize(a_rows, b, c):
    """Solve max c.y s.t. a_rows y <= b, y >= 0 (all rationals, b >= 0).

    Returns (status, value, y) with y the optimal point on OPTIMAL and
    (UNBOUNDED, None, None) when the objective is unbounded.
    """
    m = len(a_rows)
    n = len(c)
    a = [[Fraction(v) for v in row] for row in a_rows]
    b = [Fraction(v) for v in b]
    c = [Fraction(v) for v in c]
    if any(bv < 0 for bv in b):
        raise ValueError("requires b >= 0")
    if any(len(row) != n for row in a):
        raise ValueError("ragged constraint matrix")

    # tableau: m rows of [A | I | rhs]; objective z - c.y = 0
    width = n + m + 1
    tab = [a[i] + [Fraction(int(i == j)) for j in range(m)] + [b[i]]
           for i in range(m)]
    obj = [-cv for cv in c] + [Fraction(0)] * (m + 1)
    basis = [n + i for i in range(m)]

    while True:
        entering = next((j for j in range(n + m) if obj[j] < 0), None)
        if entering is None:
            break
        best = None
        for i in range(m):
            if tab[i][entering] > 0:
                ratio = tab[i][width - 1] / tab[i][entering]
                if best is None or ratio < best[0] or \
                        (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED, None, None
        _, pivot_row = best
        _pivot(tab, obj, basis, pivot_row, entering, width)

    y = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            y[var] = tab[i][width - 1]
    return OPTIMAL, obj[width - 1], y


def _pivot(tab, obj, basis, row, col, width):
    factor = tab[row][col]
    tab[row] = [v / factor for v in tab[row]]
    for i in range(len(tab)):
        if i != row and tab[i][col] != 0:
            f = tab[i][col]
            tab[i] = [v - f * p for v, p in zip(tab[i], tab[row])]
    if obj[col] != 0:
        f = obj[col]
        for j in range(width):
            obj[j] -= f * tab[row][j]
    basis[row] = col
