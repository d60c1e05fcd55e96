"""Exact zero-sum matrix game solver (rational simplex).

Solves max_p min_j (p^T A)_j over row distributions p using the classic
reduction to a packing LP: after shifting A positive, ``max 1'w subject to
A w <= 1, w >= 0`` has optimum 1/v, and the optimal row strategy falls out
of the dual values on the slack columns.  Everything is Fraction
arithmetic, so the value and strategy are exact; Bland's rule guarantees
termination.  Sized for desk-scale games (hundreds of rows/columns).
"""

from __future__ import annotations

from fractions import Fraction


def matrix_game_value(
    matrix: list[list[int | Fraction]],
) -> tuple[Fraction, list[Fraction]]:
    """Value and one optimal row-player mixed strategy of a matrix game.

    The row player maximizes; entries may be any rationals.
    """
    rows = len(matrix)
    if rows == 0:
        raise ValueError("game needs at least one row")
    cols = len(matrix[0])
    if cols == 0 or any(len(r) != cols for r in matrix):
        raise ValueError("game matrix must be rectangular and nonempty")

    shift = 1 - min(Fraction(v) for row in matrix for v in row)
    a = [[Fraction(v) + shift for v in row] for row in matrix]

    # Tableau: columns 0..cols-1 are the packing variables, cols..cols+rows-1
    # slacks, last column the right-hand side.  Objective row holds z_j - c_j.
    width = cols + rows
    tableau = [a[i] + [Fraction(int(i == j)) for j in range(rows)] + [Fraction(1)] for i in range(rows)]
    obj = [Fraction(-1)] * cols + [Fraction(0)] * rows + [Fraction(0)]
    basis = [cols + i for i in range(rows)]

    while True:
        entering = next((j for j in range(width) if obj[j] < 0), None)
        if entering is None:
            break
        leaving = None
        best_ratio = None
        for i in range(rows):
            coeff = tableau[i][entering]
            if coeff <= 0:
                continue
            ratio = tableau[i][width] / coeff
            if (
                best_ratio is None
                or ratio < best_ratio
                or (ratio == best_ratio and basis[i] < basis[leaving])
            ):
                best_ratio = ratio
                leaving = i
        if leaving is None:
            raise RuntimeError("unbounded packing LP; game matrix was not shifted positive")
        _pivot(tableau, obj, leaving, entering)
        basis[leaving] = entering

    total = obj[width]  # optimum of the packing LP = 1/shifted value
    if total <= 0:
        raise RuntimeError("degenerate packing optimum; shift failed")
    value = 1 / total - shift
    strategy = [obj[cols + i] / total for i in range(rows)]
    return value, strategy


def _pivot(tableau, obj, leaving: int, entering: int) -> None:
    row = tableau[leaving]
    pivot = row[entering]
    tableau[leaving] = [v / pivot for v in row]
    row = tableau[leaving]
    for i, other in enumerate(tableau):
        if i == leaving or other[entering] == 0:
            continue
        factor = other[entering]
        tableau[i] = [v - factor * r for v, r in zip(other, row)]
    factor = obj[entering]
    if factor != 0:
        for j, r in enumerate(row):
            obj[j] -= factor * r
