"""Brute-force normal-equations least squares.

Deliberately independent of the production solver in :mod:`costtuner.cpumodel`
(which goes through ``numpy.linalg.lstsq``): the Gram matrix is accumulated
with explicit Python loops and the square system is solved by hand-written
Gaussian elimination.  Used to cross-check fits in tests and exposed through
``costtuner oracle lsq`` on the command line.
"""

from __future__ import annotations

from typing import Optional, Sequence


def gaussian_solve(matrix: Sequence[Sequence[float]], rhs: Sequence[float]) -> list[float]:
    """Solve a small dense square system with partial pivoting."""
    n = len(rhs)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(a[r][col]))
        if a[pivot][col] == 0.0:
            raise ValueError("singular system")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
        for row in range(col + 1, n):
            factor = a[row][col] / a[col][col]
            if factor == 0.0:
                continue
            for k in range(col, n + 1):
                a[row][k] -= factor * a[col][k]
    solution = [0.0] * n
    for row in range(n - 1, -1, -1):
        acc = a[row][n]
        for k in range(row + 1, n):
            acc -= a[row][k] * solution[k]
        solution[row] = acc / a[row][row]
    return solution


def normal_equations_solve(
    design: Sequence[Sequence[float]], target: Sequence[float]
) -> list[float]:
    """Least-squares coefficients via (X^T X) c = X^T y, built element by element."""
    if not design:
        raise ValueError("design matrix must have at least one row")
    n_rows = len(design)
    if len(target) != n_rows:
        raise ValueError("design and target lengths differ")
    n_cols = len(design[0])
    gram = [[0.0] * n_cols for _ in range(n_cols)]
    moment = [0.0] * n_cols
    for row, y in zip(design, target):
        if len(row) != n_cols:
            raise ValueError("ragged design matrix")
        for i in range(n_cols):
            moment[i] += row[i] * y
            for j in range(n_cols):
                gram[i][j] += row[i] * row[j]
    return gaussian_solve(gram, moment)


def fit_observation_rows(
    rows: Sequence[Sequence[float]], scale_factor: float = 1.0
) -> tuple[Optional[float], Optional[float], Optional[float]]:
    """Fit CPU cost parameters from raw observation rows.

    Each row is (n_tuples, n_operations, n_index_entries, disk_cost, exec_time);
    the regression target is exec_time * scale_factor - disk_cost.  Columns
    that are identically zero are dropped and reported as None.
    """
    if not rows:
        raise ValueError("no observation rows")
    active = [c for c in range(3) if any(row[c] != 0 for row in rows)]
    result: list[Optional[float]] = [None, None, None]
    if not active:
        return tuple(result)  # type: ignore[return-value]
    design = [[row[c] for c in active] for row in rows]
    target = [row[4] * scale_factor - row[3] for row in rows]
    solution = normal_equations_solve(design, target)
    for col, value in zip(active, solution):
        result[col] = value
    return tuple(result)  # type: ignore[return-value]
