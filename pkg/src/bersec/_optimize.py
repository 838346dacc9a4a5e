"""One-dimensional search helpers shared by the bound and gap solvers."""
from math import sqrt

import numpy as np

INV_PHI = (sqrt(5.0) - 1.0) / 2.0


class UnimodalityError(RuntimeError):
    """The pre-scan found a better point than the bracketed search."""


def golden_max(f, lo, hi, tol=1e-9, max_iter=200):
    """Golden-section maximisation of a unimodal ``f`` on ``[lo, hi]``."""
    a, b = float(lo), float(hi)
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
    if f1 >= f2:
        return x1, f1
    return x2, f2


def scan_then_golden(f, lo, hi, n_grid=64, tol=1e-9, f_vec=None):
    """Maximise ``f`` on ``[lo, hi]``.

    A ``n_grid`` point pre-scan picks the bracket, golden-section refines it,
    and the interval endpoints win ties (plateaus resolve deterministically).
    ``f_vec`` evaluates the objective on an array and speeds up the scan.

    Returns ``(argmax, max)``.
    """
    grid = np.linspace(lo, hi, n_grid)
    if f_vec is not None:
        vals = np.asarray(f_vec(grid), dtype=float)
    else:
        vals = np.array([f(x) for x in grid])
    k = int(np.argmax(vals))
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, n_grid - 1)]
    x, fx = golden_max(f, a, b, tol=tol)

    candidates = [(x, fx), (grid[0], vals[0]), (grid[-1], vals[-1])]
    # endpoints first so that ties go to them
    best_x, best_f = candidates[1] if vals[0] >= vals[-1] else candidates[2]
    if fx > best_f:
        best_x, best_f = x, fx
    if best_f < vals[k] - 1e-12 * max(1.0, abs(vals[k])):
        raise UnimodalityError(
            f"pre-scan maximum {vals[k]!r} at {grid[k]!r} beats search result {best_f!r}")
    return float(best_x), float(best_f)


def bisect_predicate(pred, good, bad, tol, max_iter=400):
    """Boundary between ``good`` (``pred`` true) and ``bad`` (``pred`` false).

    The predicate must be monotone along the segment. Returns the last point
    known to satisfy ``pred``; works whether ``good < bad`` or ``good > bad``.
    """
    good, bad = float(good), float(bad)
    for _ in range(max_iter):
        if abs(bad - good) <= tol:
            break
        mid = 0.5 * (good + bad)
        if pred(mid):
            good = mid
        else:
            bad = mid
    return good
