"""Shared independent oracles for the test suite.

These deliberately avoid the library's own computational paths: the TV
operator is assembled densely column by column, the scalar prox oracle is a
grid search plus ternary refinement, and orthogonal samples come from QR.
"""

import numpy as np


def dense_tv_operator(dims, mu):
    """Dense matrix of M -> mu * (I + D*D) M acting on F-order vec(M)."""
    n = dims[0] * dims[1] * dims[2]

    def apply_op(m):
        h = np.roll(m, -1, axis=0) - m
        v = np.roll(m, -1, axis=1) - m
        t = np.roll(m, -1, axis=2) - m
        adj = (
            np.roll(h, 1, axis=0) - h
            + np.roll(v, 1, axis=1) - v
            + np.roll(t, 1, axis=2) - t
        )
        return mu * (m + adj)

    cols = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        cols.append(apply_op(e.reshape(dims, order="F")).ravel(order="F"))
    return np.stack(cols, axis=1)


def prox_objective(x, s, c):
    return c * np.log1p(x * x) + 0.5 * (x - s) ** 2


def grid_prox_oracle(s, c, points=4097, refine=200):
    """Grid search over [0, s] plus ternary refinement around the best cell."""
    if s == 0.0:
        return 0.0
    grid = np.linspace(0.0, s, points)
    vals = prox_objective(grid, s, c)
    i = int(vals.argmin())
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, points - 1)]
    for _ in range(refine):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if prox_objective(m1, s, c) < prox_objective(m2, s, c):
            hi = m2
        else:
            lo = m1
    x = 0.5 * (lo + hi)
    # The grid basin may miss the boundary minimum at 0 when two local
    # minima compete; keep whichever wins.
    return 0.0 if prox_objective(0.0, s, c) < prox_objective(x, s, c) else x


def random_orthogonal(rng, n, batch=None):
    shape = (n, n) if batch is None else (batch, n, n)
    q, r = np.linalg.qr(rng.standard_normal(shape))
    # Fix signs so the distribution does not collapse onto a QR artifact.
    d = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    d = np.where(d == 0, 1.0, d)
    return q * d[..., None, :]
