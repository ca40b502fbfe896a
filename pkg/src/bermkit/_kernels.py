"""Numba coordinate-descent kernels.

All arithmetic here is strictly sequential scalar code — no BLAS calls —
so results are bit-identical across thread counts, worker pools, and BLAS
builds.  ``X`` must be Fortran-ordered so the inner loops walk columns
contiguously; the public wrappers in :mod:`bermkit.solver` enforce that.

Two interchangeable routes solve the same subproblem:

* the *naive* route (``enet_path``) maintains the length-n residual
  r = y − Xβ, so one coordinate update costs O(n);
* the *Gram* route (``enet_path_gram``) maintains the gradient vector
  g = X'y/n − (X'X/n) β, so one coordinate update costs O(p) after a
  one-time O(n·p²) pass building the Gram matrix.

The Gram route wins when p ≤ n (the build amortizes over a warm-started
λ path); the naive route wins in the high-dimensional regime.  The two
agree to solver tolerance, not bit-for-bit — the test suite cross-checks
them against each other.

Infinite penalty weights are implemented as exclusion: excluded
coordinates are never touched, so their coefficients stay exactly 0.0
bit-for-bit (never "a large finite penalty").
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _sweep(X, r, beta, cj, lam, alpha, w, excluded, active_only):
    """One pass of cyclic coordinate updates; returns max |Δbeta_j|.

    ``r`` must hold the current residual y - X @ beta and is kept in sync.
    With ``active_only`` the pass visits only currently-nonzero coordinates.
    """
    n, p = X.shape
    l1 = lam * alpha
    l2 = lam * (1.0 - alpha)
    maxd = 0.0
    for j in range(p):
        if excluded[j]:
            continue
        bj = beta[j]
        if active_only and bj == 0.0:
            continue
        dot = 0.0
        for i in range(n):
            dot += X[i, j] * r[i]
        rho = dot / n + cj[j] * bj
        margin = abs(rho) - l1 * w[j]
        if margin > 0.0:
            bnew = margin / (cj[j] + l2 * w[j])
            if rho < 0.0:
                bnew = -bnew
        else:
            bnew = 0.0
        if bnew != bj:
            diff = bj - bnew
            for i in range(n):
                r[i] += X[i, j] * diff
            beta[j] = bnew
            d = abs(diff)
            if d > maxd:
                maxd = d
    return maxd


@njit(cache=True, nogil=True)
def _cd_solve(X, y, beta, cj, lam, alpha, w, excluded, tol, max_sweeps):
    """Solve one penalty level in place; active-set cycling between full sweeps.

    Convergence is declared only when a *full* sweep moves every coordinate
    by less than ``tol``.  Returns (sweeps_used, last_max_delta, converged).
    """
    n, p = X.shape
    # rebuild the residual from scratch: kills accumulated drift between
    # warm-started path points
    r = np.empty(n)
    for i in range(n):
        r[i] = y[i]
    for j in range(p):
        bj = beta[j]
        if bj != 0.0:
            for i in range(n):
                r[i] -= X[i, j] * bj
    sweeps = 0
    maxd = tol + 1.0
    while sweeps < max_sweeps:
        maxd = _sweep(X, r, beta, cj, lam, alpha, w, excluded, False)
        sweeps += 1
        if maxd < tol:
            return sweeps, maxd, True
        while sweeps < max_sweeps:
            maxd = _sweep(X, r, beta, cj, lam, alpha, w, excluded, True)
            sweeps += 1
            if maxd < tol:
                break
    return sweeps, maxd, False


@njit(cache=True, nogil=True)
def enet_path(X, y, lams, alpha, w, excluded, tol, max_sweeps, beta0):
    """Fit a descending λ path with warm starts.

    Each path point gets a fresh ``max_sweeps`` budget.  Returns
    (betas, sweeps, deltas, converged) with one row/entry per λ.
    """
    n, p = X.shape
    nl = lams.shape[0]
    betas = np.zeros((nl, p))
    sweeps_arr = np.zeros(nl, dtype=np.int64)
    deltas = np.zeros(nl)
    conv = np.zeros(nl, dtype=np.bool_)
    beta = beta0.copy()
    cj = np.empty(p)
    for j in range(p):
        s = 0.0
        for i in range(n):
            s += X[i, j] * X[i, j]
        cj[j] = s / n
    for li in range(nl):
        sw, d, ok = _cd_solve(
            X, y, beta, cj, lams[li], alpha, w, excluded, tol, max_sweeps
        )
        for j in range(p):
            betas[li, j] = beta[j]
        sweeps_arr[li] = sw
        deltas[li] = d
        conv[li] = ok
    return betas, sweeps_arr, deltas, conv


@njit(cache=True, nogil=True)
def gram_stats(X, y):
    """Sequentially built Gram statistics: G = X'X/n, b = X'y/n.

    Upper triangle computed column-by-column and mirrored, so the result
    is exactly symmetric and independent of BLAS.
    """
    n, p = X.shape
    G = np.empty((p, p))
    b = np.empty(p)
    for j in range(p):
        s = 0.0
        for i in range(n):
            s += X[i, j] * y[i]
        b[j] = s / n
        for k in range(j, p):
            s = 0.0
            for i in range(n):
                s += X[i, j] * X[i, k]
            G[j, k] = s / n
            G[k, j] = G[j, k]
    return G, b


@njit(cache=True, nogil=True)
def _sweep_gram(G, g, beta, lam, alpha, w, excluded, active_only):
    """One cyclic pass in gradient form; returns max |Δbeta_j|.

    ``g`` must hold b − Gβ for the current beta and is kept in sync.  The
    update for coordinate j reads ρ_j = g_j + G_jj β_j, identical algebra
    to the residual-form sweep (ρ_j = x_jᵀr/n + c_j β_j) since
    g_j = x_jᵀ(y − Xβ)/n.
    """
    p = beta.shape[0]
    l1 = lam * alpha
    l2 = lam * (1.0 - alpha)
    maxd = 0.0
    for j in range(p):
        if excluded[j]:
            continue
        bj = beta[j]
        if active_only and bj == 0.0:
            continue
        rho = g[j] + G[j, j] * bj
        margin = abs(rho) - l1 * w[j]
        if margin > 0.0:
            bnew = margin / (G[j, j] + l2 * w[j])
            if rho < 0.0:
                bnew = -bnew
        else:
            bnew = 0.0
        if bnew != bj:
            diff = bj - bnew
            # G is symmetric; walk row j (contiguous) instead of column j
            for k in range(p):
                g[k] += G[j, k] * diff
            beta[j] = bnew
            d = abs(diff)
            if d > maxd:
                maxd = d
    return maxd


@njit(cache=True, nogil=True)
def _cd_solve_gram(G, b, beta, lam, alpha, w, excluded, tol, max_sweeps):
    """Gram-form twin of ``_cd_solve``: one penalty level, in place.

    The gradient g = b − Gβ is rebuilt from scratch per call (kills drift
    between warm-started path points), then the same full-sweep /
    active-set cycling as the residual form.
    """
    p = beta.shape[0]
    g = np.empty(p)
    for k in range(p):
        g[k] = b[k]
    for j in range(p):
        bj = beta[j]
        if bj != 0.0:
            for k in range(p):
                g[k] -= G[j, k] * bj
    sweeps = 0
    maxd = tol + 1.0
    while sweeps < max_sweeps:
        maxd = _sweep_gram(G, g, beta, lam, alpha, w, excluded, False)
        sweeps += 1
        if maxd < tol:
            return sweeps, maxd, True
        while sweeps < max_sweeps:
            maxd = _sweep_gram(G, g, beta, lam, alpha, w, excluded, True)
            sweeps += 1
            if maxd < tol:
                break
    return sweeps, maxd, False


@njit(cache=True, nogil=True)
def enet_path_gram(G, b, lams, alpha, w, excluded, tol, max_sweeps, beta0):
    """Warm-started descending λ path on precomputed Gram statistics.

    Same contract as ``enet_path`` but takes (G, b) from ``gram_stats``
    instead of (X, y).
    """
    p = b.shape[0]
    nl = lams.shape[0]
    betas = np.zeros((nl, p))
    sweeps_arr = np.zeros(nl, dtype=np.int64)
    deltas = np.zeros(nl)
    conv = np.zeros(nl, dtype=np.bool_)
    beta = beta0.copy()
    for li in range(nl):
        sw, d, ok = _cd_solve_gram(
            G, b, beta, lams[li], alpha, w, excluded, tol, max_sweeps
        )
        for j in range(p):
            betas[li, j] = beta[j]
        sweeps_arr[li] = sw
        deltas[li] = d
        conv[li] = ok
    return betas, sweeps_arr, deltas, conv
