"""Independent reference computations used only by the tests."""

import itertools
import math

import mpmath
import numpy as np


def simplex_projection(x, radius):
    """Projection onto ``{z >= 0, sum z = radius}`` by the sort-and-threshold rule."""
    u = np.sort(x)[::-1]
    css = np.cumsum(u) - radius
    k = np.arange(1, x.size + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    return np.maximum(x - css[rho] / (rho + 1), 0.0)


def mesh_projection(x, vertices, levels=(60, 30, 30, 30)):
    """Brute-force nearest point of ``conv(vertices)`` over barycentric meshes, zooming in."""
    V = np.asarray(vertices, dtype=float)
    k = len(V)
    centre = np.full(k, 1.0 / k)
    width = 1.0
    best_w, best_d = centre, math.inf
    for steps in levels:
        grid = np.linspace(-width, width, steps + 1)
        for w in itertools.product(grid, repeat=k - 1):
            lam = centre[: k - 1] + np.array(w)
            lam = np.append(lam, 1.0 - lam.sum())
            if np.any(lam < 0):
                continue
            d = np.linalg.norm(lam @ V - x)
            if d < best_d:
                best_d, best_w = d, lam
        centre = best_w
        width *= 4.0 / steps
    return best_w @ V, best_d


def mp_singular_extremes(A, tol=1e-20):
    """Nonzero singular values from eigenvalues of ``A A^T`` in 50-digit arithmetic."""
    mpmath.mp.dps = 50
    M = mpmath.matrix(A.tolist())
    G = M * M.T
    evals = mpmath.eigsy(G, eigvals_only=True)
    vals = sorted((mpmath.sqrt(max(e, 0)) for e in evals), reverse=True)
    top = vals[0]
    nz = [v for v in vals if v > top * mpmath.mpf(10) ** -12]
    return float(nz[0]), float(nz[-1])


def grid_max_min_coordinate(c, f_star, delta, radius=math.sqrt(3.0), steps=400):
    """``max min_i x_i`` over the simplex slice ``{c^T x <= f* + delta}`` on a barycentric grid."""
    best = 0.0
    for i in range(steps + 1):
        for j in range(steps + 1 - i):
            x = radius * np.array([i, j, steps - i - j]) / steps
            if c @ x <= f_star + delta:
                best = max(best, x.min())
    return best


def affine_mesh_projection(x, A, b, vertices, points=41, levels=12, shrink=4.0):
    """Brute-force nearest point of ``{A z = b, z >= 0}`` on zooming grids in its affine coordinates.

    The polytope is parametrized as ``p0 + N t`` with ``N`` an orthonormal
    null-space basis (dimension 2 or 3 here); each level evaluates a full
    grid over a box, keeps the best feasible point and shrinks the box
    around it.
    """
    A = np.asarray(A, dtype=float)
    _, s, Vt = np.linalg.svd(A)
    N = Vt[int(np.sum(s > 1e-10 * s[0])):].T
    V = np.asarray(vertices, dtype=float)
    p0 = V.mean(axis=0)
    T = (V - p0) @ N
    centre = np.zeros(N.shape[1])
    half = np.max(np.abs(T), axis=0) * 1.05 + 1e-12
    best_z, best_d = p0, np.linalg.norm(x - p0)
    for _ in range(levels):
        axes = [np.linspace(c - h, c + h, points) for c, h in zip(centre, half)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, N.shape[1])
        Z = p0 + grid @ N.T
        feas = np.all(Z >= 0, axis=1)
        if not feas.any():
            break
        d = np.linalg.norm(Z[feas] - x, axis=1)
        i = int(np.argmin(d))
        if d[i] < best_d:
            best_d, best_z = d[i], Z[feas][i]
        centre = (best_z - p0) @ N
        half = half * 2.0 / (points - 1) * shrink
    return best_z, best_d
