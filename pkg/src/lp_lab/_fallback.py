"""Pure-Python (numpy) implementations of the compiled kernels.

These define the reference semantics; ``_kernels.pyx`` is a loop-level
transcription of the same arithmetic.
"""

import itertools

import numpy as np

_CHUNK = 4096


def enumerate_bases(M, h, pivot_tol, feas_tol):
    """Solutions of every nonsingular ``r x r`` column subsystem of ``M z = h`` with ``z >= -feas_tol``.

    ``M`` must have full row rank ``r``. Rows are returned undeduplicated,
    in lexicographic order of the column subsets.
    """
    M = np.asarray(M, dtype=float)
    h = np.asarray(h, dtype=float)
    r, n = M.shape
    scale = np.max(np.abs(M)) if M.size else 0.0
    combos = itertools.combinations(range(n), r)
    rows = []
    while True:
        chunk = np.array(list(itertools.islice(combos, _CHUNK)), dtype=np.intp)
        if chunk.size == 0:
            break
        B = M[:, chunk].transpose(1, 0, 2)
        # partial pivoting rejects when no pivot exceeds tol; approximate with the
        # smallest singular value, which shrinks at least as fast
        s = np.linalg.svd(B, compute_uv=False)
        ok = s[:, -1] > pivot_tol * scale
        if not np.any(ok):
            continue
        sol = np.linalg.solve(B[ok], np.broadcast_to(h, (int(ok.sum()), r))[..., None])[..., 0]
        feas = np.all(sol >= -feas_tol, axis=1)
        for cols, zs in zip(chunk[ok][feas], sol[feas]):
            z = np.zeros(n)
            z[cols] = zs
            rows.append(z)
    if rows:
        return np.array(rows)
    return np.zeros((0, n))


def _step(A, b, c, tau, sigma, x, y):
    xn = np.maximum(x - tau * (c - A.T @ y), 0.0)
    yn = y + sigma * (b - A @ (2.0 * xn - x))
    return xn, yn


def fixed_point_residual(A, b, c, tau, sigma, x, y):
    xp, yp = _step(A, b, c, tau, sigma, x, y)
    dx = x - xp
    dy = y - yp
    val = dx @ dx / tau + dy @ dy / sigma - 2.0 * dy @ (A @ dx)
    return float(np.sqrt(max(val, 0.0)))


def pdhg_advance(A, b, c, tau, sigma, beta, growth, x, y, sx, sy, istate, fstate, n_steps,
                 cur_x, cur_y, avg_x, avg_y, restarted):
    """Advance restarted PDHG by ``n_steps`` iterations, mutating the state in place.

    Each step performs one PDHG update, folds it into the epoch average, and
    restarts from the average when its fixed-point residual has fallen to
    ``beta`` times the epoch-start value, or when the epoch has run
    ``growth`` times as long as the previous one.
    """
    k, prev_len, total = (int(v) for v in istate)
    rho0 = float(fstate[0])
    for step in range(n_steps):
        xn, yn = _step(A, b, c, tau, sigma, x, y)
        k += 1
        total += 1
        sx += xn
        sy += yn
        xa = sx / k
        ya = sy / k
        cur_x[step] = xn
        cur_y[step] = yn
        avg_x[step] = xa
        avg_y[step] = ya
        rho = fixed_point_residual(A, b, c, tau, sigma, xa, ya)
        if rho <= beta * rho0 or (prev_len > 0 and k >= growth * prev_len):
            x[:] = xa
            y[:] = ya
            sx[:] = 0.0
            sy[:] = 0.0
            rho0 = rho
            prev_len = k
            k = 0
            restarted[step] = 1
        else:
            x[:] = xn
            y[:] = yn
            restarted[step] = 0
    istate[:] = (k, prev_len, total)
    fstate[0] = rho0
