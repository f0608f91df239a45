"""Dense desk-scale linear algebra and small convex subproblems.

Everything here works on plain ``numpy`` arrays. Instances are tiny
(``n, m <= 50``), so SVD-based reductions are used freely.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EvaluationError, InfeasibleAffine, InfeasibleSet, NoNonzeroSingularValue

#: singular values below ``RANK_RTOL * sigma_max`` count as zero
RANK_RTOL = 1e-10
#: KKT acceptance for polyhedral projection, scaled by ``1 + ||x||``
KKT_TOL = 1e-9

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SingularExtremes:
    sigma_max_plus: float
    sigma_min_plus: float

    @property
    def kappa(self):
        return self.sigma_max_plus / self.sigma_min_plus


def as_matrix(A):
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def _svd_split(A):
    """Return ``(U_r, s_r, V_r, U_perp, V_perp)`` with the numerical rank cutoff applied."""
    A = as_matrix(A)
    m, n = A.shape
    U, s, Vt = np.linalg.svd(A, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        r = 0
    else:
        r = int(np.sum(s > RANK_RTOL * s[0]))
    return U[:, :r], s[:r], Vt[:r].T, U[:, r:], Vt[r:].T


def singular_extremes(A):
    """Largest and smallest nonzero singular values of ``A``."""
    _, s, _, _, _ = _svd_split(A)
    if s.size == 0:
        raise NoNonzeroSingularValue("matrix has no nonzero singular value")
    return SingularExtremes(float(s[0]), float(s[-1]))


def row_space_basis(A):
    """Orthonormal basis (as columns) of the row space of ``A``."""
    return _svd_split(A)[2]


def null_space_basis(A):
    """Orthonormal basis (as columns) of the null space of ``A``."""
    return _svd_split(A)[4]


def min_norm_affine_point(A, b):
    """Minimum-norm solution of ``A x = b``.

    Raises
    ------
    InfeasibleAffine
        If the system is inconsistent.
    """
    A = as_matrix(A)
    b = np.asarray(b, dtype=float).reshape(-1)
    Ur, s, Vr, Up, _ = _svd_split(A)
    if Up.size and np.linalg.norm(Up.T @ b) > 1e-9 * (1.0 + np.linalg.norm(b)):
        raise InfeasibleAffine("A x = b has no solution")
    return Vr @ ((Ur.T @ b) / s)


def project_null_space(A, v):
    """Orthogonal projection of ``v`` onto ``null(A)``."""
    Vr = row_space_basis(A)
    v = np.asarray(v, dtype=float)
    return v - Vr @ (Vr.T @ v)


class StandardPolyhedron:
    """The set ``{z : M z = h, z >= 0}`` with rows reduced to an orthonormal basis.

    Construction fails with ``InfeasibleSet`` when the affine part is empty.
    """

    def __init__(self, M, h):
        M = np.asarray(M, dtype=float)
        h = np.asarray(h, dtype=float).reshape(-1)
        if M.ndim != 2:
            M = M.reshape(h.size, -1)
        self.n = M.shape[1]
        if M.shape[0] == 0 or not np.any(M):
            if np.any(np.abs(h) > 1e-12):
                raise InfeasibleSet("inconsistent equality system")
            self.M = np.zeros((0, self.n))
            self.h = np.zeros(0)
            return
        Ur, s, Vr, Up, _ = _svd_split(M)
        if Up.size and np.linalg.norm(Up.T @ h) > 1e-9 * (1.0 + np.linalg.norm(h)):
            raise InfeasibleSet("inconsistent equality system")
        self.M = np.ascontiguousarray(Vr.T)
        self.h = (Ur.T @ h) / s

    def shifted(self, offset):
        """The polyhedron ``{u >= 0 : M (u + offset) = h}`` sharing this reduction."""
        out = object.__new__(StandardPolyhedron)
        out.n = self.n
        out.M = self.M
        out.h = self.h - self.M @ np.asarray(offset, dtype=float)
        return out

    def project(self, x):
        """Euclidean projection of ``x``; returns ``(point, dist)``."""
        x = np.asarray(x, dtype=float)
        z = _project_orthonormal(x, self.M, self.h)
        return z, float(np.linalg.norm(x - z))

    def contains(self, z, tol=1e-9):
        z = np.asarray(z, dtype=float)
        scale = 1.0 + np.linalg.norm(z)
        return bool(np.all(z >= -tol * scale) and np.linalg.norm(self.M @ z - self.h) <= tol * scale)


def project_polyhedron(x, A, b):
    """Project ``x`` onto ``{z : A z = b, z >= 0}``.

    Returns
    -------
    point : ndarray
    dist : float
        ``||x - point||``.
    """
    return StandardPolyhedron(A, b).project(x)


def _kkt_residual(x, z, M, h, lam):
    nu = z - x - M.T @ lam
    return max(
        float(np.linalg.norm(M @ z - h)) if M.size else 0.0,
        float(np.max(-np.minimum(nu, 0.0), initial=0.0)),
        float(np.max(np.abs(nu * z), initial=0.0)),
        float(np.max(-np.minimum(z, 0.0), initial=0.0)),
    )


def _polish(x, M, h, z):
    """Exact equality-constrained projection on the support of ``z``.

    Returns ``(z, lam)`` or ``None`` when the support guess fails the KKT sign tests.
    """
    P = z > 0
    MP = M[:, P]
    if not np.any(P):
        if np.linalg.norm(h) > 1e-12:
            return None
        return np.zeros_like(x), np.zeros(M.shape[0])
    G = MP @ MP.T
    lam = np.linalg.lstsq(G, h - MP @ x[P], rcond=None)[0]
    zp = x[P] + MP.T @ lam
    scale = 1.0 + np.linalg.norm(x)
    if np.any(zp < -1e-13 * scale):
        return None
    out = np.zeros_like(x)
    out[P] = np.maximum(zp, 0.0)
    nu_n = -(x[~P] + M[:, ~P].T @ lam)
    if np.any(nu_n < -1e-11 * scale):
        return None
    return out, lam


def _project_orthonormal(x, M, h, max_iter=200):
    if M.shape[0] == 0:
        return np.maximum(x, 0.0)
    r = M.shape[0]
    scale = 1.0 + np.linalg.norm(x)
    lam = h - M @ x
    z = np.maximum(x + M.T @ lam, 0.0)
    converged = False
    for _ in range(max_iter):
        v = x + M.T @ lam
        z = np.maximum(v, 0.0)
        g = M @ z - h
        gn = np.linalg.norm(g)
        if gn <= 1e-13 * scale:
            converged = True
            break
        Ma = M[:, v > 0]
        H = Ma @ Ma.T
        H[np.diag_indices(r)] += min(1e-2, gn) * 1e-6 + 1e-14
        d = np.linalg.solve(H, -g)
        phi0 = 0.5 * z @ z - lam @ h
        slope = g @ d
        t = 1.0
        while True:
            lam_new = lam + t * d
            z_new = np.maximum(x + M.T @ lam_new, 0.0)
            phi = 0.5 * z_new @ z_new - lam_new @ h
            if phi <= phi0 + 1e-4 * t * slope or t < 1e-30:
                break
            t *= 0.5
        if t < 1e-30:
            break
        lam = lam_new
        if np.linalg.norm(lam) > 1e12 * scale:
            raise InfeasibleSet("projection dual diverged; polyhedron is empty")
        # support settled: finish with an exact solve
        pol = _polish(x, M, h, np.maximum(x + M.T @ lam, 0.0))
        if pol is not None and np.linalg.norm(M @ pol[0] - h) <= 1e-12 * scale:
            z, lam = pol
            converged = True
            break
    if converged:
        pol = _polish(x, M, h, z)
        if pol is not None:
            zp, lp = pol
            if _kkt_residual(x, zp, M, h, lp) <= _kkt_residual(x, z, M, h, lam):
                z, lam = zp, lp
    if _kkt_residual(x, z, M, h, lam) <= KKT_TOL * scale:
        return z
    return _dykstra(x, M, h, z)


def _dykstra(x, M, h, z0, iters=20000):
    """Alternating-projection fallback; checks emptiness if it stalls."""
    z = z0.copy()
    y = x.copy()
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    for _ in range(iters):
        w = y + p
        aff = w - M.T @ (M @ w - h)
        p = w - aff
        u = aff + q
        y = np.maximum(u, 0.0)
        q = u - y
        if np.linalg.norm(M @ y - h) < 1e-11 * (1.0 + np.linalg.norm(x)):
            z = y
            break
    else:
        if np.linalg.norm(M @ y - h) > 1e-6 * (1.0 + np.linalg.norm(x)):
            raise InfeasibleSet("projection failed to reach the polyhedron")
        z = y
    return z


def minimize_scalar_quasiconvex(f, lo, hi, iters=60):
    """Golden-section search for a quasiconvex ``f`` on ``[lo, hi]``.

    Both endpoints are evaluated, so monotone functions return their boundary
    minimum exactly.

    Returns
    -------
    (argmin, min)
    """
    if not lo < hi:
        raise ValueError("need lo < hi")

    best = [None, np.inf]

    def ev(t):
        v = float(f(t))
        if not np.isfinite(v):
            raise EvaluationError(f"objective not finite at {t!r}")
        if v < best[1]:
            best[0], best[1] = t, v
        return v

    ev(lo)
    ev(hi)
    a, b = lo, hi
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = ev(x1), ev(x2)
    for _ in range(iters):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = ev(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = ev(x2)
    return best[0], best[1]
