"""Exact reference solutions for tiny instances by enumeration.

Every polyhedron handled here is in standard form ``{M z = h, z >= 0}``:
the primal and dual feasible sets, their optimal faces, the lifted level-set
problems behind ``r_delta`` / ``R_eps``, and the normalized recession cones
``{M d = 0, e^T d = 1, d >= 0}``. Vertices are basic feasible solutions, so
one enumeration routine (compiled when available) serves them all.
"""

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from . import _backend
from .errors import AssumptionViolation, InfeasibleSet, InstanceTooLarge, UnboundedPrimal
from .numerics import StandardPolyhedron, null_space_basis, row_space_basis

MAX_N = 20
MAX_BASES = 200_000
DEDUP_TOL = 1e-9
PIVOT_TOL = 1e-10


def _check_size(n, r):
    if n > MAX_N or comb(n, r) > MAX_BASES:
        raise InstanceTooLarge(f"n={n}, rank={r}: {comb(n, r)} bases exceed the enumeration guard")


def dedupe_rows(Z, tol=DEDUP_TOL):
    """Remove near-duplicate rows; output sorted lexicographically."""
    if len(Z) == 0:
        return Z
    order = np.lexsort(Z.T[::-1])
    Z = Z[order]
    kept = []
    for z in Z:
        scale = tol * (1.0 + np.max(np.abs(z)))
        if not any(np.max(np.abs(z - k)) <= scale for k in kept):
            kept.append(z)
    return np.array(kept)


def basic_solutions(M, h):
    """All basic feasible solutions of ``{M z = h, z >= 0}`` (possibly none)."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    h = np.asarray(h, dtype=float).reshape(-1)
    n = M.shape[1]
    try:
        poly = StandardPolyhedron(M, h)
    except InfeasibleSet:
        return np.zeros((0, n))
    r = poly.M.shape[0]
    _check_size(n, r)
    if r == 0:
        return np.zeros((1, n))
    feas_tol = 1e-9 * (1.0 + np.linalg.norm(poly.h))
    raw = _backend.kernels.enumerate_bases(poly.M, poly.h, PIVOT_TOL, feas_tol)
    raw = np.maximum(raw, 0.0)
    # basis solves can be ill-conditioned; keep only points that really satisfy M z = h
    if len(raw):
        res = np.linalg.norm(raw @ poly.M.T - poly.h, axis=1)
        raw = raw[res <= 1e-8 * (1.0 + np.linalg.norm(raw, axis=1))]
    return dedupe_rows(raw)


def enumerate_vertices(A, b):
    """Vertices of ``{x : A x = b, x >= 0}``.

    Raises
    ------
    InfeasibleSet
        The polyhedron is empty.
    InstanceTooLarge
        Enumeration guard exceeded.
    """
    V = basic_solutions(A, b)
    if len(V) == 0:
        raise InfeasibleSet("polyhedron is empty")
    return V


def extreme_rays(M):
    """Unit extreme rays of ``{d : M d = 0, d >= 0}``."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    n = M.shape[1]
    aug = np.vstack([M, np.ones((1, n))])
    rhs = np.zeros(aug.shape[0])
    rhs[-1] = 1.0
    D = basic_solutions(aug, rhs)
    if len(D) == 0:
        return D
    return D / np.linalg.norm(D, axis=1, keepdims=True)


@dataclass(frozen=True)
class StandardLpSolution:
    value: float
    argmin: np.ndarray
    optimal_rays: np.ndarray
    vertices: np.ndarray
    rays: np.ndarray
    unbounded: bool


def solve_standard(M, h, w):
    """Minimize ``w^T z`` over ``{M z = h, z >= 0}`` by enumeration.

    Raises ``InfeasibleSet`` when the polyhedron is empty. An unbounded
    problem is reported through ``unbounded`` with ``value = -inf``.
    """
    w = np.asarray(w, dtype=float)
    V = basic_solutions(M, h)
    if len(V) == 0:
        raise InfeasibleSet("polyhedron is empty")
    R = extreme_rays(M)
    wn = np.linalg.norm(w)
    if len(R) and np.min(R @ w) < -1e-10 * (1.0 + wn):
        return StandardLpSolution(-np.inf, V[:0], R[:0], V, R, True)
    vals = V @ w
    best = float(np.min(vals))
    tol = 1e-9 * (1.0 + abs(best) + wn * np.max(np.linalg.norm(V, axis=1)))
    opt_v = V[vals <= best + tol]
    opt_r = R[np.abs(R @ w) <= 1e-10 * (1.0 + wn)] if len(R) else R
    return StandardLpSolution(best, opt_v, opt_r, V, R, False)


class FaceSet:
    """Optimal face of one side together with that side's full vertex/ray description."""

    def __init__(self, side, sol):
        self.side = side
        self.value = sol.value
        self.vertices = sol.argmin
        self.rays = sol.optimal_rays
        self.feasible_vertices = sol.vertices
        self.feasible_rays = sol.rays
        pts = np.vstack([self.vertices, self.rays]) if len(self.rays) else self.vertices
        scale = 1e-9 * (1.0 + np.max(np.abs(pts)))
        self.zero_set = np.all(np.abs(pts) <= scale, axis=0)

    @property
    def unique(self):
        return len(self.vertices) == 1 and len(self.rays) == 0

    @property
    def bounded(self):
        return len(self.rays) == 0

    @cached_property
    def _poly(self):
        free = ~self.zero_set
        return StandardPolyhedron(self.side.M[:, free], self.side.h)

    def project(self, z):
        z = np.asarray(z, dtype=float)
        if self.unique:
            return self.vertices[0].copy()
        free = ~self.zero_set
        out = np.zeros_like(z)
        out[free] = self._poly.project(z[free])[0]
        return out

    def distance(self, z):
        z = np.asarray(z, dtype=float)
        return float(np.linalg.norm(z - self.project(z)))

    def is_optimal(self, z, tol=1e-9):
        z = np.asarray(z, dtype=float)
        scale = 1.0 + np.linalg.norm(z)
        return bool(
            np.all(z >= -tol * scale)
            and self.side.on_affine(z, tol)
            and self.side.objective @ z <= self.value + tol * scale
        )


@dataclass(frozen=True, eq=False)
class OptimalFace:
    f_star: float
    primal: FaceSet
    dual: FaceSet

    @property
    def primal_vertices(self):
        return self.primal.vertices

    @property
    def dual_vertices(self):
        return self.dual.vertices

    @property
    def primal_unique(self):
        return self.primal.unique

    @property
    def dual_unique(self):
        return self.dual.unique

    @property
    def unbounded_dual_face(self):
        return not self.dual.bounded

    @property
    def unbounded_primal_face(self):
        return not self.primal.bounded

    def side(self, which):
        return {"primal": self.primal, "dual": self.dual}[which]


def _has_nonoptimal(face):
    w = face.side.objective
    if np.any(face.feasible_vertices @ w > face.value + 1e-9 * (1.0 + abs(face.value))):
        return True
    return bool(len(face.feasible_rays) and np.any(face.feasible_rays @ w > 1e-10 * (1.0 + np.linalg.norm(w))))


def solve_exact(pd):
    """Full primal and dual optimal faces of ``pd``.

    Raises
    ------
    UnboundedPrimal
        The primal objective is unbounded below on ``F_p``.
    AssumptionViolation
        Either side lacks a non-optimal feasible point.
    """
    psol = solve_standard(pd.primal.M, pd.primal.h, pd.primal.objective)
    if psol.unbounded:
        raise UnboundedPrimal("primal objective is unbounded below")
    dsol = solve_standard(pd.dual.M, pd.dual.h, pd.dual.objective)
    if dsol.unbounded:
        raise AssumptionViolation("dual objective is unbounded")
    f_star = psol.value
    if abs(dsol.value + f_star) > 1e-7 * (1.0 + abs(f_star)):
        raise AssumptionViolation(f"strong duality check failed: {f_star} vs {-dsol.value}")
    face = OptimalFace(f_star, FaceSet(pd.primal, psol), FaceSet(pd.dual, dsol))
    for fs in (face.primal, face.dual):
        if not _has_nonoptimal(fs):
            raise AssumptionViolation(f"{fs.side.name} has no non-optimal feasible solutions")
    return face


def cone_generators(basis, active):
    """Generators of ``{basis @ w : (basis @ w)[active] >= 0}`` as unit vectors.

    A lineality space contributes ``±`` its basis vectors; the pointed part
    contributes its extreme rays, found as the one-dimensional solutions of
    every rank-deficient subset of the active constraints.
    """
    basis = np.asarray(basis, dtype=float)
    k = basis.shape[1]
    G = basis[np.asarray(active, dtype=bool)]
    gens = []
    if G.shape[0] == 0:
        L = np.eye(k)
        W = np.zeros((k, 0))
    else:
        L = null_space_basis(G)
        W = row_space_basis(G)
    for col in L.T:
        d = basis @ col
        gens += [d, -d]
    kp = W.shape[1]
    if kp:
        G2 = G @ W
        tol = 1e-10 * (1.0 + np.max(np.abs(G2)))
        rows = range(G2.shape[0])
        for S in itertools.combinations(rows, kp - 1):
            sub = G2[list(S)]
            if kp - 1:
                N = null_space_basis(sub)
                if N.shape[1] != 1:
                    continue
                v = N[:, 0]
            else:
                v = np.ones(1)
            for sgn in (1.0, -1.0):
                g = sgn * (G2 @ v)
                if np.all(g >= -tol) and np.any(g > tol):
                    gens.append(basis @ (W @ (sgn * v)))
    if not gens:
        return np.zeros((0, basis.shape[0]))
    D = np.array(gens)
    D /= np.linalg.norm(D, axis=1, keepdims=True)
    return dedupe_rows(D)


def tangent_cone_generators(pd, x_star, side="primal"):
    """Unit generators of the feasible-direction cone of the chosen side at ``x_star``."""
    sd = pd.side(side)
    x_star = np.asarray(x_star, dtype=float)
    _check_size(sd.n, max(sd.basis.shape[1] - 1, 0))
    active = x_star <= 1e-9 * (1.0 + np.max(np.abs(x_star)))
    return cone_generators(sd.basis, active)


@dataclass(frozen=True)
class FaceGeometry:
    dist0_primal: float
    diam_primal: float
    dist0_dual: float
    diam_dual: float
    dist_c_dual: float
    max_norm_dual: float
    max_norm_primal: float


def _diameter(fs):
    if not fs.bounded:
        return np.inf
    V = fs.vertices
    if len(V) < 2:
        return 0.0
    diff = V[:, None, :] - V[None, :, :]
    return float(np.max(np.linalg.norm(diff, axis=2)))


def _max_norm(fs):
    if not fs.bounded:
        return np.inf
    return float(np.max(np.linalg.norm(fs.vertices, axis=1)))


def face_geometry(face, pd):
    zero = np.zeros(pd.n)
    return FaceGeometry(
        dist0_primal=face.primal.distance(zero),
        diam_primal=_diameter(face.primal),
        dist0_dual=face.dual.distance(zero),
        diam_dual=_diameter(face.dual),
        dist_c_dual=face.dual.distance(pd.c),
        max_norm_dual=_max_norm(face.dual),
        max_norm_primal=_max_norm(face.primal),
    )
