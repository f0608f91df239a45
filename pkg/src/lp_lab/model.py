"""LP data model and the symmetric primal-dual reformulation.

A standard-form instance ``min c_raw^T x  s.t.  A x = b, x >= 0`` is recast as
the pair

    (P)  min  c^T x   over  F_p = (q + null(A))  ∩ R^n_+
    (D)  min  q^T s   over  F_d = (c + row(A)) ∩ R^n_+

where ``c`` is the projection of ``c_raw`` onto ``null(A)`` and ``q`` is the
minimum-norm solution of ``A x = b``. Both halves have the same shape, so
most of the package works on a :class:`Side` and never branches on which
half it was handed.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import AssumptionViolation
from .numerics import (
    _svd_split,
    as_matrix,
    min_norm_affine_point,
    singular_extremes,
    SingularExtremes,
)


@dataclass(frozen=True, eq=False)
class LpInstance:
    A: np.ndarray
    b: np.ndarray
    c_raw: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A)
        b = np.asarray(self.b, dtype=float).reshape(-1)
        c = np.asarray(self.c_raw, dtype=float).reshape(-1)
        if A.shape != (b.size, c.size):
            raise ValueError(f"shape mismatch: A is {A.shape}, b has {b.size}, c has {c.size}")
        if not (np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
            raise ValueError("b and c must be finite")
        for name, arr in (("A", A), ("b", b), ("c_raw", c)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]

    def __eq__(self, other):
        if not isinstance(other, LpInstance):
            return NotImplemented
        return (
            self.A.shape == other.A.shape
            and np.array_equal(self.A, other.A)
            and np.array_equal(self.b, other.b)
            and np.array_equal(self.c_raw, other.c_raw)
        )


@dataclass(frozen=True, eq=False)
class Side:
    """One half of the symmetric pair: ``min objective^T z`` over ``{M z = h, z >= 0}``.

    ``M`` has orthonormal rows spanning the complement of ``basis``; the
    affine set is ``anchor + span(basis)`` and ``anchor`` is its
    minimum-norm point.
    """

    name: str
    M: np.ndarray
    h: np.ndarray
    objective: np.ndarray
    anchor: np.ndarray
    basis: np.ndarray

    @property
    def n(self):
        return self.objective.size

    @property
    def objective_norm(self):
        """``Dist(0, V)`` of the *other* side, i.e. ``||c||`` for the primal."""
        return float(np.linalg.norm(self.objective))

    @property
    def anchor_norm(self):
        """``Dist(0, V)`` of this side."""
        return float(np.linalg.norm(self.anchor))

    def on_affine(self, z, tol=1e-9):
        z = np.asarray(z, dtype=float)
        return bool(np.linalg.norm(self.M @ z - self.h) <= tol * (1.0 + np.linalg.norm(z)))

    def project_subspace(self, v):
        return self.basis @ (self.basis.T @ np.asarray(v, dtype=float))


@dataclass(frozen=True, eq=False)
class SymmetricPd:
    instance: LpInstance
    c: np.ndarray
    q: np.ndarray
    primal: Side
    dual: Side
    extremes: SingularExtremes = field(repr=False)

    @property
    def n(self):
        return self.instance.n

    @property
    def dist0_vp(self):
        return float(np.linalg.norm(self.q))

    @property
    def dist0_vd(self):
        return float(np.linalg.norm(self.c))

    @property
    def lambda_max(self):
        return self.extremes.sigma_max_plus

    @property
    def lambda_min(self):
        return self.extremes.sigma_min_plus

    @property
    def kappa(self):
        return self.extremes.kappa

    def side(self, which):
        if which == "primal":
            return self.primal
        if which == "dual":
            return self.dual
        raise ValueError(f"side must be 'primal' or 'dual', got {which!r}")

    def other(self, which):
        return self.dual if self.side(which) is self.primal else self.primal


@dataclass(frozen=True)
class PrimalDualPair:
    x: np.ndarray
    y: np.ndarray
    s: np.ndarray

    @classmethod
    def from_multiplier(cls, pd, x, y):
        y = np.asarray(y, dtype=float)
        return cls(np.asarray(x, dtype=float), y, pd.c - pd.instance.A.T @ y)


def build_symmetric_pd(inst):
    """Project the objective, locate ``q``, and validate the nondegeneracy part of the assumption.

    Raises
    ------
    InfeasibleAffine
        ``A x = b`` is inconsistent.
    AssumptionViolation
        The projected objective or ``q`` vanishes, in which case one side has
        no non-optimal feasible point.
    """
    A = inst.A
    q = min_norm_affine_point(A, inst.b)
    _, _, Vr, _, Z = _svd_split(A)
    c = inst.c_raw - Vr @ (Vr.T @ inst.c_raw)
    scale = 1.0 + np.linalg.norm(inst.c_raw)
    if Z.shape[1] == 0:
        raise AssumptionViolation("V_p is a single point: no non-optimal primal feasible solutions")
    if np.linalg.norm(c) <= 1e-12 * scale:
        raise AssumptionViolation("projected objective is zero: dual has no non-optimal feasible solutions")
    if np.linalg.norm(q) <= 1e-12 * (1.0 + np.linalg.norm(inst.b)):
        raise AssumptionViolation("b = 0: primal has no non-optimal feasible solutions")
    # snap tiny cross terms so c ⊥ row(A) and q ⊥ null(A) hold to rounding
    c = Z @ (Z.T @ c)
    q = Vr @ (Vr.T @ q)
    extremes = singular_extremes(A)
    primal = Side("primal", np.ascontiguousarray(Vr.T), Vr.T @ q, c, q, Z)
    dual = Side("dual", np.ascontiguousarray(Z.T), Z.T @ c, q, c, Vr)
    for arr in (c, q):
        arr.setflags(write=False)
    return SymmetricPd(inst, c, q, primal, dual, extremes)


def duality_gap(pd, x, s):
    """``c^T x + q^T s``."""
    return float(pd.c @ np.asarray(x, dtype=float) + pd.q @ np.asarray(s, dtype=float))


def dist_to_orthant(x):
    """Euclidean norm of the negative part of ``x``."""
    return float(np.linalg.norm(np.minimum(np.asarray(x, dtype=float), 0.0)))
