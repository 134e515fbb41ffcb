"""Ambient geometry of Sol: metric, group law, isometries, frame and connection.

Sol is R^3 with the left-invariant metric e^{2z}dx^2 + e^{-2z}dy^2 + dz^2.
Tangent vectors carry a basis tag so that callers can work in coordinate
components (d/dx, d/dy, d/dz) or in the orthonormal frame

    E1 = e^{-z} d/dx,  E2 = e^{z} d/dy,  E3 = d/dz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

Basis = Literal["frame", "coord"]

FRAME: Basis = "frame"
COORD: Basis = "coord"


class SolDomainError(ValueError):
    """Raised for geometrically meaningless input (mismatched bases, degenerate planes)."""


@dataclass(frozen=True)
class SolPoint:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
            raise SolDomainError(f"non-finite coordinates {self.as_tuple()}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=float)


@dataclass(frozen=True)
class SolTangent:
    base: SolPoint
    components: tuple[float, float, float]
    basis: Basis = FRAME

    def __post_init__(self):
        if self.basis not in (FRAME, COORD):
            raise SolDomainError(f"unknown basis tag {self.basis!r}")
        object.__setattr__(self, "components", tuple(float(c) for c in self.components))

    def to_coord(self) -> SolTangent:
        if self.basis == COORD:
            return self
        return SolTangent(self.base, tuple(frame_to_coord(self.base, self.components)), COORD)

    def to_frame(self) -> SolTangent:
        if self.basis == FRAME:
            return self
        return SolTangent(self.base, tuple(coord_to_frame(self.base, self.components)), FRAME)

    def coord_array(self) -> np.ndarray:
        return np.array(self.to_coord().components)

    def frame_array(self) -> np.ndarray:
        return np.array(self.to_frame().components)


def frame_to_coord(p: SolPoint, comps) -> np.ndarray:
    a, b, c = comps
    return np.array([math.exp(-p.z) * a, math.exp(p.z) * b, c])


def coord_to_frame(p: SolPoint, comps) -> np.ndarray:
    a, b, c = comps
    return np.array([math.exp(p.z) * a, math.exp(-p.z) * b, c])


def frame_vector(p: SolPoint, i: int) -> SolTangent:
    """E_i at p (i = 1, 2, 3) in frame components."""
    comps = [0.0, 0.0, 0.0]
    comps[i - 1] = 1.0
    return SolTangent(p, tuple(comps), FRAME)


def metric_matrix(p: SolPoint) -> np.ndarray:
    return np.diag([math.exp(2 * p.z), math.exp(-2 * p.z), 1.0])


def _same_base(*vectors: SolTangent) -> SolPoint:
    base = vectors[0].base
    for v in vectors[1:]:
        if v.base != base:
            raise SolDomainError(f"tangent vectors based at {base} and {v.base}")
    return base


def metric_at(p: SolPoint, u: SolTangent, v: SolTangent) -> float:
    if _same_base(u, v) != p:
        raise SolDomainError(f"vectors based at {u.base}, evaluated at {p}")
    if u.basis == FRAME and v.basis == FRAME:
        return float(np.dot(u.components, v.components))
    uc, vc = u.coord_array(), v.coord_array()
    return float(math.exp(2 * p.z) * uc[0] * vc[0] + math.exp(-2 * p.z) * uc[1] * vc[1] + uc[2] * vc[2])


def norm(v: SolTangent) -> float:
    return math.sqrt(metric_at(v.base, v, v))


def group_mul(p: SolPoint, q: SolPoint) -> SolPoint:
    return SolPoint(p.x + math.exp(-p.z) * q.x, p.y + math.exp(p.z) * q.y, p.z + q.z)


def group_inv(p: SolPoint) -> SolPoint:
    return SolPoint(-math.exp(p.z) * p.x, -math.exp(-p.z) * p.y, -p.z)


def left_translation_differential(p: SolPoint) -> np.ndarray:
    """Jacobian of q -> p * q in coordinates (independent of q)."""
    return np.diag([math.exp(-p.z), math.exp(p.z), 1.0])


ISOMETRY_KINDS = ("T1", "T2", "T3")


def isometry(kind: str, c: float, p: SolPoint) -> SolPoint:
    if kind == "T1":
        return SolPoint(p.x + c, p.y, p.z)
    if kind == "T2":
        return SolPoint(p.x, p.y + c, p.z)
    if kind == "T3":
        return SolPoint(math.exp(-c) * p.x, math.exp(c) * p.y, p.z + c)
    raise SolDomainError(f"unknown isometry kind {kind!r}; expected one of {ISOMETRY_KINDS}")


def isometry_differential(kind: str, c: float) -> np.ndarray:
    """Coordinate Jacobian of T_{kind,c}; the maps are affine so this is constant."""
    if kind in ("T1", "T2"):
        return np.eye(3)
    if kind == "T3":
        return np.diag([math.exp(-c), math.exp(c), 1.0])
    raise SolDomainError(f"unknown isometry kind {kind!r}; expected one of {ISOMETRY_KINDS}")


def push_forward(kind: str, c: float, v: SolTangent) -> SolTangent:
    image = isometry(kind, c, v.base)
    comps = isometry_differential(kind, c) @ v.coord_array()
    return SolTangent(image, tuple(comps), COORD)


# Connection ------------------------------------------------------------------

def christoffel(p: SolPoint) -> np.ndarray:
    """Coordinate Christoffel symbols, indexed gamma[k, i, j] = Gamma^k_{ij}.

    Only g_xx = e^{2z} and g_yy = e^{-2z} vary, and only with z, so the
    nonzero symbols are Gamma^x_{xz}, Gamma^y_{yz}, Gamma^z_{xx}, Gamma^z_{yy}.
    """
    gamma = np.zeros((3, 3, 3))
    gamma[0, 0, 2] = gamma[0, 2, 0] = 1.0
    gamma[1, 1, 2] = gamma[1, 2, 1] = -1.0
    gamma[2, 0, 0] = -math.exp(2 * p.z)
    gamma[2, 1, 1] = math.exp(-2 * p.z)
    return gamma


def christoffel_from_metric(p: SolPoint, h: float = 1e-5) -> np.ndarray:
    """Christoffel symbols from central differences of the metric (test oracle)."""
    g_inv = np.linalg.inv(metric_matrix(p))
    dg = np.zeros((3, 3, 3))  # dg[l, i, j] = d_l g_ij
    for l in range(3):
        step = np.zeros(3)
        step[l] = h
        plus = SolPoint(*(p.as_array() + step))
        minus = SolPoint(*(p.as_array() - step))
        dg[l] = (metric_matrix(plus) - metric_matrix(minus)) / (2 * h)
    # lowered[l, i, j] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    lowered = 0.5 * (np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg)
    return np.einsum("kl,lij->kij", g_inv, lowered)


def christoffel_derivative(p: SolPoint) -> np.ndarray:
    """d_l Gamma^k_{ij}, indexed dgamma[l, k, i, j]; only z-derivatives survive."""
    dgamma = np.zeros((3, 3, 3, 3))
    dgamma[2, 2, 0, 0] = -2 * math.exp(2 * p.z)
    dgamma[2, 2, 1, 1] = -2 * math.exp(-2 * p.z)
    return dgamma


def covariant_derivative(p: SolPoint, u: np.ndarray, field: np.ndarray, jacobian: np.ndarray,
                         gamma: np.ndarray | None = None) -> np.ndarray:
    """(nabla_u V)(p) in coordinates, given V(p) and its coordinate Jacobian dV^k/dx^l."""
    if gamma is None:
        gamma = christoffel(p)
    return jacobian @ u + np.einsum("kij,i,j->k", gamma, u, field)


def _frame_field(p: SolPoint, j: int) -> tuple[np.ndarray, np.ndarray]:
    """Coordinate components of E_j at p and their Jacobian."""
    ez = math.exp(p.z)
    field = np.zeros(3)
    jac = np.zeros((3, 3))
    if j == 1:
        field[0] = 1 / ez
        jac[0, 2] = -1 / ez
    elif j == 2:
        field[1] = ez
        jac[1, 2] = ez
    else:
        field[2] = 1.0
    return field, jac


def connection_from_christoffel(p: SolPoint, gamma: np.ndarray | None = None) -> np.ndarray:
    """Frame components of nabla_{E_i} E_j assembled from coordinate Christoffels.

    Returns an array table[i-1, j-1] of frame triples.
    """
    if gamma is None:
        gamma = christoffel(p)
    table = np.zeros((3, 3, 3))
    for i in range(1, 4):
        u, _ = _frame_field(p, i)
        for j in range(1, 4):
            field, jac = _frame_field(p, j)
            table[i - 1, j - 1] = coord_to_frame(p, covariant_derivative(p, u, field, jac, gamma))
    return table


@dataclass(frozen=True)
class FrameConnectionTable:
    """nabla_{E_i} E_j in frame components; coefficients[i-1][j-1] is a triple."""

    coefficients: np.ndarray

    @classmethod
    def sol(cls) -> FrameConnectionTable:
        c = np.zeros((3, 3, 3))
        c[0, 0] = (0, 0, -1)  # nabla_E1 E1 = -E3
        c[0, 2] = (1, 0, 0)   # nabla_E1 E3 = E1
        c[1, 1] = (0, 0, 1)   # nabla_E2 E2 = E3
        c[1, 2] = (0, -1, 0)  # nabla_E2 E3 = -E2
        return cls(c)

    def entry(self, i: int, j: int) -> np.ndarray:
        return self.coefficients[i - 1, j - 1]

    def compatibility_defect(self) -> float:
        """max |<nabla_i E_j, E_k> + <E_j, nabla_i E_k>| over i, j, k."""
        c = self.coefficients
        return float(np.max(np.abs(c + c.transpose(0, 2, 1))))

    def max_deviation(self, other: np.ndarray) -> tuple[float, tuple[int, int]]:
        """Largest entrywise deviation from another table and the 1-based (i, j) where it occurs."""
        err = np.max(np.abs(self.coefficients - other), axis=2)
        i, j = np.unravel_index(np.argmax(err), err.shape)
        return float(err[i, j]), (int(i) + 1, int(j) + 1)


# Curvature -------------------------------------------------------------------

def riemann(p: SolPoint) -> np.ndarray:
    """R^l_{ijk} with R(d_i, d_j) d_k = R^l_{ijk} d_l.

    Convention R(u,v)w = nabla_u nabla_v w - nabla_v nabla_u w - nabla_[u,v] w.
    """
    g = christoffel(p)
    dg = christoffel_derivative(p)
    # d_i Gamma^l_{jk} - d_j Gamma^l_{ik} + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
    r = (np.einsum("iljk->lijk", dg) - np.einsum("jlik->lijk", dg)
         + np.einsum("lim,mjk->lijk", g, g) - np.einsum("ljm,mik->lijk", g, g))
    return r


def curvature_operator(p: SolPoint, u: SolTangent, v: SolTangent, w: SolTangent) -> SolTangent:
    """R(u, v) w as a coordinate tangent vector."""
    _same_base(u, v, w)
    r = riemann(p)
    comps = np.einsum("lijk,i,j,k->l", r, u.coord_array(), v.coord_array(), w.coord_array())
    return SolTangent(p, tuple(comps), COORD)


def sectional_curvature(p: SolPoint, u: SolTangent, v: SolTangent, eps: float = 1e-12) -> float:
    if _same_base(u, v) != p:
        raise SolDomainError(f"vectors based at {u.base}, evaluated at {p}")
    area2 = metric_at(p, u, u) * metric_at(p, v, v) - metric_at(p, u, v) ** 2
    scale = metric_at(p, u, u) * metric_at(p, v, v)
    if area2 <= eps * max(scale, 1.0):
        raise SolDomainError("degenerate plane: u and v are (nearly) parallel")
    ruvv = curvature_operator(p, u, v, v)
    return metric_at(p, ruvv, u) / area2
