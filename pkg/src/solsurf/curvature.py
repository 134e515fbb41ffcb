"""Curvatures of a T1-invariant surface X(s, t) = (t, y(s), z(s)).

The generating curve is parametrized by arclength with angle function theta,
e^{-z} y' = cos(theta) and z' = sin(theta).  Every curvature of the surface
is a polynomial in cos(theta), sin(theta) and theta'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .kernel import COORD, FRAME, SolPoint, SolTangent, christoffel, coord_to_frame, metric_matrix


@dataclass(frozen=True)
class CurveState:
    """A point of the generating curve; derivatives (y', z', theta') are optional."""

    s: float
    y: float
    z: float
    theta: float
    derivatives: Optional[tuple[float, float, float]] = None

    def point(self, x: float = 0.0) -> SolPoint:
        return SolPoint(x, self.y, self.z)

    def speed_defect(self) -> float:
        if self.derivatives is None:
            return 0.0
        dy, dz, _ = self.derivatives
        return abs((math.exp(-self.z) * dy) ** 2 + dz ** 2 - 1.0)


@dataclass(frozen=True)
class FundamentalForms:
    E: float
    F: float
    G: float
    e: float
    f: float
    g: float

    def mean_curvature(self) -> float:
        return 0.5 * (self.E * self.g - 2 * self.F * self.f + self.G * self.e) / (self.E * self.G - self.F ** 2)

    def gauss_curvature(self) -> float:
        return (self.e * self.g - self.f ** 2) / (self.E * self.G - self.F ** 2)


@dataclass(frozen=True)
class CurvatureProfile:
    H: float
    K_ext: float
    K_int: float
    kappa1: float
    kappa2: float
    K_sec: float


def curvature_profile(theta: float, theta_prime: float) -> CurvatureProfile:
    c, s = math.cos(theta), math.sin(theta)
    kappa1 = theta_prime + c
    kappa2 = -c
    return CurvatureProfile(
        H=0.5 * theta_prime,
        K_ext=kappa1 * kappa2,
        K_int=-theta_prime * c - s * s,
        kappa1=kappa1,
        kappa2=kappa2,
        K_sec=c * c - s * s,
    )


def profile_arrays(theta: np.ndarray, theta_prime: np.ndarray) -> dict[str, np.ndarray]:
    """Vectorized curvature_profile; keys match the CurvatureProfile fields."""
    c, s = np.cos(theta), np.sin(theta)
    kappa1 = theta_prime + c
    return {
        "H": 0.5 * theta_prime,
        "K_ext": -c * kappa1,
        "K_int": -theta_prime * c - s * s,
        "kappa1": kappa1,
        "kappa2": -c,
        "K_sec": c * c - s * s,
    }


def fundamental_forms(state: CurveState, theta_prime: float) -> FundamentalForms:
    e2z = math.exp(2 * state.z)
    c = math.cos(state.theta)
    return FundamentalForms(E=1.0, F=0.0, G=e2z, e=theta_prime + c, f=0.0, g=-e2z * c)


def graph_curvatures(z: float, z_prime: float, z_double_prime: float) -> CurvatureProfile:
    """Curvatures of the surface generated by a graph z = z(y).

    Derivatives are with respect to y; the graph is traversed with y increasing.
    """
    ez = math.exp(z)
    w = math.sqrt(1.0 + z_prime ** 2 * ez ** 2)
    theta_prime = ez ** 2 * (z_double_prime + z_prime ** 2) / w ** 3
    sin_t = z_prime * ez / w
    cos_t = 1.0 / w
    kappa1 = theta_prime + cos_t
    return CurvatureProfile(
        H=0.5 * theta_prime,
        K_ext=-cos_t * kappa1,
        K_int=-theta_prime * cos_t - sin_t ** 2,
        kappa1=kappa1,
        kappa2=-cos_t,
        K_sec=cos_t ** 2 - sin_t ** 2,
    )


def normal_vector(state: CurveState) -> SolTangent:
    return SolTangent(state.point(), (0.0, -math.sin(state.theta), math.cos(state.theta)), FRAME)


def tangent_vectors(state: CurveState) -> tuple[SolTangent, SolTangent]:
    """X_s = cos(theta) E2 + sin(theta) E3 and X_t = e^z E1, in frame components."""
    p = state.point()
    e1 = SolTangent(p, (0.0, math.cos(state.theta), math.sin(state.theta)), FRAME)
    e2 = SolTangent(p, (math.exp(state.z), 0.0, 0.0), FRAME)
    return e1, e2


# Finite-difference oracle ------------------------------------------------------

def second_form_by_differences(position: Callable[[float], tuple[float, float]], s: float,
                               h: float = 1e-4) -> FundamentalForms:
    """First and second fundamental forms of X(s, t) = (t, y(s), z(s)) at t = 0.

    Only positions of the generating curve are used: tangents come from
    central differences, the normal from the frame cross product X_t x X_s,
    and the second form from the ambient covariant derivative
    nabla_{X_a} X_b = X_ab + Gamma(X_a, X_b).  Nothing here uses theta.
    """
    def surface(si: float, t: float) -> np.ndarray:
        y, z = position(si)
        return np.array([t, y, z])

    x0 = surface(s, 0.0)
    xs = (surface(s + h, 0.0) - surface(s - h, 0.0)) / (2 * h)
    xt = (surface(s, h) - surface(s, -h)) / (2 * h)
    xss = (surface(s + h, 0.0) - 2 * x0 + surface(s - h, 0.0)) / h ** 2
    xtt = (surface(s, h) - 2 * x0 + surface(s, -h)) / h ** 2
    xst = (surface(s + h, h) - surface(s + h, -h) - surface(s - h, h) + surface(s - h, -h)) / (4 * h * h)

    p = SolPoint(*x0)
    g = metric_matrix(p)
    gamma = christoffel(p)

    normal_frame = np.cross(coord_to_frame(p, xt), coord_to_frame(p, xs))
    normal_frame /= np.linalg.norm(normal_frame)
    normal = SolTangent(p, tuple(normal_frame), FRAME).coord_array()

    def second(a: np.ndarray, b: np.ndarray, ab: np.ndarray) -> float:
        return float(normal @ g @ (ab + np.einsum("kij,i,j->k", gamma, a, b)))

    return FundamentalForms(
        E=float(xs @ g @ xs), F=float(xs @ g @ xt), G=float(xt @ g @ xt),
        e=second(xs, xs, xss), f=second(xs, xt, xst), g=second(xt, xt, xtt),
    )


__all__ = [
    "COORD", "FRAME", "CurveState", "FundamentalForms", "CurvatureProfile",
    "curvature_profile", "profile_arrays", "fundamental_forms", "graph_curvatures",
    "normal_vector", "tangent_vectors", "second_form_by_differences",
]
