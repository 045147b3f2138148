"""Metric geometry of unit-norm systems, projective points, great-circle
interpolation and the canonical unitary taking e_0 to a given point.

Unit-norm systems are plain PolySystem values with norm 1 (validated at
API boundaries, not on every call); projective points carry a unit
representative and all derived quantities are phase invariant.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import AntipodalEndpoints
from .systems import PolySystem, weyl_inner

# Degenerate-angle thresholds, about 1000x binary64 epsilon.
PARALLEL_TOL = 1e-9
ANTIPODAL_TOL = 1e-9


class ProjectivePoint:
    """A point of complex projective space, stored as a unit representative."""

    __slots__ = ("rep",)

    def __init__(self, vec):
        v = np.asarray(vec, dtype=np.complex128)
        nrm = np.linalg.norm(v)
        if nrm == 0.0:
            raise ValueError("zero vector does not represent a projective point")
        self.rep = v / nrm

    def __repr__(self):
        return f"ProjectivePoint({self.rep.tolist()!r})"


def dist_sphere(f: PolySystem, g: PolySystem) -> float:
    """Angle between two unit-norm systems, in [0, pi]."""
    c = weyl_inner(f, g).real
    return math.acos(min(1.0, max(-1.0, c)))


def dist_proj(x: ProjectivePoint, y: ProjectivePoint) -> float:
    """Phase-invariant angle between projective points, in [0, pi/2]."""
    return dist_proj_reps(x.rep, y.rep)


def dist_proj_reps(x: np.ndarray, y: np.ndarray) -> float:
    c = abs(np.vdot(y, x))
    return math.acos(min(1.0, max(0.0, c)))


def geodesic(g: PolySystem, f: PolySystem, t: float, mode: str = "exact") -> PolySystem:
    """Point at parameter t of the unit-sphere path from g (t=0) to f (t=1).

    The default is the exact great circle; mode="chord" uses the
    normalized linear interpolation (t f + (1-t) g)/||.||.  The step-size
    constants of the continuation routines are calibrated for the exact
    mode only.
    """
    alpha = dist_sphere(f, g)
    if alpha >= math.pi - ANTIPODAL_TOL:
        raise AntipodalEndpoints("endpoints are antipodal; the path is not unique")
    if alpha <= PARALLEL_TOL:
        return g
    if mode == "chord":
        v = t * f.coords + (1.0 - t) * g.coords
    else:
        s = math.sin(alpha)
        v = (math.sin((1.0 - t) * alpha) / s) * g.coords \
            + (math.sin(t * alpha) / s) * f.coords
    return PolySystem(g.profile, v / np.linalg.norm(v))


def standard_unitary(zeta: ProjectivePoint) -> np.ndarray:
    """The unitary with determinant 1 sending e_0 to zeta.rep and fixing the
    orthogonal complement of span{e_0, zeta}."""
    z = zeta.rep
    m = len(z)
    a = z[0]
    if abs(a) >= 1.0 - 1e-12:
        # zeta is e_0 up to phase and rounding; the identity already fits.
        return np.eye(m, dtype=np.complex128)
    w = z.copy()
    w[0] = 0.0
    b = np.linalg.norm(w)          # real positive by construction
    w = w / b
    e0 = np.zeros(m, dtype=np.complex128)
    e0[0] = 1.0
    u = np.eye(m, dtype=np.complex128)
    u -= np.outer(e0, e0.conj()) + np.outer(w, w.conj())
    u += a * np.outer(e0, e0.conj()) + b * np.outer(w, e0.conj())
    u += -b * np.outer(e0, w.conj()) + np.conj(a) * np.outer(w, w.conj())
    return u
