"""Projective Newton step, condition number (exact and sandwich-bounded)
and approximate-root certification.

The restricted differential is always handled through an orthonormal
basis of the orthogonal complement of the current point, built from the
Householder reflection that carries the point to e_0; this keeps the
basis deterministic across platforms up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularJacobian
from .projective import ProjectivePoint, dist_proj_reps
from .systems import PointEval, PolySystem, weyl_norm

# A restricted Jacobian whose singular values span more than this ratio
# is treated as singular (condition number +inf).
SINGULAR_RATIO = 1e-14

# Distances below this are rounding noise in binary64 angles; contraction
# ratios are not meaningful there.
NOISE_FLOOR = 1e-13


def perp_basis(z: np.ndarray, cache: PointEval | None = None) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of z (columns)."""
    if cache is not None and cache._perp is not None:
        return cache._perp
    m = len(z)
    v = np.array(z, dtype=np.complex128)
    a0 = abs(v[0])
    phase = v[0] / a0 if a0 > 1e-300 else 1.0
    v[0] += phase
    # Columns 1..m-1 of the reflection I - 2 v v^H / (v^H v).
    basis = (-2.0 / np.vdot(v, v).real) * np.outer(v, v[1:].conj())
    basis[1:, :] += np.eye(m - 1)
    if cache is not None:
        cache._perp = basis
    return basis


def _restricted_jacobian(f: PolySystem, z: np.ndarray, cache: PointEval):
    return f.jacobian(z, cache) @ perp_basis(z, cache)


def newton_step_raw(f: PolySystem, z: np.ndarray, cache: PointEval | None = None) -> np.ndarray:
    """One projective Newton update on a unit representative."""
    pe = cache if cache is not None else PointEval(z)
    a = _restricted_jacobian(f, z, pe)
    u, sv, vh = np.linalg.svd(a)
    if sv[0] == 0.0 or sv[-1] <= SINGULAR_RATIO * sv[0]:
        raise SingularJacobian("restricted Jacobian is singular")
    rhs = (u.conj().T @ f.evaluate(z, pe)) / sv
    w = perp_basis(z, pe) @ (vh.conj().T @ rhs)
    out = z - w
    return out / np.linalg.norm(out)


def newton_step(f: PolySystem, z: ProjectivePoint) -> ProjectivePoint:
    return ProjectivePoint(newton_step_raw(f, z.rep))


_SQRT_DEG = {}


def _sqrt_degrees(profile) -> np.ndarray:
    v = _SQRT_DEG.get(profile)
    if v is None:
        v = np.sqrt(np.array(profile.degrees, dtype=np.float64))
        _SQRT_DEG[profile] = v
    return v


def mu_exact_raw(f: PolySystem, z: np.ndarray, cache: PointEval | None = None,
                 norm_f: float | None = None) -> float:
    """Condition number of f at a unit representative z; +inf when the
    restricted Jacobian is numerically singular."""
    pe = cache if cache is not None else PointEval(z)
    a = _restricted_jacobian(f, z, pe)
    scaled = a / _sqrt_degrees(f.profile)[:, None]
    sv = np.linalg.svd(scaled, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] <= SINGULAR_RATIO * sv[0]:
        return math.inf
    if norm_f is None:
        norm_f = weyl_norm(f)
    return float(norm_f / sv[-1])


def mu_exact(f: PolySystem, z: ProjectivePoint) -> float:
    return mu_exact_raw(f, z.rep)


def _householder_tridiag(g: np.ndarray) -> np.ndarray:
    """Hermitian tridiagonal matrix unitarily similar to g."""
    t = np.array(g, dtype=np.complex128)
    m = t.shape[0]
    for k in range(m - 2):
        x = t[k + 1:, k].copy()
        nx = np.linalg.norm(x)
        if nx == 0.0:
            continue
        a0 = abs(x[0])
        phase = x[0] / a0 if a0 > 0 else 1.0
        v = x.copy()
        v[0] += phase * nx
        v /= np.linalg.norm(v)
        # Apply I - 2 v v^H on both sides of the trailing block.
        blk = t[k + 1:, k:]
        blk -= 2.0 * np.outer(v, v.conj() @ blk)
        blk = t[k:, k + 1:]
        blk -= 2.0 * np.outer(blk @ v, v.conj())
    return t


def _tridiag_col_norm(f: PolySystem, z_rep: np.ndarray, cache: PointEval) -> float:
    """Maximum column l1-norm of a tridiagonalization of the Gram matrix of
    the inverse scaled differential; raises on a singular Jacobian."""
    a = _restricted_jacobian(f, z_rep, cache)
    try:
        xi = np.linalg.solve(a, np.diag(_sqrt_degrees(f.profile)).astype(np.complex128))
    except np.linalg.LinAlgError as exc:
        raise SingularJacobian("restricted Jacobian is singular") from exc
    t = _householder_tridiag(xi.conj().T @ xi)
    m = t.shape[0]
    t1 = 0.0
    for j in range(m):
        band = t[max(0, j - 1):min(m, j + 2), j]
        t1 = max(t1, float(np.sum(np.abs(band))))
    return t1


def mu_bound(f: PolySystem, z: ProjectivePoint) -> tuple[float, float]:
    """Sandwich [lower, upper] around the exact condition number with
    upper/lower = 3**(1/4) by construction."""
    t1 = _tridiag_col_norm(f, z.rep, PointEval(z.rep))
    upper = weyl_norm(f) * math.sqrt(t1)
    return upper / (3.0 ** 0.25), upper


def mu_bound_upper(f: PolySystem, z_rep: np.ndarray, cache: PointEval | None = None,
                   norm_f: float | None = None) -> float:
    """Upper end of the sandwich, usable as a conservative stand-in for the
    exact condition number in step-size control."""
    pe = cache if cache is not None else PointEval(z_rep)
    try:
        t1 = _tridiag_col_norm(f, z_rep, pe)
    except SingularJacobian:
        return math.inf
    if norm_f is None:
        norm_f = weyl_norm(f)
    return norm_f * math.sqrt(t1)


@dataclass
class Certificate:
    """Outcome of refining and checking a candidate approximate root."""

    mu_at_root: float
    proj_distance: float
    contraction_ratios: list[float] = field(default_factory=list)
    passed: bool = False

    def to_obj(self) -> dict:
        return {"mu_at_root": self.mu_at_root, "proj_distance": self.proj_distance,
                "contraction_ratios": list(self.contraction_ratios),
                "passed": self.passed}


def certify_root(f: PolySystem, z: ProjectivePoint, iters: int = 3) -> Certificate:
    """Refine z by `iters` Newton steps and check the quadratic-contraction
    picture against the refined point.

    Passes when D^{3/2} mu d <= 1/3 at the refined point and every
    intermediate distance contracted at least as fast as 2^(1-2^k)
    (with an absolute binary64 noise floor).  A singular Jacobian during
    refinement yields a failed certificate.
    """
    if iters < 3:
        raise ValueError("need at least 3 refinement steps")
    pts = [z.rep]
    try:
        for _ in range(iters):
            pts.append(newton_step_raw(f, pts[-1]))
    except SingularJacobian:
        return Certificate(mu_at_root=math.inf, proj_distance=math.inf, passed=False)
    zeta = pts[-1]
    dists = [dist_proj_reps(p, zeta) for p in pts[:-1]]
    d0 = dists[0]
    mu = mu_exact_raw(f, zeta)
    if d0 > NOISE_FLOOR:
        ratios = [dk / d0 for dk in dists[1:]]
    else:
        ratios = [0.0 for _ in dists[1:]]
    contraction_ok = all(
        dk <= 2.0 ** (1 - 2 ** k) * d0 + NOISE_FLOOR
        for k, dk in enumerate(dists))
    d32 = float(f.profile.D) ** 1.5
    passed = bool(math.isfinite(mu) and d32 * mu * d0 <= 1.0 / 3.0
                  and contraction_ok)
    return Certificate(mu_at_root=mu, proj_distance=d0,
                       contraction_ratios=[float(r) for r in ratios], passed=passed)
