"""Adaptive-step homotopy continuation, its precision-checked variant, and
a brute-force path oracle for the path integrals and maximum condition
number.

The step rule follows the reference recursion literally: after each
Newton update the parameter advances by 1/(101 D^{3/2} mu^2 d), where mu
is evaluated at the *new* point with the path system of the current
iteration, and d is the (fixed) angle between the endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .conditioning import mu_bound_upper, mu_exact_raw, newton_step_raw
from .errors import AntipodalEndpoints, NotARoot, SingularJacobian
from .projective import ProjectivePoint, dist_sphere, geodesic
from .systems import PointEval, PolySystem


@dataclass(frozen=True)
class StepConstants:
    eps: float = 1.0 / 13.0
    A: float = 1.0 / 52.0
    B: float = 1.0 / 101.0
    Bprime: float = 1.0 / 65.0
    fail_threshold: float = 1.0 / 151.0
    cert_A_check: int = 52
    step_denominator: int = 101


CONSTANTS = StepConstants()

DEGENERATE_ANGLE = 1e-12
DEFAULT_MAX_STEPS = 10_000_000


@dataclass
class PathTrace:
    """Per-run record: one (t, mu) entry per Newton step, plus the condition
    number mu0 of the starting pair (which the step count excludes but the
    maximum includes)."""

    steps: list[tuple[float, float]] = field(default_factory=list)
    mu0: float = math.nan

    @property
    def K(self) -> int:
        return len(self.steps)

    @property
    def max_mu(self) -> float:
        m = self.mu0
        for _, mu in self.steps:
            if mu > m:
                m = mu
        return m


@dataclass
class HcOutcome:
    success: bool
    point: ProjectivePoint | None
    trace: PathTrace
    fail_reason: str | None = None


def _mu_fn(mu_mode: str):
    if mu_mode == "exact":
        return mu_exact_raw
    if mu_mode == "bound":
        return mu_bound_upper
    raise ValueError(f"unknown mu mode {mu_mode!r}")


def _continue_path(f: PolySystem, g: PolySystem, z: ProjectivePoint,
                   rho: float | None, max_steps: int | None,
                   mu_mode: str, geodesic_mode: str) -> HcOutcome:
    d32 = float(f.profile.D) ** 1.5
    alpha = dist_sphere(f, g)
    if alpha >= math.pi - 1e-9:
        raise AntipodalEndpoints("endpoints are antipodal; the path is not unique")
    check = CONSTANTS.fail_threshold
    mu_of = _mu_fn(mu_mode)

    zv = z.rep
    pe = PointEval(zv)
    mu_cur = mu_of(g, zv, pe, norm_f=1.0)
    trace = PathTrace(mu0=mu_cur)

    if alpha <= DEGENERATE_ANGLE:
        # Zero-length path: the formulas below divide by the angle.
        if rho is not None and d32 * mu_cur * mu_cur * rho > check:
            return HcOutcome(False, None, trace, "precision_check")
        return HcOutcome(True, ProjectivePoint(zv), trace)

    if not math.isfinite(mu_cur):
        return HcOutcome(False, None, trace, "singular_jacobian")

    # The endpoint angle is fixed; build path systems inline rather than
    # re-deriving it from the coefficients at every step.
    sin_alpha = math.sin(alpha)
    profile = g.profile
    gc, fc = g.coords, f.coords

    def path_system(tt: float) -> PolySystem:
        if geodesic_mode == "chord":
            v = tt * fc + (1.0 - tt) * gc
        else:
            v = (math.sin((1.0 - tt) * alpha) / sin_alpha) * gc \
                + (math.sin(tt * alpha) / sin_alpha) * fc
        return PolySystem(profile, v / np.linalg.norm(v))

    denom = CONSTANTS.step_denominator * d32 * alpha
    t = 1.0 / (denom * mu_cur * mu_cur)
    h = g
    while t < 1.0:
        if rho is not None and d32 * mu_cur * mu_cur * rho > check:
            return HcOutcome(False, None, trace, "precision_check")
        if max_steps is not None and trace.K >= max_steps:
            return HcOutcome(False, None, trace, "max_steps")
        h = path_system(t)
        try:
            zv = newton_step_raw(h, zv, pe)
        except SingularJacobian:
            return HcOutcome(False, None, trace, "singular_jacobian")
        pe = PointEval(zv)
        mu_cur = mu_of(h, zv, pe, norm_f=1.0)
        trace.steps.append((t, mu_cur))
        if not math.isfinite(mu_cur):
            return HcOutcome(False, None, trace, "singular_jacobian")
        t += 1.0 / (denom * mu_cur * mu_cur)

    if rho is not None and d32 * mu_cur * mu_cur * rho > check:
        return HcOutcome(False, None, trace, "precision_check")
    return HcOutcome(True, ProjectivePoint(zv), trace)


def hc(f: PolySystem, g: PolySystem, z: ProjectivePoint,
       max_steps: int = DEFAULT_MAX_STEPS, mu_mode: str = "exact",
       geodesic_mode: str = "exact") -> HcOutcome:
    """Track an approximate root of g along the great circle toward f.

    Expects unit-norm endpoints and a start z that approximates a root
    eta of g with 52 D^{3/2} mu(g,z) d(z,eta) <= 1.  May run forever on
    paths with a divergent condition integral, hence the step cap.
    """
    return _continue_path(f, g, z, None, max_steps, mu_mode, geodesic_mode)


def hc_checked(fprime: PolySystem, g: PolySystem, z: ProjectivePoint, rho: float,
               max_steps: int | None = None, mu_mode: str = "exact",
               geodesic_mode: str = "exact") -> HcOutcome:
    """Like hc, but abort with Fail as soon as D^{3/2} mu^2 rho exceeds
    1/151 for the current path system and point (checked before the first
    step and after every update).

    Each completed iteration advances t by at least 151 rho / (101 d), so
    the run terminates even without a step cap.
    """
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    return _continue_path(fprime, g, z, rho, max_steps, mu_mode, geodesic_mode)


def path_oracle(f: PolySystem, g: PolySystem, eta: ProjectivePoint,
                pvals, resolution: int = 10_000) -> tuple[float, dict[float, float]]:
    """Brute-force estimates of the maximum condition number along the exact
    solution path from (g, eta) to f and of the path integrals of mu^p.

    Tracks the path on a uniform grid with 3 Newton corrections per node
    and trapezoid quadrature; returns +inf everywhere if a node loses the
    root (post-correction residual above 1e-8).
    """
    if resolution < 1000:
        raise ValueError("resolution must be at least 1000")
    residual = float(np.linalg.norm(g.evaluate(eta.rep)))
    if residual > 1e-10:
        raise NotARoot(f"residual {residual:.3e} exceeds 1e-10")

    pvals = [float(p) for p in pvals]
    ts = np.linspace(0.0, 1.0, resolution + 1)
    mus = np.empty(resolution + 1)
    zv = eta.rep
    for j, t in enumerate(ts):
        h = geodesic(g, f, float(t))
        try:
            for _ in range(3):
                zv = newton_step_raw(h, zv)
        except SingularJacobian:
            return math.inf, {p: math.inf for p in pvals}
        pe = PointEval(zv)
        if np.linalg.norm(h.evaluate(zv, pe)) > 1e-8:
            return math.inf, {p: math.inf for p in pvals}
        mus[j] = mu_exact_raw(h, zv, pe, norm_f=1.0)

    if not np.all(np.isfinite(mus)):
        return math.inf, {p: math.inf for p in pvals}
    step = 1.0 / resolution
    integrals = {}
    for p in pvals:
        vals = mus ** p
        integrals[p] = float(step * (vals.sum() - 0.5 * (vals[0] + vals[-1])))
    return float(mus.max()), integrals
