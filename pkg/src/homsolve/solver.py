"""Solver drivers: the deterministic precision-doubling loop that feeds on
the input's own fractional digits, and the seeded randomized baseline.

The deterministic driver contains no randomness at all: truncation and
noise extraction act on the normalized input through the real-vector
identification, so two runs on the same input produce identical reports
bit for bit.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .conditioning import Certificate, certify_root
from .errors import ContinuationFailed, DegenerateKernel, EntropyExhausted, RoundsExceeded
from .homotopy import DEFAULT_MAX_STEPS, HcOutcome, hc, hc_checked
from .projective import ProjectivePoint
from .randomization import bp, face_decompose, floor_frac_unit, sibuya, sphere_floor
from .systems import (DegreeProfile, PolySystem, from_real_coords, normalized,
                      to_real_coords, weyl_inner)


@dataclass
class SolverConfig:
    max_rounds: int = 8
    geodesic_mode: str = "exact"
    trig_mode: str = "hw"
    mu_mode: str = "exact"
    entropy_fallback: str = "hash"
    rng_seed: int | None = None
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self):
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if self.entropy_fallback not in ("fail", "hash"):
            raise ValueError("entropy_fallback must be 'fail' or 'hash'")


@dataclass
class RoundSummary:
    """One precision round: the precision used, the derived path-distance
    budget, and the outcome of the checked continuation."""

    Q: int | None
    rho: float | None
    success: bool
    K: int
    mu_start: float
    max_mu: float
    fail_reason: str | None = None

    def to_obj(self) -> dict:
        return {"Q": self.Q, "rho": self.rho, "success": self.success, "K": self.K,
                "mu_start": self.mu_start, "max_mu": self.max_mu,
                "fail_reason": self.fail_reason}


@dataclass
class SolveReport:
    root: ProjectivePoint
    K_total: int
    rounds: int
    precisions: list
    per_round: list[RoundSummary]
    certificate: Certificate
    profile: DegreeProfile = None

    def to_obj(self) -> dict:
        return {
            "status": "success",
            "n": self.profile.n,
            "degrees": list(self.profile.degrees),
            "N": self.profile.N,
            "D": self.profile.D,
            "root": [[float(c.real), float(c.imag)] for c in self.root.rep],
            "K_total": self.K_total,
            "rounds": self.rounds,
            "precisions": list(self.precisions),
            "per_round": [r.to_obj() for r in self.per_round],
            "certificate": self.certificate.to_obj(),
            "certified": self.certificate.passed,
        }


def rho_for(N: int, Q: int) -> float:
    """Path-distance budget 3 sqrt(N) / Q, safe for arbitrarily large Q."""
    num = 3.0 * math.sqrt(N)
    if Q.bit_length() < 1000:
        return num / Q
    # Beyond binary64 range; underflows cleanly to 0 through logs.
    try:
        return math.exp(math.log(num) - math.log(Q))
    except OverflowError:
        return 0.0


def _hash_noise(v: np.ndarray, Q: int, count: int) -> np.ndarray:
    """Deterministic unit-interval values from the canonical byte encoding
    of the input vector and the precision."""
    base = hashlib.sha256()
    base.update(np.ascontiguousarray(v, dtype="<f8").tobytes())
    base.update(str(int(Q)).encode())
    seed = base.digest()
    out = np.empty(count)
    for i in range(count):
        h = hashlib.sha256(seed + i.to_bytes(4, "little")).digest()
        out[i] = int.from_bytes(h[:8], "little") / 2.0 ** 64
    return out


def extract_noise(v, Q: int, mode: str = "hash", trig: str = "hw",
                  trig_q: int | None = None) -> np.ndarray:
    """Fractional part of a unit vector at precision Q, with a documented
    fallback for inputs whose mantissas are exhausted (all fractional
    coordinates exactly zero): either fail, or re-seed deterministically
    from a hash of the input bytes."""
    fc = face_decompose(v)
    b = np.array([floor_frac_unit(float(c), Q)[1] for c in fc.coords])
    if np.all(b == 0.0):
        if mode == "fail":
            raise EntropyExhausted(f"no fractional digits left at precision {Q}")
        b = _hash_noise(np.asarray(v, dtype=np.float64), Q, len(b))
    return sibuya(b, trig=trig, trig_q=trig_q)


def dbp(f: PolySystem, cfg: SolverConfig | None = None) -> SolveReport:
    """Deterministic solve: truncate the input at precision Q, spend the
    stripped digits on a starting pair, and run the checked continuation;
    square Q and repeat until it succeeds.

    The returned root is certified against the (normalized) original
    input, not the truncation.  Raises RoundsExceeded when every round
    fails and EntropyExhausted per the configured fallback.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    fs = normalized(f)
    profile = f.profile
    v = to_real_coords(fs)
    bigN = profile.N
    q = bigN
    per_round: list[RoundSummary] = []
    precisions: list[int] = []
    for _ in range(cfg.max_rounds):
        q = q * q
        rho = rho_for(bigN, q)
        precisions.append(q)
        fprime = from_real_coords(sphere_floor(v, q), profile)
        try:
            noise = extract_noise(v, q, mode=cfg.entropy_fallback,
                                  trig=cfg.trig_mode)
            pair = bp(from_real_coords(noise, profile))
        except DegenerateKernel:
            per_round.append(RoundSummary(q, rho, False, 0, math.nan, math.nan,
                                          "degenerate_kernel"))
            continue
        sign = 1.0 if weyl_inner(fs, pair.g).real >= 0.0 else -1.0
        outcome = hc_checked(fprime, sign * pair.g, pair.zeta, rho,
                             max_steps=cfg.max_steps, mu_mode=cfg.mu_mode,
                             geodesic_mode=cfg.geodesic_mode)
        per_round.append(RoundSummary(q, rho, outcome.success, outcome.trace.K,
                                      outcome.trace.mu0, outcome.trace.max_mu,
                                      outcome.fail_reason))
        if outcome.success:
            cert = certify_root(fs, outcome.point, iters=4)
            return SolveReport(root=outcome.point,
                               K_total=sum(r.K for r in per_round),
                               rounds=len(per_round), precisions=precisions,
                               per_round=per_round, certificate=cert,
                               profile=profile)
    raise RoundsExceeded(f"no round succeeded within {cfg.max_rounds} rounds",
                         per_round=per_round, precisions=precisions)


def random_unit_system(profile: DegreeProfile, rng: np.random.Generator) -> PolySystem:
    """Uniform point of the unit sphere of systems: standard normals in the
    orthonormal coordinates, normalized."""
    v = rng.standard_normal(2 * profile.N)
    return from_real_coords(v / np.linalg.norm(v), profile)


def bp_solve(f: PolySystem, cfg: SolverConfig) -> SolveReport:
    """Randomized baseline: draw one uniform starting pair from the seeded
    generator and track the (normalized) input with the plain continuation."""
    if cfg.rng_seed is None:
        raise ValueError("bp_solve requires rng_seed")
    fs = normalized(f)
    profile = f.profile
    rng = np.random.default_rng(cfg.rng_seed)
    u = random_unit_system(profile, rng)
    pair = bp(u)
    sign = 1.0 if weyl_inner(fs, pair.g).real >= 0.0 else -1.0
    outcome = hc(fs, sign * pair.g, pair.zeta, max_steps=cfg.max_steps,
                 mu_mode=cfg.mu_mode, geodesic_mode=cfg.geodesic_mode)
    summary = RoundSummary(None, None, outcome.success, outcome.trace.K,
                           outcome.trace.mu0, outcome.trace.max_mu,
                           outcome.fail_reason)
    if not outcome.success:
        raise ContinuationFailed(f"continuation failed: {outcome.fail_reason}")
    cert = certify_root(fs, outcome.point, iters=4)
    return SolveReport(root=outcome.point, K_total=outcome.trace.K, rounds=1,
                       precisions=[None], per_round=[summary], certificate=cert,
                       profile=profile)
