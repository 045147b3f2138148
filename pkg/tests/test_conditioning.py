import math

import numpy as np
import pytest

from conftest import random_unitary, unit_point, unit_system
from homsolve import (DegreeProfile, PolySystem, ProjectivePoint, SingularJacobian,
                      certify_root, compose_linear, dist_proj, mu_bound, mu_exact,
                      newton_step)
from homsolve.conditioning import newton_step_raw

P12 = DegreeProfile(1, (2,))
P22 = DegreeProfile(2, (2, 2))

RT2X0X1 = PolySystem.from_monomial_coeffs(P12, [np.array([0.0, 2 ** 0.5, 0.0])])
HYP = PolySystem.from_monomial_coeffs(P12, [np.array([-1.0, 0.0, 1.0])])  # x1^2 - x0^2


def test_newton_fixed_point_at_root():
    z = ProjectivePoint([0.0, 1.0])
    z1 = newton_step(RT2X0X1, z)
    assert dist_proj(z, z1) <= 1e-12


def test_newton_hand_example():
    # From the representative (1, 1.2): the correction solves 4.8 s = 0.44
    # along (-1.2, 1), giving a point proportional to (1.11, 1.108333...).
    z = ProjectivePoint([1.0, 1.2])
    z1 = newton_step(HYP, z)
    expected = np.array([1.11, 1.1083333333333334])
    expected = expected / np.linalg.norm(expected)
    assert abs(abs(np.vdot(expected, z1.rep)) - 1.0) <= 1e-9


def test_newton_phase_equivariance(rng):
    for _ in range(10):
        f = unit_system(P22, rng)
        z = unit_point(3, rng)
        lam = np.exp(2j * math.pi * rng.random())
        a = newton_step(f, z)
        b = newton_step(f, ProjectivePoint(lam * z.rep))
        assert dist_proj(a, b) <= 1e-12


def test_newton_singular_raises():
    z = ProjectivePoint([1.0, 0.99j])
    with pytest.raises(SingularJacobian):
        newton_step(HYP, z)


def test_mu_hand_value_and_invariance(rng):
    z = ProjectivePoint([0.0, 1.0])
    assert mu_exact(RT2X0X1, z) == pytest.approx(1.0, abs=1e-12)
    lo, hi = mu_bound(RT2X0X1, z)
    assert lo <= 1.0 <= hi

    for _ in range(10):
        f = unit_system(P22, rng)
        zp = unit_point(3, rng)
        m = mu_exact(f, zp)
        u = complex(rng.standard_normal(), rng.standard_normal())
        v = complex(rng.standard_normal(), rng.standard_normal())
        m2 = mu_exact(u * f, ProjectivePoint(v * zp.rep))
        assert m2 == pytest.approx(m, rel=1e-10)


def test_mu_lower_bound_sqrt_n(rng):
    for profile in (P12, P22):
        root_n = math.sqrt(profile.n)
        for _ in range(100):
            f = unit_system(profile, rng)
            z = unit_point(profile.nvars, rng)
            assert mu_exact(f, z) >= root_n - 1e-12


def test_mu_unitary_invariance(rng):
    for _ in range(10):
        f = unit_system(P22, rng)
        z = unit_point(3, rng)
        u = random_unitary(3, rng)
        m1 = mu_exact(f, z)
        m2 = mu_exact(compose_linear(f, u.conj().T), ProjectivePoint(u @ z.rep))
        assert m2 == pytest.approx(m1, rel=1e-8)


def test_mu_bound_sandwich(rng):
    ratio = 3.0 ** 0.25
    for _ in range(1000):
        f = unit_system(P22, rng)
        z = unit_point(3, rng)
        m = mu_exact(f, z)
        lo, hi = mu_bound(f, z)
        assert lo <= m * (1 + 1e-12) and m <= hi * (1 + 1e-12)
        assert hi / lo == pytest.approx(ratio, rel=1e-14)


def test_certify_exact_root():
    cert = certify_root(RT2X0X1, ProjectivePoint([0.0, 1.0]))
    assert cert.passed
    assert cert.proj_distance <= 1e-12
    with pytest.raises(ValueError):
        certify_root(RT2X0X1, ProjectivePoint([0.0, 1.0]), iters=2)


def test_certify_fails_on_bad_start():
    # Singular restricted Jacobian along x1 = c*i*x0, found by scanning for
    # a non-contracting start.
    cert = certify_root(HYP, ProjectivePoint([1.0, 0.99j]))
    assert not cert.passed


def test_quadratic_contraction(rng):
    # For a well-positioned start the distances to the root contract at the
    # doubling-exponent rate; the root oracle is deep Newton refinement.
    checked = 0
    for _ in range(100):
        from homsolve import bp
        pair = bp(unit_system(P12, rng))
        f, eta = pair.g, pair.zeta
        zeta = eta.rep
        for _ in range(8):
            zeta = newton_step_raw(f, zeta)
        mu = mu_exact(f, ProjectivePoint(zeta))
        if not math.isfinite(mu):
            continue
        budget = 1.0 / (3.0 * 2.0 ** 1.5 * mu) * 0.9
        tang = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        tang -= np.vdot(zeta, tang) * zeta
        tang /= np.linalg.norm(tang)
        z0 = math.cos(budget) * zeta + math.sin(budget) * tang
        pts = [z0]
        try:
            for _ in range(3):
                pts.append(newton_step_raw(f, pts[-1]))
        except SingularJacobian:
            continue
        from homsolve.projective import dist_proj_reps
        d = [dist_proj_reps(p, zeta) for p in pts]
        for k in range(1, 4):
            assert d[k] <= 2.0 ** (1 - 2 ** k) * d[0] + 1e-12
        checked += 1
    assert checked >= 80


def test_mu_lipschitz(rng):
    # Two-sided (1+eps) stability within the stated perturbation radius.
    eps = 1.0 / 7.0
    slack = 1.0 + 1e-6
    d32 = 2.0 ** 1.5
    d12 = 2.0 ** 0.5
    done = 0
    while done < 100:
        f = unit_system(P22, rng)
        x = unit_point(3, rng)
        m = mu_exact(f, x)
        if not math.isfinite(m) or m > 1e6:
            continue
        rf = eps / (4.0 * m * d12) * rng.random()
        rx = eps / (4.0 * m * d32) * rng.random()
        df = unit_system(P22, rng)
        from homsolve import weyl_inner, weyl_norm
        df = df - weyl_inner(df, f) * f
        df = (1.0 / weyl_norm(df)) * df
        g = math.cos(rf) * f + math.sin(rf) * df
        tang = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        tang -= np.vdot(x.rep, tang) * x.rep
        tang /= np.linalg.norm(tang)
        y = ProjectivePoint(math.cos(rx) * x.rep + math.sin(rx) * tang)
        m2 = mu_exact(g, y)
        assert m / (1 + eps) / slack <= m2 <= (1 + eps) * m * slack
        done += 1
