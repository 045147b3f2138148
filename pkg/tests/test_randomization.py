import math

import numpy as np
import pytest

from conftest import unit_system
from homsolve import (BpPair, DegreeProfile, DegenerateKernel, PolySystem, bp,
                      bp_split, dist_sphere, face_decompose, face_recompose,
                      floor_frac_unit, from_real_coords, kernel_vector, mu_exact,
                      psi_expand, sibuya, sphere_floor, sphere_frac, to_real_coords,
                      trig_poly, weyl_norm)
from homsolve.randomization import trig_series_coeffs

P12 = DegreeProfile(1, (2,))
P22 = DegreeProfile(2, (2, 2))


# --- truncation / fractional part -------------------------------------------

def test_floor_frac_examples():
    a, b = floor_frac_unit(0.3, 4)
    assert a == 0.25 and b == pytest.approx(0.2)
    a, b = floor_frac_unit(-0.3, 4)
    assert a == -0.5 and b == pytest.approx(0.8)
    for k in (-16, -7, 0, 3, 15):
        a, b = floor_frac_unit(k / 16, 16)
        assert a == k / 16 and b == 0.0
    with pytest.raises(ValueError):
        floor_frac_unit(1.5, 4)
    with pytest.raises(ValueError):
        floor_frac_unit(0.5, 0)


def test_floor_frac_big_precision():
    q = 10 ** 40  # far beyond the float-exact range
    x = 0.123456789
    a, b = floor_frac_unit(x, q)
    assert 0.0 <= b < 1.0
    assert abs(a - x) <= 1.1 / q + 1e-16


def test_face_decompose_examples(rng):
    e1 = np.zeros(6)
    e1[0] = 1.0
    fc = face_decompose(e1)
    assert fc.face_index == 1 and fc.sign == 1
    assert np.array_equal(fc.coords, np.zeros(5))

    tied = np.ones(6) / math.sqrt(6)
    fc = face_decompose(tied)
    assert fc.face_index == 1
    assert np.all(fc.coords < 1.0)

    neg = np.zeros(6)
    neg[2] = -0.5
    fc = face_decompose(neg)
    assert fc.face_index == 3 and fc.sign == -1

    with pytest.raises(ValueError):
        face_decompose(np.zeros(4))


def test_face_roundtrip(rng):
    for _ in range(50):
        u = rng.standard_normal(8)
        u /= np.linalg.norm(u)
        x = face_recompose(face_decompose(u))
        back = x / np.linalg.norm(x)
        assert np.allclose(back, u, atol=1e-12)


def test_sphere_floor_lattice_and_idempotence(rng):
    e1 = np.zeros(6)
    e1[0] = 1.0
    for q in (16, 256, 65536):
        assert np.array_equal(sphere_floor(e1, q), e1)
    for _ in range(50):
        u = rng.standard_normal(6)
        u /= np.linalg.norm(u)
        for q in (16, 256, 65536):
            once = sphere_floor(u, q)
            twice = sphere_floor(once, q)
            assert np.allclose(once, twice, atol=1e-12)


def test_sphere_floor_distance_bound(rng):
    # Spot check; the acceptance suite sweeps the full stated grid.
    for profile in (P12, P22):
        bound_scale = 3.0 * math.sqrt(profile.N)
        for _ in range(50):
            u = rng.standard_normal(2 * profile.N)
            u /= np.linalg.norm(u)
            for q in (16, 256, 65536):
                fu = from_real_coords(u, profile)
                ffl = from_real_coords(sphere_floor(u, q), profile)
                assert dist_sphere(ffl, fu) <= bound_scale / q


def test_sphere_frac_unit_and_fixed_point(rng):
    e1 = np.zeros(6)
    e1[0] = 1.0
    out = sphere_frac(e1, 16)
    expected = np.zeros(6)
    expected[4] = 1.0  # coordinate 2N-1 in 1-based indexing
    assert np.allclose(out, expected, atol=1e-15)
    for _ in range(50):
        u = rng.standard_normal(6)
        u /= np.linalg.norm(u)
        v = sphere_frac(u, 256)
        assert abs(np.linalg.norm(v) - 1.0) <= 1e-12


def test_sphere_frac_marginals_ks(rng):
    # Coordinates of the fractional part of uniform sphere points follow the
    # uniform-sphere coordinate law closely at large precision.
    from scipy.special import betainc, kolmogi
    n_samples = 10_000
    m = 6  # sphere dimension 2N with N = 3
    samples = np.empty((n_samples, m))
    for i in range(n_samples):
        u = rng.standard_normal(m)
        u /= np.linalg.norm(u)
        samples[i] = sphere_frac(u, 65536)
    crit = kolmogi(1e-3) / math.sqrt(n_samples)
    a = (m - 1) / 2.0
    grid_cdf = lambda x: betainc(a, a, (x + 1.0) / 2.0)
    for j in range(m):
        xs = np.sort(samples[:, j])
        cdf = grid_cdf(xs)
        ks = np.max(np.maximum(cdf - np.arange(n_samples) / n_samples,
                               (np.arange(1, n_samples + 1)) / n_samples - cdf))
        assert ks < crit, f"coordinate {j}: KS {ks:.4f} >= {crit:.4f}"


# --- sphere sampling ---------------------------------------------------------

def test_sibuya_examples():
    assert np.allclose(sibuya(np.array([0.0])), [1.0, 0.0], atol=1e-15)
    out = sibuya(np.array([0.0, 0.25, 0.5]))
    assert np.allclose(out, [math.sqrt(0.5), 0.0, 0.0, math.sqrt(0.5)], atol=1e-15)
    with pytest.raises(ValueError):
        sibuya(np.array([0.0, 0.5]))
    with pytest.raises(ValueError):
        sibuya(np.array([0.0, 0.5, 1.0]))


def test_sibuya_norm_and_mean(rng):
    n = 20_000
    acc = np.zeros(6)
    for _ in range(n):
        x = rng.random(5)
        v = sibuya(x)
        assert abs(np.linalg.norm(v) - 1.0) <= 1e-12
        acc += v
    assert np.all(np.abs(acc / n) <= 4.0 / math.sqrt(n))


def test_trig_series_recurrence():
    u = trig_series_coeffs(5)
    assert u[0] == 0.0
    assert u[1] == pytest.approx(-2j * math.pi)
    assert u[2] == pytest.approx(2 * math.pi ** 2 - 2j * math.pi, rel=1e-15)


def test_trig_series_matches_symbolic():
    import sympy as sp
    x = sp.symbols("x")
    expr = (sp.exp(2 * sp.I * sp.pi * x) - 1) / (x - 1)
    series = sp.series(expr, x, 0, 4).removeO()
    poly = sp.Poly(sp.expand(series), x)
    u = trig_series_coeffs(3)
    for k in range(4):
        ref = complex(poly.coeff_monomial(x ** k))
        assert u[k] == pytest.approx(ref, abs=1e-12)


def test_trig_poly_values():
    c, s = trig_poly(0.0, 30)
    assert c == 1.0 and s == 0.0
    xs = np.linspace(0.0, 1.0, 1000)
    worst = max(abs(trig_poly(float(x), 30)[0] - math.cos(2 * math.pi * x))
                for x in xs)
    assert worst <= 1e-6
    for x in (0.1, 0.37, 0.93):
        c, s = trig_poly(x, 30)
        assert c * c + s * s == pytest.approx(1.0, abs=1e-15)


def test_sibuya_bss_trig_close(rng):
    x = rng.random(5)
    hw = sibuya(x, trig="hw")
    bss = sibuya(x, trig="bss", trig_q=30)
    assert np.allclose(hw, bss, atol=1e-6)


# --- starting-pair construction ----------------------------------------------

def test_bp_split_examples():
    f = PolySystem.from_monomial_coeffs(P12, [np.array([1.0, 0.0, 0.0])])
    c, a, fp = bp_split(f)
    assert c[0] == 1.0 and a[0, 0] == 0.0 and weyl_norm(fp) == 0.0

    g = PolySystem.from_monomial_coeffs(P12, [np.array([0.0, 2 ** 0.5, 0.0])])
    c, a, fp = bp_split(g)
    assert c[0] == pytest.approx(0.0)
    assert a[0, 0] == pytest.approx(1.0)
    assert weyl_norm(fp) == pytest.approx(0.0, abs=1e-15)


def test_bp_split_isometry(rng):
    for profile in (P12, P22, DegreeProfile(2, (3, 2))):
        for _ in range(20):
            f = unit_system(profile, rng)
            c, a, fp = bp_split(f)
            total = (np.abs(c) ** 2).sum() + (np.abs(a) ** 2).sum() + weyl_norm(fp) ** 2
            assert total == pytest.approx(1.0, abs=1e-10)
            # remainder vanishes to second order at e0
            e0 = np.zeros(profile.nvars)
            e0[0] = 1.0
            assert np.allclose(fp.evaluate(e0), 0.0, atol=1e-15)
            assert np.allclose(fp.jacobian(e0), 0.0, atol=1e-15)


def test_kernel_vector_examples(rng):
    v = kernel_vector(np.array([[1.0, 0.0]]))
    assert np.allclose(v, [0.0, 1.0])
    v = kernel_vector(np.array([[0.0, 1.0]]))
    assert np.allclose(v, [1.0, 0.0])
    for _ in range(50):
        m = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
        v = kernel_vector(m)
        assert np.linalg.norm(m @ v) <= 1e-10
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
        # first significant coordinate is real positive
        k = next(i for i in range(3) if abs(v[i]) > 1e-12 * np.abs(v).max())
        assert v[k].real > 0 and abs(v[k].imag) <= 1e-14
    with pytest.raises(DegenerateKernel):
        kernel_vector(np.zeros((2, 3)))


def test_psi_expand_examples(rng):
    psi = psi_expand(P12, np.array([[1.0, 0.0]]), np.array([0.0, 1.0]))
    assert np.allclose(psi.monomial_coeffs(0), [0.0, 2 ** 0.5, 0.0])
    for _ in range(20):
        m = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
        zp = kernel_vector(m)
        psi = psi_expand(P22, m, zp)
        assert weyl_norm(psi) == pytest.approx(np.linalg.norm(m), abs=1e-10)
        assert np.linalg.norm(psi.evaluate(zp)) <= 1e-10


def test_bp_hand_example():
    g = PolySystem.from_monomial_coeffs(P12, [np.array([0.0, 2 ** 0.5, 0.0])])
    pair = bp(g)
    assert isinstance(pair, BpPair)
    assert np.allclose(pair.zeta.rep, [0.0, 1.0])
    assert np.allclose(pair.g.coords, g.coords, atol=1e-12)


def test_bp_invariants(rng):
    for _ in range(200):
        u = unit_system(P22, rng)
        pair = bp(u)
        assert np.linalg.norm(pair.g.evaluate(pair.zeta.rep)) <= 1e-10
        assert abs(weyl_norm(pair.g) - 1.0) <= 1e-10


def test_bp_mu_moment_smoke(rng):
    # Small-sample sanity check of the second-moment bound; the stated
    # 10^4-draw sweep runs in the acceptance suite.
    vals = []
    for _ in range(500):
        pair = bp(unit_system(P12, rng))
        vals.append(mu_exact(pair.g, pair.zeta) ** 2)
    assert np.mean(vals) <= 1.5 * 1 * 3


# --- chart volume element ----------------------------------------------------

def test_projection_chart_jacobian(rng):
    # |det| of the normalized chart u -> (u_2/u_1, ..., u_{2N}/u_1) on the
    # sphere equals u_1^(-2N), checked by central finite differences.
    m = 6  # 2N
    done = 0
    while done < 10:
        u = rng.standard_normal(m)
        u /= np.linalg.norm(u)
        if u[0] <= 0.1:
            continue
        # orthonormal tangent basis at u
        basis = []
        for k in range(1, m):
            v = np.zeros(m)
            v[k] = 1.0
            v -= (v @ u) * u
            for b in basis:
                v -= (v @ b) * b
            v /= np.linalg.norm(v)
            basis.append(v)
        h = 1e-6
        cols = []
        for v in basis:
            up = (u + h * v) / np.linalg.norm(u + h * v)
            dn = (u - h * v) / np.linalg.norm(u - h * v)
            cols.append(((up[1:] / up[0]) - (dn[1:] / dn[0])) / (2 * h))
        det = abs(np.linalg.det(np.array(cols).T))
        assert det == pytest.approx(u[0] ** (-m), rel=1e-4)
        done += 1


# --- recursive integral part (square-root-machine device) ---------------------

def _recursive_int_nonneg(x: np.ndarray) -> np.ndarray:
    if np.all(x < 1.0):
        return np.zeros_like(x)
    half = 2.0 * _recursive_int_nonneg(x / 2.0)
    return np.where(x < 1.0, 0.0, half + (x >= half + 1.0))


def recursive_floor(x: np.ndarray) -> np.ndarray:
    pos = _recursive_int_nonneg(np.abs(x))
    frac = np.abs(x) != pos
    return np.where(x >= 0, pos, -pos - frac)


def test_recursive_floor_matches_floor(rng):
    x = rng.uniform(-1.0, 1.0, size=10 ** 6) * 65536
    assert np.array_equal(recursive_floor(x), np.floor(x))
    ints = rng.integers(-1000, 1000, size=1000).astype(float)
    assert np.array_equal(recursive_floor(ints), ints)
