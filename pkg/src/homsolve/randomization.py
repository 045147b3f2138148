"""Splitting a point of the unit sphere into a nearby truncated point and
a residual usable as fresh randomness, uniform sphere sampling from unit
cube coordinates, and the starting-pair construction that turns one
uniform unit system into a system-root pair with the product law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DegenerateKernel
from .projective import ProjectivePoint, standard_unitary
from .systems import PolySystem, _mul_linear, compose_linear

TWO_PI = 2.0 * math.pi

# Above this, Q * x can no longer be trusted to round-trip in binary64 and
# the floor is taken in exact rational arithmetic instead.
_FLOAT_SAFE_Q = 1 << 50


def floor_frac_unit(x: float, Q: int) -> tuple[float, float]:
    """Truncation floor(Qx)/Q (toward -inf) and fractional part (x-a)Q in
    [0, 1), for x in [-1, 1].

    Values of Qx within ~1e-9 of an integer snap to it, so lattice points
    stay fixed under renormalize-and-truncate round trips instead of
    misflooring by one ulp.
    """
    if Q < 1:
        raise ValueError("Q must be a positive integer")
    if abs(x) > 1.0:
        raise ValueError("x must lie in [-1, 1]")
    if Q <= _FLOAT_SAFE_Q:
        y = x * Q
        near = math.floor(y + 0.5)
        if abs(y - near) <= 1e-9 + 1e-12 * abs(y):
            k = near
        else:
            k = math.floor(y)
        a = k / Q
        b = y - k
    else:
        # Exact path: binary64 values are dyadic rationals, and the lattice
        # outresolves them anyway, so the plain floor is already stable.
        r = Fraction(x) * Q
        k = math.floor(r)
        a = k / Q
        b = float(r - k)
    if b >= 1.0:
        b = math.nextafter(1.0, 0.0)
    elif b < 0.0:
        b = 0.0
    return a, b


@dataclass
class FaceCoords:
    """Coordinates of a sphere point on the face of the sup-norm cube it
    projects to: 1-based face index, the sign of that coordinate, and the
    remaining 2N-1 entries (all in [-1, 1))."""

    face_index: int
    sign: int
    coords: np.ndarray


def face_decompose(u) -> FaceCoords:
    """Scale u onto the boundary of the sup-norm unit cube and strip the
    extremal coordinate.  Ties take the smallest index; stray entries equal
    to +1 after scaling are nudged below 1 to stay in the half-open box."""
    u = np.asarray(u, dtype=np.float64)
    mags = np.abs(u)
    top = mags.max()
    if top == 0.0:
        raise ValueError("zero vector has no face decomposition")
    i = int(np.argmax(mags))
    x = u / top
    sign = 1 if u[i] > 0 else -1
    coords = np.delete(x, i)
    coords[coords == 1.0] = math.nextafter(1.0, 0.0)
    return FaceCoords(i + 1, sign, coords)


def face_recompose(fc: FaceCoords) -> np.ndarray:
    """Inverse of face_decompose up to the cube scaling: a point on the
    cube boundary (not renormalized)."""
    return np.insert(np.asarray(fc.coords, dtype=np.float64),
                     fc.face_index - 1, float(fc.sign))


def sphere_floor(u, Q: int) -> np.ndarray:
    """Truncation of a unit vector at precision Q: componentwise floor on
    its cube face, then back to the unit sphere."""
    fc = face_decompose(u)
    a = np.array([floor_frac_unit(float(c), Q)[0] for c in fc.coords])
    x = np.insert(a, fc.face_index - 1, float(fc.sign))
    return x / np.linalg.norm(x)


def sphere_frac(u, Q: int, trig: str = "hw", trig_q: int | None = None) -> np.ndarray:
    """Fractional part of a unit vector at precision Q, mapped back to the
    sphere through the simplex-spacings construction."""
    fc = face_decompose(u)
    b = np.array([floor_frac_unit(float(c), Q)[1] for c in fc.coords])
    return sibuya(b, trig=trig, trig_q=trig_q)


def sibuya(x, trig: str = "hw", trig_q: int | None = None) -> np.ndarray:
    """Map 2N-1 unit-interval values (N angles followed by N-1 spacing
    draws) to a point of the unit sphere in R^{2N}.

    The first N entries become angles; the rest, sorted, cut [0, 1] into N
    spacings whose square roots are the radii of the N (cos, sin) pairs.
    The output 2-norm is 1 up to a telescoping sum.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or len(x) % 2 == 0:
        raise ValueError("input must have odd length 2N-1")
    if np.any(x < 0.0) or np.any(x >= 1.0):
        raise ValueError("entries must lie in [0, 1)")
    n_pairs = (len(x) + 1) // 2
    angles = x[:n_pairs]
    cuts = np.sort(x[n_pairs:])
    radii = np.sqrt(np.diff(np.concatenate(([0.0], cuts, [1.0]))))
    if trig == "hw":
        c = np.cos(TWO_PI * angles)
        s = np.sin(TWO_PI * angles)
    elif trig == "bss":
        q = trig_q if trig_q is not None else default_trig_order(n_pairs)
        pairs = np.array([trig_poly(float(a), q) for a in angles])
        c, s = pairs[:, 0], pairs[:, 1]
    else:
        raise ValueError(f"unknown trig mode {trig!r}")
    out = np.empty(2 * n_pairs)
    out[0::2] = radii * c
    out[1::2] = radii * s
    return out


def default_trig_order(n_pairs: int) -> int:
    return math.ceil(math.log(max(n_pairs, 2))) + 20


@lru_cache(maxsize=None)
def trig_series_coeffs(Q: int) -> tuple[complex, ...]:
    """Taylor coefficients, up to degree Q, of (exp(2 pi i x) - 1)/(x - 1).

    From (x - 1) G(x) = exp(2 pi i x) - 1 the coefficients satisfy
    u_{k+1} = u_k - (2 pi i)^{k+1}/(k+1)!, equivalently the three-term
    recurrence (k+2) u_{k+2} = (2 pi i + k + 2) u_{k+1} - 2 pi i u_k with
    u_0 = 0 and u_1 = -2 pi i (validated against a symbolic Taylor oracle
    in the tests)."""
    if Q < 2:
        raise ValueError("Q must be at least 2")
    w = 2j * math.pi
    u = [0j, -w]
    for k in range(Q - 1):
        u.append(((w + k + 2) * u[k + 1] - w * u[k]) / (k + 2))
    return tuple(u)


def trig_poly(x: float, Q: int) -> tuple[float, float]:
    """Square-root-only approximation of (cos 2 pi x, sin 2 pi x) on [0, 1]:
    evaluate the truncated series, then normalize onto the unit circle."""
    coeffs = trig_series_coeffs(Q)
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * x + c
    w = 1.0 + (x - 1.0) * acc
    r = abs(w)
    return w.real / r, w.imag / r


# ---------------------------------------------------------------------------
# Starting-pair construction
# ---------------------------------------------------------------------------

@dataclass
class BpPair:
    """A unit system together with one of its roots."""

    g: PolySystem
    zeta: ProjectivePoint


def bp_split(f: PolySystem):
    """Split a unit system into the x_0-power coefficients c, the scaled
    mixed-linear block a, and the remainder vanishing to second order
    at e_0.

    Writes f_i = c_i x_0^{d_i} + sqrt(d_i) x_0^{d_i - 1} sum_j a_ij x_j + f'_i;
    in orthonormal coordinates c_i and a_ij are read off directly and the
    map (c, a, f') is an isometry.
    """
    n = f.profile.n
    c = np.empty(n, dtype=np.complex128)
    a = np.empty((n, n), dtype=np.complex128)
    rest = f.coords.copy()
    off = 0
    for i, d in enumerate(f.profile.degrees):
        m = math.comb(f.profile.n + d, f.profile.n)
        c[i] = f.coords[off]
        a[i, :] = f.coords[off + 1: off + 1 + n]
        rest[off: off + 1 + n] = 0.0
        off += m
    return c, a, PolySystem(f.profile, rest)


def kernel_vector(mat) -> np.ndarray:
    """Unit kernel vector of an n x (n+1) matrix, phase-normalized so its
    first non-negligible coordinate is real positive."""
    mat = np.asarray(mat, dtype=np.complex128)
    _, sv, vh = np.linalg.svd(mat)
    if sv.size and sv[-1] <= 1e-10:
        raise DegenerateKernel("matrix has numerical kernel of dimension > 1")
    v = vh[-1].conj()
    top = np.abs(v).max()
    for k in range(len(v)):
        if abs(v[k]) > 1e-12 * top:
            v = v * (v[k].conjugate() / abs(v[k]))
            break
    return v / np.linalg.norm(v)


def psi_expand(profile, mat, zetap) -> PolySystem:
    """Expand sqrt(d_i) <x, zeta'>^{d_i - 1} (sum_j m_ij x_j) into the dense
    canonical basis.  The pairing <x, zeta'> = sum_j x_j conj(zeta'_j) and
    the column pairing m_ij <-> x_j match, so the result vanishes at any
    kernel vector of the matrix."""
    mat = np.asarray(mat, dtype=np.complex128)
    zetap = np.asarray(zetap, dtype=np.complex128)
    nvars = profile.nvars
    if mat.shape != (profile.n, nvars) or len(zetap) != nvars:
        raise ValueError("need an n x (n+1) matrix and a vector of length n+1")
    lin = zetap.conj()
    # powers[k] holds the monomial coefficients of <x, zeta'>^k.
    powers = [np.ones(1, dtype=np.complex128)]
    for k in range(profile.D - 1):
        powers.append(_mul_linear(powers[k], k, lin, nvars))
    eqs = []
    for i, d in enumerate(profile.degrees):
        eqs.append(math.sqrt(d) * _mul_linear(powers[d - 1], d - 1, mat[i], nvars))
    return PolySystem.from_monomial_coeffs(profile, eqs)


def bp(u: PolySystem) -> BpPair:
    """Starting pair from one unit system: split off the coefficient matrix,
    take its kernel point, move the remainder there by the canonical
    unitary, and add the rank-one part vanishing at the kernel point.

    For a uniform unit input the output pair follows the uniform
    system/uniform root product law.  Raises DegenerateKernel on the
    measure-zero inputs whose coefficient matrix is rank deficient.
    """
    c, a, fprime = bp_split(u)
    mat = np.hstack([a, c[:, None]])
    zp = kernel_vector(mat)
    zeta = ProjectivePoint(zp)
    uni = standard_unitary(zeta)
    g = compose_linear(fprime, uni.conj().T) + psi_expand(u.profile, mat, zp)
    return BpPair(g, zeta)
