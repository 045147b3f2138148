"""Dense homogeneous polynomial systems and the unitarily invariant
(Weyl) inner product.

A system of n equations in the n+1 variables x_0..x_n is stored as one
flat complex vector of *orthonormal* coordinates: the coefficient of
each monomial is scaled by the square root of that monomial's squared
norm, equations concatenated in order.  Under this scaling the
Euclidean norm of the flat vector equals the system norm, and the
identification with a real vector of length 2N (real part then
imaginary part per monomial) is an exact isometry that round-trips bit
for bit.

Monomials of each degree are ordered by lexicographically descending
exponent tuple (a_0, ..., a_n); this order is the canonical indexing
used everywhere, including the JSON file format.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class DegreeProfile:
    """Shape of a system: n equations with degrees (d_1, ..., d_n)."""

    n: int
    degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if self.n < 1:
            raise ValueError("need at least one equation")
        if len(self.degrees) != self.n:
            raise ValueError(f"expected {self.n} degrees, got {len(self.degrees)}")
        if any(d < 1 for d in self.degrees):
            raise ValueError("all degrees must be >= 1")

    @property
    def nvars(self) -> int:
        return self.n + 1

    @property
    def N(self) -> int:
        """Total number of complex coefficients across all equations."""
        return sum(math.comb(self.n + d, self.n) for d in self.degrees)

    @property
    def D(self) -> int:
        return max(self.degrees)


@lru_cache(maxsize=None)
def monomial_exponents(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All exponent tuples of the given total degree, descending lex order."""
    if nvars == 1:
        return ((degree,),)
    out = []
    for a in range(degree, -1, -1):
        for rest in monomial_exponents(nvars - 1, degree - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_position(nvars: int, degree: int) -> dict[tuple[int, ...], int]:
    return {a: i for i, a in enumerate(monomial_exponents(nvars, degree))}


def weyl_norm_sq_monomial(alpha: tuple[int, ...], degree: int) -> Fraction:
    """Squared norm of the monomial x^alpha of the given degree: a_0!...a_n!/d!."""
    alpha = tuple(int(a) for a in alpha)
    if sum(alpha) != degree:
        raise ValueError(f"exponents {alpha} do not sum to degree {degree}")
    num = 1
    for a in alpha:
        num *= math.factorial(a)
    return Fraction(num, math.factorial(degree))


@lru_cache(maxsize=None)
def _basis(nvars: int, degree: int):
    """(exponent matrix, sqrt of monomial squared norms) for one degree."""
    alphas = monomial_exponents(nvars, degree)
    expo = np.array(alphas, dtype=np.int64)
    sq = np.array([float(weyl_norm_sq_monomial(a, degree)) for a in alphas])
    return expo, np.sqrt(sq)


@lru_cache(maxsize=None)
def _deriv_matrix(nvars: int, degree: int) -> np.ndarray:
    """Stacked map from degree-d orthonormal coordinates to the orthonormal
    coordinates of all n+1 partial derivatives (degree d-1), shape
    (nvars * m', m)."""
    alphas = monomial_exponents(nvars, degree)
    _, s_hi = _basis(nvars, degree)
    _, s_lo = _basis(nvars, degree - 1)
    pos_lo = monomial_position(nvars, degree - 1)
    m_lo = len(s_lo)
    out = np.zeros((nvars * m_lo, len(alphas)))
    for col, alpha in enumerate(alphas):
        for v in range(nvars):
            if alpha[v]:
                beta = alpha[:v] + (alpha[v] - 1,) + alpha[v + 1:]
                row = pos_lo[beta]
                out[v * m_lo + row, col] = alpha[v] * s_lo[row] / s_hi[col]
    return out


@lru_cache(maxsize=None)
def _lin_mul_table(nvars: int, degree: int) -> np.ndarray:
    """Index table for multiplying a degree-d polynomial by a linear form:
    entry (i, v) is the degree-(d+1) position of monomial i times x_v."""
    pos_hi = monomial_position(nvars, degree + 1)
    alphas = monomial_exponents(nvars, degree)
    table = np.empty((len(alphas), nvars), dtype=np.int64)
    for i, alpha in enumerate(alphas):
        for v in range(nvars):
            beta = alpha[:v] + (alpha[v] + 1,) + alpha[v + 1:]
            table[i, v] = pos_hi[beta]
    return table


def _mul_linear(coeffs: np.ndarray, degree: int, lin: np.ndarray, nvars: int) -> np.ndarray:
    """Monomial coefficients of (degree-d polynomial) * (linear form)."""
    table = _lin_mul_table(nvars, degree)
    out = np.zeros(len(monomial_exponents(nvars, degree + 1)), dtype=np.complex128)
    np.add.at(out, table.ravel(), np.outer(coeffs, lin).ravel())
    return out


@lru_cache(maxsize=None)
def _eq_layout(profile: DegreeProfile):
    """Per-equation (slice, degree, monomial count) within the flat vector."""
    out = []
    off = 0
    for d in profile.degrees:
        m = len(monomial_exponents(profile.nvars, d))
        out.append((slice(off, off + m), d, m))
        off += m
    return tuple(out)


class PointEval:
    """Per-point cache of monomial value vectors, shared across systems of
    one profile evaluated at the same point (the continuation loop hits
    each point with several different systems)."""

    __slots__ = ("z", "nvars", "_pows", "_scaled", "_perp")

    def __init__(self, z: np.ndarray):
        self.z = np.asarray(z, dtype=np.complex128)
        self.nvars = len(self.z)
        self._pows = None
        self._scaled = {}
        self._perp = None

    def _powers(self, degree: int) -> np.ndarray:
        if self._pows is None or self._pows.shape[1] <= degree:
            p = np.empty((self.nvars, degree + 1), dtype=np.complex128)
            p[:, 0] = 1.0
            for k in range(1, degree + 1):
                p[:, k] = p[:, k - 1] * self.z
            self._pows = p
        return self._pows

    def scaled_monomials(self, degree: int) -> np.ndarray:
        """Values x^alpha / sqrt(w_alpha) for all monomials of one degree."""
        vals = self._scaled.get(degree)
        if vals is None:
            expo, s = _basis(self.nvars, degree)
            p = self._powers(degree)
            vals = p[np.arange(self.nvars)[None, :], expo].prod(axis=1) / s
            self._scaled[degree] = vals
        return vals


@dataclass
class PolySystem:
    """A dense homogeneous system; `coords` holds the orthonormal flat
    coordinates (treated as immutable after construction)."""

    profile: DegreeProfile
    coords: np.ndarray

    def __post_init__(self):
        self.coords = np.asarray(self.coords, dtype=np.complex128)
        if self.coords.shape != (self.profile.N,):
            raise ValueError(
                f"expected {self.profile.N} coordinates, got {self.coords.shape}")

    @classmethod
    def zero(cls, profile: DegreeProfile) -> "PolySystem":
        return cls(profile, np.zeros(profile.N, dtype=np.complex128))

    @classmethod
    def from_monomial_coeffs(cls, profile: DegreeProfile, eq_coeffs) -> "PolySystem":
        """Build from per-equation dense monomial coefficient vectors in
        canonical order."""
        flat = np.empty(profile.N, dtype=np.complex128)
        for (sl, d, m), c in zip(_eq_layout(profile), eq_coeffs):
            c = np.asarray(c, dtype=np.complex128)
            if c.shape != (m,):
                raise ValueError(f"equation of degree {d} needs {m} coefficients")
            _, s = _basis(profile.nvars, d)
            flat[sl] = c * s
        return cls(profile, flat)

    def monomial_coeffs(self, i: int) -> np.ndarray:
        sl, d, _ = _eq_layout(self.profile)[i]
        _, s = _basis(self.profile.nvars, d)
        return self.coords[sl] / s

    def evaluate(self, z, cache: PointEval | None = None) -> np.ndarray:
        pe = cache if cache is not None else PointEval(z)
        out = np.empty(self.profile.n, dtype=np.complex128)
        for i, (sl, d, _) in enumerate(_eq_layout(self.profile)):
            out[i] = self.coords[sl] @ pe.scaled_monomials(d)
        return out

    def jacobian(self, z, cache: PointEval | None = None) -> np.ndarray:
        """Differential as an n x (n+1) matrix of partial derivatives."""
        pe = cache if cache is not None else PointEval(z)
        nvars = self.profile.nvars
        out = np.empty((self.profile.n, nvars), dtype=np.complex128)
        for i, (sl, d, _) in enumerate(_eq_layout(self.profile)):
            if d == 1:
                _, s = _basis(nvars, 1)
                out[i] = self.coords[sl] / s
                continue
            dm = _deriv_matrix(nvars, d)
            parts = (dm @ self.coords[sl]).reshape(nvars, -1)
            out[i] = parts @ pe.scaled_monomials(d - 1)
        return out

    def __add__(self, other: "PolySystem") -> "PolySystem":
        if other.profile != self.profile:
            raise ValueError("profile mismatch")
        return PolySystem(self.profile, self.coords + other.coords)

    def __sub__(self, other: "PolySystem") -> "PolySystem":
        if other.profile != self.profile:
            raise ValueError("profile mismatch")
        return PolySystem(self.profile, self.coords - other.coords)

    def __mul__(self, scalar) -> "PolySystem":
        return PolySystem(self.profile, self.coords * scalar)

    __rmul__ = __mul__


def weyl_inner(f: PolySystem, g: PolySystem) -> complex:
    """Hermitian inner product, conjugate-linear in the second argument."""
    if f.profile != g.profile:
        raise ValueError("profile mismatch")
    return complex(np.vdot(g.coords, f.coords))


def weyl_norm(f: PolySystem) -> float:
    return float(np.linalg.norm(f.coords))


def normalized(f: PolySystem) -> PolySystem:
    nrm = weyl_norm(f)
    if nrm == 0.0:
        raise ValueError("cannot normalize the zero system")
    return f * (1.0 / nrm)


def compose_linear(f: PolySystem, U) -> PolySystem:
    """System whose value at every x equals f(Ux), by exact expansion of
    the substitution x_j -> sum_k U[j,k] x_k."""
    U = np.asarray(U, dtype=np.complex128)
    nvars = f.profile.nvars
    if U.shape != (nvars, nvars):
        raise ValueError(f"substitution matrix must be {nvars}x{nvars}")
    eqs = []
    for i, (sl, d, m) in enumerate(_eq_layout(f.profile)):
        coeffs = f.monomial_coeffs(i)
        acc = np.zeros(m, dtype=np.complex128)
        for idx in np.nonzero(coeffs)[0]:
            alpha = monomial_exponents(nvars, d)[idx]
            poly = np.ones(1, dtype=np.complex128)
            deg = 0
            for v in range(nvars):
                for _ in range(alpha[v]):
                    poly = _mul_linear(poly, deg, U[v], nvars)
                    deg += 1
            acc += coeffs[idx] * poly
        eqs.append(acc)
    return PolySystem.from_monomial_coeffs(f.profile, eqs)


def to_real_coords(f: PolySystem) -> np.ndarray:
    """Isometric image of f as a real vector of length 2N."""
    out = np.empty(2 * f.profile.N)
    out[0::2] = f.coords.real
    out[1::2] = f.coords.imag
    return out


def from_real_coords(v, profile: DegreeProfile) -> PolySystem:
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (2 * profile.N,):
        raise ValueError(f"expected {2 * profile.N} real coordinates, got {v.shape}")
    return PolySystem(profile, v[0::2] + 1j * v[1::2])


# ---------------------------------------------------------------------------
# JSON file format
# ---------------------------------------------------------------------------
#
# {"n": int, "degrees": [int, ...],
#  "equations": [[{"exponents": [int, ...], "re": float, "im": float}, ...], ...]}
#
# Exponent lists have length n+1 and sum to the equation degree.  Omitted
# monomials are zero; listing the same exponent tuple twice is an error.

def system_to_obj(f: PolySystem) -> dict:
    eqs = []
    for i, (sl, d, _) in enumerate(_eq_layout(f.profile)):
        coeffs = f.monomial_coeffs(i)
        alphas = monomial_exponents(f.profile.nvars, d)
        terms = []
        for alpha, c in zip(alphas, coeffs):
            if c != 0:
                terms.append({"exponents": list(alpha), "re": float(c.real),
                              "im": float(c.imag)})
        eqs.append(terms)
    return {"n": f.profile.n, "degrees": list(f.profile.degrees), "equations": eqs}


def system_from_obj(obj) -> PolySystem:
    if not isinstance(obj, dict):
        raise ValueError("system file must contain a JSON object")
    try:
        n = int(obj["n"])
        degrees = tuple(int(d) for d in obj["degrees"])
        equations = obj["equations"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed system object: {exc}") from exc
    profile = DegreeProfile(n, degrees)
    if len(equations) != n:
        raise ValueError(f"expected {n} equations, got {len(equations)}")
    eq_coeffs = []
    for i, (terms, d) in enumerate(zip(equations, degrees)):
        pos = monomial_position(profile.nvars, d)
        c = np.zeros(len(pos), dtype=np.complex128)
        seen = set()
        for term in terms:
            alpha = tuple(int(a) for a in term["exponents"])
            if len(alpha) != profile.nvars:
                raise ValueError(f"equation {i}: exponent list must have length {profile.nvars}")
            if alpha not in pos:
                raise ValueError(f"equation {i}: exponents {alpha} do not match degree {d}")
            if alpha in seen:
                raise ValueError(f"equation {i}: duplicate exponents {alpha}")
            seen.add(alpha)
            c[pos[alpha]] = float(term["re"]) + 1j * float(term["im"])
        eq_coeffs.append(c)
    return PolySystem.from_monomial_coeffs(profile, eq_coeffs)


def dump_system(f: PolySystem) -> str:
    return json.dumps(system_to_obj(f))


def parse_system(text: str) -> PolySystem:
    return system_from_obj(json.loads(text))
