import numpy as np
import pytest

from homsolve import DegreeProfile, ProjectivePoint, from_real_coords


def unit_system(profile: DegreeProfile, rng: np.random.Generator):
    v = rng.standard_normal(2 * profile.N)
    return from_real_coords(v / np.linalg.norm(v), profile)


def unit_point(nvars: int, rng: np.random.Generator) -> ProjectivePoint:
    v = rng.standard_normal(nvars) + 1j * rng.standard_normal(nvars)
    return ProjectivePoint(v)


def random_unitary(m: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    q, r = np.linalg.qr(a)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
