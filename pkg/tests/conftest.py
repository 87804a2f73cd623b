import numpy as np
import pytest

from openqsl.models import IDENTITY_2, SIGMA_MINUS, SIGMA_X, SIGMA_Y, SIGMA_Z


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_complex_matrix(rng, dim):
    return rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))


def random_hermitian(rng, dim):
    a = random_complex_matrix(rng, dim)
    return 0.5 * (a + a.conj().T)


def random_state(rng, dim):
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


__all__ = [
    "IDENTITY_2",
    "SIGMA_MINUS",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "random_complex_matrix",
    "random_hermitian",
    "random_state",
]
