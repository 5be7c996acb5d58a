import numpy as np
import pytest

OMEGA = np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=float)


def brute_symplectic(matrix):
    """Symplectic spectrum from the moduli of the eigenvalues of i*Omega*sigma."""
    ev = np.abs(np.linalg.eigvals(1j * OMEGA @ matrix))
    ev = np.sort(ev)
    return ev[0], ev[2]


def brute_pt_nu_minus(matrix):
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    return brute_symplectic(flip @ matrix @ flip)[0]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
