import numpy as np
import pytest

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def random_hermitian(dim, rng, scale=1.0):
    a = scale * (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return (a + a.conj().T) / 2.0


def random_density(dim, rng):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_unitary(dim, rng):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def trace_one_hermitian(dim, rng, force_negative=False):
    m = random_hermitian(dim, rng)
    if force_negative:
        vals, vecs = np.linalg.eigh(m)
        vals = vals - vals.min() + 0.05
        vals[0] = -max(0.05, 0.2 * vals.max())
        m = (vecs * vals) @ vecs.conj().T
    return m / np.real(np.trace(m))


def with_spectrum(eigenvalues, rng):
    """Hermitian matrix with the given spectrum and a random eigenbasis."""
    vals = np.asarray(eigenvalues, dtype=float)
    u = random_unitary(vals.size, rng)
    return (u * vals) @ u.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
