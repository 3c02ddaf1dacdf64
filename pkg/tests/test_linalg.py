import numpy as np
import pytest

from ronm.exceptions import NotHermitian
from ronm.linalg import (hermitian_eig, is_hermitian, kron, matrix_exp,
                         trace_norm, unvec, vec)

from conftest import SIGMA_X, SIGMA_Z, random_hermitian, random_unitary


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------

def kron_oracle(a, b):
    da, db = a.shape[0], b.shape[0]
    out = np.zeros((da * db, da * db), dtype=complex)
    for i in range(da):
        for j in range(da):
            for k in range(db):
                for l in range(db):
                    out[i * db + k, j * db + l] = a[i, j] * b[k, l]
    return out


def cofactor_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0.0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * cofactor_det(minor)
    return total


def charpoly_roots(matrix):
    """All eigenvalues of a Hermitian matrix by sign scanning plus bisection."""
    n = matrix.shape[0]

    def p(x):
        shifted = matrix - x * np.eye(n)
        return cofactor_det([list(row) for row in shifted]).real

    radius = float(np.abs(matrix).sum(axis=1).max()) + 1.0
    xs = np.linspace(-radius, radius, 4001)
    values = [p(x) for x in xs]
    roots = []
    for lo, hi, vlo, vhi in zip(xs, xs[1:], values, values[1:]):
        if vlo == 0.0:
            roots.append(lo)
            continue
        if np.sign(vlo) == np.sign(vhi):
            continue
        a, b, fa = lo, hi, vlo
        while b - a > 1e-12:
            mid = 0.5 * (a + b)
            fm = p(mid)
            if np.sign(fm) == np.sign(fa):
                a, fa = mid, fm
            else:
                b = mid
        roots.append(0.5 * (a + b))
    return sorted(roots, reverse=True)


def taylor_exp(matrix, terms=30):
    acc = np.eye(matrix.shape[0], dtype=complex)
    term = np.eye(matrix.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ matrix / k
        acc = acc + term
    return acc


# ---------------------------------------------------------------------------
# kron
# ---------------------------------------------------------------------------

def test_kron_identity():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_diagonal():
    got = kron(np.diag([1.0, 2.0]), np.diag([3.0, 4.0]))
    assert np.allclose(got, np.diag([3.0, 4.0, 6.0, 8.0]))


def test_kron_matches_entrywise_oracle():
    assert np.array_equal(kron(SIGMA_X, SIGMA_Z), kron_oracle(SIGMA_X, SIGMA_Z))


def test_kron_mixed_product(rng):
    for _ in range(10):
        a, b, c, d = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
                      for _ in range(4))
        assert np.allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12)


# ---------------------------------------------------------------------------
# hermitian_eig
# ---------------------------------------------------------------------------

def test_eig_diagonal():
    dec = hermitian_eig(np.diag([3.0, 1.0, 2.0]).astype(complex))
    assert np.allclose(dec.eigenvalues, [3.0, 2.0, 1.0])


def test_eig_pauli_x():
    dec = hermitian_eig(SIGMA_X)
    assert np.allclose(dec.eigenvalues, [1.0, -1.0])


def test_eig_matches_charpoly_bisection(rng):
    m = random_hermitian(4, rng)
    expected = charpoly_roots(m)
    got = hermitian_eig(m).eigenvalues
    assert len(expected) == 4
    assert np.allclose(got, expected, atol=1e-9)


def test_eig_roundtrip_many_dims(rng):
    for _ in range(1000):
        dim = int(rng.integers(2, 17))
        m = random_hermitian(dim, rng)
        dec = hermitian_eig(m)
        assert np.abs(dec.reconstruct() - m).max() <= 1e-10
        overlaps = dec.eigenvectors.conj().T @ dec.eigenvectors
        assert np.abs(overlaps - np.eye(dim)).max() <= 1e-10
        assert np.all(np.diff(dec.eigenvalues) <= 1e-12)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


# ---------------------------------------------------------------------------
# trace_norm
# ---------------------------------------------------------------------------

def test_trace_norm_identity():
    assert trace_norm(np.eye(2)) == pytest.approx(2.0)


def test_trace_norm_pauli_z():
    assert trace_norm(SIGMA_Z) == pytest.approx(2.0)


def test_trace_norm_dephasing_spectrum(rng):
    # spectrum {0, 0, -0.01, 1.01}: the short-window dephasing Choi shape
    u = random_unitary(4, rng)
    m = (u * np.array([0.0, 0.0, -0.01, 1.01])) @ u.conj().T
    assert trace_norm(m) == pytest.approx(1.02, abs=1e-12)


def test_trace_norm_bounds_trace(rng):
    for _ in range(20):
        m = random_hermitian(int(rng.integers(2, 6)), rng)
        assert trace_norm(m) >= abs(np.trace(m).real) - 1e-12


def test_trace_norm_unitary_invariance(rng):
    for _ in range(10):
        m = random_hermitian(4, rng)
        u = matrix_exp(1j * random_hermitian(4, rng))
        assert trace_norm(u @ m @ u.conj().T) == pytest.approx(trace_norm(m), abs=1e-10)


def test_trace_norm_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        trace_norm(np.array([[0.0, 1.0], [0.0, 0.0]]))


# ---------------------------------------------------------------------------
# matrix_exp
# ---------------------------------------------------------------------------

def test_exp_zero():
    assert np.allclose(matrix_exp(np.zeros((3, 3))), np.eye(3))


def test_exp_diagonal():
    got = matrix_exp(np.diag([1.0, -2.0]).astype(complex))
    assert np.allclose(got, np.diag([np.e, np.exp(-2.0)]))


def test_exp_matches_taylor_oracle(rng):
    for _ in range(10):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = m / max(1.0, np.linalg.norm(m, 2))
        assert np.abs(matrix_exp(m) - taylor_exp(m)).max() <= 1e-10


# ---------------------------------------------------------------------------
# vec / unvec and hermiticity checks
# ---------------------------------------------------------------------------

def test_vec_is_column_stacking():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(vec(m), [1.0, 3.0, 2.0, 4.0])
    assert np.array_equal(unvec(vec(m)), m)


def test_is_hermitian_scale_relative():
    m = np.array([[1e6, 1.0], [1.0 + 1e-8, 2e6]], dtype=complex)
    assert is_hermitian(m)  # deviation 1e-8 against scale 2e6 is inside 1e-12 relative
    assert not is_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
