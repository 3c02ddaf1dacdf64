import numpy as np
import pytest

from ronm.choi import choi_of_map
from ronm.dynamics import (GKLSModel, IntermediateMap, RateFunction,
                           apply_generator, compose_maps,
                           generator_superoperator, identity_intermediate_map,
                           intermediate_map, sample_markovian_model)
from ronm.exceptions import (DimensionMismatch, NonPositiveEpsilon,
                             TimeMismatch)
from ronm.linalg import kron, vec, unvec
from ronm.measures import ronm_closed_form

from conftest import SIGMA_Z, random_density, random_hermitian

KET_PLUS = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
KET_MINUS = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)
PLUS = np.outer(KET_PLUS, KET_PLUS.conj())
MINUS = np.outer(KET_MINUS, KET_MINUS.conj())


def dephasing(gamma):
    return GKLSModel(dim=2, hamiltonian=np.zeros((2, 2)),
                     dissipators=((SIGMA_Z, RateFunction.constant(gamma)),))


def random_model(rng, dim=2, n_diss=2):
    diss = tuple(
        (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)),
         RateFunction.constant(float(rng.uniform(-1.0, 1.0))))
        for _ in range(n_diss))
    return GKLSModel(dim=dim, hamiltonian=random_hermitian(dim, rng), dissipators=diss)


def generator_oracle(model, t, rho):
    """Separate transcription: commutator and anticommutator coded afresh."""

    def commutator(a, b):
        return a @ b - b @ a

    def anticommutator(a, b):
        return a @ b + b @ a

    h = model.hamiltonian_at(t)
    out = -1j * commutator(h, rho)
    for v, rate in model.dissipators:
        out = out + rate(t) * (v @ rho @ v.conj().T
                               - 0.5 * anticommutator(v.conj().T @ v, rho))
    return out


# ---------------------------------------------------------------------------
# rate functions
# ---------------------------------------------------------------------------

def test_rate_kinds():
    assert RateFunction.constant(0.3)(17.0) == 0.3
    assert RateFunction.sinusoid()(np.pi / 2) == pytest.approx(1.0)
    assert RateFunction.sinusoid(2.0, 3.0, 0.5, -1.0)(0.7) == pytest.approx(
        2.0 * np.sin(3.0 * 0.7 + 0.5) - 1.0)
    assert RateFunction.polynomial(1.0, 0.0, 2.0)(3.0) == pytest.approx(19.0)
    table = RateFunction.table([(0.0, 0.0), (1.0, 2.0)])
    assert table(0.5) == pytest.approx(1.0)
    assert table(-5.0) == 0.0 and table(7.0) == 2.0  # clamped


def test_rate_validation():
    with pytest.raises(ValueError):
        RateFunction("spline", (1.0,))
    with pytest.raises(ValueError):
        RateFunction.table([(1.0, 0.0), (0.5, 1.0)])


# ---------------------------------------------------------------------------
# apply_generator
# ---------------------------------------------------------------------------

def test_generator_fixes_pointer_state():
    ket0 = np.diag([1.0, 0.0]).astype(complex)
    out = apply_generator(dephasing(0.7), 0.0, ket0)
    assert np.abs(out).max() <= 1e-14


def test_generator_on_plus_state():
    out = apply_generator(dephasing(0.3), 0.0, PLUS)
    assert np.allclose(out, 0.3 * (MINUS - PLUS), atol=1e-12)


def test_generator_matches_transcription_oracle(rng):
    for _ in range(20):
        model = random_model(rng, dim=int(rng.integers(2, 4)))
        rho = random_density(model.dim, rng)
        got = apply_generator(model, 0.3, rho)
        assert np.allclose(got, generator_oracle(model, 0.3, rho), atol=1e-12)
        assert abs(np.trace(got)) <= 1e-12
        assert np.abs(got - got.conj().T).max() <= 1e-12


def test_generator_rejects_wrong_shape():
    with pytest.raises(DimensionMismatch):
        apply_generator(dephasing(0.1), 0.0, np.eye(3))


# ---------------------------------------------------------------------------
# generator_superoperator
# ---------------------------------------------------------------------------

def test_superoperator_trivial_model():
    model = GKLSModel(dim=2, hamiltonian=np.zeros((2, 2)))
    assert np.abs(generator_superoperator(model, 0.0)).max() == 0.0


def test_superoperator_consistent_with_direct_action(rng):
    model = dephasing(1.0)
    s = generator_superoperator(model, 0.0)
    for _ in range(20):
        rho = random_density(2, rng)
        assert np.allclose(unvec(s @ vec(rho)),
                           apply_generator(model, 0.0, rho), atol=1e-12)


def test_superoperator_pure_hamiltonian_identity():
    h = SIGMA_Z / 2.0
    model = GKLSModel(dim=2, hamiltonian=h)
    expected = -1j * (kron(np.eye(2), h) - kron(h.T, np.eye(2)))
    assert np.array_equal(generator_superoperator(model, 0.0), expected)


# ---------------------------------------------------------------------------
# intermediate_map
# ---------------------------------------------------------------------------

def test_first_order_is_definitional(rng):
    model = random_model(rng)
    eps = 1e-3
    imap = intermediate_map(model, 0.5, eps, "first_order")
    assert np.allclose(imap.superop - np.eye(4),
                       eps * generator_superoperator(model, 0.5), atol=1e-15)
    assert imap.t_start == 0.5 and imap.epsilon == eps


def test_first_order_dephasing_action():
    imap = intermediate_map(dephasing(-0.5), 0.0, 0.02, "first_order")
    expected = PLUS + 0.02 * (-0.5) * (MINUS - PLUS)
    assert np.allclose(imap.apply(PLUS), expected, atol=1e-14)


def test_exponential_and_first_order_agree_to_second_order():
    model = dephasing(-0.4)
    epsilons = np.array([1e-2, 1e-3, 1e-4])
    deviations = []
    for eps in epsilons:
        a = intermediate_map(model, 1.0, eps, "first_order").superop
        b = intermediate_map(model, 1.0, eps, "exponential").superop
        deviations.append(np.abs(a - b).max())
    slope = np.polyfit(np.log(epsilons), np.log(deviations), 1)[0]
    assert abs(slope - 2.0) <= 0.1
    fitted_c = np.array(deviations) / epsilons ** 2
    assert fitted_c.max() / fitted_c.min() <= 1.5  # constant within the sweep


def test_epsilon_must_be_positive():
    with pytest.raises(NonPositiveEpsilon):
        intermediate_map(dephasing(0.1), 0.0, 0.0)


# ---------------------------------------------------------------------------
# compose_maps
# ---------------------------------------------------------------------------

def test_compose_with_identity():
    imap = intermediate_map(dephasing(0.3), 0.0, 0.1, "exponential")
    ident = identity_intermediate_map(2, t_start=0.1)
    composed = compose_maps(ident, imap)
    assert np.allclose(composed.superop, imap.superop)
    assert composed.t_start == 0.0 and composed.epsilon == pytest.approx(0.1)


def test_compose_semigroup_for_constant_rate():
    model = dephasing(0.8)
    first = intermediate_map(model, 0.0, 0.3, "exponential")
    second = intermediate_map(model, 0.3, 0.5, "exponential")
    whole = intermediate_map(model, 0.0, 0.8, "exponential")
    assert np.abs(compose_maps(second, first).superop - whole.superop).max() <= 1e-10


def test_compose_first_order_expansion_bound(rng):
    model = random_model(rng)
    s = generator_superoperator(model, 0.0)
    e1, e2 = 1e-3, 2e-3
    first = intermediate_map(model, 0.0, e1, "first_order")
    second = IntermediateMap(dim=2, superop=np.eye(4) + e2 * s, t_start=e1,
                             epsilon=e2, construction="first_order")
    composed = compose_maps(second, first)
    deviation = np.abs(composed.superop - (np.eye(4) + (e1 + e2) * s)).max()
    assert deviation <= e1 * e2 * np.linalg.norm(s, 2) ** 2 + 1e-15


def test_compose_rejects_time_gap():
    a = intermediate_map(dephasing(0.1), 0.0, 0.1)
    b = intermediate_map(dephasing(0.1), 0.5, 0.1)
    with pytest.raises(TimeMismatch):
        compose_maps(b, a)


def test_compose_rejects_dim_mismatch(rng):
    a = intermediate_map(random_model(rng, dim=2), 0.0, 0.1)
    b3 = intermediate_map(random_model(rng, dim=3), 0.1, 0.1)
    with pytest.raises(DimensionMismatch):
        compose_maps(b3, a)


# ---------------------------------------------------------------------------
# sample_markovian_model
# ---------------------------------------------------------------------------

def test_sampler_is_deterministic():
    a = sample_markovian_model(3, 2, seed=99)
    b = sample_markovian_model(3, 2, seed=99)
    assert np.array_equal(a.hamiltonian, b.hamiltonian)
    for (va, ra), (vb, rb) in zip(a.dissipators, b.dissipators):
        assert np.array_equal(va, vb) and ra.params == rb.params


def test_sampler_maps_are_completely_positive():
    for seed in range(30):
        model = sample_markovian_model(2 + seed % 3, 1 + seed % 3, seed)
        choi = choi_of_map(intermediate_map(model, 0.0, 1e-6, "first_order"))
        assert np.linalg.eigvalsh(choi.matrix)[0] >= -1e-10


def test_sampler_maps_have_zero_measure():
    for seed in range(100):
        model = sample_markovian_model(2, 1 + seed % 3, seed)
        choi = choi_of_map(intermediate_map(model, 0.0, 1e-6, "first_order"))
        assert ronm_closed_form(choi.matrix) <= 1e-9


def test_sampler_rejects_large_dims():
    with pytest.raises(ValueError):
        sample_markovian_model(5, 1, 0)


# ---------------------------------------------------------------------------
# map invariants
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("mode", ["first_order", "exponential"])
def test_maps_preserve_trace_and_hermiticity(rng, mode):
    for _ in range(5):
        model = random_model(rng, dim=2)
        imap = intermediate_map(model, 0.2, 1e-4 if mode == "first_order" else 0.3, mode)
        for _ in range(10):
            rho = random_density(2, rng)
            out = imap.apply(rho)
            assert abs(np.trace(out) - 1.0) <= 1e-9
            assert np.abs(out - out.conj().T).max() <= 1e-10


def test_markovian_mixtures_stay_free(rng):
    eps = 1e-6
    for _ in range(20):
        m1 = sample_markovian_model(2, int(rng.integers(1, 4)), int(rng.integers(0, 2 ** 31)))
        m2 = sample_markovian_model(2, int(rng.integers(1, 4)), int(rng.integers(0, 2 ** 31)))
        s1 = generator_superoperator(m1, 0.0)
        s2 = generator_superoperator(m2, 0.0)
        for p in (0.25, 0.5, 0.75):
            mixed = IntermediateMap(
                dim=2, superop=np.eye(4) + eps * (p * s1 + (1 - p) * s2),
                t_start=0.0, epsilon=eps, construction="first_order")
            assert ronm_closed_form(choi_of_map(mixed).matrix) <= 1e-9


def test_tabulated_hamiltonian_interpolates():
    h0 = np.zeros((2, 2), dtype=complex)
    h1 = SIGMA_Z.astype(complex)
    model = GKLSModel(dim=2, hamiltonian=((0.0, h0), (1.0, h1)))
    assert np.allclose(model.hamiltonian_at(0.5), 0.5 * SIGMA_Z)
    assert np.allclose(model.hamiltonian_at(-1.0), h0)
    assert np.allclose(model.hamiltonian_at(2.0), h1)
