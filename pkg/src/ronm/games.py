"""Operational harnesses: discrimination games and single-shot information.

The state game sends one arm of a bipartite state through the map and asks a
POVM to name the state; the channel game fixes a probe state and asks which
member of a map ensemble acted. The analytic baseline for both is the best a
map from the relaxed free set (positive semidefinite, unit-trace Choi) can
do, which reduces to a largest-eigenvalue computation. Advantage ratios
against that baseline recover one plus the robustness measure.

Single-shot quantities use base-2 logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .choi import (ChoiMatrix, apply_to_second_factor, choi_of_map,
                   map_from_choi, maximally_entangled)
from .dynamics import (IntermediateMap, identity_intermediate_map,
                       intermediate_map, sample_markovian_model)
from .exceptions import (DimensionMismatch, EmptyEnsemble, InvalidDistribution,
                         PovmCountMismatch)
from .linalg import ZERO_TOL
from .measures import dual_witness, optimal_decomposition, ronm_closed_form

PROB_TOL = 1e-12
STATE_TOL = 1e-9
POVM_SUM_TOL = 1e-10


def _check_square(mat: np.ndarray, what: str) -> np.ndarray:
    m = np.asarray(mat, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{what} must be square, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class StateEnsemble:
    """Weighted bipartite states {(p_j, sigma_j)} on a d x d system pair."""

    items: tuple

    def __post_init__(self):
        if not self.items:
            raise EmptyEnsemble("state ensemble is empty")
        cleaned = []
        side = None
        for p, sigma in self.items:
            m = _check_square(sigma, "ensemble state")
            side = side or m.shape[0]
            if m.shape[0] != side:
                raise DimensionMismatch("ensemble states have mixed dimensions")
            if p < 0:
                raise InvalidDistribution(f"negative probability {p}")
            if abs(complex(np.trace(m)) - 1.0) > STATE_TOL:
                raise InvalidDistribution("ensemble state is not unit trace")
            if np.linalg.eigvalsh((m + m.conj().T) / 2.0)[0] < -STATE_TOL:
                raise InvalidDistribution("ensemble state is not positive semidefinite")
            cleaned.append((float(p), m))
        if abs(sum(p for p, _ in cleaned) - 1.0) > PROB_TOL:
            raise InvalidDistribution("ensemble probabilities do not sum to 1")
        object.__setattr__(self, "items", tuple(cleaned))

    @property
    def side(self) -> int:
        return self.items[0][1].shape[0]

    @property
    def sys_dim(self) -> int:
        return math.isqrt(self.side)


@dataclass(frozen=True)
class POVM:
    """Measurement elements: each >= 0, summing to the identity."""

    elements: tuple

    def __post_init__(self):
        if not self.elements:
            raise EmptyEnsemble("POVM has no elements")
        cleaned = [_check_square(e, "POVM element") for e in self.elements]
        side = cleaned[0].shape[0]
        total = np.zeros((side, side), dtype=complex)
        for e in cleaned:
            if e.shape[0] != side:
                raise DimensionMismatch("POVM elements have mixed dimensions")
            if np.linalg.eigvalsh((e + e.conj().T) / 2.0)[0] < -ZERO_TOL:
                raise InvalidDistribution("POVM element is not positive semidefinite")
            total += e
        if np.abs(total - np.eye(side)).max() > POVM_SUM_TOL:
            raise InvalidDistribution("POVM elements do not sum to the identity")
        object.__setattr__(self, "elements", tuple(cleaned))

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def side(self) -> int:
        return self.elements[0].shape[0]


@dataclass(frozen=True)
class MapEnsemble:
    """Weighted intermediate maps {(p_j, map_j)}."""

    items: tuple

    def __post_init__(self):
        if not self.items:
            raise EmptyEnsemble("map ensemble is empty")
        cleaned = []
        dim = None
        for p, imap in self.items:
            if p < 0:
                raise InvalidDistribution(f"negative probability {p}")
            dim = dim or imap.dim
            if imap.dim != dim:
                raise DimensionMismatch("ensemble maps have mixed dimensions")
            cleaned.append((float(p), imap))
        if abs(sum(p for p, _ in cleaned) - 1.0) > PROB_TOL:
            raise InvalidDistribution("ensemble probabilities do not sum to 1")
        object.__setattr__(self, "items", tuple(cleaned))

    @property
    def sys_dim(self) -> int:
        return self.items[0][1].dim


@dataclass(frozen=True)
class JointDistribution:
    """Joint p(x, y) with flooring diagnostics from :func:`joint_from_game`.

    ``floored_mass`` is the total negative mass that was clipped to zero and
    ``normalization`` the divisor that restored a unit total.
    """

    p: np.ndarray
    floored_mass: float = 0.0
    normalization: float = 1.0

    def __post_init__(self):
        arr = np.asarray(self.p, dtype=float)
        if arr.ndim != 2:
            raise InvalidDistribution(f"joint must be a 2-d table, got shape {arr.shape}")
        if arr.min() < -PROB_TOL:
            raise InvalidDistribution(f"joint has negative entry {arr.min()}")
        if abs(arr.sum() - 1.0) > PROB_TOL:
            raise InvalidDistribution(f"joint sums to {arr.sum()}, expected 1")
        object.__setattr__(self, "p", np.clip(arr, 0.0, None))


def _success_term(superop: np.ndarray, sigma: np.ndarray, element: np.ndarray) -> float:
    moved = apply_to_second_factor(superop, sigma)
    return float(np.real(np.trace(moved @ element)))


def state_disc_success(ensemble: StateEnsemble, povm: POVM,
                       imap: IntermediateMap) -> float:
    """Average success of naming the ensemble member, outcome j for state j.

    Values are reported raw: a non-CP map can push the sum past 1, which is
    exactly the signature the advantage ratios quantify.
    """
    if len(povm) < len(ensemble.items):
        raise DimensionMismatch(
            f"POVM has {len(povm)} elements for {len(ensemble.items)} states")
    if povm.side != ensemble.side or imap.dim != ensemble.sys_dim:
        raise DimensionMismatch("ensemble, POVM and map dimensions disagree")
    return sum(p * _success_term(imap.superop, sigma, element)
               for (p, sigma), element in zip(ensemble.items, povm.elements))


def _game_operator(sigma: np.ndarray, element: np.ndarray, d: int) -> np.ndarray:
    """Operator W with Tr[(I x Gamma)(sigma) element] = d Tr[choi(Gamma) W]."""
    s4 = sigma.reshape(d, d, d, d)
    m4 = element.reshape(d, d, d, d)
    w = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for k in range(d):
            w += np.kron(s4[i, :, k, :].T, m4[k, :, i, :])
    return w


def _relaxed_max(w: np.ndarray, d: int) -> float:
    w = (w + w.conj().T) / 2.0
    return d * float(np.linalg.eigvalsh(w)[-1])


def relaxed_state_game_max(ensemble: StateEnsemble, povm: POVM) -> float:
    """Best state-game success over the relaxed free set (one map for all j)."""
    d = ensemble.sys_dim
    w = np.zeros((d * d, d * d), dtype=complex)
    for (p, sigma), element in zip(ensemble.items, povm.elements):
        w += p * _game_operator(sigma, element, d)
    return _relaxed_max(w, d)


def state_advantage_ratio(imap: IntermediateMap) -> float:
    """Advantage of the map on its own witness instance over the free baseline.

    The instance is the one that makes the dual witness tight: the maximally
    entangled probe with the two-outcome measurement {X, I - X}. The ratio
    equals 1 plus the robustness measure.
    """
    choi = choi_of_map(imap)
    x = dual_witness(choi).matrix
    d2 = x.shape[0]
    ensemble = StateEnsemble(items=((1.0, maximally_entangled(imap.dim)),))
    povm = POVM(elements=(x, np.eye(d2, dtype=complex) - x))
    numerator = state_disc_success(ensemble, povm, imap)
    return numerator / relaxed_state_game_max(ensemble, povm)


def markovian_baseline_success(ensemble: StateEnsemble, povm: POVM,
                               n_samples: int, seed: int) -> float:
    """Empirical free baseline: best success over sampled Markovian windows.

    The identity map is always among the candidates. This is a lower bound on
    the relaxed-set maximum, never above it.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    d = ensemble.sys_dim
    rng = np.random.default_rng(seed)
    best = state_disc_success(ensemble, povm, identity_intermediate_map(d))
    for _ in range(n_samples):
        model = sample_markovian_model(d, int(rng.integers(1, 4)),
                                       int(rng.integers(0, 2 ** 31)))
        window = float(rng.uniform(0.05, 0.5))
        candidate = intermediate_map(model, 0.0, window, "exponential")
        best = max(best, state_disc_success(ensemble, povm, candidate))
    return best


def channel_disc_success(ensemble: MapEnsemble, povm: POVM,
                         psi: np.ndarray) -> float:
    """Average success of naming which map acted on the probe state.

    The POVM carries one extra element for the inconclusive outcome, which
    never contributes to the success probability.
    """
    if len(povm) != len(ensemble.items) + 1:
        raise PovmCountMismatch(
            f"need {len(ensemble.items) + 1} POVM elements, got {len(povm)}")
    psi = _check_square(psi, "probe state")
    d = ensemble.sys_dim
    if psi.shape[0] != d * d or povm.side != d * d:
        raise DimensionMismatch("probe, POVM and map dimensions disagree")
    return sum(p * _success_term(imap.superop, psi, element)
               for (p, imap), element in zip(ensemble.items, povm.elements))


def channel_advantage_ratio(ensemble: MapEnsemble) -> float:
    """Advantage of a map ensemble on its witness instance; 1 + max_j measure.

    The instance probes with the maximally entangled state and measures the
    dual witness of the most non-Markovian member (ties broken by lowest
    index); every other conclusive outcome gets the zero element.
    """
    if any(p <= 0 for p, _ in ensemble.items):
        raise InvalidDistribution("ensemble probabilities must be strictly positive")
    d = ensemble.sys_dim
    robustness = [ronm_closed_form(choi_of_map(imap)) for _, imap in ensemble.items]
    j_star = int(np.argmax(robustness))
    x = dual_witness(choi_of_map(ensemble.items[j_star][1])).matrix
    zero = np.zeros((d * d, d * d), dtype=complex)
    elements = [zero] * len(ensemble.items) + [np.eye(d * d, dtype=complex) - x]
    elements[j_star] = x
    povm = POVM(elements=tuple(elements))
    psi = maximally_entangled(d)
    numerator = channel_disc_success(ensemble, povm, psi)
    denominator = sum(p * _relaxed_max(_game_operator(psi, element, d), d)
                      for (p, _), element in zip(ensemble.items, povm.elements))
    return numerator / denominator


def min_information(joint) -> float:
    """Single-shot mutual information of a joint table, in bits.

    I_min = H_min(X) - H_min(X|Y) with H_min(X) = -log2 max_x p(x) and
    H_min(X|Y) = -log2 sum_y max_x p(x, y).
    """
    if not isinstance(joint, JointDistribution):
        joint = JointDistribution(p=np.asarray(joint, dtype=float))
    p = joint.p
    p_x_max = float(p.sum(axis=1).max())
    guess_sum = float(p.max(axis=0).sum())
    if p_x_max <= 0.0:
        raise InvalidDistribution("joint has no mass")
    return float(np.log2(guess_sum) - np.log2(p_x_max))


def joint_from_game(ensemble: StateEnsemble, povm: POVM,
                    imap: IntermediateMap) -> JointDistribution:
    """Joint p(x, y) = p_x Tr[(I x map)(sigma_x) M_y] over all POVM outcomes.

    Non-CP maps can produce negative raw entries; those are floored at zero
    and the table renormalized, with both diagnostics recorded.
    """
    if povm.side != ensemble.side or imap.dim != ensemble.sys_dim:
        raise DimensionMismatch("ensemble, POVM and map dimensions disagree")
    raw = np.array([[p * _success_term(imap.superop, sigma, element)
                     for element in povm.elements]
                    for p, sigma in ensemble.items])
    floored = np.clip(raw, 0.0, None)
    floored_mass = float(-raw[raw < 0.0].sum())
    normalization = float(floored.sum())
    return JointDistribution(p=floored / normalization,
                             floored_mass=floored_mass,
                             normalization=normalization)


@dataclass(frozen=True)
class InfoBoundReport:
    """Outcome of the single-shot bound check over a game corpus."""

    gaps: tuple
    max_gap: float
    bound: float
    satisfied: bool


def info_bound_check(imap: IntermediateMap, ensembles, povms,
                     slack: float = 1e-8) -> InfoBoundReport:
    """Check I_min(map) - I_min(free part) <= log2(1 + measure) pairwise.

    The free comparison map is delta* from the optimal decomposition of the
    map's Choi matrix, rebuilt into a superoperator. The bound must hold for
    every (ensemble, POVM) pair, not just the worst one.
    """
    ensembles = tuple(ensembles)
    povms = tuple(povms)
    if not ensembles or len(ensembles) != len(povms):
        raise ValueError("need equally many ensembles and POVMs, at least one each")
    choi = choi_of_map(imap)
    measure = ronm_closed_form(choi)
    free_map = map_from_choi(ChoiMatrix(sys_dim=choi.sys_dim,
                                        matrix=optimal_decomposition(choi).delta_star,
                                        t_start=choi.t_start, epsilon=choi.epsilon))
    bound = float(np.log2(1.0 + measure))
    gaps = []
    for ens, povm in zip(ensembles, povms):
        with_map = min_information(joint_from_game(ens, povm, imap))
        with_free = min_information(joint_from_game(ens, povm, free_map))
        gaps.append(with_map - with_free)
    max_gap = max(gaps)
    return InfoBoundReport(gaps=tuple(gaps), max_gap=max_gap, bound=bound,
                           satisfied=all(g <= bound + slack for g in gaps))


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random full-rank density matrix (Wishart normalized to unit trace)."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_state_ensemble(sys_dim: int, n_states: int,
                          rng: np.random.Generator) -> StateEnsemble:
    """Random bipartite ensemble on a (sys_dim x sys_dim)-dimensional pair."""
    probs = rng.random(n_states)
    probs = probs / probs.sum()
    side = sys_dim * sys_dim
    return StateEnsemble(items=tuple(
        (float(p), random_density(side, rng)) for p in probs))


def random_povm(side: int, n_elements: int, rng: np.random.Generator) -> POVM:
    """Random POVM from whitened Wishart blocks: S^-1/2 G_i S^-1/2."""
    blocks = []
    for _ in range(n_elements):
        a = rng.normal(size=(side, side)) + 1j * rng.normal(size=(side, side))
        blocks.append(a @ a.conj().T)
    total = sum(blocks)
    vals, vecs = np.linalg.eigh(total)
    whiten = (vecs / np.sqrt(vals)) @ vecs.conj().T
    elements = []
    for g in blocks:
        e = whiten @ g @ whiten
        elements.append((e + e.conj().T) / 2.0)
    return POVM(elements=tuple(elements))
