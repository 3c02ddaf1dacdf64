"""The robustness measure for short-time maps.

The measure of a map with Choi matrix rho is the minimum Markovian mixing
weight s that makes (rho + s tau)/(1+s) Markovian again. Over the relaxed
free set (positive semidefinite, unit trace) it has the closed form
(||rho||_1 - 1)/2, certified on both sides of the semidefinite program:
the primal value trace(Delta+) - 1 and the dual witness value
Tr[rho X] - 1 with X the projector onto the strictly positive eigenspace.

Rates per unit time are finite-epsilon estimates of the epsilon -> 0 limit,
extrapolated by one Richardson step (first-order maps leave an O(epsilon)
truncation that the step cancels).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .choi import ChoiMatrix, choi_of_map
from .dynamics import GKLSModel, intermediate_map
from .exceptions import BadInterval, NegativeInput, TraceNotOne
from .linalg import ZERO_TOL, hermitian_eig, require_hermitian, trace_norm

#: Default window length for evaluating the short-time limit.
DEFAULT_EPSILON = 1e-6

#: Tolerance on the unit-trace precondition of Choi-shaped inputs.
TRACE_TOL = 1e-9

#: Rates below this are treated as zero when locating non-Markovian windows.
RATE_FLOOR = 1e-9


def _as_choi_array(choi) -> np.ndarray:
    """Accept a ChoiMatrix or a bare array; enforce Hermitian and unit trace."""
    mat = choi.matrix if isinstance(choi, ChoiMatrix) else choi
    mat = require_hermitian(mat, "Choi matrix")
    tr = complex(np.trace(mat))
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceNotOne(f"Choi matrix has trace {tr}, expected 1")
    return mat


@dataclass(frozen=True)
class OptimalDecomposition:
    """Pseudo-mixture rho = (1 + s*) delta* - s* tau* from the spectral split.

    ``delta_plus``/``delta_minus`` are the positive/negative spectral parts;
    ``tau_star`` is None when s* = 0 (nothing to subtract).
    """

    s_star: float
    delta_plus: np.ndarray
    delta_minus: np.ndarray
    delta_star: np.ndarray
    tau_star: np.ndarray | None


@dataclass(frozen=True)
class Witness:
    """Feasible dual solution: X >= 0 with sup over the free set of Tr[. X] <= 1."""

    matrix: np.ndarray
    value: float


@dataclass(frozen=True)
class MeasureReport:
    """Everything the measure says about one model at one time point."""

    t: float
    epsilon: float
    ronm: float
    ronm_rate: float
    rhp_integrand: float
    decomposition: OptimalDecomposition
    witness: Witness
    duality_gap: float


def ronm_closed_form(choi) -> float:
    """Closed form of the measure: max(0, (trace norm - 1) / 2)."""
    mat = _as_choi_array(choi)
    return max(0.0, (trace_norm(mat) - 1.0) / 2.0)


def optimal_decomposition(choi) -> OptimalDecomposition:
    """Split the spectrum into positive and negative parts and normalize."""
    mat = _as_choi_array(choi)
    eig = hermitian_eig(mat, "Choi matrix")
    vals, vecs = eig.eigenvalues, eig.eigenvectors
    pos = vals > ZERO_TOL
    neg = vals < -ZERO_TOL
    vp = vecs[:, pos]
    delta_plus = (vp * vals[pos]) @ vp.conj().T
    vn = vecs[:, neg]
    delta_minus = (vn * (-vals[neg])) @ vn.conj().T
    s_star = float(np.sum(-vals[neg]))
    if not np.any(neg):
        s_star = 0.0
        tau_star = None
    else:
        tau_star = delta_minus / s_star
    delta_star = delta_plus / (1.0 + s_star)
    return OptimalDecomposition(s_star=s_star, delta_plus=delta_plus,
                                delta_minus=delta_minus, delta_star=delta_star,
                                tau_star=tau_star)


def dual_witness(choi) -> Witness:
    """Optimal dual solution: the projector onto the strictly positive eigenspace.

    The kernel is excluded, so the witness is a projector with operator norm 1
    (the free-set constraint is tight) and Tr[rho X] - 1 recovers the measure.
    """
    mat = _as_choi_array(choi)
    eig = hermitian_eig(mat, "Choi matrix")
    vp = eig.eigenvectors[:, eig.eigenvalues > ZERO_TOL]
    witness = vp @ vp.conj().T
    value = float(np.real(np.trace(mat @ witness))) - 1.0
    return Witness(matrix=witness, value=value)


def primal_value(choi) -> float:
    """Optimal primal value: trace of the positive spectral part, minus one.

    delta = Delta+ is feasible (delta >= rho and delta >= 0 both hold because
    delta - rho = Delta- >= 0) and no feasible delta has smaller trace.
    """
    dec = optimal_decomposition(choi)
    return float(np.real(np.trace(dec.delta_plus))) - 1.0


def ronm_rate(model: GKLSModel, t: float, epsilon: float = DEFAULT_EPSILON) -> float:
    """Measure per unit time at t: Richardson-extrapolated N(epsilon)/epsilon."""

    def r(eps: float) -> float:
        choi = choi_of_map(intermediate_map(model, t, eps, "first_order"))
        return ronm_closed_form(choi) / eps

    return 2.0 * r(epsilon / 2.0) - r(epsilon)


def rhp_integrand(model: GKLSModel, t: float, epsilon: float = DEFAULT_EPSILON) -> float:
    """Trace-norm growth rate at t: Richardson on (||choi||_1 - 1)/epsilon.

    Pointwise this equals twice :func:`ronm_rate`.
    """

    def g(eps: float) -> float:
        choi = choi_of_map(intermediate_map(model, t, eps, "first_order"))
        return (trace_norm(choi.matrix) - 1.0) / eps

    return 2.0 * g(epsilon / 2.0) - g(epsilon)


def simpson_sum(values, spacing: float) -> float:
    """Composite Simpson rule over equally spaced samples (even panel count)."""
    ys = np.asarray(values, dtype=float)
    n = ys.size - 1
    if n < 2 or n % 2:
        raise BadInterval(f"Simpson rule needs an even number >= 2 of panels, got {n}")
    return float(spacing / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-2:2].sum()))


def _simpson(fn, t0: float, t1: float, steps: int) -> float:
    grid = np.linspace(t0, t1, steps + 1)
    return simpson_sum([fn(t) for t in grid], (t1 - t0) / steps)


def _active_boundaries(fn, t0: float, t1: float, steps: int, tol_t: float = 1e-8) -> list[float]:
    """Bisect the edges of regions where fn exceeds the rate floor."""
    grid = np.linspace(t0, t1, steps + 1)
    active = [fn(t) > RATE_FLOOR for t in grid]
    cuts = []
    for a, b, on_a, on_b in zip(grid, grid[1:], active, active[1:]):
        if on_a == on_b:
            continue
        lo, hi = a, b
        while hi - lo > tol_t:
            mid = 0.5 * (lo + hi)
            if (fn(mid) > RATE_FLOOR) == on_a:
                lo = mid
            else:
                hi = mid
        cuts.append(0.5 * (lo + hi))
    return cuts


def _integrate_rate(fn, t0: float, t1: float, steps: int, refine: bool) -> float:
    if t1 <= t0:
        raise BadInterval(f"need t1 > t0, got [{t0}, {t1}]")
    if steps < 2 or steps % 2:
        raise BadInterval(f"steps must be even and >= 2, got {steps}")
    if not refine:
        return _simpson(fn, t0, t1, steps)
    cuts = _active_boundaries(fn, t0, t1, steps)
    edges = [t0] + cuts + [t1]
    total = 0.0
    for a, b in zip(edges, edges[1:]):
        share = max(2, int(np.ceil(steps * (b - a) / (t1 - t0))))
        share += share % 2
        total += _simpson(fn, a, b, share)
    return total


def total_ronm(model: GKLSModel, t0: float, t1: float, steps: int,
               epsilon: float = DEFAULT_EPSILON, refine: bool = False) -> float:
    """Time integral of :func:`ronm_rate` over [t0, t1] by composite Simpson.

    With ``refine`` the edges of the non-Markovian windows are located by
    bisection first and each smooth piece is integrated separately, which
    removes the kink error at modest step counts.
    """
    return _integrate_rate(lambda t: ronm_rate(model, t, epsilon), t0, t1, steps, refine)


def total_rhp(model: GKLSModel, t0: float, t1: float, steps: int,
              epsilon: float = DEFAULT_EPSILON, refine: bool = False) -> float:
    """Time integral of :func:`rhp_integrand`; equals twice :func:`total_ronm`."""
    return _integrate_rate(lambda t: rhp_integrand(model, t, epsilon), t0, t1, steps, refine)


def normalized_ronm(total: float) -> float:
    """Map the total measure onto [0, 1): total / (1 + total)."""
    if total < 0:
        raise NegativeInput(f"total measure must be >= 0, got {total}")
    return total / (1.0 + total)


def measure_report(model: GKLSModel, t: float,
                   epsilon: float = DEFAULT_EPSILON) -> MeasureReport:
    """Evaluate everything at one time point: value, certificates, rates."""
    choi = choi_of_map(intermediate_map(model, t, epsilon, "first_order"))
    value = ronm_closed_form(choi)
    dec = optimal_decomposition(choi)
    witness = dual_witness(choi)
    gap = abs(primal_value(choi) - witness.value)
    return MeasureReport(t=float(t), epsilon=float(epsilon), ronm=value,
                         ronm_rate=ronm_rate(model, t, epsilon),
                         rhp_integrand=rhp_integrand(model, t, epsilon),
                         decomposition=dec, witness=witness, duality_gap=gap)
