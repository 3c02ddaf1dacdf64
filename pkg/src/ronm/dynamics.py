"""Time-local generators in Lindblad form and their short-time maps.

A generator acts on density matrices as

    L_t(rho) = -i [H(t), rho] + sum_k g_k(t) (V_k rho V_k^dag - {V_k^dag V_k, rho} / 2)

with H(t) Hermitian. The dynamics is Markovian (CP-divisible) exactly when
every rate g_k(t) is nonnegative; negative rates are allowed here because
they are how non-Markovian windows enter. Superoperators act on
column-vectorized density matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatch, NonPositiveEpsilon, TimeMismatch
from .linalg import kron, matrix_exp, require_hermitian, unvec, vec

RATE_KINDS = ("constant", "sinusoid", "polynomial", "table")


@dataclass(frozen=True)
class RateFunction:
    """Scalar rate g(t).

    ``params`` is kind-specific:
      constant    [value]
      sinusoid    [amplitude, omega, phase, offset] (trailing entries optional)
      polynomial  [c0, c1, ...] meaning sum_k c_k t^k
      table       [[t0, v0], [t1, v1], ...] with t ascending; linear
                  interpolation, clamped to the endpoints outside the range
    """

    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind not in RATE_KINDS:
            raise ValueError(f"unknown rate kind {self.kind!r}, expected one of {RATE_KINDS}")
        if self.kind == "table":
            pts = tuple((float(t), float(v)) for t, v in self.params)
            if not pts:
                raise ValueError("table rate needs at least one (t, value) pair")
            ts = [t for t, _ in pts]
            if any(b <= a for a, b in zip(ts, ts[1:])):
                raise ValueError("table times must be strictly increasing")
            object.__setattr__(self, "params", pts)
        else:
            vals = tuple(float(p) for p in self.params)
            if not vals:
                raise ValueError(f"{self.kind} rate needs at least one parameter")
            object.__setattr__(self, "params", vals)

    @classmethod
    def constant(cls, value: float) -> "RateFunction":
        return cls("constant", (value,))

    @classmethod
    def sinusoid(cls, amplitude: float = 1.0, omega: float = 1.0,
                 phase: float = 0.0, offset: float = 0.0) -> "RateFunction":
        return cls("sinusoid", (amplitude, omega, phase, offset))

    @classmethod
    def polynomial(cls, *coeffs: float) -> "RateFunction":
        return cls("polynomial", tuple(coeffs))

    @classmethod
    def table(cls, points) -> "RateFunction":
        return cls("table", tuple(points))

    def __call__(self, t: float) -> float:
        if self.kind == "constant":
            return self.params[0]
        if self.kind == "sinusoid":
            defaults = (1.0, 1.0, 0.0, 0.0)
            amp, omega, phase, offset = (self.params + defaults[len(self.params):])[:4]
            return amp * np.sin(omega * t + phase) + offset
        if self.kind == "polynomial":
            return float(np.polyval(self.params[::-1], t))
        ts = np.array([p[0] for p in self.params])
        vs = np.array([p[1] for p in self.params])
        return float(np.interp(t, ts, vs))


@dataclass(frozen=True)
class GKLSModel:
    """A time-dependent generator: Hamiltonian plus rated dissipators.

    ``hamiltonian`` is either a constant d x d Hermitian matrix or a sequence
    of (t, matrix) pairs interpolated linearly (clamped outside the range).
    ``dissipators`` is a sequence of (operator, RateFunction) pairs.
    """

    dim: int
    hamiltonian: object
    dissipators: tuple = field(default=())

    def __post_init__(self):
        d = int(self.dim)
        if d < 1:
            raise ValueError("dim must be positive")
        ham = self.hamiltonian
        if isinstance(ham, (list, tuple)) and ham and isinstance(ham[0], (list, tuple)) \
                and len(ham[0]) == 2 and np.ndim(ham[0][1]) == 2:
            entries = []
            for t, m in ham:
                mat = require_hermitian(np.asarray(m, dtype=complex), f"hamiltonian at t={t}")
                if mat.shape != (d, d):
                    raise DimensionMismatch(f"hamiltonian at t={t} has shape {mat.shape}, expected {(d, d)}")
                entries.append((float(t), mat))
            entries.sort(key=lambda tv: tv[0])
            object.__setattr__(self, "hamiltonian", tuple(entries))
        else:
            mat = require_hermitian(np.asarray(ham, dtype=complex), "hamiltonian")
            if mat.shape != (d, d):
                raise DimensionMismatch(f"hamiltonian has shape {mat.shape}, expected {(d, d)}")
            object.__setattr__(self, "hamiltonian", mat)
        diss = []
        for op, rate in self.dissipators:
            v = np.asarray(op, dtype=complex)
            if v.shape != (d, d):
                raise DimensionMismatch(f"dissipator operator has shape {v.shape}, expected {(d, d)}")
            diss.append((v, rate))
        object.__setattr__(self, "dissipators", tuple(diss))

    def hamiltonian_at(self, t: float) -> np.ndarray:
        if isinstance(self.hamiltonian, np.ndarray):
            return self.hamiltonian
        entries = self.hamiltonian
        if t <= entries[0][0]:
            return entries[0][1]
        if t >= entries[-1][0]:
            return entries[-1][1]
        for (t0, m0), (t1, m1) in zip(entries, entries[1:]):
            if t0 <= t <= t1:
                w = (t - t0) / (t1 - t0)
                return (1.0 - w) * m0 + w * m1
        return entries[-1][1]


@dataclass(frozen=True)
class IntermediateMap:
    """The linear map over one time window, stored as a d^2 x d^2 superoperator.

    ``construction`` records how the superoperator was built: "first_order"
    (identity plus epsilon times the generator), "exponential" (matrix
    exponential of the midpoint generator), or "from_choi" for maps rebuilt
    from a Choi matrix.
    """

    dim: int
    superop: np.ndarray
    t_start: float
    epsilon: float
    construction: str

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"state has shape {rho.shape}, expected {(self.dim, self.dim)}")
        return unvec(self.superop @ vec(rho))


def apply_generator(model: GKLSModel, t: float, rho: np.ndarray) -> np.ndarray:
    """Evaluate L_t(rho) directly in matrix form."""
    rho = np.asarray(rho, dtype=complex)
    d = model.dim
    if rho.shape != (d, d):
        raise DimensionMismatch(f"state has shape {rho.shape}, expected {(d, d)}")
    h = model.hamiltonian_at(t)
    out = -1j * (h @ rho - rho @ h)
    for v, rate in model.dissipators:
        g = rate(t)
        vv = v.conj().T @ v
        out = out + g * (v @ rho @ v.conj().T - 0.5 * (vv @ rho + rho @ vv))
    return out


def generator_superoperator(model: GKLSModel, t: float) -> np.ndarray:
    """The d^2 x d^2 matrix S with S vec(rho) = vec(L_t(rho)).

    Built from the column-stacking identity vec(A X B) = (B^T kron A) vec(X),
    so the Hamiltonian part is -i (I kron H - H^T kron I).
    """
    d = model.dim
    eye = np.eye(d, dtype=complex)
    h = model.hamiltonian_at(t)
    s = -1j * (kron(eye, h) - kron(h.T, eye))
    for v, rate in model.dissipators:
        g = rate(t)
        vv = v.conj().T @ v
        s = s + g * (kron(v.conj(), v) - 0.5 * kron(eye, vv) - 0.5 * kron(vv.T, eye))
    return s


def intermediate_map(model: GKLSModel, t: float, epsilon: float,
                     mode: str = "first_order") -> IntermediateMap:
    """Build the map over [t, t + epsilon].

    "first_order" returns I + epsilon S(t); "exponential" returns
    exp(epsilon S(t + epsilon/2)), which is second-order accurate in epsilon
    for time-dependent generators and exact for constant ones.
    """
    if epsilon <= 0:
        raise NonPositiveEpsilon(f"epsilon must be > 0, got {epsilon}")
    d2 = model.dim ** 2
    if mode == "first_order":
        superop = np.eye(d2, dtype=complex) + epsilon * generator_superoperator(model, t)
    elif mode == "exponential":
        superop = matrix_exp(epsilon * generator_superoperator(model, t + epsilon / 2.0))
    else:
        raise ValueError(f"unknown construction {mode!r}")
    return IntermediateMap(dim=model.dim, superop=superop, t_start=float(t),
                           epsilon=float(epsilon), construction=mode)


def identity_intermediate_map(dim: int, t_start: float = 0.0,
                              epsilon: float = 0.0) -> IntermediateMap:
    """The do-nothing map (trivially Markovian: all rates zero)."""
    return IntermediateMap(dim=dim, superop=np.eye(dim ** 2, dtype=complex),
                           t_start=float(t_start), epsilon=float(epsilon),
                           construction="exponential")


def compose_maps(later: IntermediateMap, earlier: IntermediateMap) -> IntermediateMap:
    """Chain two contiguous segments: result acts as later after earlier."""
    if later.dim != earlier.dim:
        raise DimensionMismatch(f"cannot compose maps of dims {later.dim} and {earlier.dim}")
    junction = earlier.t_start + earlier.epsilon
    if abs(later.t_start - junction) > 1e-12:
        raise TimeMismatch(
            f"later segment starts at {later.t_start}, earlier segment ends at {junction}")
    mode = later.construction if later.construction == earlier.construction else "exponential"
    return IntermediateMap(dim=earlier.dim, superop=later.superop @ earlier.superop,
                           t_start=earlier.t_start, epsilon=earlier.epsilon + later.epsilon,
                           construction=mode)


def sample_markovian_model(dim: int, n_dissipators: int, seed: int) -> GKLSModel:
    """Draw a random Markovian model (constant rates, all nonnegative).

    Operator entries are complex normal, scaled by 1/sqrt(2 dim) so that
    first-order maps at epsilon ~ 1e-6 stay completely positive well inside
    the zero-eigenvalue tolerance.
    """
    if dim not in (2, 3, 4):
        raise ValueError(f"dim must be 2, 3 or 4, got {dim}")
    rng = np.random.default_rng(seed)
    scale = 1.0 / np.sqrt(2.0 * dim)
    a = scale * (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    hamiltonian = (a + a.conj().T) / 2.0
    dissipators = []
    for _ in range(n_dissipators):
        v = scale * (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
        dissipators.append((v, RateFunction.constant(float(rng.uniform(0.0, 1.0)))))
    return GKLSModel(dim=dim, hamiltonian=hamiltonian, dissipators=tuple(dissipators))
