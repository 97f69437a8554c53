"""Full state-vector quantum annealing of the transverse-field Ising model.

The Hamiltonian is H(t) = H_D - gamma(t) sum_k Sx_k with diagonal part
H_D(xi) = -(1/2) sum_{i != j} J_ij s_i s_j - sum_i h_i s_i, using Pauli
operators with eigenvalues +-1 so the diagonal coincides with the classical
Ising energy used everywhere else.  Time stepping is a second-order Strang
splitting: half step of the diagonal phase, one full transverse rotation with
the analytically integrated angle, then another half phase step.

Basis convention: basis state index xi has bit k equal to 1 when spin k is up
(s_k = +1); the all-down configuration is index 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh

from .graph import validate_coupling_matrix

__all__ = [
    "BlochVector",
    "QAConfig",
    "QARun",
    "QuantumState",
    "basis_index",
    "bloch_vector",
    "build_diagonal",
    "gamma",
    "ground_state_probability",
    "index_spins",
    "initial_state",
    "instantaneous_ground_overlap",
    "load_state",
    "reduced_density_matrix",
    "run_qa",
    "save_state",
    "spins_table",
    "strang_step",
    "symmetry_breaking_field",
    "transverse_angle",
]

MAX_QUBITS = 20  # 2^20 complex amplitudes; memory guard for run_qa
MAX_DENSE_QUBITS = 12  # guard for instantaneous eigensolves


@dataclass
class QuantumState:
    """State vector of n spins (2^n complex amplitudes) at time t."""

    amplitudes: np.ndarray
    t: float = 0.0

    @property
    def n(self) -> int:
        return int(round(np.log2(self.amplitudes.size)))

    def norm_error(self) -> float:
        return abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0)


@dataclass
class QAConfig:
    """Annealing-schedule and integration parameters.

    gamma(t) = b / sqrt(t + t0); h is an optional longitudinal field vector.
    """

    b: float = 5.0
    t0: float = 0.5
    dt: float = 0.1
    t_end: float = 500.0
    h: np.ndarray | None = None
    sample_every: int = 10

    def __post_init__(self):
        # b = 0 is allowed: it disables the transverse drive (pure phase evolution)
        if self.b < 0 or self.t0 <= 0 or self.dt <= 0:
            raise ValueError("b must be >= 0, t0 and dt must be positive")


@dataclass
class BlochVector:
    u: float
    v: float
    w: float

    @property
    def magnitude(self) -> float:
        return float(np.sqrt(self.u**2 + self.v**2 + self.w**2))


def basis_index(s: np.ndarray) -> int:
    """Basis index of a hard-spin configuration (bit k set iff s_k = +1)."""
    s = np.asarray(s)
    bits = (s > 0).astype(np.int64)
    return int(bits @ (1 << np.arange(len(s), dtype=np.int64)))


def index_spins(idx: int, n: int) -> np.ndarray:
    """Spin configuration of a basis index; inverse of :func:`basis_index`."""
    if not 0 <= idx < (1 << n):
        raise ValueError(f"index {idx} out of range for {n} spins")
    bits = (idx >> np.arange(n)) & 1
    return 2.0 * bits - 1.0


def spins_table(n: int) -> np.ndarray:
    """(2^n, n) array whose row xi is the spin configuration of index xi."""
    idx = np.arange(1 << n)
    return 2.0 * ((idx[:, None] >> np.arange(n)[None, :]) & 1) - 1.0


def build_diagonal(J: np.ndarray, h: np.ndarray | None = None) -> np.ndarray:
    """Classical energies E(xi) = H_I(xi) - sum_i h_i s_i for every basis state."""
    J = np.asarray(J, dtype=float)
    if J.shape != (1, 1):  # a single spin has no coupling to validate
        J = validate_coupling_matrix(J)
    n = J.shape[0]
    if n > MAX_QUBITS:
        raise ValueError(f"diagonal for n = {n} exceeds the {MAX_QUBITS}-spin guard")
    S = spins_table(n)
    E = -0.5 * np.einsum("bi,bi->b", S @ J, S)
    if h is not None:
        h = np.asarray(h, dtype=float)
        if h.shape != (n,):
            raise ValueError(f"field must have shape ({n},), got {h.shape}")
        E = E - S @ h
    return E


def initial_state(n: int) -> QuantumState:
    """Uniform superposition, the ground state of the pure transverse field."""
    if n < 1:
        raise ValueError("need at least one spin")
    amp = np.full(1 << n, 2.0 ** (-n / 2), dtype=complex)
    return QuantumState(amp, 0.0)


def gamma(t: float, b: float, t0: float) -> float:
    """Transverse-field schedule b / sqrt(t + t0)."""
    if t + t0 <= 0:
        raise ValueError("t + t0 must be positive")
    return b / np.sqrt(t + t0)


def transverse_angle(t_start: float, t_end: float, b: float, t0: float) -> float:
    """Exact integral of gamma over [t_start, t_end]."""
    return 2.0 * b * (np.sqrt(t_end + t0) - np.sqrt(t_start + t0))


def _mix_spin_pairs(psi: np.ndarray, n: int, diag, off) -> np.ndarray:
    """Apply the same 2x2 mixing [[diag, off], [off, diag]] to every spin.

    Used with (cos, i sin) for the unitary transverse rotation and with
    (cosh, sinh) for imaginary-time evolution; the per-spin factors commute.
    """
    for k in range(n):
        a = psi.reshape(1 << (n - 1 - k), 2, 1 << k)
        lo = a[:, 0, :].copy()
        hi = a[:, 1, :].copy()
        a[:, 0, :] = diag * lo + off * hi
        a[:, 1, :] = off * lo + diag * hi
    return psi


def strang_step(state: QuantumState, energies: np.ndarray, schedule: QAConfig,
                dt: float | None = None) -> QuantumState:
    """One Strang split step: half diagonal phase, transverse rotation, half phase.

    The transverse rotation angle is the exact integral of gamma over the
    step, applied as exp(+i theta Sx_k) on every spin.
    """
    dt = schedule.dt if dt is None else dt
    n = state.n
    theta = transverse_angle(state.t, state.t + dt, schedule.b, schedule.t0)
    psi = state.amplitudes * np.exp(-0.5j * dt * energies)
    psi = _mix_spin_pairs(psi, n, np.cos(theta), 1j * np.sin(theta))
    psi *= np.exp(-0.5j * dt * energies)
    return QuantumState(psi, state.t + dt)


def symmetry_breaking_field(n: int, coeff0: float, coeff1: float, i0: int = 0) -> np.ndarray:
    """Longitudinal field h = coeff0 * s^(S0) + coeff1 * s^(S1, i0) componentwise."""
    from .graph import build_s0, build_s1

    h = coeff0 * build_s0(n)
    if coeff1 != 0.0:
        h = h + coeff1 * build_s1(n, i0)
    return h


def ground_state_probability(state: QuantumState | np.ndarray,
                             projector_indices) -> tuple[float, np.ndarray]:
    """Total and per-state probability of the listed basis states."""
    psi = state.amplitudes if isinstance(state, QuantumState) else np.asarray(state)
    idx = np.asarray(list(projector_indices), dtype=np.int64)
    per_state = np.abs(psi[idx]) ** 2
    return float(per_state.sum()), per_state


def reduced_density_matrix(state: QuantumState | np.ndarray, k: int) -> np.ndarray:
    """Single-spin reduced density matrix of spin k in the (up, down) basis.

    Computed from pairwise amplitude sums over the bit-k partners; the full
    2^n x 2^n density matrix is never formed.
    """
    psi = state.amplitudes if isinstance(state, QuantumState) else np.asarray(state)
    n = int(round(np.log2(psi.size)))
    if not 0 <= k < n:
        raise ValueError(f"spin index {k} out of range for {n} spins")
    a = psi.reshape(1 << (n - 1 - k), 2, 1 << k)
    down = a[:, 0, :].ravel()
    up = a[:, 1, :].ravel()
    rho = np.empty((2, 2), dtype=complex)
    rho[0, 0] = np.vdot(up, up)
    rho[1, 1] = np.vdot(down, down)
    rho[0, 1] = up @ np.conj(down)
    rho[1, 0] = np.conj(rho[0, 1])
    return rho


def bloch_vector(rho: np.ndarray) -> BlochVector:
    """Bloch vector (u, v, w) with rho = (1/2)(identity + u.Sx + v.Sy + w.Sz)."""
    u = 2.0 * rho[0, 1].real
    v = -2.0 * rho[0, 1].imag
    w = (rho[0, 0] - rho[1, 1]).real
    return BlochVector(float(u), float(v), float(w))


@dataclass
class QARun:
    """Sampled observables of one quantum-annealing evolution."""

    times: np.ndarray
    gammas: np.ndarray
    p_gs: np.ndarray                # (T,) total ground-space probability
    p_gs_per_state: np.ndarray      # (T, n_ground)
    prob_up: np.ndarray             # (T, n) probability of spin k up
    bloch_mag: np.ndarray           # (T, n) Bloch-vector magnitudes
    ground_indices: np.ndarray
    state: QuantumState
    energies: np.ndarray | None = field(repr=False, default=None)


def _single_spin_observables(psi: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    prob_up = np.empty(n)
    mags = np.empty(n)
    for k in range(n):
        rho = reduced_density_matrix(psi, k)
        prob_up[k] = rho[0, 0].real
        mags[k] = bloch_vector(rho).magnitude
    return prob_up, mags


def run_qa(J: np.ndarray, config: QAConfig) -> QARun:
    """Anneal from the uniform superposition and sample observables.

    Aborts with RuntimeError if the state norm drifts by more than 1e-8.
    """
    J = validate_coupling_matrix(J)
    n = J.shape[0]
    if n > MAX_QUBITS:
        raise ValueError(f"state vector for n = {n} exceeds the {MAX_QUBITS}-spin guard")
    energies = build_diagonal(J, config.h)
    ground = np.flatnonzero(np.round(energies - energies.min(), 9) == 0.0)

    state = initial_state(n)
    psi = state.amplitudes
    half_phase = np.exp(-0.5j * config.dt * energies)
    steps = int(round(config.t_end / config.dt))
    sample_every = max(1, config.sample_every)

    rec_t, rec_g, rec_pgs, rec_per, rec_up, rec_mag = [], [], [], [], [], []

    def record(t: float):
        total, per = ground_state_probability(psi, ground)
        up, mag = _single_spin_observables(psi, n)
        rec_t.append(t)
        rec_g.append(gamma(t, config.b, config.t0))
        rec_pgs.append(total)
        rec_per.append(per)
        rec_up.append(up)
        rec_mag.append(mag)

    record(0.0)
    t = 0.0
    for step in range(steps):
        theta = transverse_angle(t, t + config.dt, config.b, config.t0)
        psi *= half_phase
        psi = _mix_spin_pairs(psi, n, np.cos(theta), 1j * np.sin(theta))
        psi *= half_phase
        t += config.dt
        norm2 = float(np.vdot(psi, psi).real)
        if abs(norm2 - 1.0) > 1e-8:
            raise RuntimeError(f"norm drift {abs(norm2 - 1.0):.3e} at t = {t:.2f}")
        if (step + 1) % sample_every == 0 or step == steps - 1:
            record(t)

    return QARun(
        times=np.array(rec_t),
        gammas=np.array(rec_g),
        p_gs=np.array(rec_pgs),
        p_gs_per_state=np.array(rec_per),
        prob_up=np.array(rec_up),
        bloch_mag=np.array(rec_mag),
        ground_indices=ground,
        state=QuantumState(psi, t),
        energies=energies,
    )


def _hamiltonian_operator(energies: np.ndarray, gamma_now: float, n: int) -> LinearOperator:
    def matvec(v):
        out = energies * v
        for k in range(n):
            a = v.reshape(1 << (n - 1 - k), 2, 1 << k)
            out = out - gamma_now * a[:, ::-1, :].reshape(-1)
        return out

    dim = 1 << n
    return LinearOperator((dim, dim), matvec=matvec, dtype=float)


def instantaneous_ground_overlap(state: QuantumState | np.ndarray, J: np.ndarray,
                                 h: np.ndarray | None, gamma_now: float) -> float:
    """Squared overlap with the instantaneous ground state of H(t).

    Reports the projection onto the two-dimensional lowest subspace when the
    lowest pair is degenerate below 1e-10.
    """
    psi = state.amplitudes if isinstance(state, QuantumState) else np.asarray(state)
    J = validate_coupling_matrix(J)
    n = J.shape[0]
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"instantaneous eigensolve guarded to n <= {MAX_DENSE_QUBITS}")
    energies = build_diagonal(J, h)
    dim = 1 << n
    if dim <= 16:
        H = np.diag(energies).astype(float)
        for k in range(n):
            idx = np.arange(dim)
            H[idx, idx ^ (1 << k)] -= gamma_now
        vals, vecs = np.linalg.eigh(H)
    else:
        vals, vecs = eigsh(_hamiltonian_operator(energies, gamma_now, n), k=2, which="SA")
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    overlap = abs(np.vdot(vecs[:, 0], psi)) ** 2
    if vals[1] - vals[0] < 1e-10:
        overlap += abs(np.vdot(vecs[:, 1], psi)) ** 2
    return float(overlap)


def save_state(path: str, state: QuantumState) -> None:
    """Binary snapshot of the amplitudes and time, for regression checks."""
    np.savez(path, amplitudes=state.amplitudes, t=state.t)


def load_state(path: str) -> QuantumState:
    data = np.load(path)
    return QuantumState(data["amplitudes"], float(data["t"]))
