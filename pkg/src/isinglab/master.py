"""Master-equation annealing over all 2^n configurations, plus imaginary time.

Transition rates follow the Bose-Einstein acceptance
A_ij = 1 / (1 + exp((E_i - E_j)/T)), which satisfies detailed balance with
respect to the Boltzmann distribution.  Simulated annealing (SA) allows
single-spin flips only; classical annealing (CA) keeps the same rate between
every pair of configurations.  Diagonal elements are fixed by probability
conservation, A_ii = -sum_{k != i} A_ki.  The temperature is annealed as
T(t) = d / sqrt(t + t0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .graph import validate_coupling_matrix
from .quantum import QAConfig, _mix_spin_pairs, build_diagonal, transverse_angle

__all__ = [
    "AnnealSchedule",
    "ImagRun",
    "MasterRun",
    "anneal_master",
    "boltzmann_reference",
    "ca_generator_apply",
    "imaginary_time_evolve",
    "sa_generator_apply",
    "temperature",
]

MAX_CA_SPINS = 12  # 4^n work per step
CA_BLOCK = 1 << 11  # row-block size keeping the chunked CA action at O(2^n * B) memory
NEGATIVITY_TOL = -1e-10


@dataclass
class AnnealSchedule:
    """Temperature schedule T(t) = d / sqrt(t + t0)."""

    d: float = 5.0
    t0: float = 0.5

    def __post_init__(self):
        if self.d <= 0 or self.t0 <= 0:
            raise ValueError("d and t0 must be positive")


def temperature(t: float, schedule: AnnealSchedule) -> float:
    return schedule.d / np.sqrt(t + schedule.t0)


def sa_generator_apply(p: np.ndarray, energies: np.ndarray, T: float) -> np.ndarray:
    """dp/dt under single-spin-flip rates, computed sparsely (n terms per state)."""
    if T <= 0:
        raise ValueError("temperature must be positive")
    p = np.asarray(p, dtype=float)
    E = np.asarray(energies, dtype=float)
    n = int(round(np.log2(E.size)))
    dp = np.zeros_like(p)
    for k in range(n):
        shape = (1 << (n - 1 - k), 2, 1 << k)
        E_sw = np.ascontiguousarray(E.reshape(shape)[:, ::-1, :]).reshape(-1)
        p_sw = np.ascontiguousarray(p.reshape(shape)[:, ::-1, :]).reshape(-1)
        w_in = expit((E_sw - E) / T)      # rate into each state from its bit-k partner
        dp += w_in * p_sw - (1.0 - w_in) * p
    return dp


def ca_generator_apply(p: np.ndarray, energies: np.ndarray, T: float,
                       block: int = CA_BLOCK) -> np.ndarray:
    """dp/dt under all-pairs rates; the 2^n x 2^n action is built blockwise.

    Inflow and outflow share one logistic evaluation because
    A_ij + A_ji = 1 for every pair.
    """
    if T <= 0:
        raise ValueError("temperature must be positive")
    p = np.asarray(p, dtype=float)
    E = np.asarray(energies, dtype=float)
    dim = E.size
    n = int(round(np.log2(dim)))
    if n > MAX_CA_SPINS:
        raise ValueError(f"all-pairs action guarded to n <= {MAX_CA_SPINS}, got {n}")
    dp = np.empty_like(p)
    for lo in range(0, dim, block):
        hi = min(lo + block, dim)
        w_in = expit((E[None, :] - E[lo:hi, None]) / T)
        dp[lo:hi] = w_in @ p - p[lo:hi] * (dim - w_in.sum(axis=1))
    return dp


@dataclass
class MasterRun:
    """Sampled time series of one master-equation anneal."""

    times: np.ndarray
    temps: np.ndarray
    p_gs: np.ndarray
    p_gs_per_state: np.ndarray
    ground_indices: np.ndarray
    probabilities: np.ndarray          # final distribution
    negativity_events: int
    mode: str
    snapshots: list


def _sa_weights(E: np.ndarray, T: float, n: int):
    w = []
    for k in range(n):
        shape = (1 << (n - 1 - k), 2, 1 << k)
        E_sw = np.ascontiguousarray(E.reshape(shape)[:, ::-1, :]).reshape(-1)
        w.append(expit((E_sw - E) / T))
    return w


def anneal_master(J: np.ndarray, h: np.ndarray | None, schedule: AnnealSchedule,
                  mode: str = "sa", dt: float = 0.01, t_end: float = 500.0,
                  sample_every: int = 1000, keep_snapshots: bool = False) -> MasterRun:
    """Anneal the probability vector from uniform with RK4 at fixed step dt.

    The ground projector is taken from the minimizers of the full diagonal
    (field included).  Breaches of probability conservation abort; small
    negative entries are clipped and renormalized with the event counted.
    """
    if mode not in ("sa", "ca"):
        raise ValueError(f"mode must be 'sa' or 'ca', got {mode!r}")
    J = validate_coupling_matrix(J)
    n = J.shape[0]
    if mode == "ca" and n > MAX_CA_SPINS:
        raise ValueError(f"classical annealing guarded to n <= {MAX_CA_SPINS}")
    E = build_diagonal(J, h)
    ground = np.flatnonzero(np.round(E - E.min(), 9) == 0.0)
    dim = E.size
    p = np.full(dim, 1.0 / dim)

    steps = int(round(t_end / dt))
    use_dense_ca = mode == "ca" and dim <= 1024
    use_cached_sa = mode == "sa" and n <= 14
    dE = E[:, None] - E[None, :] if use_dense_ca else None

    def make_rhs(T: float):
        if use_dense_ca:
            w_in = expit(-dE / T)
            outflow = dim - w_in.sum(axis=1)
            return lambda q: w_in @ q - q * outflow
        if use_cached_sa:
            weights = _sa_weights(E, T, n)

            def rhs(q):
                dq = np.zeros_like(q)
                for k, w in enumerate(weights):
                    shape = (1 << (n - 1 - k), 2, 1 << k)
                    q_sw = np.ascontiguousarray(q.reshape(shape)[:, ::-1, :]).reshape(-1)
                    dq += w * q_sw - (1.0 - w) * q
                return dq

            return rhs
        if mode == "sa":
            return lambda q: sa_generator_apply(q, E, T)
        return lambda q: ca_generator_apply(q, E, T)

    times, temps, pgs, per_state, snaps = [], [], [], [], []
    negativity = 0

    def record(t):
        times.append(t)
        temps.append(temperature(t, schedule))
        pgs.append(float(p[ground].sum()))
        per_state.append(p[ground].copy())
        if keep_snapshots:
            snaps.append(p.copy())

    record(0.0)
    t = 0.0
    rhs_end = make_rhs(temperature(0.0, schedule))
    for step in range(steps):
        rhs_a = rhs_end  # T(t) matches the previous step's endpoint temperature
        rhs_m = make_rhs(temperature(t + 0.5 * dt, schedule))
        rhs_end = make_rhs(temperature(t + dt, schedule))
        k1 = rhs_a(p)
        k2 = rhs_m(p + 0.5 * dt * k1)
        k3 = rhs_m(p + 0.5 * dt * k2)
        k4 = rhs_end(p + dt * k3)
        p = p + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += dt
        pmin = p.min()
        if pmin < NEGATIVITY_TOL:
            negativity += 1
            np.clip(p, 0.0, None, out=p)
            p /= p.sum()
        total = p.sum()
        if abs(total - 1.0) > 1e-8:
            raise RuntimeError(f"probability conservation breach {abs(total - 1.0):.3e} at t = {t:.2f}")
        if (step + 1) % sample_every == 0 or step == steps - 1:
            record(t)

    return MasterRun(
        times=np.array(times),
        temps=np.array(temps),
        p_gs=np.array(pgs),
        p_gs_per_state=np.array(per_state),
        ground_indices=ground,
        probabilities=p,
        negativity_events=negativity,
        mode=mode,
        snapshots=snaps,
    )


def boltzmann_reference(energies: np.ndarray, T: float,
                        ground_indices: np.ndarray | None = None) -> float:
    """Equilibrium ground-space occupancy sum_g e^(-E_g/T) / sum_all e^(-E/T)."""
    if T <= 0:
        raise ValueError("temperature must be positive")
    E = np.asarray(energies, dtype=float)
    if ground_indices is None:
        ground_indices = np.flatnonzero(np.round(E - E.min(), 9) == 0.0)
    w = np.exp(-(E - E.min()) / T)
    return float(w[ground_indices].sum() / w.sum())


@dataclass
class ImagRun:
    times: np.ndarray
    p_gs: np.ndarray
    ground_indices: np.ndarray
    amplitudes: np.ndarray


def imaginary_time_evolve(J: np.ndarray, h: np.ndarray | None, config: QAConfig) -> ImagRun:
    """Norm-preserved imaginary-time analog of the quantum anneal.

    Runs the same split-step machinery with real decay factors exp(-dt E/2)
    and per-spin cosh/sinh mixing; renormalizing after every step plays the
    role of the energy-shift term that keeps the wavefunction normalized.
    """
    J = validate_coupling_matrix(J)
    n = J.shape[0]
    E = build_diagonal(J, h)
    ground = np.flatnonzero(np.round(E - E.min(), 9) == 0.0)
    psi = np.full(1 << n, 2.0 ** (-n / 2))
    dt = config.dt
    half = np.exp(-0.5 * dt * (E - E.min()))  # shift for overflow safety only
    steps = int(round(config.t_end / dt))
    sample_every = max(1, config.sample_every)

    times, pgs = [0.0], [float(np.sum(psi[ground] ** 2))]
    t = 0.0
    for step in range(steps):
        theta = transverse_angle(t, t + dt, config.b, config.t0)
        psi = psi * half
        psi = _mix_spin_pairs(psi, n, np.cosh(theta), np.sinh(theta))
        psi = psi * half
        norm = np.linalg.norm(psi)
        if norm == 0.0 or not np.isfinite(norm):
            raise RuntimeError(f"norm underflow at t = {t:.2f}")
        psi /= norm
        t += dt
        if (step + 1) % sample_every == 0 or step == steps - 1:
            times.append(t)
            pgs.append(float(np.sum(psi[ground] ** 2)))

    return ImagRun(np.array(times), np.array(pgs), ground, psi)
