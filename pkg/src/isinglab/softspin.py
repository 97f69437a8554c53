"""Gain-based soft-spin dynamics: annealed energy, solver variants, branches, basins.

The soft-spin energy of n amplitudes x with pump p and nonlinearity c is

    E(x) = (c/4) sum_i (p - x_i^2)^2 - (1/2) sum_ij J_ij x_i x_j,

minimized by gradient flow while the pump rises from p0 toward 1.  Solver
variants: "ht" (linear Hopfield-Tank), "cim1" (gradient flow with a scalar
pump schedule), "cim2" (per-spin pump feedback), "cim3" (cim1 plus per-step
amplitude homogenization of configurable strength delta).  Spins are read out
as s_i = sign(x_i).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .graph import (
    build_mobius_ladder,
    build_s0,
    build_s1,
    ising_energy,
    validate_coupling_matrix,
)

__all__ = [
    "BranchSolution",
    "DescentBreakdown",
    "BasinSample",
    "EnsembleResult",
    "MinimumInfo",
    "RegionMap",
    "SolverConfig",
    "SuccessStats",
    "TrajectoryResult",
    "basin_descriptors",
    "basin_sample",
    "branch_crossing_pump",
    "branch_e0",
    "branch_e1",
    "cim2_pump_step",
    "default_delta_grid",
    "default_solver_config",
    "descent_state_probabilities",
    "homogenize_intensities",
    "ht_rhs",
    "manifold_reduce",
    "pump_tanh",
    "region_map",
    "run_ensemble",
    "run_trajectory",
    "soft_energy",
    "soft_gradient",
    "soft_hessian",
    "spin_readout",
    "success_probability",
    "tune_delta",
]

VARIANTS = ("ht", "cim1", "cim2", "cim3")
DIVERGENCE_LIMIT = 1e6
FREEZE_STEPS = 200  # early stop after this many steps without a sign change


# ---------------------------------------------------------------------------
# energy, gradients, schedules
# ---------------------------------------------------------------------------

def soft_energy(x, p, c, J):
    """Annealed soft-spin energy; broadcasts over leading batch axes of x."""
    x = np.asarray(x, dtype=float)
    quartic = 0.25 * c * np.sum((p - x**2) ** 2, axis=-1)
    coupling = -0.5 * np.einsum("...i,...i->...", x @ J.T, x)
    out = quartic + coupling
    return float(out) if out.ndim == 0 else out


def soft_gradient(x, p, c, J):
    """Flow right-hand side c (p x - x^3) + J x, equal to -dE/dx."""
    x = np.asarray(x, dtype=float)
    return c * (p * x - x**3) + x @ J.T


def soft_hessian(x, p, c, J):
    """Energy Hessian H_ij = delta_ij c (3 x_i^2 - p) - J_ij."""
    x = np.asarray(x, dtype=float)
    H = np.broadcast_to(-J, x.shape[:-1] + J.shape).copy()
    n = J.shape[0]
    diag = c * (3.0 * x**2 - p)
    H[..., np.arange(n), np.arange(n)] += diag
    return H


def ht_rhs(x, p, J):
    """Linear Hopfield-Tank right-hand side p x + J x."""
    x = np.asarray(x, dtype=float)
    return p * x + x @ J.T


def pump_tanh(t, p0, eps):
    """Scalar pump schedule (1 - p0) tanh(eps t) + p0; starts at p0, tends to 1."""
    return (1.0 - p0) * np.tanh(eps * t) + p0


def cim2_pump_step(p_i, x, eps, dt):
    """Forward-Euler update of the per-spin pumps: p_i += eps (1 - x_i^2) dt."""
    return np.asarray(p_i, dtype=float) + eps * (1.0 - np.asarray(x) ** 2) * dt


def manifold_reduce(x, delta):
    """Pull each amplitude toward the mean squared radius R = sum x_i^2 / n.

    Maps x_i -> (1 - delta) x_i + delta R sign(x_i); signs are preserved,
    zero components stay at zero, delta = 0 is the identity and delta = 1
    sends every magnitude to R.
    """
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    x = np.asarray(x, dtype=float)
    R = np.mean(x**2, axis=-1, keepdims=True)
    return np.where(x != 0.0, (1.0 - delta) * x + delta * R * np.sign(x), x)


def homogenize_intensities(x, frac):
    """Mix every squared amplitude toward the mean: x_i^2 -> (1-frac) x_i^2 + frac R.

    Scale-free counterpart of :func:`manifold_reduce` used inside cim3 steps:
    it preserves signs and the total squared radius, so it homogenizes
    amplitude patterns at any overall scale (at frac = 1 every magnitude
    becomes the root mean square).  Zero components stay at zero.
    """
    if not 0.0 <= frac <= 1.0:
        raise ValueError(f"mixing fraction must lie in [0, 1], got {frac}")
    x = np.asarray(x, dtype=float)
    intensity = x**2
    R = np.mean(intensity, axis=-1, keepdims=True)
    return np.sign(x) * np.sqrt((1.0 - frac) * intensity + frac * R)


def spin_readout(x):
    """Hard spins sign(x_i); zero components read as +1."""
    return np.where(np.asarray(x) >= 0.0, 1, -1).astype(np.int8)


# ---------------------------------------------------------------------------
# trajectories and ensembles
# ---------------------------------------------------------------------------

@dataclass
class SolverConfig:
    """Parameters of one soft-spin solver run."""

    variant: str = "cim1"
    p0: float | None = None
    c: float = 1.0
    eps: float = 0.003
    dt: float = 0.1
    t_end: float = 3000.0
    delta: float = 0.0
    init_amplitude: float = 0.001
    seed: int = 0
    method: str = "euler"  # "euler" (baseline) or "rk4" (convergence checks)
    sample_every: int = 0
    early_stop: bool = True

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.dt <= 0 or self.t_end <= 0:
            raise ValueError("dt and t_end must be positive")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError("delta must lie in [0, 1]")
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.method not in ("euler", "rk4"):
            raise ValueError(f"method must be 'euler' or 'rk4', got {self.method!r}")


def default_solver_config(j: float, variant: str = "cim1", **overrides) -> SolverConfig:
    """Baseline configuration with the pump starting at p0 = j - 2."""
    cfg = SolverConfig(variant=variant, p0=j - 2.0)
    return replace(cfg, **overrides) if overrides else cfg


@dataclass
class TrajectoryResult:
    """Final state of one integrated trajectory plus optional samples."""

    x: np.ndarray
    spins: np.ndarray
    t: float
    ising_energy: float
    soft_energy: float
    diverged: bool
    samples: list = field(default_factory=list)  # rows (t, pump, x, soft energy)


@dataclass
class EnsembleResult:
    spins: np.ndarray        # (runs, n) int8 readouts
    final_x: np.ndarray      # (runs, n)
    diverged: np.ndarray     # (runs,) bool
    steps_run: int


@dataclass
class SuccessStats:
    p_gs: float
    stderr: float
    hits: int
    runs: int
    diverged: int


def _initial_batch(n: int, runs: int, amplitude: float, seed: int) -> np.ndarray:
    """Per-run initial conditions from independent, scheduling-free seed streams."""
    x0 = np.empty((runs, n))
    for r in range(runs):
        rng = np.random.default_rng(np.random.SeedSequence([seed, r]))
        x0[r] = rng.uniform(-amplitude, amplitude, n)
    return x0


def _integrate_batch(J: np.ndarray, config: SolverConfig, x0: np.ndarray,
                     delta_per_run: np.ndarray | None = None,
                     collect_samples: bool = False):
    """Shared integration core for trajectories and ensembles.

    Returns (x, spins, diverged, steps, samples).  HT runs read spins out at
    the first time max|x_i| >= 1 (the linear dynamics has no saturation);
    the other variants stop early once every run's signs have been stable for
    FREEZE_STEPS steps in the locked regime.
    """
    if config.p0 is None:
        raise ValueError("SolverConfig.p0 is unset; use default_solver_config(j, ...)")
    runs, n = x0.shape
    c, eps, dt, p0 = config.c, config.eps, config.dt, config.p0
    variant = config.variant
    x = x0.copy()
    steps = int(round(config.t_end / dt))
    samples = []

    if delta_per_run is None:
        frac = np.full((runs, 1), config.delta)
    else:
        frac = np.asarray(delta_per_run, dtype=float).reshape(runs, 1)

    pump_i = np.full((runs, n), p0) if variant == "cim2" else None
    ht_spins = np.zeros((runs, n), dtype=np.int8)
    ht_done = np.zeros(runs, dtype=bool)
    diverged = np.zeros(runs, dtype=bool)
    frozen_x = np.zeros_like(x)
    signs = np.sign(x)
    last_change = np.zeros(runs, dtype=np.int64)

    def cim_rhs(y, p):
        return c * (p * y - y**3) + y @ J.T

    t = 0.0
    step = 0
    for step in range(steps):
        p = pump_tanh(t, p0, eps)
        if variant == "ht":
            if config.method == "rk4":
                k1 = ht_rhs(x, p, J)
                k2 = ht_rhs(x + 0.5 * dt * k1, pump_tanh(t + 0.5 * dt, p0, eps), J)
                k3 = ht_rhs(x + 0.5 * dt * k2, pump_tanh(t + 0.5 * dt, p0, eps), J)
                k4 = ht_rhs(x + dt * k3, pump_tanh(t + dt, p0, eps), J)
                x = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            else:
                x = x + dt * ht_rhs(x, p, J)
            hit = (np.max(np.abs(x), axis=1) >= 1.0) & ~ht_done
            if np.any(hit):
                ht_spins[hit] = spin_readout(x[hit])
                ht_done[hit] = True
            if ht_done.all():
                step += 1
                t += dt
                break
        else:
            p_eff = pump_i if variant == "cim2" else p
            if config.method == "rk4" and variant != "cim2":
                k1 = cim_rhs(x, p)
                pm = pump_tanh(t + 0.5 * dt, p0, eps)
                k2 = cim_rhs(x + 0.5 * dt * k1, pm)
                k3 = cim_rhs(x + 0.5 * dt * k2, pm)
                k4 = cim_rhs(x + dt * k3, pump_tanh(t + dt, p0, eps))
                x = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            else:
                x = x + dt * cim_rhs(x, p_eff)
            if variant == "cim2":
                pump_i = cim2_pump_step(pump_i, x, eps, dt)
            if variant == "cim3":
                if delta_per_run is None:
                    if config.delta > 0.0:
                        x = homogenize_intensities(x, config.delta)
                else:
                    intensity = x**2
                    R = np.mean(intensity, axis=1, keepdims=True)
                    x = np.sign(x) * np.sqrt((1.0 - frac) * intensity + frac * R)
            with np.errstate(invalid="ignore"):
                bad = ~np.all(np.isfinite(x), axis=1) | (np.max(np.abs(x), axis=1) > DIVERGENCE_LIMIT)
            fresh = bad & ~diverged
            if fresh.any():
                x[fresh] = np.nan_to_num(
                    np.clip(x[fresh], -DIVERGENCE_LIMIT, DIVERGENCE_LIMIT),
                    nan=0.0, posinf=DIVERGENCE_LIMIT, neginf=-DIVERGENCE_LIMIT)
                diverged |= fresh
                frozen_x[diverged] = x[diverged]
            elif diverged.any():
                x[diverged] = frozen_x[diverged]  # diverged runs stay flagged, not evolved
        t += dt

        if collect_samples and config.sample_every > 0 and (step + 1) % config.sample_every == 0:
            if variant == "cim2":
                pv = pump_i[0].copy()
                energy = 0.25 * c * np.sum((pv - x[0] ** 2) ** 2) - 0.5 * x[0] @ J @ x[0]
            else:
                pv = pump_tanh(t, p0, eps)
                energy = soft_energy(x[0], pv, c, J)
            samples.append((t, pv, x[0].copy(), float(energy)))

        if variant != "ht":
            new_signs = np.sign(x)
            changed = np.any(new_signs != signs, axis=1)
            last_change[changed] = step
            signs = new_signs
            if config.early_stop and not collect_samples:
                locked = p > 0.9 if variant != "cim2" else t > 2.0 / eps
                if locked and (step - last_change.max()) >= FREEZE_STEPS:
                    step += 1
                    break
    else:
        step = steps

    if variant == "ht":
        spins = np.where(ht_done[:, None], ht_spins, spin_readout(x))
    else:
        spins = spin_readout(x)
    return x, spins, diverged, step, samples


def run_trajectory(J: np.ndarray, config: SolverConfig) -> TrajectoryResult:
    """Integrate one trajectory from a random start in [-a, a]^n."""
    J = validate_coupling_matrix(J)
    n = J.shape[0]
    x0 = _initial_batch(n, 1, config.init_amplitude, config.seed)
    collect = config.sample_every > 0
    x, spins, diverged, steps, samples = _integrate_batch(J, config, x0, collect_samples=collect)
    xf = x[0]
    p_final = pump_tanh(steps * config.dt, config.p0, config.eps)
    return TrajectoryResult(
        x=xf,
        spins=spins[0],
        t=steps * config.dt,
        ising_energy=ising_energy(J, spins[0].astype(float)),
        soft_energy=soft_energy(xf, p_final, config.c, J),
        diverged=bool(diverged[0]),
        samples=samples,
    )


def run_ensemble(J: np.ndarray, config: SolverConfig, runs: int, seed: int,
                 delta_per_run: np.ndarray | None = None) -> EnsembleResult:
    """Integrate `runs` independent trajectories; run r draws its start from
    the seed stream (seed, r), so results do not depend on batch composition."""
    J = validate_coupling_matrix(J)
    if runs < 1:
        raise ValueError("runs must be >= 1")
    n = J.shape[0]
    x0 = _initial_batch(n, runs, config.init_amplitude, seed)
    x, spins, diverged, steps, _ = _integrate_batch(J, config, x0, delta_per_run=delta_per_run)
    return EnsembleResult(spins=spins, final_x=x, diverged=diverged, steps_run=steps)


def _ground_sign_set(J: np.ndarray) -> set:
    from .oracle import exhaustive_ground_state

    summary = exhaustive_ground_state(J)
    return {tuple(s.astype(int)) for s in summary.ground_states}


def success_probability(J: np.ndarray, config: SolverConfig, runs: int, seed: int = 0,
                        ground_spins: set | None = None) -> SuccessStats:
    """Fraction of runs whose spin readout lands in the Ising ground set."""
    J = validate_coupling_matrix(J)
    gset = _ground_sign_set(J) if ground_spins is None else ground_spins
    res = run_ensemble(J, config, runs, seed)
    hits = sum(1 for row in res.spins if tuple(int(v) for v in row) in gset)
    ok = ~res.diverged
    p = hits / runs
    return SuccessStats(
        p_gs=p,
        stderr=float(np.sqrt(p * (1.0 - p) / runs)),
        hits=hits,
        runs=runs,
        diverged=int(res.diverged.sum()),
    )


def default_delta_grid() -> np.ndarray:
    """Homogenization strengths scanned when tuning cim3, log-spaced in (0, 1)."""
    return np.round(np.geomspace(0.002, 0.9, 19), 6)


def tune_delta(J: np.ndarray, config: SolverConfig, seed: int = 0,
               grid: np.ndarray | None = None, prelim_runs: int = 200,
               ground_spins: set | None = None):
    """Pick the cim3 delta maximizing ground-state probability on preliminary runs.

    Scans the grid with `prelim_runs` trajectories per candidate (one batched
    integration) and returns (best_delta, table of (delta, p_gs)).  Ties go to
    the smaller delta.
    """
    J = validate_coupling_matrix(J)
    gset = _ground_sign_set(J) if ground_spins is None else ground_spins
    grid = default_delta_grid() if grid is None else np.asarray(grid, dtype=float)
    deltas = np.repeat(grid, prelim_runs)
    cfg = replace(config, variant="cim3")
    res = run_ensemble(J, cfg, len(deltas), seed, delta_per_run=deltas)
    table = []
    best_delta, best_p = None, -1.0
    for i, d in enumerate(grid):
        block = res.spins[i * prelim_runs:(i + 1) * prelim_runs]
        p = sum(1 for row in block if tuple(int(v) for v in row) in gset) / prelim_runs
        table.append((float(d), p))
        if p > best_p:
            best_delta, best_p = float(d), p
    return best_delta, table


# ---------------------------------------------------------------------------
# analytic branches
# ---------------------------------------------------------------------------

@dataclass
class BranchSolution:
    """Uniform (E0) or two-amplitude (E1) steady state of the soft-spin flow."""

    branch: str
    exists: bool
    x_l: float = np.nan
    x_b: float = np.nan
    energy: float = np.nan
    amplitudes: np.ndarray | None = None


def _e1_amplitude_vector(n: int, x_l: float, x_b: float, i0: int = 0) -> np.ndarray:
    signs = build_s1(n, i0)
    mags = np.full(n, x_b)
    for i in (i0, i0 + 1, i0 + n // 2, i0 + n // 2 + 1):
        mags[i % n] = x_l
    return signs * mags


def branch_e0(p: float, j: float, n: int, c: float = 1.0) -> BranchSolution:
    """Uniform-amplitude steady state X = sqrt(p + (2 - j)/c) on the S0 pattern.

    Absent below the bifurcation pump p = (j - 2)/c.
    """
    X2 = p + (2.0 - j) / c
    if X2 < 0.0:
        return BranchSolution("E0", False)
    X = float(np.sqrt(X2))
    J = build_mobius_ladder(n, j)
    x = build_s0(n) * X
    return BranchSolution("E0", True, x_l=X, x_b=X, energy=soft_energy(x, p, c, J), amplitudes=x)


def _candidate_roots_e1(p: float, j: float, c: float):
    """Real roots of the steady-state resultant for the n = 8 two-amplitude ansatz.

    From the flow steady states: x_b = (1 - j - c p) x_l + c x_l^3 (low-amplitude
    nodes) and (c p + 1 + j) x_b + x_l = c x_b^3 (the others); the second
    relation carries c factors that reduce to the standard form at c = 1.
    """
    a = 1.0 - j - c * p
    g = np.polynomial.Polynomial([0.0, a, 0.0, c])
    poly = c * g**3 - (c * p + 1.0 + j) * g - np.polynomial.Polynomial([0.0, 1.0])
    out = []
    for r in poly.roots():
        if abs(r.imag) > 1e-9 or r.real <= 1e-10:
            continue
        x_l = float(r.real)
        x_b = a * x_l + c * x_l**3
        if x_b > 1e-10:
            out.append((x_l, x_b))
    return out


def branch_e1(p: float, j: float, n: int, c: float = 1.0) -> BranchSolution:
    """Two-amplitude steady state on the S1 pattern (four low, rest high spins).

    For n = 8 the coupled polynomial system is solved exactly through its
    resultant; picked is the minimum-energy root whose reconstructed state is
    a true local minimum.  Other even n with n/2 even use a damped Newton
    solve of the full steady-state system seeded from the two-amplitude
    ansatz.  Returns an absent branch when no physical root exists.
    """
    if n % 2 != 0 or (n // 2) % 2 != 0:
        return BranchSolution("E1", False)
    J = build_mobius_ladder(n, j)
    if n == 8:
        best = None
        for x_l, x_b in _candidate_roots_e1(p, j, c):
            x = _e1_amplitude_vector(n, x_l, x_b)
            if np.max(np.abs(soft_gradient(x, p, c, J))) > 1e-8 * max(1.0, x_b**2):
                continue
            evals = np.linalg.eigvalsh(soft_hessian(x, p, c, J))
            if np.any(evals < -1e-8):
                continue
            e = soft_energy(x, p, c, J)
            if best is None or e < best[0]:
                best = (e, x_l, x_b, x)
        if best is None:
            return BranchSolution("E1", False)
        e, x_l, x_b, x = best
        return BranchSolution("E1", True, x_l=x_l, x_b=x_b, energy=e, amplitudes=x)
    return _branch_e1_newton(p, j, n, c, J)


def _branch_e1_newton(p: float, j: float, n: int, c: float, J: np.ndarray) -> BranchSolution:
    x_b0 = np.sqrt(max(p + (2.0 + j) / c, 0.05))
    x = _e1_amplitude_vector(n, 0.6 * x_b0, x_b0)
    target_signs = np.sign(x)
    for _ in range(200):
        g = soft_gradient(x, p, c, J)
        if np.max(np.abs(g)) < 1e-12:
            break
        H = soft_hessian(x, p, c, J)
        try:
            step = np.linalg.solve(H, g)  # Newton step for dE/dx = -g = 0
        except np.linalg.LinAlgError:
            return BranchSolution("E1", False)
        # damped Newton on the residual norm
        scale = 1.0
        r0 = np.linalg.norm(g)
        for _ in range(30):
            trial = x + scale * step
            if np.linalg.norm(soft_gradient(trial, p, c, J)) < r0:
                x = trial
                break
            scale *= 0.5
        else:
            return BranchSolution("E1", False)
    g = soft_gradient(x, p, c, J)
    if np.max(np.abs(g)) > 1e-9:
        return BranchSolution("E1", False)
    if not np.array_equal(np.sign(x), target_signs):
        return BranchSolution("E1", False)
    evals = np.linalg.eigvalsh(soft_hessian(x, p, c, J))
    if np.any(evals < -1e-8):
        return BranchSolution("E1", False)
    mags = np.abs(x)
    lows = sorted(range(n), key=lambda i: mags[i])[:4]
    rest = np.delete(mags, lows)
    return BranchSolution(
        "E1", True,
        x_l=float(np.mean(mags[lows])),
        x_b=float(np.mean(rest)) if rest.size else float(np.mean(mags[lows])),
        energy=soft_energy(x, p, c, J),
        amplitudes=x,
    )


def branch_crossing_pump(j: float, n: int, c: float = 1.0,
                         p_lo: float = -1.5, p_hi: float = 1.0) -> float | None:
    """Pump value where the E0 and E1 branch energies cross, or None."""
    def gap(p):
        e0 = branch_e0(p, j, n, c)
        e1 = branch_e1(p, j, n, c)
        if not (e0.exists and e1.exists):
            return np.nan
        return e0.energy - e1.energy

    grid = np.linspace(p_lo, p_hi, 61)
    vals = np.array([gap(p) for p in grid])
    ok = np.isfinite(vals)
    for a, b, fa, fb in zip(grid[ok][:-1], grid[ok][1:], vals[ok][:-1], vals[ok][1:]):
        if fa == 0.0:
            return float(a)
        if fa * fb < 0.0:
            return float(brentq(gap, a, b, xtol=1e-12))
    return None


@dataclass
class RegionMap:
    """Global-minimum classification over a (j, p) grid.

    labels[i, k] is 0 where neither branch exists, 1 where the uniform E0
    branch is the lower of the two, 2 where the two-amplitude E1 branch wins.
    crossings holds (j, p*) pairs of the equal-energy contour.
    """

    j_grid: np.ndarray
    p_grid: np.ndarray
    labels: np.ndarray
    crossings: list


def region_map(j_grid, p_grid, n: int, c: float = 1.0) -> RegionMap:
    """Pointwise comparison of branch energies over a parameter grid."""
    j_grid = np.asarray(j_grid, dtype=float)
    p_grid = np.asarray(p_grid, dtype=float)
    if j_grid.size == 0 or p_grid.size == 0:
        raise ValueError("region map grids must be nonempty")
    labels = np.zeros((j_grid.size, p_grid.size), dtype=int)
    crossings = []
    for i, j in enumerate(j_grid):
        for k, p in enumerate(p_grid):
            e0 = branch_e0(p, j, n, c)
            e1 = branch_e1(p, j, n, c)
            if not e0.exists and not e1.exists:
                labels[i, k] = 0
            elif e0.exists and (not e1.exists or e0.energy <= e1.energy):
                labels[i, k] = 1
            else:
                labels[i, k] = 2
        pc = branch_crossing_pump(j, n, c, p_grid.min(), p_grid.max())
        if pc is not None:
            crossings.append((float(j), pc))
    return RegionMap(j_grid, p_grid, labels, crossings)


# ---------------------------------------------------------------------------
# basins of attraction and the fixed-pump descent protocol
# ---------------------------------------------------------------------------

def basin_descriptors(x) -> tuple[float, float]:
    """Mean magnetization m and cyclic neighbor correlation of the fluctuations.

    Returns (m, nan) when the fluctuation variance vanishes (all components
    equal), where the correlation is undefined.
    """
    x = np.asarray(x, dtype=float)
    m = float(np.mean(x))
    d = x - m
    denom = float(np.sum(d * d))
    if denom <= 1e-12:
        return m, float("nan")
    return m, float(np.sum(d * np.roll(d, -1)) / denom)


@dataclass
class MinimumInfo:
    x: np.ndarray
    energy: float
    spins: np.ndarray
    family: str
    is_ground: bool = False


@dataclass
class BasinSample:
    m: np.ndarray
    xcorr: np.ndarray
    labels: np.ndarray          # index into minima, -1 for unresolved
    minima: list
    unresolved: int
    samples: int


def _ring_defects(spins: np.ndarray) -> np.ndarray:
    """Positions b of aligned ring bonds (s_b s_{b+1} = +1)."""
    s = np.asarray(spins)
    return np.flatnonzero(s * np.roll(s, -1) > 0)


def spin_family(spins: np.ndarray) -> str:
    """Name the symmetry family of a hard-spin pattern by its ring defects."""
    n = len(spins)
    defects = _ring_defects(spins)
    if len(defects) == 0:
        return "S0"
    if len(defects) == 2:
        gap = int(min((defects[1] - defects[0]) % n, (defects[0] - defects[1]) % n))
        if gap == n // 2:
            return "S1"
        return f"2-defect(sep={gap})"
    return f"{len(defects)}-defect"


def _stable_flow_dt(p: float, c: float, J: np.ndarray) -> float:
    box = 1.0 + np.sqrt(max(p, 0.0))
    curvature = c * (3.0 * (box + 0.5) ** 2 + abs(p)) + np.sum(np.abs(J), axis=1).max()
    return min(0.1, 1.5 / curvature)


def _flow_into_basin(J: np.ndarray, p: float, c: float, x: np.ndarray,
                     flow_tol: float, max_flow_steps: int) -> None:
    dt = _stable_flow_dt(p, c, J)
    for _ in range(max_flow_steps):
        g = soft_gradient(x, p, c, J)
        if np.max(np.abs(g)) < flow_tol:
            break
        x += dt * g


def _newton_polish(J: np.ndarray, p: float, c: float, x: np.ndarray,
                   newton_tol: float, max_newton: int) -> None:
    """Ridge-regularized Newton descent with Armijo backtracking, in place."""
    n = x.shape[1]
    for _ in range(max_newton):
        grad_e = -soft_gradient(x, p, c, J)
        res = np.max(np.abs(grad_e), axis=1)
        active = res > newton_tol
        if not active.any():
            break
        xa = x[active]
        ga = grad_e[active]
        H = soft_hessian(xa, p, c, J)
        evmin = np.linalg.eigvalsh(H)[:, 0]
        ridge = np.maximum(0.0, 1e-6 - evmin)
        H[:, np.arange(n), np.arange(n)] += ridge[:, None]
        try:
            step = -np.linalg.solve(H, ga[..., None])[..., 0]
        except np.linalg.LinAlgError:
            step = -ga
        descent = np.einsum("bi,bi->b", step, ga)
        uphill = descent >= 0.0
        step[uphill] = -ga[uphill]
        descent[uphill] = -np.einsum("bi,bi->b", ga[uphill], ga[uphill])
        e_old = soft_energy(xa, p, c, J)
        alpha = np.ones(len(xa))
        for _ in range(40):
            e_new = soft_energy(xa + alpha[:, None] * step, p, c, J)
            ok = e_new <= e_old + 1e-4 * alpha * descent
            if ok.all():
                break
            alpha[~ok] *= 0.5
        x[active] = xa + alpha[:, None] * step


def _minimum_status(J: np.ndarray, p: float, c: float, x: np.ndarray,
                    newton_tol: float):
    """(converged-to-minimum mask, smallest Hessian eigenvalue per sample)."""
    res = np.max(np.abs(soft_gradient(x, p, c, J)), axis=1)
    small = res <= newton_tol * 10.0
    evmin = np.full(len(x), np.inf)
    if small.any():
        evmin[small] = np.linalg.eigvalsh(soft_hessian(x[small], p, c, J))[:, 0]
    return small & (evmin > -1e-8), evmin


def _descend_batch(J: np.ndarray, p: float, c: float, x0: np.ndarray,
                   flow_tol: float = 1e-3, newton_tol: float = 1e-10,
                   max_flow_steps: int = 60000, max_newton: int = 100,
                   repair_rounds: int = 3):
    """Gradient flow into a basin, then damped Newton polish.

    Descents whose flow stalls near a saddle (small gradient but a negative
    Hessian eigenvalue after polishing) are kicked downhill along the unstable
    direction and re-descended; up to repair_rounds times.  Returns
    (x, converged) where converged marks samples resting at a true minimum.
    """
    x = np.asarray(x0, dtype=float).copy()
    _flow_into_basin(J, p, c, x, flow_tol, max_flow_steps)
    _newton_polish(J, p, c, x, newton_tol, max_newton)
    converged, evmin = _minimum_status(J, p, c, x, newton_tol)

    for _ in range(repair_rounds):
        stuck = ~converged
        if not stuck.any():
            break
        idx = np.flatnonzero(stuck)
        xs = x[idx]
        H = soft_hessian(xs, p, c, J)
        vals, vecs = np.linalg.eigh(H)
        v = vecs[:, :, 0]  # most unstable direction at a saddle
        e_plus = soft_energy(xs + 1e-3 * v, p, c, J)
        e_minus = soft_energy(xs - 1e-3 * v, p, c, J)
        sign = np.where(e_plus <= e_minus, 1.0, -1.0)
        xs = xs + sign[:, None] * 1e-3 * v
        _flow_into_basin(J, p, c, xs, flow_tol, max_flow_steps)
        _newton_polish(J, p, c, xs, newton_tol, max_newton)
        ok, _ = _minimum_status(J, p, c, xs, newton_tol)
        x[idx[ok]] = xs[ok]
        converged[idx[ok]] = True
    return x, converged


def _catalog_minima(J: np.ndarray, p: float, c: float, endpoints: np.ndarray,
                    converged: np.ndarray, match_tol: float = 1e-4):
    """Cluster converged endpoints into distinct minima and label each sample.

    Endpoints are Newton-polished to ~1e-9, far tighter than the matching
    tolerance, so a coarse rounding key groups them before the tolerance check.
    """
    minima: list[MinimumInfo] = []
    reps: list[np.ndarray] = []
    labels = np.full(len(endpoints), -1, dtype=int)
    key_cache: dict[tuple, int] = {}
    for i in np.flatnonzero(converged):
        x = endpoints[i]
        key = tuple(np.round(x / (10.0 * match_tol)).astype(np.int64))
        cached = key_cache.get(key)
        if cached is not None:
            labels[i] = cached
            continue
        for m_idx, rep in enumerate(reps):
            if np.max(np.abs(x - rep)) < match_tol:
                labels[i] = m_idx
                break
        else:
            reps.append(x)
            spins = spin_readout(x)
            minima.append(MinimumInfo(
                x=x.copy(),
                energy=float(soft_energy(x, p, c, J)),
                spins=spins,
                family=spin_family(spins),
            ))
            labels[i] = len(reps) - 1
        key_cache[key] = int(labels[i])
    if minima:
        e_min = min(m.energy for m in minima)
        for m in minima:
            m.is_ground = abs(m.energy - e_min) < 1e-8
    return minima, labels


def basin_sample(J: np.ndarray, p: float, c: float, samples: int, seed: int = 0) -> BasinSample:
    """Descend from uniform random starts in [-1, 1]^n and label the minima reached.

    Each start is characterized by its magnetization and cyclic correlation;
    non-converged descents count as unresolved (label -1).
    """
    J = validate_coupling_matrix(J)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n = J.shape[0]
    rng = np.random.default_rng(seed)
    x0 = rng.uniform(-1.0, 1.0, size=(samples, n))
    m = np.mean(x0, axis=1)
    xcorr = np.array([basin_descriptors(row)[1] for row in x0])
    xf, converged = _descend_batch(J, p, c, x0)
    minima, labels = _catalog_minima(J, p, c, xf, converged)
    return BasinSample(
        m=m,
        xcorr=xcorr,
        labels=labels,
        minima=minima,
        unresolved=int((~converged).sum()),
        samples=samples,
    )


@dataclass
class DescentBreakdown:
    """Fixed-pump descent statistics: which soft minimum each start reaches.

    sp[key] holds the reached fraction for "SP_0" (uniform S0 state), "SP_1"
    (the two-amplitude S1 state), "SP_2" (the next two-defect state family),
    "other" and "unresolved".
    """

    sp: dict
    counts: dict
    minima: list
    samples: int


def descent_state_probabilities(J: np.ndarray, p: float, c: float, samples: int,
                                seed: int = 0) -> DescentBreakdown:
    """Pure gradient descent at fixed pump from random starts in [-1, 1]^n."""
    result = basin_sample(J, p, c, samples, seed)
    counts = {"SP_0": 0, "SP_1": 0, "SP_2": 0, "other": 0, "unresolved": result.unresolved}
    s1_like = [m for m in result.minima
               if m.family.startswith("2-defect")]
    sp2_energy = min((m.energy for m in s1_like), default=None)
    for lab in result.labels:
        if lab < 0:
            continue
        m = result.minima[lab]
        if m.family == "S0":
            counts["SP_0"] += 1
        elif m.family == "S1":
            counts["SP_1"] += 1
        elif sp2_energy is not None and m.family.startswith("2-defect") \
                and abs(m.energy - sp2_energy) < 1e-8:
            counts["SP_2"] += 1
        else:
            counts["other"] += 1
    sp = {k: v / samples for k, v in counts.items()}
    return DescentBreakdown(sp=sp, counts=counts, minima=result.minima, samples=samples)
