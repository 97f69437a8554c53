"""Critical points of the soft-spin energy: enumeration, Hessian classes, barriers.

Critical points solve dE/dx = 0; their Morse index is the number of negative
Hessian eigenvalues.  Enumeration is sampled (multistart Newton), so reported
counts carry the start budget alongside; completeness is checked only in the
sense that the known analytic states are recovered.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import validate_coupling_matrix
from .softspin import (
    _descend_batch,
    soft_energy,
    soft_gradient,
    soft_hessian,
    spin_family,
    spin_readout,
)

__all__ = [
    "BarrierResult",
    "CriticalPoint",
    "barrier_height",
    "critical_point_counts",
    "find_critical_points",
]

DEDUP_TOL = 1e-6
DEGENERATE_TOL = 1e-8
GRADIENT_TOL = 1e-9


@dataclass
class CriticalPoint:
    """One critical point with its Hessian classification."""

    x: np.ndarray
    energy: float
    index: int
    distance_from_origin: float
    degenerate: bool
    family: str


def _newton_critical(J: np.ndarray, p: float, c: float, x0: np.ndarray,
                     tol: float = 1e-12, max_iter: int = 80) -> np.ndarray:
    """Batched undamped Newton on dE/dx = 0; converges to saddles as well.

    Returns the subset of rows that converged below tol.
    """
    x = x0.copy()
    nb, n = x.shape
    active = np.ones(nb, dtype=bool)
    for _ in range(max_iter):
        g = -soft_gradient(x[active], p, c, J)
        res = np.max(np.abs(g), axis=1)
        done = res < tol
        if done.all():
            break
        idx = np.flatnonzero(active)
        sub = ~done
        H = soft_hessian(x[idx[sub]], p, c, J)
        try:
            step = np.linalg.solve(H, -g[sub][..., None])[..., 0]
        except np.linalg.LinAlgError:
            # retry rows individually, dropping the singular ones
            step = np.zeros_like(g[sub])
            keep = np.ones(len(step), dtype=bool)
            for r in range(len(step)):
                try:
                    step[r] = np.linalg.solve(H[r], -g[sub][r])
                except np.linalg.LinAlgError:
                    keep[r] = False
            drop = idx[sub][~keep]
            active[drop] = False
            sub_idx = idx[sub][keep]
            norm = np.max(np.abs(step[keep]), axis=1, keepdims=True)
            step_k = step[keep] * np.minimum(1.0, 2.0 / np.maximum(norm, 1e-30))
            x[sub_idx] += step_k
            continue
        norm = np.max(np.abs(step), axis=1, keepdims=True)
        step *= np.minimum(1.0, 2.0 / np.maximum(norm, 1e-30))
        x[idx[sub]] += step
    g = -soft_gradient(x, p, c, J)
    ok = active & (np.max(np.abs(g), axis=1) < GRADIENT_TOL)
    return x[ok]


def find_critical_points(J: np.ndarray, p: float, c: float,
                         starts: int = 4000, seed: int = 0) -> list[CriticalPoint]:
    """Multistart Newton search for critical points, deduplicated and classified.

    Starts are uniform in the box [-(1 + sqrt(max(p, 0))), +...]^n; the origin
    is always included (it is critical for every p).  The found set is closed
    under the global sign flip.  Eigenvalues within DEGENERATE_TOL of zero mark
    a point as degenerate and are not counted as negative.
    """
    J = validate_coupling_matrix(J)
    if starts < 1:
        raise ValueError("starts must be >= 1")
    n = J.shape[0]
    half = 1.0 + np.sqrt(max(p, 0.0))
    rng = np.random.default_rng(seed)
    x0 = rng.uniform(-half, half, size=(starts, n))
    x0 = np.vstack([np.zeros((1, n)), x0])
    converged = _newton_critical(J, p, c, x0)
    converged = np.vstack([converged, -converged])  # -x is critical whenever x is

    points: list[CriticalPoint] = []
    reps: list[np.ndarray] = []
    key_cache: set[tuple] = set()
    for x in converged:
        key = tuple(np.round(x / (10.0 * DEDUP_TOL)).astype(np.int64))
        if key in key_cache:
            continue
        if any(np.max(np.abs(x - r)) < DEDUP_TOL for r in reps):
            key_cache.add(key)
            continue
        reps.append(x)
        key_cache.add(key)
        evals = np.linalg.eigvalsh(soft_hessian(x, p, c, J))
        points.append(CriticalPoint(
            x=x,
            energy=float(soft_energy(x, p, c, J)),
            index=int(np.sum(evals < -DEGENERATE_TOL)),
            distance_from_origin=float(np.linalg.norm(x)),
            degenerate=bool(np.any(np.abs(evals) < DEGENERATE_TOL)),
            family=spin_family(spin_readout(x)),
        ))
    points.sort(key=lambda cp: (cp.index, cp.energy))
    return points


def critical_point_counts(J: np.ndarray, p_grid, c: float,
                          starts: int | None = None, seed: int = 0):
    """Counts of critical points by Hessian index over a pump grid.

    The default start budget is 200 * 2^min(n, 10); counts are sampled (a
    lower bound), so the budget is returned with each row.
    """
    J = validate_coupling_matrix(J)
    n = J.shape[0]
    budget = starts if starts is not None else 200 * 2 ** min(n, 10)
    rows = []
    for p in np.asarray(p_grid, dtype=float):
        points = find_critical_points(J, p, c, starts=budget, seed=seed)
        by_index: dict[int, int] = {}
        for cp in points:
            by_index[cp.index] = by_index.get(cp.index, 0) + 1
        rows.append({"p": float(p), "counts": by_index, "total": len(points),
                     "starts": budget})
    return rows


@dataclass
class BarrierResult:
    """Energy barrier between the uniform (S0) and two-amplitude (S1) minima."""

    found: bool
    barrier: float = np.nan          # saddle energy minus the S1 minimum energy
    e0_minus_e1: float = np.nan
    saddle_energy: float = np.nan
    saddle_x: np.ndarray | None = None


def _flow_endpoint(J: np.ndarray, p: float, c: float, x0: np.ndarray) -> np.ndarray:
    xf, ok = _descend_batch(J, p, c, x0[None, :])
    return xf[0] if ok[0] else None


def barrier_height(J: np.ndarray, p: float, c: float,
                   starts: int = 4000, seed: int = 0) -> BarrierResult:
    """Height of the lowest index-1 saddle connecting the S0 and S1 minima.

    A saddle connects the two minima when steepest-descent paths launched
    along its unstable direction terminate at one minimum of each family
    (matched at infinity-norm distance 1e-4).  Returns a flagged absent
    result when either minimum is missing or no connecting saddle is found
    within the start budget.
    """
    points = find_critical_points(J, p, c, starts=starts, seed=seed)
    minima = [cp for cp in points if cp.index == 0]
    e0 = [cp for cp in minima if cp.family == "S0"]
    e1 = [cp for cp in minima if cp.family == "S1"]
    if not e0 or not e1:
        return BarrierResult(False)
    e0_energy = min(cp.energy for cp in e0)
    e1_energy = min(cp.energy for cp in e1)
    targets0 = [cp.x for cp in e0]
    targets1 = [cp.x for cp in e1]

    best = None
    for cp in points:
        if cp.index != 1:
            continue
        if best is not None and cp.energy >= best.energy:
            continue
        H = soft_hessian(cp.x, p, c, J)
        evals, evecs = np.linalg.eigh(H)
        v = evecs[:, 0]
        ends = []
        for sign in (+1.0, -1.0):
            end = _flow_endpoint(J, p, c, cp.x + sign * 1e-4 * v)
            ends.append(end)
        if any(e is None for e in ends):
            continue

        def hits(end, targets):
            return any(np.max(np.abs(end - t)) < 1e-4 for t in targets)

        a, b = ends
        connects = (hits(a, targets0) and hits(b, targets1)) or \
                   (hits(a, targets1) and hits(b, targets0))
        if connects:
            best = cp
    if best is None:
        return BarrierResult(False, e0_minus_e1=e0_energy - e1_energy)
    return BarrierResult(
        True,
        barrier=best.energy - e1_energy,
        e0_minus_e1=e0_energy - e1_energy,
        saddle_energy=best.energy,
        saddle_x=best.x,
    )
