"""Command-line experiment runner: sweeps, analysis-data dumps, and verification.

Subcommands emit CSV (default) or JSON.  Every emitted file starts with
comment lines naming the protocol and all parameters, and files are
byte-identical across reruns with the same configuration and seed (timings go
to stderr, never into result files).

Exit codes: 0 success, 1 validation error, 2 runtime invariant breach.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from . import graph, landscape, master, oracle, quantum, softspin

__all__ = ["main"]


class ValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); validation errors are exit 1
        raise ValidationError(message)


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _write_rows(path, protocol: str, params: dict, header: list[str], rows: list,
                fmt: str) -> None:
    if fmt == "json":
        def plain(v):
            if isinstance(v, (float, np.floating)):
                return float(v)
            if isinstance(v, (int, np.integer)):
                return int(v)
            return v

        payload = {
            "protocol": protocol,
            "params": {k: plain(params[k]) for k in sorted(params)},
            "columns": header,
            "rows": [[plain(v) for v in r] for r in rows],
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"# protocol={protocol}"]
        lines.append("# " + " ".join(f"{k}={_fmt(params[k])}" for k in sorted(params)))
        lines.append(",".join(header))
        for r in rows:
            lines.append(",".join(_fmt(v) for v in r))
        text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

DEFAULT_SWEEP_CONFIG = {
    "instance": {"n": 8, "j_grid": {"start": 0.05, "stop": 0.95, "points": 25}},
    "variants": ["ht", "cim1", "cim2", "cim3", "qa"],
    "runs": 2000,
    "seed": 1,
    "softspin": {},
    "cim3": {"prelim_runs": 200},
    "qa": {},
}


def _load_config(path: str | None) -> dict:
    cfg = json.loads(json.dumps(DEFAULT_SWEEP_CONFIG))  # deep copy
    if path is None:
        return cfg
    try:
        with open(path) as fh:
            user = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config parse error in {path}: line {exc.lineno} col {exc.colno}: {exc.msg}")
    if not isinstance(user, dict):
        raise ValidationError("config root must be a JSON object")
    for key, value in user.items():
        if key not in cfg:
            raise ValidationError(f"unknown config field {key!r}")
        if isinstance(cfg[key], dict) and isinstance(value, dict):
            cfg[key].update(value)
        else:
            cfg[key] = value
    return cfg


def _resolve_j_grid(instance: dict) -> np.ndarray:
    if "j" in instance:
        return np.array([float(instance["j"])])
    grid_spec = instance.get("j_grid")
    if grid_spec is None:
        raise ValidationError("instance needs field 'j' or 'j_grid'")
    if isinstance(grid_spec, dict):
        for fieldname in ("start", "stop", "points"):
            if fieldname not in grid_spec:
                raise ValidationError(f"instance.j_grid missing field {fieldname!r}")
        grid = np.linspace(float(grid_spec["start"]), float(grid_spec["stop"]), int(grid_spec["points"]))
    else:
        grid = np.asarray([float(v) for v in grid_spec], dtype=float)
    if grid.size == 0:
        raise ValidationError("instance.j_grid is empty")
    if np.any(grid <= 0):
        raise ValidationError("all j values must be positive")
    return grid


def _ground_sign_set(n: int, j: float) -> set:
    """Ground readout patterns; exact enumeration when feasible, analytic otherwise."""
    if n <= oracle.MAX_SPINS:
        J = graph.build_mobius_ladder(n, j)
        return {tuple(s.astype(int)) for s in oracle.exhaustive_ground_state(J).ground_states}
    info = graph.analytic_ground_state(n, j)
    configs = []
    if info.label in ("S0", "tie"):
        configs.append(graph.build_s0(n))
    if info.label in ("S1", "tie"):
        configs.extend(graph.build_s1(n, i0) for i0 in range(n // 2))
    out = set()
    for s in configs:
        out.add(tuple(s.astype(int)))
        out.add(tuple((-s).astype(int)))
    return out


def _family_shares(spins: np.ndarray) -> tuple[float, float, float]:
    runs = len(spins)
    sp0 = sp1 = sp2 = 0
    for row in spins:
        fam = softspin.spin_family(row)
        if fam == "S0":
            sp0 += 1
        elif fam == "S1":
            sp1 += 1
        elif fam.startswith("2-defect"):
            sp2 += 1
    return sp0 / runs, sp1 / runs, sp2 / runs


def _sweep_one_j(args) -> list:
    cfg, j = args
    n = int(cfg["instance"]["n"])
    runs = int(cfg["runs"])
    seed = int(cfg["seed"])
    variants = cfg["variants"]
    J = graph.build_mobius_ladder(n, j)
    gset = _ground_sign_set(n, j)
    rows = []
    soft_over = dict(cfg.get("softspin", {}))
    for variant in variants:
        if variant == "qa":
            continue
        config = softspin.default_solver_config(j, variant=variant, **soft_over)
        delta = ""
        if variant == "cim3":
            prelim = int(cfg["cim3"].get("prelim_runs", 200))
            grid = cfg["cim3"].get("delta_grid")
            grid = None if grid is None else np.asarray(grid, dtype=float)
            best, _ = softspin.tune_delta(J, config, seed=seed + 7, grid=grid,
                                          prelim_runs=prelim, ground_spins=gset)
            config = replace(config, delta=best)
            delta = best
        res = softspin.run_ensemble(J, config, runs, seed)
        hits = sum(1 for row in res.spins if tuple(int(v) for v in row) in gset)
        p = hits / runs
        se = float(np.sqrt(p * (1.0 - p) / runs))
        sp0, sp1, sp2 = _family_shares(res.spins)
        rows.append([variant, float(j), delta, runs, p, se, sp0, sp1, sp2])
    if "qa" in variants:
        if n > quantum.MAX_QUBITS:
            print(f"# note: QA omitted for n = {n} > {quantum.MAX_QUBITS}", file=sys.stderr)
        else:
            qa_cfg = quantum.QAConfig(**cfg.get("qa", {}))
            run = quantum.run_qa(J, qa_cfg)
            rows.append(["qa", float(j), "", 1, float(run.p_gs[-1]), 0.0, "", "", ""])
    return rows


def cmd_sweep(ns) -> int:
    cfg = _load_config(ns.config)
    if ns.runs is not None:
        cfg["runs"] = ns.runs
    if ns.seed is not None:
        cfg["seed"] = ns.seed
    if int(cfg["runs"]) < 1:
        raise ValidationError("runs must be >= 1")
    unknown = [v for v in cfg["variants"] if v not in (*softspin.VARIANTS, "qa")]
    if unknown:
        raise ValidationError(f"unknown variants in config: {unknown}")
    j_grid = _resolve_j_grid(cfg["instance"])
    n = int(cfg["instance"]["n"])
    if n % 2 != 0 or n < 4:
        raise ValidationError(f"instance.n must be even and >= 4, got {n}")

    t_start = time.monotonic()
    tasks = [(cfg, float(j)) for j in j_grid]
    rows: list = []
    try:
        if ns.threads > 1:
            with ProcessPoolExecutor(max_workers=ns.threads) as pool:
                for chunk in pool.map(_sweep_one_j, tasks):
                    rows.extend(chunk)
        else:
            for task in tasks:
                rows.extend(_sweep_one_j(task))
    except KeyboardInterrupt:
        print("# interrupted: flushing partial results", file=sys.stderr)
    rows.sort(key=lambda r: (r[0], r[1]))
    params = {"n": n, "runs": cfg["runs"], "seed": cfg["seed"],
              "j_grid": "[" + ";".join(repr(float(v)) for v in j_grid) + "]",
              "variants": "+".join(cfg["variants"])}
    header = ["variant", "j", "delta", "runs", "p_gs", "p_gs_stderr", "sp0", "sp1", "sp2"]
    _write_rows(ns.out, "ground-state-probability-sweep", params, header, rows, ns.format)
    print(f"# sweep wall time: {time.monotonic() - t_start:.1f}s", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# analysis-data subcommands
# ---------------------------------------------------------------------------

def _parse_grid(text: str, name: str) -> np.ndarray:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"{name} must be a comma-separated list of numbers")
    if not vals:
        raise ValidationError(f"{name} is empty")
    return np.asarray(vals)


def cmd_graph(ns) -> int:
    j_grid = _parse_grid(ns.j_grid, "--j-grid")
    rows = []
    for j in j_grid:
        for k in range(ns.n):
            rows.append([float(j), k, graph.mobius_eigenvalue(ns.n, j, k)])
    params = {"n": ns.n, "j_e": graph.j_e(ns.n), "j_crit": graph.j_crit(ns.n)}
    _write_rows(ns.out, "mobius-spectrum-vs-coupling", params,
                ["j", "k", "eigenvalue"], rows, ns.format)
    return 0


def cmd_oracle(ns) -> int:
    J = graph.build_mobius_ladder(ns.n, ns.j)
    summary = oracle.exhaustive_ground_state(J)
    indices = oracle.ground_state_projector(J)
    rows = [["ground_energy", summary.ground_energy],
            ["degeneracy", len(summary.ground_states)],
            ["ground_indices", ";".join(str(int(i)) for i in indices)]]
    for energy in sorted(summary.histogram):
        rows.append([f"count@{energy!r}", summary.histogram[energy]])
    _write_rows(ns.out, "exhaustive-ground-state", {"n": ns.n, "j": ns.j},
                ["quantity", "value"], rows, ns.format)
    return 0


def cmd_basins(ns) -> int:
    J = graph.build_mobius_ladder(ns.n, ns.j)
    sample = softspin.basin_sample(J, ns.p, ns.c, ns.samples, ns.seed)
    rows = []
    for i in range(sample.samples):
        lab = int(sample.labels[i])
        if lab >= 0:
            m = sample.minima[lab]
            rows.append([sample.m[i], sample.xcorr[i], m.family, m.energy, int(m.is_ground)])
        else:
            rows.append([sample.m[i], sample.xcorr[i], "unresolved", "", ""])
    params = {"n": ns.n, "j": ns.j, "p": ns.p, "c": ns.c,
              "samples": ns.samples, "seed": ns.seed, "unresolved": sample.unresolved}
    _write_rows(ns.out, "basin-of-attraction-sample", params,
                ["magnetization", "ring_correlation", "minimum", "energy", "is_ground"],
                rows, ns.format)
    return 0


def cmd_critical(ns) -> int:
    J = graph.build_mobius_ladder(ns.n, ns.j)
    points = landscape.find_critical_points(J, ns.p, ns.c, starts=ns.starts, seed=ns.seed)
    rows = [[cp.energy, cp.distance_from_origin, cp.index, cp.family, int(cp.degenerate)]
            for cp in points]
    params = {"n": ns.n, "j": ns.j, "p": ns.p, "c": ns.c,
              "starts": ns.starts, "seed": ns.seed, "found": len(points)}
    _write_rows(ns.out, "critical-point-scatter", params,
                ["energy", "distance_from_origin", "index", "family", "degenerate"],
                rows, ns.format)
    return 0


def cmd_branches(ns) -> int:
    if ns.what == "region":
        j_grid = _parse_grid(ns.j_grid, "--j-grid")
        p_grid = _parse_grid(ns.p_grid, "--p-grid")
        rmap = softspin.region_map(j_grid, p_grid, ns.n, ns.c)
        rows = []
        names = {0: "neither", 1: "E0", 2: "E1"}
        for i, j in enumerate(rmap.j_grid):
            for k, p in enumerate(rmap.p_grid):
                rows.append([float(j), float(p), names[int(rmap.labels[i, k])]])
        for j, pc in rmap.crossings:
            rows.append([float(j), float(pc), "crossing"])
        _write_rows(ns.out, "branch-region-map", {"n": ns.n, "c": ns.c},
                    ["j", "p", "label"], rows, ns.format)
        return 0
    p_grid = _parse_grid(ns.p_grid, "--p-grid")
    rows = []
    for p in p_grid:
        result = landscape.barrier_height(
            graph.build_mobius_ladder(ns.n, ns.j), float(p), ns.c,
            starts=ns.starts, seed=ns.seed)
        rows.append([float(p), int(result.found), result.barrier, result.e0_minus_e1])
    params = {"n": ns.n, "j": ns.j, "c": ns.c, "starts": ns.starts, "seed": ns.seed}
    _write_rows(ns.out, "saddle-barrier-heights", params,
                ["p", "found", "barrier", "e0_minus_e1"], rows, ns.format)
    return 0


def cmd_trajectory(ns) -> int:
    J = graph.build_mobius_ladder(ns.n, ns.j)
    config = softspin.default_solver_config(
        ns.j, variant=ns.variant, delta=ns.delta, seed=ns.seed,
        sample_every=ns.sample_every, dt=ns.dt, t_end=ns.t_end)
    result = softspin.run_trajectory(J, config)
    n = ns.n
    per_spin_pump = ns.variant == "cim2"
    pump_cols = [f"p_{k}" for k in range(n)] if per_spin_pump else ["p"]
    header = ["t"] + pump_cols + [f"x_{k}" for k in range(n)] + ["energy"]
    rows = []
    for t, pump, x, energy in result.samples:
        pump_vals = list(pump) if per_spin_pump else [pump]
        rows.append([t] + pump_vals + list(x) + [energy])
    params = {"n": ns.n, "j": ns.j, "variant": ns.variant, "delta": ns.delta,
              "seed": ns.seed, "dt": ns.dt, "t_end": ns.t_end,
              "diverged": int(result.diverged),
              "final_ising_energy": result.ising_energy}
    _write_rows(ns.out, "soft-spin-trajectory", params, header, rows, ns.format)
    return 0


def _field_from_flags(n: int, h0: float, h1: float) -> np.ndarray | None:
    if h0 == 0.0 and h1 == 0.0:
        return None
    return quantum.symmetry_breaking_field(n, h0, h1)


def cmd_qa_run(ns) -> int:
    J = graph.build_mobius_ladder(ns.n, ns.j)
    config = quantum.QAConfig(b=ns.b, t0=ns.t0, dt=ns.dt, t_end=ns.t_end,
                              h=_field_from_flags(ns.n, ns.h0, ns.h1),
                              sample_every=ns.sample_every)
    run = quantum.run_qa(J, config)
    header = (["t", "gamma", "p_gs_total"]
              + [f"p_gs_{int(i)}" for i in run.ground_indices]
              + [f"prob_up_{k}" for k in range(ns.n)]
              + [f"bloch_mag_{k}" for k in range(ns.n)])
    rows = []
    for i in range(len(run.times)):
        rows.append([run.times[i], run.gammas[i], run.p_gs[i]]
                    + list(run.p_gs_per_state[i]) + list(run.prob_up[i])
                    + list(run.bloch_mag[i]))
    params = {"n": ns.n, "j": ns.j, "b": ns.b, "t0": ns.t0, "dt": ns.dt,
              "t_end": ns.t_end, "h0": ns.h0, "h1": ns.h1}
    _write_rows(ns.out, "quantum-annealing-time-series", params, header, rows, ns.format)
    if ns.snapshot:
        quantum.save_state(ns.snapshot, run.state)
    return 0


def cmd_master_run(ns) -> int:
    J = graph.build_mobius_ladder(ns.n, ns.j)
    h = _field_from_flags(ns.n, ns.h0, ns.h1)
    params = {"n": ns.n, "j": ns.j, "d": ns.d, "t0": ns.t0, "dt": ns.dt,
              "t_end": ns.t_end, "h0": ns.h0, "h1": ns.h1, "mode": ns.mode}
    if ns.mode == "imag":
        config = quantum.QAConfig(b=ns.d, t0=ns.t0, dt=ns.dt, t_end=ns.t_end,
                                  sample_every=ns.sample_every)
        run = master.imaginary_time_evolve(J, h, config)
        rows = [[run.times[i], run.p_gs[i]] for i in range(len(run.times))]
        _write_rows(ns.out, "imaginary-time-series", params, ["t", "p_gs"], rows, ns.format)
        return 0
    schedule = master.AnnealSchedule(d=ns.d, t0=ns.t0)
    run = master.anneal_master(J, h, schedule, mode=ns.mode, dt=ns.dt,
                               t_end=ns.t_end, sample_every=ns.sample_every)
    energies = quantum.build_diagonal(J, h)
    rows = []
    for i in range(len(run.times)):
        ref = master.boltzmann_reference(energies, run.temps[i], run.ground_indices)
        rows.append([run.times[i], run.temps[i], run.p_gs[i], ref])
    _write_rows(ns.out, "master-equation-time-series", params,
                ["t", "temperature", "p_gs", "equilibrium_p_gs"], rows, ns.format)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _verify_checks() -> list:
    checks = []

    def check(name):
        def wrap(fn):
            checks.append((name, fn))
            return fn
        return wrap

    @check("spectral-exactness")
    def _spectral():
        worst = 0.0
        for n in (4, 6, 8, 10, 12):
            for j in (0.1, 0.5, 1.0):
                J = graph.build_mobius_ladder(n, j)
                dense = np.sort(np.linalg.eigvalsh(J))
                analytic = np.sort(graph.mobius_spectrum(n, j))
                worst = max(worst, float(np.max(np.abs(dense - analytic))))
        return worst, 1e-10

    @check("ground-state-crossing")
    def _crossing():
        worst = 0.0
        for n in (8, 12):
            jc = graph.j_crit(n)
            J_lo = graph.build_mobius_ladder(n, jc - 1e-3)
            J_hi = graph.build_mobius_ladder(n, jc + 1e-3)
            lo = oracle.exhaustive_ground_state(J_lo).ground_states[0]
            hi = oracle.exhaustive_ground_state(J_hi).ground_states[0]
            ok = softspin.spin_family(lo.astype(int)) == "S0" and \
                softspin.spin_family(hi.astype(int)) == "S1"
            worst = max(worst, 0.0 if ok else 1.0)
        return worst, 0.5

    @check("branch-crossing-pump")
    def _pc():
        pc = softspin.branch_crossing_pump(0.4, 8, 1.0)
        return abs(pc - (-0.0872)), 5e-4

    @check("gradient-consistency")
    def _grad():
        rng = np.random.default_rng(3)
        J = graph.build_mobius_ladder(8, 0.4)
        worst = 0.0
        hstep = 1e-5
        for _ in range(20):
            x = rng.uniform(-1.5, 1.5, 8)
            p = rng.uniform(-1.0, 2.0)
            g = softspin.soft_gradient(x, p, 1.0, J)
            for i in range(8):
                e = np.zeros(8)
                e[i] = hstep
                fd = (softspin.soft_energy(x + e, p, 1.0, J)
                      - softspin.soft_energy(x - e, p, 1.0, J)) / (2 * hstep)
                worst = max(worst, abs(-fd - g[i]) / max(1.0, abs(g[i])))
        return worst, 1e-6

    @check("strang-norm")
    def _norm():
        J = graph.build_mobius_ladder(6, 0.5)
        config = quantum.QAConfig(b=5.0, dt=0.05, t_end=500.0, sample_every=10**9)
        run = quantum.run_qa(J, config)
        return run.state.norm_error(), 1e-10

    @check("strang-order")
    def _order():
        J = graph.build_mobius_ladder(4, 0.4)
        E = quantum.build_diagonal(J)

        def evolve(dt):
            state = quantum.initial_state(4)
            cfg = quantum.QAConfig(b=5.0, dt=dt, t_end=5.0)
            for _ in range(int(round(5.0 / dt))):
                state = quantum.strang_step(state, E, cfg, dt)
            return state.amplitudes

        ref = evolve(5.0 / 3200)
        r = np.linalg.norm(evolve(0.05) - ref) / np.linalg.norm(evolve(0.025) - ref)
        return abs(r - 4.0), 0.5

    @check("master-conservation")
    def _conserve():
        J = graph.build_mobius_ladder(6, 0.5)
        run = master.anneal_master(J, None, master.AnnealSchedule(), mode="sa",
                                   dt=0.01, t_end=20.0)
        return abs(float(run.probabilities.sum()) - 1.0), 1e-8

    @check("detailed-balance")
    def _balance():
        E = quantum.build_diagonal(graph.build_mobius_ladder(4, 0.7))
        worst = 0.0
        from scipy.special import expit
        for T in (0.3, 1.0, 5.0):
            for i in (0, 3, 7, 12):
                for k in range(4):
                    jj = i ^ (1 << k)
                    a_ij = expit((E[jj] - E[i]) / T)
                    a_ji = expit((E[i] - E[jj]) / T)
                    shift = min(E[i], E[jj])
                    worst = max(worst, abs(a_ij * np.exp(-(E[jj] - shift) / T)
                                           - a_ji * np.exp(-(E[i] - shift) / T)))
        return worst, 1e-12

    @check("bloch-bounds")
    def _bloch():
        state = quantum.initial_state(6)
        worst = 0.0
        for k in range(6):
            mag = quantum.bloch_vector(quantum.reduced_density_matrix(state, k)).magnitude
            worst = max(worst, abs(mag - 1.0))
        return worst, 1e-8

    @check("flip-symmetry")
    def _flip():
        J = graph.build_mobius_ladder(6, 0.5)
        config = quantum.QAConfig(b=5.0, dt=0.1, t_end=50.0, sample_every=10**9)
        run = quantum.run_qa(J, config)
        probs = np.abs(run.state.amplitudes) ** 2
        comp = probs[::-1]  # bit complement reverses the index order
        return float(np.max(np.abs(probs - comp))), 1e-10

    @check("oracle-vs-analytic")
    def _oracle_analytic():
        worst = 0.0
        for n in (6, 8, 10, 12):
            for j in np.linspace(0.05, 1.0, 20):
                if abs(j - graph.j_crit(n)) < 1e-9:
                    continue
                J = graph.build_mobius_ladder(n, j)
                summary = oracle.exhaustive_ground_state(J)
                info = graph.analytic_ground_state(n, j)
                ok = abs(summary.ground_energy - info.energy) < 1e-9 and \
                    len(summary.ground_states) == info.degeneracy
                worst = max(worst, 0.0 if ok else 1.0)
        return worst, 0.5

    return checks


def cmd_verify(ns) -> int:
    only = set(ns.only.split(",")) if ns.only else None
    failures = 0
    print(f"{'check':28s} {'measured':>12s} {'threshold':>12s} result")
    for name, fn in _verify_checks():
        if only is not None and name not in only:
            continue
        t0 = time.monotonic()
        try:
            measured, threshold = fn()
            ok = measured <= threshold
        except Exception as exc:  # a crash is a failure, not an abort
            print(f"{name:28s} {'error':>12s} {'-':>12s} FAIL ({exc})")
            failures += 1
            continue
        status = "PASS" if ok else "FAIL"
        print(f"{name:28s} {measured:12.3e} {threshold:12.3e} {status}"
              f"  [{time.monotonic() - t0:.1f}s]")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 2


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="isinglab",
                     description="Ising-minimization experiments on Mobius-ladder graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed_default=0):
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=seed_default)

    p = sub.add_parser("sweep", help="ground-state probability sweep over couplings")
    p.add_argument("--config", default=None, help="JSON configuration file")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--runs", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("graph", help="analytic spectrum and thresholds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j-grid", required=True, help="comma-separated couplings")
    common(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("oracle", help="exhaustive ground-state summary")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=float, required=True)
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("basins", help="basin-of-attraction point cloud")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--j", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=20000)
    common(p)
    p.set_defaults(func=cmd_basins)

    p = sub.add_parser("critical", help="critical-point scatter data")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--j", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--starts", type=int, default=4000)
    common(p)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("branches", help="branch region map or barrier curves")
    p.add_argument("--what", choices=("region", "barrier"), default="region")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--j", type=float, default=0.4, help="coupling for barrier curves")
    p.add_argument("--j-grid", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    p.add_argument("--p-grid", default="-1.5,-1.0,-0.5,0.0,0.5,1.0,1.5,2.0")
    p.add_argument("--starts", type=int, default=4000)
    common(p)
    p.set_defaults(func=cmd_branches)

    p = sub.add_parser("trajectory", help="single soft-spin trajectory dump")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--j", type=float, required=True)
    p.add_argument("--variant", choices=softspin.VARIANTS, default="cim1")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--t-end", type=float, default=3000.0)
    p.add_argument("--sample-every", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("qa-run", help="quantum annealing time series")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--j", type=float, required=True)
    p.add_argument("--b", type=float, default=5.0)
    p.add_argument("--t0", type=float, default=0.5)
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--t-end", type=float, default=500.0)
    p.add_argument("--h0", type=float, default=0.0, help="field coefficient on the S0 pattern")
    p.add_argument("--h1", type=float, default=0.0, help="field coefficient on the S1 pattern")
    p.add_argument("--sample-every", type=int, default=50)
    p.add_argument("--snapshot", default=None, help="path for a binary state snapshot")
    common(p)
    p.set_defaults(func=cmd_qa_run)

    p = sub.add_parser("master-run", help="master-equation or imaginary-time series")
    p.add_argument("--mode", choices=("sa", "ca", "imag"), default="sa")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--j", type=float, required=True)
    p.add_argument("--d", type=float, default=5.0)
    p.add_argument("--t0", type=float, default=0.5)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--t-end", type=float, default=500.0)
    p.add_argument("--h0", type=float, default=0.0)
    p.add_argument("--h1", type=float, default=0.0)
    p.add_argument("--sample-every", type=int, default=1000)
    common(p)
    p.set_defaults(func=cmd_master_run)

    p = sub.add_parser("verify", help="run the invariant battery at desk scale")
    p.add_argument("--only", default=None, help="comma-separated check names")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
        return ns.func(ns)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        print(f"runtime invariant breach: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
