"""Experiment orchestration: threshold sweeps, concentration-bound
calculators, and end-to-end robustness runs.

All experiments are deterministic functions of (config, seed).  Sweeps use
monotone coupling: one uniform draw per (color, edge) per trial decides
retention at every p simultaneously, so each trial has a well-defined
threshold index on the p grid and the per-trial success curve is a step
function by construction.  Output records carry no timestamps; re-running
a config reproduces them byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
import multiprocessing
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .clustering import cluster_subsystem, sample_system_clusters
from .errors import CapacityError, ParameterError, PipelineFailureError
from .hypergraph import (
    Hypergraph,
    HypergraphSystem,
    parse_system,
    system_min_degree,
)
from .patterns import Pattern, standard_patterns
from .randmodels import random_system_with_degree_floor, sparsify_system
from .rng import RngSpec
from .solver import (
    FactorSampler,
    compose_global_embedding,
    find_transversal_factor,
    validate_embedding,
)

EXACT_SAMPLER_BUDGET = 5_000


# ---------------------------------------------------------------------------
# Configuration.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    pattern: str = "triangle"
    generator: str = "complete"  # complete | degree-floor | file
    system_file: Optional[str] = None
    n_grid: tuple[int, ...] = (6,)
    p_grid: Optional[tuple[float, ...]] = None
    p_geometric: Optional[tuple[float, float, int]] = None
    p_multipliers: Optional[tuple[float, ...]] = None
    p: float = 1.0
    trials: int = 100
    seed: int = 0
    C: int = 3
    d: int = 1
    delta: float = 0.4
    alpha: float = 0.1
    keep_fraction: float = 0.9
    retry_cap: int = 50
    audit_pins: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        if not self.n_grid:
            raise ParameterError("n grid must be nonempty")
        for p in self.p_grid or ():
            if not 0 <= p <= 1:
                raise ParameterError(f"grid probability {p} outside [0, 1]")
        if not 0 <= self.p <= 1:
            raise ParameterError("p outside [0, 1]")


def parse_config(text: str) -> ExperimentConfig:
    data = json.loads(text)
    for key in ("n_grid", "p_grid", "p_geometric", "p_multipliers"):
        if data.get(key) is not None:
            data[key] = tuple(data[key])
    return ExperimentConfig(**data)


def serialize_config(cfg: ExperimentConfig) -> str:
    data = asdict(cfg)
    for key in ("n_grid", "p_grid", "p_geometric", "p_multipliers"):
        if data.get(key) is not None:
            data[key] = list(data[key])
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def load_pattern(name_or_path: str) -> Pattern:
    corpus = standard_patterns()
    if name_or_path in corpus:
        return corpus[name_or_path]
    from .hypergraph import parse_hypergraph

    with open(name_or_path) as fh:
        graph, _ = parse_hypergraph(fh.read())
    return Pattern.from_graph(graph)


def build_system(cfg: ExperimentConfig, F: Pattern, n: int, stream: RngSpec) -> HypergraphSystem:
    if cfg.generator == "complete":
        return HypergraphSystem.complete(F.k, F.s, F.t, n)
    if cfg.generator == "degree-floor":
        floor = math.ceil((cfg.delta + cfg.alpha) * math.comb(F.s * n - cfg.d, F.k - cfg.d))
        return random_system_with_degree_floor(
            F.k, F.s, F.t, n, cfg.d, floor, cfg.keep_fraction, stream
        )
    if cfg.generator == "file":
        if not cfg.system_file:
            raise ParameterError("generator 'file' needs system_file")
        with open(cfg.system_file) as fh:
            system, _ = parse_system(fh.read())
        return system
    raise ParameterError(f"unknown generator {cfg.generator!r}")


# ---------------------------------------------------------------------------
# Reference scales and p grids.
# ---------------------------------------------------------------------------


def reference_scale_d1(F: Pattern, n: int) -> float:
    """n^(-1/d1 - 1) * (log n)^(1/t)."""
    expo = -1.0 / float(F.d1) - 1.0
    return n**expo * math.log(n) ** (1.0 / F.t)


def reference_scale_m1(F: Pattern, n: int) -> float:
    """n^(-1/m1 - 1) * log n, for patterns that need not be balanced."""
    expo = -1.0 / float(F.m1) - 1.0
    return n**expo * math.log(n)


def resolve_p_grid(cfg: ExperimentConfig, F: Pattern, n: int, scale) -> tuple[float, ...]:
    if cfg.p_grid is not None:
        grid = list(cfg.p_grid)
    elif cfg.p_geometric is not None:
        lo, hi, count = cfg.p_geometric
        if lo <= 0 or hi <= lo or count < 2:
            raise ParameterError("geometric grid needs 0 < start < stop and count >= 2")
        grid = list(np.geomspace(lo, hi, int(count)))
    elif cfg.p_multipliers is not None:
        base = scale(F, n)
        grid = [min(1.0, m * base) for m in cfg.p_multipliers]
    else:
        raise ParameterError("config specifies no p grid")
    grid = sorted(min(1.0, max(0.0, p)) for p in grid)
    return tuple(grid)


# ---------------------------------------------------------------------------
# Threshold sweeps.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    n: int
    p: float
    successes: int
    trials: int

    @property
    def frequency(self) -> float:
        return self.successes / self.trials

    def wilson(self, z: float = 1.96) -> tuple[float, float]:
        return wilson_interval(self.successes, self.trials, z)


@dataclass(frozen=True)
class ThresholdCurve:
    points: tuple[SweepPoint, ...]
    p_half: tuple[tuple[int, Optional[float]], ...]
    slope: Optional[float]
    intercept: Optional[float]

    def points_for(self, n: int) -> list[SweepPoint]:
        return [pt for pt in self.points if pt.n == n]

    def p_half_for(self, n: int) -> Optional[float]:
        for m, v in self.p_half:
            if m == n:
                return v
        return None


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1 + z**2 / trials
    center = (phat + z**2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z**2 / (4 * trials**2)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _coupled_trial_draws(S: HypergraphSystem, stream: RngSpec) -> list[np.ndarray]:
    """One uniform per (color, edge); shared across every p in the trial."""
    gen = stream.numpy_generator()
    return [gen.random(g.edge_count) for g in S.colors]


def _system_at_p(S: HypergraphSystem, draws: list[np.ndarray], p: float) -> HypergraphSystem:
    colors = []
    for g, u in zip(S.colors, draws):
        edges = [e for e, x in zip(g.sorted_edges(), u) if x < p]
        colors.append(Hypergraph.from_edges(g.k, g.n, edges))
    return HypergraphSystem(S.k, S.s, S.t, S.n, tuple(colors))


def _trial_threshold_index(
    S: HypergraphSystem, F: Pattern, grid: Sequence[float], draws, node_budget: int
) -> tuple[int, list[tuple[int, bool]]]:
    """First grid index whose sparsification contains a factor (len(grid) if
    none), found by bisection; valid because success is monotone under the
    shared draws."""
    evaluated: list[tuple[int, bool]] = []

    def success(idx: int) -> bool:
        ok = (
            find_transversal_factor(
                _system_at_p(S, draws, grid[idx]), F, node_budget=node_budget
            )
            is not None
        )
        evaluated.append((idx, ok))
        return ok

    lo, hi = 0, len(grid)
    if not success(len(grid) - 1):
        _assert_step_shape(evaluated)
        return len(grid), evaluated
    hi = len(grid) - 1
    if success(0):
        _assert_step_shape(evaluated)
        return 0, evaluated
    lo = 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if success(mid):
            hi = mid
        else:
            lo = mid
    _assert_step_shape(evaluated)
    return hi, evaluated


def _assert_step_shape(evaluated: list[tuple[int, bool]]):
    # failures must all sit at smaller indices than successes
    fails = [i for i, ok in evaluated if not ok]
    wins = [i for i, ok in evaluated if ok]
    assert not fails or not wins or max(fails) < min(wins), "coupled curve not monotone"


def _sweep_trial_task(args: tuple) -> tuple[int, int, int, list]:
    """One coupled trial; module-level so worker pools can run it."""
    cfg_text, n, grid, trial = args
    cfg = parse_config(cfg_text)
    F = load_pattern(cfg.pattern)
    root = RngSpec(cfg.seed)
    host = build_system(cfg, F, n, root.split(500_000 + n))
    stream = root.split(n * 1_000_003 + trial)
    draws = _coupled_trial_draws(host, stream)
    idx, evaluated = _trial_threshold_index(host, F, grid, draws, node_budget=5_000_000)
    return n, trial, idx, evaluated


def _run_sweep(cfg: ExperimentConfig, scale) -> tuple[ThresholdCurve, list[dict]]:
    F = load_pattern(cfg.pattern)
    root = RngSpec(cfg.seed)
    records: list[dict] = []
    points: list[SweepPoint] = []
    halves: list[tuple[int, Optional[float]]] = []
    grids: dict[int, tuple[float, ...]] = {}
    tasks = []
    cfg_text = serialize_config(cfg)
    for n in cfg.n_grid:
        grid = resolve_p_grid(cfg, F, n, scale)
        grids[n] = grid
        host = build_system(cfg, F, n, root.split(500_000 + n))
        if host.vertex_count > 40:
            raise CapacityError(f"n={n} gives {host.vertex_count} vertices, above the solver cap")
        tasks.extend((cfg_text, n, grid, trial) for trial in range(cfg.trials))

    if cfg.workers > 1:
        with multiprocessing.Pool(cfg.workers) as pool:
            results = list(pool.imap_unordered(_sweep_trial_task, tasks, chunksize=4))
    else:
        results = [_sweep_trial_task(t) for t in tasks]
    results.sort(key=lambda r: (r[0], r[1]))  # aggregation independent of arrival order

    by_n: dict[int, list] = {n: [] for n in cfg.n_grid}
    for n, trial, idx, evaluated in results:
        by_n[n].append((trial, idx, evaluated))
    for n in cfg.n_grid:
        grid = grids[n]
        counts = [0] * len(grid)
        for trial, idx, evaluated in by_n[n]:
            for j in range(idx, len(grid)):
                counts[j] += 1
            records.append(
                {
                    "n": n,
                    "trial": trial,
                    "threshold_index": idx if idx < len(grid) else None,
                    "threshold_p": grid[idx] if idx < len(grid) else None,
                    "evaluations": [[j, ok] for j, ok in evaluated],
                }
            )
        for p, c in zip(grid, counts):
            points.append(SweepPoint(n=n, p=p, successes=c, trials=cfg.trials))
        halves.append((n, _interpolate_p_half(grid, [c / cfg.trials for c in counts])))

    slope = intercept = None
    usable = [(n, ph) for n, ph in halves if ph is not None]
    if len(usable) >= 2:
        xs = np.log([n for n, _ in usable])
        ys = np.log([ph for _, ph in usable])
        slope_f, intercept_f = np.polyfit(xs, ys, 1)
        slope, intercept = float(slope_f), float(intercept_f)
    curve = ThresholdCurve(
        points=tuple(points), p_half=tuple(halves), slope=slope, intercept=intercept
    )
    return curve, records


def _interpolate_p_half(grid: Sequence[float], freqs: Sequence[float]) -> Optional[float]:
    for j, f in enumerate(freqs):
        if f >= 0.5:
            if j == 0:
                return grid[0] if grid[0] > 0 else None
            f_lo, f_hi = freqs[j - 1], f
            if f_hi == f_lo:
                return grid[j]
            w = (0.5 - f_lo) / (f_hi - f_lo)
            if grid[j - 1] <= 0:
                return grid[j - 1] + w * (grid[j] - grid[j - 1])
            return math.exp(
                (1 - w) * math.log(grid[j - 1]) + w * math.log(grid[j])
            )
    return None


def run_threshold_sweep(cfg: ExperimentConfig) -> tuple[ThresholdCurve, list[dict]]:
    """Sweep against the strictly-1-balanced reference scale
    n^(-1/d1-1) (log n)^(1/t)."""
    return _run_sweep(cfg, reference_scale_d1)


def run_general_sweep_m1(cfg: ExperimentConfig) -> tuple[ThresholdCurve, list[dict]]:
    """Sweep against the general-pattern scale n^(-1/m1-1) log n."""
    return _run_sweep(cfg, reference_scale_m1)


def sweep_jsonl(records: list[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


def sweep_csv(curve: ThresholdCurve) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "p", "successes", "trials", "frequency", "wilson_low", "wilson_high"])
    for pt in curve.points:
        lo, hi = pt.wilson()
        writer.writerow(
            [pt.n, repr(pt.p), pt.successes, pt.trials, repr(pt.frequency), repr(lo), repr(hi)]
        )
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Concentration-bound calculators.
# ---------------------------------------------------------------------------


def bound_calculators(kind: str, params: dict) -> float:
    """Reference values of the standard tail bounds used in the audits.

    Values above 1 are reported as-is; vacuous bounds are still data.
    """
    if kind == "chernoff_upper":
        a, lam = params["a"], params["mean"]
        if not 0 < a < 1.5:
            raise ParameterError("chernoff needs 0 < a < 3/2")
        return math.exp(-(a**2) * lam / 3)
    if kind == "chernoff_lower":
        a, lam = params["a"], params["mean"]
        if not 0 < a < 1.5:
            raise ParameterError("chernoff needs 0 < a < 3/2")
        return math.exp(-(a**2) * lam / 2)
    if kind == "mcdiarmid":
        t, c, r, mean = params["t"], params["c"], params["r"], params["mean"]
        if t < 0 or t > mean:
            raise ParameterError("mcdiarmid needs 0 <= t <= mean")
        return 4 * math.exp(-(t**2) / (8 * c**2 * r * mean))
    if kind == "subset_concentration":
        alpha = params["alpha"]
        if alpha <= 0:
            raise ParameterError("alpha must be positive")
        return 2 * math.exp(-2 * alpha**2)
    if kind == "gupta_degree":
        ell, gap = params["ell"], params["gap"]
        if ell < 1 or not 0 < gap < 1:
            raise ParameterError("need ell >= 1 and 0 < gap < 1")
        return 2 * math.exp(-ell * gap**2 / 2)
    raise ParameterError(f"unknown bound kind {kind!r}")


# ---------------------------------------------------------------------------
# End-to-end pipeline.
# ---------------------------------------------------------------------------


def solve_cluster(sub: HypergraphSystem, F: Pattern, stream: RngSpec):
    """Embedding for one cluster: exactly uniform when full enumeration is
    clearly affordable (at most two copies), randomized backtracking
    otherwise.  Returns (embedding, mode)."""
    if sub.vertex_count <= 2 * F.s:
        try:
            sampler = FactorSampler(sub, F, node_budget=EXACT_SAMPLER_BUDGET)
            if sampler.factors:
                return sampler.sample(stream), "uniform"
            return None, "unsolvable"
        except CapacityError:
            pass
    emb = find_transversal_factor(sub, F, rng=stream)
    return (emb, "randomized") if emb is not None else (None, "unsolvable")


def end_to_end_robustness(cfg: ExperimentConfig) -> tuple[dict, list[dict]]:
    """Per trial: sparsify, cluster, solve each cluster, compose, validate.

    Per-trial failures are recorded, not raised.  Returns (report, records).
    """
    F = load_pattern(cfg.pattern)
    root = RngSpec(cfg.seed)
    records: list[dict] = []
    successes = 0
    retry_total = 0
    pin_counts: dict = {}
    pin_trials = 0
    for trial in range(cfg.trials):
        stream = root.split(trial)
        record: dict = {"trial": trial}
        S = build_system(cfg, F, cfg.n_grid[0], stream.split(1))
        sp = sparsify_system(S, cfg.p, stream.split(2)).system
        hypothesis = (cfg.delta + cfg.alpha) * math.comb(
            sp.vertex_count - cfg.d, F.k - cfg.d
        )
        if system_min_degree(sp, cfg.d) < hypothesis:
            record["outcome"] = "hypothesis_failed"
            records.append(record)
            continue
        outcome = _end_to_end_trial(sp, F, cfg, stream.split(3), record)
        if outcome is not None:
            successes += 1
            record["outcome"] = "success"
            retry_total += record.get("cluster_retries", 0)
            if cfg.audit_pins:
                pin_trials += 1
                for slot, host in enumerate(outcome.vertex_map):
                    pin_counts[(slot, host)] = pin_counts.get((slot, host), 0) + 1
        records.append(record)
    report = {
        "trials": cfg.trials,
        "successes": successes,
        "success_rate": successes / cfg.trials,
        "outcomes": _tally(records),
        "cluster_retries_on_success": retry_total,
    }
    if cfg.audit_pins and pin_trials:
        worst = max(pin_counts.items(), key=lambda kv: kv[1])
        bound = 10.0 / cfg.n_grid[0]
        prob = worst[1] / pin_trials
        report["pin_audit"] = {
            "max_probability": prob,
            "witness": [int(worst[0][0]), int(worst[0][1])],
            "bound": bound,
            "ratio": prob / bound,
            "trials": pin_trials,
        }
    return report, records


def _tally(records: list[dict]) -> dict:
    out: dict[str, int] = {}
    for r in records:
        out[r.get("outcome", "unknown")] = out.get(r.get("outcome", "unknown"), 0) + 1
    return dict(sorted(out.items()))


def _end_to_end_trial(sp, F, cfg, stream, record):
    for attempt in range(cfg.retry_cap + 1):
        record["cluster_retries"] = attempt
        try:
            partition, family, audit = sample_system_clusters(
                sp, cfg.C, cfg.delta, cfg.alpha, cfg.d,
                stream.split(attempt), retry_cap=cfg.retry_cap,
            )
        except (ParameterError, PipelineFailureError) as exc:
            record["outcome"] = f"clustering_failed:{type(exc).__name__}"
            return None
        record["clustering_attempts"] = audit["attempts"]
        pieces = []
        modes = []
        solvable = True
        for idx in range(partition.m):
            sub, vids, cids = cluster_subsystem(
                sp, partition.vertex_clusters[idx], partition.color_clusters[idx]
            )
            emb, mode = solve_cluster(sub, F, stream.split(7_000 + attempt * 100 + idx))
            modes.append(mode)
            if emb is None:
                solvable = False
                break
            pieces.append((emb, vids, cids))
        record["solve_modes"] = modes
        if not solvable:
            continue  # re-cluster and try again
        total = compose_global_embedding(sp, F, pieces)
        validate_embedding(sp, F, total)
        return total
    record["outcome"] = "cluster_unsolvable_after_retries"
    return None
