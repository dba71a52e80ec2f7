"""Adversarial quadratic benchmark: instances, baselines, regret, CSV output.

An experiment is described by a JSON document::

    {
      "dim": 25, "constraints": 15,
      "horizons": [100, 200, 500],
      "seeds": [0, 1, 2],
      "noise": 0.1,
      "objective": "nonmonotone",          # or "monotone"
      "ftpl_scale": 0.01,
      "timing": true,
      "instance": null,                    # optional path from `drsubmax generate`
      "baseline": {"mode": "offline_fw", "case": "B",
                   "iterations": 200, "grid_step": 0.01},
      "algorithms": [
        {"name": "GMFW(1/2)", "case": "B", "feedback": "full",
         "oracle": "gradient", "beta": 0.5},
        {"name": "SBFW", "case": "B", "feedback": "semi-bandit",
         "oracle": "gradient"},
        {"name": "custom", "case": "B", "feedback": "full",
         "oracle": "gradient", "K": 8, "L": 2, "delta": 0.0}
      ]
    }

``run_experiment`` writes ``regret.csv`` (one row per algorithm, horizon,
seed and round) and ``summary.csv`` (per algorithm and horizon).
"""

import csv
import itertools
import json
import os
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from .fw import (BlockSchedule, Case, Feedback, bandit_frank_wolfe, meta_frank_wolfe,
                 offline_frank_wolfe, schedule)
from .geometry import FeasibleRegion, membership
from .objectives import (OracleKind, OracleSpec, QuadraticObjective, generate_monotone_quadratic,
                         generate_quadratic, generate_region, metadata, value)
from .olo import ftpl_factory
from .verify import grid_max

CSV_COLUMNS = ["run_id", "algorithm", "case", "feedback", "beta", "seed", "t", "reward",
               "cum_reward", "baseline_cum", "avg_regret", "queries_cum", "wall_ms"]
SUMMARY_COLUMNS = ["algorithm", "T", "runs", "avg_regret_mean", "avg_regret_std",
                   "cum_regret_mean", "queries_mean", "wall_ms_mean", "wall_ms_std"]


class ConfigError(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class RunFailure(RuntimeError):
    def __init__(self, algorithm, seed, horizon, block, cause):
        where = f"algorithm={algorithm} seed={seed} T={horizon}"
        if block is not None:
            where += f" block={block}"
        super().__init__(f"{where}: {cause}")
        self.algorithm, self.seed, self.horizon, self.block = algorithm, seed, horizon, block


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    case: Case = Case.B
    feedback: Feedback = Feedback.FULL
    oracle: OracleKind = OracleKind.GRADIENT
    beta: Optional[float] = 0.5
    K: Optional[int] = None
    L: Optional[int] = None
    delta: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "case", Case(self.case))
        object.__setattr__(self, "feedback", Feedback(self.feedback))
        object.__setattr__(self, "oracle", OracleKind(self.oracle))
        if self.feedback is not Feedback.FULL:
            object.__setattr__(self, "beta", None)

    def schedule_for(self, T):
        if self.K is not None or self.L is not None:
            if self.K is None or self.L is None:
                raise ConfigError(f"{self.name}: explicit schedules need both K and L")
            return BlockSchedule(T=T, L=self.L, K=self.K, delta=self.delta or 0.0,
                                 beta=self.beta, feedback=self.feedback, oracle=self.oracle)
        sched = schedule(self.feedback, self.oracle, T, self.beta)
        if self.delta is not None:
            sched = BlockSchedule(T=T, L=sched.L, K=sched.K, delta=self.delta,
                                  beta=sched.beta, feedback=sched.feedback, oracle=sched.oracle)
        return sched

    @classmethod
    def from_dict(cls, data):
        known = {"name", "case", "feedback", "oracle", "beta", "K", "L", "delta"}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown algorithm keys: {sorted(extra)}")
        return cls(**data)


@dataclass(frozen=True)
class BaselineSpec:
    mode: str = "offline_fw"
    case: Case = Case.B
    iterations: int = 200
    grid_step: float = 0.01

    def __post_init__(self):
        object.__setattr__(self, "case", Case(self.case))
        if self.mode not in ("offline_fw", "brute_force"):
            raise ConfigError(f"unknown baseline mode {self.mode!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    dim: int
    constraints: int
    horizons: List[int]
    algorithms: List[AlgorithmSpec]
    seeds: List[int] = field(default_factory=lambda: list(range(10)))
    noise: float = 0.1
    objective: str = "nonmonotone"
    ftpl_scale: float = 0.01
    timing: bool = True
    instance: Optional[str] = None
    baseline: BaselineSpec = field(default_factory=BaselineSpec)

    def __post_init__(self):
        if self.objective not in ("nonmonotone", "monotone"):
            raise ConfigError(f"unknown objective family {self.objective!r}")
        if not self.algorithms:
            raise ConfigError("no algorithms configured")
        names = [a.name for a in self.algorithms]
        if len(set(names)) != len(names):
            raise ConfigError("algorithm names must be unique")
        if self.baseline.mode == "brute_force" and self.dim > 3:
            raise ConfigError("brute-force baselines need dim <= 3")
        # Fail fast on schedules that cannot run.
        for alg in self.algorithms:
            for T in self.horizons:
                alg.schedule_for(T)

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        data["algorithms"] = [AlgorithmSpec.from_dict(a) for a in data.get("algorithms", [])]
        data["baseline"] = BaselineSpec(**data.get("baseline", {}))
        return cls(**data)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


# -- instances ---------------------------------------------------------------

def build_adversary(dim, constraints, horizon, rng, objective="nonmonotone"):
    """Region and ``horizon`` objectives drawn up front (oblivious adversary).

    Objectives are drawn sequentially, so a shorter horizon with the same seed
    yields a prefix of a longer one.
    """
    region = generate_region(dim, constraints, rng)
    gen = generate_quadratic if objective == "nonmonotone" else generate_monotone_quadratic
    return region, [gen(dim, rng) for _ in range(horizon)]


def save_instance(path, region, objectives, seed=None):
    doc = {
        "dim": region.dim,
        "constraints": region.n_constraints,
        "horizon": len(objectives),
        "seed": seed,
        "region": region.to_dict(),
        "objectives": [f.to_dict() for f in objectives],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_instance(path):
    with open(path) as fh:
        doc = json.load(fh)
    region = FeasibleRegion.from_dict(doc["region"])
    return region, [QuadraticObjective.from_dict(f) for f in doc["objectives"]]


def prefix_sums(objectives):
    """Quadratics ``sum_{t' <= t} F_t'`` for every t."""
    H = np.cumsum([f.H for f in objectives], axis=0)
    h = np.cumsum([f.h for f in objectives], axis=0)
    c = np.cumsum([f.c for f in objectives])
    return [QuadraticObjective(H[i], h[i], c[i]) for i in range(len(objectives))]


# -- baselines and regret ---------------------------------------------------

def compute_baseline(objectives, region, spec=None):
    """Comparator points ``x_t*`` for every prefix ``F_1 + ... + F_t``.

    Returns a ``(T, d)`` array.
    """
    spec = spec or BaselineSpec()
    points = np.zeros((len(objectives), region.dim))
    for t, F in enumerate(prefix_sums(objectives)):
        mean = F.scaled(1.0 / (t + 1))
        if spec.mode == "brute_force":
            points[t] = grid_max(mean, region, spec.grid_step)[0]
        else:
            points[t] = offline_frank_wolfe(spec.case, mean, region, spec.iterations)
    return points


@dataclass
class RegretTrace:
    reward: np.ndarray
    cum_reward: np.ndarray
    baseline_cum: np.ndarray
    avg_regret: np.ndarray
    queries_cum: np.ndarray
    wall_ms: np.ndarray

    @property
    def cum_regret(self):
        return self.baseline_cum - self.cum_reward


def compute_regret(rewards, objectives, baseline, queries=None, wall_ms=None):
    """Running average regret ``(sum_t' F_t'(x_t*) - sum_t' F_t'(y_t')) / t``."""
    rewards = np.asarray(rewards, dtype=float)
    T = rewards.size
    if len(objectives) != T or len(baseline) != T:
        raise LengthMismatch(f"{T} rewards, {len(objectives)} objectives, {len(baseline)} baseline points")
    sums = prefix_sums(objectives)
    baseline_cum = np.array([value(sums[t], baseline[t]) for t in range(T)])
    cum_reward = np.cumsum(rewards)
    t = np.arange(1, T + 1)
    queries = np.zeros(T, dtype=np.int64) if queries is None else np.asarray(queries)
    wall_ms = np.zeros(T) if wall_ms is None else np.asarray(wall_ms, dtype=float)
    return RegretTrace(reward=rewards, cum_reward=cum_reward, baseline_cum=baseline_cum,
                       avg_regret=(baseline_cum - cum_reward) / t,
                       queries_cum=np.cumsum(queries), wall_ms=wall_ms)


# -- orchestration -----------------------------------------------------------

def run_id(alg_index, alg, T, seed):
    return f"{alg_index:02d}-{alg.name}-T{T:07d}-s{seed:05d}"


def algorithm_rng(seed, name, T):
    return np.random.default_rng(np.random.SeedSequence([seed, T, zlib.crc32(name.encode())]))


def oracle_spec_for(alg, sched, objectives, noise):
    metas = [metadata(f) for f in objectives]
    return OracleSpec(kind=alg.oracle, noise_scale=noise, delta=sched.delta,
                      B0=max(m.M0 for m in metas) + noise,
                      B1=max(m.M1 for m in metas) + noise)


def run_algorithm(alg, sched, region, objectives, noise, rng, ftpl_scale, keep_iterates=False):
    spec = oracle_spec_for(alg, sched, objectives, noise)
    fn = meta_frank_wolfe if sched.feedback is Feedback.FULL else bandit_frank_wolfe
    return fn(alg.case, sched, region, ftpl_factory(ftpl_scale), spec, objectives, rng,
              keep_iterates=keep_iterates)


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _seed_rows(config, seed):
    """All runs for one seed; returns (rows, summaries, error)."""
    T_max = max(config.horizons)
    if config.instance:
        region, objectives = load_instance(config.instance)
        if len(objectives) < T_max:
            raise ConfigError(f"instance has {len(objectives)} rounds, need {T_max}")
        objectives = objectives[:T_max]
    else:
        region, objectives = build_adversary(config.dim, config.constraints, T_max,
                                             np.random.default_rng(seed), config.objective)
    baseline = compute_baseline(objectives, region, config.baseline)

    rows, summaries = [], []
    for i, alg in enumerate(config.algorithms):
        for T in config.horizons:
            sched = alg.schedule_for(T)
            start = time.perf_counter()
            try:
                trace = run_algorithm(alg, sched, region, objectives[:T], config.noise,
                                      algorithm_rng(seed, alg.name, T), config.ftpl_scale)
            except Exception as exc:
                return rows, summaries, RunFailure(alg.name, seed, T,
                                                   getattr(exc, "block", None), exc)
            elapsed = 1e3 * (time.perf_counter() - start)
            reg = compute_regret(trace.rewards, objectives[:T], baseline[:T],
                                 trace.queries, trace.wall_ms)
            rid = run_id(i, alg, T, seed)
            beta = "" if alg.beta is None else _fmt(alg.beta)
            for t in range(T):
                rows.append([rid, alg.name, alg.case.value, alg.feedback.value, beta,
                             str(seed), str(t + 1), _fmt(reg.reward[t]), _fmt(reg.cum_reward[t]),
                             _fmt(reg.baseline_cum[t]), _fmt(reg.avg_regret[t]),
                             _fmt(reg.queries_cum[t]),
                             _fmt(reg.wall_ms[t]) if config.timing else ""])
            summaries.append({"algorithm": alg.name, "T": T, "seed": seed,
                              "avg_regret": float(reg.avg_regret[-1]),
                              "cum_regret": float(reg.cum_regret[-1]),
                              "queries": int(trace.total_queries), "wall_ms": elapsed})
    return rows, summaries, None


def _workers():
    env = os.environ.get("DRSUBMAX_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def summarize(records, config, timing=True):
    out = []
    for alg in config.algorithms:
        for T in config.horizons:
            sel = [r for r in records if r["algorithm"] == alg.name and r["T"] == T]
            if not sel:
                continue
            avg = np.array([r["avg_regret"] for r in sel])
            wall = np.array([r["wall_ms"] for r in sel])
            ddof = 1 if len(sel) > 1 else 0
            out.append({
                "algorithm": alg.name, "T": T, "runs": len(sel),
                "avg_regret_mean": float(avg.mean()), "avg_regret_std": float(avg.std(ddof=ddof)),
                "cum_regret_mean": float(np.mean([r["cum_regret"] for r in sel])),
                "queries_mean": float(np.mean([r["queries"] for r in sel])),
                "wall_ms_mean": float(wall.mean()) if timing else None,
                "wall_ms_std": float(wall.std(ddof=ddof)) if timing else None,
            })
    return out


def run_experiment(config, out_dir):
    """Run the full (algorithm, horizon, seed) grid and write the CSV files.

    Seeds are processed by a pool of at most ``DRSUBMAX_THREADS`` workers;
    output is sorted by (run_id, t) so it does not depend on scheduling.
    Completed runs are written even when a later run fails, after which the
    failure is re-raised as RunFailure.

    Returns the summary rows.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = min(_workers(), len(config.seeds))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_seed_rows, itertools.repeat(config), config.seeds))
    else:
        results = [_seed_rows(config, s) for s in config.seeds]

    rows, records, errors = [], [], []
    for r, s, err in results:
        rows.extend(r)
        records.extend(s)
        if err is not None:
            errors.append(err)
    rows.sort(key=lambda row: (row[0], int(row[6])))

    with open(out_dir / "regret.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        w.writerows(rows)
    summary = summarize(records, config, config.timing)
    with open(out_dir / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for s in summary:
            w.writerow([s["algorithm"], s["T"], s["runs"]] +
                       [_fmt(s[k]) for k in SUMMARY_COLUMNS[3:]])
    if errors:
        raise errors[0]
    return summary


def read_regret_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def loglog_slope(x, y):
    """Least-squares slope of log(y) against log(x)."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])


def actions_feasible(trace, region, tol=1e-9):
    return all(membership(region, y, tol) for y in trace.actions)

