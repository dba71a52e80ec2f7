"""Frank-Wolfe machinery for online DR-submodular maximization.

Four problem cases share one code path:

* ``A``: monotone objective, region contains the origin;
* ``B``: non-monotone objective, downward-closed region;
* ``C``: monotone objective, general convex region;
* ``D``: non-monotone objective, general convex region.

``meta_frank_wolfe`` is the full-information algorithm (blocks of length L,
K online linear oracles, K/L queries per function on average) and
``bandit_frank_wolfe`` the (semi-)bandit one (K exploration rounds per
block, one sample per round at the played point).
"""

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .geometry import lmo, membership, min_inf_norm_point, shrink
from .objectives import (OracleKind, gradient, noisy_gradient, noisy_value,
                         one_point_gradient_estimate, sample_unit_sphere, value)


class ScheduleError(ValueError):
    pass


class InvalidBeta(ScheduleError):
    pass


class InvalidSchedule(ScheduleError):
    pass


class ScheduleMismatch(ScheduleError):
    pass


class CaseMismatch(ValueError):
    pass


class BlockFailure(RuntimeError):
    """An online run failed inside block ``block``."""

    def __init__(self, block, cause, trace=None):
        super().__init__(f"block {block}: {type(cause).__name__}: {cause}")
        self.block = block
        self.trace = trace


class Case(Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"

    @property
    def monotone(self):
        return self in (Case.A, Case.C)


class Feedback(Enum):
    FULL = "full"
    SEMI_BANDIT = "semi-bandit"
    BANDIT = "bandit"


def step_size(case, K):
    """Convex-combination weight used by cases C and D."""
    case = Case(case)
    if case is Case.C:
        return math.log(K) / (2 * K)
    if case is Case.D:
        return math.log(2) / K
    raise ValueError("only cases C and D use a convex step size")


def update(case, x, v, u_bar, K):
    case = Case(case)
    if case is Case.A:
        return x + (v - u_bar) / K
    if case is Case.B:
        return x + (v - u_bar) * (1.0 - x) / K
    eps = step_size(case, K)
    return (1.0 - eps) * x + eps * v


def oracle_adv(case, d_vec, x):
    if Case(case) is Case.B:
        return d_vec * (1.0 - x)
    return d_vec


def approx_ratio(case, h=0.0):
    case = Case(case)
    if not 0 <= h <= 1:
        raise ValueError("h must lie in [0, 1]")
    return {Case.A: 1 - 1 / math.e, Case.B: 1 / math.e,
            Case.C: 0.5, Case.D: (1 - h) / 4}[case]


def eta_weights(case, K):
    """Weights of the linear terms in the offline Frank-Wolfe bound."""
    case = Case(case)
    k = np.arange(1, K + 1)
    if case in (Case.A, Case.B):
        return (1 - 1 / K) ** (K - k) / K
    eps = step_size(case, K)
    return (1 - 2 * eps) ** (K - k) * eps


def gamma(case, meta, diameter, K, u_bar_inf=0.0):
    """Additive error of K offline Frank-Wolfe steps.

    ``meta`` carries the bounds M0, M1, M2 of the objective.
    """
    case = Case(case)
    M0, M1, M2 = meta.M0, meta.M1, meta.M2
    D2 = diameter ** 2
    if case is Case.A:
        return M2 * D2 / (2 * K)
    if case is Case.B:
        return M2 * D2 / (2 * K) + (M0 + M1) * u_bar_inf
    if case is Case.C:
        return (8 * M0 + M2 * D2 * math.log(K) ** 2) / (8 * K)
    return (M0 + 2 * M2 * D2) / (4 * K)


def check_case(case, region):
    """Raise CaseMismatch if ``region`` violates the case's prerequisites."""
    case = Case(case)
    region = getattr(region, "base", region)
    if case in (Case.A, Case.B) and not membership(region, np.zeros(region.dim), 1e-12):
        raise CaseMismatch(f"case {case.value} needs the origin in the region")
    if case is Case.B and not region.downward_closed:
        raise CaseMismatch("case B needs a downward-closed region")


@dataclass(frozen=True)
class BlockSchedule:
    T: int
    L: int
    K: int
    delta: float = 0.0
    beta: Optional[float] = None
    feedback: Feedback = Feedback.FULL
    oracle: OracleKind = OracleKind.GRADIENT

    def __post_init__(self):
        object.__setattr__(self, "feedback", Feedback(self.feedback))
        object.__setattr__(self, "oracle", OracleKind(self.oracle))
        if min(self.T, self.L, self.K) < 1:
            raise InvalidSchedule("T, L and K must be positive")
        if self.T % self.L:
            raise InvalidSchedule(f"L={self.L} does not divide T={self.T}")
        if self.feedback is not Feedback.FULL and self.K > self.L:
            raise InvalidSchedule(f"(semi-)bandit feedback needs K <= L, got K={self.K}, L={self.L}")
        if self.feedback is Feedback.SEMI_BANDIT and self.oracle is not OracleKind.GRADIENT:
            raise InvalidSchedule("semi-bandit feedback uses a gradient oracle")
        if self.feedback is Feedback.BANDIT and self.oracle is not OracleKind.VALUE:
            raise InvalidSchedule("bandit feedback uses a value oracle")
        if self.oracle is OracleKind.VALUE and not self.delta > 0:
            raise InvalidSchedule("value oracles need delta > 0")
        if self.delta < 0:
            raise InvalidSchedule("delta must be nonnegative")

    @property
    def Q(self):
        return self.T // self.L


def _round_pos(x):
    return max(1, int(math.floor(x + 0.5)))


def nearest_divisor(n, target):
    """Divisor of ``n`` closest to ``target`` (smaller one on ties)."""
    target = min(max(1, target), n)
    for off in range(n):
        for cand in (target - off, target + off):
            if 1 <= cand <= n and n % cand == 0:
                return cand
    return n


def schedule(feedback, oracle_kind, T, beta=0.5):
    """Block parameters (K, L, δ) balancing the regret terms for horizon T.

    ``beta`` sets the query budget T^beta = K/L of the full-information
    algorithm and must lie in [0, 1/2]; it is ignored for (semi-)bandit
    feedback.
    """
    feedback, oracle_kind = Feedback(feedback), OracleKind(oracle_kind)
    if feedback is Feedback.FULL:
        if beta is None or not 0 <= beta <= 0.5:
            raise InvalidBeta(f"beta={beta} outside [0, 1/2]")
        if oracle_kind is OracleKind.GRADIENT:
            delta = 0.0
            L = T ** ((1 - 2 * beta) / 3)
            K = T ** ((1 + beta) / 3)
        else:
            delta = T ** (-(2 + beta) / 5)
            L = T ** ((2 - 4 * beta) / 5)
            K = T ** ((2 + beta) / 5)
    else:
        beta = None
        if feedback is Feedback.SEMI_BANDIT:
            if oracle_kind is not OracleKind.GRADIENT:
                raise InvalidSchedule("semi-bandit feedback uses a gradient oracle")
            delta, K, L = 0.0, T ** 0.25, T ** 0.5
        else:
            if oracle_kind is not OracleKind.VALUE:
                raise InvalidSchedule("bandit feedback uses a value oracle")
            delta, K, L = T ** (-1 / 6), T ** (1 / 6), T ** (1 / 3)
    K = _round_pos(K)
    L = nearest_divisor(T, _round_pos(L))
    if feedback is not Feedback.FULL:
        K = min(K, L)
    return BlockSchedule(T=T, L=L, K=K, delta=delta, beta=beta,
                         feedback=feedback, oracle=oracle_kind)


@dataclass
class AlgorithmTrace:
    """Everything a run did, round by round.

    ``queries[t]`` counts oracle samples of ``F_t`` and ``wall_ms[t]`` is the
    elapsed time when round t was played.  ``iterates`` holds the inner
    Frank-Wolfe points ``x_q^(1..K+1)`` of each block when requested.
    """

    actions: np.ndarray
    rewards: np.ndarray
    queries: np.ndarray
    block: np.ndarray
    explore: np.ndarray
    block_points: np.ndarray
    permutations: np.ndarray
    u_bar: np.ndarray
    wall_ms: np.ndarray
    iterates: Optional[np.ndarray] = None
    schedule: Optional[BlockSchedule] = field(default=None, repr=False)

    @property
    def total_queries(self):
        return int(self.queries.sum())


class _Runner:
    """State shared by both online algorithms."""

    def __init__(self, case, sched, region, olo_factory, oracle_spec, adversary, rng,
                 keep_iterates):
        self.case = Case(case)
        self.sched = sched
        if len(adversary) != sched.T:
            raise ScheduleMismatch(f"adversary has {len(adversary)} functions, T={sched.T}")
        if oracle_spec.kind is not sched.oracle:
            raise ScheduleMismatch("oracle kind differs from the schedule's")
        if oracle_spec.delta != sched.delta:
            raise ScheduleMismatch("oracle smoothing radius differs from the schedule's")
        check_case(self.case, region)
        self.region = region
        self.work = shrink(region, sched.delta)
        self.u_bar, _ = min_inf_norm_point(self.work)
        self.d = region.dim
        self.spec = oracle_spec
        self.adversary = adversary

        if sched.oracle is OracleKind.GRADIENT:
            bound = oracle_spec.B1
        else:
            bound = self.d / sched.delta * oracle_spec.B0
        if not np.isfinite(bound):
            raise ScheduleMismatch("oracle bounds B0/B1 must be finite to scale the OLO oracles")

        children = rng.spawn(sched.K + 3)
        self.perm_rng, self.sphere_rng, self.noise_rng = children[:3]
        self.oracles = [olo_factory(self.work, sched.Q, bound, r) for r in children[3:]]

        T, Q, K = sched.T, sched.Q, sched.K
        self.clock = time.perf_counter()
        self.trace = AlgorithmTrace(
            actions=np.zeros((T, self.d)),
            rewards=np.zeros(T),
            queries=np.zeros(T, dtype=np.int64),
            block=np.repeat(np.arange(Q), sched.L),
            explore=np.zeros(T, dtype=bool),
            block_points=np.zeros((Q, self.d)),
            permutations=np.zeros((Q, sched.L), dtype=np.int64),
            u_bar=self.u_bar.copy(),
            wall_ms=np.zeros(T),
            iterates=np.zeros((Q, K + 1, self.d)) if keep_iterates else None,
            schedule=sched,
        )

    def inner_loop(self, q):
        K = self.sched.K
        xs = [self.u_bar.copy()]
        for k in range(K):
            v = self.oracles[k].next()
            xs.append(update(self.case, xs[-1], v, self.u_bar, K))
        if self.trace.iterates is not None:
            self.trace.iterates[q] = xs
        self.trace.block_points[q] = xs[K]
        return xs

    def positions(self, q):
        """Draw block q's permutation; return each round's position in it."""
        L = self.sched.L
        perm = q * L + self.perm_rng.permutation(L)
        self.trace.permutations[q] = perm
        position = np.empty(L, dtype=np.int64)
        position[perm - q * L] = np.arange(L)
        return position

    def sphere(self):
        if self.sched.oracle is OracleKind.VALUE:
            return sample_unit_sphere(self.d, self.sphere_rng)
        return np.zeros(self.d)

    def grad_estimate(self, t, x, u):
        f = self.adversary[t]
        self.trace.queries[t] += 1
        if self.sched.oracle is OracleKind.GRADIENT:
            return noisy_gradient(f, x, self.spec.noise_scale, self.noise_rng)
        return one_point_gradient_estimate(
            lambda y: noisy_value(f, y, self.spec.noise_scale, self.noise_rng),
            x, self.sched.delta, u, self.d, region=self.region)

    def play(self, t, y):
        self.trace.actions[t] = y
        self.trace.rewards[t] = value(self.adversary[t], y)
        self.trace.wall_ms[t] = 1e3 * (time.perf_counter() - self.clock)

    def run_blocks(self, body):
        for q in range(self.sched.Q):
            try:
                body(self, q)
            except Exception as exc:
                raise BlockFailure(q, exc, self.trace) from exc
        return self.trace


def meta_frank_wolfe(case, sched, region, olo_factory, oracle_spec, adversary, rng,
                     keep_iterates=False):
    """Full-information online Frank-Wolfe with blocks and random permutations.

    Parameters
    ----------
    case : Case
    sched : BlockSchedule
        Must use full-information feedback.
    region : FeasibleRegion
    olo_factory : callable
        ``olo_factory(region, horizon, bound, rng)`` returning an object with
        ``next()`` and ``feed(g)``; see :func:`drsubmax.olo.ftpl_factory`.
    oracle_spec : OracleSpec
    adversary : sequence of QuadraticObjective
        The T reward functions, fixed before the run.
    rng : numpy.random.Generator

    Returns
    -------
    AlgorithmTrace
    """
    if sched.feedback is not Feedback.FULL:
        raise ScheduleMismatch("meta_frank_wolfe needs a full-information schedule")
    run = _Runner(case, sched, region, olo_factory, oracle_spec, adversary, rng,
                  keep_iterates)
    return run.run_blocks(_full_information_block)


def _full_information_block(run, q):
    K, L = run.sched.K, run.sched.L
    xs = run.inner_loop(q)
    x_q = xs[K]
    position = run.positions(q)
    for t in range(q * L, (q + 1) * L):
        run.play(t, x_q)
        l = position[t - q * L]
        # 0-based k with k ≡ l (mod L)
        for k in range(l, K, L):
            u = run.sphere()
            d_vec = run.grad_estimate(t, xs[k], u)
            run.oracles[k].feed(oracle_adv(run.case, d_vec, xs[k]))


def bandit_frank_wolfe(case, sched, region, olo_factory, oracle_spec, adversary, rng,
                       keep_iterates=False):
    """(Semi-)bandit online Frank-Wolfe: K exploration rounds per block.

    Exploration round ``t_{q,k}`` plays ``x_q^(k) + δ u`` and feeds the
    k-th oracle from the single sample observed there; the other L - K
    rounds play ``x_q``.  Arguments as for :func:`meta_frank_wolfe`.
    """
    if sched.feedback is Feedback.FULL:
        raise ScheduleMismatch("bandit_frank_wolfe needs (semi-)bandit feedback")
    if sched.K > sched.L:
        raise InvalidSchedule("K must not exceed L")
    run = _Runner(case, sched, region, olo_factory, oracle_spec, adversary, rng,
                  keep_iterates)
    return run.run_blocks(_bandit_block)


def _bandit_block(run, q):
    sched, spec = run.sched, run.spec
    K, L = sched.K, sched.L
    xs = run.inner_loop(q)
    x_q = xs[K]
    position = run.positions(q)
    for t in range(q * L, (q + 1) * L):
        k = position[t - q * L]
        if k < K:
            u = run.sphere()
            run.play(t, xs[k] + sched.delta * u)
            run.trace.explore[t] = True
            d_vec = run.grad_estimate(t, xs[k], u)
            run.oracles[k].feed(oracle_adv(run.case, d_vec, xs[k]))
        else:
            run.play(t, x_q)
            # Feedback still arrives at the played point; it is unused.
            run.trace.queries[t] += 1
            if sched.oracle is OracleKind.GRADIENT:
                noisy_gradient(run.adversary[t], x_q, spec.noise_scale, run.noise_rng)
            else:
                noisy_value(run.adversary[t], x_q, spec.noise_scale, run.noise_rng)


def offline_frank_wolfe(case, f, region, K, gradient_fn=None, return_iterates=False):
    """K steps of Frank-Wolfe for DR-submodular maximization from ``u_bar``.

    ``gradient_fn`` defaults to the exact gradient of ``f``.
    """
    case = Case(case)
    check_case(case, region)
    grad = gradient_fn if gradient_fn is not None else (lambda x: gradient(f, x))
    u_bar, _ = min_inf_norm_point(region)
    x = u_bar.copy()
    iterates = [x]
    for _ in range(K):
        v = lmo(region, oracle_adv(case, grad(x), x))
        x = update(case, x, v, u_bar, K)
        iterates.append(x)
    if return_iterates:
        return x, np.array(iterates)
    return x

