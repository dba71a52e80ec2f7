import numpy as np
import pytest

from drsubmax.geometry import FeasibleRegion, diameter_bound, lmo, membership, shrink
from drsubmax.olo import FTPL, ftpl_eta, ftpl_factory, olo_regret_estimate
from drsubmax.objectives import generate_region


@pytest.fixture
def region():
    return generate_region(4, 3, np.random.default_rng(5))


def run_ftpl(region, feeds, eta, seed):
    oracle = FTPL(region, eta, np.random.default_rng(seed))
    history = []
    for g in feeds:
        history.append((oracle.next(), g))
        oracle.feed(g)
    return history


def test_zero_eta_box_is_leader():
    oracle = FTPL(FeasibleRegion.box(2), 0.0, np.random.default_rng(0))
    oracle.feed([1.0, 1.0])
    assert np.allclose(oracle.next(), [1.0, 1.0])


def test_first_round_is_a_vertex(region):
    v = FTPL(region, 1.0, np.random.default_rng(0)).next()
    assert membership(region, v, 1e-9)
    # a vertex has at least d active constraints among rows and bounds
    slack = np.concatenate([region.b - region.A @ v, v - region.lower, region.upper - v])
    assert np.sum(np.abs(slack) <= 1e-9) >= region.dim


def test_feed_accumulates():
    oracle = FTPL(FeasibleRegion.box(2), 1.0, np.random.default_rng(0))
    oracle.feed([1.0, 0.0]).feed([0.0, 1.0])
    assert np.array_equal(oracle.cumulative_gradient, [1.0, 1.0])
    assert oracle.rounds_seen == 2
    with pytest.raises(ValueError):
        oracle.feed([np.inf, 0.0])
    with pytest.raises(ValueError):
        oracle.feed([1.0])


def test_exact_cumulative_sum(region):
    rng = np.random.default_rng(3)
    feeds = rng.normal(size=(50, region.dim))
    oracle = FTPL(region, 0.5, rng)
    for g in feeds:
        oracle.feed(g)
    total = np.zeros(region.dim)
    for g in feeds:
        total += g
    assert np.array_equal(oracle.cumulative_gradient, total)
    assert oracle.rounds_seen == 50


def test_identical_seeds_identical_sequences(region):
    feeds = np.random.default_rng(1).normal(size=(30, region.dim))
    a = run_ftpl(region, feeds, 2.0, 11)
    b = run_ftpl(region, feeds, 2.0, 11)
    assert all(np.array_equal(x[0], y[0]) for x, y in zip(a, b))


def test_outputs_feasible_on_shrunk_region(region):
    small = shrink(region, 0.5 * region.radius)
    feeds = np.random.default_rng(2).normal(size=(200, region.dim))
    for v, _ in run_ftpl(small, feeds, 3.0, 0):
        assert membership(small, v, 1e-9)


def test_zero_perturbation_is_follow_the_leader(region):
    feeds = np.random.default_rng(4).normal(size=(40, region.dim))
    total = np.zeros(region.dim)
    for v, g in run_ftpl(region, feeds, 0.0, 0):
        assert np.array_equal(v, lmo(region, total))
        total += g


def test_regret_estimate_examples():
    x = np.array([0.5, 0.5])
    g = np.array([1.0, 2.0])
    assert olo_regret_estimate([(x, g)] * 5, x) == 0.0
    w = np.array([0.1, -0.2])
    assert olo_regret_estimate([(x + w, g)], x) == pytest.approx(-g @ w)


def test_constant_adversary_regret_constant(region):
    g = np.random.default_rng(8).normal(size=region.dim)
    Q, B, D = 400, np.linalg.norm(g), diameter_bound(region)
    oracle = ftpl_factory()(region, Q, B, np.random.default_rng(0))
    history = []
    for _ in range(Q):
        history.append((oracle.next(), g))
        oracle.feed(g)
    regret = olo_regret_estimate(history, lmo(region, g))
    assert regret / (D * B * np.sqrt(Q)) <= 10


def test_eta_formula(region):
    assert ftpl_eta(region, 3.0, 100) == pytest.approx(2.0 * 3.0 * 10.0)
    assert ftpl_eta(region, 3.0, 100, scale=0.1) == pytest.approx(6.0)


def test_regret_exponent_iid(region):
    d, B = region.dim, 1.0
    mean = np.full(d, 0.3)
    regrets = []
    horizons = [100, 400, 1600]
    for Q in horizons:
        per_seed = []
        for seed in range(20):
            rng = np.random.default_rng(seed)
            noise = rng.normal(size=(Q, d))
            feeds = mean + 0.3 * noise / np.maximum(1.0, np.linalg.norm(noise, axis=1, keepdims=True))
            oracle = ftpl_factory()(region, Q, B, rng)
            history = []
            for g in feeds:
                history.append((oracle.next(), g))
                oracle.feed(g)
            per_seed.append(olo_regret_estimate(history, lmo(region, feeds.sum(axis=0))))
        regrets.append(np.mean(per_seed))
    slope = np.polyfit(np.log(horizons), np.log(regrets), 1)[0]
    assert slope <= 0.6
