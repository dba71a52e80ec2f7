"""Online linear maximization via Follow-the-Perturbed-Leader."""

import numpy as np

from .geometry import diameter_bound, lmo


class FTPL:
    """Follow-the-Perturbed-Leader over a polytope.

    Each call to :meth:`next` plays ``lmo(region, G + p)`` where ``G`` is the
    sum of all vectors fed so far and ``p`` has fresh i.i.d. U[0, eta]
    coordinates.  ``eta = 0`` is plain follow-the-leader.
    """

    def __init__(self, region, eta, rng):
        if eta < 0:
            raise ValueError("eta must be nonnegative")
        self.region = region
        self.eta = float(eta)
        self.rng = rng
        self.cumulative_gradient = np.zeros(region.dim)
        self.rounds_seen = 0

    def next(self):
        if self.eta > 0:
            p = self.rng.uniform(0.0, self.eta, size=self.region.dim)
            return lmo(self.region, self.cumulative_gradient + p)
        return lmo(self.region, self.cumulative_gradient)

    def feed(self, g):
        g = np.asarray(g, dtype=float)
        if g.shape != self.cumulative_gradient.shape or not np.all(np.isfinite(g)):
            raise ValueError("fed vector must be finite with length d")
        self.cumulative_gradient += g
        self.rounds_seen += 1
        return self


def ftpl_eta(region, bound, horizon, scale=1.0):
    """Perturbation width ``scale * D * B * sqrt(Q)`` with ``D = sqrt(d)``."""
    return scale * diameter_bound(region) * bound * np.sqrt(horizon)


def ftpl_factory(scale=1.0):
    """Build FTPL oracles as ``factory(region, horizon, bound, rng)``.

    ``scale`` is the free constant in front of the perturbation width.
    """
    def make(region, horizon, bound, rng):
        return FTPL(region, ftpl_eta(region, bound, horizon, scale), rng)
    return make


def olo_regret_estimate(history, comparator):
    """``sum_q <g_q, x* - v_q>`` over ``history`` of ``(v_q, g_q)`` pairs."""
    comparator = np.asarray(comparator, dtype=float)
    return float(sum(np.dot(g, comparator - v) for v, g in history))
