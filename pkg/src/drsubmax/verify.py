"""Brute-force oracles and the property suites behind ``drsubmax verify``.

The oracles here are deliberately naive (vertex enumeration, grid search)
and share no code with the solvers they check.
"""

import itertools
import math

import numpy as np

from . import fw
from .geometry import (FeasibleRegion, lmo, membership, min_inf_norm_point, shrink)
from .linprog import LinearProgram, LpStatus, solve_lp
from .objectives import (generate_monotone_quadratic, generate_quadratic, gradient, metadata,
                         one_point_gradient_estimate, sample_unit_sphere, smoothed_value_mc,
                         value, value_batch)


def enumerate_vertices(A, b, lower, upper, tol=1e-9):
    """All vertices of ``{A x <= b, lower <= x <= upper}`` by brute force."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    d = A.shape[1]
    G = np.vstack([A, np.eye(d), -np.eye(d)])
    h = np.concatenate([b, upper, -np.asarray(lower, dtype=float)])
    verts = []
    for rows in itertools.combinations(range(G.shape[0]), d):
        M = G[list(rows)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, h[list(rows)])
        if np.all(G @ x <= h + tol):
            verts.append(x)
    return np.array(verts).reshape(-1, d)


def brute_force_max(c, A, b, lower, upper):
    """Max of ``c @ x`` over the polytope; ``-inf`` if it is empty."""
    V = enumerate_vertices(A, b, lower, upper)
    if V.shape[0] == 0:
        return -math.inf
    return float(np.max(V @ c))


def random_lp(rng, d=None, m=None):
    d = d or int(rng.integers(1, 5))
    m = m if m is not None else int(rng.integers(0, 5))
    A = rng.normal(size=(m, d))
    lo = rng.uniform(-1, 0.5, size=d)
    hi = lo + rng.uniform(0.1, 2, size=d)
    # Keep a known point feasible most of the time so both statuses occur.
    x0 = rng.uniform(lo, hi)
    b = A @ x0 + rng.uniform(-0.3, 1.0, size=m)
    return LinearProgram(rng.normal(size=d), A, b, lo, hi)


def grid_max(f, region, step=0.01):
    """Grid maximum of ``f`` over a region with ``d <= 3``; returns (x, value)."""
    axis = np.arange(0.0, 1.0 + step / 2, step)
    P = np.array(list(itertools.product(axis, repeat=region.dim)))
    ok = np.all(P >= region.lower - 1e-12, axis=1) & np.all(P <= region.upper + 1e-12, axis=1)
    if region.A.shape[0]:
        ok &= np.all(P @ region.A.T <= region.b + 1e-12, axis=1)
    P = P[ok]
    vals = value_batch(f, P)
    i = int(np.argmax(vals))
    return P[i], float(vals[i])


# -- suites --------------------------------------------------------------------

def suite_lp(n=200, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        lp = random_lp(rng)
        sol = solve_lp(lp)
        ref = brute_force_max(lp.objective, lp.constraint_matrix, lp.constraint_rhs,
                              lp.lower_bounds, lp.upper_bounds)
        if sol.status is LpStatus.INFEASIBLE:
            if ref != -math.inf:
                return [("lp-vs-enumeration", False, "solver reported infeasible")]
            continue
        worst = max(worst, abs(sol.objective_value - ref))
    return [("lp-vs-enumeration", worst <= 1e-8, f"max gap {worst:.2e}")]


def suite_geometry(n=2000, seed=0):
    rng = np.random.default_rng(seed)
    region = FeasibleRegion(rng.uniform(0, 1, size=(5, 4)), np.ones(5), downward_closed=True)
    delta = 0.5 * region.radius
    small = shrink(region, delta)
    ok_sandwich = True
    for _ in range(n):
        y = lmo(region, rng.normal(size=4))
        w = rng.uniform(size=4)
        z = small.contract(w * y)  # random point of the shrunk set
        if not membership(region, z + delta * sample_unit_sphere(4, rng), 1e-9):
            ok_sandwich = False
            break
    u, _ = min_inf_norm_point(small)
    ok_ubar = np.allclose(u, small.ratio * region.center, atol=1e-12)
    ok_lmo = True
    for _ in range(50):
        c = rng.normal(size=4)
        ref = brute_force_max(c, small.A, small.b, small.lower, small.upper)
        ok_lmo &= abs(c @ lmo(small, c) - ref) <= 1e-8
    return [("shrunk-set-sandwich", ok_sandwich, f"{n} samples"),
            ("min-inf-norm-point", bool(ok_ubar), ""),
            ("lmo-vs-enumeration", bool(ok_lmo), "")]


def suite_estimators(n=200_000, seed=0):
    rng = np.random.default_rng(seed)
    d = 3
    f = generate_quadratic(d, rng)
    x = np.full(d, 0.5)
    delta = 0.2
    U = rng.standard_normal((n, d))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    est = one_point_gradient_estimate(lambda Y: value_batch(f, Y), x, delta, U, d)
    se = est.std(axis=0, ddof=1) / np.sqrt(n)
    unbiased = bool(np.all(np.abs(est.mean(axis=0) - gradient(f, x)) <= 4 * se))
    fhat = smoothed_value_mc(f, x, delta, n, rng)
    offset = delta ** 2 * np.trace(f.H) / (2 * (d + 2))
    smooth = abs(fhat - value(f, x)) <= delta * metadata(f).M1
    return [("one-point-unbiased", unbiased, ""),
            ("smoothing-bound", bool(smooth), f"offset {fhat - value(f, x):.4f} vs {offset:.4f}")]


def suite_offline(n=10, seed=0):
    rng = np.random.default_rng(seed)
    results = []
    for case, gen in (("A", generate_monotone_quadratic), ("B", generate_quadratic)):
        ok = True
        for _ in range(n):
            region = FeasibleRegion(rng.uniform(0, 1, size=(2, 2)), np.ones(2), downward_closed=True)
            f = gen(2, rng)
            x = fw.offline_frank_wolfe(case, f, region, 100)
            _, opt = grid_max(f, region)
            bound = (fw.approx_ratio(case) * opt
                     - fw.gamma(case, metadata(f), math.sqrt(2), 100) - 0.01)
            ok &= value(f, x) >= bound
        results.append((f"offline-fw-case-{case}", bool(ok), f"{n} instances"))
    return results


SUITES = {
    "lp": suite_lp,
    "geometry": suite_geometry,
    "estimators": suite_estimators,
    "offline": suite_offline,
}
