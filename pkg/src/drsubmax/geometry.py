"""Polytopes inside the unit box, their shrunk versions, and the LMO."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .linprog import LinearProgram, LpStatus, LpError, solve_lp


class GeometryError(ValueError):
    pass


class InvalidDelta(GeometryError):
    pass


class EmptyRegion(GeometryError):
    pass


@dataclass(frozen=True, eq=False)
class FeasibleRegion:
    """``{x : A x <= b, lower <= x <= upper}`` with ``[lower, upper] ⊆ [0, 1]^d``.

    The interior ball ``(center, radius)`` is computed from the constraints
    (Chebyshev center restricted to the box) unless supplied.
    """

    A: np.ndarray
    b: np.ndarray
    downward_closed: bool = False
    center: Optional[np.ndarray] = None
    radius: Optional[float] = None
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).ravel()
        if A.shape[0] != b.size:
            raise GeometryError("A and b disagree on the number of constraints")
        d = A.shape[1]
        lower = np.zeros(d) if self.lower is None else np.asarray(self.lower, dtype=float).ravel()
        upper = np.ones(d) if self.upper is None else np.asarray(self.upper, dtype=float).ravel()
        if np.any(lower < 0) or np.any(upper > 1) or np.any(lower > upper):
            raise GeometryError("box bounds must satisfy 0 <= lower <= upper <= 1")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if self.center is None or self.radius is None:
            c, r = chebyshev_center(A, b, lower, upper)
            object.__setattr__(self, "center", c)
            object.__setattr__(self, "radius", r)
        else:
            object.__setattr__(self, "center", np.asarray(self.center, dtype=float).ravel())
            object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise EmptyRegion("region has empty interior")

    @property
    def dim(self):
        return self.A.shape[1]

    @property
    def n_constraints(self):
        return self.A.shape[0]

    @classmethod
    def box(cls, d):
        """The unit cube ``[0, 1]^d``."""
        return cls(np.zeros((0, d)), np.zeros(0), downward_closed=True,
                   center=np.full(d, 0.5), radius=0.5)

    def to_dict(self):
        return {
            "A": self.A.tolist(),
            "b": self.b.tolist(),
            "lower": self.lower.tolist(),
            "upper": self.upper.tolist(),
            "downward_closed": bool(self.downward_closed),
            "center": self.center.tolist(),
            "radius": self.radius,
        }

    @classmethod
    def from_dict(cls, data):
        d = len(data["center"]) if "center" in data else len(data["A"][0])
        A = np.asarray(data["A"], dtype=float).reshape(-1, d)
        return cls(A, np.asarray(data["b"], dtype=float),
                   downward_closed=bool(data.get("downward_closed", False)),
                   center=data.get("center"), radius=data.get("radius"),
                   lower=data.get("lower"), upper=data.get("upper"))


@dataclass(frozen=True, eq=False)
class ShrunkRegion:
    """``(1 - δ/r) K + (δ/r) c`` stored as ordinary constraint data.

    ``x`` belongs to the shrunk set iff ``(x - λc) / (1 - λ)`` belongs to the
    base region, with ``λ = δ / r``; substituting gives
    ``A x <= (1 - λ) b + λ A c`` and the box mapped the same way.
    """

    base: FeasibleRegion
    delta: float
    A: np.ndarray = field(init=False)
    b: np.ndarray = field(init=False)
    lower: np.ndarray = field(init=False)
    upper: np.ndarray = field(init=False)

    def __post_init__(self):
        base, delta = self.base, float(self.delta)
        if not 0 <= delta < base.radius:
            raise InvalidDelta(f"delta={delta} must lie in [0, r={base.radius})")
        lam = delta / base.radius
        c = base.center
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "A", base.A)
        if delta == 0:
            object.__setattr__(self, "b", base.b.copy())
            object.__setattr__(self, "lower", base.lower.copy())
            object.__setattr__(self, "upper", base.upper.copy())
        else:
            object.__setattr__(self, "b", (1 - lam) * base.b + lam * (base.A @ c))
            object.__setattr__(self, "lower", (1 - lam) * base.lower + lam * c)
            object.__setattr__(self, "upper", (1 - lam) * base.upper + lam * c)

    @property
    def ratio(self):
        """The contraction weight ``δ / r``."""
        return self.delta / self.base.radius

    @property
    def dim(self):
        return self.base.dim

    @property
    def downward_closed(self):
        return self.base.downward_closed

    @property
    def center(self):
        return self.base.center

    def contract(self, y):
        """Map a point of the base region into the shrunk set."""
        lam = self.ratio
        return (1 - lam) * np.asarray(y, dtype=float) + lam * self.base.center


@dataclass(frozen=True)
class RegionConstants:
    u_bar: np.ndarray
    h: float
    diameter: float
    d_prime: int


def shrink(region, delta):
    """Return the shrunk set of ``region`` for smoothing radius ``delta``.

    Raises InvalidDelta unless ``0 <= delta < region.radius``.
    """
    if isinstance(region, ShrunkRegion):
        raise TypeError("shrink expects a base FeasibleRegion")
    return ShrunkRegion(region, delta)


def lmo(region, direction):
    """Vertex of ``region`` maximizing ``<direction, v>``."""
    direction = np.asarray(direction, dtype=float)
    if direction.shape != (region.dim,) or not np.all(np.isfinite(direction)):
        raise ValueError("direction must be a finite vector of length d")
    sol = solve_lp(LinearProgram(direction, region.A, region.b,
                                 region.lower, region.upper))
    if sol.status is not LpStatus.OPTIMAL:
        raise LpError(f"LMO subproblem is {sol.status.value}")
    return sol.point


def membership(region, point, tol=1e-9):
    x = np.asarray(point, dtype=float)
    if x.shape != (region.dim,) or not np.all(np.isfinite(x)):
        return False
    if np.any(x < region.lower - tol) or np.any(x > region.upper + tol):
        return False
    if region.A.shape[0] and np.any(region.A @ x > region.b + tol):
        return False
    return True


def diameter_bound(region):
    """``sqrt(d)``, the diameter of the unit cube that contains every region."""
    return float(np.sqrt(region.dim))


def min_inf_norm_point(region):
    """A minimizer of ``||x||_inf`` over ``region`` and the minimum value.

    Closed forms are used when the (base) region contains the origin;
    otherwise ``min t  s.t.  x in region, x_i <= t`` is solved as an LP.
    Coordinates are nonnegative on every region here, so ``|x_i| = x_i``.
    """
    d = region.dim
    base = region.base if isinstance(region, ShrunkRegion) else region
    if membership(base, np.zeros(d), 0.0):
        if isinstance(region, ShrunkRegion):
            u = region.ratio * base.center
        else:
            u = np.zeros(d)
        return u, float(np.max(u, initial=0.0))

    # Variables (x, t); maximize -t.
    m = region.A.shape[0]
    A_ext = np.zeros((m + d, d + 1))
    A_ext[:m, :d] = region.A
    A_ext[m:, :d] = np.eye(d)
    A_ext[m:, d] = -1.0
    b_ext = np.concatenate([region.b, np.zeros(d)])
    obj = np.zeros(d + 1)
    obj[d] = -1.0
    lo = np.concatenate([region.lower, [0.0]])
    hi = np.concatenate([region.upper, [1.0]])
    sol = solve_lp(LinearProgram(obj, A_ext, b_ext, lo, hi))
    if sol.status is not LpStatus.OPTIMAL:
        raise EmptyRegion("region is empty")
    u = sol.point[:d]
    return u, float(np.max(u))


def region_constants(region):
    u, h = min_inf_norm_point(region)
    return RegionConstants(u_bar=u, h=h, diameter=diameter_bound(region),
                           d_prime=region.dim)


def chebyshev_center(A, b, lower=None, upper=None):
    """Largest Euclidean ball inside ``{A x <= b} ∩ [lower, upper]``.

    Solves ``max r  s.t.  a_i^T c + r ||a_i|| <= b_i,  lower <= c ± r e_i <= upper``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    m, d = A.shape
    lower = np.zeros(d) if lower is None else np.asarray(lower, dtype=float)
    upper = np.ones(d) if upper is None else np.asarray(upper, dtype=float)
    norms = np.linalg.norm(A, axis=1)
    rows = [np.hstack([A, norms[:, None]]),
            np.hstack([np.eye(d), np.ones((d, 1))]),
            np.hstack([-np.eye(d), np.ones((d, 1))])]
    rhs = [b, upper, -lower]
    obj = np.zeros(d + 1)
    obj[d] = 1.0
    r_max = float(np.max(upper - lower)) / 2 if d else 0.0
    sol = solve_lp(LinearProgram(obj, np.vstack(rows), np.concatenate(rhs),
                                 np.concatenate([lower, [0.0]]),
                                 np.concatenate([upper, [r_max]])))
    if sol.status is not LpStatus.OPTIMAL:
        raise EmptyRegion("region is empty")
    return sol.point[:d], float(sol.point[d])
