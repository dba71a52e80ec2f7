"""Quadratic DR-submodular objectives and their (noisy) oracles."""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .geometry import FeasibleRegion, membership


class DomainViolation(ValueError):
    """A value query fell outside the feasible region."""


class OracleKind(Enum):
    VALUE = "value"
    GRADIENT = "gradient"


@dataclass(frozen=True, eq=False)
class QuadraticObjective:
    """``F(x) = 0.5 x^T H x + h^T x + c`` with symmetric ``H``."""

    H: np.ndarray
    h: np.ndarray
    c: float = 0.0

    def __post_init__(self):
        H = np.atleast_2d(np.asarray(self.H, dtype=float))
        h = np.asarray(self.h, dtype=float).ravel()
        if H.shape != (h.size, h.size):
            raise ValueError("H must be d x d with d = len(h)")
        if not np.array_equal(H, H.T):
            raise ValueError("H must be exactly symmetric")
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "c", float(self.c))

    @property
    def dim(self):
        return self.h.size

    def __call__(self, x):
        return value(self, x)

    def __add__(self, other):
        return QuadraticObjective(self.H + other.H, self.h + other.h, self.c + other.c)

    def scaled(self, s):
        return QuadraticObjective(s * self.H, s * self.h, s * self.c)

    def to_dict(self):
        return {"H": self.H.tolist(), "h": self.h.tolist(), "c": self.c}

    @classmethod
    def from_dict(cls, data):
        return cls(np.asarray(data["H"], dtype=float),
                   np.asarray(data["h"], dtype=float), float(data["c"]))


@dataclass(frozen=True)
class ObjectiveMetadata:
    M0: float
    M1: float
    M2: float


@dataclass(frozen=True)
class OracleSpec:
    """What the learner may query and how noisy it is.

    ``delta`` is the smoothing radius; it must be positive for value oracles
    and is normally zero for gradient oracles.
    """

    kind: OracleKind = OracleKind.GRADIENT
    noise_scale: float = 0.0
    delta: float = 0.0
    B0: float = np.inf
    B1: float = np.inf

    def __post_init__(self):
        object.__setattr__(self, "kind", OracleKind(self.kind))
        if self.noise_scale < 0 or self.delta < 0:
            raise ValueError("noise_scale and delta must be nonnegative")
        if self.kind is OracleKind.VALUE and not self.delta > 0:
            raise ValueError("value oracles need a positive smoothing radius")


def value(f, x):
    x = np.asarray(x, dtype=float)
    return float(0.5 * x @ f.H @ x + f.h @ x + f.c)


def value_batch(f, X):
    """Values at each row of ``X``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return 0.5 * np.einsum("ij,jk,ik->i", X, f.H, X) + X @ f.h + f.c


def gradient(f, x):
    return f.H @ np.asarray(x, dtype=float) + f.h


def metadata(f):
    """Conservative closed-form bounds valid on the unit box."""
    fro = float(np.linalg.norm(f.H))
    M0 = abs(f.c) + float(np.abs(f.h).sum()) + 0.5 * float(np.abs(f.H).sum())
    M1 = float(np.linalg.norm(f.h)) + fro * np.sqrt(f.dim)
    return ObjectiveMetadata(M0=M0, M1=M1, M2=fro)


def _symmetric_nonpositive(d, rng):
    upper = np.triu(rng.uniform(-10.0, 0.0, size=(d, d)))
    return upper + np.triu(upper, 1).T


def generate_quadratic(d, rng):
    """Non-monotone benchmark quadratic.

    ``H`` has i.i.d. U[-10, 0] entries on and above the diagonal (mirrored
    below), ``h = -0.1 H^T 1`` and ``c = -0.5 sum(H)`` so that F >= 0 on
    the box.
    """
    if d < 1:
        raise ValueError("d must be positive")
    H = _symmetric_nonpositive(d, rng)
    return QuadraticObjective(H, -0.1 * H.T @ np.ones(d), -0.5 * H.sum())


def generate_monotone_quadratic(d, rng):
    """Monotone variant: ``h = -H^T 1`` makes the gradient vanish at 1."""
    if d < 1:
        raise ValueError("d must be positive")
    H = _symmetric_nonpositive(d, rng)
    return QuadraticObjective(H, -H.T @ np.ones(d), 0.0)


def generate_region(d, m, rng):
    """``{x : A x <= 1, 0 <= x <= 1}`` with A ~ U[0, 1]^{m x d} (downward closed)."""
    if d < 1 or m < 1:
        raise ValueError("d and m must be positive")
    A = rng.uniform(0.0, 1.0, size=(m, d))
    return FeasibleRegion(A, np.ones(m), downward_closed=True)


def noisy_gradient(f, x, eps, rng):
    """Exact gradient plus a uniformly random direction of length ``eps``."""
    g = gradient(f, x)
    if eps == 0:
        return g
    n = rng.standard_normal(g.size)
    return g + eps * n / np.linalg.norm(n)


def noisy_value(f, x, eps, rng):
    """Exact value plus ``eps * U[-1, 1]`` noise."""
    v = value(f, x)
    if eps == 0:
        return v
    return v + eps * rng.uniform(-1.0, 1.0)


def sample_unit_sphere(d, rng):
    u = rng.standard_normal(d)
    return u / np.linalg.norm(u)


def one_point_gradient_estimate(value_oracle, x, delta, u, d_prime, region=None):
    """``(d' / δ) F~(x + δ u) u`` for a value oracle ``F~``.

    ``u`` may be a single unit vector or an ``(n, d)`` batch, in which case
    ``value_oracle`` receives the ``(n, d)`` query points and must return
    ``n`` values.  When ``region`` is given, every query point must belong
    to it.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    u = np.asarray(u, dtype=float)
    y = np.asarray(x, dtype=float) + delta * u
    if region is not None:
        for point in np.atleast_2d(y):
            if not membership(region, point, 1e-9):
                raise DomainViolation("value query x + δu left the feasible region")
    vals = np.asarray(value_oracle(y), dtype=float)
    if u.ndim == 2:
        vals = vals.reshape(-1, 1)
    return (d_prime / delta) * vals * u


def smoothed_value_mc(f, x, delta, n_samples, rng, return_stderr=False):
    """Monte-Carlo estimate of the average of ``f`` over the ball B(x, δ).

    With ``return_stderr`` the standard error of the estimate is returned too.
    """
    x = np.asarray(x, dtype=float)
    d = x.size
    if delta == 0:
        return (value(f, x), 0.0) if return_stderr else value(f, x)
    dirs = rng.standard_normal((n_samples, d))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = rng.uniform(size=(n_samples, 1)) ** (1.0 / d)
    Z = x + delta * radii * dirs
    vals = value_batch(f, Z)
    if return_stderr:
        return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(n_samples))
    return float(vals.mean())
