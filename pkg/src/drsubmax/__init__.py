"""Projection-free online DR-submodular maximization."""

from .fw import (BlockSchedule, Case, Feedback, approx_ratio, bandit_frank_wolfe,
                 meta_frank_wolfe, offline_frank_wolfe, schedule)
from .geometry import FeasibleRegion, ShrunkRegion, lmo, membership, shrink
from .linprog import LinearProgram, solve_lp
from .objectives import OracleKind, OracleSpec, QuadraticObjective
from .olo import FTPL, ftpl_factory

__version__ = "0.1.0"
