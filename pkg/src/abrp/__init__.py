"""Allocation and routing solvers for the approximate ambulance bus routing problem."""

from .allocation import (
    IntAllocation,
    SearchBudgetExceeded,
    exact_integer,
    gap_report,
    gr_heuristic,
)
from .objective import SatisfactionParams, aabrp_cost, completion_times, satisfaction
from .ratios import GOLDEN, RatioTable, eta1, eta1_limit, nu_chain
from .relaxation import (
    KKTReport,
    RealAllocation,
    consecutive_ratio_check,
    kkt_residual,
    solve_capacitated,
    solve_uncapacitated,
)

__version__ = "0.1.0"
