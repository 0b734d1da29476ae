from ._io import dump_program, load_program
from ._program import STATUSES, ConeProgram, Residuals, SecondOrderCone, Solution
from ._residuals import kkt_residuals
from ._solver import solve

__all__ = [
    "STATUSES",
    "ConeProgram",
    "SecondOrderCone",
    "Solution",
    "Residuals",
    "solve",
    "kkt_residuals",
    "dump_program",
    "load_program",
]
