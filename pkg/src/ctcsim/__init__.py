"""Simulation of quantum circuits with closed timelike curves (D-CTC and P-CTC models)."""
from ._accel import HAS_NUMBA
from .circuit import Circuit, Gate, Wire, assemble_unitary, is_classical, validate
from .dctc import (
    CTCChannel,
    FixedPointSet,
    classical_enumerate,
    ctc_output,
    fixed_point_space,
    induced_channel,
    solve_fixed_point,
)
from .dsl import SolveReport, emit_report, parse_circuit, parse_report
from .infoflow import FlowReport, detect_closed_path, unroll_permutation
from .pctc import PctcOperator, pctc_operator, pctc_output

__version__ = "0.1.0"
