"""End-to-end pipelines that turn a circuit into :class:`~ctcsim.dsl.SolveReport` objects."""
import numpy as np

from . import qlin
from .circuit import Circuit, assemble_unitary
from .dctc import (
    ConvergenceError,
    ctc_output,
    fixed_point_space,
    induced_channel,
    solve_fixed_point,
)
from .dsl import SolveReport, circuit_hash
from .infoflow import detect_closed_path
from .pctc import ParadoxicalInputError, pctc_operator, pctc_output

DCTC_POLICIES = ("canonical", "maxent", "all-extremes")


class ChannelDefect(RuntimeError):
    """An induced channel failed its CPTP checks (a solver-side defect)."""


def _state_diagnostics(c: Circuit, rho_out) -> list:
    diags = [
        ("input_purity", qlin.purity(c.input)),
        ("output_purity", qlin.purity(rho_out)),
        ("output_entropy_bits", qlin.von_neumann_entropy(rho_out)),
    ]
    if c.n_cr >= 2:
        diags.append(("output_negativity", qlin.negativity(rho_out, [2] * c.n_cr, [0])))
    return diags


def solve_dctc(c: Circuit, policy: str = "maxent", tol: float = 1e-10) -> SolveReport:
    if policy not in DCTC_POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {DCTC_POLICIES}")
    u = assemble_unitary(c)
    ch = induced_channel(u, c.input)
    problems = ch.check()
    if problems:
        raise ChannelDefect("; ".join(problems))
    fps = fixed_point_space(ch)
    rho_ctc = solve_fixed_point(
        ch, "canonical" if policy == "canonical" else "maxent", tol=tol, fixed_space=fps
    )
    rho_out = ctc_output(u, c.input, rho_ctc)
    flow = detect_closed_path(u, c.input)

    extremes = None
    if fps.extreme_points is not None:
        extremes = []
        for e in fps.extreme_points:
            if ch.residual(e) > 1e-8:
                raise ConvergenceError(f"extreme point has residual {ch.residual(e):.3g}")
            extremes.append((e, ctc_output(u, c.input, e)))

    diags = _state_diagnostics(c, rho_out) + [
        ("ctc_entropy_bits", qlin.von_neumann_entropy(rho_ctc)),
        ("constancy_defect", flow.constancy_defect),
        ("worst_case_constancy_defect", flow.worst_case_defect),
        ("cr_decoupled", flow.cr_decoupled),
        ("trace_preservation_defect", ch.trace_defect()),
        ("choi_min_eigenvalue", ch.choi_min_eigenvalue()),
    ]
    return SolveReport(
        model="dctc",
        policy=policy,
        rho_out=rho_out,
        rho_ctc=rho_ctc,
        residual=ch.residual(rho_ctc),
        fixed_space_dim=fps.affine_dim,
        extreme_points=extremes,
        diagnostics=diags,
        closed_information_path=flow.closed_path,
        circuit_hash=circuit_hash(c),
    )


def solve_pctc(c: Circuit) -> SolveReport:
    u = assemble_unitary(c)
    op = pctc_operator(u, c.d_cr, c.d_ctc)
    flow = detect_closed_path(u, c.input)
    try:
        rho_out, weight = pctc_output(op, c.input)
    except ParadoxicalInputError:
        # the whole input is post-selected away; report the zero operator
        rho_out = np.zeros_like(c.input)
        diags = [("postselection_weight", 0.0), ("paradoxical_input_annihilated", True)]
    else:
        diags = [("postselection_weight", weight), ("paradoxical_input_annihilated", False)]
        diags += _state_diagnostics(c, rho_out)
    return SolveReport(
        model="pctc",
        policy="postselect",
        rho_out=rho_out,
        diagnostics=diags,
        closed_information_path=flow.closed_path,
        circuit_hash=circuit_hash(c),
    )


def solve(c: Circuit, model: str = "both", policy: str = "maxent", tol: float = 1e-10) -> list:
    reports = []
    if model in ("dctc", "both"):
        reports.append(solve_dctc(c, policy, tol))
    if model in ("pctc", "both"):
        reports.append(solve_pctc(c))
    if not reports:
        raise ValueError(f"unknown model {model!r}")
    return reports


def basis_label(rho, tol: float = 1e-9):
    """Bit string if ``rho`` is a computational basis projector, else ``None``."""
    rho = np.asarray(rho)
    diag = np.real(np.diag(rho))
    k = int(np.argmax(diag))
    target = np.zeros_like(rho)
    target[k, k] = 1.0
    if np.max(np.abs(rho - target)) > tol:
        return None
    width = int(np.log2(rho.shape[0]))
    return format(k, f"0{width}b") if width else ""
