"""Closed-information-path detection and negative-delay unrolling.

A circuit is said to have a closed path for information at a given CR input
when the induced CTC channel is not constant, i.e. the state leaving the past
mouth depends on the state entering the future mouth. This is the library's
formalization of a prose criterion; reports label it as such.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import qlin
from .circuit import Circuit, Wire, CR, gate, assemble_unitary
from .dctc import DimensionError, _split_dims, induced_channel

CONSTANCY_TOL = 1e-9

CRITERION = "closed path = CTC channel is non-constant at the CR input (library formalization)"


class UnrollError(ValueError):
    pass


@dataclass(eq=False)
class FlowReport:
    closed_path: bool
    constancy_defect: float
    worst_case_defect: float
    cr_decoupled: bool
    narrative: str
    unrolled: Optional[Circuit] = None

    @property
    def benign(self) -> bool:
        return self.closed_path and self.cr_decoupled


def probe_states(dim: int) -> list[np.ndarray]:
    """Pure states whose projectors span all ``dim x dim`` operators.

    ``|i>``, ``(|i> + |j>)/sqrt2`` and ``(|i> + i|j>)/sqrt2``; the first is ``|0><0|``.
    """
    states = []
    for i in range(dim):
        v = np.zeros(dim, dtype=np.complex128)
        v[i] = 1.0
        states.append(qlin.projector(v))
    for i in range(dim):
        for j in range(i + 1, dim):
            for phase in (1.0, 1.0j):
                v = np.zeros(dim, dtype=np.complex128)
                v[i] = 1.0
                v[j] = phase
                states.append(qlin.projector(v / np.sqrt(2.0)))
    return states


def _spread(images) -> float:
    ref = images[0]
    return max(qlin.trace_norm_hermitian(0.5 * ((m - ref) + (m - ref).conj().T)) for m in images)


def constancy_defect(u, rho_in) -> float:
    """Max over probe states of ``||N(p_i) - N(p_0)||_1``."""
    ch = induced_channel(u, rho_in, check_unitary=False)
    return _spread([ch.apply(p) for p in probe_states(ch.d_ctc)])


def _cr_output_spread(u, rho_in, d_cr, d_ctc) -> float:
    ud = u.conj().T
    outs = [
        qlin.partial_trace(u @ np.kron(rho_in, p) @ ud, [d_cr, d_ctc], [0])
        for p in probe_states(d_ctc)
    ]
    return _spread(outs)


def detect_closed_path(u, rho_in) -> FlowReport:
    u = qlin.as_matrix(u)
    rho_in = qlin.as_matrix(rho_in)
    d_cr, d_ctc = _split_dims(u, rho_in)
    if not qlin.is_unitary(u):
        raise qlin.LinalgError("interaction matrix is not unitary")
    defect = constancy_defect(u, rho_in)
    worst = max(
        [defect]
        + [constancy_defect(u, qlin.projector(np.eye(d_cr)[k])) for k in range(d_cr)]
    )
    closed = defect > CONSTANCY_TOL
    decoupled = _cr_output_spread(u, rho_in, d_cr, d_ctc) <= CONSTANCY_TOL
    if not closed:
        narrative = (
            "no closed path for information: the CTC state is fixed by the CR input alone, "
            "so the negative delay can be removed"
        )
    elif decoupled:
        narrative = (
            "closed path for information on the CTC, benign: CR-decoupled "
            "(the CR output does not depend on the CTC state)"
        )
    else:
        narrative = "closed path for information: consistency condition constrains the CTC state"
    return FlowReport(closed, defect, worst, decoupled, narrative)


def wire_sources(c: Circuit) -> list[int]:
    """For a SWAP-only circuit, the input position feeding each output position."""
    src = list(range(c.n_wires))
    for k, g in enumerate(c.gates):
        if g.kind != "swap":
            raise UnrollError(f"gate {k} ({g.kind}) is not a wire permutation")
        a, b = (c.position(w) for w in g.wires)
        src[a], src[b] = src[b], src[a]
    return src


def unroll_permutation(c: Circuit) -> Circuit:
    """Equivalent CTC-free circuit for a wire-permutation circuit without a closed path.

    Each CR output is traced back through the CTC wires to the CR input that
    ultimately feeds it; the result is realized as SWAPs on CR wires only.
    """
    src = wire_sources(c)
    flow = detect_closed_path(assemble_unitary(c), c.input)
    if flow.closed_path:
        raise UnrollError("closed path present; refusing to remove the negative delay")

    sigma = []
    for o in range(c.n_cr):
        s = src[o]
        seen = set()
        while s >= c.n_cr:
            if s in seen:
                raise UnrollError("closed path present; CTC wires form a loop")
            seen.add(s)
            s = src[s]
        sigma.append(s)

    current = list(range(c.n_cr))
    gates = []
    for o in range(c.n_cr):
        w = current.index(sigma[o])
        if w != o:
            gates.append(gate("swap", Wire(CR, o), Wire(CR, w)))
            current[o], current[w] = current[w], current[o]
    return Circuit(c.n_cr, 0, c.input, tuple(gates))


def run_unrolled(c: Circuit, rho_in=None) -> np.ndarray:
    """Ordinary unitary evolution of a CTC-free circuit."""
    if c.n_ctc:
        raise DimensionError("circuit still has CTC wires")
    u = assemble_unitary(c)
    rho = c.input if rho_in is None else qlin.as_matrix(rho_in)
    if rho.shape[0] != u.shape[0]:
        u = np.kron(u, np.eye(rho.shape[0] // u.shape[0]))
    return u @ rho @ u.conj().T
