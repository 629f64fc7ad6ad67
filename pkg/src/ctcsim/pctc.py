"""Post-selected (P-CTC) semantics.

The CR evolution is the (generally non-unitary) operator ``C = Tr_CTC U``,
applied and renormalized: ``rho -> C rho C^H / Tr(C rho C^H)``.
"""
from dataclasses import dataclass

import numpy as np

from . import qlin

ZERO_WEIGHT = 1e-12


class ParadoxicalInputError(ValueError):
    """The post-selection succeeds with zero probability for this input."""


@dataclass(eq=False)
class PctcOperator:
    c: np.ndarray
    unitary: np.ndarray

    @property
    def dim(self) -> int:
        return self.c.shape[0]


def pctc_operator(u, d_cr: int, d_ctc: int) -> PctcOperator:
    u = qlin.as_matrix(u)
    if u.shape != (d_cr * d_ctc, d_cr * d_ctc):
        raise qlin.LinalgError(f"unitary of shape {u.shape} does not act on {d_cr}x{d_ctc}")
    t = u.reshape(d_cr, d_ctc, d_cr, d_ctc)
    return PctcOperator(np.einsum("ajbj->ab", t), u)


def pctc_output(op: PctcOperator, rho_in) -> tuple[np.ndarray, float]:
    """Renormalized P-CTC output and its post-selection weight.

    A ``rho_in`` larger than ``op`` is taken to carry trailing ancilla
    factors, which pass through untouched.
    """
    rho = qlin.as_matrix(rho_in)
    d = rho.shape[0]
    if d % op.dim:
        raise qlin.LinalgError(f"input of dim {d} does not contain the {op.dim}-dim CR space")
    c = np.kron(op.c, np.eye(d // op.dim)) if d != op.dim else op.c
    out = c @ rho @ c.conj().T
    weight = float(np.real(np.trace(out)))
    if weight <= ZERO_WEIGHT:
        raise ParadoxicalInputError(f"paradoxical input annihilated (weight {weight:.3g})")
    out = out / weight
    return 0.5 * (out + out.conj().T), weight
