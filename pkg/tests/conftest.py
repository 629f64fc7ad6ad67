import numpy as np
import pytest

from ctcsim import dctc, qlin
from ctcsim.circuit import Circuit, basis_input, cr, ctc, gate

GRANDFATHER_GATES = (
    gate("cnot", ctc(0), cr(0)),
    gate("cnot", ctc(0), cr(1)),
    gate("swap", cr(1), ctc(0)),
)


def grandfather(bits="01"):
    return Circuit(2, 1, basis_input(bits), GRANDFATHER_GATES)


def bell_projector():
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1 / np.sqrt(2)
    return qlin.projector(v)


def wallace_entangled():
    return Circuit(2, 1, bell_projector(), (gate("swap", cr(0), ctc(0)),))


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # first numba call compiles (or loads the on-disk cache); keep that out of timings
    ch = dctc.induced_channel(np.eye(4), np.eye(2) / 2)
    dctc.solve_fixed_point(ch)
    qlin.eig_hermitian(np.eye(2))
