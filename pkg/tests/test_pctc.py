import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ctcsim import qlin
from ctcsim.circuit import assemble_unitary
from ctcsim.pctc import ParadoxicalInputError, pctc_operator, pctc_output

from conftest import bell_projector, grandfather, wallace_entangled

# hand-derived: the grandfather gates send |x,y,z> to |x^z, z, y^z>;
# keeping only the z -> z component gives C|x,y> = sum_z [y^z == z] |x^z, z>
GRANDFATHER_C = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 1, 0], [1, 0, 0, 0]], dtype=float
)


def literal_partial_trace(u, d_cr, d_ctc):
    c = np.zeros((d_cr, d_cr), dtype=complex)
    for z in range(d_ctc):
        e = np.zeros(d_ctc)
        e[z] = 1
        proj = np.kron(np.eye(d_cr), e[None, :])
        c += proj @ u @ proj.T
    return c


def test_grandfather_operator_golden():
    op = pctc_operator(assemble_unitary(grandfather()), 4, 2)
    np.testing.assert_allclose(op.c, GRANDFATHER_C, atol=1e-15)


def test_grandfather_operator_by_columns():
    op = pctc_operator(assemble_unitary(grandfather()), 4, 2)
    # C|00> = |00> + |11>, C|01> = 0, C|10> = |01> + |10>, C|11> = 0
    np.testing.assert_array_equal(op.c[:, 0], [1, 0, 0, 1])
    np.testing.assert_array_equal(op.c[:, 1], [0, 0, 0, 0])
    np.testing.assert_array_equal(op.c[:, 2], [0, 1, 1, 0])
    np.testing.assert_array_equal(op.c[:, 3], [0, 0, 0, 0])


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=30, deadline=None)
def test_operator_matches_literal_trace(seed):
    r = np.random.default_rng(seed)
    d_cr, d_ctc = int(r.choice([2, 4])), int(r.choice([2, 4]))
    u = qlin.haar_unitary(d_cr * d_ctc, r)
    np.testing.assert_allclose(pctc_operator(u, d_cr, d_ctc).c, literal_partial_trace(u, d_cr, d_ctc), atol=1e-13)


def test_paradoxical_input_annihilated():
    op = pctc_operator(assemble_unitary(grandfather()), 4, 2)
    with pytest.raises(ParadoxicalInputError):
        pctc_output(op, qlin.projector(qlin.ket("01")))


def test_allowed_input_renormalized():
    op = pctc_operator(assemble_unitary(grandfather()), 4, 2)
    out, weight = pctc_output(op, qlin.projector(qlin.ket("10")))
    assert weight == pytest.approx(2.0)
    v = np.array([0, 1, 1, 0]) / np.sqrt(2)
    np.testing.assert_allclose(out, np.outer(v, v), atol=1e-14)


def test_wallace_entangled_keeps_entanglement():
    c = wallace_entangled()
    op = pctc_operator(assemble_unitary(c), 4, 2)
    out, _ = pctc_output(op, c.input)
    np.testing.assert_allclose(out, bell_projector(), atol=1e-12)
    assert qlin.negativity(out, [2, 2], [0]) == pytest.approx(0.5, abs=1e-12)


def test_ancilla_passes_through():
    op = pctc_operator(assemble_unitary(grandfather()), 4, 2)
    anc = np.diag([0.25, 0.75])
    out, w = pctc_output(op, np.kron(qlin.projector(qlin.ket("10")), anc))
    assert w == pytest.approx(2.0)
    np.testing.assert_allclose(qlin.partial_trace(out, [4, 2], [1]), anc, atol=1e-14)


@given(st.integers(0, 2 ** 32 - 1), st.floats(0, 2 * np.pi))
@settings(max_examples=30, deadline=None)
def test_global_phase_invariance(seed, phi):
    r = np.random.default_rng(seed)
    u = qlin.haar_unitary(4, r)
    rho = qlin.random_density_matrix(2, r)
    a = pctc_output(pctc_operator(u, 2, 2), rho)
    b = pctc_output(pctc_operator(np.exp(1j * phi) * u, 2, 2), rho)
    assert a[1] == pytest.approx(b[1], rel=1e-10)
    np.testing.assert_allclose(a[0], b[0], atol=1e-10)
    assert qlin.is_density_matrix(a[0])


def test_shape_errors():
    with pytest.raises(qlin.LinalgError):
        pctc_operator(np.eye(4), 4, 2)
    op = pctc_operator(np.eye(4), 2, 2)
    with pytest.raises(qlin.LinalgError):
        pctc_output(op, np.eye(3) / 3)
