import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ctcsim import qlin
from ctcsim.circuit import (
    Circuit,
    CircuitError,
    Gate,
    assemble_unitary,
    basis_input,
    cr,
    ctc,
    gate,
    is_classical,
    validate,
)

from conftest import grandfather


def basis_image(u, bits):
    out = u @ qlin.ket(bits)
    k = int(np.argmax(np.abs(out)))
    assert abs(out[k]) == pytest.approx(1.0)
    return format(k, f"0{len(bits)}b")


def test_empty_circuit_is_identity():
    c = Circuit(1, 1, basis_input("0"))
    np.testing.assert_array_equal(assemble_unitary(c), np.eye(4))


@pytest.mark.parametrize("x,y,z", list(itertools.product([0, 1], repeat=3)))
def test_grandfather_basis_action(x, y, z):
    # hand-tracked: CNOT(z->x), CNOT(z->y), SWAP(y, z) gives |x^z, z, y^z>
    u = assemble_unitary(grandfather())
    assert basis_image(u, f"{x}{y}{z}") == f"{x ^ z}{z}{y ^ z}"


@pytest.mark.parametrize("a,b", list(itertools.product("01", repeat=2)))
def test_single_swap(a, b):
    u = assemble_unitary(Circuit(1, 1, basis_input("0"), (gate("swap", cr(0), ctc(0)),)))
    assert basis_image(u, a + b) == b + a


def test_operand_order_matters_for_cnot():
    c1 = Circuit(2, 0, basis_input("00"), (gate("cnot", cr(0), cr(1)),))
    c2 = Circuit(2, 0, basis_input("00"), (gate("cnot", cr(1), cr(0)),))
    assert basis_image(assemble_unitary(c1), "10") == "11"
    assert basis_image(assemble_unitary(c2), "10") == "10"
    assert basis_image(assemble_unitary(c2), "01") == "11"


def test_validate_grandfather():
    assert validate(grandfather()) == []


def test_validate_arity():
    c = Circuit(2, 1, basis_input("00"), (gate("cnot", cr(0), cr(1), ctc(0)),))
    problems = validate(c)
    assert len(problems) == 1 and problems[0].startswith("gate 0: arity")


def test_validate_non_unitary_custom():
    c = Circuit(1, 0, basis_input("0"), (gate("custom", cr(0), matrix=[[1, 1], [0, 1]]),))
    assert validate(c) == ["gate 0: non-unitary custom gate"]


def test_validate_undeclared_wire_and_bad_input():
    c = Circuit(1, 1, np.eye(2), (gate("x", ctc(1)),))
    problems = validate(c)
    assert any("ctc[1] is not declared" in p for p in problems)
    assert any(p.startswith("input state") for p in problems)
    with pytest.raises(CircuitError):
        assemble_unitary(c)


def test_validate_custom_dimension_and_unknown_kind():
    c = Circuit(2, 0, basis_input("00"), (gate("custom", cr(0), cr(1), matrix=np.eye(2)), Gate("toffoli", (cr(0),))))
    problems = validate(c)
    assert "acts on 2 wires" in problems[0]
    assert "unknown gate kind" in problems[1]


def test_is_classical():
    assert is_classical(grandfather())
    assert is_classical(Circuit(1, 1, basis_input("0")))
    assert not is_classical(Circuit(1, 1, basis_input("0"), (gate("h", cr(0)),)))


ALL_GATES = ["x", "z", "h", "cnot", "cz", "swap"]


def random_gate(r, n_cr, n_ctc):
    wires = [cr(i) for i in range(n_cr)] + [ctc(i) for i in range(n_ctc)]
    kind = ALL_GATES[r.integers(len(ALL_GATES))]
    k = 2 if kind in ("cnot", "cz", "swap") else 1
    if kind in ("x", "z", "h") and r.random() < 0.3:
        return gate("custom", *[wires[i] for i in r.choice(len(wires), 2, replace=False)],
                    matrix=qlin.haar_unitary(4, r))
    picks = r.choice(len(wires), k, replace=False)
    return gate(kind, *[wires[i] for i in picks])


seeds = st.integers(0, 2 ** 32 - 1)


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_assembled_unitary_is_unitary(seed):
    r = np.random.default_rng(seed)
    gates = tuple(random_gate(r, 2, 1) for _ in range(r.integers(0, 6)))
    u = assemble_unitary(Circuit(2, 1, basis_input("00"), gates))
    assert np.max(np.abs(u.conj().T @ u - np.eye(8))) <= 1e-9


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_gate_order_law(seed):
    r = np.random.default_rng(seed)
    g1, g2 = random_gate(r, 2, 1), random_gate(r, 2, 1)
    rho = basis_input("00")
    u1 = assemble_unitary(Circuit(2, 1, rho, (g1,)))
    u2 = assemble_unitary(Circuit(2, 1, rho, (g2,)))
    u12 = assemble_unitary(Circuit(2, 1, rho, (g1, g2)))
    assert np.max(np.abs(u2 @ u1 - u12)) <= 1e-12


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_disjoint_gates_commute(seed):
    r = np.random.default_rng(seed)
    ga = gate("custom", cr(0), ctc(0), matrix=qlin.haar_unitary(4, r))
    gb = gate("custom", cr(1), matrix=qlin.haar_unitary(2, r))
    rho = basis_input("00")
    lhs = assemble_unitary(Circuit(2, 1, rho, (ga, gb)))
    rhs = assemble_unitary(Circuit(2, 1, rho, (gb, ga)))
    assert np.max(np.abs(lhs - rhs)) <= 1e-12
