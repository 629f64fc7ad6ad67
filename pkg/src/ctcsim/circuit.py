"""Gate-level model of a circuit in simple standard form.

The full Hilbert space is ordered CR wires first (declaration order), then
CTC wires, so tracing out either group is a contiguous partial trace.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import qlin

CR = "cr"
CTC = "ctc"

_S2 = 1.0 / np.sqrt(2.0)

NAMED_GATES = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "h": np.array([[_S2, _S2], [_S2, -_S2]], dtype=np.complex128),
    "cnot": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
    ),
    "cz": np.diag([1, 1, 1, -1]).astype(np.complex128),
    "swap": np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
    ),
}
GATE_ALIASES = {"cx": "cnot"}


class CircuitError(ValueError):
    """Raised when an invalid circuit is used where a valid one is required."""


@dataclass(frozen=True, order=True)
class Wire:
    role: str
    index: int

    def __str__(self):
        return f"{self.role}[{self.index}]"


@dataclass(frozen=True, eq=False)
class Gate:
    kind: str
    wires: tuple
    matrix: Optional[np.ndarray] = None

    @property
    def arity(self) -> int:
        return len(self.wires)

    def unitary(self) -> np.ndarray:
        if self.kind == "custom":
            return np.asarray(self.matrix, dtype=np.complex128)
        return NAMED_GATES[self.kind]


@dataclass(frozen=True, eq=False)
class Circuit:
    n_cr: int
    n_ctc: int
    input: np.ndarray
    gates: tuple = field(default_factory=tuple)

    @property
    def n_wires(self) -> int:
        return self.n_cr + self.n_ctc

    @property
    def d_cr(self) -> int:
        return 2 ** self.n_cr

    @property
    def d_ctc(self) -> int:
        return 2 ** self.n_ctc

    def position(self, wire: Wire) -> int:
        return wire.index if wire.role == CR else self.n_cr + wire.index

    def with_input(self, rho) -> "Circuit":
        return Circuit(self.n_cr, self.n_ctc, np.asarray(rho, dtype=np.complex128), self.gates)


def gate(kind: str, *wires, matrix=None) -> Gate:
    """Convenience constructor: ``gate("cnot", ctc(0), cr(0))``."""
    kind = GATE_ALIASES.get(kind.lower(), kind.lower())
    m = None if matrix is None else np.asarray(matrix, dtype=np.complex128)
    return Gate(kind, tuple(wires), m)


def cr(i: int) -> Wire:
    return Wire(CR, i)


def ctc(i: int) -> Wire:
    return Wire(CTC, i)


def validate(c: Circuit) -> list[str]:
    """Every invariant violation of ``c``, each naming the offending gate or wire."""
    problems = []
    if c.n_cr < 0:
        problems.append(f"negative CR wire count {c.n_cr}")
    if c.n_ctc < 0:
        problems.append(f"negative CTC wire count {c.n_ctc}")
    rho = np.asarray(c.input)
    if c.n_cr >= 0 and rho.shape != (2 ** c.n_cr, 2 ** c.n_cr):
        problems.append(f"input state shape {rho.shape} does not match {c.n_cr} CR wires")
    else:
        problems.extend(f"input state {p}" for p in qlin.density_matrix_violations(rho))

    for k, g in enumerate(c.gates):
        if g.kind == "custom":
            m = None if g.matrix is None else np.asarray(g.matrix)
            if m is None or m.ndim != 2 or m.shape[0] != m.shape[1]:
                problems.append(f"gate {k}: custom matrix must be square")
                continue
            if m.shape[0] != 2 ** g.arity:
                problems.append(
                    f"gate {k}: custom matrix is {m.shape[0]}x{m.shape[0]} but acts on {g.arity} wires"
                )
            elif not qlin.is_unitary(m):
                problems.append(f"gate {k}: non-unitary custom gate")
        elif g.kind in NAMED_GATES:
            expected = int(np.log2(NAMED_GATES[g.kind].shape[0]))
            if g.arity != expected:
                problems.append(
                    f"gate {k}: arity violation, {g.kind} takes {expected} operands, got {g.arity}"
                )
        else:
            problems.append(f"gate {k}: unknown gate kind {g.kind!r}")

        for w in g.wires:
            if w.role == CR:
                limit = c.n_cr
            elif w.role == CTC:
                limit = c.n_ctc
            else:
                problems.append(f"gate {k}: unknown wire role {w.role!r}")
                continue
            if not 0 <= w.index < limit:
                problems.append(f"gate {k}: wire {w} is not declared")
        if len(set(g.wires)) != len(g.wires):
            problems.append(f"gate {k}: repeated operand wire")
    return problems


def lift(u: np.ndarray, positions: Sequence[int], n: int) -> np.ndarray:
    """Embed a k-qubit unitary acting on ``positions`` into an n-qubit operator."""
    k = len(positions)
    dim = 2 ** n
    t = np.eye(dim, dtype=np.complex128).reshape((2,) * n + (dim,))
    g = np.asarray(u, dtype=np.complex128).reshape((2,) * (2 * k))
    out = np.tensordot(g, t, axes=(list(range(k, 2 * k)), list(positions)))
    # tensordot leaves the gate's output axes in front; restore wire order
    out = np.moveaxis(out, list(range(k)), list(positions))
    return out.reshape(dim, dim)


@lru_cache(maxsize=4096)
def _lifted_named(kind: str, positions: tuple, n: int) -> np.ndarray:
    m = lift(NAMED_GATES[kind], positions, n)
    m.setflags(write=False)
    return m


def gate_matrix(c: Circuit, g: Gate) -> np.ndarray:
    positions = tuple(c.position(w) for w in g.wires)
    if g.kind == "custom":
        return lift(g.unitary(), positions, c.n_wires)
    return _lifted_named(g.kind, positions, c.n_wires)


def assemble_unitary(c: Circuit) -> np.ndarray:
    """Total interaction unitary ``G_k ... G_1`` on CR (x) CTC, first gate applied first."""
    problems = validate(c)
    if problems:
        raise CircuitError("; ".join(problems))
    u = np.eye(2 ** c.n_wires, dtype=np.complex128)
    for g in c.gates:
        u = gate_matrix(c, g) @ u
    return u


def is_permutation_matrix(u, tol: float = 1e-10) -> bool:
    a = np.asarray(u)
    if np.any(np.abs(a.imag) > tol):
        return False
    re = a.real
    ones = np.abs(re - 1.0) <= tol
    zeros = np.abs(re) <= tol
    if not np.all(ones | zeros):
        return False
    return bool(np.all(ones.sum(axis=0) == 1) and np.all(ones.sum(axis=1) == 1))


def is_classical(c: Circuit) -> bool:
    """True iff the assembled unitary permutes computational basis states."""
    return is_permutation_matrix(assemble_unitary(c))


def basis_input(bits: str) -> np.ndarray:
    return qlin.projector(qlin.ket(bits))
