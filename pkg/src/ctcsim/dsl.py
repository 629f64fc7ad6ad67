"""Circuit description text format and the structured result report.

Circuit files are line oriented; ``#`` starts a comment::

    cr 2
    ctc 1
    state basis 01
    gate cnot ctc[0] cr[0]
    gate cnot ctc[0] cr[1]
    gate swap cr[1] ctc[0]

``state`` takes a ket sum such as ``0.7071|00> + 0.7071|11>`` (``⟩`` also
accepted; coefficients may be complex, e.g. ``0.5+0.5i|01>``), or one of the
presets ``basis <bits>`` and ``bell cr[a] cr[b]``. The leftmost bit is
``cr[0]``. A custom gate is ``gate custom [m00, m01, ...] <wires>`` with the
matrix entries listed row-major.
"""
import hashlib
import json
import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import qlin
from .circuit import CR, CTC, GATE_ALIASES, NAMED_GATES, Circuit, Gate, Wire, validate

NORM_FIXUP = 1e-6
SIG_DIGITS = 12


class ParseError(ValueError):
    """Parse failure; ``errors`` holds ``(line_number, message)`` pairs."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(f"line {n}: {msg}" for n, msg in self.errors))


_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COEF = rf"(?:{_NUM}(?:\s*[+-]\s*(?:{_NUM})?i)?|(?:{_NUM})?i)"
_TERM = re.compile(
    rf"\s*(?P<sign>[+-])?\s*(?P<coef>\(\s*[+-]?\s*{_COEF}\s*\)|{_COEF})?\s*\|(?P<bits>[01]+)(?:⟩|>)\s*"
)
_WIRE = re.compile(r"^(cr|ctc)\[(\d+)\]$")


def parse_complex(token: str) -> complex:
    t = token.strip().replace(" ", "")
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    if not t:
        raise ValueError("empty number")
    # a bare "i" (optionally signed) means unit imaginary part
    t = re.sub(r"(^|[+-])i$", r"\g<1>1i", t)
    if not re.fullmatch(rf"[+-]?(?:{_NUM})?(?:[+-](?:{_NUM})?i)?|[+-]?{_NUM}i", t):
        raise ValueError(f"malformed number {token!r}")
    return complex(t.replace("i", "j"))


def parse_ket_expr(text: str, n_cr: int) -> np.ndarray:
    """State vector from a sum of ``coef|bits>`` terms, normalized if within 1e-6."""
    pos = 0
    vec = np.zeros(2 ** n_cr, dtype=np.complex128)
    text = text.strip()
    if not text:
        raise ValueError("empty state expression")
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse state term at {text[pos:]!r}")
        if not first and not m.group("sign"):
            raise ValueError(f"missing '+' or '-' before {m.group(0).strip()!r}")
        bits = m.group("bits")
        if len(bits) != n_cr:
            raise ValueError(f"ket |{bits}> has {len(bits)} bits but there are {n_cr} CR wires")
        coef = parse_complex(m.group("coef")) if m.group("coef") else 1.0
        if m.group("sign") == "-":
            coef = -coef
        vec[int(bits, 2)] += coef
        pos = m.end()
        first = False
    return normalize(vec)


def normalize(vec: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > NORM_FIXUP:
        raise ValueError(f"state norm {norm:.9g} is not within {NORM_FIXUP:g} of 1")
    return vec / norm


def parse_wire(token: str) -> Wire:
    m = _WIRE.match(token)
    if not m:
        raise ValueError(f"bad wire reference {token!r}; expected cr[i] or ctc[i]")
    return Wire(m.group(1), int(m.group(2)))


def _state_from_preset(args: list[str], n_cr: int) -> np.ndarray:
    kind = args[0].lower()
    if kind == "basis":
        if len(args) != 2 or not re.fullmatch(r"[01]+", args[1]):
            raise ValueError("expected 'state basis <bits>'")
        if len(args[1]) != n_cr:
            raise ValueError(f"basis label {args[1]!r} does not match {n_cr} CR wires")
        return qlin.ket(args[1])
    if kind == "bell":
        if len(args) != 3:
            raise ValueError("expected 'state bell cr[a] cr[b]'")
        a, b = parse_wire(args[1]), parse_wire(args[2])
        for w in (a, b):
            if w.role != CR or w.index >= n_cr:
                raise ValueError(f"bell preset needs declared CR wires, got {w}")
        if a == b:
            raise ValueError("bell preset needs two distinct wires")
        vec = np.zeros(2 ** n_cr, dtype=np.complex128)
        for bit in (0, 1):
            label = ["0"] * n_cr
            label[a.index] = label[b.index] = str(bit)
            vec[int("".join(label), 2)] = 1.0 / np.sqrt(2.0)
        return vec
    raise ValueError(f"unknown state preset {kind!r}")


def _parse_gate(rest: str, lineno: int):
    m = re.match(r"custom\s*(\[[^\]]*\])\s*(.*)$", rest, flags=re.IGNORECASE)
    if m:
        entries = [e for e in m.group(1)[1:-1].split(",")]
        values = [parse_complex(e) for e in entries]
        k = int(round(np.sqrt(len(values))))
        if k * k != len(values):
            raise ValueError(f"custom matrix has {len(values)} entries, not a square count")
        matrix = np.array(values, dtype=np.complex128).reshape(k, k)
        wires = tuple(parse_wire(t) for t in m.group(2).split())
        return Gate("custom", wires, matrix)
    parts = rest.split()
    if not parts:
        raise ValueError("missing gate name")
    name = GATE_ALIASES.get(parts[0].lower(), parts[0].lower())
    if name not in NAMED_GATES:
        raise ValueError(f"unknown gate {parts[0]!r}")
    return Gate(name, tuple(parse_wire(t) for t in parts[1:]))


def parse_circuit(text: str) -> Circuit:
    """Parse circuit source; raises :class:`ParseError` listing every bad line."""
    errors = []
    n_cr = n_ctc = None
    state = None
    state_line = None
    gates = []
    gate_lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        head = head.lower()
        rest = rest.strip()
        try:
            if head in ("cr", "ctc"):
                if not re.fullmatch(r"\d+", rest):
                    raise ValueError(f"expected '{head} <count>', got {line!r}")
                if (n_cr if head == "cr" else n_ctc) is not None:
                    raise ValueError(f"duplicate '{head}' declaration")
                if head == "cr":
                    n_cr = int(rest)
                else:
                    n_ctc = int(rest)
            elif head == "state":
                if state is not None:
                    raise ValueError(f"duplicate 'state' line (first at line {state_line})")
                if n_cr is None:
                    raise ValueError("'state' must follow the 'cr' declaration")
                args = rest.split()
                if args and args[0].lower() in ("basis", "bell"):
                    state = _state_from_preset(args, n_cr)
                else:
                    state = parse_ket_expr(rest, n_cr)
                state_line = lineno
            elif head == "gate":
                gates.append(_parse_gate(rest, lineno))
                gate_lines.append(lineno)
            else:
                raise ValueError(f"unknown directive {head!r}")
        except ValueError as exc:
            errors.append((lineno, str(exc)))
    if n_cr is None:
        errors.append((0, "missing 'cr <n>' declaration"))
    if errors:
        raise ParseError(errors)
    n_ctc = 0 if n_ctc is None else n_ctc
    if state is None:
        state = qlin.ket("0" * n_cr)
    c = Circuit(n_cr, n_ctc, qlin.projector(state), tuple(gates))

    problems = validate(c)
    if problems:
        for p in problems:
            m = re.match(r"gate (\d+):", p)
            line = gate_lines[int(m.group(1))] if m else (state_line or 0)
            errors.append((line, p))
        raise ParseError(errors)
    return c


def _fmt(x: float) -> str:
    v = float(f"{x:.{SIG_DIGITS}g}")
    if v == 0:
        return "0"
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _fmt_complex(z: complex) -> str:
    re_s, im_s = _fmt(z.real), _fmt(z.imag)
    if im_s == "0":
        return re_s
    if re_s == "0":
        return f"{im_s}i"
    sign = "" if im_s.startswith("-") else "+"
    return f"{re_s}{sign}{im_s}i"


def pure_state_vector(rho, tol: float = 1e-9) -> Optional[np.ndarray]:
    """Vector ``v`` with ``rho = |v><v|`` (first nonzero amplitude real), or ``None``."""
    rho = np.asarray(rho)
    if abs(qlin.purity(rho) - 1.0) > tol:
        return None
    w, v = qlin.eig_hermitian(rho)
    vec = v[:, 0] * np.sqrt(max(w[0], 0.0))
    k = int(np.argmax(np.abs(vec) > 1e-12))
    return vec * (abs(vec[k]) / vec[k])


def _gate_lines(c: Circuit) -> list[str]:
    lines = []
    for g in c.gates:
        wires = " ".join(str(w) for w in g.wires)
        if g.kind == "custom":
            entries = ", ".join(_fmt_complex(z) for z in np.asarray(g.matrix).reshape(-1))
            lines.append(f"gate custom [{entries}] {wires}")
        else:
            lines.append(f"gate {g.kind} {wires}")
    return lines


def circuit_to_text(c: Circuit) -> str:
    """Canonical source text; parsing it reproduces ``c``."""
    vec = pure_state_vector(c.input)
    if vec is None:
        raise ValueError("circuit input is mixed; the text format only holds pure states")
    terms = []
    for idx in np.flatnonzero(np.abs(vec) > 1e-15):
        bits = format(idx, f"0{c.n_cr}b") if c.n_cr else ""
        terms.append(f"({_fmt_complex(vec[idx])})|{bits}>")
    lines = [f"cr {c.n_cr}", f"ctc {c.n_ctc}", "state " + " + ".join(terms)]
    return "\n".join(lines + _gate_lines(c)) + "\n"


def circuit_hash(c: Circuit) -> str:
    """Short stable digest of the circuit, including its input state."""
    try:
        text = circuit_to_text(c)
    except ValueError:
        text = "\n".join(
            [f"cr {c.n_cr}", f"ctc {c.n_ctc}", json.dumps(matrix_to_json(c.input))] + _gate_lines(c)
        )
    return hashlib.sha256(text.encode()).hexdigest()[:16]


# --- report -----------------------------------------------------------------


@dataclass(eq=False)
class SolveReport:
    """Outcome of one model run on one circuit."""

    model: str
    policy: str
    rho_out: np.ndarray
    rho_ctc: Optional[np.ndarray] = None
    residual: Optional[float] = None
    fixed_space_dim: Optional[int] = None
    extreme_points: Optional[list] = None  # list of (rho_ctc, rho_out) pairs
    diagnostics: list = field(default_factory=list)  # (name, value) pairs
    closed_information_path: bool = False
    circuit_hash: str = ""

    def diagnostic(self, name: str):
        for key, value in self.diagnostics:
            if key == name:
                return value
        raise KeyError(name)


def _round(x: float):
    v = float(f"{x:.{SIG_DIGITS}g}")
    if v == 0:
        return 0
    return int(v) if v == int(v) and abs(v) < 1e15 else v


def matrix_to_json(m):
    return [[[_round(z.real), _round(z.imag)] for z in row] for row in np.asarray(m)]


def matrix_from_json(rows):
    return np.array([[complex(re_, im_) for re_, im_ in row] for row in rows], dtype=np.complex128)


def report_to_dict(r: SolveReport) -> dict:
    d = {
        "circuit_hash": r.circuit_hash,
        "model": r.model,
        "policy": r.policy,
        "rho_ctc": None if r.rho_ctc is None else matrix_to_json(r.rho_ctc),
        "residual": None if r.residual is None else _round(r.residual),
        "fixed_space_dim": r.fixed_space_dim,
        "rho_out": matrix_to_json(r.rho_out),
        "diagnostics": [
            {"name": k, "value": _round(v) if isinstance(v, float) else v} for k, v in r.diagnostics
        ],
        "closed_information_path": bool(r.closed_information_path),
    }
    if r.extreme_points is not None:
        d["extreme_points"] = [
            {"rho_ctc": matrix_to_json(a), "rho_out": matrix_to_json(b)} for a, b in r.extreme_points
        ]
    return d


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), ensure_ascii=False)


def emit_report(r: SolveReport) -> str:
    """Canonical structured text of one report: sorted keys, one line, [re, im] pairs."""
    return _dumps(report_to_dict(r))


def emit_reports(reports) -> str:
    if len(reports) == 1:
        return emit_report(reports[0])
    return _dumps([report_to_dict(r) for r in reports])


def report_from_dict(d: dict) -> SolveReport:
    extremes = d.get("extreme_points")
    return SolveReport(
        model=d["model"],
        policy=d["policy"],
        rho_out=matrix_from_json(d["rho_out"]),
        rho_ctc=None if d["rho_ctc"] is None else matrix_from_json(d["rho_ctc"]),
        residual=d["residual"],
        fixed_space_dim=d["fixed_space_dim"],
        extreme_points=None
        if extremes is None
        else [(matrix_from_json(e["rho_ctc"]), matrix_from_json(e["rho_out"])) for e in extremes],
        diagnostics=[(e["name"], e["value"]) for e in d["diagnostics"]],
        closed_information_path=d["closed_information_path"],
        circuit_hash=d["circuit_hash"],
    )


def parse_report(text: str):
    """Inverse of :func:`emit_report` / :func:`emit_reports`."""
    obj = json.loads(text)
    if isinstance(obj, list):
        return [report_from_dict(d) for d in obj]
    return report_from_dict(obj)
