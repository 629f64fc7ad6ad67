"""Deutsch-model (D-CTC) semantics.

The CTC state must be a fixed point of the channel
``N(rho) = Tr_CR[U (rho_in (x) rho) U^H]``. Two independent routes find fixed
points: the nullspace of ``S - I`` for the superoperator ``S``
(:func:`fixed_point_space`) and an averaged orbit of ``N`` started at the
maximally mixed state (:func:`solve_fixed_point` with ``policy="canonical"``).
"""
import itertools
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import qlin
from .circuit import Circuit, assemble_unitary, is_permutation_matrix
from .kernels import averaged_orbit

RESIDUAL_TARGET = 1e-10
RESIDUAL_ACCEPT = 1e-8
CHANNEL_TOL = 1e-9
MAX_ITERATIONS = 10 ** 6
NULL_SINGULAR_CUTOFF = 1e-6
POLICIES = ("canonical", "maxent")


class DimensionError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    """A fixed-point solve ended above the accepted residual."""

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class NotClassicalError(ValueError):
    pass


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape((dim, dim), order="F")


def matrix_unit(i: int, j: int, dim: int) -> np.ndarray:
    e = np.zeros((dim, dim), dtype=np.complex128)
    e[i, j] = 1.0
    return e


@dataclass(eq=False)
class CTCChannel:
    """The CR-input-parameterized map on CTC operators, as a superoperator."""

    d_ctc: int
    superoperator: np.ndarray
    unitary: np.ndarray
    rho_in: np.ndarray

    def apply(self, rho) -> np.ndarray:
        return unvec(self.superoperator @ vec(rho), self.d_ctc)

    def residual(self, rho) -> float:
        """Trace norm of ``N(rho) - rho``."""
        return qlin.trace_norm_hermitian(_hermitian_part(self.apply(rho) - rho))

    def choi(self) -> np.ndarray:
        d = self.d_ctc
        j = np.zeros((d * d, d * d), dtype=np.complex128)
        for a in range(d):
            for b in range(d):
                j += qlin.kron(matrix_unit(a, b, d), self.apply(matrix_unit(a, b, d)))
        return j

    def trace_defect(self) -> float:
        d = self.d_ctc
        worst = 0.0
        for a in range(d):
            for b in range(d):
                worst = max(worst, abs(np.trace(self.apply(matrix_unit(a, b, d))) - (a == b)))
        return float(worst)

    def choi_min_eigenvalue(self) -> float:
        return qlin.min_eigenvalue(_hermitian_part(self.choi()))

    def check(self, tol: float = CHANNEL_TOL) -> list[str]:
        """CPTP violations of this channel (empty when it is a valid channel)."""
        problems = []
        td = self.trace_defect()
        if td > tol:
            problems.append(f"not trace preserving: defect {td:.3g}")
        lam = self.choi_min_eigenvalue()
        if lam < -tol:
            problems.append(f"not completely positive: Choi min eigenvalue {lam:.3g}")
        return problems


def _hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def _split_dims(u: np.ndarray, rho_in: np.ndarray) -> tuple[int, int]:
    d_cr = rho_in.shape[0]
    if rho_in.shape != (d_cr, d_cr) or u.shape[0] != u.shape[1] or u.shape[0] % d_cr:
        raise DimensionError(
            f"unitary of shape {u.shape} is incompatible with a {rho_in.shape} CR input"
        )
    return d_cr, u.shape[0] // d_cr


def induced_channel(u, rho_in, check_unitary: bool = True) -> CTCChannel:
    """Superoperator of ``rho -> Tr_CR[U (rho_in (x) rho) U^H]`` on the CTC factor."""
    u = qlin.as_matrix(u)
    rho_in = qlin.as_matrix(rho_in)
    d_cr, d_ctc = _split_dims(u, rho_in)
    if check_unitary and not qlin.is_unitary(u):
        raise qlin.LinalgError("interaction matrix is not unitary")
    # N(E_ab)[x, y] = sum_ijk U[i x, j a] rho_in[j, k] conj(U[i y, k b])
    u4 = u.reshape(d_cr, d_ctc, d_cr, d_ctc)
    left = np.einsum("ixja,jk->ixka", u4, rho_in)
    s4 = np.einsum("ixka,iykb->xyab", left, u4.conj())
    # column stacking: row index x + d*y, column index a + d*b
    s = s4.transpose(1, 0, 3, 2).reshape(d_ctc * d_ctc, d_ctc * d_ctc)
    return CTCChannel(d_ctc, np.ascontiguousarray(s), u, rho_in)


def channel_for(c: Circuit) -> CTCChannel:
    return induced_channel(assemble_unitary(c), c.input)


@dataclass(eq=False)
class FixedPointSet:
    """Affine description of every density-operator fixed point of a channel.

    ``particular`` lies in the relative interior of the feasible slice, and each
    fixed state equals ``particular + sum(t_i * directions[i])`` for some ``t``.
    ``extreme_points`` is ``None`` when it was not computed or is a continuum.
    """

    particular: np.ndarray
    directions: list = field(default_factory=list)
    extreme_points: Optional[list] = None

    @property
    def affine_dim(self) -> int:
        return len(self.directions)

    @property
    def unique(self) -> bool:
        return self.affine_dim == 0

    def point(self, coords) -> np.ndarray:
        rho = self.particular.copy()
        for t, d in zip(coords, self.directions):
            rho = rho + t * d
        return rho

    def distance(self, rho) -> float:
        """Frobenius distance from ``rho`` to the affine hull of the set."""
        delta = np.asarray(rho) - self.particular
        for d in self.directions:
            delta = delta - np.real(np.vdot(d, delta)) * d
        return float(np.linalg.norm(delta))


def _real_inner(a, b) -> float:
    return float(np.real(np.vdot(a, b)))


def _orthonormalize(mats, tol: float):
    basis = []
    for m in mats:
        v = m.copy()
        for _ in range(2):
            for b in basis:
                v = v - _real_inner(b, v) * b
        n = np.linalg.norm(v)
        if n > tol:
            basis.append(v / n)
    return basis


def fixed_operator_basis(ch: CTCChannel, cutoff: float = NULL_SINGULAR_CUTOFF):
    """Orthonormal Hermitian basis (real span) of the operators with ``N(X) = X``."""
    d = ch.d_ctc
    a = ch.superoperator - np.eye(d * d)
    gram = a.conj().T @ a
    w, v = qlin.eig_hermitian(_hermitian_part(gram))
    null = v[:, w <= cutoff ** 2]
    herm = []
    for k in range(null.shape[1]):
        x = unvec(null[:, k], d)
        herm.append(_hermitian_part(x))
        herm.append(_hermitian_part(-1j * x))
    return _orthonormalize(herm, 1e-8)


def _positive_and_negative_parts(h):
    w, v = qlin.eig_hermitian(h)
    pos = (v * np.clip(w, 0.0, None)) @ v.conj().T
    neg = (v * np.clip(-w, 0.0, None)) @ v.conj().T
    return pos, neg


def fixed_point_space(ch: CTCChannel, extremes: bool = True) -> FixedPointSet:
    """Characterize all fixed density operators of ``ch`` via the nullspace of ``S - I``.

    Positive and negative parts of a Hermitian fixed point of a
    trace-preserving positive map are themselves fixed, so summing ``|H|``
    over the basis gives a fixed state whose support contains every other
    fixed state's support.
    """
    basis = fixed_operator_basis(ch)
    if not basis:
        raise ConvergenceError("no fixed operator found; channel is not trace preserving?")
    acc = np.zeros((ch.d_ctc, ch.d_ctc), dtype=np.complex128)
    for h in basis:
        pos, neg = _positive_and_negative_parts(h)
        acc += pos + neg
    particular = _hermitian_part(acc / np.trace(acc).real)

    traceless = [h - np.trace(h).real * particular for h in basis]
    directions = _orthonormalize(traceless, 1e-8)
    if len(directions) != len(basis) - 1:
        raise ConvergenceError(
            f"fixed space has dimension {len(basis)} but {len(directions)} traceless directions"
        )
    fps = FixedPointSet(particular, directions)
    if extremes:
        fps.extreme_points = extreme_points(fps)
    return fps


def bloch_vector(rho) -> np.ndarray:
    rho = np.asarray(rho)
    return np.array(
        [2 * rho[0, 1].real, -2 * rho[0, 1].imag, (rho[0, 0] - rho[1, 1]).real]
    )


def from_bloch(r) -> np.ndarray:
    x, y, z = r
    return 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]], dtype=np.complex128)


def _qubit_extremes(fps: FixedPointSet):
    r0 = bloch_vector(fps.particular)
    if fps.affine_dim == 0:
        return [fps.particular.copy()]
    if fps.affine_dim > 1:
        return None
    v = bloch_vector(fps.directions[0])
    # |r0 + t v| = 1
    a = v @ v
    b = 2 * (r0 @ v)
    c = r0 @ r0 - 1.0
    disc = np.sqrt(max(b * b - 4 * a * c, 0.0))
    ts = sorted([(-b - disc) / (2 * a), (-b + disc) / (2 * a)])
    return _order_points([from_bloch(r0 + t * v) for t in ts])


def segment_bounds(rho, direction, q=None):
    """Interval of ``t`` for which ``rho + t * direction`` stays PSD.

    ``direction`` must live inside the support of ``rho``; ``q`` is an
    orthonormal basis of that support (computed when omitted).
    """
    if q is None:
        q = qlin.support_basis(rho)
    rc = _hermitian_part(q.conj().T @ rho @ q)
    w_r, v_r = qlin.eig_hermitian(rc)
    inv_sqrt = (v_r * (1.0 / np.sqrt(np.clip(w_r, 1e-300, None)))) @ v_r.conj().T
    k = inv_sqrt @ (q.conj().T @ direction @ q) @ inv_sqrt
    lam = qlin.eigvals_hermitian(_hermitian_part(k))
    lo = -np.inf if lam[0] <= 1e-15 else -1.0 / lam[0]
    hi = np.inf if lam[-1] >= -1e-15 else -1.0 / lam[-1]
    return lo, hi


def _general_extremes(fps: FixedPointSet):
    if fps.affine_dim == 0:
        return [fps.particular.copy()]
    if fps.affine_dim > 1:
        return None
    d = fps.directions[0]
    lo, hi = segment_bounds(fps.particular, d)
    return _order_points([_hermitian_part(fps.particular + t * d) for t in (lo, hi)])


def _order_points(points):
    # deterministic order: by descending weight on the computational basis, lexicographically
    return sorted(points, key=lambda p: tuple(-np.real(np.diag(p))))


def extreme_points(fps: FixedPointSet):
    if fps.particular.shape[0] == 2:
        return _qubit_extremes(fps)
    return _general_extremes(fps)


def _maxent(fps: FixedPointSet, max_sweeps: int = 500, gain_tol: float = 1e-12) -> np.ndarray:
    """Coordinate ascent of von Neumann entropy over the fixed-point slice."""
    rho = fps.particular.copy()
    if fps.unique:
        return rho
    q = qlin.support_basis(fps.particular)
    # compressing to the support keeps every line search strictly inside the cone
    rc = q.conj().T @ rho @ q
    dirs = [q.conj().T @ d @ q for d in fps.directions]
    current = qlin.von_neumann_entropy(rc)
    eye = np.eye(rc.shape[0], dtype=np.complex128)
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    for _ in range(max_sweeps):
        start = current
        for d in dirs:
            lo, hi = segment_bounds(rc, d, eye)
            lo, hi = max(lo, -2.0), min(hi, 2.0)
            # stay strictly inside: entropy has infinite slope at the boundary
            span = hi - lo
            lo, hi = lo + 1e-14 * span, hi - 1e-14 * span

            def f(t):
                return qlin.von_neumann_entropy(_hermitian_part(rc + t * d))

            a, b = lo, hi
            x1 = b - invphi * (b - a)
            x2 = a + invphi * (b - a)
            f1, f2 = f(x1), f(x2)
            while b - a > 1e-12:
                if f1 < f2:
                    a, x1, f1 = x1, x2, f2
                    x2 = a + invphi * (b - a)
                    f2 = f(x2)
                else:
                    b, x2, f2 = x2, x1, f1
                    x1 = b - invphi * (b - a)
                    f1 = f(x1)
            t = 0.5 * (a + b)
            ft = f(t)
            if ft > current:
                rc = _hermitian_part(rc + t * d)
                current = ft
        if current - start < gain_tol:
            break
    return _hermitian_part(q @ rc @ q.conj().T)


def _canonical(ch: CTCChannel, tol: float, max_iter: int):
    d = ch.d_ctc
    x0 = vec(qlin.maximally_mixed(d))
    x, iters, _ = averaged_orbit(
        np.ascontiguousarray(ch.superoperator), x0, float(d), float(tol), int(max_iter)
    )
    rho = _hermitian_part(unvec(x, d))
    return rho / np.trace(rho).real, iters


def solve_fixed_point(
    ch: CTCChannel,
    policy: str = "canonical",
    tol: float = RESIDUAL_TARGET,
    max_iter: int = MAX_ITERATIONS,
    fixed_space: Optional[FixedPointSet] = None,
) -> np.ndarray:
    """A density operator ``rho`` with ``||N(rho) - rho||_1 <= 1e-8``.

    ``canonical`` iterates the averaged map ``(id + N) / 2`` from the maximally
    mixed state; its limit coincides with the Cesaro mean of ``N^k`` applied to
    that state, but it converges geometrically even when ``N`` has peripheral
    eigenvalues. ``maxent`` picks the maximum-entropy fixed state. The policy
    is a convention of this library; the consistency condition alone does not
    single out either.
    """
    if policy == "canonical":
        rho, _ = _canonical(ch, tol, max_iter)
    elif policy == "maxent":
        fps = fixed_space if fixed_space is not None else fixed_point_space(ch, extremes=False)
        rho = _maxent(fps)
    else:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    res = ch.residual(rho)
    if res > RESIDUAL_ACCEPT:
        raise ConvergenceError(
            f"{policy} solve stopped at residual {res:.3g} (> {RESIDUAL_ACCEPT:g})", rho, res
        )
    return rho


def ctc_output(u, rho_in, rho_ctc, tol: float = RESIDUAL_ACCEPT) -> np.ndarray:
    """CR output ``Tr_CTC[U (rho_in (x) rho_ctc) U^H]``.

    Warns (does not raise) when ``rho_ctc`` is not a fixed point, which is
    useful for exploring counterfactual CTC states.
    """
    u = qlin.as_matrix(u)
    rho_in = qlin.as_matrix(rho_in)
    rho_ctc = qlin.as_matrix(rho_ctc)
    d_cr, d_ctc = _split_dims(u, rho_in)
    if rho_ctc.shape != (d_ctc, d_ctc):
        raise DimensionError(f"CTC state must be {d_ctc}x{d_ctc}, got {rho_ctc.shape}")
    res = induced_channel(u, rho_in, check_unitary=False).residual(rho_ctc)
    if res > tol:
        warnings.warn(
            f"CTC state is not self-consistent (residual {res:.3g}); output is counterfactual",
            stacklevel=2,
        )
    out = u @ qlin.kron(rho_in, rho_ctc) @ u.conj().T
    return _hermitian_part(qlin.partial_trace(out, [d_cr, d_ctc], [0]))


@dataclass(frozen=True)
class ClassicalRow:
    z: str
    consistent: bool
    output: str


def _bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


def classical_enumerate(c: Circuit) -> list[ClassicalRow]:
    """Brute-force table of CTC bit assignments for a reversible classical circuit.

    ``z`` is consistent when the CTC bits leaving the gates equal the CTC bits
    that entered them.
    """
    u = assemble_unitary(c)
    if not is_permutation_matrix(u):
        raise NotClassicalError("circuit does not permute computational basis states")
    # assemble_unitary has already validated the input as a density matrix
    diag = np.real(np.diag(c.input))
    x = int(np.argmax(diag))
    if abs(diag[x] - 1.0) > 1e-10:
        raise NotClassicalError("input is not a computational basis state")
    perm = np.argmax(np.abs(u), axis=0)
    rows = []
    for z in range(c.d_ctc):
        out = int(perm[x * c.d_ctc + z])
        out_cr, out_ctc = divmod(out, c.d_ctc)
        rows.append(ClassicalRow(_bits(z, c.n_ctc), out_ctc == z, _bits(out_cr, c.n_cr)))
    return rows


def basis_fixed_points(ch: CTCChannel, tol: float = 1e-9) -> list[int]:
    """Computational basis states ``|z><z|`` left unchanged by the channel."""
    fixed = []
    for z in range(ch.d_ctc):
        p = matrix_unit(z, z, ch.d_ctc)
        if np.max(np.abs(ch.apply(p) - p)) <= tol:
            fixed.append(z)
    return fixed


def every_basis_assignment(n: int):
    return ["".join(b) for b in itertools.product("01", repeat=n)]
