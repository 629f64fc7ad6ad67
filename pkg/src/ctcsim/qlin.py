"""Dense complex linear algebra and quantum-information diagnostics.

Matrices are plain ``numpy`` complex arrays. Subsystem index 0 is the
leftmost tensor factor, i.e. the most significant bit of a basis label.
"""
from functools import reduce
from typing import Sequence

import numpy as np

from .kernels import jacobi_hermitian

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10


class LinalgError(ValueError):
    """Raised on dimension mismatches and invalid operator arguments."""


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise LinalgError(f"expected a non-empty 2-d matrix, got shape {a.shape}")
    return a


def dagger(m) -> np.ndarray:
    return as_matrix(m).conj().T


def matmul(*ms) -> np.ndarray:
    return reduce(np.matmul, (as_matrix(m) for m in ms))


def kron(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])


def kron_all(ms: Sequence) -> np.ndarray:
    return reduce(kron, ms)


def ket(bits: str) -> np.ndarray:
    """Computational basis column vector for a bit string, leftmost bit first."""
    v = np.zeros(2 ** len(bits), dtype=np.complex128)
    v[int(bits, 2) if bits else 0] = 1.0
    return v


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=np.complex128).reshape(-1)
    return np.outer(v, v.conj())


def hermiticity_defect(m) -> float:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return np.inf
    return float(np.max(np.abs(a - a.conj().T)))


def _check_dims(m: np.ndarray, dims: Sequence[int]) -> list[int]:
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise LinalgError(f"subsystem dims must be positive, got {dims}")
    if m.shape[0] != m.shape[1] or int(np.prod(dims)) != m.shape[0]:
        raise LinalgError(f"dims {dims} do not match a {m.shape[0]}x{m.shape[1]} matrix")
    return dims


def partial_trace(m, dims: Sequence[int], keep) -> np.ndarray:
    """Reduce ``m`` onto the subsystems listed in ``keep``, tracing out the rest.

    Kept subsystems retain their original relative order.
    """
    a = as_matrix(m)
    dims = _check_dims(a, dims)
    keep = sorted({int(k) for k in keep})
    if not keep:
        raise LinalgError("keep must name at least one subsystem")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise LinalgError(f"keep {keep} out of range for {len(dims)} subsystems")
    n = len(dims)
    traced = [i for i in range(n) if i not in keep]
    t = a.reshape(dims + dims)
    # trace pairs from the highest index down so remaining axis numbers stay valid
    for i in sorted(traced, reverse=True):
        t = np.trace(t, axis1=i, axis2=i + t.ndim // 2)
    d_keep = int(np.prod([dims[k] for k in keep]))
    return t.reshape(d_keep, d_keep)


def partial_transpose(m, dims: Sequence[int], party) -> np.ndarray:
    a = as_matrix(m)
    dims = _check_dims(a, dims)
    n = len(dims)
    t = a.reshape(dims + dims)
    perm = list(range(2 * n))
    for i in party:
        perm[i], perm[i + n] = perm[i + n], perm[i]
    return t.transpose(perm).reshape(a.shape)


def eig_hermitian(m, tol: float = HERMITIAN_TOL):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues in descending
    order and eigenvectors as the matching columns.
    """
    a = as_matrix(m)
    defect = hermiticity_defect(a)
    if defect > tol * max(1.0, float(np.max(np.abs(a)))):
        raise LinalgError(f"matrix is not Hermitian (max |M - M^H| = {defect:.3g})")
    a = 0.5 * (a + a.conj().T)
    w, v, _ = jacobi_hermitian(np.ascontiguousarray(a))
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def eigvals_hermitian(m) -> np.ndarray:
    return eig_hermitian(m)[0]


def min_eigenvalue(m) -> float:
    return float(eigvals_hermitian(m)[-1])


def trace_norm_hermitian(m) -> float:
    return float(np.sum(np.abs(eigvals_hermitian(m))))


def trace_distance(a, b) -> float:
    """Half the trace norm of ``a - b`` for Hermitian ``a``, ``b``."""
    return 0.5 * trace_norm_hermitian(as_matrix(a) - as_matrix(b))


def fidelity_pure(psi, phi) -> float:
    """``|<psi|phi>|^2`` for state vectors."""
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    phi = np.asarray(phi, dtype=np.complex128).reshape(-1)
    return float(abs(np.vdot(psi, phi)) ** 2)


def purity(rho) -> float:
    a = as_matrix(rho)
    return float(np.real(np.trace(a @ a)))


def von_neumann_entropy(rho) -> float:
    """Entropy in bits; eigenvalues at or below round-off contribute nothing."""
    w = eigvals_hermitian(rho)
    w = w[w > 1e-15]
    return float(max(0.0, -np.sum(w * np.log2(w))))


def negativity(rho, dims: Sequence[int], party) -> float:
    """Sum of the magnitudes of the negative eigenvalues of the partial transpose."""
    a = as_matrix(rho)
    dims = _check_dims(a, dims)
    party = sorted({int(p) for p in party})
    if not party or party[0] < 0 or party[-1] >= len(dims) or len(party) == len(dims):
        raise LinalgError(f"party {party} is not a proper bipartition of {len(dims)} subsystems")
    w = eigvals_hermitian(partial_transpose(a, dims, party))
    return float(0.0 - np.sum(w[w < 0.0]))


def density_matrix_violations(m, tol: float = HERMITIAN_TOL) -> list[str]:
    """Names of the density-matrix invariants that ``m`` fails (empty if valid)."""
    try:
        a = as_matrix(m)
    except LinalgError as exc:
        return [str(exc)]
    if a.shape[0] != a.shape[1]:
        return [f"not square: shape {a.shape}"]
    problems = []
    h = hermiticity_defect(a)
    if h > tol:
        problems.append(f"not Hermitian: max |M - M^H| = {h:.3g}")
    tr = np.trace(a)
    if abs(tr - 1.0) > TRACE_TOL:
        problems.append(f"trace {tr.real:.12g}{tr.imag:+.3g}j differs from 1")
    if h <= tol and not _cholesky_ok(0.5 * (a + a.conj().T) + PSD_TOL * np.eye(a.shape[0])):
        lam = min_eigenvalue(a)
        if lam < -PSD_TOL:
            problems.append(f"not positive semidefinite: min eigenvalue {lam:.3g}")
    return problems


def _cholesky_ok(a) -> bool:
    try:
        np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        return False
    return True


def is_density_matrix(m, tol: float = HERMITIAN_TOL) -> bool:
    return not density_matrix_violations(m, tol)


def is_unitary(u, tol: float = 1e-10) -> bool:
    a = as_matrix(u)
    if a.shape[0] != a.shape[1]:
        return False
    return float(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0])))) <= tol


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128) / dim


def support_basis(rho, cutoff: float = 1e-12) -> np.ndarray:
    """Orthonormal columns spanning the eigenvectors of ``rho`` above ``cutoff``."""
    w, v = eig_hermitian(rho)
    return v[:, w > cutoff]


# --- fixed test/oracle helpers -------------------------------------------------

def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Gaussian matrix."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return projector(v / np.linalg.norm(v))


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
