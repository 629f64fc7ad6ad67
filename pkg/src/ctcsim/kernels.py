"""Hot numeric loops.

Each kernel is plain numpy-on-arrays code that numba can compile unchanged;
see ``ctcsim._accel`` for the switch between the compiled and fallback paths.
"""
import numpy as np

from ._accel import maybe_njit

JACOBI_MAX_SWEEPS = 100


@maybe_njit
def jacobi_hermitian(m):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Returns ``(w, v, sweeps)`` with eigenvalues ``w`` in no particular order
    and eigenvectors in the columns of ``v``. ``m`` is not modified.
    """
    n = m.shape[0]
    a = m.astype(np.complex128).copy()
    v = np.eye(n, dtype=np.complex128)
    total = 0.0
    for i in range(n):
        for j in range(n):
            total += a[i, j].real ** 2 + a[i, j].imag ** 2
    target = 1e-32 * total + 1e-300

    sweeps = 0
    while sweeps < JACOBI_MAX_SWEEPS:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * (a[i, j].real ** 2 + a[i, j].imag ** 2)
        if off <= target:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = apq / r
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # W = diag(1, conj(phase)) @ [[c, s], [-s, c]]; A <- W^H A W
                w00 = c + 0j
                w01 = s + 0j
                w10 = -s * np.conj(phase)
                w11 = c * np.conj(phase)

                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = colp * w00 + colq * w10
                a[:, q] = colp * w01 + colq * w11
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = np.conj(w00) * rowp + np.conj(w10) * rowq
                a[q, :] = np.conj(w01) * rowp + np.conj(w11) * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = vp * w00 + vq * w10
                v[:, q] = vp * w01 + vq * w11

    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, sweeps


@maybe_njit
def averaged_orbit(superop, x0, dim, tol, max_iter):
    """Iterate ``x <- (x + S x) / 2`` from ``x0`` until ``S x`` is close to ``x``.

    ``x0`` is a column-stacked ``dim x dim`` operator. Stops as soon as
    ``sqrt(dim) * ||S x - x||_F <= tol``, which bounds the trace-norm residual
    by ``tol``. Returns ``(x, iterations, bound)`` for the best iterate seen.
    """
    x = x0.astype(np.complex128).copy()
    best = x.copy()
    best_bound = np.inf
    scale = np.sqrt(dim)
    k = 0
    while k < max_iter:
        y = superop @ x
        diff = y - x
        bound = scale * np.sqrt(np.sum(diff.real ** 2 + diff.imag ** 2))
        if bound < best_bound:
            best_bound = bound
            best[:] = x
        if bound <= tol:
            return x, k, bound
        x = 0.5 * (x + y)
        k += 1
    return best, k, best_bound
