# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numerical kernels: the hot inner loops of the package.

Mirrors the surface of `_kernels_py` (see that module for semantics). The
Hermitian eigensolver is a cyclic complex Jacobi iteration: deterministic,
accurate at the dense sizes used here (<= 256), and free of any
non-Hermitian machinery.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport NAN, cos, fabs, sin, sqrt

cnp.import_array()

name = "compiled"

CLIP_FLOOR = -1e-10
F1_SUPPORT = (0, 3, 12, 15)

cdef double _FLOOR = -1e-10

# error codes set by the cdef kernels
cdef enum:
    ERR_SUPPORT = 1
    ERR_FLOOR = 2


# ---------------------------------------------------------------------------
# cyclic Jacobi eigensolver for complex Hermitian matrices

cdef int _jacobi(double complex* a, double complex* v, int n, bint want_v) noexcept nogil:
    """Diagonalize Hermitian a (row-major, overwritten); accumulate V."""
    cdef int sweep, p, q, k, i
    cdef double anorm = 0.0, off, r, tau, t, c, s, app, aqq
    cdef double complex apq, phase, xp, xq
    for i in range(n * n):
        if abs(a[i]) > anorm:
            anorm = abs(a[i])
    if anorm == 0.0:
        return 0
    for sweep in range(100):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p * n + q]) > off:
                    off = abs(a[p * n + q])
        if off <= 1e-15 * anorm:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p * n + q]
                r = abs(apq)
                # threshold rotation: elements already below the sweep
                # stopping level cannot change convergence
                if r <= 1e-16 * anorm:
                    continue
                app = a[p * n + p].real
                aqq = a[q * n + q].real
                phase = apq / r
                if fabs(app - aqq) < 1e-300:
                    t = 1.0
                else:
                    tau = (app - aqq) / (2.0 * r)
                    t = -1.0 / (fabs(tau) + sqrt(1.0 + tau * tau))
                    if tau < 0.0:
                        t = -t
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                # A <- A G
                for k in range(n):
                    xp = a[k * n + p]
                    xq = a[k * n + q]
                    a[k * n + p] = c * xp - s * phase.conjugate() * xq
                    a[k * n + q] = s * phase * xp + c * xq
                # A <- G^H A
                for k in range(n):
                    xp = a[p * n + k]
                    xq = a[q * n + k]
                    a[p * n + k] = c * xp - s * phase * xq
                    a[q * n + k] = s * phase.conjugate() * xp + c * xq
                a[p * n + q] = 0.0
                a[q * n + p] = 0.0
                a[p * n + p] = app - t * r
                a[q * n + q] = aqq + t * r
                if want_v:
                    for k in range(n):
                        xp = v[k * n + p]
                        xq = v[k * n + q]
                        v[k * n + p] = c * xp - s * phase.conjugate() * xq
                        v[k * n + q] = s * phase * xp + c * xq
    return -1


def eigh(a):
    """Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian matrix."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] work = np.array(a, dtype=np.complex128, order="C")
    cdef int n = work.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] vecs = np.eye(n, dtype=np.complex128)
    with nogil:
        _jacobi(<double complex*> work.data, <double complex*> vecs.data, n, True)
    w = np.diagonal(work).real.copy()
    order = np.argsort(-w, kind="stable")
    return w[order], np.ascontiguousarray(vecs[:, order])


def eigvalsh(a):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] work = np.array(a, dtype=np.complex128, order="C")
    cdef int n = work.shape[0]
    with nogil:
        _jacobi(<double complex*> work.data, NULL, n, False)
    w = np.diagonal(work).real.copy()
    return w[np.argsort(-w, kind="stable")]


# ---------------------------------------------------------------------------
# partial traces

cdef void _offsets(int n, const int* keep, int nk, int* offk, int* offr) noexcept nogil:
    cdef int nr = n - nk, i, j, pos, used, kept
    cdef int rest[8]
    used = 0
    for pos in range(n):
        kept = 0
        for j in range(nk):
            if keep[j] == pos:
                kept = 1
                break
        if not kept:
            rest[used] = pos
            used += 1
    for i in range(1 << nk):
        offk[i] = 0
        for j in range(nk):
            if (i >> (nk - 1 - j)) & 1:
                offk[i] |= 1 << (n - 1 - keep[j])
    for i in range(1 << nr):
        offr[i] = 0
        for j in range(nr):
            if (i >> (nr - 1 - j)) & 1:
                offr[i] |= 1 << (n - 1 - rest[j])


def ptrace_pure(amps, int n, keep):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] psi = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef int nk = len(keep), j, ia, ib, ir
    cdef int ckeep[8]
    cdef int offk[256]
    cdef int offr[256]
    for j in range(nk):
        ckeep[j] = keep[j]
    cdef int dim = 1 << nk, rdim = 1 << (n - nk)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.zeros((dim, dim), dtype=np.complex128)
    cdef double complex* pv = <double complex*> psi.data
    cdef double complex* po = <double complex*> out.data
    with nogil:
        _offsets(n, ckeep, nk, offk, offr)
        for ia in range(dim):
            for ib in range(dim):
                for ir in range(rdim):
                    po[ia * dim + ib] = po[ia * dim + ib] + pv[offk[ia] + offr[ir]] * pv[offk[ib] + offr[ir]].conjugate()
    return out


def ptrace_dm(rho, int n, keep):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] r = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef int nk = len(keep), j, ia, ib, ir
    cdef int ckeep[8]
    cdef int offk[256]
    cdef int offr[256]
    for j in range(nk):
        ckeep[j] = keep[j]
    cdef int dim = 1 << nk, rdim = 1 << (n - nk), full = 1 << n
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.zeros((dim, dim), dtype=np.complex128)
    cdef double complex* pr = <double complex*> r.data
    cdef double complex* po = <double complex*> out.data
    with nogil:
        _offsets(n, ckeep, nk, offk, offr)
        for ia in range(dim):
            for ib in range(dim):
                for ir in range(rdim):
                    po[ia * dim + ib] = po[ia * dim + ib] + pr[(offk[ia] + offr[ir]) * full + offk[ib] + offr[ir]]
    return out


# ---------------------------------------------------------------------------
# concurrence and tangles

cdef double _concurrence4(double complex* rho, int* err) noexcept nogil:
    """Wootters concurrence via the tau matrix T = X^T (sy x sy) X.

    X holds the rank-revealing eigendecomposition columns sqrt(w_i) v_i;
    the Wootters numbers are the singular values of T, read off the
    Hermitian product T^H T. Rank-deficient inputs stay exact because T
    has only rank(rho) rows.
    """
    cdef double complex a[16]
    cdef double complex v[16]
    cdef double complex x[16]
    cdef double complex tmat[16]
    cdef double complex h[16]
    cdef double w[4]
    cdef double sig, sigsum, sigmax, wmax, wmin, root
    cdef double ysign[4]
    cdef int i, j, k, r
    cdef double complex acc
    ysign[0] = -1.0; ysign[1] = 1.0; ysign[2] = 1.0; ysign[3] = -1.0
    for i in range(16):
        a[i] = rho[i]
        v[i] = 0.0
    for i in range(4):
        v[i * 4 + i] = 1.0
    _jacobi(a, v, 4, True)
    wmax = 0.0
    wmin = 0.0
    for i in range(4):
        w[i] = a[i * 4 + i].real
        if w[i] > wmax:
            wmax = w[i]
        if w[i] < wmin:
            wmin = w[i]
    if wmin < _FLOOR:
        err[0] = ERR_FLOOR
        return NAN
    # columns of X: sqrt(w) v over eigenvalues above the relative rank cut
    r = 0
    for i in range(4):
        if w[i] > 1e-14 * wmax:
            root = sqrt(w[i])
            for k in range(4):
                x[k * 4 + r] = root * v[k * 4 + i]
            r += 1
    if r == 0:
        return 0.0
    # T_ij = sum_k X[k,i] ysign[k] X[3-k,j]  (complex symmetric, r x r)
    for i in range(r):
        for j in range(r):
            acc = 0.0
            for k in range(4):
                acc = acc + x[k * 4 + i] * ysign[k] * x[(3 - k) * 4 + j]
            tmat[i * 4 + j] = acc
    # h = T^H T, contiguous r x r
    for i in range(r):
        for j in range(r):
            acc = 0.0
            for k in range(r):
                acc = acc + tmat[k * 4 + i].conjugate() * tmat[k * 4 + j]
            h[i * r + j] = acc
    _jacobi(h, NULL, r, False)
    sigsum = 0.0
    sigmax = 0.0
    wmin = 0.0
    for i in range(r):
        sig = h[i * r + i].real
        if sig < wmin:
            wmin = sig
        sig = sqrt(sig) if sig > 0.0 else 0.0
        sigsum += sig
        if sig > sigmax:
            sigmax = sig
    if wmin < _FLOOR:
        err[0] = ERR_FLOOR
        return NAN
    sig = 2.0 * sigmax - sigsum
    return sig if sig > 0.0 else 0.0


def concurrence(rho):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] r = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef int err = 0
    cdef double out
    with nogil:
        out = _concurrence4(<double complex*> r.data, &err)
    if err == ERR_FLOOR:
        raise ValueError("eigenvalue below clip floor -1e-10")
    return out


cdef double _linear_entropy_c(double complex* psi, int size, int mask) noexcept nogil:
    cdef double p0 = 0.0, p1 = 0.0
    cdef double complex coh = 0.0
    cdef int i
    for i in range(size):
        if i & mask:
            p1 += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
        else:
            p0 += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
            coh = coh + psi[i] * psi[i | mask].conjugate()
    return 4.0 * (p0 * p1 - (coh.real * coh.real + coh.imag * coh.imag))


def linear_entropy_pure(amps, int n, int k):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] psi = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef double out
    with nogil:
        out = _linear_entropy_c(<double complex*> psi.data, 1 << n, 1 << (n - 1 - k))
    return out


cdef double _three_tangle8(double complex* psi, int* err) noexcept nogil:
    """CKW residual of a pure 3-qubit state.

    The traced qubit's amplitude slices are a natural rank-2 decomposition
    of each reduced matrix, so the squared concurrences come straight from
    the 2x2 tau matrices: C^2 = ||T||_F^2 - 2|det T|, no eigensolves.
    """
    cdef double ysign[4]
    cdef double complex t00, t01, t11, det
    cdef double tau, c2ab, c2ac, frob, t
    cdef int ab, a, c
    ysign[0] = -1.0; ysign[1] = 1.0; ysign[2] = 1.0; ysign[3] = -1.0
    tau = _linear_entropy_c(psi, 8, 4)
    # concurrence of rho_12: rows (q1, q2), columns the traced qubit 3
    t00 = 0.0; t01 = 0.0; t11 = 0.0
    for ab in range(4):
        t00 = t00 + ysign[ab] * psi[ab * 2] * psi[(3 - ab) * 2]
        t01 = t01 + ysign[ab] * psi[ab * 2] * psi[(3 - ab) * 2 + 1]
        t11 = t11 + ysign[ab] * psi[ab * 2 + 1] * psi[(3 - ab) * 2 + 1]
    det = t00 * t11 - t01 * t01
    frob = (t00.real * t00.real + t00.imag * t00.imag
            + 2.0 * (t01.real * t01.real + t01.imag * t01.imag)
            + t11.real * t11.real + t11.imag * t11.imag)
    c2ab = frob - 2.0 * sqrt(det.real * det.real + det.imag * det.imag)
    if c2ab < 0.0:
        c2ab = 0.0
    # concurrence of rho_13: rows (q1, q3), columns the traced qubit 2
    t00 = 0.0; t01 = 0.0; t11 = 0.0
    for a in range(2):
        for c in range(2):
            t00 = t00 + ysign[a * 2 + c] * psi[a * 4 + c] * psi[(1 - a) * 4 + (1 - c)]
            t01 = t01 + ysign[a * 2 + c] * psi[a * 4 + c] * psi[(1 - a) * 4 + 2 + (1 - c)]
            t11 = t11 + ysign[a * 2 + c] * psi[a * 4 + 2 + c] * psi[(1 - a) * 4 + 2 + (1 - c)]
    det = t00 * t11 - t01 * t01
    frob = (t00.real * t00.real + t00.imag * t00.imag
            + 2.0 * (t01.real * t01.real + t01.imag * t01.imag)
            + t11.real * t11.real + t11.imag * t11.imag)
    c2ac = frob - 2.0 * sqrt(det.real * det.real + det.imag * det.imag)
    if c2ac < 0.0:
        c2ac = 0.0
    t = tau - c2ab - c2ac
    if t < _FLOOR:
        err[0] = ERR_FLOOR
        return NAN
    return t if t > 0.0 else 0.0


def three_tangle_pure(amps):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] psi = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef int err = 0
    cdef double out
    with nogil:
        out = _three_tangle8(<double complex*> psi.data, &err)
    if err == ERR_FLOOR:
        raise ValueError("three-tangle below clip floor")
    return out


cdef double _f1_tau4_16(double complex* psi, int* err) noexcept nogil:
    cdef double total = 0.0, on = 0.0
    cdef int i, k
    cdef int support[4]
    cdef double complex prod
    support[0] = 0; support[1] = 3; support[2] = 12; support[3] = 15
    for i in range(16):
        total += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
    for i in range(4):
        k = support[i]
        on += psi[k].real * psi[k].real + psi[k].imag * psi[k].imag
    if total - on > 1e-9:
        err[0] = ERR_SUPPORT
        return NAN
    prod = psi[0] * (-psi[15]) + psi[3] * psi[12]
    return 4.0 * (prod.real * prod.real + prod.imag * prod.imag)


def f1_tau4_pure(amps):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] psi = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef int err = 0
    cdef double out
    with nogil:
        out = _f1_tau4_16(<double complex*> psi.data, &err)
    if err == ERR_SUPPORT:
        raise ValueError("amplitude support outside the 1D-family kets")
    return out


# ---------------------------------------------------------------------------
# roof objective + pattern search

cdef void _hsphere(int k, const double* ang, const double* ph, double complex* out) noexcept nogil:
    cdef double run = 1.0, c
    cdef int j
    if k == 1:
        out[0] = 1.0
        return
    for j in range(k - 1):
        c = cos(ang[j])
        if j == 0:
            out[0] = c
        else:
            out[j] = run * c * (cos(ph[j - 1]) + 1j * sin(ph[j - 1]))
        run *= sin(ang[j])
    out[k - 1] = run * (cos(ph[k - 2]) + 1j * sin(ph[k - 2]))


cdef void _isometry_c(int m, const double* x, double complex* U) noexcept nogil:
    cdef double complex u[4]
    cdef double complex y[3]
    cdef double complex w[4]
    cdef double complex dot, ephase
    cdef double wn, s, chi
    cdef int i
    _hsphere(m, x, x + (m - 1), u)
    _hsphere(m - 1, x + (2 * m - 2), x + (3 * m - 4), y)
    chi = x[4 * m - 6]
    s = 1.0 if u[0].real >= 0.0 else -1.0
    for i in range(m):
        w[i] = u[i]
    w[0] = w[0] + s
    wn = 2.0 * (1.0 + fabs(u[0].real))
    dot = 0.0
    for i in range(1, m):
        dot = dot + w[i].conjugate() * y[i - 1]
    ephase = cos(chi) + 1j * sin(chi)
    for i in range(m):
        U[i * 2] = u[i]
        if i >= 1:
            U[i * 2 + 1] = ephase * (y[i - 1] - w[i] * (2.0 / wn) * dot)
        else:
            U[i * 2 + 1] = ephase * (-w[i] * (2.0 / wn) * dot)


cdef double _objective_c(const double complex* basis, int d, int m, int mid,
                         const double* x, int* err) noexcept nogil:
    cdef double complex U[8]
    cdef double complex vec[16]
    cdef double total = 0.0, p, val, inv
    cdef int row, i
    _isometry_c(m, x, U)
    for row in range(m):
        p = 0.0
        for i in range(d):
            vec[i] = U[row * 2].conjugate() * basis[i * 2] + U[row * 2 + 1].conjugate() * basis[i * 2 + 1]
            p += vec[i].real * vec[i].real + vec[i].imag * vec[i].imag
        if p < 1e-14:
            continue
        inv = 1.0 / sqrt(p)
        for i in range(d):
            vec[i] = vec[i] * inv
        if mid == 0:
            val = _three_tangle8(vec, err)
            if err[0]:
                err[0] = 0
                return NAN
        else:
            val = _f1_tau4_16(vec, err)
            if err[0]:
                err[0] = 0
                return NAN
        total += p * val
    return total


def roof_objective(basis, int m, int measure_id, x):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] b = np.ascontiguousarray(basis, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef int d = b.shape[0], err = 0
    cdef double out
    with nogil:
        out = _objective_c(<double complex*> b.data, d, m, measure_id, <double*> xv.data, &err)
    return out


cdef inline void _copy_vec(const double* src, double* dst, int dim) noexcept nogil:
    cdef int j
    for j in range(dim):
        dst[j] = src[j]


cdef double _search_c(const double complex* basis, int d, int m, int mid,
                      double* x, int dim, double step0, double tol, int max_iter) noexcept nogil:
    cdef double xt[11]
    cdef double f, ft, step
    cdef int i, evals, improved, sgn, err = 0
    f = _objective_c(basis, d, m, mid, x, &err)
    evals = 1
    step = step0
    while step > tol and evals < max_iter:
        improved = 0
        for i in range(dim):
            for sgn in range(2):
                _copy_vec(x, xt, dim)
                xt[i] = x[i] + (step if sgn == 0 else -step)
                ft = _objective_c(basis, d, m, mid, xt, &err)
                evals += 1
                if ft < f:
                    _copy_vec(xt, x, dim)
                    f = ft
                    improved = 1
                    break
        if improved == 0:
            step *= 0.5
    return f


def roof_search(basis, int m, int measure_id, x0, double step0, double tol, int max_iter):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] b = np.ascontiguousarray(basis, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x = np.array(x0, dtype=np.float64)
    cdef int d = b.shape[0], dim = x.shape[0]
    cdef double f
    with nogil:
        f = _search_c(<double complex*> b.data, d, m, measure_id, <double*> x.data, dim, step0, tol, max_iter)
    return f, x


def isometry_from_params(int m, x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.empty((m, 2), dtype=np.complex128)
    _isometry_c(m, <double*> xv.data, <double complex*> out.data)
    return out
