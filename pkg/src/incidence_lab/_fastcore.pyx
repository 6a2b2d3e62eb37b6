# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot inner loops.

Same contracts as _purecore; callers must pre-check the int64 overflow
bound (see _kernels.eval_fits_int64) before dispatching here.
"""

from libc.stdlib cimport malloc, free


def batch_eval_is_zero_i64(long[:] ti, long[:] tj, long[:] tk, long long[:] tc,
                           long long[:] px, long long[:] py, long long[:] pz,
                           long long mod):
    """Flags points where the homogeneous form vanishes. mod=0 -> plain Z."""
    cdef Py_ssize_t nt = ti.shape[0]
    cdef Py_ssize_t np_ = px.shape[0]
    cdef Py_ssize_t n, t
    cdef long mi = 0, mj = 0, mk = 0
    cdef long long acc, X, Y, Z
    cdef int i
    for t in range(nt):
        if ti[t] > mi: mi = ti[t]
        if tj[t] > mj: mj = tj[t]
        if tk[t] > mk: mk = tk[t]
    cdef long long *xs = <long long *> malloc((mi + 1) * sizeof(long long))
    cdef long long *ys = <long long *> malloc((mj + 1) * sizeof(long long))
    cdef long long *zs = <long long *> malloc((mk + 1) * sizeof(long long))
    if xs == NULL or ys == NULL or zs == NULL:
        if xs != NULL: free(xs)
        if ys != NULL: free(ys)
        if zs != NULL: free(zs)
        raise MemoryError()
    out = [False] * np_
    try:
        for n in range(np_):
            X = px[n]; Y = py[n]; Z = pz[n]
            xs[0] = 1; ys[0] = 1; zs[0] = 1
            if mod == 0:
                for i in range(1, mi + 1): xs[i] = xs[i - 1] * X
                for i in range(1, mj + 1): ys[i] = ys[i - 1] * Y
                for i in range(1, mk + 1): zs[i] = zs[i - 1] * Z
                acc = 0
                for t in range(nt):
                    acc += tc[t] * xs[ti[t]] * ys[tj[t]] * zs[tk[t]]
                if acc == 0:
                    out[n] = True
            else:
                for i in range(1, mi + 1): xs[i] = xs[i - 1] * X % mod
                for i in range(1, mj + 1): ys[i] = ys[i - 1] * Y % mod
                for i in range(1, mk + 1): zs[i] = zs[i - 1] * Z % mod
                acc = 0
                for t in range(nt):
                    acc += tc[t] * (xs[ti[t]] * ys[tj[t]] % mod) % mod * zs[tk[t]] % mod
                if acc % mod == 0:
                    out[n] = True
    finally:
        free(xs); free(ys); free(zs)
    return out


def fp_row_reduce(rows, long long p):
    """Row echelon over F_p with int64 arithmetic; mirrors _purecore."""
    cdef Py_ssize_t n = len(rows)
    cdef Py_ssize_t c = len(rows[0]) if n else 0
    cdef Py_ssize_t row = 0, col, r, piv, j
    cdef long long inv, f, v
    work = [[<long long> (e % p) for e in rr] for rr in rows]
    pivots = []
    for col in range(c):
        piv = -1
        for r in range(row, n):
            if work[r][col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        work[row], work[piv] = work[piv], work[row]
        inv = _inv_mod(work[row][col], p)
        cur = work[row]
        for j in range(c):
            cur[j] = cur[j] * inv % p
        for r in range(n):
            if r != row and work[r][col] != 0:
                f = work[r][col]
                other = work[r]
                for j in range(c):
                    v = (other[j] - f * cur[j]) % p
                    other[j] = v if v >= 0 else v + p
        pivots.append(col)
        row += 1
        if row == n:
            break
    return len(pivots), work, pivots


cdef long long _inv_mod(long long a, long long p):
    cdef long long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt; t = newt; newt = tmp
        tmp = r - q * newr; r = newr; newr = tmp
    if t < 0:
        t += p
    return t
