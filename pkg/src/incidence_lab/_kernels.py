"""Kernel dispatch: compiled fast paths when safe, pure Python otherwise.

The compiled extension works in int64; eval_fits_int64 computes an exact
upper bound on every intermediate value, so results are always exact:
oversized inputs simply take the arbitrary-precision path.
"""

from __future__ import annotations

from . import _purecore

try:
    from . import _fastcore
    HAVE_FASTCORE = True
except ImportError:
    _fastcore = None
    HAVE_FASTCORE = False

_I64_LIMIT = 1 << 62


def eval_fits_int64(terms, pts, mod=None) -> bool:
    """Exact overflow pre-check for the compiled evaluation kernel."""
    if not terms or not pts:
        return True
    if mod is not None:
        # accumulator adds nt values < mod^2 after per-term reduction
        return mod * mod * (len(terms) + 1) < _I64_LIMIT and \
            max(abs(c) for *_e, c in terms) < _I64_LIMIT // (mod * mod + 1)
    mx = max(abs(p[0]) for p in pts) or 1
    my = max(abs(p[1]) for p in pts) or 1
    mz = max(abs(p[2]) for p in pts) or 1
    bound = 0
    for i, j, k, c in terms:
        bound += abs(c) * mx ** i * my ** j * mz ** k
        if bound >= _I64_LIMIT:
            return False
    return True


def batch_eval_is_zero(terms, pts, mod=None):
    """Exact zero-flags of a homogeneous integer form at integer triples."""
    if HAVE_FASTCORE and terms and pts and eval_fits_int64(terms, pts, mod):
        import numpy as np
        ti = np.array([t[0] for t in terms], dtype=np.int_)
        tj = np.array([t[1] for t in terms], dtype=np.int_)
        tk = np.array([t[2] for t in terms], dtype=np.int_)
        tc = np.array([t[3] for t in terms], dtype=np.int64)
        px = np.array([p[0] for p in pts], dtype=np.int64)
        py = np.array([p[1] for p in pts], dtype=np.int64)
        pz = np.array([p[2] for p in pts], dtype=np.int64)
        return _fastcore.batch_eval_is_zero_i64(ti, tj, tk, tc, px, py, pz,
                                                mod or 0)
    return _purecore.batch_eval_is_zero(terms, pts, mod=mod)


def fp_row_reduce(rows, p):
    """Row echelon over F_p; compiled when the modulus fits the int64 budget."""
    if HAVE_FASTCORE and rows and p * p * (len(rows[0]) + 2) < _I64_LIMIT:
        return _fastcore.fp_row_reduce(rows, p)
    return _purecore.fp_row_reduce(rows, p)
