"""Pure-Python fallback kernels (arbitrary-precision, always correct)."""

from __future__ import annotations


def batch_eval_is_zero(terms, pts, mod=None):
    """Evaluate a homogeneous integer form at integer triples; flag the zeros.

    terms: [(i, j, k, c)] exponent triples with integer coefficients.
    pts: [(X, Y, Z)] integer triples.
    mod: optional prime; evaluation happens in Z/mod.
    """
    if not terms:
        return [True] * len(pts)
    mi = max(t[0] for t in terms)
    mj = max(t[1] for t in terms)
    mk = max(t[2] for t in terms)
    out = []
    if mod is None:
        for X, Y, Z in pts:
            xs = _powers(X, mi)
            ys = _powers(Y, mj)
            zs = _powers(Z, mk)
            acc = 0
            for i, j, k, c in terms:
                acc += c * xs[i] * ys[j] * zs[k]
            out.append(acc == 0)
    else:
        for X, Y, Z in pts:
            xs = _powers_mod(X, mi, mod)
            ys = _powers_mod(Y, mj, mod)
            zs = _powers_mod(Z, mk, mod)
            acc = 0
            for i, j, k, c in terms:
                acc += c * xs[i] * ys[j] * zs[k]
            out.append(acc % mod == 0)
    return out


def _powers(v, n):
    out = [1]
    for _ in range(n):
        out.append(out[-1] * v)
    return out


def _powers_mod(v, n, mod):
    out = [1]
    for _ in range(n):
        out.append(out[-1] * v % mod)
    return out


def fp_row_reduce(rows, p):
    """In-place-free row echelon over F_p; returns (rank, reduced_rows, pivots)."""
    rows = [list(r) for r in rows]
    n = len(rows)
    c = len(rows[0]) if rows else 0
    pivots = []
    row = 0
    for col in range(c):
        piv = None
        for r in range(row, n):
            if rows[r][col] % p:
                piv = r
                break
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        inv = pow(rows[row][col], p - 2, p)
        rows[row] = [e * inv % p for e in rows[row]]
        for r in range(n):
            if r != row and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    return len(pivots), rows, pivots
