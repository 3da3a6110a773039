"""Exact rational scalars and the dense linear-algebra kernel.

Every quantity in the package is a :class:`gmpy2.mpq`.  Vectors, matrices and
higher tensors are numpy ``object`` arrays holding ``mpq`` entries, so numpy
does the bookkeeping while gmpy2 does the arithmetic.  Nothing here ever
rounds.

Row reduction is fraction free: each row is scaled to integers and eliminated
with Bareiss' division-exact update, and only the final echelon rows are
turned back into rationals.
"""
from __future__ import annotations

from functools import reduce
from math import lcm

import gmpy2
import numpy as np

Q = gmpy2.mpq
ZERO = Q(0)
ONE = Q(1)


class DimensionError(ValueError):
    """Operand shapes do not fit together."""


def parse_scalar(text) -> gmpy2.mpq:
    """Read ``"p/q"``, ``"p"``, an int or an mpq/Fraction as an exact rational."""
    if isinstance(text, str):
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            return Q(int(num), int(den))
        return Q(int(text))
    if isinstance(text, float):
        raise TypeError("floats are not accepted as exact scalars")
    return Q(text)


def format_scalar(x) -> str:
    """Canonical lowest-terms string, ``"p"`` or ``"p/q"``."""
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def qarray(data) -> np.ndarray:
    """Object array of mpq from nested sequences (ints, strings, mpq...)."""
    arr = np.array(data, dtype=object)
    if arr.ndim == 0:
        return np.array(parse_scalar(arr.item()), dtype=object)
    flat = [parse_scalar(v) if isinstance(v, str) else Q(v) for v in arr.flat]
    out = np.empty(arr.shape, dtype=object)
    out.flat[:] = flat
    return out


def zeros(*shape) -> np.ndarray:
    if len(shape) == 1 and isinstance(shape[0], tuple):
        shape = shape[0]
    out = np.empty(shape, dtype=object)
    out.fill(ZERO)
    return out


def eye(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = ONE
    return out


def unit(n: int, i: int) -> np.ndarray:
    v = zeros(n)
    v[i] = ONE
    return v


def is_zero(arr) -> bool:
    return not any(x != 0 for x in np.asarray(arr, dtype=object).flat)


def first_nonzero(arr):
    """Index tuple of the first nonzero entry, or None."""
    arr = np.asarray(arr, dtype=object)
    for idx in np.ndindex(arr.shape):
        if arr[idx] != 0:
            return idx
    return None


def first_difference(a, b):
    """Index tuple of the first entry where ``a`` and ``b`` differ, or None."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return first_nonzero(a - b)


def _common_denominator(arr: np.ndarray) -> int:
    dens = {Q(x).denominator for x in arr.flat}
    return reduce(lcm, dens, 1)


def _scaled_ints(arr: np.ndarray):
    den = _common_denominator(arr)
    out = np.empty(arr.shape, dtype=object)
    out.flat[:] = [int(Q(x) * den) for x in arr.flat]
    return out, den


def qeinsum(subscripts: str, *operands) -> np.ndarray:
    """Exact ``einsum`` over mpq arrays.

    Each operand is rescaled to Python integers by its common denominator,
    contracted with integer arithmetic and divided back at the end.
    """
    ints = []
    den = 1
    for op in operands:
        op = np.asarray(op, dtype=object)
        iop, d = _scaled_ints(op)
        ints.append(iop)
        den *= d
    # pairwise contraction order; a single fused loop is far slower on objects
    res = np.einsum(subscripts, *ints, optimize="greedy" if len(ints) > 2 else False)
    res = np.asarray(res, dtype=object)
    out = np.empty(res.shape, dtype=object)
    out.flat[:] = [Q(int(v), den) for v in res.flat]
    return out


def matmul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    if a.ndim == 1 and b.ndim == 1:
        return qeinsum("i,i->", a, b)
    if a.ndim == 1:
        return qeinsum("i,ij->j", a, b)
    if b.ndim == 1:
        return qeinsum("ij,j->i", a, b)
    return qeinsum("ij,jk->ik", a, b)


def _int_row(row) -> list[int]:
    d = reduce(lcm, (Q(x).denominator for x in row), 1)
    return [int(Q(x) * d) for x in row]


def _bareiss(rows: list[list[int]], ncols: int):
    """Fraction-free forward elimination (in place).

    Returns the pivot columns; rows[:len(pivots)] is an integer echelon form.
    """
    m = len(rows)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, m):
            ri = rows[i]
            f = ri[c]
            rr = rows[r]
            for j in range(c, ncols):
                # exact: Sylvester's identity guarantees divisibility by prev
                ri[j] = (piv * ri[j] - f * rr[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def rank(A) -> int:
    A = np.asarray(A, dtype=object)
    if A.size == 0:
        return 0
    rows = [_int_row(r) for r in A]
    return len(_bareiss(rows, A.shape[1]))


def det(A) -> gmpy2.mpq:
    A = np.asarray(A, dtype=object)
    n, k = A.shape
    if n != k:
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return ONE
    scale = Q(1)
    rows = []
    for r in A:
        d = reduce(lcm, (Q(x).denominator for x in r), 1)
        scale /= d
        rows.append([int(Q(x) * d) for x in r])
    sign = 1
    prev = 1
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return ZERO
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            sign = -sign
        piv = rows[c][c]
        for i in range(c + 1, n):
            f = rows[i][c]
            for j in range(c, n):
                rows[i][j] = (piv * rows[i][j] - f * rows[c][j]) // prev
        prev = piv
    return Q(sign * rows[n - 1][n - 1]) * scale


def rref(A):
    """Canonical reduced row echelon form; returns ``(R, pivots)``.

    Zero rows are dropped, so ``R`` has exactly ``rank(A)`` rows.
    """
    A = np.asarray(A, dtype=object)
    if A.ndim != 2:
        raise DimensionError("rref expects a matrix")
    ncols = A.shape[1]
    if A.shape[0] == 0:
        return zeros(0, ncols), []
    rows = [_int_row(r) for r in A]
    pivots = _bareiss(rows, ncols)
    R = [[Q(x) for x in rows[i]] for i in range(len(pivots))]
    for i in reversed(range(len(pivots))):
        c = pivots[i]
        piv = R[i][c]
        R[i] = [x / piv for x in R[i]]
        for k in range(i):
            f = R[k][c]
            if f != 0:
                R[k] = [a - f * b for a, b in zip(R[k], R[i])]
    out = zeros(len(pivots), ncols)
    for i, row in enumerate(R):
        out[i, :] = row
    return out, pivots


def kernel(A) -> np.ndarray:
    """Basis of the null space of ``A`` as rows (canonical, one per free column)."""
    A = np.asarray(A, dtype=object)
    ncols = A.shape[1]
    R, pivots = rref(A)
    free = [c for c in range(ncols) if c not in pivots]
    K = zeros(len(free), ncols)
    for t, f in enumerate(free):
        K[t, f] = ONE
        for i, c in enumerate(pivots):
            K[t, c] = -R[i, f]
    return K


def solve_linear(A, b):
    """Solve ``A x = b`` exactly.

    Returns ``None`` when inconsistent, else ``(x, K)`` with ``x`` a particular
    solution (free variables set to zero) and ``K`` a kernel basis (rows).
    """
    A = np.asarray(A, dtype=object)
    b = np.asarray(b, dtype=object)
    if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.shape[0]:
        raise DimensionError(
            f"cannot solve {A.shape} system against right-hand side {b.shape}"
        )
    ncols = A.shape[1]
    aug = np.concatenate([A, b.reshape(-1, 1)], axis=1) if A.shape[0] else zeros(0, ncols + 1)
    R, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = zeros(ncols)
    for i, c in enumerate(pivots):
        x[c] = R[i, ncols]
    return x, kernel(A) if A.shape[0] else eye(ncols)


def inverse(A) -> np.ndarray:
    A = np.asarray(A, dtype=object)
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionError("inverse of a non-square matrix")
    R, pivots = rref(np.concatenate([A, eye(n)], axis=1))
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:].copy()


def is_symmetric(F) -> bool:
    F = np.asarray(F, dtype=object)
    return F.ndim == 2 and F.shape[0] == F.shape[1] and is_zero(F - F.T)


def signature(F):
    """Inertia ``(positive, negative, zero)`` of a symmetric form.

    Diagonalises by symmetric row/column operations over the rationals, so no
    eigenvalues are needed.
    """
    F = np.array(F, dtype=object)
    if not is_symmetric(F):
        raise DimensionError("signature needs a square symmetric matrix")
    n = F.shape[0]
    M = [[Q(x) for x in row] for row in F]
    pos = neg = 0
    active = list(range(n))
    while active:
        k = next((i for i in active if M[i][i] != 0), None)
        if k is None:
            pair = next(
                ((i, j) for i in active for j in active if i < j and M[i][j] != 0),
                None,
            )
            if pair is None:
                break
            i, j = pair
            # x_i += x_j makes the (i,i) entry 2*M[i][j] != 0
            for t in range(n):
                M[i][t] += M[j][t]
            for t in range(n):
                M[t][i] += M[t][j]
            k = i
        d = M[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in active:
            if i == k:
                continue
            f = M[i][k] / d
            if f != 0:
                for t in range(n):
                    M[i][t] -= f * M[k][t]
                for t in range(n):
                    M[t][i] -= f * M[t][k]
        active.remove(k)
    return pos, neg, n - pos - neg


def block_diag(*blocks) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = zeros(n, m)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def to_strings(arr):
    """Nested lists of canonical rational strings."""
    arr = np.asarray(arr, dtype=object)
    if arr.ndim == 0:
        return format_scalar(arr.item())
    return [to_strings(x) for x in arr]


__all__ = [
    "Q",
    "ZERO",
    "ONE",
    "DimensionError",
    "parse_scalar",
    "format_scalar",
    "qarray",
    "zeros",
    "eye",
    "unit",
    "is_zero",
    "first_nonzero",
    "first_difference",
    "qeinsum",
    "matmul",
    "rank",
    "det",
    "rref",
    "kernel",
    "solve_linear",
    "inverse",
    "is_symmetric",
    "signature",
    "block_diag",
    "to_strings",
]
