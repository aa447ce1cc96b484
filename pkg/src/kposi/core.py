"""Dense matrices, index sequences, minors and multiplicative compounds.

Index sequences are tuples of 0-based indices.  Everything that is indexed
by order-k sequences (compound rows/columns, wedge coordinates) uses the
lexicographic order produced by :func:`enumerate_sequences`.
"""
from __future__ import annotations

import itertools
from math import comb

import numpy as np

from .errors import CapacityError, DimensionError

#: Compounds with C(n, k) above this are refused.
SIZE_CAP = 200_000


def as_matrix(A, name="A") -> np.ndarray:
    """Validate and convert to a 2-D finite float64 array (a copy is not forced)."""
    M = np.asarray(A, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise DimensionError(f"{name} must be a nonempty 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise DimensionError(f"{name} contains NaN or Inf entries")
    return M


def as_vector(y, name="y") -> np.ndarray:
    v = np.asarray(y, dtype=np.float64)
    if v.ndim != 1 or v.size < 1:
        raise DimensionError(f"{name} must be a nonempty 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DimensionError(f"{name} contains NaN or Inf entries")
    return v


def _check_cap(n, k, cap):
    size = comb(n, k)
    if size > cap:
        raise CapacityError(f"C({n},{k}) = {size} exceeds the size cap {cap}")
    return size


def enumerate_sequences(k: int, n: int, cap: int | None = None) -> list[tuple[int, ...]]:
    """All strictly increasing k-tuples from range(n), in lexicographic order.

    >>> enumerate_sequences(2, 3)
    [(0, 1), (0, 2), (1, 2)]
    """
    if not (1 <= k <= n):
        raise DimensionError(f"need 1 <= k <= n, got k={k}, n={n}")
    _check_cap(n, k, SIZE_CAP if cap is None else cap)
    return list(itertools.combinations(range(n), k))


def sequence_position(seq, n: int) -> int:
    """Rank of an increasing sequence within enumerate_sequences(len(seq), n)."""
    seq = tuple(int(s) for s in seq)
    k = len(seq)
    if k < 1 or any(b <= a for a, b in zip(seq, seq[1:])) or seq[0] < 0 or seq[-1] >= n:
        raise DimensionError(f"{seq} is not a strictly increasing sequence in range({n})")
    # combinatorial number system: count sequences that precede seq
    rank, prev = 0, -1
    for i, s in enumerate(seq):
        for t in range(prev + 1, s):
            rank += comb(n - 1 - t, k - 1 - i)
        prev = s
    return rank


def _check_seq(seq, bound, label):
    seq = tuple(int(s) for s in seq)
    if not seq:
        raise DimensionError(f"empty {label} index sequence")
    if any(b <= a for a, b in zip(seq, seq[1:])):
        raise DimensionError(f"{label} indices {seq} are not strictly increasing")
    if seq[0] < 0 or seq[-1] >= bound:
        raise DimensionError(f"{label} indices {seq} out of range for size {bound}")
    return seq


def minor(A, rows, cols) -> float:
    """Determinant of ``A[rows, cols]`` (0-based increasing index sequences)."""
    A = as_matrix(A)
    rows = _check_seq(rows, A.shape[0], "row")
    cols = _check_seq(cols, A.shape[1], "column")
    if len(rows) != len(cols):
        raise DimensionError(f"minor needs equally many rows and columns, got {len(rows)} and {len(cols)}")
    return float(det_stack(A[np.ix_(rows, cols)]))


def det_stack(sub: np.ndarray) -> np.ndarray:
    """Determinants over the last two axes.

    Orders 1-3 use the explicit expansion, which is exact on small-integer
    data; larger orders go through LAPACK's LU with partial pivoting.
    """
    k = sub.shape[-1]
    if k == 1:
        return sub[..., 0, 0].copy()
    if k == 2:
        return sub[..., 0, 0] * sub[..., 1, 1] - sub[..., 0, 1] * sub[..., 1, 0]
    if k == 3:
        a = sub
        return (a[..., 0, 0] * (a[..., 1, 1] * a[..., 2, 2] - a[..., 1, 2] * a[..., 2, 1])
                - a[..., 0, 1] * (a[..., 1, 0] * a[..., 2, 2] - a[..., 1, 2] * a[..., 2, 0])
                + a[..., 0, 2] * (a[..., 1, 0] * a[..., 2, 1] - a[..., 1, 1] * a[..., 2, 0]))
    return np.linalg.det(sub)


def submatrix_stack(A, k: int, cap: int | None = None):
    """All k x k submatrices of A as an array of shape (C(n,k), C(m,k), k, k).

    Also returns the row and column sequence lists used for the two leading axes.
    """
    A = as_matrix(A)
    n, m = A.shape
    if not (1 <= k <= min(n, m)):
        raise DimensionError(f"order k={k} out of range 1..{min(n, m)} for a {n}x{m} matrix")
    cap = SIZE_CAP if cap is None else cap
    rseq = enumerate_sequences(k, n, cap)
    cseq = enumerate_sequences(k, m, cap)
    R = np.asarray(rseq)  # (nr, k)
    C = np.asarray(cseq)  # (nc, k)
    sub = A[R[:, None, :, None], C[None, :, None, :]]
    return sub, rseq, cseq


def compound(A, k: int, cap: int | None = None) -> np.ndarray:
    """The k-th multiplicative compound of A.

    Entry (r, c) is the minor on rows ``Q[r]`` and columns ``Q'[c]`` where
    ``Q = enumerate_sequences(k, n)`` and ``Q' = enumerate_sequences(k, m)``.
    """
    A = as_matrix(A)
    if k == 1:
        return A.copy()
    sub, _, _ = submatrix_stack(A, k, cap)
    return det_stack(sub)


def multiply(A, B) -> np.ndarray:
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape[1] != B.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B
