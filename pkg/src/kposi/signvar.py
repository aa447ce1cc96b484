"""Sign-variation counts and membership in the cones of rank k.

``s_minus`` counts sign changes after discarding zeros; ``s_plus`` is the
largest count obtainable by giving every zero a sign of our choosing.
An entry is zero when ``|y_i| <= zero_tol``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_vector
from .errors import DimensionError


@dataclass(frozen=True)
class SignVarResult:
    s_minus: int
    s_plus: int
    zero_count: int


@dataclass(frozen=True)
class ConeMembership:
    k: int
    in_P_minus: bool
    in_P_plus: bool
    zero_tol: float = 0.0

    def to_dict(self):
        return {"k": self.k, "in_P_minus": self.in_P_minus, "in_P_plus": self.in_P_plus,
                "zero_tol": self.zero_tol}


def _signs(y, zero_tol):
    y = as_vector(y)
    if zero_tol < 0:
        raise ValueError("zero_tol must be nonnegative")
    s = np.sign(y).astype(int)
    s[np.abs(y) <= zero_tol] = 0
    return s.tolist()


def _count_minus(signs):
    count, last = 0, 0
    for s in signs:
        if s:
            if last and s != last:
                count += 1
            last = s
    return count


def _count_plus(signs):
    n = len(signs)
    count, last, run = 0, 0, 0  # last nonzero sign, zeros since it
    for s in signs:
        if not s:
            run += 1
            continue
        if not last:
            count += run  # leading zero run
        elif s == (-1) ** (run + 1) * last:
            count += run + 1
        else:
            count += run
        last, run = s, 0
    if not last:
        return n - 1
    return count + run  # trailing zero run


def s_minus(y, zero_tol: float = 0.0) -> int:
    """Number of sign changes in y with its zero entries deleted."""
    return _count_minus(_signs(y, zero_tol))


def s_plus(y, zero_tol: float = 0.0) -> int:
    """Maximal number of sign changes over all +-1 fillings of the zeros of y.

    Linear time: a run of z zeros between nonzeros a and b adds z + 1 changes
    when sign(b) == (-1)**(z+1) * sign(a) and z otherwise; a leading or
    trailing run adds z; the all-zero vector gives n - 1.
    """
    return _count_plus(_signs(y, zero_tol))


def sign_variations(y, zero_tol: float = 0.0) -> SignVarResult:
    signs = _signs(y, zero_tol)
    return SignVarResult(_count_minus(signs), _count_plus(signs), signs.count(0))


def relative_zero_tol(y, rel: float) -> float:
    """Absolute threshold ``rel * max|y_i|`` for sign counting on floating states."""
    return float(rel * np.max(np.abs(y))) if np.size(y) else 0.0


def cone_membership(y, k: int, zero_tol: float = 0.0) -> ConeMembership:
    """Membership of y in P^k_- (s_minus <= k-1) and P^k_+ (s_plus <= k-1)."""
    signs = _signs(y, zero_tol)
    n = len(signs)
    if not (1 <= k <= n):
        raise DimensionError(f"cone order k={k} out of range 1..{n}")
    return ConeMembership(k, _count_minus(signs) <= k - 1, _count_plus(signs) <= k - 1, zero_tol)
