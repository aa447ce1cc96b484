"""State trajectories with sign-variation traces, and exterior-product dynamics."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import as_matrix, as_vector, compound
from .errors import ConvergenceError, DimensionError, PreconditionError
from .signvar import ConeMembership, cone_membership, relative_zero_tol, s_minus, s_plus
from .tolerances import DEFAULT


@dataclass
class TrajectoryTrace:
    states: np.ndarray
    """Shape (steps+1, n)."""
    s_minus_trace: list[int]
    s_plus_trace: list[int]
    cone_flags: list[ConeMembership]
    k: int
    renormalized: bool
    zero_rel: float

    def summary(self) -> dict:
        after = self.s_plus_trace[1:]
        return {
            "steps": len(self.states) - 1,
            "k": self.k,
            "renormalized": self.renormalized,
            "zero_rel": self.zero_rel,
            "s_minus_x0": self.s_minus_trace[0],
            "s_plus_x0": self.s_plus_trace[0],
            "max_s_plus": max(self.s_plus_trace),
            "max_s_plus_after_step0": max(after) if after else None,
            "all_in_P_plus_after_step0": all(c.in_P_plus for c in self.cone_flags[1:]),
        }


def simulate(A_seq, x0, steps: int, k: int = 1, renormalize: bool = False,
             zero_rel: float = DEFAULT.state_zero_rel) -> TrajectoryTrace:
    """Iterate x(i+1) = A(i) x(i).

    ``A_seq`` is one matrix (time-invariant) or a list; a one-element list is
    applied at every step, a longer list must provide at least ``steps``
    matrices.  Sign counts treat entries below ``zero_rel * max|x(j)|`` as zero.
    """
    if steps < 0:
        raise DimensionError("steps must be nonnegative")
    if isinstance(A_seq, np.ndarray) and A_seq.ndim == 2:
        mats = [as_matrix(A_seq)]
    else:
        mats = [as_matrix(M) for M in A_seq]
    if not mats:
        raise DimensionError("empty matrix sequence")
    x = as_vector(x0, "x0").astype(np.float64, copy=True)
    n = x.shape[0]
    for M in mats:
        if M.shape != (n, n):
            raise DimensionError(f"step matrix of shape {M.shape} does not act on R^{n}")
    if len(mats) > 1 and len(mats) < steps:
        raise DimensionError(f"{len(mats)} step matrices given for {steps} steps")
    if not (1 <= k <= n):
        raise DimensionError(f"cone order k={k} out of range 1..{n}")

    states = np.empty((steps + 1, n))
    if renormalize and np.any(x):
        x /= np.linalg.norm(x)
    states[0] = x
    for i in range(steps):
        x = mats[0 if len(mats) == 1 else i] @ x
        if renormalize:
            nx = np.linalg.norm(x)
            if nx > 0:
                x = x / nx
        states[i + 1] = x

    sm, sp, flags = [], [], []
    for x in states:
        t = relative_zero_tol(x, zero_rel)
        sm.append(s_minus(x, t))
        sp.append(s_plus(x, t))
        flags.append(cone_membership(x, k, t))
    return TrajectoryTrace(states, sm, sp, flags, k, renormalize, zero_rel)


def wedge(vectors) -> np.ndarray:
    """Exterior product z^1 ^ ... ^ z^k as a C(n,k)-vector in lexicographic order."""
    Z = np.column_stack([as_vector(v, "z") for v in vectors]) if len(vectors) else None
    if Z is None:
        raise DimensionError("wedge needs at least one vector")
    n, k = Z.shape
    if k > n:
        raise DimensionError(f"cannot wedge {k} vectors in R^{n}")
    return compound(Z, k)[:, 0]


def perron(B, tol: float = 1e-10, max_iter: int = 100_000):
    """Spectral radius and Perron vectors of an entrywise positive matrix.

    Power iteration on B and B^T, stopping when ||Bv - rho v|| <= tol ||B||.
    Returns ``(rho, v, w)`` with ||v||_2 = 1, v > 0, w > 0 and w.v = 1.
    """
    B = as_matrix(B, "B")
    n = B.shape[0]
    if B.shape != (n, n):
        raise DimensionError(f"perron needs a square matrix, got {B.shape}")
    if np.any(B <= 0):
        raise PreconditionError("perron needs every entry of B to be positive")
    normB = np.linalg.norm(B, 2)

    def dominant(M):
        v = np.full(n, 1.0 / np.sqrt(n))
        for _ in range(max_iter):
            y = M @ v
            rho = float(v @ y)
            v = y / np.linalg.norm(y)
            if np.linalg.norm(M @ v - rho * v) <= tol * normB:
                return float(v @ (M @ v)), v
        raise ConvergenceError(f"power iteration did not converge in {max_iter} iterations")

    rho, v = dominant(B)
    _, w = dominant(B.T)
    w = w / (w @ v)
    return rho, v, w


@dataclass
class WedgeTrace:
    k: int
    eta: np.ndarray
    """eta(0..steps), shape (steps+1, C(n,k)), from iterating the compound."""
    eta_wedged: np.ndarray
    """Same quantity from wedging the k simulated state trajectories."""
    path_discrepancy: float
    paths_agree: bool
    B: np.ndarray
    one_signed: int
    """+1 if B > 0, -1 if B < 0, 0 otherwise."""
    rho: float | None = None
    vB: np.ndarray | None = None
    wB: np.ndarray | None = None
    predicted_limit: np.ndarray | None = None
    eta_scaled: np.ndarray | None = None
    """eta(j) / rho^j (times (-1)^j when B < 0)."""
    scaled_error: list[float] = field(default_factory=list)

    def predicted_eta(self, j: int) -> np.ndarray | None:
        """Perron prediction rho^j (w.eta(0)) v, with the sign parity for B < 0."""
        if self.predicted_limit is None:
            return None
        sign = (-1.0) ** j if self.one_signed < 0 else 1.0
        return sign * self.rho ** j * self.predicted_limit

    def to_dict(self):
        d = {
            "k": self.k,
            "steps": len(self.eta) - 1,
            "B": self.B.tolist(),
            "one_signed": self.one_signed,
            "eta": self.eta.tolist(),
            "eta_final": self.eta[-1].tolist(),
            "eta_wedged_final": self.eta_wedged[-1].tolist(),
            "path_discrepancy": self.path_discrepancy,
            "paths_agree": self.paths_agree,
        }
        if self.rho is not None:
            d.update({
                "rho": self.rho,
                "vB": self.vB.tolist(),
                "wB": self.wB.tolist(),
                "predicted_limit": self.predicted_limit.tolist(),
                "predicted_eta_final": self.predicted_eta(len(self.eta) - 1).tolist(),
                "eta_scaled": self.eta_scaled.tolist(),
                "scaled_error": self.scaled_error,
            })
        return d


def wedge_dynamics(A, inits, steps: int, agree_rtol: float = 1e-8,
                   perron_tol: float = 1e-10) -> WedgeTrace:
    """eta(j) = x(j, w^1) ^ ... ^ x(j, w^k), computed along two independent paths.

    Path (i) iterates the k-th compound B on eta(0); path (ii) simulates the
    k state trajectories and wedges them.  When B is one-signed, the Perron
    data of B (or of -B) and the limit prediction are attached.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionError(f"wedge_dynamics needs a square matrix, got {A.shape}")
    if steps < 0:
        raise DimensionError("steps must be nonnegative")
    W = [as_vector(w, "init") for w in inits]
    k = len(W)
    if not (1 <= k <= n) or any(w.shape[0] != n for w in W):
        raise DimensionError(f"need 1..{n} initial vectors of length {n}")

    B = compound(A, k)
    one_signed = 1 if np.all(B > 0) else (-1 if np.all(B < 0) else 0)

    rho = vB = wB = None
    if one_signed:
        rho, vB, wB = perron(one_signed * B, tol=perron_tol)

    # path (i): scaled iteration with (B / rho) to avoid over/underflow
    scale = rho if rho else 1.0
    Bs = one_signed * B / scale if one_signed else B
    eta0 = wedge(W)
    eta_s = np.empty((steps + 1, eta0.size))
    eta_s[0] = eta0
    for j in range(steps):
        eta_s[j + 1] = Bs @ eta_s[j]

    # path (ii): simulate the k trajectories, re-orthonormalizing by QR; the
    # wedge of X = QR equals det(R) times the wedge of Q's columns
    Q = np.column_stack(W).astype(np.float64)
    log_det = 0.0
    det_sign = 1.0
    wedged_s = np.empty_like(eta_s)
    wedged_s[0] = eta0
    for j in range(1, steps + 1):
        Q, R = np.linalg.qr(A @ Q)
        d = np.diag(R)
        if np.any(d == 0):
            wedged_s[j:] = 0.0
            break
        det_sign *= float(np.prod(np.sign(d)))
        log_det += float(np.sum(np.log(np.abs(d))))
        sign = (-1.0) ** j if one_signed < 0 else 1.0
        wedged_s[j] = sign * det_sign * np.exp(log_det - j * np.log(scale)) * wedge(list(Q.T))

    sign_j = np.array([(-1.0) ** j if one_signed < 0 else 1.0 for j in range(steps + 1)])
    powers = scale ** np.arange(steps + 1, dtype=np.float64)
    eta = eta_s * (sign_j * powers)[:, None]
    eta_w = wedged_s * (sign_j * powers)[:, None]
    denom = np.maximum(np.linalg.norm(eta_s, axis=1), np.finfo(float).tiny)
    discrepancy = float(np.max(np.linalg.norm(eta_s - wedged_s, axis=1) / denom))

    trace = WedgeTrace(k=k, eta=eta, eta_wedged=eta_w, path_discrepancy=discrepancy,
                       paths_agree=discrepancy <= agree_rtol, B=B, one_signed=one_signed)
    if one_signed:
        limit = float(wB @ eta0) * vB
        trace.rho, trace.vB, trace.wB = rho, vB, wB
        trace.predicted_limit = limit
        trace.eta_scaled = eta_s
        trace.scaled_error = np.linalg.norm(eta_s - limit, axis=1).tolist()
    return trace
