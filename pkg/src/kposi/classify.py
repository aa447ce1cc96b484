"""Sign-regularity classification and variation-diminishing checks."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import as_matrix, as_vector, det_stack, submatrix_stack
from .errors import DimensionError
from .signvar import s_minus, s_plus
from .tolerances import DEFAULT, ToleranceProfile

SSR = "SSR"
SR_NOT_SSR = "SR_not_SSR"
NOT_SR = "not_SR"


@dataclass(frozen=True)
class Witness:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    value: float

    def to_dict(self):
        # 1-based, matching the usual A(alpha|beta) notation
        return {"rows": [r + 1 for r in self.rows], "cols": [c + 1 for c in self.cols],
                "value": self.value}


@dataclass(frozen=True)
class OrderClassification:
    k: int
    verdict: str
    signature: int | None
    min_abs_minor: float
    witness_positive: Witness | None
    witness_negative: Witness | None
    zero_minors: int = 0

    @property
    def is_sr(self) -> bool:
        return self.verdict != NOT_SR

    @property
    def is_ssr(self) -> bool:
        return self.verdict == SSR

    def to_dict(self):
        return {
            "k": self.k,
            "verdict": self.verdict,
            "signature": self.signature,
            "min_abs_minor": self.min_abs_minor,
            "zero_minors": self.zero_minors,
            "witness_positive": self.witness_positive.to_dict() if self.witness_positive else None,
            "witness_negative": self.witness_negative.to_dict() if self.witness_negative else None,
        }


@dataclass(frozen=True)
class SsrReport:
    classifications: list[OrderClassification]
    is_SR: bool
    is_SSR: bool
    nonsingular: bool | None
    tolerance_profile: ToleranceProfile

    def order(self, k: int) -> OrderClassification:
        return self.classifications[k - 1]

    def to_dict(self):
        return {
            "classifications": [c.to_dict() for c in self.classifications],
            "is_SR": self.is_SR,
            "is_SSR": self.is_SSR,
            "nonsingular": self.nonsingular,
            "tolerance_profile": self.tolerance_profile.to_dict(),
        }


def minor_zero_thresholds(sub: np.ndarray, tau_zero: float) -> np.ndarray:
    """tau_zero * max(1, Hadamard bound) for a stack of square submatrices."""
    hadamard = np.prod(np.linalg.norm(sub, axis=-1), axis=-1)
    return tau_zero * np.maximum(1.0, hadamard)


def classify_order(A, k: int, tol: ToleranceProfile = DEFAULT, cap: int | None = None) -> OrderClassification:
    """Classify A as SSR_k, SR_k but not SSR_k, or not SR_k.

    Every order-k minor is evaluated.  Witnesses are the first strictly
    positive and first strictly negative minors in a row-major lexicographic
    sweep over (row sequence, column sequence).
    """
    A = as_matrix(A)
    n, m = A.shape
    if not (1 <= k <= min(n, m)):
        raise DimensionError(f"order k={k} out of range 1..{min(n, m)}")
    sub, rseq, cseq = submatrix_stack(A, k, cap)
    minors = det_stack(sub)
    thresh = minor_zero_thresholds(sub, tol.tau_zero)

    zero = np.abs(minors) <= thresh
    pos = (minors > 0) & ~zero
    neg = (minors < 0) & ~zero
    flat_pos = np.flatnonzero(pos)
    flat_neg = np.flatnonzero(neg)
    nc = len(cseq)

    def witness(flat):
        if flat.size == 0:
            return None
        r, c = divmod(int(flat[0]), nc)
        return Witness(rseq[r], cseq[c], float(minors[r, c]))

    wpos, wneg = witness(flat_pos), witness(flat_neg)
    nzero = int(zero.sum())
    if wpos and wneg:
        verdict, sig = NOT_SR, None
    else:
        verdict = SSR if nzero == 0 else SR_NOT_SSR
        # all-zero order: weakly sign-regular with no meaningful signature
        sig = 1 if wpos else (-1 if wneg else None)
    return OrderClassification(
        k=k,
        verdict=verdict,
        signature=sig,
        min_abs_minor=0.0 if nzero else float(np.min(np.abs(minors))),
        witness_positive=wpos,
        witness_negative=wneg,
        zero_minors=nzero,
    )


def classify_all(A, tol: ToleranceProfile = DEFAULT, cap: int | None = None) -> SsrReport:
    A = as_matrix(A)
    n, m = A.shape
    cls = [classify_order(A, k, tol, cap) for k in range(1, min(n, m) + 1)]
    nonsingular = None
    if n == m:
        nonsingular = cls[-1].zero_minors == 0
    return SsrReport(
        classifications=cls,
        is_SR=all(c.is_sr for c in cls),
        is_SSR=all(c.is_ssr for c in cls),
        nonsingular=nonsingular,
        tolerance_profile=tol,
    )


@dataclass
class VdpReport:
    mode: str
    samples: int
    passed: bool
    precondition_met: bool
    precondition_detail: str
    counterexample: list[float] | None = None
    image: list[float] | None = None
    counts: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "mode": self.mode,
            "samples": self.samples,
            "passed": self.passed,
            "precondition_met": self.precondition_met,
            "precondition_detail": self.precondition_detail,
            "counterexample": self.counterexample,
            "image": self.image,
            "counts": self.counts,
        }


def sample_sign_pattern_vector(m: int, rng: np.random.Generator, variations: int | None = None) -> np.ndarray:
    """A vector with exactly ``variations`` sign changes and no zeros.

    The number of variations is uniform on 0..m-1 unless given; magnitudes
    are log-uniform on [0.1, 10].
    """
    if variations is None:
        variations = int(rng.integers(0, m))
    cuts = np.zeros(m, dtype=int)
    if variations:
        cuts[1 + rng.choice(m - 1, size=variations, replace=False)] = 1
    signs = (1 if rng.random() < 0.5 else -1) * (-1) ** np.cumsum(cuts)
    mags = 10.0 ** rng.uniform(-1.0, 1.0, size=m)
    return signs * mags


def verify_vdp(A, samples: int = 1000, mode: str = "strong", rng_seed: int = 0,
               tol: ToleranceProfile = DEFAULT, vectors=None, report: SsrReport | None = None) -> VdpReport:
    """Check the variation diminishing property on sampled (or given) vectors.

    weak:   s_minus(Ax) <= s_minus(x)   (A sign-regular of full column rank)
    strong: s_plus(Ax)  <= s_minus(x)   (A strictly sign-regular)

    A violated precondition is reported in the result; the check still runs,
    which is how counterexamples for non-sign-regular matrices are exhibited.
    Sign counts use exact zeros (zero_tol = 0).
    """
    if mode not in ("weak", "strong"):
        raise ValueError(f"mode must be 'weak' or 'strong', got {mode!r}")
    A = as_matrix(A)
    n, m = A.shape
    if report is None:
        report = classify_all(A, tol)
    if mode == "strong":
        ok = report.is_SSR
        detail = "A is SSR" if ok else "A is not SSR: " + _failing_orders(report, strict=True)
    else:
        rank = int(np.linalg.matrix_rank(A))
        ok = report.is_SR and rank == m
        if ok:
            detail = f"A is SR with rank {rank} = m"
        elif not report.is_SR:
            detail = "A is not SR: " + _failing_orders(report, strict=False)
        else:
            detail = f"rank {rank} < m = {m}"

    if vectors is not None:
        xs = [as_vector(v, "x") for v in vectors]
        for x in xs:
            if x.shape[0] != m:
                raise DimensionError(f"vector of length {x.shape[0]} does not match {m} columns")
    else:
        rng = np.random.default_rng(rng_seed)
        xs = (sample_sign_pattern_vector(m, rng) for _ in range(samples))

    count = 0
    hist = {}
    for x in xs:
        if not np.any(x):
            continue
        count += 1
        sx = s_minus(x)
        y = A @ x
        sy = s_plus(y) if mode == "strong" else s_minus(y)
        hist[sx] = hist.get(sx, 0) + 1
        if sy > sx:
            return VdpReport(mode, count, False, ok, detail, x.tolist(), y.tolist(),
                             {"s_minus_x": sx, "s_image": sy})
    return VdpReport(mode, count, True, ok, detail, counts={"s_minus_histogram": dict(sorted(hist.items()))})


def _failing_orders(report: SsrReport, strict: bool) -> str:
    bad = [c.k for c in report.classifications if (not c.is_ssr if strict else not c.is_sr)]
    return "orders " + ", ".join(map(str, bad))
