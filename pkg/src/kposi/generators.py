"""Test-matrix construction: totally positive, SSR_k-only, and the named fixtures."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classify import SsrReport, classify_all
from .core import SIZE_CAP, as_matrix
from .errors import KposiError, NotFoundError, PreconditionError
from .tolerances import DEFAULT, ToleranceProfile

_FIXTURES = {
    # introduction: SR_1, not SR_2, SSR_3, SSR_4
    "intro4": [[1, 2, 0, 0], [0, 1, 1, 0], [0, 0, 2, 0.1], [1, 0, 0, 2]],
    # nonsingular, not SR_2; maps [19,-6,-2] out of P^2_-
    "counter3": [[10, 4, 1], [1, 3, 1], [2, 4, 6]],
    # SSR_3, not SSR_1 / SSR_2
    "example1": [[9, 2, -2, 1], [3, 10, 1, -1], [-4, 1.5, 12, 4], [1, -1, 2, 15]],
    # SSR_3 with signature +1; eigenvalues 3 +- s1, 3 +- i s2
    "spectral4": [[2, 6, 0, 0], [0, 2, 2, 0], [0, 0, 4, 2], [2, 0, 0, 4]],
    # positive, SSR_2; exterior product example
    "wedge3": [[0.79, 0.2, 0.01], [0.1, 0.8, 0.1], [0.01, 0.1, 0.89]],
}

FIXTURE_NAMES = tuple(_FIXTURES)

KINDS = ("totally_positive", "ssr_k_only", "fixture", "contractive_tp")


class GenerationError(KposiError, RuntimeError):
    def __init__(self, message, matrix=None):
        super().__init__(message)
        self.matrix = matrix


def fixture(name: str) -> np.ndarray:
    try:
        return np.array(_FIXTURES[name], dtype=np.float64)
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}") from None


def bidiagonal_product(lower, diag, upper) -> np.ndarray:
    """L_1 ... L_r D U_r ... U_1 from subdiagonal/superdiagonal parameter rows.

    ``lower`` and ``upper`` have shape (r, n-1); each row gives the off-diagonal
    of one unit bidiagonal factor.  All parameters must be positive.
    """
    lower = np.atleast_2d(np.asarray(lower, dtype=np.float64))
    upper = np.atleast_2d(np.asarray(upper, dtype=np.float64))
    diag = np.asarray(diag, dtype=np.float64)
    n = diag.size
    if lower.shape[1] != n - 1 or upper.shape[1] != n - 1:
        raise ValueError("bidiagonal parameter rows must have length n-1")
    if np.any(lower <= 0) or np.any(upper <= 0) or np.any(diag <= 0):
        raise PreconditionError("bidiagonal factor parameters must all be positive")
    A = np.eye(n)
    for row in lower:
        A = A @ (np.eye(n) + np.diag(row, -1))
    A = A @ np.diag(diag)
    for row in upper[::-1]:
        A = A @ (np.eye(n) + np.diag(row, 1))
    return A


def gaussian_kernel_tp(n: int, rng: np.random.Generator) -> np.ndarray:
    """Row/column-scaled samples of exp(-c (x_i - y_j)^2) on jittered increasing grids.

    The Gaussian kernel is strictly totally positive for increasing nodes,
    and positive diagonal scalings preserve that.  The width and scaling
    ranges keep every minor well above the classifier's zero threshold for n <= 6.
    """
    h = 1.0 / max(n - 1, 1)
    x = np.arange(n) * h + rng.uniform(-0.25 * h, 0.25 * h, size=n)
    y = np.arange(n) * h + rng.uniform(-0.25 * h, 0.25 * h, size=n)
    c = 10.0 ** rng.uniform(np.log10(0.2), np.log10(0.45)) * max(n - 1, 1) ** 2
    K = np.exp(-c * np.subtract.outer(x, y) ** 2)
    return 10.0 ** rng.uniform(0.0, 1.0, size=n)[:, None] * K * 10.0 ** rng.uniform(0.0, 0.3, size=n)[None, :]


def random_bidiagonal_tp(n: int, rng: np.random.Generator) -> np.ndarray:
    """n-1 full positive unit bidiagonal layers on each side of a positive diagonal.

    Parameters are log-uniform on [0.1, 10].  The product is totally positive,
    but for n >= 4 its smallest minors often fall below the classifier's
    floating-point zero threshold.
    """

    def draw(*shape):
        return 10.0 ** rng.uniform(-1.0, 1.0, size=shape)

    return bidiagonal_product(draw(n - 1, n - 1), draw(n), draw(n - 1, n - 1))


def is_certified_tp(report: SsrReport) -> bool:
    return report.is_SSR and all(c.signature == 1 for c in report.classifications)


def gen_totally_positive(n: int, rng_seed: int = 0, tol: ToleranceProfile = DEFAULT,
                         method: str = "kernel", attempts: int = 100,
                         verify: bool = True) -> np.ndarray:
    """Random totally positive n x n matrix, certified by ``classify_all``.

    ``method`` is ``"kernel"`` (default, well conditioned) or ``"bidiagonal"``.
    Draws that the classifier cannot certify at ``tol`` (all minors positive
    and above the zero threshold) are discarded and redrawn.
    """
    if not (2 <= n <= SIZE_CAP):
        raise PreconditionError(f"need 2 <= n, got n={n}")
    draw = {"kernel": gaussian_kernel_tp, "bidiagonal": random_bidiagonal_tp}.get(method)
    if draw is None:
        raise ValueError(f"unknown TP construction {method!r}")
    rng = np.random.default_rng(rng_seed)
    A = draw(n, rng)
    if not verify:
        return A
    for _ in range(attempts):
        if is_certified_tp(classify_all(A, tol)):
            return A
        A = draw(n, rng)
    raise GenerationError(f"no certifiable {n}x{n} TP draw in {attempts} attempts", A)


def spectral_radius(A) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(as_matrix(A)))))


def make_contractive(A, target: float = 0.9) -> np.ndarray:
    """Scale A so its spectral radius equals ``target``."""
    return as_matrix(A) * (target / spectral_radius(A))


def gen_contractive_tp(n: int, rng_seed: int = 0, tol: ToleranceProfile = DEFAULT) -> np.ndarray:
    return make_contractive(gen_totally_positive(n, rng_seed, tol))


def accepts_ssr_k_only(report: SsrReport, k: int) -> bool:
    """SSR_k, and not SR_j for at least one other order j."""
    return report.order(k).is_ssr and any(
        not c.is_sr for c in report.classifications if c.k != k
    )


def _checkerboard(n):
    i = np.arange(n)
    return (-1.0) ** (i[:, None] + i[None, :])


def _propose(n, k, rng):
    """One candidate matrix.  Proposal families, chosen at random:

    * diagonal-dominant with off-diagonal signs (-1)^(i+j+1) (the shape of
      the 4x4 SSR_3 fixture); first-order minor expansion makes these SSR_{n-1}
    * inverse of a checkerboard-signed positive matrix (always SSR_{n-1})
    * perturbed TP matrix, A = T + delta * G
    * entrywise positive matrix (SSR_1 candidates)
    """
    family = rng.integers(0, 4)
    if family == 0:
        D = np.diag(10.0 ** rng.uniform(0.5, 1.5, size=n))
        E = rng.uniform(0.0, 1.0, size=(n, n)) * (10.0 ** rng.uniform(-1, 0.7)) * -_checkerboard(n)
        np.fill_diagonal(E, 0.0)
        return D + E
    if family == 1:
        M = 10.0 ** rng.uniform(-1.0, 1.0, size=(n, n))
        M += np.diag(10.0 ** rng.uniform(-0.5, 1.5, size=n))
        return np.linalg.inv(_checkerboard(n) * M)
    if family == 2:
        T = gaussian_kernel_tp(n, rng)
        G = rng.standard_normal((n, n))
        delta = np.abs(T).max() * 10.0 ** rng.uniform(-4, 0)
        return T + delta * G
    P = 10.0 ** rng.uniform(-1.0, 1.0, size=(n, n))
    return P


def gen_ssr_k_only(n: int, k: int, rng_seed: int = 0, attempts: int = 10_000,
                   tol: ToleranceProfile = DEFAULT, nonsingular: bool = True):
    """Rejection-sample an SSR_k matrix that fails SR_j for some j != k.

    Returns ``(A, report)``; raises NotFoundError when attempts run out.
    """
    if not (1 <= k < n):
        raise PreconditionError(f"need 1 <= k < n, got k={k}, n={n}")
    if n == 2:
        # the single order-2 minor is always sign-regular, so no order can fail
        raise PreconditionError("no 2x2 matrix is SSR_1 and not SR_2")
    rng = np.random.default_rng(rng_seed)
    for _ in range(attempts):
        A = _propose(n, k, rng)
        if not np.all(np.isfinite(A)):
            continue
        rep = classify_all(A, tol)
        if accepts_ssr_k_only(rep, k) and (rep.nonsingular or not nonsingular):
            return A, rep
    raise NotFoundError(f"no SSR_{k}-only {n}x{n} matrix found in {attempts} attempts",
                        {"n": n, "k": k, "attempts": attempts})


@dataclass(frozen=True)
class GeneratorSpec:
    n: int
    kind: str
    rng_seed: int = 0
    k: int | None = None
    name: str | None = None
    attempts: int = 10_000

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind == "fixture" and self.name not in _FIXTURES:
            raise ValueError(f"fixture needs a name from {FIXTURE_NAMES}")
        if self.kind == "ssr_k_only" and self.k is None:
            raise ValueError("ssr_k_only needs k")


def generate(spec: GeneratorSpec, tol: ToleranceProfile = DEFAULT) -> np.ndarray:
    if spec.kind == "totally_positive":
        return gen_totally_positive(spec.n, spec.rng_seed, tol)
    if spec.kind == "contractive_tp":
        return gen_contractive_tp(spec.n, spec.rng_seed, tol)
    if spec.kind == "ssr_k_only":
        return gen_ssr_k_only(spec.n, spec.k, spec.rng_seed, spec.attempts, tol)[0]
    return fixture(spec.name)
