"""Spectral structure of nonsingular SSR_k matrices.

For such a matrix the k largest-modulus eigenvalues are strictly separated
from the rest.  The real eigenvector basis splits R^n into an invariant
k-dimensional subspace E (inside P^k_+ apart from 0) and an invariant
complement E^c (meeting P^k_- only at 0); trajectories started in E dominate
those started in E^c at the rate |lambda_{k+1} / lambda_k|.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .classify import classify_order
from .core import as_matrix, as_vector
from .errors import DegenerateSpectrumError, DimensionError, NotFoundError, PreconditionError
from .signvar import relative_zero_tol, s_minus, s_plus
from .tolerances import DEFAULT, ToleranceProfile


@dataclass
class SpectralSplit:
    k: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    """Columns v^1..v^n, matching ``eigenvalues``."""
    real_basis: np.ndarray
    """Columns u^1..u^n."""
    E_basis: np.ndarray
    Ec_basis: np.ndarray
    gap_ratio: float
    signature: int
    eigen_product: complex
    product_sign_check: bool
    generic: bool
    max_residual: float

    def to_dict(self):
        return {
            "k": self.k,
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "moduli": np.abs(self.eigenvalues).tolist(),
            "real_basis": self.real_basis.T.tolist(),
            "E_basis": self.E_basis.T.tolist(),
            "Ec_basis": self.Ec_basis.T.tolist(),
            "gap_ratio": self.gap_ratio,
            "signature": self.signature,
            "eigen_product": [float(self.eigen_product.real), float(self.eigen_product.imag)],
            "product_sign_check": self.product_sign_check,
            "generic": self.generic,
            "max_residual": self.max_residual,
        }


def order_eigenvalues(w: np.ndarray, rel: float = 1e-12) -> np.ndarray:
    """Permutation sorting eigenvalues by modulus (descending).

    Moduli within ``rel`` (relative) of each other form a tie group, ordered
    by real part then imaginary part, both descending.  Conjugate pairs have
    identical moduli and real parts, so they end up adjacent with the
    positive-imaginary member first.
    """
    mod = np.abs(w)
    order = list(np.argsort(-mod, kind="stable"))
    out = []
    i = 0
    scale = mod.max() if mod.size else 1.0
    while i < len(order):
        j = i + 1
        while j < len(order) and mod[order[i]] - mod[order[j]] <= rel * scale:
            j += 1
        group = sorted(order[i:j], key=lambda t: (-round(w[t].real, 12), -w[t].imag))
        out.extend(group)
        i = j
    return np.asarray(out, dtype=int)


def _phase_normalize(v):
    """Rotate a complex vector so its largest-modulus entry is real positive; unit norm."""
    p = int(np.argmax(np.abs(v)))
    v = v * (np.abs(v[p]) / v[p])
    return v / np.linalg.norm(v)


def real_basis(w: np.ndarray, V: np.ndarray, real_tol: float = 1e-12) -> np.ndarray:
    """Real vectors u^1..u^n from ordered eigenpairs.

    Real eigenvalue: the real part of its eigenvector (or the imaginary part
    when the vector is essentially imaginary).  Conjugate pair
    (lambda, conj(lambda)): real part, then imaginary part, of the eigenvector
    of the positive-imaginary member.
    """
    n = w.size
    U = np.empty((n, n))
    i = 0
    while i < n:
        lam, v = w[i], V[:, i]
        if abs(lam.imag) <= real_tol * max(abs(lam), 1.0):
            u = v.real if np.linalg.norm(v.real) >= np.linalg.norm(v.imag) else v.imag
            U[:, i] = u / np.linalg.norm(u)
            i += 1
        else:
            if i + 1 >= n:
                raise PreconditionError("unpaired complex eigenvalue")
            v = _phase_normalize(v)
            U[:, i] = v.real
            U[:, i + 1] = v.imag
            i += 2
    return U


def _is_real(z, tol=1e-12):
    return abs(z.imag) <= tol * max(abs(z), 1.0)


def spectral_split(A, k: int, tol: ToleranceProfile = DEFAULT, check_ssr: bool = True) -> SpectralSplit:
    """Ordered spectrum, real basis and the invariant splitting for order k."""
    A = as_matrix(A)
    n, m = A.shape
    if n != m:
        raise DimensionError(f"spectral_split needs a square matrix, got {A.shape}")
    if not (1 <= k <= n - 1):
        raise DimensionError(f"order k={k} out of range 1..{n - 1}")
    cls = classify_order(A, k, tol)
    if check_ssr and not cls.is_ssr:
        raise PreconditionError(f"matrix is not SSR_{k} ({cls.verdict})")
    # with the check skipped, an unsigned order falls back to +1
    signature = cls.signature or 1
    if classify_order(A, n, tol).zero_minors:
        raise PreconditionError("matrix is singular")

    w, V = np.linalg.eig(A)
    perm = order_eigenvalues(w)
    w, V = w[perm], V[:, perm]
    # snap conjugate pairs so both members are exact conjugates
    for i in range(n - 1):
        if not _is_real(w[i]) and w[i].imag > 0 and np.isclose(w[i + 1], np.conj(w[i]), rtol=1e-10, atol=0):
            w[i + 1] = np.conj(w[i])
            V[:, i + 1] = np.conj(V[:, i])
    norm_A = np.linalg.norm(A, 2)
    residuals = np.linalg.norm(A @ V - V * w, axis=0) / np.linalg.norm(V, axis=0)
    max_res = float(residuals.max())
    if max_res > 1e-8 * norm_A:
        raise PreconditionError(f"eigen-residual {max_res:.3e} exceeds 1e-8 * ||A||")

    mod = np.abs(w)
    if mod[k - 1] - mod[k] <= tol.tau_gap * mod[k - 1]:
        raise DegenerateSpectrumError(
            f"|lambda_{k}| = {mod[k - 1]:.6g} and |lambda_{k + 1}| = {mod[k]:.6g} are not separated",
            moduli=mod.tolist(), k=k,
        )

    U = real_basis(w, V)
    E = U[:, :k]
    generic = np.linalg.matrix_rank(U, tol=tol.tau_spec) == n
    if generic:
        Ec = U[:, k:]
    else:
        Ec = invariant_complement(A, k, mod)
    product = complex(np.prod(w[:k]))
    prod_ok = bool(signature * product.real > 0 and abs(product.imag) <= tol.tau_spec * abs(product))
    return SpectralSplit(
        k=k, eigenvalues=w, eigenvectors=V, real_basis=U, E_basis=E, Ec_basis=Ec,
        gap_ratio=float(mod[k] / mod[k - 1]), signature=int(signature), eigen_product=product,
        product_sign_check=prod_ok, generic=bool(generic), max_residual=max_res,
    )


def invariant_complement(A, k: int, moduli) -> np.ndarray:
    """Orthonormal real basis of the invariant subspace of the n-k smallest-modulus eigenvalues."""
    cut = 0.5 * (moduli[k - 1] + moduli[k])
    _, Z, sdim = scipy.linalg.schur(A, output="real", sort=lambda re, im: np.hypot(re, im) < cut)
    n = A.shape[0]
    if sdim != n - k:
        raise DegenerateSpectrumError(f"Schur reordering selected {sdim} eigenvalues, expected {n - k}", k=k)
    return Z[:, :sdim]


def projection_residual(A, basis) -> np.ndarray:
    """||A u - P A u|| / (||A|| ||u||) for every column u, with P the orthogonal projector onto span(basis)."""
    Q, _ = np.linalg.qr(basis)
    AB = A @ basis
    R = AB - Q @ (Q.T @ AB)
    return np.linalg.norm(R, axis=0) / (np.linalg.norm(A, 2) * np.linalg.norm(basis, axis=0))


@dataclass
class SeparationCheck:
    k: int
    rate_bound: float
    measured_rates: list[float]
    fitted_constant: float
    E_in_cone: bool
    Ec_meets_cone_only_at_zero: bool
    invariance_residuals: dict
    rates_within_bound: bool
    tolerance_profile: ToleranceProfile
    witnesses: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        res_ok = max(self.invariance_residuals["E"] + self.invariance_residuals["Ec"]) <= self.tolerance_profile.tau_spec
        return self.E_in_cone and self.Ec_meets_cone_only_at_zero and self.rates_within_bound and res_ok

    def to_dict(self):
        return {
            "k": self.k,
            "rate_bound": self.rate_bound,
            "log_rate_bound": float(np.log(self.rate_bound)),
            "measured_rates": self.measured_rates,
            "fitted_constant": self.fitted_constant,
            "E_in_cone": self.E_in_cone,
            "Ec_meets_cone_only_at_zero": self.Ec_meets_cone_only_at_zero,
            "invariance_residuals": self.invariance_residuals,
            "rates_within_bound": self.rates_within_bound,
            "passed": self.passed,
            "witnesses": self.witnesses,
        }


def _unit_combination(basis, rng):
    x = basis @ rng.standard_normal(basis.shape[1])
    return x / np.linalg.norm(x)


def separation_rate(A, x0, xt0, horizon: int, Ec_projector=None):
    """Fitted slope of log(||x~(j)|| / ||x(j)||) over j = 0..horizon.

    Both trajectories are renormalized every step and their log growth is
    accumulated.  When ``Ec_projector`` is given, x~ is re-projected onto E^c
    after every step to stop round-off from leaking into the dominant subspace.
    Returns (slope, log-ratio sequence).
    """
    x = x0 / np.linalg.norm(x0)
    xt = xt0 / np.linalg.norm(xt0)
    logs = np.zeros(horizon + 1)
    acc = 0.0
    for j in range(1, horizon + 1):
        x = A @ x
        xt = A @ xt
        if Ec_projector is not None:
            xt = Ec_projector @ xt
        nx, nxt = np.linalg.norm(x), np.linalg.norm(xt)
        acc += np.log(nxt) - np.log(nx)
        logs[j] = acc
        x, xt = x / nx, xt / nxt
    slope = float(np.polyfit(np.arange(horizon + 1), logs, 1)[0]) if horizon >= 1 else 0.0
    return slope, logs


def verify_separation(A, k: int, trials: int = 100, horizon: int = 200, rng_seed: int = 0,
                      tol: ToleranceProfile = DEFAULT, split: SpectralSplit | None = None,
                      cone_samples: int | None = None) -> SeparationCheck:
    """Monte-Carlo check of the spectral separation statements for order k.

    (a) random unit vectors of E have s_plus <= k-1;
    (b) random unit vectors of E^c have s_minus >= k;
    (c) E and E^c are A-invariant (projection residuals);
    (d) paired trajectories from unit x(0) in E and x~(0) in E^c separate at a
        fitted log-rate no worse than log(|lambda_{k+1}/lambda_k|) + tau_rate.
    Each trial draws its own stream from ``SeedSequence(rng_seed).spawn``.
    """
    A = as_matrix(A)
    if split is None:
        split = spectral_split(A, k, tol)
    E, Ec = split.E_basis, split.Ec_basis
    n = A.shape[0]
    b = split.gap_ratio
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(rng_seed).spawn(trials)]
    witnesses = {}

    n_cone = trials if cone_samples is None else cone_samples
    cone_rng = np.random.default_rng(np.random.SeedSequence(rng_seed).spawn(trials + 1)[-1])
    E_ok = True
    Ec_ok = True
    for _ in range(n_cone):
        z = _unit_combination(E, cone_rng)
        if s_plus(z, relative_zero_tol(z, tol.state_zero_rel)) > k - 1:
            E_ok = False
            witnesses.setdefault("E_sample_outside_P_plus", z.tolist())
        zc = _unit_combination(Ec, cone_rng)
        if s_minus(zc, relative_zero_tol(zc, tol.state_zero_rel)) < k:
            Ec_ok = False
            witnesses.setdefault("Ec_sample_inside_P_minus", zc.tolist())

    residuals = {"E": projection_residual(A, E).tolist(), "Ec": projection_residual(A, Ec).tolist()}

    # oblique projector onto E^c along E
    basis = np.hstack([E, Ec])
    P_Ec = Ec @ np.linalg.solve(basis, np.eye(n))[k:, :]
    rates, consts = [], []
    log_b = float(np.log(b))
    ok_rates = True
    for rng in streams:
        x0 = _unit_combination(E, rng)
        xt0 = _unit_combination(Ec, rng)
        slope, logs = separation_rate(A, x0, xt0, horizon, P_Ec)
        rates.append(slope)
        consts.append(float(np.max(logs - np.arange(horizon + 1) * log_b)))
        if slope > log_b + tol.tau_rate:
            ok_rates = False
            witnesses.setdefault("slow_separation", {"x0": x0.tolist(), "xt0": xt0.tolist(), "slope": slope})
    return SeparationCheck(
        k=k, rate_bound=b, measured_rates=rates,
        fitted_constant=float(np.exp(max(consts))) if consts else float("nan"),
        E_in_cone=E_ok, Ec_meets_cone_only_at_zero=Ec_ok, invariance_residuals=residuals,
        rates_within_bound=ok_rates, tolerance_profile=tol, witnesses=witnesses,
    )


@dataclass
class HittingResult:
    found: bool
    q: int | None
    j_max: int
    s_plus_trace: list[int]
    violations: list[int]

    def to_dict(self):
        return {"found": self.found, "q": self.q, "j_max": self.j_max,
                "violations": self.violations, "final_s_plus": self.s_plus_trace[-1]}


def hitting_time(A, k: int, x0, j_max: int = 10_000, zero_rel: float = DEFAULT.state_zero_rel,
                 raise_on_missing: bool = False) -> HittingResult:
    """First step q <= j_max with s_plus(x(q)) <= k-1, then checks it stays there.

    The state is renormalized each step; entries below ``zero_rel * max|x|``
    count as zero.  If no such q exists the result has ``found=False`` and
    carries the s_plus trace (or raises NotFoundError when asked to).
    """
    A = as_matrix(A)
    x = as_vector(x0, "x0").copy()
    if A.shape[0] != A.shape[1] or x.shape[0] != A.shape[0]:
        raise DimensionError("x0 and A are not conformable")
    if not np.any(x):
        raise PreconditionError("x0 must be nonzero")
    x /= np.linalg.norm(x)
    trace = []
    q = None
    violations = []
    for j in range(j_max + 1):
        if j:
            x = A @ x
            x /= np.linalg.norm(x)
        sp = s_plus(x, relative_zero_tol(x, zero_rel))
        trace.append(sp)
        if q is None:
            if sp <= k - 1:
                q = j
        elif sp > k - 1:
            violations.append(j)
    res = HittingResult(q is not None, q, j_max, trace, violations)
    if not res.found and raise_on_missing:
        raise NotFoundError(f"s_plus stayed above {k - 1} through j = {j_max}", res)
    return res
