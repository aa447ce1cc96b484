"""Ordered spectrum of an SSR_3 matrix and the separation of E from its complement."""
import numpy as np

from kposi import fixture, spectral_split, verify_separation
from kposi.signvar import relative_zero_tol, s_minus, s_plus

A = fixture("spectral4")
split = spectral_split(A, 3)
print("eigenvalues:", np.round(split.eigenvalues, 4))
print("s1 =", round(split.eigenvalues[0].real - 3, 4), " s2 =", round(split.eigenvalues[1].imag, 4))

for i, u in enumerate(split.real_basis.T, start=1):
    t = relative_zero_tol(u, 1e-10)
    print(f"u^{i}: s_minus={s_minus(u, t)} s_plus={s_plus(u, t)}")

check = verify_separation(A, 3, trials=20, horizon=200)
print("rate bound |l4/l3| =", round(check.rate_bound, 4))
print("log bound", round(np.log(check.rate_bound), 4), "worst fitted slope", round(max(check.measured_rates), 4))
print("all checks pass:", check.passed)
