"""Sign-regularity of every order, with witnesses, and the variation diminishing property."""
import numpy as np

from kposi import classify_all, fixture, gen_totally_positive, verify_vdp
from kposi.signvar import s_minus

A = fixture("intro4")
print(A)
rep = classify_all(A)
for c in rep.classifications:
    print(c.k, c.verdict, "signature", c.signature)
    if c.witness_positive and c.witness_negative:
        print("   positive minor", c.witness_positive.to_dict())
        print("   negative minor", c.witness_negative.to_dict())

# a nonsingular matrix that is not SR_2 need not map P^2_- into itself
B = fixture("counter3")
x = np.array([19.0, -6.0, -2.0])
print("Bx =", B @ x, " s_minus:", s_minus(x), "->", s_minus(B @ x))
print(verify_vdp(B, mode="weak", vectors=[x]).to_dict())

# for a totally positive matrix the strong property s_plus(Tx) <= s_minus(x) holds
T = gen_totally_positive(5, rng_seed=0)
rep = verify_vdp(T, samples=1000, mode="strong")
print("strong VDP on 1000 samples:", rep.passed, rep.counts)
