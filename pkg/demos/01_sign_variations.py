"""Sign variations and the cones they define."""
import numpy as np

from kposi import cone_membership, s_minus, s_plus

y = np.array([1.0, -1.0, 0.0, -np.pi])
print("y =", y)
print("s_minus(y) =", s_minus(y))  # zeros deleted: (+, -, -) has one change
print("s_plus(y)  =", s_plus(y))   # the zero may become +: (+, -, +, -)

# P^k_- holds vectors with at most k-1 changes after deleting zeros,
# P^k_+ those with at most k-1 changes for every filling of the zeros
for k in range(1, 5):
    c = cone_membership(y, k)
    print(f"k={k}: in P_minus={c.in_P_minus}, in P_plus={c.in_P_plus}")

# a tiny entry is a sign or a zero depending on the threshold
z = np.array([1.0, -1e-13, 1.0])
print(s_minus(z), s_minus(z, zero_tol=1e-10))
