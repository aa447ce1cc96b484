"""Parallelotope dynamics: wedges of trajectories follow the compound and its Perron vector."""
import numpy as np

from kposi import compound, fixture, wedge_dynamics

A = fixture("wedge3")
print("B = A^(2):\n", np.round(compound(A, 2), 3))

tr = wedge_dynamics(A, [[1, 0, 0], [0, 1, 0]], steps=15)
print("rho(B) =", round(tr.rho, 4), " vB =", np.round(tr.vB, 4), " wB =", np.round(tr.wB, 4))
print("eta(15), compound path:", np.round(tr.eta[15], 4))
print("eta(15), wedged states:", np.round(tr.eta_wedged[15], 4))
print("Perron prediction     :", np.round(tr.predicted_eta(15), 4))
print("scaled error by step  :", np.round(tr.scaled_error, 4))
