"""An SSR_3 system keeps s_plus(x(j)) <= 2 once the state has entered P^3_-."""
import numpy as np

from kposi import fixture, simulate
from kposi.io import trace_to_csv

A = fixture("example1")
trace = simulate(A, [1, 1, -1, 1], steps=20, k=3)
print("s_minus(x(0)) =", trace.s_minus_trace[0])
print("s_plus(x(j))  =", trace.s_plus_trace)
print(trace.summary())

# the same numbers as CSV, ready for plotting elsewhere
print(trace_to_csv(trace).splitlines()[:4])
