"""Predicting the next moment with the four Gramian closures.

The moments of N(1, 1) are 1, 1, 2, 4, 10, 26, ...  Given u_0..u_4, the
simple even closure predicts 20 while the extended one (chi = 3/2) hits the
exact value 26.  The odd closures work from u_0..u_3.
"""
import numpy as np

from gramclosure import BimodalParams, close, moments

u = np.array([1.0, 1.0, 2.0, 4.0, 10.0, 26.0])
for kind in ("gramian_even", "extended_even", "grad"):
    res = close(u[:5], kind)
    print(f"{kind:14s} u_5 = {res.u_next:10.6f}   chi = {res.chi_used}")
for kind in ("gramian_odd", "extended_odd"):
    res = close(u[:4], kind)
    print(f"{kind:14s} u_4 = {res.u_next:10.6f}   chi = {res.chi_used}")

# a bimodal distribution far from equilibrium
truth = moments(BimodalParams(v2=4.0), 11)
print("\nbimodal v2 = 4, extended_even relative error by order")
for M in (4, 6, 8, 10):
    pred = close(truth[:M + 1], "extended_even").u_next
    print(f"  M = {M:2d}: {abs(pred - truth[M + 1]) / abs(truth[M + 1]):.3e}")
