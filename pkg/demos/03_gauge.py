"""Gauge transformations and invariance.

A gauge (rho, v, theta) rescales density, shifts and scales velocity.  A
closure is gauge invariant when closing and transforming commute.  The
three residuals r1, r2, r3 measure this at the level of the characteristic
polynomial.
"""
import numpy as np

from gramclosure import GaugeParams, close, invariance_residuals, moments, transform_moments
from gramclosure.distributions import BimodalParams

u = moments(BimodalParams(v2=2.0), 5)[:5]
g = GaugeParams(2.0, 1.5, 0.5)
for kind in ("gramian_even", "extended_even"):
    closed_then_moved = transform_moments(np.append(u, close(u, kind).u_next), g)[5]
    moved_then_closed = close(transform_moments(u, g), kind).u_next
    print(f"{kind:14s} close->transform {closed_then_moved:12.6f}   "
          f"transform->close {moved_then_closed:12.6f}")

print()
for kind in ("gramian_even", "extended_even", "gramian_odd"):
    w = u if kind.endswith("even") else u[:4]
    r = invariance_residuals(w, kind)
    print(f"{kind:14s} r1 = {r.r1: .2e}  r2 = {r.r2: .2e}  r3 = {r.r3: .2e}")
