"""Characteristic polynomials and strict hyperbolicity.

The flux Jacobian of a closed moment system has the characteristic
polynomial z^(M+1) - sum_j dC/du_j z^j.  For Gramian closures it factors
into orthogonal polynomials; a finite-difference Jacobian gives the same
coefficients independently.
"""
import numpy as np

from gramclosure import char_poly_analytic, char_poly_fd, verdict
from gramclosure.closures import ClosureSpec

std = np.array([1.0, 0.0, 1.0, 0.0, 3.0])
for kind in ("gramian_even", "extended_even"):
    a = char_poly_analytic(std, kind)
    f = char_poly_fd(std, kind)
    v = verdict(std, kind)
    print(f"{kind}: coefficients {np.round(a.coeffs, 12)}")
    print(f"  finite differences differ by {np.max(np.abs(a.coeffs - f.coeffs)):.1e}")
    print(f"  roots {np.round(v.roots.roots, 6)} -> {v.status}, interlaced = {v.interlaced}")

# the simple odd closure always produces double roots
v = verdict(std[:4], "gramian_odd")
print(f"\ngramian_odd roots {np.round(v.roots.roots, 6)} -> {v.status}")

# interlacing of the extended even factor holds for chi > -1 and breaks at -1
for chi in (-0.5, 0.0, 1.5, 3.0, -1.0):
    v = verdict(std, ClosureSpec("extended_even", chi=chi))
    print(f"chi = {chi:5.1f}: interlaced = {v.interlaced}, status = {v.status}")
