"""Grad and discrete maximum-entropy closures.

Grad expands around the Maxwellian with Hermite polynomials; maximum entropy
solves for grid values of f that match the moments.  Near equilibrium both
are accurate; far from it the extended Gramian closure does better.
"""
from gramclosure import BimodalParams, Grid, close, grad_close, maxent_close, moments

grid = Grid(-4.0, 6.0, 1000)
print(" v2    extended_even    grad         maxent")
for v2 in (0.5, 1.5, 2.5, 4.0):
    u = moments(BimodalParams(v2=v2), 5)
    errs = [abs(close(u[:5], "extended_even").u_next - u[5]),
            abs(grad_close(u[:5]).u_next - u[5])]
    res, sol = maxent_close(u[:5], grid)
    errs.append(abs(res.u_next - u[5]))
    print(f"{v2:4.1f}  " + "  ".join(f"{e / abs(u[5]):.3e}   " for e in errs)
          + f"  ({sol.iterations} Newton steps)")
