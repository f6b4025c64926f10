"""Gramian moment closures built from orthogonal polynomials of Hankel matrices.

Submodules
----------
moment_core     Gram matrices, monic orthogonal polynomials, sigma scalars
closures        the four Gramian closures and the ``close`` dispatcher
hyperbolicity   characteristic polynomials, roots, interlacing, verdicts
gauge           gauge transforms, invariance residuals, Maxwellian moments
baselines       Grad and discrete maximum-entropy closures
distributions   bimodal, electron-hole and Mott-Smith test distributions
experiments     sweeps, convergence studies, CSV output
"""
from .baselines import Grid, grad_close, maxent_close
from .closures import (
    ClosureResult,
    ClosureSpec,
    close,
    close_extended_even,
    close_extended_odd,
    close_gramian_even,
    close_gramian_odd,
)
from .distributions import (
    BimodalParams,
    ElectronHoleParams,
    MottSmithParams,
    moments,
    mott_smith_components,
    pdf,
)
from .errors import ClosureError
from .gauge import GaugeParams, equilibrium_moments, invariance_residuals, transform_moments
from .hyperbolicity import (
    char_poly_analytic,
    char_poly_fd,
    check_interlacing,
    poly_roots,
    recursion_coeffs,
    verdict,
)
from .moment_core import (
    MonicPolynomial,
    build_gram,
    orthogonal_poly,
    poly_moment,
    sigma_values,
    spd_solve,
)

__version__ = "0.1.0"
