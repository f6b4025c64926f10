"""Gauge transformations of moments, invariance residuals, Maxwellian moments.

The gauge ``(rho, v, theta)`` maps a distribution ``f`` to
``g(ct) = theta**0.5 / rho * f(theta**0.5 * ct - v)``, i.e. the velocity
becomes ``ct = (c + v) / sqrt(theta)``.  On moments this is the linear map

    ut_k = 1 / (rho theta**(k/2)) * sum_j binom(k, j) v**j u_{k-j}.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import comb

from .closures import ClosureSpec, close
from .errors import ClosureError
from .hyperbolicity import char_poly_analytic, char_poly_fd
from .moment_core import as_moments, poly_moment


@dataclass(frozen=True)
class GaugeParams:
    rho: float = 1.0
    v: float = 0.0
    theta: float = 1.0

    def __post_init__(self):
        if not self.rho > 0:
            raise ClosureError(f"rho must be positive, got {self.rho!r}")
        if not self.theta > 0:
            raise ClosureError(f"theta must be positive, got {self.theta!r}")

    def inverse(self):
        """Gauge undoing this one: ``(1/rho, -v/sqrt(theta), 1/theta)``."""
        return GaugeParams(1.0 / self.rho, -self.v / np.sqrt(self.theta),
                           1.0 / self.theta)

    def then(self, other):
        """Composition: apply ``self`` first, then ``other``."""
        s = np.sqrt(self.theta)
        return GaugeParams(self.rho * other.rho,
                           self.v + s * other.v,
                           self.theta * other.theta)


IDENTITY = GaugeParams()


def transform_matrix(g, size):
    """Lower-triangular matrix ``Q`` with ``ut = Q @ u`` for ``size`` moments."""
    k = np.arange(size)[:, None]
    j = np.arange(size)[None, :]
    # entry (k, m) multiplies u_m = u_{k-j} with j = k - m
    shift = k - j
    Q = np.where(shift >= 0, comb(k, np.maximum(shift, 0)) * float(g.v) ** np.maximum(shift, 0), 0.0)
    Q /= g.rho * g.theta ** (np.arange(size)[:, None] / 2.0)
    return Q


def transform_moments(u, g):
    """Moments of the gauge-transformed distribution."""
    u = np.asarray(u, dtype=float)
    return transform_matrix(g, len(u)) @ u


def equilibrium_moments(g, M):
    """Raw moments ``u_0..u_M`` of ``rho * N(v, theta)``."""
    u = np.empty(M + 1)
    u[0] = g.rho
    if M >= 1:
        u[1] = g.rho * g.v
    for k in range(2, M + 1):
        u[k] = g.v * u[k - 1] + (k - 1) * g.theta * u[k - 2]
    return u


def frame_of(u):
    """Density, mean velocity and temperature from ``u_0, u_1, u_2``."""
    rho = float(u[0])
    v = float(u[1]) / rho
    theta = float(u[2]) / rho - v * v
    return rho, v, theta


class InvarianceResiduals(NamedTuple):
    r1: float
    r2: float
    r3: float
    scale: float


def invariance_residuals(u, spec, method="analytic"):
    """The three gauge-invariance integrals of the characteristic polynomial.

    ``r1 = int P f``, ``r2 = int P' f`` and ``r3 = int c P' f`` evaluated
    exactly on ``u_0..u_M`` extended by the closure's ``u_{M+1}``.  A closure
    is gauge invariant iff all three vanish for every realizable input.

    ``method`` selects the characteristic polynomial: ``"analytic"``
    (factorized form) or ``"fd"`` (finite-difference Jacobian, works for
    any closure kind).
    """
    if not isinstance(spec, ClosureSpec):
        spec = ClosureSpec(spec)
    u = as_moments(u)
    w = np.append(u, close(u, spec).u_next)
    if method == "analytic":
        cp = char_poly_analytic(u, spec)
    elif method == "fd":
        cp = char_poly_fd(u, spec)
    else:
        raise ValueError(f"unknown method {method!r}")
    d = cp.poly.deriv()
    r1 = poly_moment(cp.coeffs, w, 0)
    r2 = poly_moment(d, w, 0)
    r3 = poly_moment(d, w, 1)
    M = len(u) - 1
    n = M // 2 if M % 2 == 0 else (M + 1) // 2
    scale = max(1.0, abs(w[min(2 * n, len(w) - 1)]))
    return InvarianceResiduals(r1, r2, r3, scale)
