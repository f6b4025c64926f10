"""Hidden-truth velocity distributions used to benchmark closures.

Three families: a two-Maxwellian bimodal distribution, the piecewise
electron-hole distribution of trapped/untrapped electrons, and the
Mott-Smith shock ansatz (a bimodal distribution whose components obey the
Rankine-Hugoniot jump conditions).
"""
import math
import warnings
from dataclasses import dataclass, replace
from typing import Union

import numpy as np
from scipy import integrate

from .errors import ClosureError, QuadratureError
from .gauge import GaugeParams, equilibrium_moments

QUAD_RTOL = 1e-10
TAIL_DENSITY = 1e-16


@dataclass(frozen=True)
class BimodalParams:
    rho1: float = 0.4
    v1: float = 0.0
    theta1: float = 1.0
    rho2: float = 0.6
    v2: float = 0.0
    theta2: float = 1.0

    def __post_init__(self):
        if not (self.rho1 > 0 and self.rho2 > 0):
            raise ClosureError("bimodal densities must be positive")
        if not (self.theta1 > 0 and self.theta2 > 0):
            raise ClosureError("bimodal temperatures must be positive")

    def components(self):
        return (GaugeParams(self.rho1, self.v1, self.theta1),
                GaugeParams(self.rho2, self.v2, self.theta2))


@dataclass(frozen=True)
class ElectronHoleParams:
    phi: float = 0.0
    v0: float = 1.5
    beta: float = -0.05

    def __post_init__(self):
        if not self.phi >= 0:
            raise ClosureError(f"phi must be non-negative, got {self.phi!r}")


@dataclass(frozen=True)
class MottSmithParams:
    mach: float = 4.0
    gamma: float = 5.0 / 3.0
    x: float = 0.0

    def __post_init__(self):
        if not self.mach > 1:
            raise ClosureError(f"Mach number must exceed 1, got {self.mach!r}")
        if not self.gamma > 1:
            raise ClosureError(f"gamma must exceed 1, got {self.gamma!r}")


DistributionSpec = Union[BimodalParams, ElectronHoleParams, MottSmithParams]

FAMILIES = {
    "bimodal": BimodalParams,
    "electron_hole": ElectronHoleParams,
    "mott_smith": MottSmithParams,
}


def family_name(spec):
    for name, cls in FAMILIES.items():
        if isinstance(spec, cls):
            return name
    raise TypeError(f"not a distribution spec: {spec!r}")


def with_parameter(spec, name, value):
    """Copy of ``spec`` with one field replaced."""
    return replace(spec, **{name: float(value)})


def rankine_hugoniot(mach, gamma):
    """Downstream ``(rho*, v*, theta*)`` for an upstream state ``(1, Ma, 1)``."""
    m2 = mach * mach
    rho = m2 * (gamma + 1) / (2 + m2 * (gamma - 1))
    v = mach / rho
    theta = (1 - gamma + 2 * gamma * m2) / ((1 + gamma) * rho)
    return rho, v, theta


def mott_smith_components(mach, gamma, x):
    """Bimodal parameters of the Mott-Smith distribution at shock position ``x``."""
    if not (mach > 1 and gamma > 1):
        raise ClosureError("Mott-Smith needs mach > 1 and gamma > 1")
    rho_s, v_s, theta_s = rankine_hugoniot(mach, gamma)
    # logistic weight without overflow for large |x|
    w1 = 0.5 * (1.0 - math.tanh(0.5 * x))
    sg = math.sqrt(gamma)
    return BimodalParams(rho1=w1, v1=mach * sg, theta1=1.0,
                         rho2=(1.0 - w1) * rho_s, v2=v_s * sg, theta2=theta_s)


def _maxwellian(c, rho, v, theta):
    return rho / np.sqrt(2 * np.pi * theta) * np.exp(-(c - v) ** 2 / (2 * theta))


def _electron_hole_pdf(c, p):
    c = np.asarray(c, dtype=float)
    d = c * c - 2.0 * p.phi
    untrapped = d > 0
    # sign(0) := +1
    sgn = np.where(c >= 0, 1.0, -1.0)
    root = np.sqrt(np.where(untrapped, d, 0.0))
    e_free = -0.5 * (sgn * root - p.v0) ** 2
    e_trap = -0.5 * (p.beta * d + p.v0 ** 2)
    return np.exp(np.where(untrapped, e_free, e_trap)) / np.sqrt(2 * np.pi)


def pdf(spec, c):
    """Density value(s) of a distribution spec at velocity ``c``."""
    if isinstance(spec, MottSmithParams):
        spec = mott_smith_components(spec.mach, spec.gamma, spec.x)
    if isinstance(spec, BimodalParams):
        return sum(_maxwellian(c, g.rho, g.v, g.theta) for g in spec.components())
    if isinstance(spec, ElectronHoleParams):
        return _electron_hole_pdf(c, spec)
    raise TypeError(f"not a distribution spec: {spec!r}")


def mixture_moments(components, M):
    """Exact raw moments of a weighted sum of Maxwellians."""
    return sum(equilibrium_moments(g, M) for g in components)


def _tail_bound(spec, M, start):
    """Smallest |c| (>= start) where density and ``|c|**M * density`` are negligible."""
    L = start
    while True:
        vals = pdf(spec, np.array([-L, L]))
        if np.all(vals < TAIL_DENSITY) and np.all(vals * L ** M < TAIL_DENSITY):
            return L
        L *= 1.25
        if L > 1e4:
            raise QuadratureError("could not bound the distribution tails")


def quadrature_moments(spec, M, rtol=QUAD_RTOL, breakpoints=()):
    """Raw moments by adaptive Gauss-Kronrod quadrature over a padded domain."""
    L = _tail_bound(spec, M, 8.0)
    pts = sorted({-L, L, *[b for b in breakpoints if -L < b < L]})
    out = np.empty(M + 1)
    for k in range(M + 1):
        total, err, mag = 0.0, 0.0, 0.0
        for a, b in zip(pts[:-1], pts[1:]):
            with warnings.catch_warnings():
                warnings.simplefilter("error", integrate.IntegrationWarning)
                try:
                    val, e = integrate.quad(lambda c: c ** k * pdf(spec, c), a, b,
                                            epsabs=0.0, epsrel=rtol, limit=500)
                except integrate.IntegrationWarning as exc:
                    raise QuadratureError(f"moment {k} on [{a}, {b}]: {exc}") from exc
            total += val
            err += e
            mag += abs(val)
        # pieces of odd moments cancel; judge accuracy against their magnitude
        if err > max(rtol * mag, 1e-300):
            raise QuadratureError(f"moment {k}: error estimate {err:.3e} too large")
        out[k] = total
    return out


def moments(spec, M):
    """Raw moments ``u_0..u_M`` of a distribution spec."""
    if isinstance(spec, MottSmithParams):
        spec = mott_smith_components(spec.mach, spec.gamma, spec.x)
    if isinstance(spec, BimodalParams):
        return mixture_moments(spec.components(), M)
    if isinstance(spec, ElectronHoleParams):
        edge = math.sqrt(2.0 * spec.phi)
        return quadrature_moments(spec, M, breakpoints=(-edge, 0.0, edge))
    raise TypeError(f"not a distribution spec: {spec!r}")
