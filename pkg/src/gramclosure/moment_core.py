"""Moment vectors, Hankel/Gram matrices and monic orthogonal polynomials.

A moment vector is a 1D float array ``u`` with ``u[k] = int c**k f(c) dc``
for ``k = 0..M``.  Everything in the closure family is assembled from
three ingredients computed here:

* the Gram matrix ``G_n`` with entries ``u[i + j]``,
* the monic orthogonal polynomial
  ``p_n(c) = c**n - (1, c, ..., c**(n-1)) G_{n-1}^{-1} u[n:2n]``,
* the scalars ``sigma_{n,m} = int p_n(c) c**m f(c) dc``.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import linalg

from .errors import (
    ClosureError,
    MissingMomentError,
    NotPositiveDefiniteError,
    OrderTooHighError,
)

logger = logging.getLogger(__name__)

#: Gram condition numbers above this are logged.
COND_WARN = 1e12


def as_moments(u, positive_mass=True):
    """Validate and copy a moment vector into a read-only float array."""
    arr = np.array(u, dtype=float).ravel()
    if arr.size == 0:
        raise ClosureError("empty moment vector")
    if not np.all(np.isfinite(arr)):
        raise ClosureError("moment vector contains non-finite values")
    if positive_mass and not arr[0] > 0:
        raise ClosureError(f"u_0 must be positive, got {arr[0]!r}")
    arr.setflags(write=False)
    return arr


def max_order(u):
    return len(u) - 1


def moment_slice(u, k, l):
    """Return ``(u_k, ..., u_l)`` with inclusive bounds (empty if l < k)."""
    if l >= len(u):
        raise MissingMomentError(f"needs u_{l}, only u_0..u_{len(u) - 1} given")
    if l < k:
        return np.zeros(0)
    return np.asarray(u[k:l + 1], dtype=float)


def build_gram(u, n):
    """Hankel matrix ``G_n[i, j] = u[i + j]`` for ``0 <= i, j <= n``.

    ``n = -1`` gives the empty matrix.
    """
    if 2 * n > len(u) - 1:
        raise OrderTooHighError(
            f"G_{n} needs moments up to u_{2 * n}, have M = {len(u) - 1}")
    idx = np.add.outer(np.arange(n + 1), np.arange(n + 1))
    return np.asarray(u, dtype=float)[idx]


def spd_solve(G, b):
    """Solve ``G x = b`` for symmetric positive definite ``G`` via Cholesky."""
    x, _ = spd_solve_cond(G, b)
    return x


def spd_solve_cond(G, b):
    """Like :func:`spd_solve` but also return the 2-norm condition number."""
    G = np.atleast_2d(np.asarray(G, dtype=float))
    b = np.asarray(b, dtype=float)
    if G.size == 0:
        return np.zeros(0), 1.0
    if G.shape[0] != G.shape[1] or b.shape[0] != G.shape[0]:
        raise ValueError(f"shape mismatch: G {G.shape}, b {b.shape}")
    try:
        factor = linalg.cho_factor(G, lower=True, check_finite=False)
    except linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(
            f"Gram matrix of order {G.shape[0] - 1} is not positive definite"
        ) from exc
    x = linalg.cho_solve(factor, b, check_finite=False)
    # cond from the Cholesky diagonal is a cheap lower bound; use the exact one
    cond = np.linalg.cond(G)
    if cond > COND_WARN:
        logger.warning("Gram matrix of order %d has condition number %.3e",
                       G.shape[0] - 1, cond)
    return x, cond


def gram_solve(u, n, b):
    """Solve ``G_n x = b`` built from ``u``; returns ``(x, cond)``."""
    return spd_solve_cond(build_gram(u, n), b)


class MonicPolynomial:
    """Real polynomial with unit leading coefficient.

    Coefficients are stored in ascending order of power.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=float).ravel()
        if c.size == 0:
            raise ValueError("polynomial needs at least one coefficient")
        if c[-1] != 1.0:
            raise ValueError(f"leading coefficient must be 1, got {c[-1]!r}")
        c.setflags(write=False)
        self._coeffs = c

    @classmethod
    def from_roots(cls, roots):
        return cls(npoly.polyfromroots(roots).real)

    @property
    def coeffs(self):
        return self._coeffs

    @property
    def degree(self):
        return len(self._coeffs) - 1

    def __call__(self, z):
        return npoly.polyval(z, self._coeffs)

    def __mul__(self, other):
        if not isinstance(other, MonicPolynomial):
            return NotImplemented
        prod = npoly.polymul(self._coeffs, other._coeffs)
        prod[-1] = 1.0
        return MonicPolynomial(prod)

    def minus(self, other, scale=1.0):
        """Return ``self - scale * other`` for a lower-degree ``other``."""
        oc = np.asarray(getattr(other, "coeffs", other), dtype=float)
        if len(oc) > self.degree:
            raise ValueError("subtracted polynomial must have lower degree")
        out = self._coeffs.copy()
        out[:len(oc)] -= scale * oc
        return MonicPolynomial(out)

    def deriv(self):
        """Derivative coefficients (ascending, not monic)."""
        return npoly.polyder(self._coeffs)

    def __eq__(self, other):
        if not isinstance(other, MonicPolynomial):
            return NotImplemented
        return np.array_equal(self._coeffs, other._coeffs)

    def __hash__(self):
        return hash(self._coeffs.tobytes())

    def __repr__(self):
        return f"MonicPolynomial({self._coeffs.tolist()})"


def _gram_coeffs(u, n):
    """``G_{n-1}^{-1} u_{n,2n-1}`` plus the condition number of ``G_{n-1}``."""
    if 2 * n - 1 > len(u) - 1:
        raise MissingMomentError(
            f"p_{n} needs moments up to u_{2 * n - 1}, have M = {len(u) - 1}")
    return gram_solve(u, n - 1, moment_slice(u, n, 2 * n - 1))


def orthogonal_poly(u, n):
    """Monic orthogonal polynomial ``p_n`` of the moment functional ``u``.

    Parameters
    ----------
    u : array_like
        Moments ``u_0..u_M`` with ``M >= 2n - 1``.
    n : int
        Degree.

    Returns
    -------
    MonicPolynomial
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    if n == 0:
        return MonicPolynomial([1.0])
    a, _ = _gram_coeffs(u, n)
    return MonicPolynomial(np.concatenate([-a, [1.0]]))


def poly_moment(p, u, m=0):
    """Evaluate ``int p(c) c**m f(c) dc`` as a combination of moments.

    ``p`` may be a :class:`MonicPolynomial` or an ascending coefficient array.
    """
    c = np.asarray(getattr(p, "coeffs", p), dtype=float)
    top = len(c) - 1 + m
    if top > len(u) - 1:
        raise MissingMomentError(
            f"needs u_{top}, only u_0..u_{len(u) - 1} given")
    return float(np.dot(c, np.asarray(u[m:top + 1], dtype=float)))


def sigma(u, n, m):
    """``sigma_{n,m} = u_{n+m} - u_{m,m+n-1}^T G_{n-1}^{-1} u_{n,2n-1}``."""
    if n == 0:
        return float(moment_slice(u, m, m)[0])
    a, _ = _gram_coeffs(u, n)
    return float(moment_slice(u, n + m, n + m)[0]
                 - moment_slice(u, m, m + n - 1) @ a)


@dataclass(frozen=True)
class SigmaValues:
    """``sigma_{n,n}``, ``sigma_{n,n+1}`` and ``sigma_{n-1,n+1}``.

    Entries that need moments beyond the given vector are ``None``.
    """
    n: int
    sigma_nn: Optional[float]
    sigma_n_np1: Optional[float]
    sigma_nm1_np1: Optional[float]


def sigma_values(u, n):
    def attempt(k, m):
        try:
            return sigma(u, k, m)
        except MissingMomentError:
            return None

    return SigmaValues(
        n=n,
        sigma_nn=attempt(n, n),
        sigma_n_np1=attempt(n, n + 1),
        sigma_nm1_np1=attempt(n - 1, n + 1) if n >= 1 else None,
    )
