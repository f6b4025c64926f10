"""Characteristic polynomials, their roots and strict-hyperbolicity verdicts.

For a closure ``u_{M+1} = C(u_0..u_M)`` the flux Jacobian of the moment
system is a companion matrix whose characteristic polynomial is

    P(z) = z**(M+1) - sum_j dC/du_j z**j.

:func:`char_poly_analytic` builds ``P`` from the factorized forms that hold
for the Gramian family, :func:`char_poly_fd` builds it from central finite
differences of the closure map.  The two are independent routes to the
same object.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg

from .closures import ClosureSpec, close
from .errors import ClosureError, SizeMismatchError
from .moment_core import (
    MonicPolynomial,
    as_moments,
    gram_solve,
    moment_slice,
    orthogonal_poly,
    poly_moment,
    sigma,
)

IMAG_RTOL = 1e-8
MULT_RTOL = 1e-7
FD_RSTEP = 1e-6


@dataclass(frozen=True)
class CharPoly:
    poly: MonicPolynomial
    factors: Optional[tuple] = None

    @property
    def coeffs(self):
        return self.poly.coeffs


@dataclass(frozen=True)
class RootSet:
    """Sorted real roots of a polynomial.

    Roots whose imaginary part exceeded the truncation threshold are kept
    separately in ``nonreal``; ``imag_residuals`` holds the magnitudes of
    the imaginary parts that were discarded for the real ones.
    ``multiplicity_tol`` is relative to ``max - min + 1`` of the roots.
    """
    roots: np.ndarray
    imag_residuals: np.ndarray
    multiplicity_tol: float
    nonreal: np.ndarray

    @property
    def all_real(self):
        return self.nonreal.size == 0

    def __len__(self):
        return len(self.roots) + len(self.nonreal)


@dataclass(frozen=True)
class HyperbolicityVerdict:
    status: str  # 'strict' | 'real_with_multiplicity' | 'nonreal_roots'
    min_gap: float
    interlaced: Optional[bool]
    roots: RootSet


def _spread(values):
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 1.0
    return float(values.max() - values.min() + 1.0)


def poly_roots(p, imag_rtol=IMAG_RTOL, mult_rtol=MULT_RTOL):
    """Roots of a monic polynomial from companion-matrix eigenvalues.

    Eigenvalues with ``|Im| <= imag_rtol * spread`` are taken as real.  A
    conjugate pair with ``|Im| <= mult_rtol * spread`` is taken as a real
    double root, since rounding splits a double root by about ``sqrt(eps)``.
    ``spread`` is ``max - min + 1`` of the real parts.
    """
    c = np.asarray(getattr(p, "coeffs", p), dtype=float)
    deg = len(c) - 1
    if deg < 1:
        raise ValueError("polynomial must have degree >= 1")
    comp = np.zeros((deg, deg))
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    # geev balances the matrix before the QR iteration
    ev = linalg.eigvals(comp, check_finite=False)
    spread = _spread(ev.real)
    is_real = np.abs(ev.imag) <= imag_rtol * spread
    # a double root splits by ~sqrt(eps) into a conjugate pair; below the
    # multiplicity gap it is indistinguishable from a real double root
    is_real |= np.abs(ev.imag) <= mult_rtol * spread
    real = ev[is_real]
    order = np.argsort(real.real)
    return RootSet(
        roots=real.real[order],
        imag_residuals=np.abs(real.imag[order]),
        multiplicity_tol=mult_rtol,
        nonreal=ev[~is_real],
    )


def merge_roots(*sets):
    """Union of several root sets (used for factorized polynomials)."""
    roots = np.concatenate([s.roots for s in sets])
    order = np.argsort(roots)
    return RootSet(
        roots=roots[order],
        imag_residuals=np.concatenate([s.imag_residuals for s in sets])[order],
        multiplicity_tol=max(s.multiplicity_tol for s in sets),
        nonreal=np.concatenate([s.nonreal for s in sets]),
    )


def p_tilde(w, n):
    """``c**(n+1) - (1, c, ..., c**(n-1)) G_{n-1}^{-1} u_{n+1,2n}``."""
    a, _ = gram_solve(w, n - 1, moment_slice(w, n + 1, 2 * n))
    coeffs = np.zeros(n + 2)
    coeffs[:n] = -a
    coeffs[-1] = 1.0
    return MonicPolynomial(coeffs)


def next_poly(w, n):
    """``p_{n+1}`` in its Schur form; needs only ``G_{n-1}`` to be invertible."""
    s_nn = sigma(w, n, n)
    s_n_np1 = sigma(w, n, n + 1)
    if s_nn == 0.0:
        raise ClosureError("sigma_{n,n} vanishes; p_{n+1} undefined")
    return p_tilde(w, n).minus(orthogonal_poly(w, n), s_n_np1 / s_nn)


def _extend(u, spec, u_next):
    if u_next is None:
        u_next = close(u, spec).u_next
    return np.append(u, u_next)


def char_poly_analytic(u, spec, u_next=None):
    """Factorized characteristic polynomial of a Gramian closure.

    Parameters
    ----------
    u : array_like
        Moments ``u_0..u_M``.
    spec : ClosureSpec or str
        One of the four Gramian kinds.
    u_next : float, optional
        Value used for ``u_{M+1}`` inside the factors.  By default the
        closure's own prediction, the state of the closed system;
        passing another value evaluates the same factorized formula at a
        different state (e.g. the Maxwellian moment).
    """
    if not isinstance(spec, ClosureSpec):
        spec = ClosureSpec(spec)
    if not spec.is_gramian:
        raise ClosureError(f"no factorized characteristic polynomial for {spec.kind}")
    u = as_moments(u)
    M = len(u) - 1
    w = _extend(u, spec, u_next)
    chi = spec.resolve_chi(M)

    if spec.kind in ("gramian_even", "extended_even"):
        n = M // 2
        pn = orthogonal_poly(w, n)
        second = next_poly(w, n)
        if spec.kind == "extended_even":
            ratio = sigma(w, n, n) / sigma(w, n - 1, n - 1)
            second = second.minus(orthogonal_poly(w, n - 1), chi * ratio)
        factors = (pn, second)
    elif spec.kind == "gramian_odd":
        n = (M + 1) // 2
        pn = orthogonal_poly(w, n)
        factors = (pn, pn)
    else:
        n = (M + 1) // 2
        ratio = sigma(w, n - 1, n) / sigma(w, n - 1, n - 1)
        second = p_tilde(w, n).minus(orthogonal_poly(w, n), 2.0 * chi * ratio)
        factors = (orthogonal_poly(w, n - 1), second)

    return CharPoly(poly=factors[0] * factors[1], factors=factors)


def closure_jacobian_fd(u, spec, rstep=FD_RSTEP):
    """Central finite-difference gradient of the closure map."""
    if not isinstance(spec, ClosureSpec):
        spec = ClosureSpec(spec)
    u = np.array(as_moments(u))
    grad = np.empty(len(u))
    for j in range(len(u)):
        h = rstep * max(1.0, abs(u[j]))
        up, dn = u.copy(), u.copy()
        up[j] += h
        dn[j] -= h
        grad[j] = (close(up, spec).u_next - close(dn, spec).u_next) / (2 * h)
    return grad


def char_poly_fd(u, spec, step=FD_RSTEP):
    """Characteristic polynomial from a finite-difference Jacobian.

    ``step`` is relative: coordinate ``j`` is perturbed by
    ``step * max(1, |u_j|)``.
    """
    grad = closure_jacobian_fd(u, spec, step)
    return CharPoly(poly=MonicPolynomial(np.append(-grad, 1.0)), factors=None)


def recursion_coeffs(u, n_max):
    """Three-term recursion coefficients of the monic orthogonal polynomials.

    ``p_{k+1}(z) = (z - alpha_k) p_k(z) - beta_k p_{k-1}(z)``.

    Returns
    -------
    alpha : ndarray, shape (n_max,)
        ``alpha_0 .. alpha_{n_max-1}``.
    beta : ndarray, shape (n_max + 1,)
        ``beta_0 = u_0`` followed by ``beta_k = sigma_{k,k}/sigma_{k-1,k-1}``.
    """
    u = as_moments(u)
    if 2 * n_max > len(u) - 1:
        raise ClosureError(f"recursion up to {n_max} needs u_0..u_{2 * n_max}")
    norms = [sigma(u, k, k) for k in range(n_max + 1)]
    alpha = np.empty(n_max)
    for k in range(n_max):
        pk = orthogonal_poly(u, k)
        sq = np.polynomial.polynomial.polymul(pk.coeffs, pk.coeffs)
        alpha[k] = poly_moment(sq, u, 1) / norms[k]
    beta = np.empty(n_max + 1)
    beta[0] = u[0]
    beta[1:] = np.asarray(norms[1:]) / np.asarray(norms[:-1])
    return alpha, beta


def jacobi_matrix(alpha, beta, n):
    """Symmetric tridiagonal ``J_n`` whose eigenvalues are the roots of ``p_{n+1}``."""
    off = np.sqrt(np.asarray(beta[1:n + 1], dtype=float))
    return np.diag(np.asarray(alpha[:n + 1], dtype=float)) + np.diag(off, 1) + np.diag(off, -1)


def modified_beta(u, n, chi):
    """Recursion coefficient of the extended-even factor: ``(1 + chi) beta_n``."""
    return (1.0 + chi) * sigma(u, n, n) / sigma(u, n - 1, n - 1)


def check_interlacing(a, b, tol=None):
    """True iff ``b_1 < a_1 < b_2 < ... < a_n < b_{n+1}`` with gaps above ``tol``."""
    ra = np.sort(np.asarray(getattr(a, "roots", a), dtype=float))
    rb = np.sort(np.asarray(getattr(b, "roots", b), dtype=float))
    for s in (a, b):
        if isinstance(s, RootSet) and not s.all_real:
            return False
    if len(rb) != len(ra) + 1:
        raise SizeMismatchError(f"need |b| = |a| + 1, got {len(ra)} and {len(rb)}")
    if tol is None:
        tol = MULT_RTOL * _spread(np.concatenate([ra, rb]))
    merged = np.empty(len(ra) + len(rb))
    merged[0::2] = rb
    merged[1::2] = ra
    return bool(np.all(np.diff(merged) > tol))


def classify(roots):
    """Verdict status and scaled minimal gap for a root set."""
    if not roots.all_real:
        return "nonreal_roots", float("nan")
    r = roots.roots
    gap = float(np.min(np.diff(r))) / _spread(r) if len(r) > 1 else float("inf")
    if gap <= roots.multiplicity_tol:
        return "real_with_multiplicity", gap
    return "strict", gap


def verdict(u, spec, u_next=None):
    """Strict-hyperbolicity verdict from the analytic characteristic polynomial.

    Roots are computed factor by factor, so repeated factors give exactly
    coincident roots rather than a cluster split by rounding.
    """
    if not isinstance(spec, ClosureSpec):
        spec = ClosureSpec(spec)
    cp = char_poly_analytic(u, spec, u_next=u_next)
    f1, f2 = (poly_roots(f) if f.degree > 0 else None for f in cp.factors)
    sets = [s for s in (f1, f2) if s is not None]
    roots = merge_roots(*sets)
    status, gap = classify(roots)
    interlaced = None
    if f1 is not None and f2 is not None and len(f2) == len(f1) + 1:
        interlaced = check_interlacing(f1, f2)
    return HyperbolicityVerdict(status=status, min_gap=gap, interlaced=interlaced,
                                roots=roots)
