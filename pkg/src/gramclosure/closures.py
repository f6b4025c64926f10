"""Gramian moment closures: predict ``u_{M+1}`` from ``u_0..u_M``.

Four members, selected by the parity of ``M``:

=================  ==========  =======================================
kind               M           closure relation
=================  ==========  =======================================
``gramian_even``   2n          sigma_{n,n+1} = 0
``extended_even``  2n, n >= 2  sigma_{n,n+1} sigma_{n-1,n-1}
                               = chi sigma_{n,n} sigma_{n-1,n}
``gramian_odd``    2n - 1      sigma_{n,n} = 0
``extended_odd``   2n - 1      sigma_{n-1,n+1} sigma_{n-1,n-1}
                               = chi sigma_{n-1,n}**2
=================  ==========  =======================================

The gauge-invariant parameter choices are ``chi = (n+1)/n`` (even) and
``chi = (n+1)/(2n)`` (odd); these are used when ``chi`` is ``None``.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ClosureError, ParityError, ZeroDenominatorError
from .moment_core import as_moments, gram_solve, moment_slice

GRAMIAN_KINDS = ("gramian_even", "extended_even", "gramian_odd", "extended_odd")
BASELINE_KINDS = ("grad", "maxent")
KINDS = GRAMIAN_KINDS + BASELINE_KINDS

#: Relative tolerance below which sigma_{n-1,n-1} counts as zero.
ZERO_DENOM_RTOL = 1e-13


@dataclass(frozen=True)
class ClosureSpec:
    """Which closure to apply.

    ``chi`` is only used by the extended kinds; ``None`` selects the
    gauge-invariant default for the order at hand.  ``grid`` is only used
    by ``maxent`` (a :class:`~gramclosure.baselines.Grid`).
    """
    kind: str
    chi: Optional[float] = None
    grid: Optional[object] = None

    def __post_init__(self):
        kind = normalize_kind(self.kind)
        object.__setattr__(self, "kind", kind)

    @property
    def is_gramian(self):
        return self.kind in GRAMIAN_KINDS

    @property
    def parity(self):
        """'even', 'odd', or None for kinds defined at every order."""
        if self.kind.endswith("_even"):
            return "even"
        if self.kind.endswith("_odd"):
            return "odd"
        return None

    def accepts_order(self, M):
        p = self.parity
        return p is None or (M % 2 == 0) == (p == "even")

    def resolve_chi(self, M):
        if self.kind == "extended_even":
            return default_chi_even(M) if self.chi is None else float(self.chi)
        if self.kind == "extended_odd":
            return default_chi_odd(M) if self.chi is None else float(self.chi)
        return None


@dataclass(frozen=True)
class ClosureResult:
    u_next: float
    chi_used: Optional[float] = None
    diagnostics: dict = field(default_factory=dict)


def normalize_kind(kind):
    k = str(kind).strip().lower().replace("-", "_")
    if k not in KINDS:
        raise ClosureError(f"unknown closure kind {kind!r}; expected one of {KINDS}")
    return k


def default_chi_even(M):
    n = M // 2
    return (n + 1) / n


def default_chi_odd(M):
    n = (M + 1) // 2
    return (n + 1) / (2 * n)


def _check_parity(u, even, name, min_order):
    M = len(u) - 1
    if (M % 2 == 0) != even:
        raise ParityError(f"{name} needs {'even' if even else 'odd'} M, got M = {M}")
    if M < min_order:
        raise ClosureError(f"{name} needs M >= {min_order}, got M = {M}")
    return M


def _check_denominator(den, scale, what):
    if abs(den) <= ZERO_DENOM_RTOL * max(1.0, abs(scale)):
        raise ZeroDenominatorError(f"{what} = {den!r} vanishes")


def _finish(value, chi, diag):
    if not np.isfinite(value):
        raise ClosureError(f"closure produced non-finite value {value!r}")
    return ClosureResult(u_next=float(value), chi_used=chi, diagnostics=diag)


def close_gramian_even(u):
    """``u_{2n+1} = u_{n+1,2n}^T G_{n-1}^{-1} u_{n,2n-1}`` for ``M = 2n``."""
    u = as_moments(u)
    M = _check_parity(u, True, "gramian_even", 2)
    n = M // 2
    a, cond = gram_solve(u, n - 1, moment_slice(u, n, 2 * n - 1))
    value = moment_slice(u, n + 1, 2 * n) @ a
    return _finish(value, None, {"cond_G%d" % (n - 1): cond})


def close_extended_even(u, chi=None):
    """Extended Gramian closure for even ``M = 2n`` (requires ``n >= 2``).

    Adds ``chi * sigma_{n,n} / sigma_{n-1,n-1} * sigma_{n-1,n}`` to the
    simple Gramian value.  ``chi=None`` uses ``(n+1)/n``.
    """
    u = as_moments(u)
    M = _check_parity(u, True, "extended_even", 4)
    n = M // 2
    chi = default_chi_even(M) if chi is None else float(chi)

    a, cond_a = gram_solve(u, n - 1, moment_slice(u, n, 2 * n - 1))
    b, cond_b = gram_solve(u, n - 2, moment_slice(u, n - 1, 2 * n - 3))
    simple = moment_slice(u, n + 1, 2 * n) @ a
    s_nn = u[2 * n] - moment_slice(u, n, 2 * n - 1) @ a
    s_m1 = u[2 * n - 2] - moment_slice(u, n - 1, 2 * n - 3) @ b
    s_m1_n = u[2 * n - 1] - moment_slice(u, n, 2 * n - 2) @ b
    _check_denominator(s_m1, u[2 * n - 2], "sigma_{n-1,n-1}")

    value = simple + chi * (s_nn / s_m1) * s_m1_n
    diag = {"cond_G%d" % (n - 1): cond_a, "cond_G%d" % (n - 2): cond_b}
    return _finish(value, chi, diag)


def close_gramian_odd(u):
    """``u_{2n} = u_{n,2n-1}^T G_{n-1}^{-1} u_{n,2n-1}`` for ``M = 2n - 1``."""
    u = as_moments(u)
    M = _check_parity(u, False, "gramian_odd", 1)
    n = (M + 1) // 2
    rhs = moment_slice(u, n, 2 * n - 1)
    a, cond = gram_solve(u, n - 1, rhs)
    return _finish(rhs @ a, None, {"cond_G%d" % (n - 1): cond})


def close_extended_odd(u, chi=None):
    """Extended Gramian closure for odd ``M = 2n - 1`` (requires ``n >= 2``).

    ``u_{2n} = u_{n+1,2n-1}^T G_{n-2}^{-1} u_{n-1,2n-3}
    + chi * sigma_{n-1,n}**2 / sigma_{n-1,n-1}``; ``chi=None`` uses
    ``(n+1)/(2n)``.
    """
    u = as_moments(u)
    M = _check_parity(u, False, "extended_odd", 3)
    n = (M + 1) // 2
    chi = default_chi_odd(M) if chi is None else float(chi)

    b, cond = gram_solve(u, n - 2, moment_slice(u, n - 1, 2 * n - 3))
    first = moment_slice(u, n + 1, 2 * n - 1) @ b
    s_m1_n = u[2 * n - 1] - moment_slice(u, n, 2 * n - 2) @ b
    s_m1 = u[2 * n - 2] - moment_slice(u, n - 1, 2 * n - 3) @ b
    _check_denominator(s_m1, u[2 * n - 2], "sigma_{n-1,n-1}")

    value = first + chi * s_m1_n ** 2 / s_m1
    return _finish(value, chi, {"cond_G%d" % (n - 2): cond})


def close(u, spec):
    """Apply the closure described by ``spec`` (a ClosureSpec or kind name)."""
    if not isinstance(spec, ClosureSpec):
        spec = ClosureSpec(spec)
    u = as_moments(u)
    M = len(u) - 1
    if not spec.accepts_order(M):
        raise ParityError(f"{spec.kind} is not defined for M = {M}")

    if spec.kind == "gramian_even":
        return close_gramian_even(u)
    if spec.kind == "extended_even":
        return close_extended_even(u, spec.chi)
    if spec.kind == "gramian_odd":
        return close_gramian_odd(u)
    if spec.kind == "extended_odd":
        return close_extended_odd(u, spec.chi)

    from . import baselines

    if spec.kind == "grad":
        return baselines.grad_close(u)
    grid = spec.grid if spec.grid is not None else baselines.default_grid(u)
    result, _ = baselines.maxent_close(u, grid)
    return result


def closure_function(spec, M):
    """Return ``C(u_0..u_M) -> u_{M+1}`` as a plain callable of an array."""
    if not isinstance(spec, ClosureSpec):
        spec = ClosureSpec(spec)
    if not spec.accepts_order(M):
        raise ParityError(f"{spec.kind} is not defined for M = {M}")
    return lambda u: close(u, spec).u_next
