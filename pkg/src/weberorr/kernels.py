"""Cross-product Bessel kernels, their large-argument form, and the
order-shift derivative identities used to reduce the integral equation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError

SOLVER_ORDER_RANGE = (-1.0, -0.5)


@dataclass(frozen=True)
class KernelParams:
    """Order/inner-radius pair (nu, a) of the kernel family.

    The order is unrestricted for kernel evaluation itself; the solver's
    inversion theory needs nu in (-1, -1/2) and enforces it via
    require_solver_order().
    """

    nu: float
    a: float

    def __post_init__(self):
        if not (math.isfinite(self.nu) and math.isfinite(self.a)):
            raise DomainError("KernelParams: nu and a must be finite")
        if self.a <= 0.0:
            raise DomainError("KernelParams: inner radius a must be > 0")

    def require_solver_order(self) -> None:
        lo, hi = SOLVER_ORDER_RANGE
        if not (lo < self.nu < hi):
            raise DomainError(
                f"order nu={self.nu} outside the inversion range ({lo}, {hi})")


def kernel_C(nu: float, alpha, beta):
    """C_nu(alpha, beta) = J_nu(alpha) Y_nu(beta) - Y_nu(alpha) J_nu(beta)."""
    scalar = np.ndim(alpha) == 0 and np.ndim(beta) == 0
    alpha = np.atleast_1d(np.asarray(alpha, dtype=np.float64))
    beta = np.atleast_1d(np.asarray(beta, dtype=np.float64))
    ja, ya = specfun.bessel_jy(nu, alpha)
    jb, yb = specfun.bessel_jy(nu, beta)
    out = ja * yb - ya * jb
    return float(out[0]) if scalar else out


def weber_kernel(params: KernelParams, x, lam):
    """J_nu(x lam) Y_{nu+1}(a lam) - Y_nu(x lam) J_{nu+1}(a lam)."""
    scalar = np.ndim(x) == 0 and np.ndim(lam) == 0
    x = np.asarray(x, dtype=np.float64)
    lam = np.asarray(lam, dtype=np.float64)
    if np.any(x <= 0.0) or np.any(lam <= 0.0):
        raise DomainError("weber_kernel: x and lambda must be > 0")
    xl = np.atleast_1d(x * lam)
    al = np.atleast_1d(params.a * lam)
    jx, yx = specfun.bessel_jy(params.nu, xl)
    # al is often a single repeated value (fixed lambda, varying x):
    # evaluate once and let broadcasting do the rest
    ja, ya = specfun.bessel_jy(params.nu + 1.0, al)
    out = jx * ya - yx * ja
    return float(out[0]) if scalar else out


def kernel_asymptotic(params: KernelParams, x, lam):
    """Leading large-lambda form -2 cos(lam (x-a)) / (pi lam sqrt(x a)).

    Valid once lam * min(x, a) >= 10 (remainder O(1/lam) relative).
    """
    scalar = np.ndim(x) == 0 and np.ndim(lam) == 0
    x = np.asarray(x, dtype=np.float64)
    lam = np.asarray(lam, dtype=np.float64)
    out = -2.0 * np.cos(lam * (x - params.a)) / (np.pi * lam * np.sqrt(x * params.a))
    return float(out) if scalar else out


def derivative_identity_check(nu: float, x: float, which: str = "J",
                              sign: str = "+") -> float:
    """Defect of the order-shift identity [x^{-+nu} d/dx x^{+-nu}] B_nu = +-B_{nu-+1}.

    sign '+' checks x^{-nu} (x^{nu} B_nu)' = B_{nu-1};
    sign '-' checks x^{nu} (x^{-nu} B_nu)' = -B_{nu+1}.
    The derivative is a 4th-order central difference with one Richardson
    level, h = 1e-4 x, so the defect isolates the function-value error.
    """
    if which not in ("J", "Y"):
        raise DomainError("derivative_identity_check: which must be 'J' or 'Y'")
    if sign not in ("+", "-"):
        raise DomainError("derivative_identity_check: sign must be '+' or '-'")
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError("derivative_identity_check: x must be > 0")
    h = 1e-4 * x
    if h < 64.0 * np.finfo(np.float64).tiny or x + 2.0 * h == x:
        raise DomainError("derivative_identity_check: step underflow")
    bessel = specfun.bessel_j if which == "J" else specfun.bessel_y
    p = nu if sign == "+" else -nu

    def g(t):
        return t ** p * bessel(nu, t)

    def d4(hh):
        pts = np.array([x - 2 * hh, x - hh, x + hh, x + 2 * hh])
        v = g(pts)
        return (v[0] - 8.0 * v[1] + 8.0 * v[2] - v[3]) / (12.0 * hh)

    d_h, d_h2 = d4(h), d4(0.5 * h)
    deriv = (16.0 * d_h2 - d_h) / 15.0
    lhs = x ** (-p) * deriv
    rhs = bessel(nu - 1.0, x) if sign == "+" else -bessel(nu + 1.0, x)
    return abs(lhs - rhs)
