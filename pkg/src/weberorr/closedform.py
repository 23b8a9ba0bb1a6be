"""Closed-form Mellin image of the mixed-order cross-product kernel.

F(x, s) = int_0^inf lam^{-s} [J_nu(x lam) Y_{nu+1}(a lam)
                              - Y_nu(x lam) J_{nu+1}(a lam)] d lam,
valid on the strip -1 < Re s < 0 for x > a, evaluates to three gamma/2F1
terms sharing two distinct 2F1 calls (terms 1 and 3 use the same function
with swapped upper parameters).  Batched evaluation over x is the hot path
of the contour solver, so the gamma prefactors are hoisted per s.

Also provides the growth envelopes used by the bound checks: the global
|F| <= C x^{Re s - nu} e^{pi |s|/2} |s|^{-Re s} envelope and the three
Euler-integral estimates for the individual 2F1 factors, all with the
calibrate-on-a-probe-grid / hold-out-elsewhere protocol (the theory leaves
the constants unspecified).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError, PoleProximityError, StripError
from .kernels import KernelParams, weber_kernel
from .quadrature import QuadratureConfig, integrate_improper
from .report import EvaluationReport

_POLE_RADIUS = 0.05  # guard around the s = 0 pole of Gamma(-s/2)
CANCELLATION_RATIO = 1e-10


@dataclass(frozen=True)
class FnuTermBreakdown:
    """The three summands of the closed form, exposed for cancellation audits."""

    term1: complex
    term2: complex
    term3: complex

    @property
    def total(self) -> complex:
        return self.term1 + self.term2 + self.term3

    @property
    def max_term(self) -> float:
        return max(abs(self.term1), abs(self.term2), abs(self.term3))

    @property
    def cancellation_suspect(self) -> bool:
        return abs(self.total) < CANCELLATION_RATIO * self.max_term


def _validate(params: KernelParams, s: complex) -> complex:
    params.require_solver_order()
    s = complex(s)
    if not (-1.0 < s.real < 0.0):
        raise StripError(f"F_nu_closed: Re s = {s.real} outside (-1, 0)")
    if abs(s) < _POLE_RADIUS:
        raise PoleProximityError(
            f"F_nu_closed: |s| = {abs(s):.3g} too close to the s = 0 pole")
    return s


def _terms_batch(params: KernelParams, xs: np.ndarray, s: complex):
    nu, a = params.nu, params.a
    z = (a / xs) ** 2
    h13 = specfun.hyp2f1_real_z(1 - s / 2, 1 + nu - s / 2, 2 + nu, z)
    h2 = specfun.hyp2f1_real_z(-nu - s / 2, -s / 2, -nu, z)
    two_ms = cmath.exp(-s * math.log(2.0))
    ln_x = np.log(xs)
    g1 = (two_ms * a ** (nu + 1.0) / math.pi * specfun._cospi(nu)
          * specfun.rgamma(s / 2) * specfun.gamma(-nu - 1.0)
          * specfun.gamma(1 + nu - s / 2))
    g2 = -(two_ms / (math.pi * a ** (1.0 + nu)) * specfun.gamma(nu + 1.0)
           * specfun.gamma(-s / 2) * specfun.rgamma(1 + nu + s / 2))
    g3 = -(two_ms * a ** (nu + 1.0) / math.pi * cmath.cos(math.pi * s / 2)
           * specfun.gamma(nu + 1 - s / 2) * specfun.gamma(1 - s / 2)
           * specfun.rgamma(2.0 + nu))
    # terms 1 and 3 share one power of x: exponent s - nu - 2
    p13 = np.exp((s - nu - 2.0) * ln_x)
    t1 = g1 * p13 * h13
    t2 = g2 * np.exp((nu + s) * ln_x) * h2
    t3 = g3 * p13 * h13
    return t1, t2, t3, h13, h2


def F_nu_closed_batch(params: KernelParams, xs, s) -> np.ndarray:
    """Vectorized closed form over an array of abscissas x > a (totals only)."""
    s = _validate(params, s)
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    if np.any(xs <= params.a):
        raise DomainError("F_nu_closed: requires x > a")
    t1, t2, t3, _, _ = _terms_batch(params, xs, s)
    return t1 + t2 + t3


def _prefactors_matrix(params: KernelParams, svals: np.ndarray):
    """Per-contour-node gamma prefactors (g1+g3 share the x-power s-nu-2)."""
    nu, a = params.nu, params.a
    two_ms = np.exp(-svals * math.log(2.0))
    g1 = (two_ms * a ** (nu + 1.0) / math.pi * specfun._cospi(nu)
          * specfun.rgamma_array(svals / 2) * specfun.gamma(-nu - 1.0)
          * specfun.gamma_array(1 + nu - svals / 2))
    g2 = -(two_ms / (math.pi * a ** (1.0 + nu)) * specfun.gamma(nu + 1.0)
           * specfun.gamma_array(-svals / 2)
           * specfun.rgamma_array(1 + nu + svals / 2))
    g3 = -(two_ms * a ** (nu + 1.0) / math.pi * np.cos(math.pi * svals / 2)
           * specfun.gamma_array(nu + 1 - svals / 2)
           * specfun.gamma_array(1 - svals / 2) * specfun.rgamma(2.0 + nu))
    return g1, g2, g3


def fnu_matrix(params: KernelParams, svals, xs) -> np.ndarray:
    """Closed form on the outer product contour-nodes x abscissas.

    svals: (m,) complex points inside the strip; xs: (n,) reals > a.
    Returns the (m, n) matrix F(x_j, s_i) - the contour solver evaluates
    whole quadrature batches through this in a handful of numpy passes.
    """
    svals = np.atleast_1d(np.asarray(svals, dtype=np.complex128))
    for sv in (svals.real.min(), svals.real.max()):
        if not (-1.0 < sv < 0.0):
            raise StripError("fnu_matrix: contour leaves the strip (-1, 0)")
    if float(np.min(np.abs(svals))) < _POLE_RADIUS:
        raise PoleProximityError("fnu_matrix: contour passes the s = 0 pole")
    params.require_solver_order()
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    if np.any(xs <= params.a):
        raise DomainError("fnu_matrix: requires x > a")
    nu, a = params.nu, params.a
    z = (a / xs) ** 2
    h13 = specfun.hyp2f1_matrix(1 - svals / 2, 1 + nu - svals / 2,
                                np.full_like(svals, 2 + nu), z)
    h2 = specfun.hyp2f1_matrix(-nu - svals / 2, -svals / 2,
                               np.full_like(svals, -nu + 0.0j), z)
    g1, g2, g3 = _prefactors_matrix(params, svals)
    ln_x = np.log(xs)
    p13 = np.exp(np.outer(svals - nu - 2.0, ln_x))
    p2 = np.exp(np.outer(svals + nu, ln_x))
    return (g1 + g3)[:, None] * p13 * h13 + g2[:, None] * p2 * h2


def fnu_dx_matrix(params: KernelParams, svals, xs) -> np.ndarray:
    """x-derivative of the closed form on the same outer-product layout."""
    svals = np.atleast_1d(np.asarray(svals, dtype=np.complex128))
    for sv in (svals.real.min(), svals.real.max()):
        if not (-1.0 < sv < 0.0):
            raise StripError("fnu_dx_matrix: contour leaves the strip (-1, 0)")
    if float(np.min(np.abs(svals))) < _POLE_RADIUS:
        raise PoleProximityError("fnu_dx_matrix: contour passes the s = 0 pole")
    params.require_solver_order()
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    if np.any(xs <= params.a):
        raise DomainError("fnu_dx_matrix: requires x > a")
    nu, a = params.nu, params.a
    z = (a / xs) ** 2
    dz_dx = -2.0 * z / xs
    a13, b13 = 1 - svals / 2, 1 + nu - svals / 2
    c13 = np.full_like(svals, 2 + nu)
    a2, b2 = -nu - svals / 2, -svals / 2
    c2 = np.full_like(svals, -nu + 0.0j)
    h13 = specfun.hyp2f1_matrix(a13, b13, c13, z)
    h13p = (a13 * b13 / c13)[:, None] * specfun.hyp2f1_matrix(
        a13 + 1, b13 + 1, c13 + 1, z)
    h2 = specfun.hyp2f1_matrix(a2, b2, c2, z)
    h2p = (a2 * b2 / c2)[:, None] * specfun.hyp2f1_matrix(a2 + 1, b2 + 1, c2 + 1, z)
    g1, g2, g3 = _prefactors_matrix(params, svals)
    ln_x = np.log(xs)
    e13 = (svals - nu - 2.0)[:, None]
    e2 = (svals + nu)[:, None]
    x13 = np.exp(e13 * ln_x[None, :])
    x2 = np.exp(e2 * ln_x[None, :])
    d13 = x13 * (e13 / xs[None, :] * h13 + h13p * dz_dx[None, :])
    d2 = x2 * (e2 / xs[None, :] * h2 + h2p * dz_dx[None, :])
    return (g1 + g3)[:, None] * d13 + g2[:, None] * d2


def F_nu_closed(params: KernelParams, x: float, s) -> FnuTermBreakdown:
    """Closed form at a single abscissa, with the three-term breakdown."""
    s = _validate(params, s)
    x = float(x)
    if x <= params.a:
        raise DomainError("F_nu_closed: requires x > a")
    t1, t2, t3, _, _ = _terms_batch(params, np.array([x]), s)
    return FnuTermBreakdown(complex(t1[0]), complex(t2[0]), complex(t3[0]))


def F_nu_closed_dx_batch(params: KernelParams, xs, s) -> np.ndarray:
    """d/dx of the closed form, vectorized over x (for the derivative-form
    inverse).  Differentiates the powers and the 2F1 arguments; two extra
    2F1 calls at shifted parameters."""
    s = _validate(params, s)
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    if np.any(xs <= params.a):
        raise DomainError("F_nu_closed_dx: requires x > a")
    nu, a = params.nu, params.a
    z = (a / xs) ** 2
    dz_dx = -2.0 * z / xs

    a13, b13, c13 = 1 - s / 2, 1 + nu - s / 2, 2 + nu
    a2, b2, c2 = -nu - s / 2, -s / 2, -nu
    h13 = specfun.hyp2f1_real_z(a13, b13, c13, z)
    h13p = (a13 * b13 / c13) * specfun.hyp2f1_real_z(a13 + 1, b13 + 1, c13 + 1, z)
    h2 = specfun.hyp2f1_real_z(a2, b2, c2, z)
    h2p = (a2 * b2 / c2) * specfun.hyp2f1_real_z(a2 + 1, b2 + 1, c2 + 1, z)

    two_ms = cmath.exp(-s * math.log(2.0))
    ln_x = np.log(xs)
    g1 = (two_ms * a ** (nu + 1.0) / math.pi * specfun._cospi(nu)
          * specfun.rgamma(s / 2) * specfun.gamma(-nu - 1.0)
          * specfun.gamma(1 + nu - s / 2))
    g2 = -(two_ms / (math.pi * a ** (1.0 + nu)) * specfun.gamma(nu + 1.0)
           * specfun.gamma(-s / 2) * specfun.rgamma(1 + nu + s / 2))
    g3 = -(two_ms * a ** (nu + 1.0) / math.pi * cmath.cos(math.pi * s / 2)
           * specfun.gamma(nu + 1 - s / 2) * specfun.gamma(1 - s / 2)
           * specfun.rgamma(2.0 + nu))
    p13 = s - nu - 2.0
    p2 = nu + s
    x13 = np.exp(p13 * ln_x)
    x2 = np.exp(p2 * ln_x)
    d13 = x13 * (p13 / xs * h13 + h13p * dz_dx)
    d2 = x2 * (p2 / xs * h2 + h2p * dz_dx)
    return (g1 + g3) * d13 + g2 * d2


def F_nu_oracle(params: KernelParams, x: float, s,
                cfg: QuadratureConfig | None = None) -> EvaluationReport:
    """Brute-force quadrature of the defining integral (the oracle side).

    int_0^inf lam^{-s} * kernel d lam with oscillation frequency x - a and
    the asymptotic tail taken over once lam * min(x, a) >= 10.
    """
    s = _validate(params, s)
    x = float(x)
    if x <= params.a:
        raise DomainError("F_nu_oracle: requires x > a")
    cfg = cfg or QuadratureConfig(abs_tol=1e-10, rel_tol=1e-9)

    def integrand(lam):
        lam = np.asarray(lam, dtype=np.float64)
        return np.exp(-s * np.log(lam)) * weber_kernel(params, x, lam)

    start = max(cfg.origin_cutoff, 10.0 / min(x, params.a))
    return integrate_improper(integrand, 0.0, x - params.a, cfg,
                              asymptotic_start=start)


# ----------------------------------------------------------------------
# growth envelopes and the calibrate / hold-out machinery
# ----------------------------------------------------------------------

def F_nu_bound(params: KernelParams, x: float, s) -> float:
    """Envelope x^{Re s - nu} e^{pi |s| / 2} |s|^{-Re s} (constant excluded)."""
    s = _validate(params, s)
    x = float(x)
    if x <= params.a:
        raise DomainError("F_nu_bound: requires x > a")
    mu = s.real
    return x ** (mu - params.nu) * math.exp(0.5 * math.pi * abs(s)) * abs(s) ** (-mu)


def calibrate_bound_constant(params: KernelParams, x_factors, mus, ts) -> float:
    """Max of |F| / envelope over the probe grid; the held-out inequality
    |F| <= C * envelope is then checked elsewhere on fresh points."""
    best = 0.0
    for fx in x_factors:
        x = params.a * fx
        for mu in mus:
            for t in ts:
                s = complex(mu, t)
                val = abs(F_nu_closed(params, x, s).total)
                env = F_nu_bound(params, x, s)
                if env > 0.0:
                    best = max(best, val / env)
    return best


_HYP_PARAM_TRIPLES = {
    1: lambda nu, s: (1 - s / 2, 1 + nu - s / 2, 2 + nu),
    2: lambda nu, s: (-nu - s / 2, -s / 2, -nu),
    3: lambda nu, s: (1 + nu - s / 2, 1 - s / 2, 2 + nu),
}


def hyp_term_value(params: KernelParams, x: float, s, which: int) -> complex:
    """The selected 2F1 factor of the closed form at z = a^2/x^2."""
    s = _validate(params, s)
    if which not in (1, 2, 3):
        raise DomainError("which must be 1, 2 or 3")
    a_, b_, c_ = _HYP_PARAM_TRIPLES[which](params.nu, s)
    z = (params.a / float(x)) ** 2
    return specfun.gauss_2f1(a_, b_, c_, z)


def hyp_estimate_envelope(params: KernelParams, x: float, s, which: int) -> float:
    """Right-hand side of the selected 2F1 estimate, constant excluded.

    which=1: x^{2-Re s} (x^2-a^2)^{Re s/2 - 1} |G(2+nu)/(G(1+nu-s/2) G(1+s/2))|
    which=2: x^{-2 nu - Re s} (x^2-a^2)^{nu + Re s/2} |G(-nu)/(G(-s/2) G(-nu+s/2))|
    which=3: x^{2(1+nu)-Re s} (x^2-a^2)^{Re s/2-1-nu} |G(2+nu)/(G(1-s/2) G(1+nu+s/2))|
    """
    s = _validate(params, s)
    x = float(x)
    if x <= params.a:
        raise DomainError("hyp_estimate_envelope: requires x > a")
    nu = params.nu
    mu = s.real
    d2 = x * x - params.a * params.a
    if which == 1:
        gam = abs(specfun.gamma(2 + nu) * specfun.rgamma(1 + nu - s / 2)
                  * specfun.rgamma(1 + s / 2))
        return x ** (2.0 - mu) * d2 ** (0.5 * mu - 1.0) * gam
    if which == 2:
        gam = abs(specfun.gamma(-nu) * specfun.rgamma(-s / 2)
                  * specfun.rgamma(-nu + s / 2))
        return x ** (-2.0 * nu - mu) * d2 ** (nu + 0.5 * mu) * gam
    if which == 3:
        gam = abs(specfun.gamma(2 + nu) * specfun.rgamma(1 - s / 2)
                  * specfun.rgamma(1 + nu + s / 2))
        return x ** (2.0 * (1.0 + nu) - mu) * d2 ** (0.5 * mu - 1.0 - nu) * gam
    raise DomainError("which must be 1, 2 or 3")


def hyp_estimate_admissible(params: KernelParams, s, which: int) -> bool:
    """Euler-integral validity (Re c > Re b > 0) of the selected estimate.

    Estimate 3 fails it when Re s <= -2(1+nu) (the floating constants of the
    theory hide this corner); calibration grids stay inside the region.
    """
    _, b_, c_ = _HYP_PARAM_TRIPLES[which](params.nu, complex(s))
    return b_.real > 0.0 and (c_ - b_).real > 0.0


def calibrate_hyp_constant(params: KernelParams, which: int, x_factors, mus, ts) -> float:
    best = 0.0
    for fx in x_factors:
        x = params.a * fx
        for mu in mus:
            for t in ts:
                s = complex(mu, t)
                if not hyp_estimate_admissible(params, s, which):
                    continue
                lhs = abs(hyp_term_value(params, x, s, which))
                rhs = hyp_estimate_envelope(params, x, s, which)
                if rhs > 0.0:
                    best = max(best, lhs / rhs)
    if best == 0.0:
        raise DomainError(
            "calibrate_hyp_constant: no Euler-admissible probe points")
    return best


def hyp_estimate_check(params: KernelParams, x: float, s, which: int,
                       constant: float) -> bool:
    """Does the selected estimate hold at (x, s) with the calibrated constant?"""
    if not hyp_estimate_admissible(params, s, which):
        raise DomainError(
            "hyp_estimate_check: point outside the Euler-admissible region")
    lhs = abs(hyp_term_value(params, x, s, which))
    rhs = hyp_estimate_envelope(params, x, s, which)
    return lhs <= constant * rhs * (1.0 + 1e-12)
