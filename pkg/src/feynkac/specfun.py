"""Special-function kernels used by every closed-form density and expectation.

Thin, contract-enforcing layer over scipy.special: explicit domain/pole/overflow
errors instead of silent NaN/inf, scaled and log-domain variants for the Bessel
functions (densities routinely multiply a huge I_nu by a tiny exponential), and
the Whittaker pair assembled from the Kummer functions.

All functions are pure; EvalPolicy carries tolerance knobs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.special as sc

from .errors import ConvergenceError, DomainError, EvalOverflowError, PoleError

__all__ = [
    "EvalPolicy",
    "DEFAULT_POLICY",
    "bessel_i",
    "log_bessel_i",
    "bessel_k",
    "hypergeom_1f1",
    "tricomi_u",
    "whittaker_m",
    "whittaker_w",
    "gamma_ln",
    "erf",
    "laplace_bessel_moment",
]


@dataclass(frozen=True)
class EvalPolicy:
    """Evaluation knobs: target relative tolerance, series length cap,
    and whether callers want log-domain results where offered."""

    rel_tol: float = 1e-13
    max_terms: int = 500
    log_domain: bool = False

    def __post_init__(self) -> None:
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_POLICY = EvalPolicy()


def _check_finite(name: str, *vals: float) -> None:
    for v in vals:
        if not math.isfinite(v):
            raise DomainError(f"{name}: non-finite argument {v!r}")


def bessel_i(nu: float, z: float, policy: EvalPolicy = DEFAULT_POLICY, *, scaled: bool = False) -> float:
    """Modified Bessel function of the first kind I_nu(z), z >= 0.

    scaled=True returns e^{-z} I_nu(z) (finite for arbitrarily large z).
    Unscaled overflow raises EvalOverflowError rather than returning inf.
    """
    _check_finite("bessel_i", nu, z)
    if z < 0:
        raise DomainError("bessel_i: z must be >= 0")
    if scaled:
        out = float(sc.ive(nu, z))
    else:
        out = float(sc.iv(nu, z))
        if math.isinf(out):
            raise EvalOverflowError(
                f"bessel_i: I_{nu}({z}) overflows double precision; use scaled=True"
            )
    if math.isnan(out):
        raise ConvergenceError(f"bessel_i: evaluation failed at nu={nu}, z={z}")
    return out


def log_bessel_i(nu: float, z: float) -> float:
    """log I_nu(z) for z > 0 (computed as log(ive) + z, overflow-safe).

    Only valid where I_nu(z) > 0, i.e. nu >= 0 or z large enough for
    negative non-integer orders; returns -inf on underflow at z=0+.
    """
    _check_finite("log_bessel_i", nu, z)
    if z < 0:
        raise DomainError("log_bessel_i: z must be >= 0")
    if z == 0.0:
        if nu == 0.0:
            return 0.0
        if nu > 0:
            return -math.inf
        raise DomainError("log_bessel_i: I_nu(0) undefined for nu < 0")
    scaled = float(sc.ive(nu, z))
    if scaled <= 0.0:
        if scaled == 0.0:
            # underflow of the scaled value; fall back to the small-z leading term
            if nu > -1:
                return nu * math.log(z / 2.0) - float(sc.gammaln(nu + 1.0))
            raise ConvergenceError(f"log_bessel_i: underflow at nu={nu}, z={z}")
        raise DomainError(f"log_bessel_i: I_{nu}({z}) < 0, log undefined")
    return math.log(scaled) + z


def bessel_k(nu: float, z: float, policy: EvalPolicy = DEFAULT_POLICY, *, scaled: bool = False) -> float:
    """Modified Bessel function of the second kind K_nu(z), z > 0.

    scaled=True returns e^{z} K_nu(z).
    """
    _check_finite("bessel_k", nu, z)
    if z <= 0:
        raise DomainError("bessel_k: z must be > 0")
    out = float(sc.kve(nu, z)) if scaled else float(sc.kv(nu, z))
    if math.isnan(out):
        raise ConvergenceError(f"bessel_k: evaluation failed at nu={nu}, z={z}")
    if math.isinf(out):
        raise EvalOverflowError(f"bessel_k: K_{nu}({z}) overflows; use scaled=True")
    return out


def _is_nonpositive_integer(b: float, tol: float = 1e-12) -> bool:
    return b <= tol and abs(b - round(b)) < tol


def hypergeom_1f1(a: float, b: float, z: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Kummer's confluent hypergeometric function 1F1(a, b, z)."""
    _check_finite("hypergeom_1f1", a, b, z)
    if _is_nonpositive_integer(b):
        raise PoleError(f"hypergeom_1f1: b={b} is a non-positive integer (parameter pole)")
    if abs(z) < 1e-16:
        # scipy.special.hyp1f1 misbehaves for tiny |z|; the truncated series
        # is exact to double precision here
        return 1.0 + a / b * z
    out = float(sc.hyp1f1(a, b, z))
    if math.isnan(out):
        raise ConvergenceError(f"hypergeom_1f1: evaluation failed at ({a}, {b}, {z})")
    if math.isinf(out):
        raise EvalOverflowError(f"hypergeom_1f1: overflow at ({a}, {b}, {z})")
    return out


def tricomi_u(a: float, b: float, z: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Tricomi's confluent hypergeometric function U(a, b, z), principal branch z > 0.

    Satisfies z^a U(a, b, z) -> 1 as z -> +inf.
    """
    _check_finite("tricomi_u", a, b, z)
    if z <= 0:
        raise DomainError("tricomi_u: z must be > 0 (principal branch only)")
    out = float(sc.hyperu(a, b, z))
    if math.isnan(out):
        raise ConvergenceError(f"tricomi_u: evaluation failed at ({a}, {b}, {z})")
    return out


def whittaker_m(k: float, m: float, z: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Whittaker function M_{k,m}(z) = e^{-z/2} z^{m+1/2} 1F1(m-k+1/2, 1+2m, z), z > 0."""
    _check_finite("whittaker_m", k, m, z)
    if z <= 0:
        raise DomainError("whittaker_m: z must be > 0")
    if _is_nonpositive_integer(1.0 + 2.0 * m):
        raise PoleError(f"whittaker_m: 1+2m={1+2*m} is a non-positive integer")
    f = hypergeom_1f1(m - k + 0.5, 1.0 + 2.0 * m, z, policy)
    # assemble in log domain when the pieces would overflow individually
    sign = math.copysign(1.0, f)
    if f == 0.0:
        return 0.0
    lg = -0.5 * z + (m + 0.5) * math.log(z) + math.log(abs(f))
    if lg > 700.0:
        raise EvalOverflowError(f"whittaker_m: overflow at k={k}, m={m}, z={z}")
    return sign * math.exp(lg)


def whittaker_w(k: float, m: float, z: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Whittaker function W_{k,m}(z) = e^{-z/2} z^{m+1/2} U(m-k+1/2, 1+2m, z), z > 0.

    Equal to the standard combination of M_{k,+-m}; evaluated through the
    Tricomi function to stay finite at half-integer m where the combination's
    Gamma factors hit poles.
    """
    _check_finite("whittaker_w", k, m, z)
    if z <= 0:
        raise DomainError("whittaker_w: z must be > 0")
    u = tricomi_u(m - k + 0.5, 1.0 + 2.0 * m, z, policy)
    if u == 0.0:
        return 0.0
    sign = math.copysign(1.0, u)
    lg = -0.5 * z + (m + 0.5) * math.log(z) + math.log(abs(u))
    if lg > 700.0:
        raise EvalOverflowError(f"whittaker_w: overflow at k={k}, m={m}, z={z}")
    return sign * math.exp(lg)


def gamma_ln(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    _check_finite("gamma_ln", x)
    if x <= 0:
        raise DomainError("gamma_ln: x must be > 0")
    return float(sc.gammaln(x))


def erf(x: float) -> float:
    """Error function."""
    _check_finite("erf", x)
    return float(sc.erf(x))


def laplace_bessel_moment(p: float, nu: float, s: float, c: float,
                          policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Closed form of the moment integral

        integral_0^inf  y^p e^{-s y} I_nu(2 c sqrt(y)) dy
      = c^nu Gamma(p + nu/2 + 1) / (Gamma(nu+1) s^{p + nu/2 + 1})
        * 1F1(p + nu/2 + 1, nu + 1, c^2 / s),

    the workhorse behind every Bessel-kernel expectation here. Requires
    s > 0, c >= 0, p + nu/2 + 1 > 0. Assembled in log domain: the 1F1 factor
    grows like e^{c^2/s}, which is then tamed by the caller's exponents.
    """
    _check_finite("laplace_bessel_moment", p, nu, s, c)
    if s <= 0:
        raise DomainError("laplace_bessel_moment: s must be > 0")
    if c < 0:
        raise DomainError("laplace_bessel_moment: c must be >= 0")
    q = p + 0.5 * nu + 1.0
    if q <= 0:
        raise DomainError("laplace_bessel_moment: p + nu/2 + 1 must be > 0 (divergent integral)")
    if _is_nonpositive_integer(nu + 1.0):
        raise PoleError(f"laplace_bessel_moment: nu+1={nu+1} non-positive integer")
    if c == 0.0:
        if nu != 0.0:
            return 0.0 if nu > 0 else math.inf
        return math.exp(gamma_ln(q) - q * math.log(s))
    w = c * c / s
    # split 1F1 via Kummer's transform when w is large enough to overflow
    f = float(sc.hyp1f1(q, nu + 1.0, w))
    if math.isfinite(f) and f > 0.0:
        lg = nu * math.log(c) + gamma_ln(q) - gamma_ln(nu + 1.0) - q * math.log(s) + math.log(f)
    else:
        f2 = float(sc.hyp1f1(nu + 1.0 - q, nu + 1.0, -w))
        if not (math.isfinite(f2) and f2 > 0.0):
            raise ConvergenceError(
                f"laplace_bessel_moment: 1F1 failed at q={q}, nu={nu}, w={w}")
        lg = (nu * math.log(c) + gamma_ln(q) - gamma_ln(nu + 1.0)
              - q * math.log(s) + w + math.log(f2))
    if lg > 700.0:
        raise EvalOverflowError("laplace_bessel_moment: overflow; rescale the problem")
    return math.exp(lg)
