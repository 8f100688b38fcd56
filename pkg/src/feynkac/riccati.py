"""Drift-equation machinery.

A diffusion generator sigma*x^gamma*d2/dx2 + f(x)*d/dx with killing g(x) admits
useful point symmetries exactly when h(x) = x^(1-gamma)*f(x) satisfies a Riccati
equation whose right-hand side is drawn from a small set of families. This
module evaluates the residual of that equation, classifies a (drift, potential)
pair by least-squares fitting the family constants, and constructs drifts from
the Bessel-type solutions of the linearized equation.

Residual kernel (gamma != 2):

    R(x) = sigma*x*h'(x) - sigma*h(x) + h(x)^2/2 + 2*sigma*x^(2-gamma)*g(x)

Family right-hand sides (constants (A, B, C) in each family's own convention):

    linear:          R = 2*sigma*A*x^(2-gamma) + B              (C = 0)
    quadratic:       R = (A/2)*x^(2*(2-gamma)) + B*x^(2-gamma) + C
    quadratic_sqrt:  R = (A/2)*x^2 + (2*B/3)*x^(3/2) + C*x - 3*sigma^2/8
                     (gamma = 1 only; residual checking only)

For gamma = 2 the same structure reappears after the substitution
xi = ln x, H(xi) = f(x)*ln(x)/x - sigma*ln(x); the families are

    log_linear:      U[f] = A
    log_quadratic:   U[f] = A*ln(x) + B

with U[f] = (x^2/4)*v'' + (f/(4*sigma))*v' - f/(4*x) + (x*g'(x)*ln x)/2 + g(x),
v = f(x)*ln(x)/x, evaluated directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    CapabilityError,
    ConditioningError,
    ConstructionError,
    DomainError,
    SingularDriftError,
)
from . import specfun

__all__ = [
    "DiffusionSpec",
    "PotentialSpec",
    "RiccatiParams",
    "FAMILIES",
    "riccati_residual",
    "fit_riccati",
    "build_drift",
]

FAMILIES = ("linear", "quadratic", "quadratic_sqrt", "log_linear", "log_quadratic")

_VALIDATION_POINTS = (0.5, 1.0, 2.0)


def _derivative_4th(func: Callable[[float], float], x: float, rel_step: float = 1e-4) -> float:
    """4th-order central difference with relative step (2nd order is not
    accurate enough for 1e-10 residual targets)."""
    h = rel_step * max(1.0, abs(x))
    return (-func(x + 2 * h) + 8 * func(x + h) - 8 * func(x - h) + func(x - 2 * h)) / (12 * h)


def _second_derivative(func: Callable[[float], float], x: float, rel_step: float = 1e-3) -> float:
    h = rel_step * max(1.0, abs(x))
    return (-func(x + 2 * h) + 16 * func(x + h) - 30 * func(x)
            + 16 * func(x - h) - func(x - 2 * h)) / (12 * h * h)


@dataclass(frozen=True)
class DiffusionSpec:
    """A diffusion on [0, inf): generator sigma*x^gamma*d2/dx2 + f(x)*d/dx.

    drift_antiderivative is F with F'(x) = f(x)/x^gamma (checked numerically
    at construction). drift_derivative, when given, makes residuals exact
    instead of finite-differenced.
    """

    gamma: float
    sigma: float
    drift: Callable[[float], float]
    drift_antiderivative: Optional[Callable[[float], float]] = None
    label: str = ""
    drift_derivative: Optional[Callable[[float], float]] = None
    skip_validation: bool = field(default=False, repr=False)

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise DomainError("DiffusionSpec: sigma must be > 0")
        if self.skip_validation or self.drift_antiderivative is None:
            return
        for x in _VALIDATION_POINTS:
            want = self.drift(x) / x ** self.gamma
            got = _derivative_4th(self.drift_antiderivative, x)
            scale = max(1.0, abs(want))
            if abs(got - want) > 1e-8 * scale:
                raise ConstructionError(
                    f"DiffusionSpec '{self.label}': drift_antiderivative inconsistent with "
                    f"drift at x={x}: F'={got!r} vs f/x^gamma={want!r}")

    def f_prime(self, x: float) -> float:
        if self.drift_derivative is not None:
            return self.drift_derivative(x)
        return _derivative_4th(self.drift, x)

    def F(self, x: float) -> float:
        """Antiderivative of f(x)/x^gamma. Falls back to adaptive quadrature
        from x_ref = 1 (only differences F(a) - F(b) are ever used, so the
        base point is immaterial)."""
        if x <= 0:
            raise DomainError("F: x must be > 0")
        if self.drift_antiderivative is not None:
            return self.drift_antiderivative(x)
        from scipy import integrate
        val, err = integrate.quad(lambda z: self.drift(z) / z ** self.gamma, 1.0, x,
                                  limit=200)
        if err > 1e-9 * max(1.0, abs(val)):
            raise ConstructionError(
                f"F: quadrature for the drift antiderivative did not converge at x={x}")
        return val


@dataclass(frozen=True)
class PotentialSpec:
    """Killing function g(x).

    form 'power': g = mu * x^n (n < 0 is singular at the origin);
    form 'inverse_plus_linear': g = nu_coeff / x + mu * x;
    form 'zero': g = 0;
    form 'tabulated': arbitrary callable, no analytic derivative.
    """

    form: str
    mu: float = 0.0
    nu_coeff: float = 0.0
    n: float = 1.0
    func: Optional[Callable[[float], float]] = None

    def __post_init__(self) -> None:
        if self.form not in ("power", "inverse_plus_linear", "tabulated", "zero"):
            raise DomainError(f"PotentialSpec: unknown form {self.form!r}")
        if self.form == "tabulated" and self.func is None:
            raise DomainError("PotentialSpec: tabulated form requires func")

    @property
    def singular_at_origin(self) -> bool:
        if self.form == "power":
            return self.n < 0 and self.mu != 0.0
        if self.form == "inverse_plus_linear":
            return self.nu_coeff != 0.0
        return False

    def __call__(self, x: float) -> float:
        if self.form == "zero":
            return 0.0
        if self.form == "power":
            return self.mu * x ** self.n
        if self.form == "inverse_plus_linear":
            return self.nu_coeff / x + self.mu * x
        return self.func(x)

    def derivative(self, x: float) -> float:
        """Analytic g'(x); tabulated potentials have none."""
        if self.form == "zero":
            return 0.0
        if self.form == "power":
            return self.mu * self.n * x ** (self.n - 1.0)
        if self.form == "inverse_plus_linear":
            return -self.nu_coeff / (x * x) + self.mu
        raise CapabilityError("PotentialSpec: tabulated potential has no analytic derivative")


ZERO_POTENTIAL = PotentialSpec(form="zero")


@dataclass(frozen=True)
class RiccatiParams:
    """Family tag plus the constants (A, B, C) in that family's convention."""

    family: str
    A: float
    B: float
    C: float = 0.0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise DomainError(f"RiccatiParams: unknown family {self.family!r}")
        if self.family == "linear" and self.C != 0.0:
            raise DomainError("RiccatiParams: linear family has no C term")


def _residual_lhs(diff: DiffusionSpec, pot: PotentialSpec, x: float) -> float:
    """R(x) = sigma*x*h' - sigma*h + h^2/2 + 2*sigma*x^(2-gamma)*g, h = x^(1-gamma)*f."""
    g, s = diff.gamma, diff.sigma
    f = diff.drift(x)
    fp = diff.f_prime(x)
    h = x ** (1.0 - g) * f
    hp = (1.0 - g) * x ** (-g) * f + x ** (1.0 - g) * fp
    return s * x * hp - s * h + 0.5 * h * h + 2.0 * s * x ** (2.0 - g) * pot(x)


def _family_rhs(params: RiccatiParams, sigma: float, gamma: float, x: float) -> float:
    fam = params.family
    if fam == "linear":
        return 2.0 * sigma * params.A * x ** (2.0 - gamma) + params.B
    if fam == "quadratic":
        return (0.5 * params.A * x ** (2.0 * (2.0 - gamma))
                + params.B * x ** (2.0 - gamma) + params.C)
    if fam == "quadratic_sqrt":
        if gamma != 1.0:
            raise CapabilityError("quadratic_sqrt family is implemented for gamma=1 only")
        return (0.5 * params.A * x * x + (2.0 / 3.0) * params.B * x ** 1.5
                + params.C * x - 0.375 * sigma * sigma)
    raise CapabilityError(f"_family_rhs: {fam} handled by the gamma=2 path")


def _u_operator(diff: DiffusionSpec, pot: PotentialSpec, x: float) -> float:
    """gamma=2 classification operator:
    U[f] = (x^2/4) v'' + (f/(4 sigma)) v' - f/(4x) + (x g' ln x)/2 + g,  v = f ln(x)/x."""
    s = diff.sigma

    def v(z: float) -> float:
        return diff.drift(z) * math.log(z) / z

    vp = _derivative_4th(v, x)
    vpp = _second_derivative(v, x)
    f = diff.drift(x)
    gp = pot.derivative(x)  # raises CapabilityError for tabulated potentials
    return (x * x / 4.0) * vpp + (f / (4.0 * s)) * vp - f / (4.0 * x) \
        + (x * gp * math.log(x)) / 2.0 + pot(x)


def riccati_residual(diff: DiffusionSpec, pot: PotentialSpec,
                     params: RiccatiParams, x: float) -> float:
    """Residual of the drift equation at x > 0; zero (to tolerance) iff the
    (drift, potential) pair belongs to the stated family with these constants."""
    if x <= 0:
        raise DomainError("riccati_residual: x must be > 0")
    if params.family in ("log_linear", "log_quadratic"):
        if diff.gamma != 2.0:
            raise CapabilityError("log families apply to gamma=2 only")
        target = params.A if params.family == "log_linear" \
            else params.A * math.log(x) + params.B
        return _u_operator(diff, pot, x) - target
    if diff.gamma == 2.0:
        raise CapabilityError("gamma=2 diffusions use the log_linear/log_quadratic families")
    return _residual_lhs(diff, pot, x) - _family_rhs(params, diff.sigma, diff.gamma, x)


def _fit_family(family: str, lhs: np.ndarray, basis: np.ndarray,
                offset: float = 0.0) -> tuple[np.ndarray, float]:
    cond = np.linalg.cond(basis)
    if not np.isfinite(cond) or cond > 1e12:
        raise ConditioningError(
            f"fit_riccati: design matrix for family {family!r} is degenerate (cond={cond:.3g})")
    coef, *_ = np.linalg.lstsq(basis, lhs - offset, rcond=None)
    resid = lhs - offset - basis @ coef
    return coef, float(np.max(np.abs(resid)))


def fit_riccati(diff: DiffusionSpec, pot: PotentialSpec,
                grid: Sequence[float]) -> Optional[RiccatiParams]:
    """Classify (drift, potential): least-squares fit of the constants against
    each family's monomial basis, trying families with fewer free parameters
    first. Returns None when nothing fits below 1e-6 * scale (no nontrivial
    symmetry in the implemented families).
    """
    xs = np.asarray(sorted(grid), dtype=float)
    if xs.size < 8:
        raise DomainError("fit_riccati: need a grid of >= 8 points")
    if xs[0] <= 0:
        raise DomainError("fit_riccati: grid must be positive")
    if xs[-1] / xs[0] < 10.0:
        raise DomainError("fit_riccati: grid must span at least one decade")

    g, s = diff.gamma, diff.sigma
    if g == 2.0:
        lhs = np.array([_u_operator(diff, pot, x) for x in xs])
        candidates = [
            ("log_linear", np.ones((xs.size, 1)), 0.0),
            ("log_quadratic", np.column_stack([np.log(xs), np.ones_like(xs)]), 0.0),
        ]
    else:
        lhs = np.array([_residual_lhs(diff, pot, x) for x in xs])
        p = 2.0 - g
        candidates = [
            ("linear", np.column_stack([2.0 * s * xs ** p, np.ones_like(xs)]), 0.0),
            ("quadratic",
             np.column_stack([0.5 * xs ** (2 * p), xs ** p, np.ones_like(xs)]), 0.0),
        ]
        if g == 1.0:
            candidates.append(
                ("quadratic_sqrt",
                 np.column_stack([0.5 * xs ** 2, (2.0 / 3.0) * xs ** 1.5, xs]),
                 -0.375 * s * s))

    scale = max(1.0, float(np.max(np.abs(lhs))))
    for family, basis, offset in candidates:
        coef, max_resid = _fit_family(family, lhs, basis, offset)
        if max_resid < 1e-6 * scale:
            coef[np.abs(coef) < 1e-10 * scale] = 0.0
            vals = list(coef) + [0.0] * (3 - len(coef))
            if family == "linear":
                return RiccatiParams(family, A=vals[0], B=vals[1], C=0.0)
            return RiccatiParams(family, A=vals[0], B=vals[1], C=vals[2])
    return None


def build_drift(A: float, B: float, sigma: float, c1: float, c2: float) -> DiffusionSpec:
    """Construct a gamma=1 drift solving sigma*x*f' - sigma*f + f^2/2 = A*x + B
    (the linear family with constant potential absorbed by the caller).

    Mechanism: f = 2*sigma*x*y'/y linearizes the equation to
    2*sigma^2*x^2*y'' = (A*x + B)*y, whose solutions are
    y = sqrt(x)*(c1*I_alpha(sqrt(2*A*x)/sigma) + c2*K_alpha(sqrt(2*A*x)/sigma)),
    alpha = sqrt(2*B + sigma^2)/sigma; for A = 0, y = c1*x^r+ + c2*x^r-,
    r+- = (1 +- alpha)/2. F = 2*sigma*ln(y) so F' = f/x exactly.
    """
    if 2.0 * B + sigma * sigma <= 0:
        raise DomainError("build_drift: requires 2B + sigma^2 > 0")
    if A < 0:
        raise DomainError("build_drift: requires A >= 0")
    if c1 == 0.0 and c2 == 0.0:
        raise DomainError("build_drift: (c1, c2) must not both be zero")
    alpha = math.sqrt(2.0 * B + sigma * sigma) / sigma

    if A == 0.0:
        rp, rm = 0.5 * (1.0 + alpha), 0.5 * (1.0 - alpha)

        def log_y(x: float) -> float:
            val = c1 * x ** rp + c2 * x ** rm
            if val <= 0:
                raise SingularDriftError(f"build_drift: y({x}) <= 0")
            return math.log(val)

        def w(x: float) -> float:  # y'/y
            num = c1 * rp * x ** (rp - 1.0) + c2 * rm * x ** (rm - 1.0)
            den = c1 * x ** rp + c2 * x ** rm
            if den == 0:
                raise SingularDriftError(f"build_drift: y({x}) = 0")
            return num / den
    else:
        c = math.sqrt(2.0 * A) / sigma  # y = sqrt(x) * Z_alpha(c*sqrt(x))

        def _parts(x: float) -> tuple[float, float]:
            """(Z, Z') at z = c*sqrt(x), both carrying the scaling e^{-z}."""
            z = c * math.sqrt(x)
            zs = c1 * specfun.bessel_i(alpha, z, scaled=True)
            zps = 0.5 * c1 * (specfun.bessel_i(alpha - 1.0, z, scaled=True)
                              + specfun.bessel_i(alpha + 1.0, z, scaled=True))
            if c2 != 0.0:
                damp = math.exp(-2.0 * z)
                zs += c2 * specfun.bessel_k(alpha, z, scaled=True) * damp
                zps -= 0.5 * c2 * damp * (specfun.bessel_k(alpha - 1.0, z, scaled=True)
                                          + specfun.bessel_k(alpha + 1.0, z, scaled=True))
            return zs, zps

        def log_y(x: float) -> float:
            zs, _ = _parts(x)
            if zs <= 0:
                raise SingularDriftError(f"build_drift: y({x}) <= 0")
            return 0.5 * math.log(x) + c * math.sqrt(x) + math.log(zs)

        def w(x: float) -> float:  # y'/y; the e^{-z} scaling cancels in Z'/Z
            zs, zps = _parts(x)
            if zs == 0:
                raise SingularDriftError(f"build_drift: y({x}) = 0")
            return 0.5 / x + (0.5 * c / math.sqrt(x)) * (zps / zs)

    def drift(x: float) -> float:
        if x <= 0:
            raise DomainError("drift: x must be > 0")
        return 2.0 * sigma * x * w(x)

    def drift_derivative(x: float) -> float:
        wx = w(x)
        wpx = (A * x + B) / (2.0 * sigma * sigma * x * x) - wx * wx
        return 2.0 * sigma * (wx + x * wpx)

    def F(x: float) -> float:
        if x <= 0:
            raise DomainError("F: x must be > 0")
        return 2.0 * sigma * log_y(x)

    # sign-change scan for interior zeros of y (mixed-sign coefficients)
    if c1 * c2 < 0 or (c1 < 0 and c2 <= 0) or (c1 <= 0 and c2 < 0):
        prev_x, prev_s = None, None
        for x in np.geomspace(1e-3, 100.0, 200):
            try:
                log_y(float(x))
                s_now = 1.0
            except SingularDriftError:
                s_now = -1.0
            if prev_s is not None and s_now != prev_s:
                raise SingularDriftError(
                    f"build_drift: y changes sign between x={prev_x:.6g} and x={x:.6g}")
            prev_x, prev_s = x, s_now

    spec = DiffusionSpec(gamma=1.0, sigma=sigma, drift=drift,
                         drift_antiderivative=F, drift_derivative=drift_derivative,
                         label=f"built(A={A}, B={B}, sigma={sigma})")
    params = RiccatiParams("linear", A=A / (2.0 * sigma), B=B)
    for x in np.geomspace(0.05, 100.0, 25):
        r = riccati_residual(spec, ZERO_POTENTIAL, params, float(x))
        if abs(r) > 1e-8 * max(1.0, abs(A * x + B)):
            raise ConstructionError(
                f"build_drift: self-check residual {r:.3e} at x={x:.4g}")
    return spec
