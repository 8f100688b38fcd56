"""Stationary solutions and one-parameter symmetry solutions.

For u_t = sigma*x^gamma*u_xx + f(x)*u_x - g(x)*u whose drift sits in one of the
Riccati families, the PDE carries a one-parameter group of point symmetries.
Applied to a stationary solution u0, the group orbit is a closed-form
time-dependent solution whose t=0 profile is u0 times an explicit weight; this
is what turns quadrature identities into generalized Laplace transforms of the
transition kernel.

Four symmetry families are implemented (names describe the t=0 weight):

    laplace_scaling   gamma != 2, linear Riccati family;
                      U_lambda(x, 0) = exp(-lambda*x^(2-gamma)) * u0(x).
    log_scaling       gamma = 2, log_linear family;
                      U_eps(x, 0) = exp(-(eps/sigma)*(ln x)^2) * u0(x).
    exp_scaling       gamma = 1, quadratic family with A > 0; group parameter
                      enters through E = exp(sqrt(A)*t).
    exp_kummer        the Tricomi-function orbit of the exp_scaling group,
                      used for Whittaker-transform verification.

The unit-parameter exp_scaling orbit U_1 of a non-invariant stationary
solution vanishes as t -> 0+ and supplies the weight of the boundary atom that
mass-deficient kernels need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    CapabilityError,
    ConstructionError,
    DomainError,
    EvalOverflowError,
    PoleError,
)
from . import specfun
from .riccati import DiffusionSpec, PotentialSpec, RiccatiParams, fit_riccati

__all__ = [
    "StationarySolution",
    "SymmetrySolution",
    "stationary_solution",
    "laplace_scaling_symmetry",
    "log_scaling_symmetry",
    "exp_scaling_symmetry",
    "exp_kummer_symmetry",
    "atom_weight",
    "pde_residual",
]

SYMMETRY_FAMILIES = ("laplace_scaling", "log_scaling", "exp_scaling", "exp_kummer")

_CHECK_POINTS = (0.5, 1.0, 2.0, 5.0)


@dataclass(frozen=True)
class StationarySolution:
    """A positive solution of sigma*x^gamma*u'' + f*u' - g*u = 0 on x > 0.

    log_eval, when present, allows overflow-free propagation to large
    arguments. limit_at_mu_zero records whether the branch degenerates to the
    constant 1 when the killing is switched off (the selection criterion for
    the transform identities).
    """

    eval: Callable[[float], float]
    description: str
    limit_at_mu_zero: str = "unknown"
    log_eval: Optional[Callable[[float], float]] = None

    def __post_init__(self) -> None:
        if self.limit_at_mu_zero not in ("constant_one", "nonconstant", "unknown"):
            raise DomainError(
                f"StationarySolution: bad limit tag {self.limit_at_mu_zero!r}")

    def __call__(self, x: float) -> float:
        return self.eval(x)

    def log(self, x: float) -> float:
        if self.log_eval is not None:
            return self.log_eval(x)
        v = self.eval(x)
        if v <= 0:
            raise DomainError(f"StationarySolution: not positive at x={x}")
        return math.log(v)

    def validate(self, diff: DiffusionSpec, pot: PotentialSpec,
                 points: Sequence[float] = _CHECK_POINTS, tol: float = 1e-8) -> None:
        """Finite-difference residual check of the stationary ODE."""
        for x in points:
            h = 1e-3 * x
            um2, um1 = self.eval(x - 2 * h), self.eval(x - h)
            u0x, up1, up2 = self.eval(x), self.eval(x + h), self.eval(x + 2 * h)
            up = (-up2 + 8 * up1 - 8 * um1 + um2) / (12 * h)
            upp = (-up2 + 16 * up1 - 30 * u0x + 16 * um1 - um2) / (12 * h * h)
            terms = (diff.sigma * x ** diff.gamma * upp, diff.drift(x) * up,
                     -pot(x) * u0x)
            resid = sum(terms)
            scale = max(max(abs(v) for v in terms), abs(u0x), 1e-300)
            if abs(resid) > tol * scale:
                raise ConstructionError(
                    f"StationarySolution '{self.description}': ODE residual "
                    f"{resid:.3e} (scale {scale:.3e}) at x={x}")


@dataclass(frozen=True)
class SymmetrySolution:
    """Group orbit of a stationary solution: eval(parameter, x, t)."""

    eval: Callable[[float, float, float], float]
    family: str
    params: Optional[RiccatiParams] = None
    stationary: Optional[StationarySolution] = None
    invariant: bool = False

    def __post_init__(self) -> None:
        if self.family not in SYMMETRY_FAMILIES:
            raise DomainError(f"SymmetrySolution: unknown family {self.family!r}")

    def __call__(self, p: float, x: float, t: float) -> float:
        return self.eval(p, x, t)


def _log_hyp1f1(a: float, b: float, z: float) -> float:
    """log of 1F1(a, b, z) for positive values, with a Kummer-transform
    fallback when the direct evaluation overflows."""
    try:
        v = specfun.hypergeom_1f1(a, b, z)
        if v > 0 and math.isfinite(v):
            return math.log(v)
    except EvalOverflowError:
        pass
    w = specfun.hypergeom_1f1(b - a, b, -z)
    if w <= 0:
        raise DomainError(f"_log_hyp1f1: non-positive value at ({a}, {b}, {z})")
    return z + math.log(w)


def _mu_zero_variant(pot: PotentialSpec) -> Optional[PotentialSpec]:
    if pot.form == "zero":
        return pot
    if pot.form == "power":
        return PotentialSpec(form="zero")
    if pot.form == "inverse_plus_linear":
        return PotentialSpec(form="zero")
    return None


def _linear_family_solution(diff: DiffusionSpec, params: RiccatiParams,
                            branch: str) -> Tuple[Callable, Callable, str]:
    """Stationary branch for the linear family, gamma != 2.

    Substituting u0 = exp(-F/(2*sigma)) * w(z), z = x^(2-gamma), turns the
    stationary ODE into z^2 w'' + p*z*w' - (a*z + b)*w = 0 with
    p = (1-gamma)/(2-gamma), a = A/(sigma*(2-gamma)^2),
    b = B/(2*sigma^2*(2-gamma)^2); solutions are power-times-Bessel.
    """
    g, s = diff.gamma, diff.sigma
    q = 2.0 - g
    p = (1.0 - g) / q
    a = params.A / (s * q * q)
    b = params.B / (2.0 * s * s * q * q)
    disc = (1.0 - p) ** 2 + 4.0 * b
    if disc < 0:
        raise CapabilityError(
            f"stationary_solution: complex Bessel index (discriminant {disc:.3g})")
    nu = math.sqrt(disc)
    if a < 0:
        raise CapabilityError("stationary_solution: A < 0 in the linear family")

    if a == 0.0:
        expo = ((1.0 - p) + (nu if branch == "principal" else -nu)) / 2.0

        def log_u0(x: float) -> float:
            return -diff.F(x) / (2.0 * s) + expo * q * math.log(x)

        desc = f"power branch x^{{{expo * q:.6g}}} times exp(-F/(2 sigma))"
    elif branch == "principal":
        def log_u0(x: float) -> float:
            z = x ** q
            return (-diff.F(x) / (2.0 * s) + 0.5 * (1.0 - p) * math.log(z)
                    + specfun.log_bessel_i(nu, 2.0 * math.sqrt(a * z)))

        desc = f"growing Bessel branch I_{{{nu:.6g}}}"
    else:
        def log_u0(x: float) -> float:
            z = x ** q
            arg = 2.0 * math.sqrt(a * z)
            kv = specfun.bessel_k(nu, arg, scaled=True)
            return (-diff.F(x) / (2.0 * s) + 0.5 * (1.0 - p) * math.log(z)
                    + math.log(kv) - arg)

        desc = f"decaying Bessel branch K_{{{nu:.6g}}}"

    return (lambda x: math.exp(log_u0(x))), log_u0, desc


def _quadratic_family_solution(diff: DiffusionSpec, params: RiccatiParams,
                               branch: str,
                               coefficients: Optional[Tuple[float, float]]
                               ) -> Tuple[Callable, Callable, str]:
    """Stationary branch for the quadratic family, gamma = 1, A > 0:
    u0 = x^(beta/2) * exp(-(F(x) + sqrt(A)*x)/(2*sigma)) * M(alpha, beta, ...)
    with M either the regular Kummer function or the Tricomi function."""
    s = diff.sigma
    if params.A <= 0:
        raise CapabilityError("stationary_solution: quadratic family needs A > 0")
    rA = math.sqrt(params.A)
    disc = 1.0 + 2.0 * params.C / (s * s)
    if disc < 0:
        raise CapabilityError("stationary_solution: complex Kummer index")
    beta = 1.0 + math.sqrt(disc)
    alpha = 0.5 * beta + params.B / (2.0 * s * rA)

    if coefficients is not None:
        c1, c2 = coefficients
    elif branch == "principal":
        c1, c2 = 1.0, 0.0
    else:
        c1, c2 = 0.0, 1.0

    def log_u0(x: float) -> float:
        z = rA * x / s
        base = 0.5 * beta * math.log(x) - (diff.F(x) + rA * x) / (2.0 * s)
        if c2 == 0.0:
            return base + math.log(c1) + _log_hyp1f1(alpha, beta, z)
        val = 0.0
        if c1 != 0.0:
            val += c1 * specfun.hypergeom_1f1(alpha, beta, z)
        val += c2 * specfun.tricomi_u(alpha, beta, z)
        if val <= 0:
            raise DomainError(f"stationary_solution: non-positive combination at x={x}")
        return base + math.log(val)

    kind = "regular Kummer" if c2 == 0.0 else ("Tricomi" if c1 == 0.0 else "mixed Kummer")
    desc = f"{kind} branch (alpha={alpha:.6g}, beta={beta:.6g}, c=({c1:.6g},{c2:.6g}))"
    return (lambda x: math.exp(log_u0(x))), log_u0, desc


def stationary_solution(diff: DiffusionSpec, pot: PotentialSpec,
                        branch: str = "principal",
                        params: Optional[RiccatiParams] = None,
                        coefficients: Optional[Tuple[float, float]] = None,
                        check_points: Sequence[float] = _CHECK_POINTS
                        ) -> StationarySolution:
    """Construct and verify a stationary solution for a classified pair.

    branch selects between the two independent solutions ('principal' is the
    branch that tends to the constant 1 as the killing strength vanishes, when
    that holds; 'secondary' is the other one). coefficients=(c1, c2) overrides
    the selector with an explicit linear combination (quadratic family only).
    """
    if branch not in ("principal", "secondary"):
        raise DomainError(f"stationary_solution: unknown branch {branch!r}")
    if params is None:
        params = fit_riccati(diff, pot, np.geomspace(0.2, 20.0, 24))
        if params is None:
            raise CapabilityError(
                "stationary_solution: (drift, potential) not in an implemented family")

    if pot.form == "zero" and params.family == "linear" and params.A == 0 \
            and params.B == 0 and branch == "principal":
        sol = StationarySolution(eval=lambda x: 1.0, log_eval=lambda x: 0.0,
                                 description="constant 1 (zero potential)",
                                 limit_at_mu_zero="constant_one")
        sol.validate(diff, pot, check_points)
        return sol

    if params.family == "linear":
        if diff.gamma == 2.0:
            raise CapabilityError("stationary_solution: gamma=2 uses the log families")
        ev, log_ev, desc = _linear_family_solution(diff, params, branch)
    elif params.family == "quadratic":
        if diff.gamma != 1.0:
            raise CapabilityError(
                "stationary_solution: quadratic family implemented for gamma=1")
        ev, log_ev, desc = _quadratic_family_solution(diff, params, branch, coefficients)
    else:
        raise CapabilityError(
            f"stationary_solution: no constructor for family {params.family!r}")

    limit = _mu_zero_limit_tag(diff, pot, branch, coefficients)
    sol = StationarySolution(eval=ev, log_eval=log_ev, description=desc,
                             limit_at_mu_zero=limit)
    sol.validate(diff, pot, check_points)
    return sol


def _mu_zero_limit_tag(diff: DiffusionSpec, pot: PotentialSpec, branch: str,
                       coefficients: Optional[Tuple[float, float]]) -> str:
    """Numerically decide whether the same branch collapses to the constant 1
    when the potential is switched off."""
    pot0 = _mu_zero_variant(pot)
    if pot0 is None:
        return "unknown"
    try:
        params0 = fit_riccati(diff, pot0, np.geomspace(0.2, 20.0, 24))
        if params0 is None:
            return "unknown"
        if params0.family == "linear":
            ev, _, _ = _linear_family_solution(diff, params0, branch)
        elif params0.family == "quadratic" and diff.gamma == 1.0:
            ev, _, _ = _quadratic_family_solution(diff, params0, branch, coefficients)
        else:
            return "unknown"
        ref = ev(1.0)
        if ref <= 0:
            return "nonconstant"
        vals = [ev(x) / ref for x in (0.5, 1.0, 2.0, 5.0)]
        return "constant_one" if max(abs(v - 1.0) for v in vals) < 1e-8 else "nonconstant"
    except Exception:
        return "unknown"


def laplace_scaling_symmetry(diff: DiffusionSpec, pot: PotentialSpec,
                             u0: StationarySolution, A: float) -> SymmetrySolution:
    """Symmetry for gamma != 2 drifts in the linear family (constant A).

    eval(lam, x, t) has t=0 profile exp(-lam*x^(2-gamma))*u0(x); integrating
    that profile against the transition kernel reproduces eval at (x, t), which
    is the generalized Laplace transform identity the kernels are checked
    against.
    """
    g, s = diff.gamma, diff.sigma
    if g == 2.0:
        raise CapabilityError("laplace_scaling_symmetry: gamma=2 uses log_scaling")
    q = 2.0 - g

    def ev(lam: float, x: float, t: float) -> float:
        if x <= 0:
            raise DomainError("laplace_scaling_symmetry: x must be > 0")
        eps = 0.25 * s * q * q * lam
        den = 1.0 + 4.0 * eps * t
        if den <= 0:
            raise DomainError(
                f"laplace_scaling_symmetry: out of the symmetry's domain (1+4*eps*t={den:.3g})")
        xbar = x / den ** (2.0 / q)
        lg = (-(1.0 - g) / q * math.log(den)
              - 4.0 * eps * (x ** q + A * s * q * q * t * t) / (s * q * q * den)
              + (diff.F(xbar) - diff.F(x)) / (2.0 * s)
              + u0.log(xbar))
        return math.exp(lg)

    return SymmetrySolution(eval=ev, family="laplace_scaling", stationary=u0)


def log_scaling_symmetry(diff: DiffusionSpec, pot: PotentialSpec,
                         u0: StationarySolution, A: float) -> SymmetrySolution:
    """Symmetry for gamma = 2 drifts in the log_linear family (constant A);
    t=0 profile exp(-(eps/sigma)*(ln x)^2)*u0(x)."""
    s = diff.sigma
    if diff.gamma != 2.0:
        raise CapabilityError("log_scaling_symmetry: requires gamma=2")

    def ev(eps: float, x: float, t: float) -> float:
        if x <= 0:
            raise DomainError("log_scaling_symmetry: x must be > 0")
        den = 1.0 + 4.0 * eps * t
        if den <= 0:
            raise DomainError(
                f"log_scaling_symmetry: out of the symmetry's domain (1+4*eps*t={den:.3g})")
        lx = math.log(x)
        xbar = math.exp(lx / den)
        lg = (-0.5 * math.log(den)
              - eps * (lx * lx - 2.0 * s * t * lx + (4.0 * A + s) * s * t * t) / (s * den)
              + (diff.F(xbar) - diff.F(x)) / (2.0 * s)
              + u0.log(xbar))
        return math.exp(lg)

    return SymmetrySolution(eval=ev, family="log_scaling", stationary=u0)


_INVARIANCE_SAMPLES = ((0.5, 1.0, 0.7), (-0.3, 2.0, 0.4), (0.9, 0.6, 1.2))


def exp_scaling_symmetry(diff: DiffusionSpec, pot: PotentialSpec,
                         u0: StationarySolution,
                         params: RiccatiParams) -> SymmetrySolution:
    """Symmetry for gamma = 1 drifts in the quadratic family with A > 0. The
    group moves x to x*E/(E - eps), E = exp(sqrt(A)*t). Stationary solutions
    can be fixed points of the group; that is detected and flagged."""
    s = diff.sigma
    if diff.gamma != 1.0:
        raise CapabilityError("exp_scaling_symmetry: requires gamma=1")
    if params.A <= 0:
        raise CapabilityError("exp_scaling_symmetry: requires A > 0")
    rA = math.sqrt(params.A)

    def ev(eps: float, x: float, t: float) -> float:
        if x <= 0:
            raise DomainError("exp_scaling_symmetry: x must be > 0")
        E = math.exp(rA * t)
        if E - eps <= 0:
            raise DomainError(
                f"exp_scaling_symmetry: out of the symmetry's domain (E-eps={E - eps:.3g})")
        xbar = x * E / (E - eps)
        lg = (-params.B * t / (2.0 * s)
              + params.B / (2.0 * s * rA) * math.log(E - eps)
              - rA * x * eps / (2.0 * s * (E - eps))
              + (diff.F(xbar) - diff.F(x)) / (2.0 * s)
              + u0.log(xbar))
        return math.exp(lg)

    invariant = True
    for eps, x, t in _INVARIANCE_SAMPLES:
        try:
            ref = u0(x)
            if abs(ev(eps, x, t) - ref) > 1e-9 * max(1.0, abs(ref)):
                invariant = False
                break
        except (DomainError, OverflowError):
            invariant = False
            break

    return SymmetrySolution(eval=ev, family="exp_scaling", params=params,
                            stationary=u0, invariant=invariant)


def exp_kummer_symmetry(diff: DiffusionSpec, params: RiccatiParams) -> SymmetrySolution:
    """Tricomi-function orbit of the exp_scaling group (gamma = 1, A > 0):

        U_eps = e^{-Bt/(2s)} (E-eps)^{B/(2s rA)} z^{beta/2} e^{-F(x)/(2s)}
                * exp(-rA*x*(E+eps)/(2s(E-eps))) * TricomiU(alpha, beta, rA*z/s)

    with z = x*E/(E-eps), beta = 1+sqrt(1+2C/s^2), alpha = beta/2 + B/(2s rA).
    Its t=0, eps=0 value is the Tricomi stationary branch itself. Used by the
    Whittaker-transform verification.
    """
    s = diff.sigma
    if diff.gamma != 1.0:
        raise CapabilityError("exp_kummer_symmetry: requires gamma=1")
    if params.A <= 0:
        raise CapabilityError("exp_kummer_symmetry: requires A > 0")
    rA = math.sqrt(params.A)
    disc = 1.0 + 2.0 * params.C / (s * s)
    if disc < 0:
        raise CapabilityError("exp_kummer_symmetry: complex Kummer index")
    beta = 1.0 + math.sqrt(disc)
    alpha = 0.5 * beta + params.B / (2.0 * s * rA)
    if beta <= 0 and beta == int(beta):
        raise PoleError(f"exp_kummer_symmetry: beta={beta} is a non-positive integer")

    def ev(eps: float, x: float, t: float) -> float:
        if x <= 0:
            raise DomainError("exp_kummer_symmetry: x must be > 0")
        E = math.exp(rA * t)
        if E - eps <= 0:
            raise DomainError(
                f"exp_kummer_symmetry: out of the symmetry's domain (E-eps={E - eps:.3g})")
        z = x * E / (E - eps)
        lg = (-params.B * t / (2.0 * s)
              + params.B / (2.0 * s * rA) * math.log(E - eps)
              + 0.5 * beta * math.log(z)
              - diff.F(x) / (2.0 * s)
              - rA * x * (E + eps) / (2.0 * s * (E - eps))
              + math.log(specfun.tricomi_u(alpha, beta, rA * z / s)))
        return math.exp(lg)

    return SymmetrySolution(eval=ev, family="exp_kummer", params=params)


def atom_weight(diff: DiffusionSpec, pot: PotentialSpec,
                u0: StationarySolution,
                params: RiccatiParams) -> Callable[[float, float], float]:
    """Weight U_1(x, t) of the boundary atom: the unit-parameter exp_scaling
    orbit of a non-invariant stationary solution. Vanishes as t -> 0+, so the
    atom does not disturb the initial condition."""
    sym = exp_scaling_symmetry(diff, pot, u0, params)
    if sym.invariant:
        raise CapabilityError(
            "atom_weight: the chosen stationary solution is a fixed point of the "
            "symmetry; its orbit carries no atom")
    return lambda x, t: sym(1.0, x, t)


def pde_residual(u: Callable[[float, float], float], diff: DiffusionSpec,
                 pot: PotentialSpec, x: float, t: float, h: float = 1e-3) -> float:
    """Central-difference residual of u_t - sigma*x^gamma*u_xx - f*u_x + g*u;
    O(h^2) for smooth solutions."""
    if x - 2 * h <= 0:
        raise DomainError("pde_residual: stencil leaves x > 0")
    if t - h <= 0:
        raise DomainError("pde_residual: stencil leaves t > 0")
    ut = (u(x, t + h) - u(x, t - h)) / (2.0 * h)
    ux = (u(x + h, t) - u(x - h, t)) / (2.0 * h)
    uxx = (u(x + h, t) - 2.0 * u(x, t) + u(x - h, t)) / (h * h)
    return ut - diff.sigma * x ** diff.gamma * uxx - diff.drift(x) * ux + pot(x) * u(x, t)
