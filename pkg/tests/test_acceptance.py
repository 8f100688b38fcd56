"""Acceptance gate: eleven go/no-go criteria for the whole package, each
printing one PASS/FAIL line (run pytest with -s or look at captured output).

Tolerances and grids are pinned here on purpose; do not widen them. A
criterion that double precision cannot meet is kept at full strength and
marked as an expected failure instead of being weakened."""

import math

import numpy as np
import pytest

from feynkac import catalog as cat
from feynkac import symmetry as sym
from feynkac import verify as v
from feynkac.riccati import RiccatiParams, fit_riccati, riccati_residual

RESIDUAL_GRID = np.geomspace(1e-2, 1e2, 50)
FIT_GRID = np.geomspace(0.2, 20.0, 24)


def _report(num, desc, ok):
    print(f"[ACCEPTANCE {num:02d}] {'PASS' if ok else 'FAIL'} - {desc}")
    return ok


# ---------------------------------------------------------------------------
# 1. drift-equation constants: documented values and fit recovery
# ---------------------------------------------------------------------------

# canonical (family, A, B, C) for one representative parameter set per entry;
# each tuple was derived by hand (see the expansions in tests/test_riccati.py
# for the derivation pattern) and is independent of fit_riccati
DOCUMENTED_CONSTANTS = [
    ("besq", {"n": 3.0, "nu": 0.8},
     ("linear", 0.0, 0.5 * 9.0 - 6.0 + 4.0 * 0.8, 0.0)),
    ("besq", {"n": 3.0, "mu": 0.5, "nu": 0.4},
     ("quadratic", 8.0 * 0.5, 0.0, 0.5 * 9.0 - 6.0 + 4.0 * 0.4)),
    ("bessel", {"a": 1.2, "mu": 0.6},
     ("linear", 0.0, 0.5 * 1.2 ** 2 - 0.5 * 1.2 + 0.25 * 0.6, 0.0)),
    ("bessel_drift", {"a": 1.1, "b": 0.6, "mu": 0.3},
     ("linear", 0.5 * 0.6 ** 2, 0.5 * 1.1 ** 2 - 0.125 + 0.3, 0.0)),
    ("cir", {"a": 1.1, "b": 0.8, "sigma": 0.6, "mu": 0.7},
     ("quadratic", 0.8 ** 2, -1.1 * 0.8,
      0.5 * 1.1 ** 2 - 1.1 * 0.6 + 2.0 * 0.6 * 0.7)),
    ("rational_drift", {"a": 1.0, "mu": 0.7},
     ("quadratic", 4.0 * 0.7, 0.0, 0.0)),
    ("tanh_drift", {"mu": 0.4},
     ("quadratic", 4.0 * (1.0 + 0.4), 0.0, 0.0)),
    ("rational_showcase", {"a": 0.8, "b": 1.3},
     ("linear", 0.0, 1.5, 0.0)),
    ("sqrt_drift", {"a": 0.8, "b": 0.5, "A": 1.2, "B": 0.9},
     ("linear", 1.2 / 2.0, 0.9, 0.0)),
    ("generic_linear", {"sigma": 1.0, "A": 1.2, "B": -0.3, "mu": 0.05},
     ("linear", 1.2 / 2.0, -0.3 + 2.0 * 0.05, 0.0)),
    ("generic_quadratic", {"sigma": 0.6, "a": 1.1, "b": 0.8, "mu": 0.2},
     ("quadratic", 0.8 ** 2 + 4.0 * 0.2 * 0.6, -1.1 * 0.8,
      0.5 * 1.1 ** 2 - 1.1 * 0.6)),
    # radial_ou is handled by the strict-xfail test below: its residual scale
    # (~1e7 at x = 100) exceeds what float64 cancellation allows
]

RADIAL_OU_CASE = ("radial_ou", {"a": 0.9, "b": -0.5, "mu": 0.7},
                  ("quadratic", 0.5 ** 2 + 4.0 * 0.7, -0.5 * (1.0 + 0.9),
                   0.5 * 0.9 ** 2 - 0.9))


def _criterion_1_body(cases, residual_tol=1e-10):
    ok = True
    for name, params, (family, A, B, C) in cases:
        entry = cat.make_entry(name, **params)
        documented = RiccatiParams(family, A=A, B=B, C=C)
        worst = max(abs(riccati_residual(entry.diffusion, entry.potential,
                                         documented, float(x)))
                    for x in RESIDUAL_GRID)
        fitted = fit_riccati(entry.diffusion, entry.potential, FIT_GRID)
        fit_ok = fitted is not None and fitted.family == family and all(
            abs(got - want) <= 1e-6 * max(1.0, abs(want))
            for got, want in [(fitted.A, A), (fitted.B, B), (fitted.C, C)])
        if worst >= residual_tol or not fit_ok:
            ok = False
    return ok


def test_acceptance_01_riccati_constants():
    ok = _criterion_1_body(DOCUMENTED_CONSTANTS)
    assert _report(1, "documented drift-equation constants: residual < 1e-10 "
                      "on [1e-2, 1e2], fit recovery to 1e-6", ok)


@pytest.mark.xfail(strict=True,
                   reason="float64 cannot cancel the ~1e7 residual terms of "
                          "the radially symmetric entry at x = 100 down to "
                          "1e-10 (irreducible rounding ~5e-9); kept at full "
                          "strength rather than weakened")
def test_acceptance_01_riccati_constants_radial_symmetric_entry():
    ok = _criterion_1_body([RADIAL_OU_CASE])
    assert _report(1, "radially symmetric entry residual < 1e-10 "
                      "on [1e-2, 1e2]", ok)


def test_acceptance_01b_radial_symmetric_fit_recovery():
    # the fit-recovery half of criterion 1 does hold for that entry
    name, params, (family, A, B, C) = RADIAL_OU_CASE
    entry = cat.make_entry(name, **params)
    fitted = fit_riccati(entry.diffusion, entry.potential, FIT_GRID)
    ok = fitted is not None and fitted.family == family and all(
        abs(got - want) <= 1e-6 * max(1.0, abs(want))
        for got, want in [(fitted.A, A), (fitted.B, B), (fitted.C, C)])
    assert _report(1, "radially symmetric entry fit recovery to 1e-6", ok)


# ---------------------------------------------------------------------------
# 2. transform identities by quadrature
# ---------------------------------------------------------------------------

def test_acceptance_02_transform_identities():
    rep = v.run_suite("transform")
    lams = {row.grid_point.split(",")[0] for row in rep.rows}
    assert lams == {f"lam={q}" for q in (0.1, 0.5, 1.0, 2.0, 5.0)}
    worst = max(row.rel_err for row in rep.rows)
    ok = worst <= 1e-8
    assert _report(2, f"transform identities, max rel err {worst:.2e} "
                      "<= 1e-8 over the pinned (lam, t, x) grid", ok)


# ---------------------------------------------------------------------------
# 3. normalization: total mass, elementary companions, atom defect
# ---------------------------------------------------------------------------

def test_acceptance_03_normalization():
    rep = v.run_suite("mass", tol=1e-8)
    idents = {row.identity for row in rep.rows}
    assert any("cosh" in s for s in idents)
    assert any("rational_showcase" in s for s in idents)
    worst = max(row.abs_err for row in rep.rows)
    ok = rep.passed and worst <= 1e-8
    assert _report(3, f"densities plus atoms integrate to 1, cosh companion "
                      f"and showcase defect formulas hold; worst {worst:.2e}",
                   ok)


# ---------------------------------------------------------------------------
# 4. numerical Laplace inversion recovers the kernel
# ---------------------------------------------------------------------------

def test_acceptance_04_laplace_inversion():
    params = {"n": 3.0}
    t, x = 1.0, 1.0
    worst = 0.0
    for y in (0.2, 0.5, 1.0, 2.0, 3.5, 5.0):
        inv = v.laplace_invert(
            lambda lam: cat.transform_rhs("besq", params, lam, t, x), y)
        ref = cat.density("besq", params, t, x, y)
        worst = max(worst, abs(inv - ref) / abs(ref))
    ok = worst <= 1e-4
    assert _report(4, f"Gaver-Stehfest inversion of the transform matches the "
                      f"kernel, max rel err {worst:.2e} <= 1e-4", ok)


# ---------------------------------------------------------------------------
# 5. finite-difference residual order 2 for solutions and kernels
# ---------------------------------------------------------------------------

def test_acceptance_05_pde_residual_orders():
    rep = v.run_suite("pde")
    orders = [row.computed for row in rep.rows]

    # the four symmetry orbit families, on representative pairs
    eb = cat.make_entry("besq", n=3.0)
    u0 = sym.stationary_solution(eb.diffusion, eb.potential)
    ls = sym.laplace_scaling_symmetry(eb.diffusion, eb.potential, u0, A=0.0)
    orders.append(v.residual_convergence_order(
        lambda x, t: ls(0.8, x, t), eb.diffusion, eb.potential, 1.3, 0.6))

    from feynkac.riccati import DiffusionSpec, ZERO_POTENTIAL
    d2 = DiffusionSpec(gamma=2.0, sigma=0.5, drift=lambda x: 0.7 * x,
                       drift_derivative=lambda x: 0.7,
                       drift_antiderivative=lambda x: 0.7 * math.log(x))
    one = sym.StationarySolution(eval=lambda x: 1.0, log_eval=lambda x: 0.0,
                                 description="constant 1")
    lg = sym.log_scaling_symmetry(d2, ZERO_POTENTIAL, one,
                                  A=fit_riccati(d2, ZERO_POTENTIAL, FIT_GRID).A)
    orders.append(v.residual_convergence_order(
        lambda x, t: lg(0.6, x, t), d2, ZERO_POTENTIAL, 1.3, 0.6))

    et = cat.make_entry("tanh_drift", mu=0.4)
    pt = fit_riccati(et.diffusion, et.potential, FIT_GRID)
    u0t = sym.stationary_solution(et.diffusion, et.potential,
                                  branch="secondary", params=pt)
    es = sym.exp_scaling_symmetry(et.diffusion, et.potential, u0t, pt)
    orders.append(v.residual_convergence_order(
        lambda x, t: es(0.5, x, t), et.diffusion, et.potential, 1.1, 0.5))

    ec = cat.make_entry("cir", a=1.1, b=0.8, sigma=0.6)
    pc = fit_riccati(ec.diffusion, ec.potential, FIT_GRID)
    ek = sym.exp_kummer_symmetry(ec.diffusion, pc)
    orders.append(v.residual_convergence_order(
        lambda x, t: ek(0.4, x, t), ec.diffusion, ec.potential, 1.1, 0.5))

    worst = max(abs(o - 2.0) for o in orders)
    ok = worst <= 0.2
    assert _report(5, f"residual convergence order 2.0 +/- 0.2 for all "
                      f"kernels and symmetry orbits (worst deviation "
                      f"{worst:.3f}, {len(orders)} solutions)", ok)


# ---------------------------------------------------------------------------
# 6. closed-form expectations against quadrature on a 3x3x3 grid
# ---------------------------------------------------------------------------

CLOSED_FORM_CASES = [
    ("bessel", {"a": 1.2, "mu": 0.6}),
    ("besq", {"n": 2.5, "mu": 0.5}),
    ("cir", {"a": 1.1, "b": 0.8, "sigma": 0.6}),
    ("tanh_drift", {"mu": 0.4}),
    ("radial_ou", {"a": 1.5, "b": 0.7}),
    ("sqrt_drift", {"a": 0.8, "b": 0.5, "A": 1.2, "B": 0.9}),
]


def test_acceptance_06_closed_forms_vs_quadrature():
    worst = 0.0
    for name, params in CLOSED_FORM_CASES:
        for lam in (0.2, 0.8, 2.0):
            for t in (0.4, 0.8, 1.5):
                for x in (0.5, 1.1, 2.0):
                    closed = cat.expectation(name, params, lam, t, x,
                                             method="closed")
                    quad = cat.expectation(name, params, lam, t, x,
                                           method="quadrature")
                    err = abs(closed - quad) / max(abs(quad), 1e-12)
                    worst = max(worst, err)
    ok = worst <= 1e-8
    assert _report(6, f"six closed-form expectation families match "
                      f"quadrature on 3x3x3 grids, max rel err {worst:.2e} "
                      "<= 1e-8", ok)


# ---------------------------------------------------------------------------
# 7. Monte Carlo cross-check (slow)
# ---------------------------------------------------------------------------

MC_CASES = [
    ("besq", {"n": 3.0}, 0.5, 1.0, 1.0, True),
    ("cir", {"a": 1.0, "b": 0.8, "sigma": 0.5}, 0.5, 1.0, 1.0, False),
    ("bessel", {"a": 1.2, "mu": 0.6}, 0.5, 1.0, 1.0, False),
    ("radial_ou", {"a": 2.0, "b": -0.4, "mu": 0.3}, 0.4, 0.8, 1.3, False),
]


@pytest.mark.slow
def test_acceptance_07_monte_carlo():
    spec = v.McSpec(n_paths=100000, n_steps=2000)
    hits, runs = 0, 0
    for name, params, lam, t, x, exact in MC_CASES:
        entry = cat.make_entry(name, **params)
        ref = cat.expectation(name, params, lam, t, x)
        for run_index in range(5):
            mean, se = v.mc_expectation(entry, lam, t, x, spec,
                                        run_index=run_index, exact=exact)
            runs += 1
            if abs(mean - ref) <= 3.0 * se:
                hits += 1
    ok = runs == 20 and hits >= 19
    assert _report(7, f"Monte Carlo within 3 standard errors in {hits}/{runs} "
                      "seeded runs (need >= 19/20)", ok)


# ---------------------------------------------------------------------------
# 8. limit reductions
# ---------------------------------------------------------------------------

def test_acceptance_08_limit_reductions():
    rep = v.run_suite("limits", tol=1e-6)
    worst = max(row.abs_err / max(1.0, abs(row.reference)) for row in rep.rows)
    ok = rep.passed
    assert _report(8, f"killing-free and drift-free reductions converge, "
                      f"worst extrapolated error {worst:.2e} < 1e-6", ok)


# ---------------------------------------------------------------------------
# 9. two-step slicing of the kernels
# ---------------------------------------------------------------------------

def test_acceptance_09_chapman_kolmogorov():
    cases = [("besq", {"n": 3.0}),
             ("bessel", {"a": 1.2}),
             ("bessel_drift", {"a": 0.7, "b": 0.9}),
             ("cir", {"a": 1.1, "b": 0.8, "sigma": 0.6}),
             ("radial_ou", {"a": 1.5, "b": 0.7})]
    worst = 0.0
    for name, params in cases:
        entry = cat.make_entry(name, **params)
        for s, t in ((0.5, 0.5), (0.25, 1.0)):
            for x in (0.5, 1.0, 2.0):
                for z in (0.5, 1.0, 2.0):
                    row = v.check_chapman(entry, s, t, x, z, tol=1e-6)
                    worst = max(worst,
                                row.abs_err / max(1.0, abs(row.reference)))
    ok = worst <= 1e-6
    assert _report(9, f"two-step kernel composition over five entries, "
                      f"worst error {worst:.2e} <= 1e-6", ok)


# ---------------------------------------------------------------------------
# 10. index-shift transform identity
# ---------------------------------------------------------------------------

def test_acceptance_10_whittaker_transform():
    rep = v.run_suite("whittaker")
    worst = max(row.rel_err for row in rep.rows)
    ok = rep.passed and worst <= 1e-4
    assert _report(10, f"Whittaker-weight forward transform matches the "
                       f"power-scaled orbit at 5 weights, max rel err "
                       f"{worst:.2e} <= 1e-4", ok)


# ---------------------------------------------------------------------------
# 11. killed/free kernel ratio identity
# ---------------------------------------------------------------------------

def test_acceptance_11_kernel_ratio_identity():
    rep = v.run_suite("hartman", tol=1e-10)
    worst = max(row.abs_err for row in rep.rows)
    ok = rep.passed
    assert _report(11, f"killed/free kernel ratio equals the Bessel index "
                       f"ratio pointwise, worst error {worst:.2e} <= 1e-10",
                   ok)
