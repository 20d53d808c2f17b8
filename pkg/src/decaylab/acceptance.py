"""End-to-end acceptance checks tying the package together.

Each criterion is an independent runner returning a CriterionResult; run_all
executes them in a fixed order. Heavy shared artifacts (the default grid, the
closed-form waves, the reference solve) are cached so the full battery stays
fast enough for a laptop run.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .asymptotics import (
    bootstrap_schedule,
    bootstrap_step_bound,
    derivative_decay_ladder,
    fit_algebraic_decay,
    fit_strip_width,
)
from .inequalities import convolution_drift, verify_convolution_bound, verify_kernel_decay
from .oracles import BOParams, LCParams, bo_soliton, lc_effective_zero_mode, lc_solution
from .solver import Nonlinearity, SolverConfig, center_and_compare, fixed_point_solve, residual
from .spectral import (
    Grid,
    GridFunction,
    apply_inverse_multiplier,
    apply_multiplier,
    forward_transform,
    hilbert_transform,
    l2_norm,
)
from .symbols import check_ellipticity, preset_symbol

__all__ = ["CriterionResult", "run_all", "CRITERIA"]

DEFAULT_GRID = Grid(400.0, 2**17)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    details: str


@lru_cache(maxsize=1)
def _lc_setup():
    params = LCParams()
    wave = lc_solution(params)
    return params, params.symbol(), wave


@lru_cache(maxsize=1)
def _bo_setup():
    params = BOParams(1.0)
    wave = bo_soliton(params)
    return params, params.symbol(), wave


@lru_cache(maxsize=1)
def _lc_periodized():
    return _lc_setup()[2].sample_periodized(DEFAULT_GRID)


@lru_cache(maxsize=1)
def _lc_raw():
    return _lc_setup()[2].sample(DEFAULT_GRID)


@lru_cache(maxsize=1)
def _bo_periodized():
    return _bo_setup()[2].sample_periodized(DEFAULT_GRID)


@lru_cache(maxsize=1)
def _bo_solution():
    _, sym, _ = _bo_setup()
    return fixed_point_solve(sym, Nonlinearity(2, -1.0), SolverConfig(DEFAULT_GRID))


def lc_oracle_residual() -> CriterionResult:
    params, sym, _ = _lc_setup()
    r = residual(
        sym,
        Nonlinearity(2, -1.0),
        _lc_periodized(),
        zero_mode=lc_effective_zero_mode(params),
    )
    return CriterionResult(
        "lc_oracle_residual",
        r <= 1e-4,
        f"relative residual {r:.3e} (tolerance 1e-4, window |x| <= L/2)",
    )


def bo_oracle_residual() -> CriterionResult:
    _, sym, _ = _bo_setup()
    r = residual(sym, Nonlinearity(2, -1.0), _bo_periodized())
    return CriterionResult(
        "bo_oracle_residual",
        r <= 1e-4,
        f"relative residual {r:.3e} (tolerance 1e-4)",
    )


def solver_convergence() -> CriterionResult:
    sol = _bo_solution()
    dist = center_and_compare(sol.u, _bo_periodized())
    final = sol.residual_history[-1]
    ok = sol.converged and sol.iterations_used <= 200 and final <= 1e-8 and dist <= 1e-3
    return CriterionResult(
        "solver_convergence",
        ok,
        f"converged={sol.converged} in {sol.iterations_used} iterations, "
        f"residual {final:.3e} (<= 1e-8), centered distance {dist:.3e} (<= 1e-3)",
    )


def lc_tail_exponent() -> CriterionResult:
    raw = _lc_raw()
    left = fit_algebraic_decay(raw, window=(50.0, 200.0), side="left")
    right = fit_algebraic_decay(raw, window=(50.0, 200.0), side="right")
    ok = abs(left.rho - 1.0) <= 0.05 and abs(right.rho - 1.0) <= 0.05
    return CriterionResult(
        "lc_tail_exponent",
        ok,
        f"rho left {left.rho:.4f}, right {right.rho:.4f} (target 1 +- 0.05 on [50, 200])",
    )


def lc_derivative_ladder() -> CriterionResult:
    fits = derivative_decay_ladder(_lc_raw(), 3, window=(50.0, 200.0))
    devs = [abs(f.rho - (1 + a)) for a, f in enumerate(fits)]
    ok = all(d <= 0.1 for d in devs)
    body = ", ".join(f"alpha={a}: {f.rho:.4f}" for a, f in enumerate(fits))
    return CriterionResult(
        "lc_derivative_ladder",
        ok,
        f"{body} (targets 1+alpha +- 0.1)",
    )


def strip_widths() -> CriterionResult:
    lc_est = fit_strip_width(_lc_periodized())
    bo2 = bo_soliton(BOParams(2.0)).sample_periodized(DEFAULT_GRID)
    bo_est = fit_strip_width(bo2)
    ok = (
        lc_est.accepted
        and bo_est.accepted
        and abs(lc_est.b_est - 1.0) <= 0.02
        and abs(bo_est.b_est - 2.0) <= 0.04
    )
    return CriterionResult(
        "strip_widths",
        ok,
        f"LC b_est {lc_est.b_est:.5f} (target 1 +- 2%), BO(2) b_est {bo_est.b_est:.5f} "
        f"(target 2 +- 2%)",
    )


def bootstrap_scheduler() -> CriterionResult:
    sched = bootstrap_schedule(0.3, 2, 1)
    expected = (0.3, 0.45, 0.675)
    exact = len(sched.epsilons) == 3 and all(
        abs(a - b) <= 1e-12 * abs(b) for a, b in zip(sched.epsilons, expected)
    )
    rng = np.random.default_rng(20260822)
    bound_ok = True
    for _ in range(100):
        d = int(rng.integers(1, 4))
        p = int(rng.integers(2, 7))
        eps0 = float(rng.uniform(0.01, d))
        s = bootstrap_schedule(eps0, p, d)
        if s.steps > bootstrap_step_bound(eps0, p, d):
            bound_ok = False
            break
    return CriterionResult(
        "bootstrap_scheduler",
        exact and bound_ok,
        f"epsilons {list(sched.epsilons)} (expected [0.3, 0.45, 0.675]), "
        f"step bound held for 100 random triples: {bound_ok}",
    )


def convolution_bound() -> CriterionResult:
    parts = []
    ok = True
    for r in (0.5, 1.0, 3.0):
        base, wide, drift = convolution_drift(r, 1)
        a = verify_convolution_bound(r, 1, epsrel=1e-10)
        b = verify_convolution_bound(r, 1, epsrel=1e-12)
        refine = float(np.max(np.abs(np.asarray(a.ratios) / np.asarray(b.ratios) - 1.0)))
        ok = ok and drift < 0.05 and refine < 1e-6
        parts.append(f"r={r}: sup {base.sup_ratio:.4f}, drift {drift:.2e}, refinement {refine:.1e}")
    return CriterionResult(
        "convolution_bound",
        ok,
        "; ".join(parts) + " (drift < 5%, refinement < 1e-6)",
    )


def kernel_decay() -> CriterionResult:
    sign_fit = verify_kernel_decay(0.0, branch="sign")
    abs_fit = verify_kernel_decay(1.0, branch="even")
    ok = abs(sign_fit.rho - 1.0) <= 0.1 and abs(abs_fit.rho - 2.0) <= 0.1
    return CriterionResult(
        "kernel_decay",
        ok,
        f"sign(x): rho {sign_fit.rho:.4f} (target 1 +- 0.1); |x|: rho {abs_fit.rho:.4f} "
        f"(target 2 +- 0.1)",
    )


def spectral_infrastructure() -> CriterionResult:
    grid = DEFAULT_GRID
    rng = np.random.default_rng(7)
    spec = np.fft.fft(rng.standard_normal(grid.size))
    spec[np.abs(grid.mode_numbers) > grid.size // 8] = 0.0
    f = GridFunction(grid, np.real(np.fft.ifft(spec)))
    scale = float(np.max(np.abs(f.values)))

    worst = 0.0
    for name, params in (("lc", {"mu": -1.0, "nu": 1.0, "beta": 1.0}), ("bo", {"b": 1.0}), ("bo", {"b": 2.0})):
        sym = preset_symbol(name, params)
        back = apply_inverse_multiplier(sym, apply_multiplier(sym, f))
        worst = max(worst, float(np.max(np.abs(back.values - f.values))) / scale)

    h2 = hilbert_transform(hilbert_transform(f))
    target = -(f.values - f.values.mean())
    h_err = float(np.max(np.abs(h2.values - target))) / scale

    a = l2_norm(f)
    b = l2_norm(forward_transform(f))
    pars = abs(a - b) / a

    ok = worst <= 1e-10 and h_err <= 1e-10 and pars <= 1e-12
    return CriterionResult(
        "spectral_infrastructure",
        ok,
        f"round-trip {worst:.2e} (<= 1e-10), H^2 defect {h_err:.2e} (<= 1e-10), "
        f"Parseval {pars:.2e} (<= 1e-12)",
    )


def ellipticity_gate() -> CriterionResult:
    lc = check_ellipticity(_lc_setup()[1])
    bo = check_ellipticity(_bo_setup()[1])
    siva = check_ellipticity(preset_symbol("sivashinsky", {"nu": 1.0, "c": 0.0}))
    near_one = abs(abs(siva.argmin_xi) - 1.0) <= 0.01
    ok = lc.elliptic and bo.elliptic and (not siva.elliptic) and near_one
    return CriterionResult(
        "ellipticity_gate",
        ok,
        f"LC c_est {lc.c_estimate:.4f} (pass), BO c_est {bo.c_estimate:.4f} (pass), "
        f"Sivashinsky c_est {siva.c_estimate:.2e} at xi {siva.argmin_xi:.6f} (fail, |xi| near 1)",
    )


CRITERIA = (
    lc_oracle_residual,
    bo_oracle_residual,
    solver_convergence,
    lc_tail_exponent,
    lc_derivative_ladder,
    strip_widths,
    bootstrap_scheduler,
    convolution_bound,
    kernel_decay,
    spectral_infrastructure,
    ellipticity_gate,
)


def run_all() -> list[CriterionResult]:
    return [runner() for runner in CRITERIA]
