"""Tail-decay fits, the derivative decay ladder, Fourier strip widths, and
the decay-exponent bootstrap recursion.

All fits are plain least squares in the appropriate log coordinates with the
coefficient of determination reported; callers decide what to do with
low-confidence fits, the fitters only flag them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import GridFunction, derivative, forward_transform, tapered

__all__ = [
    "DecayFit",
    "StripEstimate",
    "BootstrapSchedule",
    "SpectralResolutionError",
    "fit_algebraic_decay",
    "tail_points",
    "derivative_decay_ladder",
    "fit_strip_width",
    "bootstrap_schedule",
    "bootstrap_step_bound",
    "decay_fit_to_dict",
    "strip_estimate_to_dict",
]


class SpectralResolutionError(ValueError):
    """The grid cannot resolve the requested spectral operation."""


@dataclass(frozen=True)
class DecayFit:
    """Power-law fit |f(x)| ~ C |x|^{-rho} over a window.

    flag is "" for a clean fit, "floored" when zeros or underflow forced the
    magnitude floor, "super-algebraic" when no power law is present.
    """

    rho: float
    log_constant: float
    window: tuple[float, float]
    r_squared: float
    side: str
    n_points: int
    stderr: float
    flag: str = ""
    confidence: float = float("inf")

    @property
    def low_confidence(self) -> bool:
        return self.r_squared < 0.99 or self.flag != ""


@dataclass(frozen=True)
class StripEstimate:
    """Exponential spectral-decay fit |fhat(xi)| ~ C e^{-b_est |xi|}."""

    b_est: float
    fit_window: tuple[float, float]
    r_squared: float
    curvature: float
    accepted: bool
    reason: str = ""


@dataclass(frozen=True)
class BootstrapSchedule:
    epsilons: tuple[float, ...]
    final_exponent: float
    steps: int


FLOOR = 1e-30
MIN_WINDOW_NODES = 16


def _linefit(X: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float]:
    """Least-squares line y = a + s X; returns (s, a, r_squared, stderr_s)."""
    n = X.size
    Xbar = X.mean()
    ybar = y.mean()
    sxx = float(np.sum((X - Xbar) ** 2))
    if sxx == 0.0:
        raise ValueError("degenerate abscissa in line fit")
    s = float(np.sum((X - Xbar) * (y - ybar)) / sxx)
    a = ybar - s * Xbar
    resid = y - (a + s * X)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - ybar) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    stderr = math.sqrt(ss_res / (n - 2) / sxx) if n > 2 else float("inf")
    return s, a, r2, stderr


def tail_points(f: GridFunction, window, side: str):
    """(log|x|, log|f|, floor_flag) over the fit window; shared by fits and reports."""
    a, b = float(window[0]), float(window[1])
    if not (0 < a < b):
        raise ValueError(f"tail window must satisfy 0 < a < b, got {window}")
    x = f.grid.nodes
    mags = np.abs(f.values)
    masks = {
        "right": (x >= a) & (x <= b),
        "left": (x <= -a) & (x >= -b),
    }
    if side not in ("left", "right", "both"):
        raise ValueError(f"side must be left, right or both, got {side!r}")
    chosen = ["left", "right"] if side == "both" else [side]
    Xs, ys = [], []
    n_floored = n_total = 0
    for s in chosen:
        m = masks[s]
        if int(m.sum()) < MIN_WINDOW_NODES:
            raise ValueError(
                f"window {window} has {int(m.sum())} nodes on the {s} side, "
                f"need at least {MIN_WINDOW_NODES}"
            )
        vals = mags[m]
        # relative component catches tails that are pure roundoff noise of a
        # non-small function (e.g. derivatives of a Gaussian), which sit far
        # above the absolute floor but carry no decay information
        floor = max(FLOOR, 1e-15 * float(mags.max()))
        n_floored += int((vals < floor).sum())
        n_total += vals.size
        vals = np.clip(vals, floor, None)
        Xs.append(np.log(np.abs(x[m])))
        ys.append(np.log(vals))
    if n_floored == n_total:
        flag = "super-algebraic"  # nothing above the floor, no power law to fit
    elif n_floored:
        flag = "floored"
    else:
        flag = ""
    return np.concatenate(Xs), np.concatenate(ys), flag


def fit_algebraic_decay(f: GridFunction, window=None, side: str = "both") -> DecayFit:
    """Fit log|f| against log|x| over a tail window.

    Window defaults to [L/8, L/2]: inside the asymptotic regime, outside the
    wrap-around region. Zeros in the window are floored at 1e-30 and flagged
    rather than rejected.
    """
    if f.space != "physical":
        raise ValueError("decay fits apply to physical-space samples")
    if window is None:
        L = f.grid.half_length
        window = (L / 8, L / 2)
    X, y, flag = tail_points(f, window, side)
    slope, intercept, r2, stderr = _linefit(X, y)

    # confidence must cover window-choice sensitivity, which OLS stderr does
    # not see (systematic curvature from subleading tail terms dominates the
    # scatter); split the window at its log-midpoint and compare half-fits
    confidence = float("inf")
    mid = 0.5 * (math.log(window[0]) + math.log(window[1]))
    near = X <= mid
    if int(near.sum()) >= 8 and int((~near).sum()) >= 8:
        s1 = _linefit(X[near], y[near])[0]
        s2 = _linefit(X[~near], y[~near])[0]
        confidence = max(4.0 * stderr, abs(s1 - s2))
    return DecayFit(
        rho=-slope,
        log_constant=intercept,
        window=(float(window[0]), float(window[1])),
        r_squared=r2,
        side=side,
        n_points=X.size,
        stderr=stderr,
        flag=flag,
        confidence=confidence,
    )


def derivative_decay_ladder(
    u: GridFunction,
    alpha_max: int,
    window=None,
    side: str = "both",
    flat_frac: float = 0.7,
    zero_frac: float = 0.92,
    tail_tol: float = 1e-10,
) -> list[DecayFit]:
    """Tail fits of the spectral derivatives d^alpha u, alpha = 0..alpha_max.

    The input is tapered to compact support before transforming (derivatives
    are local, so values over the flat region are unaffected) and the top ten
    percent of the spectrum must lie below tail_tol relative to its peak;
    otherwise the derivatives are unresolved and the call refuses.
    """
    if alpha_max < 0:
        raise ValueError("alpha_max must be >= 0")
    L = u.grid.half_length
    if window is None:
        window = (L / 8, L / 2)
    if window[1] > flat_frac * L:
        raise ValueError(
            f"fit window {window} leaves the taper's flat region (|x| <= {flat_frac * L:g})"
        )
    g = tapered(u, flat_frac=flat_frac, zero_frac=zero_frac)
    ghat = forward_transform(g)
    mags = np.abs(ghat.values)
    peak = float(mags.max())
    if peak == 0.0:
        raise ValueError("zero input")
    xi = np.abs(u.grid.frequencies)
    top = xi >= 0.9 * xi.max()
    tail = float(mags[top].max())
    if tail > tail_tol * peak:
        raise SpectralResolutionError(
            f"spectral tail at {tail / peak:.2e} of peak exceeds {tail_tol:.0e}; "
            "increase the grid size to resolve the requested derivatives"
        )
    fits = []
    for alpha in range(alpha_max + 1):
        fits.append(fit_algebraic_decay(derivative(g, alpha), window=window, side=side))
    return fits


def fit_strip_width(
    f: GridFunction,
    amplitude_band: tuple[float, float] = (1e-12, 1e-2),
    min_r_squared: float = 0.99,
    curvature_tol: float = 0.25,
    min_points: int = 16,
) -> StripEstimate:
    """Fit log|fhat| against |xi| where the spectrum sits inside an amplitude band.

    The band (relative to the spectral peak) selects the exponential regime
    while avoiding both the core and the roundoff floor. Acceptance needs
    r_squared >= 0.99 and an insignificant quadratic curvature of log|fhat|
    over the fit window; otherwise the decay is flagged as non-exponential
    (algebraic or super-exponential) and no rate is reported.
    """
    fhat = forward_transform(f) if f.space == "physical" else f
    mags = np.abs(fhat.values)
    xi = np.abs(f.grid.frequencies)
    peak = float(mags.max())
    if peak == 0.0:
        return StripEstimate(float("nan"), (float("nan"),) * 2, 0.0, float("nan"), False, "zero input")
    lo, hi = amplitude_band
    sel = (mags >= lo * peak) & (mags <= hi * peak) & (xi > 0)
    if int(sel.sum()) < min_points:
        return StripEstimate(
            float("nan"), (float("nan"),) * 2, 0.0, float("nan"), False,
            "too few spectral points in the amplitude band",
        )
    X = xi[sel]
    y = np.log(mags[sel])
    slope, _, r2, _ = _linefit(X, y)
    b_est = -slope
    # quadratic term of the same data measures deviation from pure exponential
    c2 = float(np.polyfit(X, y, 2)[0])
    half = (X.max() - X.min()) / 2
    curvature = abs(c2) * half * half
    window = (float(X.min()), float(X.max()))
    if r2 < min_r_squared:
        return StripEstimate(float("nan"), window, r2, curvature, False,
                             f"r_squared {r2:.4f} below {min_r_squared}")
    if curvature > curvature_tol:
        return StripEstimate(float("nan"), window, r2, curvature, False,
                             "curvature indicates non-exponential spectral decay")
    if b_est <= 0:
        return StripEstimate(float("nan"), window, r2, curvature, False,
                             "nonpositive fitted rate")
    return StripEstimate(float(b_est), window, r2, curvature, True, "")


def bootstrap_schedule(eps0: float, p: int, d: int) -> BootstrapSchedule:
    """Run the decay-exponent recursion eps <- eps (p+1)/2 while p*eps <= d.

    Each pass through the integral form upgrades a decay exponent eps to
    min(p*eps, d) with a possible log factor; the recursion records the
    intermediate exponents until the nonlinearity's p*eps clears d, at which
    point the full exponent d is reached.
    """
    if not (eps0 > 0 and math.isfinite(eps0)):
        raise ValueError("eps0 must be positive and finite")
    if not isinstance(p, int) or p < 2:
        raise ValueError("p must be an integer >= 2")
    if not isinstance(d, int) or d < 1:
        raise ValueError("d must be a positive integer")
    eps = [float(eps0)]
    while p * eps[-1] <= d:
        eps.append(eps[-1] * (p + 1) / 2)
    return BootstrapSchedule(tuple(eps), float(d), len(eps))


def bootstrap_step_bound(eps0: float, p: int, d: int) -> int:
    """Closed-form step bound ceil(log(d/eps0)/log((p+1)/2)) + 1, for eps0 <= d."""
    if eps0 > d:
        raise ValueError("step bound applies to eps0 <= d")
    return math.ceil(math.log(d / eps0) / math.log((p + 1) / 2)) + 1


def decay_fit_to_dict(fit: DecayFit) -> dict:
    return {
        "rho": fit.rho,
        "log_constant": fit.log_constant,
        "window": list(fit.window),
        "r_squared": fit.r_squared,
        "side": fit.side,
        "n_points": fit.n_points,
        "stderr": fit.stderr,
        "flag": fit.flag,
        "confidence": fit.confidence,
        "low_confidence": fit.low_confidence,
    }


def strip_estimate_to_dict(est: StripEstimate) -> dict:
    return {
        "b_est": est.b_est,
        "fit_window": list(est.fit_window),
        "r_squared": est.r_squared,
        "curvature": est.curvature,
        "accepted": est.accepted,
        "reason": est.reason,
    }
