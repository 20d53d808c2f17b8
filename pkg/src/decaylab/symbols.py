"""Multiplier symbols built from positively homogeneous terms.

A symbol is a finite sum p(xi) = sum_j p_j(xi) where each p_j is positively
homogeneous of degree m_j >= 0. In one dimension a homogeneous term is
determined by its two one-sided coefficients,

    p_j(xi) = coeff_plus * |xi|^m_j   (xi > 0)
    p_j(xi) = coeff_minus * |xi|^m_j  (xi < 0),

so kinks and jumps at xi = 0 (|xi|, sign xi, xi|xi|, ...) are all expressible.
In dimension d >= 2 only radial terms c|xi|^m are supported.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

__all__ = [
    "HomogeneousTerm",
    "Symbol",
    "EllipticityReport",
    "eval_symbol",
    "limits_at_zero",
    "zero_frequency_value",
    "preset_symbol",
    "check_ellipticity",
    "is_conjugate_symmetric",
    "symbol_to_dict",
    "symbol_from_dict",
    "symbol_to_json",
    "symbol_from_json",
]

PRESET_NAMES = ("lc", "bo", "sivashinsky")

# default ellipticity probe: log-spaced per sign, wide enough that
# homogeneity makes |p|/<xi>^M flat at both ends
DEFAULT_PROBE_POINTS = 4096
DEFAULT_PROBE_RANGE = (1e-6, 1e6)
DEFAULT_ELLIPTICITY_THRESHOLD = 1e-8


@dataclass(frozen=True)
class HomogeneousTerm:
    """One positively homogeneous term of a symbol.

    degree is the homogeneity m >= 0; coeff_plus / coeff_minus are the values
    of p(xi)/|xi|^m on the two half-lines. radial_coeff marks a radial term
    c|xi|^m (required for dimension >= 2) and must then equal both one-sided
    coefficients.
    """

    degree: float
    coeff_plus: complex
    coeff_minus: complex
    radial_coeff: complex | None = None

    def __post_init__(self):
        object.__setattr__(self, "degree", float(self.degree))
        object.__setattr__(self, "coeff_plus", complex(self.coeff_plus))
        object.__setattr__(self, "coeff_minus", complex(self.coeff_minus))
        if self.radial_coeff is not None:
            object.__setattr__(self, "radial_coeff", complex(self.radial_coeff))
        if not math.isfinite(self.degree) or self.degree < 0:
            raise ValueError(f"term degree must be finite and >= 0, got {self.degree}")
        if self.radial_coeff is not None:
            if self.coeff_plus != self.radial_coeff or self.coeff_minus != self.radial_coeff:
                raise ValueError("radial term requires coeff_plus == coeff_minus == radial_coeff")

    @property
    def smooth_at_origin(self) -> bool:
        """Whether the term extends smoothly through xi = 0.

        True exactly when the term is a polynomial monomial: even integer
        degree with equal one-sided coefficients (|xi|^m = xi^m), or odd
        integer degree with opposite ones (sign(xi)|xi|^m = xi^m).
        """
        m = self.degree
        if abs(m - round(m)) > 1e-12:
            return False
        m_int = round(m)
        if m_int % 2 == 0:
            return self.coeff_plus == self.coeff_minus
        return self.coeff_plus == -self.coeff_minus


def radial_term(degree: float, coefficient: complex) -> HomogeneousTerm:
    """Convenience constructor for a radial term c|xi|^degree."""
    c = complex(coefficient)
    return HomogeneousTerm(degree, c, c, radial_coeff=c)


@dataclass(frozen=True)
class Symbol:
    """A finite sum of homogeneous terms with strictly increasing degrees."""

    terms: tuple[HomogeneousTerm, ...]
    dimension: int = 1

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("symbol needs at least one term")
        if not isinstance(self.dimension, int) or self.dimension < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dimension}")
        degs = [t.degree for t in self.terms]
        if any(b <= a for a, b in zip(degs, degs[1:])):
            raise ValueError(f"degrees must be strictly increasing, got {degs}")
        if self.dimension >= 2 and any(t.radial_coeff is None for t in self.terms):
            raise ValueError("dimension >= 2 supports radial terms only")

    @property
    def order(self) -> float:
        """Top degree M (the order of the operator)."""
        return self.terms[-1].degree

    @property
    def degrees(self) -> tuple[float, ...]:
        return tuple(t.degree for t in self.terms)


@dataclass(frozen=True)
class EllipticityReport:
    """Result of a numerical ellipticity scan of |p(xi)| / <xi>^M."""

    c_estimate: float
    argmin_xi: float
    elliptic: bool
    threshold: float


def eval_symbol(sym: Symbol, xi, zero_mode=None):
    """Evaluate p(xi) pointwise; scalar in, scalar out, array in, array out.

    xi = 0 has no canonical value when the symbol jumps, so evaluation there
    requires an explicit rule: "average", "plus", "minus", or a complex value.
    Without one, xi = 0 raises ValueError.
    """
    arr = np.asarray(xi, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.zeros(arr.shape, dtype=complex)
    pos = arr > 0
    neg = arr < 0
    zero = ~(pos | neg)
    if zero.any() and zero_mode is None:
        raise ValueError("evaluation at xi = 0 requires an explicit zero-frequency rule")
    mag = np.abs(arr)
    for t in sym.terms:
        powm = mag**t.degree
        if pos.any():
            out[pos] += t.coeff_plus * powm[pos]
        if neg.any():
            out[neg] += t.coeff_minus * powm[neg]
    if zero.any():
        out[zero] = zero_frequency_value(sym, zero_mode)
    if scalar:
        return complex(out[0])
    return out


def limits_at_zero(sym: Symbol) -> tuple[complex, complex]:
    """One-sided limits (p(0+), p(0-)). Only a degree-0 term survives."""
    t0 = sym.terms[0]
    if t0.degree == 0.0:
        return t0.coeff_plus, t0.coeff_minus
    return 0j, 0j


def zero_frequency_value(sym: Symbol, rule) -> complex:
    """Resolve a zero-frequency rule to the multiplier value used at xi = 0."""
    if isinstance(rule, str):
        plus, minus = limits_at_zero(sym)
        if rule == "average":
            return (plus + minus) / 2
        if rule == "plus":
            return plus
        if rule == "minus":
            return minus
        raise ValueError(f"unknown zero-frequency rule {rule!r}")
    return complex(rule)


def preset_symbol(name: str, params: dict) -> Symbol:
    """Build one of the named travelling-wave symbols.

    lc: params {mu, nu, beta}, speed forced to c = beta*mu/nu;
        p(xi) = -c - i*mu*sign(xi) + beta|xi| - i*nu*xi.
    bo: params {b}, b > 0, c = -1/b; p(xi) = 1/b + |xi|.
    sivashinsky: params {nu, c}; the lc form with mu = -1, beta = 0,
        p(xi) = -c + i*sign(xi) - i*nu*xi.
    """
    key = name.lower()
    if key not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}, expected one of {PRESET_NAMES}")
    params = dict(params)

    def take(*names):
        missing = [k for k in names if k not in params]
        extra = [k for k in params if k not in names]
        if missing or extra:
            raise ValueError(f"preset {key!r} needs params {names}, got {sorted(params)}")
        return [float(params[k]) for k in names]

    if key == "lc":
        mu, nu, beta = take("mu", "nu", "beta")
        if nu == 0.0:
            raise ValueError("lc preset requires nu != 0 (speed c = beta*mu/nu undefined)")
        c = beta * mu / nu
        return Symbol(
            (
                HomogeneousTerm(0.0, -c - 1j * mu, -c + 1j * mu),
                HomogeneousTerm(1.0, beta - 1j * nu, beta + 1j * nu),
            )
        )
    if key == "bo":
        (b,) = take("b")
        if b <= 0.0:
            raise ValueError("bo preset requires b > 0")
        return Symbol(
            (
                HomogeneousTerm(0.0, 1.0 / b, 1.0 / b),
                HomogeneousTerm(1.0, 1.0, 1.0),
            )
        )
    # sivashinsky
    nu, c = take("nu", "c")
    return Symbol(
        (
            HomogeneousTerm(0.0, -c + 1j, -c - 1j),
            HomogeneousTerm(1.0, -1j * nu, 1j * nu),
        )
    )


def default_probe() -> np.ndarray:
    lo, hi = DEFAULT_PROBE_RANGE
    half = np.logspace(math.log10(lo), math.log10(hi), DEFAULT_PROBE_POINTS)
    return np.concatenate([-half[::-1], half])


def _normalized_modulus(sym: Symbol):
    M = sym.order

    def q(xi: float) -> float:
        return abs(eval_symbol(sym, xi)) / (1.0 + xi * xi) ** (M / 2)

    return q


def check_ellipticity(
    sym: Symbol,
    probe: np.ndarray | None = None,
    threshold: float = DEFAULT_ELLIPTICITY_THRESHOLD,
    refine: bool = True,
) -> EllipticityReport:
    """Scan |p(xi)| / <xi>^M over a probe grid and report the infimum seen.

    The coarse scan is followed (refine=True) by a bounded scalar minimization
    between the argmin's probe neighbours, so isolated zeros lying between
    probe points are still detected. c_estimate is an upper bound for the true
    infimum and refinement never increases it.
    """
    if probe is None:
        probe = default_probe()
    probe = np.asarray(probe, dtype=float)
    probe = probe[probe != 0.0]
    if probe.size == 0:
        raise ValueError("empty ellipticity probe grid")
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    if sym.dimension >= 2:
        probe = np.abs(probe)  # radial symbol, sign irrelevant

    M = sym.order
    vals = np.abs(eval_symbol(sym, probe)) / (1.0 + probe**2) ** (M / 2)
    i = int(np.argmin(vals))
    c_est = float(vals[i])
    arg = float(probe[i])

    if refine:
        q = _normalized_modulus(sym)
        # bracket within the same sign so the minimizer cannot cross 0
        same = np.sort(probe[np.sign(probe) == np.sign(arg)])
        j = int(np.searchsorted(same, arg))
        lo = same[j - 1] if j - 1 >= 0 else arg / 10 if arg > 0 else arg * 10
        hi = same[j + 1] if j + 1 < same.size else arg * 10 if arg > 0 else arg / 10
        res = minimize_scalar(
            q, bounds=(min(lo, hi), max(lo, hi)), method="bounded",
            options={"xatol": 1e-12 * max(1.0, abs(arg))},
        )
        if res.fun < c_est:
            c_est = float(res.fun)
            arg = float(res.x)

    return EllipticityReport(
        c_estimate=c_est,
        argmin_xi=arg,
        elliptic=bool(c_est > threshold),
        threshold=float(threshold),
    )


def is_conjugate_symmetric(sym: Symbol) -> bool:
    """True when p(-xi) = conj(p(xi)), i.e. the operator has a real kernel.

    Degreewise this means coeff_minus = conj(coeff_plus); powers of |xi| are
    linearly independent so the pointwise identity reduces to exactly that.
    """
    return all(t.coeff_minus == t.coeff_plus.conjugate() for t in sym.terms)


def symbol_to_dict(sym: Symbol) -> dict:
    terms = []
    for t in sym.terms:
        rec = {
            "degree": t.degree,
            "coeff_plus": [t.coeff_plus.real, t.coeff_plus.imag],
            "coeff_minus": [t.coeff_minus.real, t.coeff_minus.imag],
        }
        if t.radial_coeff is not None:
            rec["radial_coeff"] = [t.radial_coeff.real, t.radial_coeff.imag]
        terms.append(rec)
    return {"dimension": sym.dimension, "terms": terms}


def symbol_from_dict(doc: dict) -> Symbol:
    allowed = {"dimension", "terms"}
    extra = set(doc) - allowed
    if extra:
        raise ValueError(f"unknown symbol document keys {sorted(extra)}")
    terms = []
    for rec in doc["terms"]:
        keys = set(rec) - {"degree", "coeff_plus", "coeff_minus", "radial_coeff"}
        if keys:
            raise ValueError(f"unknown term keys {sorted(keys)}")
        radial = rec.get("radial_coeff")
        terms.append(
            HomogeneousTerm(
                degree=float(rec["degree"]),
                coeff_plus=complex(*rec["coeff_plus"]),
                coeff_minus=complex(*rec["coeff_minus"]),
                radial_coeff=complex(*radial) if radial is not None else None,
            )
        )
    return Symbol(tuple(terms), dimension=int(doc.get("dimension", 1)))


def symbol_to_json(sym: Symbol) -> str:
    return json.dumps(symbol_to_dict(sym), sort_keys=True)


def symbol_from_json(text: str) -> Symbol:
    return symbol_from_dict(json.loads(text))
