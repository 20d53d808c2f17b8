"""Uniform-grid truncation of the line and multiplier application.

Transform convention: fhat(xi) = int e^{-i x xi} f(x) dx, inverted by
f(x) = (2 pi)^{-1} int e^{i x xi} fhat(xi) dxi. On the grid x_k = -L + 2Lk/N
with frequencies xi_n = pi n / L (FFT ordering) this becomes

    fhat_n = h * (-1)^n * FFT(f)_n,      h = 2L/N,
    f_k    = (1/h) * IFFT((-1)^n fhat_n)_k,

and Parseval holds exactly: h sum|f_k|^2 = (1/2L) sum|fhat_n|^2.

Everything here treats the samples as one period of a 2L-periodic function;
how faithfully that represents a function on the line is the caller's
responsibility (slowly decaying tails alias into the window).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .symbols import Symbol, check_ellipticity, eval_symbol, limits_at_zero, zero_frequency_value

__all__ = [
    "Grid",
    "GridFunction",
    "WeightSpec",
    "forward_transform",
    "inverse_transform",
    "apply_multiplier",
    "apply_inverse_multiplier",
    "hilbert_transform",
    "derivative",
    "weight_values",
    "sup_norm",
    "l2_norm",
    "weighted_sup_norm",
    "smooth_bump",
    "smooth_step",
    "taper_profile",
    "tapered",
    "write_csv",
    "read_csv",
    "write_binary",
    "read_binary",
]


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [-L, L) with N nodes."""

    half_length: float
    size: int

    def __post_init__(self):
        object.__setattr__(self, "half_length", float(self.half_length))
        if self.half_length <= 0:
            raise ValueError("half_length must be positive")
        if not isinstance(self.size, int) or self.size <= 0 or self.size % 2:
            raise ValueError("size must be a positive even integer")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_length / self.size

    @property
    def nodes(self) -> np.ndarray:
        return _grid_nodes(self)

    @property
    def frequencies(self) -> np.ndarray:
        """xi_n = pi n / L in FFT order (n = 0..N/2-1, -N/2..-1)."""
        return _grid_frequencies(self)

    @property
    def mode_numbers(self) -> np.ndarray:
        return _grid_modes(self)


@lru_cache(maxsize=32)
def _grid_nodes(grid: Grid) -> np.ndarray:
    x = -grid.half_length + grid.spacing * np.arange(grid.size)
    x.setflags(write=False)
    return x


@lru_cache(maxsize=32)
def _grid_modes(grid: Grid) -> np.ndarray:
    N = grid.size
    n = np.concatenate([np.arange(0, N // 2), np.arange(-N // 2, 0)])
    n.setflags(write=False)
    return n


@lru_cache(maxsize=32)
def _grid_frequencies(grid: Grid) -> np.ndarray:
    xi = (np.pi / grid.half_length) * _grid_modes(grid)
    xi.setflags(write=False)
    return xi


@lru_cache(maxsize=32)
def _grid_parity(grid: Grid) -> np.ndarray:
    # (-1)^n in FFT order
    p = np.where(_grid_modes(grid) % 2 == 0, 1.0, -1.0)
    p.setflags(write=False)
    return p


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Immutable complex samples on a Grid, in physical or spectral space."""

    grid: Grid
    values: np.ndarray
    space: str = "physical"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.size,):
            raise ValueError(f"expected {self.grid.size} samples, got shape {vals.shape}")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.space not in ("physical", "spectral"):
            raise ValueError(f"space must be 'physical' or 'spectral', got {self.space!r}")

    def with_values(self, values, space=None) -> "GridFunction":
        return GridFunction(self.grid, values, self.space if space is None else space)

    @property
    def real_values(self) -> np.ndarray:
        return self.values.real


def from_callable(grid: Grid, fn, space: str = "physical") -> GridFunction:
    xs = grid.nodes if space == "physical" else grid.frequencies
    return GridFunction(grid, np.asarray(fn(xs), dtype=complex), space)


def forward_transform(f: GridFunction) -> GridFunction:
    if f.space != "physical":
        raise ValueError("forward_transform expects physical-space samples")
    g = f.grid
    vals = g.spacing * _grid_parity(g) * np.fft.fft(f.values)
    return GridFunction(g, vals, "spectral")


def inverse_transform(f: GridFunction) -> GridFunction:
    if f.space != "spectral":
        raise ValueError("inverse_transform expects spectral-space samples")
    g = f.grid
    vals = np.fft.ifft(_grid_parity(g) * f.values) / g.spacing
    return GridFunction(g, vals, "physical")


@lru_cache(maxsize=64)
def _multiplier_offzero(sym: Symbol, grid: Grid) -> np.ndarray:
    """p(xi_n) with the n = 0 slot left at 0; immutable and cached."""
    m = eval_symbol(sym, grid.frequencies, zero_mode=0.0)
    m.setflags(write=False)
    return m


def _multiplier_array(sym: Symbol, grid: Grid, zero_mode) -> np.ndarray:
    m = _multiplier_offzero(sym, grid).copy()
    m[0] = zero_frequency_value(sym, zero_mode)
    return m


def apply_multiplier(sym: Symbol, f: GridFunction, zero_mode="average") -> GridFunction:
    """Apply p(D): multiply spectral samples by p(xi_n).

    The n = 0 bin uses zero_mode: "average" (default, mean of the one-sided
    limits), "plus", "minus", or an explicit complex multiplier value.
    """
    if sym.dimension != 1:
        raise ValueError("grid application requires a one-dimensional symbol")
    m = _multiplier_array(sym, f.grid, zero_mode)
    if f.space == "spectral":
        return f.with_values(m * f.values)
    # phases cancel between the two transforms, so plain FFTs suffice
    vals = np.fft.ifft(m * np.fft.fft(f.values))
    return f.with_values(vals)


@lru_cache(maxsize=64)
def _ellipticity_cached(sym: Symbol):
    return check_ellipticity(sym)


def inverse_zero_frequency_value(sym: Symbol, rule="inverse-of-average") -> complex:
    """DC value of the inverse multiplier under the named rule.

    "inverse-of-average": 1 / ((p(0+)+p(0-))/2). It is the exact inverse of
    the forward "average" rule, so forward/backward round trips cancel.

    "average-of-inverse": (1/p(0+) + 1/p(0-))/2, the mean of the one-sided
    limits of 1/p. For a wave u = p(D)^{-1}F(u) whose transform jumps at 0
    while F(u)-hat is continuous, this reproduces the averaged zero mode of
    u-hat, so it is the rule the fixed-point solver uses.

    An explicit complex value is passed through unchanged.
    """
    if isinstance(rule, str):
        plus, minus = limits_at_zero(sym)
        if rule == "inverse-of-average":
            avg = (plus + minus) / 2
            if avg == 0:
                raise ValueError("vanishing averaged zero-mode, inverse undefined")
            return 1.0 / avg
        if rule == "average-of-inverse":
            if plus == 0 or minus == 0:
                raise ValueError("one-sided zero-mode limit vanishes, inverse undefined")
            return (1.0 / plus + 1.0 / minus) / 2
        raise ValueError(f"unknown inverse zero-frequency rule {rule!r}")
    return complex(rule)


def apply_inverse_multiplier(sym: Symbol, f: GridFunction, zero_mode="inverse-of-average") -> GridFunction:
    """Apply p(D)^{-1} by dividing spectral samples by p(xi_n).

    Preconditions: order M > 0 (an order-0 symbol gains no decay and its
    inverse is not admitted here), numerical ellipticity (so p(xi_n) != 0 off
    the zero bin), and a nonvanishing zero-mode under the chosen rule.
    """
    if sym.dimension != 1:
        raise ValueError("grid application requires a one-dimensional symbol")
    if sym.order <= 0:
        raise ValueError("inverse multiplier requires a symbol of positive order")
    report = _ellipticity_cached(sym)
    if not report.elliptic:
        raise ValueError(
            f"non-elliptic symbol (c_estimate {report.c_estimate:.3e} at xi {report.argmin_xi:.6g})"
        )
    dc = inverse_zero_frequency_value(sym, zero_mode)
    m = _multiplier_offzero(sym, f.grid).copy()
    m[0] = 1.0  # placeholder, replaced below
    inv = 1.0 / m
    inv[0] = dc
    if f.space == "spectral":
        return f.with_values(inv * f.values)
    vals = np.fft.ifft(inv * np.fft.fft(f.values))
    return f.with_values(vals)


def hilbert_transform(f: GridFunction) -> GridFunction:
    """Multiplier -i sign(xi); the zero mode maps to 0."""
    g = f.grid
    m = -1j * np.sign(g.mode_numbers).astype(complex)
    if f.space == "spectral":
        return f.with_values(m * f.values)
    return f.with_values(np.fft.ifft(m * np.fft.fft(f.values)))


def derivative(f: GridFunction, order: int = 1) -> GridFunction:
    """Spectral derivative (i xi)^order.

    For odd orders the Nyquist bin is zeroed; it carries no usable phase and
    zeroing keeps real inputs exactly real.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    if order == 0:
        return f
    g = f.grid
    m = (1j * g.frequencies) ** order
    if order % 2:
        m = m.copy()
        m[g.size // 2] = 0.0
    if f.space == "spectral":
        return f.with_values(m * f.values)
    return f.with_values(np.fft.ifft(m * np.fft.fft(f.values)))


@dataclass(frozen=True)
class WeightSpec:
    """Polynomial weight v_r(x) = <x>^r or its log-corrected variant w_r.

    w_r(x) = min{ <x>^r / log(1+<x>), <x>^d }.
    """

    kind: str
    r: float
    d: int = 1

    def __post_init__(self):
        if self.kind not in ("v_r", "w_r"):
            raise ValueError("kind must be 'v_r' or 'w_r'")
        object.__setattr__(self, "r", float(self.r))
        if self.r < 0:
            raise ValueError("r must be >= 0")
        if not isinstance(self.d, int) or self.d < 1:
            raise ValueError("d must be a positive integer")


def weight_values(w: WeightSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    bracket = np.sqrt(1.0 + x * x)
    if w.kind == "v_r":
        return bracket**w.r
    return np.minimum(bracket**w.r / np.log1p(bracket), bracket**w.d)


def _window_mask(grid: Grid, window) -> np.ndarray:
    if window is None:
        return np.ones(grid.size, dtype=bool)
    a, b = float(window[0]), float(window[1])
    if b < a:
        raise ValueError(f"bad window {window}")
    mask = (grid.nodes >= a) & (grid.nodes <= b)
    if not mask.any():
        raise ValueError(f"window {window} contains no grid nodes")
    return mask


def sup_norm(f: GridFunction, window=None) -> float:
    mask = _window_mask(f.grid, window)
    return float(np.max(np.abs(f.values[mask])))


def l2_norm(f: GridFunction) -> float:
    if f.space == "physical":
        return float(np.sqrt(f.grid.spacing * np.sum(np.abs(f.values) ** 2)))
    return float(np.sqrt(np.sum(np.abs(f.values) ** 2) / (2.0 * f.grid.half_length)))


def weighted_sup_norm(f: GridFunction, w: WeightSpec, window=None) -> float:
    if f.space != "physical":
        raise ValueError("weighted sup norm applies to physical-space samples")
    mask = _window_mask(f.grid, window)
    weights = weight_values(w, f.grid.nodes[mask])
    return float(np.max(weights * np.abs(f.values[mask])))


def smooth_bump(x, width: float):
    """C-infinity bump supported on [-width, width], normalized to 1 at 0."""
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.zeros_like(arr)
    inside = np.abs(arr) < width
    t = arr[inside] / width
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - t * t))
    return float(out[0]) if scalar else out


def smooth_step(t):
    """C-infinity ramp: 0 for t <= 0, 1 for t >= 1."""
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
        a = np.where(arr > 0, np.exp(-1.0 / np.clip(arr, 1e-300, None)), 0.0)
        b = np.where(1 - arr > 0, np.exp(-1.0 / np.clip(1 - arr, 1e-300, None)), 0.0)
        out = a / (a + b)
    out[arr <= 0] = 0.0
    out[arr >= 1] = 1.0
    return float(out[0]) if scalar else out


def taper_profile(grid: Grid, flat_frac: float = 0.6, zero_frac: float = 0.92) -> np.ndarray:
    """Even window: 1 on |x| <= flat_frac*L, 0 beyond zero_frac*L, smooth ramp between."""
    if not 0 < flat_frac < zero_frac <= 1.0:
        raise ValueError("need 0 < flat_frac < zero_frac <= 1")
    L = grid.half_length
    ax = np.abs(grid.nodes)
    t = (zero_frac * L - ax) / ((zero_frac - flat_frac) * L)
    return smooth_step(t)


def tapered(f: GridFunction, flat_frac: float = 0.6, zero_frac: float = 0.92) -> GridFunction:
    if f.space != "physical":
        raise ValueError("taper applies to physical-space samples")
    return f.with_values(f.values * taper_profile(f.grid, flat_frac, zero_frac))


# ---------------------------------------------------------------------------
# serialization

def write_csv(f: GridFunction, path) -> None:
    if f.space != "physical":
        raise ValueError("CSV serialization is for physical-space samples")
    xs = f.grid.nodes
    with open(path, "w") as fh:
        fh.write("x,re,im\n")
        for x, v in zip(xs, f.values):
            fh.write(f"{x:.17e},{v.real:.17e},{v.imag:.17e}\n")


def read_csv(path) -> GridFunction:
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    if data.ndim != 2 or data.shape[1] != 3:
        raise ValueError("expected three columns x,re,im")
    x = data[:, 0]
    N = x.size
    L = -x[0]
    grid = Grid(L, N)
    if not np.allclose(grid.nodes, x, rtol=0, atol=1e-9 * max(1.0, L)):
        raise ValueError("nodes in file do not form a uniform grid on [-L, L)")
    return GridFunction(grid, data[:, 1] + 1j * data[:, 2])


_BIN_MAGIC = b"DLGF"


def write_binary(f: GridFunction, path) -> None:
    """Bit-exact container: magic, L, N header, then interleaved re/im doubles."""
    if f.space != "physical":
        raise ValueError("binary serialization is for physical-space samples")
    with open(path, "wb") as fh:
        fh.write(_BIN_MAGIC)
        fh.write(struct.pack("<dq", f.grid.half_length, f.grid.size))
        fh.write(np.ascontiguousarray(f.values, dtype=np.complex128).tobytes())


def read_binary(path) -> GridFunction:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _BIN_MAGIC:
            raise ValueError("not a grid-function container")
        L, N = struct.unpack("<dq", fh.read(16))
        payload = fh.read(16 * N)
    values = np.frombuffer(payload, dtype=np.complex128)
    return GridFunction(Grid(L, int(N)), values)
