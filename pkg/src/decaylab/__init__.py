"""decaylab: a numerical laboratory for nonlocal elliptic travelling-wave
equations p(D)u = F(u) with finitely smooth homogeneous symbols, and for the
sharp algebraic decay, derivative decay, and Fourier analyticity properties
of their solutions."""

from .symbols import (
    HomogeneousTerm,
    Symbol,
    EllipticityReport,
    eval_symbol,
    limits_at_zero,
    preset_symbol,
    check_ellipticity,
    is_conjugate_symmetric,
    symbol_to_json,
    symbol_from_json,
    symbol_to_dict,
    symbol_from_dict,
)
from .spectral import (
    Grid,
    GridFunction,
    WeightSpec,
    forward_transform,
    inverse_transform,
    apply_multiplier,
    apply_inverse_multiplier,
    hilbert_transform,
    derivative,
    weight_values,
    sup_norm,
    l2_norm,
    weighted_sup_norm,
    smooth_bump,
    taper_profile,
    tapered,
    write_csv,
    read_csv,
    write_binary,
    read_binary,
)
from .oracles import (
    LCParams,
    BOParams,
    lc_solution,
    lc_fourier,
    lc_effective_zero_mode,
    bo_soliton,
    bo_fourier,
)
from .solver import (
    Nonlinearity,
    SolverConfig,
    Solution,
    DivergenceError,
    residual,
    fixed_point_solve,
    center_and_compare,
)
from .asymptotics import (
    DecayFit,
    StripEstimate,
    BootstrapSchedule,
    SpectralResolutionError,
    fit_algebraic_decay,
    derivative_decay_ladder,
    fit_strip_width,
    bootstrap_schedule,
    bootstrap_step_bound,
)
from .inequalities import (
    RatioReport,
    claimed_bound,
    convolution_integral,
    verify_convolution_bound,
    verify_kernel_decay,
    verify_interpolation,
    interpolation_corpus,
)

__version__ = "0.1.0"
