"""Discrete tau-quantization calculus for finite-rank operators on a
sampled, periodized line: Wigner-type transforms, Shubin quantization,
spreading representations, quantum-harmonic-analysis convolutions,
Cohen-class distributions, Gabor matrices and decay diagnostics.

Every fast path has an independently coded oracle (defining integral,
lattice sum or per-point trace) exposed through the same API, so all
conventions are cross-validated numerically.
"""

from ._kernels import active_backend, set_backend
from .convolve import (
    cohen_distribution,
    cohen_of_signal,
    convolve_function_operator,
    convolve_operators,
    convolve_ps,
    convolve_ps_direct,
    delta_spike,
)
from .decay import (
    DecayReport,
    gaussian_window_2d,
    moment_suprema,
    rapid_decay_check,
    schwartz_score,
    stft_4d,
    weighted_m1_norm,
)
from .gabor import (
    GaborMatrix,
    GuardrailError,
    gabor_entry,
    gabor_matrix,
    reconstruct_wigner,
    reconstruction_phase_coefficient,
    twisted_convolve,
)
from .grid import (
    GridError,
    GridSpec,
    KernelMatrix,
    PhaseSpaceFunction,
    make_grid,
    partial_fourier2,
    partial_fourier2_inv,
    symplectic_fourier,
    warp_to_kernel,
)
from .operators import (
    FiniteRankOperator,
    OperatorAsKernel,
    PositivityReport,
    is_positive,
    random_state,
    translate_kernel,
)
from .quantize import (
    SpreadingFunction,
    TauSymbol,
    duality_pairing,
    fourier_wigner,
    fourier_wigner_point,
    operator_from_spreading,
    operator_from_symbol,
    tau_symbol,
    trace_pairing,
    wigner_transform,
)
from .signals import (
    LatticePoint,
    Signal,
    ambiguity,
    cross_wigner,
    fourier,
    gaussian,
    hermite_functions,
    inverse_fourier,
    tau_stft,
    tau_stft_point,
    tf_shift,
    tf_shift_dagger,
)

__all__ = [
    "DecayReport",
    "FiniteRankOperator",
    "GaborMatrix",
    "GridError",
    "GridSpec",
    "GuardrailError",
    "KernelMatrix",
    "LatticePoint",
    "OperatorAsKernel",
    "PhaseSpaceFunction",
    "PositivityReport",
    "Signal",
    "SpreadingFunction",
    "TauSymbol",
    "active_backend",
    "ambiguity",
    "cohen_distribution",
    "cohen_of_signal",
    "convolve_function_operator",
    "convolve_operators",
    "convolve_ps",
    "convolve_ps_direct",
    "cross_wigner",
    "delta_spike",
    "duality_pairing",
    "fourier",
    "fourier_wigner",
    "fourier_wigner_point",
    "gabor_entry",
    "gabor_matrix",
    "gaussian",
    "gaussian_window_2d",
    "hermite_functions",
    "inverse_fourier",
    "is_positive",
    "make_grid",
    "moment_suprema",
    "operator_from_spreading",
    "operator_from_symbol",
    "partial_fourier2",
    "partial_fourier2_inv",
    "random_state",
    "rapid_decay_check",
    "reconstruct_wigner",
    "reconstruction_phase_coefficient",
    "schwartz_score",
    "set_backend",
    "stft_4d",
    "symplectic_fourier",
    "tau_stft",
    "tau_stft_point",
    "tau_symbol",
    "tf_shift",
    "tf_shift_dagger",
    "trace_pairing",
    "translate_kernel",
    "warp_to_kernel",
    "weighted_m1_norm",
    "wigner_transform",
]

__version__ = "0.1.0"
