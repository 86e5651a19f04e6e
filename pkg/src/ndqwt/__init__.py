"""Non-decimated quaternion wavelet transforms for signals and images."""
from .errors import (DegenerateLevel, DimensionMismatch, EmbeddingFailure, InsufficientPoints,
                     InvalidLevels, InvalidShift, NDQWTError, ParseError, SizeTooLarge,
                     UnsupportedFormat, ZeroQuaternion)
from .fbm import FbmSpec, generate_fbm_1d, generate_fbm_2d
from .filters import FilterBank, ginzberg_filters, verify_design_equations
from .qlinalg import QMatrix, RealDiag, qmat_hermitian, qmat_mul, quat_to_real4
from .quaternion import (PhaseTriple, Quaternion, quat_conj, quat_from_polar, quat_modulus,
                         quat_mul, quat_phases)
from .spectra import (FeatureRow, SlopeFit, SpectrumPoint, end_match, features_1d, features_2d,
                      fit_slope, hurst_from_slope, level_energies_1d, level_energies_2d,
                      phase_averages)
from .transform1d import Decomposition1D, TransformPlan1D, build_plan_1d, forward_1d, inverse_1d
from .transform2d import (Decomposition2D, TransformPlan2D, build_plan_2d, diagonal_blocks,
                          forward_2d, inverse_2d)

__version__ = "0.1.0"
