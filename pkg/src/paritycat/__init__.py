"""Parity-adapted U(D) coherent states of N quDits and their Schmidt spectra."""

from .cats import (
    CatParams,
    DegenerateCatError,
    HOCatParams,
    cat_fock_amplitudes,
    cat_norm_limit,
    cat_norm_sq,
    cat_norms,
    ho_cat_norm_sq,
    log_cat_norms,
)
from .combinatorics import Composition, ParityLabel, enumerate_compositions, n_compositions
from .limits import (
    IndeterminateLimitError,
    LossChannel,
    SphericalDirection,
    directional_spectrum,
    lambda_ho,
    lambda_infinity_d2,
    lambda_infinity_directional,
    lambda_origin,
    lambda_rescaled_tl,
    lambda_thermodynamic,
    lambda_unit,
    spectrum_at,
)
from .oracle import OracleCapError, JacobiConvergenceError, oracle_spectrum, verify_spectrum
from .rng import SplitMix64
from .schmidt import (
    SchmidtSpectrum,
    linear_entropy,
    numerical_rank,
    rank_formula,
    schmidt_coefficients,
    schmidt_eigenvalues,
    von_neumann_entropy,
)
from .states import BlochVector, CSLabel

__version__ = "0.1.0"
