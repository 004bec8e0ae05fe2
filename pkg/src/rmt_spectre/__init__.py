"""rmt-spectre: random-matrix-theory signal/noise separation for the
singular spectra of (weight) matrices.

The library models a matrix as signal plus i.i.d. noise, fits the
Marchenko-Pastur bulk of its singular spectrum (BEMA or Gaussian
broadening), applies a Tracy-Widom-corrected detection threshold, scores
the retained spikes by their limiting signal/observed singular-vector
overlap, and produces low-rank approximations. A seeded spiked-model
simulator serves as built-in ground truth for all of the above.
"""

__version__ = "0.1.0"

from .errors import InputError, NumericalError, SpectreError
from .fit import GaussianBroadening, MpFit, bema, broaden, gb_fit
from .lowrank import (LowRankFactors, ParamSavings, export_factors,
                      param_savings, truncate)
from .marchenko_pastur import MpParams, mp_cdf, mp_density, mp_upper_quantile
from .matrices import (MatrixSource, OrientedMatrix, SingularSpectrum,
                       load_manifest, load_matrix, orient, reshape_conv,
                       singular_values, svd, unreshape_conv)
from .simulate import McResult, PlantedTruth, SpikedSpec, gen_spiked, mc_verify
from .spikes import (SimilarityReport, Spike, ThresholdResult, analyze, ave_w,
                     count_spikes, d_transform, d_transform_prime, h_transform,
                     phi, phi_closed_form, rho, theta_hat, threshold)
from .tracy_widom import TwTable, default_table, load_table, tw_quantile

__all__ = [
    "__version__",
    "SpectreError", "InputError", "NumericalError",
    "MatrixSource", "OrientedMatrix", "SingularSpectrum",
    "load_matrix", "load_manifest", "orient", "reshape_conv", "unreshape_conv",
    "svd", "singular_values",
    "MpParams", "mp_density", "mp_cdf", "mp_upper_quantile",
    "TwTable", "tw_quantile", "default_table", "load_table",
    "MpFit", "bema", "broaden", "GaussianBroadening", "gb_fit",
    "ThresholdResult", "Spike", "SimilarityReport",
    "threshold", "count_spikes", "theta_hat", "rho", "phi", "phi_closed_form",
    "d_transform", "d_transform_prime", "h_transform", "ave_w", "analyze",
    "LowRankFactors", "ParamSavings", "truncate", "param_savings", "export_factors",
    "SpikedSpec", "PlantedTruth", "McResult", "gen_spiked", "mc_verify",
]
