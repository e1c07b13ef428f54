"""Mean-reversion processes with a periodic Fourier trend: Euler-Maruyama
simulation and two-phase (likelihood + spectral) calibration."""
from ._backend import BACKEND
from .deriv import DerivRule, differentiate
from .errors import DegenerateRegressorError, DomainError, NumericalError, SpectralLeakageError
from .estimate import (EstimationReport, Phase1Result, Phase2Result, estimate_path,
                       gaussian_loglik, phase1, phase1_closed_form, phase2, phase2_closed_form)
from .harness import ExperimentConfig, reproduce_table, run_experiment
from .sde import (Gamma, SampledPath, SdeParams, SeedSpec, read_path_csv, simulate_ensemble,
                  simulate_path, write_path_csv)
from .smooth import SmootherConfig, exponential_smoothing, hp_filter, moving_average
from .spectral import (ComplexSpectrum, HarmonicSpectrum, amplitude_phase, dft, idft,
                       reconstruct, select_top, to_fourier_trend)
from .stats import Summary, ensemble_mean_series, rms, successive_L_rms, summarize
from .trend import (ExpectedValueParams, FourierTrend, Harmonic, eval_trend, expected_value,
                    expected_value_path, table1_trend)

__version__ = "0.1.0"
