from ._version import __version__

# Errors and argument checks
from .exceptions import (
    PyramanError,
    ConfigError,
    DomainError,
    ResolutionError,
    EdgeError,
    ShapeError,
    EstimatorError,
    DegenerateConfigError,
    UnboundedRangeError,
    FitError,
)

# Spectra on a wavelength grid
from .spectral_core import (
    SpectralGrid,
    PulseSpec,
    SpectralDensity,
    DEFAULT_GRID,
    wavelength_to_frequency,
    frequency_to_wavelength,
    gaussian_spectrum,
    fwhm,
    convolve_response,
)

# Diamond dispersion and phase matching
from .dispersion import (
    SellmeierModel,
    PhaseMatchResult,
    DIAMOND,
    refractive_index,
    wavevector,
    phase_mismatch,
    conversion_efficiency,
    raman_resonant_input,
    output_wavelength,
)

# Experiment configuration
from .config import ExperimentConfig, load_config, config_from_dict, config_to_dict, config_hash, mean_pair_number

# Memory transduction
from .memory_model import (
    RetrievedPhoton,
    retrieved_spectrum,
    storage_decay,
    deconvolve_duration,
    absorption_dip,
    input_duration,
)

# Coincidence Monte Carlo
from .counting_sim import (
    TrialOutcome,
    CountRecord,
    CoincidenceHistogram,
    SlotProbabilities,
    simulate,
    simulate_slots,
    coincidence_histogram,
    iter_outcomes,
    accidental_estimate,
    background_subtract,
    subtract_accidentals,
)

# Correlation analysis and fitting
from .analysis import (
    Classicality,
    G2Estimate,
    NonclassicalRange,
    g2_analytic_full,
    g2_approximate,
    g2_from_efficiency,
    g2_curve,
    g2_from_counts,
    nonclassical_range,
    cauchy_schwarz_check,
    poisson_sigma,
)
from .fitting import FitResult, fit_exponential, fit_gaussian

# Scenarios and batch runs
from .scenarios import ScenarioKind, Scenario, ScenarioBuilder, serialize_parameters
from .runner import run_scenario, run_scenarios
