"""Shannon information storage of noisy fringe patterns and fringe-data
compression by phase-shifting algorithms."""

from .errors import ConfigurationError, DomainError, FringeError, ImageIOError
from .grid import (
    ComplexImage,
    QuantizationSpec,
    RealImage,
    load_complex,
    load_image,
    power,
    quantize,
    quantize_codes,
    save_complex,
    save_image,
)
from .synth import (
    FringeModel,
    FringeStack,
    PhaseField,
    make_phase_defocus,
    phase_map,
    sigma_for_snr,
    synth_fringe,
    synth_phase_shifted_stack,
    synth_profilometry_pair,
)
from .spectral import (
    SpectralRegions,
    Spectrum,
    default_regions,
    dft2,
    estimate_bandwidth,
    estimate_noise_density,
    estimate_snr,
    idft2,
)
from .infotheory import (
    ChannelModel,
    DiscreteSource,
    InfoReport,
    analytic_info_rate,
    capacity_trade_table,
    channel_capacity,
    discrete_entropy,
    doubling_curve,
    doubling_frames,
    fringe_info_rate,
    info_rate_discrete,
    reliability,
)
from .psa import (
    PsaKernel,
    demodulate_stack,
    ftf_eval,
    least_squares_kernel,
    load_kernel,
    monte_carlo_gain,
    save_kernel,
    snr_gain,
    validate_quadrature,
)
from .carrier import (
    LobeFilter,
    demodulate_carrier,
    fit_lobe,
    wrap_angle,
    wrapped_phase,
)

__version__ = "0.1.0"
