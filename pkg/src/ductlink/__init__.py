"""Flow-driven molecular communication over a duct.

A dose of magnetic nanoparticles injected into a laminar carrier flow is
sensed downstream as a susceptibility pulse. This package provides the
closed-form channel model for such pulses, a Monte Carlo transport check,
an on-off-keying modem (synthesis and threshold decoding with peak
synchronization), and least-squares estimation of the release shape
parameter from measured traces.
"""

from .channel import (
    InitialDistribution,
    SystemResponse,
    initial_pdf,
    peak,
    peak_susceptibility,
    pulse_amplitude,
    radial_cdf,
    response_from_parameters,
    susceptibility,
    system_response,
)
from .estimation import FitResult, align_by_peak, average_pulses, fit_beta, model_sse
from .hydrodynamics import (
    LAMINAR_TURBULENT_REYNOLDS,
    FlowAnalysis,
    FlowField,
    analyze_flow,
    effective_velocity,
    flow_field_from_parameters,
    flow_regime,
    peclet_number,
    reynolds_number,
    transport_regime,
    velocity_at,
)
from .modem import (
    DecodedMessage,
    DetectionConfig,
    IncompleteCharacterError,
    NoiseModel,
    SynchronizationError,
    decode_bits,
    decode_trace,
    detect_peaks,
    encode_text,
    injection_times,
    synthesize_trace,
)
from .oracle import (
    OracleConfig,
    OraclePoint,
    OracleRun,
    fraction_in_window,
    radius_from_uniform,
    run_oracle,
    sample_radii,
)
from .params import (
    SystemParameters,
    baseline_parameters,
    parse_parameter_file,
    receiver_volume,
    validate_parameters,
)
from .trace import SusceptibilityTrace, read_trace, write_trace

__version__ = "0.1.0"
