"""Two-photon (HOM) interference in lossy directional couplers.

Coupler scattering from supermode indices, post-selected two-photon
statistics, Poisson coincidence simulation and dip/peak fitting.
"""

__version__ = "0.1.0"

from .coupled_mode import (  # noqa: E402
    DLSPPW_INDICES,
    METAL_STRIP_INDICES,
    ComplexIndex,
    CouplerSpec,
    ScatteringAmplitudes,
    bunching_probability,
    coupler_coefficients,
    find_5050_lengths,
    first_5050_lengths,
    splitting_ratio,
    sweep_bunching_vs_length,
)
from .exceptions import ConfigError, DegenerateError, LossyHomError, NoFeatureError  # noqa: E402
from .experiment_sim import (  # noqa: E402
    CoincidenceRecord,
    ExperimentConfig,
    expected_coincidence_rate,
    simulate,
    stage_scan,
)
from .fitting import (  # noqa: E402
    DipModel,
    FitResult,
    coherence_length_from_fit,
    fit_counts,
    fit_dip,
    visibility_v1,
    visibility_v2,
)
from .fock_interference import (  # noqa: E402
    OverlapModel,
    TwoPhotonOutput,
    hom_coincidence_probability,
    modified_coincidence_probability,
    overlap,
    same_port_probability,
    scatter_two_photons,
)
