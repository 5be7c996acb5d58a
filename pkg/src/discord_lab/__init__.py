"""Gaussian discord, mutual informations and negativity of two-mode Gaussian states,
with the noisy and lossy channel models needed to study their evolution."""

__version__ = "0.1.0"

from .channels import (  # noqa: E402
    ChannelSpec,
    DetectorSpec,
    add_classical_noise_mode_b,
    attenuate_mode_b,
    detector_map,
)
from .covariance import (  # noqa: E402
    SymplecticInvariants,
    TwoModeCovariance,
    coerce_standard_form,
    invariants,
    validate_physicality,
)
from .measures import (  # noqa: E402
    MeasureReport,
    MeasurementCovariance,
    conditional_a_determinant,
    e_min,
    entropy_f,
    gaussian_discord,
    is_separable_ppt,
    log_negativity,
    measure_report,
    minimize_oracle,
    mutual_information,
)
from .states import (  # noqa: E402
    ModulationSpec,
    SqueezerSpec,
    mean_photon_number,
    split_thermal,
    tmsv,
    two_mode_from_squeezers,
)
