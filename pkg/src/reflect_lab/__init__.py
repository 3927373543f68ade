"""Link-budget simulator comparing massive MIMO with IRS-aided transmission."""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    ConfigError,
    ModelError,
    ReflectLabError,
    SaturationError,
    UnreachableTargetError,
)
from .propagation import (  # noqa: E402
    ElementGeometry,
    GainModel,
    PropagationPath,
    TotalGain,
    far_field_gain,
    far_field_relative_error,
    free_space_gain,
    planar_exact_gain,
    rule_of_thumb_max,
    spherical_total_gain,
)
from .links import (  # noqa: E402
    ChannelVector,
    Combiner,
    RadioBudget,
    ReflectionConfig,
    build_los_channel,
    combiner_snr,
    irs_combiner_loss,
    irs_snr,
    irs_snr_exact,
    irs_snr_factorized,
    mrc_snr,
    optimal_irs_phases,
)
from .analysis import (  # noqa: E402
    LinkModel,
    LinkResult,
    Scenario,
    SweepTable,
    breakeven_elements,
    rate,
    required_power,
    run_sweep,
)
from .config import load_preset, parse_config, serialize_config  # noqa: E402
