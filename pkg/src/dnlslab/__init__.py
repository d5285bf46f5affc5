"""Spectral laboratory for a gauged derivative Schroedinger equation on the torus."""

from .fields import (
    CutoffProfile,
    SpectralField,
    Trajectory,
    bracket,
    bump,
    constant_field,
    derivative,
    free_wave_trajectory,
    from_physical,
    mean_value,
    physical_product,
    plane_wave,
    random_field,
    random_trajectory,
    to_physical,
)
from .gauge import (
    GaugeContext,
    gauge,
    gauge_field,
    gauge_field_inv,
    gauge_inv,
    gauge_phase,
    gauge_phase_inv,
    gauge_roundtrip_error,
    mass_primitive,
    translate,
    translate_field,
    translation_gap_probe,
)
from .nonlinear import (
    CUBIC_MASK,
    QUINTIC_MASK,
    FrequencyMask,
    cubic_diagonal,
    cubic_full,
    cubic_physical,
    cubic_restricted,
    dnls_forcing,
    mean_shifted_cubic,
    mean_shifted_cubic_spectral,
    product_restricted,
    quintic_physical,
    quintic_restricted,
    resonance_identity,
)
from .norms import (
    INF,
    NormSpec,
    embedding_scan,
    h_norm,
    l2_spacetime_norm,
    space_time_transform,
    xst_norm,
    z_norm,
)
from .reports import (
    ScanReport,
    __version__,
    load_field,
    load_trajectory,
    save_field,
    save_trajectory,
)
from .solver import (
    Equation,
    SolveConfig,
    SolveReport,
    duhamel,
    free_evolution,
    integral_residual,
    picard_solve,
    plane_wave_solution,
    rk4_solve,
    solve_via_gauge,
)
from .estimates import (
    convolution_tail_bound,
    cubic_ratio_scan,
    divergence_report,
    divergent_mass_sum,
    divisor_pair_count,
    endpoint_factor_norm,
    endpoint_injection_report,
    endpoint_pairing,
    endpoint_ratio,
    near_diagonal_pair_count,
    near_diagonal_scan,
    quintic_ratio_scan,
    resonance_sum_scan,
    resonance_weighted_sum,
    strichartz_ratio_scan,
)

__all__ = [name for name in dir() if not name.startswith("_")]
