from .quadrature import composite_gauss, cutoff, fibonacci_sphere, gauss_legendre, sphere_rule
from .fitting import LineFit, fit_line, fit_power_law
from .differential import differential
from .norms import field_norm, quadrature_weights
from .envelope import EnvelopeEstimate, decay_envelope
from .normalization import grad_omega_sup, is_normalized, normalize_profile, vorticity_of
from .reconstruction import biot_savart, profile_consistency
from .stretching import (
    argmax_stretching_check,
    cp_constant,
    normalized_threshold,
    smallness_check,
    stretching_direct,
    stretching_integral,
)
from .selfsim import bernoulli, r_flat, record_residuals, recover_pressure, selfsim_residual, selfsim_residuals
from .integration import integrate_flow, transport_velocity
from .flow import (
    bernoulli_monotonicity_check,
    circulation_check,
    flow_identity_check,
    global_outgoing_check,
)
from .nodal import nodal_set, outgoing_certificate, vanishing_order
from .axisym import (
    area_growth_check,
    axis_outgoing_certificate,
    axisym_invariant_check,
    axisym_residual,
    backward_alpha_limit,
    meridional_fixed_points,
    meridional_flow,
    orbit_connection_check,
    profile_compatibility,
    record_axisym_residuals,
)
from .criteria import alpha_pointwise_bound, ell_mu_criterion, gamma_lower_bound, viscous_criterion
from .battery import CheckRun, check_axisym, check_profile, default_labels, nodal_battery
