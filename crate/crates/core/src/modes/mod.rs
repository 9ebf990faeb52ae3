//! Separation of variables for the model Laplacian outside a compact set:
//! spherical and fiber modes, indicial roots, radial Green operators,
//! weighted norms and decay jumps.

mod decay;
mod grid;
mod harmonics;
mod indicial;
mod norms;
mod radial;

pub use decay::{decay_jump_expand, Branch, DecayExpansion, DecayOptions, DecayTerm};
pub use grid::{Mode, RadialGrid, RadialProfile};
pub use harmonics::{
    fiber_component, fiber_mean, fiber_perp, fiber_project, solid_zonal, zonal, zonal_norm_squared, FiberMode,
};
pub use indicial::{critical_set, indicial_roots, is_critical, sphere_eigenvalue, IndicialData, CRITICAL_TOLERANCE};
pub use radial::{green_mid, green_outer, radial_apply, solve_k_mode};
pub use norms::{
    classify_membership, hardy_ratio, weighted_norm, weighted_norm_multi, Cutoff, Membership, MembershipReport,
    MEMBERSHIP_SLOPE_TOLERANCE,
};
