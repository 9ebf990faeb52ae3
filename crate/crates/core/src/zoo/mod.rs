//! Closed-form ALF metric families in frame form.

mod params;
mod radial;
mod registry;
mod reissner_nordstrom;
mod schwarzschild;
mod taub_nut;
mod transform;

pub use params::{Chart, ReissnerNordstromParams, SchwarzschildParams, TaubNutParams};
pub use registry::{DynFamily, FamilySpec, FAMILY_NAMES};
pub use reissner_nordstrom::{rn_components, rn_isotropic_radius, ReissnerNordstrom};
pub use schwarzschild::{isotropic_radius, schwarzschild_components, warp_profile, Schwarzschild, WarpTable};
pub use taub_nut::{taubnut_components, TaubNut};
pub use transform::{plane_rotation, FiberShifted, Flat, Rotated, Translated};
