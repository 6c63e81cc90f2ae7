//! Flux of two-forms through triangulated surfaces, charge quantization and
//! the path-space action.

mod flux;
mod mesh;
mod path;
mod quantization;

pub use flux::{FluxReport, MagneticForm, PhaseSpaceForm, TwoForm, flux, pairwise_sum};
pub use mesh::{SurfaceMesh, icosphere};
pub use path::{
    PathSheet, REFERENCE_POINT, euler_lagrange_gradient, euler_lagrange_residual,
    geodesic_cap_sheet, interaction_term, kinetic_term, path_action, radial_sheet, weil_unit,
};
pub use quantization::{
    DENOMINATOR_CAP, QuantizationReport, RATIONAL_TOL, quantization_check, quantization_check_with,
    rational_approx,
};
