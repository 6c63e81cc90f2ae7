//! SU(2) and the connected Lorentz group.

mod lorentz;
mod su2;

pub use lorentz::{
    GENERATOR_PAIRS, LorentzFrame, Mat4, PROJECTION_PERIOD, algebra_coeffs, algebra_element,
    contract_momentum, eta, frame_momentum, frame_spin, half_square, levi_civita4, lorentz_exp,
    lorentz_generator, lower, lower2, mdot, pauli_lubanski, total_angular_momentum,
};
pub use su2::{
    GroupPoint, Su2Vector, bracket, hopf_project, pauli, rotate_vector, sigma_components,
    sigma_dot, su2_exp, su2_log,
};
pub(crate) use su2::{exp_finite, hamilton};
