//! Equations of motion: monopole, spin, relativistic top, Wong and
//! Kaluza–Klein systems.

mod kk;
mod monopole;
mod relativistic;
mod spin;
mod wong;

pub use kk::{
    KkCoupledSystem, KkMomenta, KkParams, KkState, kk_free_step, kk_identity_residual,
    kk_mass_squared, kk_momenta, kk_q,
};
pub use monopole::{
    DEFAULT_R_MIN, MonopoleLiftSystem, MonopoleParams, MonopoleState, MonopoleSystem, helicity,
    monopole_J, monopole_rhs,
};
pub use relativistic::{
    BmtParams, BmtSystem, EmField, TopState, bmt_rhs, mass_shell_residuals, relfree_step,
    rest_frame_spin,
};
pub use spin::{
    CoulombField, GradientField, MagneticField, SpinDerivative, SpinMonopoleParams,
    SpinMonopoleSystem, SpinParams, SpinState, SpinSystem, UniformField, spin_energy,
    spin_monopole_J, spin_monopole_energy, spin_monopole_rhs, spin_rhs,
};
pub use wong::{
    AbelianUniform, FieldStrength, GaugeBackground, GaugeMap, GaugeTransformed, Hedgehog,
    Potential, ReductionReport, ReductionSample, WongParams, WongState, WongSystem,
    hedgehog_background, hedgehog_charge, hedgehog_reduction_check, wong_rhs,
};
