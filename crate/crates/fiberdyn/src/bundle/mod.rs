//! Hopf-bundle sections, patch potentials, transition functions and cocycles.

mod cocycle;
mod patches;

pub use cocycle::{
    CocycleReport, INTEGRALITY_TOL, LineIntegrated, MonopoleField, PairwiseFunctions, TripleRecord,
    U1_TOL, cocycle_integers, section_body_rate, transition_defect, triple_points,
};
pub use patches::{
    CAP_RADIUS, GaugeFn, Patch, PatchCover, PatchId, STRING_EXCLUSION, equatorial_winding,
    local_potential, section_north, section_south, transition_angle,
};
