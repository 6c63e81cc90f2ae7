//! Relativistic spinning top in a uniform magnetic field. With g = 2 the
//! spin turns with the velocity, so the longitudinal polarization is fixed;
//! other g values make it oscillate.

use fiberdyn::dynamics::{BmtParams, BmtSystem, EmField, TopState, rest_frame_spin};
use fiberdyn::integrate::{Method, StepperConfig, run};
use fiberdyn::liealg::lorentz_exp;
use fiberdyn::{Result, Vec3, Vec4};

fn main() -> Result<()> {
    let start = TopState {
        z: Vec4::zeros(),
        frame: lorentz_exp(&[0.6, 0.0, 0.0, 0.0, 0.4, 0.0]),
    }
    .to_state();
    for g in [2.0, 2.2] {
        let params = BmtParams {
            m: 1.0,
            e: 1.0,
            g,
            lambda: 0.5,
            field: EmField::magnetic(&Vec3::new(0.0, 0.0, 1.0)),
        };
        let (traj, _) = run(
            &BmtSystem { params },
            &start,
            &StepperConfig::new(Method::LieGroupRk4, 1e-2, 50.0).record_every(1000),
        )?;
        println!("g = {g}");
        for (tau, y) in traj.times.iter().zip(&traj.states) {
            let st = TopState::from_state(y);
            let u = st.velocity();
            let along = rest_frame_spin(&st).dot(&Vec3::new(u[1], u[2], u[3]).normalize());
            println!("  τ = {tau:5.1}  longitudinal polarization {along:+.10}");
        }
    }
    Ok(())
}
