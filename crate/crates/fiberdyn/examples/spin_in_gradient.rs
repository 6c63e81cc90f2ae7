//! A magnetic moment in the curl-free field B = b0 + g (y, x, 0): the
//! gradient force deflects the particle while the spin precesses, and the
//! energy p²/2m + μ S·B is conserved.

use fiberdyn::dynamics::{GradientField, SpinParams, SpinState, SpinSystem, spin_energy};
use fiberdyn::integrate::{Method, StepperConfig, run};
use fiberdyn::liealg::GroupPoint;
use fiberdyn::{Result, Vec3};

fn main() -> Result<()> {
    let field = GradientField {
        b0: Vec3::new(0.0, 0.0, 1.0),
        g: 0.4,
    };
    let params = SpinParams {
        m: 1.0,
        mu: 0.3,
        lambda: 0.5,
    };
    let start = SpinState {
        x: Vec3::new(0.5, -0.2, 0.0),
        p: Vec3::new(0.1, 0.3, 0.0),
        s: GroupPoint::new(0.9, 0.3, 0.1, 0.0)?,
    };
    let sys = SpinSystem { params, field };
    let e0 = spin_energy(&start, &params, &field)?;

    let (traj, _) = run(
        &sys,
        &start.to_state(),
        &StepperConfig::new(Method::LieGroupRk4, 1e-2, 10.0).record_every(200),
    )?;
    for (t, y) in traj.times.iter().zip(&traj.states) {
        let s = SpinState::from_state(y);
        let de = spin_energy(&s, &params, &field)? - e0;
        println!(
            "t = {t:5.2}  x = {:+.4?}  S = {:+.4?}  ΔE = {de:+.1e}",
            s.x.as_slice(),
            s.spin(params.lambda).as_slice()
        );
    }
    Ok(())
}
