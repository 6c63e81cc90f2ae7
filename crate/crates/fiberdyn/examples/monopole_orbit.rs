//! Charged particle around a magnetic monopole. The orbit stays on a cone
//! around the conserved angular momentum J = m x × v + n x̂.

use fiberdyn::dynamics::{MonopoleParams, MonopoleState, MonopoleSystem, helicity, monopole_J};
use fiberdyn::integrate::{Method, Monitor, StepperConfig, run};
use fiberdyn::{Result, Vec3};

fn main() -> Result<()> {
    let params = MonopoleParams::new(1.0, 1.0)?;
    let start = MonopoleState::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.3));
    let j0 = monopole_J(&start, &params)?;
    println!(
        "J = {:?}, cone half-angle {:.6} rad",
        j0.as_slice(),
        (params.n / j0.norm()).acos()
    );

    let config = StepperConfig::new(Method::Rk4, 1e-3, 10.0)
        .record_every(1000)
        .monitor(Monitor::drift("J", 1e-6, move |y| {
            monopole_J(&MonopoleState::from_state(y), &params)
                .map(|j| j.iter().copied().collect())
                .unwrap_or_default()
        }));
    let (traj, report) = run(&MonopoleSystem { params }, &start.to_state(), &config)?;

    for (t, y) in traj.times.iter().zip(&traj.states) {
        let s = MonopoleState::from_state(y);
        println!(
            "t = {t:5.2}  r = {:.6}  x̂·J = {:.15}",
            s.x.norm(),
            helicity(&s, &params)?
        );
    }
    let j = report.monitor("J").expect("monitor registered");
    println!(
        "max |J(t) − J(0)| = {:.2e} (passed: {})",
        j.max_drift, j.passed
    );
    Ok(())
}
