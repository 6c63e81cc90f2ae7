//! Kaluza–Klein particle with an SU(2) internal space: canonical momenta
//! obey p² − I·I/λ + m² = 0, and the four-dimensional mass depends on
//! the isospin Casimir with a slope set by the sign of λ.

use fiberdyn::dynamics::{
    Hedgehog, KkCoupledSystem, KkParams, KkState, kk_free_step, kk_identity_residual,
    kk_mass_squared, kk_momenta,
};
use fiberdyn::integrate::{Method, StepperConfig, run};
use fiberdyn::liealg::GroupPoint;
use fiberdyn::{Result, Vec3, Vec4};

fn main() -> Result<()> {
    for lambda in [0.8, -0.8] {
        let p = KkParams { m: 1.0, lambda };
        let masses: Vec<String> = [0.0, 0.2, 0.4]
            .iter()
            .map(|c| format!("{:.3}", kk_mass_squared(&Vec3::new(0.0, 0.0, *c), &p)))
            .collect();
        println!(
            "λ = {lambda:+}: M² for |I| = 0, 0.2, 0.4 → {}",
            masses.join(", ")
        );
    }

    let p = KkParams {
        m: 1.0,
        lambda: 0.8,
    };
    let mut st = KkState {
        x: Vec4::zeros(),
        xdot: Vec4::new(1.2, 0.3, -0.2, 0.5),
        s: GroupPoint::new(0.7, 0.1, 0.5, -0.2)?,
        omega: Vec3::new(0.4, -0.3, 0.9),
    };
    for _ in 0..3 {
        let mom = kk_momenta(&st, &p)?;
        println!(
            "I = {:+.6?}  identity residual {:.1e}",
            mom.isospin.as_slice(),
            kk_identity_residual(&mom, &p)
        );
        st = kk_free_step(&st, 1.5)?;
    }

    let sys = KkCoupledSystem {
        params: KkParams {
            m: 1.0,
            lambda: -2.0,
        },
        e: 1.0,
        k: Vec3::new(0.0, 0.0, 0.7),
        background: Hedgehog {
            e: 1.0,
            r_min: 1e-4,
        },
    };
    let start = sys.initial(
        Vec4::new(0.0, 1.5, 0.0, 0.0),
        Vec3::new(0.0, 0.4, 0.1),
        GroupPoint::new(0.9, 0.1, -0.4, 0.0)?,
    )?;
    let (traj, _) = run(
        &sys,
        &start,
        &StepperConfig::new(Method::LieGroupRk4, 1e-3, 5.0).record_every(1000),
    )?;
    for (t, y) in traj.times.iter().zip(&traj.states) {
        println!("τ = {t:.1}  shell residual {:.1e}", sys.shell_residual(y));
    }
    Ok(())
}
