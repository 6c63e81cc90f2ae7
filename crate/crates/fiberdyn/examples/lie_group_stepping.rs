//! The two fourth-order steppers on a spinning particle. Both keep the
//! quaternion on the unit sphere; their self-convergence ratios sit near 16.

use fiberdyn::dynamics::{CoulombField, SpinParams, SpinState, SpinSystem};
use fiberdyn::integrate::{Method, integrate, richardson_ratio};
use fiberdyn::liealg::GroupPoint;
use fiberdyn::{Result, Vec3};

fn main() -> Result<()> {
    let sys = SpinSystem {
        params: SpinParams {
            m: 1.0,
            mu: 0.5,
            lambda: 0.5,
        },
        field: CoulombField {
            q: 1.0,
            r_min: 1e-4,
        },
    };
    let start = SpinState {
        x: Vec3::new(1.2, 0.0, 0.1),
        p: Vec3::new(0.0, 0.8, 0.2),
        s: GroupPoint::new(0.8, 0.2, -0.4, 0.4)?,
    }
    .to_state();

    for method in [Method::Rk4, Method::LieGroupRk4] {
        let end = integrate(&sys, &start, method, 1e-2, 20.0)?;
        let ratio = richardson_ratio(&sys, &start, method, 0.05, 2.0)?;
        println!(
            "{method:?}: |q| − 1 = {:.1e} after 2000 steps, Richardson ratio {ratio:.3}",
            end.su2[0].norm_defect()
        );
    }
    Ok(())
}
