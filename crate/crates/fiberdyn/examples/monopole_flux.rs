//! Flux of the monopole two-form through triangulated spheres and the
//! resulting charge quantization check.

use std::f64::consts::PI;

use fiberdyn::dynamics::MonopoleParams;
use fiberdyn::fluxaction::{PhaseSpaceForm, flux, icosphere, quantization_check};
use fiberdyn::{Result, Vec3};

fn main() -> Result<()> {
    let form = PhaseSpaceForm {
        params: MonopoleParams::new(1.0, 1.0)?,
    };
    for level in 2..=5 {
        let mesh = icosphere(level, Vec3::zeros(), 1.0);
        let phi = flux(&form, &mesh)?;
        println!(
            "{:6} triangles: flux {phi:.10}, relative error {:.1e}",
            mesh.triangles.len(),
            (phi + 4.0 * PI).abs() / (4.0 * PI)
        );
    }
    let away = icosphere(5, Vec3::new(3.0, 0.0, 0.0), 1.0);
    println!(
        "sphere not enclosing the monopole: {:.1e}",
        flux(&form, &away)?
    );

    for charges in [
        vec![1.0, 3.0 / 7.0],
        vec![0.5, 1.5, 2.0],
        vec![1.0, 2f64.sqrt()],
    ] {
        let q = quantization_check(&charges);
        println!(
            "{charges:?}: commensurable {}, λ_w {:?}",
            q.commensurable, q.lambda_w
        );
    }
    Ok(())
}
