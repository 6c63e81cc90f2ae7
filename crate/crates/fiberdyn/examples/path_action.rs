//! Action of a monopole orbit with the interaction written as a flux
//! through a sheet spanning the path. Two sheets with the same boundary
//! differ by a whole multiple of eg, and the true orbit makes the action
//! stationary.

use std::f64::consts::PI;

use fiberdyn::dynamics::{MonopoleParams, MonopoleState, MonopoleSystem};
use fiberdyn::fluxaction::{
    REFERENCE_POINT, euler_lagrange_residual, geodesic_cap_sheet, icosphere, path_action,
    radial_sheet, weil_unit,
};
use fiberdyn::integrate::{Method, step};
use fiberdyn::{Result, Vec3};

fn orbit(nodes: usize, dt: f64, params: &MonopoleParams) -> Result<(Vec<Vec3>, Vec<f64>)> {
    let sys = MonopoleSystem { params: *params };
    let mut y = MonopoleState::new(Vec3::new(1.0, 0.5, 0.2), Vec3::new(0.1, 0.8, 0.3)).to_state();
    let mut xs = vec![MonopoleState::from_state(&y).x];
    for _ in 1..nodes {
        for _ in 0..10 {
            y = step(Method::Rk4, &sys, 0.0, &y, dt / 10.0)?;
        }
        xs.push(MonopoleState::from_state(&y).x);
    }
    Ok((xs, (0..nodes).map(|j| j as f64 * dt).collect()))
}

fn main() -> Result<()> {
    let params = MonopoleParams::new(1.0, 0.8)?;
    let eg = 4.0 * PI * params.n;
    println!(
        "unit on the sphere: {:.6} (−eg = {:.6})",
        weil_unit(&icosphere(5, Vec3::zeros(), 1.0), eg)?,
        -eg
    );

    for (nodes, dt) in [(30, 2e-2), (60, 1e-2), (120, 5e-3)] {
        let (c, t) = orbit(nodes, dt, &params)?;
        println!(
            "Δt = {dt}: Euler–Lagrange residual {:.2e}",
            euler_lagrange_residual(&c, &t, &params, eg, nodes)?
        );
    }

    let (c, t) = orbit(201, 5e-3, &params)?;
    let a = path_action(&radial_sheet(&c, &t, 200, &REFERENCE_POINT)?, &params, eg)?;
    let b = path_action(
        &geodesic_cap_sheet(&c, &t, 200, &REFERENCE_POINT)?,
        &params,
        eg,
    )?;
    println!(
        "radial sheet {a:.6}, cap sheet {b:.6}, difference / eg = {:.5}",
        (a - b) / eg
    );
    Ok(())
}
