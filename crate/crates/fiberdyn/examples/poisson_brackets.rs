//! Canonical coordinates (ξ, π) on T*SU(2) in the exponential chart. The
//! momentum functions t_α generate left rotations and close on su(2).

use fiberdyn::Result;
use fiberdyn::canonical::{
    Chart, PhasePoint, bracket_suite, constraint_checks, pi_observable, xi_observable,
};

fn main() -> Result<()> {
    let chart = Chart::default();
    let point = PhasePoint {
        xi: [0.3, -0.7, 0.4],
        pi: [1.1, 0.2, -0.5],
    };
    let t = chart.t_functions(&point)?;
    println!("t = {t:?}");
    let t12 = chart.poisson_bracket(&*chart.t_observable(0), &*chart.t_observable(1), &point)?;
    println!("{{t1, t2}} = {t12:.12}  (t3 = {:.12})", t[2]);
    println!(
        "{{ξ1, π1}} = {}",
        chart.poisson_bracket(&*xi_observable(0), &*pi_observable(0), &point)?
    );

    let c = constraint_checks(&chart, &point, 1.0, 0.5)?;
    println!(
        "φ = {:.4}, max |{{φ, t_i}}| = {:.1e}",
        c.phi, c.rotation_residual
    );

    let report = bracket_suite(&chart, 50, 1, 1.0, 0.5)?;
    for r in &report.identities {
        println!(
            "{:<24} {:.2e} (tolerance {:.0e})",
            r.name, r.max_residual, r.tolerance
        );
    }
    Ok(())
}
