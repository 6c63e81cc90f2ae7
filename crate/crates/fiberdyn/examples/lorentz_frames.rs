//! Lorentz frames as the configuration of a relativistic top: momentum,
//! spin tensor and Pauli–Lubanski vector read off the frame columns.

use fiberdyn::Vec4;
use fiberdyn::dynamics::{TopState, mass_shell_residuals, relfree_step};
use fiberdyn::liealg::{
    contract_momentum, frame_momentum, frame_spin, half_square, lorentz_exp, mdot,
};

fn main() {
    let (m, lambda) = (1.3, 0.7);
    let frame = lorentz_exp(&[0.4, -0.2, 0.9, 0.3, 0.1, -0.6]);
    let p = frame_momentum(&frame, m);
    let s = frame_spin(&frame, lambda);
    println!("p = {:?}", p.as_slice());
    println!("p·p + m² = {:.1e}", mdot(&p, &p) + m * m);
    println!("½ S·S − λ² = {:.1e}", half_square(&s) - lambda * lambda);
    println!("max |p_a S^ab| = {:.1e}", contract_momentum(&p, &s).amax());

    let mut g = frame;
    for k in 0..1000 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        g = lorentz_exp(&[0.05 * sign, 0.02, -0.03 * sign, 0.03, 0.0, 0.01]).compose(&g);
    }
    println!("metric defect after 1000 compositions {:.1e}", g.defect());

    let top = TopState {
        z: Vec4::new(0.0, 1.0, 0.0, 0.0),
        frame,
    };
    let w0 = top.pauli_lubanski(m, lambda);
    let later = relfree_step(&top, 5.0);
    println!(
        "free flight: W change {:.1e}, shell residuals {:?}",
        (later.pauli_lubanski(m, lambda) - w0).amax(),
        mass_shell_residuals(&later, m, lambda)
    );
}
