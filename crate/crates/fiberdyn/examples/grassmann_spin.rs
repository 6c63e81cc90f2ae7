//! Pseudoclassical spin: S = −(i/2) f × f built from odd Grassmann
//! generators precesses exactly like a classical moment.

use fiberdyn::Result;
use fiberdyn::Vec3;
use fiberdyn::grassmann::{
    GrassmannElement, polar_identity_check, precession_consistency, spin_bilinear,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let f = [
        GrassmannElement::generator(3, 0)?,
        GrassmannElement::generator(3, 1)?,
        GrassmannElement::generator(3, 2)?,
    ];
    let s = spin_bilinear(&f)?;
    for (a, sa) in s.iter().enumerate() {
        println!(
            "S{} has grade {:?}, θ-monomial coefficients {:?}",
            a + 1,
            sa.grade(),
            sa.coeffs()
                .iter()
                .filter(|c| c.norm() > 0.0)
                .collect::<Vec<_>>()
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = [
        GrassmannElement::random(6, true, &mut rng)?,
        GrassmannElement::random(6, true, &mut rng)?,
        GrassmannElement::random(6, true, &mut rng)?,
    ];
    let b = Vec3::new(0.3, -1.2, 0.8);
    println!(
        "precession residual {:.1e}",
        precession_consistency(&b, 0.7, &f)?
    );
    println!(
        "polar identity residual {:.1e}",
        polar_identity_check(&b.normalize(), &f, 1.7, 0.9)?
    );
    Ok(())
}
