//! Local sections of the Hopf bundle on patch covers. Transition functions
//! wind 2n times around the equator and the triple-overlap cocycle is
//! integral when λ_w divides 2n.

use fiberdyn::Result;
use fiberdyn::bundle::{
    LineIntegrated, MonopoleField, PatchCover, PatchId, cocycle_integers, equatorial_winding,
    triple_points,
};
use fiberdyn::liealg::{Su2Vector, hopf_project};

fn main() -> Result<()> {
    let two = PatchCover::two_patch();
    let x = Su2Vector::new(0.6, 0.0, 0.8);
    let s = two.section(PatchId::North, &x)?;
    println!(
        "north section at {x:?}: {:?}, projects to {:?}",
        s.q(),
        hopf_project(&s)
    );
    println!(
        "transition angle N→S at {x:?}: {:.6}",
        two.transition_angle(PatchId::North, PatchId::South, &x)?
    );
    for n in [0.5, 1.0, 1.5, 0.3] {
        println!(
            "n = {n}: equatorial winding {:?}",
            equatorial_winding(n, 720)?
        );
    }

    let cover = PatchCover::four_caps();
    let samples = triple_points(&cover, 5, 3);
    for lambda_w in [2.0, 1.0, 0.7] {
        let r = cocycle_integers(
            &cover,
            &LineIntegrated::new(&cover, &MonopoleField::single(1.0)),
            lambda_w,
            &samples,
        )?;
        println!(
            "λ_w = {lambda_w}: integers {:?}, max deviation {:.1e}",
            r.integers(),
            r.max_deviation
        );
    }
    Ok(())
}
