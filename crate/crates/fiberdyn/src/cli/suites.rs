//! Seeded verification batteries behind `check --suite NAME`.

use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bundle::{
    INTEGRALITY_TOL, LineIntegrated, MonopoleField, PatchCover, cocycle_integers,
    equatorial_winding, triple_points,
};
use crate::canonical::{Chart, bracket_suite};
use crate::dynamics::{MonopoleParams, TopState, relfree_step};
use crate::fluxaction::{FluxReport, PhaseSpaceForm, flux, icosphere, quantization_check};
use crate::grassmann::{
    GrassmannElement, PolarForm, polar_residual, polar_xi, precession_consistency,
};
use crate::liealg::{
    GroupPoint, Su2Vector, contract_momentum, frame_momentum, frame_spin, half_square, lorentz_exp,
    mdot, rotate_vector, su2_exp, total_angular_momentum,
};
use crate::{Result, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identities,
    Brackets,
    Grassmann,
    Cocycle,
    Flux,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Identities,
        Suite::Brackets,
        Suite::Grassmann,
        Suite::Cocycle,
        Suite::Flux,
    ];

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Brackets => "brackets",
            Suite::Grassmann => "grassmann",
            Suite::Cocycle => "cocycle",
            Suite::Flux => "flux",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckItem {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub passed: bool,
}

impl CheckItem {
    pub fn new(name: &str, residual: f64, tolerance: f64, samples: usize) -> Self {
        CheckItem {
            name: name.into(),
            residual,
            tolerance,
            samples,
            passed: residual <= tolerance,
        }
    }

    /// Pass/fail item for a yes/no property; residual is 0 or 1.
    pub fn flag(name: &str, ok: bool) -> Self {
        CheckItem {
            name: name.into(),
            residual: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            samples: 1,
            passed: ok,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub items: Vec<CheckItem>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(suite: Suite, seed: u64, items: Vec<CheckItem>) -> Self {
        let passed = items.iter().all(|i| i.passed);
        SuiteReport {
            suite,
            seed,
            items,
            passed,
        }
    }

    pub fn get(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let items = match suite {
        Suite::Identities => identities(seed)?,
        Suite::Brackets => brackets(seed)?,
        Suite::Grassmann => grassmann(seed)?,
        Suite::Cocycle => cocycle(seed)?,
        Suite::Flux => flux_items()?,
    };
    Ok(SuiteReport::new(suite, seed, items))
}

fn random_vec(rng: &mut ChaCha8Rng, scale: f64) -> Vec3 {
    Vec3::new(
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
    )
}

fn random_group_point(rng: &mut ChaCha8Rng) -> Result<GroupPoint> {
    su2_exp(&random_vec(rng, 2.0 * PI))
}

pub const IDENTITY_TOL: f64 = 1e-10;

fn identities(seed: u64) -> Result<Vec<CheckItem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, lambda) = (1.3, 0.7);
    let frames = 1000;
    let (mut shell, mut spin, mut transverse, mut defect, mut flow): (f64, f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..frames {
        let c: [f64; 6] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let f = lorentz_exp(&c);
        let p = frame_momentum(&f, m);
        let s = frame_spin(&f, lambda);
        shell = shell.max((mdot(&p, &p) + m * m).abs());
        spin = spin.max((half_square(&s) - lambda * lambda).abs());
        transverse = transverse.max(contract_momentum(&p, &s).amax());
        let mut g = f;
        for _ in 0..100 {
            let step: [f64; 6] = std::array::from_fn(|_| rng.random_range(-0.1..0.1));
            g = lorentz_exp(&step).compose(&g);
        }
        defect = defect.max(g.defect());
        let top = TopState {
            z: crate::Vec4::new(0.3, -1.0, 0.2, 0.5),
            frame: f,
        };
        let before = total_angular_momentum(&top.z, &p, &s);
        let later = relfree_step(&top, rng.random_range(0.0..10.0));
        let after =
            total_angular_momentum(&later.z, &later.momentum(m), &later.spin_tensor(lambda));
        flow = flow.max((after - before).amax());
    }
    let mut norm: f64 = 0.0;
    let mut hom: f64 = 0.0;
    for _ in 0..frames {
        let (a, b) = (random_group_point(&mut rng)?, random_group_point(&mut rng)?);
        let mut q = a;
        for _ in 0..100 {
            q = q * b;
        }
        norm = norm.max((q.q().iter().map(|c| c * c).sum::<f64>() - 1.0).abs());
        let u: Su2Vector = random_vec(&mut rng, 1.0);
        hom = hom
            .max((rotate_vector(&(a * b), &u) - rotate_vector(&a, &rotate_vector(&b, &u))).amax());
    }
    Ok(vec![
        CheckItem::new("momentum_shell", shell, IDENTITY_TOL, frames),
        CheckItem::new("spin_square", spin, IDENTITY_TOL, frames),
        CheckItem::new("momentum_spin_transverse", transverse, IDENTITY_TOL, frames),
        CheckItem::new("lorentz_defect_after_100", defect, IDENTITY_TOL, frames),
        CheckItem::new("free_flow_angular_momentum", flow, IDENTITY_TOL, frames),
        CheckItem::new("quaternion_norm_after_100", norm, 1e-12, frames),
        CheckItem::new("rotation_homomorphism", hom, 1e-12, frames),
    ])
}

fn brackets(seed: u64) -> Result<Vec<CheckItem>> {
    let (n, lambda) = (1.0, 0.5);
    let report = bracket_suite(&Chart::default(), 100, seed, n, lambda)?;
    let mut items: Vec<CheckItem> = report
        .identities
        .iter()
        .map(|r| CheckItem {
            name: r.name.clone(),
            residual: r.max_residual,
            tolerance: r.tolerance,
            samples: r.samples,
            passed: r.passed,
        })
        .collect();
    let coarse = bracket_suite(&Chart { h: 1e-5 }, 10, seed, n, lambda)?;
    let fine = bracket_suite(&Chart { h: 5e-6 }, 10, seed, n, lambda)?;
    for name in ["n_matrix_relation", "t_s_bracket", "t_t_bracket"] {
        if let (Some(a), Some(b)) = (coarse.get(name), fine.get(name)) {
            // Ratio of residuals when h halves; second order gives 4.
            let ratio = a.max_residual / b.max_residual;
            items.push(CheckItem::new(
                &format!("{name}_halving_ratio_minus_4"),
                (ratio - 4.0).abs(),
                1.0,
                10,
            ));
        }
    }
    Ok(items)
}

pub const GRASSMANN_TOL: f64 = 1e-12;

fn grassmann(seed: u64) -> Result<Vec<CheckItem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = 100;
    let (mut prec, mut perp, mut cross): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..samples {
        let f: [GrassmannElement; 3] = [
            GrassmannElement::random(6, true, &mut rng)?,
            GrassmannElement::random(6, true, &mut rng)?,
            GrassmannElement::random(6, true, &mut rng)?,
        ];
        let b = random_vec(&mut rng, 2.0);
        let mu = rng.random_range(-2.0..2.0);
        prec = prec.max(precession_consistency(&b, mu, &f)?);
        let xhat = random_vec(&mut rng, 1.0).normalize();
        let (r, m) = (rng.random_range(0.5..3.0), rng.random_range(0.5..3.0));
        let xi = polar_xi(&xhat, &f, r, m, PolarForm::Perpendicular)?;
        perp = perp.max(polar_residual(&xhat, &f, &xi, r, m));
        let xi = polar_xi(&xhat, &f, r, m, PolarForm::Cross)?;
        cross = cross.max(polar_residual(&xhat, &f, &xi, r, m));
    }
    Ok(vec![
        CheckItem::new("precession_consistency", prec, GRASSMANN_TOL, samples),
        CheckItem::new("polar_identity_perpendicular", perp, GRASSMANN_TOL, samples),
        CheckItem::new("polar_identity_cross", cross, GRASSMANN_TOL, samples),
    ])
}

/// Cocycle integers on a cover; returns the report items.
pub fn cocycle_items(
    cover: &PatchCover,
    n: f64,
    lambda_w: f64,
    per_triple: usize,
    seed: u64,
) -> Result<Vec<CheckItem>> {
    let field = MonopoleField::single(n);
    let f = LineIntegrated::new(cover, &field);
    let samples = triple_points(cover, per_triple, seed);
    let report = cocycle_integers(cover, &f, lambda_w, &samples)?;
    let mut items = vec![
        CheckItem::new(
            &format!("{}_integrality", cover.id),
            report.max_deviation,
            INTEGRALITY_TOL,
            samples.len(),
        ),
        CheckItem::flag(&format!("{}_sampled", cover.id), !samples.is_empty()),
    ];
    let winding = equatorial_winding(n, 720)?;
    let expected = (2.0 * n).round() as i64;
    items.push(CheckItem {
        name: "equatorial_winding_minus_2n".into(),
        residual: winding
            .map(|w| (w - expected).abs() as f64)
            .unwrap_or(f64::INFINITY),
        tolerance: 0.0,
        samples: 720,
        passed: winding == Some(expected),
    });
    Ok(items)
}

fn cocycle(seed: u64) -> Result<Vec<CheckItem>> {
    cocycle_items(&PatchCover::four_caps(), 1.0, 2.0, 20, seed)
}

pub const FLUX_REL_TOL: f64 = 1e-3;
pub const FLUX_ABS_TOL: f64 = 1e-6;

fn flux_items() -> Result<Vec<CheckItem>> {
    let n = 1.0;
    let form = PhaseSpaceForm {
        params: MonopoleParams::new(1.0, n)?,
    };
    let sphere = icosphere(5, Vec3::zeros(), 1.0);
    let enclosing = FluxReport::compare(
        &sphere,
        flux(&form, &sphere)?,
        -4.0 * PI * n,
        FLUX_REL_TOL,
        true,
    );
    let away = icosphere(5, Vec3::new(3.0, 0.0, 0.0), 1.0);
    let outside = FluxReport::compare(&away, flux(&form, &away)?, 0.0, FLUX_ABS_TOL, false);
    let (upper, lower) = sphere.partition(|c| c[0][2] + c[1][2] + c[2][2] > 0.0);
    let split = flux(&form, &upper)? + flux(&form, &lower)?;
    let additivity = (split - enclosing.flux).abs() / enclosing.flux.abs();
    let irrational = quantization_check(&[1.0, 2f64.sqrt()]);
    let sevenths = quantization_check(&[1.0, 3.0 / 7.0]);
    Ok(vec![
        CheckItem::new(
            "enclosing_sphere_relative",
            enclosing.error,
            FLUX_REL_TOL,
            enclosing.triangles,
        ),
        CheckItem::new(
            "non_enclosing_sphere_absolute",
            outside.error,
            FLUX_ABS_TOL,
            outside.triangles,
        ),
        CheckItem::new("partition_additivity", additivity, 1e-12, 2),
        CheckItem::flag(
            "quantization_1_sqrt2_incommensurable",
            !irrational.commensurable,
        ),
        CheckItem::flag("quantization_1_3_7_commensurable", sevenths.commensurable),
    ])
}
