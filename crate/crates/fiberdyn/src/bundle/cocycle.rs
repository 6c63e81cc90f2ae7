use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::patches::{PatchCover, PatchId};
use crate::liealg::{Su2Vector, su2_log};
use crate::{Error, Result};

/// Tolerance on the distance of each `n_{αβγ}` from an integer.
pub const INTEGRALITY_TOL: f64 = 1e-6;

/// Tolerance on `|g_{αβ} g_{βγ} g_{γα} − 1|`.
pub const U1_TOL: f64 = 1e-9;

/// Body-frame `z` rate `ω₃` of `s⁻¹ ds` along `u`, by central differences of the section.
pub fn section_body_rate(
    cover: &PatchCover,
    id: PatchId,
    xhat: &Su2Vector,
    u: &Su2Vector,
) -> Result<f64> {
    let h = 1e-5;
    let plus = cover.section(id, &(xhat + u * h).normalize())?;
    let minus = cover.section(id, &(xhat - u * h).normalize())?;
    let s = cover.section(id, xhat)?;
    let dp = su2_log(&(s.inverse() * plus));
    let dm = su2_log(&(s.inverse() * minus));
    Ok((dp[2] - dm[2]) / (2.0 * h))
}

/// Total monopole charge seen by the cover sphere; each charge sits at the
/// cover's centre, so only the sum enters the potentials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonopoleField {
    pub charges: Vec<f64>,
}

impl MonopoleField {
    pub fn single(n: f64) -> Self {
        MonopoleField { charges: vec![n] }
    }

    pub fn total(&self) -> f64 {
        self.charges.iter().sum()
    }
}

/// Pairwise functions `f_{αβ}` with `Θ_α − Θ_β = df_{αβ}` on each overlap.
pub trait PairwiseFunctions {
    fn f(&self, a: PatchId, b: PatchId, xhat: &Su2Vector) -> Result<f64>;
}

/// `f_{αβ}` built by integrating `Θ_α − Θ_β` along the great-circle arc from
/// a fixed anchor in the overlap. The constant at the anchor is `n θ_{αβ}`,
/// the value fixed by the sections' transition function.
pub struct LineIntegrated<'a> {
    cover: &'a PatchCover,
    n: f64,
    nodes: usize,
}

impl<'a> LineIntegrated<'a> {
    pub fn new(cover: &'a PatchCover, field: &MonopoleField) -> Self {
        LineIntegrated {
            cover,
            n: field.total(),
            nodes: 64,
        }
    }

    /// Anchor: normalised midpoint of the two patch centres.
    pub fn anchor(&self, a: PatchId, b: PatchId) -> Result<Su2Vector> {
        let (pa, pb) = (self.cover.patch(a)?, self.cover.patch(b)?);
        let mid = pa.center + pb.center;
        if mid.norm() < 1e-12 {
            // antipodal centres: any point on the common great circle
            let t = pa.center.cross(&Su2Vector::x());
            let t = if t.norm() < 1e-6 {
                pa.center.cross(&Su2Vector::y())
            } else {
                t
            };
            return Ok(t.normalize());
        }
        Ok(mid.normalize())
    }

    fn theta_difference(&self, a: PatchId, b: PatchId, x: &Su2Vector) -> Result<Su2Vector> {
        Ok(self.cover.potential(a, x, self.n)? - self.cover.potential(b, x, self.n)?)
    }

    /// `∫ (Θ_α − Θ_β)` along the shorter great-circle arc from `p` to `q`.
    pub fn arc_integral(
        &self,
        a: PatchId,
        b: PatchId,
        p: &Su2Vector,
        q: &Su2Vector,
    ) -> Result<f64> {
        let axis = p.cross(q);
        let angle = axis.norm().atan2(p.dot(q));
        if angle < 1e-15 {
            return Ok(0.0);
        }
        let k = axis.normalize();
        let perp = k.cross(p);
        // composite Simpson in the arc angle
        let m = 2 * self.nodes;
        let h = angle / m as f64;
        let mut acc = 0.0;
        for i in 0..=m {
            let t = h * i as f64;
            let x = p * t.cos() + perp * t.sin();
            let dx = perp * t.cos() - p * t.sin();
            let w = if i == 0 || i == m {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * self.theta_difference(a, b, &x)?.dot(&dx);
        }
        Ok(acc * h / 3.0)
    }
}

impl PairwiseFunctions for LineIntegrated<'_> {
    fn f(&self, a: PatchId, b: PatchId, xhat: &Su2Vector) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        let anchor = self.anchor(a, b)?;
        let base = self.n * self.cover.transition_angle(a, b, &anchor)?;
        Ok(base + self.arc_integral(a, b, &anchor, xhat)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleRecord {
    pub patches: [PatchId; 3],
    pub points: [f64; 3],
    pub n_abc: f64,
    pub integer: i64,
    pub deviation: f64,
    pub u1_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleReport {
    pub cover_id: String,
    pub lambda_w: f64,
    pub triples: Vec<TripleRecord>,
    pub max_deviation: f64,
    pub max_u1_defect: f64,
    /// Set when some `n_{αβγ}` misses an integer by more than the tolerance.
    pub violation: bool,
}

impl CocycleReport {
    pub fn integers(&self) -> Vec<i64> {
        self.triples.iter().map(|t| t.integer).collect()
    }
}

/// Seeded sample points lying in the triple overlap of each patch triple.
pub fn triple_points(
    cover: &PatchCover,
    per_triple: usize,
    seed: u64,
) -> Vec<([PatchId; 3], Su2Vector)> {
    let ids = cover.ids();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for i in 0..ids.len() {
        for j in (i + 1)..ids.len() {
            for k in (j + 1)..ids.len() {
                let tri = [ids[i], ids[j], ids[k]];
                let ps: Vec<_> = tri
                    .iter()
                    .map(|id| cover.patch(*id).expect("listed"))
                    .collect();
                let c = ps[0].center + ps[1].center + ps[2].center;
                if c.norm() < 1e-12 {
                    continue;
                }
                let c = c.normalize();
                if !ps.iter().all(|p| p.contains(&c)) {
                    continue;
                }
                let mut found = 0;
                let mut tries = 0;
                while found < per_triple && tries < 200 * per_triple.max(1) {
                    tries += 1;
                    let jitter = Su2Vector::new(
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                    ) * 0.15;
                    let x = (c + jitter).normalize();
                    if ps.iter().all(|p| p.contains(&x)) {
                        out.push((tri, x));
                        found += 1;
                    }
                }
            }
        }
    }
    out
}

/// `n_{αβγ} = (f_{αβ} + f_{βγ} + f_{γα}) / (2π λ_w)` at each sampled triple point.
pub fn cocycle_integers(
    cover: &PatchCover,
    f: &dyn PairwiseFunctions,
    lambda_w: f64,
    samples: &[([PatchId; 3], Su2Vector)],
) -> Result<CocycleReport> {
    if lambda_w == 0.0 || !lambda_w.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "lambda_w must be finite and nonzero, got {lambda_w}"
        )));
    }
    let mut triples = Vec::with_capacity(samples.len());
    for (tri, x) in samples {
        let [a, b, c] = *tri;
        let fab = f.f(a, b, x)?;
        let fbc = f.f(b, c, x)?;
        let fca = f.f(c, a, x)?;
        let sum = fab + fbc + fca;
        let n_abc = sum / (2.0 * PI * lambda_w);
        let integer = n_abc.round();
        // product of g = exp(i f / λ_w) around the triple
        let phase = sum / lambda_w;
        let u1_defect = ((phase.cos() - 1.0).powi(2) + phase.sin().powi(2)).sqrt();
        triples.push(TripleRecord {
            patches: *tri,
            points: [x[0], x[1], x[2]],
            n_abc,
            integer: integer as i64,
            deviation: (n_abc - integer).abs(),
            u1_defect,
        });
    }
    let max_deviation = triples.iter().map(|t| t.deviation).fold(0.0, f64::max);
    let max_u1_defect = triples.iter().map(|t| t.u1_defect).fold(0.0, f64::max);
    Ok(CocycleReport {
        cover_id: cover.id.clone(),
        lambda_w,
        triples,
        max_deviation,
        max_u1_defect,
        violation: max_deviation > INTEGRALITY_TOL,
    })
}

/// Group element check used by tests: `s_b⁻¹ s_a` against the transition angle.
pub fn transition_defect(
    cover: &PatchCover,
    a: PatchId,
    b: PatchId,
    xhat: &Su2Vector,
) -> Result<f64> {
    let th = cover.transition_angle(a, b, xhat)?;
    let g = cover.section(b, xhat)?.inverse() * cover.section(a, xhat)?;
    let e = crate::liealg::su2_exp(&Su2Vector::new(0.0, 0.0, -th))?;
    Ok(g.distance(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_patch_cover_has_no_triples() {
        let cover = PatchCover::two_patch();
        let pts = triple_points(&cover, 5, 1);
        assert!(pts.is_empty());
        let f = LineIntegrated::new(&cover, &MonopoleField::single(1.0));
        let r = cocycle_integers(&cover, &f, 2.0, &pts).unwrap();
        assert!(r.integers().is_empty());
        assert!(cocycle_integers(&cover, &f, 0.0, &pts).is_err());
    }

    #[test]
    fn potential_is_section_connection() {
        let cover = PatchCover::four_caps();
        let n = 1.0;
        let x = (cover.patches()[2].center + Su2Vector::new(0.1, 0.2, -0.05)).normalize();
        let u = x.cross(&Su2Vector::new(0.3, -0.7, 0.2)).normalize();
        let a = cover.potential(PatchId::Cap(2), &x, n).unwrap();
        let rate = section_body_rate(&cover, PatchId::Cap(2), &x, &u).unwrap();
        assert!((a.dot(&u) + n * rate).abs() < 1e-9);
    }

    #[test]
    fn four_cap_cocycle_is_integral() {
        let cover = PatchCover::four_caps();
        let field = MonopoleField::single(1.0);
        let f = LineIntegrated::new(&cover, &field);
        let pts = triple_points(&cover, 3, 7);
        assert_eq!(pts.len(), 12);
        let r = cocycle_integers(&cover, &f, 2.0, &pts).unwrap();
        assert!(!r.violation, "{r:?}");
        assert!(r.max_u1_defect < U1_TOL);
    }
}
