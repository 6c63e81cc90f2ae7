use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::liealg::{GroupPoint, Su2Vector, hopf_project, rotate_vector, su2_exp};
use crate::{Error, Result};

/// Radius of the Dirac-string exclusion zone around a section's singular point.
pub const STRING_EXCLUSION: f64 = 1e-6;

/// Angular radius of the caps in [`PatchCover::four_caps`].
pub const CAP_RADIUS: f64 = 1.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatchId {
    North,
    South,
    Cap(usize),
}

impl fmt::Display for PatchId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatchId::North => write!(f, "N"),
            PatchId::South => write!(f, "S"),
            PatchId::Cap(k) => write!(f, "U{k}"),
        }
    }
}

/// Smooth U(1) regauging `s ↦ s·su2_exp((0, 0, χ(x̂)))` of a patch section.
pub type GaugeFn = Arc<dyn Fn(&Su2Vector) -> f64 + Send + Sync>;

fn check_unit(x: &Su2Vector) -> Result<()> {
    if !x.iter().all(|c| c.is_finite()) || (x.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("not a unit vector: {x:?}")));
    }
    Ok(())
}

/// The section regular everywhere except the south pole:
/// `s = ½{α·1 − (1/α)[σ₃, X̂]}`, `α = √(2(1 + x̂₃))`.
pub fn section_north(xhat: &Su2Vector) -> Result<GroupPoint> {
    check_unit(xhat)?;
    if xhat[2] <= -1.0 + STRING_EXCLUSION {
        return Err(Error::SingularSection([xhat[0], xhat[1], xhat[2]]));
    }
    let alpha = (2.0 * (1.0 + xhat[2])).sqrt();
    // [σ₃, X̂] = 2i(x̂₁σ₂ − x̂₂σ₁)
    GroupPoint::new(0.5 * alpha, -xhat[1] / alpha, xhat[0] / alpha, 0.0)
}

/// The section regular everywhere except the north pole; the north section
/// carried over by a half turn about the x axis.
pub fn section_south(xhat: &Su2Vector) -> Result<GroupPoint> {
    check_unit(xhat)?;
    if xhat[2] >= 1.0 - STRING_EXCLUSION {
        return Err(Error::SingularSection([xhat[0], xhat[1], xhat[2]]));
    }
    PatchCover::two_patch().section(PatchId::South, xhat)
}

#[derive(Clone)]
pub struct Patch {
    pub id: PatchId,
    /// Unit vector at the middle of the patch.
    pub center: Su2Vector,
    /// Membership is `x̂·center > cos_limit`.
    pub cos_limit: f64,
    /// Fixed rotation taking ẑ to `center`.
    frame: GroupPoint,
    gauge: Option<GaugeFn>,
}

impl fmt::Debug for Patch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Patch")
            .field("id", &self.id)
            .field("center", &self.center)
            .field("cos_limit", &self.cos_limit)
            .field("gauged", &self.gauge.is_some())
            .finish()
    }
}

impl Patch {
    pub fn contains(&self, xhat: &Su2Vector) -> bool {
        xhat.dot(&self.center) > self.cos_limit
    }
}

/// A cover of S² by patches, each carrying a local section of the Hopf bundle.
#[derive(Clone, Debug)]
pub struct PatchCover {
    pub id: String,
    patches: Vec<Patch>,
}

fn rotation_to(center: &Su2Vector) -> GroupPoint {
    let z = Su2Vector::z();
    let axis = z.cross(center);
    let s = axis.norm();
    if s < 1e-15 {
        if center[2] > 0.0 {
            return GroupPoint::IDENTITY;
        }
        return su2_exp(&Su2Vector::new(PI, 0.0, 0.0)).expect("finite");
    }
    let angle = s.atan2(center[2]);
    su2_exp(&(axis * (angle / s))).expect("finite")
}

impl PatchCover {
    /// North and south patches, each the sphere minus the opposite pole.
    pub fn two_patch() -> Self {
        let limit = -1.0 + STRING_EXCLUSION;
        PatchCover {
            id: "two-patch".into(),
            patches: vec![
                Patch {
                    id: PatchId::North,
                    center: Su2Vector::z(),
                    cos_limit: limit,
                    frame: GroupPoint::IDENTITY,
                    gauge: None,
                },
                Patch {
                    id: PatchId::South,
                    center: -Su2Vector::z(),
                    cos_limit: limit,
                    frame: su2_exp(&Su2Vector::new(PI, 0.0, 0.0)).expect("finite"),
                    gauge: None,
                },
            ],
        }
    }

    /// Four caps of angular radius [`CAP_RADIUS`] centred on the vertices of
    /// a regular tetrahedron; every triple of caps overlaps.
    pub fn four_caps() -> Self {
        let k = 1.0 / 3f64.sqrt();
        let centers = [
            Su2Vector::new(k, k, k),
            Su2Vector::new(k, -k, -k),
            Su2Vector::new(-k, k, -k),
            Su2Vector::new(-k, -k, k),
        ];
        let patches = centers
            .iter()
            .enumerate()
            .map(|(i, c)| Patch {
                id: PatchId::Cap(i),
                center: *c,
                cos_limit: CAP_RADIUS.cos(),
                frame: rotation_to(c),
                gauge: None,
            })
            .collect();
        PatchCover {
            id: "tetrahedral-caps".into(),
            patches,
        }
    }

    /// Same cover with the section of `id` regauged by χ.
    pub fn with_gauge(mut self, id: PatchId, chi: GaugeFn) -> Result<Self> {
        let p = self.patch_mut(id)?;
        p.gauge = Some(chi);
        self.id = format!("{}+gauge", self.id);
        Ok(self)
    }

    pub fn patches(&self) -> &[Patch] {
        &self.patches
    }

    pub fn ids(&self) -> Vec<PatchId> {
        self.patches.iter().map(|p| p.id).collect()
    }

    pub fn patch(&self, id: PatchId) -> Result<&Patch> {
        self.patches
            .iter()
            .find(|p| p.id == id)
            .ok_or_else(|| Error::Domain(format!("patch {id} is not part of cover {}", self.id)))
    }

    fn patch_mut(&mut self, id: PatchId) -> Result<&mut Patch> {
        let cover = self.id.clone();
        self.patches
            .iter_mut()
            .find(|p| p.id == id)
            .ok_or_else(|| Error::Domain(format!("patch {id} is not part of cover {cover}")))
    }

    /// Patches containing `xhat`.
    pub fn members(&self, xhat: &Su2Vector) -> Vec<PatchId> {
        self.patches
            .iter()
            .filter(|p| p.contains(xhat))
            .map(|p| p.id)
            .collect()
    }

    /// The local section `s_α(x̂) = R_α s_N(R_α⁻¹ x̂) su2_exp((0, 0, χ_α(x̂)))`.
    pub fn section(&self, id: PatchId, xhat: &Su2Vector) -> Result<GroupPoint> {
        check_unit(xhat)?;
        let p = self.patch(id)?;
        let local = rotate_vector(&p.frame.inverse(), xhat);
        let mut s = p.frame * section_north(&local).map_err(|_| singular(xhat))?;
        if let Some(chi) = &p.gauge {
            s = s * su2_exp(&Su2Vector::new(0.0, 0.0, chi(xhat)))?;
        }
        Ok(s)
    }

    /// Potential 1-form `A_α` of a charge-`n` monopole in the gauge of patch α,
    /// as the coefficient vector with `A·dx̂` the form.
    ///
    /// On the north patch this is `n ε_{3ij} x̂_i dx̂_j / (1 + x̂₃)`; every patch
    /// potential equals `−i n Tr[σ₃ s_α⁻¹ ds_α]` for its section.
    pub fn potential(&self, id: PatchId, xhat: &Su2Vector, n: f64) -> Result<Su2Vector> {
        check_unit(xhat)?;
        let p = self.patch(id)?;
        let local = rotate_vector(&p.frame.inverse(), xhat);
        if local[2] <= -1.0 + STRING_EXCLUSION {
            return Err(singular(xhat));
        }
        let a_local = Su2Vector::new(-local[1], local[0], 0.0) * (n / (1.0 + local[2]));
        let mut a = rotate_vector(&p.frame, &a_local);
        if let Some(chi) = &p.gauge {
            a -= tangential_gradient(chi.as_ref(), xhat) * n;
        }
        Ok(a)
    }

    /// θ with `s_a(x̂) = s_b(x̂)·su2_exp((0, 0, −θ))`, in (−2π, 2π].
    pub fn transition_angle(&self, a: PatchId, b: PatchId, xhat: &Su2Vector) -> Result<f64> {
        let (pa, pb) = (self.patch(a)?, self.patch(b)?);
        if !(pa.contains(xhat) && pb.contains(xhat)) {
            return Err(Error::Domain(format!(
                "{xhat:?} is outside the overlap of {a} and {b}"
            )));
        }
        if a == b {
            return Ok(0.0);
        }
        let g = self.section(b, xhat)?.inverse() * self.section(a, xhat)?;
        let q = g.q();
        let theta = 2.0 * (-q[3]).atan2(q[0]);
        Ok(if theta <= -2.0 * PI {
            theta + 4.0 * PI
        } else {
            theta
        })
    }

    /// Largest `|hopf_project(s_α(x̂)) − x̂|` over the given samples.
    pub fn section_defect(&self, samples: &[Su2Vector]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for x in samples {
            for id in self.members(x) {
                let s = self.section(id, x)?;
                worst = worst.max((hopf_project(&s) - x).amax());
            }
        }
        Ok(worst)
    }

    /// Samples not covered by any patch.
    pub fn uncovered(&self, samples: &[Su2Vector]) -> Vec<Su2Vector> {
        samples
            .iter()
            .filter(|x| self.members(x).is_empty())
            .copied()
            .collect()
    }
}

fn singular(x: &Su2Vector) -> Error {
    Error::SingularSection([x[0], x[1], x[2]])
}

fn tangential_gradient(f: &(dyn Fn(&Su2Vector) -> f64 + Send + Sync), x: &Su2Vector) -> Su2Vector {
    let h = 1e-6;
    let mut g = Su2Vector::zeros();
    for k in 0..3 {
        let mut e = Su2Vector::zeros();
        e[k] = h;
        g[k] = (f(&(x + e).normalize()) - f(&(x - e).normalize())) / (2.0 * h);
    }
    g - x * x.dot(&g)
}

/// Coefficients `A_i` of the potential on the standard two-patch cover.
pub fn local_potential(patch: PatchId, xhat: &Su2Vector, n: f64) -> Result<Su2Vector> {
    match patch {
        PatchId::North | PatchId::South => PatchCover::two_patch().potential(patch, xhat, n),
        PatchId::Cap(_) => PatchCover::four_caps().potential(patch, xhat, n),
    }
}

/// Transition angle on the standard two-patch cover.
pub fn transition_angle(a: PatchId, b: PatchId, xhat: &Su2Vector) -> Result<f64> {
    match (a, b) {
        (PatchId::Cap(_), _) | (_, PatchId::Cap(_)) => {
            PatchCover::four_caps().transition_angle(a, b, xhat)
        }
        _ => PatchCover::two_patch().transition_angle(a, b, xhat),
    }
}

/// Winding number of the charge-`n` transition function `exp(i n θ_NS)`
/// around the equator, traversed with increasing azimuth.
///
/// Returns `None` when `2n` is not an integer, since the transition function
/// is then not single valued on the loop.
pub fn equatorial_winding(n: f64, samples: usize) -> Result<Option<i64>> {
    let cover = PatchCover::two_patch();
    let samples = samples.max(8);
    let point = |k: usize| {
        let phi = 2.0 * PI * (k as f64) / (samples as f64);
        Su2Vector::new(phi.cos(), phi.sin(), 0.0)
    };
    let mut prev = cover.transition_angle(PatchId::North, PatchId::South, &point(0))?;
    let mut total = 0.0;
    for k in 1..=samples {
        let th = cover.transition_angle(PatchId::North, PatchId::South, &point(k % samples))?;
        let mut d = th - prev;
        // θ is defined mod 4π
        while d > 2.0 * PI {
            d -= 4.0 * PI;
        }
        while d <= -2.0 * PI {
            d += 4.0 * PI;
        }
        total += d;
        prev = th;
    }
    let turns = n * total / (2.0 * PI);
    if ((2.0 * n) - (2.0 * n).round()).abs() > 1e-9 {
        return Ok(None);
    }
    Ok(Some(turns.round() as i64))
}
