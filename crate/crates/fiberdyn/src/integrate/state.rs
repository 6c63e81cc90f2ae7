use serde::{Deserialize, Serialize};

use crate::liealg::{GroupPoint, LorentzFrame, Mat4, Su2Vector};

/// A phase point split into flat coordinates and group-valued components.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub flat: Vec<f64>,
    pub su2: Vec<GroupPoint>,
    pub lorentz: Vec<LorentzFrame>,
}

/// Time derivative of a [`State`]. Group velocities are algebra elements
/// acting by left multiplication: `ṡ = X_ω s` for SU(2) and `Λ̇ = ΩΛ` for
/// the Lorentz group.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tangent {
    pub flat: Vec<f64>,
    pub su2: Vec<Su2Vector>,
    pub lorentz: Vec<Mat4>,
}

impl State {
    pub fn flat(flat: Vec<f64>) -> Self {
        State {
            flat,
            ..Default::default()
        }
    }

    /// Every component as one vector: flat, then quaternions, then frames.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.flat.clone();
        for s in &self.su2 {
            v.extend_from_slice(&s.q());
        }
        for l in &self.lorentz {
            v.extend(l.matrix().iter().copied());
        }
        v
    }

    /// Max-abs difference over all components, with `q ~ −q` for SU(2).
    pub fn distance(&self, other: &State) -> f64 {
        let mut d: f64 = 0.0;
        for (a, b) in self.flat.iter().zip(&other.flat) {
            d = d.max((a - b).abs());
        }
        for (a, b) in self.su2.iter().zip(&other.su2) {
            d = d.max(a.distance_projective(b));
        }
        for (a, b) in self.lorentz.iter().zip(&other.lorentz) {
            d = d.max((a.matrix() - b.matrix()).amax());
        }
        d
    }

    /// Worst group-invariant defect: quaternion norm or `ΛᵀηΛ − η`.
    pub fn manifold_defect(&self) -> f64 {
        let a = self.su2.iter().map(|s| s.norm_defect()).fold(0.0, f64::max);
        let b = self.lorentz.iter().map(|l| l.defect()).fold(0.0, f64::max);
        a.max(b)
    }
}

impl Tangent {
    pub fn from_flat(flat: Vec<f64>) -> Self {
        Tangent {
            flat,
            ..Default::default()
        }
    }

    pub fn zeros_like(y: &State) -> Self {
        Tangent {
            flat: vec![0.0; y.flat.len()],
            su2: vec![Su2Vector::zeros(); y.su2.len()],
            lorentz: vec![Mat4::zeros(); y.lorentz.len()],
        }
    }

    pub fn scaled(&self, c: f64) -> Tangent {
        Tangent {
            flat: self.flat.iter().map(|x| x * c).collect(),
            su2: self.su2.iter().map(|x| x * c).collect(),
            lorentz: self.lorentz.iter().map(|x| x * c).collect(),
        }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: f64, other: &Tangent) -> Tangent {
        Tangent {
            flat: self
                .flat
                .iter()
                .zip(&other.flat)
                .map(|(a, b)| a + c * b)
                .collect(),
            su2: self
                .su2
                .iter()
                .zip(&other.su2)
                .map(|(a, b)| a + b * c)
                .collect(),
            lorentz: self
                .lorentz
                .iter()
                .zip(&other.lorentz)
                .map(|(a, b)| a + b * c)
                .collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.flat.iter().all(|x| x.is_finite())
            && self.su2.iter().all(|v| v.iter().all(|x| x.is_finite()))
            && self.lorentz.iter().all(|m| m.iter().all(|x| x.is_finite()))
    }
}
