//! Relativistic spinning top: free motion and spin precession in a constant
//! electromagnetic field.

use serde::{Deserialize, Serialize};

use crate::integrate::{State, System, Tangent};
use crate::liealg::{
    LorentzFrame, Mat4, eta, frame_momentum, frame_spin, lower, mdot, pauli_lubanski,
    total_angular_momentum,
};
use crate::{Error, Result, Vec3, Vec4};

/// Covariant field tensor `F_ab`. Only the homogeneous case can be integrated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum EmField {
    Homogeneous(Mat4),
    /// `F_ab(z) = f0_ab + Σ_c z^c df[c]_ab`.
    Linear {
        f0: Mat4,
        df: [Mat4; 4],
    },
}

impl EmField {
    /// `F_0i = −E_i`, `F_ij = ε_ijk B_k`.
    pub fn from_fields(e: &Vec3, b: &Vec3) -> EmField {
        let mut f = Mat4::zeros();
        for i in 0..3 {
            f[(0, i + 1)] = -e[i];
            f[(i + 1, 0)] = e[i];
        }
        f[(1, 2)] = b[2];
        f[(2, 1)] = -b[2];
        f[(2, 3)] = b[0];
        f[(3, 2)] = -b[0];
        f[(3, 1)] = b[1];
        f[(1, 3)] = -b[1];
        EmField::Homogeneous(f)
    }

    pub fn magnetic(b: &Vec3) -> EmField {
        EmField::from_fields(&Vec3::zeros(), b)
    }

    pub fn tensor(&self) -> Result<Mat4> {
        match self {
            EmField::Homogeneous(f) => Ok(*f),
            EmField::Linear { .. } => Err(Error::UnsupportedRegime(
                "spin precession needs a homogeneous field; the field has a gradient".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BmtParams {
    pub m: f64,
    pub e: f64,
    pub g: f64,
    pub lambda: f64,
    pub field: EmField,
}

impl BmtParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "mass must be positive, got {}",
                self.m
            )));
        }
        let f = self.field.tensor()?;
        if (f + f.transpose()).amax() > 1e-14 * (1.0 + f.amax()) {
            return Err(Error::InvalidField(
                "field tensor is not antisymmetric".into(),
            ));
        }
        Ok(())
    }

    /// Coefficient `c = −eg/4m` multiplying `F_ab S^{ab}` in the Hamiltonian.
    pub fn spin_coupling(&self) -> f64 {
        -self.e * self.g / (4.0 * self.m)
    }
}

/// Position `z` and frame `Λ`: `u = Λe₀`, spin plane `Λe₁ ∧ Λe₂`, spin axis `Λe₃`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopState {
    pub z: Vec4,
    pub frame: LorentzFrame,
}

impl TopState {
    pub fn velocity(&self) -> Vec4 {
        self.frame.column(0)
    }

    pub fn momentum(&self, m: f64) -> Vec4 {
        frame_momentum(&self.frame, m)
    }

    pub fn spin_tensor(&self, lambda: f64) -> Mat4 {
        frame_spin(&self.frame, lambda)
    }

    /// Contravariant Pauli–Lubanski vector.
    pub fn pauli_lubanski(&self, m: f64, lambda: f64) -> Vec4 {
        let p = self.momentum(m);
        let mab = total_angular_momentum(&self.z, &p, &self.spin_tensor(lambda));
        eta() * pauli_lubanski(&mab, &p)
    }

    /// Layout: flat `[z]`, lorentz `[Λ]`.
    pub fn to_state(&self) -> State {
        State {
            flat: self.z.iter().copied().collect(),
            su2: vec![],
            lorentz: vec![self.frame],
        }
    }

    pub fn from_state(y: &State) -> Self {
        TopState {
            z: Vec4::from_column_slice(&y.flat[..4]),
            frame: y.lorentz[0],
        }
    }
}

/// Free top: `p` and `S` are constant, `z` moves along `u`.
pub fn relfree_step(state: &TopState, dtau: f64) -> TopState {
    TopState {
        z: state.z + state.velocity() * dtau,
        frame: state.frame,
    }
}

/// `p·p = −m²` and `W·W = m²λ²` for a free top; returns both residuals.
pub fn mass_shell_residuals(state: &TopState, m: f64, lambda: f64) -> (f64, f64) {
    let p = state.momentum(m);
    let w = state.pauli_lubanski(m, lambda);
    (mdot(&p, &p) + m * m, mdot(&w, &w) - m * m * lambda * lambda)
}

/// `ż = u` and the algebra velocity `Ω` with `Λ̇ = ΩΛ`:
/// `Ω = (ge/2m) F̂ + (e/m)(1 − g/2)(u vᵀη − v uᵀη)`, `F̂ = ηF`, `v = F̂u`.
pub fn bmt_rhs(state: &TopState, p: &BmtParams) -> Result<(Vec4, Mat4)> {
    let f = p.field.tensor()?;
    let fhat = eta() * f;
    let u = state.velocity();
    let v = fhat * u;
    let boost = u * lower(&v).transpose() - v * lower(&u).transpose();
    let omega = fhat * (p.g * p.e / (2.0 * p.m)) + boost * (p.e / p.m * (1.0 - 0.5 * p.g));
    Ok((u, omega))
}

/// Unit spin axis seen in the particle's rest frame, as a spatial vector.
pub fn rest_frame_spin(state: &TopState) -> Vec3 {
    let u = state.velocity();
    let a = state.frame.column(3);
    let g = u[0];
    let us = Vec3::new(u[1], u[2], u[3]);
    let as_ = Vec3::new(a[1], a[2], a[3]);
    // Boost to the rest frame: a_rest = a − a⁰ u/(γ + 1)
    (as_ - us * (a[0] / (g + 1.0))).normalize()
}

pub struct BmtSystem {
    pub params: BmtParams,
}

impl System for BmtSystem {
    fn rhs(&self, _t: f64, y: &State) -> Result<Tangent> {
        let (zdot, omega) = bmt_rhs(&TopState::from_state(y), &self.params)?;
        Ok(Tangent {
            flat: zdot.iter().copied().collect(),
            su2: vec![],
            lorentz: vec![omega],
        })
    }

    fn columns(&self) -> Vec<String> {
        let mut c: Vec<String> = ["z0", "z1", "z2", "z3"].map(String::from).to_vec();
        c.extend(["u0", "u1", "u2", "u3", "a0", "a1", "a2", "a3"].map(String::from));
        c
    }

    fn row(&self, y: &State) -> Vec<f64> {
        let st = TopState::from_state(y);
        let mut r = y.flat.clone();
        r.extend(st.frame.column(0).iter());
        r.extend(st.frame.column(3).iter());
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::lorentz_exp;

    #[test]
    fn lorentz_force_from_field_tensor() {
        let e = Vec3::new(0.3, -0.2, 0.5);
        let b = Vec3::new(-0.4, 0.9, 0.1);
        let p = BmtParams {
            m: 2.0,
            e: 1.5,
            g: 2.7,
            lambda: 1.0,
            field: EmField::from_fields(&e, &b),
        };
        let st = TopState {
            z: Vec4::zeros(),
            frame: lorentz_exp(&[0.3, -0.5, 0.2, 0.1, 0.7, -0.4]),
        };
        let (u, omega) = bmt_rhs(&st, &p).unwrap();
        let du = omega * u;
        let us = Vec3::new(u[1], u[2], u[3]);
        let force = (e * u[0] + us.cross(&b)) * (p.e / p.m);
        assert!((Vec3::new(du[1], du[2], du[3]) - force).amax() < 1e-14);
        assert!((du[0] - p.e / p.m * e.dot(&us)).abs() < 1e-14);
        // Ω is in the algebra: ηΩ antisymmetric.
        let lo = eta() * omega;
        assert!((lo + lo.transpose()).amax() < 1e-14);
    }

    #[test]
    fn gradient_fields_are_rejected() {
        let p = BmtParams {
            m: 1.0,
            e: 1.0,
            g: 2.0,
            lambda: 1.0,
            field: EmField::Linear {
                f0: Mat4::zeros(),
                df: [Mat4::zeros(); 4],
            },
        };
        let st = TopState {
            z: Vec4::zeros(),
            frame: LorentzFrame::identity(),
        };
        assert!(matches!(bmt_rhs(&st, &p), Err(Error::UnsupportedRegime(_))));
    }

    #[test]
    fn free_top_stays_on_shell() {
        let st = TopState {
            z: Vec4::new(0.0, 1.0, 2.0, -1.0),
            frame: lorentz_exp(&[0.8, 0.1, -0.3, 0.5, 0.2, 0.9]),
        };
        let mut s = st.clone();
        for _ in 0..100 {
            s = relfree_step(&s, 0.37);
        }
        let (a, b) = mass_shell_residuals(&s, 1.3, 0.7);
        assert!(a.abs() < 1e-12 && b.abs() < 1e-12, "{a} {b}");
        let w0 = st.pauli_lubanski(1.3, 0.7);
        assert!((s.pauli_lubanski(1.3, 0.7) - w0).amax() < 1e-12);
    }

    #[test]
    fn rest_frame_spin_at_rest() {
        let st = TopState {
            z: Vec4::zeros(),
            frame: lorentz_exp(&[0.0, 0.0, 0.0, 0.0, 0.5, 0.0]),
        };
        let a = st.frame.column(3);
        assert!((rest_frame_spin(&st) - Vec3::new(a[1], a[2], a[3])).amax() < 1e-15);
    }
}
