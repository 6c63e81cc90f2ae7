//! Relativistic particle on spacetime × SU(2) with Lagrangian `−m √Q`,
//! `Q = −ẋ² − λ Tr[(s⁻¹ṡ)²]`, and its coupling to a static gauge background.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::wong::GaugeBackground;
use crate::integrate::{State, System, Tangent};
use crate::liealg::{GroupPoint, mdot, rotate_vector, su2_exp};
use crate::{Error, Result, Vec3, Vec4};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KkParams {
    pub m: f64,
    pub lambda: f64,
}

impl KkParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "mass must be positive, got {}",
                self.m
            )));
        }
        if self.lambda == 0.0 || !self.lambda.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "lambda must be finite and nonzero, got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// `s⁻¹ṡ = X_ω` with `ω` the body angular velocity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KkState {
    pub x: Vec4,
    pub xdot: Vec4,
    pub s: GroupPoint,
    pub omega: Vec3,
}

/// `Q = −ẋ² + λ|ω|²/2`.
pub fn kk_q(state: &KkState, p: &KkParams) -> f64 {
    -mdot(&state.xdot, &state.xdot) + 0.5 * p.lambda * state.omega.norm_squared()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KkMomenta {
    /// Covariant `p_a = ∂L/∂ẋ^a = m ẋ_a / √Q`.
    pub p: Vec4,
    /// `I_α = −(mλ / √(2Q)) (s ω s⁻¹)_α`.
    pub isospin: Vec3,
}

pub fn kk_momenta(state: &KkState, p: &KkParams) -> Result<KkMomenta> {
    p.validate()?;
    let q = kk_q(state, p);
    if !(q > 0.0) {
        return Err(Error::InconsistentSystem(format!(
            "Q = {q} is not positive; the Lagrangian is not real"
        )));
    }
    let sq = q.sqrt();
    let mut lowered = state.xdot;
    lowered[0] = -lowered[0];
    Ok(KkMomenta {
        p: lowered * (p.m / sq),
        isospin: rotate_vector(&state.s, &state.omega) * (-p.m * p.lambda / (SQRT_2 * sq)),
    })
}

/// `p² − I·I/λ + m²`, zero on every physical state.
pub fn kk_identity_residual(mom: &KkMomenta, p: &KkParams) -> f64 {
    let p2 = -mom.p[0] * mom.p[0] + mom.p[1] * mom.p[1] + mom.p[2] * mom.p[2] + mom.p[3] * mom.p[3];
    p2 - mom.isospin.norm_squared() / p.lambda + p.m * p.m
}

/// Effective four-dimensional mass squared `m² − I·I/λ`.
pub fn kk_mass_squared(isospin: &Vec3, p: &KkParams) -> f64 {
    p.m * p.m - isospin.norm_squared() / p.lambda
}

/// Free motion: straight line in spacetime, constant body angular velocity.
pub fn kk_free_step(state: &KkState, tau: f64) -> Result<KkState> {
    Ok(KkState {
        x: state.x + state.xdot * tau,
        xdot: state.xdot,
        s: state.s * su2_exp(&(state.omega * tau))?,
        omega: state.omega,
    })
}

/// Static background coupled to the internal motion. The proper-time
/// velocity satisfies `u² = −1 + I·I/(m²λ)`.
pub struct KkCoupledSystem<B> {
    pub params: KkParams,
    pub e: f64,
    /// Reference isospin; `I = s K s⁻¹`.
    pub k: Vec3,
    pub background: B,
}

impl<B: GaugeBackground> KkCoupledSystem<B> {
    /// Completes spatial velocity `u` to a four-velocity on the shell.
    /// Layout: flat `[z, u]`, su2 `[s]`.
    pub fn initial(&self, z: Vec4, u: Vec3, s: GroupPoint) -> Result<State> {
        self.params.validate()?;
        let i2 = self.k.norm_squared();
        let u0sq =
            u.norm_squared() + 1.0 - i2 / (self.params.m * self.params.m * self.params.lambda);
        if !(u0sq > 0.0) {
            return Err(Error::InconsistentSystem(format!(
                "isospin too large for the mass: u0² = {u0sq}"
            )));
        }
        let mut flat: Vec<f64> = z.iter().copied().collect();
        flat.push(u0sq.sqrt());
        flat.extend(u.iter());
        Ok(State {
            flat,
            su2: vec![s],
            lorentz: vec![],
        })
    }

    pub fn isospin(&self, y: &State) -> Vec3 {
        rotate_vector(&y.su2[0], &self.k)
    }

    /// `m² u² − I·I/λ + m²`.
    pub fn shell_residual(&self, y: &State) -> f64 {
        let u = Vec4::from_column_slice(&y.flat[4..8]);
        let m = self.params.m;
        m * m * mdot(&u, &u) - self.isospin(y).norm_squared() / self.params.lambda + m * m
    }
}

impl<B: GaugeBackground> System for KkCoupledSystem<B> {
    fn rhs(&self, _t: f64, y: &State) -> Result<Tangent> {
        let x = Vec3::new(y.flat[1], y.flat[2], y.flat[3]);
        let u = Vec3::new(y.flat[5], y.flat[6], y.flat[7]);
        let iso = self.isospin(y);
        let f = self.background.field_strength(&x, self.e)?;
        let a = self.background.potential(&x)?;
        let fi = f[0] * iso[0] + f[1] * iso[1] + f[2] * iso[2];
        let du = -(fi * u) * (self.e / self.params.m);
        let omega = -(a.transpose() * u) * (SQRT_2 * self.e);
        let mut flat: Vec<f64> = y.flat[4..8].to_vec();
        flat.push(0.0);
        flat.extend(du.iter());
        Ok(Tangent {
            flat,
            su2: vec![omega],
            lorentz: vec![],
        })
    }

    fn columns(&self) -> Vec<String> {
        [
            "z0", "z1", "z2", "z3", "u0", "u1", "u2", "u3", "I1", "I2", "I3",
        ]
        .map(String::from)
        .to_vec()
    }

    fn row(&self, y: &State) -> Vec<f64> {
        let mut r = y.flat.clone();
        r.extend(self.isospin(y).iter());
        r
    }
}
