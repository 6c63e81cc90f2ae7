//! Spinning particle with a magnetic moment, in a static field or coupled to
//! a monopole.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use super::monopole::{MonopoleParams, check_radius};
use crate::integrate::{State, System, Tangent};
use crate::liealg::{GroupPoint, hopf_project};
use crate::{Error, Result, Vec3};

/// Static magnetic field with its gradient `g[(i, j)] = ∂_i B_j`.
pub trait MagneticField: Send + Sync {
    fn field(&self, x: &Vec3) -> Result<Vec3>;
    fn gradient(&self, x: &Vec3) -> Result<Matrix3<f64>>;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformField(pub Vec3);

impl MagneticField for UniformField {
    fn field(&self, _x: &Vec3) -> Result<Vec3> {
        Ok(self.0)
    }

    fn gradient(&self, _x: &Vec3) -> Result<Matrix3<f64>> {
        Ok(Matrix3::zeros())
    }
}

/// `B = b0 + g (y, x, 0)`: divergence and curl free.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradientField {
    pub b0: Vec3,
    pub g: f64,
}

impl MagneticField for GradientField {
    fn field(&self, x: &Vec3) -> Result<Vec3> {
        Ok(self.b0 + Vec3::new(x[1], x[0], 0.0) * self.g)
    }

    fn gradient(&self, _x: &Vec3) -> Result<Matrix3<f64>> {
        let mut m = Matrix3::zeros();
        m[(0, 1)] = self.g;
        m[(1, 0)] = self.g;
        Ok(m)
    }
}

/// `B = q x / r³`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoulombField {
    pub q: f64,
    pub r_min: f64,
}

impl MagneticField for CoulombField {
    fn field(&self, x: &Vec3) -> Result<Vec3> {
        let r = check_radius(x, self.r_min)?;
        Ok(x * (self.q / (r * r * r)))
    }

    fn gradient(&self, x: &Vec3) -> Result<Matrix3<f64>> {
        let r = check_radius(x, self.r_min)?;
        let r3 = r * r * r;
        Ok((Matrix3::identity() / r3 - x * x.transpose() * (3.0 / (r3 * r * r))) * self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinParams {
    pub m: f64,
    pub mu: f64,
    /// Spin magnitude, `S = λ hopf(s)`.
    pub lambda: f64,
}

impl SpinParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "mass must be positive, got {}",
                self.m
            )));
        }
        if !self.mu.is_finite() || !self.lambda.is_finite() {
            return Err(Error::InvalidArgument("non-finite spin parameters".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinState {
    pub x: Vec3,
    pub p: Vec3,
    pub s: GroupPoint,
}

impl SpinState {
    pub fn spin(&self, lambda: f64) -> Vec3 {
        hopf_project(&self.s) * lambda
    }

    /// Layout: flat `[x, p]`, su2 `[s]`.
    pub fn to_state(&self) -> State {
        State {
            flat: self.x.iter().chain(self.p.iter()).copied().collect(),
            su2: vec![self.s],
            lorentz: vec![],
        }
    }

    pub fn from_state(y: &State) -> Self {
        let f = &y.flat;
        SpinState {
            x: Vec3::new(f[0], f[1], f[2]),
            p: Vec3::new(f[3], f[4], f[5]),
            s: y.su2[0],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinDerivative {
    pub xdot: Vec3,
    pub pdot: Vec3,
    /// Angular velocity of `s`; the spin obeys `Ṡ = ω × S`.
    pub omega: Vec3,
}

/// `ẋ = p/m`, `ṗ_i = −μ S_j ∂_i B_j`, `ω = μB` so that `Ṡ = μ B × S`.
pub fn spin_rhs(
    state: &SpinState,
    p: &SpinParams,
    field: &dyn MagneticField,
) -> Result<SpinDerivative> {
    let spin = state.spin(p.lambda);
    let b = field.field(&state.x)?;
    let g = field.gradient(&state.x)?;
    Ok(SpinDerivative {
        xdot: state.p / p.m,
        pdot: -(g * spin) * p.mu,
        omega: b * p.mu,
    })
}

/// `p²/2m + μ S·B`.
pub fn spin_energy(state: &SpinState, p: &SpinParams, field: &dyn MagneticField) -> Result<f64> {
    let b = field.field(&state.x)?;
    Ok(state.p.norm_squared() / (2.0 * p.m) + p.mu * state.spin(p.lambda).dot(&b))
}

pub struct SpinSystem<F> {
    pub params: SpinParams,
    pub field: F,
}

fn pack(d: &SpinDerivative) -> Tangent {
    Tangent {
        flat: d.xdot.iter().chain(d.pdot.iter()).copied().collect(),
        su2: vec![d.omega],
        lorentz: vec![],
    }
}

const SPIN_COLUMNS: [&str; 9] = ["x1", "x2", "x3", "p1", "p2", "p3", "S1", "S2", "S3"];

impl<F: MagneticField> System for SpinSystem<F> {
    fn rhs(&self, _t: f64, y: &State) -> Result<Tangent> {
        Ok(pack(&spin_rhs(
            &SpinState::from_state(y),
            &self.params,
            &self.field,
        )?))
    }

    fn columns(&self) -> Vec<String> {
        SPIN_COLUMNS.map(String::from).to_vec()
    }

    fn row(&self, y: &State) -> Vec<f64> {
        let st = SpinState::from_state(y);
        let mut r = y.flat.clone();
        r.extend(st.spin(self.params.lambda).iter());
        r
    }
}

/// Spin of magnitude `lambda` carried by a charge in a monopole field. The
/// moment is fixed at `μ = e/m`, so only `n = eg/4π` enters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinMonopoleParams {
    pub monopole: MonopoleParams,
    pub lambda: f64,
}

/// State layout as for [`SpinState`] with `p` holding the velocity `ẋ`.
///
/// `m ẍ = n x × ẋ / r³ − (n/m) ∇(S·x/r³)`, `Ṡ = (n/m) x/r³ × S`.
pub fn spin_monopole_rhs(state: &SpinState, p: &SpinMonopoleParams) -> Result<SpinDerivative> {
    let MonopoleParams { m, n, r_min } = p.monopole;
    let x = state.x;
    let v = state.p;
    let r = check_radius(&x, r_min)?;
    let r3 = r * r * r;
    let spin = state.spin(p.lambda);
    let grad = spin / r3 - x * (3.0 * spin.dot(&x) / (r3 * r * r));
    let acc = (x.cross(&v) * (n / r3) - grad * (n / m)) / m;
    Ok(SpinDerivative {
        xdot: v,
        pdot: acc,
        omega: x * (n / (m * r3)),
    })
}

/// `J = m x × ẋ + n x̂ + S`.
#[allow(non_snake_case)]
pub fn spin_monopole_J(state: &SpinState, p: &SpinMonopoleParams) -> Result<Vec3> {
    let r = check_radius(&state.x, p.monopole.r_min)?;
    Ok(
        state.x.cross(&state.p) * p.monopole.m
            + state.x * (p.monopole.n / r)
            + state.spin(p.lambda),
    )
}

/// `½ m ẋ² + (n/m) S·x/r³`.
pub fn spin_monopole_energy(state: &SpinState, p: &SpinMonopoleParams) -> Result<f64> {
    let r = check_radius(&state.x, p.monopole.r_min)?;
    let MonopoleParams { m, n, .. } = p.monopole;
    Ok(0.5 * m * state.p.norm_squared()
        + (n / m) * state.spin(p.lambda).dot(&state.x) / (r * r * r))
}

#[derive(Clone, Copy, Debug)]
pub struct SpinMonopoleSystem {
    pub params: SpinMonopoleParams,
}

impl System for SpinMonopoleSystem {
    fn rhs(&self, _t: f64, y: &State) -> Result<Tangent> {
        Ok(pack(&spin_monopole_rhs(
            &SpinState::from_state(y),
            &self.params,
        )?))
    }

    fn columns(&self) -> Vec<String> {
        ["x1", "x2", "x3", "v1", "v2", "v3", "S1", "S2", "S3"]
            .map(String::from)
            .to_vec()
    }

    fn row(&self, y: &State) -> Vec<f64> {
        let st = SpinState::from_state(y);
        let mut r = y.flat.clone();
        r.extend(st.spin(self.params.lambda).iter());
        r
    }
}
