//! Charged particle in the field of a Dirac monopole.

use serde::{Deserialize, Serialize};

use crate::integrate::{State, System, Tangent};
use crate::liealg::{GroupPoint, hopf_project};
use crate::{Error, Result, Vec3};

pub const DEFAULT_R_MIN: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonopoleParams {
    pub m: f64,
    /// `n = eg/4π`.
    pub n: f64,
    pub r_min: f64,
}

impl MonopoleParams {
    pub fn new(m: f64, n: f64) -> Result<Self> {
        let p = MonopoleParams {
            m,
            n,
            r_min: DEFAULT_R_MIN,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0) || !self.m.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "mass must be positive, got {}",
                self.m
            )));
        }
        if !(self.r_min > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "r_min must be positive, got {}",
                self.r_min
            )));
        }
        if !self.n.is_finite() {
            return Err(Error::InvalidArgument(
                "monopole strength must be finite".into(),
            ));
        }
        Ok(())
    }
}

pub(crate) fn check_radius(x: &Vec3, r_min: f64) -> Result<f64> {
    let r = x.norm();
    if !(r >= r_min) {
        return Err(Error::ExclusionZone { r, r_min });
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonopoleState {
    pub x: Vec3,
    pub v: Vec3,
}

impl MonopoleState {
    pub fn new(x: Vec3, v: Vec3) -> Self {
        MonopoleState { x, v }
    }

    /// Layout: flat `[x, v]`.
    pub fn to_state(&self) -> State {
        State::flat(self.x.iter().chain(self.v.iter()).copied().collect())
    }

    pub fn from_state(y: &State) -> Self {
        let f = &y.flat;
        MonopoleState {
            x: Vec3::new(f[0], f[1], f[2]),
            v: Vec3::new(f[3], f[4], f[5]),
        }
    }
}

/// `ẋ = v`, `v̇ = (n/m) x × v / r³`.
pub fn monopole_rhs(state: &MonopoleState, p: &MonopoleParams) -> Result<(Vec3, Vec3)> {
    let r = check_radius(&state.x, p.r_min)?;
    let a = state.x.cross(&state.v) * (p.n / (p.m * r * r * r));
    Ok((state.v, a))
}

/// `J = m x × v + n x̂`.
#[allow(non_snake_case)]
pub fn monopole_J(state: &MonopoleState, p: &MonopoleParams) -> Result<Vec3> {
    let r = check_radius(&state.x, p.r_min)?;
    Ok(state.x.cross(&state.v) * p.m + state.x * (p.n / r))
}

/// `x̂·J`, identically `n`.
pub fn helicity(state: &MonopoleState, p: &MonopoleParams) -> Result<f64> {
    let j = monopole_J(state, p)?;
    Ok(state.x.normalize().dot(&j))
}

#[derive(Clone, Copy, Debug)]
pub struct MonopoleSystem {
    pub params: MonopoleParams,
}

impl System for MonopoleSystem {
    fn rhs(&self, _t: f64, y: &State) -> Result<Tangent> {
        let (dx, dv) = monopole_rhs(&MonopoleState::from_state(y), &self.params)?;
        Ok(Tangent::from_flat(
            dx.iter().chain(dv.iter()).copied().collect(),
        ))
    }

    fn columns(&self) -> Vec<String> {
        ["x1", "x2", "x3", "v1", "v2", "v3"]
            .map(String::from)
            .to_vec()
    }

    fn row(&self, y: &State) -> Vec<f64> {
        y.flat.clone()
    }
}

/// The monopole system lifted to the Hopf bundle: alongside `(x, v)` a group
/// element `s` turns with angular velocity `x × v / r²`, so that
/// `hopf_project(s) = x̂` along the flow.
#[derive(Clone, Copy, Debug)]
pub struct MonopoleLiftSystem {
    pub params: MonopoleParams,
}

impl MonopoleLiftSystem {
    /// Layout: flat `[x, v]`, su2 `[s]`.
    pub fn initial(state: &MonopoleState, s: GroupPoint) -> State {
        let mut y = state.to_state();
        y.su2.push(s);
        y
    }

    /// Largest component of `hopf_project(s) − x̂`.
    pub fn fiber_defect(y: &State) -> f64 {
        let st = MonopoleState::from_state(y);
        (hopf_project(&y.su2[0]) - st.x.normalize()).amax()
    }
}

impl System for MonopoleLiftSystem {
    fn rhs(&self, _t: f64, y: &State) -> Result<Tangent> {
        let st = MonopoleState::from_state(y);
        let (dx, dv) = monopole_rhs(&st, &self.params)?;
        let w = st.x.cross(&st.v) / st.x.norm_squared();
        let mut k = Tangent::from_flat(dx.iter().chain(dv.iter()).copied().collect());
        k.su2.push(w);
        Ok(k)
    }

    fn columns(&self) -> Vec<String> {
        [
            "x1", "x2", "x3", "v1", "v2", "v3", "s_w", "s_a", "s_b", "s_c",
        ]
        .map(String::from)
        .to_vec()
    }
}
