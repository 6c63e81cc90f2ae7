use serde::{Deserialize, Serialize};

use super::state::{State, Tangent};
use crate::liealg::{GroupPoint, LorentzFrame, Su2Vector, exp_finite, hamilton};
use crate::{Error, Result};

/// A first-order system on a [`State`] layout.
pub trait System {
    fn rhs(&self, t: f64, y: &State) -> Result<Tangent>;

    /// Names of the CSV state columns produced by [`System::row`].
    fn columns(&self) -> Vec<String> {
        Vec::new()
    }

    fn row(&self, y: &State) -> Vec<f64> {
        y.to_vec()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Classical RK4 on the embedded coordinates, then projection.
    Rk4,
    /// Runge–Kutta–Munthe-Kaas of order 4 on the group components.
    LieGroupRk4,
}

fn attach(t: f64, e: Error) -> Error {
    match e {
        Error::Step { .. } => e,
        e => Error::Step {
            t,
            source: Box::new(e),
        },
    }
}

fn eval(sys: &dyn System, t: f64, y: &State) -> Result<Tangent> {
    let k = sys.rhs(t, y).map_err(|e| attach(t, e))?;
    if !k.is_finite() {
        return Err(attach(
            t,
            Error::InvalidField("non-finite derivative".into()),
        ));
    }
    Ok(k)
}

/// Embedded velocity of a quaternion under `ṡ = X_ω s`: `(0, ω/2) ⊗ q`.
fn quaternion_rate(omega: &Su2Vector, s: &GroupPoint) -> [f64; 4] {
    let p = [0.0, 0.5 * omega[0], 0.5 * omega[1], 0.5 * omega[2]];
    hamilton(p, s.q())
}

/// One classical RK4 step. Group components move in their embedding
/// (quaternion components, matrix entries) and are projected afterwards.
pub fn rk4_step(sys: &dyn System, t: f64, y: &State, dt: f64) -> Result<State> {
    let k1 = eval(sys, t, y)?;
    let y2 = embedded_stage_at(y, &[(&k1, y, 0.5 * dt)]);
    let k2 = eval(sys, t + 0.5 * dt, &y2)?;
    let y3 = embedded_stage_at(y, &[(&k2, &y2, 0.5 * dt)]);
    let k3 = eval(sys, t + 0.5 * dt, &y3)?;
    let y4 = embedded_stage_at(y, &[(&k3, &y3, dt)]);
    let k4 = eval(sys, t + dt, &y4)?;
    Ok(embedded_stage_at(
        y,
        &[
            (&k1, y, dt / 6.0),
            (&k2, &y2, dt / 3.0),
            (&k3, &y3, dt / 3.0),
            (&k4, &y4, dt / 6.0),
        ],
    ))
}

/// `y + Σ c_i ẏ(k_i at z_i)` where the embedded slope of each group
/// component is formed at the state the tangent was evaluated at.
fn embedded_stage_at(y: &State, ks: &[(&Tangent, &State, f64)]) -> State {
    let mut out = y.clone();
    for (k, _, c) in ks {
        for (a, b) in out.flat.iter_mut().zip(&k.flat) {
            *a += c * b;
        }
    }
    for i in 0..y.su2.len() {
        let mut q = y.su2[i].q();
        for (k, z, c) in ks {
            let r = quaternion_rate(&k.su2[i], &z.su2[i]);
            for j in 0..4 {
                q[j] += c * r[j];
            }
        }
        out.su2[i] = GroupPoint::normalized(q);
    }
    for i in 0..y.lorentz.len() {
        let mut m = *y.lorentz[i].matrix();
        for (k, z, c) in ks {
            m += k.lorentz[i] * z.lorentz[i].matrix() * *c;
        }
        out.lorentz[i] = LorentzFrame::from_matrix_unchecked(m);
    }
    out
}

/// `dexp⁻¹_u(v) ≈ v − ½[u, v] + (1/12)[u, [u, v]]`, enough for order 4.
fn dexpinv(u: &Tangent, v: &Tangent) -> Tangent {
    let mut out = v.clone();
    for i in 0..v.su2.len() {
        let (a, b) = (u.su2[i], v.su2[i]);
        let c1 = a.cross(&b);
        out.su2[i] = b - c1 * 0.5 + a.cross(&c1) / 12.0;
    }
    for i in 0..v.lorentz.len() {
        let (a, b) = (u.lorentz[i], v.lorentz[i]);
        let c1 = a * b - b * a;
        out.lorentz[i] = b - c1 * 0.5 + (a * c1 - c1 * a) / 12.0;
    }
    out
}

/// `exp(Θ)·y` on group parts, `y + Θ` on flat parts.
fn advance(y: &State, theta: &Tangent) -> State {
    State {
        flat: y.flat.iter().zip(&theta.flat).map(|(a, b)| a + b).collect(),
        su2: y
            .su2
            .iter()
            .zip(&theta.su2)
            .map(|(s, w)| exp_finite(w) * *s)
            .collect(),
        lorentz: y
            .lorentz
            .iter()
            .zip(&theta.lorentz)
            .map(|(l, m)| l.left_exp(m))
            .collect(),
    }
}

/// One Runge–Kutta–Munthe-Kaas step with the classical RK4 tableau.
/// Flat components use the same stages, so mixed states stay order 4.
pub fn liegroup_step(sys: &dyn System, t: f64, y: &State, dt: f64) -> Result<State> {
    let k1 = eval(sys, t, y)?;
    let th2 = k1.scaled(0.5 * dt);
    let k2 = dexpinv(&th2, &eval(sys, t + 0.5 * dt, &advance(y, &th2))?);
    let th3 = k2.scaled(0.5 * dt);
    let k3 = dexpinv(&th3, &eval(sys, t + 0.5 * dt, &advance(y, &th3))?);
    let th4 = k3.scaled(dt);
    let k4 = dexpinv(&th4, &eval(sys, t + dt, &advance(y, &th4))?);
    let theta = k1
        .axpy(2.0, &k2)
        .axpy(2.0, &k3)
        .axpy(1.0, &k4)
        .scaled(dt / 6.0);
    Ok(advance(y, &theta))
}

pub fn step(method: Method, sys: &dyn System, t: f64, y: &State, dt: f64) -> Result<State> {
    match method {
        Method::Rk4 => rk4_step(sys, t, y, dt),
        Method::LieGroupRk4 => liegroup_step(sys, t, y, dt),
    }
}
