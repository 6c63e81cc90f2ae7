//! Isospin particle in a static SU(2) gauge background.
//!
//! Potentials are stored in components `A_i = A_i^α T_α` with `T = σ/√2`,
//! as a matrix with rows `i` (space) and columns `α` (internal).

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use nalgebra::{Matrix2, Matrix3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::monopole::{MonopoleParams, MonopoleState, MonopoleSystem, check_radius};
use crate::bundle::{section_north, section_south};
use crate::integrate::{State, StepperConfig, System, Tangent, Trajectory, step};
use crate::liealg::{GroupPoint, Su2Vector, rotate_vector, sigma_dot, su2_log};
use crate::{Error, Result, Vec3};

pub type Potential = Matrix3<f64>;

/// `F[γ][(i, j)] = F_ij^γ`.
pub type FieldStrength = [Matrix3<f64>; 3];

pub trait GaugeBackground: Send + Sync {
    fn potential(&self, x: &Vec3) -> Result<Potential>;

    /// `[k] = ∂_k A`.
    fn potential_gradient(&self, x: &Vec3) -> Result<[Potential; 3]>;

    /// `F_ij^γ = ∂_i A_j^γ − ∂_j A_i^γ + √2 e ε_αβγ A_i^α A_j^β`.
    fn field_strength(&self, x: &Vec3, e: f64) -> Result<FieldStrength> {
        let a = self.potential(x)?;
        let da = self.potential_gradient(x)?;
        let mut f = [Matrix3::zeros(); 3];
        for (g, fg) in f.iter_mut().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    let ai = Vec3::new(a[(i, 0)], a[(i, 1)], a[(i, 2)]);
                    let aj = Vec3::new(a[(j, 0)], a[(j, 1)], a[(j, 2)]);
                    fg[(i, j)] = da[i][(j, g)] - da[j][(i, g)] + SQRT_2 * e * ai.cross(&aj)[g];
                }
            }
        }
        Ok(f)
    }
}

/// Static hedgehog `A_i^α = ε_αij x_j / (√2 e r²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hedgehog {
    pub e: f64,
    pub r_min: f64,
}

fn levi(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

impl GaugeBackground for Hedgehog {
    fn potential(&self, x: &Vec3) -> Result<Potential> {
        let r = check_radius(x, self.r_min)?;
        let c = 1.0 / (SQRT_2 * self.e * r * r);
        Ok(Matrix3::from_fn(|i, a| {
            (0..3).map(|j| levi(a, i, j) * x[j]).sum::<f64>() * c
        }))
    }

    fn potential_gradient(&self, x: &Vec3) -> Result<[Potential; 3]> {
        let r = check_radius(x, self.r_min)?;
        let r2 = r * r;
        let c = 1.0 / (SQRT_2 * self.e);
        Ok(std::array::from_fn(|k| {
            Matrix3::from_fn(|i, a| {
                (0..3)
                    .map(|j| {
                        let d = if j == k { 1.0 / r2 } else { 0.0 };
                        levi(a, i, j) * (d - 2.0 * x[j] * x[k] / (r2 * r2))
                    })
                    .sum::<f64>()
                    * c
            })
        }))
    }
}

/// Hedgehog potentials as 2×2 matrices `A_i = ε_αij x_j σ_α / (2e r²)`.
pub fn hedgehog_background(x: &Vec3, e: f64) -> Result<[Matrix2<Complex64>; 3]> {
    let a = Hedgehog {
        e,
        r_min: super::monopole::DEFAULT_R_MIN,
    }
    .potential(x)?;
    Ok(std::array::from_fn(|i| {
        sigma_dot(&(Vec3::new(a[(i, 0)], a[(i, 1)], a[(i, 2)]) / SQRT_2))
    }))
}

/// Abelian embedding `A_i = a_i T₃` of a uniform magnetic field, `a = ½ B × x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbelianUniform {
    pub b: Vec3,
}

impl GaugeBackground for AbelianUniform {
    fn potential(&self, x: &Vec3) -> Result<Potential> {
        let a = self.b.cross(x) * 0.5;
        Ok(Matrix3::from_fn(|i, al| if al == 2 { a[i] } else { 0.0 }))
    }

    fn potential_gradient(&self, _x: &Vec3) -> Result<[Potential; 3]> {
        Ok(std::array::from_fn(|k| {
            let d = self
                .b
                .cross(&Vec3::from_fn(|j, _| if j == k { 1.0 } else { 0.0 }))
                * 0.5;
            Matrix3::from_fn(|i, al| if al == 2 { d[i] } else { 0.0 })
        }))
    }
}

pub type GaugeMap = Arc<dyn Fn(&Vec3) -> GroupPoint + Send + Sync>;

/// `A' = h A h⁻¹ + (i/e) h ∂h⁻¹` for a smooth `h(x)`. Derivatives of `h` and
/// of `A'` are taken with fourth-order central differences.
pub struct GaugeTransformed<B> {
    pub inner: B,
    pub h: GaugeMap,
    pub e: f64,
    pub step: f64,
}

impl<B: GaugeBackground> GaugeTransformed<B> {
    pub fn new(inner: B, h: GaugeMap, e: f64) -> Self {
        GaugeTransformed {
            inner,
            h,
            e,
            step: 1e-3,
        }
    }

    /// Right-trivialised derivative: `(∂_k h) h⁻¹ = X_{ρ_k}`.
    fn rho(&self, x: &Vec3) -> [Su2Vector; 3] {
        let h0 = (self.h)(x).inverse();
        std::array::from_fn(|k| {
            let at = |c: f64| {
                let mut y = *x;
                y[k] += c * self.step;
                su2_log(&((self.h)(&y) * h0))
            };
            (at(-2.0) - at(-1.0) * 8.0 + at(1.0) * 8.0 - at(2.0)) / (12.0 * self.step)
        })
    }
}

impl<B: GaugeBackground> GaugeBackground for GaugeTransformed<B> {
    fn potential(&self, x: &Vec3) -> Result<Potential> {
        let a = self.inner.potential(x)?;
        let h = (self.h)(x);
        let rho = self.rho(x);
        let mut out = Matrix3::zeros();
        for i in 0..3 {
            let ai = Vec3::new(a[(i, 0)], a[(i, 1)], a[(i, 2)]);
            let v = rotate_vector(&h, &ai) - rho[i] / (SQRT_2 * self.e);
            for al in 0..3 {
                out[(i, al)] = v[al];
            }
        }
        Ok(out)
    }

    fn potential_gradient(&self, x: &Vec3) -> Result<[Potential; 3]> {
        let mut out = [Matrix3::zeros(); 3];
        for (k, o) in out.iter_mut().enumerate() {
            let at = |c: f64| {
                let mut y = *x;
                y[k] += c * self.step;
                self.potential(&y)
            };
            *o = (at(-2.0)? - at(-1.0)? * 8.0 + at(1.0)? * 8.0 - at(2.0)?) / (12.0 * self.step);
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WongParams {
    pub m: f64,
    pub e: f64,
    /// Reference isospin `K` (T-basis components); `I = s K s⁻¹`.
    pub k: Vec3,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WongState {
    pub x: Vec3,
    pub v: Vec3,
    pub s: GroupPoint,
}

impl WongState {
    pub fn isospin(&self, p: &WongParams) -> Vec3 {
        rotate_vector(&self.s, &p.k)
    }

    /// Layout: flat `[x, v]`, su2 `[s]`.
    pub fn to_state(&self) -> State {
        State {
            flat: self.x.iter().chain(self.v.iter()).copied().collect(),
            su2: vec![self.s],
            lorentz: vec![],
        }
    }

    pub fn from_state(y: &State) -> Self {
        let f = &y.flat;
        WongState {
            x: Vec3::new(f[0], f[1], f[2]),
            v: Vec3::new(f[3], f[4], f[5]),
            s: y.su2[0],
        }
    }
}

/// Returns `(ẋ, v̇, ω)` with `m v̇_i = −e I_γ F_ij^γ v_j` and `ṡ = X_ω s`,
/// `ω_α = −√2 e v·A^α`.
pub fn wong_rhs(
    state: &WongState,
    p: &WongParams,
    bg: &dyn GaugeBackground,
) -> Result<(Vec3, Vec3, Vec3)> {
    let iso = state.isospin(p);
    let f = bg.field_strength(&state.x, p.e)?;
    let a = bg.potential(&state.x)?;
    let fi = f[0] * iso[0] + f[1] * iso[1] + f[2] * iso[2];
    let acc = -(fi * state.v) * (p.e / p.m);
    let omega = -(a.transpose() * state.v) * (SQRT_2 * p.e);
    Ok((state.v, acc, omega))
}

pub struct WongSystem<B> {
    pub params: WongParams,
    pub background: B,
}

impl<B: GaugeBackground> System for WongSystem<B> {
    fn rhs(&self, _t: f64, y: &State) -> Result<Tangent> {
        let (dx, dv, w) = wong_rhs(&WongState::from_state(y), &self.params, &self.background)?;
        Ok(Tangent {
            flat: dx.iter().chain(dv.iter()).copied().collect(),
            su2: vec![w],
            lorentz: vec![],
        })
    }

    fn columns(&self) -> Vec<String> {
        ["x1", "x2", "x3", "v1", "v2", "v3", "I1", "I2", "I3"]
            .map(String::from)
            .to_vec()
    }

    fn row(&self, y: &State) -> Vec<f64> {
        let st = WongState::from_state(y);
        let mut r = y.flat.clone();
        r.extend(st.isospin(&self.params).iter());
        r
    }
}

/// Effective monopole charge `n = −½ Tr[σ₃ t⁻¹ I t]` in the trivialising
/// section `t(x̂)` (north patch away from the south pole, south otherwise).
pub fn hedgehog_charge(x: &Vec3, isospin: &Vec3) -> Result<f64> {
    let xhat = x.normalize();
    let t = if xhat[2] > -0.5 {
        section_north(&xhat)?
    } else {
        section_south(&xhat)?
    };
    let it = rotate_vector(&t.inverse(), isospin);
    let m = sigma_dot(&(it / SQRT_2));
    let tr = (crate::liealg::pauli()[2] * m).trace();
    Ok(-0.5 * tr.re)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionSample {
    pub t: f64,
    pub n: f64,
    /// `½ Tr I² − n²`, non-negative when the bound holds.
    pub bound_margin: f64,
    /// Distance between the Wong and monopole positions.
    pub divergence: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub n0: f64,
    pub samples: Vec<ReductionSample>,
    pub max_charge_drift: f64,
    /// `n² ≤ ½ Tr I²` held at every sample.
    pub bound_holds: bool,
    /// Largest distance between the Wong and monopole positions.
    pub max_divergence: f64,
}

/// Compares a hedgehog Wong trajectory with a monopole trajectory of charge
/// `n(0)` started from the same `(x, v)` and stepped identically.
pub fn hedgehog_reduction_check(
    traj: &Trajectory,
    params: &WongParams,
    config: &StepperConfig,
) -> Result<ReductionReport> {
    let first = traj
        .states
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty trajectory".into()))?;
    let w0 = WongState::from_state(first);
    let n0 = hedgehog_charge(&w0.x, &w0.isospin(params))?;
    let sys = MonopoleSystem {
        params: MonopoleParams::new(params.m, n0)?,
    };
    let mut y = MonopoleState::new(w0.x, w0.v).to_state();
    let mut t = 0.0;
    let mut k = 0usize;
    let mut samples = Vec::with_capacity(traj.times.len());
    let (mut drift, mut div): (f64, f64) = (0.0, 0.0);
    let mut bound = true;
    for (ts, ws) in traj.times.iter().zip(&traj.states) {
        while t < *ts - 1e-12 {
            k += 1;
            let t_next = (k as f64 * config.dt).min(*ts);
            y = step(config.method, &sys, t, &y, t_next - t)?;
            t = t_next;
        }
        let w = WongState::from_state(ws);
        let iso = w.isospin(params);
        let n = hedgehog_charge(&w.x, &iso)?;
        let half = 0.5 * iso.norm_squared();
        bound &= n * n <= half * (1.0 + 1e-12);
        drift = drift.max((n - n0).abs());
        let d = (MonopoleState::from_state(&y).x - w.x).norm();
        div = div.max(d);
        samples.push(ReductionSample {
            t: *ts,
            n,
            bound_margin: half - n * n,
            divergence: d,
        });
    }
    Ok(ReductionReport {
        n0,
        samples,
        max_charge_drift: drift,
        bound_holds: bound,
        max_divergence: div,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::su2_exp;

    fn sample() -> Vec3 {
        Vec3::new(0.7, -0.4, 1.1)
    }

    #[test]
    fn hedgehog_gradient_matches_differences() {
        let h = Hedgehog {
            e: 1.3,
            r_min: 1e-4,
        };
        let x = sample();
        let da = h.potential_gradient(&x).unwrap();
        for k in 0..3 {
            let mut a = x;
            let mut b = x;
            a[k] += 1e-6;
            b[k] -= 1e-6;
            let fd = (h.potential(&a).unwrap() - h.potential(&b).unwrap()) / 2e-6;
            assert!((fd - da[k]).amax() < 1e-8);
        }
    }

    #[test]
    fn hedgehog_field_is_radial() {
        // F_ij^γ = −ε_ijk x_k x_γ / (√2 e r⁴)
        let e = 0.8;
        let x = sample();
        let f = Hedgehog { e, r_min: 1e-4 }.field_strength(&x, e).unwrap();
        let r = x.norm();
        for g in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let want: f64 = -(0..3).map(|k| levi(i, j, k) * x[k]).sum::<f64>() * x[g]
                        / (SQRT_2 * e * r.powi(4));
                    assert!((f[g][(i, j)] - want).abs() < 1e-13, "{g}{i}{j}");
                }
            }
        }
    }

    #[test]
    fn matrix_form_matches_components() {
        let x = sample();
        let m = hedgehog_background(&x, 2.0).unwrap();
        let r2 = x.norm_squared();
        for i in 0..3 {
            let want: Vec3 = Vec3::from_fn(|a, _| {
                (0..3).map(|j| levi(a, i, j) * x[j]).sum::<f64>() / (4.0 * r2)
            });
            assert!((crate::liealg::sigma_components(&m[i]) - want).amax() < 1e-15);
        }
    }

    #[test]
    fn abelian_limit_is_lorentz_force() {
        let b = Vec3::new(0.2, -0.5, 0.9);
        let p = WongParams {
            m: 1.5,
            e: 0.7,
            k: Vec3::new(0.0, 0.0, 1.3),
        };
        let st = WongState {
            x: sample(),
            v: Vec3::new(0.3, 0.1, -0.6),
            s: GroupPoint::IDENTITY,
        };
        let (_, acc, w) = wong_rhs(&st, &p, &AbelianUniform { b }).unwrap();
        let q = -p.e * p.k[2];
        assert!((acc - st.v.cross(&b) * (q / p.m)).amax() < 1e-15);
        // Rotation about the isospin axis leaves I fixed.
        assert!(w.cross(&st.isospin(&p)).amax() < 1e-15);
    }

    #[test]
    fn field_strength_is_covariant() {
        let e = 1.1;
        let h: GaugeMap =
            Arc::new(|x: &Vec3| su2_exp(&Vec3::new(0.3 * x[1], x[0] * x[2], 0.5 - x[0])).unwrap());
        let gt = GaugeTransformed::new(Hedgehog { e, r_min: 1e-4 }, h.clone(), e);
        let x = sample();
        let f0 = Hedgehog { e, r_min: 1e-4 }.field_strength(&x, e).unwrap();
        let f1 = gt.field_strength(&x, e).unwrap();
        let hx = h(&x);
        for i in 0..3 {
            for j in 0..3 {
                let v = rotate_vector(&hx, &Vec3::new(f0[0][(i, j)], f0[1][(i, j)], f0[2][(i, j)]));
                let got = Vec3::new(f1[0][(i, j)], f1[1][(i, j)], f1[2][(i, j)]);
                assert!((got - v).amax() < 1e-9, "{}", (got - v).amax());
            }
        }
    }

    #[test]
    fn hedgehog_charge_is_projection() {
        let iso = Vec3::new(0.3, -0.2, 0.8);
        for x in [sample(), Vec3::new(0.1, 0.2, -1.0)] {
            let n = hedgehog_charge(&x, &iso).unwrap();
            assert!((n + x.normalize().dot(&iso) / SQRT_2).abs() < 1e-15);
        }
    }
}
