//! Numerical Poisson brackets on the exponential chart of SU(2).
//!
//! Generators here are `T = σ/2` (the dynamics module uses `σ/√2`). A
//! momentum-like quantity with components `t` in this basis has components
//! `√2 t` in the unit-trace basis; see [`to_unit_trace_basis`].
//!
//! Everything is evaluated in double-double arithmetic. Brackets of the
//! `t` functions are nested central differences, which in plain f64 would sit
//! on a roundoff floor near the tolerances being checked.

mod dd;

use std::f64::consts::PI;

use nalgebra::Matrix3;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use dd::{Dd, dd, to_f64};
use dd::{Quat, atan2, ddiv, qmul, rotate_z, sin_cos};

use crate::{Error, Result, Vec3};

/// Condition number of `N` beyond which the chart is considered singular.
pub const MAX_CONDITION: f64 = 1e8;

/// Exponential chart `ξ ↦ s(ξ) = exp(i T·ξ)` of SU(2), with the
/// finite-difference step used for every derivative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub h: f64,
}

impl Default for Chart {
    fn default() -> Self {
        Chart { h: 1e-5 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub xi: [f64; 3],
    pub pi: [f64; 3],
}

pub type Coords = [Dd; 3];

/// A phase-space function of `(ξ, π)`.
pub type Observable<'a> = Box<dyn Fn(&Coords, &Coords) -> Dd + 'a>;

fn lift(v: &[f64; 3]) -> Coords {
    v.map(dd)
}

fn norm(v: &Coords) -> Dd {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Quaternion of `exp(i T·ξ)`; in the `w − i(a,b,c)·σ` layout this is
/// `(cos |ξ|/2, −sin(|ξ|/2) ξ̂)`.
pub fn chart_point(xi: &Coords) -> Quat {
    let r = norm(xi);
    let (s, c) = sin_cos(r * 0.5);
    // sin(r/2)/r, with its series near zero
    let k = if to_f64(r) < 1e-12 {
        dd(0.5) - r * r / 48.0
    } else {
        ddiv(s, r)
    };
    [c, -xi[0] * k, -xi[1] * k, -xi[2] * k]
}

/// Inverse of [`chart_point`] on the principal branch.
pub fn chart_log(q: &Quat) -> Coords {
    let (w, v) = (q[0], [q[1], q[2], q[3]]);
    let vn = norm(&v);
    let k = if to_f64(vn) < 1e-300 {
        dd(-2.0)
    } else {
        ddiv(atan2(vn, w) * -2.0, vn)
    };
    [v[0] * k, v[1] * k, v[2] * k]
}

/// `exp(i T(α) ε)`.
fn left_generator(alpha: usize, eps: Dd) -> Quat {
    let (s, c) = sin_cos(eps * 0.5);
    let mut q = [c, dd(0.0), dd(0.0), dd(0.0)];
    q[alpha + 1] = -s;
    q
}

impl Chart {
    pub fn dim(&self) -> usize {
        3
    }

    fn check_domain(&self, xi: &[f64; 3]) -> Result<()> {
        let r = Vec3::from(*xi).norm();
        if !(r < PI) {
            return Err(Error::ChartBoundary(format!(
                "|ξ| = {r} is outside the chart (|ξ| < π)"
            )));
        }
        Ok(())
    }

    /// `N_βα = ∂f_β/∂ε_α` at `ε = 0`, where `s(f(ε)) = exp(i T(α) ε) s(ξ)`.
    pub fn n_matrix_dd(&self, xi: &Coords) -> [[Dd; 3]; 3] {
        let s = chart_point(xi);
        let h = self.h;
        let mut n = [[dd(0.0); 3]; 3];
        for alpha in 0..3 {
            let fp = chart_log(&qmul(&left_generator(alpha, dd(h)), &s));
            let fm = chart_log(&qmul(&left_generator(alpha, dd(-h)), &s));
            for beta in 0..3 {
                n[beta][alpha] = (fp[beta] - fm[beta]) / (h * 2.0);
            }
        }
        n
    }

    pub fn n_matrix(&self, xi: &[f64; 3]) -> Result<Matrix3<f64>> {
        self.check_domain(xi)?;
        let n = self.n_matrix_dd(&lift(xi));
        let m = Matrix3::from_fn(|b, a| to_f64(n[b][a]));
        let sv = m.singular_values();
        let cond = sv.max() / sv.min();
        if !(cond <= MAX_CONDITION) {
            return Err(Error::ChartBoundary(format!(
                "N is near-singular (condition number {cond:.3e})"
            )));
        }
        Ok(m)
    }

    /// `t_α = −π_β N_βα(ξ)`.
    pub fn t_dd(&self, xi: &Coords, pi: &Coords) -> Coords {
        let n = self.n_matrix_dd(xi);
        std::array::from_fn(|a| -(pi[0] * n[0][a] + pi[1] * n[1][a] + pi[2] * n[2][a]))
    }

    pub fn t_functions(&self, point: &PhasePoint) -> Result<[f64; 3]> {
        self.n_matrix(&point.xi)?;
        Ok(self.t_dd(&lift(&point.xi), &lift(&point.pi)).map(to_f64))
    }

    /// `Σ_α ∂F/∂ξ_α ∂G/∂π_α − ∂F/∂π_α ∂G/∂ξ_α` by central differences.
    pub fn bracket_dd(
        &self,
        f: &dyn Fn(&Coords, &Coords) -> Dd,
        g: &dyn Fn(&Coords, &Coords) -> Dd,
        xi: &Coords,
        pi: &Coords,
    ) -> Dd {
        let h = self.h;
        let d = |fun: &dyn Fn(&Coords, &Coords) -> Dd, k: usize, on_xi: bool| {
            let (mut xp, mut xm, mut pp, mut pm) = (*xi, *xi, *pi, *pi);
            if on_xi {
                xp[k] += h;
                xm[k] -= h;
            } else {
                pp[k] += h;
                pm[k] -= h;
            }
            (fun(&xp, &pp) - fun(&xm, &pm)) / (2.0 * h)
        };
        let mut acc = dd(0.0);
        for k in 0..3 {
            acc += d(f, k, true) * d(g, k, false) - d(f, k, false) * d(g, k, true);
        }
        acc
    }

    pub fn poisson_bracket(
        &self,
        f: &dyn Fn(&Coords, &Coords) -> Dd,
        g: &dyn Fn(&Coords, &Coords) -> Dd,
        point: &PhasePoint,
    ) -> Result<f64> {
        let v = to_f64(self.bracket_dd(f, g, &lift(&point.xi), &lift(&point.pi)));
        if !v.is_finite() {
            return Err(Error::InvalidFunction(
                "non-finite derivative in bracket".into(),
            ));
        }
        Ok(v)
    }

    pub fn t_observable(&self, alpha: usize) -> Observable<'_> {
        Box::new(move |x, p| self.t_dd(x, p)[alpha])
    }
}

pub fn xi_observable<'a>(k: usize) -> Observable<'a> {
    Box::new(move |x, _| x[k])
}

pub fn pi_observable<'a>(k: usize) -> Observable<'a> {
    Box::new(move |_, p| p[k])
}

/// Quaternion component `k` of `s(ξ)`.
pub fn s_observable<'a>(k: usize) -> Observable<'a> {
    Box::new(move |x, _| chart_point(x)[k])
}

/// Component `i` of `x̂ = hopf_project(s(ξ))`.
pub fn xhat_observable<'a>(i: usize) -> Observable<'a> {
    Box::new(move |x, _| rotate_z(&chart_point(x))[i])
}

/// Momentum components in the `T = σ/√2` basis used by the dynamics module.
pub fn to_unit_trace_basis(t: [f64; 3]) -> Vec3 {
    Vec3::from(t) * std::f64::consts::SQRT_2
}

fn levi(a: usize, b: usize, c: usize) -> f64 {
    ((a as i64 - b as i64) * (b as i64 - c as i64) * (c as i64 - a as i64)) as f64 / 2.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub n: f64,
    /// `φ = x̂·t − n`.
    pub phi: f64,
    /// `max_i |{φ, t_i}|`.
    pub rotation_residual: f64,
    /// `max_ij |{φ_i, φ_j} − ε_ijk(φ_k − S_k)|` with `φ_i = t_i − S_i`, `S = λx̂`.
    pub spin_algebra_residual: f64,
    /// `2n` is an integer within 1e-9.
    pub dirac_integral: bool,
}

pub fn constraint_checks(
    chart: &Chart,
    point: &PhasePoint,
    n: f64,
    lambda: f64,
) -> Result<ConstraintReport> {
    chart.n_matrix(&point.xi)?;
    let (xi, pi) = (lift(&point.xi), lift(&point.pi));
    let phi = |x: &Coords, p: &Coords| {
        let t = chart.t_dd(x, p);
        let xh = rotate_z(&chart_point(x));
        xh[0] * t[0] + xh[1] * t[1] + xh[2] * t[2] - n
    };
    let mut rot: f64 = 0.0;
    for i in 0..3 {
        let ti = chart.t_observable(i);
        rot = rot.max(to_f64(chart.bracket_dd(&phi, &*ti, &xi, &pi)).abs());
    }
    let spin_phi = |i: usize| {
        move |x: &Coords, p: &Coords| chart.t_dd(x, p)[i] - rotate_z(&chart_point(x))[i] * lambda
    };
    let mut alg: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let b = to_f64(chart.bracket_dd(&spin_phi(i), &spin_phi(j), &xi, &pi));
            let mut want = 0.0;
            for k in 0..3 {
                let e = levi(i, j, k);
                if e != 0.0 {
                    let s_k = to_f64(rotate_z(&chart_point(&xi))[k]) * lambda;
                    want += e * (to_f64(spin_phi(k)(&xi, &pi)) - s_k);
                }
            }
            alg = alg.max((b - want).abs());
        }
    }
    let twice = 2.0 * n;
    Ok(ConstraintReport {
        n,
        phi: to_f64(phi(&xi, &pi)),
        rotation_residual: rot,
        spin_algebra_residual: alg,
        dirac_integral: (twice - twice.round()).abs() < 1e-9,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub h: f64,
    pub passed: bool,
}

impl IdentityResult {
    fn new(name: &str, max_residual: f64, tolerance: f64, samples: usize, h: f64) -> Self {
        IdentityResult {
            name: name.into(),
            max_residual,
            tolerance,
            samples,
            h,
            passed: max_residual < tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketReport {
    pub seed: u64,
    pub identities: Vec<IdentityResult>,
}

impl BracketReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|r| r.passed)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityResult> {
        self.identities.iter().find(|r| r.name == name)
    }
}

/// Random phase points with `|ξ| ≤ 2.5` and momenta in `[−1, 1]³`.
pub fn sample_points(count: usize, seed: u64) -> Vec<PhasePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let xi: [f64; 3] = std::array::from_fn(|_| rng.random_range(-2.5..2.5));
        if Vec3::from(xi).norm() > 2.5 {
            continue;
        }
        let pi = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        out.push(PhasePoint { xi, pi });
    }
    out
}

/// `max |iT(α)s − (∂s/∂ξ_β) N_βα|` over quaternion components.
pub fn n_relation_residual(chart: &Chart, xi: &[f64; 3]) -> Result<f64> {
    chart.n_matrix(xi)?;
    let x = lift(xi);
    let n = chart.n_matrix_dd(&x);
    let s = chart_point(&x);
    let h = chart.h;
    let ds: [Quat; 3] = std::array::from_fn(|b| {
        let (mut p, mut m) = (x, x);
        p[b] += h;
        m[b] -= h;
        let (qp, qm) = (chart_point(&p), chart_point(&m));
        std::array::from_fn(|k| (qp[k] - qm[k]) / (2.0 * h))
    });
    let mut worst: f64 = 0.0;
    for alpha in 0..3 {
        let mut gen_q = [dd(0.0); 4];
        gen_q[alpha + 1] = dd(-0.5);
        let lhs = qmul(&gen_q, &s);
        for k in 0..4 {
            let rhs = ds[0][k] * n[0][alpha] + ds[1][k] * n[1][alpha] + ds[2][k] * n[2][alpha];
            worst = worst.max(to_f64(lhs[k] - rhs).abs());
        }
    }
    Ok(worst)
}

/// Quadratic polynomial in the six phase-space coordinates.
fn random_quadratic(rng: &mut ChaCha8Rng) -> impl Fn(&Coords, &Coords) -> Dd + use<> {
    let lin: [f64; 6] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let quad: [[f64; 6]; 6] =
        std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
    move |x: &Coords, p: &Coords| {
        let z = [x[0], x[1], x[2], p[0], p[1], p[2]];
        let mut acc = dd(0.0);
        for i in 0..6 {
            acc += z[i] * lin[i];
            for j in i..6 {
                acc += z[i] * z[j] * quad[i][j];
            }
        }
        acc
    }
}

pub const BRACKET_TOL: f64 = 1e-6;

/// Runs every bracket identity on `samples` seeded points.
pub fn bracket_suite(
    chart: &Chart,
    samples: usize,
    seed: u64,
    n: f64,
    lambda: f64,
) -> Result<BracketReport> {
    let points = sample_points(samples, seed);
    let h = chart.h;
    let mut n_rel: f64 = 0.0;
    let mut ts: f64 = 0.0;
    let mut tt: f64 = 0.0;
    let mut pairs: f64 = 0.0;
    let mut rot: f64 = 0.0;
    let mut alg: f64 = 0.0;
    let t_obs: Vec<Observable<'_>> = (0..3).map(|a| chart.t_observable(a)).collect();
    for pt in &points {
        let (xi, pi) = (lift(&pt.xi), lift(&pt.pi));
        n_rel = n_rel.max(n_relation_residual(chart, &pt.xi)?);
        let s = chart_point(&xi);
        for a in 0..3 {
            let mut gen_q = [dd(0.0); 4];
            gen_q[a + 1] = dd(-0.5);
            let want = qmul(&gen_q, &s);
            for k in 0..4 {
                let b = chart.bracket_dd(&*t_obs[a], &*s_observable(k), &xi, &pi);
                ts = ts.max(to_f64(b - want[k]).abs());
            }
            let t = chart.t_dd(&xi, &pi);
            for b in 0..3 {
                let br = chart.bracket_dd(&*t_obs[a], &*t_obs[b], &xi, &pi);
                let want: Dd = (0..3).fold(dd(0.0), |acc, c| acc + t[c] * levi(a, b, c));
                tt = tt.max(to_f64(br - want).abs());
                let xp = chart.bracket_dd(&*xi_observable(a), &*pi_observable(b), &xi, &pi);
                pairs = pairs.max((to_f64(xp) - if a == b { 1.0 } else { 0.0 }).abs());
            }
        }
        let c = constraint_checks(chart, pt, n, lambda)?;
        rot = rot.max(c.rotation_residual);
        alg = alg.max(c.spin_algebra_residual);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut jac: f64 = 0.0;
    let mut anti: f64 = 0.0;
    for pt in points.iter().take(samples.min(20)) {
        let (xi, pi) = (lift(&pt.xi), lift(&pt.pi));
        let f = random_quadratic(&mut rng);
        let g = random_quadratic(&mut rng);
        let k = random_quadratic(&mut rng);
        let gk = |x: &Coords, p: &Coords| chart.bracket_dd(&g, &k, x, p);
        let kf = |x: &Coords, p: &Coords| chart.bracket_dd(&k, &f, x, p);
        let fg = |x: &Coords, p: &Coords| chart.bracket_dd(&f, &g, x, p);
        let total = chart.bracket_dd(&f, &gk, &xi, &pi)
            + chart.bracket_dd(&g, &kf, &xi, &pi)
            + chart.bracket_dd(&k, &fg, &xi, &pi);
        jac = jac.max(to_f64(total).abs());
        anti = anti.max(
            to_f64(chart.bracket_dd(&f, &g, &xi, &pi) + chart.bracket_dd(&g, &f, &xi, &pi)).abs(),
        );
    }
    let m = points.len();
    Ok(BracketReport {
        seed,
        identities: vec![
            IdentityResult::new("n_matrix_relation", n_rel, BRACKET_TOL, m, h),
            IdentityResult::new("t_s_bracket", ts, BRACKET_TOL, m, h),
            IdentityResult::new("t_t_bracket", tt, BRACKET_TOL, m, h),
            IdentityResult::new("canonical_pairs", pairs, 1e-9, m, h),
            IdentityResult::new("antisymmetry", anti, 1e-12, m.min(20), h),
            IdentityResult::new("jacobi", jac, 1e-5, m.min(20), h),
            IdentityResult::new("constraint_rotation", rot, BRACKET_TOL, m, h),
            IdentityResult::new("spin_constraint_algebra", alg, BRACKET_TOL, m, h),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_roundtrip_and_origin() {
        let xi = [0.4, -1.1, 0.9].map(dd);
        let back = chart_log(&chart_point(&xi));
        for k in 0..3 {
            assert!(
                to_f64((back[k] - xi[k]).abs()) < 1e-28,
                "{:e}",
                to_f64(back[k] - xi[k])
            );
        }
        let n = Chart::default().n_matrix(&[0.0; 3]).unwrap();
        assert!((n - Matrix3::identity()).amax() < 1e-9);
    }

    #[test]
    fn chart_matches_group_exponential() {
        let xi = Vec3::new(0.3, -0.8, 1.2);
        let q = chart_point(&lift(&[xi[0], xi[1], xi[2]]));
        let g = crate::liealg::su2_exp(&(-xi)).unwrap();
        for k in 0..4 {
            assert!((to_f64(q[k]) - g.q()[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn t_vanishes_without_momentum() {
        let p = PhasePoint {
            xi: [0.2, 0.5, -0.3],
            pi: [0.0; 3],
        };
        assert_eq!(Chart::default().t_functions(&p).unwrap(), [0.0; 3]);
    }

    #[test]
    fn boundary_is_rejected() {
        assert!(matches!(
            Chart::default().n_matrix(&[3.2, 0.0, 0.0]),
            Err(Error::ChartBoundary(_))
        ));
    }

    #[test]
    fn linear_brackets_are_exact() {
        let c = Chart::default();
        let p = PhasePoint {
            xi: [0.2, 0.5, -0.3],
            pi: [0.7, -0.1, 0.4],
        };
        for a in 0..3 {
            for b in 0..3 {
                let v = c
                    .poisson_bracket(&*xi_observable(a), &*pi_observable(b), &p)
                    .unwrap();
                assert!((v - if a == b { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn small_suite_passes() {
        let r = bracket_suite(&Chart::default(), 5, 7, 0.5, 0.8).unwrap();
        for i in &r.identities {
            assert!(i.passed, "{}: {:e}", i.name, i.max_residual);
        }
    }

    #[test]
    fn residuals_tighten_quadratically() {
        let coarse = bracket_suite(&Chart { h: 1e-5 }, 4, 11, 1.0, 1.0).unwrap();
        let fine = bracket_suite(&Chart { h: 5e-6 }, 4, 11, 1.0, 1.0).unwrap();
        for name in ["n_matrix_relation", "t_s_bracket", "t_t_bracket"] {
            let r = coarse.get(name).unwrap().max_residual / fine.get(name).unwrap().max_residual;
            assert!((3.0..5.0).contains(&r), "{name}: {r}");
        }
    }

    #[test]
    fn dirac_flag() {
        let c = Chart::default();
        let p = PhasePoint {
            xi: [0.2, 0.5, -0.3],
            pi: [0.7, -0.1, 0.4],
        };
        assert!(constraint_checks(&c, &p, 1.5, 1.0).unwrap().dirac_integral);
        assert!(!constraint_checks(&c, &p, 0.3, 1.0).unwrap().dirac_integral);
    }
}
