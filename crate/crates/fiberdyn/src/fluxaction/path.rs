//! Action on the space of paths: kinetic term plus the monopole interaction
//! written as a surface integral over a sheet spanning a reference point and
//! the trajectory.

use std::f64::consts::PI;

use super::flux::pairwise_sum;
use super::mesh::SurfaceMesh;
use crate::dynamics::MonopoleParams;
use crate::{Error, Result, Vec3};

/// Default reference point for every sheet.
pub const REFERENCE_POINT: Vec3 = Vec3::new(1.0, 0.0, 0.0);

const ANTIPODAL_SHIFT: f64 = 1e-8;

/// `grid[i][j] = γ(σ_i, t_j)` with `γ(0, t) = ξ₀` and `γ(1, t) = x(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSheet {
    pub grid: Vec<Vec<Vec3>>,
    pub times: Vec<f64>,
    /// Some column was nudged away from an exactly antipodal configuration.
    pub perturbed: bool,
}

impl PathSheet {
    pub fn boundary(&self) -> &[Vec3] {
        self.grid.last().map(|v| v.as_slice()).unwrap_or(&[])
    }

    fn validate(&self, r_min: f64) -> Result<()> {
        for row in &self.grid {
            for p in row {
                if !(p.norm() >= r_min) {
                    return Err(Error::SingularSurface(format!(
                        "sheet point at radius {:.3e} is inside r_min = {r_min:.3e}",
                        p.norm()
                    )));
                }
            }
        }
        Ok(())
    }
}

fn check_curve(curve: &[Vec3], times: &[f64], n_sigma: usize) -> Result<()> {
    if curve.len() < 2 || curve.len() != times.len() {
        return Err(Error::InvalidArgument(
            "need at least two curve samples with matching times".into(),
        ));
    }
    if n_sigma < 1 {
        return Err(Error::InvalidArgument(
            "need at least one σ interval".into(),
        ));
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0)
        || times
            .windows(2)
            .any(|w| ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.max(1.0))
    {
        return Err(Error::InvalidArgument(
            "curve must be sampled uniformly in time".into(),
        ));
    }
    Ok(())
}

/// Column from `ξ₀` to `x` through normalized blends of the directions,
/// with the radius interpolated linearly.
fn radial_column(xi0: &Vec3, x: &Vec3, n_sigma: usize, perturbed: &mut bool) -> Vec<Vec3> {
    let (r0, r1) = (xi0.norm(), x.norm());
    let a = xi0 / r0;
    let mut b = x / r1;
    if (a + b).norm() < ANTIPODAL_SHIFT {
        let mut off = a.cross(&Vec3::z());
        if off.norm() < 0.5 {
            off = a.cross(&Vec3::y());
        }
        b = (b + off.normalize() * ANTIPODAL_SHIFT).normalize();
        *perturbed = true;
    }
    (0..=n_sigma)
        .map(|i| {
            let s = i as f64 / n_sigma as f64;
            if i == n_sigma {
                return *x;
            }
            ((a * (1.0 - s) + b * s).normalize()) * (r0 * (1.0 - s) + r1 * s)
        })
        .collect()
}

fn transpose(columns: Vec<Vec<Vec3>>) -> Vec<Vec<Vec3>> {
    let n_sigma = columns[0].len();
    (0..n_sigma)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect()
}

pub fn radial_sheet(
    curve: &[Vec3],
    times: &[f64],
    n_sigma: usize,
    xi0: &Vec3,
) -> Result<PathSheet> {
    check_curve(curve, times, n_sigma)?;
    let mut perturbed = false;
    let cols: Vec<Vec<Vec3>> = curve
        .iter()
        .map(|x| radial_column(xi0, x, n_sigma, &mut perturbed))
        .collect();
    Ok(PathSheet {
        grid: transpose(cols),
        times: times.to_vec(),
        perturbed,
    })
}

fn slerp(a: &Vec3, b: &Vec3, s: f64) -> Vec3 {
    let c = a.dot(b).clamp(-1.0, 1.0);
    let th = c.acos();
    if th < 1e-12 {
        return *a;
    }
    (a * ((1.0 - s) * th).sin() + b * (s * th).sin()) / th.sin()
}

/// Two great-circle arcs `ξ₀ → w(t) → x(t)`, where the waypoint `w` runs once
/// around the circle of points equidistant from `ξ̂₀` and `x̂(t)`, starting
/// and ending at the midpoint of the geodesic. Shares its whole boundary with
/// [`radial_sheet`] and differs from it by a surface wrapping the sphere once.
pub fn geodesic_cap_sheet(
    curve: &[Vec3],
    times: &[f64],
    n_sigma: usize,
    xi0: &Vec3,
) -> Result<PathSheet> {
    check_curve(curve, times, n_sigma)?;
    if !n_sigma.is_multiple_of(2) {
        return Err(Error::InvalidArgument(
            "geodesic-cap sheet needs an even number of σ intervals".into(),
        ));
    }
    let a = xi0.normalize();
    let (t0, t1) = (times[0], times[times.len() - 1]);
    let half = n_sigma / 2;
    let mut cols = Vec::with_capacity(curve.len());
    for (x, t) in curve.iter().zip(times) {
        let b = x.normalize();
        let m = a + b;
        let k = a.cross(&b);
        if m.norm() < 1e-6 || k.norm() < 1e-6 {
            return Err(Error::SingularSurface(
                "curve point aligned with the reference direction".into(),
            ));
        }
        let (m, k) = (m.normalize(), k.normalize());
        let phi = 2.0 * PI * (t - t0) / (t1 - t0);
        let w = m * phi.cos() + k * phi.sin();
        let (r0, r1) = (xi0.norm(), x.norm());
        let col: Vec<Vec3> = (0..=n_sigma)
            .map(|i| {
                let s = i as f64 / n_sigma as f64;
                if i == n_sigma {
                    return *x;
                }
                let dir = if i <= half {
                    slerp(&a, &w, i as f64 / half as f64)
                } else {
                    slerp(&w, &b, (i - half) as f64 / half as f64)
                };
                dir.normalize() * (r0 * (1.0 - s) + r1 * s)
            })
            .collect();
        cols.push(col);
    }
    Ok(PathSheet {
        grid: transpose(cols),
        times: times.to_vec(),
        perturbed: false,
    })
}

/// Cell value of `−(eg/4π) γ̂·(∂_σγ̂ × ∂_tγ̂) dσ dt` from the four corners
/// `[(i,j), (i+1,j), (i,j+1), (i+1,j+1)]`.
fn cell(c: [Vec3; 4], eg: f64) -> f64 {
    let g = c.map(|p| p.normalize());
    let ds = ((g[1] - g[0]) + (g[3] - g[2])) * 0.5;
    let dt = ((g[2] - g[0]) + (g[3] - g[1])) * 0.5;
    let center = (g[0] + g[1] + g[2] + g[3]).normalize();
    -eg / (4.0 * PI) * center.dot(&ds.cross(&dt))
}

fn column_cells(left: &[Vec3], right: &[Vec3], eg: f64) -> Vec<f64> {
    (0..left.len() - 1)
        .map(|i| cell([left[i], left[i + 1], right[i], right[i + 1]], eg))
        .collect()
}

pub fn interaction_term(sheet: &PathSheet, eg: f64) -> f64 {
    let cols = transpose(sheet.grid.clone());
    let terms: Vec<f64> = cols
        .windows(2)
        .flat_map(|w| column_cells(&w[0], &w[1], eg))
        .collect();
    pairwise_sum(&terms)
}

/// `Σ ½ m |x_{j+1} − x_j|² / Δt`.
pub fn kinetic_term(curve: &[Vec3], times: &[f64], m: f64) -> f64 {
    let terms: Vec<f64> = curve
        .windows(2)
        .zip(times.windows(2))
        .map(|(x, t)| 0.5 * m * (x[1] - x[0]).norm_squared() / (t[1] - t[0]))
        .collect();
    pairwise_sum(&terms)
}

pub fn path_action(sheet: &PathSheet, params: &MonopoleParams, eg: f64) -> Result<f64> {
    sheet.validate(params.r_min)?;
    Ok(kinetic_term(sheet.boundary(), &sheet.times, params.m) + interaction_term(sheet, eg))
}

/// Closed-surface value of the interaction density, `∓eg` for a sphere
/// around the origin depending on orientation.
pub fn weil_unit(mesh: &SurfaceMesh, eg: f64) -> Result<f64> {
    let d = mesh.distance_to(&Vec3::zeros());
    if d < crate::dynamics::DEFAULT_R_MIN {
        return Err(Error::SingularSurface(format!(
            "surface passes within {d:.3e} of the origin"
        )));
    }
    let terms: Vec<f64> = mesh
        .triangles
        .iter()
        .map(|t| {
            let [a, b, c] = mesh.corners(t);
            let x = (a + b + c) / 3.0;
            let r = x.norm();
            let g = x / r;
            let project = |u: Vec3| (u - g * g.dot(&u)) / r;
            let (du, dw) = (project(b - a), project(c - a));
            -eg / (4.0 * PI) * 0.5 * g.dot(&du.cross(&dw))
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// `(1/Δt) ∂S/∂x_j` at interior node `j` of the curve, with the radial
/// sheet rebuilt around the displaced node.
pub fn euler_lagrange_gradient(
    curve: &[Vec3],
    times: &[f64],
    params: &MonopoleParams,
    eg: f64,
    n_sigma: usize,
    j: usize,
) -> Result<Vec3> {
    check_curve(curve, times, n_sigma)?;
    if j == 0 || j + 1 >= curve.len() {
        return Err(Error::InvalidArgument(format!("node {j} is not interior")));
    }
    let dt = times[1] - times[0];
    let xi0 = REFERENCE_POINT;
    let mut flag = false;
    let left = radial_column(&xi0, &curve[j - 1], n_sigma, &mut flag);
    let right = radial_column(&xi0, &curve[j + 1], n_sigma, &mut flag);
    let local = |x: &Vec3| {
        let mid = radial_column(&xi0, x, n_sigma, &mut false);
        let kin = 0.5
            * params.m
            * ((x - curve[j - 1]).norm_squared() + (curve[j + 1] - x).norm_squared())
            / dt;
        let mut cells = column_cells(&left, &mid, eg);
        cells.extend(column_cells(&mid, &right, eg));
        kin + pairwise_sum(&cells)
    };
    let h = 1e-6 * curve[j].norm().max(1.0);
    let mut g = Vec3::zeros();
    for k in 0..3 {
        let (mut p, mut q) = (curve[j], curve[j]);
        p[k] += h;
        q[k] -= h;
        g[k] = (local(&p) - local(&q)) / (2.0 * h);
    }
    Ok(g / dt)
}

/// Largest gradient norm over all interior nodes.
pub fn euler_lagrange_residual(
    curve: &[Vec3],
    times: &[f64],
    params: &MonopoleParams,
    eg: f64,
    n_sigma: usize,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for j in 1..curve.len() - 1 {
        worst = worst.max(euler_lagrange_gradient(curve, times, params, eg, n_sigma, j)?.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::super::mesh::icosphere;
    use super::*;

    fn curve(n: usize) -> (Vec<Vec3>, Vec<f64>) {
        let times: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
        let c = times
            .iter()
            .map(|t| Vec3::new(0.2 + t, 1.0 - 0.5 * t * t, 0.3 + 0.8 * t))
            .collect();
        (c, times)
    }

    #[test]
    fn collapsed_sheet_has_no_interaction() {
        let times: Vec<f64> = (0..10).map(|j| j as f64 * 0.1).collect();
        let c = vec![Vec3::new(0.0, 2.0, 1.0); 10];
        let s = radial_sheet(&c, &times, 20, &REFERENCE_POINT).unwrap();
        assert_eq!(interaction_term(&s, 4.0 * PI), 0.0);
    }

    #[test]
    fn unit_is_minus_eg_on_outward_sphere() {
        let eg = 4.0 * PI;
        let u = weil_unit(&icosphere(4, Vec3::zeros(), 1.0), eg).unwrap();
        assert!((u + eg).abs() < 1e-3 * eg, "{u}");
        let half = weil_unit(&icosphere(4, Vec3::zeros(), 1.0), eg / 2.0).unwrap();
        assert!((half - u / 2.0).abs() < 1e-14);
    }

    #[test]
    fn sheets_share_boundary() {
        let (c, t) = curve(40);
        let a = radial_sheet(&c, &t, 40, &REFERENCE_POINT).unwrap();
        let b = geodesic_cap_sheet(&c, &t, 40, &REFERENCE_POINT).unwrap();
        assert_eq!(a.boundary(), b.boundary());
        assert_eq!(a.grid[0], b.grid[0]);
        // End columns of the cap sheet run along the same great circle.
        for j in [0, 40] {
            let normal = REFERENCE_POINT.cross(&c[j]).normalize();
            for row in &b.grid {
                assert!(row[j].normalize().dot(&normal).abs() < 1e-12);
            }
        }
    }

    fn true_orbit(n_nodes: usize, dt: f64, params: &MonopoleParams) -> (Vec<Vec3>, Vec<f64>) {
        use crate::dynamics::{MonopoleState, MonopoleSystem};
        use crate::integrate::{Method, step};
        let sys = MonopoleSystem { params: *params };
        let mut state = MonopoleState {
            x: Vec3::new(1.0, 0.5, 0.2),
            v: Vec3::new(0.1, 0.8, 0.3),
        }
        .to_state();
        let mut xs = vec![MonopoleState::from_state(&state).x];
        let sub = 10;
        for _ in 1..n_nodes {
            for _ in 0..sub {
                state = step(Method::Rk4, &sys, 0.0, &state, dt / sub as f64).unwrap();
            }
            xs.push(MonopoleState::from_state(&state).x);
        }
        (xs, (0..n_nodes).map(|j| j as f64 * dt).collect())
    }

    #[test]
    fn true_orbit_is_nearly_stationary() {
        let params = MonopoleParams::new(1.0, 0.8).unwrap();
        let eg = 4.0 * PI * params.n;
        let (c1, t1) = true_orbit(60, 1e-2, &params);
        let g1 = euler_lagrange_residual(&c1, &t1, &params, eg, 100).unwrap();
        let (c2, t2) = true_orbit(120, 5e-3, &params);
        let g2 = euler_lagrange_residual(&c2, &t2, &params, eg, 200).unwrap();
        assert!(g1 < 1e-3, "{g1}");
        assert!(g1 / g2 > 3.0, "{g1} {g2}");
        let wrong = euler_lagrange_residual(&c1, &t1, &params, -eg, 100).unwrap();
        assert!(wrong > 1e-2, "{wrong}");
    }

    #[test]
    fn sheet_swap_changes_action_by_a_unit() {
        let params = MonopoleParams::new(1.0, 0.5).unwrap();
        let eg = 4.0 * PI * params.n;
        let unit = eg;
        let (c, t) = curve(300);
        let a = path_action(
            &radial_sheet(&c, &t, 300, &REFERENCE_POINT).unwrap(),
            &params,
            eg,
        )
        .unwrap();
        let b = path_action(
            &geodesic_cap_sheet(&c, &t, 300, &REFERENCE_POINT).unwrap(),
            &params,
            eg,
        )
        .unwrap();
        let k = (a - b) / unit;
        assert!((k - k.round()).abs() < 1e-3 && k.round() != 0.0, "{k}");
    }

    #[test]
    fn antipodal_column_is_nudged() {
        let times = vec![0.0, 0.5, 1.0];
        let c = vec![Vec3::new(-1.0, 0.0, 0.0); 3];
        let s = radial_sheet(&c, &times, 4, &REFERENCE_POINT).unwrap();
        assert!(s.perturbed);
        let p = MonopoleParams::new(1.0, 1.0).unwrap();
        assert!(path_action(&s, &p, 4.0 * PI).unwrap().is_finite());
    }

    #[test]
    fn inside_exclusion_is_singular() {
        let times = vec![0.0, 0.5, 1.0];
        let c = vec![
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 1e-5, 0.0),
            Vec3::new(0.0, -1.0, 0.0),
        ];
        let s = radial_sheet(&c, &times, 4, &REFERENCE_POINT).unwrap();
        let p = MonopoleParams::new(1.0, 1.0).unwrap();
        assert!(matches!(
            path_action(&s, &p, 4.0 * PI),
            Err(Error::SingularSurface(_))
        ));
    }
}
