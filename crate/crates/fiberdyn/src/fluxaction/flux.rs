use serde::{Deserialize, Serialize};

use super::mesh::SurfaceMesh;
use crate::dynamics::{DEFAULT_R_MIN, MonopoleParams};
use crate::{Error, Result, Vec3};

/// A two-form on position space, evaluated on a pair of tangent vectors.
pub trait TwoForm: Sync {
    fn eval(&self, x: &Vec3, u: &Vec3, w: &Vec3) -> Result<f64>;

    /// Radius of the excluded ball around the origin.
    fn r_min(&self) -> f64 {
        DEFAULT_R_MIN
    }
}

/// Phase-space form of the monopole system on `(x, v)`:
/// `ω(U, W) = m (δv·δx' − δx·δv') − n x·(δx × δx') / r³`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSpaceForm {
    pub params: MonopoleParams,
}

impl PhaseSpaceForm {
    pub fn eval6(&self, x: &Vec3, u: (&Vec3, &Vec3), w: (&Vec3, &Vec3)) -> Result<f64> {
        let r = x.norm();
        if !(r >= self.params.r_min) {
            return Err(Error::ExclusionZone {
                r,
                r_min: self.params.r_min,
            });
        }
        let (ux, uv) = u;
        let (wx, wv) = w;
        Ok(self.params.m * (uv.dot(wx) - ux.dot(wv))
            - self.params.n * x.dot(&ux.cross(wx)) / (r * r * r))
    }
}

/// On position-space surfaces the velocity is held fixed (`δv = 0`).
impl TwoForm for PhaseSpaceForm {
    fn eval(&self, x: &Vec3, u: &Vec3, w: &Vec3) -> Result<f64> {
        let z = Vec3::zeros();
        self.eval6(x, (u, &z), (w, &z))
    }

    fn r_min(&self) -> f64 {
        self.params.r_min
    }
}

/// Field-strength part alone: `−n x·(u × w) / r³`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MagneticForm {
    pub n: f64,
    pub r_min: f64,
}

impl TwoForm for MagneticForm {
    fn eval(&self, x: &Vec3, u: &Vec3, w: &Vec3) -> Result<f64> {
        let r = x.norm();
        if !(r >= self.r_min) {
            return Err(Error::ExclusionZone {
                r,
                r_min: self.r_min,
            });
        }
        Ok(-self.n * x.dot(&u.cross(w)) / (r * r * r))
    }

    fn r_min(&self) -> f64 {
        self.r_min
    }
}

/// Sum with a fixed pairwise tree, independent of thread count.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Midpoint rule on each oriented triangle: `½ ω(centroid)(b − a, c − a)`.
pub fn flux(form: &dyn TwoForm, mesh: &SurfaceMesh) -> Result<f64> {
    let d = mesh.distance_to(&Vec3::zeros());
    if d < form.r_min() {
        return Err(Error::SingularSurface(format!(
            "surface passes within {d:.3e} of the origin (r_min = {:.3e})",
            form.r_min()
        )));
    }
    let terms = mesh
        .triangles
        .iter()
        .map(|t| {
            let [a, b, c] = mesh.corners(t);
            let centroid = (a + b + c) / 3.0;
            form.eval(&centroid, &(b - a), &(c - a)).map(|v| 0.5 * v)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&terms))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxReport {
    pub triangles: usize,
    pub closed: bool,
    pub flux: f64,
    pub expected: f64,
    pub error: f64,
    pub tolerance: f64,
    pub relative: bool,
    pub passed: bool,
}

impl FluxReport {
    pub fn compare(
        mesh: &SurfaceMesh,
        flux: f64,
        expected: f64,
        tolerance: f64,
        relative: bool,
    ) -> Self {
        let error = if relative {
            (flux - expected).abs() / expected.abs()
        } else {
            (flux - expected).abs()
        };
        FluxReport {
            triangles: mesh.triangles.len(),
            closed: mesh.is_closed(),
            flux,
            expected,
            error,
            tolerance,
            relative,
            passed: error <= tolerance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::mesh::icosphere;
    use super::*;

    fn form(n: f64) -> PhaseSpaceForm {
        PhaseSpaceForm {
            params: MonopoleParams::new(1.3, n).unwrap(),
        }
    }

    #[test]
    fn antisymmetric() {
        let f = form(0.7);
        let x = Vec3::new(0.3, 1.0, -0.2);
        let (u, w) = (Vec3::new(1.0, 0.2, 0.0), Vec3::new(-0.3, 0.5, 0.9));
        let (du, dw) = (Vec3::new(0.1, 0.0, 0.3), Vec3::new(0.0, -0.4, 0.2));
        let a = f.eval6(&x, (&u, &du), (&w, &dw)).unwrap();
        let b = f.eval6(&x, (&w, &dw), (&u, &du)).unwrap();
        assert!((a + b).abs() < 1e-15);
    }

    #[test]
    fn enclosing_sphere_and_orientation() {
        let m = icosphere(4, Vec3::zeros(), 1.0);
        let f = flux(&form(1.0), &m).unwrap();
        assert!(
            (f + 4.0 * std::f64::consts::PI).abs() < 4e-3 * 4.0 * std::f64::consts::PI,
            "{f}"
        );
        assert_eq!(flux(&form(1.0), &m.flipped()).unwrap(), -f);
    }

    #[test]
    fn restriction_is_field_part() {
        let m = icosphere(2, Vec3::new(0.3, 0.0, 0.1), 1.5);
        let a = flux(&form(0.9), &m).unwrap();
        let b = flux(
            &MagneticForm {
                n: 0.9,
                r_min: 1e-4,
            },
            &m,
        )
        .unwrap();
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn singular_surface() {
        let m = icosphere(1, Vec3::new(1.0, 0.0, 0.0), 1.0);
        assert!(matches!(
            flux(&form(1.0), &m),
            Err(Error::SingularSurface(_))
        ));
    }
}
