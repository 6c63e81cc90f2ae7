//! SU(2) as unit quaternions.
//!
//! A point `(w, a, b, c)` stands for the matrix `s = w·1 − i(aσ₁ + bσ₂ + cσ₃)`.
//! Under this identification `−iσ₁, −iσ₂, −iσ₃` multiply like the quaternion
//! units `i, j, k`, so matrix products are Hamilton products.

use std::ops::Mul;

use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Element of su(2) in rotation-vector form, or any 3-vector living in the
/// adjoint representation (spin, isospin, unit directions).
///
/// The vector `v` stands for the algebra element `X_v = −(i/2) v·σ`, so
/// `[X_a, X_b] = X_{a×b}`.
pub type Su2Vector = Vector3<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupPoint {
    q: [f64; 4],
}

impl Default for GroupPoint {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl GroupPoint {
    pub const IDENTITY: GroupPoint = GroupPoint {
        q: [1.0, 0.0, 0.0, 0.0],
    };

    /// Normalizes `(w, a, b, c)` onto the unit sphere.
    pub fn new(w: f64, a: f64, b: f64, c: f64) -> Result<Self> {
        let n = (w * w + a * a + b * b + c * c).sqrt();
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::InvalidArgument(format!(
                "quaternion ({w}, {a}, {b}, {c}) cannot be normalized"
            )));
        }
        Ok(GroupPoint {
            q: [w / n, a / n, b / n, c / n],
        })
    }

    pub(crate) fn normalized(q: [f64; 4]) -> Self {
        let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
        GroupPoint {
            q: [q[0] / n, q[1] / n, q[2] / n, q[3] / n],
        }
    }

    pub fn q(&self) -> [f64; 4] {
        self.q
    }

    pub fn w(&self) -> f64 {
        self.q[0]
    }

    /// Vector part `(a, b, c)`.
    pub fn vector(&self) -> Su2Vector {
        Vector3::new(self.q[1], self.q[2], self.q[3])
    }

    pub fn norm_defect(&self) -> f64 {
        let q = self.q;
        (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3] - 1.0).abs()
    }

    pub fn inverse(&self) -> Self {
        GroupPoint {
            q: [self.q[0], -self.q[1], -self.q[2], -self.q[3]],
        }
    }

    pub fn neg(&self) -> Self {
        GroupPoint {
            q: self.q.map(|x| -x),
        }
    }

    pub fn compose(&self, other: &GroupPoint) -> GroupPoint {
        GroupPoint::normalized(hamilton(self.q, other.q))
    }

    /// The 2×2 complex matrix `w·1 − i(aσ₁ + bσ₂ + cσ₃)`.
    pub fn to_matrix(&self) -> Matrix2<Complex64> {
        let [w, a, b, c] = self.q;
        Matrix2::identity() * Complex64::new(w, 0.0)
            - sigma_dot(&Vector3::new(a, b, c)) * Complex64::i()
    }

    /// Inverse of [`GroupPoint::to_matrix`]; the input is projected onto SU(2).
    pub fn from_matrix(m: &Matrix2<Complex64>) -> Result<Self> {
        let w = 0.5 * (m[(0, 0)] + m[(1, 1)]).re;
        let c = -0.5 * (m[(0, 0)] - m[(1, 1)]).im;
        let a = -0.5 * (m[(0, 1)] + m[(1, 0)]).im;
        let b = 0.5 * (m[(1, 0)] - m[(0, 1)]).re;
        GroupPoint::new(w, a, b, c)
    }

    /// Largest component difference, identifying `q` with `−q`.
    pub fn distance_projective(&self, other: &GroupPoint) -> f64 {
        let d = |sign: f64| {
            (0..4)
                .map(|k| (self.q[k] - sign * other.q[k]).abs())
                .fold(0.0, f64::max)
        };
        d(1.0).min(d(-1.0))
    }

    pub fn distance(&self, other: &GroupPoint) -> f64 {
        (0..4)
            .map(|k| (self.q[k] - other.q[k]).abs())
            .fold(0.0, f64::max)
    }
}

impl Mul for GroupPoint {
    type Output = GroupPoint;
    fn mul(self, rhs: GroupPoint) -> GroupPoint {
        self.compose(&rhs)
    }
}

pub(crate) fn hamilton(p: [f64; 4], q: [f64; 4]) -> [f64; 4] {
    [
        p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
        p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
        p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
        p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0],
    ]
}

/// Pauli matrices σ₁, σ₂, σ₃.
pub fn pauli() -> [Matrix2<Complex64>; 3] {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        Matrix2::new(o, l, l, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(l, o, o, -l),
    ]
}

/// `v·σ` as a 2×2 matrix.
pub fn sigma_dot(v: &Su2Vector) -> Matrix2<Complex64> {
    let s = pauli();
    s[0] * Complex64::from(v[0]) + s[1] * Complex64::from(v[1]) + s[2] * Complex64::from(v[2])
}

/// Components `v_k = ½ Tr[σ_k M]` of a traceless Hermitian matrix.
pub fn sigma_components(m: &Matrix2<Complex64>) -> Su2Vector {
    let s = pauli();
    Vector3::from_fn(|k, _| 0.5 * (s[k] * m).trace().re)
}

/// `exp(−i v·σ / 2)`: rotation by `|v|` about `v̂` under [`rotate_vector`].
pub fn su2_exp(v: &Su2Vector) -> Result<GroupPoint> {
    if !v.iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "non-finite su(2) vector {v:?}"
        )));
    }
    Ok(exp_finite(v))
}

pub(crate) fn exp_finite(v: &Su2Vector) -> GroupPoint {
    let theta = v.norm();
    let half = 0.5 * theta;
    // sin(θ/2)/θ without cancellation near zero
    let k = if theta < 1e-4 {
        0.5 - theta * theta / 48.0 + theta.powi(4) / 3840.0
    } else {
        half.sin() / theta
    };
    GroupPoint::normalized([half.cos(), k * v[0], k * v[1], k * v[2]])
}

/// Principal logarithm: the `v` with `|v| ≤ 2π` and `su2_exp(v) = s`.
pub fn su2_log(s: &GroupPoint) -> Su2Vector {
    let u = s.vector();
    let sn = u.norm();
    if sn < 1e-300 {
        return Su2Vector::zeros();
    }
    let theta = 2.0 * sn.atan2(s.w());
    u * (theta / sn)
}

/// The vector `w` with `w·σ = s (u·σ) s⁻¹`.
pub fn rotate_vector(s: &GroupPoint, u: &Su2Vector) -> Su2Vector {
    let w = s.w();
    let v = s.vector();
    let t = v.cross(u) * 2.0;
    u + t * w + v.cross(&t)
}

/// Base point `x̂` with `x̂·σ = s σ₃ s⁻¹`.
pub fn hopf_project(s: &GroupPoint) -> Su2Vector {
    let [w, a, b, c] = s.q;
    Vector3::new(
        2.0 * (a * c + w * b),
        2.0 * (b * c - w * a),
        w * w - a * a - b * b + c * c,
    )
}

/// Lie bracket in rotation-vector form.
pub fn bracket(a: &Su2Vector, b: &Su2Vector) -> Su2Vector {
    a.cross(b)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn series_exp(m: &Matrix2<Complex64>) -> Matrix2<Complex64> {
        let mut term = Matrix2::identity();
        let mut sum = Matrix2::identity();
        for k in 1..60 {
            term = term * m / Complex64::from(k as f64);
            sum += term;
        }
        sum
    }

    fn matrix_of(v: &Su2Vector) -> Matrix2<Complex64> {
        sigma_dot(v) * Complex64::new(0.0, -0.5)
    }

    #[test]
    fn exp_matches_power_series() {
        for v in [
            Su2Vector::new(0.0, 0.0, PI),
            Su2Vector::new(0.3, -1.2, 2.0),
            Su2Vector::new(1e-7, 2e-7, -1e-7),
        ] {
            let m = series_exp(&matrix_of(&v));
            let s = su2_exp(&v).unwrap().to_matrix();
            assert!((m - s).norm() < 1e-14, "{v:?}");
        }
        let q = su2_exp(&Su2Vector::new(0.0, 0.0, PI)).unwrap().q();
        assert!((q[0]).abs() < 1e-16 && (q[3] - 1.0).abs() < 1e-16);
    }

    #[test]
    fn exp_composes_along_one_axis() {
        let h = su2_exp(&Su2Vector::new(PI / 2.0, 0.0, 0.0)).unwrap();
        let f = su2_exp(&Su2Vector::new(PI, 0.0, 0.0)).unwrap();
        assert!((h * h).distance(&f) < 1e-15);
        assert_eq!(su2_exp(&Su2Vector::zeros()).unwrap(), GroupPoint::IDENTITY);
        assert!(su2_exp(&Su2Vector::new(f64::NAN, 0.0, 0.0)).is_err());
    }

    #[test]
    fn rotation_matches_matrix_conjugation() {
        let s = su2_exp(&Su2Vector::new(0.0, 0.0, PI / 2.0)).unwrap();
        let u = Su2Vector::new(1.0, 0.0, 0.0);
        let m = s.to_matrix() * sigma_dot(&u) * s.inverse().to_matrix();
        let oracle = sigma_components(&m);
        let w = rotate_vector(&s, &u);
        assert!((w - oracle).norm() < 1e-15);
        assert!((w - Su2Vector::new(0.0, 1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hopf_projection_is_sigma3_conjugate() {
        let s = GroupPoint::new(0.3, -0.5, 0.7, 0.1).unwrap();
        let m = s.to_matrix() * pauli()[2] * s.to_matrix().adjoint();
        assert!((hopf_project(&s) - sigma_components(&m)).norm() < 1e-15);
        assert_eq!(
            hopf_project(&GroupPoint::IDENTITY),
            Su2Vector::new(0.0, 0.0, 1.0)
        );
    }

    #[test]
    fn matrix_roundtrip_and_log() {
        let s = GroupPoint::new(-0.2, 0.4, 0.1, -0.8).unwrap();
        let back = GroupPoint::from_matrix(&s.to_matrix()).unwrap();
        assert!(s.distance(&back) < 1e-15);
        let v = su2_log(&s);
        assert!(su2_exp(&v).unwrap().distance(&s) < 1e-14);
    }

    #[test]
    fn bracket_is_matrix_commutator() {
        let a = Su2Vector::new(0.3, 1.0, -0.4);
        let b = Su2Vector::new(-1.1, 0.2, 0.9);
        let (ma, mb) = (matrix_of(&a), matrix_of(&b));
        let c = ma * mb - mb * ma;
        assert!((c - matrix_of(&bracket(&a, &b))).norm() < 1e-15);
    }
}
