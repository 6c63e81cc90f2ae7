//! The proper orthochronous Lorentz group with η = diag(−1, 1, 1, 1).
//!
//! Frames are stored as real matrices `Λ^a_b` acting on contravariant vectors.
//! Generators are the real mixed-index matrices `K^{ab} = iσ^{ab}`, so a frame
//! near the identity is `exp(Σ_{a<b} ε_{ab} K^{ab})`.

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Mat4 = Matrix4<f64>;

/// Index pairs `(a, b)` matching the six coefficients of [`lorentz_exp`].
pub const GENERATOR_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Compositions between two re-orthonormalizations.
pub const PROJECTION_PERIOD: u32 = 16;

pub fn eta() -> Mat4 {
    Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

/// Minkowski inner product `η_ab u^a v^b`.
pub fn mdot(u: &Vector4<f64>, v: &Vector4<f64>) -> f64 {
    -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]
}

/// Lowers (or raises) the index of a 4-vector.
pub fn lower(u: &Vector4<f64>) -> Vector4<f64> {
    Vector4::new(-u[0], u[1], u[2], u[3])
}

/// `iσ^{ab}` as a real mixed-index matrix:
/// `(K^{ab})^c_d = η^{cc'}(δ^a_{c'}δ^b_d − δ^a_dδ^b_{c'})`.
pub fn lorentz_generator(a: usize, b: usize) -> Result<Mat4> {
    if a > 3 || b > 3 {
        return Err(Error::InvalidArgument(format!(
            "Lorentz index out of range: ({a}, {b})"
        )));
    }
    let eta = eta();
    let mut k = Mat4::zeros();
    for c in 0..4 {
        for d in 0..4 {
            let delta =
                f64::from(u8::from(a == c && b == d)) - f64::from(u8::from(a == d && b == c));
            k[(c, d)] = eta[(c, c)] * delta;
        }
    }
    Ok(k)
}

/// `Σ_{a<b} ε_{ab} K^{ab}` with coefficients ordered as [`GENERATOR_PAIRS`].
pub fn algebra_element(coeffs: &[f64; 6]) -> Mat4 {
    let mut m = Mat4::zeros();
    for (c, &(a, b)) in coeffs.iter().zip(GENERATOR_PAIRS.iter()) {
        m += lorentz_generator(a, b).expect("static indices") * *c;
    }
    m
}

/// Coefficients of an so(1,3) matrix in the [`GENERATOR_PAIRS`] basis.
pub fn algebra_coeffs(m: &Mat4) -> [f64; 6] {
    // K^{0i} has (K)^i_0 = −1; K^{ij} has (K)^i_j = 1
    let mut c = [0.0; 6];
    for (k, &(a, b)) in GENERATOR_PAIRS.iter().enumerate() {
        c[k] = if a == 0 { -m[(b, 0)] } else { m[(a, b)] };
    }
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LorentzFrame {
    m: Mat4,
    #[serde(skip)]
    since_projection: u32,
}

impl Default for LorentzFrame {
    fn default() -> Self {
        Self::identity()
    }
}

impl LorentzFrame {
    pub fn identity() -> Self {
        LorentzFrame {
            m: Mat4::identity(),
            since_projection: 0,
        }
    }

    /// Accepts a matrix within 1e-6 of L₊↑ and projects it onto the group.
    pub fn from_matrix(m: Mat4) -> Result<Self> {
        if !m.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite Lorentz matrix".into()));
        }
        let f = LorentzFrame {
            m,
            since_projection: 0,
        }
        .projected();
        if f.defect() > 1e-10 || (m - f.m).amax() > 1e-6 {
            return Err(Error::InvalidArgument(
                "matrix is not a Lorentz transformation".into(),
            ));
        }
        if f.m.determinant() < 0.0 || f.m[(0, 0)] < 1.0 {
            return Err(Error::InvalidArgument(
                "frame is not proper orthochronous".into(),
            ));
        }
        Ok(f)
    }

    pub(crate) fn from_matrix_unchecked(m: Mat4) -> Self {
        LorentzFrame {
            m,
            since_projection: PROJECTION_PERIOD,
        }
        .maybe_project()
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    pub fn column(&self, k: usize) -> Vector4<f64> {
        self.m.column(k).into_owned()
    }

    /// `Λ⁻¹ = η Λᵀ η`.
    pub fn inverse(&self) -> Self {
        let e = eta();
        LorentzFrame {
            m: e * self.m.transpose() * e,
            since_projection: self.since_projection,
        }
    }

    /// `self · other`, re-orthonormalized every [`PROJECTION_PERIOD`] compositions.
    pub fn compose(&self, other: &LorentzFrame) -> LorentzFrame {
        LorentzFrame {
            m: self.m * other.m,
            since_projection: self.since_projection.max(other.since_projection) + 1,
        }
        .maybe_project()
    }

    /// `exp(Ω)·self` for an so(1,3) matrix Ω.
    pub fn left_exp(&self, omega: &Mat4) -> LorentzFrame {
        let g = LorentzFrame {
            m: omega.exp(),
            since_projection: 0,
        };
        g.compose(self)
    }

    /// Max-abs entry of `ΛᵀηΛ − η`.
    pub fn defect(&self) -> f64 {
        let e = eta();
        (self.m.transpose() * e * self.m - e).amax()
    }

    fn maybe_project(mut self) -> Self {
        if self.since_projection >= PROJECTION_PERIOD {
            self = self.projected();
        }
        self
    }

    /// Newton iteration `Λ ← ½Λ(3 − ηΛᵀηΛ)`, the Lorentzian analogue of the
    /// polar projection; converges quadratically from near the group.
    pub fn projected(&self) -> LorentzFrame {
        let e = eta();
        let mut m = self.m;
        for _ in 0..8 {
            let g = e * m.transpose() * e * m;
            let err = (g - Mat4::identity()).amax();
            if err < 1e-16 {
                break;
            }
            m = m * (Mat4::identity() * 3.0 - g) * 0.5;
        }
        LorentzFrame {
            m,
            since_projection: 0,
        }
    }
}

/// `exp(Σ ε_{ab} K^{ab})` for the six coefficients in [`GENERATOR_PAIRS`] order.
pub fn lorentz_exp(coeffs: &[f64; 6]) -> LorentzFrame {
    LorentzFrame {
        m: algebra_element(coeffs).exp(),
        since_projection: PROJECTION_PERIOD,
    }
    .maybe_project()
}

/// Totally antisymmetric symbol with `ε_0123 = +1`.
pub fn levi_civita4(a: usize, b: usize, c: usize, d: usize) -> f64 {
    let p = [a, b, c, d];
    if p.iter().any(|&i| i > 3) {
        return 0.0;
    }
    let mut sign = 1.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if p[i] == p[j] {
                return 0.0;
            }
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `p^a = m Λ^a_0`.
pub fn frame_momentum(frame: &LorentzFrame, m: f64) -> Vector4<f64> {
    frame.column(0) * m
}

/// `S^{ab} = λ(Λ^a_1Λ^b_2 − Λ^a_2Λ^b_1)`.
pub fn frame_spin(frame: &LorentzFrame, lambda: f64) -> Mat4 {
    let (e1, e2) = (frame.column(1), frame.column(2));
    (e1 * e2.transpose() - e2 * e1.transpose()) * lambda
}

/// Lowers both indices of a rank-2 tensor.
pub fn lower2(t: &Mat4) -> Mat4 {
    let e = eta();
    e * t * e
}

/// `½ S_ab S^{ab}`.
pub fn half_square(s: &Mat4) -> f64 {
    0.5 * lower2(s).component_mul(s).sum()
}

/// `p_a S^{ab}`.
pub fn contract_momentum(p: &Vector4<f64>, s: &Mat4) -> Vector4<f64> {
    s.transpose() * lower(p)
}

/// `M^{ab} = z^a p^b − z^b p^a + S^{ab}`.
pub fn total_angular_momentum(z: &Vector4<f64>, p: &Vector4<f64>, s: &Mat4) -> Mat4 {
    z * p.transpose() - p * z.transpose() + s
}

/// Covariant `W_a = ½ ε_abcd M^{bc} p^d`.
pub fn pauli_lubanski(m_ab: &Mat4, p: &Vector4<f64>) -> Vector4<f64> {
    let mut w = Vector4::zeros();
    for a in 0..4 {
        let mut acc = 0.0;
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let e = levi_civita4(a, b, c, d);
                    if e != 0.0 {
                        acc += e * m_ab[(b, c)] * p[d];
                    }
                }
            }
        }
        w[a] = 0.5 * acc;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series_exp(m: &Mat4) -> Mat4 {
        let mut term = Mat4::identity();
        let mut sum = Mat4::identity();
        for k in 1..80 {
            term = term * m / k as f64;
            sum += term;
        }
        sum
    }

    #[test]
    fn generator_antisymmetry_and_range() {
        for a in 0..4 {
            assert_eq!(lorentz_generator(a, a).unwrap(), Mat4::zeros());
            for b in 0..4 {
                let k = lorentz_generator(a, b).unwrap() + lorentz_generator(b, a).unwrap();
                assert_eq!(k, Mat4::zeros());
            }
        }
        assert!(lorentz_generator(4, 0).is_err());
    }

    #[test]
    fn generators_close_under_commutator() {
        let e = eta();
        let low = |a: usize, b: usize| lorentz_generator(a, b).unwrap() * e[(a, a)] * e[(b, b)];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let lhs = low(a, b) * low(c, d) - low(c, d) * low(a, b);
                        let rhs =
                            low(a, d) * e[(b, c)] - low(a, c) * e[(b, d)] - low(b, d) * e[(a, c)]
                                + low(b, c) * e[(a, d)];
                        assert!((lhs - rhs).amax() < 1e-15, "{a}{b}{c}{d}");
                    }
                }
            }
        }
    }

    #[test]
    fn rotation_generator_rotates_in_plane() {
        let theta = 0.7;
        let k = lorentz_generator(1, 2).unwrap() * theta;
        let r = series_exp(&k);
        // K^{12} turns e₂ toward e₁
        let v = r * Vector4::new(0.0, 0.0, 1.0, 0.0);
        assert!((v - Vector4::new(0.0, theta.sin(), theta.cos(), 0.0)).amax() < 1e-15);
        assert!((r * Vector4::new(0.0, 0.0, 0.0, 1.0))[3] == 1.0);
        let f = lorentz_exp(&[0.0, 0.0, 0.0, theta, 0.0, 0.0]);
        assert!((f.matrix() - r).amax() < 1e-14);
        assert!((f.column(0) - Vector4::new(1.0, 0.0, 0.0, 0.0)).amax() < 1e-15);
    }

    #[test]
    fn boost_has_cosh_rapidity() {
        let phi = 1.3;
        let f = lorentz_exp(&[phi, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let m = f.matrix();
        assert!((m[(0, 0)] - phi.cosh()).abs() < 1e-13);
        assert!((m[(1, 0)].abs() - phi.sinh()).abs() < 1e-13);
        assert!(f.defect() < 1e-13);
        assert_eq!(lorentz_exp(&[0.0; 6]).matrix(), &Mat4::identity());
    }

    #[test]
    fn coefficient_roundtrip() {
        let c = [0.1, -0.2, 0.3, 0.4, -0.5, 0.6];
        let back = algebra_coeffs(&algebra_element(&c));
        for k in 0..6 {
            assert!((back[k] - c[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn projection_repairs_drift() {
        let f = lorentz_exp(&[0.3, -0.2, 0.5, 1.0, 0.1, -0.7]);
        let mut m = *f.matrix();
        m[(1, 2)] += 1e-7;
        m[(0, 3)] -= 2e-7;
        let p = LorentzFrame {
            m,
            since_projection: 0,
        }
        .projected();
        assert!(p.defect() < 1e-14);
        assert!((p.matrix() - f.matrix()).amax() < 1e-6);
    }

    #[test]
    fn levi_civita_signs() {
        assert_eq!(levi_civita4(0, 1, 2, 3), 1.0);
        assert_eq!(levi_civita4(1, 0, 2, 3), -1.0);
        assert_eq!(levi_civita4(3, 0, 1, 2), -1.0);
        assert_eq!(levi_civita4(0, 0, 1, 2), 0.0);
    }

    #[test]
    fn rest_frame_pauli_lubanski() {
        let (m, lambda) = (2.0, 0.5);
        let f = LorentzFrame::identity();
        let p = frame_momentum(&f, m);
        let s = frame_spin(&f, lambda);
        let w = pauli_lubanski(&total_angular_momentum(&Vector4::zeros(), &p, &s), &p);
        assert!((w - Vector4::new(0.0, 0.0, 0.0, -m * lambda)).amax() < 1e-15);
    }
}
