//! Grassmann algebra on up to six generators with complex coefficients, and
//! the spin bilinear identities built from odd elements.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::{Rng, RngExt};

use crate::{Error, Result, Vec3};

pub const MAX_GENERATORS: usize = 6;

/// Dense element: `coeffs[mask]` multiplies the ordered monomial
/// `θ_{i₁} θ_{i₂} ⋯` of the generators whose bits are set in `mask`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannElement {
    k: usize,
    coeffs: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grade {
    Zero,
    Even,
    Odd,
    Mixed,
}

/// Sign of `θ_A θ_B` after sorting into a single ordered monomial.
fn shuffle_sign(a: usize, b: usize) -> f64 {
    let mut swaps = 0;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 { 1.0 } else { -1.0 }
}

impl GrassmannElement {
    pub fn zero(k: usize) -> Result<Self> {
        if k > MAX_GENERATORS {
            return Err(Error::InvalidArgument(format!(
                "at most {MAX_GENERATORS} generators, got {k}"
            )));
        }
        Ok(GrassmannElement {
            k,
            coeffs: vec![Complex64::new(0.0, 0.0); 1 << k],
        })
    }

    pub fn scalar(k: usize, c: Complex64) -> Result<Self> {
        let mut e = Self::zero(k)?;
        e.coeffs[0] = c;
        Ok(e)
    }

    /// Generator `θ_i`, counted from zero.
    pub fn generator(k: usize, i: usize) -> Result<Self> {
        if i >= k {
            return Err(Error::InvalidArgument(format!(
                "generator {i} out of range for k = {k}"
            )));
        }
        let mut e = Self::zero(k)?;
        e.coeffs[1 << i] = Complex64::new(1.0, 0.0);
        Ok(e)
    }

    pub fn from_coeffs(k: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if k > MAX_GENERATORS || coeffs.len() != 1 << k {
            return Err(Error::InvalidArgument(format!(
                "need 2^{k} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(GrassmannElement { k, coeffs })
    }

    pub fn generators(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> Complex64 {
        self.coeffs[mask]
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::InvalidArgument(format!(
                "mismatched generator counts {} and {}",
                self.k, other.k
            )));
        }
        let mut out = Self::zero(self.k)?;
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.norm_sqr() == 0.0 {
                continue;
            }
            for (b, cb) in other.coeffs.iter().enumerate() {
                if a & b != 0 || cb.norm_sqr() == 0.0 {
                    continue;
                }
                out.coeffs[a | b] += ca * cb * shuffle_sign(a, b);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GrassmannElement {
            k: self.k,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn grade(&self) -> Grade {
        let (mut even, mut odd) = (false, false);
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.norm_sqr() != 0.0 {
                if m.count_ones() % 2 == 0 {
                    even = true;
                } else {
                    odd = true;
                }
            }
        }
        match (even, odd) {
            (false, false) => Grade::Zero,
            (true, false) => Grade::Even,
            (false, true) => Grade::Odd,
            (true, true) => Grade::Mixed,
        }
    }

    pub fn is_odd(&self) -> bool {
        matches!(self.grade(), Grade::Odd | Grade::Zero)
    }

    pub fn is_even(&self) -> bool {
        matches!(self.grade(), Grade::Even | Grade::Zero)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Random element of the given parity with real coefficients in `[−1, 1]`.
    pub fn random<R: Rng>(k: usize, odd: bool, rng: &mut R) -> Result<Self> {
        let mut e = Self::zero(k)?;
        for (m, c) in e.coeffs.iter_mut().enumerate() {
            if (m.count_ones() % 2 == 1) == odd {
                *c = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
            }
        }
        Ok(e)
    }
}

fn same_k(a: &GrassmannElement, b: &GrassmannElement) {
    assert_eq!(a.k, b.k, "mismatched generator counts");
}

impl Add for &GrassmannElement {
    type Output = GrassmannElement;
    fn add(self, rhs: Self) -> GrassmannElement {
        same_k(self, rhs);
        GrassmannElement {
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &GrassmannElement {
    type Output = GrassmannElement;
    fn sub(self, rhs: Self) -> GrassmannElement {
        same_k(self, rhs);
        GrassmannElement {
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &GrassmannElement {
    type Output = GrassmannElement;
    fn neg(self) -> GrassmannElement {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Panics on mismatched generator counts; [`GrassmannElement::product`] is
/// the fallible form.
impl Mul for &GrassmannElement {
    type Output = GrassmannElement;
    fn mul(self, rhs: Self) -> GrassmannElement {
        self.product(rhs).expect("mismatched generator counts")
    }
}

const EPS: [(usize, usize, usize); 6] = [
    (0, 1, 2),
    (1, 2, 0),
    (2, 0, 1),
    (0, 2, 1),
    (2, 1, 0),
    (1, 0, 2),
];

fn eps_sign(i: usize) -> f64 {
    if i < 3 { 1.0 } else { -1.0 }
}

fn check_odd(f: &[GrassmannElement; 3]) -> Result<()> {
    for (i, x) in f.iter().enumerate() {
        if !x.is_odd() {
            return Err(Error::Grade(format!("f[{i}] is not odd")));
        }
    }
    if f[0].k != f[1].k || f[1].k != f[2].k {
        return Err(Error::InvalidArgument("mismatched generator counts".into()));
    }
    Ok(())
}

/// `Σ_bc ε_abc x_b y_c` for each `a`.
fn eps_pair(x: &[GrassmannElement; 3], y: &[GrassmannElement; 3]) -> [GrassmannElement; 3] {
    let k = x[0].k;
    let mut out: [GrassmannElement; 3] =
        std::array::from_fn(|_| GrassmannElement::zero(k).expect("k checked"));
    for (n, &(a, b, c)) in EPS.iter().enumerate() {
        let term = (&x[b] * &y[c]).scale(Complex64::new(eps_sign(n), 0.0));
        out[a] = &out[a] + &term;
    }
    out
}

/// `S_a = −(i/2) ε_abc f_b f_c`.
pub fn spin_bilinear(f: &[GrassmannElement; 3]) -> Result<[GrassmannElement; 3]> {
    check_odd(f)?;
    Ok(eps_pair(f, f).map(|s| s.scale(Complex64::new(0.0, -0.5))))
}

/// `ε_abc x_b B_c` for a numeric vector `B`.
fn eps_vec(x: &[GrassmannElement; 3], b: &Vec3) -> [GrassmannElement; 3] {
    let k = x[0].k;
    let mut out: [GrassmannElement; 3] =
        std::array::from_fn(|_| GrassmannElement::zero(k).expect("k checked"));
    for (n, &(a, bi, c)) in EPS.iter().enumerate() {
        out[a] = &out[a] + &x[bi].scale(Complex64::new(eps_sign(n) * b[c], 0.0));
    }
    out
}

/// Largest coefficient of `Ṡ_a − μ ε_abc B_b S_c`, with `Ṡ` obtained from
/// `ḟ_a = −μ ε_abc f_b B_c` by the product rule.
pub fn precession_consistency(b: &Vec3, mu: f64, f: &[GrassmannElement; 3]) -> Result<f64> {
    check_odd(f)?;
    let fdot = eps_vec(f, b).map(|x| x.scale(Complex64::new(-mu, 0.0)));
    let a = eps_pair(&fdot, f);
    let c = eps_pair(f, &fdot);
    let sdot: Vec<GrassmannElement> = (0..3)
        .map(|i| (&a[i] + &c[i]).scale(Complex64::new(0.0, -0.5)))
        .collect();
    let s = spin_bilinear(f)?;
    // μ ε_abc B_b S_c = −μ ε_acb S_c B_b
    let rhs = eps_vec(&s, b).map(|x| x.scale(Complex64::new(-mu, 0.0)));
    Ok((0..3)
        .map(|i| (&sdot[i] - &rhs[i]).max_abs())
        .fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolarForm {
    /// `ξ = f_⊥ / (2r√m)`.
    Perpendicular,
    /// `ξ = x̂ × f / (2r√m)`.
    Cross,
}

pub fn polar_xi(
    xhat: &Vec3,
    f: &[GrassmannElement; 3],
    r: f64,
    m: f64,
    form: PolarForm,
) -> Result<[GrassmannElement; 3]> {
    check_odd(f)?;
    if !(r > 0.0) || !(m > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need r > 0 and m > 0, got r = {r}, m = {m}"
        )));
    }
    let c = Complex64::new(1.0 / (2.0 * r * m.sqrt()), 0.0);
    let k = f[0].k;
    let along = (0..3).fold(GrassmannElement::zero(k)?, |acc, i| {
        &acc + &f[i].scale(Complex64::new(xhat[i], 0.0))
    });
    let xi: [GrassmannElement; 3] = match form {
        PolarForm::Perpendicular => {
            std::array::from_fn(|a| &f[a] - &along.scale(Complex64::new(xhat[a], 0.0)))
        }
        PolarForm::Cross => {
            let e = eps_vec(f, xhat);
            std::array::from_fn(|a| -&e[a])
        }
    };
    Ok(xi.map(|x| x.scale(c)))
}

/// Largest coefficient of `ε_abc x̂_a f_b f_c − 4mr² ε_abc x̂_a ξ_b ξ_c`.
pub fn polar_residual(
    xhat: &Vec3,
    f: &[GrassmannElement; 3],
    xi: &[GrassmannElement; 3],
    r: f64,
    m: f64,
) -> f64 {
    let dot = |v: [GrassmannElement; 3]| {
        (0..3).fold(
            GrassmannElement::zero(v[0].k).expect("k checked"),
            |acc, i| &acc + &v[i].scale(Complex64::new(xhat[i], 0.0)),
        )
    };
    let lhs = dot(eps_pair(f, f));
    let rhs = dot(eps_pair(xi, xi)).scale(Complex64::new(4.0 * m * r * r, 0.0));
    (&lhs - &rhs).max_abs()
}

/// The identity with `ξ_a = (f_a − x̂_a (x̂·f)) / (2r√m)`.
pub fn polar_identity_check(xhat: &Vec3, f: &[GrassmannElement; 3], r: f64, m: f64) -> Result<f64> {
    let xi = polar_xi(xhat, f, r, m, PolarForm::Perpendicular)?;
    Ok(polar_residual(xhat, f, &xi, r, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn theta(k: usize, i: usize) -> GrassmannElement {
        GrassmannElement::generator(k, i).unwrap()
    }

    fn thetas() -> [GrassmannElement; 3] {
        std::array::from_fn(|i| theta(3, i))
    }

    #[test]
    fn anticommutation() {
        let (a, b) = (theta(3, 0), theta(3, 1));
        assert_eq!(&a * &b, -&(&b * &a));
        assert_eq!((&a * &a).max_abs(), 0.0);
        assert!(a.product(&theta(4, 0)).is_err());
    }

    #[test]
    fn expansion_of_products() {
        let one = GrassmannElement::scalar(3, Complex64::new(1.0, 0.0)).unwrap();
        let p = (0..3).fold(one.clone(), |acc, i| &acc * &(&one + &theta(3, i)));
        assert!(p.coeffs().iter().all(|c| *c == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn spin_of_generators() {
        let s = spin_bilinear(&thetas()).unwrap();
        // S₃ = −(i/2)(θ₁θ₂ − θ₂θ₁) = −i θ₁θ₂
        assert_eq!(s[2].coeff(0b011), Complex64::new(0.0, -1.0));
        assert_eq!(s[2].max_abs(), 1.0);
        assert!(s.iter().all(|x| x.is_even()));
        let even = [
            GrassmannElement::scalar(3, Complex64::new(1.0, 0.0)).unwrap(),
            theta(3, 0),
            theta(3, 1),
        ];
        assert!(matches!(spin_bilinear(&even), Err(Error::Grade(_))));
    }

    #[test]
    fn precession_and_polar_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let f: [GrassmannElement; 3] =
                std::array::from_fn(|_| GrassmannElement::random(6, true, &mut rng).unwrap());
            let b = Vec3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            assert!(precession_consistency(&b, 0.7, &f).unwrap() < 1e-12);
            let xhat = Vec3::new(0.3, -0.5, 0.8).normalize();
            assert!(polar_identity_check(&xhat, &f, 1.7, 2.3).unwrap() < 1e-12);
            let xi = polar_xi(&xhat, &f, 1.7, 2.3, PolarForm::Cross).unwrap();
            assert!(polar_residual(&xhat, &f, &xi, 1.7, 2.3) < 1e-12);
        }
    }

    #[test]
    fn shuffle_sign_examples() {
        assert_eq!(shuffle_sign(0b010, 0b001), -1.0);
        assert_eq!(shuffle_sign(0b001, 0b010), 1.0);
        assert_eq!(shuffle_sign(0b110, 0b001), 1.0);
    }
}
