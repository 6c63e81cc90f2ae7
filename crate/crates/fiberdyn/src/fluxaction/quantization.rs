use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

pub const RATIONAL_TOL: f64 = 1e-9;
pub const DENOMINATOR_CAP: i128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantizationReport {
    pub charges: Vec<f64>,
    pub commensurable: bool,
    /// Largest `λ_w` with every `2n_i` an integer multiple of it.
    pub lambda_w: Option<f64>,
    /// `n_i / n_ref` as `(numerator, denominator)` when rational.
    pub ratios: Vec<Option<(i64, i64)>>,
}

/// Continued-fraction expansion of `x`, stopping when the remainder falls
/// below `tol` (rational) or the convergent denominator passes `cap`.
pub fn rational_approx(x: f64, tol: f64, cap: i128) -> Option<Ratio<i128>> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let a = a as i128;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > cap {
            return None;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = y - a as f64;
        if frac.abs() < tol {
            return Some(Ratio::new(p1, q1));
        }
        y = 1.0 / frac;
    }
    None
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn ratio_gcd(a: Ratio<i128>, b: Ratio<i128>) -> Ratio<i128> {
    let num = gcd(*a.numer(), *b.numer());
    let den = a.denom() / gcd(*a.denom(), *b.denom()) * b.denom();
    Ratio::new(num, den)
}

pub fn quantization_check(charges: &[f64]) -> QuantizationReport {
    quantization_check_with(charges, RATIONAL_TOL, DENOMINATOR_CAP)
}

pub fn quantization_check_with(charges: &[f64], tol: f64, cap: i128) -> QuantizationReport {
    let reference = charges.iter().copied().find(|n| *n != 0.0);
    let Some(n_ref) = reference else {
        return QuantizationReport {
            charges: charges.to_vec(),
            commensurable: !charges.is_empty(),
            lambda_w: None,
            ratios: charges.iter().map(|_| Some((0, 1))).collect(),
        };
    };
    let ratios: Vec<Option<Ratio<i128>>> = charges
        .iter()
        .map(|n| rational_approx(n / n_ref, tol, cap))
        .collect();
    let commensurable = ratios.iter().all(|r| r.is_some());
    let lambda_w = if commensurable {
        let g = ratios
            .iter()
            .flatten()
            .filter(|r| *r.numer() != 0)
            .fold(None, |acc: Option<Ratio<i128>>, r| {
                Some(acc.map_or(r.abs(), |a| ratio_gcd(a, r.abs())))
            });
        g.map(|g| 2.0 * n_ref.abs() * (*g.numer() as f64) / (*g.denom() as f64))
    } else {
        None
    };
    QuantizationReport {
        charges: charges.to_vec(),
        commensurable,
        lambda_w,
        ratios: ratios
            .iter()
            .map(|r| r.map(|r| (*r.numer() as i64, *r.denom() as i64)))
            .collect(),
    }
}
