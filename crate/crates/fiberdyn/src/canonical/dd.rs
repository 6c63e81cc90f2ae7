//! Double-double helpers: series sine/cosine, refined `atan2`, quaternions.

use twofloat::TwoFloat;

pub type Dd = TwoFloat;

pub fn dd(x: f64) -> Dd {
    TwoFloat::from(x)
}

pub fn to_f64(x: Dd) -> f64 {
    x.hi() + x.lo()
}

/// `a / b` to double-double accuracy; `TwoFloat`'s own quotient of two
/// double-doubles is only good to f64 precision.
pub fn ddiv(a: Dd, b: Dd) -> Dd {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    dd(q1) + q2 + q3
}

/// Taylor series; accurate to a few ulps of double-double for `|x| ≤ 4`.
pub fn sin_cos(x: Dd) -> (Dd, Dd) {
    let x2 = x * x;
    let mut s = x;
    let mut c = dd(1.0);
    let mut ts = x;
    let mut tc = dd(1.0);
    for k in 1..40 {
        let k = k as f64;
        ts = -ts * x2 / ((2.0 * k) * (2.0 * k + 1.0));
        tc = -tc * x2 / ((2.0 * k - 1.0) * (2.0 * k));
        s += ts;
        c += tc;
        if to_f64(ts).abs() < 1e-34 && to_f64(tc).abs() < 1e-34 {
            break;
        }
    }
    (s, c)
}

/// `atan2(y, x)` started from the f64 value and refined by Newton steps.
pub fn atan2(y: Dd, x: Dd) -> Dd {
    let mut t = dd(to_f64(y).atan2(to_f64(x)));
    for _ in 0..2 {
        let (s, c) = sin_cos(t);
        let den = x * c + y * s;
        if to_f64(den) == 0.0 {
            break;
        }
        t += ddiv(y * c - x * s, den);
    }
    t
}

pub type Quat = [Dd; 4];

pub fn qmul(p: &Quat, q: &Quat) -> Quat {
    [
        p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
        p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
        p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
        p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0],
    ]
}

/// Rotation of `ẑ` by the unit quaternion `q`.
pub fn rotate_z(q: &Quat) -> [Dd; 3] {
    let [w, a, b, c] = *q;
    [
        (a * c + w * b) * 2.0,
        (b * c - w * a) * 2.0,
        w * w - a * a - b * b + c * c,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_is_double_double_accurate() {
        for i in 0..200 {
            let x = dd(i as f64 * 0.0157) + dd(1e-19);
            let (s, c) = sin_cos(x);
            assert!(to_f64((s * s + c * c - 1.0).abs()) < 1e-30);
            assert!(to_f64((atan2(s, c) - x).abs()) < 1e-30);
        }
    }

    #[test]
    fn rotate_z_matches_f64() {
        let g = crate::liealg::GroupPoint::new(0.3, -0.5, 0.7, 0.2).unwrap();
        let q = g.q().map(dd);
        let r = rotate_z(&q);
        let want = crate::liealg::hopf_project(&g);
        for i in 0..3 {
            assert!((to_f64(r[i]) - want[i]).abs() < 1e-15);
        }
    }
}
