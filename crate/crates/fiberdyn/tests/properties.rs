use std::f64::consts::PI;

use fiberdyn::Vec3;
use fiberdyn::bundle::{PatchCover, section_north, section_south, transition_defect};
use fiberdyn::fluxaction::{MagneticForm, flux, icosphere, pairwise_sum};
use fiberdyn::grassmann::GrassmannElement;
use fiberdyn::liealg::{
    GroupPoint, bracket, hopf_project, lorentz_exp, mdot, rotate_vector, su2_exp, su2_log,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn vec3(r: f64) -> impl Strategy<Value = Vec3> {
    (-r..r, -r..r, -r..r).prop_map(|(a, b, c)| Vec3::new(a, b, c))
}

fn unit() -> impl Strategy<Value = Vec3> {
    vec3(1.0)
        .prop_filter("nonzero", |v| v.norm() > 1e-3)
        .prop_map(|v| v.normalize())
}

fn group_point() -> impl Strategy<Value = GroupPoint> {
    vec3(2.0 * PI).prop_map(|v| su2_exp(&v).unwrap())
}

fn odd(k: usize) -> impl Strategy<Value = GrassmannElement> {
    proptest::collection::vec(-1.0..1.0f64, 1 << k).prop_map(move |c| {
        let coeffs = c
            .iter()
            .enumerate()
            .map(|(m, &x)| {
                if m.count_ones() % 2 == 1 {
                    Complex64::new(x, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        GrassmannElement::from_coeffs(k, coeffs).unwrap()
    })
}

fn any_element(k: usize) -> impl Strategy<Value = GrassmannElement> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1 << k).prop_map(move |c| {
        GrassmannElement::from_coeffs(
            k,
            c.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exp_log_roundtrip(v in vec3(3.0)) {
        prop_assume!(v.norm() < 2.0 * PI - 1e-3);
        let s = su2_exp(&v).unwrap();
        let back = su2_exp(&su2_log(&s)).unwrap();
        prop_assert!(back.distance(&s) < 1e-12);
        prop_assert!(s.norm_defect() < 1e-14);
    }

    #[test]
    fn rotation_is_a_homomorphism(a in group_point(), b in group_point(), u in vec3(2.0)) {
        let lhs = rotate_vector(&(a * b), &u);
        let rhs = rotate_vector(&a, &rotate_vector(&b, &u));
        prop_assert!((lhs - rhs).amax() < 1e-13);
        prop_assert!((lhs.norm() - u.norm()).abs() < 1e-13);
    }

    #[test]
    fn double_cover(a in group_point(), u in vec3(1.0)) {
        prop_assert!((rotate_vector(&a, &u) - rotate_vector(&a.neg(), &u)).amax() < 1e-15);
        prop_assert!((hopf_project(&a).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bracket_is_adjoint_equivariant(a in group_point(), x in vec3(1.0), y in vec3(1.0)) {
        let lhs = rotate_vector(&a, &bracket(&x, &y));
        let rhs = bracket(&rotate_vector(&a, &x), &rotate_vector(&a, &y));
        prop_assert!((lhs - rhs).amax() < 1e-13);
    }

    #[test]
    fn lorentz_frames_preserve_metric(c in proptest::array::uniform6(-1.5..1.5f64), d in proptest::array::uniform6(-1.5..1.5f64)) {
        let f = lorentz_exp(&c).compose(&lorentz_exp(&d));
        prop_assert!(f.defect() < 1e-11);
        let id = f.compose(&f.inverse());
        prop_assert!((id.matrix() - nalgebra::Matrix4::identity()).amax() < 1e-10);
        let u = f.column(0);
        prop_assert!((mdot(&u, &u) + 1.0).abs() < 1e-10 * u[0] * u[0]);
    }

    #[test]
    fn odd_elements_anticommute(a in odd(4), b in odd(4)) {
        let ab = a.product(&b).unwrap();
        let ba = b.product(&a).unwrap();
        prop_assert!((&ab + &ba).max_abs() < 1e-14);
        prop_assert!(a.product(&a).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn grassmann_product_is_associative(a in any_element(4), b in any_element(4), c in any_element(4)) {
        let left = a.product(&b).unwrap().product(&c).unwrap();
        let right = a.product(&b.product(&c).unwrap()).unwrap();
        prop_assert!((&left - &right).max_abs() < 1e-13);
    }

    #[test]
    fn sections_project_to_their_point(x in unit()) {
        if x[2] > -0.99 {
            prop_assert!((hopf_project(&section_north(&x).unwrap()) - x).amax() < 1e-13);
        }
        if x[2] < 0.99 {
            prop_assert!((hopf_project(&section_south(&x).unwrap()) - x).amax() < 1e-13);
        }
    }

    #[test]
    fn four_caps_cover_the_sphere(x in unit()) {
        let cover = PatchCover::four_caps();
        let ids = cover.members(&x);
        prop_assert!(!ids.is_empty());
        for &a in &ids {
            for &b in &ids {
                prop_assert!(transition_defect(&cover, a, b, &x).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn flux_through_spheres_depends_only_on_enclosure(c in vec3(0.4), r in 1.0..2.0f64) {
        let form = MagneticForm { n: 1.0, r_min: 1e-4 };
        let inside = flux(&form, &icosphere(4, c, r)).unwrap();
        prop_assert!((inside + 4.0 * PI).abs() < 1e-2, "{}", inside);
        let away = c + Vec3::new(r + 2.5, 0.0, 0.0);
        let outside = flux(&form, &icosphere(4, away, 1.0)).unwrap();
        prop_assert!(outside.abs() < 1e-4, "{}", outside);
    }

    #[test]
    fn pairwise_sum_matches_exact_integers(v in proptest::collection::vec(-1_000_000i32..1_000_000, 0..300)) {
        let f: Vec<f64> = v.iter().map(|&x| x as f64).collect();
        prop_assert_eq!(pairwise_sum(&f), v.iter().map(|&x| x as i64).sum::<i64>() as f64);
    }
}

#[test]
fn group_point_rejects_unnormalizable() {
    assert!(GroupPoint::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
    assert!(GroupPoint::new(0.0, 0.0, 0.0, 0.0).is_err());
}
