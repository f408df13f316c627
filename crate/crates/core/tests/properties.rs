use finsler_lie::algebra::io::{algebra_to_json, parse_algebra};
use finsler_lie::algebra::{complexify, Builtin, ComplexifiedAlgebra, MixedVector, RealBuiltin};
use finsler_lie::cli::parse_vector;
use finsler_lie::connection::connection;
use finsler_lie::curvature::{
    bisectional, curvature_block, curvature_operator_coordinate_free, holomorphic_sectional, relative_difference,
};
use finsler_lie::linalg::{CMat, C64};
use finsler_lie::norm::io::{norm_to_json, parse_norm};
use finsler_lie::norm::{check_homogeneity, euler_residuals, metric_jet, DiffConfig, NormSpec};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| C64::new(a, b))
}

fn direction(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(complex(), n).prop_filter("nonzero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 0.05)
}

fn scalar() -> impl Strategy<Value = C64> {
    complex().prop_filter("nonzero", |z| z.norm() > 0.2)
}

fn norm2() -> impl Strategy<Value = NormSpec> {
    prop_oneof![
        (0.5..3.0f64, 0.5..3.0f64, -0.3..0.3f64, -0.3..0.3f64).prop_map(|(a, d, re, im)| {
            let h = CMat::from_fn(2, |i, j| match (i, j) {
                (0, 0) => C64::new(a, 0.0),
                (1, 1) => C64::new(d, 0.0),
                (0, 1) => C64::new(re, im),
                _ => C64::new(re, -im),
            });
            NormSpec::hermitian(h).unwrap()
        }),
        (0.0..0.3f64, 2u32..4).prop_map(|(eps, p)| NormSpec::perturbed(CMat::identity(2), eps, p).unwrap()),
    ]
}

fn ch2() -> impl Strategy<Value = (f64, f64, ComplexifiedAlgebra)> {
    (0.25..4.0f64, 0.25..4.0f64).prop_map(|(b, g)| (b, g, Builtin::Ch2 { beta: b, gamma: g }.build().unwrap()))
}

fn scaled(v: &[C64], s: C64) -> Vec<C64> {
    v.iter().map(|z| z * s).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn f2_is_absolutely_homogeneous(norm in norm2(), v in direction(2), l in scalar()) {
        prop_assert!(check_homogeneity(&norm, &v, l).unwrap() < 1e-12);
    }

    #[test]
    fn jets_are_scale_invariant_and_satisfy_euler(norm in norm2(), v in direction(2), l in scalar()) {
        let cfg = DiffConfig::default();
        let a = metric_jet(&norm, &v, &cfg).unwrap();
        let b = metric_jet(&norm, &scaled(&v, l), &cfg).unwrap();
        prop_assert!(a.g.max_abs_diff(&b.g) < 1e-8 * a.g.max_abs().max(1.0));
        prop_assert!(euler_residuals(&a).max() < 1e-8);
        prop_assert!(euler_residuals(&b).max() < 1e-8);
    }

    #[test]
    fn curvatures_are_scale_invariant((_, _, alg) in ch2(), norm in norm2(), v in direction(2), w in direction(2), l in scalar(), m in scalar()) {
        let cfg = DiffConfig::default();
        let k = holomorphic_sectional(&alg, &norm, &v, &cfg).unwrap().value;
        let kl = holomorphic_sectional(&alg, &norm, &scaled(&v, l), &cfg).unwrap().value;
        prop_assert!((k - kl).abs() < 1e-6 * k.abs().max(1.0));
        let b = bisectional(&alg, &norm, &v, &w, &cfg).unwrap();
        let bl = bisectional(&alg, &norm, &scaled(&v, l), &scaled(&w, m), &cfg).unwrap();
        prop_assert!((b.value - bl.value).abs() < 1e-6 * b.value.abs().max(1.0));
        prop_assert!(b.imaginary_residue < 1e-8);
    }

    #[test]
    fn operator_forms_agree((_, _, alg) in ch2(), norm in norm2(), v in direction(2), w in direction(2)) {
        let cfg = DiffConfig::default();
        let data = curvature_block(&alg, &norm, &v, &cfg).unwrap();
        let free = curvature_operator_coordinate_free(&alg, &norm, &v, &w, &cfg).unwrap();
        prop_assert!(relative_difference(&free, &data.apply(&w)) < 1e-7);
    }

    #[test]
    fn connection_contracts_to_n((_, _, alg) in ch2(), norm in norm2(), v in direction(2)) {
        let jet = metric_jet(&norm, &v, &DiffConfig::default()).unwrap();
        let c = connection(&alg, &jet).unwrap();
        prop_assert!(c.contraction_residual < 1e-10);
        prop_assert!(c.n_system_residual < 1e-10);
    }

    #[test]
    fn real_ch2_complexifies_to_builtin((beta, gamma, alg) in ch2()) {
        let f = RealBuiltin::Ch2 { beta, gamma }.build().unwrap();
        let got = complexify(&f.algebra, f.complex_structure.as_ref().unwrap(), f.weights.as_deref()).unwrap();
        prop_assert!(got.full_table().max_abs_diff(alg.full_table()) < 1e-12);
    }

    #[test]
    fn brackets_are_antisymmetric_and_satisfy_jacobi((_, _, alg) in ch2(), a in direction(2), b in direction(2), d in direction(2)) {
        let n = 2;
        let mix = |h: &[C64], cj: &[C64]| {
            let mut m = MixedVector::from_hol(h);
            m.anti[..n].copy_from_slice(&cj[..n]);
            m
        };
        let (x, y, z) = (mix(&a, &b), mix(&b, &d), mix(&d, &a));
        let xy = alg.bracket(&x, &y);
        let yx = alg.bracket(&y, &x);
        prop_assert!(xy.hol.iter().chain(&xy.anti).zip(yx.hol.iter().chain(&yx.anti)).all(|(p, q)| (p + q).norm() < 1e-12));
        let j1 = alg.bracket(&x, &alg.bracket(&y, &z));
        let j2 = alg.bracket(&y, &alg.bracket(&z, &x));
        let j3 = alg.bracket(&z, &alg.bracket(&x, &y));
        for i in 0..n {
            prop_assert!((j1.hol[i] + j2.hol[i] + j3.hol[i]).norm() < 1e-10);
            prop_assert!((j1.anti[i] + j2.anti[i] + j3.anti[i]).norm() < 1e-10);
        }
    }

    #[test]
    fn algebra_json_round_trip_is_exact((_, _, alg) in ch2()) {
        let back = parse_algebra(&algebra_to_json(&alg)).unwrap();
        prop_assert_eq!(back.full_table().max_abs_diff(alg.full_table()), 0.0);
    }

    #[test]
    fn norm_json_round_trip_is_exact(norm in norm2(), v in direction(2)) {
        let back = parse_norm(&norm_to_json(&norm).unwrap()).unwrap();
        prop_assert_eq!(back.f_squared(&v).unwrap(), norm.f_squared(&v).unwrap());
    }

    #[test]
    fn cli_vectors_round_trip(v in direction(3)) {
        let text = v.iter().map(|z| format!("{}:{}", z.re, z.im)).collect::<Vec<_>>().join(",");
        prop_assert_eq!(parse_vector(&text).unwrap(), v);
    }
}
