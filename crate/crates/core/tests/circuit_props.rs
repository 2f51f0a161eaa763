use doc_ergodic::brickwork::{correlations, edge_check, traceless_basis, ChainConfig};
use doc_ergodic::doc::{ldoi_matrix, DocChannel};
use doc_ergodic::gates::{
    assemble, break_pair_norm, family_instance, is_dual_unitary_ldoi, is_unitary_ldoi, shift_gate, Family,
};
use doc_ergodic::lambda::{
    classify_circuit, lambda_minus_contraction, lambda_plus_closed_form, lambda_plus_contraction, unital_tp_residuals,
};
use doc_ergodic::linalg::{BipartiteMatrix, Tolerances};
use doc_ergodic::sampling;
use proptest::prelude::*;

fn family(k: u8) -> Family {
    [Family::LduiDual, Family::ProjectionDual, Family::UnitaryLdoi][(k % 3) as usize]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn structural_unitarity_matches_direct(seed in any::<u64>(), d in 2usize..=4, k in any::<u8>(), broken in any::<bool>()) {
        let t = family_instance(family(k), d, seed);
        let t = if broken { break_pair_norm(&t) } else { t };
        let cert = assemble(&t).certificates;
        prop_assert_eq!(is_unitary_ldoi(&t), cert.unitary);
        prop_assert_eq!(is_dual_unitary_ldoi(&t), cert.dual_unitary);
        prop_assert_eq!(cert.unitary, !broken);
        prop_assert!(!cert.perfect);
    }

    #[test]
    fn closed_form_matches_contraction(seed in any::<u64>(), d in 2usize..=4, k in any::<u8>()) {
        let t = family_instance(family(k), d, seed);
        let cf = lambda_plus_closed_form(&t).unwrap();
        let m = lambda_plus_contraction(&ldoi_matrix(&t)).unwrap();
        prop_assert!(DocChannel::map(cf.clone()).matrix_rep().max_abs_diff(&m) <= 1e-10);
        // ℬ = C̄Cᵀ/d is bounded by Cauchy–Schwarz.
        for i in 0..d { for j in 0..d {
            prop_assert!(cf.b().get(i, j).norm() <= 1.0 + 1e-12);
        }}
    }

    #[test]
    fn edge_channels_are_unital_and_trace_preserving(seed in any::<u64>(), d in 2usize..=4) {
        let mut r = sampling::rng(seed);
        let u = BipartiteMatrix::new(d, sampling::haar_unitary(&mut r, d * d)).unwrap();
        for m in [lambda_plus_contraction(&u).unwrap(), lambda_minus_contraction(&u).unwrap()] {
            let (unital, tp) = unital_tp_residuals(&m);
            prop_assert!(unital <= 1e-10 && tp <= 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn circuit_verdict_invariants(seed in any::<u64>(), d in 2usize..=4, k in 0u8..3) {
        let t = match k {
            0 => family_instance(Family::LduiDual, d, seed),
            _ => family_instance(Family::ProjectionDual, d, seed),
        };
        let u = if k == 2 { shift_gate(&t).unwrap() } else { ldoi_matrix(&t) };
        let v = classify_circuit(&u, &Tolerances::default()).unwrap();
        prop_assert!(!v.bernoulli);
        prop_assert!(!v.mixing || v.ergodic);
        prop_assert!(!v.non_interacting || !v.ergodic);
        prop_assert!(v.constant_modes >= 1);
        if k == 0 {
            prop_assert!(v.constant_modes >= d);
        }
    }

    #[test]
    fn translation_by_two_sites_preserves_tables(seed in any::<u64>(), k in any::<u8>()) {
        let g = ldoi_matrix(&family_instance(family(k), 2, seed));
        let cfg = ChainConfig::new(g, 3, 2).unwrap();
        let mut r = sampling::rng(seed ^ 0x5a5a);
        let a = sampling::random_matrix(&mut r, 2);
        let b = sampling::random_matrix(&mut r, 2);
        for origin in [0i64, 1] {
            let t0 = correlations(&cfg, &a, &b, origin).unwrap();
            let t2 = correlations(&cfg, &a, &b, origin + 2).unwrap();
            for (e0, e2) in t0.entries.iter().zip(&t2.entries) {
                prop_assert!((e0.value - e2.value).norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn dual_light_cone_and_edges(seed in any::<u64>(), k in 0u8..2) {
        let g = ldoi_matrix(&family_instance(family(k), 2, seed));
        let cfg = ChainConfig::new(g, 3, 2).unwrap();
        let basis = traceless_basis(2);
        let (a, b) = (&basis[(seed % 3) as usize], &basis[((seed / 3) % 3) as usize]);
        let table = correlations(&cfg, a, b, 0).unwrap();
        prop_assert!(table.max_abs_where(|x, t| x.unsigned_abs() as usize != t) <= 1e-9);
        prop_assert!(edge_check(&cfg, a, b).unwrap().passed());
    }
}
