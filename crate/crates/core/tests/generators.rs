use std::collections::BTreeMap;

use num_complex::Complex64;
use opineq_core::generators::{
    generate, ginibre, intertwined_from, intertwined_operator, lin_dragomir_instance,
    make_a_with_moduli, multi_operator_instance, random_hermitian, random_psd, random_unit_vector,
    reid_instance, theorem1_instance, Constraint, GenError, GenOptions, ModuliFactors, Recipe, Rng,
};
use opineq_core::linalg::{
    absolute_value, general_eigenvalues, hermitian_eigenvalues, ComplexMatrix, ComplexVector,
    SpectralForm,
};
use opineq_core::radii::spectral_radius;
use proptest::prelude::*;

fn real(rows: &[&[f64]]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(rows).unwrap()
}

fn swap() -> ComplexMatrix {
    real(&[&[0.0, 1.0], &[1.0, 0.0]])
}

fn all_pass(roles: &BTreeMap<String, ComplexMatrix>, constraints: &[(String, Constraint)]) {
    for (label, c) in constraints {
        let cert = c.certify(roles).unwrap();
        assert!(cert.passes(), "{label}: {cert:?}");
    }
}

#[test]
fn ginibre_is_deterministic() {
    let a = ginibre(3, &mut Rng::new(7)).unwrap();
    let b = ginibre(3, &mut Rng::new(7)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn ginibre_one_by_one_is_finite() {
    let a = ginibre(1, &mut Rng::new(11)).unwrap();
    assert_eq!(a.n(), 1);
    assert!(a.is_finite());
}

#[test]
fn ginibre_second_moment() {
    let mut rng = Rng::new(2024);
    let n = 4;
    let mean: f64 = (0..200)
        .map(|_| ginibre(n, &mut rng).unwrap().frobenius_norm().powi(2) / (n * n) as f64)
        .sum::<f64>()
        / 200.0;
    assert!((mean - 1.0).abs() < 0.15, "mean {mean}");
}

#[test]
fn ginibre_rejects_bad_dimensions() {
    let mut rng = Rng::new(0);
    assert_eq!(ginibre(0, &mut rng), Err(GenError::BadDimension(0)));
    assert_eq!(ginibre(65, &mut rng), Err(GenError::BadDimension(65)));
}

#[test]
fn psd_with_degenerate_spectrum_is_identity() {
    let m = random_psd(4, 1.0, 1.0, &mut Rng::new(5)).unwrap();
    assert!(m.relative_distance(&ComplexMatrix::identity(4)) < 1e-12);
}

#[test]
fn psd_spectrum_and_determinant() {
    let mut rng = Rng::new(9);
    let (lo, hi) = (0.3, 1.7);
    for n in 1..=6 {
        let m = random_psd(n, lo, hi, &mut rng).unwrap();
        for ev in hermitian_eigenvalues(&m).unwrap() {
            assert!(ev >= lo - 1e-9 && ev <= hi + 1e-9, "{ev}");
        }
        let det: Complex64 = general_eigenvalues(&m).unwrap().into_iter().product();
        assert!(det.re >= lo.powi(n as i32) - 1e-9, "{det}");
        assert!(det.im.abs() < 1e-9);
    }
}

#[test]
fn psd_rejects_bad_range() {
    let mut rng = Rng::new(1);
    assert!(matches!(
        random_psd(2, 0.0, 1.0, &mut rng),
        Err(GenError::BadRange { .. })
    ));
    assert!(matches!(
        random_psd(2, 2.0, 1.0, &mut rng),
        Err(GenError::BadRange { .. })
    ));
}

#[test]
fn moduli_from_identity_factors() {
    let i = ComplexMatrix::identity(2);
    let f = ModuliFactors::from_factors(&i, &[1.0, 2.0], &i);
    let d = real(&[&[1.0, 0.0], &[0.0, 2.0]]);
    assert_eq!(f.a, d);
    assert!(f.modulus.to_matrix().relative_distance(&d) < 1e-15);
    assert!(f.co_modulus.to_matrix().relative_distance(&d) < 1e-15);
}

#[test]
fn moduli_match_recomputed_moduli() {
    let mut rng = Rng::new(31);
    for n in [1, 2, 3, 5, 8] {
        let (a, m, ms) = make_a_with_moduli(n, &mut rng).unwrap();
        let direct = absolute_value(&a).unwrap();
        let direct_star = absolute_value(&a.adjoint()).unwrap();
        assert!((&direct - &m).frobenius_norm() <= 1e-8);
        assert!((&direct_star - &ms).frobenius_norm() <= 1e-8);
        let s1 = hermitian_eigenvalues(&m).unwrap();
        let s2 = hermitian_eigenvalues(&ms).unwrap();
        for (x, y) in s1.iter().zip(&s2) {
            assert!((x - y).abs() <= 1e-8);
        }
    }
}

#[test]
fn singular_values_match_sigma() {
    let mut rng = Rng::new(4);
    let w = opineq_core::generators::random_unitary(3, &mut rng).unwrap();
    let v = opineq_core::generators::random_unitary(3, &mut rng).unwrap();
    let sigma = [0.25, 1.0, 1.75];
    let f = ModuliFactors::from_factors(&w, &sigma, &v);
    let gram = &f.a.adjoint() * &f.a;
    let sv: Vec<f64> = hermitian_eigenvalues(&gram)
        .unwrap()
        .into_iter()
        .map(f64::sqrt)
        .collect();
    for (s, t) in sv.iter().zip(&sigma) {
        assert!((s - t).abs() < 1e-9, "{s} vs {t}");
    }
}

#[test]
fn intertwined_hand_example() {
    let m = SpectralForm::hermitian(&real(&[&[1.0, 0.0], &[0.0, 4.0]])).unwrap();
    let b = intertwined_from(&m, &swap()).unwrap();
    let expected = real(&[&[0.0, 2.0], &[0.5, 0.0]]);
    assert!((&b - &expected).frobenius_norm() < 1e-14);
    let mm = m.to_matrix();
    let target = real(&[&[0.0, 2.0], &[2.0, 0.0]]);
    assert!((&(&mm * &b) - &target).frobenius_norm() < 1e-14);
    assert!((&(&b.adjoint() * &mm) - &target).frobenius_norm() < 1e-14);
}

#[test]
fn intertwined_with_identity_weight_is_hermitian_seed() {
    let mut rng = Rng::new(8);
    let h = random_hermitian(3, &mut rng).unwrap();
    let w = SpectralForm::hermitian(&ComplexMatrix::identity(3)).unwrap();
    let b = intertwined_from(&w, &h).unwrap();
    assert!((&b - &h).frobenius_norm() < 1e-14);
}

#[test]
fn intertwined_rejects_singular_weight() {
    let m = real(&[&[1.0, 0.0], &[0.0, 0.0]]);
    let err = intertwined_operator(&m, &mut Rng::new(1)).unwrap_err();
    assert!(matches!(
        err,
        GenError::Linalg(opineq_core::linalg::LinalgError::NotInvertible { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intertwined_spectrum_is_real_and_matches_seed(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = Rng::new(seed);
        let m = random_psd(n, 0.1, 2.0, &mut rng).unwrap();
        let weight = SpectralForm::hermitian(&m).unwrap();
        let h = random_hermitian(n, &mut rng).unwrap();
        let b = intertwined_from(&weight, &h).unwrap();
        let residual = (&(&m * &b) - &(&b.adjoint() * &m)).frobenius_norm();
        prop_assert!(residual <= 1e-8 * m.frobenius_norm() * b.frobenius_norm());
        let scale = h.frobenius_norm().max(1.0);
        for z in general_eigenvalues(&b).unwrap() {
            prop_assert!(z.im.abs() <= 1e-8 * scale, "{}", z);
        }
        let rh = hermitian_eigenvalues(&h).unwrap().iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        prop_assert!((spectral_radius(&b).unwrap() - rh).abs() <= 1e-8 * scale);
    }
}

#[test]
fn theorem1_diagonal_case() {
    let i = ComplexMatrix::identity(2);
    let f = ModuliFactors::from_factors(&i, &[1.0, 2.0], &i);
    let mut rng = Rng::new(3);
    let b = intertwined_from(&f.modulus, &random_hermitian(2, &mut rng).unwrap()).unwrap();
    let c = intertwined_from(&f.co_modulus, &random_hermitian(2, &mut rng).unwrap()).unwrap();
    let ops = BTreeMap::from([
        ("A".to_string(), f.a.clone()),
        ("B".to_string(), b),
        ("C".to_string(), c),
    ]);
    for (_, cons) in Recipe::Thm1.constraints(None) {
        assert!(cons.certify(&ops).unwrap().residual < 1e-12);
    }
}

#[test]
fn theorem1_identity_pair_is_exact() {
    let mut rng = Rng::new(12);
    let a = ginibre(3, &mut rng).unwrap();
    let ops = BTreeMap::from([
        ("A".to_string(), a),
        ("B".to_string(), ComplexMatrix::identity(3)),
        ("C".to_string(), ComplexMatrix::identity(3)),
    ]);
    for (_, cons) in Recipe::Thm1.constraints(None) {
        assert_eq!(cons.certify(&ops).unwrap().residual, 0.0);
    }
}

#[test]
fn theorem1_certificate_signature() {
    let bundle = theorem1_instance(4, &mut Rng::new(7)).unwrap();
    let keys: Vec<&str> = bundle.certificates.keys().map(String::as_str).collect();
    assert_eq!(keys, ["intertwine_A_B", "intertwine_Astar_C"]);
    let roles: Vec<&str> = bundle.operators.keys().map(String::as_str).collect();
    assert_eq!(roles, ["A", "B", "C"]);
    assert!(bundle.first_failure().unwrap().is_none());
}

#[test]
fn lin_dragomir_hand_example() {
    let t_inv = real(&[&[1.0, 0.0], &[0.0, 0.5]]);
    let s = &t_inv * &swap();
    assert!((&s - &real(&[&[0.0, 1.0], &[0.5, 0.0]])).frobenius_norm() < 1e-15);
    let t = real(&[&[1.0, 0.0], &[0.0, 2.0]]);
    assert!((&(&t * &s) - &swap()).frobenius_norm() < 1e-15);
}

#[test]
fn lin_dragomir_identity_weight_gives_hermitian_operators() {
    let mut rng = Rng::new(6);
    let h = random_hermitian(3, &mut rng).unwrap();
    let k = random_hermitian(3, &mut rng).unwrap();
    let ops = BTreeMap::from([
        ("T".to_string(), ComplexMatrix::identity(3)),
        ("S".to_string(), h.clone()),
        ("C".to_string(), k),
        ("A".to_string(), random_hermitian(3, &mut rng).unwrap()),
        ("B".to_string(), random_hermitian(3, &mut rng).unwrap()),
    ]);
    all_pass(&ops, &Recipe::Ld.constraints(None));
}

#[test]
fn lin_dragomir_certificates_on_seeded_draws() {
    for seed in 0..100 {
        let n = 1 + (seed as usize % 6);
        let bundle = lin_dragomir_instance(n, &mut Rng::new(seed)).unwrap();
        assert_eq!(bundle.certificates.len(), 5);
        for (label, cert) in &bundle.certificates {
            assert!(cert.passes(), "seed {seed} {label}: {cert:?}");
            assert!(cert.residual <= 1e-8 * cert.scale.max(1.0));
        }
    }
}

#[test]
fn reid_cases() {
    let mut rng = Rng::new(10);
    let h = random_hermitian(3, &mut rng).unwrap();
    let ops = BTreeMap::from([
        ("A".to_string(), ComplexMatrix::identity(3)),
        ("B".to_string(), h),
    ]);
    all_pass(&ops, &Recipe::Reid.constraints(None));

    let a = real(&[&[1.0, 0.0], &[0.0, 2.0]]);
    let b = &real(&[&[1.0, 0.0], &[0.0, 0.5]]) * &swap();
    assert!((&(&a * &b) - &swap()).frobenius_norm() < 1e-15);

    for seed in 0..100 {
        let bundle = reid_instance(1 + seed as usize % 6, &mut Rng::new(seed)).unwrap();
        assert!(bundle.first_failure().unwrap().is_none(), "seed {seed}");
    }
}

#[test]
fn multi_operator_signatures() {
    let one = multi_operator_instance(3, 1, &mut Rng::new(1)).unwrap();
    assert_eq!(one.operators.len(), 3);
    assert!(one.operators.contains_key("A_1"));
    assert_eq!(one.certificates.len(), 2);

    let three = multi_operator_instance(3, 3, &mut Rng::new(2)).unwrap();
    assert_eq!(three.certificates.len(), 6);
    assert!(three.certificates.values().all(|c| c.passes()));

    assert_eq!(
        multi_operator_instance(3, 0, &mut Rng::new(3)),
        Err(GenError::BadCount(0))
    );
}

#[test]
fn multi_operator_identity_pairs_are_exact() {
    let mut rng = Rng::new(15);
    let mut ops = BTreeMap::new();
    for i in 1..=3 {
        ops.insert(format!("A_{i}"), ginibre(2, &mut rng).unwrap());
        ops.insert(format!("B_{i}"), ComplexMatrix::identity(2));
        ops.insert(format!("C_{i}"), ComplexMatrix::identity(2));
    }
    for (_, cons) in Recipe::Multi.constraints(Some(3)) {
        assert_eq!(cons.certify(&ops).unwrap().residual, 0.0);
    }
}

#[test]
fn unit_vectors() {
    let e1 = ComplexVector::basis(3, 0);
    assert!((e1.norm() - 1.0).abs() < 1e-12);
    let mut rng = Rng::new(21);
    for n in 1..=8 {
        assert!((random_unit_vector(n, &mut rng).unwrap().norm() - 1.0).abs() < 1e-12);
    }
    assert_eq!(
        random_unit_vector(4, &mut Rng::new(5)).unwrap(),
        random_unit_vector(4, &mut Rng::new(5)).unwrap()
    );
}

fn every_label() -> Vec<(Recipe, Option<usize>)> {
    Recipe::ALL
        .into_iter()
        .flat_map(|r| {
            if r.takes_count() {
                vec![(r, Some(1)), (r, Some(3))]
            } else {
                vec![(r, None)]
            }
        })
        .collect()
}

#[test]
fn every_recipe_certifies_and_has_its_roles() {
    for (recipe, count) in every_label() {
        for n in [1, 2, 3, 4, 6, 8] {
            let mut rng = Rng::split(99, &recipe.label(count), n, 0);
            let bundle = generate(recipe, n, count, GenOptions::default(), &mut rng).unwrap();
            assert_eq!(bundle.recipe, recipe.label(count));
            let roles: Vec<String> = bundle.operators.keys().cloned().collect();
            let mut expected = recipe.roles(count);
            expected.sort();
            assert_eq!(roles, expected, "{}", bundle.recipe);
            assert_eq!(bundle.certificates.len(), recipe.constraints(count).len());
            assert!(
                bundle.first_failure().unwrap().is_none(),
                "{} n={n}",
                bundle.recipe
            );
        }
    }
}

#[test]
fn bundles_are_bit_identical_for_equal_seeds() {
    for (recipe, count) in every_label() {
        let make = || {
            let mut rng = Rng::split(42, "X", 4, 3);
            generate(recipe, 4, count, GenOptions::default(), &mut rng).unwrap()
        };
        let (a, b) = (make(), make());
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}

#[test]
fn hermitian_option_draws_hermitian_matrices() {
    let opts = GenOptions { hermitian: true };
    let bundle = generate(Recipe::Ginibre, 5, None, opts, &mut Rng::new(1)).unwrap();
    assert_eq!(bundle.operator("A").unwrap().hermitian_defect(), 0.0);
}

#[test]
fn recipe_labels_round_trip() {
    for (recipe, count) in every_label() {
        assert_eq!(
            Recipe::parse(&recipe.label(count)).unwrap(),
            (recipe, count)
        );
    }
    for bad in ["nope", "multi", "thm1:2", "multi:x"] {
        assert!(
            matches!(Recipe::parse(bad), Err(GenError::UnknownRecipe(_))),
            "{bad}"
        );
    }
}

#[test]
fn mutated_operator_fails_intertwining_certificate() {
    let mut rng = Rng::new(77);
    for n in [2, 3, 4] {
        let mut bundle = theorem1_instance(n, &mut rng).unwrap();
        let noise = ginibre(n, &mut rng).unwrap().scale_real(1e-3);
        let b = bundle.operators.get_mut("B").unwrap();
        *b = &*b + &noise;
        let (label, _) = bundle
            .first_failure()
            .unwrap()
            .expect("mutation must be caught");
        assert_eq!(label, "intertwine_A_B");
    }
}

#[test]
fn bundle_json_round_trip() {
    let bundle = theorem1_instance(3, &mut Rng::new(5)).unwrap();
    let text = serde_json::to_string(&bundle).unwrap();
    let back: opineq_core::generators::InstanceBundle = serde_json::from_str(&text).unwrap();
    assert_eq!(back, bundle);
}
