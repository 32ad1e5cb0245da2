use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng as _;

use super::*;
use crate::classify::{make_family, FamilyTag};
use crate::lattice::{column_vectors, convex_hull, parse_points};

fn lp(s: &str) -> LaurentPolynomial {
    parse_laurent(s).unwrap()
}

fn hull(s: &str) -> LatticePolygon {
    convex_hull(&parse_points(s).unwrap()).unwrap()
}

fn example1() -> LaurentPolynomial {
    lp("1 + y^2 - x^6*y^2 + x^6*y^4")
}

fn brat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Points of the smooth complete model over F_p: torus solutions plus one
/// boundary point per simple root of each edge polynomial.
fn count_smooth(h: &LaurentPolynomial, p: u64) -> u64 {
    let field = PrimeField::new(p).unwrap();
    let terms = reduce_mod_p(h, &field).unwrap();
    let mut total = 0u64;
    for x in 1..p {
        for y in 1..p {
            if eval_terms(&field, &terms, &x, &y) == 0 {
                total += 1;
            }
        }
    }
    for (a, b) in h.newton_polygon().edges() {
        let d = b.sub(a);
        let len = {
            let (mut u, mut v) = (d.x.unsigned_abs(), d.y.unsigned_abs());
            while v != 0 {
                (u, v) = (v, u % v);
            }
            u as i64
        };
        let step = pt(d.x / len, d.y / len);
        let mut coeffs = vec![0u64; len as usize + 1];
        for (q, c) in &terms {
            let off = q.sub(a);
            let k = if step.x != 0 { off.x / step.x } else { off.y / step.y };
            if (0..=len).contains(&k) && off == pt(step.x * k, step.y * k) {
                coeffs[k as usize] = *c;
            }
        }
        let poly = Poly::from_coeffs(&field, coeffs);
        if !poly.is_zero() {
            total += roots_mod_p(&field, &poly).len() as u64;
        }
    }
    total
}

// ---------------------------------------------------------------------------
// Sampling

#[test]
fn samples_on_a_line_mod_7_are_exactly_the_affine_solutions() {
    let f = lp("x + y - 1");
    let s = sample_curve_points(&f, 7, 10, 0).unwrap();
    assert_eq!(s.points, vec![(2, 6), (3, 5), (4, 4), (5, 3), (6, 2)]);
    assert!(s.is_partial());
    assert!(s.recheck(&f).unwrap());
}

#[test]
fn samples_on_a_cubic_mod_7_match_exhaustive_search() {
    let f = lp("y^2 - x^3 - 1");
    let field = PrimeField::new(7).unwrap();
    let terms = reduce_mod_p(&f, &field).unwrap();
    let mut expected = Vec::new();
    for x in 1..7 {
        for y in 1..7 {
            if eval_terms(&field, &terms, &x, &y) == 0 {
                expected.push((x, y));
            }
        }
    }
    let s = sample_curve_points(&f, 7, 36, 0).unwrap();
    assert_eq!(s.points, expected);
    assert_eq!(s.points, vec![(1, 3), (1, 4), (2, 3), (2, 4), (4, 3), (4, 4)]);
}

#[test]
fn sampling_is_deterministic_and_every_point_rechecks() {
    let f = example1();
    let a = sample_curve_points(&f, DEFAULT_PRIME, 100, DEFAULT_SEED).unwrap();
    let b = sample_curve_points(&f, DEFAULT_PRIME, 100, DEFAULT_SEED).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.points.len(), 100);
    assert!(!a.is_partial());
    assert!(a.recheck(&f).unwrap());
    let c = sample_curve_points(&f, DEFAULT_PRIME, 100, 1).unwrap();
    assert_ne!(a.points, c.points);
    assert!(c.recheck(&f).unwrap());
}

#[test]
fn sampling_rejects_composite_modulus() {
    let err = sample_curve_points(&example1(), 6, 10, 0).unwrap_err();
    assert_eq!(err, IsoCheckError::BadPrime(6));
}

#[test]
fn sampling_rejects_a_prime_dividing_a_coefficient_denominator() {
    let f = LaurentPolynomial::from_terms([
        (pt(0, 0), brat(1, 7)),
        (pt(1, 0), rat(1)),
        (pt(0, 1), rat(1)),
    ]);
    let err = sample_curve_points(&f, 7, 10, 0).unwrap_err();
    assert_eq!(err, IsoCheckError::Laurent(LaurentError::BadPrime(7)));
}

#[test]
fn sampling_requires_a_two_dimensional_newton_polygon() {
    let err = sample_curve_points(&lp("1 + x"), 101, 10, 0).unwrap_err();
    assert_eq!(err, IsoCheckError::Lattice(LatticeError::NotTwoDimensional));
}

proptest! {
    #[test]
    fn sampled_points_always_satisfy_their_curve(
        a in 1i64..10, b in 1i64..10, c in 1i64..10, seed in 0u64..1000,
    ) {
        let f = LaurentPolynomial::from_terms([
            (pt(0, 0), rat(1)),
            (pt(1, 0), rat(a)),
            (pt(0, 1), rat(b)),
            (pt(1, 1), rat(c)),
        ]);
        let s = sample_curve_points(&f, 101, 10, seed).unwrap();
        prop_assert!(s.recheck(&f).unwrap());
    }
}

// ---------------------------------------------------------------------------
// Rational maps and birational pairs

#[test]
fn zero_denominators_are_rejected_up_front() {
    let one = LaurentPolynomial::monomial(pt(0, 0), rat(1));
    let err = RationalMap::new(
        one.clone(),
        LaurentPolynomial::default(),
        one.clone(),
        one,
    )
    .unwrap_err();
    assert_eq!(err, IsoCheckError::ZeroDenominator);
}

#[test]
fn map_specs_round_trip() {
    let (_, _, phi, _) = zero_mod_four_pair(8).unwrap();
    let again = RationalMap::from_spec(&phi.to_spec()).unwrap();
    assert_eq!(phi, again);
}

#[test]
fn the_genus_8_pair_matches_its_displayed_form() {
    let (f, f_prime, phi, psi) = zero_mod_four_pair(8).unwrap();
    assert_eq!(f, lp("1 - x^2*y^4 - x^6*y^2"));
    assert_eq!(f_prime, lp("x^5*y^4 - x^5 + 4*y^2"));
    let [px, py] = phi.components();
    assert_eq!((&px.num, &px.den), (&lp("x"), &lp("1")));
    assert_eq!((&py.num, &py.den), (&lp("1 - x*y^2"), &lp("x^3*y")));
    let [qx, qy] = psi.components();
    assert_eq!((&qx.num, &qx.den), (&lp("x"), &lp("1")));
    assert_eq!((&qy.num, &qy.den), (&lp("2*y"), &lp("x^3 + x^3*y^2")));
}

#[test]
fn family_genus_must_be_a_positive_multiple_of_four() {
    assert_eq!(zero_mod_four_pair(6).unwrap_err(), IsoCheckError::BadFamilyGenus(6));
    assert_eq!(zero_mod_four_pair(0).unwrap_err(), IsoCheckError::BadFamilyGenus(0));
    assert!(zero_mod_four_pair(4).is_ok());
}

#[test]
fn parametric_pair_verifies_with_full_counts() {
    for g in [4i64, 8, 12, 16] {
        let (f, f_prime, phi, psi) = zero_mod_four_pair(g).unwrap();
        let r = verify_birational_pair(
            &f, &f_prime, &phi, &psi, DEFAULT_PRIME, DEFAULT_TRIALS, DEFAULT_SEED,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Verified, "g = {g}");
        assert_eq!((r.verified, r.undefined_at, r.failed), (200, 0, 0), "g = {g}");
        assert!(r.sampling_complete);
        assert_eq!(r.orientation, None);
        for t in &r.directions {
            assert_eq!((t.sampled, t.verified), (100, 100), "g = {g}, {}", t.label);
        }
    }
}

#[test]
fn identity_maps_verify_a_curve_against_itself() {
    let f = example1();
    let id = RationalMap::identity();
    let r = verify_birational_pair(&f, &f, &id, &id, DEFAULT_PRIME, 50, DEFAULT_SEED).unwrap();
    assert_eq!(r.verdict, Verdict::Verified);
    assert_eq!((r.verified, r.undefined_at, r.failed), (100, 0, 0));
}

#[test]
fn a_corrupted_map_is_refuted_with_a_witness() {
    let f = example1();
    let one = LaurentPolynomial::monomial(pt(0, 0), rat(1));
    let shifted = RationalMap::new(
        LaurentPolynomial::monomial(pt(1, 0), rat(1)),
        one.clone(),
        lp("y + 1"),
        one,
    )
    .unwrap();
    let id = RationalMap::identity();
    let r = verify_birational_pair(&f, &f, &shifted, &id, DEFAULT_PRIME, 20, DEFAULT_SEED).unwrap();
    assert_eq!(r.verdict, Verdict::Refuted);
    assert!(r.failed > 0);
    let w = r.witness.expect("refutation carries a witness");
    assert!(w.detail.contains("misses the target curve"));
}

#[test]
fn denominator_zeros_count_as_undefined_not_failures() {
    // the y-component reduces to y wherever x != 2, so the map is the
    // identity with a puncture over x = 2
    let f = lp("x + y - 1");
    let punctured = RationalMap::new(
        lp("x"),
        lp("1"),
        lp("x*y - 2*y"),
        lp("x - 2"),
    )
    .unwrap();
    let id = RationalMap::identity();
    let r = verify_birational_pair(&f, &f, &punctured, &id, 7, 10, 0).unwrap();
    assert_eq!(r.verdict, Verdict::Verified);
    assert_eq!((r.verified, r.undefined_at, r.failed), (8, 2, 0));
    assert!(!r.sampling_complete);
}

// ---------------------------------------------------------------------------
// Canonical coordinate matrices

#[test]
fn the_identity_matrix_verifies_a_curve_against_itself() {
    let (f, _) = genus9_pair();
    let labels = canonical_basis(&f.newton_polygon()).unwrap();
    let id = ProjectiveMatrix::identity(&labels).unwrap();
    let r = verify_theta(&f, &f, &id, DEFAULT_PRIME, 50, DEFAULT_SEED).unwrap();
    assert_eq!(r.verdict, Verdict::Verified);
    assert_eq!(r.orientation, Some(Orientation::ColumnsToRows));
    assert_eq!((r.verified, r.undefined_at, r.failed), (50, 0, 0));
}

#[test]
fn genus9_matrix_verifies_in_exactly_one_orientation() {
    let (f, f_prime) = genus9_pair();
    let m = genus9_theta_matrix();
    let r = verify_theta(&f, &f_prime, &m, DEFAULT_PRIME, DEFAULT_TRIALS, DEFAULT_SEED).unwrap();
    assert_eq!(r.verdict, Verdict::Verified);
    assert_eq!(r.orientation, Some(Orientation::ColumnsToRows));
    assert_eq!((r.verified, r.undefined_at, r.failed), (100, 0, 0));
    assert!(r.sampling_complete);
    assert!(r.witness.is_none());
    // the report keeps both tallies: the transpose reading fails every point
    assert_eq!(r.directions.len(), 2);
    assert_eq!(r.directions[0].label, "columns-to-rows");
    assert_eq!(
        (r.directions[0].verified, r.directions[0].undefined_at, r.directions[0].failed),
        (100, 0, 0)
    );
    assert_eq!(r.directions[1].label, "rows-to-columns");
    assert_eq!(
        (r.directions[1].verified, r.directions[1].undefined_at, r.directions[1].failed),
        (0, 0, 100)
    );
}

#[test]
fn genus9_interior_hulls_are_the_family_polygons_literally() {
    let (f, f_prime) = genus9_pair();
    let gamma_9_0 = make_family(FamilyTag::Gamma4k5 { k: 1, m: 0 }).unwrap();
    let gamma_9_3 = make_family(FamilyTag::Gamma4k5 { k: 1, m: 3 }).unwrap();
    let points = |delta: &LatticePolygon| -> Vec<LatticePoint> {
        delta.lattice_points().iter().map(|q| q.point).collect()
    };
    assert_eq!(canonical_basis(&f.newton_polygon()).unwrap(), points(&gamma_9_0));
    assert_eq!(canonical_basis(&f_prime.newton_polygon()).unwrap(), points(&gamma_9_3));
    let m = genus9_theta_matrix();
    assert_eq!(sorted_by_height(m.row_labels()), points(&gamma_9_0));
    assert_eq!(sorted_by_height(m.col_labels()), points(&gamma_9_3));
}

#[test]
fn genus9_f_is_equivalent_to_f_prime_where_the_circulated_variant_is_not() {
    let (f, f_prime) = genus9_pair();
    let variant = LaurentPolynomial::from_terms([
        (pt(5, 1), rat(8)),
        (pt(4, 1), rat(36)),
        (pt(3, 1), rat(66)),
        (pt(2, 2), rat(-1)),
        (pt(2, 1), rat(62)),
        (pt(2, 0), rat(-1)),
        (pt(1, 1), rat(33)),
        (pt(0, 1), rat(9)),
        (pt(-1, 3), rat(-2)),
        (pt(-1, 2), rat(-2)),
        (pt(-1, 1), rat(-4)),
        (pt(-1, 0), rat(-3)),
        (pt(-1, -1), rat(-3)),
    ]);
    // point counts of the smooth model are a birational invariant
    assert_eq!(count_smooth(&f, 101), 100);
    assert_eq!(count_smooth(&f_prime, 101), 100);
    assert_eq!(count_smooth(&f, 103), 89);
    assert_eq!(count_smooth(&f_prime, 103), 89);
    assert_eq!(count_smooth(&variant, 101), 92);
    assert_eq!(count_smooth(&variant, 103), 98);
}

#[test]
fn theta_rejects_labels_that_do_not_match_the_curves() {
    let (f, f_prime) = genus9_pair();
    let m = genus9_theta_matrix();
    let err = verify_theta(&f_prime, &f, &m, DEFAULT_PRIME, 10, 0).unwrap_err();
    assert_eq!(err, IsoCheckError::LabelMismatch { side: "row" });
}

#[test]
fn theta_needs_the_decode_exponents_among_the_labels() {
    let f = example1();
    let labels = canonical_basis(&f.newton_polygon()).unwrap();
    assert!(!labels.contains(&pt(0, 0)));
    let id = ProjectiveMatrix::identity(&labels).unwrap();
    let err = verify_theta(&f, &f, &id, DEFAULT_PRIME, 10, 0).unwrap_err();
    assert_eq!(err, IsoCheckError::DecodeBasisMissing);
}

#[test]
fn a_seeded_random_matrix_is_refuted() {
    let (f, f_prime) = genus9_pair();
    let reference = genus9_theta_matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = loop {
        let entries: Vec<Vec<i64>> = (0..9)
            .map(|_| (0..9).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        if let Ok(m) = ProjectiveMatrix::new(
            entries,
            reference.row_labels().to_vec(),
            reference.col_labels().to_vec(),
        ) {
            break m;
        }
    };
    let r = verify_theta(&f, &f_prime, &m, DEFAULT_PRIME, 50, DEFAULT_SEED).unwrap();
    assert_eq!(r.verdict, Verdict::Refuted);
    assert_eq!(r.orientation, None);
    assert!(r.witness.is_some());
}

#[test]
fn matrix_construction_validates_shape_labels_and_rank() {
    let l2 = [pt(0, 0), pt(1, 0)];
    assert_eq!(
        ProjectiveMatrix::new(vec![vec![1, 0]], l2.to_vec(), l2.to_vec()).unwrap_err(),
        IsoCheckError::ShapeMismatch
    );
    assert_eq!(
        ProjectiveMatrix::new(vec![], vec![], vec![]).unwrap_err(),
        IsoCheckError::ShapeMismatch
    );
    assert_eq!(
        ProjectiveMatrix::new(
            vec![vec![1, 0], vec![0, 1]],
            vec![pt(0, 0), pt(0, 0)],
            l2.to_vec()
        )
        .unwrap_err(),
        IsoCheckError::DuplicateLabel(pt(0, 0))
    );
    assert_eq!(
        ProjectiveMatrix::new(vec![vec![1, 2], vec![2, 4]], l2.to_vec(), l2.to_vec()).unwrap_err(),
        IsoCheckError::SingularMatrix
    );
}

#[test]
fn matrices_round_trip_through_json_and_reject_singular_input() {
    let m = genus9_theta_matrix();
    let json = serde_json::to_string(&m).unwrap();
    let back: ProjectiveMatrix = serde_json::from_str(&json).unwrap();
    assert_eq!(m, back);
    let singular = r#"{
        "entries": [[1, 2], [2, 4]],
        "row_labels": [[0, 0], [1, 0]],
        "col_labels": [[0, 0], [1, 0]]
    }"#;
    let err = serde_json::from_str::<ProjectiveMatrix>(singular).unwrap_err();
    assert!(err.to_string().contains("singular"));
}

#[test]
fn products_check_label_compatibility() {
    let m = genus9_theta_matrix();
    assert_eq!(m.matmul(&m).unwrap_err(), IsoCheckError::ProductLabelMismatch);
    let prod = m.matmul(&m.transpose()).unwrap();
    assert_eq!(prod.row_labels(), m.row_labels());
    assert_eq!(prod.col_labels(), m.row_labels());
    assert_eq!(m.entry(pt(0, 1), pt(1, 1)), Some(4));
    assert_eq!(m.transpose().entry(pt(1, 1), pt(0, 1)), Some(4));
}

#[test]
fn projective_image_applies_the_matrix_over_the_field() {
    let fp = PrimeField::new(101).unwrap();
    let labels = [pt(0, 0), pt(1, 0), pt(0, 1)];
    let id = ProjectiveMatrix::identity(&labels).unwrap();
    assert_eq!(projective_image(&fp, &id, &[3, 5, 7]), vec![3, 5, 7]);
    let double = ProjectiveMatrix::new(
        vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]],
        labels.to_vec(),
        labels.to_vec(),
    )
    .unwrap();
    assert_eq!(projective_image(&fp, &double, &[3, 5, 100]), vec![6, 10, 99]);
}

#[test]
fn proportionality_ignores_a_global_scalar_only() {
    let labels = [pt(0, 0), pt(1, 0)];
    let a = ProjectiveMatrix::new(vec![vec![1, 2], vec![3, 4]], labels.to_vec(), labels.to_vec())
        .unwrap();
    let b = ProjectiveMatrix::new(vec![vec![3, 6], vec![9, 12]], labels.to_vec(), labels.to_vec())
        .unwrap();
    let c = ProjectiveMatrix::new(vec![vec![3, 6], vec![9, 13]], labels.to_vec(), labels.to_vec())
        .unwrap();
    assert!(a.proportional_to(&b));
    assert!(b.proportional_to(&a));
    assert!(!a.proportional_to(&c));
}

// ---------------------------------------------------------------------------
// One-parameter automorphism matrices

fn witness_for(delta: &LatticePolygon, v: LatticePoint) -> ColumnVector {
    column_vectors(delta)
        .unwrap()
        .into_iter()
        .find(|w| w.v == v)
        .expect("requested column vector exists")
}

#[test]
fn unit_square_matrix_is_the_displayed_shear() {
    let square = hull("0,0; 1,0; 1,1; 0,1");
    let w = witness_for(&square, pt(0, -1));
    let labels = vec![pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1)];

    let m3 = e_v_lambda_matrix(&square, &w, &rat(3)).unwrap();
    assert_eq!(m3.row_labels(), &labels[..]);
    assert_eq!(m3.col_labels(), &labels[..]);
    assert_eq!(
        m3.entries(),
        &[
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![3, 0, 1, 0],
            vec![0, 3, 0, 1],
        ]
    );

    let mhalf = e_v_lambda_matrix(&square, &w, &brat(5, 2)).unwrap();
    assert_eq!(
        mhalf.entries(),
        &[
            vec![2, 0, 0, 0],
            vec![0, 2, 0, 0],
            vec![5, 0, 2, 0],
            vec![0, 5, 0, 2],
        ]
    );

    let m0 = e_v_lambda_matrix(&square, &w, &rat(0)).unwrap();
    assert!(m0.proportional_to(&ProjectiveMatrix::identity(&labels).unwrap()));
}

#[test]
fn two_simplex_action_shifts_the_second_coordinate() {
    let two_sigma = hull("0,0; 2,0; 0,2");
    let w = witness_for(&two_sigma, pt(0, -1));
    let m = e_v_lambda_matrix(&two_sigma, &w, &rat(1)).unwrap();
    let fp = PrimeField::new(DEFAULT_PRIME).unwrap();
    let labels = m.col_labels().to_vec();
    let embed = |x: u64, y: u64| -> Vec<u64> {
        labels
            .iter()
            .map(|e| fp.mul(&field_pow(&fp, &x, e.x), &field_pow(&fp, &y, e.y)))
            .collect()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let x = rng.gen_range(1..DEFAULT_PRIME);
        let y = rng.gen_range(1..DEFAULT_PRIME - 1);
        let image = projective_image(&fp, &m, &embed(x, y));
        let shifted = embed(x, y + 1);
        // proportional: cross-multiply against the first coordinate
        assert!(image[0] != 0 && shifted[0] != 0);
        for i in 0..labels.len() {
            assert_eq!(
                fp.mul(&image[i], &shifted[0]),
                fp.mul(&shifted[i], &image[0]),
                "coordinate {} at ({x}, {y})",
                labels[i]
            );
        }
    }
}

#[test]
fn shearing_the_polygon_transports_the_matrix_entries() {
    let two_sigma = hull("0,0; 2,0; 0,2");
    let shear = UnimodularMap::new([[1, 1], [0, 1]], [0, 0]).unwrap();
    let sheared = hull("0,0; 2,0; 2,2");
    let lambda = brat(7, 3);
    let m1 = e_v_lambda_matrix(&two_sigma, &witness_for(&two_sigma, pt(0, -1)), &lambda).unwrap();
    let m2 = e_v_lambda_matrix(&sheared, &witness_for(&sheared, pt(-1, -1)), &lambda).unwrap();
    for &src in m1.col_labels() {
        for &dst in m1.row_labels() {
            assert_eq!(
                m1.entry(dst, src),
                m2.entry(shear.apply(dst), shear.apply(src)),
                "{src} -> {dst}"
            );
        }
    }
}

#[test]
fn non_column_vectors_are_rejected() {
    let two_sigma = hull("0,0; 2,0; 0,2");
    let bogus = ColumnVector { v: pt(1, 0), base_edge: 0 };
    assert_eq!(
        e_v_lambda_matrix(&two_sigma, &bogus, &rat(1)).unwrap_err(),
        IsoCheckError::NotAColumnVector
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn e_matrices_form_a_one_parameter_group(
        n1 in -9i64..10, d1 in 1i64..5, n2 in -9i64..10, d2 in 1i64..5,
    ) {
        let two_sigma = hull("0,0; 2,0; 0,2");
        let w = witness_for(&two_sigma, pt(0, -1));
        let l1 = brat(n1, d1);
        let l2 = brat(n2, d2);
        let a = e_v_lambda_matrix(&two_sigma, &w, &l1).unwrap();
        let b = e_v_lambda_matrix(&two_sigma, &w, &l2).unwrap();
        let sum = e_v_lambda_matrix(&two_sigma, &w, &(&l1 + &l2)).unwrap();
        prop_assert!(a.matmul(&b).unwrap().proportional_to(&sum));
    }
}

// ---------------------------------------------------------------------------
// Registry

#[test]
fn registry_lists_the_built_in_examples_in_order() {
    let names: Vec<String> = registry().into_iter().map(|e| e.name).collect();
    assert_eq!(
        names,
        [
            "example-1",
            "0mod4-g8",
            "0mod4-g12",
            "0mod4-g16",
            "genus9-theta",
            "koelman-figures-unavailable",
        ]
    );
    assert!(registry_entry("genus9-theta").is_some());
    assert!(registry_entry("nonsense").is_none());
}

#[test]
fn every_registry_entry_runs_to_its_expected_verdict() {
    for entry in registry() {
        let outcome = run_entry(&entry, DEFAULT_PRIME, DEFAULT_TRIALS, DEFAULT_SEED).unwrap();
        match outcome {
            RegistryOutcome::Report(report) => {
                assert_eq!(Some(report.verdict), entry.expected_verdict, "{}", entry.name);
                assert_eq!(report.failed, 0, "{}", entry.name);
            }
            RegistryOutcome::Note(note) => {
                assert_eq!(entry.name, "koelman-figures-unavailable");
                assert!(note.contains("figures"));
            }
        }
    }
}

#[test]
fn registry_entries_round_trip_through_json() {
    let json = serde_json::to_string_pretty(&registry()).unwrap();
    let back: Vec<RegistryEntry> = serde_json::from_str(&json).unwrap();
    assert_eq!(back.len(), 6);
    assert_eq!(back[4].name, "genus9-theta");
    assert!(back[4].matrix.is_some());
    match run_entry(&back[0], 101, 5, 0).unwrap() {
        RegistryOutcome::Report(r) => assert_eq!(r.verdict, Verdict::Verified),
        RegistryOutcome::Note(_) => panic!("example-1 is runnable"),
    }
}

#[test]
fn a_handwritten_entry_file_parses_and_runs() {
    let raw = r#"{
        "name": "line-self-check",
        "description": "identity maps on a line",
        "f": "x + y - 1",
        "f_prime": "x + y - 1",
        "maps": {
            "forward":  { "x": { "num": "x", "den": "1" }, "y": { "num": "y", "den": "1" } },
            "backward": { "x": { "num": "x", "den": "1" }, "y": { "num": "y", "den": "1" } }
        },
        "expected_verdict": "Verified"
    }"#;
    let entry: RegistryEntry = serde_json::from_str(raw).unwrap();
    match run_entry(&entry, 7, 10, 0).unwrap() {
        RegistryOutcome::Report(r) => {
            assert_eq!(r.verdict, Verdict::Verified);
            assert_eq!(r.verified, 10);
        }
        RegistryOutcome::Note(_) => panic!("entry is runnable"),
    }
}

#[test]
fn malformed_entries_are_rejected_with_context() {
    let mut entry = registry_entry("genus9-theta").unwrap();
    entry.maps = Some(MapPairSpec {
        forward: RationalMap::identity().to_spec(),
        backward: RationalMap::identity().to_spec(),
    });
    let err = run_entry(&entry, 101, 5, 0).unwrap_err();
    assert!(matches!(err, IsoCheckError::BadRegistryEntry { .. }));
    assert!(err.to_string().contains("genus9-theta"));

    let empty = RegistryEntry {
        name: "empty".into(),
        description: String::new(),
        note: None,
        f: None,
        f_prime: None,
        maps: None,
        matrix: None,
        expected_verdict: None,
    };
    assert!(matches!(
        run_entry(&empty, 101, 5, 0).unwrap_err(),
        IsoCheckError::BadRegistryEntry { .. }
    ));
}

#[test]
fn reports_serialize_with_the_reproducibility_fields() {
    let (f, f_prime) = genus9_pair();
    let m = genus9_theta_matrix();
    let r = verify_theta(&f, &f_prime, &m, DEFAULT_PRIME, 5, DEFAULT_SEED).unwrap();
    let value = serde_json::to_value(&r).unwrap();
    for key in ["verdict", "verified", "undefined_at", "failed", "orientation", "p", "n", "seed"] {
        assert!(value.get(key).is_some(), "missing {key}");
    }
    assert_eq!(value["orientation"], "ColumnsToRows");
    assert_eq!(value["p"], serde_json::json!(DEFAULT_PRIME));
    assert_eq!(value["seed"], 0);
}
