use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::classify::make_family;
use crate::invariants::d_sigma;
use crate::lattice::{equivalent, parse_points, UnimodularMap};

fn hull(s: &str) -> LatticePolygon {
    convex_hull(&parse_points(s).unwrap()).unwrap()
}

fn counts_by_genus(polys: &[LatticePolygon]) -> BTreeMap<i64, usize> {
    let mut by_genus: BTreeMap<i64, usize> = BTreeMap::new();
    for p in polys {
        *by_genus.entry(p.lattice_points().len() as i64).or_default() += 1;
    }
    by_genus
}

#[test]
fn descriptor_reconstruction_checks_hull_consistency() {
    // a long middle row turns its endpoints into vertices: fine
    let spike = StripDescriptor {
        rows: [(0, 0), (0, 5), (0, 0)],
    };
    assert_eq!(spike.polygon().unwrap(), hull("0,0; 0,2; 5,1"));

    // a middle row shorter than the hull cross-section is inconsistent
    let pinched = StripDescriptor {
        rows: [(0, 3), (0, 0), (0, 3)],
    };
    assert_eq!(pinched.polygon(), None);

    // rows describing a segment are not two-dimensional
    let flat = StripDescriptor {
        rows: [(0, 0), (0, 0), (0, 0)],
    };
    assert_eq!(flat.polygon(), None);
}

#[test]
fn frozen_counts_by_genus_up_to_12() {
    let polys = enumerate_width2_interior(12).unwrap();
    assert_eq!(polys.len(), 74);
    let by_genus = counts_by_genus(&polys);
    let expected: BTreeMap<i64, usize> = [
        (4, 1),
        (5, 3),
        (6, 3),
        (7, 5),
        (8, 9),
        (9, 12),
        (10, 11),
        (11, 14),
        (12, 16),
    ]
    .into_iter()
    .collect();
    assert_eq!(by_genus, expected);
}

#[test]
fn genus_bound_must_be_at_least_4() {
    assert!(matches!(
        enumerate_width2_interior(3),
        Err(AtlasError::GenusBoundTooSmall)
    ));
}

#[test]
fn small_genus_polygons_are_the_expected_ones() {
    let polys = enumerate_width2_interior(5).unwrap();
    assert_eq!(polys.len(), 4);

    // the single genus-4 polygon is the fundamental triangle
    let g4: Vec<_> = polys
        .iter()
        .filter(|p| p.lattice_points().len() == 4)
        .collect();
    assert_eq!(g4.len(), 1);
    assert!(equivalent(g4[0], &hull("-1,-1; 1,0; 0,1")).is_some());

    // all three genus-5 polygons have B = B1 = 0
    let rows = atlas_rows(5).unwrap();
    let g5: Vec<_> = rows.iter().filter(|r| r.g == 5).collect();
    assert_eq!(g5.len(), 3);
    assert!(g5.iter().all(|r| (r.b, r.b1) == (0, 0)));
    assert!(g5
        .iter()
        .all(|r| matches!(r.family, Some(FamilyTag::Gamma4k5 { k: 0, .. }))));
}

#[test]
fn raising_the_extent_bound_adds_nothing() {
    let base = enumerate_width2_interior_bounded(12, default_extent(12)).unwrap();
    let wider = enumerate_width2_interior_bounded(12, default_extent(12) + 2).unwrap();
    assert_eq!(base, wider);
}

#[test]
fn every_family_member_is_enumerated_once() {
    let polys = enumerate_width2_interior(12).unwrap();
    let mut tags = Vec::new();
    for k in 0..=2 {
        tags.push(FamilyTag::Gamma4k4 { k });
        for m in 0..=k + 2 {
            tags.push(FamilyTag::Gamma4k5 { k, m });
        }
        if k >= 1 {
            tags.push(FamilyTag::Gamma4k3 { k });
        }
        if k >= 2 {
            tags.push(FamilyTag::Gamma4k1 { k });
        }
    }
    for tag in tags {
        if tag.genus() > 12 {
            continue;
        }
        let nf = normal_form(&make_family(tag).unwrap()).0;
        let hits = polys.iter().filter(|p| **p == nf).count();
        assert_eq!(hits, 1, "{tag:?}");
    }
}

#[test]
fn enumerated_polygons_round_trip_through_relax() {
    for gamma in enumerate_width2_interior(8).unwrap() {
        let delta = relax(&gamma).unwrap().as_lattice().unwrap();
        assert_eq!(delta.interior_hull().unwrap().unwrap(), gamma);
    }
}

#[test]
fn random_unimodular_images_renormalize_into_the_atlas() {
    let polys = enumerate_width2_interior(9).unwrap();
    let set: std::collections::BTreeSet<_> = polys.iter().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..50 {
        let gamma = &polys[rng.gen_range(0..polys.len())];
        let mut map = UnimodularMap::translation_by(pt(
            rng.gen_range(-20..=20),
            rng.gen_range(-20..=20),
        ));
        for _ in 0..4 {
            let k = rng.gen_range(-3..=3);
            let shear = if rng.gen_bool(0.5) {
                UnimodularMap::new([[1, k], [0, 1]], [0, 0]).unwrap()
            } else {
                UnimodularMap::new([[1, 0], [k, 1]], [0, 0]).unwrap()
            };
            map = shear.compose(&map);
        }
        let image = map.apply_polygon(gamma);
        assert!(set.contains(&normal_form(&image).0));
    }
}

#[test]
fn delta_enumeration_over_the_genus_8_family_polygon_is_unique() {
    let gamma8 = make_family(FamilyTag::Gamma4k4 { k: 1 }).unwrap();
    let deltas = enumerate_delta_with_interior(&gamma8).unwrap();
    let expected = relax(&gamma8).unwrap().as_lattice().unwrap();
    assert_eq!(deltas, vec![expected]);
}

#[test]
fn delta_enumeration_over_the_unit_square_interior() {
    let square = hull("1,1; 2,1; 2,2; 1,2");
    let deltas = enumerate_delta_with_interior(&square).unwrap();
    assert_eq!(deltas.len(), 338);
    assert!(deltas.contains(&hull("0,0; 3,0; 3,3; 0,3")));
    for delta in &deltas {
        assert_eq!(delta.interior_hull().unwrap().unwrap(), square);
    }
}

#[test]
fn delta_enumeration_over_twice_the_standard_triangle() {
    let two_sigma = d_sigma(2);
    let deltas = enumerate_delta_with_interior(&two_sigma).unwrap();
    assert_eq!(deltas.len(), 419);
    let five_sigma = relax(&two_sigma).unwrap().as_lattice().unwrap();
    assert!(deltas.contains(&five_sigma));
    assert!(equivalent(&five_sigma, &d_sigma(5)).is_some());
}

#[test]
fn delta_enumeration_rejects_non_interior_polygons() {
    assert!(matches!(
        enumerate_delta_with_interior(&hull("0,0; 4,0; 1,2")),
        Err(AtlasError::NotInteriorPolygon)
    ));
    assert!(matches!(
        enumerate_delta_with_interior(&hull("0,0; 3,0")),
        Err(AtlasError::NotInteriorPolygon)
    ));
}

#[test]
fn trichotomy_and_b_sum_verify_clean_up_to_genus_12() {
    let report = verify_family_trichotomy(12).unwrap();
    assert_eq!(report.checked, 74);
    assert!(report.ok(), "{:?}", report.violations);

    let report = verify_b_sum(12).unwrap();
    assert_eq!(report.checked, 74);
    assert!(report.ok(), "{:?}", report.violations);
}

#[test]
fn a_corrupted_recognizer_is_reported_as_violations() {
    let polys = enumerate_width2_interior(12).unwrap();
    // pretend the B < B1 family does not exist
    let report = check_trichotomy_with(&polys, |gamma| {
        recognize_family(gamma).map(|family| match family {
            Some(FamilyTag::Gamma4k4 { .. }) => None,
            other => other,
        })
    })
    .unwrap();
    // one violation per Gamma4k4 member with genus <= 12 (k = 0, 1, 2)
    assert_eq!(report.violations.len(), 3);
    assert!(report
        .violations
        .iter()
        .all(|v| v.detail.contains("B < B1")));
}

#[test]
fn atlas_rows_carry_the_documented_fields() {
    let rows = atlas_rows(6).unwrap();
    assert_eq!(rows.len(), 7);
    for row in &rows {
        assert_eq!(row.b + row.b1, row.g - 5);
        assert!(row.koelman_type <= 2);
        assert_eq!(row.family.is_some(), row.b <= row.b1);
        if let Some(e) = row.scrollar {
            assert_eq!(e.iter().sum::<i64>(), row.g - 3);
        }
    }
    // scrollar is absent exactly for the two exceptional relaxations
    // (2-upsilon and 5-sigma)
    let missing = rows.iter().filter(|r| r.scrollar.is_none()).count();
    assert_eq!(missing, 2);

    let json = serde_json::to_value(&rows[0]).unwrap();
    for key in ["vertices", "g", "B", "B1", "koelman_type", "family", "scrollar"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(AtlasRow::csv_header().split(';').count(), 7);
    assert_eq!(rows[0].to_csv().split(';').count(), 7);
}
