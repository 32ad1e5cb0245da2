use super::*;
use proptest::prelude::*;

fn poly(pts: &[(i64, i64)]) -> LatticePolygon {
    let v: Vec<LatticePoint> = pts.iter().map(|&(x, y)| pt(x, y)).collect();
    convex_hull(&v).unwrap()
}

/// conv{(0,0),(d,0),(0,d)}
fn simplex(d: i64) -> LatticePolygon {
    poly(&[(0, 0), (d, 0), (0, d)])
}

/// d * conv{(-1,-1),(1,0),(0,1)}
fn upsilon(d: i64) -> LatticePolygon {
    poly(&[(-d, -d), (d, 0), (0, d)])
}

#[test]
fn hull_canonical_cycle() {
    let p = poly(&[(0, 0), (1, 0), (0, 1), (1, 1), (0, 0)]);
    assert_eq!(p.vertices(), &[pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]);
    assert_eq!(p.dimension(), 2);

    // collinear points on edges are dropped
    let q = poly(&[(0, 0), (1, 0), (2, 0), (3, 0), (0, 3), (0, 2)]);
    assert_eq!(q.vertices(), &[pt(0, 0), pt(3, 0), pt(0, 3)]);

    let support = poly(&[(0, 0), (0, 2), (6, 2), (6, 4)]);
    assert_eq!(
        support.vertices(),
        &[pt(0, 0), pt(6, 2), pt(6, 4), pt(0, 2)]
    );
}

#[test]
fn hull_degenerate_cases() {
    assert!(matches!(convex_hull(&[]), Err(LatticeError::EmptyPointSet)));

    let point = poly(&[(5, -7), (5, -7)]);
    assert_eq!(point.dimension(), 0);
    assert_eq!(point.vertices(), &[pt(5, -7)]);

    let seg = poly(&[(2, 2), (0, 0), (1, 1)]);
    assert_eq!(seg.dimension(), 1);
    assert_eq!(seg.vertices(), &[pt(0, 0), pt(2, 2)]);
    assert_eq!(seg.lattice_points().len(), 3);
    assert!(seg.lattice_points().iter().all(|lp| lp.on_boundary));
    assert!(seg.contains(pt(1, 1)));
    assert!(!seg.contains(pt(3, 3)));
    assert!(!seg.contains(pt(1, 0)));
}

#[test]
fn lattice_points_counts() {
    let square = poly(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
    assert_eq!(square.lattice_point_count(), 4);
    assert!(square.interior_points().is_empty());

    let d = poly(&[(0, 0), (6, 2), (6, 4), (0, 2)]);
    let pts = d.lattice_points();
    assert_eq!(pts.len(), 17);
    assert_eq!(d.interior_points().len(), 9);
    assert_eq!(d.boundary_points().len(), 8);
    assert_eq!(d.double_area(), 24);
    assert!(d.pick_check());
    // sorted by (y, x)
    let mut sorted = pts.clone();
    sorted.sort_by_key(|lp| lp.point.key_yx());
    assert_eq!(pts, sorted);

    assert_eq!(simplex(3).lattice_point_count(), 10);
    assert_eq!(simplex(3).interior_points(), vec![pt(1, 1)]);
}

#[test]
fn interior_hull_cases() {
    // interior hull can drop dimension or be empty
    let rect41 = poly(&[(0, 0), (3, 0), (3, 1), (0, 1)]);
    assert_eq!(rect41.interior_hull().unwrap(), None);

    let rect42 = poly(&[(0, 0), (4, 0), (4, 2), (0, 2)]);
    let ih = rect42.interior_hull().unwrap().unwrap();
    assert_eq!(ih.dimension(), 1);
    assert_eq!(ih.vertices(), &[pt(1, 1), pt(3, 1)]);

    let tri = poly(&[(0, 0), (4, 0), (0, 2)]);
    let ih = tri.interior_hull().unwrap().unwrap();
    assert_eq!(ih.dimension(), 0);
    assert_eq!(ih.vertices(), &[pt(1, 1)]);

    let ih = simplex(4).interior_hull().unwrap().unwrap();
    assert_eq!(ih, simplex(1).translate(pt(1, 1)));

    let seg = poly(&[(0, 0), (2, 2)]);
    assert!(matches!(
        seg.interior_hull(),
        Err(LatticeError::NotTwoDimensional)
    ));
}

#[test]
fn half_planes_of_simplex() {
    let hps = simplex(3).half_planes().unwrap();
    assert_eq!(
        hps,
        vec![
            HalfPlane { a: 0, b: -1, c: 0 },
            HalfPlane { a: 1, b: 1, c: 3 },
            HalfPlane { a: -1, b: 0, c: 0 },
        ]
    );
    for hp in &hps {
        assert_eq!(gcd_i64(hp.a, hp.b), 1);
    }
}

#[test]
fn unimodular_map_algebra() {
    assert!(matches!(
        UnimodularMap::new([[2, 0], [0, 1]], [0, 0]),
        Err(LatticeError::NotUnimodular(2))
    ));
    let m = UnimodularMap::new([[2, 5], [1, 3]], [4, -7]).unwrap();
    let n = UnimodularMap::new([[1, -1], [0, 1]], [2, 9]).unwrap();
    let p = pt(13, -6);
    assert_eq!(m.compose(&n).apply(p), m.apply(n.apply(p)));
    assert_eq!(m.inverse().apply(m.apply(p)), p);
    assert_eq!(m.compose(&m.inverse()), UnimodularMap::identity());
    assert_eq!(m.apply_vector(pt(1, 0)), pt(2, 1));
}

#[test]
fn relax_simplex_is_bigger_simplex() {
    let r = relax(&simplex(1)).unwrap();
    assert!(r.is_lattice);
    let expected = simplex(4).translate(pt(-1, -1));
    assert_eq!(r.as_lattice().unwrap(), expected);
    assert_eq!(
        r.vertices,
        vec![
            RationalVertex { x_num: -1, y_num: -1, den: 1 },
            RationalVertex { x_num: 3, y_num: -1, den: 1 },
            RationalVertex { x_num: -1, y_num: 3, den: 1 },
        ]
    );

    let r2 = relax(&upsilon(2)).unwrap();
    assert!(r2.is_lattice);
    assert_eq!(r2.as_lattice().unwrap(), upsilon(3));
}

#[test]
fn relax_can_be_fractional() {
    let p = poly(&[(0, 0), (3, 1), (1, 3)]);
    let r = relax(&p).unwrap();
    assert!(!r.is_lattice);
    assert!(r.as_lattice().is_none());
    assert!(r.vertices.contains(&RationalVertex {
        x_num: -1,
        y_num: -1,
        den: 2
    }));
}

#[test]
fn relax_of_small_triangle_is_twice_upsilon() {
    let gamma4 = poly(&[(0, 0), (2, 1), (1, 2)]);
    let r = relax(&gamma4).unwrap().as_lattice().unwrap();
    assert!(equivalent(&r, &upsilon(2)).is_some());
}

#[test]
fn width_of_small_polygons() {
    assert_eq!(lattice_width(&simplex(1)).width, 1);
    assert_eq!(
        lattice_width(&simplex(1)).directions,
        vec![pt(0, 1), pt(1, 0), pt(1, 1)]
    );
    assert_eq!(lattice_width(&simplex(3)).width, 3);
    assert_eq!(lattice_width(&upsilon(1)).width, 2);
    assert_eq!(lattice_width(&upsilon(2)).width, 4);

    let seg = poly(&[(0, 0), (4, 2)]);
    let w = lattice_width(&seg);
    assert_eq!(w.width, 0);
    assert_eq!(w.directions, vec![pt(1, -2)]);

    let point = poly(&[(3, 3)]);
    assert_eq!(lattice_width(&point).width, 0);
    assert!(lattice_width(&point).directions.is_empty());
}

#[test]
fn strip_normalize_simplex_is_identity() {
    let (map, q) = strip_normalize(&simplex(3)).unwrap();
    assert_eq!(map, UnimodularMap::identity());
    assert_eq!(q, simplex(3));
}

#[test]
fn strip_normalize_places_rows() {
    let skew = poly(&[(10, 7), (14, 9), (11, 9), (15, 11)]);
    let (map, q) = strip_normalize(&skew).unwrap();
    assert_eq!(map.apply_polygon(&skew), q);
    let w = lattice_width(&skew).width;
    let (lo, hi) = q.bounding_box();
    assert_eq!(lo.y, 0);
    assert_eq!(hi.y, w);
    let row_min = |row: i64| {
        q.lattice_points()
            .iter()
            .filter(|lp| lp.point.y == row)
            .map(|lp| lp.point.x)
            .min()
            .unwrap()
    };
    assert_eq!(row_min(0), 0);
    let top = row_min(w);
    assert!((0..w).contains(&top));
}

#[test]
fn normal_form_fixed_values() {
    let (nf, map) = normal_form(&simplex(3));
    assert_eq!(map.apply_polygon(&simplex(3)), nf);
    // the class representative is stable across presentations
    let sheared = UnimodularMap::new([[1, 4], [0, 1]], [-3, 11])
        .unwrap()
        .apply_polygon(&simplex(3));
    assert_eq!(normal_form(&sheared).0, nf);

    let (nf_seg, _) = normal_form(&poly(&[(3, 3), (7, 5)]));
    assert_eq!(nf_seg.vertices(), &[pt(0, 0), pt(2, 0)]);

    let (nf_pt, _) = normal_form(&poly(&[(-4, 9)]));
    assert_eq!(nf_pt.vertices(), &[pt(0, 0)]);
}

#[test]
fn equivalence_with_witness() {
    let a = simplex(2);
    let m = UnimodularMap::new([[3, 2], [1, 1]], [5, -1]).unwrap();
    let b = m.apply_polygon(&a);
    let w = equivalent(&a, &b).expect("equivalent");
    assert_eq!(w.apply_polygon(&a), b);

    assert!(equivalent(&simplex(1), &upsilon(1)).is_none());
    assert!(equivalent(&simplex(2), &simplex(3)).is_none());
    // mirror images are equivalent (det -1 allowed)
    let c = poly(&[(0, 0), (3, 1), (1, 4)]);
    let mirrored = UnimodularMap::new([[1, 0], [0, -1]], [0, 0])
        .unwrap()
        .apply_polygon(&c);
    assert!(equivalent(&c, &mirrored).is_some());
}

#[test]
fn column_vectors_of_simplex() {
    let cvs = column_vectors(&simplex(3)).unwrap();
    let expected = vec![
        ColumnVector { v: pt(0, -1), base_edge: 0 },
        ColumnVector { v: pt(1, -1), base_edge: 0 },
        ColumnVector { v: pt(0, 1), base_edge: 1 },
        ColumnVector { v: pt(1, 0), base_edge: 1 },
        ColumnVector { v: pt(-1, 0), base_edge: 2 },
        ColumnVector { v: pt(-1, 1), base_edge: 2 },
    ];
    assert_eq!(cvs, expected);
    for cv in &cvs {
        assert!(is_column_vector(&simplex(3), cv.v, cv.base_edge).unwrap());
    }
    assert!(!is_column_vector(&simplex(3), pt(0, -1), 1).unwrap());
    assert!(matches!(
        is_column_vector(&simplex(3), pt(0, -1), 9),
        Err(LatticeError::BadEdgeIndex(9))
    ));
}

// the normal-direction shortcut in column_vectors must agree with the
// definition checked over the whole search box
fn column_vectors_unfiltered(p: &LatticePolygon) -> Vec<ColumnVector> {
    let hps = p.half_planes().unwrap();
    let (lo, hi) = p.bounding_box();
    let (wx, wy) = (hi.x - lo.x, hi.y - lo.y);
    let mut out = Vec::new();
    for idx in 0..hps.len() {
        for vx in -wx..=wx {
            for vy in -wy..=wy {
                if (vx, vy) == (0, 0) {
                    continue;
                }
                if is_column_vector(p, pt(vx, vy), idx).unwrap() {
                    out.push(ColumnVector { v: pt(vx, vy), base_edge: idx });
                }
            }
        }
    }
    out.sort_by_key(|cv| (cv.base_edge, cv.v));
    out
}

#[test]
fn column_vector_shortcut_agrees_with_definition() {
    for p in [
        simplex(3),
        upsilon(1),
        upsilon(2),
        poly(&[(0, 0), (6, 2), (6, 4), (0, 2)]),
        poly(&[(0, 0), (2, 0), (3, 1), (1, 3), (0, 2)]),
    ] {
        assert_eq!(column_vectors(&p).unwrap(), column_vectors_unfiltered(&p));
    }
}

#[test]
fn parse_points_formats() {
    assert_eq!(
        parse_points("0,0; 6,2 ;6,4;0,2").unwrap(),
        vec![pt(0, 0), pt(6, 2), pt(6, 4), pt(0, 2)]
    );
    assert_eq!(
        parse_points("[[0,0],[1,2]]").unwrap(),
        vec![pt(0, 0), pt(1, 2)]
    );
    assert_eq!(parse_points("-3 , 5").unwrap(), vec![pt(-3, 5)]);
    assert!(parse_points("").is_err());
    assert!(parse_points("1,2,3").is_err());
    assert!(parse_points("a,b").is_err());
    assert!(parse_points("[[1]]").is_err());
}

#[test]
fn serde_shapes() {
    assert_eq!(serde_json::to_string(&pt(3, -4)).unwrap(), "[3,-4]");
    let p: LatticePoint = serde_json::from_str("[3,-4]").unwrap();
    assert_eq!(p, pt(3, -4));
    assert_eq!(
        serde_json::to_string(&simplex(1)).unwrap(),
        "[[0,0],[1,0],[0,1]]"
    );
}

prop_compose! {
    fn arb_points()(pts in prop::collection::vec((-8i64..=8, -8i64..=8), 3..10)) -> Vec<LatticePoint> {
        pts.into_iter().map(|(x, y)| pt(x, y)).collect()
    }
}

fn arb_polygon() -> impl Strategy<Value = LatticePolygon> {
    arb_points()
        .prop_map(|pts| convex_hull(&pts).unwrap())
        .prop_filter("two-dimensional", |p| p.is_two_dimensional())
}

fn arb_map() -> impl Strategy<Value = UnimodularMap> {
    (
        prop::collection::vec((0u8..3, -4i64..=4), 0..5),
        (-20i64..=20, -20i64..=20),
    )
        .prop_map(|(ops, (tx, ty))| {
            let mut m = UnimodularMap::identity();
            for (kind, k) in ops {
                let e = match kind {
                    0 => UnimodularMap::new([[1, k], [0, 1]], [0, 0]).unwrap(),
                    1 => UnimodularMap::new([[1, 0], [k, 1]], [0, 0]).unwrap(),
                    _ => UnimodularMap::new([[0, 1], [1, 0]], [0, 0]).unwrap(),
                };
                m = e.compose(&m);
            }
            UnimodularMap::translation_by(pt(tx, ty)).compose(&m)
        })
}

proptest! {
    #[test]
    fn hull_of_hull_is_identity(pts in arb_points()) {
        let h = convex_hull(&pts).unwrap();
        prop_assert_eq!(convex_hull(h.vertices()).unwrap(), h.clone());
        for &q in &pts {
            prop_assert!(h.contains(q));
        }
    }

    #[test]
    fn pick_identity_holds(p in arb_polygon()) {
        prop_assert!(p.pick_check());
    }

    #[test]
    fn width_and_count_are_unimodular_invariants(p in arb_polygon(), m in arb_map()) {
        let q = m.apply_polygon(&p);
        prop_assert_eq!(lattice_width(&p).width, lattice_width(&q).width);
        prop_assert_eq!(p.lattice_point_count(), q.lattice_point_count());
        prop_assert_eq!(p.interior_points().len(), q.interior_points().len());
        prop_assert_eq!(p.double_area(), q.double_area());
    }

    #[test]
    fn normal_form_classifies_orbits(p in arb_polygon(), m in arb_map()) {
        let q = m.apply_polygon(&p);
        let (nf_p, wp) = normal_form(&p);
        let (nf_q, wq) = normal_form(&q);
        prop_assert_eq!(&nf_p, &nf_q);
        prop_assert_eq!(wp.apply_polygon(&p), nf_p);
        prop_assert_eq!(wq.apply_polygon(&q), nf_q);
        let witness = equivalent(&p, &q).expect("images are equivalent");
        prop_assert_eq!(witness.apply_polygon(&p), q);
    }

    #[test]
    fn relax_respects_equivalence(p in arb_polygon(), m in arb_map()) {
        let q = m.apply_polygon(&p);
        let (rp, rq) = (relax(&p).unwrap(), relax(&q).unwrap());
        prop_assert_eq!(rp.is_lattice, rq.is_lattice);
        if let (Some(a), Some(b)) = (rp.as_lattice(), rq.as_lattice()) {
            prop_assert_eq!(m.apply_polygon(&a), b);
        }
    }

    #[test]
    fn relax_contains_and_restores_interior(p in arb_polygon()) {
        let r = relax(&p).unwrap();
        if let Some(big) = r.as_lattice() {
            for lp in p.lattice_points() {
                prop_assert!(big.contains(lp.point));
            }
            // the outward shift inverts taking the interior hull
            prop_assert_eq!(big.interior_hull().unwrap(), Some(p));
        }
    }

    #[test]
    fn strip_height_is_width(p in arb_polygon()) {
        let (map, q) = strip_normalize(&p).unwrap();
        prop_assert_eq!(map.apply_polygon(&p), q.clone());
        let (lo, hi) = q.bounding_box();
        prop_assert_eq!(lo.y, 0);
        prop_assert_eq!(hi.y, lattice_width(&p).width);
    }
}
