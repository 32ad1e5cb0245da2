//! A canonical form for lattice polygons under affine unimodular maps.
//!
//! Two polygons are equivalent exactly when their canonical forms are equal,
//! and the map achieving the canonical form is returned so equivalence tests
//! can hand back a verified witness.
//!
//! Construction for a two-dimensional polygon P: for each of P and its
//! mirror image, and for each edge, apply the unimodular map that sends the
//! edge onto the X-axis starting at the origin with the polygon in the upper
//! half-plane, then the shear (which fixes the X-axis) pinned by putting the
//! leftmost top-row vertex's column into [0, height). The canonical form is
//! the lexicographically smallest of the finitely many placements so
//! obtained. Each placement depends only on the point set, never on input
//! ordering, so the minimum is a true invariant.

use super::{chk, egcd, floor_div, narrow, LatticePolygon, UnimodularMap};

fn canonical_placements(p: &LatticePolygon) -> Vec<(LatticePolygon, UnimodularMap)> {
    let mirror = UnimodularMap::new([[1, 0], [0, -1]], [0, 0]).unwrap();
    let mut out = Vec::new();
    for refl in [UnimodularMap::identity(), mirror] {
        let q = refl.apply_polygon(p);
        for (u, w) in q.edges() {
            let d = w.sub(u).primitive();
            let (g, s, t) = egcd(d.x, d.y);
            debug_assert_eq!(g, 1);
            // det +1, so the interior (left of the edge) lands above the axis
            let rot = UnimodularMap::new([[s, t], [chk(d.y.checked_neg()), d.x]], [0, 0]).unwrap();
            let u0 = rot.apply(u);
            let place = UnimodularMap::translation_by(u0.neg()).compose(&rot);
            let placed = place.apply_polygon(&q);
            let ymax = placed.vertices().iter().map(|v| v.y).max().unwrap();
            debug_assert!(ymax > 0);
            let top_min_x = placed
                .vertices()
                .iter()
                .filter(|v| v.y == ymax)
                .map(|v| v.x)
                .min()
                .unwrap();
            let k = narrow(-floor_div(top_min_x as i128, ymax as i128));
            let shear = UnimodularMap::new([[1, k], [0, 1]], [0, 0]).unwrap();
            let map = shear.compose(&place).compose(&refl);
            out.push((map.apply_polygon(p), map));
        }
    }
    out
}

/// Canonical representative of the unimodular equivalence class, plus a map
/// carrying the input onto it.
pub fn normal_form(p: &LatticePolygon) -> (LatticePolygon, UnimodularMap) {
    match p.dimension() {
        0 => {
            let map = UnimodularMap::translation_by(p.vertices()[0].neg());
            (map.apply_polygon(p), map)
        }
        1 => {
            let (a, b) = (p.vertices()[0], p.vertices()[1]);
            let d = b.sub(a).primitive();
            let (g, s, t) = egcd(d.x, d.y);
            debug_assert_eq!(g, 1);
            let rot = UnimodularMap::new([[s, t], [chk(d.y.checked_neg()), d.x]], [0, 0]).unwrap();
            let map = UnimodularMap::translation_by(rot.apply(a).neg()).compose(&rot);
            (map.apply_polygon(p), map)
        }
        _ => canonical_placements(p)
            .into_iter()
            .min_by(|(a, _), (b, _)| a.cmp(b))
            .unwrap(),
    }
}

/// Tests unimodular equivalence; on success returns a verified map carrying
/// `p` onto `q`.
pub fn equivalent(p: &LatticePolygon, q: &LatticePolygon) -> Option<UnimodularMap> {
    let (np, mp) = normal_form(p);
    let (nq, mq) = normal_form(q);
    if np != nq {
        return None;
    }
    let map = mq.inverse().compose(&mp);
    debug_assert_eq!(map.apply_polygon(p), *q);
    Some(map)
}
