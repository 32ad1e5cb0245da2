//! Lattice width: the minimum over primitive directions w of
//! max{<w,u>} - min{<w,u>}, and the change of coordinates that lays a
//! polygon flat along a width direction.

use super::{
    chk, cross, dot, egcd, floor_div, narrow, pt, LatticeError, LatticePoint, LatticePolygon,
    UnimodularMap,
};
use serde::Serialize;

/// Width together with every primitive direction achieving it.
///
/// Directions are sign-normalized (first nonzero coordinate positive) and
/// sorted. A point has width 0 with no directions; a segment has width 0
/// along the primitive direction orthogonal to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WidthResult {
    pub width: i64,
    pub directions: Vec<LatticePoint>,
}

fn normalize_sign(v: LatticePoint) -> LatticePoint {
    if v.x < 0 || (v.x == 0 && v.y < 0) {
        v.neg()
    } else {
        v
    }
}

fn width_along(verts: &[LatticePoint], w: LatticePoint) -> i64 {
    let mut lo = i128::MAX;
    let mut hi = i128::MIN;
    for &v in verts {
        let d = dot(w, v);
        lo = lo.min(d);
        hi = hi.max(d);
    }
    narrow(hi - lo)
}

fn extent_after_shear(verts: &[LatticePoint], k: i128) -> i128 {
    let mut lo = i128::MAX;
    let mut hi = i128::MIN;
    for &v in verts {
        let x = v.x as i128 + k * v.y as i128;
        lo = lo.min(x);
        hi = hi.max(x);
    }
    hi - lo
}

/// Shrinks a skewed polygon before the direction search: alternately swap
/// axes so the X extent is the larger one and shear X by the multiple of Y
/// minimizing the X extent (a convex function of the shear, located by
/// ternary search). Each shear strictly shrinks the bounding box, so this
/// terminates; the width search box then stays small even for inputs
/// presented in wildly sheared coordinates.
fn reduce_for_width(p: &LatticePolygon) -> (UnimodularMap, LatticePolygon) {
    let swap = UnimodularMap::new([[0, 1], [1, 0]], [0, 0]).unwrap();
    let mut map = UnimodularMap::identity();
    let mut q = p.clone();
    loop {
        let (lo, hi) = q.bounding_box();
        let (ex, ey) = (hi.x as i128 - lo.x as i128, hi.y as i128 - lo.y as i128);
        if ex < ey {
            map = swap.compose(&map);
            q = swap.apply_polygon(&q);
        }
        let verts = q.vertices().to_vec();
        let ex = extent_after_shear(&verts, 0);
        let (mut a, mut b) = (-(2 * ex + 1), 2 * ex + 1);
        while b - a > 2 {
            let m1 = a + (b - a) / 3;
            let m2 = b - (b - a) / 3;
            if extent_after_shear(&verts, m1) <= extent_after_shear(&verts, m2) {
                b = m2;
            } else {
                a = m1;
            }
        }
        let k = (a..=b)
            .min_by_key(|&k| extent_after_shear(&verts, k))
            .unwrap();
        if extent_after_shear(&verts, k) >= ex {
            return (map, q);
        }
        let shear = UnimodularMap::new([[1, narrow(k)], [0, 1]], [0, 0]).unwrap();
        map = shear.compose(&map);
        q = shear.apply_polygon(&q);
    }
}

/// Exact lattice width by exhausting the finite set of candidate directions.
///
/// Any direction w of width at most `B` pairs with each of two independent
/// edge vectors d1, d2 to values in [-B, B], so w is determined by a pair
/// (s, t) in that box via the inverse of the matrix (d1 | d2). Seeding B
/// with the axis widths makes the search complete.
pub fn lattice_width(p: &LatticePolygon) -> WidthResult {
    match p.dimension() {
        0 => WidthResult {
            width: 0,
            directions: vec![],
        },
        1 => {
            let d = p.vertices()[1].sub(p.vertices()[0]).primitive();
            WidthResult {
                width: 0,
                directions: vec![normalize_sign(pt(chk(d.y.checked_neg()), d.x))],
            }
        }
        _ => {
            let (rmap, q) = reduce_for_width(p);
            let verts = q.vertices();
            let d1 = verts[1].sub(verts[0]).primitive();
            let d2 = verts[2].sub(verts[1]).primitive();
            let det = cross(pt(0, 0), d1, d2);
            debug_assert!(det != 0);
            let bound = width_along(verts, pt(1, 0)).min(width_along(verts, pt(0, 1)));
            let mut best = bound;
            let mut achievers: Vec<LatticePoint> = Vec::new();
            for ax in [pt(1, 0), pt(0, 1)] {
                if width_along(verts, ax) == bound {
                    achievers.push(ax);
                }
            }
            for s in -bound..=bound {
                for t in -bound..=bound {
                    // solve <w,d1> = s, <w,d2> = t
                    let nx = s as i128 * d2.y as i128 - t as i128 * d1.y as i128;
                    let ny = t as i128 * d1.x as i128 - s as i128 * d2.x as i128;
                    if nx % det != 0 || ny % det != 0 {
                        continue;
                    }
                    let w = pt(narrow(nx / det), narrow(ny / det));
                    if w.is_zero() {
                        continue;
                    }
                    let wd = width_along(verts, w);
                    if wd < best {
                        best = wd;
                        achievers.clear();
                    }
                    if wd == best {
                        achievers.push(w);
                    }
                }
            }
            // a direction w for the reduced polygon A(p) + t corresponds to
            // the direction transpose(A) * w for p itself
            let a = rmap.linear();
            let mut directions: Vec<LatticePoint> = achievers
                .into_iter()
                .map(|w| {
                    normalize_sign(pt(
                        narrow(a[0][0] as i128 * w.x as i128 + a[1][0] as i128 * w.y as i128),
                        narrow(a[0][1] as i128 * w.x as i128 + a[1][1] as i128 * w.y as i128),
                    ))
                })
                .collect();
            directions.sort_unstable();
            directions.dedup();
            debug_assert!(directions.iter().all(|d| d.is_primitive()));
            WidthResult {
                width: best,
                directions,
            }
        }
    }
}

/// Moves a two-dimensional polygon into a horizontal strip of height equal
/// to its lattice width: rows Y = 0 .. width, the leftmost top-row point in
/// column range [0, width), and the leftmost bottom-row point at X >= 0 with
/// the bottom row touching X = 0.
///
/// Ties between width directions are broken by the sorted order of
/// `lattice_width`, so the result is deterministic. Returns the map and the
/// repositioned polygon.
pub fn strip_normalize(
    p: &LatticePolygon,
) -> Result<(UnimodularMap, LatticePolygon), LatticeError> {
    if !p.is_two_dimensional() {
        return Err(LatticeError::NotTwoDimensional);
    }
    let wr = lattice_width(p);
    let w = wr.directions[0];
    // unimodular map whose second row is w, so new Y = <w, u>
    let (g, s, t) = egcd(w.y, -w.x);
    debug_assert_eq!(g, 1);
    let rot = UnimodularMap::new([[s, t], [w.x, w.y]], [0, 0])?;
    let mut q = rot.apply_polygon(p);
    let (lo, hi) = q.bounding_box();
    let lift = UnimodularMap::translation_by(pt(0, chk(lo.y.checked_neg())));
    q = lift.apply_polygon(&q);
    let height = chk(hi.y.checked_sub(lo.y));
    debug_assert_eq!(height, wr.width);
    let row_min = |q: &LatticePolygon, row: i64| {
        q.lattice_points()
            .iter()
            .filter(|lp| lp.point.y == row)
            .map(|lp| lp.point.x)
            .min()
            .expect("every row of a strip-normalized polygon is nonempty")
    };
    // shear fixes the bottom row, so pin the top-bottom offset first
    let offset = chk(row_min(&q, height).checked_sub(row_min(&q, 0)));
    let k = narrow(-floor_div(offset as i128, height as i128));
    let shear = UnimodularMap::new([[1, k], [0, 1]], [0, 0])?;
    q = shear.apply_polygon(&q);
    let slide = UnimodularMap::translation_by(pt(chk(row_min(&q, 0).checked_neg()), 0));
    q = slide.apply_polygon(&q);
    let map = slide.compose(&shear).compose(&lift).compose(&rot);
    debug_assert_eq!(map.apply_polygon(p), q);
    Ok((map, q))
}
