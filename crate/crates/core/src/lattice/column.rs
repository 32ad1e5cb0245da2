//! Column vectors of a two-dimensional lattice polygon: nonzero vectors v
//! such that translating every lattice point not on some fixed edge by v
//! stays inside the polygon. The edge is recorded with each vector.

use super::{dot, LatticeError, LatticePoint, LatticePolygon};
use serde::Serialize;

/// A column vector `v` together with the index (into `edges()`) of the edge
/// whose complement it translates into the polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ColumnVector {
    pub v: LatticePoint,
    pub base_edge: usize,
}

/// Checks the defining property directly: every lattice point of `p` off the
/// boundary line of edge `base_edge` lands back in `p` after adding `v`.
pub fn is_column_vector(
    p: &LatticePolygon,
    v: LatticePoint,
    base_edge: usize,
) -> Result<bool, LatticeError> {
    let hps = p.half_planes()?;
    let hp = hps.get(base_edge).ok_or(LatticeError::BadEdgeIndex(base_edge))?;
    if v.is_zero() {
        return Ok(false);
    }
    Ok(p.lattice_points()
        .iter()
        .filter(|lp| !hp.on_boundary(lp.point))
        .all(|lp| p.contains(lp.point.add(v))))
}

/// All column vectors, found by brute force over the box of vectors no
/// longer than the polygon's bounding box in each coordinate.
pub fn column_vectors(p: &LatticePolygon) -> Result<Vec<ColumnVector>, LatticeError> {
    let hps = p.half_planes()?;
    let (lo, hi) = p.bounding_box();
    let (wx, wy) = (hi.x - lo.x, hi.y - lo.y);
    let pts = p.lattice_points();
    let mut out = Vec::new();
    for (idx, hp) in hps.iter().enumerate() {
        let off_edge: Vec<LatticePoint> = pts
            .iter()
            .map(|lp| lp.point)
            .filter(|&q| !hp.on_boundary(q))
            .collect();
        let n = LatticePoint { x: hp.a, y: hp.b };
        for vx in -wx..=wx {
            for vy in -wy..=wy {
                let v = LatticePoint { x: vx, y: vy };
                if v.is_zero() {
                    continue;
                }
                // The row one lattice step inside the edge line is never
                // empty, and its points can only move onto the line itself,
                // so n . v = 1 for the outward normal n; everything else is
                // ruled out by the extreme rows.
                if dot(n, v) != 1 {
                    continue;
                }
                if off_edge.iter().all(|&q| p.contains(q.add(v))) {
                    out.push(ColumnVector { v, base_edge: idx });
                }
            }
        }
    }
    out.sort_by_key(|cv| (cv.base_edge, cv.v));
    Ok(out)
}
