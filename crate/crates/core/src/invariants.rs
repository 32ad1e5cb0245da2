//! The polygon-to-geometry dictionary for a smooth curve in the toric
//! surface of a two-dimensional Newton polygon: genus, gonality,
//! hyperelliptic and tetragonal predicates, the boundary/interior counts B
//! and B1 of the interior hull, Schreyer's tetragonal invariants, and
//! scrollar invariants.

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{
    convex_hull, equivalent, lattice_width, pt, LatticeError, LatticePoint, LatticePolygon,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("the polygon has no interior lattice points")]
    NoInteriorHull,
    #[error("the curve is not tetragonal")]
    NotTetragonal,
    #[error("scrollar invariants of a plane quintic are not determined by the strip rule")]
    FiveSigmaUnsupported,
}

/// The triangle d * conv{(0,0),(1,0),(0,1)}; its curve is a smooth plane
/// curve of degree d.
pub fn d_sigma(d: i64) -> LatticePolygon {
    convex_hull(&[pt(0, 0), pt(d, 0), pt(0, d)]).unwrap()
}

/// Twice the triangle conv{(-1,-1),(1,0),(0,1)}; the exceptional trigonal
/// polygon in the gonality rule.
pub fn two_upsilon() -> LatticePolygon {
    convex_hull(&[pt(-2, -2), pt(2, 0), pt(0, 2)]).unwrap()
}

/// Number of interior lattice points; this is the genus of the curve.
pub fn genus(delta: &LatticePolygon) -> Result<i64, InvariantError> {
    if !delta.is_two_dimensional() {
        return Err(LatticeError::NotTwoDimensional.into());
    }
    Ok(delta.interior_points().len() as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Gonality {
    pub gonality: i64,
    /// The polygon is unimodularly equivalent to 2 * upsilon.
    pub two_upsilon: bool,
    /// The polygon is equivalent to d_sigma(d) for this d >= 2.
    pub d_sigma: Option<i64>,
}

/// Gonality is the lattice width, except one less on the two exceptional
/// shapes. Cross-checked against the interior-hull rule lw(interior) + 2.
pub fn gonality(delta: &LatticePolygon) -> Result<Gonality, InvariantError> {
    if !delta.is_two_dimensional() {
        return Err(LatticeError::NotTwoDimensional.into());
    }
    let lw = lattice_width(delta).width;
    let two_ups = equivalent(delta, &two_upsilon()).is_some();
    let sigma = (lw >= 2 && equivalent(delta, &d_sigma(lw)).is_some()).then_some(lw);
    let g = if two_ups || sigma.is_some() { lw - 1 } else { lw };
    if let Some(ih) = delta.interior_hull()? {
        let alt = if two_ups { 3 } else { lattice_width(&ih).width + 2 };
        debug_assert_eq!(g, alt, "gonality characterizations disagree");
    }
    Ok(Gonality {
        gonality: g,
        two_upsilon: two_ups,
        d_sigma: sigma,
    })
}

/// True iff the curve has genus >= 2 and all interior lattice points are
/// collinear.
pub fn is_hyperelliptic(delta: &LatticePolygon) -> Result<bool, InvariantError> {
    if !delta.is_two_dimensional() {
        return Err(LatticeError::NotTwoDimensional.into());
    }
    let pts = delta.interior_points();
    if pts.len() < 2 {
        return Ok(false);
    }
    Ok(pts[2..]
        .iter()
        .all(|&p| crate::lattice::cross(pts[0], pts[1], p) == 0))
}

/// True iff the interior hull has lattice width 2 and the polygon is not
/// 2 * upsilon (which is trigonal).
pub fn is_tetragonal(delta: &LatticePolygon) -> Result<bool, InvariantError> {
    if !delta.is_two_dimensional() {
        return Err(LatticeError::NotTwoDimensional.into());
    }
    match delta.interior_hull()? {
        None => Ok(false),
        Some(ih) => {
            Ok(lattice_width(&ih).width == 2 && equivalent(delta, &two_upsilon()).is_none())
        }
    }
}

/// B = boundary lattice points of the interior hull, minus 4; B1 = lattice
/// points of the second interior hull, minus 1 (an empty second hull counts
/// zero points).
pub fn b_pair(delta: &LatticePolygon) -> Result<(i64, i64), InvariantError> {
    if !delta.is_two_dimensional() {
        return Err(LatticeError::NotTwoDimensional.into());
    }
    let ih = delta.interior_hull()?.ok_or(InvariantError::NoInteriorHull)?;
    let boundary = ih
        .lattice_points()
        .iter()
        .filter(|p| p.on_boundary)
        .count() as i64;
    let second = if ih.is_two_dimensional() {
        match ih.interior_hull()? {
            None => 0,
            Some(h2) => h2.lattice_points().len() as i64,
        }
    } else {
        // a point or segment has no interior at all
        0
    };
    Ok((boundary - 4, second - 1))
}

/// Schreyer's tetragonal invariants: the pair {B, B1} sorted descending.
pub fn schreyer_invariants(delta: &LatticePolygon) -> Result<(i64, i64), InvariantError> {
    if !is_tetragonal(delta)? {
        return Err(InvariantError::NotTetragonal);
    }
    let (b, b1) = b_pair(delta)?;
    let (hi, lo) = (b.max(b1), b.min(b1));
    let g = genus(delta)?;
    assert_eq!(hi + lo, g - 5, "tetragonal invariants must sum to g - 5");
    assert!((-1..=g - 4).contains(&lo) && hi <= g - 4);
    Ok((hi, lo))
}

/// Scrollar invariants of a tetragonal pencil: project the interior hull
/// along a direction realizing its lattice width 2 and count the lattice
/// points on each of the three levels, minus one. When several directions
/// realize the width (several pencils), the lexicographically smallest
/// ascending triple is returned, making the result a lattice invariant.
pub fn scrollar_invariants(delta: &LatticePolygon) -> Result<[i64; 3], InvariantError> {
    if !is_tetragonal(delta)? {
        return Err(InvariantError::NotTetragonal);
    }
    if equivalent(delta, &d_sigma(5)).is_some() {
        return Err(InvariantError::FiveSigmaUnsupported);
    }
    let ih = delta.interior_hull()?.expect("tetragonal implies interior");
    let pts = ih.lattice_points();
    let wr = lattice_width(&ih);
    debug_assert_eq!(wr.width, 2);
    let mut best: Option<[i64; 3]> = None;
    for w in &wr.directions {
        let levels: Vec<i64> = pts
            .iter()
            .map(|p| {
                crate::lattice::narrow(
                    w.x as i128 * p.point.x as i128 + w.y as i128 * p.point.y as i128,
                )
            })
            .collect();
        let low = *levels.iter().min().unwrap();
        let mut rows = [0i64; 3];
        for v in &levels {
            rows[(v - low) as usize] += 1;
        }
        let mut e = [rows[0] - 1, rows[1] - 1, rows[2] - 1];
        e.sort_unstable();
        if best.map_or(true, |b| e < b) {
            best = Some(e);
        }
    }
    let e = best.expect("width direction exists");
    debug_assert_eq!(e.iter().sum::<i64>(), genus(delta)? - 3);
    Ok(e)
}

/// The monomial exponents spanning the canonical embedding: the interior
/// lattice points sorted by (y, then x).
pub fn canonical_basis(delta: &LatticePolygon) -> Result<Vec<LatticePoint>, InvariantError> {
    if !delta.is_two_dimensional() {
        return Err(LatticeError::NotTwoDimensional.into());
    }
    let pts = delta.interior_points();
    if pts.is_empty() {
        return Err(InvariantError::NoInteriorHull);
    }
    let mut pts = pts;
    pts.sort_by_key(|p| (p.y, p.x));
    Ok(pts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InvariantFlags {
    pub hyperelliptic: bool,
    pub tetragonal: bool,
    pub exceptional_2upsilon: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exceptional_d_sigma: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub genus: i64,
    pub lattice_width: i64,
    pub gonality: i64,
    #[serde(rename = "B")]
    pub b: Option<i64>,
    #[serde(rename = "B1")]
    pub b1: Option<i64>,
    /// Present when tetragonal, ordered b1 >= b2.
    pub schreyer: Option<(i64, i64)>,
    /// Present when tetragonal and defined, ordered ascending.
    pub scrollar: Option<[i64; 3]>,
    pub flags: InvariantFlags,
}

pub fn invariant_report(delta: &LatticePolygon) -> Result<InvariantReport, InvariantError> {
    let g = genus(delta)?;
    let gon = gonality(delta)?;
    let tetra = is_tetragonal(delta)?;
    let bb = match b_pair(delta) {
        Ok(pair) => Some(pair),
        Err(InvariantError::NoInteriorHull) => None,
        Err(e) => return Err(e),
    };
    let schreyer = if tetra {
        Some(schreyer_invariants(delta)?)
    } else {
        None
    };
    let scrollar = if tetra {
        match scrollar_invariants(delta) {
            Ok(e) => Some(e),
            Err(InvariantError::FiveSigmaUnsupported) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(InvariantReport {
        genus: g,
        lattice_width: lattice_width(delta).width,
        gonality: gon.gonality,
        b: bb.map(|p| p.0),
        b1: bb.map(|p| p.1),
        schreyer,
        scrollar,
        flags: InvariantFlags {
            hyperelliptic: is_hyperelliptic(delta)?,
            tetragonal: tetra,
            exceptional_2upsilon: gon.two_upsilon,
            exceptional_d_sigma: gon.d_sigma,
        },
    })
}
