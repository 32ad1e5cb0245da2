//! The outward shift: move every edge line of a two-dimensional lattice
//! polygon one step away from the interior (c -> c + 1 on each outer
//! description a*X + b*Y <= c with gcd(a, b) = 1) and intersect. Vertices of
//! the result are rational in general; when they are all integral the result
//! is returned as a lattice polygon too.

use super::{convex_hull, narrow, pt, LatticeError, LatticePoint, LatticePolygon};
use num_integer::Integer;
use serde::Serialize;
use std::fmt;

/// A rational point stored as (x_num/den, y_num/den) with den > 0 and
/// gcd(x_num, y_num, den) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RationalVertex {
    pub x_num: i64,
    pub y_num: i64,
    pub den: i64,
}

impl RationalVertex {
    fn reduce(xn: i128, yn: i128, d: i128) -> RationalVertex {
        debug_assert!(d != 0);
        let (xn, yn, d) = if d < 0 { (-xn, -yn, -d) } else { (xn, yn, d) };
        let g = xn.gcd(&yn).gcd(&d);
        RationalVertex {
            x_num: narrow(xn / g),
            y_num: narrow(yn / g),
            den: narrow(d / g),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    pub fn as_lattice_point(&self) -> Option<LatticePoint> {
        self.is_integral().then(|| pt(self.x_num, self.y_num))
    }
}

impl fmt::Display for RationalVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "({},{})", self.x_num, self.y_num)
        } else {
            write!(f, "({}/{},{}/{})", self.x_num, self.den, self.y_num, self.den)
        }
    }
}

/// Result of the outward shift: rational vertices in counterclockwise order
/// starting from the lexicographically smallest, and whether all of them are
/// integral.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelaxedPolygon {
    pub vertices: Vec<RationalVertex>,
    pub is_lattice: bool,
}

impl RelaxedPolygon {
    /// The same polygon as a lattice polygon, when every vertex is integral.
    pub fn as_lattice(&self) -> Option<LatticePolygon> {
        if !self.is_lattice {
            return None;
        }
        let pts: Vec<LatticePoint> = self
            .vertices
            .iter()
            .map(|v| v.as_lattice_point().unwrap())
            .collect();
        Some(convex_hull(&pts).expect("outward shift of a polygon is nonempty"))
    }
}

// cross product sign of (a-o, b-o) for homogeneous rational points
fn rcross(o: RationalVertex, a: RationalVertex, b: RationalVertex) -> i128 {
    let (oxn, oyn, od) = (o.x_num as i128, o.y_num as i128, o.den as i128);
    let (axn, ayn, ad) = (a.x_num as i128, a.y_num as i128, a.den as i128);
    let (bxn, byn, bd) = (b.x_num as i128, b.y_num as i128, b.den as i128);
    // (a - o) scaled by ad*od, (b - o) scaled by bd*od: positive scalings
    let ux = axn * od - oxn * ad;
    let uy = ayn * od - oyn * ad;
    let vx = bxn * od - oxn * bd;
    let vy = byn * od - oyn * bd;
    ux * vy - uy * vx
}

fn rless(a: RationalVertex, b: RationalVertex) -> std::cmp::Ordering {
    let x = (a.x_num as i128 * b.den as i128).cmp(&(b.x_num as i128 * a.den as i128));
    if x != std::cmp::Ordering::Equal {
        return x;
    }
    (a.y_num as i128 * b.den as i128).cmp(&(b.y_num as i128 * a.den as i128))
}

/// Outward shift of a two-dimensional lattice polygon.
pub fn relax(p: &LatticePolygon) -> Result<RelaxedPolygon, LatticeError> {
    let hps = p.half_planes()?;
    let shifted: Vec<(i64, i64, i64)> = hps
        .iter()
        .map(|hp| (hp.a, hp.b, hp.c.checked_add(1).expect("integer overflow in lattice arithmetic")))
        .collect();
    let n = shifted.len();
    let mut cands: Vec<RationalVertex> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let (a1, b1, c1) = shifted[i];
            let (a2, b2, c2) = shifted[j];
            let det = a1 as i128 * b2 as i128 - a2 as i128 * b1 as i128;
            if det == 0 {
                continue;
            }
            let xn = c1 as i128 * b2 as i128 - c2 as i128 * b1 as i128;
            let yn = a1 as i128 * c2 as i128 - a2 as i128 * c1 as i128;
            let v = RationalVertex::reduce(xn, yn, det);
            let inside = shifted.iter().all(|&(a, b, c)| {
                a as i128 * v.x_num as i128 + b as i128 * v.y_num as i128
                    <= c as i128 * v.den as i128
            });
            if inside {
                cands.push(v);
            }
        }
    }
    cands.sort_by(|a, b| rless(*a, *b));
    cands.dedup();
    debug_assert!(cands.len() >= 3);
    // monotone chain over rational points, dropping collinear ones
    let mut lower: Vec<RationalVertex> = Vec::new();
    for &v in &cands {
        while lower.len() >= 2 && rcross(lower[lower.len() - 2], lower[lower.len() - 1], v) <= 0 {
            lower.pop();
        }
        lower.push(v);
    }
    let mut upper: Vec<RationalVertex> = Vec::new();
    for &v in cands.iter().rev() {
        while upper.len() >= 2 && rcross(upper[upper.len() - 2], upper[upper.len() - 1], v) <= 0 {
            upper.pop();
        }
        upper.push(v);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let is_lattice = lower.iter().all(|v| v.is_integral());
    Ok(RelaxedPolygon {
        vertices: lower,
        is_lattice,
    })
}
