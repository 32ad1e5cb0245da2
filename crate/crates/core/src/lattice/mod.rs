//! Exact lattice geometry in the plane: integer points, convex lattice
//! polygons, affine unimodular maps, and the polygon operations (interior
//! hull, outward shift, lattice width, normal form, column vectors) that the
//! curve invariants are computed from.
//!
//! All arithmetic is exact. Coordinates are `i64`; products and dot products
//! are widened to `i128` internally, and any value that must be narrowed back
//! is checked. Overflow aborts with a distinct panic message instead of
//! wrapping.

mod column;
mod normal;
mod relax;
mod width;

pub use column::{column_vectors, is_column_vector, ColumnVector};
pub use normal::{equivalent, normal_form};
pub use relax::{relax, RationalVertex, RelaxedPolygon};
pub use width::{lattice_width, strip_normalize, WidthResult};

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("polygon is not two-dimensional")]
    NotTwoDimensional,
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i64),
    #[error("edge index {0} out of range")]
    BadEdgeIndex(usize),
}

#[inline]
pub(crate) fn chk(v: Option<i64>) -> i64 {
    v.expect("integer overflow in lattice arithmetic")
}

#[inline]
pub(crate) fn narrow(v: i128) -> i64 {
    i64::try_from(v).expect("integer overflow in lattice arithmetic")
}

pub(crate) fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

pub(crate) fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}

pub(crate) fn gcd_i64(a: i64, b: i64) -> i64 {
    num_integer::Integer::gcd(&a, &b)
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0.
pub(crate) fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = num_integer::Integer::extended_gcd(&a, &b);
    (e.gcd, e.x, e.y)
}

/// A point of the integer lattice Z^2.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(from = "(i64, i64)", into = "(i64, i64)")]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        LatticePoint { x, y }
    }
}

impl From<LatticePoint> for (i64, i64) {
    fn from(p: LatticePoint) -> Self {
        (p.x, p.y)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub fn pt(x: i64, y: i64) -> LatticePoint {
    LatticePoint { x, y }
}

impl LatticePoint {
    pub fn add(self, o: LatticePoint) -> LatticePoint {
        pt(chk(self.x.checked_add(o.x)), chk(self.y.checked_add(o.y)))
    }

    pub fn sub(self, o: LatticePoint) -> LatticePoint {
        pt(chk(self.x.checked_sub(o.x)), chk(self.y.checked_sub(o.y)))
    }

    pub fn neg(self) -> LatticePoint {
        pt(chk(self.x.checked_neg()), chk(self.y.checked_neg()))
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// Divides out the gcd of the coordinates. Zero stays zero.
    pub fn primitive(self) -> LatticePoint {
        let g = gcd_i64(self.x, self.y);
        if g == 0 {
            self
        } else {
            pt(self.x / g, self.y / g)
        }
    }

    pub fn is_primitive(self) -> bool {
        gcd_i64(self.x, self.y) == 1
    }

    pub(crate) fn key_yx(self) -> (i64, i64) {
        (self.y, self.x)
    }
}

#[inline]
pub(crate) fn dot(a: LatticePoint, b: LatticePoint) -> i128 {
    a.x as i128 * b.x as i128 + a.y as i128 * b.y as i128
}

/// Cross product of (a - o) and (b - o); positive iff o->a->b turns left.
#[inline]
pub(crate) fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i128 {
    let ax = a.x as i128 - o.x as i128;
    let ay = a.y as i128 - o.y as i128;
    let bx = b.x as i128 - o.x as i128;
    let by = b.y as i128 - o.y as i128;
    ax * by - ay * bx
}

/// Closed half-plane a*X + b*Y <= c with gcd(a, b) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfPlane {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl HalfPlane {
    pub fn eval(&self, p: LatticePoint) -> i128 {
        self.a as i128 * p.x as i128 + self.b as i128 * p.y as i128
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.eval(p) <= self.c as i128
    }

    pub fn on_boundary(&self, p: LatticePoint) -> bool {
        self.eval(p) == self.c as i128
    }
}

impl fmt::Display for HalfPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*X + {}*Y <= {}", self.a, self.b, self.c)
    }
}

/// An affine map u -> A*u + t with A integral of determinant +-1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnimodularMap {
    linear: [[i64; 2]; 2],
    translation: [i64; 2],
}

impl UnimodularMap {
    pub fn new(linear: [[i64; 2]; 2], translation: [i64; 2]) -> Result<Self, LatticeError> {
        let det = chk(
            chk(linear[0][0].checked_mul(linear[1][1]))
                .checked_sub(chk(linear[0][1].checked_mul(linear[1][0]))),
        );
        if det != 1 && det != -1 {
            return Err(LatticeError::NotUnimodular(det));
        }
        Ok(UnimodularMap {
            linear,
            translation,
        })
    }

    pub fn identity() -> Self {
        UnimodularMap {
            linear: [[1, 0], [0, 1]],
            translation: [0, 0],
        }
    }

    pub fn translation_by(t: LatticePoint) -> Self {
        UnimodularMap {
            linear: [[1, 0], [0, 1]],
            translation: [t.x, t.y],
        }
    }

    pub fn linear(&self) -> [[i64; 2]; 2] {
        self.linear
    }

    pub fn translation(&self) -> LatticePoint {
        pt(self.translation[0], self.translation[1])
    }

    pub fn det(&self) -> i64 {
        self.linear[0][0] * self.linear[1][1] - self.linear[0][1] * self.linear[1][0]
    }

    pub fn apply(&self, p: LatticePoint) -> LatticePoint {
        let a = self.linear;
        pt(
            narrow(a[0][0] as i128 * p.x as i128 + a[0][1] as i128 * p.y as i128
                + self.translation[0] as i128),
            narrow(a[1][0] as i128 * p.x as i128 + a[1][1] as i128 * p.y as i128
                + self.translation[1] as i128),
        )
    }

    /// Applies only the linear part (useful for direction vectors).
    pub fn apply_vector(&self, v: LatticePoint) -> LatticePoint {
        let a = self.linear;
        pt(
            narrow(a[0][0] as i128 * v.x as i128 + a[0][1] as i128 * v.y as i128),
            narrow(a[1][0] as i128 * v.x as i128 + a[1][1] as i128 * v.y as i128),
        )
    }

    /// self after other: (self.compose(other))(u) = self(other(u)).
    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        let a = self.linear;
        let b = other.linear;
        let mul = |i: usize, j: usize| {
            narrow(a[i][0] as i128 * b[0][j] as i128 + a[i][1] as i128 * b[1][j] as i128)
        };
        let t = self.apply(other.translation());
        UnimodularMap {
            linear: [[mul(0, 0), mul(0, 1)], [mul(1, 0), mul(1, 1)]],
            translation: [t.x, t.y],
        }
    }

    pub fn inverse(&self) -> UnimodularMap {
        let [[a, b], [c, d]] = self.linear;
        let det = self.det();
        // adjugate over det; det is +-1 so entries stay integral
        let inv = [[d / det, -b / det], [-c / det, a / det]];
        let tx = -(inv[0][0] as i128 * self.translation[0] as i128
            + inv[0][1] as i128 * self.translation[1] as i128);
        let ty = -(inv[1][0] as i128 * self.translation[0] as i128
            + inv[1][1] as i128 * self.translation[1] as i128);
        UnimodularMap {
            linear: inv,
            translation: [narrow(tx), narrow(ty)],
        }
    }

    pub fn apply_polygon(&self, p: &LatticePolygon) -> LatticePolygon {
        let verts: Vec<LatticePoint> = p.vertices().iter().map(|&v| self.apply(v)).collect();
        convex_hull(&verts).expect("image of a polygon is a polygon")
    }
}

/// A lattice point of a polygon together with its boundary flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LabeledPoint {
    pub point: LatticePoint,
    pub on_boundary: bool,
}

/// Convex hull of finitely many lattice points.
///
/// Canonical storage: a single point; a segment as its two lexicographically
/// ordered endpoints; or a strictly convex counterclockwise vertex cycle
/// starting at the lexicographically smallest vertex. Equality of
/// `LatticePolygon` values is therefore literal equality of point sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePolygon {
    verts: Vec<LatticePoint>,
}

/// Convex hull via the monotone chain, with collinear points dropped.
pub fn convex_hull(points: &[LatticePoint]) -> Result<LatticePolygon, LatticeError> {
    if points.is_empty() {
        return Err(LatticeError::EmptyPointSet);
    }
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() == 1 {
        return Ok(LatticePolygon { verts: pts });
    }
    let all_collinear = pts[2..].iter().all(|&p| cross(pts[0], pts[1], p) == 0);
    if all_collinear {
        return Ok(LatticePolygon {
            verts: vec![pts[0], *pts.last().unwrap()],
        });
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // counterclockwise cycle already starts at the lex-min point
    Ok(LatticePolygon { verts: lower })
}

impl LatticePolygon {
    pub fn from_vertices(points: &[LatticePoint]) -> Result<Self, LatticeError> {
        convex_hull(points)
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.verts
    }

    /// 0 for a point, 1 for a segment, 2 otherwise.
    pub fn dimension(&self) -> usize {
        match self.verts.len() {
            1 => 0,
            2 => 1,
            _ => 2,
        }
    }

    pub fn is_two_dimensional(&self) -> bool {
        self.dimension() == 2
    }

    /// Directed edges of the counterclockwise cycle (two-dimensional only).
    pub fn edges(&self) -> Vec<(LatticePoint, LatticePoint)> {
        let n = self.verts.len();
        match n {
            1 => vec![],
            2 => vec![(self.verts[0], self.verts[1])],
            _ => (0..n)
                .map(|i| (self.verts[i], self.verts[(i + 1) % n]))
                .collect(),
        }
    }

    /// Outer edge descriptions: the polygon is the set where every
    /// inequality holds, and each edge lies on its boundary line.
    pub fn half_planes(&self) -> Result<Vec<HalfPlane>, LatticeError> {
        if !self.is_two_dimensional() {
            return Err(LatticeError::NotTwoDimensional);
        }
        Ok(self
            .edges()
            .iter()
            .map(|&(u, w)| {
                let d = w.sub(u);
                // outward normal of a counterclockwise edge
                let n = pt(d.y, chk(d.x.checked_neg())).primitive();
                let c = narrow(n.x as i128 * u.x as i128 + n.y as i128 * u.y as i128);
                HalfPlane { a: n.x, b: n.y, c }
            })
            .collect())
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        match self.dimension() {
            0 => self.verts[0] == p,
            1 => {
                let (a, b) = (self.verts[0], self.verts[1]);
                cross(a, b, p) == 0
                    && p.x >= a.x.min(b.x)
                    && p.x <= a.x.max(b.x)
                    && p.y >= a.y.min(b.y)
                    && p.y <= a.y.max(b.y)
            }
            _ => {
                let n = self.verts.len();
                (0..n).all(|i| cross(self.verts[i], self.verts[(i + 1) % n], p) >= 0)
            }
        }
    }

    pub fn bounding_box(&self) -> (LatticePoint, LatticePoint) {
        let xs = self.verts.iter().map(|p| p.x);
        let ys = self.verts.iter().map(|p| p.y);
        (
            pt(xs.clone().min().unwrap(), ys.clone().min().unwrap()),
            pt(xs.max().unwrap(), ys.max().unwrap()),
        )
    }

    /// All lattice points, sorted by (y, x), with boundary flags.
    ///
    /// For a point or a segment every lattice point counts as boundary.
    pub fn lattice_points(&self) -> Vec<LabeledPoint> {
        match self.dimension() {
            0 => vec![LabeledPoint {
                point: self.verts[0],
                on_boundary: true,
            }],
            1 => {
                let (a, b) = (self.verts[0], self.verts[1]);
                let d = b.sub(a);
                let g = gcd_i64(d.x, d.y);
                let step = pt(d.x / g, d.y / g);
                let mut out: Vec<LabeledPoint> = (0..=g)
                    .map(|t| LabeledPoint {
                        point: pt(a.x + step.x * t, a.y + step.y * t),
                        on_boundary: true,
                    })
                    .collect();
                out.sort_by_key(|lp| lp.point.key_yx());
                out
            }
            _ => {
                let hps = self.half_planes().unwrap();
                let (lo, hi) = self.bounding_box();
                let mut out = Vec::new();
                for y in lo.y..=hi.y {
                    let mut xlo = lo.x as i128;
                    let mut xhi = hi.x as i128;
                    let mut feasible = true;
                    for hp in &hps {
                        let rhs = hp.c as i128 - hp.b as i128 * y as i128;
                        match hp.a.cmp(&0) {
                            std::cmp::Ordering::Greater => {
                                xhi = xhi.min(floor_div(rhs, hp.a as i128))
                            }
                            std::cmp::Ordering::Less => {
                                xlo = xlo.max(ceil_div(rhs, hp.a as i128))
                            }
                            std::cmp::Ordering::Equal => {
                                if rhs < 0 {
                                    feasible = false;
                                    break;
                                }
                            }
                        }
                    }
                    if !feasible || xlo > xhi {
                        continue;
                    }
                    for x in narrow(xlo)..=narrow(xhi) {
                        let p = pt(x, y);
                        let on_boundary = hps.iter().any(|hp| hp.on_boundary(p));
                        out.push(LabeledPoint {
                            point: p,
                            on_boundary,
                        });
                    }
                }
                out
            }
        }
    }

    pub fn lattice_point_count(&self) -> usize {
        self.lattice_points().len()
    }

    pub fn boundary_points(&self) -> Vec<LatticePoint> {
        self.lattice_points()
            .into_iter()
            .filter(|lp| lp.on_boundary)
            .map(|lp| lp.point)
            .collect()
    }

    pub fn interior_points(&self) -> Vec<LatticePoint> {
        self.lattice_points()
            .into_iter()
            .filter(|lp| !lp.on_boundary)
            .map(|lp| lp.point)
            .collect()
    }

    /// Convex hull of the interior lattice points; `None` when there are none.
    pub fn interior_hull(&self) -> Result<Option<LatticePolygon>, LatticeError> {
        if !self.is_two_dimensional() {
            return Err(LatticeError::NotTwoDimensional);
        }
        let interior = self.interior_points();
        if interior.is_empty() {
            Ok(None)
        } else {
            Ok(Some(convex_hull(&interior)?))
        }
    }

    /// Twice the Euclidean area (shoelace); an integer for lattice polygons.
    pub fn double_area(&self) -> i64 {
        let n = self.verts.len();
        if n < 3 {
            return 0;
        }
        let mut acc: i128 = 0;
        for i in 0..n {
            let p = self.verts[i];
            let q = self.verts[(i + 1) % n];
            acc += p.x as i128 * q.y as i128 - q.x as i128 * p.y as i128;
        }
        narrow(acc)
    }

    /// Pick's identity 2A = 2i + b - 2 for two-dimensional polygons.
    pub fn pick_check(&self) -> bool {
        if !self.is_two_dimensional() {
            return true;
        }
        let pts = self.lattice_points();
        let b = pts.iter().filter(|lp| lp.on_boundary).count() as i64;
        let i = pts.len() as i64 - b;
        self.double_area() == 2 * i + b - 2
    }

    pub fn translate(&self, t: LatticePoint) -> LatticePolygon {
        LatticePolygon {
            verts: self.verts.iter().map(|&p| p.add(t)).collect(),
        }
    }
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.verts {
            if !first {
                write!(f, "; ")?;
            }
            write!(f, "{},{}", v.x, v.y)?;
            first = false;
        }
        Ok(())
    }
}

/// Parses either `"x1,y1; x2,y2; ..."` or a JSON array of `[x, y]` pairs.
pub fn parse_points(input: &str) -> Result<Vec<LatticePoint>, String> {
    let s = input.trim();
    if s.is_empty() {
        return Err("empty point list".into());
    }
    if s.starts_with('[') {
        let pairs: Vec<(i64, i64)> =
            serde_json::from_str(s).map_err(|e| format!("bad JSON point list: {e}"))?;
        return Ok(pairs.into_iter().map(LatticePoint::from).collect());
    }
    let mut out = Vec::new();
    for (idx, chunk) in s.split(';').enumerate() {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let mut it = chunk.split(',');
        let (xs, ys) = (it.next(), it.next());
        if it.next().is_some() {
            return Err(format!("point {}: expected \"x,y\"", idx + 1));
        }
        match (xs, ys) {
            (Some(xs), Some(ys)) => {
                let x = xs
                    .trim()
                    .parse::<i64>()
                    .map_err(|e| format!("point {}: bad x ({e})", idx + 1))?;
                let y = ys
                    .trim()
                    .parse::<i64>()
                    .map_err(|e| format!("point {}: bad y ({e})", idx + 1))?;
                out.push(pt(x, y));
            }
            _ => return Err(format!("point {}: expected \"x,y\"", idx + 1)),
        }
    }
    if out.is_empty() {
        return Err("empty point list".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
