//! Laurent polynomials in two variables with exact rational coefficients:
//! parsing, printing, Newton polygons, faces and face restrictions, edge
//! polynomials, logarithmic derivatives, monomial substitutions, and
//! reduction modulo a prime.
//!
//! Exponent pairs live on the integer lattice, so the exponent type is
//! [`LatticePoint`] with `x` = exponent of x and `y` = exponent of y.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{pt, HalfPlane, LatticeError, LatticePoint, LatticePolygon, UnimodularMap};
use crate::poly::Poly;
use crate::ring::{field_pow, rational_to_string, Field, PrimeField, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("all terms cancel: the zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("not a face of the Newton polygon")]
    NotAFace,
    #[error("prime {0} divides a coefficient denominator")]
    BadPrime(u64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Exponent-to-coefficient association; exponents may be negative.
pub type TermMap<E> = BTreeMap<LatticePoint, E>;

/// A finite sum of terms c * x^i * y^j with nonzero rational c.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPolynomial {
    terms: TermMap<BigRational>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        LaurentPolynomial::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial(e: LatticePoint, c: BigRational) -> Self {
        let mut terms = TermMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPolynomial { terms }
    }

    /// Combines like terms and drops zero coefficients.
    pub fn from_terms(iter: impl IntoIterator<Item = (LatticePoint, BigRational)>) -> Self {
        let mut terms: TermMap<BigRational> = TermMap::new();
        for (e, c) in iter {
            let entry = terms.entry(e).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(&e);
            }
        }
        LaurentPolynomial { terms }
    }

    pub fn terms(&self) -> &TermMap<BigRational> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: LatticePoint) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().copied().collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        LaurentPolynomial::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(e, c)| (*e, c.clone())),
        )
    }

    pub fn neg(&self) -> Self {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return LaurentPolynomial::zero();
        }
        LaurentPolynomial {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        LaurentPolynomial::from_terms(self.terms.iter().flat_map(|(e, c)| {
            other
                .terms
                .iter()
                .map(move |(e2, c2)| (e.add(*e2), c * c2))
        }))
    }

    pub fn mul_monomial(&self, e: LatticePoint, c: &BigRational) -> Self {
        self.mul(&LaurentPolynomial::monomial(e, c.clone()))
    }

    /// Exponent-lattice image under the map: the monomial substitution
    /// sending x^i y^j to the monomial with exponent m(i,j). The Newton
    /// polygon transforms by the same map, and torus zero sets correspond.
    pub fn substitute(&self, m: &UnimodularMap) -> Self {
        LaurentPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (m.apply(*e), c.clone()))
                .collect(),
        }
    }

    /// x * df/dx: multiplies each coefficient by its x-exponent. Same torus
    /// zeros as df/dx, but the support stays inside the Newton polygon.
    pub fn x_dlog(&self) -> Self {
        LaurentPolynomial::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (*e, c * BigRational::from_integer(BigInt::from(e.x)))),
        )
    }

    /// y * df/dy.
    pub fn y_dlog(&self) -> Self {
        LaurentPolynomial::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (*e, c * BigRational::from_integer(BigInt::from(e.y)))),
        )
    }

    /// Convex hull of the support. The zero polynomial has none.
    pub fn newton_polygon(&self) -> LatticePolygon {
        assert!(!self.is_zero(), "newton polygon of the zero polynomial");
        crate::lattice::convex_hull(&self.support()).expect("nonempty support")
    }
}

impl FromStr for LaurentPolynomial {
    type Err = LaurentError;
    fn from_str(s: &str) -> Result<Self, LaurentError> {
        parse_laurent(s)
    }
}

/// Grammar: poly := term (('+'|'-') term)*; term := coeff? ('*'? atom)*;
/// atom := ('x'|'y') ('^' int)?; coeff := int ('/' int)?; int := '-'? digit+.
/// Whitespace is ignored; a single unary sign is allowed before the first
/// term. All terms cancelling is an error.
pub fn parse_laurent(input: &str) -> Result<LaurentPolynomial, LaurentError> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let mut terms: Vec<(LatticePoint, BigRational)> = Vec::new();
    let mut negate = false;
    if let Some(c) = p.peek() {
        if c == b'+' || c == b'-' {
            negate = c == b'-';
            p.pos += 1;
        }
    }
    loop {
        let (e, c) = p.term()?;
        terms.push((e, if negate { -c } else { c }));
        match p.peek() {
            None => break,
            Some(b'+') => {
                negate = false;
                p.pos += 1;
            }
            Some(b'-') => {
                negate = true;
                p.pos += 1;
            }
            Some(c) => return Err(p.err(format!("expected '+' or '-', found '{}'", c as char))),
        }
    }
    let f = LaurentPolynomial::from_terms(terms);
    if f.is_zero() {
        return Err(LaurentError::ZeroPolynomial);
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    /// Next byte after whitespace, without consuming it.
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> LaurentError {
        LaurentError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn int(&mut self) -> Result<BigInt, LaurentError> {
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
            self.peek();
        }
        let start = self.pos;
        while self.src.get(self.pos).map_or(false, u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let n: BigInt = digits.parse().unwrap();
        Ok(if neg { -n } else { n })
    }

    fn exponent(&mut self) -> Result<i64, LaurentError> {
        self.peek();
        let at = self.pos;
        let n = self.int()?;
        n.to_i64().ok_or_else(|| LaurentError::Parse {
            pos: at,
            msg: "exponent out of range".into(),
        })
    }

    fn term(&mut self) -> Result<(LatticePoint, BigRational), LaurentError> {
        let mut coeff = BigRational::one();
        let mut saw_anything = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'-') {
            let num = self.int()?;
            let den = if self.peek() == Some(b'/') {
                self.pos += 1;
                let at = self.pos;
                let d = self.int()?;
                if d.is_zero() {
                    return Err(LaurentError::Parse {
                        pos: at,
                        msg: "zero denominator".into(),
                    });
                }
                d
            } else {
                BigInt::one()
            };
            coeff = BigRational::new(num, den);
            saw_anything = true;
        }
        let (mut ex, mut ey) = (0i64, 0i64);
        loop {
            let mut starred = false;
            if self.peek() == Some(b'*') {
                self.pos += 1;
                starred = true;
            }
            match self.peek() {
                Some(v @ (b'x' | b'y')) => {
                    self.pos += 1;
                    let e = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.exponent()?
                    } else {
                        1
                    };
                    let slot = if v == b'x' { &mut ex } else { &mut ey };
                    *slot = slot
                        .checked_add(e)
                        .ok_or_else(|| self.err("exponent out of range"))?;
                    saw_anything = true;
                }
                _ if starred => return Err(self.err("expected a variable after '*'")),
                _ => break,
            }
        }
        if !saw_anything {
            return Err(self.err("expected a term"));
        }
        Ok((pt(ex, ey), coeff))
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Canonical form: terms sorted by (y-exponent, x-exponent); integer or
    /// a/b coefficients; `*` between coefficient and variables and between
    /// variables; exponent 1 and coefficient ±1 left implicit.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut terms: Vec<(&LatticePoint, &BigRational)> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| (e.y, e.x));
        for (k, (e, c)) in terms.into_iter().enumerate() {
            if k == 0 {
                if c.is_negative() {
                    write!(out, "-")?;
                }
            } else if c.is_negative() {
                write!(out, " - ")?;
            } else {
                write!(out, " + ")?;
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || (e.x == 0 && e.y == 0) {
                factors.push(rational_to_string(&mag));
            }
            for (v, ve) in [("x", e.x), ("y", e.y)] {
                match ve {
                    0 => {}
                    1 => factors.push(v.to_string()),
                    _ => factors.push(format!("{v}^{ve}")),
                }
            }
            write!(out, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// A face of a two-dimensional lattice polygon: a vertex, an edge with its
/// supporting half-plane and lattice points, or the polygon itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Face {
    Vertex(LatticePoint),
    Edge {
        half_plane: HalfPlane,
        /// All lattice points on the edge, endpoints included, in boundary
        /// order.
        points: Vec<LatticePoint>,
    },
    Full,
}

impl Face {
    pub fn describe(&self) -> String {
        match self {
            Face::Vertex(v) => format!("vertex ({},{})", v.x, v.y),
            Face::Edge { points, .. } => {
                let a = points.first().unwrap();
                let b = points.last().unwrap();
                format!("edge ({},{})..({},{})", a.x, a.y, b.x, b.y)
            }
            Face::Full => "interior".into(),
        }
    }
}

/// All faces of a two-dimensional polygon: vertices in boundary order from
/// the lexicographically smallest, then edges in the same order, then the
/// full face.
pub fn faces(p: &LatticePolygon) -> Result<Vec<Face>, LatticeError> {
    let planes = p.half_planes()?;
    let mut out: Vec<Face> = p.vertices().iter().map(|&v| Face::Vertex(v)).collect();
    for ((a, b), half_plane) in p.edges().into_iter().zip(planes) {
        let d = b.sub(a);
        let step = d.primitive();
        let n = crate::lattice::gcd_i64(d.x.abs(), d.y.abs());
        let points = (0..=n)
            .map(|t| pt(a.x + t * step.x, a.y + t * step.y))
            .collect();
        out.push(Face::Edge { half_plane, points });
    }
    out.push(Face::Full);
    Ok(out)
}

fn require_face(f: &LaurentPolynomial, face: &Face) -> Result<(), LaurentError> {
    if f.is_zero() {
        return Err(LaurentError::ZeroPolynomial);
    }
    let delta = f.newton_polygon();
    if !delta.is_two_dimensional() {
        return Err(LatticeError::NotTwoDimensional.into());
    }
    if faces(&delta)?.contains(face) {
        Ok(())
    } else {
        Err(LaurentError::NotAFace)
    }
}

/// The sub-sum of terms supported on the face.
pub fn face_restriction(
    f: &LaurentPolynomial,
    face: &Face,
) -> Result<LaurentPolynomial, LaurentError> {
    require_face(f, face)?;
    Ok(match face {
        Face::Full => f.clone(),
        Face::Vertex(v) => LaurentPolynomial::monomial(*v, f.coeff(*v)),
        Face::Edge { points, .. } => {
            LaurentPolynomial::from_terms(points.iter().map(|&e| (e, f.coeff(e))))
        }
    })
}

/// The edge polynomial g(T) = sum of c_{u0 + t·w} T^t over the edge's
/// lattice points u0, u0+w, ..., in boundary order. Both endpoints are
/// vertices of the Newton polygon, so g(0) != 0 and the leading coefficient
/// is nonzero.
pub fn edge_univariate(
    f: &LaurentPolynomial,
    face: &Face,
) -> Result<Poly<BigRational>, LaurentError> {
    require_face(f, face)?;
    let Face::Edge { points, .. } = face else {
        return Err(LaurentError::NotAFace);
    };
    Ok(Poly::from_coeffs(
        &crate::ring::Rationals,
        points.iter().map(|&e| f.coeff(e)).collect(),
    ))
}

/// Exact reduction modulo p; fails if p divides any coefficient
/// denominator. Terms whose coefficient reduces to zero disappear.
pub fn reduce_mod_p(
    f: &LaurentPolynomial,
    fp: &PrimeField,
) -> Result<TermMap<u64>, LaurentError> {
    use num_integer::Integer;
    let p = BigInt::from(fp.p());
    let modp = |n: &BigInt| n.mod_floor(&p).to_u64().unwrap();
    let mut out = TermMap::new();
    for (e, c) in f.terms() {
        let den = modp(c.denom());
        if den == 0 {
            return Err(LaurentError::BadPrime(fp.p()));
        }
        let v = fp.mul(&modp(c.numer()), &fp.inv(&den));
        if v != 0 {
            out.insert(*e, v);
        }
    }
    Ok(out)
}

/// Evaluation of a term map at a point of the torus (both coordinates
/// invertible; negative exponents use field inversion).
pub fn eval_terms<F: Field>(f: &F, terms: &TermMap<F::E>, x: &F::E, y: &F::E) -> F::E {
    let mut acc = f.zero();
    for (e, c) in terms {
        let m = f.mul(&field_pow(f, x, e.x), &field_pow(f, y, e.y));
        acc = f.add(&acc, &f.mul(c, &m));
    }
    acc
}

/// x * d/dx on a term map over any coefficient context.
pub fn log_dx<R: Ring>(r: &R, terms: &TermMap<R::E>) -> TermMap<R::E> {
    terms
        .iter()
        .map(|(e, c)| (*e, r.mul(c, &r.of_i64(e.x))))
        .filter(|(_, c)| !r.is_zero(c))
        .collect()
}

/// y * d/dy on a term map.
pub fn log_dy<R: Ring>(r: &R, terms: &TermMap<R::E>) -> TermMap<R::E> {
    terms
        .iter()
        .map(|(e, c)| (*e, r.mul(c, &r.of_i64(e.y))))
        .filter(|(_, c)| !r.is_zero(c))
        .collect()
}

/// The substitution y -> y * x^k on exponents: (i, j) -> (i + k*j, j).
pub fn shear_terms<E: Clone>(terms: &TermMap<E>, k: i64) -> TermMap<E> {
    terms
        .iter()
        .map(|(e, c)| {
            (
                pt(
                    crate::lattice::narrow(e.x as i128 + k as i128 * e.y as i128),
                    e.y,
                ),
                c.clone(),
            )
        })
        .collect()
}

/// Componentwise minimum of all exponents across the given maps; the shared
/// monomial to clear so that every map becomes a genuine polynomial.
pub fn common_min<E>(maps: &[&TermMap<E>]) -> LatticePoint {
    let mut min: Option<LatticePoint> = None;
    for m in maps {
        for e in m.keys() {
            min = Some(match min {
                None => *e,
                Some(c) => pt(c.x.min(e.x), c.y.min(e.y)),
            });
        }
    }
    min.unwrap_or_else(|| pt(0, 0))
}

/// Clears the monomial x^base.x * y^base.y and lays the terms out as a
/// polynomial in y whose coefficients are polynomials in x. Every exponent
/// must be >= base componentwise.
pub fn to_bivariate<R: Ring + Clone>(
    r: &R,
    terms: &TermMap<R::E>,
    base: LatticePoint,
) -> Poly<Poly<R::E>> {
    let ry = crate::ring::PolyRing::over(r.clone());
    if terms.is_empty() {
        return Poly::zero();
    }
    let ymax = terms.keys().map(|e| e.y - base.y).max().unwrap();
    let mut rows: Vec<Vec<R::E>> = vec![vec![]; (ymax + 1) as usize];
    for (e, c) in terms {
        assert!(
            e.x >= base.x && e.y >= base.y,
            "exponent below the clearing monomial"
        );
        let (i, j) = ((e.x - base.x) as usize, (e.y - base.y) as usize);
        let row = &mut rows[j];
        if row.len() <= i {
            row.resize(i + 1, r.zero());
        }
        row[i] = c.clone();
    }
    Poly::from_coeffs(
        &ry,
        rows.into_iter()
            .map(|row| Poly::from_coeffs(r, row))
            .collect(),
    )
}
