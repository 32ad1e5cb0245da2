//! Non-degeneracy of a Laurent polynomial with respect to its Newton
//! polygon: for every face (vertex, edge, or the polygon itself) the face
//! restriction and its two logarithmic derivatives must have no common zero
//! with both coordinates nonzero.
//!
//! Vertices always pass; edges reduce to squarefreeness of a univariate
//! polynomial; the two-dimensional face is decided exactly by eliminating y
//! with resultants and certifying the surviving x-locus through dynamic
//! evaluation. A finite-field probe of the same pipeline runs first as a
//! cheap cross-check, but the exact path is always the authority.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::dyneval::{branch_gcd, qdivrem, Quotient};
use crate::lattice::{LatticePolygon, LatticePoint};
use crate::laurent::{
    common_min, faces, log_dx, log_dy, reduce_mod_p, shear_terms, to_bivariate, Face,
    LaurentError, LaurentPolynomial, TermMap,
};
use crate::poly::{
    pderiv, pdivrem, pexact_div, pgcd_domain, pgcd_monic, pmap, pmul, presultant, pscale,
    squarefree_part, Poly,
};
use crate::ring::{rational_to_string, Field, PolyRing, PrimeField, Rationals};

pub const DEFAULT_PROBE_PRIME: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    /// Prime for the finite-field probe; None disables the probe.
    pub probe_prime: Option<u64>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            probe_prime: Some(DEFAULT_PROBE_PRIME),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NonDegenError {
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(
        "resultant elimination vanished for every shear in the retry budget \
         and no finite-field probe is available to fall back on"
    )]
    Inconclusive,
    #[error(
        "the polygon strictly contains the Newton polygon: vertex ({x},{y}) carries \
         coefficient 0, so the restriction of f to that vertex vanishes identically \
         and f cannot be non-degenerate with respect to this polygon"
    )]
    PolygonTooLarge { x: i64, y: i64 },
    #[error("the polygon does not contain the support of f")]
    PolygonTooSmall,
}

/// Structured cause of a per-face failure, over the coefficient field used
/// for the check.
#[derive(Debug, Clone)]
pub enum FaceFailure<E> {
    /// The edge polynomial has this monic square factor.
    RepeatedEdgeFactor { factor: Poly<E> },
    /// f and both logarithmic derivatives share this non-monomial factor.
    CommonFactor { factor: Poly<Poly<E>> },
    /// Above every root of `modulus` (an x-locus avoiding 0) the three
    /// polynomials have the common y-factor `gcd_y`; a zero `gcd_y` means
    /// they vanish identically there. Coordinates are the sheared ones when
    /// `shear` is nonzero (y replaced by y*x^shear).
    Branch {
        shear: i64,
        modulus: Poly<E>,
        gcd_y: Poly<Poly<E>>,
    },
}

#[derive(Debug, Clone)]
pub struct FaceCheck<E> {
    pub face: Face,
    pub failure: Option<FaceFailure<E>>,
}

impl<E> FaceCheck<E> {
    pub fn pass(&self) -> bool {
        self.failure.is_none()
    }
}

struct Exhausted;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Exact,
    ProbabilisticOnly,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProbeRecord {
    pub prime: u64,
    pub overall: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceReport {
    pub face: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NonDegeneracyReport {
    pub overall: bool,
    pub method: Method,
    /// Irreducibility of f is assumed, not checked.
    pub irreducibility_assumed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeRecord>,
    pub faces: Vec<FaceReport>,
}

/// Rejects any polygon other than the Newton polygon itself.
pub fn require_matching_polygon(
    f: &LaurentPolynomial,
    polygon: &LatticePolygon,
) -> Result<(), NonDegenError> {
    if f.is_zero() {
        return Err(LaurentError::ZeroPolynomial.into());
    }
    let delta = f.newton_polygon();
    if *polygon == delta {
        return Ok(());
    }
    if f.support().iter().all(|&e| polygon.contains(e)) {
        let v = polygon
            .vertices()
            .iter()
            .find(|&&v| f.coeff(v).is_zero())
            .expect("a strictly larger polygon has a vertex off the support");
        Err(NonDegenError::PolygonTooLarge { x: v.x, y: v.y })
    } else {
        Err(NonDegenError::PolygonTooSmall)
    }
}

pub fn is_nondegenerate(f: &LaurentPolynomial) -> Result<NonDegeneracyReport, NonDegenError> {
    is_nondegenerate_with(f, &CheckOptions::default())
}

pub fn is_nondegenerate_with(
    f: &LaurentPolynomial,
    opts: &CheckOptions,
) -> Result<NonDegeneracyReport, NonDegenError> {
    if f.is_zero() {
        return Err(LaurentError::ZeroPolynomial.into());
    }
    let delta = f.newton_polygon();
    if !delta.is_two_dimensional() {
        return Err(LaurentError::Lattice(crate::lattice::LatticeError::NotTwoDimensional).into());
    }

    let probe = opts.probe_prime.and_then(|p| probe_mod_p(f, &delta, p));

    let terms: TermMap<BigRational> = f.terms().clone();
    match check_all_faces(&Rationals, &terms, &delta) {
        Ok(checks) => {
            let faces = checks
                .iter()
                .map(|c| FaceReport {
                    face: c.face.describe(),
                    pass: c.pass(),
                    witness: c.failure.as_ref().map(describe_failure),
                })
                .collect::<Vec<_>>();
            Ok(NonDegeneracyReport {
                overall: checks.iter().all(FaceCheck::pass),
                method: Method::Exact,
                irreducibility_assumed: true,
                probe: probe.as_ref().map(|(record, _)| *record),
                faces,
            })
        }
        Err(Exhausted) => {
            let Some((record, checks)) = probe else {
                return Err(NonDegenError::Inconclusive);
            };
            let faces = checks
                .iter()
                .map(|c| FaceReport {
                    face: c.face.describe(),
                    pass: c.pass(),
                    witness: None,
                })
                .collect();
            Ok(NonDegeneracyReport {
                overall: record.overall,
                method: Method::ProbabilisticOnly,
                irreducibility_assumed: true,
                probe: Some(record),
                faces,
            })
        }
    }
}

/// Always true once the face is validated as a vertex of the Newton
/// polygon: a single monomial with nonzero coefficient never vanishes on
/// the torus.
pub fn check_vertex(f: &LaurentPolynomial, face: &Face) -> Result<bool, NonDegenError> {
    let check = checked_face(f, face)?;
    match check {
        Face::Vertex(_) => Ok(true),
        _ => Err(LaurentError::NotAFace.into()),
    }
}

pub fn check_edge(
    f: &LaurentPolynomial,
    face: &Face,
) -> Result<FaceCheck<BigRational>, NonDegenError> {
    let face = checked_face(f, face)?;
    let Face::Edge { ref points, .. } = face else {
        return Err(LaurentError::NotAFace.into());
    };
    let failure = check_edge_generic(&Rationals, f.terms(), points);
    Ok(FaceCheck { face, failure })
}

/// The check for the two-dimensional face of the Newton polygon.
pub fn check_face(f: &LaurentPolynomial) -> Result<FaceCheck<BigRational>, NonDegenError> {
    if f.is_zero() {
        return Err(LaurentError::ZeroPolynomial.into());
    }
    let delta = f.newton_polygon();
    if !delta.is_two_dimensional() {
        return Err(LaurentError::Lattice(crate::lattice::LatticeError::NotTwoDimensional).into());
    }
    match check_full_generic(&Rationals, f.terms()) {
        Ok(failure) => Ok(FaceCheck {
            face: Face::Full,
            failure,
        }),
        Err(Exhausted) => Err(NonDegenError::Inconclusive),
    }
}

fn checked_face(f: &LaurentPolynomial, face: &Face) -> Result<Face, NonDegenError> {
    if f.is_zero() {
        return Err(LaurentError::ZeroPolynomial.into());
    }
    let delta = f.newton_polygon();
    let all = faces(&delta).map_err(LaurentError::from)?;
    all.into_iter()
        .find(|g| g == face)
        .ok_or_else(|| LaurentError::NotAFace.into())
}

fn probe_mod_p(
    f: &LaurentPolynomial,
    delta: &LatticePolygon,
    prime: u64,
) -> Option<(ProbeRecord, Vec<FaceCheck<u64>>)> {
    let fp = PrimeField::new(prime)?;
    let reduced = reduce_mod_p(f, &fp).ok()?;
    if reduced.is_empty() {
        return None;
    }
    let support: Vec<LatticePoint> = reduced.keys().copied().collect();
    let hull = crate::lattice::convex_hull(&support).ok()?;
    if hull != *delta {
        // the reduction lost a vertex; this prime cannot see the polygon
        return None;
    }
    let checks = check_all_faces(&fp, &reduced, delta).ok()?;
    let overall = checks.iter().all(FaceCheck::pass);
    Some((ProbeRecord { prime, overall }, checks))
}

fn check_all_faces<F: Field + Clone>(
    fk: &F,
    terms: &TermMap<F::E>,
    delta: &LatticePolygon,
) -> Result<Vec<FaceCheck<F::E>>, Exhausted> {
    let mut out = Vec::new();
    for face in faces(delta).expect("two-dimensional polygon") {
        let failure = match &face {
            Face::Vertex(_) => None,
            Face::Edge { points, .. } => check_edge_generic(fk, terms, points),
            Face::Full => check_full_generic(fk, terms)?,
        };
        out.push(FaceCheck { face, failure });
    }
    Ok(out)
}

/// Edge restriction is non-degenerate iff the edge polynomial is
/// squarefree. The witness is the monic product of its repeated prime
/// factors, whose square divides the edge polynomial.
fn check_edge_generic<F: Field + Clone>(
    fk: &F,
    terms: &TermMap<F::E>,
    points: &[LatticePoint],
) -> Option<FaceFailure<F::E>> {
    let g = Poly::from_coeffs(
        fk,
        points
            .iter()
            .map(|e| terms.get(e).cloned().unwrap_or_else(|| fk.zero()))
            .collect(),
    );
    let c = pgcd_monic(fk, &g, &pderiv(fk, &g));
    if c.degree() == Some(0) {
        return None;
    }
    let factor = squarefree_part(fk, &c);
    // confirm the witness: factor^2 divides g
    let (_, rem) = pdivrem(fk, &g, &pmul(fk, &factor, &factor));
    assert!(rem.is_zero(), "edge witness failed verification");
    Some(FaceFailure::RepeatedEdgeFactor { factor })
}

/// Decides the two-dimensional face. The torus-zero system is f = x*df/dx
/// = y*df/dy = 0; monomial clearing makes the three Laurent polynomials
/// honest polynomials P0, P1, P2 without changing torus zeros.
fn check_full_generic<F: Field + Clone>(
    fk: &F,
    terms: &TermMap<F::E>,
) -> Result<Option<FaceFailure<F::E>>, Exhausted> {
    let ry = PolyRing::over(fk.clone());
    let triple = |t: &TermMap<F::E>| -> [Poly<Poly<F::E>>; 3] {
        let base = common_min(&[t]);
        [
            to_bivariate(fk, t, base),
            to_bivariate(fk, &log_dx(fk, t), base),
            to_bivariate(fk, &log_dy(fk, t), base),
        ]
    };

    // a common factor that is not a monomial vanishes somewhere on the
    // torus and witnesses degeneracy outright; removing monomial parts
    // first keeps the witness honest
    let [q0, q1, q2] = triple(terms);
    let g_all = pgcd_domain(&ry, &pgcd_domain(&ry, &q0, &q1), &q2);
    let (stripped, _, _) = strip_monomials(fk, &g_all);
    if !(stripped.degree() == Some(0) && stripped.leading().unwrap().degree() == Some(0)) {
        let lead = stripped.leading().unwrap().leading().unwrap();
        let inv = Poly::constant(fk, fk.inv(lead));
        let factor = pscale(&ry, &stripped, &inv);
        for q in [&q0, &q1, &q2] {
            let quot = pexact_div(&ry, q, &factor);
            assert!(
                pmul(&ry, &quot, &factor) == *q,
                "common-factor witness failed verification"
            );
        }
        return Ok(Some(FaceFailure::CommonFactor { factor }));
    }

    // eliminate y; a vanishing resultant means a spurious common factor
    // of one pair only, which a shear y -> y*x^k destroys for all but
    // finitely many k
    let budget = 2 * terms.len() as i64 + 4;
    for shear in 0..budget {
        let sheared = shear_terms(terms, shear);
        let [q0, q1, q2] = triple(&sheared);
        let r1 = presultant(&ry, &q0, &q1);
        let r2 = presultant(&ry, &q0, &q2);
        if r1.is_zero() || r2.is_zero() {
            continue;
        }
        let g = pgcd_monic(fk, &r1, &r2);
        let (g, _) = strip_x_powers(fk, &squarefree_part(fk, &g));
        if g.degree() == Some(0) {
            return Ok(None);
        }
        // certify every root of g at once, splitting as needed
        for branch in branch_gcd(fk, &g, &[q0.clone(), q1.clone(), q2.clone()]) {
            let degenerate = branch.gcd_y.is_zero() || branch.gcd_y.degree().unwrap() >= 1;
            if !degenerate {
                continue;
            }
            verify_branch(fk, &branch.modulus, &branch.gcd_y, [&q0, &q1, &q2]);
            return Ok(Some(FaceFailure::Branch {
                shear,
                modulus: branch.modulus,
                gcd_y: branch.gcd_y,
            }));
        }
        return Ok(None);
    }
    Err(Exhausted)
}

/// Confirms a branch witness: each cleared polynomial is zero modulo
/// (modulus, gcd_y) — identically zero on the branch when gcd_y is zero.
fn verify_branch<F: Field + Clone>(
    fk: &F,
    modulus: &Poly<F::E>,
    gcd_y: &Poly<Poly<F::E>>,
    qs: [&Poly<Poly<F::E>>; 3],
) {
    let quot = Quotient::new(fk.clone(), modulus.clone());
    for q in qs {
        let reduced = pmap(&quot, q, &mut |c| quot.reduce(c));
        if gcd_y.is_zero() {
            assert!(reduced.is_zero(), "branch witness failed verification");
        } else {
            let (_, rem) = qdivrem(&quot, &reduced, gcd_y)
                .unwrap_or_else(|_| unreachable!("monic divisor cannot split"));
            assert!(rem.is_zero(), "branch witness failed verification");
        }
    }
}

/// Removes the pure-monomial content x^a y^b: trailing zero rows, then the
/// common x-valuation of all rows.
fn strip_monomials<F: Field + Clone>(
    fk: &F,
    g: &Poly<Poly<F::E>>,
) -> (Poly<Poly<F::E>>, usize, usize) {
    assert!(!g.is_zero());
    let ry = PolyRing::over(fk.clone());
    let mut rows = g.coeffs().to_vec();
    let mut ypow = 0;
    while rows.first().map_or(false, Poly::is_zero) {
        rows.remove(0);
        ypow += 1;
    }
    let xpow = rows
        .iter()
        .filter(|r| !r.is_zero())
        .map(|r| r.coeffs().iter().position(|c| !fk.is_zero(c)).unwrap())
        .min()
        .unwrap_or(0);
    if xpow > 0 {
        for r in &mut rows {
            if !r.is_zero() {
                *r = Poly::from_coeffs(fk, r.coeffs()[xpow..].to_vec());
            }
        }
    }
    (Poly::from_coeffs(&ry, rows), ypow, xpow)
}

fn strip_x_powers<F: Field>(fk: &F, p: &Poly<F::E>) -> (Poly<F::E>, usize) {
    match p.coeffs().iter().position(|c| !fk.is_zero(c)) {
        None => (Poly::zero(), 0),
        Some(v) => (Poly::from_coeffs(fk, p.coeffs()[v..].to_vec()), v),
    }
}

fn describe_failure(failure: &FaceFailure<BigRational>) -> String {
    match failure {
        FaceFailure::RepeatedEdgeFactor { factor } => {
            format!(
                "edge polynomial divisible by ({})^2",
                show_unipoly(factor, "T")
            )
        }
        FaceFailure::CommonFactor { factor } => format!(
            "f and its logarithmic derivatives share the factor {}",
            show_bipoly(factor)
        ),
        FaceFailure::Branch {
            shear,
            modulus,
            gcd_y,
        } => {
            let note = if *shear != 0 {
                format!(" (after the substitution y -> y*x^{shear})")
            } else {
                String::new()
            };
            if gcd_y.is_zero() {
                format!(
                    "f and its logarithmic derivatives vanish identically where {} = 0{}",
                    show_unipoly(modulus, "x"),
                    note
                )
            } else {
                format!(
                    "common torus zero with x a root of {} and y a root of {}{}",
                    show_unipoly(modulus, "x"),
                    show_bipoly(gcd_y),
                    note
                )
            }
        }
    }
}

fn show_unipoly(p: &Poly<BigRational>, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.abs();
        let mut factors = Vec::new();
        if !mag.is_one() || k == 0 {
            factors.push(rational_to_string(&mag));
        }
        match k {
            0 => {}
            1 => factors.push(var.to_string()),
            _ => factors.push(format!("{var}^{k}")),
        }
        out.push_str(&factors.join("*"));
    }
    out
}

fn show_bipoly(p: &Poly<Poly<BigRational>>) -> String {
    let terms = p.coeffs().iter().enumerate().flat_map(|(j, row)| {
        row.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (crate::lattice::pt(i as i64, j as i64), c.clone()))
    });
    LaurentPolynomial::from_terms(terms).to_string()
}
