//! Dynamic evaluation in F[x]/(m) for squarefree m: arithmetic proceeds as
//! if the quotient were a field, and any inversion that meets a zero
//! divisor reveals a proper factor of m; the computation is then restarted
//! on each factor separately. The effect is a case split over the
//! irreducible factors of m without ever factoring m up front.

use crate::poly::{pdivrem, pexact_div, pmap, pmul, pxgcd, Poly};
use crate::ring::{Field, Ring};

/// The quotient F[x]/(m) as a coefficient context. Elements are polynomials
/// reduced mod m; `mul` reduces, the additive operations need not.
#[derive(Debug, Clone)]
pub struct Quotient<F: Field> {
    pub base: F,
    pub modulus: Poly<F::E>,
}

impl<F: Field + Clone> Quotient<F> {
    pub fn new(base: F, modulus: Poly<F::E>) -> Self {
        assert!(
            modulus.degree().map_or(false, |d| d >= 1),
            "modulus must have positive degree"
        );
        Quotient { base, modulus }
    }

    pub fn reduce(&self, a: &Poly<F::E>) -> Poly<F::E> {
        pdivrem(&self.base, a, &self.modulus).1
    }
}

impl<F: Field + Clone> Ring for Quotient<F> {
    type E = Poly<F::E>;
    fn zero(&self) -> Poly<F::E> {
        Poly::zero()
    }
    fn one(&self) -> Poly<F::E> {
        self.reduce(&Poly::constant(&self.base, self.base.one()))
    }
    fn add(&self, a: &Poly<F::E>, b: &Poly<F::E>) -> Poly<F::E> {
        crate::poly::padd(&self.base, a, b)
    }
    fn sub(&self, a: &Poly<F::E>, b: &Poly<F::E>) -> Poly<F::E> {
        crate::poly::psub(&self.base, a, b)
    }
    fn neg(&self, a: &Poly<F::E>) -> Poly<F::E> {
        crate::poly::pneg(&self.base, a)
    }
    fn mul(&self, a: &Poly<F::E>, b: &Poly<F::E>) -> Poly<F::E> {
        self.reduce(&pmul(&self.base, a, b))
    }
    fn is_zero(&self, a: &Poly<F::E>) -> bool {
        a.is_zero()
    }
    fn of_i64(&self, n: i64) -> Poly<F::E> {
        self.reduce(&Poly::constant(&self.base, self.base.of_i64(n)))
    }
}

/// Outcome of attempting to invert a reduced element.
#[derive(Debug, Clone, PartialEq)]
pub enum TryInv<E> {
    Invertible(Poly<E>),
    /// A proper monic factor of the modulus was discovered; the caller must
    /// split and retry per factor.
    Split(Poly<E>),
    Zero,
}

pub fn try_inv<F: Field + Clone>(q: &Quotient<F>, a: &Poly<F::E>) -> TryInv<F::E> {
    if a.is_zero() {
        return TryInv::Zero;
    }
    let (g, u, _) = pxgcd(&q.base, a, &q.modulus);
    match g.degree() {
        Some(0) => TryInv::Invertible(q.reduce(&u)),
        Some(d) if d < q.modulus.degree().unwrap() => TryInv::Split(g),
        _ => TryInv::Zero, // gcd = modulus: a was not reduced, or m not squarefree
    }
}

/// Division with remainder in (F[x]/(m))[y]; fails with a factor of m when
/// the divisor's leading coefficient is a zero divisor.
#[allow(clippy::type_complexity)]
pub fn qdivrem<F: Field + Clone>(
    q: &Quotient<F>,
    a: &Poly<Poly<F::E>>,
    b: &Poly<Poly<F::E>>,
) -> Result<(Poly<Poly<F::E>>, Poly<Poly<F::E>>), Poly<F::E>> {
    assert!(!b.is_zero(), "division by the zero polynomial");
    let lb_inv = match try_inv(q, b.leading().unwrap()) {
        TryInv::Invertible(i) => i,
        TryInv::Split(g) => return Err(g),
        TryInv::Zero => unreachable!("nonzero polynomial with zero leading coefficient"),
    };
    let db = b.degree().unwrap();
    let mut rem: Vec<Poly<F::E>> = a.coeffs().to_vec();
    let mut quot = vec![q.zero(); rem.len().saturating_sub(db)];
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let c = q.mul(rem.last().unwrap(), &lb_inv);
        if !c.is_zero() {
            for (i, bc) in b.coeffs().iter().enumerate() {
                rem[k + i] = q.sub(&rem[k + i], &q.mul(&c, bc));
            }
            quot[k] = c;
        }
        rem.pop();
    }
    Ok((Poly::from_coeffs(q, quot), Poly::from_coeffs(q, rem)))
}

/// Monic gcd in (F[x]/(m))[y] by the Euclidean algorithm, or a factor of m.
pub fn qgcd<F: Field + Clone>(
    q: &Quotient<F>,
    a: &Poly<Poly<F::E>>,
    b: &Poly<Poly<F::E>>,
) -> Result<Poly<Poly<F::E>>, Poly<F::E>> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r) = qdivrem(q, &a, &b)?;
        a = b;
        b = r;
    }
    match a.leading() {
        None => Ok(a),
        Some(lc) => match try_inv(q, lc) {
            TryInv::Invertible(i) => Ok(pmap(q, &a, &mut |c| q.mul(c, &i))),
            TryInv::Split(g) => Err(g),
            TryInv::Zero => unreachable!("nonzero polynomial with zero leading coefficient"),
        },
    }
}

/// One completed branch of a dynamic-evaluation run.
#[derive(Debug, Clone)]
pub struct Branch<E> {
    /// Monic factor of the original modulus this branch certifies.
    pub modulus: Poly<E>,
    /// Monic gcd of the input polynomials over this branch, with trailing
    /// y-powers stripped; zero when every input vanishes identically.
    pub gcd_y: Poly<Poly<E>>,
    /// Number of y-powers stripped from the gcd.
    pub y_power: usize,
}

/// For every root of the squarefree modulus m, the common structure of the
/// given y-polynomials: splits m as needed and returns one branch per final
/// factor, each carrying the monic y-gcd with its y-powers stripped (so a
/// positive-degree gcd certifies a common zero with nonzero y-coordinate,
/// given that its trailing coefficient is invertible on the branch).
pub fn branch_gcd<F: Field + Clone>(
    f: &F,
    m: &Poly<F::E>,
    polys: &[Poly<Poly<F::E>>],
) -> Vec<Branch<F::E>> {
    assert!(!polys.is_empty());
    let monic_m = crate::poly::monic(f, m);
    let mut stack = vec![monic_m];
    let mut out = Vec::new();
    while let Some(modulus) = stack.pop() {
        match run_branch(f, &modulus, polys) {
            Ok(branch) => out.push(branch),
            Err(factor) => {
                let co = pexact_div(f, &modulus, &factor);
                debug_assert!(factor.degree().unwrap() >= 1 && co.degree().unwrap() >= 1);
                stack.push(co);
                stack.push(factor);
            }
        }
    }
    out
}

fn run_branch<F: Field + Clone>(
    f: &F,
    modulus: &Poly<F::E>,
    polys: &[Poly<Poly<F::E>>],
) -> Result<Branch<F::E>, Poly<F::E>> {
    let q = Quotient::new(f.clone(), modulus.clone());
    let mut reduced = polys
        .iter()
        .map(|p| pmap(&q, p, &mut |c| q.reduce(c)))
        .collect::<Vec<_>>();
    let mut h = reduced.remove(0);
    for p in &reduced {
        h = qgcd(&q, &h, p)?;
    }
    // strip y-powers: y never vanishes on the torus, so a pure y factor
    // carries no information
    let mut y_power = 0;
    loop {
        let Some(c0) = h.coeff(0) else { break };
        if c0.is_zero() {
            h = Poly::from_coeffs(&q, h.coeffs()[1..].to_vec());
            y_power += 1;
            continue;
        }
        match try_inv(&q, c0) {
            TryInv::Invertible(_) => break,
            TryInv::Split(g) => return Err(g),
            TryInv::Zero => unreachable!(),
        }
    }
    Ok(Branch {
        modulus: modulus.clone(),
        gcd_y: h,
        y_power,
    })
}
