//! Dense univariate polynomials over an arbitrary coefficient context,
//! with the exact algorithms the nondegeneracy decision needs: division,
//! gcd over fields and over gcd domains (subresultant remainder sequences),
//! resultants, squarefree parts, and root finding over prime fields.
//!
//! Bivariate polynomials are `Poly<Poly<_>>` via the [`PolyRing`] context;
//! the same generic functions then eliminate the outer variable.
//!
//! [`PolyRing`]: crate::ring::PolyRing

use crate::ring::{Domain, Field, GcdDomain, PrimeField, Ring};

/// Coefficient list, index = exponent, with no trailing zeros (the zero
/// polynomial is the empty list). Constructors take the coefficient context
/// so the invariant can be maintained.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T> Poly<T> {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&T> {
        self.coeffs.get(i)
    }
}

impl<T: Clone> Poly<T> {
    pub fn constant<R: Ring<E = T>>(r: &R, c: T) -> Self {
        Poly::from_coeffs(r, vec![c])
    }

    pub fn from_coeffs<R: Ring<E = T>>(r: &R, mut coeffs: Vec<T>) -> Self {
        while coeffs.last().map_or(false, |c| r.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// The monomial c * X^k.
    pub fn monomial<R: Ring<E = T>>(r: &R, c: T, k: usize) -> Self {
        if r.is_zero(&c) {
            return Poly::zero();
        }
        let mut coeffs = vec![r.zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn var<R: Ring<E = T>>(r: &R) -> Self {
        Poly::monomial(r, r.one(), 1)
    }
}

pub fn padd<R: Ring>(r: &R, a: &Poly<R::E>, b: &Poly<R::E>) -> Poly<R::E> {
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let c = match (a.coeff(i), b.coeff(i)) {
            (Some(x), Some(y)) => r.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(c);
    }
    Poly::from_coeffs(r, out)
}

pub fn pneg<R: Ring>(r: &R, a: &Poly<R::E>) -> Poly<R::E> {
    Poly {
        coeffs: a.coeffs.iter().map(|c| r.neg(c)).collect(),
    }
}

pub fn psub<R: Ring>(r: &R, a: &Poly<R::E>, b: &Poly<R::E>) -> Poly<R::E> {
    padd(r, a, &pneg(r, b))
}

pub fn pmul<R: Ring>(r: &R, a: &Poly<R::E>, b: &Poly<R::E>) -> Poly<R::E> {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![r.zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    Poly::from_coeffs(r, out)
}

pub fn pscale<R: Ring>(r: &R, a: &Poly<R::E>, c: &R::E) -> Poly<R::E> {
    Poly::from_coeffs(r, a.coeffs.iter().map(|x| r.mul(x, c)).collect())
}

/// Multiplication by X^k.
pub fn pshift<R: Ring>(r: &R, a: &Poly<R::E>, k: usize) -> Poly<R::E> {
    if a.is_zero() {
        return Poly::zero();
    }
    let mut coeffs = vec![r.zero(); k];
    coeffs.extend(a.coeffs.iter().cloned());
    Poly { coeffs }
}

/// Coefficient-wise image, renormalized in the target context (used for
/// reduction maps such as rationals to a prime field).
pub fn pmap<T, R2: Ring>(r2: &R2, a: &Poly<T>, f: &mut impl FnMut(&T) -> R2::E) -> Poly<R2::E> {
    Poly::from_coeffs(r2, a.coeffs.iter().map(|c| f(c)).collect())
}

pub fn peval<R: Ring>(r: &R, a: &Poly<R::E>, x: &R::E) -> R::E {
    let mut acc = r.zero();
    for c in a.coeffs.iter().rev() {
        acc = r.add(&r.mul(&acc, x), c);
    }
    acc
}

pub fn pderiv<R: Ring>(r: &R, a: &Poly<R::E>) -> Poly<R::E> {
    let coeffs = a
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| r.mul(c, &r.of_i64(i as i64)))
        .collect();
    Poly::from_coeffs(r, coeffs)
}

/// Division with remainder over a field: a = q*b + rem, deg rem < deg b.
pub fn pdivrem<F: Field>(f: &F, a: &Poly<F::E>, b: &Poly<F::E>) -> (Poly<F::E>, Poly<F::E>) {
    assert!(!b.is_zero(), "division by the zero polynomial");
    let db = b.degree().unwrap();
    let lb_inv = f.inv(b.leading().unwrap());
    let mut rem = a.coeffs.clone();
    let mut quot = vec![f.zero(); rem.len().saturating_sub(db)];
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let c = f.mul(rem.last().unwrap(), &lb_inv);
        if !f.is_zero(&c) {
            for (i, bc) in b.coeffs.iter().enumerate() {
                rem[k + i] = f.sub(&rem[k + i], &f.mul(&c, bc));
            }
            quot[k] = c;
        }
        rem.pop();
    }
    (Poly::from_coeffs(f, quot), Poly::from_coeffs(f, rem))
}

/// Exact division in R[X]: b must divide a. Works over any gcd domain
/// because each elimination step's leading-coefficient division is exact
/// when the divisibility holds; panics otherwise (internal contract).
pub fn pexact_div<R: Domain>(r: &R, a: &Poly<R::E>, b: &Poly<R::E>) -> Poly<R::E> {
    assert!(!b.is_zero(), "division by the zero polynomial");
    if a.is_zero() {
        return Poly::zero();
    }
    let db = b.degree().unwrap();
    let lb = b.leading().unwrap();
    let mut rem = a.coeffs.clone();
    assert!(rem.len() > db || rem.is_empty(), "exact division underflow");
    let mut quot = vec![r.zero(); rem.len() - db];
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let top = rem.last().unwrap().clone();
        if !r.is_zero(&top) {
            let c = r.exact_div(&top, lb);
            for (i, bc) in b.coeffs.iter().enumerate() {
                rem[k + i] = r.sub(&rem[k + i], &r.mul(&c, bc));
            }
            quot[k] = c;
        }
        rem.pop();
    }
    assert!(
        rem.iter().all(|c| r.is_zero(c)),
        "exact division left a remainder"
    );
    Poly::from_coeffs(r, quot)
}

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a ≡ result (mod b), with
/// the full power applied even when elimination finishes early.
pub fn prem<R: Ring>(r: &R, a: &Poly<R::E>, b: &Poly<R::E>) -> Poly<R::E> {
    assert!(!b.is_zero());
    let (da, db) = (a.degree(), b.degree().unwrap());
    let Some(da) = da else { return Poly::zero() };
    if da < db {
        return a.clone();
    }
    let d = b.leading().unwrap().clone();
    let mut e = (da - db + 1) as i64;
    let mut rem = a.clone();
    while !rem.is_zero() && rem.degree().unwrap() >= db {
        let k = rem.degree().unwrap() - db;
        let top = rem.leading().unwrap().clone();
        // rem := d*rem - top*X^k*b  (cancels the leading term)
        let shifted = pmul(r, &Poly::monomial(r, top, k), b);
        rem = psub(r, &pscale(r, &rem, &d), &shifted);
        e -= 1;
    }
    for _ in 0..e {
        rem = pscale(r, &rem, &d);
    }
    rem
}

pub fn monic<F: Field>(f: &F, a: &Poly<F::E>) -> Poly<F::E> {
    match a.leading() {
        None => Poly::zero(),
        Some(lc) => pscale(f, a, &f.inv(lc)),
    }
}

/// Monic gcd over a field (Euclid).
pub fn pgcd_monic<F: Field>(f: &F, a: &Poly<F::E>, b: &Poly<F::E>) -> Poly<F::E> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r) = pdivrem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

/// Extended gcd over a field: (g, u, v) with u*a + v*b = g, g monic (or
/// zero when both inputs are zero).
pub fn pxgcd<F: Field>(
    f: &F,
    a: &Poly<F::E>,
    b: &Poly<F::E>,
) -> (Poly<F::E>, Poly<F::E>, Poly<F::E>) {
    let one = Poly::constant(f, f.one());
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (one.clone(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), one);
    while !r1.is_zero() {
        let (q, r) = pdivrem(f, &r0, &r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = psub(f, &s0, &pmul(f, &q, &s1));
        s0 = std::mem::replace(&mut s1, s);
        let t = psub(f, &t0, &pmul(f, &q, &t1));
        t0 = std::mem::replace(&mut t1, t);
    }
    match r0.leading() {
        None => (r0, s0, t0),
        Some(lc) => {
            let c = f.inv(lc);
            (pscale(f, &r0, &c), pscale(f, &s0, &c), pscale(f, &t0, &c))
        }
    }
}

/// Content: gcd of the coefficients (zero for the zero polynomial).
pub fn pcontent<R: GcdDomain>(r: &R, a: &Poly<R::E>) -> R::E {
    a.coeffs
        .iter()
        .fold(r.zero(), |acc, c| r.gcd(&acc, c))
}

pub fn pprimitive<R: GcdDomain>(r: &R, a: &Poly<R::E>) -> Poly<R::E> {
    if a.is_zero() {
        return Poly::zero();
    }
    let c = pcontent(r, a);
    Poly {
        coeffs: a.coeffs.iter().map(|x| r.exact_div(x, &c)).collect(),
    }
}

/// Gcd in R[X] for a gcd domain R, by the subresultant remainder sequence:
/// gcd of the contents times the primitive part of the last nonzero
/// remainder. Unique up to a unit of R.
pub fn pgcd_domain<R: GcdDomain>(r: &R, a: &Poly<R::E>, b: &Poly<R::E>) -> Poly<R::E> {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let c = r.gcd(&pcontent(r, a), &pcontent(r, b));
    let (mut a, mut b) = (pprimitive(r, a), pprimitive(r, b));
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = r.one();
    let mut h = r.one();
    while !b.is_zero() && b.degree().unwrap() > 0 {
        let delta = a.degree().unwrap() - b.degree().unwrap();
        let rem = prem(r, &a, &b);
        a = b;
        // divide by g*h^delta (exact by subresultant theory)
        let mut den = g.clone();
        for _ in 0..delta {
            den = r.mul(&den, &h);
        }
        b = if rem.is_zero() {
            Poly::zero()
        } else {
            Poly {
                coeffs: rem.coeffs.iter().map(|x| r.exact_div(x, &den)).collect(),
            }
        };
        g = a.leading().unwrap().clone();
        // h := h^(1-delta) * g^delta
        let mut num = r.one();
        for _ in 0..delta {
            num = r.mul(&num, &g);
        }
        let mut hden = r.one();
        for _ in 1..delta {
            hden = r.mul(&hden, &h);
        }
        h = r.exact_div(&num, &hden);
    }
    let core = if b.is_zero() { pprimitive(r, &a) } else {
        // last nonzero remainder is a constant: primitive gcd is 1
        Poly::constant(r, r.one())
    };
    pscale(r, &core, &c)
}

/// Resultant of a and b with respect to X, over a gcd domain, by the
/// subresultant algorithm. Conventions: Res of two nonzero constants is 1;
/// Res(a, c) = c^(deg a); Res with a zero argument is 0.
pub fn presultant<R: GcdDomain>(r: &R, a: &Poly<R::E>, b: &Poly<R::E>) -> R::E {
    if a.is_zero() || b.is_zero() {
        return r.zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut sign_neg = false;
    if a.degree() < b.degree() {
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            sign_neg = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.degree().unwrap() == 0 {
        if a.degree().unwrap() == 0 {
            return r.one();
        }
        let mut acc = r.one();
        for _ in 0..a.degree().unwrap() {
            acc = r.mul(&acc, b.leading().unwrap());
        }
        return acc;
    }
    let ca = pcontent(r, &a);
    let cb = pcontent(r, &b);
    let mut a = pprimitive(r, &a);
    let mut b = pprimitive(r, &b);
    // t = cont(a)^deg b * cont(b)^deg a
    let mut t = r.one();
    for _ in 0..b.degree().unwrap() {
        t = r.mul(&t, &ca);
    }
    for _ in 0..a.degree().unwrap() {
        t = r.mul(&t, &cb);
    }
    let mut g = r.one();
    let mut h = r.one();
    loop {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign_neg = !sign_neg;
        }
        let rem = prem(r, &a, &b);
        if rem.is_zero() {
            return r.zero();
        }
        a = b;
        let mut den = g.clone();
        for _ in 0..delta {
            den = r.mul(&den, &h);
        }
        b = Poly {
            coeffs: rem.coeffs.iter().map(|x| r.exact_div(x, &den)).collect(),
        };
        g = a.leading().unwrap().clone();
        let mut num = r.one();
        for _ in 0..delta {
            num = r.mul(&num, &g);
        }
        let mut hden = r.one();
        for _ in 1..delta {
            hden = r.mul(&hden, &h);
        }
        h = r.exact_div(&num, &hden);
        if b.degree().unwrap() == 0 {
            break;
        }
    }
    // final correction: h' = lc(b)^(deg a) / h^(deg a - 1)
    let da = a.degree().unwrap();
    let mut num = r.one();
    for _ in 0..da {
        num = r.mul(&num, b.leading().unwrap());
    }
    let mut hden = r.one();
    for _ in 1..da {
        hden = r.mul(&hden, &h);
    }
    let hp = r.exact_div(&num, &hden);
    let res = r.mul(&t, &hp);
    if sign_neg {
        r.neg(&res)
    } else {
        res
    }
}

/// Largest squarefree divisor over a field of characteristic 0 or of
/// characteristic larger than the degree: a / gcd(a, a').
pub fn squarefree_part<F: Field>(f: &F, a: &Poly<F::E>) -> Poly<F::E> {
    if a.is_zero() {
        return Poly::zero();
    }
    let g = pgcd_monic(f, a, &pderiv(f, a));
    let (q, r) = pdivrem(f, a, &g);
    debug_assert!(r.is_zero());
    monic(f, &q)
}

/// X^e modulo m, by binary exponentiation.
pub fn pow_x_mod<F: Field>(f: &F, e: u64, m: &Poly<F::E>) -> Poly<F::E> {
    ppowmod(f, &Poly::var(f), e, m)
}

pub fn ppowmod<F: Field>(f: &F, base: &Poly<F::E>, mut e: u64, m: &Poly<F::E>) -> Poly<F::E> {
    assert!(!m.is_zero(), "zero modulus");
    if m.degree() == Some(0) {
        return Poly::zero();
    }
    let mut acc = Poly::constant(f, f.one());
    let mut base = pdivrem(f, base, m).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = pdivrem(f, &pmul(f, &acc, &base), m).1;
        }
        base = pdivrem(f, &pmul(f, &base, &base), m).1;
        e >>= 1;
    }
    acc
}

/// All roots of a in the prime field, sorted ascending. Splits off the
/// distinct linear factors via gcd with X^p − X, then separates them by
/// equal-degree splitting with the deterministic shift sequence a = 0,1,2,…
pub fn roots_mod_p(pf: &PrimeField, a: &Poly<u64>) -> Vec<u64> {
    assert!(!a.is_zero(), "roots of the zero polynomial");
    if a.degree() == Some(0) {
        return vec![];
    }
    let p = pf.p();
    if p == 2 {
        let mut out: Vec<u64> = (0..2).filter(|&x| pf.is_zero(&peval(pf, a, &x))).collect();
        out.sort_unstable();
        return out;
    }
    let a = monic(pf, a);
    // g = product of (X - r) over distinct roots r
    let xp = pow_x_mod(pf, p, &a);
    let xp_minus_x = psub(pf, &xp, &Poly::var(pf));
    let g = pgcd_monic(pf, &a, &xp_minus_x);
    let mut roots = Vec::new();
    let mut stack = vec![g];
    let mut shift = 0u64;
    while let Some(cur) = stack.pop() {
        match cur.degree() {
            None | Some(0) => continue,
            Some(1) => {
                // monic X + c0 -> root -c0
                let c0 = cur.coeff(0).unwrap();
                roots.push(pf.neg(c0));
                continue;
            }
            Some(_) => {}
        }
        // split by quadratic residues of X + shift
        let mut split = None;
        while split.is_none() {
            let base = Poly::from_coeffs(pf, vec![shift % p, 1]);
            shift += 1;
            let pow = ppowmod(pf, &base, (p - 1) / 2, &cur);
            let h = pgcd_monic(pf, &cur, &psub(pf, &pow, &Poly::constant(pf, 1)));
            if let Some(d) = h.degree() {
                if d > 0 && d < cur.degree().unwrap() {
                    split = Some(h);
                }
            }
        }
        let h = split.unwrap();
        let (q, r) = pdivrem(pf, &cur, &h);
        debug_assert!(r.is_zero());
        stack.push(h);
        stack.push(q);
    }
    roots.sort_unstable();
    roots.dedup();
    roots
}
