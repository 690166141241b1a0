//! Arithmetic in small finite fields GF(p^k).
//!
//! Elements are dense indices `0..q`: the index `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! encodes the polynomial `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` modulo the field's
//! modulus. The modulus is the first monic irreducible polynomial of degree `k`
//! when monic polynomials are ordered lexicographically on `(c_{k-1}, ..., c_0)`.
//! Index 0 is zero and index 1 is one in every field.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Raw element index. Only meaningful together with the [`Field`] that produced it.
pub type Elem = u16;

pub const DEFAULT_FIELD_BOUND: u64 = 256;
const HARD_FIELD_BOUND: u64 = 1 << 12;
const TABLE_BOUND: usize = 256;

#[derive(Clone)]
pub struct Field(Arc<Tables>);

struct Tables {
    p: u32,
    k: u32,
    q: usize,
    modulus: Vec<u32>,
    // q*q entries when q <= TABLE_BOUND, otherwise empty and addition is done digit-wise
    add: Vec<Elem>,
    neg: Vec<Elem>,
    exp: Vec<Elem>,
    log: Vec<u32>,
    generator: Elem,
    conj: Option<Vec<Elem>>,
}

impl Field {
    /// GF(p^k) under the default order bound of 256.
    pub fn new(p: u32, k: u32) -> Result<Field> {
        Field::with_bound(p, k, DEFAULT_FIELD_BOUND)
    }

    pub fn with_bound(p: u32, k: u32, bound: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::ZeroDegree);
        }
        let order = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        let bound = bound.min(HARD_FIELD_BOUND);
        if order > bound {
            return Err(Error::FieldBound { order, bound });
        }
        Ok(Field(Arc::new(Tables::build(p, k))))
    }

    /// GF(q) for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Field> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrime(q.min(u32::MAX as u64) as u32))?;
        Field::new(p, k)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> usize {
        self.0.q
    }

    /// Coefficients `c_0..=c_k` of the modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// A generator of the multiplicative group (the smallest index of order q-1).
    pub fn generator(&self) -> Elem {
        self.0.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.q as Elem
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// Wraps a raw index; panics if it is out of range.
    pub fn element(&self, index: Elem) -> FieldElement {
        assert!((index as usize) < self.0.q, "element index out of range");
        FieldElement { field: self.clone(), index }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let t = &self.0;
        if t.q <= TABLE_BOUND {
            t.add[a as usize * t.q + b as usize]
        } else {
            t.digit_add(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &self.0;
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::InverseOfZero);
        }
        let t = &self.0;
        let l = t.log[a as usize] as usize;
        Ok(t.exp[(t.q - 1 - l) % (t.q - 1)])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let t = &self.0;
        let l = (t.log[a as usize] as u64 * (e % (t.q as u64 - 1))) % (t.q as u64 - 1);
        t.exp[l as usize]
    }

    /// The multiple `n * a` for an integer `n`.
    pub fn times(&self, n: u64, a: Elem) -> Elem {
        let m = n % self.0.p as u64;
        let mut acc = 0;
        for _ in 0..m {
            acc = self.add(acc, a);
        }
        acc
    }

    pub fn has_involution(&self) -> bool {
        self.0.conj.is_some()
    }

    /// The involutory automorphism `x -> x^sqrt(q)`; requires even degree.
    pub fn conj(&self, a: Elem) -> Result<Elem> {
        match &self.0.conj {
            Some(c) => Ok(c[a as usize]),
            None => Err(Error::NoInvolution(self.0.q)),
        }
    }

    /// Unique square root in characteristic 2, where Frobenius is bijective.
    pub fn sqrt_char2(&self, a: Elem) -> Option<Elem> {
        if self.0.p != 2 {
            return None;
        }
        Some(self.pow(a, (self.0.q / 2) as u64))
    }

    pub fn is_square(&self, a: Elem) -> bool {
        a == 0 || self.0.p == 2 || self.0.log[a as usize].is_multiple_of(2)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.k == other.0.k)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

impl Tables {
    fn build(p: u32, k: u32) -> Tables {
        let q = p.pow(k) as usize;
        let modulus = first_irreducible(p, k);

        let digit_add = |a: usize, b: usize| -> Elem {
            let (mut a, mut b, mut out, mut place) = (a, b, 0usize, 1usize);
            for _ in 0..k {
                let d = (a % p as usize + b % p as usize) % p as usize;
                out += d * place;
                place *= p as usize;
                a /= p as usize;
                b /= p as usize;
            }
            out as Elem
        };
        let add = if q <= TABLE_BOUND {
            let mut t = vec![0; q * q];
            for a in 0..q {
                for b in 0..q {
                    t[a * q + b] = digit_add(a, b);
                }
            }
            t
        } else {
            Vec::new()
        };
        let neg = (0..q)
            .map(|a| {
                let digits = to_digits(a, p, k);
                from_digits(digits.iter().map(|&d| (p - d) % p), p)
            })
            .collect::<Vec<_>>();

        let mul_slow = |a: usize, b: usize| poly_mul_mod(a, b, p, k, &modulus);
        let (generator, exp) = (1..q.max(2))
            .find_map(|g| {
                let g = if q == 2 { 1 } else { g };
                let mut powers = Vec::with_capacity(q - 1);
                let mut x = 1usize;
                for _ in 0..q - 1 {
                    powers.push(x as Elem);
                    x = mul_slow(x, g);
                    if x == 1 && powers.len() < q - 1 {
                        return None;
                    }
                }
                Some((g as Elem, powers))
            })
            .expect("multiplicative group of a finite field is cyclic");
        let mut log = vec![0u32; q];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        // doubled so mul can skip the modulo
        let exp = exp.iter().chain(exp.iter()).copied().collect::<Vec<_>>();

        let mut tables = Tables { p, k, q, modulus, add, neg, exp, log, generator, conj: None };
        if k.is_multiple_of(2) {
            let r = p.pow(k / 2) as u64;
            let conj = (0..q as Elem)
                .map(|a| {
                    if a == 0 {
                        0
                    } else {
                        let l = (tables.log[a as usize] as u64 * r) % (q as u64 - 1);
                        tables.exp[l as usize]
                    }
                })
                .collect();
            tables.conj = Some(conj);
        }
        tables
    }

    fn digit_add(&self, a: Elem, b: Elem) -> Elem {
        let da = to_digits(a as usize, self.p, self.k);
        let db = to_digits(b as usize, self.p, self.k);
        from_digits(da.iter().zip(&db).map(|(x, y)| (x + y) % self.p), self.p)
    }
}

/// An element bundled with its field, for checked arithmetic at API boundaries.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    index: Elem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Mul,
    Inv,
    Neg,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn index(&self) -> Elem {
        self.index
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.add(self.index, other.index)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.mul(self.index, other.index)))
    }

    pub fn neg(&self) -> FieldElement {
        self.field.element(self.field.neg(self.index))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.field.element(self.field.inv(self.index)?))
    }

    pub fn conjugate(&self) -> Result<FieldElement> {
        Ok(self.field.element(self.field.conj(self.index)?))
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self.index, self.field.order())
    }
}

/// Binary arithmetic dispatcher; `Inv` and `Neg` ignore the second operand.
pub fn arith(a: &FieldElement, b: &FieldElement, op: Op) -> Result<FieldElement> {
    match op {
        Op::Add => a.add(b),
        Op::Mul => a.mul(b),
        Op::Inv => a.inv(),
        Op::Neg => Ok(a.neg()),
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 || q > u32::MAX as u64 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))? as u32;
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p as u64) {
        r /= p as u64;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

fn to_digits(mut a: usize, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = (a % p as usize) as u32;
            a /= p as usize;
            d
        })
        .collect()
}

fn from_digits(digits: impl Iterator<Item = u32>, p: u32) -> Elem {
    let mut out = 0usize;
    let mut place = 1usize;
    for d in digits {
        out += d as usize * place;
        place *= p as usize;
    }
    out as Elem
}

fn poly_mul_mod(a: usize, b: usize, p: u32, k: u32, modulus: &[u32]) -> usize {
    let da = to_digits(a, p, k);
    let db = to_digits(b, p, k);
    let mut prod = vec![0u32; 2 * k as usize];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&mut prod, modulus, p);
    from_digits(prod.into_iter().take(k as usize), p) as usize
}

/// Reduces `a` in place modulo the monic polynomial `m` (both constant term first).
fn poly_rem(a: &mut [u32], m: &[u32], p: u32) {
    let dm = m.len() - 1;
    for i in (dm..a.len()).rev() {
        let c = a[i];
        if c == 0 {
            continue;
        }
        for (j, &mj) in m.iter().enumerate() {
            let idx = i - dm + j;
            a[idx] = (a[idx] + p - (c * mj) % p) % p;
        }
    }
}

fn monic_polys(p: u32, deg: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(deg);
    (0..count).map(move |n| {
        // n read in base p with the most significant digit as c_{deg-1}
        let mut coeffs = vec![0u32; deg as usize + 1];
        let mut r = n;
        for i in 0..deg as usize {
            coeffs[i] = (r % p as u64) as u32;
            r /= p as u64;
        }
        coeffs[deg as usize] = 1;
        coeffs
    })
}

/// Irreducibility by trial division over all monic polynomials of degree <= k/2.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let k = poly.len() as u32 - 1;
    (1..=k / 2).all(|d| {
        monic_polys(p, d).all(|div| {
            let mut r = poly.to_vec();
            poly_rem(&mut r, &div, p);
            r[..d as usize].iter().any(|&c| c != 0)
        })
    })
}

fn first_irreducible(p: u32, k: u32) -> Vec<u32> {
    monic_polys(p, k)
        .find(|m| is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}
