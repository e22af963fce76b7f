//! Arithmetic in a tower F_p ⊆ F_q ⊆ F_{q^m}.
//!
//! An element of F_{q^m} is a dense coefficient vector in the power basis of
//! the defining polynomial `gqm`; each coordinate is an element of F_q, itself a
//! coefficient vector over F_p in the power basis of `gq`. An [`Elem`] packs
//! that vector into one integer, base p, lowest digit first, so the F_q
//! coordinate `i` occupies digits `i*e .. (i+1)*e`. F_q sits inside F_{q^m} as
//! the elements with encoding below q.
//!
//! Multiplication goes through exponent/logarithm tables built once from the
//! polynomial reference arithmetic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{self, PrimeField, QuotientField, Scalars};

/// Largest supported field order q^m.
pub const MAX_ORDER: u64 = 1 << 20;

/// An element of F_{q^m} (or of F_q when below q), by canonical encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The arithmetic context F_p ⊆ F_q ⊆ F_{q^m}. Immutable once built.
#[derive(Clone)]
pub struct FieldTower {
    p: u32,
    e: u32,
    m: u32,
    q: u32,
    order: u32,
    gq: Vec<u32>,
    gqm: Vec<Elem>,
    exp: Vec<u32>,
    log: Vec<u32>,
    frob: Vec<u32>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("m", &self.m)
            .field("gq", &self.gq)
            .field("gqm", &self.gqm)
            .finish()
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.m == other.m && self.gq == other.gq && self.gqm == other.gqm
    }
}

impl Eq for FieldTower {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Polynomial reference arithmetic for F_{q^m} = F_q[x]/(gqm).
struct Reference {
    fq: QuotientField,
    q: u32,
    gqm: Vec<u32>,
}

impl Reference {
    fn m(&self) -> usize {
        self.gqm.len() - 1
    }

    fn coords(&self, mut a: u32) -> Vec<u32> {
        (0..self.m())
            .map(|_| {
                let c = a % self.q;
                a /= self.q;
                c
            })
            .collect()
    }

    fn encode(&self, coords: &[u32]) -> u32 {
        coords.iter().rev().fold(0, |acc, &c| acc * self.q + c)
    }
}

impl Scalars for Reference {
    fn size(&self) -> u64 {
        (self.q as u64).pow(self.m() as u32)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let s: Vec<u32> = self.coords(a).iter().zip(self.coords(b)).map(|(&x, y)| self.fq.add(x, y)).collect();
        self.encode(&s)
    }

    fn neg(&self, a: u32) -> u32 {
        let s: Vec<u32> = self.coords(a).into_iter().map(|x| self.fq.neg(x)).collect();
        self.encode(&s)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let prod = poly::mul(&self.fq, &poly::trim(self.coords(a)), &poly::trim(self.coords(b)));
        let mut r = poly::rem(&self.fq, &prod, &self.gqm);
        r.resize(self.m(), 0);
        self.encode(&r)
    }
}

impl FieldTower {
    /// Tower with the canonical defining polynomials.
    pub fn new(p: u32, e: u32, m: u32) -> Result<Self> {
        Self::with_polynomials(p, e, m, None, None)
    }

    /// Tower for F_q with q a prime power.
    pub fn for_order(q: u32, m: u32) -> Result<Self> {
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or_else(|| Error::InvalidField(format!("q = {q} is not a prime power")))?;
        let mut e = 0;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidField(format!("q = {q} is not a prime power")));
        }
        Self::new(p, e, m)
    }

    /// Builds and validates a tower. `gq` holds F_p coefficients and `gqm`
    /// holds F_q coefficients (canonical encodings), constant term first; when
    /// omitted, the smallest monic irreducible polynomial is used.
    pub fn with_polynomials(p: u32, e: u32, m: u32, gq: Option<Vec<u32>>, gqm: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        if e == 0 || m == 0 {
            return Err(Error::InvalidField("e and m must be positive".into()));
        }
        let q64 = (p as u64).checked_pow(e).filter(|&q| q <= MAX_ORDER);
        let order = q64.and_then(|q| q.checked_pow(m)).filter(|&n| n <= MAX_ORDER);
        let (Some(q64), Some(order)) = (q64, order) else {
            return Err(Error::InvalidField(format!("q^m = {p}^({e}*{m}) exceeds the supported order {MAX_ORDER}")));
        };
        let q = q64 as u32;
        let fp = PrimeField { p };

        let gq = match gq {
            Some(g) => {
                if g.len() != e as usize + 1 || *g.last().unwrap() != 1 || g.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidField(format!("gq must be a monic polynomial of degree {e} over F_{p}")));
                }
                if !poly::is_irreducible(&fp, &g) {
                    return Err(Error::Reducible { poly: g, field_size: p as u64 });
                }
                g
            }
            None => poly::smallest_irreducible(&fp, e as usize),
        };
        let fq = QuotientField { base: fp, modulus: gq.clone() };

        let gqm = match gqm {
            Some(g) => {
                if g.len() != m as usize + 1 || *g.last().unwrap() != 1 || g.iter().any(|&c| c >= q) {
                    return Err(Error::InvalidField(format!("gqm must be a monic polynomial of degree {m} over F_{q}")));
                }
                if !poly::is_irreducible(&fq, &g) {
                    return Err(Error::Reducible { poly: g, field_size: q as u64 });
                }
                g
            }
            None => poly::smallest_irreducible(&fq, m as usize),
        };

        let reference = Reference { fq, q, gqm: gqm.clone() };
        let (exp, log) = build_tables(&reference, order);
        let n1 = (order - 1).max(1) as usize;
        let frob = (0..order as usize)
            .map(|x| if x == 0 { 0 } else { exp[(log[x] as usize * q as usize) % n1] })
            .collect();

        Ok(FieldTower { p, e, m, q, order: order as u32, gq, gqm: gqm.into_iter().map(Elem).collect(), exp, log, frob })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    /// Size of the base field F_q.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Size of the extension field F_{q^m}.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn gq(&self) -> &[u32] {
        &self.gq
    }

    pub fn gqm(&self) -> &[Elem] {
        &self.gqm
    }

    pub fn is_valid(&self, x: Elem) -> bool {
        x.0 < self.order
    }

    pub fn in_base_field(&self, x: Elem) -> bool {
        x.0 < self.q
    }

    /// Checked constructor from a canonical encoding.
    pub fn elem(&self, index: u32) -> Result<Elem> {
        if index < self.order {
            Ok(Elem(index))
        } else {
            Err(Error::InvalidField(format!("element index {index} is out of range for a field of order {}", self.order)))
        }
    }

    /// All elements of F_{q^m} in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    /// All elements of F_q in canonical order.
    pub fn base_elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    /// The class of x in F_q[x]/(gqm); its powers form the canonical
    /// F_q-basis of F_{q^m}.
    pub fn generator(&self) -> Elem {
        if self.m > 1 {
            Elem(self.q)
        } else {
            self.neg(self.gqm[0])
        }
    }

    /// The power basis 1, x, ..., x^{m-1} of F_{q^m} over F_q.
    pub fn power_basis(&self) -> Vec<Elem> {
        (0..self.m).map(|i| Elem(self.q.pow(i))).collect()
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let p = self.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let p = self.p;
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        while x > 0 {
            let d = (p - x % p) % p;
            out += d * place;
            place *= p;
            x /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let n1 = self.order - 1;
        Ok(Elem(self.exp[((n1 - self.log[a.0 as usize]) % n1.max(1)) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^k for any integer k; negative exponents require a nonzero base.
    pub fn pow(&self, a: Elem, k: i64) -> Result<Elem> {
        if a.0 == 0 {
            return match k.cmp(&0) {
                std::cmp::Ordering::Less => Err(Error::ZeroInverse),
                std::cmp::Ordering::Equal => Ok(Elem::ONE),
                std::cmp::Ordering::Greater => Ok(Elem::ZERO),
            };
        }
        let n1 = (self.order - 1) as i64;
        let l = self.log[a.0 as usize] as i64;
        let idx = (l * k.rem_euclid(n1.max(1))).rem_euclid(n1.max(1));
        Ok(Elem(self.exp[idx as usize]))
    }

    /// x^{q^i}; the exponent is taken modulo m.
    pub fn frobenius(&self, x: Elem, i: i64) -> Elem {
        let steps = i.rem_euclid(self.m as i64);
        (0..steps).fold(x, |acc, _| Elem(self.frob[acc.0 as usize]))
    }

    /// Tr_{F_{q^m}/F_q}(x) = sum of x^{q^i} for i < m.
    pub fn trace(&self, x: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        let mut cur = x;
        for _ in 0..self.m {
            acc = self.add(acc, cur);
            cur = Elem(self.frob[cur.0 as usize]);
        }
        acc
    }

    /// F_q-coordinates of x in the power basis.
    pub fn coords(&self, x: Elem) -> Vec<Elem> {
        let mut v = x.0;
        (0..self.m)
            .map(|_| {
                let c = v % self.q;
                v /= self.q;
                Elem(c)
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[Elem]) -> Result<Elem> {
        if coords.len() != self.m as usize || coords.iter().any(|c| c.0 >= self.q) {
            return Err(Error::DimensionMismatch(format!("expected {} coordinates in F_{}", self.m, self.q)));
        }
        Ok(Elem(coords.iter().rev().fold(0, |acc, c| acc * self.q + c.0)))
    }

    /// F_p-digits of an F_q element, lowest first.
    pub fn fp_digits(&self, x: Elem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.e)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_fp_digits(&self, digits: &[u32]) -> Result<Elem> {
        if digits.len() > self.e as usize || digits.iter().any(|&d| d >= self.p) {
            return Err(Error::DimensionMismatch(format!("expected at most {} digits in F_{}", self.e, self.p)));
        }
        Ok(Elem(digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)))
    }

    /// Expands a vector of F_{q^m}^L into F_q^{mL}, coordinate by coordinate.
    pub fn flatten(&self, v: &[Elem]) -> Vec<Elem> {
        v.iter().flat_map(|&x| self.coords(x)).collect()
    }

    pub fn unflatten(&self, v: &[Elem]) -> Result<Vec<Elem>> {
        if !v.len().is_multiple_of(self.m as usize) {
            return Err(Error::DimensionMismatch(format!("length {} is not a multiple of m = {}", v.len(), self.m)));
        }
        v.chunks(self.m as usize).map(|c| self.from_coords(c)).collect()
    }

    /// Schoolbook product through the defining polynomials, bypassing the
    /// lookup tables.
    pub fn mul_reference(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.reference().mul(a.0, b.0))
    }

    fn reference(&self) -> Reference {
        Reference {
            fq: QuotientField { base: PrimeField { p: self.p }, modulus: self.gq.clone() },
            q: self.q,
            gqm: self.gqm.iter().map(|c| c.0).collect(),
        }
    }
}

fn build_tables(r: &Reference, order: u64) -> (Vec<u32>, Vec<u32>) {
    let n1 = order - 1;
    let gen = if n1 == 1 {
        1
    } else {
        let factors = prime_factors(n1);
        (2..order as u32)
            .find(|&g| factors.iter().all(|&l| r.pow(g, n1 / l) != 1))
            .expect("the multiplicative group is cyclic")
    };
    let mut exp = vec![0u32; 2 * n1 as usize];
    let mut log = vec![0u32; order as usize];
    let mut cur = 1u32;
    for i in 0..n1 as usize {
        exp[i] = cur;
        log[cur as usize] = i as u32;
        cur = r.mul(cur, gen);
    }
    for i in 0..n1 as usize {
        exp[i + n1 as usize] = exp[i];
    }
    (exp, log)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f8() -> FieldTower {
        FieldTower::new(2, 1, 3).unwrap()
    }

    #[test]
    fn canonical_polynomials() {
        assert_eq!(f8().gqm(), &[Elem(1), Elem(1), Elem(0), Elem(1)]);
        let f16 = FieldTower::new(2, 1, 4).unwrap();
        assert_eq!(f16.gqm(), &[Elem(1), Elem(1), Elem(0), Elem(0), Elem(1)]);
        let f2 = FieldTower::new(2, 1, 1).unwrap();
        assert_eq!(f2.order(), 2);
        assert_eq!(f2.frobenius(Elem(1), 1), Elem(1));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(FieldTower::new(4, 1, 2), Err(Error::InvalidField(_))));
        assert!(matches!(FieldTower::new(2, 1, 21), Err(Error::InvalidField(_))));
        assert!(matches!(
            FieldTower::with_polynomials(2, 1, 3, None, Some(vec![1, 0, 0, 1])),
            Err(Error::Reducible { .. })
        ));
        assert!(FieldTower::with_polynomials(2, 1, 3, None, Some(vec![1, 0, 1, 1])).is_ok());
        assert!(matches!(FieldTower::with_polynomials(2, 1, 3, None, Some(vec![1, 1, 1])), Err(Error::InvalidField(_))));
    }

    #[test]
    fn alpha_cubed() {
        let f = f8();
        let a = f.generator();
        let a2 = f.mul(a, a);
        assert_eq!(a2, Elem(4));
        // alpha^3 = alpha + 1
        assert_eq!(f.mul(a, a2), Elem(0b011));
    }

    #[test]
    fn beta_fourth() {
        let f = FieldTower::new(2, 1, 4).unwrap();
        let b = f.generator();
        assert_eq!(f.pow(b, 4).unwrap(), Elem(0b0011));
        assert_eq!(f.frobenius(b, 2), Elem(0b0011));
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        assert_eq!(f8().inv(Elem::ZERO), Err(Error::ZeroInverse));
    }

    #[test]
    fn trace_values() {
        let f = f8();
        assert_eq!(f.trace(Elem::ONE), Elem::ONE);
        assert_eq!(f.trace(f.generator()), Elem::ZERO);
    }

    #[test]
    fn flatten_basis_vector() {
        let f = f8();
        let v = [f.generator(), Elem::ZERO];
        assert_eq!(f.flatten(&v), vec![Elem(0), Elem(1), Elem(0), Elem(0), Elem(0), Elem(0)]);
        assert_eq!(f.unflatten(&f.flatten(&v)).unwrap(), v.to_vec());
    }

    #[test]
    fn odd_characteristic_and_proper_subfield() {
        // F_9 over F_3, then F_{4^2} over F_4.
        let f9 = FieldTower::new(3, 1, 2).unwrap();
        assert_eq!(f9.gqm(), &[Elem(1), Elem(0), Elem(1)]); // x^2 + 1
        let f16 = FieldTower::new(2, 2, 2).unwrap();
        assert_eq!(f16.q(), 4);
        assert_eq!(f16.gq(), &[1, 1, 1]);
        for t in [&f9, &f16] {
            for x in t.elements() {
                assert!(t.in_base_field(t.trace(x)));
            }
        }
    }
}
