//! Dense univariate polynomials over small fields, used to validate and pick
//! the defining polynomials of a tower and as the reference multiplication
//! path from which the lookup tables are built.
//!
//! Polynomials are coefficient vectors, constant term first, with no trailing
//! zeros (the zero polynomial is the empty vector).

/// Arithmetic on field elements stored as canonical integer encodings.
pub(crate) trait Scalars {
    fn size(&self) -> u64;
    fn add(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    fn pow(&self, a: u32, mut exp: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element via Fermat.
    fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.pow(a, self.size() - 2)
    }
}

/// The prime field F_p.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PrimeField {
    pub p: u32,
}

impl Scalars for PrimeField {
    fn size(&self) -> u64 {
        self.p as u64
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
}

/// F_p[y]/(g) with elements encoded as base-p integers, constant digit least
/// significant.
#[derive(Clone, Debug)]
pub(crate) struct QuotientField {
    pub base: PrimeField,
    pub modulus: Vec<u32>,
}

impl QuotientField {
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn digits(&self, mut a: u32) -> Vec<u32> {
        let p = self.base.p;
        (0..self.degree())
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    pub fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.base.p + d)
    }
}

impl Scalars for QuotientField {
    fn size(&self) -> u64 {
        (self.base.p as u64).pow(self.degree() as u32)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| self.base.add(x, y)).collect();
        self.encode(&sum)
    }

    fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = self.digits(a).into_iter().map(|x| self.base.neg(x)).collect();
        self.encode(&d)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let prod = mul(&self.base, &trim(self.digits(a)), &trim(self.digits(b)));
        let mut r = rem(&self.base, &prod, &self.modulus);
        r.resize(self.degree(), 0);
        self.encode(&r)
    }
}

pub(crate) fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn sub<F: Scalars>(f: &F, a: &[u32], b: &[u32]) -> Vec<u32> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            f.sub(x, y)
        })
        .collect();
    trim(out)
}

pub(crate) fn mul<F: Scalars>(f: &F, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
    }
    trim(out)
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub(crate) fn rem<F: Scalars>(f: &F, a: &[u32], m: &[u32]) -> Vec<u32> {
    let dm = degree(m).expect("division by the zero polynomial");
    let lead_inv = f.inv(m[dm]);
    let mut r = trim(a.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        let shift = dr - dm;
        for (i, &mc) in m.iter().enumerate().take(dm + 1) {
            if mc != 0 {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, mc));
            }
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mulmod<F: Scalars>(f: &F, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    rem(f, &mul(f, a, b), m)
}

pub(crate) fn powmod<F: Scalars>(f: &F, a: &[u32], mut exp: u64, m: &[u32]) -> Vec<u32> {
    let mut base = rem(f, a, m);
    let mut acc = rem(f, &[1], m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        base = mulmod(f, &base, &base, m);
        exp >>= 1;
    }
    acc
}

pub(crate) fn gcd<F: Scalars>(f: &F, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    x
}

/// Ben-Or irreducibility test: `g` of degree d is irreducible iff
/// gcd(x^{Q^i} - x, g) = 1 for every 1 <= i <= d/2.
pub(crate) fn is_irreducible<F: Scalars>(f: &F, g: &[u32]) -> bool {
    let Some(d) = degree(g) else {
        return false;
    };
    if d == 0 {
        return false;
    }
    let x = [0, 1];
    let mut h = rem(f, &x, g);
    for _ in 0..d / 2 {
        h = powmod(f, &h, f.size(), g);
        let diff = sub(f, &h, &x);
        let common = gcd(f, &diff, g);
        if degree(&common).unwrap_or(0) > 0 {
            return false;
        }
    }
    true
}

/// The monic irreducible polynomial of degree `d` whose coefficient vector,
/// read as a base-Q number with the constant term least significant, is
/// smallest.
pub(crate) fn smallest_irreducible<F: Scalars>(f: &F, d: usize) -> Vec<u32> {
    let q = f.size();
    let total = q.pow(d as u32);
    for code in 0..total {
        let mut coeffs = Vec::with_capacity(d + 1);
        let mut c = code;
        for _ in 0..d {
            coeffs.push((c % q) as u32);
            c /= q;
        }
        coeffs.push(1);
        if is_irreducible(f, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
