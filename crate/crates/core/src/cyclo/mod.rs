//! Exact arithmetic in cyclotomic fields.
//!
//! Values are stored over the Zumbroich basis of `Q(ζ_n)` with `n` the
//! minimal conductor, so equal values have identical representations.

pub(crate) mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use parse::parse_cyclotomic;

pub type Rational = BigRational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclotomic {
    n: u64,
    coeffs: BTreeMap<u64, Rational>,
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

/// Rewrites a dense coefficient vector over `ζ_n` into the Zumbroich basis.
fn to_basis(n: u64, v: &mut [Rational]) {
    let r_all = factorize(n);
    for &(p, nu) in &r_all {
        let q = p.pow(nu);
        let r = n / q;
        let rinv = mod_inverse(r % q, q);
        let low = q / p;
        for e in 0..n {
            if v[e as usize].is_zero() {
                continue;
            }
            let a = (e % q) * rinv % q;
            if p == 2 {
                if (a / low) % 2 == 1 {
                    let c = std::mem::take(&mut v[e as usize]);
                    let t = ((e + n - (low * r) % n) % n) as usize;
                    v[t] -= c;
                }
            } else {
                let half = (low as i64 - 1) / 2;
                let mut l = (a % low) as i64;
                if l > half {
                    l -= low as i64;
                }
                let top = ((a as i64 - l) / low as i64).rem_euclid(p as i64);
                if top == 0 {
                    let c = std::mem::take(&mut v[e as usize]);
                    for j in 1..p {
                        let t = ((e + j * low * r) % n) as usize;
                        v[t] -= &c;
                    }
                }
            }
        }
    }
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { n: 1, coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !q.is_zero() {
            coeffs.insert(0, q);
        }
        Cyclotomic { n: 1, coeffs }
    }

    pub fn from_int(i: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(i)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `ζ_n = exp(2πi/n)`.
    pub fn e(n: u64) -> Self {
        Self::root(n, 1)
    }

    /// `ζ_n^k`.
    pub fn root(n: u64, k: i64) -> Self {
        assert!(n > 0, "root of unity order must be positive");
        let e = k.rem_euclid(n as i64) as u64;
        Self::from_terms(n, [(e, Rational::one())])
    }

    /// Canonical form of `Σ c_e ζ_n^e` for arbitrary exponents.
    pub fn from_terms<I: IntoIterator<Item = (u64, Rational)>>(n: u64, terms: I) -> Self {
        let mut v = vec![Rational::zero(); n as usize];
        for (e, c) in terms {
            v[(e % n) as usize] += c;
        }
        Self::from_dense(n, v)
    }

    fn from_dense(n: u64, mut v: Vec<Rational>) -> Self {
        if n % 4 == 2 {
            let m = n / 2;
            let mut w = vec![Rational::zero(); m as usize];
            let half = m.div_ceil(2);
            for (e, c) in v.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let t = ((e as u64 * half) % m) as usize;
                if e % 2 == 0 {
                    w[t] += c;
                } else {
                    w[t] -= c;
                }
            }
            return Self::from_dense(m, w);
        }
        to_basis(n, &mut v);
        let coeffs: BTreeMap<u64, Rational> =
            v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e as u64, c)).collect();
        Self::reduce(n, coeffs)
    }

    fn reduce(n: u64, coeffs: BTreeMap<u64, Rational>) -> Self {
        if coeffs.is_empty() {
            return Self::zero();
        }
        for (p, nu) in factorize(n) {
            if nu >= 2 {
                if coeffs.keys().all(|e| e % p == 0) {
                    let m = n / p;
                    return Self::from_terms(m, coeffs.into_iter().map(|(e, c)| (e / p, c)));
                }
            } else {
                let m = n / p;
                let minv = mod_inverse(m % p, p);
                let pinv = mod_inverse(p % m, m);
                let mut groups: BTreeMap<u64, Vec<(u64, &Rational)>> = BTreeMap::new();
                for (e, c) in &coeffs {
                    let a = (e % p) * minv % p;
                    let b = (e % m) * pinv % m;
                    groups.entry(b).or_default().push((a, c));
                }
                let descends = groups.values().all(|g| g.len() as u64 == p - 1 && g.iter().all(|(_, c)| *c == g[0].1));
                if descends {
                    let terms: Vec<(u64, Rational)> = groups.iter().map(|(b, g)| (*b, -g[0].1.clone())).collect();
                    return Self::from_terms(m, terms);
                }
            }
        }
        Cyclotomic { n, coeffs }
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// Basis exponents and their coefficients.
    pub fn coefficients(&self) -> &BTreeMap<u64, Rational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.n != 1 {
            return None;
        }
        Some(self.coeffs.get(&0).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|i| i.to_i64())
    }

    fn dense(&self, big: u64) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); big as usize];
        let s = big / self.n;
        for (e, c) in &self.coeffs {
            v[(e * s) as usize] += c;
        }
        v
    }

    fn combine(a: &Self, b: &Self, sign: bool) -> Self {
        if a.is_zero() {
            return if sign { b.clone() } else { -b.clone() };
        }
        if b.is_zero() {
            return a.clone();
        }
        let l = a.n.lcm(&b.n);
        let mut v = a.dense(l);
        let s = l / b.n;
        for (e, c) in &b.coeffs {
            if sign {
                v[(e * s) as usize] += c;
            } else {
                v[(e * s) as usize] -= c;
            }
        }
        let nonzero: BTreeMap<u64, Rational> =
            v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e as u64, c)).collect();
        if l == a.n && l == b.n {
            Self::reduce(l, nonzero)
        } else {
            Self::from_terms(l, nonzero)
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Cyclotomic { n: self.n, coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * q)).collect() }
    }

    fn product(a: &Self, b: &Self) -> Self {
        if let Some(q) = a.as_rational() {
            return b.scale(&q);
        }
        if let Some(q) = b.as_rational() {
            return a.scale(&q);
        }
        let l = a.n.lcm(&b.n);
        let (sa, sb) = (l / a.n, l / b.n);
        let mut v = vec![Rational::zero(); l as usize];
        for (ea, ca) in &a.coeffs {
            for (eb, cb) in &b.coeffs {
                v[((ea * sa + eb * sb) % l) as usize] += ca * cb;
            }
        }
        Self::from_dense(l, v)
    }

    /// Applies `ζ_n ↦ ζ_n^k`.
    pub fn galois(&self, k: i64) -> Result<Self> {
        let n = self.n as i64;
        if k.gcd(&n) != 1 {
            return Err(Error::NotCoprime { k, n: self.n });
        }
        let k = k.rem_euclid(n) as u64;
        Ok(Self::from_terms(self.n, self.coeffs.iter().map(|(e, c)| (e * k % self.n, c.clone()))))
    }

    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is a unit")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(q.recip()));
        }
        let mut others = Self::one();
        for k in 2..self.n as i64 {
            if k.gcd(&(self.n as i64)) == 1 {
                others = &others * &self.galois(k)?;
            }
        }
        let norm = (&others * self).as_rational().expect("norm is rational");
        Ok(others.scale(&norm.recip()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Order `m` if the value is an `m`-th root of unity.
    pub fn root_of_unity_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let big = 2u64.lcm(&self.n);
        if !self.pow(big as i64).ok()?.is_one() {
            return None;
        }
        let mut m = big;
        for (p, _) in factorize(big) {
            while m.is_multiple_of(p) && self.pow((m / p) as i64).ok()?.is_one() {
                m /= p;
            }
        }
        Some(m)
    }
}

impl From<i64> for Cyclotomic {
    fn from(i: i64) -> Self {
        Self::from_int(i)
    }
}

impl From<Rational> for Cyclotomic {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        Cyclotomic::combine(self, rhs, true)
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        Cyclotomic::combine(self, rhs, false)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        Cyclotomic::product(self, rhs)
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(mut self) -> Cyclotomic {
        for c in self.coeffs.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -self.clone()
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Cyclotomic {
        iter.fold(Cyclotomic::zero(), |a, b| &a + &b)
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &Rational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.coeffs.iter().enumerate() {
            if k > 0 && c.is_positive() {
                write!(f, "+")?;
            }
            if *e == 0 {
                write_rational(f, c)?;
                continue;
            }
            if c.is_one() {
            } else if *c == -Rational::one() {
                write!(f, "-")?;
            } else {
                write_rational(f, c)?;
                write!(f, "*")?;
            }
            write!(f, "E({})", self.n)?;
            if *e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Cyclotomic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_cyclotomic(s)
    }
}

impl serde::Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Cyclotomic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_cyclotomic(&s).map_err(serde::de::Error::custom)
    }
}

/// Basis exponents of `Q(ζ_n)` in the canonical form (`n ≢ 2 mod 4`).
pub fn zumbroich_basis(n: u64) -> Vec<u64> {
    assert!(n % 4 != 2, "conductor {n} is not reduced");
    (0..n)
        .filter(|&e| {
            let mut v = vec![Rational::zero(); n as usize];
            v[e as usize] = Rational::one();
            to_basis(n, &mut v);
            v.iter().enumerate().all(|(k, c)| if k as u64 == e { c.is_one() } else { c.is_zero() })
        })
        .collect()
}
