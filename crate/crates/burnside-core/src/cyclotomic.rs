//! Exact arithmetic in the cyclotomic fields Q(ζ_N).
//!
//! A [`Cyc`] stores its conductor `N` and a dense coefficient vector of
//! length φ(N) in the power basis 1, ζ, …, ζ^{φ(N)−1}, i.e. the remainder
//! modulo the N-th cyclotomic polynomial. That remainder is unique, so
//! equality is coefficient equality once both sides share a conductor.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

/// Exact rational scalar.
pub type Q = BigRational;

/// Euler's totient.
pub fn totient(n: u32) -> u32 {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

/// Coefficients (low degree first) of the n-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quo = vec![0i64; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let t = rem[k + dd];
        quo[k] = t;
        if t != 0 {
            for (i, c) in den.iter().enumerate() {
                rem[k + i] -= t * c;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quo
}

/// ζ_N^k for k in 0..N written in the power basis of length φ(N).
struct PowerTable {
    n: u32,
    d: usize,
    powers: Vec<Vec<i64>>,
}

impl PowerTable {
    fn build(n: u32) -> Self {
        let phi = cyclotomic_polynomial(n);
        let d = phi.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; d];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x, then reduce the x^d term with the monic relation
            let top = cur[d - 1];
            let mut next = vec![0i64; d];
            next[1..d].copy_from_slice(&cur[..d - 1]);
            if top != 0 {
                for i in 0..d {
                    next[i] -= top * phi[i];
                }
            }
            cur = next;
        }
        PowerTable { n, d, powers }
    }
}

thread_local! {
    static TABLES: RefCell<HashMap<u32, Rc<PowerTable>>> = RefCell::new(HashMap::new());
}

fn table(n: u32) -> Rc<PowerTable> {
    TABLES.with(|t| {
        t.borrow_mut()
            .entry(n)
            .or_insert_with(|| Rc::new(PowerTable::build(n)))
            .clone()
    })
}

fn lcm(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

/// An element of Q(ζ_N) in canonical reduced form.
#[derive(Clone, Debug)]
pub struct Cyc {
    n: u32,
    c: Vec<Q>,
}

impl Cyc {
    pub fn from_rational(q: Q) -> Self {
        Cyc { n: 1, c: vec![q] }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(Q::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(Q::new(BigInt::from(num), BigInt::from(den)))
    }

    /// ζ_N^k.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let kk = k.rem_euclid(n as i64) as usize;
        let t = table(n);
        let c = t.powers[kk].iter().map(|&v| Q::from_integer(v.into())).collect();
        Cyc { n, c }.normalized()
    }

    /// Σ_k counts[k]·ζ_N^k, with `counts.len()` equal to N.
    pub fn from_exponent_counts(n: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), n as usize);
        let t = table(n);
        let mut acc = vec![0i64; t.d];
        for (k, &m) in counts.iter().enumerate() {
            if m != 0 {
                for (a, p) in acc.iter_mut().zip(&t.powers[k]) {
                    *a += m * p;
                }
            }
        }
        Cyc {
            n,
            c: acc.into_iter().map(|v| Q::from_integer(v.into())).collect(),
        }
        .normalized()
    }

    /// Reduces an arbitrary vector Σ raw[i]·ζ_N^i into canonical form.
    pub fn from_raw(n: u32, raw: &[Q]) -> Self {
        let t = table(n);
        let mut acc = vec![Q::zero(); t.d];
        for (i, r) in raw.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            for (a, p) in acc.iter_mut().zip(&t.powers[i % n as usize]) {
                if *p != 0 {
                    *a += r * Q::from_integer((*p).into());
                }
            }
        }
        Cyc { n, c: acc }.normalized()
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Canonical coefficients in the power basis of the stored conductor.
    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn to_rational(&self) -> Option<Q> {
        self.is_rational().then(|| self.c[0].clone())
    }

    fn normalized(mut self) -> Self {
        if self.c.len() <= 1 || self.c[1..].iter().all(Zero::is_zero) {
            self.c.truncate(1);
            if self.c.is_empty() {
                self.c.push(Q::zero());
            }
            self.n = 1;
        }
        self
    }

    /// The same value over the smallest conductor that contains it. Display
    /// and serialization use this form so equal values print identically.
    pub fn minimal_form(&self) -> Cyc {
        if self.n <= 2 {
            return self.clone();
        }
        let target = crate::exactla::Matrix::from_rows(self.c.len(), vec![self.c.clone()]);
        for m in (3..self.n).filter(|m| self.n % m == 0 && m % 4 != 2) {
            let d = totient(m) as usize;
            let rows = (0..d)
                .map(|j| {
                    let mut c = vec![Q::zero(); d];
                    c[j] = Q::one();
                    Cyc { n: m, c }.lifted(self.n)
                })
                .collect();
            let basis = crate::exactla::Matrix::from_rows(self.c.len(), rows);
            if let Ok(coords) = target.coordinates_in(&basis) {
                return Cyc { n: m, c: coords.row(0).to_vec() };
            }
        }
        self.clone()
    }

    /// Same value written over conductor `m`, a multiple of the current one.
    fn lifted(&self, m: u32) -> Vec<Q> {
        if m == self.n {
            return self.c.clone();
        }
        debug_assert_eq!(m % self.n, 0);
        let step = (m / self.n) as usize;
        let t = table(m);
        let mut acc = vec![Q::zero(); t.d];
        for (i, ci) in self.c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (a, p) in acc.iter_mut().zip(&t.powers[(i * step) % m as usize]) {
                if *p != 0 {
                    *a += ci * Q::from_integer((*p).into());
                }
            }
        }
        acc
    }

    fn aligned(&self, other: &Cyc) -> (u32, Vec<Q>, Vec<Q>) {
        if self.n == other.n {
            return (self.n, self.c.clone(), other.c.clone());
        }
        let m = lcm(self.n, other.n);
        (m, self.lifted(m), other.lifted(m))
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Cyc {
        if self.n == 1 {
            return self.clone();
        }
        let n = self.n as usize;
        let mut raw = vec![Q::zero(); n];
        for (i, ci) in self.c.iter().enumerate() {
            raw[(n - i) % n] = ci.clone();
        }
        Cyc::from_raw(self.n, &raw)
    }

    /// Multiplicative inverse; `None` on zero.
    pub fn inv(&self) -> Option<Cyc> {
        if self.is_zero() {
            return None;
        }
        if self.n == 1 {
            return Some(Cyc::from_rational(self.c[0].recip()));
        }
        // solve (self · x) = 1 in the power basis
        let t = table(self.n);
        let d = t.d;
        let mut cols: Vec<Vec<Q>> = Vec::with_capacity(d);
        for j in 0..d {
            let mut raw = vec![Q::zero(); 2 * d];
            for (i, ci) in self.c.iter().enumerate() {
                raw[i + j] = ci.clone();
            }
            cols.push(reduce_raw(&t, &raw));
        }
        // augmented rows: a[i] = [M_{i,0..d} | rhs_i]
        let mut a: Vec<Vec<Q>> = (0..d)
            .map(|i| {
                let mut row: Vec<Q> = (0..d).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { Q::one() } else { Q::zero() });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            let pinv = a[col][col].recip();
            for v in a[col].iter_mut() {
                *v *= &pinv;
            }
            for r in 0..d {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    let prow = a[col].clone();
                    for (x, y) in a[r].iter_mut().zip(prow.iter()) {
                        *x -= &f * y;
                    }
                }
            }
        }
        let x: Vec<Q> = a.into_iter().map(|row| row[d].clone()).collect();
        Some(Cyc { n: self.n, c: x }.normalized())
    }

    /// Floating approximation for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, ci) in self.c.iter().enumerate() {
            let v = ci.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * i as f64 / self.n as f64;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }

    /// Multiplication by ζ_m^k, cheaper than a general product.
    pub fn mul_root(&self, m: u32, k: i64) -> Cyc {
        self.clone() * Cyc::root_of_unity(m, k)
    }

    pub fn mul_ref(&self, o: &Cyc) -> Cyc {
        if self.n == 1 && o.n == 1 {
            return Cyc::from_rational(&self.c[0] * &o.c[0]);
        }
        if self.is_zero() || o.is_zero() {
            return Cyc::zero();
        }
        if self.n == 1 {
            return o.scale(&self.c[0]);
        }
        if o.n == 1 {
            return self.scale(&o.c[0]);
        }
        let (n, a, b) = self.aligned(o);
        let t = table(n);
        let mut raw = vec![Q::zero(); 2 * t.d];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    raw[i + j] += ai * bj;
                }
            }
        }
        Cyc { n, c: reduce_raw(&t, &raw) }.normalized()
    }

    pub fn add_ref(&self, o: &Cyc) -> Cyc {
        if self.n == o.n {
            let c = self.c.iter().zip(&o.c).map(|(x, y)| x + y).collect();
            return Cyc { n: self.n, c }.normalized();
        }
        let (n, mut a, b) = self.aligned(o);
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        Cyc { n, c: a }.normalized()
    }

    pub fn scale(&self, q: &Q) -> Cyc {
        if q.is_zero() {
            return Cyc::zero();
        }
        Cyc {
            n: self.n,
            c: self.c.iter().map(|x| x * q).collect(),
        }
    }
}

fn reduce_raw(t: &PowerTable, raw: &[Q]) -> Vec<Q> {
    let mut acc: Vec<Q> = raw[..t.d.min(raw.len())].to_vec();
    acc.resize(t.d, Q::zero());
    for (k, r) in raw.iter().enumerate().skip(t.d) {
        if r.is_zero() {
            continue;
        }
        for (a, p) in acc.iter_mut().zip(&t.powers[k % t.n as usize]) {
            if *p != 0 {
                *a += r * Q::from_integer((*p).into());
            }
        }
    }
    acc
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.c == other.c;
        }
        let (_, a, b) = self.aligned(other);
        a == b
    }
}

impl Eq for Cyc {}

impl Zero for Cyc {
    fn zero() -> Self {
        Cyc::from_rational(Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.n == 1 && self.c[0].is_zero()
    }
}

impl One for Cyc {
    fn one() -> Self {
        Cyc::from_rational(Q::one())
    }
}

impl Add for Cyc {
    type Output = Cyc;
    fn add(self, o: Cyc) -> Cyc {
        self.add_ref(&o)
    }
}

impl AddAssign<&Cyc> for Cyc {
    fn add_assign(&mut self, o: &Cyc) {
        if self.n == o.n {
            for (x, y) in self.c.iter_mut().zip(&o.c) {
                *x += y;
            }
            let tmp = std::mem::replace(self, Cyc::zero());
            *self = tmp.normalized();
        } else {
            *self = self.add_ref(o);
        }
    }
}

impl Sub for Cyc {
    type Output = Cyc;
    fn sub(self, o: Cyc) -> Cyc {
        self.add_ref(&(-o))
    }
}

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc {
            n: self.n,
            c: self.c.into_iter().map(|x| -x).collect(),
        }
    }
}

impl Mul for Cyc {
    type Output = Cyc;
    fn mul(self, o: Cyc) -> Cyc {
        self.mul_ref(&o)
    }
}

impl std::ops::Div for Cyc {
    type Output = Cyc;
    fn div(self, o: Cyc) -> Cyc {
        self.mul_ref(&o.inv().expect("division by zero"))
    }
}

impl From<Q> for Cyc {
    fn from(q: Q) -> Self {
        Cyc::from_rational(q)
    }
}

fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let v = self.minimal_form();
        let mut first = true;
        for (i, ci) in v.c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let mag = ci.abs();
            if first {
                if ci.is_negative() {
                    write!(f, "-")?;
                }
            } else if ci.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", fmt_q(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", fmt_q(&mag))?;
                }
                if i == 1 {
                    write!(f, "z({})", v.n)?;
                } else {
                    write!(f, "z({})^{}", v.n, i)?;
                }
            }
        }
        Ok(())
    }
}

fn int_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::from(v.to_string()),
    }
}

/// Exact rational as a `[num, den]` JSON pair.
pub fn rational_json(q: &Q) -> serde_json::Value {
    serde_json::Value::Array(vec![int_json(q.numer()), int_json(q.denom())])
}

fn json_int(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Serialize for Cyc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.minimal_form();
        let mut st = s.serialize_struct("Cyc", 2)?;
        st.serialize_field("N", &v.n)?;
        let coeffs: Vec<serde_json::Value> = v.c.iter().map(rational_json).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Cyc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "N")]
            n: u32,
            coeffs: Vec<(serde_json::Value, serde_json::Value)>,
        }
        let raw = Raw::deserialize(d)?;
        if raw.n == 0 {
            return Err(de::Error::custom("conductor must be positive"));
        }
        let mut c = Vec::with_capacity(raw.coeffs.len());
        for (nu, de_) in &raw.coeffs {
            let (nu, de_) = match (json_int(nu), json_int(de_)) {
                (Some(a), Some(b)) if !b.is_zero() => (a, b),
                _ => return Err(de::Error::custom("bad rational coefficient")),
            };
            c.push(Q::new(nu, de_));
        }
        Ok(Cyc::from_raw(raw.n, &c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Cyc {
        Cyc::root_of_unity(n, k)
    }

    #[test]
    fn polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(totient(16), 8);
        assert_eq!(totient(27), 18);
    }

    #[test]
    fn minimal_conductor_display() {
        let a = z(3, 1);
        let b = z(6, 1) - Cyc::one();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
        assert_eq!(b.minimal_form().conductor(), 3);
        let i = z(8, 2);
        assert_eq!((z(24, 6) + Cyc::zero()).to_string(), i.to_string());
        assert_eq!(z(12, 1).minimal_form().conductor(), 12);
    }

    #[test]
    fn roots() {
        assert_eq!(z(1, 0), Cyc::one());
        assert_eq!(z(2, 1), Cyc::from_int(-1));
        assert_eq!(z(3, 1) + z(3, 2), Cyc::from_int(-1));
        assert_eq!(z(6, 1).conj(), z(6, 5));
        assert_eq!(z(4, 1), z(8, 2));
        assert_eq!(z(12, 4) * z(4, 1), z(12, 7));
    }

    #[test]
    fn hand_products() {
        let i = z(4, 1);
        let a = Cyc::one() + i.clone();
        let b = Cyc::one() - i;
        assert_eq!(a * b, Cyc::from_int(2));
        let x = Cyc::from_int(2) + z(5, 1);
        assert_eq!(x.clone() * x.inv().unwrap(), Cyc::one());
    }

    #[test]
    fn prime_root_sums_vanish() {
        for p in [2u32, 3, 5, 7] {
            let s = (0..p as i64).fold(Cyc::zero(), |acc, k| acc + z(p, k));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn complex_values() {
        let (re, im) = z(4, 1).to_complex();
        assert!(re.abs() < 1e-12 && (im - 1.0).abs() < 1e-12);
        let (re, im) = (Cyc::from_int(3) * z(3, 1)).to_complex();
        assert!((re + 1.5).abs() < 1e-12 && (im - 2.598076211).abs() < 1e-8);
    }

    #[test]
    fn display_and_json() {
        let x = Cyc::from_int(2) - z(3, 1).scale(&Q::new(1.into(), 2.into()));
        assert_eq!(x.to_string(), "2 - 1/2*z(3)");
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"N":3,"coeffs":[[2,1],[-1,2]]}"#);
        let y: Cyc = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn descent_only_to_rationals() {
        let w = z(3, 1) + z(3, 2);
        assert!(w.is_rational());
        let v = z(8, 1) * z(8, 1);
        assert_eq!(v.conductor(), 8);
        assert_eq!(v, z(4, 1));
    }
}
