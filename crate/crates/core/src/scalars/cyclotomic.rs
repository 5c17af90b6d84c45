//! Elements of cyclotomic fields Q(zeta_N), stored in the power basis of
//! zeta_N reduced modulo the N-th cyclotomic polynomial.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use super::ScalarError;

/// Exact rational number with arbitrary-precision integer parts.
pub type Rat = BigRational;

/// Shorthand for `p/q` as a [`Rat`].
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Shorthand for the integer `p` as a [`Rat`].
pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Exact division of integer polynomials, `num / den` with `den` monic.
/// Coefficients ascending; panics if the division is not exact.
fn div_exact_monic(mut num: Vec<BigInt>, den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    assert!(num.len() > dd);
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    while num.len() > dd {
        let lead = num.pop().unwrap();
        let k = num.len() - dd;
        if !lead.is_zero() {
            for i in 0..dd {
                let v = &lead * &den[i];
                num[k + i] -= v;
            }
        }
        quot[k] = lead;
    }
    assert!(num.iter().all(Zero::is_zero), "nonexact polynomial division");
    quot
}

/// Coefficients of the N-th cyclotomic polynomial, ascending degree, monic.
/// Computed as (x^N - 1) / prod of lower cyclotomics, and memoized.
fn cyclotomic_poly(n: u32) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return Arc::clone(p);
    }
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d < n {
            let den = cyclotomic_poly(d);
            num = div_exact_monic(num, &den);
        }
    }
    let arc = Arc::new(num);
    cache.lock().unwrap().insert(n, Arc::clone(&arc));
    arc
}

/// Reduce a dense coefficient vector (powers of zeta_n) modulo the n-th
/// cyclotomic polynomial, returning the sparse canonical coordinates.
fn reduce_mod_cyclotomic(n: u32, mut v: Vec<Rat>) -> BTreeMap<u32, Rat> {
    let phi = euler_phi(n) as usize;
    let c = cyclotomic_poly(n);
    while v.len() > phi {
        let lead = v.pop().unwrap();
        if lead.is_zero() {
            continue;
        }
        let shift = v.len() - phi;
        for (k, ck) in c.iter().enumerate().take(phi) {
            if !ck.is_zero() {
                let delta = &lead * Rat::from_integer(ck.clone());
                v[shift + k] -= delta;
            }
        }
    }
    v.into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as u32, c))
        .collect()
}

/// An element of the cyclotomic field Q(zeta_N).
///
/// Canonical form: coordinates in the power basis `1, zeta, ..,
/// zeta^(phi(N)-1)`, no stored zeros, and conductor collapsed to 1 whenever
/// the element is rational. Equality across different conductors is decided
/// by promotion to the least common conductor.
#[derive(Clone, Debug)]
pub struct CycScalar {
    conductor: u32,
    coords: BTreeMap<u32, Rat>,
}

impl CycScalar {
    fn canonical(conductor: u32, dense: Vec<Rat>) -> Self {
        let coords = reduce_mod_cyclotomic(conductor, dense);
        if coords.keys().all(|&k| k == 0) {
            // Rational values live at conductor 1.
            return CycScalar { conductor: 1, coords };
        }
        CycScalar { conductor, coords }
    }

    pub fn zero() -> Self {
        CycScalar { conductor: 1, coords: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        let mut coords = BTreeMap::new();
        if !r.is_zero() {
            coords.insert(0, r);
        }
        CycScalar { conductor: 1, coords }
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rat(rat_int(k))
    }

    /// The primitive N-th root of unity zeta_N.
    pub fn zeta(n: u32) -> Self {
        assert!(n >= 1);
        Self::zeta_pow(n, 1)
    }

    /// zeta_N^k for any integer k (negative powers wrap around).
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as usize;
        let mut dense = vec![Rat::zero(); k + 1];
        dense[k] = Rat::one();
        Self::canonical(n, dense)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Sparse power-basis coordinates (canonical form).
    pub fn coords(&self) -> impl Iterator<Item = (u32, &Rat)> {
        self.coords.iter().map(|(&k, v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|r| r.is_one()).unwrap_or(false)
    }

    /// Returns the value as a rational if it lies in Q.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coords.is_empty() {
            return Some(Rat::zero());
        }
        if self.coords.len() == 1 {
            if let Some(c) = self.coords.get(&0) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Dense power-basis coordinates after promotion to conductor `m`
    /// (requires `self.conductor | m`).
    fn promoted_dense(&self, m: u32) -> Vec<Rat> {
        debug_assert_eq!(m % self.conductor, 0);
        let step = (m / self.conductor) as usize;
        let mut dense = vec![Rat::zero(); euler_phi(m) as usize];
        let mut spill: Vec<(usize, Rat)> = Vec::new();
        for (&k, c) in &self.coords {
            let idx = k as usize * step;
            if idx < dense.len() {
                dense[idx] += c.clone();
            } else {
                spill.push((idx, c.clone()));
            }
        }
        if !spill.is_empty() {
            let top = spill.iter().map(|(i, _)| *i).max().unwrap();
            let mut full = dense;
            full.resize(top + 1, Rat::zero());
            for (i, c) in spill {
                full[i] += c;
            }
            let reduced = reduce_mod_cyclotomic(m, full);
            let mut dense = vec![Rat::zero(); euler_phi(m) as usize];
            for (k, c) in reduced {
                dense[k as usize] = c;
            }
            return dense;
        }
        dense
    }

    /// The same value represented at conductor `lcm(self.conductor, m)`.
    pub fn promote(&self, m: u32) -> CycScalar {
        let target = lcm_u32(self.conductor, m);
        CycScalar::canonical(target, self.promoted_dense(target))
    }

    fn binop(&self, other: &CycScalar, f: impl Fn(Vec<Rat>, Vec<Rat>) -> Vec<Rat>) -> CycScalar {
        let m = lcm_u32(self.conductor, other.conductor);
        let a = self.promoted_dense(m);
        let b = other.promoted_dense(m);
        CycScalar::canonical(m, f(a, b))
    }

    pub fn inv(&self) -> Result<CycScalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(CycScalar::from_rat(Rat::one() / r));
        }
        let n = self.conductor;
        let a = self.promoted_dense(n);
        let modulus: Vec<Rat> = cyclotomic_poly(n)
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        let (g, s) = poly_half_ext_gcd(a, modulus);
        // The cyclotomic polynomial is irreducible over Q, so the gcd with a
        // nonzero residue is a nonzero constant.
        assert_eq!(poly_deg(&g), Some(0), "cyclotomic modulus not coprime");
        let scale = Rat::one() / g[0].clone();
        let dense = s.into_iter().map(|c| c * &scale).collect();
        Ok(CycScalar::canonical(n, dense))
    }

    pub fn pow(&self, k: i64) -> Result<CycScalar, ScalarError> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut result = CycScalar::one();
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        Ok(result)
    }

    /// Multiplicative order, if it is a root of unity found within `limit`.
    pub fn mult_order(&self, limit: u32) -> Option<u32> {
        let mut p = self.clone();
        for k in 1..=limit {
            if p.is_one() {
                return Some(k);
            }
            p = &p * self;
        }
        None
    }
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

fn poly_deg(p: &[Rat]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

/// Half-extended Euclid over Q[x]: returns (g, s) with g = gcd(a, m) and
/// s * a = g (mod m).
fn poly_half_ext_gcd(a: Vec<Rat>, m: Vec<Rat>) -> (Vec<Rat>, Vec<Rat>) {
    let mut r0 = poly_trim(m);
    let mut r1 = poly_trim(a);
    let mut s0: Vec<Rat> = vec![];
    let mut s1: Vec<Rat> = vec![Rat::one()];
    while poly_deg(&r1).is_some() {
        let (q, rem) = poly_divmod(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
    }
    (r0, s0)
}

fn poly_divmod(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let dd = poly_deg(den).expect("division by zero polynomial");
    let lead = den[dd].clone();
    let mut rem = num.to_vec();
    if poly_deg(&rem).map(|d| d < dd).unwrap_or(true) {
        return (vec![], poly_trim(rem));
    }
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    while let Some(d) = poly_deg(&rem) {
        if d < dd {
            break;
        }
        let c = rem[d].clone() / &lead;
        let k = d - dd;
        for i in 0..=dd {
            let v = &c * &den[i];
            rem[k + i] -= v;
        }
        quot[k] = c;
    }
    (poly_trim(quot), poly_trim(rem))
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let v = ai * bj;
            out[i + j] += v;
        }
    }
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c.clone();
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c.clone();
    }
    poly_trim(out)
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coords == other.coords;
        }
        let m = lcm_u32(self.conductor, other.conductor);
        self.promoted_dense(m) == other.promoted_dense(m)
    }
}

impl Eq for CycScalar {}

impl Add for &CycScalar {
    type Output = CycScalar;
    fn add(self, other: &CycScalar) -> CycScalar {
        self.binop(other, |mut a, b| {
            for (i, c) in b.into_iter().enumerate() {
                a[i] += c;
            }
            a
        })
    }
}

impl Sub for &CycScalar {
    type Output = CycScalar;
    fn sub(self, other: &CycScalar) -> CycScalar {
        self.binop(other, |mut a, b| {
            for (i, c) in b.into_iter().enumerate() {
                a[i] -= c;
            }
            a
        })
    }
}

impl Mul for &CycScalar {
    type Output = CycScalar;
    fn mul(self, other: &CycScalar) -> CycScalar {
        if self.is_zero() || other.is_zero() {
            return CycScalar::zero();
        }
        // Fast path: both rational.
        if self.conductor == 1 && other.conductor == 1 {
            return CycScalar::from_rat(
                self.coords.get(&0).unwrap() * other.coords.get(&0).unwrap(),
            );
        }
        let m = lcm_u32(self.conductor, other.conductor);
        let a = self.promoted_dense(m);
        let b = other.promoted_dense(m);
        CycScalar::canonical(m, poly_mul(&a, &b))
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            conductor: self.conductor,
            coords: self.coords.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }
}

fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

impl CycScalar {
    /// Number of power-basis terms; used by callers to decide whether a
    /// printed coefficient needs parentheses.
    pub fn term_count(&self) -> usize {
        self.coords.len().max(1)
    }

    /// Splits a leading minus off single-term values, for tidy printing.
    pub(crate) fn display_parts(&self) -> (bool, String) {
        if self.coords.len() == 1 {
            let (&k, c) = self.coords.iter().next().unwrap();
            if c.is_negative() {
                let pos = -c.clone();
                return (true, Self::fmt_term(k, &pos, self.conductor));
            }
        }
        (false, self.to_string())
    }

    fn fmt_term(power: u32, coeff: &Rat, conductor: u32) -> String {
        if power == 0 {
            return fmt_rat(coeff);
        }
        let z = if power == 1 {
            format!("z{conductor}")
        } else {
            format!("z{conductor}^{power}")
        };
        if coeff.is_one() {
            z
        } else if (-coeff.clone()).is_one() {
            format!("-{z}")
        } else {
            format!("{}*{z}", fmt_rat(coeff))
        }
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in &self.coords {
            if first {
                write!(f, "{}", Self::fmt_term(k, c, self.conductor))?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}", Self::fmt_term(k, &-c.clone(), self.conductor))?;
            } else {
                write!(f, " + {}", Self::fmt_term(k, c, self.conductor))?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for CycScalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        // Phi_1 = x - 1, Phi_4 = x^2 + 1, Phi_6 = x^2 - x + 1, Phi_12 = x^4 - x^2 + 1
        let p4: Vec<i64> = vec![1, 0, 1];
        assert_eq!(
            cyclotomic_poly(4).iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            p4.iter().map(|c| c.to_string()).collect::<Vec<_>>()
        );
        let p12: Vec<i64> = vec![1, 0, -1, 0, 1];
        assert_eq!(
            cyclotomic_poly(12).iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            p12.iter().map(|c| c.to_string()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn zeta4_squares_to_minus_one() {
        let i = CycScalar::zeta(4);
        let m1 = &i * &i;
        assert_eq!(m1, CycScalar::from_int(-1));
        assert_eq!(m1.to_string(), "-1");
        assert_eq!(m1.conductor(), 1);
    }

    #[test]
    fn zeta3_plus_zeta3_squared() {
        let z = CycScalar::zeta(3);
        let z2 = z.pow(2).unwrap();
        assert_eq!(&z + &z2, CycScalar::from_int(-1));
    }

    #[test]
    fn rational_inverse() {
        let x = CycScalar::from_rat(rat(2, 3));
        assert_eq!(x.inv().unwrap(), CycScalar::from_rat(rat(3, 2)));
        assert!(CycScalar::zero().inv().is_err());
    }

    #[test]
    fn cyclotomic_inverse() {
        for n in [3u32, 4, 5, 8, 12] {
            let z = &CycScalar::zeta(n) + &CycScalar::from_int(2);
            let inv = z.inv().unwrap();
            assert!((&z * &inv).is_one(), "failed for n={n}");
        }
    }

    #[test]
    fn cross_conductor_equality() {
        // zeta_6^2 = zeta_3
        let a = CycScalar::zeta(6).pow(2).unwrap();
        let b = CycScalar::zeta(3);
        assert_eq!(a, b);
        assert_ne!(CycScalar::zeta(5), CycScalar::zeta(7));
    }

    #[test]
    fn promotion_roundtrip_is_identity_on_rationals() {
        let q = CycScalar::from_rat(rat(-7, 5));
        let promoted = q.promote(12);
        assert_eq!(promoted.as_rational(), Some(rat(-7, 5)));
        assert_eq!(promoted, q);
    }

    #[test]
    fn mult_order_of_roots_of_unity() {
        assert_eq!(CycScalar::zeta(8).mult_order(16), Some(8));
        assert_eq!(CycScalar::from_int(-1).mult_order(4), Some(2));
        assert_eq!(CycScalar::from_int(2).mult_order(32), None);
    }

    #[test]
    fn display_forms() {
        assert_eq!(CycScalar::zeta(4).to_string(), "z4");
        assert_eq!(CycScalar::from_rat(rat(3, 2)).to_string(), "3/2");
        let x = &CycScalar::from_int(1) + &CycScalar::zeta(8).pow(3).unwrap();
        assert_eq!(x.to_string(), "1 + z8^3");
    }
}
