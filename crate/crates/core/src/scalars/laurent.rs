//! Sparse multivariate Laurent polynomials over cyclotomic scalars.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{CycScalar, ScalarError};

/// Integer exponent vector of a Laurent monomial t_1^{m_1} ... t_n^{m_n}.
///
/// Ordering is lexicographic, which fixes the deterministic term order used
/// everywhere (iteration, printing, golden files).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(Vec<i64>);

impl Exponent {
    pub fn new(v: Vec<i64>) -> Self {
        Exponent(v)
    }

    pub fn zero(nvars: usize) -> Self {
        Exponent(vec![0; nvars])
    }

    /// The standard basis vector e_i (exponent of t_{i+1}).
    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut v = vec![0; nvars];
        v[i] = 1;
        Exponent(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&m| m == 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.len(), other.len());
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Exponent {
        Exponent(self.0.iter().map(|a| -a).collect())
    }

    /// Componentwise scaling, used by the exponent embedding t_i = s_i^{m_i}.
    pub fn stretch(&self, factors: &[i64]) -> Exponent {
        debug_assert_eq!(self.len(), factors.len());
        Exponent(self.0.iter().zip(factors).map(|(a, m)| a * m).collect())
    }

    /// First index with a nonzero entry, the pivot of the normal form.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|&m| m != 0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, m) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "]")
    }
}

impl serde::Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(self.0.iter())
    }
}

/// A Laurent polynomial in `nvars` variables with [`CycScalar`] coefficients.
/// No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, CycScalar>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, CycScalar::one())
    }

    pub fn constant(nvars: usize, c: CycScalar) -> Self {
        Self::monomial(Exponent::zero(nvars), c)
    }

    pub fn monomial(exp: Exponent, c: CycScalar) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The variable t_{i+1}.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        Self::monomial(Exponent::unit(nvars, i), CycScalar::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &CycScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &Exponent) -> CycScalar {
        self.terms.get(exp).cloned().unwrap_or_else(CycScalar::zero)
    }

    pub fn as_constant(&self) -> Option<CycScalar> {
        if self.terms.is_empty() {
            return Some(CycScalar::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Exponent::zero(self.nvars)) {
                return Some(c.clone());
            }
        }
        None
    }

    fn insert_add(terms: &mut BTreeMap<Exponent, CycScalar>, exp: Exponent, c: CycScalar) {
        if c.is_zero() {
            return;
        }
        match terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &CycScalar) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Product with an explicit variable-count check (the spec-level entry
    /// point; the `*` operator panics on mismatch instead).
    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, ScalarError> {
        if self.nvars != other.nvars {
            return Err(ScalarError::NvarsMismatch(self.nvars, other.nvars));
        }
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                Self::insert_add(&mut terms, ea.add(eb), ca * cb);
            }
        }
        Ok(LaurentPoly { nvars: self.nvars, terms })
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            LaurentPoly::insert_add(&mut terms, e.clone(), c.clone());
        }
        LaurentPoly { nvars: self.nvars, terms }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, other: &LaurentPoly) -> LaurentPoly {
        self + &(-other)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, other: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(other).expect("variable count mismatch")
    }
}

/// Formats a monomial in the canonical `t1^2*t2^-1` style with a caller
/// supplied variable name.
pub(crate) fn fmt_monomial(exp: &Exponent, var: &str) -> String {
    let mut parts = Vec::new();
    for (i, m) in exp.iter().enumerate() {
        if m == 0 {
            continue;
        }
        if m == 1 {
            parts.push(format!("{var}{}", i + 1));
        } else {
            parts.push(format!("{var}{}^{m}", i + 1));
        }
    }
    parts.join("*")
}

impl LaurentPoly {
    /// Canonical textual form with variable name `var` ("t" by default via
    /// `Display`); lexicographic term order.
    pub fn display_with(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (exp, c) in &self.terms {
            let mono = fmt_monomial(exp, var);
            let (neg, coeff) = c.display_parts();
            let body = if mono.is_empty() {
                coeff
            } else if coeff == "1" {
                mono
            } else if c.term_count() > 1 {
                format!("({c})*{mono}")
            } else {
                format!("{coeff}*{mono}")
            };
            if first {
                if neg && c.term_count() == 1 {
                    out.push('-');
                }
                out.push_str(&body);
                first = false;
            } else {
                out.push_str(if neg && c.term_count() == 1 { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("t"))
    }
}

impl serde::Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat_int;

    fn t(nvars: usize, i: usize) -> LaurentPoly {
        LaurentPoly::var(nvars, i)
    }

    #[test]
    fn monomial_inverse_cancels() {
        let p = t(1, 0);
        let q = LaurentPoly::monomial(Exponent::new(vec![-1]), CycScalar::one());
        assert_eq!(&p * &q, LaurentPoly::one(1));
    }

    #[test]
    fn difference_of_squares() {
        let one = LaurentPoly::one(1);
        let p = &t(1, 0) + &one;
        let q = &t(1, 0) - &one;
        let expect = &t(1, 0).pow(2) - &one;
        assert_eq!(&p * &q, expect);
    }

    #[test]
    fn zeta_coefficients_multiply() {
        let i = CycScalar::zeta(4);
        let p = t(2, 0).scale(&i);
        let q = t(2, 1).scale(&i);
        let expect = (&t(2, 0) * &t(2, 1)).scale(&CycScalar::from_int(-1));
        assert_eq!(&p * &q, expect);
    }

    #[test]
    fn nvars_mismatch_is_an_error() {
        assert!(t(1, 0).checked_mul(&t(2, 0)).is_err());
    }

    #[test]
    fn display_is_lexicographic_and_canonical() {
        let p = &(&t(2, 0).pow(2) * &LaurentPoly::monomial(Exponent::new(vec![0, -1]), CycScalar::from_int(3)))
            + &t(2, 1).scale(&CycScalar::from_int(-1));
        assert_eq!(p.to_string(), "-t2 + 3*t1^2*t2^-1");
        assert_eq!(LaurentPoly::zero(2).to_string(), "0");
    }
}
