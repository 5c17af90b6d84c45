//! The loop algebra g (x) S for S a Laurent polynomial ring: elements are
//! finitely supported maps from basis indices to polynomials, with
//! [x(x)a, y(x)b] = [x,y](x)ab extended bilinearly.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use super::{GAut, LieError, StructureTable};
use crate::scalars::{CycScalar, Exponent, LaurentPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopElement {
    nvars: usize,
    terms: BTreeMap<usize, LaurentPoly>,
}

impl LoopElement {
    pub fn zero(nvars: usize) -> Self {
        LoopElement { nvars, terms: BTreeMap::new() }
    }

    /// basis_idx (x) poly
    pub fn single(idx: usize, poly: LaurentPoly) -> Self {
        let nvars = poly.nvars();
        let mut terms = BTreeMap::new();
        if !poly.is_zero() {
            terms.insert(idx, poly);
        }
        LoopElement { nvars, terms }
    }

    /// basis_idx (x) t^m
    pub fn basis_monomial(idx: usize, exp: Exponent) -> Self {
        Self::single(idx, LaurentPoly::monomial(exp, CycScalar::one()))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &LaurentPoly)> {
        self.terms.iter().map(|(&i, p)| (i, p))
    }

    pub fn coeff(&self, idx: usize) -> LaurentPoly {
        self.terms.get(&idx).cloned().unwrap_or_else(|| LaurentPoly::zero(self.nvars))
    }

    fn insert_add(&mut self, idx: usize, poly: &LaurentPoly) {
        if poly.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(poly.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + poly;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &LoopElement) -> LoopElement {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (idx, p) in &other.terms {
            out.insert_add(*idx, p);
        }
        out
    }

    pub fn sub(&self, other: &LoopElement) -> LoopElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LoopElement {
        LoopElement {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(&i, p)| (i, -p)).collect(),
        }
    }

    pub fn scale(&self, c: &CycScalar) -> LoopElement {
        if c.is_zero() {
            return LoopElement::zero(self.nvars);
        }
        LoopElement {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(&i, p)| (i, p.scale(c))).collect(),
        }
    }

    pub fn scale_poly(&self, q: &LaurentPoly) -> LoopElement {
        let mut out = LoopElement::zero(self.nvars);
        for (idx, p) in &self.terms {
            out.insert_add(*idx, &(p * q));
        }
        out
    }

    /// The loop bracket [x(x)a, y(x)b] = [x,y](x)ab.
    pub fn bracket(
        table: &StructureTable,
        a: &LoopElement,
        b: &LoopElement,
    ) -> Result<LoopElement, LieError> {
        if a.nvars != b.nvars {
            return Err(LieError::Mismatch(format!(
                "loop elements over {} vs {} variables",
                a.nvars, b.nvars
            )));
        }
        let dim = table.dim();
        let mut out = LoopElement::zero(a.nvars);
        for (i, p) in &a.terms {
            if *i >= dim {
                return Err(LieError::BadIndex(*i, dim));
            }
            for (j, q) in &b.terms {
                if *j >= dim {
                    return Err(LieError::BadIndex(*j, dim));
                }
                let prod = p * q;
                if prod.is_zero() {
                    continue;
                }
                for (k, c) in table.bracket(*i, *j) {
                    out.insert_add(*k, &prod.scale(&CycScalar::from_rat(c.clone())));
                }
            }
        }
        Ok(out)
    }

    /// Apply a constant-matrix automorphism of g coefficientwise.
    pub fn apply_gaut(&self, g: &GAut) -> LoopElement {
        let mut out = LoopElement::zero(self.nvars);
        for (j, p) in &self.terms {
            for i in 0..g.dim() {
                let c = g.matrix().at(i, *j);
                if !c.is_zero() {
                    out.insert_add(i, &p.scale(c));
                }
            }
        }
        out
    }

    /// Dense coefficient vector of the degree-m graded component.
    pub fn graded_component(&self, dim: usize, m: &Exponent) -> Vec<CycScalar> {
        let mut v = vec![CycScalar::zero(); dim];
        for (i, p) in &self.terms {
            v[*i] = p.coeff(m);
        }
        v
    }

    /// All exponents appearing in some coefficient polynomial.
    pub fn support(&self) -> Vec<Exponent> {
        let mut out: Vec<Exponent> = Vec::new();
        for p in self.terms.values() {
            for (e, _) in p.terms() {
                if !out.contains(e) {
                    out.push(e.clone());
                }
            }
        }
        out.sort();
        out
    }

    pub fn display_with(&self, table: &StructureTable) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(i, p)| {
                if p.term_count() == 1 {
                    format!("{}*{}", table.label(*i), p)
                } else {
                    format!("{}*({})", table.label(*i), p)
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for LoopElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(i, p)| {
                if p.term_count() == 1 {
                    format!("b{i}*{p}")
                } else {
                    format!("b{i}*({p})")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The S-valued trace form (x(x)a | y(x)b) = (x|y) ab of the loop algebra.
pub fn loop_killing(
    table: &StructureTable,
    a: &LoopElement,
    b: &LoopElement,
) -> Result<LaurentPoly, LieError> {
    if a.nvars != b.nvars {
        return Err(LieError::Mismatch("variable counts differ".into()));
    }
    let mut out = LaurentPoly::zero(a.nvars);
    for (i, p) in &a.terms {
        for (j, q) in &b.terms {
            let k = table.killing(*i, *j);
            if k.is_zero() {
                continue;
            }
            out = &out + &(p * q).scale(&CycScalar::from_rat(k.clone()));
        }
    }
    Ok(out)
}

