//! Lifting automorphisms of the loop algebra to central extensions: solve
//! mu o P - P o (theta x theta) = delta(gamma) on graded windows, build the
//! lifted maps theta_P(x + v) = theta(x) + gamma(x) + mu(v), measure the
//! induced action on the centre, and enumerate the integer matrices that
//! stabilize the line through (1, zeta).

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::extension::{CentralValue, Cocycle, ExtElement, ExtError};
use crate::kahler::{aut_act_class, class_basis_at, KahlerError};
use crate::lie::{GAut, LieError, LoopElement, StructureTable};
use crate::scalars::{CycScalar, Exponent, LaurentPoly, Rat, RingAut, ScalarError};
use crate::window::Window;

#[derive(Debug, Clone, thiserror::Error)]
pub enum AutliftError {
    #[error("unsupported automorphism shape: {0}")]
    UnsupportedShape(String),
    #[error("certificate was issued for ({0}, {1}), not for this data")]
    StaleCertificate(String, String),
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(i64),
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Kahler(#[from] KahlerError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A graded automorphism of the loop algebra, built from three kinds of
/// primitive parts applied left to right:
/// constant automorphisms of g, diagonal monomial twists (torus elements
/// with coefficients in the units of S), and base ring automorphisms acting
/// on coordinates. All supported shapes map each (basis, degree) pair to a
/// single degree, which keeps the lift equation block diagonal.
#[derive(Clone, Debug)]
pub enum LoopAutPart {
    Const(GAut),
    /// Per basis index: multiply the coefficient by c_i t^(s_i).
    Monomial { mults: Vec<(CycScalar, Exponent)> },
    Base(RingAut),
}

#[derive(Clone, Debug)]
pub struct LoopAut {
    nvars: usize,
    dim: usize,
    parts: Vec<LoopAutPart>,
    desc: String,
}

impl LoopAut {
    pub fn identity(table: &StructureTable, nvars: usize) -> Self {
        LoopAut { nvars, dim: table.dim(), parts: Vec::new(), desc: "id".into() }
    }

    /// An S-linear automorphism with constant coefficients.
    pub fn from_gaut(table: &StructureTable, g: GAut, desc: impl Into<String>, nvars: usize) -> Self {
        assert_eq!(g.dim(), table.dim());
        LoopAut { nvars, dim: table.dim(), parts: vec![LoopAutPart::Const(g)], desc: desc.into() }
    }

    /// Base automorphism acting on the R-coordinates only.
    pub fn base(table: &StructureTable, theta: RingAut) -> Self {
        let desc = format!("base:{theta}");
        LoopAut {
            nvars: theta.nvars(),
            dim: table.dim(),
            parts: vec![LoopAutPart::Base(theta)],
            desc,
        }
    }

    /// Diagonal torus element sending the root vector of each simple root i
    /// to `scales[i] t^(shifts[i])` times itself, extended through root
    /// coordinates. Always an automorphism (multipliers are multiplicative
    /// on roots); the constructor still re-checks that against the table.
    pub fn monomial_torus(
        table: &StructureTable,
        data: &[(CycScalar, Exponent)],
    ) -> Result<Self, AutliftError> {
        if data.len() != table.rank() {
            return Err(AutliftError::UnsupportedShape(format!(
                "expected {} torus entries, got {}",
                table.rank(),
                data.len()
            )));
        }
        let nvars = data
            .first()
            .map(|(_, e)| e.len())
            .ok_or_else(|| AutliftError::UnsupportedShape("empty torus data".into()))?;
        if data.iter().any(|(c, e)| c.is_zero() || e.len() != nvars) {
            return Err(AutliftError::UnsupportedShape("invalid torus data".into()));
        }
        let dim = table.dim();
        let mut mults = Vec::with_capacity(dim);
        for idx in 0..dim {
            let w = table.basis_weight(idx);
            let mut c = CycScalar::one();
            let mut s = Exponent::zero(nvars);
            for (i, wi) in w.iter().enumerate() {
                if *wi != 0 {
                    c = &c * &data[i].0.pow(*wi)?;
                    for _ in 0..wi.abs() {
                        s = if *wi > 0 { s.add(&data[i].1) } else { s.add(&data[i].1.neg()) };
                    }
                }
            }
            mults.push((c, s));
        }
        // multiplicativity over the bracket table
        for i in 0..dim {
            for j in 0..dim {
                for (k, _) in table.bracket(i, j) {
                    let prod = (&mults[i].0 * &mults[j].0, mults[i].1.add(&mults[j].1));
                    if prod != mults[*k] {
                        return Err(AutliftError::UnsupportedShape(
                            "torus multipliers are not multiplicative".into(),
                        ));
                    }
                }
            }
        }
        let desc = {
            let parts: Vec<String> = data
                .iter()
                .map(|(c, e)| {
                    format!("{}", LaurentPoly::monomial(e.clone(), c.clone()))
                })
                .collect();
            format!("torus:{}", parts.join(","))
        };
        Ok(LoopAut { nvars, dim, parts: vec![LoopAutPart::Monomial { mults }], desc })
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &LoopAut) -> LoopAut {
        assert_eq!(self.nvars, other.nvars);
        assert_eq!(self.dim, other.dim);
        let mut parts = other.parts.clone();
        parts.extend(self.parts.iter().cloned());
        LoopAut {
            nvars: self.nvars,
            dim: self.dim,
            parts,
            desc: format!("{} . {}", self.desc, other.desc),
        }
    }

    pub fn describe(&self) -> String {
        self.desc.clone()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn apply(&self, x: &LoopElement) -> Result<LoopElement, AutliftError> {
        if x.nvars() != self.nvars {
            return Err(AutliftError::Lie(LieError::Mismatch(format!(
                "loop element over {} variables, automorphism over {}",
                x.nvars(),
                self.nvars
            ))));
        }
        let mut cur = x.clone();
        for part in &self.parts {
            cur = match part {
                LoopAutPart::Const(g) => cur.apply_gaut(g),
                LoopAutPart::Monomial { mults } => {
                    let mut out = LoopElement::zero(self.nvars);
                    for (i, p) in cur.terms() {
                        let (c, s) = &mults[i];
                        let mono = LaurentPoly::monomial(s.clone(), c.clone());
                        out = out.add(&LoopElement::single(i, p * &mono));
                    }
                    out
                }
                LoopAutPart::Base(theta) => {
                    let mut out = LoopElement::zero(self.nvars);
                    for (i, p) in cur.terms() {
                        out = out.add(&LoopElement::single(i, theta.apply(p)?));
                    }
                    out
                }
            };
        }
        Ok(cur)
    }

    pub fn inverse(&self) -> LoopAut {
        let parts = self
            .parts
            .iter()
            .rev()
            .map(|p| match p {
                LoopAutPart::Const(g) => LoopAutPart::Const(g.inverse()),
                LoopAutPart::Monomial { mults } => LoopAutPart::Monomial {
                    mults: mults
                        .iter()
                        .map(|(c, s)| (c.inv().expect("nonzero multiplier"), s.neg()))
                        .collect(),
                },
                LoopAutPart::Base(theta) => LoopAutPart::Base(theta.inverse()),
            })
            .collect();
        LoopAut {
            nvars: self.nvars,
            dim: self.dim,
            parts,
            desc: format!("({})^-1", self.desc),
        }
    }

    /// The composite of the base parts, which is what acts on the centre
    /// when V is the space of differential classes.
    pub fn base_component(&self) -> Option<RingAut> {
        let mut acc: Option<RingAut> = None;
        for part in &self.parts {
            if let LoopAutPart::Base(theta) = part {
                acc = Some(match acc {
                    None => theta.clone(),
                    Some(prev) => theta.compose(&prev),
                });
            }
        }
        acc.filter(|a| !a.is_identity())
    }

    /// First window pair on which the loop bracket is not preserved.
    pub fn bracket_violation(
        &self,
        table: &StructureTable,
        window: &Window,
    ) -> Result<Option<(String, String)>, AutliftError> {
        let exps = window.exponents();
        for i in 0..table.dim() {
            for m in &exps {
                let u = LoopElement::basis_monomial(i, m.clone());
                let tu = self.apply(&u)?;
                for j in 0..table.dim() {
                    for n in &exps {
                        let v = LoopElement::basis_monomial(j, n.clone());
                        let lhs = self.apply(&LoopElement::bracket(table, &u, &v)?)?;
                        let rhs = LoopElement::bracket(table, &tu, &self.apply(&v)?)?;
                        if lhs != rhs {
                            return Ok(Some((
                                format!("{}(x)t^{m}", table.label(i)),
                                format!("{}(x)t^{n}", table.label(j)),
                            )));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

impl fmt::Display for LoopAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.desc)
    }
}

/// The restricted shape of mu used by the solver: the action induced by the
/// base ring automorphism of theta (identity when absent, or when V is a
/// line), composed with a nonzero overall scalar.
#[derive(Clone, Debug)]
pub struct MuMap {
    pub base: Option<RingAut>,
    pub scale: CycScalar,
}

impl MuMap {
    pub fn identity() -> Self {
        MuMap { base: None, scale: CycScalar::one() }
    }

    pub fn apply(&self, v: &CentralValue) -> Result<CentralValue, AutliftError> {
        let moved = match (v, &self.base) {
            (CentralValue::Class(z), Some(theta)) => {
                CentralValue::Class(aut_act_class(theta, z)?)
            }
            _ => v.clone(),
        };
        Ok(moved.scale(&self.scale))
    }

    pub fn describe(&self) -> String {
        match &self.base {
            None => format!("{}", self.scale),
            Some(theta) => format!("({}) * [{}]", self.scale, theta),
        }
    }
}

/// A witnessed solution of the lift equation on a window.
#[derive(Clone, Debug)]
pub struct LiftCertificate {
    pub theta: String,
    pub cocycle: String,
    pub mu: MuMap,
    pub gamma: BTreeMap<(usize, Exponent), CentralValue>,
    pub window: Window,
    pub residual_checked: u64,
}

impl LiftCertificate {
    pub fn gamma_support(&self) -> Vec<(String, String)> {
        self.gamma
            .iter()
            .map(|((i, m), v)| (format!("b{i}(x)t^{m}"), v.to_string()))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub enum LiftOutcome {
    Lifted(LiftCertificate),
    NoLift { witness_x: String, witness_y: String, detail: String },
}

impl LiftOutcome {
    pub fn certificate(&self) -> Option<&LiftCertificate> {
        match self {
            LiftOutcome::Lifted(c) => Some(c),
            LiftOutcome::NoLift { .. } => None,
        }
    }
}

/// lambda with w = lambda * v, for v != 0.
fn proportionality(v: &CentralValue, w: &CentralValue) -> Option<CycScalar> {
    let lambda = match (v, w) {
        (CentralValue::Line(a), CentralValue::Line(b)) => {
            &b.clone() * &a.inv().ok()?
        }
        (CentralValue::Class(a), CentralValue::Class(b)) => {
            let (m, ca) = a.graded().next()?;
            let i = ca.iter().position(|c| !c.is_zero())?;
            let cb = b.component(m);
            &cb[i] * &ca[i].inv().ok()?
        }
        _ => return None,
    };
    if w == &v.scale(&lambda) {
        Some(lambda)
    } else {
        None
    }
}

/// Solve the lift equation for theta and P on the window.
///
/// mu is searched in the restricted family of the design: the action
/// induced by the base component of theta times a free nonzero scalar
/// (a free scalar alone when V is one dimensional). The scalar is pinned
/// by scanning pairs with vanishing loop bracket, where gamma drops out of
/// the equation; gamma is then solved degree by degree by exact
/// elimination, free values set to zero. The equation is asserted for
/// every window pair whose bracket stays inside the window, and the
/// returned certificate has been re-verified on all of them.
pub fn solve_lift(
    table: &StructureTable,
    theta: &LoopAut,
    cocycle: &Cocycle,
    window: &Window,
) -> Result<LiftOutcome, AutliftError> {
    if theta.nvars() != cocycle.nvars() || window.nvars != cocycle.nvars() {
        return Err(AutliftError::UnsupportedShape(format!(
            "variable counts disagree: theta {}, cocycle {}, window {}",
            theta.nvars(),
            cocycle.nvars(),
            window.nvars
        )));
    }
    let dim = table.dim();
    let exps = window.exponents();
    // For the differential-valued codomain, mu ranges over the action
    // induced by the base part of theta times a scalar; for a line, over
    // the nonzero scalars alone.
    let mu_base = match cocycle.space() {
        crate::extension::CentralSpace::Differentials { .. } => theta.base_component(),
        crate::extension::CentralSpace::Line { .. } => None,
    };
    let mu0 = MuMap { base: mu_base.clone(), scale: CycScalar::one() };

    let label = |i: usize, m: &Exponent| format!("{}(x)t^{m}", table.label(i));

    // Precompute images of the window basis.
    let mut elements = Vec::with_capacity(dim * exps.len());
    for i in 0..dim {
        for m in &exps {
            elements.push((i, m.clone()));
        }
    }
    let images: Vec<LoopElement> = elements
        .iter()
        .map(|(i, m)| theta.apply(&LoopElement::basis_monomial(*i, m.clone())))
        .collect::<Result<_, _>>()?;

    // Pass 1: pin the scalar on zero-bracket pairs.
    let mut lambda: Option<CycScalar> = None;
    for (a, (i, m)) in elements.iter().enumerate() {
        for (b, (j, n)) in elements.iter().enumerate() {
            if !table.bracket(*i, *j).is_empty() {
                continue;
            }
            let p1 = mu0.apply(&cocycle.eval_basis(table, *i, m, *j, n)?)?;
            let p2 = cocycle.eval(table, &images[a], &images[b])?;
            match (p1.is_zero(), p2.is_zero()) {
                (true, true) => continue,
                (true, false) | (false, true) => {
                    return Ok(LiftOutcome::NoLift {
                        witness_x: label(*i, m),
                        witness_y: label(*j, n),
                        detail: format!(
                            "no invertible mu: mu0(P(x,y)) = {p1} but P(theta x, theta y) = {p2}"
                        ),
                    });
                }
                (false, false) => {
                    let Some(cand) = proportionality(&p1, &p2) else {
                        return Ok(LiftOutcome::NoLift {
                            witness_x: label(*i, m),
                            witness_y: label(*j, n),
                            detail: "P(theta x, theta y) is not proportional to mu0(P(x, y))"
                                .into(),
                        });
                    };
                    match &lambda {
                        None => lambda = Some(cand),
                        Some(prev) if *prev == cand => {}
                        Some(prev) => {
                            return Ok(LiftOutcome::NoLift {
                                witness_x: label(*i, m),
                                witness_y: label(*j, n),
                                detail: format!(
                                    "scalar constraints conflict: {prev} vs {cand}"
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
    let lambda = lambda.unwrap_or_else(CycScalar::one);
    let mu = MuMap { base: mu_base, scale: lambda };

    // Pass 2: assemble per-degree blocks
    //   sum_l c_l gamma(l, m+n) = P(theta x, theta y) - mu(P(x, y)).
    struct Eq {
        coeffs: Vec<Rat>,
        rhs: CentralValue,
        src: (usize, usize),
    }
    let mut blocks: BTreeMap<Exponent, Vec<Eq>> = BTreeMap::new();
    let mut asserted: u64 = 0;
    for (a, (i, m)) in elements.iter().enumerate() {
        for (b, (j, n)) in elements.iter().enumerate() {
            let bracket = table.bracket(*i, *j);
            let degree = m.add(n);
            if !bracket.is_empty() && !window.contains(&degree) {
                continue; // bracket leaves the window; not asserted
            }
            asserted += 1;
            let p1 = mu.apply(&cocycle.eval_basis(table, *i, m, *j, n)?)?;
            let p2 = cocycle.eval(table, &images[a], &images[b])?;
            let rhs = p2.sub(&p1);
            if bracket.is_empty() {
                if !rhs.is_zero() {
                    return Ok(LiftOutcome::NoLift {
                        witness_x: label(*i, m),
                        witness_y: label(*j, n),
                        detail: format!(
                            "bracket vanishes but mu*P - P(theta x theta) = {rhs}"
                        ),
                    });
                }
                continue;
            }
            let mut coeffs = vec![Rat::zero(); dim];
            for (l, c) in bracket {
                coeffs[*l] = c.clone();
            }
            blocks.entry(degree).or_default().push(Eq { coeffs, rhs, src: (a, b) });
        }
    }

    // Exact elimination per degree block; scalar coefficients, V-valued
    // right-hand sides. Free unknowns stay zero.
    let zero_v = cocycle.space().zero_value();
    let mut gamma: BTreeMap<(usize, Exponent), CentralValue> = BTreeMap::new();
    for (degree, mut eqs) in blocks {
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut used = vec![false; eqs.len()];
        for col in 0..dim {
            let Some(row) = (0..eqs.len())
                .find(|&r| !used[r] && !eqs[r].coeffs[col].is_zero())
            else {
                continue;
            };
            used[row] = true;
            let inv = Rat::one() / eqs[row].coeffs[col].clone();
            for c in eqs[row].coeffs.iter_mut() {
                *c *= &inv;
            }
            eqs[row].rhs = eqs[row].rhs.scale_rat(&inv);
            let pivot_coeffs = eqs[row].coeffs.clone();
            let pivot_rhs = eqs[row].rhs.clone();
            for (r, eq) in eqs.iter_mut().enumerate() {
                if r == row || eq.coeffs[col].is_zero() {
                    continue;
                }
                let factor = eq.coeffs[col].clone();
                for (c, pc) in eq.coeffs.iter_mut().zip(&pivot_coeffs) {
                    *c -= &factor * pc;
                }
                eq.rhs = eq.rhs.sub(&pivot_rhs.scale_rat(&factor));
            }
            pivots.push((row, col));
        }
        // Inconsistent rows witness unsolvability.
        for (r, eq) in eqs.iter().enumerate() {
            if !used[r] && eq.coeffs.iter().all(Zero::is_zero) && !eq.rhs.is_zero() {
                let (a, b) = eq.src;
                let (i, m) = &elements[a];
                let (j, n) = &elements[b];
                return Ok(LiftOutcome::NoLift {
                    witness_x: label(*i, m),
                    witness_y: label(*j, n),
                    detail: format!(
                        "no gamma can satisfy the equation at degree t^{degree}"
                    ),
                });
            }
        }
        for (row, col) in pivots {
            // after full reduction the pivot row reads gamma(col, degree) = rhs
            if !eqs[row].rhs.is_zero() {
                gamma.insert((col, degree.clone()), eqs[row].rhs.clone());
            }
        }
    }

    let cert = LiftCertificate {
        theta: theta.describe(),
        cocycle: cocycle.describe(),
        mu,
        gamma,
        window: *window,
        residual_checked: asserted,
    };

    // Residual sweep: the certificate must reproduce zero everywhere.
    let gamma_of = |x: &LoopElement| -> CentralValue {
        let mut acc = zero_v.clone();
        for (i, p) in x.terms() {
            for (m, c) in p.terms() {
                if let Some(v) = cert.gamma.get(&(i, m.clone())) {
                    acc = acc.add(&v.scale(c));
                }
            }
        }
        acc
    };
    for (a, (i, m)) in elements.iter().enumerate() {
        for (b, (j, n)) in elements.iter().enumerate() {
            let bracket = table.bracket(*i, *j);
            let degree = m.add(n);
            if !bracket.is_empty() && !window.contains(&degree) {
                continue;
            }
            let p1 = cert.mu.apply(&cocycle.eval_basis(table, *i, m, *j, n)?)?;
            let p2 = cocycle.eval(table, &images[a], &images[b])?;
            let br = LoopElement::bracket(
                table,
                &LoopElement::basis_monomial(*i, m.clone()),
                &LoopElement::basis_monomial(*j, n.clone()),
            )?;
            // mu(P(x,y)) - P(theta x, theta y) + gamma([x,y]) = 0
            let residual = p1.sub(&p2).add(&gamma_of(&br));
            assert!(
                residual.is_zero(),
                "certificate failed its own residual at ({}, {})",
                label(*i, m),
                label(*j, n)
            );
        }
    }
    Ok(LiftOutcome::Lifted(cert))
}

/// The lifted map theta_P(x + v) = theta(x) + gamma(x) + mu(v).
#[derive(Clone, Debug)]
pub struct LiftedAut {
    theta: LoopAut,
    mu: MuMap,
    gamma: BTreeMap<(usize, Exponent), CentralValue>,
    space: crate::extension::CentralSpace,
}

impl LiftedAut {
    pub fn mu(&self) -> &MuMap {
        &self.mu
    }

    pub fn apply(&self, x: &ExtElement) -> Result<ExtElement, AutliftError> {
        let loop_part = self.theta.apply(&x.loop_part)?;
        let mut central = self.mu.apply(&x.central)?;
        for (i, p) in x.loop_part.terms() {
            for (m, c) in p.terms() {
                if let Some(v) = self.gamma.get(&(i, m.clone())) {
                    central = central.add(&v.scale(c));
                }
            }
        }
        Ok(ExtElement { loop_part, central })
    }

    /// The inverse map, by the closed formula
    /// theta_P^{-1}(x + v) = theta^{-1}(x) - mu^{-1}(gamma(theta^{-1} x)) + mu^{-1}(v).
    pub fn apply_inverse(&self, x: &ExtElement) -> Result<ExtElement, AutliftError> {
        let loop_part = self.theta.inverse().apply(&x.loop_part)?;
        let mu_inv = MuMap {
            base: self.mu.base.as_ref().map(RingAut::inverse),
            scale: self.mu.scale.inv()?,
        };
        let mut drift = self.space.zero_value();
        for (i, p) in loop_part.terms() {
            for (m, c) in p.terms() {
                if let Some(v) = self.gamma.get(&(i, m.clone())) {
                    drift = drift.add(&v.scale(c));
                }
            }
        }
        let central = mu_inv.apply(&x.central)?.sub(&mu_inv.apply(&drift)?);
        Ok(ExtElement { loop_part, central })
    }

    /// theta_P([a,b]_P) = [theta_P a, theta_P b]_P on all window pairs.
    pub fn automorphism_violation(
        &self,
        table: &StructureTable,
        cocycle: &Cocycle,
        window: &Window,
    ) -> Result<Option<(String, String)>, AutliftError> {
        let exps = window.exponents();
        for i in 0..table.dim() {
            for m in &exps {
                let u = ExtElement::from_loop(
                    LoopElement::basis_monomial(i, m.clone()),
                    &cocycle.space(),
                );
                for j in 0..table.dim() {
                    for n in &exps {
                        if !window.contains(&m.add(n)) && !table.bracket(i, j).is_empty() {
                            continue;
                        }
                        let v = ExtElement::from_loop(
                            LoopElement::basis_monomial(j, n.clone()),
                            &cocycle.space(),
                        );
                        let lhs =
                            self.apply(&crate::extension::ext_bracket(table, cocycle, &u, &v)?)?;
                        let rhs = crate::extension::ext_bracket(
                            table,
                            cocycle,
                            &self.apply(&u)?,
                            &self.apply(&v)?,
                        )?;
                        if lhs != rhs {
                            return Ok(Some((
                                format!("{}(x)t^{m}", table.label(i)),
                                format!("{}(x)t^{n}", table.label(j)),
                            )));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Build the lifted automorphism from a certificate; the certificate must
/// have been issued for exactly this theta and cocycle.
pub fn build_lifted(
    theta: &LoopAut,
    cocycle: &Cocycle,
    cert: &LiftCertificate,
) -> Result<LiftedAut, AutliftError> {
    if cert.theta != theta.describe() || cert.cocycle != cocycle.describe() {
        return Err(AutliftError::StaleCertificate(cert.theta.clone(), cert.cocycle.clone()));
    }
    Ok(LiftedAut {
        theta: theta.clone(),
        mu: cert.mu.clone(),
        gamma: cert.gamma.clone(),
        space: cocycle.space(),
    })
}

/// The canonical lift of a base automorphism to the differential-valued
/// extension: theta_hat(y + z) = theta(y) + theta(z), with gamma = 0.
pub fn base_lift(table: &StructureTable, theta: RingAut) -> LiftedAut {
    let nvars = theta.nvars();
    LiftedAut {
        theta: LoopAut::base(table, theta.clone()),
        mu: MuMap { base: Some(theta), scale: CycScalar::one() },
        gamma: BTreeMap::new(),
        space: crate::extension::CentralSpace::Differentials { nvars },
    }
}

/// Result of measuring the centre action of a lifted automorphism.
#[derive(Clone, Debug)]
pub enum ScalarAction {
    Scalar(CycScalar),
    NotScalar { witness: String, image: String },
}

/// Tests whether the restriction of theta_hat to the window-truncated
/// central space is a scalar, returning it when it is.
pub fn scalar_centre_action(
    lifted: &LiftedAut,
    window: &Window,
) -> Result<ScalarAction, AutliftError> {
    let basis: Vec<CentralValue> = match &lifted.space {
        crate::extension::CentralSpace::Line { .. } => {
            vec![CentralValue::Line(CycScalar::one())]
        }
        crate::extension::CentralSpace::Differentials { nvars } => {
            let mut degrees = window.exponents();
            degrees.sort_by_key(|m| (m.iter().map(i64::abs).max().unwrap_or(0), m.clone()));
            let mut out = Vec::new();
            for m in degrees {
                for z in class_basis_at(*nvars, &m) {
                    out.push(CentralValue::Class(z));
                }
            }
            out
        }
    };
    let mut lambda: Option<CycScalar> = None;
    for v in &basis {
        let w = lifted.mu.apply(v)?;
        let Some(cand) = proportionality(v, &w) else {
            return Ok(ScalarAction::NotScalar { witness: v.to_string(), image: w.to_string() });
        };
        match &lambda {
            None => lambda = Some(cand),
            Some(prev) if *prev == cand => {}
            Some(_) => {
                return Ok(ScalarAction::NotScalar {
                    witness: v.to_string(),
                    image: w.to_string(),
                })
            }
        }
    }
    Ok(ScalarAction::Scalar(lambda.unwrap_or_else(CycScalar::one)))
}

/// One entry of the enumeration of GL_2(Z)_zeta: the matrix in the row
/// convention theta(t_i) = t^(row_i), together with its eigenvalue mu.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Gl2zEntry {
    pub matrix: [[i64; 2]; 2],
    pub mu: CycScalar,
}

/// M (1, zeta)^T = mu (1, zeta)^T, if such a nonzero mu exists.
pub fn gl2z_zeta_test(
    m: &[[i64; 2]; 2],
    zeta: &CycScalar,
) -> Result<Option<CycScalar>, AutliftError> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det != 1 && det != -1 {
        return Err(AutliftError::NotUnimodular(det));
    }
    let a = &CycScalar::from_int(m[0][0]) + &(&CycScalar::from_int(m[0][1]) * zeta);
    let b = &CycScalar::from_int(m[1][0]) + &(&CycScalar::from_int(m[1][1]) * zeta);
    if a.is_zero() {
        return Ok(None);
    }
    if b == &a * zeta {
        Ok(Some(a))
    } else {
        Ok(None)
    }
}

/// All unimodular integer matrices with entries in [-bound, bound] that
/// stabilize the line through (1, zeta), in lexicographic entry order.
pub fn gl2z_zeta_enumerate(zeta: &CycScalar, bound: i64) -> Vec<Gl2zEntry> {
    assert!(bound >= 1);
    let mut out = Vec::new();
    for p1 in -bound..=bound {
        for p2 in -bound..=bound {
            for q1 in -bound..=bound {
                for q2 in -bound..=bound {
                    let m = [[p1, p2], [q1, q2]];
                    let det = p1 * q2 - p2 * q1;
                    if det != 1 && det != -1 {
                        continue;
                    }
                    if let Ok(Some(mu)) = gl2z_zeta_test(&m, zeta) {
                        out.push(Gl2zEntry { matrix: m, mu });
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::{ext_bracket, Cocycle};
    use crate::lie::{build_split_simple, weyl_reflection, Series};
    use crate::scalars::rat;

    fn a1() -> StructureTable {
        build_split_simple(Series::A, 1).unwrap()
    }

    fn exp1(k: i64) -> Exponent {
        Exponent::new(vec![k])
    }

    #[test]
    fn identity_lifts_with_trivial_certificate() {
        let t = a1();
        let theta = LoopAut::identity(&t, 1);
        let out = solve_lift(&t, &theta, &Cocycle::kassel(1), &Window::new(1, 2)).unwrap();
        let cert = out.certificate().expect("identity lifts");
        assert!(cert.mu.base.is_none());
        assert!(cert.mu.scale.is_one());
        assert!(cert.gamma.is_empty());
    }

    #[test]
    fn weyl_word_is_r_linear_and_lifts_with_identity_mu() {
        let t = a1();
        let w = weyl_reflection(&t, 0).unwrap();
        let theta = LoopAut::from_gaut(&t, w, "weyl:1", 1);
        let window = Window::new(1, 2);
        assert!(theta.bracket_violation(&t, &Window::new(1, 1)).unwrap().is_none());
        let out = solve_lift(&t, &theta, &Cocycle::kassel(1), &window).unwrap();
        let cert = out.certificate().expect("R-linear maps lift");
        assert!(cert.mu.base.is_none());
        assert!(cert.mu.scale.is_one());
        // gamma is discovered to vanish, not assumed
        assert!(cert.gamma.is_empty());
        let lifted = build_lifted(&theta, &Cocycle::kassel(1), cert).unwrap();
        assert!(lifted
            .automorphism_violation(&t, &Cocycle::kassel(1), &window)
            .unwrap()
            .is_none());
        match scalar_centre_action(&lifted, &window).unwrap() {
            ScalarAction::Scalar(l) => assert!(l.is_one()),
            ScalarAction::NotScalar { .. } => panic!("centre action must be scalar"),
        }
    }

    #[test]
    fn base_scaling_on_residue_line_has_unit_mu() {
        let t = a1();
        let theta = LoopAut::base(
            &t,
            RingAut::diagonal(vec![CycScalar::from_int(2)]).unwrap(),
        );
        let out = solve_lift(&t, &theta, &Cocycle::Residue, &Window::new(1, 2)).unwrap();
        let cert = out.certificate().expect("base scaling lifts to the residue line");
        assert!(cert.mu.scale.is_one());
        assert!(cert.gamma.is_empty());
    }

    #[test]
    fn monomial_torus_lifts_with_identity_mu() {
        let t = a1();
        let theta =
            LoopAut::monomial_torus(&t, &[(CycScalar::one(), exp1(1))]).unwrap();
        let out = solve_lift(&t, &theta, &Cocycle::kassel(1), &Window::new(1, 2)).unwrap();
        let cert = out.certificate().expect("torus lifts");
        assert!(cert.mu.scale.is_one());
        assert!(cert.mu.base.is_none());
    }

    #[test]
    fn ef_lift_detects_the_line_condition() {
        let t = build_split_simple(Series::A, 2).unwrap();
        let zeta = CycScalar::zeta(4);
        // sigma: row convention [[0,1],[-1,0]]; RingAut matrix is the transpose
        let sigma = RingAut::new(vec![vec![0, -1], vec![1, 0]], vec![CycScalar::one(); 2]).unwrap();
        let theta = LoopAut::base(&t, sigma);
        let out =
            solve_lift(&t, &theta, &Cocycle::ef(zeta.clone()), &Window::new(2, 1)).unwrap();
        let cert = out.certificate().expect("sigma lifts for zeta = i");
        assert_eq!(cert.mu.scale, zeta);
        assert!(cert.gamma.is_empty());

        // the shear [[1,1],[0,1]] does not lift for zeta = i
        let shear = RingAut::new(vec![vec![1, 0], vec![1, 1]], vec![CycScalar::one(); 2]).unwrap();
        let theta = LoopAut::base(&t, shear);
        let out = solve_lift(&t, &theta, &Cocycle::ef(zeta), &Window::new(2, 1)).unwrap();
        assert!(matches!(out, LiftOutcome::NoLift { .. }));
    }

    #[test]
    fn lifted_round_trip_is_identity() {
        let t = a1();
        let w = weyl_reflection(&t, 0).unwrap();
        let theta = LoopAut::from_gaut(&t, w, "weyl:1", 1);
        let c = Cocycle::kassel(1);
        let window = Window::new(1, 2);
        let cert = solve_lift(&t, &theta, &c, &window)
            .unwrap()
            .certificate()
            .cloned()
            .unwrap();
        let lifted = build_lifted(&theta, &c, &cert).unwrap();
        let x = ExtElement {
            loop_part: LoopElement::basis_monomial(t.e_index(0), exp1(2)),
            central: CentralValue::Class(crate::kahler::dlog_class(1, 0).scale(
                &CycScalar::from_rat(rat(3, 5)),
            )),
        };
        let round = lifted.apply_inverse(&lifted.apply(&x).unwrap()).unwrap();
        assert_eq!(round, x);
        let round = lifted.apply(&lifted.apply_inverse(&x).unwrap()).unwrap();
        assert_eq!(round, x);
    }

    #[test]
    fn stale_certificates_are_rejected() {
        let t = a1();
        let theta = LoopAut::identity(&t, 1);
        let cert = solve_lift(&t, &theta, &Cocycle::kassel(1), &Window::new(1, 1))
            .unwrap()
            .certificate()
            .cloned()
            .unwrap();
        let other = LoopAut::base(&t, RingAut::diagonal(vec![CycScalar::from_int(2)]).unwrap());
        assert!(matches!(
            build_lifted(&other, &Cocycle::kassel(1), &cert),
            Err(AutliftError::StaleCertificate(_, _))
        ));
        assert!(matches!(
            build_lifted(&theta, &Cocycle::Residue, &cert),
            Err(AutliftError::StaleCertificate(_, _))
        ));
    }

    #[test]
    fn base_lift_fixes_dlog_but_rotation_moves_it() {
        let t = a1();
        // t -> 3t fixes class(dlog t)
        let lifted = base_lift(&t, RingAut::diagonal(vec![CycScalar::from_int(3)]).unwrap());
        match scalar_centre_action(&lifted, &Window::new(1, 1)).unwrap() {
            ScalarAction::Scalar(l) => assert!(l.is_one()),
            _ => panic!("diagonal base lift is scalar on the centre"),
        }
        // two variables: sigma moves dlog t1 to dlog t2
        let t2 = build_split_simple(Series::A, 1).unwrap();
        let sigma =
            RingAut::new(vec![vec![0, -1], vec![1, 0]], vec![CycScalar::one(); 2]).unwrap();
        let lifted = base_lift(&t2, sigma);
        match scalar_centre_action(&lifted, &Window::new(2, 1)).unwrap() {
            ScalarAction::NotScalar { witness, image } => {
                assert!(witness.contains("dlog(t1)"));
                assert!(image.contains("dlog(t2)"));
            }
            ScalarAction::Scalar(_) => panic!("rotation is not scalar on the centre"),
        }
    }

    #[test]
    fn gl2z_tests_follow_the_line_equation() {
        let i = CycScalar::zeta(4);
        // sigma = [[0,1],[-1,0]] has mu = zeta_4
        let mu = gl2z_zeta_test(&[[0, 1], [-1, 0]], &i).unwrap().unwrap();
        assert_eq!(mu, i);
        // identity has mu = 1
        let mu = gl2z_zeta_test(&[[1, 0], [0, 1]], &i).unwrap().unwrap();
        assert!(mu.is_one());
        // the shear does not stabilize the line
        assert!(gl2z_zeta_test(&[[1, 1], [0, 1]], &i).unwrap().is_none());
        // non-unimodular input is an error
        assert!(gl2z_zeta_test(&[[2, 0], [0, 1]], &i).is_err());
    }

    #[test]
    fn gl2z_enumeration_for_zeta4_is_the_cyclic_group_of_order_four() {
        let i = CycScalar::zeta(4);
        for bound in [1, 2, 3] {
            let entries = gl2z_zeta_enumerate(&i, bound);
            assert_eq!(entries.len(), 4, "bound {bound}");
        }
        // mu is multiplicative: mu(MN) = mu(M) mu(N) within the group
        let entries = gl2z_zeta_enumerate(&i, 1);
        let mul = |a: &[[i64; 2]; 2], b: &[[i64; 2]; 2]| -> [[i64; 2]; 2] {
            let mut out = [[0i64; 2]; 2];
            for r in 0..2 {
                for c in 0..2 {
                    out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
                }
            }
            out
        };
        for x in &entries {
            for y in &entries {
                let prod = mul(&x.matrix, &y.matrix);
                let there = entries.iter().find(|e| e.matrix == prod).expect("closed");
                assert_eq!(there.mu, &x.mu * &y.mu);
            }
        }
    }

    #[test]
    fn gl2z_enumeration_for_zeta_zero_contains_unipotents() {
        let zero = CycScalar::zero();
        let entries = gl2z_zeta_enumerate(&zero, 2);
        assert!(entries.len() > 8);
        assert!(entries.iter().all(|e| e.matrix[1][0] == 0));
        assert!(entries.iter().any(|e| e.matrix == [[1, 1], [0, 1]]));
    }

    #[test]
    fn lift_and_line_test_agree_for_base_matrices() {
        // cross-check: solve_lift on the EF cocycle vs the closed line test
        let t = build_split_simple(Series::A, 2).unwrap();
        let zeta = CycScalar::zeta(4);
        let window = Window::new(2, 1);
        for m in [[[0i64, 1], [-1, 0]], [[1, 0], [0, 1]], [[1, 1], [0, 1]], [[0, 1], [1, 0]]] {
            let expected = gl2z_zeta_test(&m, &zeta).unwrap();
            // RingAut columns are images, so transpose the row convention.
            let a = vec![vec![m[0][0], m[1][0]], vec![m[0][1], m[1][1]]];
            let theta = LoopAut::base(&t, RingAut::new(a, vec![CycScalar::one(); 2]).unwrap());
            let out = solve_lift(&t, &theta, &Cocycle::ef(zeta.clone()), &window).unwrap();
            match (expected, out) {
                (Some(mu), LiftOutcome::Lifted(cert)) => assert_eq!(cert.mu.scale, mu),
                (None, LiftOutcome::NoLift { .. }) => {}
                (e, o) => panic!("disagreement: {e:?} vs {o:?}"),
            }
        }
    }

    #[test]
    fn useful_identity_holds_for_lifted_maps() {
        // theta_P([x,y]_P) = [theta x, theta y]_P: central parts of the
        // arguments are irrelevant on both sides.
        let t = a1();
        let c = Cocycle::kassel(1);
        let theta = LoopAut::monomial_torus(&t, &[(CycScalar::from_int(2), exp1(0))]).unwrap();
        let window = Window::new(1, 2);
        let cert = solve_lift(&t, &theta, &c, &window).unwrap().certificate().cloned().unwrap();
        let lifted = build_lifted(&theta, &c, &cert).unwrap();
        let x = ExtElement {
            loop_part: LoopElement::basis_monomial(t.e_index(0), exp1(1)),
            central: CentralValue::Class(crate::kahler::dlog_class(1, 0)),
        };
        let y = ExtElement {
            loop_part: LoopElement::basis_monomial(t.f_index(0), exp1(-1)),
            central: CentralValue::Class(crate::kahler::dlog_class(1, 0).scale(
                &CycScalar::from_int(7),
            )),
        };
        let lhs = lifted.apply(&ext_bracket(&t, &c, &x, &y).unwrap()).unwrap();
        let rhs = ext_bracket(&t, &c, &lifted.apply(&x).unwrap(), &lifted.apply(&y).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}
