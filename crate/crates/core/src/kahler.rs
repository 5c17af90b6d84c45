//! The k-space Omega_S/dS for S a Laurent polynomial ring: one-forms, the
//! universal differential, normal forms for classes modulo exact forms, the
//! action of monomial ring automorphisms, and fixed subspaces under finite
//! groups of them.
//!
//! One-forms are written sum_i b_i * dlog t_i with polynomial components
//! b_i. The space of classes is graded by monomial degree m; at m != 0 the
//! single relation class(sum_i m_i t^m dlog t_i) = 0 is pivoted away at the
//! first nonzero index of m, at m = 0 there is no relation.

use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::Mat;
use crate::scalars::{rat_int, CycScalar, Exponent, LaurentPoly, RingAut, ScalarError};
use crate::window::Window;

#[derive(Debug, Clone, thiserror::Error)]
pub enum KahlerError {
    #[error("mismatched variable count: {0} vs {1}")]
    NvarsMismatch(usize, usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A one-form sum_i comps[i] * dlog t_i (so a * dt_i is (a t_i) * dlog t_i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneForm {
    comps: Vec<LaurentPoly>,
}

impl OneForm {
    pub fn zero(nvars: usize) -> Self {
        OneForm { comps: vec![LaurentPoly::zero(nvars); nvars] }
    }

    pub fn new(comps: Vec<LaurentPoly>) -> Self {
        assert!(!comps.is_empty());
        let n = comps.len();
        assert!(comps.iter().all(|p| p.nvars() == n));
        OneForm { comps }
    }

    /// b * dlog t_i.
    pub fn dlog(i: usize, b: LaurentPoly) -> Self {
        let mut form = OneForm::zero(b.nvars());
        form.comps[i] = b;
        form
    }

    /// a * dt_i = (a t_i) * dlog t_i.
    pub fn a_dt(i: usize, a: &LaurentPoly) -> Self {
        let ti = LaurentPoly::var(a.nvars(), i);
        OneForm::dlog(i, a * &ti)
    }

    pub fn nvars(&self) -> usize {
        self.comps.len()
    }

    pub fn comp(&self, i: usize) -> &LaurentPoly {
        &self.comps[i]
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        assert_eq!(self.nvars(), other.nvars());
        OneForm { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &OneForm) -> OneForm {
        assert_eq!(self.nvars(), other.nvars());
        OneForm { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &CycScalar) -> OneForm {
        OneForm { comps: self.comps.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(LaurentPoly::is_zero)
    }
}

/// The universal differential: d(t^m) = sum_i m_i t^m dlog t_i, extended
/// linearly. Satisfies the Leibniz rule exactly.
pub fn differential(a: &LaurentPoly) -> OneForm {
    let n = a.nvars();
    let mut comps = vec![LaurentPoly::zero(n); n];
    for (m, c) in a.terms() {
        for (i, comp) in comps.iter_mut().enumerate() {
            let mi = m.get(i);
            if mi != 0 {
                let coeff = &CycScalar::from_rat(rat_int(mi)) * c;
                *comp = &*comp + &LaurentPoly::monomial(m.clone(), coeff);
            }
        }
    }
    OneForm { comps }
}

/// A class in Omega_S/dS in normal form: per degree m a coefficient vector
/// c with c[pivot(m)] = 0 for m != 0 (pivot = first nonzero index of m)
/// and no constraint at m = 0. Two one-forms map to equal classes iff they
/// differ by an exact form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialClass {
    nvars: usize,
    graded: BTreeMap<Exponent, Vec<CycScalar>>,
}

impl DifferentialClass {
    pub fn zero(nvars: usize) -> Self {
        DifferentialClass { nvars, graded: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.graded.is_empty()
    }

    pub fn graded(&self) -> impl Iterator<Item = (&Exponent, &[CycScalar])> {
        self.graded.iter().map(|(m, c)| (m, c.as_slice()))
    }

    pub fn component(&self, m: &Exponent) -> Vec<CycScalar> {
        self.graded.get(m).cloned().unwrap_or_else(|| vec![CycScalar::zero(); self.nvars])
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.graded.keys()
    }

    fn insert_normalized(&mut self, m: Exponent, mut c: Vec<CycScalar>) {
        if let Some(pivot) = m.first_nonzero() {
            if !c[pivot].is_zero() {
                // kill the pivot with the relation class(d(t^m)) = 0
                let ratio = &c[pivot]
                    * &CycScalar::from_rat(rat_int(m.get(pivot))).inv().expect("pivot nonzero");
                for (i, ci) in c.iter_mut().enumerate() {
                    let delta = &ratio * &CycScalar::from_rat(rat_int(m.get(i)));
                    *ci = &*ci - &delta;
                }
            }
            debug_assert!(c[pivot].is_zero());
        }
        if c.iter().all(CycScalar::is_zero) {
            self.graded.remove(&m);
        } else {
            self.graded.insert(m, c);
        }
    }

    pub fn add(&self, other: &DifferentialClass) -> DifferentialClass {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.graded {
            let mut cur = out.component(m);
            for (a, b) in cur.iter_mut().zip(c) {
                *a = &*a + b;
            }
            out.insert_normalized(m.clone(), cur);
        }
        out
    }

    pub fn sub(&self, other: &DifferentialClass) -> DifferentialClass {
        self.add(&other.scale(&CycScalar::from_int(-1)))
    }

    pub fn scale(&self, k: &CycScalar) -> DifferentialClass {
        if k.is_zero() {
            return DifferentialClass::zero(self.nvars);
        }
        DifferentialClass {
            nvars: self.nvars,
            graded: self
                .graded
                .iter()
                .map(|(m, c)| (m.clone(), c.iter().map(|x| x * k).collect()))
                .collect(),
        }
    }

    /// A one-form representing this class.
    pub fn representative(&self) -> OneForm {
        let mut form = OneForm::zero(self.nvars);
        for (m, c) in &self.graded {
            for (i, ci) in c.iter().enumerate() {
                if !ci.is_zero() {
                    form.comps[i] = &form.comps[i] + &LaurentPoly::monomial(m.clone(), ci.clone());
                }
            }
        }
        form
    }

    /// Coordinates of the degree-m component in the free (non-pivot)
    /// positions; length n-1 for m != 0 and n for m = 0.
    pub fn normal_coords(&self, m: &Exponent) -> Vec<CycScalar> {
        let c = self.component(m);
        match m.first_nonzero() {
            None => c,
            Some(p) => {
                c.into_iter().enumerate().filter(|(i, _)| *i != p).map(|(_, v)| v).collect()
            }
        }
    }
}

impl fmt::Display for DifferentialClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.graded.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (m, c) in &self.graded {
            for (i, ci) in c.iter().enumerate() {
                if ci.is_zero() {
                    continue;
                }
                let mono = LaurentPoly::monomial(m.clone(), ci.clone());
                let body =
                    if mono.term_count() == 1 { format!("{mono}") } else { format!("({mono})") };
                parts.push(format!("{body}*dlog(t{})", i + 1));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl serde::Serialize for DifferentialClass {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

/// The quotient map Omega_S -> Omega_S/dS in normal form. bar(d a) = 0.
pub fn bar(form: &OneForm) -> DifferentialClass {
    let n = form.nvars();
    let mut by_degree: BTreeMap<Exponent, Vec<CycScalar>> = BTreeMap::new();
    for (i, comp) in form.comps.iter().enumerate() {
        for (m, c) in comp.terms() {
            by_degree.entry(m.clone()).or_insert_with(|| vec![CycScalar::zero(); n])[i] = c.clone();
        }
    }
    let mut out = DifferentialClass::zero(n);
    for (m, c) in by_degree {
        out.insert_normalized(m, c);
    }
    out
}

/// Class of dlog t_i = t_i^{-1} dt_i.
pub fn dlog_class(nvars: usize, i: usize) -> DifferentialClass {
    bar(&OneForm::dlog(i, LaurentPoly::one(nvars)))
}

/// Action of a ring automorphism on a one-form:
/// theta(b dlog t_i) = theta(b) * dlog(theta t_i), where dlog of a monomial
/// image expands through the exponent matrix.
pub fn aut_act_oneform(theta: &RingAut, form: &OneForm) -> Result<OneForm, KahlerError> {
    let n = form.nvars();
    if theta.nvars() != n {
        return Err(KahlerError::NvarsMismatch(theta.nvars(), n));
    }
    let mut out = OneForm::zero(n);
    for i in 0..n {
        if form.comps[i].is_zero() {
            continue;
        }
        let image = theta.apply(&form.comps[i])?;
        // dlog(theta t_i) = sum_j A_ji dlog t_j
        for j in 0..n {
            let a = theta.matrix()[j][i];
            if a != 0 {
                out.comps[j] = &out.comps[j] + &image.scale(&CycScalar::from_rat(rat_int(a)));
            }
        }
    }
    Ok(out)
}

/// Induced action on classes; well-defined because theta(d a) = d(theta a).
pub fn aut_act_class(
    theta: &RingAut,
    z: &DifferentialClass,
) -> Result<DifferentialClass, KahlerError> {
    Ok(bar(&aut_act_oneform(theta, &z.representative())?))
}

/// Per-degree dimension of Omega_S/dS in normal form: n at degree zero and
/// n-1 elsewhere.
pub fn class_dim(nvars: usize, m: &Exponent) -> usize {
    if m.is_zero() {
        nvars
    } else {
        nvars - 1
    }
}

/// Basis classes of the degree-m component, in pivot-free coordinate order.
pub fn class_basis_at(nvars: usize, m: &Exponent) -> Vec<DifferentialClass> {
    let pivot = m.first_nonzero();
    let mut out = Vec::new();
    for i in 0..nvars {
        if Some(i) == pivot {
            continue;
        }
        let mut z = DifferentialClass::zero(nvars);
        let mut c = vec![CycScalar::zero(); nvars];
        c[i] = CycScalar::one();
        z.insert_normalized(m.clone(), c);
        out.push(z);
    }
    out
}

/// The inclusion Omega_R/dR -> Omega_S/dS induced by t_i = s_i^{orders[i]}:
/// t^m dlog t_i pulls back to orders[i] * s^(orders * m) dlog s_i.
pub fn embed_class(z: &DifferentialClass, orders: &[i64]) -> DifferentialClass {
    let n = z.nvars();
    assert_eq!(orders.len(), n);
    let mut form = OneForm::zero(n);
    for (m, c) in z.graded() {
        let stretched = m.stretch(orders);
        for (i, ci) in c.iter().enumerate() {
            if !ci.is_zero() {
                let coeff = ci * &CycScalar::from_rat(rat_int(orders[i]));
                form.comps[i] = &form.comps[i] + &LaurentPoly::monomial(stretched.clone(), coeff);
            }
        }
    }
    bar(&form)
}

/// Exact basis of the subspace of the window-truncated Omega_S/dS fixed by
/// the finite group generated by the given automorphisms.
///
/// Degrees whose orbit under the generators' exponent action leaves the
/// window are excluded (the diagonal actions used in descent always stay
/// inside). Each generator must have finite order; every basis element
/// returned is verified fixed.
pub fn fixed_classes(
    generators: &[RingAut],
    window: &Window,
) -> Result<Vec<DifferentialClass>, KahlerError> {
    let n = window.nvars;
    for g in generators {
        if g.nvars() != n {
            return Err(KahlerError::NvarsMismatch(g.nvars(), n));
        }
        g.order(512)?;
    }

    // Degrees whose orbit stays inside the window, in deterministic order.
    let mut stable: Vec<Exponent> = Vec::new();
    'deg: for m in window.exponents() {
        for g in generators {
            let mut cur = g.map_exponent(&m);
            while cur != m {
                if !window.contains(&cur) {
                    continue 'deg;
                }
                cur = g.map_exponent(&cur);
            }
        }
        stable.push(m);
    }

    let mut offsets = Vec::with_capacity(stable.len());
    let mut total = 0usize;
    for m in &stable {
        offsets.push(total);
        total += class_dim(n, m);
    }
    let mut basis_classes = Vec::with_capacity(total);
    for m in &stable {
        basis_classes.extend(class_basis_at(n, m));
    }
    if generators.is_empty() {
        return Ok(basis_classes);
    }
    let coord_of = |z: &DifferentialClass| -> Vec<CycScalar> {
        let mut v = vec![CycScalar::zero(); total];
        for (m, _) in z.graded() {
            let idx = stable.binary_search(m).expect("degree is window-stable");
            for (k, c) in z.normal_coords(m).into_iter().enumerate() {
                v[offsets[idx] + k] = c;
            }
        }
        v
    };

    // Stack (M_g - I) over all generators; the kernel is the fixed space.
    let mut rows: Vec<Vec<CycScalar>> = Vec::new();
    for g in generators {
        let images: Vec<Vec<CycScalar>> =
            basis_classes.iter().map(|z| coord_of(&aut_act_class(g, z).unwrap())).collect();
        for r in 0..total {
            let mut row = Vec::with_capacity(total);
            for (c, img) in images.iter().enumerate() {
                let mut v = img[r].clone();
                if c == r {
                    v = &v - &CycScalar::one();
                }
                row.push(v);
            }
            rows.push(row);
        }
    }
    let kernel = Mat::from_rows(rows).kernel_basis();

    let mut out = Vec::new();
    for coords in kernel {
        let mut z = DifferentialClass::zero(n);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                z = z.add(&basis_classes[i].scale(c));
            }
        }
        for g in generators {
            assert_eq!(aut_act_class(g, &z)?, z, "fixed basis element moved");
        }
        out.push(z);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{parse_laurent, rat};

    fn poly(s: &str, n: usize) -> LaurentPoly {
        parse_laurent(s, n).unwrap()
    }

    #[test]
    fn differential_of_constants_and_powers() {
        assert!(differential(&LaurentPoly::one(1)).is_zero());
        // d(t^3) = 3 t^3 dlog t
        let d = differential(&poly("t1^3", 1));
        assert_eq!(d.comp(0), &poly("3*t1^3", 1));
        // Leibniz instance d(t1 t2)
        let d = differential(&poly("t1*t2", 2));
        assert_eq!(d.comp(0), &poly("t1*t2", 2));
        assert_eq!(d.comp(1), &poly("t1*t2", 2));
    }

    #[test]
    fn leibniz_rule_holds() {
        let a = poly("t1^2 + 3*t2", 2);
        let b = poly("t1^-1*t2 - 1/2", 2);
        let lhs = differential(&a.checked_mul(&b).unwrap());
        let da = differential(&a);
        let db = differential(&b);
        let mut rhs = OneForm::zero(2);
        for i in 0..2 {
            rhs.comps[i] = &(da.comp(i) * &b) + &(db.comp(i) * &a);
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bar_kills_exact_forms() {
        // bar(dt) = 0 in one variable
        assert!(bar(&OneForm::a_dt(0, &LaurentPoly::one(1))).is_zero());
        // bar(t^-1 dt) is the class with m = 0, c = (1)
        let z = bar(&OneForm::dlog(0, LaurentPoly::one(1)));
        assert_eq!(z.component(&Exponent::zero(1)), vec![CycScalar::one()]);
        assert!(!z.is_zero());
    }

    #[test]
    fn bar_normal_form_of_t1_t2_dt1() {
        // bar(t1 t2 dt1) = -1/2 class(t1^2 t2 dlog t2), frozen from the
        // exactness oracle below.
        let z = bar(&OneForm::a_dt(0, &poly("t1*t2", 2)));
        let m = Exponent::new(vec![2, 1]);
        let c = z.component(&m);
        assert!(c[0].is_zero());
        assert_eq!(c[1], CycScalar::from_rat(rat(-1, 2)));
        // oracle: subtracting (1/2) d(t1^2 t2) reaches the same class
        let exact = differential(&poly("t1^2*t2", 2)).scale(&CycScalar::from_rat(rat(1, 2)));
        let direct = bar(&OneForm::a_dt(0, &poly("t1*t2", 2)).sub(&exact));
        assert_eq!(direct, z);
    }

    #[test]
    fn bar_of_differential_vanishes_on_window_monomials() {
        for m in Window::new(2, 2).exponents() {
            let a = LaurentPoly::monomial(m, CycScalar::from_rat(rat(3, 7)));
            assert!(bar(&differential(&a)).is_zero());
        }
    }

    #[test]
    fn normal_form_is_representative_independent() {
        let omega = OneForm::a_dt(1, &poly("t1^2*t2 - t1", 2));
        let noise = differential(&poly("t1^3 + 5*t1*t2^2 - 1/3*t2", 2));
        assert_eq!(bar(&omega.add(&noise)), bar(&omega));
    }

    #[test]
    fn scaling_action_fixes_dlog_classes() {
        // theta: t -> 2t fixes class(t^-1 dt)
        let th = RingAut::diagonal(vec![CycScalar::from_int(2)]).unwrap();
        let z = dlog_class(1, 0);
        assert_eq!(aut_act_class(&th, &z).unwrap(), z);
        // s -> -s fixes class(s^-1 ds)
        let neg = RingAut::diagonal(vec![CycScalar::from_int(-1)]).unwrap();
        assert_eq!(aut_act_class(&neg, &z).unwrap(), z);
    }

    #[test]
    fn rotation_moves_dlog_classes() {
        // sigma(t1) = t2, sigma(t2) = t1^-1 maps dlog t1 to dlog t2
        let sigma = RingAut::new(vec![vec![0, -1], vec![1, 0]], vec![CycScalar::one(); 2]).unwrap();
        let z1 = dlog_class(2, 0);
        let z2 = dlog_class(2, 1);
        assert_eq!(aut_act_class(&sigma, &z1).unwrap(), z2);
    }

    #[test]
    fn aut_action_round_trips() {
        let th = RingAut::new(
            vec![vec![1, 1], vec![0, 1]],
            vec![CycScalar::zeta(4), CycScalar::from_int(3)],
        )
        .unwrap();
        let z = bar(&OneForm::a_dt(0, &poly("t1*t2 + t2^-2", 2)));
        let back = aut_act_class(&th.inverse(), &aut_act_class(&th, &z).unwrap()).unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn fixed_classes_of_the_trivial_group_is_the_full_window() {
        let basis = fixed_classes(&[], &Window::new(1, 2)).unwrap();
        assert_eq!(basis.len(), 1);
        let basis = fixed_classes(&[], &Window::new(2, 1)).unwrap();
        // 9 degrees: 2 at zero, 1 at each of the other 8
        assert_eq!(basis.len(), 10);
    }

    #[test]
    fn sign_flip_group_in_one_variable_fixes_only_dlog() {
        let neg = RingAut::diagonal(vec![CycScalar::from_int(-1)]).unwrap();
        let basis = fixed_classes(&[neg], &Window::new(1, 2)).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], dlog_class(1, 0));
    }

    #[test]
    fn embedding_scales_dlog_by_the_cover_degree() {
        // t = s^2: class(t^-1 dt) = 2 class(s^-1 ds)
        let z = dlog_class(1, 0);
        let embedded = embed_class(&z, &[2]);
        assert_eq!(embedded, dlog_class(1, 0).scale(&CycScalar::from_int(2)));
    }

    #[test]
    fn class_dims_match_the_brute_force_oracle() {
        for n in [1usize, 2, 3] {
            for m in Window::new(n, 2).exponents() {
                let expect = if m.is_zero() { n } else { n - 1 };
                assert_eq!(class_dim(n, &m), expect);
                assert_eq!(class_basis_at(n, &m).len(), expect);
            }
        }
    }

    #[test]
    fn infinite_order_generators_are_rejected() {
        let shear = RingAut::new(vec![vec![1, 1], vec![0, 1]], vec![CycScalar::one(); 2]).unwrap();
        assert!(fixed_classes(&[shear], &Window::new(2, 1)).is_err());
    }
}
