//! Automorphisms of a split simple Lie algebra given by exact matrices on
//! the Chevalley basis: diagram automorphisms, exponentials of nilpotent
//! inner derivations, and diagonal torus elements.

use num::{One, Zero};

use super::{height, LieError, StructureTable};
use crate::exec::{self, ExecMode};
use crate::linalg::Mat;
use crate::scalars::{rat_int, CycScalar, Rat};

/// An automorphism of the finite dimensional algebra, stored as the matrix
/// of basis images (column j = image of basis vector j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAut {
    matrix: Mat,
    order: Option<u32>,
}

impl GAut {
    pub fn identity(dim: usize) -> Self {
        GAut { matrix: Mat::identity(dim), order: Some(1) }
    }

    pub fn from_matrix(matrix: Mat) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols());
        GAut { matrix, order: None }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn declared_order(&self) -> Option<u32> {
        self.order
    }

    pub fn apply(&self, v: &[CycScalar]) -> Vec<CycScalar> {
        self.matrix.apply(v)
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &GAut) -> GAut {
        GAut { matrix: self.matrix.matmul(&other.matrix), order: None }
    }

    pub fn inverse(&self) -> GAut {
        GAut {
            matrix: self.matrix.inverse().expect("automorphisms are invertible"),
            order: self.order,
        }
    }

    pub fn pow(&self, k: u32) -> GAut {
        let mut out = GAut::identity(self.dim());
        for _ in 0..k {
            out = self.compose(&out);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Mat::identity(self.dim())
    }

    /// Multiplicative order by repeated composition, verified exactly.
    pub fn order(&self, limit: u32) -> Result<u32, LieError> {
        let mut p = self.clone();
        for k in 1..=limit {
            if p.is_identity() {
                return Ok(k);
            }
            p = self.compose(&p);
        }
        Err(LieError::NoFiniteOrder(limit))
    }

    /// First pair of basis vectors on which brackets are not preserved.
    pub fn bracket_violation(&self, table: &StructureTable, mode: ExecMode) -> Option<String> {
        let dim = table.dim();
        assert_eq!(dim, self.dim());
        let cols: Vec<Vec<CycScalar>> =
            (0..dim).map(|j| (0..dim).map(|i| self.matrix.at(i, j).clone()).collect()).collect();
        let idx: Vec<usize> = (0..dim).collect();
        exec::find_first(mode, &idx, |&i| {
            for j in 0..dim {
                // Phi([b_i, b_j]) vs [Phi b_i, Phi b_j]
                let mut lhs = vec![CycScalar::zero(); dim];
                for (k, c) in table.bracket(i, j) {
                    let img = &cols[*k];
                    let cc = CycScalar::from_rat(c.clone());
                    for (l, v) in img.iter().enumerate() {
                        if !v.is_zero() {
                            lhs[l] = &lhs[l] + &(v * &cc);
                        }
                    }
                }
                let rhs = table.bracket_vec(&cols[i], &cols[j]);
                if lhs != rhs {
                    return Some(format!(
                        "bracket not preserved at ({}, {})",
                        table.label(i),
                        table.label(j)
                    ));
                }
            }
            None
        })
    }

    /// Exact eigenspace basis for the given eigenvalue.
    pub fn eigenspace(&self, lambda: &CycScalar) -> Vec<Vec<CycScalar>> {
        let dim = self.dim();
        let mut m = Mat::zero(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                let mut v = self.matrix.at(r, c).clone();
                if r == c {
                    v = &v - lambda;
                }
                *m.at_mut(r, c) = v;
            }
        }
        m.kernel_basis()
    }

    pub fn fixed_subspace(&self) -> Vec<Vec<CycScalar>> {
        self.eigenspace(&CycScalar::one())
    }

    /// Matrix entries as exact rationals; panics if any entry is irrational.
    pub fn rational_matrix(&self) -> Vec<Vec<Rat>> {
        let dim = self.dim();
        (0..dim)
            .map(|r| {
                (0..dim)
                    .map(|c| self.matrix.at(r, c).as_rational().expect("rational matrix"))
                    .collect()
            })
            .collect()
    }
}

/// The automorphism permuting Chevalley generators by a symmetry of the
/// Dynkin diagram, extended through bracket closure. The extension is
/// verified to preserve all brackets and to have the order of the node
/// permutation.
pub fn diagram_aut(table: &StructureTable, perm: &[usize]) -> Result<GAut, LieError> {
    let rank = table.rank();
    if perm.len() != rank {
        return Err(LieError::BadPermutation(format!(
            "permutation length {} does not match rank {rank}",
            perm.len()
        )));
    }
    let mut hit = vec![false; rank];
    for &p in perm {
        if p >= rank || hit[p] {
            return Err(LieError::BadPermutation("not a permutation of the nodes".into()));
        }
        hit[p] = true;
    }
    let cartan = table.cartan_matrix();
    for i in 0..rank {
        for j in 0..rank {
            if cartan[perm[i]][perm[j]] != cartan[i][j] {
                return Err(LieError::BadPermutation(format!(
                    "Cartan matrix not invariant at ({i}, {j})"
                )));
            }
        }
    }
    let g = extend_node_permutation(table, perm)?;
    if let Some(w) = g.bracket_violation(table, ExecMode::default()) {
        return Err(LieError::BadPermutation(w));
    }
    Ok(g)
}

/// Extension used both by `diagram_aut` and by the folding construction,
/// which validates the permutation itself.
pub(crate) fn diagram_aut_unchecked(
    table: &StructureTable,
    perm: &[usize],
) -> Result<GAut, LieError> {
    let g = extend_node_permutation(table, perm)?;
    debug_assert!(g.bracket_violation(table, ExecMode::Sequential).is_none());
    Ok(g)
}

fn extend_node_permutation(table: &StructureTable, perm: &[usize]) -> Result<GAut, LieError> {
    let rank = table.rank();
    let dim = table.dim();
    let npos = table.num_positive_roots();
    let roots = table.root_system();
    let mut columns: Vec<Option<Vec<CycScalar>>> = vec![None; dim];

    let basis_vec = |idx: usize| -> Vec<CycScalar> {
        let mut v = vec![CycScalar::zero(); dim];
        v[idx] = CycScalar::one();
        v
    };
    for i in 0..rank {
        columns[table.h_index(i)] = Some(basis_vec(table.h_index(perm[i])));
        columns[table.simple_e(i)] = Some(basis_vec(table.simple_e(perm[i])));
        columns[table.simple_f(i)] = Some(basis_vec(table.simple_f(perm[i])));
    }
    // Positive roots are sorted by height, so decompositions refer to
    // earlier entries.
    for k in 0..npos {
        if height(&roots.positive[k]) == 1 {
            continue;
        }
        let (i, j) = table.decomposition(k).expect("non-simple root decomposes");
        // e side
        let a = table.simple_e(i);
        let b = table.e_index(j);
        let n = single_constant(table, a, b, table.e_index(k))?;
        let img = table.bracket_vec(
            columns[a].as_ref().unwrap(),
            columns[b].as_ref().unwrap(),
        );
        columns[table.e_index(k)] =
            Some(scale_vec(&img, &CycScalar::from_rat(Rat::one() / n.clone())));
        // f side
        let a = table.simple_f(i);
        let b = table.f_index(j);
        let n = single_constant(table, a, b, table.f_index(k))?;
        let img = table.bracket_vec(
            columns[a].as_ref().unwrap(),
            columns[b].as_ref().unwrap(),
        );
        columns[table.f_index(k)] =
            Some(scale_vec(&img, &CycScalar::from_rat(Rat::one() / n)));
    }

    let mut m = Mat::zero(dim, dim);
    for (j, col) in columns.into_iter().enumerate() {
        let col = col.expect("all basis images constructed");
        for (i, v) in col.into_iter().enumerate() {
            *m.at_mut(i, j) = v;
        }
    }
    let mut g = GAut::from_matrix(m);
    g.order = Some(g.order(24)?);
    Ok(g)
}

fn single_constant(
    table: &StructureTable,
    a: usize,
    b: usize,
    target: usize,
) -> Result<Rat, LieError> {
    let entry = table.bracket(a, b);
    match entry.as_slice() {
        [(k, c)] if *k == target && !c.is_zero() => Ok(c.clone()),
        _ => Err(LieError::Mismatch(format!(
            "[{}, {}] is not a pure multiple of {}",
            table.label(a),
            table.label(b),
            table.label(target)
        ))),
    }
}

fn scale_vec(v: &[CycScalar], c: &CycScalar) -> Vec<CycScalar> {
    v.iter().map(|x| x * c).collect()
}

/// exp(ad x) for x a rational combination of basis vectors with nilpotent
/// ad (sums of root vectors on one side are the typical use).
pub fn exp_ad(table: &StructureTable, element: &[(usize, Rat)]) -> Result<GAut, LieError> {
    let dim = table.dim();
    for (idx, _) in element {
        if *idx >= dim {
            return Err(LieError::BadIndex(*idx, dim));
        }
    }
    // ad matrix over Q
    let mut ad = vec![vec![Rat::zero(); dim]; dim];
    for (idx, coeff) in element {
        for l in 0..dim {
            for (k, c) in table.bracket(*idx, l) {
                ad[*k][l] += coeff * c;
            }
        }
    }
    let matmul = |a: &Vec<Vec<Rat>>, b: &Vec<Vec<Rat>>| -> Vec<Vec<Rat>> {
        let mut out = vec![vec![Rat::zero(); dim]; dim];
        for r in 0..dim {
            for k in 0..dim {
                if a[r][k].is_zero() {
                    continue;
                }
                for c in 0..dim {
                    if !b[k][c].is_zero() {
                        out[r][c] += &a[r][k] * &b[k][c];
                    }
                }
            }
        }
        out
    };
    let mut total = vec![vec![Rat::zero(); dim]; dim];
    for (r, row) in total.iter_mut().enumerate() {
        row[r] = Rat::one();
    }
    let mut power = ad.clone();
    let mut factorial = Rat::one();
    let mut step = 1u64;
    loop {
        if power.iter().all(|row| row.iter().all(Zero::is_zero)) {
            break;
        }
        if step > 2 * dim as u64 + 4 {
            return Err(LieError::NotNilpotent);
        }
        for r in 0..dim {
            for c in 0..dim {
                if !power[r][c].is_zero() {
                    total[r][c] += &power[r][c] / &factorial;
                }
            }
        }
        power = matmul(&power, &ad);
        step += 1;
        factorial *= rat_int(step as i64);
    }
    let mut m = Mat::zero(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            *m.at_mut(r, c) = CycScalar::from_rat(total[r][c].clone());
        }
    }
    Ok(GAut::from_matrix(m))
}

/// The Weyl reflection automorphism exp(ad e_i) exp(ad -f_i) exp(ad e_i).
pub fn weyl_reflection(table: &StructureTable, i: usize) -> Result<GAut, LieError> {
    let e = exp_ad(table, &[(table.simple_e(i), Rat::one())])?;
    let f = exp_ad(table, &[(table.simple_f(i), -Rat::one())])?;
    Ok(e.compose(&f).compose(&e))
}

/// Diagonal torus automorphism acting on the root space g_b by the product
/// of `scales[i]^{b_i}`; the Cartan is fixed.
pub fn torus_aut(table: &StructureTable, scales: &[CycScalar]) -> Result<GAut, LieError> {
    if scales.len() != table.rank() {
        return Err(LieError::Mismatch(format!(
            "expected {} torus scales, got {}",
            table.rank(),
            scales.len()
        )));
    }
    if scales.iter().any(CycScalar::is_zero) {
        return Err(LieError::Mismatch("torus scales must be nonzero".into()));
    }
    let dim = table.dim();
    let mut m = Mat::zero(dim, dim);
    for idx in 0..dim {
        let w = table.basis_weight(idx);
        let mut c = CycScalar::one();
        for (i, wi) in w.iter().enumerate() {
            if *wi != 0 {
                c = &c * &scales[i].pow(*wi)?;
            }
        }
        *m.at_mut(idx, idx) = c;
    }
    Ok(GAut::from_matrix(m))
}
