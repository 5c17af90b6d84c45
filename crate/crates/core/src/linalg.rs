//! Dense exact linear algebra over cyclotomic scalars: reduced row echelon
//! form, kernels, solving, and span membership. Pivoting is deterministic
//! (first nonzero entry in column order), so every basis this module returns
//! is reproducible.

use crate::scalars::CycScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<CycScalar>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![CycScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = CycScalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CycScalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c));
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &CycScalar {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut CycScalar {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[CycScalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..self.cols {
            let Some(pr) = (lead..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(pr, lead);
            let inv = self.at(lead, col).inv().expect("pivot is nonzero");
            for c in col..self.cols {
                *self.at_mut(lead, c) = &*self.at(lead, c) * &inv;
            }
            for r in 0..self.rows {
                if r == lead || self.at(r, col).is_zero() {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for c in col..self.cols {
                    let v = &factor * self.at(lead, c);
                    *self.at_mut(r, c) = &*self.at(r, c) - &v;
                }
            }
            pivots.push(col);
            lead += 1;
            if lead == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel {x : M x = 0}, free variables set to one in
    /// column order.
    pub fn kernel_basis(&self) -> Vec<Vec<CycScalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = Some(i);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut x = vec![CycScalar::zero(); self.cols];
            x[free] = CycScalar::one();
            for (prow, &pc) in pivots.iter().enumerate() {
                x[pc] = -m.at(prow, free);
            }
            basis.push(x);
        }
        basis
    }

    /// One solution of `M x = rhs` (free variables zero), or `None` if the
    /// system is inconsistent.
    pub fn solve(&self, rhs: &[CycScalar]) -> Option<Vec<CycScalar>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = Mat::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *aug.at_mut(r, c) = self.at(r, c).clone();
            }
            *aug.at_mut(r, self.cols) = rhs[r].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![CycScalar::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug.at(row, self.cols).clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                *aug.at_mut(r, c) = self.at(r, c).clone();
            }
            *aug.at_mut(r, n + r) = CycScalar::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Mat::zero(n, n);
        for r in 0..n {
            for c in 0..n {
                *inv.at_mut(r, c) = aug.at(r, n + c).clone();
            }
        }
        Some(inv)
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = a * b;
                    *out.at_mut(r, c) = &*out.at(r, c) + &v;
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[CycScalar]) -> Vec<CycScalar> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = CycScalar::zero();
                for c in 0..self.cols {
                    let a = self.at(r, c);
                    if !a.is_zero() && !x[c].is_zero() {
                        acc = &acc + &(a * &x[c]);
                    }
                }
                acc
            })
            .collect()
    }
}

/// Row space built incrementally, for span membership and rank questions.
pub struct SpanBuilder {
    cols: usize,
    rows: Vec<Vec<CycScalar>>,
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub fn new(cols: usize) -> Self {
        SpanBuilder { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    /// Reduces `v` against the current span; returns true if the vector was
    /// new (increased the rank) and absorbs it.
    pub fn insert(&mut self, v: &[CycScalar]) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for c in 0..self.cols {
                let d = &factor * &row[c];
                v[c] = &v[c] - &d;
            }
        }
        let Some(p) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero");
        for c in &mut v {
            *c = &*c * &inv;
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: &[CycScalar]) -> bool {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for c in 0..self.cols {
                let d = &factor * &row[c];
                v[c] = &v[c] - &d;
            }
        }
        v.iter().all(CycScalar::is_zero)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, CycScalar};

    fn s(k: i64) -> CycScalar {
        CycScalar::from_int(k)
    }

    #[test]
    fn kernel_of_rank_one_matrix() {
        let m = Mat::from_rows(vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(6)]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).iter().all(CycScalar::is_zero));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let m = Mat::from_rows(vec![
            vec![s(2), s(1)],
            vec![CycScalar::zeta(4), s(1)],
        ]);
        let rhs = vec![s(3), s(0)];
        let x = m.solve(&rhs).unwrap();
        assert_eq!(m.apply(&x), rhs);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), Mat::identity(2));
        let singular = Mat::from_rows(vec![vec![s(1), s(2)], vec![s(2), s(4)]]);
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&[s(1), s(3)]).is_none());
    }

    #[test]
    fn span_membership() {
        let mut span = SpanBuilder::new(3);
        assert!(span.insert(&[s(1), s(0), s(1)]));
        assert!(span.insert(&[s(0), s(1), s(1)]));
        assert!(!span.insert(&[s(1), s(1), s(2)]));
        assert!(span.contains(&[s(2), s(-1), s(1)]));
        assert!(!span.contains(&[s(0), s(0), s(1)]));
        assert_eq!(span.rank(), 2);
        let half = CycScalar::from_rat(rat(1, 2));
        assert!(span.contains(&[half.clone(), half.clone(), &half + &half]));
    }
}
