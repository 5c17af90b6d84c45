//! Monomial automorphisms of Laurent polynomial rings:
//! t_i -> lambda_i * t^(A e_i) with A integral and det A = +-1.

use std::fmt;

use num::{One, Zero};

use super::{CycScalar, Exponent, LaurentPoly, Rat, ScalarError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingAut {
    nvars: usize,
    /// Row-major n x n integer matrix; column j is the exponent of the image
    /// of t_{j+1}, so monomials map by t^m -> (prod lambda_i^{m_i}) t^(A m).
    matrix: Vec<Vec<i64>>,
    scales: Vec<CycScalar>,
}

impl RingAut {
    pub fn new(matrix: Vec<Vec<i64>>, scales: Vec<CycScalar>) -> Result<Self, ScalarError> {
        let n = matrix.len();
        if matrix.iter().any(|row| row.len() != n) || scales.len() != n {
            return Err(ScalarError::NvarsMismatch(n, scales.len()));
        }
        if scales.iter().any(CycScalar::is_zero) {
            return Err(ScalarError::ZeroScale);
        }
        let det = int_det(&matrix);
        if !(det.is_one() || (-det.clone()).is_one()) {
            return Err(ScalarError::NotUnimodular(det.to_string()));
        }
        Ok(RingAut { nvars: n, matrix, scales })
    }

    pub fn identity(nvars: usize) -> Self {
        let matrix = (0..nvars)
            .map(|i| (0..nvars).map(|j| i64::from(i == j)).collect())
            .collect();
        RingAut { nvars, matrix, scales: vec![CycScalar::one(); nvars] }
    }

    /// Pure scaling t_i -> lambda_i t_i.
    pub fn diagonal(scales: Vec<CycScalar>) -> Result<Self, ScalarError> {
        let n = scales.len();
        Self::new(RingAut::identity(n).matrix, scales)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn scales(&self) -> &[CycScalar] {
        &self.scales
    }

    pub fn is_identity(&self) -> bool {
        self == &RingAut::identity(self.nvars)
    }

    /// Image exponent A*m of a monomial exponent m.
    pub fn map_exponent(&self, m: &Exponent) -> Exponent {
        let v = (0..self.nvars)
            .map(|i| (0..self.nvars).map(|j| self.matrix[i][j] * m.get(j)).sum())
            .collect();
        Exponent::new(v)
    }

    /// Coefficient prod_i lambda_i^{m_i} picked up by the monomial t^m.
    pub fn coefficient_of(&self, m: &Exponent) -> CycScalar {
        let mut c = CycScalar::one();
        for (i, mi) in m.iter().enumerate() {
            if mi != 0 {
                c = &c * &self.scales[i].pow(mi).expect("scales are nonzero");
            }
        }
        c
    }

    pub fn apply(&self, p: &LaurentPoly) -> Result<LaurentPoly, ScalarError> {
        if p.nvars() != self.nvars {
            return Err(ScalarError::NvarsMismatch(self.nvars, p.nvars()));
        }
        let mut out = LaurentPoly::zero(self.nvars);
        for (m, c) in p.terms() {
            let coeff = &self.coefficient_of(m) * c;
            out = &out + &LaurentPoly::monomial(self.map_exponent(m), coeff);
        }
        Ok(out)
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &RingAut) -> RingAut {
        assert_eq!(self.nvars, other.nvars);
        let n = self.nvars;
        let mut matrix = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                matrix[i][j] = (0..n).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum();
            }
        }
        // t_j -> other: mu_j t^(B e_j) -> self: mu_j * prod_i lambda_i^{B_ij} * t^(A B e_j)
        let scales = (0..n)
            .map(|j| {
                let col = Exponent::new((0..n).map(|i| other.matrix[i][j]).collect());
                &other.scales[j] * &self.coefficient_of(&col)
            })
            .collect();
        RingAut { nvars: n, matrix, scales }
    }

    pub fn inverse(&self) -> RingAut {
        let n = self.nvars;
        let inv = int_matrix_inverse(&self.matrix);
        let scales = (0..n)
            .map(|j| {
                let col = Exponent::new((0..n).map(|i| inv[i][j]).collect());
                self.coefficient_of(&col).inv().expect("scales are nonzero")
            })
            .collect();
        RingAut { nvars: n, matrix: inv, scales }
    }

    pub fn pow(&self, k: u32) -> RingAut {
        let mut out = RingAut::identity(self.nvars);
        for _ in 0..k {
            out = self.compose(&out);
        }
        out
    }

    /// Multiplicative order if found within `limit` compositions.
    pub fn order(&self, limit: u32) -> Result<u32, ScalarError> {
        let mut p = self.clone();
        for k in 1..=limit {
            if p.is_identity() {
                return Ok(k);
            }
            p = self.compose(&p);
        }
        Err(ScalarError::InfiniteOrder(limit))
    }

    /// Human-readable action, e.g. `t1 -> z4*t2, t2 -> t1^-1`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for j in 0..self.nvars {
            let col = Exponent::new((0..self.nvars).map(|i| self.matrix[i][j]).collect());
            let image = LaurentPoly::monomial(col, self.scales[j].clone());
            parts.push(format!("t{} -> {}", j + 1, image));
        }
        parts.join(", ")
    }
}

impl fmt::Display for RingAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

fn int_det(m: &[Vec<i64>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> =
        m.iter().map(|row| row.iter().map(|&x| Rat::from_integer(x.into())).collect()).collect();
    let mut det = Rat::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col].clone();
        let inv = Rat::one() / a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() * &inv;
            for c in col..n {
                let v = &factor * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    det
}

/// Inverse of a unimodular integer matrix (entries stay integral).
fn int_matrix_inverse(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> =
        m.iter().map(|row| row.iter().map(|&x| Rat::from_integer(x.into())).collect()).collect();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("unimodular matrix");
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let scale = Rat::one() / a[col][col].clone();
        for c in 0..n {
            a[col][c] *= &scale;
            inv[col][c] *= &scale;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let va = &factor * &a[col][c];
                a[r][c] -= va;
                let vi = &factor * &inv[col][c];
                inv[r][c] -= vi;
            }
        }
    }
    inv.iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    assert!(x.is_integer(), "inverse of unimodular matrix must be integral");
                    let v: num::BigInt = x.to_integer();
                    i64::try_from(v).expect("inverse entry fits in i64")
                })
                .collect()
        })
        .collect()
}
