//! Split simple Lie algebras in a Chevalley basis, their finite-order
//! automorphisms, and loop algebras g (x) S.

mod aut;
mod build;
mod loops;
mod roots;

pub use aut::{diagram_aut, exp_ad, torus_aut, weyl_reflection, GAut};
pub use loops::{loop_killing, LoopElement};
pub use roots::{height, RootSystem};

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use crate::exec::{self, ExecMode};
use crate::scalars::{CycScalar, Rat};

#[derive(Debug, Clone, thiserror::Error)]
pub enum LieError {
    #[error("unsupported algebra {0}; supported: A1, A2, A3, B2, C3, D4, G2")]
    Unsupported(String),
    #[error("cannot parse algebra name {0:?}")]
    BadName(String),
    #[error("not a diagram symmetry: {0}")]
    BadPermutation(String),
    #[error("basis index {0} out of range (dim {1})")]
    BadIndex(usize, usize),
    #[error("mismatched data: {0}")]
    Mismatch(String),
    #[error("ad is not nilpotent for this element")]
    NotNilpotent,
    #[error("map does not have finite order within bound {0}")]
    NoFiniteOrder(u32),
    #[error(transparent)]
    Scalar(#[from] crate::scalars::ScalarError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// An algebra name such as `A2` or `D4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SeriesRank {
    pub series: Series,
    pub rank: usize,
}

impl SeriesRank {
    pub fn new(series: Series, rank: usize) -> Self {
        SeriesRank { series, rank }
    }

    pub fn parse(name: &str) -> Result<Self, LieError> {
        let mut chars = name.chars();
        let series = match chars.next() {
            Some('A') | Some('a') => Series::A,
            Some('B') | Some('b') => Series::B,
            Some('C') | Some('c') => Series::C,
            Some('D') | Some('d') => Series::D,
            Some('E') | Some('e') => Series::E,
            Some('F') | Some('f') => Series::F,
            Some('G') | Some('g') => Series::G,
            _ => return Err(LieError::BadName(name.into())),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| LieError::BadName(name.into()))?;
        Ok(SeriesRank { series, rank })
    }
}

impl fmt::Display for SeriesRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

/// Sparse vector of structure constants: coefficients on basis indices.
pub type SparseVec = Vec<(usize, Rat)>;

/// A split simple Lie algebra in a Chevalley basis.
///
/// Basis layout: `h_1..h_r`, then `e_b` for positive roots `b` sorted by
/// (height, lex), then the matching `f_b`. All structure constants are
/// integers; the Killing form is the trace form of ad composed with ad.
#[derive(Clone, Debug)]
pub struct StructureTable {
    name: SeriesRank,
    roots: RootSystem,
    dim: usize,
    labels: Vec<String>,
    brackets: Vec<Vec<SparseVec>>,
    killing: Vec<Vec<Rat>>,
    /// For each non-simple positive root k: (i, j) with
    /// root_k = alpha_i + root_j, used to extend generator maps.
    decomp: Vec<Option<(usize, usize)>>,
}

/// Construct the algebra of the given type. Supported desk-scale set:
/// A1, A2, A3, B2, C3, D4, G2.
pub fn build_split_simple(series: Series, rank: usize) -> Result<StructureTable, LieError> {
    build::build(series, rank)
}

impl StructureTable {
    pub(crate) fn assemble(
        name: SeriesRank,
        roots: RootSystem,
        brackets: Vec<Vec<SparseVec>>,
        decomp: Vec<Option<(usize, usize)>>,
    ) -> Self {
        let rank = roots.rank;
        let npos = roots.num_positive();
        let dim = rank + 2 * npos;
        let mut labels = Vec::with_capacity(dim);
        for i in 0..rank {
            labels.push(format!("h{}", i + 1));
        }
        for sign in ["e", "f"] {
            for k in 0..npos {
                let coords: Vec<String> =
                    roots.positive[k].iter().map(|c| c.to_string()).collect();
                labels.push(format!("{sign}[{}]", coords.join(",")));
            }
        }
        let killing = killing_from_brackets(dim, &brackets);
        StructureTable { name, roots, dim, labels, brackets, killing, decomp }
    }

    pub fn name(&self) -> SeriesRank {
        self.name
    }

    pub fn rank(&self) -> usize {
        self.roots.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.labels[idx]
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.roots.num_positive()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.roots.cartan
    }

    /// Basis index of h_i.
    pub fn h_index(&self, i: usize) -> usize {
        debug_assert!(i < self.rank());
        i
    }

    /// Basis index of e for the k-th positive root.
    pub fn e_index(&self, k: usize) -> usize {
        self.rank() + k
    }

    /// Basis index of f for the k-th positive root.
    pub fn f_index(&self, k: usize) -> usize {
        self.rank() + self.num_positive_roots() + k
    }

    /// Basis index of the e-generator of the i-th simple root.
    pub fn simple_e(&self, i: usize) -> usize {
        let coords: Vec<i64> = (0..self.rank()).map(|j| i64::from(i == j)).collect();
        self.e_index(self.roots.pos_index(&coords).expect("simple root"))
    }

    pub fn simple_f(&self, i: usize) -> usize {
        self.simple_e(i) + self.num_positive_roots()
    }

    /// Signed root coordinates of a basis vector (zeros for Cartan).
    pub fn basis_weight(&self, idx: usize) -> Vec<i64> {
        let rank = self.rank();
        let npos = self.num_positive_roots();
        if idx < rank {
            vec![0; rank]
        } else if idx < rank + npos {
            self.roots.positive[idx - rank].clone()
        } else {
            self.roots.positive[idx - rank - npos].iter().map(|c| -c).collect()
        }
    }

    pub(crate) fn decomposition(&self, pos_k: usize) -> Option<(usize, usize)> {
        self.decomp[pos_k]
    }

    /// Bracket of two basis vectors as a sparse coefficient vector.
    pub fn bracket(&self, i: usize, j: usize) -> &SparseVec {
        &self.brackets[i][j]
    }

    /// The Killing form (x|y) = trace(ad x . ad y) on basis indices.
    pub fn killing(&self, i: usize, j: usize) -> &Rat {
        &self.killing[i][j]
    }

    /// Bracket of dense coefficient vectors over cyclotomic scalars.
    pub fn bracket_vec(&self, x: &[CycScalar], y: &[CycScalar]) -> Vec<CycScalar> {
        let mut out = vec![CycScalar::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, v) in &self.brackets[i][j] {
                    let term = &c * &CycScalar::from_rat(v.clone());
                    out[*k] = &out[*k] + &term;
                }
            }
        }
        out
    }

    /// Same over exact rationals (structure constants are rational).
    pub fn bracket_vec_rat(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, v) in &self.brackets[i][j] {
                    out[*k] += &c * v;
                }
            }
        }
        out
    }

    /// Exhaustive structural verification: antisymmetry on all pairs, the
    /// Jacobi identity on all triples, the Killing form recomputed as the
    /// ad-trace form, and its invariance on all triples. Exact equality.
    pub fn verify(&self, mode: ExecMode) -> AlgebraReport {
        let dim = self.dim;
        let mut report = AlgebraReport {
            algebra: self.name.to_string(),
            dim,
            antisymmetry_pairs: (dim * dim) as u64,
            jacobi_triples: (dim * dim * dim) as u64,
            killing_pairs: (dim * dim) as u64,
            invariance_triples: (dim * dim * dim) as u64,
            status: CheckStatus::Pass,
            witness: None,
        };

        // Antisymmetry (quadratic, done on one thread).
        for i in 0..dim {
            for j in 0..dim {
                let mut sum: BTreeMap<usize, Rat> = BTreeMap::new();
                for (k, c) in &self.brackets[i][j] {
                    *sum.entry(*k).or_insert_with(Rat::zero) += c;
                }
                for (k, c) in &self.brackets[j][i] {
                    *sum.entry(*k).or_insert_with(Rat::zero) += c;
                }
                if sum.values().any(|c| !c.is_zero()) {
                    report.fail(format!(
                        "antisymmetry fails at [{}, {}]",
                        self.labels[i], self.labels[j]
                    ));
                    return report;
                }
            }
        }

        // Jacobi over all triples, sharded on the first index.
        let idx: Vec<usize> = (0..dim).collect();
        let witness = exec::find_first(mode, &idx, |&i| {
            for j in 0..dim {
                for k in 0..dim {
                    let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
                    self.add_double_bracket(&mut acc, i, j, k);
                    self.add_double_bracket(&mut acc, j, k, i);
                    self.add_double_bracket(&mut acc, k, i, j);
                    if acc.values().any(|c| !c.is_zero()) {
                        return Some(format!(
                            "Jacobi fails at ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                    }
                }
            }
            None
        });
        if let Some(w) = witness {
            report.fail(w);
            return report;
        }

        // Killing form: symmetry and agreement with the ad-trace.
        for i in 0..dim {
            for j in 0..dim {
                let trace = self.ad_trace(i, j);
                if trace != self.killing[i][j] || self.killing[i][j] != self.killing[j][i] {
                    report.fail(format!(
                        "Killing form mismatch at ({}, {})",
                        self.labels[i], self.labels[j]
                    ));
                    return report;
                }
            }
        }

        // Invariance ([x,y]|z) = (x|[y,z]) on all triples.
        let witness = exec::find_first(mode, &idx, |&i| {
            for j in 0..dim {
                for k in 0..dim {
                    let mut lhs = Rat::zero();
                    for (l, c) in &self.brackets[i][j] {
                        lhs += c * &self.killing[*l][k];
                    }
                    let mut rhs = Rat::zero();
                    for (l, c) in &self.brackets[j][k] {
                        rhs += c * &self.killing[i][*l];
                    }
                    if lhs != rhs {
                        return Some(format!(
                            "Killing invariance fails at ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                    }
                }
            }
            None
        });
        if let Some(w) = witness {
            report.fail(w);
        }
        report
    }

    fn add_double_bracket(&self, acc: &mut BTreeMap<usize, Rat>, i: usize, j: usize, k: usize) {
        // acc += [[b_i, b_j], b_k]
        for (l, c) in &self.brackets[i][j] {
            for (m, d) in &self.brackets[*l][k] {
                *acc.entry(*m).or_insert_with(Rat::zero) += c * d;
            }
        }
    }

    /// trace(ad b_i . ad b_j), recomputed from the bracket table.
    pub fn ad_trace(&self, i: usize, j: usize) -> Rat {
        let mut acc = Rat::zero();
        for l in 0..self.dim {
            // coefficient of b_l in [b_i, [b_j, b_l]]
            for (m, d) in &self.brackets[j][l] {
                for (k, c) in &self.brackets[i][*m] {
                    if *k == l {
                        acc += c * d;
                    }
                }
            }
        }
        acc
    }

    /// Versioned textual serialization for golden files.
    pub fn serialize_text(&self) -> String {
        let mut out = String::new();
        out.push_str("loopext-table v1\n");
        out.push_str(&format!("name {}\n", self.name));
        out.push_str(&format!("rank {}\n", self.rank()));
        out.push_str(&format!("dim {}\n", self.dim));
        for row in self.cartan_matrix() {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("cartan {}\n", cells.join(" ")));
        }
        out.push_str(&format!("labels {}\n", self.labels.join(" ")));
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i >= j || self.brackets[i][j].is_empty() {
                    continue;
                }
                let cells: Vec<String> = self.brackets[i][j]
                    .iter()
                    .map(|(k, c)| format!("{}:{}", self.labels[*k], c))
                    .collect();
                out.push_str(&format!(
                    "bracket {} {} = {}\n",
                    self.labels[i],
                    self.labels[j],
                    cells.join(" ")
                ));
            }
        }
        out
    }
}

fn killing_from_brackets(dim: usize, brackets: &[Vec<SparseVec>]) -> Vec<Vec<Rat>> {
    let mut killing = vec![vec![Rat::zero(); dim]; dim];
    for i in 0..dim {
        for j in i..dim {
            let mut acc = Rat::zero();
            for l in 0..dim {
                for (m, d) in &brackets[j][l] {
                    for (k, c) in &brackets[i][*m] {
                        if *k == l {
                            acc += c * d;
                        }
                    }
                }
            }
            killing[i][j] = acc.clone();
            killing[j][i] = acc;
        }
    }
    killing
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct AlgebraReport {
    pub algebra: String,
    pub dim: usize,
    pub antisymmetry_pairs: u64,
    pub jacobi_triples: u64,
    pub killing_pairs: u64,
    pub invariance_triples: u64,
    pub status: CheckStatus,
    pub witness: Option<String>,
}

impl AlgebraReport {
    fn fail(&mut self, witness: String) {
        self.status = CheckStatus::Fail;
        self.witness = Some(witness);
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}
