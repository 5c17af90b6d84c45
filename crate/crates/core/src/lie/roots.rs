//! Root systems enumerated from a Cartan matrix by closing root strings
//! upward in height.

use std::collections::BTreeMap;

use num::Zero;

use crate::scalars::{rat_int, Rat};

/// Convention: `cartan[i][j]` is the pairing of the i-th simple root with
/// the j-th simple coroot, so the pairing of a root `b = sum c_j alpha_j`
/// with the i-th coroot is `sum_j c_j * cartan[j][i]`.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, sorted by (height, lex).
    pub positive: Vec<Vec<i64>>,
    index: BTreeMap<Vec<i64>, usize>,
    /// Half norms d_i = (alpha_i, alpha_i)/2, scaled so the minimum is 1.
    pub norm_half: Vec<Rat>,
}

pub fn height(coords: &[i64]) -> i64 {
    coords.iter().sum()
}

impl RootSystem {
    pub fn new(cartan: Vec<Vec<i64>>) -> Self {
        let rank = cartan.len();
        assert!(cartan.iter().all(|row| row.len() == rank));
        for i in 0..rank {
            assert_eq!(cartan[i][i], 2, "Cartan diagonal must be 2");
            for j in 0..rank {
                if i != j {
                    assert!(cartan[i][j] <= 0, "off-diagonal entries must be <= 0");
                    assert_eq!(cartan[i][j] == 0, cartan[j][i] == 0, "symmetrizability");
                }
            }
        }
        let norm_half = symmetrizer(&cartan);
        let positive = enumerate_positive(&cartan);
        let index = positive.iter().enumerate().map(|(k, v)| (v.clone(), k)).collect();
        RootSystem { rank, cartan, positive, index, norm_half }
    }

    /// Pairing of an arbitrary weight in simple-root coordinates with the
    /// i-th simple coroot.
    pub fn pairing(&self, coords: &[i64], i: usize) -> i64 {
        (0..self.rank).map(|j| coords[j] * self.cartan[j][i]).sum()
    }

    pub fn pos_index(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    pub fn is_root(&self, coords: &[i64]) -> bool {
        if self.index.contains_key(coords) {
            return true;
        }
        let neg: Vec<i64> = coords.iter().map(|c| -c).collect();
        self.index.contains_key(&neg)
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    /// The inner product (b, c) induced by the symmetrization.
    pub fn inner(&self, b: &[i64], c: &[i64]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.rank {
            if b[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if c[j] == 0 {
                    continue;
                }
                // (alpha_i, alpha_j) = cartan[i][j] * d_j
                acc += rat_int(b[i] * c[j] * self.cartan[i][j]) * &self.norm_half[j];
            }
        }
        acc
    }

    /// Integer coordinates of the coroot of `b` in the simple-coroot basis.
    pub fn coroot_coords(&self, b: &[i64]) -> Vec<i64> {
        let half_norm = self.inner(b, b) / rat_int(2);
        (0..self.rank)
            .map(|j| {
                let v = rat_int(b[j]) * &self.norm_half[j] / &half_norm;
                assert!(v.is_integer(), "coroot coordinates must be integral");
                i64::try_from(v.to_integer()).expect("small coroot coordinate")
            })
            .collect()
    }
}

fn symmetrizer(cartan: &[Vec<i64>]) -> Vec<Rat> {
    let rank = cartan.len();
    let mut d: Vec<Option<Rat>> = vec![None; rank];
    d[0] = Some(Rat::from_integer(1.into()));
    // The diagrams used here are connected; propagate along edges.
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..rank {
            for j in 0..rank {
                if i == j || cartan[i][j] == 0 || d[i].is_none() || d[j].is_some() {
                    continue;
                }
                // d_j / d_i = a_ji / a_ij
                let v = d[i].clone().unwrap() * rat_int(cartan[j][i]) / rat_int(cartan[i][j]);
                d[j] = Some(v);
                changed = true;
            }
        }
    }
    let mut d: Vec<Rat> = d.into_iter().map(|v| v.expect("connected diagram")).collect();
    let min = d.iter().min().cloned().unwrap();
    for v in &mut d {
        *v /= min.clone();
    }
    d
}

fn enumerate_positive(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rank = cartan.len();
    let pairing =
        |coords: &[i64], i: usize| -> i64 { (0..rank).map(|j| coords[j] * cartan[j][i]).sum() };
    let mut known: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
    let mut frontier: Vec<Vec<i64>> = Vec::new();
    for i in 0..rank {
        let mut v = vec![0i64; rank];
        v[i] = 1;
        known.insert(v.clone(), ());
        frontier.push(v);
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for beta in &frontier {
            for i in 0..rank {
                let mut cand = beta.clone();
                cand[i] += 1;
                if known.contains_key(&cand) {
                    continue;
                }
                // p = how far the alpha_i string extends below beta
                let mut p = 0i64;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if down.iter().all(|&c| c == 0) || !known.contains_key(&down) {
                        break;
                    }
                    p += 1;
                }
                let q = p - pairing(beta, i);
                if q >= 1 {
                    known.insert(cand.clone(), ());
                    next.push(cand);
                }
            }
        }
        frontier = next;
    }
    let mut roots: Vec<Vec<i64>> = known.into_keys().collect();
    roots.sort_by_key(|r| (height(r), r.clone()));
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_cartan(rank: usize) -> Vec<Vec<i64>> {
        (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        if i == j {
                            2
                        } else if i.abs_diff(j) == 1 {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn counts_match_the_classification() {
        assert_eq!(RootSystem::new(a_cartan(1)).num_positive(), 1);
        assert_eq!(RootSystem::new(a_cartan(2)).num_positive(), 3);
        assert_eq!(RootSystem::new(a_cartan(3)).num_positive(), 6);
        assert_eq!(RootSystem::new(a_cartan(5)).num_positive(), 15);
        let b2 = RootSystem::new(vec![vec![2, -2], vec![-1, 2]]);
        assert_eq!(b2.num_positive(), 4);
        let g2 = RootSystem::new(vec![vec![2, -1], vec![-3, 2]]);
        assert_eq!(g2.num_positive(), 6);
        let c3 = RootSystem::new(vec![
            vec![2, -1, 0],
            vec![-1, 2, -1],
            vec![0, -2, 2],
        ]);
        assert_eq!(c3.num_positive(), 9);
        let d4 = RootSystem::new(vec![
            vec![2, -1, 0, 0],
            vec![-1, 2, -1, -1],
            vec![0, -1, 2, 0],
            vec![0, -1, 0, 2],
        ]);
        assert_eq!(d4.num_positive(), 12);
    }

    #[test]
    fn g2_norms_and_coroots() {
        let g2 = RootSystem::new(vec![vec![2, -1], vec![-3, 2]]);
        // alpha_1 short, alpha_2 long
        assert_eq!(g2.norm_half, vec![rat_int(1), rat_int(3)]);
        // highest short root 2a1 + a2 has norm 2
        assert_eq!(g2.inner(&[2, 1], &[2, 1]), rat_int(2));
        assert_eq!(g2.inner(&[3, 2], &[3, 2]), rat_int(6));
        // long roots have short coroots and vice versa
        assert_eq!(g2.coroot_coords(&[3, 2]), vec![1, 2]);
        assert_eq!(g2.coroot_coords(&[2, 1]), vec![2, 3]);
    }

    #[test]
    fn heights_are_sorted() {
        let rs = RootSystem::new(a_cartan(3));
        let hs: Vec<i64> = rs.positive.iter().map(|r| height(r)).collect();
        assert!(hs.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(*hs.last().unwrap(), 3);
    }
}
