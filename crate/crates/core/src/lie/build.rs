//! Chevalley-basis construction.
//!
//! Simply laced algebras are built directly on the root lattice with a
//! bimultiplicative asymmetry function fixing all signs deterministically.
//! B2, C3 and G2 are realized as the fixed-point subalgebras of diagram
//! automorphisms of A3, A5 and D4, with basis vectors given by orbit sums of
//! the ambient Chevalley basis; the orbit sums pair correctly against the
//! folded coroots, so the resulting structure constants are again integers
//! (asserted during assembly).

use num::{One, Zero};

use super::aut::diagram_aut_unchecked;
use super::roots::{height, RootSystem};
use super::{LieError, Series, SeriesRank, SparseVec, StructureTable};
use crate::linalg::Mat;
use crate::scalars::{rat_int, CycScalar, Rat};

pub(crate) fn build(series: Series, rank: usize) -> Result<StructureTable, LieError> {
    match (series, rank) {
        (Series::A, 1..=3) | (Series::D, 4) => Ok(build_ade(series, rank)),
        (Series::B, 2) => {
            // Fold A3 by its reversal; the fixed middle node gives the long
            // simple root, which comes first in the B-series labelling.
            let ambient = build_ade(Series::A, 3);
            fold(ambient, &[2, 1, 0], vec![vec![1], vec![0, 2]], SeriesRank::new(series, rank))
        }
        (Series::C, 3) => {
            let ambient = build_ade(Series::A, 5);
            fold(
                ambient,
                &[4, 3, 2, 1, 0],
                vec![vec![0, 4], vec![1, 3], vec![2]],
                SeriesRank::new(series, rank),
            )
        }
        (Series::G, 2) => {
            // Triality on D4 (centre node index 1): 0 -> 2 -> 3 -> 0.
            let ambient = build_ade(Series::D, 4);
            fold(ambient, &[2, 1, 3, 0], vec![vec![0, 2, 3], vec![1]], SeriesRank::new(series, rank))
        }
        _ => Err(LieError::Unsupported(format!("{series}{rank}"))),
    }
}

fn cartan_matrix(series: Series, rank: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; rank]; rank];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut edge = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match series {
        Series::A => {
            for i in 0..rank - 1 {
                edge(i, i + 1);
            }
        }
        Series::D => {
            // Centre node at index 1 for D4 (the only D used here).
            assert_eq!(rank, 4);
            edge(0, 1);
            edge(1, 2);
            edge(1, 3);
        }
        _ => unreachable!("only ADE ambients are built directly"),
    }
    a
}

/// Simply laced construction on the root lattice. The asymmetry function
/// eps is bimultiplicative with eps(a,a) = -1 on roots; edges are oriented
/// from the lower to the higher node index.
fn build_ade(series: Series, rank: usize) -> StructureTable {
    let cartan = cartan_matrix(series, rank);
    let roots = RootSystem::new(cartan.clone());
    let npos = roots.num_positive();
    let dim = rank + 2 * npos;

    // seed[i][j] = exponent of -1 in eps(alpha_i, alpha_j)
    let mut seed = vec![vec![0u8; rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            if i == j || (i < j && cartan[i][j] != 0) {
                seed[i][j] = 1;
            }
        }
    }
    let eps = |a: &[i64], b: &[i64]| -> i64 {
        let mut exp = 0i64;
        for i in 0..rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..rank {
                if seed[i][j] == 1 {
                    exp += a[i] * b[j];
                }
            }
        }
        if exp.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    };

    // Signed root of a basis index: (coords, sign of the stored vector in
    // the lattice construction). Negative-root vectors are f = -e_{-b}.
    let signed_root = |idx: usize| -> Option<(Vec<i64>, i64)> {
        if idx < rank {
            None
        } else if idx < rank + npos {
            Some((roots.positive[idx - rank].clone(), 1))
        } else {
            let coords: Vec<i64> =
                roots.positive[idx - rank - npos].iter().map(|c| -c).collect();
            Some((coords, -1))
        }
    };
    let index_of_root = |coords: &[i64]| -> usize {
        if height(coords) > 0 {
            rank + roots.pos_index(coords).expect("root index")
        } else {
            let neg: Vec<i64> = coords.iter().map(|c| -c).collect();
            rank + npos + roots.pos_index(&neg).expect("root index")
        }
    };

    let mut brackets: Vec<Vec<SparseVec>> = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let entry: SparseVec = match (signed_root(i), signed_root(j)) {
                (None, None) => Vec::new(),
                (None, Some((b, _))) => {
                    let p = roots.pairing(&b, i);
                    if p == 0 {
                        Vec::new()
                    } else {
                        vec![(j, rat_int(p))]
                    }
                }
                (Some((b, _)), None) => {
                    let p = roots.pairing(&b, j);
                    if p == 0 {
                        Vec::new()
                    } else {
                        vec![(i, rat_int(-p))]
                    }
                }
                (Some((b, sb)), Some((c, sc))) => {
                    let sum: Vec<i64> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
                    if sum.iter().all(|&v| v == 0) {
                        // [e_b, e_{-b}] = -h_b in the lattice construction.
                        (0..rank)
                            .filter(|&l| b[l] != 0)
                            .map(|l| (l, rat_int(-sb * sc * b[l])))
                            .collect()
                    } else if roots.is_root(&sum) {
                        let target = index_of_root(&sum);
                        // f-vectors carry coefficient -1 on the lattice basis.
                        let starget = if height(&sum) > 0 { 1 } else { -1 };
                        vec![(target, rat_int(sb * sc * starget * eps(&b, &c)))]
                    } else {
                        Vec::new()
                    }
                }
            };
            brackets[i][j] = entry;
        }
    }

    let decomp = decompositions(&roots);
    StructureTable::assemble(SeriesRank::new(series, rank), roots, brackets, decomp)
}

/// For each non-simple positive root k, the first simple i with
/// root_k - alpha_i again a positive root.
fn decompositions(roots: &RootSystem) -> Vec<Option<(usize, usize)>> {
    roots
        .positive
        .iter()
        .map(|b| {
            if height(b) == 1 {
                return None;
            }
            for i in 0..roots.rank {
                if b[i] == 0 {
                    continue;
                }
                let mut rest = b.clone();
                rest[i] -= 1;
                if let Some(j) = roots.pos_index(&rest) {
                    return Some((i, j));
                }
            }
            unreachable!("every positive root descends through a simple root")
        })
        .collect()
}

/// Fixed-point subalgebra of the diagram automorphism given by `perm`,
/// with simple-root orbits listed in the order of the folded nodes.
fn fold(
    ambient: StructureTable,
    perm: &[usize],
    node_orbits: Vec<Vec<usize>>,
    name: SeriesRank,
) -> Result<StructureTable, LieError> {
    let phi = diagram_aut_unchecked(&ambient, perm)?;
    let arank = ambient.rank();
    let ars = ambient.root_system();

    // Folded Cartan matrix: pairing of a representative of orbit J against
    // the summed coroots of orbit I.
    let fr = node_orbits.len();
    let mut fcartan = vec![vec![0i64; fr]; fr];
    for (jj, oj) in node_orbits.iter().enumerate() {
        for (ii, oi) in node_orbits.iter().enumerate() {
            let rep = oj[0];
            let alpha_rep: Vec<i64> = (0..arank).map(|l| i64::from(l == rep)).collect();
            let v: i64 = oi.iter().map(|&i| ars.pairing(&alpha_rep, i)).sum();
            for &other in oj.iter().skip(1) {
                let alpha_o: Vec<i64> = (0..arank).map(|l| i64::from(l == other)).collect();
                let w: i64 = oi.iter().map(|&i| ars.pairing(&alpha_o, i)).sum();
                assert_eq!(v, w, "orbit members must pair equally");
            }
            fcartan[jj][ii] = v;
        }
    }
    let froots = RootSystem::new(fcartan);

    // Which folded node each ambient node restricts to.
    let mut node_class = vec![0usize; arank];
    for (jj, orbit) in node_orbits.iter().enumerate() {
        for &i in orbit {
            node_class[i] = jj;
        }
    }
    let restrict = |coords: &[i64]| -> Vec<i64> {
        let mut out = vec![0i64; fr];
        for (i, &c) in coords.iter().enumerate() {
            out[node_class[i]] += c;
        }
        out
    };

    // Orbits of the induced map on ambient positive roots, keyed by their
    // restriction.
    let sigma_root = |coords: &[i64]| -> Vec<i64> {
        let mut out = vec![0i64; arank];
        for (i, &c) in coords.iter().enumerate() {
            out[perm[i]] = c;
        }
        out
    };
    let mut orbit_of_restriction: std::collections::BTreeMap<Vec<i64>, Vec<Vec<i64>>> =
        std::collections::BTreeMap::new();
    let mut seen: std::collections::BTreeSet<Vec<i64>> = std::collections::BTreeSet::new();
    for root in &ars.positive {
        if seen.contains(root) {
            continue;
        }
        let mut orbit = vec![root.clone()];
        let mut cur = sigma_root(root);
        while &cur != root {
            seen.insert(cur.clone());
            orbit.push(cur.clone());
            cur = sigma_root(&cur);
        }
        seen.insert(root.clone());
        orbit.sort();
        let prev = orbit_of_restriction.insert(restrict(&orbit[0]), orbit);
        assert!(prev.is_none(), "restrictions of distinct orbits must differ");
    }

    // Folded basis vectors in ambient coordinates (over Q).
    let adim = ambient.dim();
    let phi_rat = phi.rational_matrix();
    let apply_phi = |v: &[Rat]| -> Vec<Rat> {
        (0..adim)
            .map(|r| {
                let mut acc = Rat::zero();
                for (c, vc) in v.iter().enumerate() {
                    if !vc.is_zero() && !phi_rat[r][c].is_zero() {
                        acc += &phi_rat[r][c] * vc;
                    }
                }
                acc
            })
            .collect()
    };
    let orbit_sum = |start_idx: usize, orbit_len: usize| -> Vec<Rat> {
        let mut v = vec![Rat::zero(); adim];
        v[start_idx] = Rat::one();
        let mut acc = v.clone();
        let mut cur = v;
        for _ in 1..orbit_len {
            cur = apply_phi(&cur);
            for (a, c) in acc.iter_mut().zip(&cur) {
                *a += c;
            }
        }
        acc
    };

    let fnpos = froots.num_positive();
    let fdim = fr + 2 * fnpos;
    let mut columns: Vec<Vec<Rat>> = Vec::with_capacity(fdim);
    for orbit in &node_orbits {
        let mut v = vec![Rat::zero(); adim];
        for &i in orbit {
            v[ambient.h_index(i)] = Rat::one();
        }
        columns.push(v);
    }
    for part in [0usize, 1] {
        for fk in 0..fnpos {
            let orbit = orbit_of_restriction
                .get(&froots.positive[fk])
                .expect("each folded root restricts from an ambient orbit");
            let rep = ars.pos_index(&orbit[0]).unwrap();
            let idx = if part == 0 { ambient.e_index(rep) } else { ambient.f_index(rep) };
            let v = orbit_sum(idx, orbit.len());
            assert!(v.iter().any(|c| !c.is_zero()), "orbit sum must be nonzero");
            columns.push(v);
        }
    }

    // Express ambient brackets of folded basis vectors back in the folded
    // basis and require integral constants.
    let basis_mat = Mat::from_rows(
        (0..adim)
            .map(|r| (0..fdim).map(|c| CycScalar::from_rat(columns[c][r].clone())).collect())
            .collect(),
    );
    let mut brackets: Vec<Vec<SparseVec>> = vec![vec![Vec::new(); fdim]; fdim];
    for i in 0..fdim {
        for j in 0..fdim {
            let v = ambient.bracket_vec_rat(&columns[i], &columns[j]);
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            let rhs: Vec<CycScalar> = v.iter().map(|c| CycScalar::from_rat(c.clone())).collect();
            let sol = basis_mat
                .solve(&rhs)
                .expect("fixed subalgebra is closed under the bracket");
            let mut entry = SparseVec::new();
            for (k, c) in sol.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let r = c.as_rational().expect("rational constant");
                assert!(r.is_integer(), "folded structure constants must be integers");
                entry.push((k, r));
            }
            brackets[i][j] = entry;
        }
    }

    let decomp = decompositions(&froots);
    Ok(StructureTable::assemble(name, froots, brackets, decomp))
}
