//! Property tests of the algebraic identities behind the library: field
//! axioms for the scalars, ring automorphism round trips, exactness of the
//! differential, and the extension bracket identities on random windows.

use proptest::prelude::*;

use loopext::extension::{ext_bracket, Cocycle, ExtElement};
use loopext::kahler::{aut_act_class, bar, differential, OneForm};
use loopext::lie::{
    build_split_simple, exp_ad, loop_killing, torus_aut, weyl_reflection, LoopElement, Series,
    StructureTable,
};
use loopext::scalars::{rat, rat_int, CycScalar, Exponent, LaurentPoly, RingAut};
use loopext::window::Window;

fn scalar_strategy() -> impl Strategy<Value = CycScalar> {
    let conductors = prop::sample::select(vec![1u32, 2, 3, 4, 6, 8, 12]);
    (conductors, -9i64..=9, 1i64..=9, 0i64..=11, -9i64..=9, 1i64..=9).prop_map(
        |(n, p1, q1, pow, p2, q2)| {
            let a = CycScalar::from_rat(rat(p1, q1));
            if n == 1 {
                a
            } else {
                &a + &(&CycScalar::from_rat(rat(p2, q2)) * &CycScalar::zeta_pow(n, pow))
            }
        },
    )
}

fn poly_strategy(nvars: usize) -> impl Strategy<Value = LaurentPoly> {
    let term = (prop::collection::vec(-2i64..=2, nvars), -6i64..=6, 1i64..=4);
    prop::collection::vec(term, 1..4).prop_map(move |terms| {
        let mut acc = LaurentPoly::zero(nvars);
        for (e, p, q) in terms {
            acc = &acc + &LaurentPoly::monomial(Exponent::new(e), CycScalar::from_rat(rat(p, q)));
        }
        acc
    })
}

fn ring_aut_strategy(nvars: usize) -> impl Strategy<Value = RingAut> {
    // unimodular matrices from a fixed palette, random unit scales
    let mats: Vec<Vec<Vec<i64>>> = if nvars == 1 {
        vec![vec![vec![1]], vec![vec![-1]]]
    } else {
        vec![
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![0, -1], vec![1, 0]],
            vec![vec![1, 1], vec![0, 1]],
            vec![vec![1, 0], vec![1, -1]],
        ]
    };
    (
        prop::sample::select(mats),
        prop::collection::vec((prop::sample::select(vec![1u32, 2, 3, 4]), -3i64..=3, 1i64..=3), nvars),
    )
        .prop_map(|(m, scale_data)| {
            let scales = scale_data
                .into_iter()
                .map(|(n, p, q)| {
                    let mut c = &CycScalar::zeta(n) * &CycScalar::from_rat(rat(p.max(1), q));
                    if c.is_zero() {
                        c = CycScalar::one();
                    }
                    c
                })
                .collect();
            RingAut::new(m, scales).expect("palette matrices are unimodular")
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn conductor_promotion_round_trip(p in -30i64..=30, q in 1i64..=30, m in 1u32..=12) {
        let x = CycScalar::from_rat(rat(p, q));
        let promoted = x.promote(m);
        prop_assert_eq!(promoted.as_rational(), Some(rat(p, q)));
    }

    #[test]
    fn laurent_ring_axioms(p in poly_strategy(2), q in poly_strategy(2), r in poly_strategy(2)) {
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
    }

    #[test]
    fn ring_aut_inverse_round_trip(theta in ring_aut_strategy(2), p in poly_strategy(2)) {
        let there = theta.apply(&p).unwrap();
        prop_assert_eq!(theta.inverse().apply(&there).unwrap(), p);
    }

    #[test]
    fn differentials_of_ring_elements_are_exact(a in poly_strategy(2)) {
        prop_assert!(bar(&differential(&a)).is_zero());
    }

    #[test]
    fn bar_is_stable_under_exact_perturbations(
        b in poly_strategy(2),
        a in poly_strategy(2),
        i in 0usize..2,
    ) {
        let omega = OneForm::dlog(i, b);
        prop_assert_eq!(bar(&omega.add(&differential(&a))), bar(&omega));
    }

    #[test]
    fn class_action_round_trips(theta in ring_aut_strategy(2), b in poly_strategy(2)) {
        let z = bar(&OneForm::dlog(0, b));
        let moved = aut_act_class(&theta, &z).unwrap();
        prop_assert_eq!(aut_act_class(&theta.inverse(), &moved).unwrap(), z);
    }
}

fn a1() -> StructureTable {
    build_split_simple(Series::A, 1).unwrap()
}

fn loop_strategy(dim: usize) -> impl Strategy<Value = LoopElement> {
    prop::collection::vec((0..dim, -2i64..=2, -5i64..=5), 1..4).prop_map(|terms| {
        let mut acc = LoopElement::zero(1);
        for (idx, e, c) in terms {
            acc = acc.add(&LoopElement::single(
                idx,
                LaurentPoly::monomial(Exponent::new(vec![e]), CycScalar::from_rat(rat_int(c))),
            ));
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extension_bracket_is_antisymmetric_and_jacobi(
        x in loop_strategy(3),
        y in loop_strategy(3),
        z in loop_strategy(3),
    ) {
        let t = a1();
        let c = Cocycle::kassel(1);
        let space = c.space();
        let xe = ExtElement::from_loop(x, &space);
        let ye = ExtElement::from_loop(y, &space);
        let ze = ExtElement::from_loop(z, &space);
        let xy = ext_bracket(&t, &c, &xe, &ye).unwrap();
        let yx = ext_bracket(&t, &c, &ye, &xe).unwrap();
        prop_assert!(xy.add(&yx).is_zero());
        let j1 = ext_bracket(&t, &c, &xy, &ze).unwrap();
        let j2 = ext_bracket(&t, &c, &ext_bracket(&t, &c, &ye, &ze).unwrap(), &xe).unwrap();
        let j3 = ext_bracket(&t, &c, &ext_bracket(&t, &c, &ze, &xe).unwrap(), &ye).unwrap();
        prop_assert!(j1.add(&j2).add(&j3).is_zero());
    }

    #[test]
    fn killing_form_is_invariant_under_r_linear_automorphisms(
        x in loop_strategy(3),
        y in loop_strategy(3),
        pick in 0usize..4,
    ) {
        let t = a1();
        let g = match pick {
            0 => weyl_reflection(&t, 0).unwrap(),
            1 => exp_ad(&t, &[(t.e_index(0), rat_int(1))]).unwrap(),
            2 => torus_aut(&t, &[CycScalar::from_rat(rat(3, 2))]).unwrap(),
            _ => exp_ad(&t, &[(t.f_index(0), rat(-1, 2))]).unwrap(),
        };
        let gx = x.apply_gaut(&g);
        let gy = y.apply_gaut(&g);
        prop_assert_eq!(
            loop_killing(&t, &gx, &gy).unwrap(),
            loop_killing(&t, &x, &y).unwrap()
        );
    }

    #[test]
    fn loop_bracket_reduces_to_the_table_on_constants(i in 0usize..3, j in 0usize..3) {
        let t = a1();
        let one = Exponent::zero(1);
        let x = LoopElement::basis_monomial(i, one.clone());
        let y = LoopElement::basis_monomial(j, one.clone());
        let br = LoopElement::bracket(&t, &x, &y).unwrap();
        let mut expect = LoopElement::zero(1);
        for (k, c) in t.bracket(i, j) {
            expect = expect.add(&LoopElement::single(
                *k,
                LaurentPoly::constant(1, CycScalar::from_rat(c.clone())),
            ));
        }
        prop_assert_eq!(br, expect);
    }
}

/// The window-identity checks respect execution mode: both modes give the
/// same verdict and witness on a corrupted cocycle.
#[test]
fn execution_modes_agree_on_witnesses() {
    use loopext::exec::ExecMode;
    use loopext::extension::cocycle_verify;
    let t = a1();
    let w = Window::new(1, 1);
    let mut bad = Cocycle::tabulate(&t, &Cocycle::kassel(1), w.enlarged(2)).unwrap();
    assert!(bad.corrupt_entry(&w));
    let seq = cocycle_verify(&t, &bad, &w, ExecMode::Sequential).unwrap();
    let par = cocycle_verify(&t, &bad, &w, ExecMode::Parallel).unwrap();
    assert!(!seq.passed() && !par.passed());
    let sw = serde_json::to_string(&seq.witness).unwrap();
    let pw = serde_json::to_string(&par.witness).unwrap();
    assert_eq!(sw, pw);
}
