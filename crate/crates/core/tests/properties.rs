use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vircat::catalog::{su2_even_ring, su2_ring};
use vircat::cocycle::{self, AbelianGroup};
use vircat::format::{fmt_f64, round_sig};
use vircat::fusion::{cyclic_ring, FusionRing};
use vircat::labelset::LabelSet;
use vircat::modinv::rationalize;
use vircat::modular;
use vircat::sixj::SixJTable;
use vircat::subcat;

fn dims_multiply(r: &FusionRing) -> bool {
    let d = r.dims();
    (0..r.rank()).all(|a| {
        (0..r.rank()).all(|b| {
            let s: f64 = r.product(a, b).map(|(c, n)| f64::from(n) * d[c]).sum();
            (s - d[a] * d[b]).abs() < 1e-9 * s.max(1.0)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn su2_rings_satisfy_axioms(k in 1u32..30) {
        let r = su2_ring(k);
        prop_assert_eq!(r.check_ring_axioms(), Ok(()));
        prop_assert!(dims_multiply(&r));
        let e = su2_even_ring(k.max(2));
        prop_assert_eq!(e.check_ring_axioms(), Ok(()));
    }

    #[test]
    fn product_rings_multiply_dims(a in 1u32..8, b in 1u32..8, n in 1usize..5) {
        let (p, pairs) = FusionRing::product_ring(&su2_ring(a), &su2_ring(b));
        prop_assert_eq!(p.check_ring_axioms(), Ok(()));
        prop_assert!(dims_multiply(&p));
        let (da, db) = (su2_ring(a).dims().to_vec(), su2_ring(b).dims().to_vec());
        for (i, &(x, y)) in pairs.iter().enumerate() {
            prop_assert!((p.dims()[i] - da[x] * db[y]).abs() < 1e-9);
        }
        let c = cyclic_ring(n);
        prop_assert!(c.is_pointed());
    }

    #[test]
    fn minimal_model_dims_multiply(m in 3u32..11) {
        let (_, r) = modular::minimal_model_data(m).unwrap();
        prop_assert!(dims_multiply(&r));
        let all: Vec<usize> = (0..r.rank()).collect();
        prop_assert!((subcat::mu_index(&r, &all) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coboundaries_round_trip(k in 1u32..9, seed in any::<u64>()) {
        let r = su2_ring(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = cocycle::coboundary(&r, &cocycle::random_omega(&r, &mut rng));
        prop_assert!(cocycle::cocycle_check(&r, &c).unwrap().holds);
        let b = cocycle::solve_coboundary(&r, &c).unwrap();
        prop_assert!(cocycle::coboundary(&r, &b.omega).max_deviation(&c) < 1e-10);
        let rep = vircat::fusion::generator_analysis(&r, 1).unwrap();
        let mut rep = rep;
        rep.cond3 = vircat::fusion::Tri::Holds;
        let t = cocycle::trivialize(&r, 1, &c, &rep).unwrap();
        prop_assert!(t.residual < 1e-10);
    }

    #[test]
    fn cocycle_json_round_trip(k in 1u32..6, seed in any::<u64>()) {
        let r = su2_ring(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = cocycle::coboundary(&r, &cocycle::random_omega(&r, &mut rng));
        let back = cocycle::ScalarCocycle::from_json(&r, &c.to_json()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn group_classes_agree_with_brute_force(pick in 0usize..6, class in any::<u64>(), seed in any::<u64>()) {
        let orders = [vec![2, 2], vec![2, 4], vec![3, 3], vec![2, 2, 2], vec![4, 4], vec![2, 6]][pick].clone();
        let g = AbelianGroup { orders };
        let reps = cocycle::h2_representatives(&g);
        let (exps, base) = &reps[(class % reps.len() as u64) as usize];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let omega = cocycle::random_omega(&g.ring(), &mut rng);
        let mut c = base.clone();
        let n = g.order();
        for a in 0..n {
            for b in 0..n {
                c.values[a * n + b] *= omega[g.add(a, b)] / (omega[a] * omega[b]);
            }
        }
        prop_assert!(c.cocycle_residual() < 1e-9);
        let trivial = exps.iter().all(|&e| e == 0);
        prop_assert_eq!(cocycle::group_h2(&c).trivial, trivial);
        prop_assert_eq!(cocycle::brute_force_coboundary(&c).is_some(), trivial);
    }

    #[test]
    fn random_symmetric_group_cocycles_are_trivial(pick in 0usize..5, seed in any::<u64>()) {
        let orders = [vec![2], vec![6], vec![2, 2], vec![3, 3], vec![2, 2, 4]][pick].clone();
        let g = AbelianGroup { orders };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = cocycle::random_symmetric_group_cocycle(&g, &mut rng);
        let h2 = cocycle::group_h2(&c);
        prop_assert!(h2.trivial);
        prop_assert!(cocycle::brute_force_coboundary(&c).is_some());
    }

    #[test]
    fn sixj_tetrahedral_symmetry(k in 1u32..12) {
        let t = SixJTable::new(k).unwrap();
        prop_assert!(t.symmetry_residual() < 1e-12);
    }

    #[test]
    fn small_fractions_rationalize(p in -500i64..500, q in 1i64..1000) {
        let x = num_rational::Rational64::new(p, q);
        prop_assert_eq!(rationalize(p as f64 / q as f64), Some(x));
    }

    #[test]
    fn twelve_digit_format_is_stable(x in -1e6f64..1e6) {
        let r = round_sig(x);
        prop_assert_eq!(round_sig(r), r);
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), r);
    }

    #[test]
    fn labelset_matches_btreeset(xs in proptest::collection::vec(0usize..512, 0..60), ys in proptest::collection::vec(0usize..512, 0..60)) {
        let set = |v: &[usize]| {
            let mut s = LabelSet::new();
            for &x in v {
                s.insert(x);
            }
            s
        };
        let (a, b) = (set(&xs), set(&ys));
        let (ba, bb): (BTreeSet<usize>, BTreeSet<usize>) = (xs.iter().copied().collect(), ys.iter().copied().collect());
        prop_assert_eq!(a.union(&b).to_vec(), ba.union(&bb).copied().collect::<Vec<_>>());
        prop_assert_eq!(a.intersection(&b).to_vec(), ba.intersection(&bb).copied().collect::<Vec<_>>());
        prop_assert_eq!(a.difference(&b).to_vec(), ba.difference(&bb).copied().collect::<Vec<_>>());
        prop_assert_eq!(a.len(), ba.len());
    }
}
