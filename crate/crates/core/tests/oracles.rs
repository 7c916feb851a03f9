//! Values checked against closed forms computed independently of the library code paths.

use std::f64::consts::PI;

use num_rational::Rational64;
use vircat::catalog::su2_ring;
use vircat::cocycle::{self, AbelianGroup};
use vircat::fusion::FusionRing;
use vircat::modinv;
use vircat::modular::{self, kac_labels, KacLabel};
use vircat::sixj;

const PHI: f64 = 1.618_033_988_749_895;

fn su2_n(k: u32, a: u32, b: u32, c: u32) -> u32 {
    let ok = a.abs_diff(b) <= c && c <= (a + b).min(2 * k - a - b) && (a + b + c) % 2 == 0;
    u32::from(ok)
}

#[test]
fn ising_modular_data() {
    let d = modular::minimal_modular(3).unwrap();
    let r = 1.0 / 2f64.sqrt();
    let want = [[0.5, r, 0.5], [r, 0.0, -r], [0.5, -r, 0.5]];
    for i in 0..3 {
        for j in 0..3 {
            assert!((d.s(i, j).re - want[i][j]).abs() < 1e-12);
        }
    }
    assert_eq!(d.c, Rational64::new(1, 2));
    assert_eq!(d.h, vec![Rational64::from_integer(0), Rational64::new(1, 16), Rational64::new(1, 2)]);
}

#[test]
fn su2_s_matrix_closed_form() {
    for k in 1..=20 {
        let d = modular::su2k_modular(k).unwrap();
        let n = f64::from(k + 2);
        for i in 0..=k as usize {
            for j in 0..=k as usize {
                let want = (2.0 / n).sqrt() * ((i + 1) as f64 * (j + 1) as f64 * PI / n).sin();
                assert!((d.s(i, j).re - want).abs() < 1e-12, "k={k} ({i},{j})");
            }
        }
    }
}

#[test]
fn verlinde_reproduces_clebsch_gordan() {
    for k in 1..=14 {
        let (_, ring) = modular::su2k_data(k).unwrap();
        for a in 0..=k {
            for b in 0..=k {
                for c in 0..=k {
                    assert_eq!(ring.n(a as usize, b as usize, c as usize), su2_n(k, a, b, c), "k={k}");
                }
            }
        }
    }
}

#[test]
fn minimal_fusion_is_a_product_of_su2_rules() {
    for m in 3..=9 {
        let (data, ring) = modular::minimal_model_data(m).unwrap();
        let kac = kac_labels(m);
        let idx = |l: KacLabel| data.labels.iter().position(|s| *s == format!("({},{})", l.p, l.q)).unwrap();
        for &x in &kac {
            for &y in &kac {
                for &z in &kac {
                    let direct = su2_n(m - 2, x.p - 1, y.p - 1, z.p - 1) * su2_n(m - 1, x.q - 1, y.q - 1, z.q - 1);
                    let reflected = su2_n(m - 2, x.p - 1, y.p - 1, m - z.p - 1) * su2_n(m - 1, x.q - 1, y.q - 1, m - z.q);
                    assert_eq!(ring.n(idx(x), idx(y), idx(z)), direct + reflected, "m={m}");
                }
            }
        }
    }
}

#[test]
fn minimal_global_index_is_half_the_product() {
    let w = |k: u32| f64::from(k + 2) / (2.0 * (PI / f64::from(k + 2)).sin().powi(2));
    for m in 3..=16 {
        let (_, ring) = modular::minimal_model_data(m).unwrap();
        let want = w(m - 2) * w(m - 1) / 2.0;
        assert!((ring.global_index() - want).abs() < 1e-8 * want, "m={m}");
    }
}

#[test]
fn fibonacci_dimension() {
    let r = vircat::catalog::fibonacci_ring();
    assert!((r.dims()[1] - PHI).abs() < 1e-12);
    let even = vircat::catalog::su2_even_ring(3);
    assert!(vircat::fusion::find_isomorphism(&r, &even).is_some());
}

#[test]
fn enumeration_matches_tensor_product_references() {
    for m in 3..=12 {
        let found = modinv::classified_invariants(m).unwrap();
        let mut got: Vec<_> = found.iter().map(|(z, l)| (*l, z.z.clone())).collect();
        let mut want = modinv::reference_invariants(m);
        got.sort();
        want.sort();
        assert_eq!(got, want, "m={m}");
    }
}

#[test]
fn invariant_counts() {
    let count = |m| modinv::classified_invariants(m).unwrap().len();
    assert_eq!(count(3), 1);
    assert_eq!(count(5), 2);
    assert_eq!(count(11), 3);
    assert_eq!(count(12), 3);
}

fn fact(n: i64) -> f64 {
    (1..=n).map(|x| x as f64).product()
}

fn delta(a: i64, b: i64, c: i64) -> f64 {
    (fact((a + b - c) / 2) * fact((a - b + c) / 2) * fact((-a + b + c) / 2) / fact((a + b + c) / 2 + 1)).sqrt()
}

/// Classical Racah formula for doubled spins.
fn classical(s: [u32; 6]) -> f64 {
    let [a, b, c, d, e, f] = s.map(i64::from);
    let pre = delta(a, b, c) * delta(a, e, f) * delta(d, b, f) * delta(d, e, c);
    let lo = [a + b + c, a + e + f, d + b + f, d + e + c].into_iter().max().unwrap() / 2;
    let hi = [a + b + d + e, b + c + e + f, c + a + f + d].into_iter().min().unwrap() / 2;
    let sum: f64 = (lo..=hi)
        .map(|t| {
            let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
            sign * fact(t + 1)
                / (fact(t - (a + b + c) / 2)
                    * fact(t - (a + e + f) / 2)
                    * fact(t - (d + b + f) / 2)
                    * fact(t - (d + e + c) / 2)
                    * fact((a + b + d + e) / 2 - t)
                    * fact((b + c + e + f) / 2 - t)
                    * fact((c + a + f + d) / 2 - t))
        })
        .sum();
    pre * sum
}

#[test]
fn sixj_classical_limit() {
    let k = 2000;
    for s in [[1, 1, 2, 1, 1, 0], [2, 2, 2, 2, 2, 2], [3, 2, 1, 1, 2, 3], [4, 2, 2, 2, 4, 2], [3, 3, 2, 3, 3, 4]] {
        let q = sixj::sixj(k, s).unwrap();
        let c = classical(s);
        assert!((q.abs() - c.abs()).abs() < 1e-4, "{s:?}: {q} vs {c}");
    }
}

#[test]
fn sixj_special_values() {
    let v = sixj::sixj(3, [2, 2, 2, 2, 2, 2]).unwrap();
    assert!((v.abs() - 1.0 / (PHI * PHI)).abs() < 1e-12);
    assert!(sixj::sixj(4, [2, 2, 2, 2, 2, 2]).unwrap().abs() < 1e-12);
}

#[test]
fn h2_orders_of_small_groups() {
    for (orders, classes) in [(vec![2], 1), (vec![2, 2], 2), (vec![2, 4], 2), (vec![3, 3], 3), (vec![2, 2, 2], 8), (vec![4, 6], 2)] {
        let g = AbelianGroup { orders };
        let reps = cocycle::h2_representatives(&g);
        assert_eq!(reps.len(), classes);
        for (exps, c) in reps {
            let trivial = exps.iter().all(|&e| e == 0);
            assert_eq!(cocycle::group_h2(&c).trivial, trivial);
            assert_eq!(cocycle::brute_force_coboundary(&c).is_some(), trivial);
        }
    }
}

#[test]
fn d_series_dimensions_agree_with_rings() {
    for n in 3..=8 {
        let a = vircat::connection::d2n_even_dims(n).unwrap();
        let b = vircat::connection::d2n_ring_dims(n).unwrap();
        for (x, y) in [(a.d1, b.d1), (a.d2, b.d2), (a.d3, b.d3), (a.d4, b.d4)] {
            assert!((x - y).abs() < 1e-9, "n={n}");
        }
    }
}

#[test]
fn su2_ring_dims_are_q_numbers() {
    for k in 1..=12 {
        let r: FusionRing = su2_ring(k);
        for (i, d) in r.dims().iter().enumerate() {
            let n = f64::from(k + 2);
            let want = ((i + 1) as f64 * PI / n).sin() / (PI / n).sin();
            assert!((d - want).abs() < 1e-10);
        }
    }
}
