//! Quantum 6j symbols of SU(2)_k with twice-spin labels.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SixjError {
    #[error("triple ({0}, {1}, {2}) is not admissible at level {3}")]
    Inadmissible(u32, u32, u32, u32),
    #[error("level must be at least 1")]
    Level,
    #[error("6j tables are limited to level {SIXJ_MAX_LEVEL}, got {0}")]
    TooLarge(u32),
}

pub const SIXJ_MAX_LEVEL: u32 = 24;

/// `[n] = sin(nπ/(k+2)) / sin(π/(k+2))`.
pub fn q_number(n: i64, k: u32) -> f64 {
    let x = PI / f64::from(k + 2);
    if n.rem_euclid(i64::from(k + 2)) == 0 {
        return 0.0;
    }
    (n as f64 * x).sin() / x.sin()
}

pub fn admissible(a: u32, b: u32, c: u32, k: u32) -> bool {
    (a + b + c) % 2 == 0 && a.abs_diff(b) <= c && c <= a + b && a + b + c <= 2 * k
}

/// Four triads of `{a b c; d e f}`.
pub fn triads(s: [u32; 6]) -> [[u32; 3]; 4] {
    let [a, b, c, d, e, f] = s;
    [[a, b, c], [a, e, f], [d, b, f], [d, e, c]]
}

pub fn check_admissible(k: u32, s: [u32; 6]) -> Result<(), SixjError> {
    match triads(s).into_iter().find(|t| !admissible(t[0], t[1], t[2], k)) {
        Some([x, y, z]) => Err(SixjError::Inadmissible(x, y, z, k)),
        None => Ok(()),
    }
}

/// q-factorials `[n]!` for `0 ≤ n ≤ k + 1`.
#[derive(Debug, Clone)]
struct Factorials(Vec<f64>);

impl Factorials {
    fn new(k: u32) -> Self {
        let mut f = vec![1.0];
        for n in 1..=(k + 1) {
            f.push(f[n as usize - 1] * q_number(i64::from(n), k));
        }
        Factorials(f)
    }

    fn get(&self, n: u32) -> f64 {
        self.0.get(n as usize).copied().unwrap_or(0.0)
    }

    fn delta(&self, a: u32, b: u32, c: u32) -> f64 {
        (self.get((a + b - c) / 2) * self.get((a + c - b) / 2) * self.get((b + c - a) / 2) / self.get((a + b + c) / 2 + 1)).sqrt()
    }

    fn racah(&self, s: [u32; 6]) -> f64 {
        let [a, b, c, d, e, f] = s;
        let alpha = [(a + b + c) / 2, (a + e + f) / 2, (d + b + f) / 2, (d + e + c) / 2];
        let beta = [(a + b + d + e) / 2, (a + c + d + f) / 2, (b + c + e + f) / 2];
        let lo = *alpha.iter().max().unwrap();
        let hi = (*beta.iter().min().unwrap()).min(self.0.len() as u32 - 2);
        let sum: f64 = (lo..=hi)
            .map(|z| {
                let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
                let den: f64 = alpha.iter().map(|&x| self.get(z - x)).product::<f64>() * beta.iter().map(|&y| self.get(y - z)).product::<f64>();
                sign * self.get(z + 1) / den
            })
            .sum();
        sum * self.delta(a, b, c) * self.delta(a, e, f) * self.delta(d, b, f) * self.delta(d, e, c)
    }
}

/// Kirillov–Reshetikhin single-sum evaluation of `{a b c; d e f}` at level `k`.
pub fn sixj(k: u32, s: [u32; 6]) -> Result<f64, SixjError> {
    if k == 0 {
        return Err(SixjError::Level);
    }
    check_admissible(k, s)?;
    Ok(Factorials::new(k).racah(s))
}

/// All admissible 6j symbols at one level, indexed by first triad and the remaining labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SixJTable {
    pub k: u32,
    triad_ids: Vec<u32>,
    #[serde(with = "holes")]
    values: Vec<f64>,
}

mod holes {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| (!x.is_nan()).then_some(*x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let v = Vec::<Option<f64>>::deserialize(d)?;
        Ok(v.into_iter().map(|x| x.unwrap_or(f64::NAN)).collect())
    }
}

const NONE: u32 = u32::MAX;

impl SixJTable {
    pub fn new(k: u32) -> Result<Self, SixjError> {
        if k == 0 {
            return Err(SixjError::Level);
        }
        if k > SIXJ_MAX_LEVEL {
            return Err(SixjError::TooLarge(k));
        }
        let n = (k + 1) as usize;
        let mut triad_ids = vec![NONE; n * n * n];
        let mut count = 0u32;
        for a in 0..=k {
            for b in 0..=k {
                for c in 0..=k {
                    if admissible(a, b, c, k) {
                        triad_ids[(a as usize * n + b as usize) * n + c as usize] = count;
                        count += 1;
                    }
                }
            }
        }
        let fact = Factorials::new(k);
        let block = n * n * n;
        let mut values = vec![f64::NAN; count as usize * block];
        values.par_chunks_mut(block).enumerate().for_each(|(t, chunk)| {
            let pos = triad_ids.iter().position(|&x| x == t as u32).unwrap();
            let (a, b, c) = ((pos / (n * n)) as u32, ((pos / n) % n) as u32, (pos % n) as u32);
            for d in 0..=k {
                for e in 0..=k {
                    for f in 0..=k {
                        let s = [a, b, c, d, e, f];
                        if triads(s).iter().all(|t| admissible(t[0], t[1], t[2], k)) {
                            chunk[(d as usize * n + e as usize) * n + f as usize] = fact.racah(s);
                        }
                    }
                }
            }
        });
        Ok(SixJTable { k, triad_ids, values })
    }

    fn n(&self) -> usize {
        (self.k + 1) as usize
    }

    /// Value of an admissible symbol, `None` otherwise.
    pub fn get(&self, s: [u32; 6]) -> Option<f64> {
        let n = self.n();
        if s.iter().any(|&x| x > self.k) {
            return None;
        }
        let t = self.triad_ids[(s[0] as usize * n + s[1] as usize) * n + s[2] as usize];
        if t == NONE {
            return None;
        }
        let v = self.values[t as usize * n * n * n + (s[3] as usize * n + s[4] as usize) * n + s[5] as usize];
        (!v.is_nan()).then_some(v)
    }

    pub fn value(&self, s: [u32; 6]) -> Result<f64, SixjError> {
        check_admissible(self.k, s)?;
        Ok(self.get(s).expect("admissible entries are tabulated"))
    }

    pub fn entries(&self) -> impl Iterator<Item = ([u32; 6], f64)> + '_ {
        let n = self.n();
        let k = self.k;
        (0..=k).flat_map(move |a| (0..=k).flat_map(move |b| (0..=k).map(move |c| (a, b, c)))).flat_map(move |(a, b, c)| {
            let t = self.triad_ids[(a as usize * n + b as usize) * n + c as usize];
            let slice: &[f64] = if t == NONE { &[] } else { &self.values[t as usize * n * n * n..(t as usize + 1) * n * n * n] };
            slice.iter().enumerate().filter(|(_, v)| !v.is_nan()).map(move |(i, &v)| {
                ([a, b, c, (i / (n * n)) as u32, ((i / n) % n) as u32, (i % n) as u32], v)
            })
        })
    }

    pub fn len(&self) -> usize {
        self.entries().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest deviation from the tetrahedral symmetries.
    pub fn symmetry_residual(&self) -> f64 {
        self.entries()
            .map(|([a, b, c, d, e, f], v)| {
                [[b, a, c, e, d, f], [a, c, b, d, f, e], [d, e, c, a, b, f], [a, e, f, d, b, c]]
                    .iter()
                    .map(|&t| (self.get(t).unwrap_or(f64::NAN) - v).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub max: f64,
    pub checked: u64,
}

/// `Σ_x [x+1][p+1] {a b x; c d p}{a b x; c d q} = δ_pq`.
pub fn orthogonality_residual(t: &SixJTable) -> Residual {
    let k = t.k;
    let qn = |n: u32| q_number(i64::from(n), k);
    let quads: Vec<[u32; 4]> = (0..=k)
        .flat_map(|a| (0..=k).flat_map(move |b| (0..=k).flat_map(move |c| (0..=k).map(move |d| [a, b, c, d]))))
        .collect();
    quads
        .par_iter()
        .map(|&[a, b, c, d]| {
            let mut out = Residual { max: 0.0, checked: 0 };
            let ps: Vec<u32> = (0..=k).filter(|&p| admissible(a, d, p, k) && admissible(c, b, p, k)).collect();
            let xs: Vec<u32> = (0..=k).filter(|&x| admissible(a, b, x, k) && admissible(c, d, x, k)).collect();
            for &p in &ps {
                for &q in &ps {
                    let s: f64 = xs
                        .iter()
                        .map(|&x| {
                            qn(x + 1) * qn(p + 1) * t.get([a, b, x, c, d, p]).unwrap() * t.get([a, b, x, c, d, q]).unwrap()
                        })
                        .sum();
                    let target = if p == q { 1.0 } else { 0.0 };
                    out.max = out.max.max((s - target).abs());
                    out.checked += 1;
                }
            }
            out
        })
        .reduce(|| Residual { max: 0.0, checked: 0 }, |x, y| Residual { max: x.max.max(y.max), checked: x.checked + y.checked })
}

/// Biedenharn–Elliott identity over all configurations whose right-hand side is admissible.
pub fn pentagon_residual(t: &SixJTable) -> Residual {
    let k = t.k;
    let qn = |n: u32| q_number(i64::from(n), k);
    let adm = |a, b, c| admissible(a, b, c, k);
    let pqr: Vec<[u32; 3]> =
        (0..=k).flat_map(|p| (0..=k).flat_map(move |q| (0..=k).map(move |r| [p, q, r]))).filter(|&[p, q, r]| adm(p, q, r)).collect();
    pqr.par_iter()
        .map(|&[p, q, r]| {
            let mut out = Residual { max: 0.0, checked: 0 };
            // (a, d, e) completing {p q r; e a d}, then (b, c, f) completing {p q r; f b c}
            let left: Vec<[u32; 3]> = (0..=k)
                .flat_map(|a| (0..=k).flat_map(move |d| (0..=k).map(move |e| [a, d, e])))
                .filter(|&[a, d, e]| adm(p, a, d) && adm(e, q, d) && adm(e, a, r))
                .collect();
            let right: Vec<[u32; 3]> = (0..=k)
                .flat_map(|b| (0..=k).flat_map(move |c| (0..=k).map(move |f| [b, c, f])))
                .filter(|&[b, c, f]| adm(p, b, c) && adm(f, q, c) && adm(f, b, r))
                .collect();
            for &[a, d, e] in &left {
                let r1 = t.get([p, q, r, e, a, d]).unwrap();
                for &[b, c, f] in &right {
                    let rhs = r1 * t.get([p, q, r, f, b, c]).unwrap();
                    let total = a + b + c + d + e + f + p + q + r;
                    let lhs: f64 = (0..=k)
                        .filter_map(|x| {
                            let v1 = t.get([a, b, x, c, d, p])?;
                            let v2 = t.get([c, d, x, e, f, q])?;
                            let v3 = t.get([e, f, x, b, a, r])?;
                            let sign = if ((total + x) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                            Some(sign * qn(x + 1) * v1 * v2 * v3)
                        })
                        .sum();
                    out.max = out.max.max((lhs - rhs).abs());
                    out.checked += 1;
                }
            }
            out
        })
        .reduce(|| Residual { max: 0.0, checked: 0 }, |x, y| Residual { max: x.max.max(y.max), checked: x.checked + y.checked })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroScan {
    pub k: u32,
    pub admissible: u64,
    pub zeros: Vec<[u32; 6]>,
    pub min_abs: f64,
}

/// Every admissible symbol at level `k` with `|value| < tol`.
pub fn zero_scan(k: u32, tol: f64) -> Result<ZeroScan, SixjError> {
    let t = SixJTable::new(k)?;
    let mut scan = ZeroScan { k, admissible: 0, zeros: Vec::new(), min_abs: f64::INFINITY };
    for (s, v) in t.entries() {
        scan.admissible += 1;
        if v.abs() < tol {
            scan.zeros.push(s);
        } else {
            scan.min_abs = scan.min_abs.min(v.abs());
        }
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_numbers() {
        assert_eq!(q_number(1, 7), 1.0);
        assert!((q_number(2, 2) - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(q_number(9, 7), 0.0);
    }

    #[test]
    fn normalization_and_errors() {
        assert!((sixj(5, [0; 6]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(sixj(2, [1, 1, 1, 0, 0, 0]), Err(SixjError::Inadmissible(1, 1, 1, 2)));
    }

    #[test]
    fn table_agrees_with_direct_evaluation() {
        let t = SixJTable::new(6).unwrap();
        for (s, v) in t.entries().step_by(37) {
            assert!((sixj(6, s).unwrap() - v).abs() < 1e-12);
        }
        assert!(t.symmetry_residual() < 1e-12);
    }
}
