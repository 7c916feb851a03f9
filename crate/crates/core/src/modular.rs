//! Modular data for SU(2)_k and the unitary Virasoro minimal models, Verlinde
//! fusion, and the modular-relation checks.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fusion::{FusionError, FusionRing};

pub const SU2_MAX_LEVEL: u32 = 64;
pub const MINIMAL_MAX_M: u32 = 32;
pub const VERLINDE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModularError {
    #[error("{name} = {value} outside supported range {lo}..={hi}")]
    OutOfRange { name: &'static str, value: i64, lo: i64, hi: i64 },
    #[error("Verlinde coefficient N[{a}][{b}][{c}] = {value} is not a nonnegative integer (residual {residual:e})")]
    Integrality { a: usize, b: usize, c: usize, value: f64, residual: f64 },
    #[error("S[0][{0}] vanishes")]
    ZeroVacuumColumn(usize),
    #[error("S^2 is not a permutation matrix (row {0})")]
    ChargeConjugation(usize),
    #[error("channel ({0}, {1}; {2}) is not a multiplicity-one fusion channel")]
    Channel(usize, usize, usize),
    #[error(transparent)]
    Fusion(#[from] FusionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ModelTag {
    Su2 { k: u32 },
    Minimal { m: u32 },
    Custom { name: String },
}

/// Kac label `(p, q)` of the minimal model with parameter `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct KacLabel {
    pub p: u32,
    pub q: u32,
}

impl KacLabel {
    /// Canonical representative of the class of `(p, q)` under `(p, q) ~ (m − p, m + 1 − q)`.
    pub fn canonical(m: u32, p: u32, q: u32) -> KacLabel {
        let (rp, rq) = (m - p, m + 1 - q);
        if p < rp || (p == rp && q <= rq) {
            KacLabel { p, q }
        } else {
            KacLabel { p: rp, q: rq }
        }
    }

    /// Labels `(j, k)` of SU(2)_{m−2} × SU(2)_{m−1} with `j + k` even.
    pub fn su2_pair(self, m: u32) -> (usize, usize) {
        if (self.p + self.q) % 2 == 0 {
            ((self.p - 1) as usize, (self.q - 1) as usize)
        } else {
            ((m - self.p - 1) as usize, (m - self.q) as usize)
        }
    }

    pub fn weight(self, m: u32) -> Rational64 {
        let (m, p, q) = (i64::from(m), i64::from(self.p), i64::from(self.q));
        let x = p * (m + 1) - q * m;
        Rational64::new(x * x - 1, 4 * m * (m + 1))
    }
}

/// All canonical Kac labels of the minimal model, sorted by `(p, q)`.
pub fn kac_labels(m: u32) -> Vec<KacLabel> {
    let mut out: Vec<KacLabel> = (1..m)
        .flat_map(|p| (1..=m).map(move |q| (p, q)))
        .filter(|&(p, q)| KacLabel::canonical(m, p, q) == KacLabel { p, q })
        .map(|(p, q)| KacLabel { p, q })
        .collect();
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularData {
    pub model: ModelTag,
    pub labels: Vec<String>,
    /// Row-major `rank × rank` S matrix.
    pub s: Vec<Complex64>,
    pub t: Vec<Complex64>,
    pub c: Rational64,
    pub h: Vec<Rational64>,
}

/// `exp(2πi x)` evaluated after exact reduction of `x` modulo 1.
pub fn phase(x: Rational64) -> Complex64 {
    let frac = x - x.floor();
    let angle = 2.0 * PI * (*frac.numer() as f64) / (*frac.denom() as f64);
    Complex64::from_polar(1.0, angle)
}

impl ModularData {
    pub fn new(model: ModelTag, labels: Vec<String>, s: Vec<Complex64>, c: Rational64, h: Vec<Rational64>) -> Self {
        let shift = c / Rational64::from_integer(24);
        let t = h.iter().map(|&hi| phase(hi - shift)).collect();
        ModularData { model, labels, s, t, c, h }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn s(&self, i: usize, j: usize) -> Complex64 {
        self.s[i * self.rank() + j]
    }

    pub fn s_matrix(&self) -> DMatrix<Complex64> {
        let r = self.rank();
        DMatrix::from_row_slice(r, r, &self.s)
    }

    pub fn t_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.t.clone()))
    }

    pub fn is_real(&self) -> bool {
        self.s.iter().all(|z| z.im == 0.0)
    }

    /// `h_i ≡ h_j (mod 1)`, decided on exact weights.
    pub fn same_spin(&self, i: usize, j: usize) -> bool {
        (self.h[i] - self.h[j]).is_integer()
    }

    pub fn central_charge(&self) -> f64 {
        *self.c.numer() as f64 / *self.c.denom() as f64
    }

    pub fn check(&self) -> ModularReport {
        let r = self.rank();
        let s = self.s_matrix();
        let t = self.t_matrix();
        let id = DMatrix::<Complex64>::identity(r, r);
        let max_abs = |m: &DMatrix<Complex64>| m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let s2 = &s * &s;
        let st = &s * &t;
        let st3 = &st * &st * &st;
        let mut perm = 0.0f64;
        let mut is_perm = true;
        for i in 0..r {
            let mut ones = 0;
            for j in 0..r {
                let z = s2[(i, j)];
                let (dist0, dist1) = (z.norm(), (z - 1.0).norm());
                if dist1 < dist0 {
                    ones += 1;
                }
                perm = perm.max(dist0.min(dist1));
            }
            is_perm &= ones == 1;
        }
        for j in 0..r {
            is_perm &= (0..r).filter(|&i| (s2[(i, j)] - 1.0).norm() < s2[(i, j)].norm()).count() == 1;
        }
        ModularReport {
            unitarity: max_abs(&(&s * s.adjoint() - &id)),
            symmetry: max_abs(&(&s - s.transpose())),
            st_cubed: max_abs(&(st3 - &s2)),
            s_squared_permutation: if is_perm { perm } else { f64::INFINITY },
            s_fourth: max_abs(&(&s2 * &s2 - &id)),
            min_vacuum_row: (0..r).map(|j| self.s(0, j).re).fold(f64::INFINITY, f64::min),
        }
    }

    /// Charge conjugation read off from S².
    pub fn conjugation(&self) -> Result<Vec<usize>, ModularError> {
        let r = self.rank();
        (0..r)
            .map(|i| {
                let row: Vec<Complex64> = (0..r).map(|j| (0..r).map(|k| self.s(i, k) * self.s(k, j)).sum()).collect();
                let j = (0..r).max_by(|&a, &b| row[a].norm().total_cmp(&row[b].norm())).unwrap();
                if (row[j] - 1.0).norm() < 1e-6 {
                    Ok(j)
                } else {
                    Err(ModularError::ChargeConjugation(i))
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let r = self.rank();
        let s: Vec<Vec<[f64; 2]>> =
            (0..r).map(|i| (0..r).map(|j| [self.s(i, j).re, self.s(i, j).im]).collect()).collect();
        serde_json::json!({
            "model": self.model,
            "labels": self.labels,
            "S": s,
            "T": self.t.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "c": self.central_charge(),
            "h": self.h.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Residuals of the modular relations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModularReport {
    pub unitarity: f64,
    pub symmetry: f64,
    pub st_cubed: f64,
    pub s_squared_permutation: f64,
    pub s_fourth: f64,
    pub min_vacuum_row: f64,
}

impl ModularReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.unitarity < tol
            && self.symmetry < tol
            && self.st_cubed < tol
            && self.s_squared_permutation < tol
            && self.s_fourth < tol
            && self.min_vacuum_row > 0.0
    }
}

pub fn su2k_modular(k: u32) -> Result<ModularData, ModularError> {
    if !(1..=SU2_MAX_LEVEL).contains(&k) {
        return Err(ModularError::OutOfRange { name: "k", value: k.into(), lo: 1, hi: SU2_MAX_LEVEL.into() });
    }
    let r = (k + 1) as usize;
    let n = f64::from(k + 2);
    let norm = (2.0 / n).sqrt();
    let s = (0..r * r)
        .map(|x| {
            let (a, b) = ((x / r) as f64, (x % r) as f64);
            Complex64::new(norm * (PI * (a + 1.0) * (b + 1.0) / n).sin(), 0.0)
        })
        .collect();
    let kk = i64::from(k);
    let h = (0..=kk).map(|a| Rational64::new(a * (a + 2), 4 * (kk + 2))).collect();
    let c = Rational64::new(3 * kk, kk + 2);
    let labels = (0..=k).map(|a| a.to_string()).collect();
    Ok(ModularData::new(ModelTag::Su2 { k }, labels, s, c, h))
}

pub fn su2k_data(k: u32) -> Result<(ModularData, FusionRing), ModularError> {
    let data = su2k_modular(k)?;
    let ring = verlinde_fusion(&data)?;
    Ok((data, ring))
}

pub fn minimal_modular(m: u32) -> Result<ModularData, ModularError> {
    if !(3..=MINIMAL_MAX_M).contains(&m) {
        return Err(ModularError::OutOfRange { name: "m", value: m.into(), lo: 3, hi: MINIMAL_MAX_M.into() });
    }
    let kac = kac_labels(m);
    let r = kac.len();
    let mf = f64::from(m);
    let norm = 2.0 * (2.0 / (mf * (mf + 1.0))).sqrt();
    let mut s = Vec::with_capacity(r * r);
    for a in &kac {
        for b in &kac {
            let sign = if (1 + a.q * b.p + a.p * b.q) % 2 == 0 { 1.0 } else { -1.0 };
            let x = (PI * (mf + 1.0) / mf * f64::from(a.p * b.p)).sin();
            let y = (PI * mf / (mf + 1.0) * f64::from(a.q * b.q)).sin();
            s.push(Complex64::new(norm * sign * x * y, 0.0));
        }
    }
    let mm = i64::from(m);
    let c = Rational64::from_integer(1) - Rational64::new(6, mm * (mm + 1));
    let h = kac.iter().map(|l| l.weight(m)).collect();
    let labels = kac.iter().map(|l| format!("({},{})", l.p, l.q)).collect();
    Ok(ModularData::new(ModelTag::Minimal { m }, labels, s, c, h))
}

pub fn minimal_model_data(m: u32) -> Result<(ModularData, FusionRing), ModularError> {
    let data = minimal_modular(m)?;
    let ring = verlinde_fusion(&data)?;
    Ok((data, ring))
}

pub fn verlinde_fusion(data: &ModularData) -> Result<FusionRing, ModularError> {
    verlinde_with_residual(data).map(|(ring, _)| ring)
}

/// Verlinde fusion rules together with the largest rounding residual.
pub fn verlinde_with_residual(data: &ModularData) -> Result<(FusionRing, f64), ModularError> {
    let r = data.rank();
    if let Some(j) = (0..r).find(|&j| data.s(0, j).norm() < 1e-12) {
        return Err(ModularError::ZeroVacuumColumn(j));
    }
    let dual = data.conjugation()?;
    let mut rows: Vec<Vec<(usize, u32)>> = vec![Vec::new(); r * r];
    let mut worst = 0f64;
    let mut record = |a: usize, b: usize, c: usize, z: Complex64| -> Result<(), ModularError> {
        let n = z.re.round();
        let residual = (z - n).norm();
        worst = worst.max(residual);
        if residual > VERLINDE_TOLERANCE || n < 0.0 {
            return Err(ModularError::Integrality { a, b, c, value: z.re, residual });
        }
        if n > 0.0 {
            rows[a * r + b].push((c, n as u32));
        }
        Ok(())
    };
    if data.is_real() {
        let s = DMatrix::from_fn(r, r, |i, j| data.s(i, j).re);
        let st = s.transpose();
        for a in 0..r {
            let scaled = DMatrix::from_fn(r, r, |i, m| s[(i, m)] * s[(a, m)] / s[(0, m)]);
            let n = scaled * &st;
            for b in 0..r {
                for c in 0..r {
                    record(a, b, c, Complex64::new(n[(b, c)], 0.0))?;
                }
            }
        }
    } else {
        let s = data.s_matrix();
        let sa = s.adjoint();
        for a in 0..r {
            let scaled = DMatrix::from_fn(r, r, |i, m| s[(i, m)] * s[(a, m)] / s[(0, m)]);
            let n = scaled * &sa;
            for b in 0..r {
                for c in 0..r {
                    record(a, b, c, n[(b, c)])?;
                }
            }
        }
    }
    let ring = FusionRing::from_fn(data.labels.clone(), 0, dual, |a, b| std::mem::take(&mut rows[a * r + b]))?;
    Ok((ring, worst))
}

/// Dimensions `S_a0 / S_00`.
pub fn s_ratio_dims(data: &ModularData) -> Vec<f64> {
    (0..data.rank()).map(|a| (data.s(a, 0) / data.s(0, 0)).re).collect()
}

/// Braiding eigenvalue `exp(2πi(h_ν − h_λ − h_μ))` on a multiplicity-one channel.
pub fn monodromy_phase(data: &ModularData, ring: &FusionRing, lambda: usize, mu: usize, nu: usize) -> Result<Complex64, ModularError> {
    if ring.n(lambda, mu, nu) != 1 {
        return Err(ModularError::Channel(lambda, mu, nu));
    }
    Ok(phase(data.h[nu] - data.h[lambda] - data.h[mu]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kac_label_counts() {
        for m in 3..=32 {
            assert_eq!(kac_labels(m).len() as u32, m * (m - 1) / 2);
        }
    }

    #[test]
    fn ising_weights() {
        let d = minimal_modular(3).unwrap();
        let mut h: Vec<Rational64> = d.h.clone();
        h.sort();
        assert_eq!(h, vec![Rational64::new(0, 1), Rational64::new(1, 16), Rational64::new(1, 2)]);
    }

    #[test]
    fn phase_is_exact_mod_one() {
        assert!((phase(Rational64::new(5, 4)) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }
}
