//! Reference fusion systems: SU(2)_k and its even part, the D_{2n}^even
//! systems, and the DHR systems of the type I maximal extensions of the
//! Virasoro nets.

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fusion::{FusionError, FusionRing};
use crate::modinv::{Dynkin, InvariantLabel, InvariantType};
use crate::modular::{self, ModelTag, ModularData, ModularError};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("no type I maximal extension {0} at m = {1}")]
    Unsupported(String, u32),
    #[error("type II invariant {0} is decoded from its coupling matrix, not rebuilt")]
    TypeTwo(String),
    #[error("D_{{2n}}^even needs n >= 2, got {0}")]
    DSeries(u32),
    #[error("D_{{2n}}^even gate failed for n = {n}: {reason}")]
    Gate { n: u32, reason: String },
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Modular(#[from] ModularError),
}

/// SU(2)_k fusion rules `a x b = |a−b|, |a−b|+2, …, min(a+b, 2k−a−b)`.
pub fn su2_ring(k: u32) -> FusionRing {
    let k = k as usize;
    let labels = (0..=k).map(|a| a.to_string()).collect();
    FusionRing::from_fn(labels, 0, (0..=k).collect(), |a, b| {
        let lo = a.abs_diff(b);
        let hi = (a + b).min(2 * k - a - b);
        (lo..=hi).step_by(2).map(|c| (c, 1)).collect()
    })
    .expect("SU(2)_k rule is well formed")
}

/// Even part of SU(2)_k, labels `0, 2, 4, …`.
pub fn su2_even_ring(k: u32) -> FusionRing {
    let members: Vec<usize> = (0..=k as usize).step_by(2).collect();
    su2_ring(k).induced(&members).expect("even labels form a subsystem")
}

/// The two-label Fibonacci system `{id, τ}`, `τ² = id ⊕ τ`, as SU(2)_3^even.
pub fn fibonacci_ring() -> FusionRing {
    su2_even_ring(3).relabeled(vec!["id".into(), "tau".into()])
}

/// Level `k = 4n − 4` of SU(2) whose simple-current extension gives D_{2n}.
pub fn d_series_level(n: u32) -> u32 {
    4 * n - 4
}

/// Modular data of the ℤ/2 simple-current extension of SU(2)_{4n−4} (the D_{2n} invariant).
///
/// Labels are the even orbit representatives `0, 2, …, 2n−4` followed by the
/// two halves `f+`, `f−` of the fixed point `f = 2n − 2`.
pub fn d_even_modular(n: u32) -> Result<ModularData, CatalogError> {
    if n < 2 {
        return Err(CatalogError::DSeries(n));
    }
    let k = d_series_level(n);
    let base = modular::su2k_modular(k)?;
    let f = (2 * n - 2) as usize;
    let reps: Vec<usize> = (0..f).step_by(2).collect();
    let r = reps.len() + 2;
    let x = Complex64::i().powu(k / 4);
    let sb = |a: usize, b: usize| base.s(a, b);
    let mut s = vec![Complex64::new(0.0, 0.0); r * r];
    for i in 0..r {
        for j in 0..r {
            let fixed_i = i >= reps.len();
            let fixed_j = j >= reps.len();
            s[i * r + j] = match (fixed_i, fixed_j) {
                (false, false) => sb(reps[i], reps[j]) * 2.0,
                (false, true) => sb(reps[i], f),
                (true, false) => sb(f, reps[j]),
                (true, true) => {
                    let eps = if i == j { 1.0 } else { -1.0 };
                    (sb(f, f) + x * eps) * 0.5
                }
            };
        }
    }
    let mut labels: Vec<String> = reps.iter().map(|a| a.to_string()).collect();
    labels.push(format!("{f}+"));
    labels.push(format!("{f}-"));
    let mut h: Vec<Rational64> = reps.iter().map(|&a| base.h[a]).collect();
    h.push(base.h[f]);
    h.push(base.h[f]);
    let name = format!("D_{}^even", 2 * n);
    Ok(ModularData::new(ModelTag::Custom { name }, labels, s, base.c, h))
}

/// SU(2) labels underlying each label of [`d_even_modular`].
pub fn d_even_blocks(n: u32) -> Vec<Vec<u32>> {
    let k = d_series_level(n);
    let f = 2 * n - 2;
    let mut out: Vec<Vec<u32>> = (0..f).step_by(2).map(|a| vec![a, k - a]).collect();
    out.push(vec![f]);
    out.push(vec![f]);
    out
}

/// D_{2n}^even fusion ring from Verlinde on the extended S matrix, gate-checked.
pub fn d_even_ring(n: u32) -> Result<FusionRing, CatalogError> {
    let data = d_even_modular(n)?;
    let report = data.check();
    if !report.passes(1e-9) {
        return Err(CatalogError::Gate { n, reason: format!("modular relations {report:?}") });
    }
    let ring = modular::verlinde_fusion(&data)?;
    ring.check_ring_axioms().map_err(|v| CatalogError::Gate { n, reason: format!("{v:?}") })?;
    Ok(ring)
}

/// A chiral factor of a catalog system: labels with base SU(2) content and weights.
#[derive(Debug, Clone)]
pub struct Factor {
    pub name: String,
    pub level: u32,
    pub ring: FusionRing,
    /// SU(2)_level labels contained in each factor label.
    pub blocks: Vec<Vec<u32>>,
    pub h: Vec<Rational64>,
    pub kind: FactorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorKind {
    Full,
    Even,
    DEven,
    E6,
    E8,
}

fn su2_weight(k: u32, a: u32) -> Rational64 {
    let (k, a) = (i64::from(k), i64::from(a));
    Rational64::new(a * (a + 2), 4 * (k + 2))
}

impl Factor {
    pub fn su2(k: u32) -> Factor {
        Factor {
            name: format!("SU(2)_{k}"),
            level: k,
            ring: su2_ring(k),
            blocks: (0..=k).map(|a| vec![a]).collect(),
            h: (0..=k).map(|a| su2_weight(k, a)).collect(),
            kind: FactorKind::Full,
        }
    }

    pub fn su2_even(k: u32) -> Factor {
        let evens: Vec<u32> = (0..=k).step_by(2).collect();
        Factor {
            name: format!("SU(2)_{k}^even"),
            level: k,
            ring: su2_even_ring(k),
            blocks: evens.iter().map(|&a| vec![a]).collect(),
            h: evens.iter().map(|&a| su2_weight(k, a)).collect(),
            kind: FactorKind::Even,
        }
    }

    pub fn d_even(n: u32) -> Result<Factor, CatalogError> {
        let k = d_series_level(n);
        let blocks = d_even_blocks(n);
        Ok(Factor {
            name: format!("D_{}^even", 2 * n),
            level: k,
            ring: d_even_ring(n)?,
            h: blocks.iter().map(|b| su2_weight(k, b[0])).collect(),
            blocks,
            kind: FactorKind::DEven,
        })
    }

    /// E_6 extension of SU(2)_10; its system obeys the SU(2)_2 fusion rules.
    pub fn e6() -> Factor {
        let blocks = vec![vec![0, 6], vec![3, 7], vec![4, 10]];
        Factor {
            name: "E_6".into(),
            level: 10,
            ring: su2_ring(2).relabeled(vec!["{0,6}".into(), "{3,7}".into(), "{4,10}".into()]),
            h: blocks.iter().map(|b| su2_weight(10, b[0])).collect(),
            blocks,
            kind: FactorKind::E6,
        }
    }

    /// E_8 extension of SU(2)_28; its system is `{id, τ}`.
    pub fn e8() -> Factor {
        let blocks = vec![vec![0, 10, 18, 28], vec![6, 12, 16, 22]];
        Factor {
            name: "E_8".into(),
            level: 28,
            ring: fibonacci_ring(),
            h: blocks.iter().map(|b| su2_weight(28, b[0])).collect(),
            blocks,
            kind: FactorKind::E8,
        }
    }

    fn parity(&self, i: usize) -> u32 {
        self.blocks[i][0] % 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionTag {
    KacParityProduct,
    AEvenTimesDEven,
    AEvenTimesA3,
    AEvenTimesA4Even,
    DEvenTable,
}

/// DHR system of a type I maximal extension at a given `m`.
#[derive(Debug, Clone)]
pub struct CatalogSystem {
    pub name: String,
    pub m: u32,
    pub label: InvariantLabel,
    pub ring: FusionRing,
    pub tag: ConstructionTag,
    pub left: Factor,
    pub right: Factor,
    /// Factor labels `(left, right)` of each ring label.
    pub pairs: Vec<(usize, usize)>,
    /// Conformal weight modulo 1, `h_left − h_right`.
    pub h: Vec<Rational64>,
    /// Generator used for the vanishing conditions, when a self-conjugate one is chosen.
    pub sigma: Option<usize>,
}

impl CatalogSystem {
    /// Base SU(2) content `(left blocks, right blocks)` of a label.
    pub fn branching(&self, i: usize) -> (&[u32], &[u32]) {
        let (a, b) = self.pairs[i];
        (&self.left.blocks[a], &self.right.blocks[b])
    }

    pub fn same_spin(&self, i: usize, j: usize) -> bool {
        (self.h[i] - self.h[j]).is_integer()
    }

    pub fn index_of_pair(&self, a: usize, b: usize) -> Option<usize> {
        self.pairs.iter().position(|&p| p == (a, b))
    }
}

fn combine(m: u32, label: InvariantLabel, tag: ConstructionTag, left: Factor, right: Factor, parity: bool) -> Result<CatalogSystem, CatalogError> {
    let (ring, pairs) = FusionRing::restricted_product(&left.ring, &right.ring, |a, b| {
        !parity || (left.parity(a) + right.parity(b)) % 2 == 0
    })?;
    let h = pairs
        .iter()
        .map(|&(a, b)| {
            let x = left.h[a] - right.h[b];
            x - x.floor()
        })
        .collect();
    Ok(CatalogSystem { name: label.to_string(), m, label, ring, tag, left, right, pairs, h, sigma: None })
}

fn find_pair(sys: &CatalogSystem, a: &str, b: &str) -> Option<usize> {
    let ia = sys.left.ring.index_of(a)?;
    let ib = sys.right.ring.index_of(b)?;
    sys.index_of_pair(ia, ib)
}

/// Builds the DHR fusion system of a type I maximal extension.
pub fn build_catalog_system(m: u32, label: &InvariantLabel) -> Result<CatalogSystem, CatalogError> {
    if label.kind == InvariantType::II {
        return Err(CatalogError::TypeTwo(label.to_string()));
    }
    let unsupported = || CatalogError::Unsupported(label.to_string(), m);
    if label.m != m || !(3..=modular::MINIMAL_MAX_M).contains(&m) {
        return Err(unsupported());
    }
    let mut sys = match (label.left, label.right) {
        (Dynkin::A(_), Dynkin::A(_)) => {
            let mut s = combine(m, *label, ConstructionTag::KacParityProduct, Factor::su2(m - 2), Factor::su2(m - 1), true)?;
            s.ring = s.ring.relabeled(s.pairs.iter().map(|&(j, k)| format!("({j},{k})")).collect());
            s
        }
        (Dynkin::A(_), Dynkin::D(d)) if m % 4 == 1 => {
            combine(m, *label, ConstructionTag::AEvenTimesDEven, Factor::su2_even(m - 2), Factor::d_even(d / 2)?, false)?
        }
        (Dynkin::D(d), Dynkin::A(_)) if m % 4 == 2 => {
            combine(m, *label, ConstructionTag::AEvenTimesDEven, Factor::d_even(d / 2)?, Factor::su2_even(m - 1), false)?
        }
        (Dynkin::A(_), Dynkin::E(6)) if m == 11 => {
            combine(m, *label, ConstructionTag::AEvenTimesA3, Factor::su2(9), Factor::e6(), true)?
        }
        (Dynkin::E(6), Dynkin::A(_)) if m == 12 => {
            combine(m, *label, ConstructionTag::AEvenTimesA3, Factor::e6(), Factor::su2(11), true)?
        }
        (Dynkin::A(_), Dynkin::E(8)) if m == 29 => {
            combine(m, *label, ConstructionTag::AEvenTimesA4Even, Factor::su2_even(27), Factor::e8(), false)?
        }
        (Dynkin::E(8), Dynkin::A(_)) if m == 30 => {
            combine(m, *label, ConstructionTag::AEvenTimesA4Even, Factor::e8(), Factor::su2_even(29), false)?
        }
        _ => return Err(unsupported()),
    };
    sys.sigma = match sys.tag {
        ConstructionTag::KacParityProduct => sys.index_of_pair(1, 1),
        ConstructionTag::AEvenTimesA3 => sys.index_of_pair(1, 1),
        ConstructionTag::AEvenTimesDEven => find_pair(&sys, "2", "2").filter(|&s| sys.ring.dual(s) == s),
        ConstructionTag::AEvenTimesA4Even => {
            if sys.left.kind == FactorKind::E8 {
                find_pair(&sys, "tau", "14")
            } else {
                find_pair(&sys, "14", "tau")
            }
        }
        ConstructionTag::DEvenTable => None,
    };
    Ok(sys)
}

/// Type I maximal extensions applicable at `m`.
pub fn type_one_labels(m: u32) -> Vec<InvariantLabel> {
    crate::modinv::reference_invariants(m).into_iter().map(|(l, _)| l).filter(|l| l.kind == InvariantType::I).collect()
}

pub fn catalog_systems(m: u32) -> Result<Vec<CatalogSystem>, CatalogError> {
    type_one_labels(m).iter().map(|l| build_catalog_system(m, l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_rules() {
        let r = su2_ring(2);
        assert_eq!(r.product(1, 1).collect::<Vec<_>>(), vec![(0, 1), (2, 1)]);
        assert_eq!(r.check_ring_axioms(), Ok(()));
    }

    #[test]
    fn d4_even_is_z3() {
        let r = d_even_ring(2).unwrap();
        assert_eq!(r.rank(), 3);
        assert!(r.is_pointed());
        assert!(crate::fusion::find_isomorphism(&r, &crate::fusion::cyclic_ring(3)).is_some());
    }

    #[test]
    fn d6_even_is_fib_squared() {
        let r = d_even_ring(3).unwrap();
        let (fib2, _) = FusionRing::product_ring(&fibonacci_ring(), &fibonacci_ring());
        assert!(crate::fusion::find_isomorphism(&r, &fib2).is_some());
    }
}
