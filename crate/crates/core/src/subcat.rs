//! Proper subsystems of the maximal-extension systems and the non-maximal nets they give.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{self, CatalogError, CatalogSystem, FactorKind};
use crate::fusion::{cyclic_ring, find_isomorphism, FusionError, FusionRing};
use crate::modinv::ExtensionSpec;

#[derive(Debug, Error)]
pub enum SubcatError {
    #[error("m = {0} is outside 3..=32")]
    OutOfRange(u32),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AutomorphismFlag {
    Trivial,
    Nontrivial,
}

impl fmt::Display for AutomorphismFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AutomorphismFlag::Trivial => "trivial",
            AutomorphismFlag::Nontrivial => "nontrivial",
        })
    }
}

/// A row `(m, parent, subsystem, automorphism)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SubcatRow {
    pub m: u32,
    pub parent: String,
    pub subsystem: String,
    pub automorphism: AutomorphismFlag,
}

impl SubcatRow {
    fn new(m: u32, parent: impl Into<String>, subsystem: impl Into<String>, automorphism: AutomorphismFlag) -> Self {
        SubcatRow { m, parent: parent.into(), subsystem: subsystem.into(), automorphism }
    }
}

/// A computed non-maximal net: a proper subsystem of a maximal-extension system with an automorphism class.
#[derive(Debug, Clone, Serialize)]
pub struct NonMaximalNet {
    pub row: SubcatRow,
    pub members: Vec<usize>,
    pub labels: Vec<String>,
    /// Automorphisms of the parent that fix the subsystem and qualify for a twisted coupling.
    pub qualifying_automorphisms: usize,
    pub mu: f64,
}

fn su2(k: u32) -> String {
    format!("SU(2)_{k}")
}

fn su2_even(k: u32) -> String {
    format!("SU(2)_{k}^even")
}

fn d_even(two_n: u32) -> String {
    format!("D_{two_n}^even")
}

/// Rows of the published list of proper subsystems with automorphisms that apply at `m`.
pub fn table_two_rows(m: u32) -> Vec<SubcatRow> {
    use AutomorphismFlag::*;
    let mut rows = Vec::new();
    if m < 3 {
        return rows;
    }
    let aa = format!("(A_{}, A_{m})", m - 1);
    let mut push = |parent: &str, sub: String, flag| rows.push(SubcatRow::new(m, parent, sub, flag));
    push(&aa, "{id}".into(), Trivial);
    push(&aa, "Z/2".into(), Trivial);
    push(&aa, su2(m - 2), Trivial);
    push(&aa, su2_even(m - 2), Trivial);
    if m % 4 == 0 {
        push(&aa, su2_even(m - 2), Nontrivial);
    }
    push(&aa, su2(m - 1), Trivial);
    if m % 4 == 3 {
        push(&aa, su2_even(m - 1), Nontrivial);
    }
    let prod = format!("{}×{}", su2_even(m - 2), su2_even(m - 1));
    push(&aa, prod.clone(), Trivial);
    if m % 4 == 0 || m % 4 == 3 {
        push(&aa, prod, Nontrivial);
    }
    if m % 4 == 1 && m >= 5 {
        let p = format!("(A_{}, D_{})", m - 1, (m + 3) / 2);
        push(&p, "{id}".into(), Trivial);
        push(&p, su2_even(m - 2), Trivial);
        push(&p, d_even((m + 3) / 2), Trivial);
    }
    if m % 4 == 2 && m >= 6 {
        let p = format!("(D_{}, A_{m})", (m + 2) / 2);
        push(&p, "{id}".into(), Trivial);
        push(&p, su2_even(m - 1), Trivial);
        push(&p, d_even((m + 2) / 2), Trivial);
    }
    let e6 = |p: &str, k: u32, push: &mut dyn FnMut(&str, String, AutomorphismFlag)| {
        push(p, "{id}".into(), Trivial);
        push(p, "Z/2".into(), Trivial);
        push(p, su2(2), Trivial);
        push(p, su2_even(k), Trivial);
        push(p, format!("Z/2×{}", su2_even(k)), Trivial);
    };
    match m {
        11 => e6("(A_10, E_6)", 9, &mut push),
        12 => e6("(E_6, A_12)", 11, &mut push),
        17 => push("(A_16, D_10)", d_even(10), Nontrivial),
        18 => push("(D_10, A_18)", d_even(10), Nontrivial),
        29 | 30 => {
            let p = if m == 29 { "(A_28, E_8)" } else { "(E_8, A_30)" };
            push(p, "{id}".into(), Trivial);
            push(p, su2_even(3), Trivial);
            push(p, su2_even(m - 2 + u32::from(m == 30)), Trivial);
        }
        _ => {}
    }
    rows.sort();
    rows.dedup();
    rows
}

/// Reference rings used to name subsystems at `m`, in order of preference.
pub fn vocabulary(sys: &CatalogSystem) -> Result<Vec<(String, FusionRing)>, SubcatError> {
    let m = sys.m;
    let mut levels: BTreeSet<u32> = [m - 2, m - 1, 3].into_iter().collect();
    for f in [&sys.left, &sys.right] {
        if f.kind == FactorKind::E6 {
            levels.insert(2);
        }
    }
    let mut out = vec![("{id}".to_string(), cyclic_ring(1)), ("Z/2".to_string(), cyclic_ring(2))];
    for f in [&sys.left, &sys.right] {
        if f.kind == FactorKind::DEven {
            out.push((f.name.clone(), f.ring.clone()));
        }
    }
    for &k in &levels {
        out.push((su2(k), catalog::su2_ring(k)));
        if k >= 2 {
            out.push((su2_even(k), catalog::su2_even_ring(k)));
        }
    }
    for &k in &levels {
        if k >= 2 {
            out.push((format!("Z/2×{}", su2_even(k)), FusionRing::product_ring(&cyclic_ring(2), &catalog::su2_even_ring(k)).0));
        }
    }
    if m >= 4 {
        let (a, b) = (catalog::su2_even_ring(m - 2), catalog::su2_even_ring(m - 1));
        out.push((format!("{}×{}", su2_even(m - 2), su2_even(m - 1)), FusionRing::product_ring(&a, &b).0));
    }
    Ok(out)
}

fn sorted_dims(r: &FusionRing) -> Option<Vec<f64>> {
    let mut d = r.quantum_dimensions().ok()?.to_vec();
    d.sort_by(f64::total_cmp);
    Some(d)
}

/// First vocabulary entry isomorphic to `ring`, compared by dimension vector first.
pub fn name_subsystem(ring: &FusionRing, vocab: &[(String, FusionRing)]) -> String {
    let dims = sorted_dims(ring);
    vocab
        .iter()
        .filter(|(_, r)| r.rank() == ring.rank())
        .filter(|(_, r)| match (&dims, sorted_dims(r)) {
            (Some(a), Some(b)) => a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-9),
            _ => false,
        })
        .find(|(_, r)| find_isomorphism(ring, r).is_some())
        .map(|(n, _)| n.clone())
        .unwrap_or_else(|| format!("unnamed[{}]", ring.rank()))
}

/// `μ = w(full) / w(subsystem)`.
pub fn mu_index(full: &FusionRing, members: &[usize]) -> f64 {
    let d = full.dims();
    full.global_index() / members.iter().map(|&i| d[i] * d[i]).sum::<f64>()
}

/// Automorphisms of the parent that fix `members`, move some member, keep its spin, and change its branching.
fn qualifying(sys: &CatalogSystem, autos: &[Vec<usize>], members: &[usize]) -> usize {
    let set: BTreeSet<usize> = members.iter().copied().collect();
    autos
        .iter()
        .filter(|a| members.iter().all(|x| set.contains(&a[*x])))
        .filter(|a| members.iter().any(|&x| a[x] != x))
        .filter(|a| members.iter().all(|&x| sys.same_spin(x, a[x])))
        .filter(|a| members.iter().any(|&x| sys.branching(a[x]) != sys.branching(x)))
        .count()
}

pub fn classify_system(sys: &CatalogSystem) -> Result<Vec<NonMaximalNet>, SubcatError> {
    let vocab = vocabulary(sys)?;
    let autos = sys.ring.fusion_automorphisms();
    let mut out = Vec::new();
    for sub in sys.ring.enumerate_subsystems()? {
        if sub.full {
            continue;
        }
        let members = sub.members.to_vec();
        let name = name_subsystem(&sub.ring, &vocab);
        let labels: Vec<String> = members.iter().map(|&i| sys.ring.label(i).to_string()).collect();
        let q = qualifying(sys, &autos, &members);
        let mu = mu_index(&sys.ring, &members);
        let mut push = |flag| {
            out.push(NonMaximalNet {
                row: SubcatRow::new(sys.m, sys.name.clone(), name.clone(), flag),
                members: members.clone(),
                labels: labels.clone(),
                qualifying_automorphisms: q,
                mu,
            })
        };
        push(AutomorphismFlag::Trivial);
        if q > 0 {
            push(AutomorphismFlag::Nontrivial);
        }
    }
    Ok(out)
}

/// Non-maximal nets from every type I maximal extension at `m`.
pub fn classify_nonmaximal(m: u32) -> Result<Vec<NonMaximalNet>, SubcatError> {
    if !(3..=crate::modular::MINIMAL_MAX_M).contains(&m) {
        return Err(SubcatError::OutOfRange(m));
    }
    let mut out = Vec::new();
    for sys in catalog::catalog_systems(m)? {
        out.extend(classify_system(&sys)?);
    }
    Ok(out)
}

/// Distinct rows of a classification.
pub fn rows(nets: &[NonMaximalNet]) -> Vec<SubcatRow> {
    let set: BTreeSet<SubcatRow> = nets.iter().map(|n| n.row.clone()).collect();
    set.into_iter().collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TableComparison {
    pub m: u32,
    pub matches: bool,
    pub missing: Vec<SubcatRow>,
    pub extra: Vec<SubcatRow>,
}

/// Fusion ring denoted by a subsystem name, for the names the vocabulary produces.
pub fn ring_for_name(name: &str) -> Option<FusionRing> {
    let level = |s: &str| s.strip_prefix("SU(2)_").and_then(|r| r.parse::<u32>().ok());
    let even = |s: &str| s.strip_suffix("^even").and_then(level);
    let factor = |s: &str| -> Option<FusionRing> {
        match s {
            "{id}" => Some(cyclic_ring(1)),
            "Z/2" => Some(cyclic_ring(2)),
            _ => {
                if let Some(k) = even(s) {
                    Some(catalog::su2_even_ring(k))
                } else if let Some(k) = level(s) {
                    Some(catalog::su2_ring(k))
                } else {
                    let two_n: u32 = s.strip_prefix("D_")?.strip_suffix("^even")?.parse().ok()?;
                    catalog::d_even_ring(two_n / 2).ok()
                }
            }
        }
    };
    name.split('×').map(factor).try_fold(cyclic_ring(1), |acc, r| Some(FusionRing::product_ring(&acc, &r?).0))
}

/// Rows with each subsystem renamed through `vocab`, so isomorphic names coincide.
pub fn canonical_rows(rows: &[SubcatRow], vocab_of: impl Fn(&str) -> Option<Vec<(String, FusionRing)>>) -> Vec<SubcatRow> {
    let set: BTreeSet<SubcatRow> = rows
        .iter()
        .map(|r| {
            let name = vocab_of(&r.parent)
                .zip(ring_for_name(&r.subsystem))
                .map(|(v, ring)| name_subsystem(&ring, &v))
                .unwrap_or_else(|| r.subsystem.clone());
            SubcatRow { subsystem: name, ..r.clone() }
        })
        .collect();
    set.into_iter().collect()
}

/// Compares computed rows against the published ones, with published names renamed up to isomorphism.
pub fn compare_with_table(m: u32, computed: &[SubcatRow]) -> TableComparison {
    let systems = catalog::catalog_systems(m).unwrap_or_default();
    let vocab_of = |parent: &str| systems.iter().find(|s| s.name == parent).and_then(|s| vocabulary(s).ok());
    let expected: BTreeSet<SubcatRow> = canonical_rows(&table_two_rows(m), vocab_of).into_iter().collect();
    let got: BTreeSet<SubcatRow> = computed.iter().cloned().collect();
    let missing: Vec<SubcatRow> = expected.difference(&got).cloned().collect();
    let extra: Vec<SubcatRow> = got.difference(&expected).cloned().collect();
    TableComparison { m, matches: missing.is_empty() && extra.is_empty(), missing, extra }
}

/// True iff the extension uses its whole DHR system.
pub fn maximality_test(spec: &ExtensionSpec) -> bool {
    spec.maximal && spec.subsystem.len() == spec.system_size
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows_at_eight_include_both_flags() {
        let rows = table_two_rows(8);
        let hits: Vec<_> = rows.iter().filter(|r| r.subsystem == "SU(2)_6^even").collect();
        assert_eq!(hits.len(), 2);
    }

    #[test]
    fn names_round_trip() {
        let r = ring_for_name("Z/2×SU(2)_9^even").unwrap();
        assert_eq!(r.rank(), 10);
        assert!(find_isomorphism(&r, &catalog::su2_ring(9)).is_some());
        assert_eq!(ring_for_name("SU(2)_6^even×SU(2)_7^even").unwrap().rank(), 16);
    }

    #[test]
    fn table_rows_at_twelve() {
        let rows = table_two_rows(12);
        assert!(rows.iter().any(|r| r.parent == "(E_6, A_12)" && r.subsystem == "Z/2×SU(2)_11^even"));
    }
}
