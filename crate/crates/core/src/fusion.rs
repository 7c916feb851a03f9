//! Fusion rings: axioms, Perron–Frobenius dimensions, subsystems, automorphisms,
//! gradings and the combinatorial conditions on a generator.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::labelset::{LabelSet, LABELSET_CAPACITY};

pub const DIM_TOLERANCE: f64 = 1e-9;
const PF_TOLERANCE: f64 = 1e-12;
const PF_MAX_ITER: usize = 100_000;
const RING_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FusionError {
    #[error("table shape mismatch: {0}")]
    Shape(String),
    #[error("fusion graph is disconnected: labels {component:?} are unreachable from the unit")]
    Disconnected { component: Vec<usize> },
    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("ring has {0} labels, subsystem search supports at most {LABELSET_CAPACITY}")]
    Capacity(usize),
    #[error("label {0} is not self-conjugate")]
    NotSelfConjugate(usize),
    #[error("label index {0} out of range")]
    BadLabel(usize),
    #[error("product is not closed: {0} x {1} leaves the kept label set")]
    NotClosed(String, String),
    #[error("ring document: {0}")]
    Document(String),
}

/// First violated axiom found by [`FusionRing::check_ring_axioms`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AxiomViolation {
    Unit { a: usize, b: usize },
    DualUnit,
    DualInvolution { a: usize },
    Frobenius { a: usize, b: usize, c: usize },
    Associativity { a: usize, b: usize, c: usize, d: usize },
    Dimensions(String),
    DimensionHomomorphism { a: usize, b: usize, residual: f64 },
}

/// Multiplicity table stored row-compressed over ordered pairs (a, b).
#[derive(Debug)]
pub struct FusionRing {
    labels: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    starts: Vec<usize>,
    targets: Vec<u32>,
    mults: Vec<u32>,
    dims: OnceLock<Vec<f64>>,
}

impl Clone for FusionRing {
    fn clone(&self) -> Self {
        let dims = OnceLock::new();
        if let Some(d) = self.dims.get() {
            let _ = dims.set(d.clone());
        }
        FusionRing {
            labels: self.labels.clone(),
            unit: self.unit,
            dual: self.dual.clone(),
            starts: self.starts.clone(),
            targets: self.targets.clone(),
            mults: self.mults.clone(),
            dims,
        }
    }
}

impl PartialEq for FusionRing {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self.unit == other.unit
            && self.dual == other.dual
            && self.starts == other.starts
            && self.targets == other.targets
            && self.mults == other.mults
    }
}

impl FusionRing {
    /// Builds a ring from a product rule `f(a, b) -> [(c, N_ab^c)]`.
    pub fn from_fn<F>(labels: Vec<String>, unit: usize, dual: Vec<usize>, mut f: F) -> Result<Self, FusionError>
    where
        F: FnMut(usize, usize) -> Vec<(usize, u32)>,
    {
        let r = labels.len();
        if dual.len() != r {
            return Err(FusionError::Shape(format!("dual has {} entries for {r} labels", dual.len())));
        }
        if unit >= r {
            return Err(FusionError::BadLabel(unit));
        }
        if let Some(&bad) = dual.iter().find(|&&d| d >= r) {
            return Err(FusionError::BadLabel(bad));
        }
        let mut starts = Vec::with_capacity(r * r + 1);
        let mut targets = Vec::new();
        let mut mults = Vec::new();
        starts.push(0);
        for a in 0..r {
            for b in 0..r {
                let mut row: Vec<(usize, u32)> = f(a, b).into_iter().filter(|&(_, m)| m > 0).collect();
                row.sort_unstable();
                for w in row.windows(2) {
                    if w[0].0 == w[1].0 {
                        return Err(FusionError::Shape(format!("duplicate target {} in {a} x {b}", w[0].0)));
                    }
                }
                for (c, m) in row {
                    if c >= r {
                        return Err(FusionError::BadLabel(c));
                    }
                    targets.push(c as u32);
                    mults.push(m);
                }
                starts.push(targets.len());
            }
        }
        Ok(FusionRing { labels, unit, dual, starts, targets, mults, dims: OnceLock::new() })
    }

    /// Builds a ring from a dense `N[a][b][c]` table.
    pub fn from_dense(labels: Vec<String>, unit: usize, dual: Vec<usize>, n: &[Vec<Vec<u32>>]) -> Result<Self, FusionError> {
        let r = labels.len();
        if n.len() != r || n.iter().any(|m| m.len() != r || m.iter().any(|row| row.len() != r)) {
            return Err(FusionError::Shape(format!("N must be {r}x{r}x{r}")));
        }
        Self::from_fn(labels, unit, dual, |a, b| {
            n[a][b].iter().enumerate().map(|(c, &m)| (c, m)).collect()
        })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn dual(&self, a: usize) -> usize {
        self.dual[a]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    /// Terms `(c, N_ab^c)` of `a x b`, sorted by `c`.
    pub fn product(&self, a: usize, b: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        let row = a * self.rank() + b;
        let (s, e) = (self.starts[row], self.starts[row + 1]);
        self.targets[s..e].iter().zip(&self.mults[s..e]).map(|(&c, &m)| (c as usize, m))
    }

    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        self.entry_index(a, b, c).map_or(0, |i| self.mults[i])
    }

    /// Position of the channel `(a, b; c)` in the flat entry list, if admissible.
    pub fn entry_index(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        let row = a * self.rank() + b;
        let (s, e) = (self.starts[row], self.starts[row + 1]);
        self.targets[s..e].binary_search(&(c as u32)).ok().map(|i| s + i)
    }

    pub fn entry_count(&self) -> usize {
        self.targets.len()
    }

    /// All admissible channels `(a, b, c, N_ab^c)` in flat entry order.
    pub fn channels(&self) -> impl Iterator<Item = (usize, usize, usize, u32)> + '_ {
        let r = self.rank();
        (0..r * r).flat_map(move |row| {
            (self.starts[row]..self.starts[row + 1])
                .map(move |i| (row / r, row % r, self.targets[i] as usize, self.mults[i]))
        })
    }

    pub fn dense(&self) -> Vec<Vec<Vec<u32>>> {
        let r = self.rank();
        let mut n = vec![vec![vec![0; r]; r]; r];
        for (a, b, c, m) in self.channels() {
            n[a][b][c] = m;
        }
        n
    }

    pub fn is_commutative(&self) -> bool {
        let r = self.rank();
        (0..r).all(|a| (a + 1..r).all(|b| self.product(a, b).eq(self.product(b, a))))
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.mults.iter().all(|&m| m <= 1)
    }

    pub fn is_pointed(&self) -> bool {
        let r = self.rank();
        (0..r).all(|a| self.product(a, self.dual[a]).count() == 1)
    }

    pub fn check_ring_axioms(&self) -> Result<(), AxiomViolation> {
        let r = self.rank();
        let u = self.unit;
        for a in 0..r {
            for b in 0..r {
                let want = u32::from(a == b);
                if self.n(u, a, b) != want || self.n(a, u, b) != want {
                    return Err(AxiomViolation::Unit { a, b });
                }
            }
        }
        if self.dual[u] != u {
            return Err(AxiomViolation::DualUnit);
        }
        if let Some(a) = (0..r).find(|&a| self.dual[self.dual[a]] != a) {
            return Err(AxiomViolation::DualInvolution { a });
        }
        for (a, b, c, m) in self.channels() {
            if self.n(self.dual[a], c, b) != m || self.n(c, self.dual[b], a) != m {
                return Err(AxiomViolation::Frobenius { a, b, c });
            }
        }
        let mut left = vec![0u64; r];
        let mut right = vec![0u64; r];
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    left.iter_mut().for_each(|x| *x = 0);
                    right.iter_mut().for_each(|x| *x = 0);
                    for (e, m1) in self.product(a, b) {
                        for (d, m2) in self.product(e, c) {
                            left[d] += u64::from(m1) * u64::from(m2);
                        }
                    }
                    for (f, m1) in self.product(b, c) {
                        for (d, m2) in self.product(a, f) {
                            right[d] += u64::from(m1) * u64::from(m2);
                        }
                    }
                    if let Some(d) = (0..r).find(|&d| left[d] != right[d]) {
                        return Err(AxiomViolation::Associativity { a, b, c, d });
                    }
                }
            }
        }
        let dims = self.quantum_dimensions().map_err(|e| AxiomViolation::Dimensions(e.to_string()))?;
        for a in 0..r {
            for b in 0..r {
                let s: f64 = self.product(a, b).map(|(c, m)| f64::from(m) * dims[c]).sum();
                let residual = (dims[a] * dims[b] - s).abs();
                if residual > DIM_TOLERANCE * dims[a] * dims[b] {
                    return Err(AxiomViolation::DimensionHomomorphism { a, b, residual });
                }
            }
        }
        Ok(())
    }

    /// Perron–Frobenius dimensions, normalized so the unit has dimension 1.
    pub fn quantum_dimensions(&self) -> Result<&[f64], FusionError> {
        if let Some(d) = self.dims.get() {
            return Ok(d);
        }
        let d = self.perron_frobenius()?;
        Ok(self.dims.get_or_init(|| d))
    }

    /// Dimensions, panicking on rings whose fusion graph is not irreducible.
    pub fn dims(&self) -> &[f64] {
        self.quantum_dimensions().expect("quantum dimensions of an irreducible ring")
    }

    fn perron_frobenius(&self) -> Result<Vec<f64>, FusionError> {
        let r = self.rank();
        let mut m = vec![0f64; r * r];
        for (_, b, c, mult) in self.channels() {
            m[b * r + c] += f64::from(mult);
        }
        let mut seen = vec![false; r];
        let mut stack = vec![self.unit];
        seen[self.unit] = true;
        while let Some(b) = stack.pop() {
            for c in 0..r {
                if m[b * r + c] > 0.0 && !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            let component = (0..r).filter(|&i| !seen[i]).collect();
            return Err(FusionError::Disconnected { component });
        }
        let mut v = vec![1.0; r];
        let mut w = vec![0.0; r];
        for _ in 0..PF_MAX_ITER {
            for b in 0..r {
                w[b] = m[b * r..(b + 1) * r].iter().zip(&v).map(|(x, y)| x * y).sum::<f64>() + v[b];
            }
            let scale = w[self.unit];
            let mut delta = 0f64;
            for b in 0..r {
                let nb = w[b] / scale;
                delta = delta.max((nb - v[b]).abs() / nb.max(1.0));
                v[b] = nb;
            }
            if delta < PF_TOLERANCE {
                return Ok(v);
            }
        }
        Err(FusionError::NoConvergence(PF_MAX_ITER))
    }

    pub fn global_index(&self) -> f64 {
        self.dims().iter().map(|d| d * d).sum()
    }

    /// Global index read as the μ-index of the DHR system.
    pub fn mu_index(&self) -> f64 {
        self.global_index()
    }

    fn supports(&self) -> Vec<LabelSet> {
        let r = self.rank();
        (0..r * r).map(|row| self.product(row / r, row % r).map(|(c, _)| c).collect()).collect()
    }

    fn closure_with(&self, seed: LabelSet, supports: &[LabelSet]) -> LabelSet {
        let r = self.rank();
        let mut set = seed;
        set.insert(self.unit);
        let mut processed = LabelSet::new();
        let mut queue = set.to_vec();
        while let Some(x) = queue.pop() {
            if !processed.insert(x) {
                continue;
            }
            let mut fresh = LabelSet::singleton(self.dual[x]);
            for y in processed.iter() {
                fresh.union_with(&supports[x * r + y]);
                fresh.union_with(&supports[y * r + x]);
            }
            for z in fresh.difference(&set).iter() {
                set.insert(z);
                queue.push(z);
            }
        }
        set
    }

    /// Smallest subsystem containing `seed`.
    pub fn closure(&self, seed: &[usize]) -> Result<LabelSet, FusionError> {
        if self.rank() > LABELSET_CAPACITY {
            return Err(FusionError::Capacity(self.rank()));
        }
        Ok(self.closure_with(seed.iter().copied().collect(), &self.supports()))
    }

    fn is_closed(&self, set: &LabelSet, supports: &[LabelSet]) -> bool {
        let r = self.rank();
        set.iter().all(|a| {
            set.contains(self.dual[a]) && set.iter().all(|b| supports[a * r + b].is_subset(set))
        })
    }

    pub fn enumerate_subsystems(&self) -> Result<Vec<Subsystem>, FusionError> {
        let r = self.rank();
        if r > LABELSET_CAPACITY {
            return Err(FusionError::Capacity(r));
        }
        let supports = self.supports();
        let mut found = BTreeSet::new();
        if r <= 20 {
            let others: Vec<usize> = (0..r).filter(|&i| i != self.unit).collect();
            for mask in 0u32..(1 << others.len()) {
                let mut set = LabelSet::singleton(self.unit);
                for (bit, &i) in others.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        set.insert(i);
                    }
                }
                if self.is_closed(&set, &supports) {
                    found.insert(set);
                }
            }
        } else {
            let base = self.closure_with(LabelSet::new(), &supports);
            found.insert(base);
            let mut frontier = vec![base];
            while let Some(s) = frontier.pop() {
                for x in (0..r).filter(|&x| !s.contains(x)) {
                    let mut seed = s;
                    seed.insert(x);
                    let t = self.closure_with(seed, &supports);
                    if found.insert(t) {
                        frontier.push(t);
                    }
                }
            }
        }
        found
            .into_iter()
            .map(|members| {
                Ok(Subsystem {
                    ring: self.induced(&members.to_vec())?,
                    trivial: members.len() == 1,
                    full: members.len() == r,
                    members,
                })
            })
            .collect()
    }

    /// Ring restricted to a fusion-closed, dual-closed label subset (given in order).
    pub fn induced(&self, members: &[usize]) -> Result<FusionRing, FusionError> {
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let unit = *pos.get(&self.unit).ok_or(FusionError::BadLabel(self.unit))?;
        let dual = members
            .iter()
            .map(|&a| pos.get(&self.dual[a]).copied().ok_or(FusionError::BadLabel(self.dual[a])))
            .collect::<Result<Vec<_>, _>>()?;
        let labels = members.iter().map(|&a| self.labels[a].clone()).collect();
        let mut err = None;
        let ring = FusionRing::from_fn(labels, unit, dual, |i, j| {
            let (a, b) = (members[i], members[j]);
            self.product(a, b)
                .filter_map(|(c, m)| match pos.get(&c) {
                    Some(&k) => Some((k, m)),
                    None => {
                        err = Some(FusionError::NotClosed(self.labels[a].clone(), self.labels[b].clone()));
                        None
                    }
                })
                .collect()
        })?;
        match err {
            Some(e) => Err(e),
            None => {
                if let Some(d) = self.dims.get() {
                    let _ = ring.dims.set(members.iter().map(|&a| d[a]).collect());
                }
                Ok(ring)
            }
        }
    }

    /// Direct product ring restricted to the pairs accepted by `keep`.
    pub fn restricted_product<F>(x: &FusionRing, y: &FusionRing, keep: F) -> Result<(FusionRing, Vec<(usize, usize)>), FusionError>
    where
        F: Fn(usize, usize) -> bool,
    {
        let pairs: Vec<(usize, usize)> = (0..x.rank())
            .flat_map(|i| (0..y.rank()).map(move |j| (i, j)))
            .filter(|&(i, j)| keep(i, j))
            .collect();
        let pos: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let unit = *pos
            .get(&(x.unit, y.unit))
            .ok_or_else(|| FusionError::Shape("kept set must contain the unit".into()))?;
        let dual = pairs
            .iter()
            .map(|&(i, j)| pos.get(&(x.dual[i], y.dual[j])).copied().ok_or(FusionError::BadLabel(i)))
            .collect::<Result<Vec<_>, _>>()?;
        let labels = pairs.iter().map(|&(i, j)| format!("({},{})", x.labels[i], y.labels[j])).collect();
        let mut err = None;
        let ring = FusionRing::from_fn(labels, unit, dual, |p, q| {
            let ((a1, a2), (b1, b2)) = (pairs[p], pairs[q]);
            let mut out = Vec::new();
            for (c1, m1) in x.product(a1, b1) {
                for (c2, m2) in y.product(a2, b2) {
                    match pos.get(&(c1, c2)) {
                        Some(&k) => out.push((k, m1 * m2)),
                        None => err = Some(FusionError::NotClosed(format!("{:?}", pairs[p]), format!("{:?}", pairs[q]))),
                    }
                }
            }
            out
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        if let (Some(dx), Some(dy)) = (x.dims.get(), y.dims.get()) {
            let _ = ring.dims.set(pairs.iter().map(|&(i, j)| dx[i] * dy[j]).collect());
        }
        Ok((ring, pairs))
    }

    pub fn product_ring(x: &FusionRing, y: &FusionRing) -> (FusionRing, Vec<(usize, usize)>) {
        Self::restricted_product(x, y, |_, _| true).expect("full product is closed")
    }

    /// Copy of the ring with new display names.
    pub fn relabeled(&self, labels: Vec<String>) -> FusionRing {
        assert_eq!(labels.len(), self.rank());
        let mut out = self.clone();
        out.labels = labels;
        out
    }

    pub fn fusion_automorphisms(&self) -> Vec<Vec<usize>> {
        isomorphisms(self, self, None)
    }

    pub fn gradings(&self) -> Vec<Vec<u8>> {
        z2_gradings(self)
    }

    /// Canonical nontrivial ℤ/2 grading: the least odd-set vector in lexicographic order.
    pub fn detect_grading(&self) -> Option<GradedSystem> {
        self.gradings()
            .into_iter()
            .filter(|g| g.iter().any(|&x| x == 1))
            .min()
            .map(|grade| GradedSystem { grade })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = RingDocument {
            version: RING_FORMAT_VERSION,
            labels: self.labels.clone(),
            unit: self.unit,
            dual: self.dual.clone(),
            n: self.dense(),
            dims: self.dims.get().cloned(),
        };
        serde_json::to_value(doc).expect("ring document serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, FusionError> {
        let doc: RingDocument = serde_json::from_value(value.clone()).map_err(|e| FusionError::Document(e.to_string()))?;
        if doc.version != RING_FORMAT_VERSION {
            return Err(FusionError::Document(format!("unsupported version {}", doc.version)));
        }
        let ring = FusionRing::from_dense(doc.labels, doc.unit, doc.dual, &doc.n)?;
        if let Some(d) = doc.dims {
            if d.len() != ring.rank() {
                return Err(FusionError::Shape("dims length".into()));
            }
            let _ = ring.dims.set(d);
        }
        Ok(ring)
    }
}

#[derive(Serialize, Deserialize)]
struct RingDocument {
    version: u32,
    labels: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    #[serde(rename = "N")]
    n: Vec<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dims: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct Subsystem {
    pub members: LabelSet,
    pub ring: FusionRing,
    pub trivial: bool,
    pub full: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSystem {
    pub grade: Vec<u8>,
}

impl GradedSystem {
    pub fn odd_labels(&self) -> Vec<usize> {
        (0..self.grade.len()).filter(|&i| self.grade[i] == 1).collect()
    }
}

fn z2_gradings(ring: &FusionRing) -> Vec<Vec<u8>> {
    let r = ring.rank();
    let words = r.div_ceil(64);
    let bit = |row: &mut Vec<u64>, i: usize| row[i / 64] ^= 1 << (i % 64);
    let lead = |row: &[u64]| (0..r).find(|&i| row[i / 64] & (1 << (i % 64)) != 0);
    let mut basis: Vec<Option<Vec<u64>>> = vec![None; r];
    let mut insert = |mut row: Vec<u64>| {
        while let Some(p) = lead(&row) {
            match &basis[p] {
                Some(b) => row.iter_mut().zip(b).for_each(|(x, y)| *x ^= y),
                None => {
                    basis[p] = Some(row);
                    return;
                }
            }
        }
    };
    let mut unit_row = vec![0u64; words];
    bit(&mut unit_row, ring.unit());
    insert(unit_row);
    for (a, b, c, _) in ring.channels() {
        let mut row = vec![0u64; words];
        bit(&mut row, a);
        bit(&mut row, b);
        bit(&mut row, c);
        insert(row);
    }
    for p in (0..r).rev() {
        if let Some(row) = basis[p].clone() {
            for q in 0..p {
                if let Some(other) = basis[q].as_mut() {
                    if other[p / 64] & (1 << (p % 64)) != 0 {
                        other.iter_mut().zip(&row).for_each(|(x, y)| *x ^= y);
                    }
                }
            }
        }
    }
    let free: Vec<usize> = (0..r).filter(|&i| basis[i].is_none()).collect();
    let generators: Vec<Vec<u8>> = free
        .iter()
        .map(|&f| {
            let mut g = vec![0u8; r];
            g[f] = 1;
            for p in 0..r {
                if let Some(row) = &basis[p] {
                    if row[f / 64] & (1 << (f % 64)) != 0 {
                        g[p] = 1;
                    }
                }
            }
            g
        })
        .collect();
    let dim = generators.len().min(20);
    let mut out: Vec<Vec<u8>> = (0u32..(1 << dim))
        .map(|mask| {
            let mut g = vec![0u8; r];
            for (i, gen) in generators.iter().enumerate().take(dim) {
                if mask & (1 << i) != 0 {
                    g.iter_mut().zip(gen).for_each(|(x, y)| *x ^= y);
                }
            }
            g
        })
        .collect();
    out.sort();
    out
}

fn label_signature(ring: &FusionRing, x: usize) -> (i64, bool, u32, Vec<(usize, u32)>) {
    let d = ring.quantum_dimensions().map(|d| (d[x] * 1e8).round() as i64).unwrap_or(0);
    let mut shape: Vec<(usize, u32)> = (0..ring.rank())
        .map(|y| ring.product(x, y).fold((0, 0), |(n, s), (_, m)| (n + 1, s + m)))
        .collect();
    shape.sort_unstable();
    (d, ring.dual(x) == x, ring.n(x, x, x), shape)
}

/// All label bijections `π: a -> b` preserving unit, duals and fusion; at most `limit` of them.
pub fn isomorphisms(a: &FusionRing, b: &FusionRing, limit: Option<usize>) -> Vec<Vec<usize>> {
    let r = a.rank();
    if b.rank() != r || a.entry_count() != b.entry_count() {
        return Vec::new();
    }
    let sig_a: Vec<_> = (0..r).map(|x| label_signature(a, x)).collect();
    let sig_b: Vec<_> = (0..r).map(|x| label_signature(b, x)).collect();
    let candidates: Vec<Vec<usize>> =
        (0..r).map(|x| (0..r).filter(|&y| sig_a[x] == sig_b[y]).collect()).collect();
    if candidates.iter().any(|c| c.is_empty()) || sig_a[a.unit()] != sig_b[b.unit()] {
        return Vec::new();
    }
    let mut order = vec![a.unit()];
    let mut placed = vec![false; r];
    placed[a.unit()] = true;
    while order.len() < r {
        let mut frontier = vec![false; r];
        for &x in &order {
            for &y in &order {
                for (c, _) in a.product(x, y) {
                    frontier[c] = !placed[c];
                }
            }
        }
        let pool: Vec<usize> = if frontier.iter().any(|&f| f) {
            (0..r).filter(|&i| frontier[i]).collect()
        } else {
            (0..r).filter(|&i| !placed[i]).collect()
        };
        let next = *pool.iter().min_by_key(|&&i| (candidates[i].len(), i)).unwrap();
        for x in [next, a.dual(next)] {
            if !placed[x] {
                placed[x] = true;
                order.push(x);
            }
        }
    }
    let mut search = IsoSearch {
        a,
        b,
        candidates: &candidates,
        order: &order,
        map: vec![usize::MAX; r],
        inverse: vec![usize::MAX; r],
        out: Vec::new(),
        limit: limit.unwrap_or(usize::MAX),
    };
    search.map[a.unit()] = b.unit();
    search.inverse[b.unit()] = a.unit();
    search.run(1);
    let mut out = search.out;
    out.sort();
    out
}

struct IsoSearch<'a> {
    a: &'a FusionRing,
    b: &'a FusionRing,
    candidates: &'a [Vec<usize>],
    order: &'a [usize],
    map: Vec<usize>,
    inverse: Vec<usize>,
    out: Vec<Vec<usize>>,
    limit: usize,
}

impl IsoSearch<'_> {
    fn run(&mut self, depth: usize) {
        if self.out.len() >= self.limit {
            return;
        }
        if depth == self.order.len() {
            if self.verify() {
                self.out.push(self.map.clone());
            }
            return;
        }
        let x = self.order[depth];
        if self.map[x] != usize::MAX {
            self.run(depth + 1);
            return;
        }
        let xd = self.a.dual(x);
        for &y in &self.candidates[x] {
            if self.inverse[y] != usize::MAX {
                continue;
            }
            let yd = self.b.dual(y);
            if (xd == x) != (yd == y) || (xd != x && (self.inverse[yd] != usize::MAX || !self.candidates[xd].contains(&yd))) {
                continue;
            }
            self.assign(x, y);
            if xd != x {
                self.assign(xd, yd);
            }
            if self.consistent(x) && (xd == x || self.consistent(xd)) {
                self.run(depth + 1);
            }
            self.unassign(x, y);
            if xd != x {
                self.unassign(xd, yd);
            }
            if self.out.len() >= self.limit {
                return;
            }
        }
    }

    fn assign(&mut self, x: usize, y: usize) {
        self.map[x] = y;
        self.inverse[y] = x;
    }

    fn unassign(&mut self, x: usize, y: usize) {
        self.map[x] = usize::MAX;
        self.inverse[y] = usize::MAX;
    }

    fn pair_consistent(&self, p: usize, q: usize) -> bool {
        let (pp, qq) = (self.map[p], self.map[q]);
        for (c, m) in self.a.product(p, q) {
            let cc = self.map[c];
            if cc != usize::MAX && self.b.n(pp, qq, cc) != m {
                return false;
            }
        }
        for (cc, m) in self.b.product(pp, qq) {
            let c = self.inverse[cc];
            if c != usize::MAX && self.a.n(p, q, c) != m {
                return false;
            }
        }
        true
    }

    fn consistent(&self, x: usize) -> bool {
        (0..self.a.rank())
            .filter(|&z| self.map[z] != usize::MAX)
            .all(|z| self.pair_consistent(x, z) && self.pair_consistent(z, x))
    }

    fn verify(&self) -> bool {
        let r = self.a.rank();
        (0..r).all(|p| {
            (0..r).all(|q| {
                let mut img: Vec<(usize, u32)> = self.a.product(p, q).map(|(c, m)| (self.map[c], m)).collect();
                img.sort_unstable();
                img.into_iter().eq(self.b.product(self.map[p], self.map[q]))
            })
        })
    }
}

pub fn find_isomorphism(a: &FusionRing, b: &FusionRing) -> Option<Vec<usize>> {
    isomorphisms(a, b, Some(1)).pop()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tri {
    Holds,
    Fails,
    NotEvaluated,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::Holds
        } else {
            Tri::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Tri::Holds
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Multiplicity { a: usize, b: usize, n: u32 },
    NotGenerator { reached: usize, total: usize },
    NoSelfFusion,
    NoOddGrading,
    Bratteli { level: usize, nu1: usize, nu2: usize, lambda: usize },
    ZeroCell { i: usize, j: usize, k: usize, l: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub cond1: Tri,
    pub cond2a: Tri,
    pub cond2b: Tri,
    pub cond3: Tri,
    pub cond4: Tri,
    pub generates: bool,
    pub witnesses: Vec<Witness>,
}

impl ConditionReport {
    pub fn vanishing_applies(&self) -> bool {
        self.generates
            && self.cond1.holds()
            && (self.cond2a.holds() || self.cond2b.holds())
            && self.cond3.holds()
            && self.cond4.holds()
    }
}

/// Conditions 1, 2(a), 2(b) and 4 for a self-conjugate generator; condition 3 is left unevaluated.
pub fn generator_analysis(ring: &FusionRing, sigma: usize) -> Result<ConditionReport, FusionError> {
    let r = ring.rank();
    if sigma >= r {
        return Err(FusionError::BadLabel(sigma));
    }
    if ring.dual(sigma) != sigma {
        return Err(FusionError::NotSelfConjugate(sigma));
    }
    let mut witnesses = Vec::new();
    let mut cond1 = true;
    for a in 0..r {
        for (b, m) in ring.product(a, sigma) {
            if m > 1 {
                cond1 = false;
                witnesses.push(Witness::Multiplicity { a, b, n: m });
            }
        }
    }
    let reached = sigma_levels(ring, sigma, r + 2).into_iter().fold(LabelSetVec::new(r), |mut acc, l| {
        acc.union(&l);
        acc
    });
    let generates = reached.count() == r;
    if !generates {
        witnesses.push(Witness::NotGenerator { reached: reached.count(), total: r });
    }
    let cond2a = ring.n(sigma, sigma, sigma) >= 1;
    if !cond2a {
        witnesses.push(Witness::NoSelfFusion);
    }
    let cond2b = ring.gradings().iter().any(|g| g[sigma] == 1);
    if !cond2b {
        witnesses.push(Witness::NoOddGrading);
    }
    let c4 = bratteli_condition4(ring, sigma, r + 2)?;
    if let Some(w) = c4.witness.clone() {
        witnesses.push(w);
    }
    Ok(ConditionReport {
        cond1: Tri::from_bool(cond1),
        cond2a: Tri::from_bool(cond2a),
        cond2b: Tri::from_bool(cond2b),
        cond3: Tri::NotEvaluated,
        cond4: Tri::from_bool(c4.holds),
        generates,
        witnesses,
    })
}

/// Plain boolean vector set, used where label counts may exceed the bitset capacity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelSetVec(Vec<bool>);

impl LabelSetVec {
    pub fn new(r: usize) -> Self {
        LabelSetVec(vec![false; r])
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i] = true;
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn union(&mut self, other: &Self) {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a |= b);
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.0.len()).filter(|&i| self.0[i])
    }
}

/// Level sets `L_n = {λ ≺ σ^n}` for `n = 0..=depth`.
pub fn sigma_levels(ring: &FusionRing, sigma: usize, depth: usize) -> Vec<LabelSetVec> {
    let r = ring.rank();
    let mut levels = Vec::with_capacity(depth + 1);
    let mut current = LabelSetVec::new(r);
    current.insert(ring.unit());
    levels.push(current.clone());
    for _ in 0..depth {
        let mut next = LabelSetVec::new(r);
        for mu in current.iter() {
            for (lambda, _) in ring.product(sigma, mu) {
                next.insert(lambda);
            }
        }
        levels.push(next.clone());
        current = next;
    }
    levels
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BratteliResult {
    pub holds: bool,
    pub depth: usize,
    pub witness: Option<Witness>,
}

/// Any two vertices of level n with a common successor must share a predecessor at level n−1.
pub fn bratteli_condition4(ring: &FusionRing, sigma: usize, depth: usize) -> Result<BratteliResult, FusionError> {
    if sigma >= ring.rank() {
        return Err(FusionError::BadLabel(sigma));
    }
    let levels = sigma_levels(ring, sigma, depth + 1);
    for n in 1..=depth {
        let (prev, cur, next) = (&levels[n - 1], &levels[n], &levels[n + 1]);
        let preds = |nu: usize| -> Vec<usize> { prev.iter().filter(|&mu| ring.n(sigma, mu, nu) > 0).collect() };
        for lambda in next.iter() {
            let parents: Vec<usize> = cur.iter().filter(|&nu| ring.n(sigma, nu, lambda) > 0).collect();
            for (i, &nu1) in parents.iter().enumerate() {
                let p1 = preds(nu1);
                for &nu2 in &parents[i + 1..] {
                    if !preds(nu2).iter().any(|mu| p1.contains(mu)) {
                        return Ok(BratteliResult {
                            holds: false,
                            depth,
                            witness: Some(Witness::Bratteli { level: n, nu1, nu2, lambda }),
                        });
                    }
                }
            }
        }
    }
    Ok(BratteliResult { holds: true, depth, witness: None })
}

/// Group ring of ℤ/n.
pub fn cyclic_ring(n: usize) -> FusionRing {
    let labels = (0..n).map(|i| i.to_string()).collect();
    let dual = (0..n).map(|i| (n - i) % n).collect();
    FusionRing::from_fn(labels, 0, dual, |a, b| vec![((a + b) % n, 1)]).expect("cyclic group ring")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ising() -> FusionRing {
        let labels = vec!["1".into(), "e".into(), "s".into()];
        FusionRing::from_fn(labels, 0, vec![0, 1, 2], |a, b| match (a, b) {
            (0, x) | (x, 0) => vec![(x, 1)],
            (1, 1) => vec![(0, 1)],
            (1, 2) | (2, 1) => vec![(2, 1)],
            _ => vec![(0, 1), (1, 1)],
        })
        .unwrap()
    }

    #[test]
    fn ising_axioms_and_dims() {
        let r = ising();
        assert_eq!(r.check_ring_axioms(), Ok(()));
        let d = r.dims();
        assert!((d[2] - 2f64.sqrt()).abs() < 1e-12);
        assert!((r.global_index() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn ising_subsystems_match_brute_force() {
        let subs = ising().enumerate_subsystems().unwrap();
        let members: Vec<Vec<usize>> = subs.iter().map(|s| s.members.to_vec()).collect();
        assert_eq!(members, vec![vec![0], vec![0, 1], vec![0, 1, 2]]);
        assert!(subs[0].trivial && subs[2].full);
    }

    #[test]
    fn ising_has_only_identity_automorphism() {
        assert_eq!(ising().fusion_automorphisms(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn broken_unit_is_reported() {
        let r = FusionRing::from_fn(vec!["1".into(), "g".into()], 0, vec![0, 1], |a, b| match (a, b) {
            (0, 1) => vec![(0, 1)],
            _ => vec![((a + b) % 2, 1)],
        })
        .unwrap();
        assert!(matches!(r.check_ring_axioms(), Err(AxiomViolation::Unit { .. })));
    }

    #[test]
    fn cyclic_rings_are_pointed_with_unit_dims() {
        for n in 1..8 {
            let r = cyclic_ring(n);
            assert_eq!(r.check_ring_axioms(), Ok(()));
            assert!(r.dims().iter().all(|d| (d - 1.0).abs() < 1e-12));
            assert!(r.is_pointed());
        }
        assert_eq!(cyclic_ring(2).enumerate_subsystems().unwrap().len(), 2);
    }

    #[test]
    fn gradings_of_ising_and_its_even_part() {
        let even = ising().induced(&[0, 1]).unwrap();
        assert_eq!(ising().detect_grading().unwrap().grade, vec![0, 0, 1]);
        assert_eq!(even.detect_grading().unwrap().grade, vec![0, 1]);
        let z2 = cyclic_ring(2);
        assert_eq!(z2.detect_grading().unwrap().grade, vec![0, 1]);
    }

    #[test]
    fn json_round_trip() {
        let r = ising();
        let _ = r.dims();
        let back = FusionRing::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.dims(), r.dims());
    }
}
