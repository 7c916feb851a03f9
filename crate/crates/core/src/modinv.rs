//! Physical modular invariants of the minimal models: commutant basis, bounded
//! integer search, A-D-E recognition and extension decoding.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{self, CatalogError, Factor};
use crate::fusion::FusionRing;
use crate::modular::{kac_labels, ModelTag, ModularData, ModularError};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const MATRIX_TOLERANCE: f64 = 1e-7;
const NULL_EIGEN_RATIO: f64 = 1e-11;
const GAP_EIGEN_RATIO: f64 = 1e-6;
const MAX_DENOMINATOR: i64 = 1_000;
const SNAP_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ModinvError {
    #[error("constraint system is numerically rank-deficient (eigenvalue ratio {ratio:e} inside the gap)")]
    RankDeficient { ratio: f64 },
    #[error("rationalized commutant basis misses S-commutation by {0:e}")]
    Residual(f64),
    #[error("commutant basis entry {value} has no small rational form")]
    NonRational { value: f64 },
    #[error("search needs {needed} nodes, budget is {budget}")]
    Budget { needed: u128, budget: u64 },
    #[error("unlisted invariant: coupling matrix matches no A-D-E reference at m = {0}")]
    Unlisted(u32),
    #[error("shape mismatch: Z is {z}x{z}, data ranks are {left} and {right}")]
    Shape { z: usize, left: usize, right: usize },
    #[error("modular invariants are only constructed for minimal models")]
    NotMinimal,
    #[error("no automorphism of the extended system reproduces the coupling")]
    NoAutomorphism,
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Catalog(#[from] Box<CatalogError>),
}

impl From<CatalogError> for ModinvError {
    fn from(e: CatalogError) -> Self {
        ModinvError::Catalog(Box::new(e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dynkin {
    A(u32),
    D(u32),
    E(u32),
}

impl Dynkin {
    pub fn coxeter(self) -> u32 {
        match self {
            Dynkin::A(n) => n + 1,
            Dynkin::D(n) => 2 * n - 2,
            Dynkin::E(6) => 12,
            Dynkin::E(7) => 18,
            Dynkin::E(8) => 30,
            Dynkin::E(n) => panic!("no E_{n}"),
        }
    }

    /// Diagrams with Coxeter number `h`.
    pub fn with_coxeter(h: u32) -> Vec<Dynkin> {
        let mut out = vec![Dynkin::A(h - 1)];
        if h % 2 == 0 && h >= 6 {
            out.push(Dynkin::D(h / 2 + 1));
        }
        match h {
            12 => out.push(Dynkin::E(6)),
            18 => out.push(Dynkin::E(7)),
            30 => out.push(Dynkin::E(8)),
            _ => {}
        }
        out
    }

    pub fn is_a(self) -> bool {
        matches!(self, Dynkin::A(_))
    }
}

impl fmt::Display for Dynkin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dynkin::A(n) => write!(f, "A_{n}"),
            Dynkin::D(n) => write!(f, "D_{n}"),
            Dynkin::E(n) => write!(f, "E_{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InvariantType {
    I,
    II,
}

impl fmt::Display for InvariantType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvariantType::I => "I",
            InvariantType::II => "II",
        })
    }
}

/// Pair of Dynkin diagrams with Coxeter numbers `(m, m + 1)` and the invariant type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InvariantLabel {
    pub m: u32,
    pub left: Dynkin,
    pub right: Dynkin,
    pub kind: InvariantType,
}

impl fmt::Display for InvariantLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// Rows of the Cappelli–Itzykson–Zuber list for the Virasoro minimal models.
pub fn table_one_labels(m: u32) -> Vec<InvariantLabel> {
    use Dynkin::*;
    use InvariantType::*;
    let lab = |left, right, kind| InvariantLabel { m, left, right, kind };
    let mut out = vec![lab(A(m - 1), A(m), I)];
    match m % 4 {
        0 if m >= 8 => out.push(lab(D(m / 2 + 1), A(m), II)),
        1 if m >= 5 => out.push(lab(A(m - 1), D((m - 1) / 2 + 2), I)),
        2 if m >= 6 => out.push(lab(D((m - 2) / 2 + 2), A(m), I)),
        3 if m >= 7 => out.push(lab(A(m - 1), D((m - 3) / 2 + 3), II)),
        _ => {}
    }
    match m {
        11 => out.push(lab(A(10), E(6), I)),
        12 => out.push(lab(E(6), A(12), I)),
        17 => out.push(lab(A(16), E(7), II)),
        18 => out.push(lab(E(7), A(18), II)),
        29 => out.push(lab(A(28), E(8), I)),
        30 => out.push(lab(E(8), A(30), I)),
        _ => {}
    }
    out
}

/// Square integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    pub n: usize,
    pub entries: Vec<u32>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, entries: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut z = Self::zeros(n);
        for i in 0..n {
            z.set(i, i, 1);
        }
        z
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_permutation(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).map(|j| self.get(i, j)).sum::<u32>() == 1
                && (0..self.n).map(|j| self.get(j, i)).sum::<u32>() == 1
                && (0..self.n).all(|j| self.get(i, j) <= 1)
        })
    }

    fn support(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.get(i, j) > 0).collect()
    }

    /// Block form `Σ_b v_b v_bᵀ`: symmetric, and linked labels share row supports.
    pub fn is_block_diagonal(&self) -> bool {
        self.is_symmetric()
            && (0..self.n).all(|i| {
                let si = self.support(i);
                si.iter().all(|&j| self.support(j) == si)
            })
    }

    fn to_complex(&self) -> DMatrix<num_complex::Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, j| num_complex::Complex64::new(f64::from(self.get(i, j)), 0.0))
    }
}

/// Modular invariant together with the model it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingMatrix {
    pub model: ModelTag,
    pub z: IntMatrix,
}

/// True iff `S_L Z = Z S_R`, `T_L Z = Z T_R` and `Z_00 = 1`.
pub fn verify_coupling(z: &IntMatrix, left: &ModularData, right: &ModularData) -> Result<bool, ModinvError> {
    if z.n != left.rank() || z.n != right.rank() {
        return Err(ModinvError::Shape { z: z.n, left: left.rank(), right: right.rank() });
    }
    let zc = z.to_complex();
    let close = |a: DMatrix<num_complex::Complex64>, b: DMatrix<num_complex::Complex64>| {
        (a - b).iter().all(|x| x.norm() < MATRIX_TOLERANCE)
    };
    let s_ok = close(left.s_matrix() * &zc, &zc * right.s_matrix());
    let t_ok = close(left.t_matrix() * &zc, &zc * right.t_matrix());
    Ok(z.get(0, 0) == 1 && s_ok && t_ok)
}

/// Basis of `{Z real : SZ = ZS, TZ = ZT}` in reduced echelon form.
#[derive(Debug, Clone, Serialize)]
pub struct CommutantBasis {
    pub n: usize,
    /// Entries `(i, j)` allowed by T-commutation, in lexicographic order.
    pub vars: Vec<(usize, usize)>,
    /// Pivot variable of each basis vector.
    pub pivots: Vec<usize>,
    pub vectors: Vec<Vec<Rational64>>,
}

impl CommutantBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn matrix(&self, t: usize) -> Vec<Vec<Rational64>> {
        let mut out = vec![vec![Rational64::zero(); self.n]; self.n];
        for (v, &(i, j)) in self.vectors[t].iter().zip(&self.vars) {
            out[i][j] = *v;
        }
        out
    }
}

pub fn rationalize(x: f64) -> Option<Rational64> {
    let sign = if x < 0.0 { -1 } else { 1 };
    let mut y = x.abs();
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..40 {
        let a = y.floor();
        if a > 1e12 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > MAX_DENOMINATOR {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64) / (k1 as f64) - x.abs()).abs() < SNAP_TOLERANCE {
            return Some(Rational64::new(sign * h1, k1));
        }
        let frac = y - y.floor();
        if frac < 1e-15 {
            break;
        }
        y = 1.0 / frac;
    }
    None
}

pub fn commutant_basis(data: &ModularData) -> Result<CommutantBasis, ModinvError> {
    let n = data.rank();
    let vars: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| data.same_spin(i, j)).collect();
    let nv = vars.len();
    let mut by_row: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut by_col: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, &(i, j)) in vars.iter().enumerate() {
        by_row[i].push(v);
        by_col[j].push(v);
    }
    let mut gram = DMatrix::<f64>::zeros(nv, nv);
    let mut coeff: Vec<num_complex::Complex64> = vec![num_complex::Complex64::zero(); nv];
    let mut touched: Vec<usize> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            touched.clear();
            for &v in &by_col[b] {
                coeff[v] += data.s(a, vars[v].0);
                touched.push(v);
            }
            for &v in &by_row[a] {
                coeff[v] -= data.s(vars[v].1, b);
                touched.push(v);
            }
            touched.sort_unstable();
            touched.dedup();
            for &p in &touched {
                for &q in &touched {
                    let (x, y) = (coeff[p], coeff[q]);
                    gram[(p, q)] += x.re * y.re + x.im * y.im;
                }
            }
            for &v in &touched {
                coeff[v] = num_complex::Complex64::zero();
            }
        }
    }
    let eig = SymmetricEigen::new(gram);
    let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut null = Vec::new();
    for (idx, &ev) in eig.eigenvalues.iter().enumerate() {
        let ratio = ev.abs() / top;
        if ratio < NULL_EIGEN_RATIO {
            null.push(eig.eigenvectors.column(idx).iter().cloned().collect::<Vec<f64>>());
        } else if ratio < GAP_EIGEN_RATIO {
            return Err(ModinvError::RankDeficient { ratio });
        }
    }
    let mut rows = null;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..nv {
        if r == rows.len() {
            break;
        }
        let best = (r..rows.len()).max_by(|&x, &y| rows[x][col].abs().total_cmp(&rows[y][col].abs())).unwrap();
        if rows[best][col].abs() < 1e-8 {
            continue;
        }
        rows.swap(r, best);
        let p = rows[r][col];
        rows[r].iter_mut().for_each(|x| *x /= p);
        for other in 0..rows.len() {
            if other != r {
                let f = rows[other][col];
                if f != 0.0 {
                    let pivot_row = rows[r].clone();
                    rows[other].iter_mut().zip(&pivot_row).for_each(|(x, y)| *x -= f * y);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let vectors = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| if x.abs() < 1e-10 { Some(Rational64::zero()) } else { rationalize(x) }.ok_or(ModinvError::NonRational { value: x }))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let basis = CommutantBasis { n, vars, pivots, vectors };
    let s = data.s_matrix();
    for t in 0..basis.dim() {
        let zt = basis.matrix(t);
        let z = DMatrix::from_fn(n, n, |i, j| num_complex::Complex64::new(zt[i][j].to_f64().unwrap_or(f64::NAN), 0.0));
        let residual = (&s * &z - &z * &s).iter().map(|x| x.norm()).fold(0.0, f64::max);
        if residual > 1e-9 {
            return Err(ModinvError::Residual(residual));
        }
    }
    Ok(basis)
}

/// All nonnegative integer points of the commutant with `Z_00 = 1` and pivot entries at most `⌈d_i d_j⌉·slack`.
pub fn enumerate_physical_with(data: &ModularData, dims: &[f64], budget: u64, slack: u32) -> Result<Vec<CouplingMatrix>, ModinvError> {
    let basis = commutant_basis(data)?;
    let n = basis.n;
    let ranges: Vec<(i64, i64)> = basis
        .pivots
        .iter()
        .map(|&v| {
            let (i, j) = basis.vars[v];
            if (i, j) == (0, 0) {
                (1, 1)
            } else {
                let bound = (dims[i] * dims[j] - 1e-9).ceil() as i64;
                (0, bound * i64::from(slack) + i64::from(slack) - 1)
            }
        })
        .collect();
    let needed: u128 = ranges.iter().map(|&(lo, hi)| (hi - lo + 1) as u128).product();
    if needed > u128::from(budget) {
        return Err(ModinvError::Budget { needed, budget });
    }
    let vecs: Vec<Vec<f64>> =
        basis.vectors.iter().map(|v| v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect();
    let mut x: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    let mut found = Vec::new();
    let nv = basis.vars.len();
    let mut values = vec![0f64; nv];
    'outer: loop {
        values.iter_mut().for_each(|v| *v = 0.0);
        for (t, &xt) in x.iter().enumerate() {
            if xt != 0 {
                let c = xt as f64;
                values.iter_mut().zip(&vecs[t]).for_each(|(v, b)| *v += c * b);
            }
        }
        let ok = values.iter().all(|&v| v > -MATRIX_TOLERANCE && (v - v.round()).abs() < MATRIX_TOLERANCE);
        if ok {
            let mut z = IntMatrix::zeros(n);
            for (v, &(i, j)) in values.iter().zip(&basis.vars) {
                z.set(i, j, v.round() as u32);
            }
            if z.get(0, 0) == 1 {
                found.push(z);
            }
        }
        for t in 0..x.len() {
            if x[t] < ranges[t].1 {
                x[t] += 1;
                continue 'outer;
            }
            x[t] = ranges[t].0;
        }
        break;
    }
    found.sort();
    found.dedup();
    Ok(found.into_iter().map(|z| CouplingMatrix { model: data.model.clone(), z }).collect())
}

pub fn enumerate_physical(data: &ModularData, dims: &[f64]) -> Result<Vec<CouplingMatrix>, ModinvError> {
    enumerate_physical_with(data, dims, DEFAULT_NODE_BUDGET, 1)
}

/// SU(2)_k invariant attached to a Dynkin diagram with Coxeter number `k + 2`.
pub fn su2_invariant(k: u32, g: Dynkin) -> IntMatrix {
    assert_eq!(g.coxeter(), k + 2, "{g} does not have Coxeter number {}", k + 2);
    let n = (k + 1) as usize;
    let k = k as usize;
    let mut z = IntMatrix::zeros(n);
    let blocks = |z: &mut IntMatrix, blocks: &[&[usize]]| {
        for b in blocks {
            for &i in *b {
                for &j in *b {
                    z.set(i, j, z.get(i, j) + 1);
                }
            }
        }
    };
    match g {
        Dynkin::A(_) => z = IntMatrix::identity(n),
        Dynkin::D(_) if k % 4 == 0 => {
            for l in (0..=k).step_by(2) {
                z.set(l, l, z.get(l, l) + 1);
                z.set(l, k - l, z.get(l, k - l) + 1);
            }
        }
        Dynkin::D(_) => {
            for l in 0..=k {
                if l % 2 == 0 {
                    z.set(l, l, 1);
                } else {
                    z.set(l, k - l, 1);
                }
            }
        }
        Dynkin::E(6) => blocks(&mut z, &[&[0, 6], &[3, 7], &[4, 10]]),
        Dynkin::E(7) => {
            blocks(&mut z, &[&[0, 16], &[4, 12], &[6, 10], &[8]]);
            for i in [2, 14] {
                z.set(i, 8, 1);
                z.set(8, i, 1);
            }
        }
        Dynkin::E(8) => blocks(&mut z, &[&[0, 10, 18, 28], &[6, 12, 16, 22]]),
        Dynkin::E(_) => unreachable!(),
    }
    z
}

/// Minimal-model invariant assembled from SU(2)_{m−2} and SU(2)_{m−1} invariants.
pub fn minimal_invariant(m: u32, x: &IntMatrix, y: &IntMatrix) -> IntMatrix {
    let kac = kac_labels(m);
    let n = kac.len();
    let m = m as usize;
    let mut z = IntMatrix::zeros(n);
    for (i, a) in kac.iter().enumerate() {
        for (j, b) in kac.iter().enumerate() {
            let (p, q, pp, qq) = (a.p as usize, a.q as usize, b.p as usize, b.q as usize);
            let v = x.get(p - 1, pp - 1) * y.get(q - 1, qq - 1) + x.get(p - 1, m - pp - 1) * y.get(q - 1, m - qq);
            z.set(i, j, v);
        }
    }
    z
}

/// Reference invariants for `m`: every pair of diagrams with Coxeter numbers `(m, m+1)`, at least one of type A.
pub fn reference_invariants(m: u32) -> Vec<(InvariantLabel, IntMatrix)> {
    let mut out = Vec::new();
    for left in Dynkin::with_coxeter(m) {
        for right in Dynkin::with_coxeter(m + 1) {
            if !left.is_a() && !right.is_a() {
                continue;
            }
            let z = minimal_invariant(m, &su2_invariant(m - 2, left), &su2_invariant(m - 1, right));
            let kind = if z.is_block_diagonal() { InvariantType::I } else { InvariantType::II };
            out.push((InvariantLabel { m, left, right, kind }, z));
        }
    }
    out
}

fn minimal_m(z: &CouplingMatrix) -> Result<u32, ModinvError> {
    match z.model {
        ModelTag::Minimal { m } => Ok(m),
        _ => Err(ModinvError::NotMinimal),
    }
}

pub fn classify_ade(z: &CouplingMatrix) -> Result<InvariantLabel, ModinvError> {
    let m = minimal_m(z)?;
    let kind = if z.z.is_block_diagonal() { InvariantType::I } else { InvariantType::II };
    reference_invariants(m)
        .into_iter()
        .find(|(_, r)| *r == z.z)
        .map(|(l, _)| InvariantLabel { kind, ..l })
        .ok_or(ModinvError::Unlisted(m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

/// Automorphism of one chiral factor's extended system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorAutomorphism {
    pub side: Side,
    pub system: String,
    pub labels: Vec<String>,
    pub pi: Vec<usize>,
}

impl FactorAutomorphism {
    pub fn is_trivial(&self) -> bool {
        self.pi.iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// Extension data `λ = ⊕ α_i ⊗ ᾱ_{π(i)}` read from a coupling matrix.
#[derive(Debug, Clone, Serialize)]
pub struct ExtensionSpec {
    pub invariant: InvariantLabel,
    /// Type I maximal chiral extension whose DHR system carries `π`.
    pub extension: InvariantLabel,
    pub subsystem: Vec<usize>,
    pub system_size: usize,
    pub pi: Vec<usize>,
    pub factor: FactorAutomorphism,
    pub maximal: bool,
}

impl ExtensionSpec {
    pub fn pi_is_trivial(&self) -> bool {
        self.pi.iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// Vacuum block of a factor invariant decides the chiral extension of that factor.
fn extension_factor(k: u32, x: &IntMatrix) -> Result<(Factor, Dynkin), ModinvError> {
    let vacuum: Vec<usize> = x.support(0);
    let kk = k as usize;
    Ok(match vacuum.as_slice() {
        [0] => (Factor::su2(k), Dynkin::A(k + 1)),
        [0, b] if *b == kk && k % 4 == 0 => {
            let n = k / 4 + 1;
            (Factor::d_even(n)?, Dynkin::D(2 * n))
        }
        [0, 6] if k == 10 => (Factor::e6(), Dynkin::E(6)),
        [0, 10, 18, 28] if k == 28 => (Factor::e8(), Dynkin::E(8)),
        _ => return Err(ModinvError::NoAutomorphism),
    })
}

/// Finds `π ∈ Aut(factor)` with `x = Σ_α b_α b_{π(α)}ᵀ`.
fn factor_automorphism(factor: &Factor, x: &IntMatrix) -> Result<Vec<usize>, ModinvError> {
    let n = x.n;
    let identity: Vec<usize> = (0..factor.ring.rank()).collect();
    for pi in std::iter::once(identity).chain(factor.ring.fusion_automorphisms()) {
        let mut z = IntMatrix::zeros(n);
        for (a, &pa) in pi.iter().enumerate() {
            for &i in &factor.blocks[a] {
                for &j in &factor.blocks[pa] {
                    z.set(i as usize, j as usize, z.get(i as usize, j as usize) + 1);
                }
            }
        }
        if z == *x {
            return Ok(pi);
        }
    }
    Err(ModinvError::NoAutomorphism)
}

pub fn decode_extension(z: &CouplingMatrix) -> Result<ExtensionSpec, ModinvError> {
    let invariant = classify_ade(z)?;
    let m = invariant.m;
    let (side, g, k) = if invariant.left.is_a() { (Side::Right, invariant.right, m - 1) } else { (Side::Left, invariant.left, m - 2) };
    let x = su2_invariant(k, g);
    let (factor, ext_diagram) = extension_factor(k, &x)?;
    let factor_pi = factor_automorphism(&factor, &x)?;
    let extension = InvariantLabel {
        m,
        left: if side == Side::Left { ext_diagram } else { invariant.left },
        right: if side == Side::Right { ext_diagram } else { invariant.right },
        kind: InvariantType::I,
    };
    let system = catalog::build_catalog_system(m, &extension)?;
    let pi: Vec<usize> = system
        .pairs
        .iter()
        .map(|&(a, b)| {
            let target = match side {
                Side::Left => (factor_pi[a], b),
                Side::Right => (a, factor_pi[b]),
            };
            system.index_of_pair(target.0, target.1).expect("automorphism preserves the catalog labels")
        })
        .collect();
    Ok(ExtensionSpec {
        invariant,
        extension,
        subsystem: (0..system.ring.rank()).collect(),
        system_size: system.ring.rank(),
        pi,
        factor: FactorAutomorphism { side, system: factor.name.clone(), labels: factor.ring.labels().to_vec(), pi: factor_pi },
        maximal: true,
    })
}

/// Invariants of a minimal model, each with its label.
pub fn classified_invariants(m: u32) -> Result<Vec<(CouplingMatrix, InvariantLabel)>, ModinvError> {
    let (data, ring) = crate::modular::minimal_model_data(m)?;
    classified_invariants_of(&data, &ring)
}

pub fn classified_invariants_of(data: &ModularData, ring: &FusionRing) -> Result<Vec<(CouplingMatrix, InvariantLabel)>, ModinvError> {
    classified_invariants_with(data, ring, DEFAULT_NODE_BUDGET)
}

pub fn classified_invariants_with(data: &ModularData, ring: &FusionRing, budget: u64) -> Result<Vec<(CouplingMatrix, InvariantLabel)>, ModinvError> {
    let mut out = enumerate_physical_with(data, ring.dims(), budget, 1)?
        .into_iter()
        .map(|z| {
            let l = classify_ade(&z)?;
            Ok((z, l))
        })
        .collect::<Result<Vec<_>, ModinvError>>()?;
    out.sort_by_key(|(_, l)| *l);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationalize_small_fractions() {
        assert_eq!(rationalize(0.5), Some(Rational64::new(1, 2)));
        assert_eq!(rationalize(-2.0 / 3.0), Some(Rational64::new(-2, 3)));
        assert_eq!(rationalize(1.0 / 1009.0), None);
    }

    #[test]
    fn su2_references_have_unit_vacuum() {
        for (k, g) in [(10, Dynkin::E(6)), (16, Dynkin::E(7)), (28, Dynkin::E(8)), (8, Dynkin::D(6)), (6, Dynkin::D(5))] {
            let z = su2_invariant(k, g);
            assert_eq!(z.get(0, 0), 1);
        }
    }

    #[test]
    fn coxeter_numbers() {
        assert_eq!(Dynkin::D(10).coxeter(), 18);
        assert_eq!(Dynkin::with_coxeter(12), vec![Dynkin::A(11), Dynkin::D(7), Dynkin::E(6)]);
        assert_eq!(Dynkin::with_coxeter(4), vec![Dynkin::A(3)]);
    }

    #[test]
    fn table_one_at_eleven() {
        let names: Vec<String> = table_one_labels(11).iter().map(|l| l.to_string()).collect();
        assert_eq!(names, vec!["(A_10, A_11)", "(A_10, D_7)", "(A_10, E_6)"]);
    }
}
