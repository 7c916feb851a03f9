//! Connection cells over σ-squares, their unitarity and renormalization checks,
//! Condition 3, and the D_{2n}^even dimension identities.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{self, CatalogSystem, Factor, FactorKind};
use crate::fusion::{FusionError, FusionRing, Witness};
use crate::sixj::{q_number, sixj, SixjError};

pub const CELL_ZERO_TOLERANCE: f64 = 1e-10;
pub const CELL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ConnectionError {
    #[error("cell ({0}, {1}, {2}, {3}) is admissible but missing")]
    MissingCell(usize, usize, usize, usize),
    #[error("generator {0} is out of range")]
    BadGenerator(usize),
    #[error("cell set failed verification: unitarity {unitarity:e}, renormalization {renormalization:e}")]
    Verification { unitarity: f64, renormalization: f64 },
    #[error("incompatible contexts: {0}")]
    Incompatible(String),
    #[error("{0} cells are not computed; condition 3 there is a recorded fact")]
    CatalogFact(String),
    #[error("n must be at least 3, got {0}")]
    SmallN(u32),
    #[error(transparent)]
    Sixj(#[from] SixjError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
}

/// Connection values `W(i,j,k,l)` on squares `i → j → l`, `i → k → l` built from σ-edges.
#[derive(Debug, Clone)]
pub struct ConnectionCellSet {
    pub name: String,
    pub ring: FusionRing,
    pub sigma: usize,
    pub dims: Vec<f64>,
    pub cells: BTreeMap<[usize; 4], Complex64>,
}

fn edge(ring: &FusionRing, a: usize, sigma: usize, b: usize) -> bool {
    ring.n(a, sigma, b) > 0
}

/// All σ-squares `(i, j, k, l)` of a ring.
pub fn squares(ring: &FusionRing, sigma: usize) -> Vec<[usize; 4]> {
    let r = ring.rank();
    let mut out = Vec::new();
    for i in 0..r {
        let outs: Vec<usize> = ring.product(i, sigma).map(|(c, _)| c).collect();
        for l in 0..r {
            let mids: Vec<usize> = outs.iter().copied().filter(|&j| edge(ring, j, sigma, l)).collect();
            for &j in &mids {
                for &k in &mids {
                    out.push([i, j, k, l]);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellResiduals {
    pub unitarity: f64,
    pub renormalization: f64,
    pub min_abs: f64,
    pub cells: usize,
}

impl ConnectionCellSet {
    pub fn get(&self, c: [usize; 4]) -> Option<Complex64> {
        self.cells.get(&c).copied()
    }

    /// `W_{il}` as a square matrix over the shared middle labels.
    pub fn block(&self, i: usize, l: usize) -> (Vec<usize>, Vec<Vec<Complex64>>) {
        let mids: Vec<usize> =
            self.ring.product(i, self.sigma).map(|(c, _)| c).filter(|&j| edge(&self.ring, j, self.sigma, l)).collect();
        let m = mids
            .iter()
            .map(|&j| mids.iter().map(|&k| self.get([i, j, k, l]).unwrap_or_default()).collect())
            .collect();
        (mids, m)
    }

    pub fn coverage(&self) -> Result<(), ConnectionError> {
        match squares(&self.ring, self.sigma).into_iter().find(|c| !self.cells.contains_key(c)) {
            Some([i, j, k, l]) => Err(ConnectionError::MissingCell(i, j, k, l)),
            None => Ok(()),
        }
    }

    /// `max ‖W_{il} W_{il}† − I‖` over blocks.
    pub fn unitarity_residual(&self) -> f64 {
        let r = self.ring.rank();
        let mut worst: f64 = 0.0;
        for i in 0..r {
            for l in 0..r {
                let (mids, w) = self.block(i, l);
                for x in 0..mids.len() {
                    for y in 0..mids.len() {
                        let s: Complex64 = (0..mids.len()).map(|z| w[x][z] * w[y][z].conj()).sum();
                        let target = if x == y { 1.0 } else { 0.0 };
                        worst = worst.max((s - target).norm());
                    }
                }
            }
        }
        worst
    }

    /// `max | |W(i,j,k,l)| − √(d_j d_k/(d_i d_l)) |W(j,i,l,k)| |`; needs a self-conjugate σ.
    pub fn renormalization_residual(&self) -> Option<f64> {
        if self.ring.dual(self.sigma) != self.sigma {
            return None;
        }
        let d = &self.dims;
        Some(
            self.cells
                .iter()
                .map(|(&[i, j, k, l], w)| {
                    let flipped = self.get([j, i, l, k]).map_or(f64::INFINITY, |x| x.norm());
                    (w.norm() - (d[j] * d[k] / (d[i] * d[l])).sqrt() * flipped).abs()
                })
                .fold(0.0, f64::max),
        )
    }

    pub fn residuals(&self) -> CellResiduals {
        CellResiduals {
            unitarity: self.unitarity_residual(),
            renormalization: self.renormalization_residual().unwrap_or(0.0),
            min_abs: self.cells.values().map(|w| w.norm()).fold(f64::INFINITY, f64::min),
            cells: self.cells.len(),
        }
    }

    pub fn verify(&self) -> Result<CellResiduals, ConnectionError> {
        self.coverage()?;
        let r = self.residuals();
        if r.unitarity > CELL_TOLERANCE || r.renormalization > CELL_TOLERANCE {
            return Err(ConnectionError::Verification { unitarity: r.unitarity, renormalization: r.renormalization });
        }
        Ok(r)
    }

    /// Same cells on an isomorphic ring; `iso[a]` is the image of label `a`.
    pub fn transport(&self, target: &FusionRing, iso: &[usize], name: &str) -> ConnectionCellSet {
        ConnectionCellSet {
            name: name.to_string(),
            ring: target.clone(),
            sigma: iso[self.sigma],
            dims: target.dims().to_vec(),
            cells: self.cells.iter().map(|(&[i, j, k, l], &w)| ([iso[i], iso[j], iso[k], iso[l]], w)).collect(),
        }
    }
}

/// Cells `√(d_j d_k) {s i k; s l j}` on twice-spin labels; `spins[a]` gives each ring label's twice spin.
fn sixj_cells(name: String, ring: FusionRing, sigma: usize, spins: &[u32], k: u32) -> Result<ConnectionCellSet, ConnectionError> {
    let s = spins[sigma];
    let qd = |a: usize| q_number(i64::from(spins[a]) + 1, k);
    let cells = squares(&ring, sigma)
        .into_iter()
        .map(|[i, j, kk, l]| {
            let v = sixj(k, [s, spins[i], spins[kk], s, spins[l], spins[j]])?;
            Ok(([i, j, kk, l], Complex64::new((qd(j) * qd(kk)).sqrt() * v, 0.0)))
        })
        .collect::<Result<BTreeMap<_, _>, ConnectionError>>()?;
    let dims = ring.quantum_dimensions()?.to_vec();
    let set = ConnectionCellSet { name, ring, sigma, dims, cells };
    set.verify()?;
    Ok(set)
}

/// `A_{k+1}` connection for the standard generator `1`.
pub fn an_connection(k: u32) -> Result<ConnectionCellSet, ConnectionError> {
    let spins: Vec<u32> = (0..=k).collect();
    sixj_cells(format!("A_{}", k + 1), catalog::su2_ring(k), 1, &spins, k)
}

/// `A_{k+1}^even` connection for the generator `2`.
pub fn su2_even_connection(k: u32) -> Result<ConnectionCellSet, ConnectionError> {
    if k < 2 {
        return Err(ConnectionError::BadGenerator(1));
    }
    let spins: Vec<u32> = (0..=k).step_by(2).collect();
    sixj_cells(format!("A_{}^even", k + 1), catalog::su2_even_ring(k), 1, &spins, k)
}

/// Pointed system: each square is a single path, cell value 1.
pub fn pointed_connection(ring: &FusionRing, sigma: usize, name: &str) -> Result<ConnectionCellSet, ConnectionError> {
    if !ring.is_pointed() {
        return Err(ConnectionError::Incompatible(format!("{name} is not pointed")));
    }
    if sigma >= ring.rank() {
        return Err(ConnectionError::BadGenerator(sigma));
    }
    let cells = squares(ring, sigma).into_iter().map(|c| (c, Complex64::new(1.0, 0.0))).collect();
    let set = ConnectionCellSet { name: name.into(), ring: ring.clone(), sigma, dims: vec![1.0; ring.rank()], cells };
    set.verify()?;
    Ok(set)
}

/// Product cells on a (restricted) product ring; `pairs[a]` are the factor labels of `a`.
pub fn product_connection(
    c1: &ConnectionCellSet,
    c2: &ConnectionCellSet,
    ring: &FusionRing,
    pairs: &[(usize, usize)],
) -> Result<ConnectionCellSet, ConnectionError> {
    if pairs.len() != ring.rank() {
        return Err(ConnectionError::Incompatible("pair list does not match ring".into()));
    }
    let sigma = pairs
        .iter()
        .position(|&p| p == (c1.sigma, c2.sigma))
        .ok_or_else(|| ConnectionError::Incompatible("product generator is not a label of the ring".into()))?;
    let mut cells = BTreeMap::new();
    for [i, j, k, l] in squares(ring, sigma) {
        let w1 = c1.get([pairs[i].0, pairs[j].0, pairs[k].0, pairs[l].0]);
        let w2 = c2.get([pairs[i].1, pairs[j].1, pairs[k].1, pairs[l].1]);
        match (w1, w2) {
            (Some(a), Some(b)) => {
                cells.insert([i, j, k, l], a * b);
            }
            _ => return Err(ConnectionError::MissingCell(i, j, k, l)),
        }
    }
    let set = ConnectionCellSet {
        name: format!("{} x {}", c1.name, c2.name),
        ring: ring.clone(),
        sigma,
        dims: ring.quantum_dimensions()?.to_vec(),
        cells,
    };
    set.verify()?;
    Ok(set)
}

fn factor_generator(f: &Factor) -> usize {
    match f.kind {
        FactorKind::Full | FactorKind::E6 | FactorKind::Even | FactorKind::E8 => 1,
        FactorKind::DEven => f.ring.index_of("2").unwrap_or(1),
    }
}

/// Cells of one chiral factor for its standard generator.
pub fn factor_connection(f: &Factor) -> Result<ConnectionCellSet, ConnectionError> {
    match f.kind {
        FactorKind::Full => an_connection(f.level),
        FactorKind::Even => su2_even_connection(f.level),
        FactorKind::E6 => {
            let a3 = an_connection(2)?;
            Ok(a3.transport(&f.ring, &[0, 1, 2], &f.name))
        }
        FactorKind::E8 => {
            let fib = su2_even_connection(3)?;
            Ok(fib.transport(&f.ring, &[0, 1], &f.name))
        }
        FactorKind::DEven if f.ring.rank() == 3 => {
            pointed_connection(&f.ring, f.ring.index_of("2").ok_or(ConnectionError::BadGenerator(1))?, &f.name)
        }
        FactorKind::DEven if f.level == 8 => {
            let fib = su2_even_connection(3)?;
            let (ring, pairs) = FusionRing::product_ring(&fib.ring, &fib.ring);
            let prod = product_connection(&fib, &fib, &ring, &pairs)?;
            let sigma = factor_generator(f);
            let isos = crate::fusion::isomorphisms(&ring, &f.ring, None);
            let iso = isos
                .into_iter()
                .find(|iso| iso[prod.sigma] == sigma)
                .ok_or_else(|| ConnectionError::Incompatible("Fib x Fib does not match D_6^even".into()))?;
            let set = prod.transport(&f.ring, &iso, &f.name);
            set.verify()?;
            Ok(set)
        }
        FactorKind::DEven => Err(ConnectionError::CatalogFact(f.name.clone())),
    }
}

/// Connection of a catalog system for the product generator of its factors.
pub fn catalog_connection(sys: &CatalogSystem) -> Result<ConnectionCellSet, ConnectionError> {
    let c1 = factor_connection(&sys.left)?;
    let c2 = factor_connection(&sys.right)?;
    let mut set = product_connection(&c1, &c2, &sys.ring, &sys.pairs)?;
    set.name = sys.name.clone();
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition3Report {
    pub holds: bool,
    pub cells: usize,
    pub min_abs: f64,
    pub zero_cells: Vec<Witness>,
}

/// Condition 3: no σ-cell vanishes.
pub fn condition3_check(ring: &FusionRing, sigma: usize, cells: &ConnectionCellSet) -> Result<Condition3Report, ConnectionError> {
    if cells.sigma != sigma || cells.ring.rank() != ring.rank() {
        return Err(ConnectionError::Incompatible("cell set belongs to a different system".into()));
    }
    let mut zero_cells = Vec::new();
    let mut min_abs = f64::INFINITY;
    for c in squares(ring, sigma) {
        let w = cells.get(c).ok_or(ConnectionError::MissingCell(c[0], c[1], c[2], c[3]))?;
        min_abs = min_abs.min(w.norm());
        if w.norm() < CELL_ZERO_TOLERANCE {
            zero_cells.push(Witness::ZeroCell { i: c[0], j: c[1], k: c[2], l: c[3] });
        }
    }
    Ok(Condition3Report { holds: zero_cells.is_empty(), cells: cells.cells.len(), min_abs, zero_cells })
}

/// Quantum dimensions `d_1..d_4` of `λ_1 = α_{2n−6}, λ_2 = α_{2n−4}, λ_3, λ_4 = f±` in `D_{2n}^even`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DEvenDims {
    pub n: u32,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
}

impl DEvenDims {
    /// `d_1 d_3 + 2 d_3² − d_2²`.
    pub fn norm_identity(&self) -> f64 {
        self.d1 * self.d3 + 2.0 * self.d3 * self.d3 - self.d2 * self.d2
    }
}

pub fn d2n_even_dims(n: u32) -> Result<DEvenDims, ConnectionError> {
    if n < 3 {
        return Err(ConnectionError::SmallN(n));
    }
    let h = f64::from(4 * n - 2);
    let s = (PI / h).sin();
    let d1 = (f64::from(2 * n - 5) * PI / h).sin() / s;
    let d2 = (f64::from(2 * n - 3) * PI / h).sin() / s;
    let d3 = 1.0 / (2.0 * s);
    Ok(DEvenDims { n, d1, d2, d3, d4: d3 })
}

/// Dimensions of the same four labels read off the gate-checked `D_{2n}^even` ring.
pub fn d2n_ring_dims(n: u32) -> Result<DEvenDims, ConnectionError> {
    if n < 3 {
        return Err(ConnectionError::SmallN(n));
    }
    let ring = catalog::d_even_ring(n).map_err(|e| ConnectionError::Incompatible(e.to_string()))?;
    let dims = ring.quantum_dimensions()?;
    let f = 2 * n - 2;
    let get = |name: String| ring.index_of(&name).map(|i| dims[i]).ok_or(ConnectionError::Incompatible(name));
    let d1 = if n == 3 { 1.0 } else { get(format!("{}", 2 * n - 6))? };
    Ok(DEvenDims { n, d1, d2: get(format!("{}", 2 * n - 4))?, d3: get(format!("{f}+"))?, d4: get(format!("{f}-"))? })
}

/// True when `sin²((2n−5)π/(4n−2)) > 1/2`, which rules out a vanishing `W(2,3,3,2)`.
pub fn d2n_trig_exclusion(n: u32) -> bool {
    let x = (f64::from(2 * n - 5) * PI / f64::from(4 * n - 2)).sin();
    x * x > 0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct D8Report {
    pub t: f64,
    pub d1_error: f64,
    pub d2_error: f64,
    pub d3_error: f64,
    /// `d_2² − 2 d_1 d_3 − d_1² + d_2`.
    pub combination: f64,
}

impl D8Report {
    pub fn passes(&self, tol: f64) -> bool {
        [self.d1_error, self.d2_error, self.d3_error, self.combination].iter().all(|x| x.abs() < tol)
    }
}

pub fn d8_identity_check() -> D8Report {
    let t = 4.0 * (PI / 14.0).cos().powi(2);
    let d = d2n_even_dims(4).expect("n = 4");
    let (d1, d2, d3) = (t - 1.0, t * t - 3.0 * t + 1.0, (t.powi(3) - 5.0 * t * t + 6.0 * t - 1.0) / 2.0);
    D8Report {
        t,
        d1_error: d.d1 - d1,
        d2_error: d.d2 - d2,
        d3_error: d.d3 - d3,
        combination: d.d2 * d.d2 - 2.0 * d.d1 * d.d3 - d.d1 * d.d1 + d.d2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_cells_are_unitary() {
        for k in 1..=6 {
            let c = an_connection(k).unwrap();
            let r = c.residuals();
            assert!(r.unitarity < 1e-12 && r.renormalization < 1e-12, "k={k} {r:?}");
        }
    }

    #[test]
    fn k1_cells_are_phases() {
        let c = an_connection(1).unwrap();
        assert!(c.cells.values().all(|w| (w.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn golden_ratio_at_n3() {
        let d = d2n_even_dims(3).unwrap();
        assert!((d.d3 - 1.618_033_988_7).abs() < 1e-9);
        assert!(d.norm_identity().abs() < 1e-9);
    }

    #[test]
    fn trig_exclusion_threshold() {
        assert!(!d2n_trig_exclusion(3) && !d2n_trig_exclusion(4) && d2n_trig_exclusion(5));
    }

    #[test]
    fn d8_chain() {
        assert!(d8_identity_check().passes(1e-9));
    }
}
