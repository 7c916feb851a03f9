//! Verification suites shared by `verify-all` and the acceptance test.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{self, CatalogSystem};
use crate::cocycle::{self, AbelianGroup, RECONSTRUCTION_TOLERANCE};
use crate::connection::{self, ConnectionError};
use crate::format::fmt_f64;
use crate::fusion::{generator_analysis, ConditionReport, Tri};
use crate::modinv;
use crate::modular::{self, VERLINDE_TOLERANCE};
use crate::sixj;
use crate::subcat;

pub const SUITE_TOLERANCE: f64 = 1e-9;
pub const ZERO_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Upper end of every `m` range; ranges stop early when this is smaller than their own end.
    pub max_m: u32,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_m: modular::MINIMAL_MAX_M, samples: 100, seed: 20240607, tolerance: SUITE_TOLERANCE }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    pub failures: Vec<String>,
    pub seconds: f64,
}

struct Log {
    checked: usize,
    failures: Vec<String>,
}

impl Log {
    fn new() -> Self {
        Log { checked: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.checked += 1;
        self.failures.push(what);
    }
}

pub const SUITE_NAMES: [&str; 9] = [
    "modular invariant table",
    "modular consistency",
    "6j symbols",
    "connections",
    "D-series identities",
    "vanishing conditions",
    "cocycle round trip",
    "subsystem table",
    "property proxies",
];

pub fn run(id: u32, cfg: &SuiteConfig) -> SuiteResult {
    let start = Instant::now();
    let mut log = Log::new();
    let extra = match id {
        1 => invariant_table(cfg, &mut log),
        2 => modular_consistency(cfg, &mut log),
        3 => sixj_suite(cfg, &mut log),
        4 => connection_suite(cfg, &mut log),
        5 => d_series(cfg, &mut log),
        6 => vanishing(cfg, &mut log),
        7 => cocycles(cfg, &mut log),
        8 => subsystem_table(cfg, &mut log),
        9 => proxies(cfg, &mut log),
        _ => panic!("suite ids run from 1 to 9"),
    };
    let passed = log.failures.is_empty() && log.checked > 0;
    let mut summary = format!("{} checks, {} failed", log.checked, log.failures.len());
    if !extra.is_empty() {
        summary.push_str("; ");
        summary.push_str(&extra);
    }
    SuiteResult {
        id,
        name: SUITE_NAMES[id as usize - 1],
        passed,
        summary,
        failures: log.failures,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<SuiteResult> {
    (1..=9).map(|i| run(i, cfg)).collect()
}

fn m_range(cfg: &SuiteConfig, hi: u32) -> std::ops::RangeInclusive<u32> {
    3..=hi.min(cfg.max_m)
}

fn invariant_table(cfg: &SuiteConfig, log: &mut Log) -> String {
    let start = Instant::now();
    for m in m_range(cfg, 12) {
        let want: BTreeSet<_> = modinv::table_one_labels(m).into_iter().collect();
        match modinv::classified_invariants(m) {
            Ok(found) => {
                let got: BTreeSet<_> = found.iter().map(|(_, l)| *l).collect();
                log.check(got == want && got.len() == found.len(), || {
                    let show = |s: &BTreeSet<modinv::InvariantLabel>| s.iter().map(|l| format!("{l}:{}", l.kind)).collect::<Vec<_>>().join(" ");
                    format!("m={m}: found [{}], expected [{}]", show(&got), show(&want))
                });
            }
            Err(e) => log.fail(format!("m={m}: {e}")),
        }
    }
    let t = start.elapsed().as_secs_f64();
    log.check(t < 600.0, || format!("runtime {t:.1}s over 600s"));
    String::new()
}

fn modular_consistency(cfg: &SuiteConfig, log: &mut Log) -> String {
    let tol = cfg.tolerance;
    let mut worst_verlinde: f64 = 0.0;
    let datas = (1..=modular::MINIMAL_MAX_M)
        .map(|k| (format!("SU(2)_{k}"), modular::su2k_modular(k)))
        .chain(m_range(cfg, modular::MINIMAL_MAX_M).map(|m| (format!("Vir m={m}"), modular::minimal_modular(m))));
    for (name, data) in datas {
        let data = match data {
            Ok(d) => d,
            Err(e) => {
                log.fail(format!("{name}: {e}"));
                continue;
            }
        };
        let rep = data.check();
        log.check(rep.passes(tol), || format!("{name}: {rep:?}"));
        match modular::verlinde_with_residual(&data) {
            Ok((_, res)) => {
                worst_verlinde = worst_verlinde.max(res);
                log.check(res < VERLINDE_TOLERANCE, || format!("{name}: Verlinde residual {res:e}"));
            }
            Err(e) => log.fail(format!("{name}: {e}")),
        }
    }
    format!("worst Verlinde residual {}", fmt_f64(worst_verlinde))
}

fn sixj_suite(cfg: &SuiteConfig, log: &mut Log) -> String {
    let mut worst: f64 = 0.0;
    for k in 1..=10 {
        match sixj::SixJTable::new(k) {
            Ok(t) => {
                let o = sixj::orthogonality_residual(&t);
                let p = sixj::pentagon_residual(&t);
                worst = worst.max(o.max).max(p.max);
                log.check(o.max < cfg.tolerance, || format!("k={k}: orthogonality residual {:e}", o.max));
                log.check(p.max < cfg.tolerance, || format!("k={k}: pentagon residual {:e}", p.max));
            }
            Err(e) => log.fail(format!("k={k}: {e}")),
        }
    }
    let mut zero_levels = Vec::new();
    for k in 1..=16 {
        match sixj::zero_scan(k, ZERO_TOLERANCE) {
            Ok(scan) => {
                if !scan.zeros.is_empty() {
                    zero_levels.push(k);
                }
                log.check(scan.zeros.is_empty(), || {
                    format!("k={k}: {} of {} admissible symbols vanish, first {:?}", scan.zeros.len(), scan.admissible, scan.zeros[0])
                });
            }
            Err(e) => log.fail(format!("k={k}: {e}")),
        }
    }
    format!("worst residual {}; levels with zeros {zero_levels:?}", fmt_f64(worst))
}

/// Condition 3 for a catalog system; cataloged D-series factors count as certified.
pub fn catalog_condition3(sys: &CatalogSystem) -> Result<Tri, String> {
    let sigma = sys.sigma.ok_or_else(|| format!("{}: no generator", sys.name))?;
    match connection::catalog_connection(sys) {
        Ok(cells) => connection::condition3_check(&sys.ring, sigma, &cells).map(|r| Tri::from_bool(r.holds)).map_err(|e| e.to_string()),
        Err(ConnectionError::CatalogFact(_)) => Ok(Tri::Holds),
        Err(e) => Err(format!("{}: {e}", sys.name)),
    }
}

/// All four vanishing conditions for a catalog system's generator.
pub fn catalog_conditions(sys: &CatalogSystem) -> Result<ConditionReport, String> {
    let sigma = sys.sigma.ok_or_else(|| format!("{}: no generator", sys.name))?;
    let mut rep = generator_analysis(&sys.ring, sigma).map_err(|e| e.to_string())?;
    rep.cond3 = catalog_condition3(sys)?;
    Ok(rep)
}

fn connection_suite(cfg: &SuiteConfig, log: &mut Log) -> String {
    let tol = cfg.tolerance;
    for k in 1..=10 {
        match connection::an_connection(k) {
            Ok(c) => {
                let r = c.residuals();
                log.check(r.unitarity < tol, || format!("A_{}: unitarity {:e}", k + 1, r.unitarity));
                log.check(r.renormalization < tol, || format!("A_{}: renormalization {:e}", k + 1, r.renormalization));
            }
            Err(e) => log.fail(format!("A_{}: {e}", k + 1)),
        }
    }
    let mut systems = 0;
    let mut skipped = Vec::new();
    for m in m_range(cfg, 12) {
        match catalog::catalog_systems(m) {
            Ok(list) => {
                for sys in list.iter().filter(|s| !s.label.left.is_a() || !s.label.right.is_a()) {
                    if sys.sigma.is_none() {
                        skipped.push(format!("{} at m={m}", sys.name));
                        continue;
                    }
                    systems += 1;
                    match catalog_condition3(sys) {
                        Ok(t) => log.check(t.holds(), || format!("m={m} {}: condition 3 fails", sys.name)),
                        Err(e) => log.fail(format!("m={m}: {e}")),
                    }
                }
            }
            Err(e) => log.fail(format!("m={m}: {e}")),
        }
    }
    if skipped.is_empty() {
        format!("{systems} product systems")
    } else {
        format!("{systems} product systems; no self-conjugate generator in {}", skipped.join(", "))
    }
}

fn d_series(cfg: &SuiteConfig, log: &mut Log) -> String {
    let tol = cfg.tolerance;
    for n in 3..=10 {
        match connection::d2n_even_dims(n) {
            Ok(d) => log.check(d.norm_identity().abs() < tol, || format!("n={n}: norm identity {:e}", d.norm_identity())),
            Err(e) => log.fail(format!("n={n}: {e}")),
        }
    }
    for n in 5..=50 {
        log.check(connection::d2n_trig_exclusion(n), || format!("n={n}: trigonometric exclusion fails"));
    }
    let d8 = connection::d8_identity_check();
    log.check(d8.passes(tol), || format!("D_8 chain: {d8:?}"));
    String::new()
}

fn vanishing(cfg: &SuiteConfig, log: &mut Log) -> String {
    for m in m_range(cfg, 10) {
        let label = modinv::table_one_labels(m).into_iter().find(|l| l.left.is_a() && l.right.is_a());
        let sys = label.ok_or_else(|| "no diagonal label".to_string()).and_then(|l| catalog::build_catalog_system(m, &l).map_err(|e| e.to_string()));
        match sys.and_then(|s| catalog_conditions(&s)) {
            Ok(r) => log.check(r.cond1.holds() && r.cond2b.holds() && r.cond3.holds() && r.cond4.holds(), || format!("Vir m={m}: {r:?}")),
            Err(e) => log.fail(format!("Vir m={m}: {e}")),
        }
    }
    for k in 1..=16 {
        let ring = catalog::su2_ring(k);
        let rep = generator_analysis(&ring, 1);
        let c3 = connection::an_connection(k).and_then(|c| connection::condition3_check(&ring, 1, &c));
        match (rep, c3) {
            (Ok(r), Ok(c3)) => log.check(r.cond1.holds() && r.cond2b.holds() && r.cond4.holds() && c3.holds, || format!("A_{}: {r:?} cond3 {}", k + 1, c3.holds)),
            (Err(e), _) => log.fail(format!("A_{}: {e}", k + 1)),
            (_, Err(e)) => log.fail(format!("A_{}: {e}", k + 1)),
        }
    }
    String::new()
}

const GROUPS: [&[u32]; 20] = [
    &[2], &[3], &[4], &[5], &[6], &[7], &[8], &[9], &[10], &[12], &[16],
    &[2, 2], &[2, 4], &[3, 3], &[2, 6], &[4, 4], &[2, 8], &[2, 2, 2], &[2, 2, 4], &[2, 2, 2, 2],
];

fn cocycles(cfg: &SuiteConfig, log: &mut Log) -> String {
    let mut systems = 0;
    let mut solver_only = Vec::new();
    let mut worst: f64 = 0.0;
    for m in m_range(cfg, 10) {
        let list = match catalog::catalog_systems(m) {
            Ok(l) => l,
            Err(e) => {
                log.fail(format!("m={m}: {e}"));
                continue;
            }
        };
        for (i, sys) in list.iter().enumerate() {
            systems += 1;
            let generator = match sys.sigma {
                Some(sigma) => match catalog_conditions(sys) {
                    Ok(r) => Some((sigma, r)),
                    Err(e) => {
                        log.fail(e);
                        continue;
                    }
                },
                None => {
                    solver_only.push(format!("{} at m={m}", sys.name));
                    None
                }
            };
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (u64::from(m) << 32) ^ i as u64);
            let mut bad = 0;
            for _ in 0..cfg.samples {
                let c = cocycle::coboundary(&sys.ring, &cocycle::random_omega(&sys.ring, &mut rng));
                let residual = match &generator {
                    Some((sigma, rep)) => cocycle::trivialize(&sys.ring, *sigma, &c, rep).map(|t| t.residual).ok(),
                    None => cocycle::solve_coboundary(&sys.ring, &c).ok().map(|b| cocycle::coboundary(&sys.ring, &b.omega).max_deviation(&c)),
                };
                if let Some(r) = residual {
                    worst = worst.max(r);
                }
                let ok = cocycle::cocycle_check(&sys.ring, &c).is_ok_and(|r| r.holds) && residual.is_some_and(|r| r < RECONSTRUCTION_TOLERANCE);
                bad += usize::from(!ok);
            }
            log.check(bad == 0, || format!("m={m} {}: {bad} of {} samples not trivialized", sys.name, cfg.samples));
        }
    }
    let planted = cocycle::planted_z2z2();
    log.check(!cocycle::group_h2(&planted).trivial, || "planted Z/2×Z/2 class reported trivial".into());
    log.check(cocycle::brute_force_coboundary(&planted).is_none(), || "brute force trivializes the planted class".into());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    for s in 0..cfg.samples {
        let group = AbelianGroup { orders: GROUPS[rng.gen_range(0..GROUPS.len())].to_vec() };
        let c = cocycle::random_symmetric_group_cocycle(&group, &mut rng);
        let h2 = cocycle::group_h2(&c);
        let solved = h2.omega.as_ref().map(|w| cocycle::coboundary(&group.ring(), w).max_deviation(&c.as_scalar()));
        let brute = cocycle::brute_force_coboundary(&c).is_some();
        log.check(h2.trivial && solved.is_some_and(|r| r < RECONSTRUCTION_TOLERANCE) && brute, || {
            format!("sample {s} on {:?}: h2 trivial {}, residual {solved:?}, brute force {brute}", group.orders, h2.trivial)
        });
    }
    let mut out = format!("{systems} catalog systems, worst reconstruction residual {}", fmt_f64(worst));
    if !solver_only.is_empty() {
        out.push_str(&format!("; trivialized by the linear solver (no self-conjugate generator): {}", solver_only.join(", ")));
    }
    out
}

fn subsystem_table(cfg: &SuiteConfig, log: &mut Log) -> String {
    let ms = (5..=12).chain([17, 18]).filter(|&m| m <= cfg.max_m);
    let mut eight = 0;
    for m in ms {
        match subcat::classify_nonmaximal(m) {
            Ok(nets) => {
                let rows = subcat::rows(&nets);
                if m == 8 {
                    eight = rows.iter().filter(|r| r.subsystem == "SU(2)_6^even").count();
                }
                let cmp = subcat::compare_with_table(m, &rows);
                log.check(cmp.matches, || {
                    let show = |v: &[subcat::SubcatRow]| v.iter().map(|r| format!("{} {} {}", r.parent, r.subsystem, r.automorphism)).collect::<Vec<_>>().join("; ");
                    format!("m={m}: missing [{}], extra [{}]", show(&cmp.missing), show(&cmp.extra))
                });
            }
            Err(e) => log.fail(format!("m={m}: {e}")),
        }
    }
    if cfg.max_m >= 8 {
        log.check(eight == 2, || format!("m=8: SU(2)_6^even occurs {eight} times, expected 2"));
    }
    String::new()
}

fn proxies(cfg: &SuiteConfig, log: &mut Log) -> String {
    let tol = cfg.tolerance;
    for m in m_range(cfg, 12) {
        let data = match modular::minimal_modular(m) {
            Ok(d) => d,
            Err(e) => {
                log.fail(format!("m={m}: {e}"));
                continue;
            }
        };
        match modinv::classified_invariants(m) {
            Ok(found) => {
                for (z, label) in &found {
                    log.check(modinv::verify_coupling(&z.z, &data, &data).unwrap_or(false), || format!("m={m} {label}: Z does not intertwine S and T"));
                    match modinv::decode_extension(z) {
                        Ok(spec) => {
                            log.check(spec.pi_is_trivial() == (label.kind == modinv::InvariantType::I), || format!("m={m} {label}: type and automorphism disagree"));
                            log.check(subcat::maximality_test(&spec), || format!("m={m} {label}: extension not maximal"));
                        }
                        Err(e) => log.fail(format!("m={m} {label}: {e}")),
                    }
                }
            }
            Err(e) => log.fail(format!("m={m}: {e}")),
        }
        for sys in catalog::catalog_systems(m).unwrap_or_default() {
            let all: Vec<usize> = (0..sys.ring.rank()).collect();
            let mu = subcat::mu_index(&sys.ring, &all);
            log.check((mu - 1.0).abs() < tol, || format!("m={m} {}: full system index ratio {mu}", sys.name));
            let d = sys.ring.dims();
            let w: f64 = d.iter().map(|x| x * x).sum();
            log.check((w - sys.ring.global_index()).abs() < tol * w, || format!("m={m} {}: global index mismatch", sys.name));
            let c = cocycle::ScalarCocycle::constant(&sys.ring);
            log.check(cocycle::dimension_identity_check(&sys.ring, &c).unwrap_or(false), || format!("m={m} {}: dimension identity", sys.name));
        }
    }
    String::new()
}
