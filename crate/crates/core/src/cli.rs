//! Command-line front end: argument parsing, dispatch and report emitters.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cache::{Cache, CacheKey};
use crate::catalog::{self, CatalogSystem};
use crate::cocycle::{self, AbelianGroup, GroupCocycle, ScalarCocycle};
use crate::connection::{self, ConnectionError};
use crate::format::{csv, fmt_f64, markdown, to_json_string};
use crate::fusion::{generator_analysis, ConditionReport, FusionRing};
use crate::modinv::{self, CouplingMatrix, InvariantLabel, DEFAULT_NODE_BUDGET};
use crate::modular::{self, ModularData, MINIMAL_MAX_M, SU2_MAX_LEVEL};
use crate::sixj::{self, SixJTable};
use crate::subcat;
use crate::suites::{self, SuiteConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Debug, Parser)]
#[command(name = "vircat", version, about = "Fusion data, modular invariants, 6j symbols and cocycles for c < 1 Virasoro nets")]
pub struct Cli {
    /// Output emitter.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Numerical tolerance for checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Node budget for the invariant search.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Cache directory (overrides VIRCAT_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// S, T, c and h of a minimal model or SU(2)_k.
    ModularData(ModelArgs),
    /// Physical modular invariants of a minimal model.
    Invariants(InvariantArgs),
    /// Vanishing-theorem conditions for a generator.
    Vanishing(VanishingArgs),
    /// Quantum 6j symbols at level k.
    Sixj(SixjArgs),
    /// Connection cells and their checks.
    Connection(ConnectionArgs),
    /// Scalar 2-cocycles on groups and fusion systems.
    Cocycle(CocycleArgs),
    /// Proper subsystems with automorphisms.
    Subcats(SubcatArgs),
    /// Catalog of maximal-extension systems.
    Catalog(CatalogArgs),
    /// Run every verification suite.
    VerifyAll(VerifyArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ModelSel {
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[command(flatten)]
    pub model: ModelSel,
}

#[derive(Debug, Args)]
pub struct InvariantArgs {
    #[arg(long)]
    pub m: u32,
    /// Also list the Kac labels indexing rows and columns.
    #[arg(long)]
    pub label: bool,
    #[arg(long, conflicts_with_all = ["csv", "md"])]
    pub json: bool,
    #[arg(long, conflicts_with = "md")]
    pub csv: bool,
    #[arg(long)]
    pub md: bool,
}

#[derive(Debug, Args)]
pub struct VanishingArgs {
    #[command(flatten)]
    pub model: ModelSel,
    /// Catalog system at m, e.g. "(A_4, D_4)"; defaults to the diagonal one.
    #[arg(long, requires = "m")]
    pub system: Option<String>,
    /// Generator label; defaults to the catalog generator, or "1" for SU(2)_k.
    #[arg(long)]
    pub sigma: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SixjCheck {
    Pentagon,
    Orthogonality,
}

#[derive(Debug, Args)]
pub struct SixjArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_enum)]
    pub check: Option<SixjCheck>,
    #[arg(long)]
    pub scan_zeros: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConnectionSystem {
    A,
    Product,
}

#[derive(Debug, Args)]
pub struct ConnectionArgs {
    #[arg(long, value_enum)]
    pub system: ConnectionSystem,
    /// Level for `a` (default 1..=10).
    #[arg(long)]
    pub k: Option<u32>,
    /// Parameter for `product` (default 3..=12).
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct CocycleArgs {
    /// Finite abelian group, e.g. "2x2" or "Z2xZ4".
    #[arg(long, conflicts_with = "system")]
    pub group: Option<String>,
    #[arg(long, value_parser = ["vir"], requires = "m")]
    pub system: Option<String>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, requires = "group")]
    pub enumerate: bool,
    /// Cocycle file: JSON object keyed by "a,b,c" with [re, im] values.
    #[arg(long)]
    pub check: Option<PathBuf>,
    #[arg(long, requires = "system")]
    pub roundtrip: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SubcatArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub md: bool,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[arg(long)]
    pub list: bool,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, default_value_t = 12)]
    pub max_m: u32,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = MINIMAL_MAX_M)]
    pub max_m: u32,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn compute(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

/// Exit code with the text for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    ok: bool,
    text: String,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { ok: true, text }
    }
}

pub struct RunConfig {
    pub format: Format,
    pub tolerance: f64,
    pub budget: u64,
    pub cache: Cache,
    pub seed: u64,
}

pub fn dispatch<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match run(cli) {
        Ok(r) => Outcome { code: if r.ok { 0 } else { 1 }, stdout: r.text, stderr: String::new() },
        Err(CliError::Usage(m)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(CliError::Compute(m)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}

fn run(cli: Cli) -> Result<Report, CliError> {
    if !(cli.tolerance > 0.0 && cli.tolerance <= 1e-3) {
        return Err(usage("--tolerance must lie in (0, 1e-3]"));
    }
    if cli.budget == 0 {
        return Err(usage("--budget must be positive"));
    }
    let cache = if cli.no_cache {
        Cache::disabled()
    } else {
        cli.cache_dir.clone().map_or_else(Cache::from_env, Cache::at)
    };
    let mut cfg = RunConfig { format: cli.format.unwrap_or(Format::Json), tolerance: cli.tolerance, budget: cli.budget, cache, seed: cli.seed };
    match cli.command {
        Command::ModularData(a) => modular_data(&cfg, &a.model),
        Command::Invariants(a) => {
            if a.csv {
                cfg.format = Format::Csv;
            } else if a.md {
                cfg.format = Format::Md;
            } else if a.json {
                cfg.format = Format::Json;
            }
            invariants(&cfg, &a)
        }
        Command::Vanishing(a) => vanishing(&cfg, &a),
        Command::Sixj(a) => sixj_cmd(&cfg, &a),
        Command::Connection(a) => connection_cmd(&cfg, &a),
        Command::Cocycle(a) => cocycle_cmd(&cfg, &a),
        Command::Subcats(a) => {
            if a.md {
                cfg.format = Format::Md;
            }
            subcats(&cfg, a.m)
        }
        Command::Catalog(a) => catalog_cmd(&cfg, &a),
        Command::VerifyAll(a) => verify_all(&cfg, &a),
    }
}

fn check_m(m: u32) -> Result<u32, CliError> {
    if (3..=MINIMAL_MAX_M).contains(&m) {
        Ok(m)
    } else {
        Err(usage(format!("--m {m} is outside 3..={MINIMAL_MAX_M}")))
    }
}

fn check_k(k: u32, hi: u32) -> Result<u32, CliError> {
    if (1..=hi).contains(&k) {
        Ok(k)
    } else {
        Err(usage(format!("--k {k} is outside 1..={hi}")))
    }
}

fn load_modular(cfg: &RunConfig, sel: &ModelSel) -> Result<ModularData, CliError> {
    match (sel.m, sel.k) {
        (Some(m), _) => {
            let m = check_m(m)?;
            cfg.cache.get_or_compute(&CacheKey::new("modular", &format!("minimal-m{m}")), || modular::minimal_modular(m)).map_err(compute)
        }
        (_, Some(k)) => {
            let k = check_k(k, SU2_MAX_LEVEL)?;
            cfg.cache.get_or_compute(&CacheKey::new("modular", &format!("su2-k{k}")), || modular::su2k_modular(k)).map_err(compute)
        }
        _ => Err(usage("one of --m or --k is required")),
    }
}

fn table(cfg: &RunConfig, header: &[&str], rows: Vec<Vec<String>>) -> String {
    let header: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    match cfg.format {
        Format::Md => markdown(&header, &rows),
        _ => csv(&header, &rows),
    }
}

fn modular_data(cfg: &RunConfig, sel: &ModelSel) -> Result<Report, CliError> {
    let data = load_modular(cfg, sel)?;
    let r = data.rank();
    let text = match cfg.format {
        Format::Json => {
            let mut v = data.to_json();
            v["c_exact"] = json!(data.c.to_string());
            to_json_string(&v)
        }
        Format::Csv => {
            let rows = (0..r)
                .flat_map(|i| (0..r).map(move |j| (i, j)))
                .map(|(i, j)| {
                    let s = data.s(i, j);
                    vec![data.labels[i].clone(), data.labels[j].clone(), fmt_f64(s.re), fmt_f64(s.im)]
                })
                .collect();
            table(cfg, &["row", "col", "re", "im"], rows)
        }
        Format::Md => {
            let rows = (0..r)
                .map(|i| vec![data.labels[i].clone(), data.h[i].to_string(), fmt_f64(data.s(0, i).re / data.s(0, 0).re)])
                .collect();
            format!("c = {}\n\n{}", data.c, table(cfg, &["label", "h", "d"], rows))
        }
    };
    Ok(Report::ok(text))
}

fn classified(cfg: &RunConfig, m: u32) -> Result<Vec<(CouplingMatrix, InvariantLabel)>, CliError> {
    let key = CacheKey::new("modinv", &format!("m{m}-budget{}", cfg.budget));
    let budget = cfg.budget;
    cfg.cache
        .get_or_compute(&key, || {
            let (data, ring) = modular::minimal_model_data(m)?;
            modinv::classified_invariants_with(&data, &ring, budget)
        })
        .map_err(compute)
}

fn pi_pairs(spec: &modinv::ExtensionSpec) -> Vec<[String; 2]> {
    let f = &spec.factor;
    f.pi.iter().enumerate().filter(|(i, p)| i != *p).map(|(i, &p)| [f.labels[i].clone(), f.labels[p].clone()]).collect()
}

fn invariants(cfg: &RunConfig, a: &InvariantArgs) -> Result<Report, CliError> {
    let m = check_m(a.m)?;
    let data = load_modular(cfg, &ModelSel { m: Some(m), k: None })?;
    let found = classified(cfg, m)?;
    let mut entries = Vec::new();
    let mut ok = true;
    for (z, label) in &found {
        let spec = modinv::decode_extension(z).map_err(compute)?;
        let intertwines = modinv::verify_coupling(&z.z, &data, &data).map_err(compute)?;
        ok &= intertwines && spec.pi_is_trivial() == (label.kind == modinv::InvariantType::I);
        entries.push((z, label, spec, intertwines));
    }
    let text = match cfg.format {
        Format::Json => {
            let list: Vec<Value> = entries
                .iter()
                .map(|(z, label, spec, intertwines)| {
                    json!({
                        "Z": z.z.rows(),
                        "label": label.to_string(),
                        "type": label.kind.to_string(),
                        "pi": { "system": spec.factor.system, "side": spec.factor.side, "moved": pi_pairs(spec) },
                        "extension": spec.extension.to_string(),
                        "intertwines": intertwines,
                    })
                })
                .collect();
            let mut v = json!({ "m": m, "invariants": list });
            if a.label {
                v["labels"] = json!(data.labels);
            }
            to_json_string(&v)
        }
        Format::Csv => {
            let rows = entries
                .iter()
                .map(|(z, label, spec, _)| {
                    let nz: Vec<String> = (0..z.z.n)
                        .flat_map(|i| (0..z.z.n).map(move |j| (i, j)))
                        .filter(|&(i, j)| z.z.get(i, j) != 0)
                        .map(|(i, j)| {
                            if a.label {
                                format!("{}:{}:{}", data.labels[i], data.labels[j], z.z.get(i, j))
                            } else {
                                format!("{i}:{j}:{}", z.z.get(i, j))
                            }
                        })
                        .collect();
                    let pi: Vec<String> = pi_pairs(spec).iter().map(|[x, y]| format!("{x}>{y}")).collect();
                    vec![m.to_string(), label.to_string(), label.kind.to_string(), pi.join(" "), nz.join(" ")]
                })
                .collect();
            table(cfg, &["m", "label", "type", "pi", "Z"], rows)
        }
        Format::Md => {
            let rows = entries
                .iter()
                .map(|(_, label, spec, _)| {
                    let pi = if spec.pi_is_trivial() { "id".to_string() } else { format!("nontrivial on {}", spec.factor.system) };
                    vec![m.to_string(), label.to_string(), label.kind.to_string(), pi]
                })
                .collect();
            table(cfg, &["m", "label", "type", "π"], rows)
        }
    };
    Ok(Report { ok, text })
}

fn condition_json(r: &ConditionReport) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

fn vanishing(cfg: &RunConfig, a: &VanishingArgs) -> Result<Report, CliError> {
    let (name, ring, sigma, rep) = match (a.model.m, a.model.k) {
        (Some(m), _) => {
            let m = check_m(m)?;
            let sys = pick_system(m, a.system.as_deref())?;
            let mut sys = sys;
            if let Some(s) = &a.sigma {
                sys.sigma = Some(sys.ring.index_of(s).ok_or_else(|| usage(format!("no label {s:?} in {}", sys.name)))?);
            }
            let rep = suites::catalog_conditions(&sys).map_err(compute)?;
            (sys.name.clone(), sys.ring.clone(), sys.sigma.expect("checked above"), rep)
        }
        (_, Some(k)) => {
            let k = check_k(k, 32)?;
            let ring = catalog::su2_ring(k);
            let s = a.sigma.as_deref().unwrap_or("1");
            let sigma = ring.index_of(s).ok_or_else(|| usage(format!("no label {s:?} in SU(2)_{k}")))?;
            let mut rep = generator_analysis(&ring, sigma).map_err(compute)?;
            if sigma != 1 {
                return Err(usage("SU(2)_k connections are built for the generator 1"));
            }
            let cells = connection::an_connection(k).map_err(compute)?;
            let c3 = connection::condition3_check(&ring, sigma, &cells).map_err(compute)?;
            rep.cond3 = crate::fusion::Tri::from_bool(c3.holds);
            (format!("A_{}", k + 1), ring, sigma, rep)
        }
        _ => return Err(usage("one of --m or --k is required")),
    };
    let applies = rep.vanishing_applies();
    let text = match cfg.format {
        Format::Json => to_json_string(&json!({
            "system": name,
            "sigma": ring.label(sigma),
            "conditions": condition_json(&rep),
            "vanishing_applies": applies,
        })),
        _ => {
            let tri = |t: crate::fusion::Tri| format!("{t:?}").to_lowercase();
            let rows = vec![
                vec!["1".into(), tri(rep.cond1)],
                vec!["2a".into(), tri(rep.cond2a)],
                vec!["2b".into(), tri(rep.cond2b)],
                vec!["3".into(), tri(rep.cond3)],
                vec!["4".into(), tri(rep.cond4)],
                vec!["all".into(), applies.to_string()],
            ];
            table(cfg, &["condition", "status"], rows)
        }
    };
    Ok(Report { ok: applies, text })
}

fn pick_system(m: u32, name: Option<&str>) -> Result<CatalogSystem, CliError> {
    let systems = catalog::catalog_systems(m).map_err(compute)?;
    match name {
        None => systems.into_iter().find(|s| s.label.left.is_a() && s.label.right.is_a()).ok_or_else(|| compute("no diagonal system")),
        Some(n) => {
            let norm = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
            let names: Vec<String> = systems.iter().map(|s| s.name.clone()).collect();
            systems.into_iter().find(|s| norm(&s.name) == norm(n)).ok_or_else(|| usage(format!("no catalog system {n:?} at m={m}; have {names:?}")))
        }
    }
}

fn sixj_table(cfg: &RunConfig, k: u32) -> Result<SixJTable, CliError> {
    check_k(k, sixj::SIXJ_MAX_LEVEL)?;
    cfg.cache.get_or_compute(&CacheKey::new("sixj", &format!("k{k}")), || SixJTable::new(k)).map_err(compute)
}

fn sixj_cmd(cfg: &RunConfig, a: &SixjArgs) -> Result<Report, CliError> {
    let t = sixj_table(cfg, a.k)?;
    let mut ok = true;
    let mut out = json!({ "k": a.k, "symbols": t.len() });
    if let Some(c) = a.check {
        let r = match c {
            SixjCheck::Pentagon => sixj::pentagon_residual(&t),
            SixjCheck::Orthogonality => sixj::orthogonality_residual(&t),
        };
        ok &= r.max < cfg.tolerance;
        out["check"] = json!({ "kind": format!("{c:?}").to_lowercase(), "max_residual": r.max, "checked": r.checked, "passed": r.max < cfg.tolerance });
    }
    if a.scan_zeros {
        let scan = sixj::zero_scan(a.k, suites::ZERO_TOLERANCE).map_err(compute)?;
        ok &= scan.zeros.is_empty();
        out["zero_scan"] = serde_json::to_value(&scan).expect("scans serialize");
    }
    let text = match cfg.format {
        Format::Json => {
            if a.check.is_none() && !a.scan_zeros {
                out["entries"] = t.entries().map(|(s, v)| json!([s, v])).collect();
            }
            to_json_string(&out)
        }
        _ => {
            let rows = t
                .entries()
                .map(|(s, v)| s.iter().map(|x| x.to_string()).chain([fmt_f64(v)]).collect())
                .collect();
            table(cfg, &["a", "b", "c", "d", "e", "f", "value"], rows)
        }
    };
    Ok(Report { ok, text })
}

fn connection_cmd(cfg: &RunConfig, a: &ConnectionArgs) -> Result<Report, CliError> {
    let tol = cfg.tolerance;
    let mut ok = true;
    let mut reports = Vec::new();
    match a.system {
        ConnectionSystem::A => {
            let ks: Vec<u32> = match a.k {
                Some(k) => vec![check_k(k, 32)?],
                None => (1..=10).collect(),
            };
            for k in ks {
                let c = connection::an_connection(k).map_err(compute)?;
                let r = c.residuals();
                let c3 = connection::condition3_check(&c.ring, c.sigma, &c).map_err(compute)?;
                let pass = r.unitarity < tol && r.renormalization < tol && c3.holds;
                ok &= pass;
                reports.push(json!({ "system": c.name, "residuals": r, "condition3": c3.holds, "passed": pass }));
            }
        }
        ConnectionSystem::Product => {
            let ms: Vec<u32> = match a.m {
                Some(m) => vec![check_m(m)?],
                None => (3..=12).collect(),
            };
            for m in ms {
                for sys in catalog::catalog_systems(m).map_err(compute)? {
                    let Some(sigma) = sys.sigma else { continue };
                    match connection::catalog_connection(&sys) {
                        Ok(c) => {
                            let r = c.residuals();
                            let c3 = connection::condition3_check(&sys.ring, sigma, &c).map_err(compute)?;
                            let pass = r.unitarity < tol && c3.holds;
                            ok &= pass;
                            reports.push(json!({ "m": m, "system": sys.name, "residuals": r, "condition3": c3, "passed": pass }));
                        }
                        Err(ConnectionError::CatalogFact(f)) => {
                            reports.push(json!({ "m": m, "system": sys.name, "condition3": "cataloged", "factor": f, "passed": true }));
                        }
                        Err(e) => return Err(compute(e)),
                    }
                }
            }
        }
    }
    if !a.check {
        ok = true;
    }
    let text = match cfg.format {
        Format::Json => to_json_string(&json!({ "reports": reports })),
        _ => {
            let rows = reports
                .iter()
                .map(|r| {
                    let f = |k: &str| r["residuals"][k].as_f64().map(fmt_f64).unwrap_or_default();
                    vec![r["system"].as_str().unwrap_or("").to_string(), f("unitarity"), f("renormalization"), f("min_abs"), r["passed"].to_string()]
                })
                .collect();
            table(cfg, &["system", "unitarity", "renormalization", "min |W|", "passed"], rows)
        }
    };
    Ok(Report { ok, text })
}

fn read_json(path: &PathBuf) -> Result<Value, CliError> {
    let bytes = std::fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_slice(&bytes).map_err(|e| compute(format!("{}: {e}", path.display())))
}

fn vir_system(m: u32) -> Result<(CatalogSystem, ConditionReport), CliError> {
    let sys = pick_system(check_m(m)?, None)?;
    let rep = suites::catalog_conditions(&sys).map_err(compute)?;
    Ok((sys, rep))
}

fn cocycle_cmd(cfg: &RunConfig, a: &CocycleArgs) -> Result<Report, CliError> {
    if let Some(spec) = &a.group {
        let group = AbelianGroup::parse(spec).map_err(|e| usage(e.to_string()))?;
        if a.enumerate {
            let reps: Vec<Value> = cocycle::h2_representatives(&group)
                .into_iter()
                .map(|(exps, c)| {
                    let h2 = cocycle::group_h2(&c);
                    json!({ "exponents": exps, "trivial": h2.trivial, "cocycle": c.to_json() })
                })
                .collect();
            return Ok(Report::ok(to_json_string(&json!({ "group": group.orders, "classes": reps.len(), "representatives": reps }))));
        }
        let path = a.check.as_ref().ok_or_else(|| usage("--group needs --enumerate or --check FILE"))?;
        let c = GroupCocycle::from_json(group.clone(), &read_json(path)?).map_err(compute)?;
        let residual = c.cocycle_residual();
        let h2 = cocycle::group_h2(&c);
        let brute = cocycle::brute_force_coboundary(&c).is_some();
        let ok = residual < cfg.tolerance;
        let v = json!({
            "group": group.orders,
            "cocycle_residual": residual,
            "is_cocycle": ok,
            "trivial": h2.trivial,
            "brute_force_trivial": brute,
            "omega": h2.omega.map(|w| w.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()),
        });
        return Ok(Report { ok, text: to_json_string(&v) });
    }
    let m = a.m.ok_or_else(|| usage("--system vir needs --m"))?;
    let (sys, rep) = vir_system(m)?;
    let sigma = sys.sigma.expect("diagonal systems carry a generator");
    if let Some(path) = &a.check {
        let c = ScalarCocycle::from_json(&sys.ring, &read_json(path)?).map_err(compute)?;
        let chk = cocycle::cocycle_check(&sys.ring, &c).map_err(compute)?;
        let triv = cocycle::trivialize(&sys.ring, sigma, &c, &rep);
        let v = json!({
            "system": sys.name,
            "cocycle": chk,
            "trivialized": triv.as_ref().is_ok(),
            "residual": triv.as_ref().ok().map(|t| t.residual),
            "case": triv.as_ref().ok().map(|t| t.case),
            "error": triv.as_ref().err().map(|e| e.to_string()),
        });
        return Ok(Report { ok: chk.holds && triv.is_ok(), text: to_json_string(&v) });
    }
    let n = a.roundtrip.ok_or_else(|| usage("--system vir needs --roundtrip N or --check FILE"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut passed, mut worst) = (0usize, 0.0f64);
    for _ in 0..n {
        let c = cocycle::coboundary(&sys.ring, &cocycle::random_omega(&sys.ring, &mut rng));
        let holds = cocycle::cocycle_check(&sys.ring, &c).map_err(compute)?.holds;
        if let (true, Ok(t)) = (holds, cocycle::trivialize(&sys.ring, sigma, &c, &rep)) {
            worst = worst.max(t.residual);
            passed += usize::from(t.residual < cocycle::RECONSTRUCTION_TOLERANCE);
        }
    }
    let v = json!({ "system": sys.name, "seed": cfg.seed, "samples": n, "passed": passed, "max_residual": worst, "conditions": condition_json(&rep) });
    Ok(Report { ok: passed == n, text: to_json_string(&v) })
}

fn subcats(cfg: &RunConfig, m: u32) -> Result<Report, CliError> {
    let m = check_m(m)?;
    let nets = cfg
        .cache
        .get_or_compute(&CacheKey::new("subcat", &format!("m{m}")), || {
            subcat::classify_nonmaximal(m).map(|n| serde_json::to_value(n).expect("nets serialize"))
        })
        .map_err(compute)?;
    let nets: Vec<Value> = nets.as_array().cloned().unwrap_or_default();
    let rows: Vec<subcat::SubcatRow> = nets.iter().filter_map(|n| serde_json::from_value(n["row"].clone()).ok()).collect();
    let rows = {
        let mut r = rows;
        r.sort();
        r.dedup();
        r
    };
    let cmp = subcat::compare_with_table(m, &rows);
    let text = match cfg.format {
        Format::Json => to_json_string(&json!({ "m": m, "nets": nets, "rows": rows, "comparison": cmp })),
        _ => {
            let body = rows.iter().map(|r| vec![r.m.to_string(), r.parent.clone(), r.subsystem.clone(), r.automorphism.to_string()]).collect();
            table(cfg, &["m", "maximal net", "subsystem", "automorphism"], body)
        }
    };
    Ok(Report::ok(text))
}

fn ring_stats(r: &FusionRing) -> Value {
    json!({
        "rank": r.rank(),
        "global_index": r.global_index(),
        "multiplicity_free": r.is_multiplicity_free(),
        "pointed": r.is_pointed(),
        "commutative": r.is_commutative(),
    })
}

fn catalog_cmd(cfg: &RunConfig, a: &CatalogArgs) -> Result<Report, CliError> {
    if !a.list {
        return Err(usage("catalog needs --list"));
    }
    let ms: Vec<u32> = match a.m {
        Some(m) => vec![check_m(m)?],
        None => (3..=check_m(a.max_m)?).collect(),
    };
    let mut entries = Vec::new();
    for m in ms {
        for sys in catalog::catalog_systems(m).map_err(compute)? {
            let mut v = ring_stats(&sys.ring);
            v["m"] = json!(m);
            v["name"] = json!(sys.name);
            v["construction"] = serde_json::to_value(sys.tag).expect("tags serialize");
            v["factors"] = json!([sys.left.name, sys.right.name]);
            v["sigma"] = json!(sys.sigma.map(|s| sys.ring.label(s).to_string()));
            entries.push(v);
        }
    }
    let text = match cfg.format {
        Format::Json => to_json_string(&json!({ "systems": entries })),
        _ => {
            let rows = entries
                .iter()
                .map(|e| {
                    vec![
                        e["m"].to_string(),
                        e["name"].as_str().unwrap_or("").to_string(),
                        e["rank"].to_string(),
                        e["global_index"].as_f64().map(fmt_f64).unwrap_or_default(),
                        e["sigma"].as_str().unwrap_or("-").to_string(),
                    ]
                })
                .collect();
            table(cfg, &["m", "system", "rank", "global index", "sigma"], rows)
        }
    };
    Ok(Report::ok(text))
}

fn verify_all(cfg: &RunConfig, a: &VerifyArgs) -> Result<Report, CliError> {
    let max_m = check_m(a.max_m)?;
    let scfg = SuiteConfig { max_m, samples: a.samples, seed: cfg.seed, tolerance: cfg.tolerance };
    let results = suites::run_all(&scfg);
    let ok = results.iter().all(|r| r.passed);
    let text = match cfg.format {
        Format::Json => {
            let list: Vec<Value> = results
                .iter()
                .map(|r| json!({ "id": r.id, "name": r.name, "passed": r.passed, "summary": r.summary, "failures": r.failures }))
                .collect();
            to_json_string(&json!({ "max_m": max_m, "passed": ok, "suites": list }))
        }
        _ => {
            let rows = results
                .iter()
                .map(|r| vec![r.id.to_string(), r.name.to_string(), if r.passed { "PASS" } else { "FAIL" }.to_string(), r.summary.clone()])
                .collect();
            table(cfg, &["suite", "name", "result", "summary"], rows)
        }
    };
    Ok(Report { ok, text })
}
