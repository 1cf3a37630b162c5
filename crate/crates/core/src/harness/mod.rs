//! Claim suites, report rendering and artifact dumps.

pub mod oracle;
mod report;

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::dickson::{
    check_invariance, dickson_form, dickson_half_dim, lagrangian_pair, parabolic_trivial_subgroup, perm_irrep,
    perm_irrep_on, siegel_unipotent_dim, to_canonical_json, ParabolicMode, Representation,
};
use crate::gf::make_field;
use crate::grp::{special_subgroups, standard_gens, SpecialKind, StandardKind, DEFAULT_CAP};
use crate::lietype::{table_row, LieGrid};
use crate::modrep::appendix::{verify_appendix_seeded, Theorem};
use crate::modrep::{cyclic_profile, irreducible_d, tensor_module, Partition, Restricted};

pub use report::*;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Md,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Dickson,
    Lietype,
    Appendix,
    All,
}

impl SuiteName {
    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Dickson => "dickson",
            SuiteName::Lietype => "lietype",
            SuiteName::Appendix => "appendix",
            SuiteName::All => "all",
        }
    }
}

/// Degrees and parameters swept by each suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    /// Degrees for the symplectic invariance and intersection claims.
    pub dickson_n: Vec<usize>,
    /// Largest degree handled by full enumeration; above it witnesses are certified.
    pub exact_max_n: usize,
    /// Largest degree also run through the brute-force oracle.
    pub oracle_max_n: usize,
    pub siegel_g: Vec<usize>,
    pub lie: LieGridSpec,
    pub cyclic_primes: Vec<u64>,
    pub cyclic_n: Vec<usize>,
    pub quadratic_n: Vec<usize>,
    pub free_summand_n: Vec<usize>,
    pub three_part_n: Vec<usize>,
    pub cross_n: Vec<usize>,
    pub tensor_checks: bool,
}

/// Serializable mirror of [`LieGrid`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieGridSpec {
    pub sl_m: Vec<usize>,
    pub sp_m: Vec<usize>,
    pub soeven_m: Vec<usize>,
    pub soodd_m: Vec<usize>,
    pub qs: Vec<u64>,
}

impl From<&LieGridSpec> for LieGrid {
    fn from(g: &LieGridSpec) -> Self {
        LieGrid {
            sl_m: g.sl_m.clone(),
            sp_m: g.sp_m.clone(),
            soeven_m: g.soeven_m.clone(),
            soodd_m: g.soodd_m.clone(),
            qs: g.qs.clone(),
        }
    }
}

impl From<LieGrid> for LieGridSpec {
    fn from(g: LieGrid) -> Self {
        LieGridSpec { sl_m: g.sl_m, sp_m: g.sp_m, soeven_m: g.soeven_m, soodd_m: g.soodd_m, qs: g.qs }
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            dickson_n: (5..=12).collect(),
            exact_max_n: 10,
            oracle_max_n: 8,
            siegel_g: (1..=5).collect(),
            lie: LieGrid::default().into(),
            cyclic_primes: vec![3, 5],
            cyclic_n: (3..=7).collect(),
            quadratic_n: (8..=12).collect(),
            free_summand_n: (5..=10).collect(),
            three_part_n: (6..=9).collect(),
            cross_n: (5..=10).collect(),
            tensor_checks: true,
        }
    }
}

impl Grid {
    pub fn empty() -> Self {
        Grid {
            dickson_n: vec![],
            exact_max_n: 10,
            oracle_max_n: 8,
            siegel_g: vec![],
            lie: LieGrid::empty().into(),
            cyclic_primes: vec![],
            cyclic_n: vec![],
            quadratic_n: vec![],
            free_summand_n: vec![],
            three_part_n: vec![],
            cross_n: vec![],
            tensor_checks: false,
        }
    }

    /// Drops every degree above `max_n`.
    fn capped(&self, max_n: usize) -> Grid {
        let cap = |v: &Vec<usize>| v.iter().copied().filter(|&n| n <= max_n).collect();
        Grid {
            dickson_n: cap(&self.dickson_n),
            cyclic_n: cap(&self.cyclic_n),
            quadratic_n: cap(&self.quadratic_n),
            free_summand_n: cap(&self.free_summand_n),
            three_part_n: cap(&self.three_part_n),
            cross_n: cap(&self.cross_n),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub max_n: usize,
    pub enum_cap: usize,
    pub grid: Grid,
    pub format: Format,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    pub seed: u64,
    /// Fill in `runtime_ms`; off by default so that output is reproducible.
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_n: 12,
            enum_cap: DEFAULT_CAP,
            grid: Grid::default(),
            format: Format::Json,
            jobs: 0,
            seed: 0,
            timings: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if !(1..=12).contains(&self.max_n) {
            return Err(HarnessError::Config(format!("max_n must be in 1..=12, got {}", self.max_n)));
        }
        if self.enum_cap == 0 {
            return Err(HarnessError::Config("enum_cap must be positive".into()));
        }
        if self.grid.exact_max_n > 10 {
            return Err(HarnessError::Config("exact enumeration is limited to n <= 10".into()));
        }
        if let Some(p) = self.grid.cyclic_primes.iter().find(|&&p| p < 3 || !crate::gf::is_prime(p)) {
            return Err(HarnessError::Config(format!("cyclic sweep needs odd primes, got {p}")));
        }
        let lie_q_ok = self.grid.lie.qs.iter().all(|&q| crate::lietype::field_of_order(q).is_ok());
        if !lie_q_ok {
            return Err(HarnessError::Config("lie grid contains a q that is not a supported prime power".into()));
        }
        Ok(())
    }
}

/// Top-level report document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: SuiteConfig,
    pub claims: Vec<VerificationReport>,
    pub summary: Summary,
}

impl SuiteReport {
    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary.fail > 0)
    }
}

type Task = Box<dyn Fn() -> Vec<VerificationReport> + Send + Sync>;

fn error_report(id: &str, statement: &str, inputs: Value, e: impl std::fmt::Display) -> VerificationReport {
    VerificationReport::check(id, statement, inputs, json!("no error"), json!(format!("error: {e}")))
        .with_note("computation failed")
}

fn dickson_tasks(cfg: &SuiteConfig, grid: &Grid) -> Vec<Task> {
    let mut tasks: Vec<Task> = Vec::new();
    for &n in &grid.dickson_n {
        let seed = cfg.seed;
        tasks.push(Box::new(move || {
            let id = format!("dickson-invariance/n={n}");
            let statement = "The mod 2 permutation irrep of S_n preserves the Dickson symplectic form";
            let d = dickson_half_dim(n);
            let inputs = json!({ "n": n, "p": 2, "d": d });
            let mut out = vec![match perm_irrep(n, 2).and_then(|rep| Ok((check_invariance(&rep, &dickson_form(d)?)?, rep))) {
                Ok((ok, _)) => VerificationReport::check(&id, statement, inputs, json!(true), json!(ok)),
                Err(e) => error_report(&id, statement, inputs, e),
            }];
            let id = format!("relations/n={n}");
            let statement = "Random generator words evaluate consistently in the permutation irrep";
            let inputs = json!({ "n": n, "p": 2, "seed": seed, "words": 64, "max_len": 24 });
            out.push(match perm_irrep(n, 2).and_then(|rep| rep.check_relations(seed, 64, 24)) {
                Ok(()) => VerificationReport::check(&id, statement, inputs, json!(true), json!(true)),
                Err(e) => error_report(&id, statement, inputs, e),
            });
            out
        }));
    }
    for &n in &grid.dickson_n {
        for alt in [false, true] {
            let exact = n <= grid.exact_max_n;
            let oracle = n <= grid.oracle_max_n;
            let cap = cfg.enum_cap;
            tasks.push(Box::new(move || siegel_intersection(n, alt, exact, oracle, cap)));
        }
    }
    for &g in &grid.siegel_g {
        tasks.push(Box::new(move || {
            [2u64, 3, 5]
                .iter()
                .map(|&p| {
                    let id = format!("siegel-unipotent-dim/g={g}/p={p}");
                    let statement = "The unipotent radical of the Siegel parabolic of Sp_2g has dimension (g+1 choose 2)";
                    let inputs = json!({ "g": g, "p": p });
                    match make_field(p, 1).map_err(crate::dickson::DicksonError::from).and_then(|f| siegel_unipotent_dim(g, &f)) {
                        Ok(dim) => VerificationReport::check(&id, statement, inputs, json!(g * (g + 1) / 2), json!(dim)),
                        Err(e) => error_report(&id, statement, inputs, e),
                    }
                })
                .collect()
        }));
    }
    tasks
}

fn siegel_intersection(n: usize, alt: bool, exact: bool, oracle: bool, cap: usize) -> Vec<VerificationReport> {
    let group_label = if alt { format!("A{n}") } else { format!("S{n}") };
    let id = format!("siegel-intersection/{group_label}");
    let statement = if alt {
        "A_n meets the unipotent radical of the Siegel parabolic of the Dickson Lagrangian in rank floor(n/2) - 1"
    } else {
        "S_n meets the unipotent radical of the Siegel parabolic of the Dickson Lagrangian in rank floor(n/2)"
    };
    let expected = if alt { n / 2 - 1 } else { n / 2 };
    let mode_name = if exact { "exact" } else { "certified" };
    let inputs = json!({ "n": n, "group": group_label, "mode": mode_name });
    let run = || -> Result<crate::dickson::ParabolicResult, crate::dickson::DicksonError> {
        let kind = if alt { StandardKind::Alt } else { StandardKind::Sym };
        let rep: Representation = perm_irrep_on(&standard_gens(kind, n)?, 2)?;
        let w = lagrangian_pair(dickson_half_dim(n))?.w;
        let mode = if exact {
            ParabolicMode::ExactEnum { cap }
        } else {
            let witness = special_subgroups(n, if alt { SpecialKind::TildeH } else { SpecialKind::H })?;
            if alt && witness.perm_gens()?.iter().any(|g| !g.is_even()) {
                return Err(crate::dickson::DicksonError::NotInSubgroup(witness.label));
            }
            ParabolicMode::CertifiedBound { witness }
        };
        parabolic_trivial_subgroup(&rep, &w, &mode)
    };
    let result = match run() {
        Ok(r) => r,
        Err(e) => return vec![error_report(&id, statement, inputs, e)],
    };
    let mut report = VerificationReport::check(&id, statement, inputs, json!(expected), json!(result.rank));
    if !exact {
        report = report.with_note("lower bound from a certified witness subgroup; the upper bound is not enumerated");
    }
    let mut out = vec![report];
    if oracle {
        let id = format!("parabolic-oracle/{group_label}");
        let statement = "Exact enumeration agrees with an independent brute-force count of the intersection";
        let inputs = json!({ "n": n, "group": group_label });
        out.push(match oracle::enum_parabolic(n, alt, cap) {
            Ok(o) => VerificationReport::check(
                &id,
                statement,
                inputs,
                json!({ "order": o.order, "rank": o.rank }),
                json!({ "order": result.order, "rank": result.rank }),
            ),
            Err(e) => error_report(&id, statement, inputs, e),
        });
    }
    out
}

fn lietype_tasks(grid: &Grid) -> Vec<Task> {
    LieGrid::from(&grid.lie)
        .points()
        .into_iter()
        .map(|(family, m, q)| -> Task {
            Box::new(move || {
                let id = format!("lie-intersection/{family}/m={m}/q={q}");
                let statement = "dim over F_q of G meeting the unipotent radical of the stabilizer of W equals the closed form, and root subgroups span it";
                let inputs = json!({ "family": family.to_string(), "m": m, "q": q });
                let report = match table_row(family, m, q) {
                    Ok(row) => {
                        let computed = json!({ "dim": row.computed, "span_dim": row.span_dim, "match": row.matches });
                        let expected = json!({ "dim": row.closed_form, "span_dim": row.closed_form, "match": true });
                        if row.in_scope {
                            VerificationReport::check(&id, statement, inputs, expected, computed)
                        } else {
                            VerificationReport::recorded(&id, statement, inputs, computed)
                                .with_note("rank parameter below the range of the closed form")
                        }
                    }
                    Err(e) => error_report(&id, statement, inputs, e),
                };
                vec![report]
            })
        })
        .collect()
}

fn appendix_tasks(cfg: &SuiteConfig, grid: &Grid) -> Vec<Task> {
    let mut tasks: Vec<Task> = Vec::new();
    let seed = cfg.seed;
    for &p in &grid.cyclic_primes {
        let ns = grid.cyclic_n.clone();
        tasks.push(Box::new(move || verify_appendix_seeded(Theorem::CyclicLoewy, &ns, p, seed)));
        let ns = grid.cyclic_n.clone();
        tasks.push(Box::new(move || verify_appendix_seeded(Theorem::CyclicLoewyAlt, &ns, p, seed)));
    }
    if !grid.quadratic_n.is_empty() {
        let ns = grid.quadratic_n.clone();
        tasks.push(Box::new(move || verify_appendix_seeded(Theorem::QuadraticClassification, &ns, 2, seed)));
        let ns: Vec<usize> = grid.quadratic_n.iter().copied().filter(|&n| n >= 9).collect();
        tasks.push(Box::new(move || verify_appendix_seeded(Theorem::QuadraticClassificationAlt, &ns, 2, seed)));
    }
    if !grid.free_summand_n.is_empty() {
        let ns = grid.free_summand_n.clone();
        tasks.push(Box::new(move || verify_appendix_seeded(Theorem::FreeSummand, &ns, 2, seed)));
    }
    if !grid.three_part_n.is_empty() {
        let ns = grid.three_part_n.clone();
        tasks.push(Box::new(move || verify_appendix_seeded(Theorem::ThreePartLength, &ns, 2, seed)));
    }
    for &n in &grid.cross_n {
        let cap = cfg.enum_cap;
        tasks.push(Box::new(move || vec![cross_construction(n, cap)]));
    }
    if grid.tensor_checks {
        tasks.push(Box::new(|| vec![odd_tensor_claim()]));
    }
    tasks
}

/// `D^{(n-1,1)}` from the Specht construction against the permutation irrep.
pub fn cross_construction(n: usize, cap: usize) -> VerificationReport {
    let id = format!("cross-construction/n={n}");
    let statement = "D^(n-1,1) built from Specht modules and the mod 2 permutation irrep agree in dimension and in fingerprint under H_n";
    let inputs = json!({ "n": n, "p": 2, "subgroup": format!("H{n}") });
    let run = || -> Result<VerificationReport, String> {
        let f = make_field(2, 1).map_err(|e| e.to_string())?;
        let h = special_subgroups(n, SpecialKind::H).map_err(|e| e.to_string())?;
        let lambda = Partition::new(vec![n - 1, 1]).map_err(|e| e.to_string())?;
        let d = irreducible_d(&lambda, &f).map_err(|e| e.to_string())?;
        let rep = perm_irrep(n, 2).map_err(|e| e.to_string())?;
        let a = d.restrict(&h).and_then(|r| r.fingerprint(cap)).map_err(|e| e.to_string())?;
        let b = Restricted::from_representation(&rep, &h).and_then(|r| r.fingerprint(cap)).map_err(|e| e.to_string())?;
        Ok(VerificationReport::check(&id, statement, inputs.clone(), json!(b), json!(a))
            .with_note("fingerprint equality is the isomorphism proxy; expected side is the permutation irrep"))
    };
    run().unwrap_or_else(|e| error_report(&id, statement, inputs.clone(), e))
}

/// Odd-dimensional indecomposables of `C_5` tensor to odd-dimensional ones.
pub fn odd_tensor_claim() -> VerificationReport {
    let id = "odd-tensor/(4,1)x(4,1)/p=5";
    let statement = "A tensor product of odd-dimensional indecomposables of C_p splits into odd-dimensional indecomposables";
    let inputs = json!({ "lambda": "(4,1)", "p": 5, "cycle": "(1 2 3 4 5)" });
    let run = || -> Result<VerificationReport, crate::modrep::ModError> {
        let f = make_field(5, 1).map_err(crate::exactla::LaError::from)?;
        let d = irreducible_d(&"4,1".parse()?, &f)?;
        let t = tensor_module(&d, &d)?;
        let g = crate::grp::Perm::from_cycles("(1 2 3 4 5)", 5)?;
        let blocks = cyclic_profile(&t, &g)?;
        let all_odd = blocks.iter().all(|b| b % 2 == 1);
        Ok(VerificationReport::check(id, statement, inputs.clone(), json!({ "all_odd": true }), json!({ "all_odd": all_odd }))
            .with_note(format!("block sizes {blocks:?}")))
    };
    run().unwrap_or_else(|e| error_report(id, statement, inputs.clone(), e))
}

/// Runs a suite. Claims are computed in parallel and reported in a fixed order.
pub fn run_suite(name: SuiteName, cfg: &SuiteConfig) -> Result<SuiteReport, HarnessError> {
    cfg.validate()?;
    let grid = cfg.grid.capped(cfg.max_n);
    let mut tasks = Vec::new();
    if matches!(name, SuiteName::Dickson | SuiteName::All) {
        tasks.extend(dickson_tasks(cfg, &grid));
    }
    if matches!(name, SuiteName::Lietype | SuiteName::All) {
        tasks.extend(lietype_tasks(&grid));
    }
    if matches!(name, SuiteName::Appendix | SuiteName::All) {
        tasks.extend(appendix_tasks(cfg, &grid));
    }
    let timings = cfg.timings;
    let run = || -> Vec<VerificationReport> {
        tasks
            .par_iter()
            .map(|t| {
                let start = Instant::now();
                let mut reports = t();
                if timings {
                    let ms = start.elapsed().as_millis() as u64;
                    for r in &mut reports {
                        r.runtime_ms = Some(ms);
                    }
                }
                reports
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };
    let claims = if cfg.jobs > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
        pool.install(run)
    } else {
        run()
    };
    Ok(SuiteReport { suite: name.as_str().to_string(), config: cfg.clone(), summary: Summary::of(&claims), claims })
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Recorded => "recorded",
        Status::Partial => "partial",
    }
}

/// Renders a report; JSON output is canonical (sorted keys, LF endings).
pub fn render_report(report: &SuiteReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = to_canonical_json(report);
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &report.claims {
                let _ = writeln!(s, "{}: expected {}, computed {}, {}", c.claim_id, compact(&c.expected), compact(&c.computed), status_str(c.status));
            }
            let m = report.summary;
            let _ = writeln!(s, "summary: {} pass, {} fail, {} recorded, {} partial", m.pass, m.fail, m.recorded, m.partial);
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["claim_id", "status", "expected", "computed", "inputs", "statement", "note", "runtime_ms"])
                .expect("in-memory CSV");
            for c in &report.claims {
                w.write_record([
                    c.claim_id.as_str(),
                    status_str(c.status),
                    &compact(&c.expected),
                    &compact(&c.computed),
                    &c.inputs.to_string(),
                    &c.paper_ref,
                    c.note.as_deref().unwrap_or(""),
                    &c.runtime_ms.map(|m| m.to_string()).unwrap_or_default(),
                ])
                .expect("in-memory CSV");
            }
            String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("UTF-8")
        }
        Format::Md => {
            let mut s = format!("# Suite `{}`\n\n| claim | status | expected | computed | note |\n|---|---|---|---|---|\n", report.suite);
            let cell = |x: &str| x.replace('|', "\\|");
            for c in &report.claims {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} |",
                    cell(&c.claim_id),
                    status_str(c.status),
                    cell(&compact(&c.expected)),
                    cell(&compact(&c.computed)),
                    cell(c.note.as_deref().unwrap_or(""))
                );
            }
            let m = report.summary;
            let _ = writeln!(s, "\n{} pass, {} fail, {} recorded, {} partial", m.pass, m.fail, m.recorded, m.partial);
            s
        }
    }
}

/// Writes `contents` to `path`, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&std::path::Path>, contents: &str) -> Result<(), HarnessError> {
    match path {
        Some(p) => std::fs::write(p, contents)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(contents.as_bytes())?;
        }
    }
    Ok(())
}
