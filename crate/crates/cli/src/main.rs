//! Command-line front end: Farey symbols, lift classification tables,
//! general levels, closed-form counts, dimension reports and the
//! verification fixtures.
//!
//! Exit codes: 0 on success, 1 when a computation or cross-check fails,
//! 2 on usage errors.

use anyhow::Context;
use clap::{Parser, Subcommand};
use psl2_lifts::groups::GroupSpec;
use psl2_lifts::lifts::{classify_lifts, predicted_counts, Classification, LiftClass};
use psl2_lifts::modforms::{self, DimNote};
use psl2_lifts::prepared::{
    build_symbol, prepare_with, Error as CoreError, MemoProvider, PreparedGroup, SymbolProvider,
};
use psl2_lifts::squares::{squares_status, SquaresStatus};
use psl2_lifts::verify::run_fixture;
use psl2_lifts::SignedFareySymbol;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "psl2-lifts", version, about = "Lifts of projective congruence groups: Farey symbols, congruence classification, cusp form dimensions")]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    /// Directory for cached Farey symbols (default: $PSL2_LIFTS_CACHE_DIR,
    /// then $XDG_CACHE_HOME/psl2-lifts, then ~/.cache/psl2-lifts).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Disable the symbol cache entirely.
    #[arg(long, global = true)]
    no_cache: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the signed Farey symbol and invariants of a group.
    Farey {
        /// Group spec: full, gamma:N, gamma0:N, gamma1:N, g1:p^r, g2:p^r.
        spec: Option<String>,
        /// Read a serialized symbol instead of building one.
        #[arg(long, value_name = "FILE", conflicts_with = "spec")]
        symbol_file: Option<PathBuf>,
    },
    /// Classify every lift of the projective image of a group.
    Lifts {
        spec: Option<String>,
        #[arg(long, value_name = "FILE", conflicts_with = "spec")]
        symbol_file: Option<PathBuf>,
        /// Refuse classifications that would need Gamma(M) for M beyond this.
        #[arg(long, default_value_t = 64)]
        max_level: u32,
    },
    /// Print the general (Wohlfahrt) level: the lcm of the cusp widths.
    Level { spec: String },
    /// Closed-form lift counts from the classification theorems.
    Counts { spec: String },
    /// Dimension of the space of cusp forms of a given weight.
    Dims {
        spec: String,
        #[arg(long, short = 'k')]
        weight: u32,
    },
    /// Congruence status of the group generated by squares, Gamma(N)^2.
    Squares { n: u32 },
    /// Run a named verification fixture (or `all`).
    Verify { fixture: String },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("psl2_lifts=info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            // Usage-shaped problems exit 2, computational ones exit 1.
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let cache = DiskCache::new(cli)?;
    let provider = MemoProvider::new(&cache);
    match &cli.cmd {
        Cmd::Farey { spec, symbol_file } => {
            let spec = resolve_spec(spec.as_deref(), symbol_file.as_deref())?;
            cmd_farey(&spec, &provider, cli.json)?;
        }
        Cmd::Lifts {
            spec,
            symbol_file,
            max_level,
        } => {
            let spec = resolve_spec(spec.as_deref(), symbol_file.as_deref())?;
            cmd_lifts(&spec, &provider, cli.json, *max_level)?;
        }
        Cmd::Level { spec } => {
            let spec = parse_spec(spec)?;
            let p = prepare_with(&spec, &provider)?;
            if cli.json {
                println!(
                    "{}",
                    json!({"spec": spec.to_string(), "general_level": p.invariants.general_level})
                );
            } else {
                println!("{}", p.invariants.general_level);
            }
        }
        Cmd::Counts { spec } => {
            let spec = parse_spec(spec)?;
            let p = predicted_counts(&spec).map_err(|e| usage(e.to_string()))?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "spec": spec.to_string(),
                        "congruence": p.congruence,
                        "noncongruence": p.noncongruence,
                        "rademacher_s": p.rademacher_s,
                    })
                );
            } else {
                println!("congruence lifts: {}", p.congruence);
                match p.noncongruence {
                    Some(n) => println!("noncongruence lifts: {n}"),
                    None => println!("noncongruence lifts: no closed form"),
                }
                if let Some(s) = p.rademacher_s {
                    println!("generators s: {s}");
                }
            }
        }
        Cmd::Dims { spec, weight } => {
            let spec = parse_spec(spec)?;
            cmd_dims(&spec, *weight, &provider, cli.json)?;
        }
        Cmd::Squares { n } => {
            let status = squares_status(*n, &provider)?;
            if cli.json {
                let (s, w) = match &status {
                    SquaresStatus::Congruence { witness } => ("congruence", Some(witness.clone())),
                    SquaresStatus::Noncongruence => ("noncongruence", None),
                };
                println!("{}", json!({"n": n, "status": s, "witness": w}));
            } else {
                match status {
                    SquaresStatus::Congruence { witness } => {
                        println!("Gamma({n})^2 is congruence: {witness}")
                    }
                    SquaresStatus::Noncongruence => println!("Gamma({n})^2 is noncongruence"),
                }
            }
        }
        Cmd::Verify { fixture } => {
            let results = run_fixture(fixture, &provider).map_err(|e| match e {
                CoreError::Inconsistency(ref m) if m.starts_with("unknown fixture") => {
                    usage(m.clone())
                }
                other => anyhow::Error::new(other),
            })?;
            let mut all_ok = true;
            if cli.json {
                let items: Vec<_> = results
                    .iter()
                    .map(|r| json!({"name": r.name, "passed": r.passed, "detail": r.detail}))
                    .collect();
                all_ok = results.iter().all(|r| r.passed);
                println!("{}", json!({"results": items, "passed": all_ok}));
            } else {
                for r in &results {
                    println!(
                        "{} {}: {}",
                        if r.passed { "PASS" } else { "FAIL" },
                        r.name,
                        r.detail
                    );
                    all_ok &= r.passed;
                }
            }
            if !all_ok {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_spec(s: &str) -> anyhow::Result<GroupSpec> {
    s.parse::<GroupSpec>().map_err(|e| usage(e.to_string()))
}

fn resolve_spec(spec: Option<&str>, symbol_file: Option<&Path>) -> anyhow::Result<GroupSpec> {
    match (spec, symbol_file) {
        (Some(s), None) => parse_spec(s),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(|e| usage(format!("{e:#}")))?;
            let sym = SignedFareySymbol::parse(&text).map_err(|e| usage(e.to_string()))?;
            Ok(GroupSpec::FromFarey(Box::new(sym)))
        }
        _ => Err(usage("provide a group spec or --symbol-file")),
    }
}

fn cmd_farey(spec: &GroupSpec, provider: &dyn SymbolProvider, as_json: bool) -> anyhow::Result<()> {
    let p = prepare_with(spec, provider)?;
    if as_json {
        println!("{}", farey_json(spec, &p));
        return Ok(());
    }
    let inv = &p.invariants;
    println!("group: {spec}");
    println!("symbol: {}", p.symbol);
    println!("contains -1: {}", if inv.contains_minus_one { "yes" } else { "no" });
    println!("index mu: {}", inv.proj_index);
    println!("nu2: {}   nu3: {}   nu_inf: {}", inv.nu2, inv.nu3, inv.nu_inf);
    println!("genus: {}", inv.genus);
    println!("general level: {}", inv.general_level);
    println!("cusp classes:");
    for c in &inv.cusp_classes {
        println!("  {}: width {}", c.representative, c.width);
    }
    let gens = p.reducer.generators();
    println!("generators ({}):", gens.len());
    for (i, g) in gens.gens.iter().enumerate() {
        println!("  g{} = {}  ({})", i + 1, g.mat, provenance_text(&g.provenance));
    }
    Ok(())
}

fn farey_json(spec: &GroupSpec, p: &PreparedGroup) -> serde_json::Value {
    let inv = &p.invariants;
    json!({
        "spec": spec.to_string(),
        "symbol": p.symbol.serialize(),
        "contains_minus_one": inv.contains_minus_one,
        "index": inv.proj_index,
        "nu2": inv.nu2,
        "nu3": inv.nu3,
        "nu_inf": inv.nu_inf,
        "genus": inv.genus,
        "general_level": inv.general_level,
        "cusp_classes": inv.cusp_classes.iter().map(|c| json!({
            "representative": c.representative.to_string(),
            "width": c.width,
        })).collect::<Vec<_>>(),
        "generators": p.reducer.generators().gens.iter().map(|g| g.mat.to_string()).collect::<Vec<_>>(),
    })
}

fn provenance_text(p: &psl2_lifts::farey::Provenance) -> String {
    use psl2_lifts::farey::Provenance;
    match p {
        Provenance::Pair { id, e1, e2 } => format!("pairing {id}, edges {e1}-{e2}"),
        Provenance::Bullet { edge } => format!("bullet, edge {edge}"),
        Provenance::Circle { edge } => format!("circle, edge {edge}"),
    }
}

fn class_text(class: &LiftClass) -> (&'static str, Option<u32>) {
    match class {
        LiftClass::Congruence { level } => ("congruence", Some(*level)),
        LiftClass::Noncongruence => ("noncongruence", None),
        LiftClass::ContainsMinusOne { level } => ("contains-minus-one", *level),
    }
}

fn cmd_lifts(
    spec: &GroupSpec,
    provider: &dyn SymbolProvider,
    as_json: bool,
    max_level: u32,
) -> anyhow::Result<()> {
    let pre = prepare_with(spec, provider)?;
    let n = pre.invariants.general_level;
    if 2 * n > max_level {
        return Err(usage(format!(
            "classification needs Gamma({}) but --max-level is {max_level}",
            2 * n
        )));
    }
    drop(pre);
    let c = classify_lifts(spec, provider)?;
    let summary = format!(
        "{} level-{}, {} level-{}, {} noncongruence",
        c.count_at_level(n),
        n,
        c.count_at_level(2 * n),
        2 * n,
        c.noncongruence_count()
    );
    if as_json {
        println!("{}", lifts_json(spec, &c, &summary));
        return Ok(());
    }
    let reps: Vec<String> = c
        .invariants()
        .cusp_classes
        .iter()
        .map(|cl| cl.representative.to_string())
        .collect();
    println!("group: {spec}   (general level {n}, index {})", c.invariants().proj_index);
    println!(
        "{:<width$}  {:<19}  {:<6}  {}  {:>5}  {:>5}",
        "signs",
        "class",
        "level",
        reps.iter().map(|r| format!("reg({r})")).collect::<Vec<_>>().join("  "),
        "dimS3",
        "dimS5",
        width = c.base.n_generators().max(5),
    );
    for l in &c.lifts {
        let signs = l
            .signs
            .as_ref()
            .map(|x| x.to_string())
            .unwrap_or_else(|| "-".repeat(c.base.n_generators()));
        let (cls, lvl) = class_text(&l.class);
        let lvl = lvl.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
        let regs = l
            .regular
            .iter()
            .zip(&reps)
            .map(|(r, rep)| format!("{:^w$}", if *r { "Y" } else { "n" }, w = rep.len() + 5))
            .collect::<Vec<_>>()
            .join("  ");
        println!(
            "{:<width$}  {:<19}  {:<6}  {}  {:>5}  {:>5}",
            signs,
            cls,
            lvl,
            regs,
            l.dim_s3,
            l.dim_s5,
            width = c.base.n_generators().max(5),
        );
    }
    println!("summary: {summary}");
    Ok(())
}

fn lifts_json(spec: &GroupSpec, c: &Classification, summary: &str) -> serde_json::Value {
    json!({
        "spec": spec.to_string(),
        "general_level": c.general_level,
        "index": c.invariants().proj_index,
        "cusp_classes": c.invariants().cusp_classes.iter().map(|cl| cl.representative.to_string()).collect::<Vec<_>>(),
        "v_span_dim_level": c.sys_level.span_dim(),
        "v_span_dim_double": c.sys_double.span_dim(),
        "lifts": c.lifts.iter().map(|l| {
            let (cls, lvl) = class_text(&l.class);
            json!({
                "signs": l.signs.as_ref().map(|x| x.to_string()),
                "class": cls,
                "level": lvl,
                "regular": l.regular,
                "dim_s3": l.dim_s3,
                "dim_s5": l.dim_s5,
            })
        }).collect::<Vec<_>>(),
        "summary": summary,
    })
}

fn cmd_dims(
    spec: &GroupSpec,
    weight: u32,
    provider: &dyn SymbolProvider,
    as_json: bool,
) -> anyhow::Result<()> {
    let p = prepare_with(spec, provider)?;
    let inv = &p.invariants;
    if weight % 2 == 0 || inv.contains_minus_one {
        let report = modforms::dim_cusp_forms(inv, None, weight).map_err(|e| usage(e.to_string()))?;
        if as_json {
            println!(
                "{}",
                json!({"spec": spec.to_string(), "weight": weight, "dim": report.dim, "note": note_text(report.note)})
            );
        } else {
            println!("dim S_{weight} = {}{}", report.dim, note_suffix(report.note));
        }
        return Ok(());
    }
    // Odd weight without -1: one dimension per lift.
    let c = classify_lifts(spec, provider)?;
    let mut rows = Vec::new();
    for l in c.sign_lifts() {
        let r = modforms::dim_cusp_forms(inv, Some(&l.regular), weight)
            .map_err(|e| usage(e.to_string()))?;
        rows.push((l.signs.clone().unwrap().to_string(), r.dim));
    }
    if as_json {
        println!(
            "{}",
            json!({
                "spec": spec.to_string(),
                "weight": weight,
                "per_lift": rows.iter().map(|(s, d)| json!({"signs": s, "dim": d})).collect::<Vec<_>>(),
            })
        );
    } else {
        println!("dim S_{weight} per lift of {spec}:");
        for (s, d) in rows {
            println!("  {s}: {d}");
        }
    }
    Ok(())
}

fn note_text(note: DimNote) -> &'static str {
    match note {
        DimNote::Formula => "formula",
        DimNote::GenusAtWeightTwo => "weight-2-genus",
        DimNote::OddWeightWithMinusOne => "odd-weight-zero",
    }
}

fn note_suffix(note: DimNote) -> &'static str {
    match note {
        DimNote::Formula => "",
        DimNote::GenusAtWeightTwo => "  (= genus; weight 2 sits outside the k > 2 formulas)",
        DimNote::OddWeightWithMinusOne => "  (odd weight, group contains -1)",
    }
}

/// Disk cache of serialized Farey symbols, keyed by spec and tool version.
/// A hit is re-validated before use; any mismatch falls back to a rebuild.
struct DiskCache {
    dir: Option<PathBuf>,
}

impl DiskCache {
    fn new(cli: &Cli) -> anyhow::Result<Self> {
        if cli.no_cache {
            return Ok(DiskCache { dir: None });
        }
        let dir = cli
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os("PSL2_LIFTS_CACHE_DIR").map(PathBuf::from))
            .or_else(|| {
                std::env::var_os("XDG_CACHE_HOME")
                    .map(|d| PathBuf::from(d).join("psl2-lifts"))
            })
            .or_else(|| {
                std::env::var_os("HOME").map(|d| PathBuf::from(d).join(".cache/psl2-lifts"))
            });
        Ok(DiskCache { dir })
    }

    fn path_for(&self, spec: &GroupSpec) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        let key: String = spec
            .to_string()
            .chars()
            .map(|c| if c.is_alphanumeric() { c } else { '_' })
            .collect();
        Some(dir.join(format!("{key}.symbol")))
    }

    fn load(&self, spec: &GroupSpec, path: &Path) -> Option<SignedFareySymbol> {
        let text = std::fs::read_to_string(path).ok()?;
        let mut lines = text.splitn(5, '\n');
        if lines.next()? != "psl2-lifts-cache v1" {
            return None;
        }
        let spec_line = lines.next()?;
        let version_line = lines.next()?;
        let hash_line = lines.next()?;
        let payload = lines.next()?;
        if spec_line != format!("spec: {spec}")
            || version_line != format!("tool-version: {}", env!("CARGO_PKG_VERSION"))
            || hash_line != format!("sha256: {}", sha256_hex(payload))
        {
            return None;
        }
        let sym = SignedFareySymbol::parse(payload).ok()?;
        if !sym.validate().is_empty() {
            return None;
        }
        log::info!("cache hit for {spec}");
        Some(sym)
    }

    fn store(&self, spec: &GroupSpec, path: &Path, sym: &SignedFareySymbol) {
        let payload = sym.serialize();
        let content = format!(
            "psl2-lifts-cache v1\nspec: {spec}\ntool-version: {}\nsha256: {}\n{payload}",
            env!("CARGO_PKG_VERSION"),
            sha256_hex(&payload),
        );
        if let Some(parent) = path.parent() {
            let _ = std::fs::create_dir_all(parent);
        }
        if let Err(e) = std::fs::write(path, content) {
            log::warn!("could not write cache file {}: {e}", path.display());
        }
    }
}

impl SymbolProvider for DiskCache {
    fn symbol_for(&self, spec: &GroupSpec) -> Result<SignedFareySymbol, CoreError> {
        if !spec.is_standard() {
            return build_symbol(spec);
        }
        let Some(path) = self.path_for(spec) else {
            return build_symbol(spec);
        };
        if let Some(sym) = self.load(spec, &path) {
            return Ok(sym);
        }
        let sym = build_symbol(spec)?;
        self.store(spec, &path, &sym);
        Ok(sym)
    }
}

fn sha256_hex(s: &str) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(s.as_bytes());
    let digest = h.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
