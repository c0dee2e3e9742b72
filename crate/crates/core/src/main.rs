// SPDX-License-Identifier: Apache-2.0
//! `proxyscope` command-line interface.
//!
//! Exit codes follow one contract across subcommands:
//! - `0` — success (for `diff-storage`: layouts compatible; for
//!   `selectors`: no collisions),
//! - `1` — analysis-level failure (file error records, incompatible
//!   layouts, selector collisions),
//! - `2` — usage errors: bad arguments, missing files, missing contracts,
//!   missing ground-truth labels.

use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use proxyscope::clash::{clashes_between_surfaces, ClashKind};
use proxyscope::corpus::{
    self, compare_detectors, expand_inputs, fetch_verified_source, looks_like_address,
    parse_truth_file, read_cached_bundle, run_batch, BatchConfig, BatchReport, ContractRecord,
    CorpusError, FetchConfig, FpFnStats,
};
use proxyscope::layout::{compute_storage_layout, diff_storage_layouts, CompatibilityStatus};
use proxyscope::model::CompilationUnit;

const EXIT_OK: i32 = 0;
const EXIT_FINDINGS: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "proxyscope",
    version,
    about = "Static analyzer for Solidity upgradeable-proxy patterns",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze Solidity files or directories for proxy patterns.
    Analyze(AnalyzeArgs),
    /// Compare two storage layouts for upgrade compatibility.
    DiffStorage(DiffStorageArgs),
    /// Detect function-selector clashes between a proxy and its implementation.
    Selectors(SelectorsArgs),
    /// Fetch, batch-analyze, and score verified-source corpora.
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Solidity files or directories (directories expand recursively).
    #[arg(required = true)]
    paths: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct DiffStorageArgs {
    /// Solidity file holding the currently deployed version.
    old: PathBuf,
    /// Solidity file holding the candidate upgrade.
    new: PathBuf,
    /// Contract to lay out from OLD (defaults to its sole deployable contract).
    #[arg(long)]
    old_contract: Option<String>,
    /// Contract to lay out from NEW (defaults to its sole deployable contract).
    #[arg(long)]
    new_contract: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

#[derive(Args)]
struct SelectorsArgs {
    /// Solidity file holding the proxy contract.
    proxy: PathBuf,
    /// Solidity file holding the implementation contract.
    implementation: PathBuf,
    /// Proxy contract name (defaults to the file's sole deployable contract).
    #[arg(long)]
    proxy_contract: Option<String>,
    /// Implementation contract name (defaults to the file's sole deployable contract).
    #[arg(long)]
    impl_contract: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Download verified source bundles into the cache.
    Fetch(FetchArgs),
    /// Batch-analyze files, directories, or cached addresses.
    Run(RunArgs),
    /// Score an existing batch report against ground-truth labels.
    Compare(CompareArgs),
}

#[derive(Args, Clone)]
struct FetchCommon {
    /// Directory for the fetch cache (one JSON file per address).
    #[arg(long, default_value = "corpus-cache")]
    cache_dir: PathBuf,
    /// Explorer API endpoint (Etherscan-compatible `getsourcecode`).
    #[arg(long, default_value = corpus::DEFAULT_ENDPOINT)]
    endpoint: String,
    /// Politeness delay between requests, in milliseconds.
    #[arg(long, default_value_t = 250)]
    delay_ms: u64,
    /// Retry budget for rate-limit and transport failures.
    #[arg(long, default_value_t = corpus::DEFAULT_MAX_RETRIES)]
    max_retries: u32,
    /// Never touch the network; serve from the cache only.
    #[arg(long)]
    offline: bool,
}

impl FetchCommon {
    fn to_config(&self) -> FetchConfig {
        let mut config = FetchConfig::new(&self.cache_dir);
        config.endpoint = self.endpoint.clone();
        config.delay = Duration::from_millis(self.delay_ms);
        config.max_retries = self.max_retries;
        config.offline = self.offline;
        config
    }
}

#[derive(Args)]
struct FetchArgs {
    /// Addresses to fetch (repeatable).
    #[arg(long = "address", required = true)]
    addresses: Vec<String>,
    #[command(flatten)]
    common: FetchCommon,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

#[derive(Args)]
struct RunArgs {
    /// Files, directories, or 0x… addresses (addresses resolve via the cache).
    #[arg(required = true)]
    inputs: Vec<String>,
    /// Ground-truth CSV: `<path-or-address>,<contract>,<label>` per line.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Score the evidence-based detector against the naive name heuristic
    /// (requires --labels).
    #[arg(long)]
    compare_baseline: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    common: FetchCommon,
}

#[derive(Args)]
struct CompareArgs {
    /// Batch report produced by `corpus run --format json`.
    report: PathBuf,
    /// Ground-truth CSV: `<path-or-address>,<contract>,<label>` per line.
    #[arg(long)]
    labels: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::DiffStorage(args) => cmd_diff_storage(args),
        Command::Selectors(args) => cmd_selectors(args),
        Command::Corpus(CorpusCommand::Fetch(args)) => cmd_corpus_fetch(args),
        Command::Corpus(CorpusCommand::Run(args)) => cmd_corpus_run(args),
        Command::Corpus(CorpusCommand::Compare(args)) => cmd_corpus_compare(args),
    };
    std::process::exit(code);
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

fn cmd_analyze(args: AnalyzeArgs) -> i32 {
    for path in &args.paths {
        if looks_like_address(path) {
            eprintln!("error: `{path}` is an address; use `proxyscope corpus run` for addresses");
            return EXIT_USAGE;
        }
    }
    let inputs = match expand_inputs(&args.paths) {
        Ok(inputs) => inputs,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let report = run_batch(&inputs, &BatchConfig { jobs: args.jobs, fetch: None });
    print_report(&report, args.format);
    if report.totals.errors > 0 {
        EXIT_FINDINGS
    } else {
        EXIT_OK
    }
}

// ---------------------------------------------------------------------------
// diff-storage
// ---------------------------------------------------------------------------

fn cmd_diff_storage(args: DiffStorageArgs) -> i32 {
    let (old_unit, old_diags) = match load_unit(&args.old) {
        Ok(loaded) => loaded,
        Err(code) => return code,
    };
    let (new_unit, new_diags) = match load_unit(&args.new) {
        Ok(loaded) => loaded,
        Err(code) => return code,
    };
    let old_name = match pick_contract(&old_unit, &args.old, args.old_contract.as_deref()) {
        Ok(name) => name,
        Err(code) => return code,
    };
    let new_name = match pick_contract(&new_unit, &args.new, args.new_contract.as_deref()) {
        Ok(name) => name,
        Err(code) => return code,
    };

    let old_layout = compute_storage_layout(old_unit.get(&old_name).unwrap(), &old_unit);
    let new_layout = compute_storage_layout(new_unit.get(&new_name).unwrap(), &new_unit);
    let report = diff_storage_layouts(&old_layout.entries, &new_layout.entries);

    match args.format {
        ReportFormat::Json => {
            let doc = serde_json::json!({
                "old_contract": old_name,
                "new_contract": new_name,
                "old_layout": old_layout,
                "new_layout": new_layout,
                "report": report,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("doc serializes"));
        }
        ReportFormat::Text => {
            for d in old_diags.iter().chain(&new_diags) {
                eprintln!("note: {d}");
            }
            println!("old: {} ({} entries)", old_name, old_layout.entries.len());
            for e in &old_layout.entries {
                println!(
                    "  slot {:>3} offset {:>2} size {:>2}  {:<24} {} [{}]",
                    e.slot, e.offset, e.size, e.var_name, e.type_label, e.declaring_contract
                );
            }
            println!("new: {} ({} entries)", new_name, new_layout.entries.len());
            for e in &new_layout.entries {
                println!(
                    "  slot {:>3} offset {:>2} size {:>2}  {:<24} {} [{}]",
                    e.slot, e.offset, e.size, e.var_name, e.type_label, e.declaring_contract
                );
            }
            println!("status: {}", report.status);
            for v in &report.violations {
                let old = v.old_entry.as_ref().map(|e| e.var_name.as_str()).unwrap_or("-");
                let new = v.new_entry.as_ref().map(|e| e.var_name.as_str()).unwrap_or("-");
                println!("  violation: {}  old={}  new={}", v.kind, old, new);
            }
            for w in &report.warnings {
                println!("  warning: {w}");
            }
        }
    }

    match report.status {
        CompatibilityStatus::Incompatible => EXIT_FINDINGS,
        _ => EXIT_OK,
    }
}

// ---------------------------------------------------------------------------
// selectors
// ---------------------------------------------------------------------------

fn cmd_selectors(args: SelectorsArgs) -> i32 {
    let (proxy_unit, _) = match load_unit(&args.proxy) {
        Ok(loaded) => loaded,
        Err(code) => return code,
    };
    let proxy_name =
        match pick_contract(&proxy_unit, &args.proxy, args.proxy_contract.as_deref()) {
            Ok(name) => name,
            Err(code) => return code,
        };
    let (impl_unit, _) = match load_unit(&args.implementation) {
        Ok(loaded) => loaded,
        Err(code) => return code,
    };
    let impl_name =
        match pick_contract(&impl_unit, &args.implementation, args.impl_contract.as_deref()) {
            Ok(name) => name,
            Err(code) => return code,
        };

    let proxy = proxy_unit.get(&proxy_name).unwrap();
    let implementation = impl_unit.get(&impl_name).unwrap();
    let proxy_surface = proxyscope::clash::external_selectors(proxy, &proxy_unit);
    let impl_surface = proxyscope::clash::external_selectors(implementation, &impl_unit);
    let clashes = clashes_between_surfaces(&proxy_surface, &impl_surface);

    match args.format {
        ReportFormat::Json => {
            let doc = serde_json::json!({
                "proxy": proxy_name,
                "implementation": impl_name,
                "proxy_surface": proxy_surface,
                "implementation_surface": impl_surface,
                "clashes": clashes,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("doc serializes"));
        }
        ReportFormat::Text => {
            println!(
                "proxy {} exposes {} selectors; implementation {} exposes {}",
                proxy_name,
                proxy_surface.len(),
                impl_name,
                impl_surface.len()
            );
            if clashes.is_empty() {
                println!("no selector clashes");
            }
            for c in &clashes {
                println!(
                    "  {} {}  proxy: {}  implementation: {}",
                    c.kind, c.selector, c.proxy_signature, c.impl_signature
                );
            }
        }
    }

    if clashes.iter().any(|c| c.kind == ClashKind::Collision) {
        EXIT_FINDINGS
    } else {
        EXIT_OK
    }
}

// ---------------------------------------------------------------------------
// corpus fetch / run / compare
// ---------------------------------------------------------------------------

fn cmd_corpus_fetch(args: FetchArgs) -> i32 {
    let config = args.common.to_config();
    let mut results = Vec::new();
    for address in &args.addresses {
        let cached = corpus::normalize_address(address)
            .ok()
            .and_then(|a| read_cached_bundle(&config.cache_dir, &a))
            .is_some();
        match fetch_verified_source(address, &config) {
            Ok(bundle) => results.push(serde_json::json!({
                "address": bundle.address,
                "status": "ok",
                "contract_name": bundle.contract_name,
                "compiler_version": bundle.compiler_version,
                "files": bundle.files.len(),
                "from_cache": cached,
            })),
            Err(e) => {
                let status = match &e {
                    CorpusError::NotVerified { .. } => "not_verified",
                    CorpusError::RateLimited { .. } => "rate_limited",
                    _ => "error",
                };
                results.push(serde_json::json!({
                    "address": address,
                    "status": status,
                    "detail": e.to_string(),
                }));
            }
        }
    }

    match args.format {
        ReportFormat::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({ "fetched": results }))
                    .expect("doc serializes")
            );
        }
        ReportFormat::Text => {
            for r in &results {
                let address = r["address"].as_str().unwrap_or("?");
                match r["status"].as_str().unwrap_or("error") {
                    "ok" => println!(
                        "{address}  OK  contract={} files={}{}",
                        r["contract_name"].as_str().unwrap_or("?"),
                        r["files"],
                        if r["from_cache"].as_bool().unwrap_or(false) { "  (cache)" } else { "" }
                    ),
                    status => println!(
                        "{address}  {}  {}",
                        status.to_uppercase(),
                        r["detail"].as_str().unwrap_or("")
                    ),
                }
            }
        }
    }
    // Per-address failures are recorded, not fatal: batches continue.
    EXIT_OK
}

fn cmd_corpus_run(args: RunArgs) -> i32 {
    if args.compare_baseline && args.labels.is_none() {
        eprintln!("error: --compare-baseline needs --labels");
        return EXIT_USAGE;
    }
    let inputs = match expand_inputs(&args.inputs) {
        Ok(inputs) => inputs,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let has_addresses = inputs.iter().any(|i| looks_like_address(i));
    let config = BatchConfig {
        jobs: if has_addresses { 1 } else { args.jobs },
        fetch: Some(args.common.to_config()),
    };
    let mut report = run_batch(&inputs, &config);

    if let Some(labels_path) = &args.labels {
        let truth_text = match std::fs::read_to_string(labels_path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: reading {}: {e}", labels_path.display());
                return EXIT_USAGE;
            }
        };
        let truth = match parse_truth_file(&truth_text) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        };
        match compare_detectors(&report, &truth) {
            Ok(stats) => report.stats = Some(stats),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        }
    }

    print_report(&report, args.format);
    // Error records are data, not process failure: scoring and report
    // inspection continue downstream, so the batch exits 0.
    EXIT_OK
}

fn cmd_corpus_compare(args: CompareArgs) -> i32 {
    let report_text = match std::fs::read_to_string(&args.report) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: reading {}: {e}", args.report.display());
            return EXIT_USAGE;
        }
    };
    let report = match BatchReport::from_json(&report_text) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {} is not a batch report: {e}", args.report.display());
            return EXIT_USAGE;
        }
    };
    let truth_text = match std::fs::read_to_string(&args.labels) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: reading {}: {e}", args.labels.display());
            return EXIT_USAGE;
        }
    };
    let truth = match parse_truth_file(&truth_text) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let stats = match compare_detectors(&report, &truth) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match args.format {
        ReportFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&stats).expect("stats serialize"));
        }
        ReportFormat::Text => print!("{}", render_stats(&stats)),
    }
    EXIT_OK
}

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

/// Load one file (plus imports) into a unit, mapping failures to exit 2:
/// a path the user named must exist and parse.
fn load_unit(path: &Path) -> Result<(CompilationUnit, Vec<String>), i32> {
    let key = path.display().to_string();
    corpus::load_compilation_unit(path, &key).map_err(|e| {
        eprintln!("error: {key}: {e}");
        EXIT_USAGE
    })
}

/// Resolve an explicit contract name, or default to the sole deployable
/// contract defined in `path`. Ambiguity and absence are usage errors.
fn pick_contract(
    unit: &CompilationUnit,
    path: &Path,
    explicit: Option<&str>,
) -> Result<String, i32> {
    let key = path.display().to_string();
    if let Some(name) = explicit {
        if unit.get(name).is_none() {
            eprintln!("error: contract `{name}` not found in {key}");
            return Err(EXIT_USAGE);
        }
        return Ok(name.to_string());
    }
    let defined: Vec<&str> = unit
        .contracts
        .iter()
        .filter(|c| c.file.as_str() == key && c.def.kind.is_deployable())
        .map(|c| c.def.name.as_str())
        .collect();
    match defined.as_slice() {
        [only] => Ok((*only).to_string()),
        [] => {
            eprintln!("error: no deployable contract defined in {key}");
            Err(EXIT_USAGE)
        }
        many => {
            eprintln!(
                "error: {key} defines {} contracts ({}); pick one with --old-contract/--new-contract/--proxy-contract/--impl-contract",
                many.len(),
                many.join(", ")
            );
            Err(EXIT_USAGE)
        }
    }
}

fn print_report(report: &BatchReport, format: ReportFormat) {
    match format {
        ReportFormat::Json => print!("{}", report.to_json()),
        ReportFormat::Text => print!("{}", render_report_text(report)),
    }
}

fn render_report_text(report: &BatchReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let t = &report.totals;
    let _ = writeln!(
        out,
        "{} {} — {} inputs, {} contracts, {} errors | proxies: {}  upgradeable: {}  name-heuristic flags: {}",
        report.tool, report.tool_version, t.inputs, t.contracts, t.errors, t.proxies,
        t.upgradeable, t.baseline_flagged
    );
    for r in &report.records {
        let _ = writeln!(out, "{}", render_record(r));
    }
    if !report.diagnostics.is_empty() {
        let _ = writeln!(out, "diagnostics:");
        for d in &report.diagnostics {
            let _ = writeln!(out, "  {d}");
        }
    }
    if let Some(stats) = &report.stats {
        out.push_str(&render_stats(stats));
    }
    out
}

fn render_record(r: &ContractRecord) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    if let Some(err) = &r.error {
        let _ = write!(out, "{} :: ERROR\n  {err}", r.key);
        return out;
    }
    let _ = writeln!(out, "{} :: {}", r.key, r.contract);
    if r.is_proxy {
        let mut target = r
            .delegates_to
            .as_deref()
            .map(|t| format!("target={t}"))
            .unwrap_or_else(|| "target=?".to_string());
        if let Some(decl) = &r.target_declared_in {
            target.push_str(&format!(" (declared in {decl})"));
        }
        if let Some(slot) = &r.slot {
            target.push_str(&format!(" slot={slot}"));
        }
        if r.via_storage_load {
            target.push_str(" via-storage-load");
        }
        let _ = writeln!(out, "  proxy: yes  mechanism={}  {target}", r.mechanism);
    } else {
        let _ = writeln!(out, "  proxy: no");
    }
    let mut verdict = format!(
        "  upgradeable: {}  reason={}",
        if r.upgradeable { "yes" } else { "no" },
        r.reason
    );
    if let Some(setter) = &r.impl_setter {
        verdict.push_str(&format!("  setter={setter}"));
        if r.setter_guarded_by_admin {
            verdict.push_str(" (admin-guarded)");
        }
    }
    if let Some(getter) = &r.impl_getter {
        verdict.push_str(&format!("  getter={getter}"));
    }
    let _ = writeln!(out, "{verdict}");
    if let Some(w) = &r.warning {
        let _ = writeln!(out, "  warning: {w}");
    }
    if !r.labels.is_empty() {
        let rendered: Vec<String> = r
            .labels
            .iter()
            .map(|l| {
                if r.heuristic_labels.contains(l) {
                    format!("{l} (heuristic)")
                } else {
                    l.clone()
                }
            })
            .collect();
        let _ = writeln!(out, "  labels: {}", rendered.join(", "));
    }
    for d in &r.diagnostics {
        let _ = writeln!(out, "  note: {d}");
    }
    out.trim_end().to_string()
}

fn render_stats(stats: &FpFnStats) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "baseline comparison over {} labeled records:", stats.total_records);
    let _ = writeln!(
        out,
        "  flagged          baseline={}  detector={}",
        stats.baseline_flagged, stats.improved_flagged
    );
    let _ = writeln!(
        out,
        "  false positives  baseline={}  detector={}",
        stats.baseline_fp, stats.improved_fp
    );
    let _ = writeln!(
        out,
        "  eliminated-fp-ratio: {:.3}{}",
        stats.eliminated_fp_ratio,
        if stats.degenerate_denominator { "  (baseline_fp=0: ratio is 1.0 by convention)" } else { "" }
    );
    let _ = writeln!(
        out,
        "  missed proxies: {}  missed upgradeable: {}  spurious upgradeable: {}",
        stats.missed_tp, stats.missed_upgradeable, stats.spurious_upgradeable
    );
    let _ = writeln!(out, "  note: {}", stats.note);
    out
}
