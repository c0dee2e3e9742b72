// SPDX-License-Identifier: Apache-2.0
//! Verified-source ingestion and batch analysis.
//!
//! Three jobs live here:
//!
//! 1. **Fetching** verified source bundles from a block-explorer
//!    `getsourcecode` endpoint, behind an on-disk cache so repeated runs
//!    never re-download (and work with networking disabled entirely).
//! 2. **Batch analysis**: expanding files/directories/addresses into
//!    compilation units, running the full detection pipeline on each, and
//!    producing a deterministic, byte-stable [`BatchReport`].
//! 3. **Baseline comparison**: scoring the evidence-based detector against
//!    the naive name-plus-delegatecall heuristic over a labeled corpus,
//!    yielding [`FpFnStats`].

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::ast::{ExprKind, SourceUnit, StmtKind};
use crate::diag::FileId;
use crate::model::{resolve_compilation_unit, CompilationUnit, ResolvedContract};
use crate::parser::parse_source;
use crate::patterns::classify_pattern;
use crate::proxy::{is_proxy, Mechanism, ProxyFinding};
use crate::upgradeability::{is_upgradeable_proxy, FunctionRef, UpgradeabilityVerdict};

/// Version stamp for the on-disk cache entry format.
pub const CACHE_SCHEMA_VERSION: u32 = 1;
/// Version stamp for the batch report format.
pub const REPORT_SCHEMA_VERSION: u32 = 1;
/// Default explorer endpoint (Etherscan-compatible `getsourcecode` API).
pub const DEFAULT_ENDPOINT: &str = "https://api.etherscan.io/api";
/// Environment variable consulted for the explorer API key.
pub const API_KEY_ENV: &str = "ETHERSCAN_API_KEY";
/// Default politeness delay between sequential explorer requests.
pub const DEFAULT_FETCH_DELAY: Duration = Duration::from_millis(250);
/// Default retry budget for rate-limit and transport failures.
pub const DEFAULT_MAX_RETRIES: u32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("contract {address} has no verified source")]
    NotVerified { address: String },
    #[error("rate limited by explorer{}", retry_after_hint(.retry_after))]
    RateLimited { retry_after: Option<u64> },
    #[error("transport error talking to explorer: {0}")]
    Transport(String),
    #[error("explorer response malformed: {0}")]
    Malformed(String),
    #[error("invalid address `{0}`: expected 0x followed by 40 hex digits")]
    BadAddress(String),
    #[error("no ground-truth label for record `{key}` contract `{contract}`")]
    MissingLabel { key: String, contract: String },
    #[error("truth file line {line}: {msg}")]
    BadTruthLine { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn retry_after_hint(retry_after: &Option<u64>) -> String {
    match retry_after {
        Some(secs) => format!(" (retry after {secs}s)"),
        None => String::new(),
    }
}

// ---------------------------------------------------------------------------
// Source bundles and the fetch cache
// ---------------------------------------------------------------------------

/// Verified source for one deployed contract, as returned by the explorer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceBundle {
    /// Checksummed-insensitive address, normalized to lowercase `0x…`.
    pub address: String,
    /// Name of the deployed contract within the bundle.
    pub contract_name: String,
    /// Compiler version string as reported (e.g. `v0.8.21+commit.d9974bed`).
    pub compiler_version: String,
    /// `(virtual path, content)` pairs; multi-file verifications are
    /// unpacked, single-file verifications become one entry.
    pub files: Vec<(String, String)>,
    /// Unix seconds when the bundle was fetched from the network.
    pub fetched_at: u64,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    schema_version: u32,
    bundle: SourceBundle,
}

/// Knobs for [`fetch_verified_source`].
#[derive(Clone, Debug)]
pub struct FetchConfig {
    pub endpoint: String,
    pub api_key: Option<String>,
    pub cache_dir: PathBuf,
    /// Politeness delay before each network request.
    pub delay: Duration,
    /// Extra attempts after the first for rate-limit/transport failures.
    pub max_retries: u32,
    /// When set, never touch the network: a cache miss is an error. Used to
    /// prove cache transparency and to run offline.
    pub offline: bool,
}

impl FetchConfig {
    pub fn new(cache_dir: impl Into<PathBuf>) -> Self {
        FetchConfig {
            endpoint: DEFAULT_ENDPOINT.to_string(),
            api_key: std::env::var(API_KEY_ENV).ok(),
            cache_dir: cache_dir.into(),
            delay: DEFAULT_FETCH_DELAY,
            max_retries: DEFAULT_MAX_RETRIES,
            offline: false,
        }
    }
}

/// Lowercase and validate a `0x…` address.
pub fn normalize_address(raw: &str) -> Result<String, CorpusError> {
    let lower = raw.trim().to_ascii_lowercase();
    let hex_part = lower.strip_prefix("0x").unwrap_or("");
    if hex_part.len() == 40 && hex_part.bytes().all(|b| b.is_ascii_hexdigit()) {
        Ok(lower)
    } else {
        Err(CorpusError::BadAddress(raw.to_string()))
    }
}

/// True when a CLI argument looks like an address rather than a path.
pub fn looks_like_address(arg: &str) -> bool {
    normalize_address(arg).is_ok()
}

fn cache_path(cache_dir: &Path, address: &str) -> PathBuf {
    cache_dir.join(format!("{address}.json"))
}

/// Read a cached bundle. Entries with a different schema version or that
/// fail to parse are treated as misses so a refetch can repair them.
pub fn read_cached_bundle(cache_dir: &Path, address: &str) -> Option<SourceBundle> {
    let text = std::fs::read_to_string(cache_path(cache_dir, address)).ok()?;
    let entry: CacheEntry = serde_json::from_str(&text).ok()?;
    (entry.schema_version == CACHE_SCHEMA_VERSION).then_some(entry.bundle)
}

/// Write a bundle to the cache atomically (temp file + rename), so a
/// crashed run never leaves a truncated entry behind.
pub fn write_cached_bundle(cache_dir: &Path, bundle: &SourceBundle) -> Result<(), CorpusError> {
    std::fs::create_dir_all(cache_dir)?;
    let entry = CacheEntry { schema_version: CACHE_SCHEMA_VERSION, bundle: bundle.clone() };
    let body = serde_json::to_string_pretty(&entry).expect("bundle serializes");
    let target = cache_path(cache_dir, &bundle.address);
    let tmp = target.with_extension(format!("tmp.{}", std::process::id()));
    std::fs::write(&tmp, body)?;
    std::fs::rename(&tmp, &target)?;
    Ok(())
}

/// Fetch the verified source bundle for `address`, consulting the cache
/// first. A cache hit never touches the network.
pub fn fetch_verified_source(
    address: &str,
    config: &FetchConfig,
) -> Result<SourceBundle, CorpusError> {
    let address = normalize_address(address)?;
    if let Some(bundle) = read_cached_bundle(&config.cache_dir, &address) {
        return Ok(bundle);
    }
    if config.offline {
        return Err(CorpusError::Transport(format!(
            "network disabled and {address} is not cached"
        )));
    }
    let body = http_get_with_retry(&address, config)?;
    let bundle = parse_getsourcecode_envelope(&body, &address, unix_now())?;
    write_cached_bundle(&config.cache_dir, &bundle)?;
    Ok(bundle)
}

fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn request_url(address: &str, config: &FetchConfig) -> String {
    let mut url = format!(
        "{}?module=contract&action=getsourcecode&address={}",
        config.endpoint.trim_end_matches('/'),
        address
    );
    if let Some(key) = &config.api_key {
        url.push_str("&apikey=");
        url.push_str(key);
    }
    url
}

/// GET with a politeness delay, honoring `Retry-After` on 429 and retrying
/// transient failures (429 and 5xx and transport errors) up to
/// `max_retries` extra attempts with doubling backoff.
fn http_get_with_retry(address: &str, config: &FetchConfig) -> Result<String, CorpusError> {
    let url = request_url(address, config);
    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(30))
        .build()
        .map_err(|e| CorpusError::Transport(e.to_string()))?;

    let mut last_err = CorpusError::Transport("no attempt made".to_string());
    for attempt in 0..=config.max_retries {
        // Backoff: the base delay before every request, doubled per retry.
        let backoff = config.delay.saturating_mul(1u32 << attempt.min(16));
        let wait = match &last_err {
            CorpusError::RateLimited { retry_after: Some(secs) } => {
                backoff.max(Duration::from_secs(*secs))
            }
            _ => backoff,
        };
        if !wait.is_zero() {
            std::thread::sleep(wait);
        }

        match client.get(&url).send() {
            Ok(resp) => {
                let status = resp.status();
                if status.as_u16() == 429 {
                    let retry_after = resp
                        .headers()
                        .get(reqwest::header::RETRY_AFTER)
                        .and_then(|v| v.to_str().ok())
                        .and_then(|v| v.trim().parse::<u64>().ok());
                    last_err = CorpusError::RateLimited { retry_after };
                    continue;
                }
                if status.is_server_error() {
                    last_err =
                        CorpusError::Transport(format!("explorer returned HTTP {status}"));
                    continue;
                }
                if !status.is_success() {
                    return Err(CorpusError::Transport(format!(
                        "explorer returned HTTP {status}"
                    )));
                }
                return resp.text().map_err(|e| CorpusError::Transport(e.to_string()));
            }
            Err(e) => {
                last_err = CorpusError::Transport(e.to_string());
                continue;
            }
        }
    }
    Err(last_err)
}

/// Parse the explorer's `getsourcecode` JSON envelope into a bundle.
///
/// Handles the three source-code payload shapes seen in the wild:
/// a plain Solidity string, a JSON object mapping path → `{content}`, and
/// a double-braced `{{standard-json}}` blob whose `sources` map holds the
/// files.
pub fn parse_getsourcecode_envelope(
    body: &str,
    address: &str,
    fetched_at: u64,
) -> Result<SourceBundle, CorpusError> {
    let v: serde_json::Value = serde_json::from_str(body)
        .map_err(|e| CorpusError::Malformed(format!("not JSON: {e}")))?;

    let status = v.get("status").and_then(|s| s.as_str()).unwrap_or("");
    if status != "1" {
        // Errors ride in `result` as a string.
        let detail = v
            .get("result")
            .and_then(|r| r.as_str())
            .or_else(|| v.get("message").and_then(|m| m.as_str()))
            .unwrap_or("unknown explorer error");
        let lower = detail.to_ascii_lowercase();
        if lower.contains("rate limit") {
            return Err(CorpusError::RateLimited { retry_after: None });
        }
        if lower.contains("not verified") {
            return Err(CorpusError::NotVerified { address: address.to_string() });
        }
        return Err(CorpusError::Malformed(detail.to_string()));
    }

    let result = v
        .get("result")
        .and_then(|r| r.as_array())
        .and_then(|a| a.first())
        .ok_or_else(|| CorpusError::Malformed("missing result[0]".to_string()))?;

    let source_code = result.get("SourceCode").and_then(|s| s.as_str()).unwrap_or("");
    if source_code.trim().is_empty() {
        return Err(CorpusError::NotVerified { address: address.to_string() });
    }
    let contract_name = result
        .get("ContractName")
        .and_then(|s| s.as_str())
        .unwrap_or("Contract")
        .to_string();
    let compiler_version = result
        .get("CompilerVersion")
        .and_then(|s| s.as_str())
        .unwrap_or("")
        .to_string();

    let files = unpack_source_code(source_code, &contract_name)?;
    Ok(SourceBundle {
        address: address.to_string(),
        contract_name,
        compiler_version,
        files,
        fetched_at,
    })
}

fn unpack_source_code(
    raw: &str,
    contract_name: &str,
) -> Result<Vec<(String, String)>, CorpusError> {
    let trimmed = raw.trim();

    // Standard-JSON verifications are wrapped in doubled braces: `{{ … }}`.
    if trimmed.starts_with("{{") && trimmed.ends_with("}}") && trimmed.len() >= 4 {
        let inner = &trimmed[1..trimmed.len() - 1];
        let v: serde_json::Value = serde_json::from_str(inner)
            .map_err(|e| CorpusError::Malformed(format!("double-braced payload: {e}")))?;
        return sources_from_value(&v)
            .ok_or_else(|| CorpusError::Malformed("double-braced payload has no sources".into()));
    }

    // Some verifications are a bare JSON map of path → {content}.
    if trimmed.starts_with('{') {
        if let Ok(v) = serde_json::from_str::<serde_json::Value>(trimmed) {
            if let Some(files) = sources_from_value(&v) {
                return Ok(files);
            }
        }
    }

    // Otherwise it is a single flattened Solidity file.
    Ok(vec![(format!("{contract_name}.sol"), raw.to_string())])
}

/// Extract `path → content` pairs from either a standard-JSON object (via
/// its `sources` key) or a direct path map. Order is the JSON map order,
/// which `serde_json` keeps sorted — deterministic across runs.
fn sources_from_value(v: &serde_json::Value) -> Option<Vec<(String, String)>> {
    let map = match v.get("sources").and_then(|s| s.as_object()) {
        Some(m) => m,
        None => v.as_object()?,
    };
    let mut files = Vec::new();
    for (path, entry) in map {
        let content = entry.get("content")?.as_str()?;
        files.push((path.clone(), content.to_string()));
    }
    (!files.is_empty()).then_some(files)
}

// ---------------------------------------------------------------------------
// Batch analysis
// ---------------------------------------------------------------------------

/// One analyzed contract (or one failed input) in a batch report.
///
/// Fields are flat strings/bools so reports round-trip through JSON without
/// dragging the whole AST along.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractRecord {
    /// Path of the defining file, or the deployed address for fetched
    /// bundles. The first half of the report's sort key.
    pub key: String,
    /// Contract name; empty for file-level error records.
    pub contract: String,
    /// Set when the input failed to parse or the named contract was
    /// missing; all analysis fields below are defaults in that case.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub is_proxy: bool,
    /// Delegation mechanism: `expression`, `asm_string`, `asm_yul`, `none`.
    pub mechanism: String,
    /// Variable the delegation target resolves to, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delegates_to: Option<String>,
    /// Contract declaring that variable, when it is a state variable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_declared_in: Option<String>,
    /// Storage slot the target is loaded from, when hardcoded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slot: Option<String>,
    pub via_storage_load: bool,
    pub unresolved_target: bool,
    pub upgradeable: bool,
    /// Decision-tree reason code (wire name).
    pub reason: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub impl_setter: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub impl_getter: Option<String>,
    pub setter_guarded_by_admin: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    /// Pattern labels (wire names), sorted.
    pub labels: Vec<String>,
    /// Subset of `labels` that rests on heuristic rather than structural
    /// evidence (inherited/eternal storage).
    pub heuristic_labels: Vec<String>,
    /// Verdict of the naive name-or-fallback-delegatecall baseline.
    pub baseline_flagged: bool,
    /// Diagnostics attributed to this contract.
    pub diagnostics: Vec<String>,
}

impl ContractRecord {
    fn error_record(key: String, error: String) -> Self {
        ContractRecord {
            key,
            contract: String::new(),
            error: Some(error),
            is_proxy: false,
            mechanism: "none".to_string(),
            delegates_to: None,
            target_declared_in: None,
            slot: None,
            via_storage_load: false,
            unresolved_target: false,
            upgradeable: false,
            reason: String::new(),
            impl_setter: None,
            impl_getter: None,
            setter_guarded_by_admin: false,
            warning: None,
            labels: Vec::new(),
            heuristic_labels: Vec::new(),
            baseline_flagged: false,
            diagnostics: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchTotals {
    /// Inputs processed (files plus addresses).
    pub inputs: usize,
    /// Contracts analyzed (error records excluded).
    pub contracts: usize,
    pub errors: usize,
    pub proxies: usize,
    pub upgradeable: usize,
    pub baseline_flagged: usize,
}

/// Deterministic batch output: records sorted by `(key, contract)`, no
/// timestamps, stable JSON rendering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub records: Vec<ContractRecord>,
    pub totals: BatchTotals,
    /// Diagnostics not attributable to a single contract, sorted.
    pub diagnostics: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<FpFnStats>,
}

impl BatchReport {
    /// Render as pretty JSON with a trailing newline. Byte-stable for a
    /// given input corpus.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Knobs for [`run_batch`].
#[derive(Clone, Debug)]
#[derive(Default)]
pub struct BatchConfig {
    /// Worker threads; 0 means rayon's default (one per core).
    pub jobs: usize,
    /// Fetch settings for address inputs; `None` forbids address inputs.
    pub fetch: Option<FetchConfig>,
}


/// Expand CLI inputs: directories become their contained `.sol` files
/// (recursive, sorted); files and addresses pass through. Duplicates are
/// dropped, first occurrence wins.
pub fn expand_inputs(inputs: &[String]) -> Result<Vec<String>, CorpusError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for input in inputs {
        if looks_like_address(input) {
            let addr = normalize_address(input)?;
            if seen.insert(addr.clone()) {
                out.push(addr);
            }
            continue;
        }
        let path = Path::new(input);
        let meta = std::fs::metadata(path)?;
        if meta.is_dir() {
            let mut found = Vec::new();
            for entry in walkdir::WalkDir::new(path).follow_links(false) {
                let entry = entry.map_err(std::io::Error::other)?;
                if entry.file_type().is_file()
                    && entry.path().extension().is_some_and(|e| e == "sol")
                {
                    found.push(entry.path().display().to_string());
                }
            }
            found.sort();
            for f in found {
                if seen.insert(f.clone()) {
                    out.push(f);
                }
            }
        } else {
            if seen.insert(input.clone()) {
                out.push(input.clone());
            }
        }
    }
    Ok(out)
}

/// Analyze every input and assemble the report. Per-input failures become
/// error records; the batch never aborts.
pub fn run_batch(inputs: &[String], config: &BatchConfig) -> BatchReport {
    let analyze_one = |input: &String| -> (Vec<ContractRecord>, Vec<String>) {
        if looks_like_address(input) {
            analyze_address(input, config)
        } else {
            analyze_file(Path::new(input), input)
        }
    };

    let results: Vec<(Vec<ContractRecord>, Vec<String>)> = if config.jobs == 1 {
        inputs.iter().map(analyze_one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            use rayon::prelude::*;
            inputs.par_iter().map(analyze_one).collect()
        })
    };

    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    for (recs, diags) in results {
        records.extend(recs);
        diagnostics.extend(diags);
    }
    records.sort_by(|a, b| (a.key.as_str(), a.contract.as_str()).cmp(&(b.key.as_str(), b.contract.as_str())));
    records.dedup();
    diagnostics.sort();
    diagnostics.dedup();

    let totals = BatchTotals {
        inputs: inputs.len(),
        contracts: records.iter().filter(|r| r.error.is_none()).count(),
        errors: records.iter().filter(|r| r.error.is_some()).count(),
        proxies: records.iter().filter(|r| r.is_proxy).count(),
        upgradeable: records.iter().filter(|r| r.upgradeable).count(),
        baseline_flagged: records.iter().filter(|r| r.baseline_flagged).count(),
    };

    BatchReport {
        schema_version: REPORT_SCHEMA_VERSION,
        tool: "proxyscope".to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        records,
        totals,
        diagnostics,
        stats: None,
    }
}

/// Parse `path` plus its resolvable import closure and resolve the result
/// into one compilation unit. The root file gets `key` as its `FileId`, so
/// contracts defined there satisfy `contract.file.as_str() == key`; import
/// problems come back as rendered diagnostics, only a root-level read or
/// parse failure is an error.
pub fn load_compilation_unit(
    path: &Path,
    key: &str,
) -> Result<(CompilationUnit, Vec<String>), String> {
    let source = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let root = parse_source(FileId::new(key), &source).map_err(|e| e.to_string())?;

    let mut units = vec![root];
    let mut diags = Vec::new();
    collect_import_closure(path, &mut units, &mut diags);
    Ok((resolve_compilation_unit(&units), diags))
}

/// Analyze one `.sol` file: parse it plus its resolvable import closure,
/// and record every deployable contract *defined in that file*. Imported
/// files only provide resolution context here — when they are part of the
/// batch they produce their own records under their own key.
fn analyze_file(path: &Path, key: &str) -> (Vec<ContractRecord>, Vec<String>) {
    let (unit, extra_diags) = match load_compilation_unit(path, key) {
        Ok(loaded) => loaded,
        Err(e) => return (vec![ContractRecord::error_record(key.to_string(), e)], vec![]),
    };
    let (records, mut diags) = records_for_unit(&unit, key, |c| c.file.as_str() == key);
    diags.extend(extra_diags);
    (records, diags)
}

/// Parse the transitive import closure of `root_path` into `units`.
/// Imports that cannot be read or parsed become diagnostics, never errors:
/// the root file still gets analyzed with whatever context resolved.
fn collect_import_closure(
    root_path: &Path,
    units: &mut Vec<SourceUnit>,
    diags: &mut Vec<String>,
) {
    let mut visited: BTreeSet<PathBuf> = BTreeSet::new();
    if let Ok(canon) = root_path.canonicalize() {
        visited.insert(canon);
    }
    let mut frontier: Vec<(PathBuf, Vec<crate::ast::ImportDirective>)> = vec![(
        root_path.parent().unwrap_or(Path::new(".")).to_path_buf(),
        units[0].imports.clone(),
    )];

    let mut depth = 0;
    while let Some((base_dir, imports)) = frontier.pop() {
        depth += 1;
        if depth > 256 {
            diags.push("import closure truncated at 256 files".to_string());
            break;
        }
        for import in imports {
            let target = base_dir.join(&import.path);
            let canon = match target.canonicalize() {
                Ok(c) => c,
                Err(_) => {
                    diags.push(format!(
                        "import `{}` not found relative to {}",
                        import.path,
                        base_dir.display()
                    ));
                    continue;
                }
            };
            if !visited.insert(canon.clone()) {
                continue;
            }
            let source = match std::fs::read_to_string(&canon) {
                Ok(s) => s,
                Err(e) => {
                    diags.push(format!("import `{}`: {e}", import.path));
                    continue;
                }
            };
            match parse_source(FileId::new(canon.display().to_string()), &source) {
                Ok(parsed) => {
                    frontier.push((
                        canon.parent().unwrap_or(Path::new(".")).to_path_buf(),
                        parsed.imports.clone(),
                    ));
                    units.push(parsed);
                }
                Err(e) => diags.push(format!("import `{}`: {e}", import.path)),
            }
        }
    }
}

/// Analyze a deployed address via its verified source bundle. Exactly one
/// record comes out: the deployed contract named by the verification; the
/// rest of the bundle is resolution context.
fn analyze_address(address: &str, config: &BatchConfig) -> (Vec<ContractRecord>, Vec<String>) {
    let Some(fetch) = &config.fetch else {
        return (
            vec![ContractRecord::error_record(
                address.to_string(),
                "address inputs need a fetch configuration (cache dir/endpoint)".to_string(),
            )],
            vec![],
        );
    };
    let bundle = match fetch_verified_source(address, fetch) {
        Ok(b) => b,
        Err(e) => {
            return (vec![ContractRecord::error_record(address.to_string(), e.to_string())], vec![])
        }
    };

    let mut units = Vec::new();
    let mut diags = Vec::new();
    for (path, content) in &bundle.files {
        match parse_source(FileId::new(format!("{address}:{path}")), content) {
            Ok(u) => units.push(u),
            Err(e) => diags.push(format!("{address}:{path}: {e}")),
        }
    }
    if units.is_empty() {
        return (
            vec![ContractRecord::error_record(
                address.to_string(),
                "no file in the bundle parsed".to_string(),
            )],
            diags,
        );
    }
    let unit = resolve_compilation_unit(&units);
    if unit.get(&bundle.contract_name).is_none() {
        let mut rec = ContractRecord::error_record(
            address.to_string(),
            format!("deployed contract `{}` not found in bundle", bundle.contract_name),
        );
        rec.contract = bundle.contract_name.clone();
        return (vec![rec], diags);
    }
    let (records, more) =
        records_for_unit(&unit, address, |c| c.def.name == bundle.contract_name);
    diags.extend(more);
    (records, diags)
}

/// Run the detection pipeline over every contract in `unit` selected by
/// `select` (deployable kinds only) and build records keyed by `key`.
fn records_for_unit(
    unit: &CompilationUnit,
    key: &str,
    select: impl Fn(&ResolvedContract) -> bool,
) -> (Vec<ContractRecord>, Vec<String>) {
    let mut records = Vec::new();
    for contract in &unit.contracts {
        if !contract.def.kind.is_deployable() || !select(contract) {
            continue;
        }
        records.push(analyze_contract(unit, contract, key));
    }

    // Diagnostics attributed to a selected contract ride on its record;
    // everything else is unit-level.
    let mut unit_diags = Vec::new();
    for d in &unit.diagnostics {
        let owner = d
            .contract
            .as_deref()
            .and_then(|c| records.iter_mut().find(|r| r.contract == c));
        match owner {
            Some(rec) => rec.diagnostics.push(d.to_string()),
            None => unit_diags.push(format!("{key}: {d}")),
        }
    }
    (records, unit_diags)
}

/// Full pipeline for one contract: proxy detection, upgradeability
/// verdict, pattern classification, baseline heuristic.
pub fn analyze_contract(
    unit: &CompilationUnit,
    contract: &ResolvedContract,
    key: &str,
) -> ContractRecord {
    let finding = is_proxy(unit, contract);
    let verdict = is_upgradeable_proxy(unit, contract, &finding);
    let labels = classify_pattern(unit, contract, &finding, &verdict);

    ContractRecord {
        key: key.to_string(),
        contract: contract.def.name.clone(),
        error: None,
        is_proxy: finding.is_proxy,
        mechanism: mechanism_str(finding.mechanism).to_string(),
        delegates_to: finding.delegates_to.as_ref().map(|v| v.name.clone()),
        target_declared_in: finding
            .delegates_to
            .as_ref()
            .and_then(|v| v.declaring_contract.clone()),
        slot: effective_slot(&finding, &verdict),
        via_storage_load: finding.via_storage_load,
        unresolved_target: finding.unresolved_target,
        upgradeable: verdict.is_upgradeable,
        reason: verdict.reason.as_str().to_string(),
        impl_setter: verdict.impl_setter.as_ref().map(function_ref_str),
        impl_getter: verdict.impl_getter.as_ref().map(function_ref_str),
        setter_guarded_by_admin: verdict.setter_guarded_by_admin,
        warning: verdict.warning.clone(),
        labels: labels.iter().map(|l| l.as_str().to_string()).collect(),
        heuristic_labels: labels
            .iter()
            .filter(|l| l.is_heuristic())
            .map(|l| l.as_str().to_string())
            .collect(),
        baseline_flagged: baseline_name_heuristic(contract),
        diagnostics: Vec::new(),
    }
}

fn mechanism_str(mechanism: Mechanism) -> &'static str {
    match mechanism {
        Mechanism::ExpressionDelegatecall => "expression",
        Mechanism::AsmString => "asm_string",
        Mechanism::AsmYul => "asm_yul",
        Mechanism::None => "none",
    }
}

fn function_ref_str(f: &FunctionRef) -> String {
    format!("{}.{}", f.contract, f.signature)
}

fn effective_slot(finding: &ProxyFinding, verdict: &UpgradeabilityVerdict) -> Option<String> {
    verdict.slot.or(finding.slot_literal).map(|s| s.to_hex())
}

// ---------------------------------------------------------------------------
// The naive baseline
// ---------------------------------------------------------------------------

/// The name-based detector this tool replaces: flag a contract when its
/// name contains the substring `Proxy` (case-sensitive) or any fallback
/// node contains a `delegatecall`. No target resolution, no evidence.
pub fn baseline_name_heuristic(contract: &ResolvedContract) -> bool {
    if contract.def.name.contains("Proxy") {
        return true;
    }
    [&contract.fallback, &contract.receive]
        .into_iter()
        .flatten()
        .any(|f| function_mentions_delegatecall(&f.def))
}

fn function_mentions_delegatecall(func: &crate::ast::FunctionDef) -> bool {
    let Some(body) = &func.body else { return false };
    let mut found = false;
    for stmt in body {
        stmt.walk(&mut |s| {
            if let StmtKind::Assembly(block) = &s.kind {
                if block.text.contains("delegatecall") {
                    found = true;
                }
            }
            s.walk_exprs(&mut |e| {
                e.walk(&mut |sub| {
                    if let ExprKind::Member { member, .. } = &sub.kind {
                        if member == "delegatecall" {
                            found = true;
                        }
                    }
                });
            });
        });
    }
    found
}

// ---------------------------------------------------------------------------
// Ground truth and detector comparison
// ---------------------------------------------------------------------------

/// Expected classification for one contract in a labeled corpus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruthLabel {
    /// A proxy with a working upgrade path.
    Upgradeable,
    /// A proxy whose target can never change.
    ProxyOnly,
    /// Not a proxy at all.
    NotProxy,
}

impl TruthLabel {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "upgradeable" => Some(TruthLabel::Upgradeable),
            "proxy_only" => Some(TruthLabel::ProxyOnly),
            "not_proxy" => Some(TruthLabel::NotProxy),
            _ => None,
        }
    }
}

/// Ground truth keyed by `(path-or-address, contract name)`.
pub type TruthMap = BTreeMap<(String, String), TruthLabel>;

/// Parse a truth CSV: `<path-or-address>,<contract-name>,<label>` per
/// line; blank lines and `#` comments are skipped.
pub fn parse_truth_file(text: &str) -> Result<TruthMap, CorpusError> {
    let mut map = TruthMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(CorpusError::BadTruthLine {
                line: idx + 1,
                msg: format!("expected 3 comma-separated fields, got {}", parts.len()),
            });
        }
        let label = TruthLabel::parse(parts[2]).ok_or_else(|| CorpusError::BadTruthLine {
            line: idx + 1,
            msg: format!(
                "unknown label `{}` (expected upgradeable|proxy_only|not_proxy)",
                parts[2]
            ),
        })?;
        map.insert((parts[0].to_string(), parts[1].to_string()), label);
    }
    Ok(map)
}

/// Baseline-versus-detector scorecard over a labeled corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FpFnStats {
    /// Records scored (error records are exempt — they carry no verdict).
    pub total_records: usize,
    /// Contracts the naive baseline flags as proxies.
    pub baseline_flagged: usize,
    /// Contracts the evidence-based detector reports as proxies.
    pub improved_flagged: usize,
    /// Baseline flags on contracts labeled `not_proxy`.
    pub baseline_fp: usize,
    /// Detector flags on contracts labeled `not_proxy`.
    pub improved_fp: usize,
    /// Baseline false positives the detector does not repeat.
    pub eliminated_fp: usize,
    /// `eliminated_fp / baseline_fp`; 1.0 when the denominator is zero
    /// (see `degenerate_denominator`).
    pub eliminated_fp_ratio: f64,
    /// True proxies (`upgradeable` or `proxy_only`) the detector missed.
    pub missed_tp: usize,
    /// Contracts labeled `upgradeable` the detector does not report as
    /// upgradeable.
    pub missed_upgradeable: usize,
    /// Contracts not labeled `upgradeable` the detector reports as
    /// upgradeable.
    pub spurious_upgradeable: usize,
    /// Set when `baseline_fp == 0`, in which case the ratio above is
    /// reported as 1.0 by convention.
    pub degenerate_denominator: bool,
    pub note: String,
}

/// Score the report against ground truth. Every non-error record must
/// carry a label ([`CorpusError::MissingLabel`] otherwise); lookups try
/// the record key exactly, then its basename, so truth files may use
/// either full paths or file names.
pub fn compare_detectors(report: &BatchReport, truth: &TruthMap) -> Result<FpFnStats, CorpusError> {
    let mut stats = FpFnStats {
        total_records: 0,
        baseline_flagged: 0,
        improved_flagged: 0,
        baseline_fp: 0,
        improved_fp: 0,
        eliminated_fp: 0,
        eliminated_fp_ratio: 0.0,
        missed_tp: 0,
        missed_upgradeable: 0,
        spurious_upgradeable: 0,
        degenerate_denominator: false,
        note: String::new(),
    };

    for record in &report.records {
        if record.error.is_some() {
            continue;
        }
        let label = lookup_truth(truth, &record.key, &record.contract).ok_or_else(|| {
            CorpusError::MissingLabel { key: record.key.clone(), contract: record.contract.clone() }
        })?;
        stats.total_records += 1;

        let truly_proxy = label != TruthLabel::NotProxy;
        if record.baseline_flagged {
            stats.baseline_flagged += 1;
            if !truly_proxy {
                stats.baseline_fp += 1;
                if !record.is_proxy {
                    stats.eliminated_fp += 1;
                }
            }
        }
        if record.is_proxy {
            stats.improved_flagged += 1;
            if !truly_proxy {
                stats.improved_fp += 1;
            }
        } else if truly_proxy {
            stats.missed_tp += 1;
        }
        if label == TruthLabel::Upgradeable && !record.upgradeable {
            stats.missed_upgradeable += 1;
        }
        if label != TruthLabel::Upgradeable && record.upgradeable {
            stats.spurious_upgradeable += 1;
        }
    }

    if stats.baseline_fp == 0 {
        stats.degenerate_denominator = true;
        stats.eliminated_fp_ratio = 1.0;
    } else {
        stats.eliminated_fp_ratio = stats.eliminated_fp as f64 / stats.baseline_fp as f64;
    }
    stats.note = format!(
        "Eliminated {}/{} baseline false positives. Field surveys of deployed \
         contracts report roughly 70% of name-heuristic proxy flags as false \
         positives; that figure motivates the comparison and is not a target — \
         this corpus is constructed, so the ratio here measures its designed cases.",
        stats.eliminated_fp, stats.baseline_fp
    );
    Ok(stats)
}

fn lookup_truth(truth: &TruthMap, key: &str, contract: &str) -> Option<TruthLabel> {
    if let Some(l) = truth.get(&(key.to_string(), contract.to_string())) {
        return Some(*l);
    }
    let base = Path::new(key).file_name()?.to_str()?;
    truth.get(&(base.to_string(), contract.to_string())).copied()
}
