// SPDX-License-Identifier: Apache-2.0
//! Python bindings for the proxyscope analyzer.
//!
//! Exposes the main operations — proxy/upgradeability analysis, batch runs,
//! baseline comparison, storage layouts and diffs, selector math, and the
//! verified slot table — plus thin class wrappers over the core result
//! types. Structured results that have a stable JSON form cross the
//! boundary as plain dicts/lists; records, reports, and slot assignments
//! come back as classes.

use std::path::Path;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use proxyscope::clash::{clashes_between_surfaces, external_selectors};
use proxyscope::corpus;
use proxyscope::diag::FileId;
use proxyscope::keccak::keccak256;
use proxyscope::layout::{compute_storage_layout, diff_storage_layouts};
use proxyscope::model::{resolve_compilation_unit, CompilationUnit};
use proxyscope::parser::parse_source;
use proxyscope::patterns::{canonicalize_signature_text, function_selector, KnownSlots};

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

fn value_error(msg: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(msg.to_string())
}

/// Convert any `Serialize` value into Python objects via its JSON form,
/// so the Python view always matches the CLI's `--format json` exactly.
fn to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    let obj = py.import("json")?.call_method1("loads", (text,))?;
    Ok(obj.unbind())
}

fn unit_from_source(file_name: &str, source: &str) -> PyResult<CompilationUnit> {
    let parsed = parse_source(FileId::new(file_name), source)
        .map_err(|e| value_error(format!("{file_name}: {e}")))?;
    Ok(resolve_compilation_unit(std::slice::from_ref(&parsed)))
}

/// Resolve the contract a command targets: the explicit name when given,
/// otherwise the sole deployable contract in the unit.
fn pick_contract(unit: &CompilationUnit, want: Option<&str>) -> PyResult<String> {
    if let Some(name) = want {
        if unit.get(name).is_some() {
            return Ok(name.to_string());
        }
        return Err(value_error(format!("no contract named `{name}` in this source")));
    }
    let deployable: Vec<&str> = unit
        .contracts
        .iter()
        .filter(|c| c.def.kind.is_deployable())
        .map(|c| c.def.name.as_str())
        .collect();
    match deployable.as_slice() {
        [single] => Ok(single.to_string()),
        [] => Err(value_error("source defines no deployable contract")),
        many => Err(value_error(format!(
            "source defines several contracts ({}); pass contract=...",
            many.join(", ")
        ))),
    }
}

// ---------------------------------------------------------------------------
// Classes
// ---------------------------------------------------------------------------

/// One analyzed contract (or one failed input).
#[pyclass(name = "ContractRecord", frozen, skip_from_py_object, module = "proxyscope_py")]
#[derive(Clone)]
pub struct PyContractRecord {
    inner: corpus::ContractRecord,
}

#[pymethods]
impl PyContractRecord {
    /// Defining file path, or the deployed address for fetched bundles.
    #[getter]
    fn key(&self) -> String {
        self.inner.key.clone()
    }
    #[getter]
    fn contract(&self) -> String {
        self.inner.contract.clone()
    }
    #[getter]
    fn error(&self) -> Option<String> {
        self.inner.error.clone()
    }
    #[getter]
    fn is_proxy(&self) -> bool {
        self.inner.is_proxy
    }
    /// `expression`, `asm_string`, `asm_yul`, or `none`.
    #[getter]
    fn mechanism(&self) -> String {
        self.inner.mechanism.clone()
    }
    #[getter]
    fn delegates_to(&self) -> Option<String> {
        self.inner.delegates_to.clone()
    }
    #[getter]
    fn target_declared_in(&self) -> Option<String> {
        self.inner.target_declared_in.clone()
    }
    #[getter]
    fn slot(&self) -> Option<String> {
        self.inner.slot.clone()
    }
    #[getter]
    fn via_storage_load(&self) -> bool {
        self.inner.via_storage_load
    }
    #[getter]
    fn unresolved_target(&self) -> bool {
        self.inner.unresolved_target
    }
    #[getter]
    fn upgradeable(&self) -> bool {
        self.inner.upgradeable
    }
    /// Decision-tree reason code, e.g. `SETTER_FOUND`.
    #[getter]
    fn reason(&self) -> String {
        self.inner.reason.clone()
    }
    #[getter]
    fn impl_setter(&self) -> Option<String> {
        self.inner.impl_setter.clone()
    }
    #[getter]
    fn impl_getter(&self) -> Option<String> {
        self.inner.impl_getter.clone()
    }
    #[getter]
    fn setter_guarded_by_admin(&self) -> bool {
        self.inner.setter_guarded_by_admin
    }
    #[getter]
    fn warning(&self) -> Option<String> {
        self.inner.warning.clone()
    }
    /// Pattern labels (wire names, sorted), e.g. `EIP1967_UNSTRUCTURED`.
    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels.clone()
    }
    #[getter]
    fn heuristic_labels(&self) -> Vec<String> {
        self.inner.heuristic_labels.clone()
    }
    /// Verdict of the naive name/delegatecall baseline heuristic.
    #[getter]
    fn baseline_flagged(&self) -> bool {
        self.inner.baseline_flagged
    }
    #[getter]
    fn diagnostics(&self) -> Vec<String> {
        self.inner.diagnostics.clone()
    }

    /// The record as a plain dict, exactly as it appears in report JSON.
    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner)
    }

    fn __repr__(&self) -> String {
        if let Some(err) = &self.inner.error {
            return format!("ContractRecord({} ERROR: {err})", self.inner.key);
        }
        format!(
            "ContractRecord({}::{} proxy={} upgradeable={} reason={}{})",
            self.inner.key,
            self.inner.contract,
            self.inner.is_proxy,
            self.inner.upgradeable,
            self.inner.reason,
            if self.inner.labels.is_empty() {
                String::new()
            } else {
                format!(" labels=[{}]", self.inner.labels.join(","))
            }
        )
    }
}

/// Deterministic result of a batch run.
#[pyclass(name = "BatchReport", frozen, module = "proxyscope_py")]
pub struct PyBatchReport {
    inner: corpus::BatchReport,
}

#[pymethods]
impl PyBatchReport {
    #[getter]
    fn schema_version(&self) -> u32 {
        self.inner.schema_version
    }
    #[getter]
    fn tool(&self) -> String {
        self.inner.tool.clone()
    }
    #[getter]
    fn tool_version(&self) -> String {
        self.inner.tool_version.clone()
    }
    #[getter]
    fn records(&self) -> Vec<PyContractRecord> {
        self.inner.records.iter().map(|r| PyContractRecord { inner: r.clone() }).collect()
    }
    /// Totals as a dict: inputs, contracts, errors, proxies, upgradeable,
    /// baseline_flagged.
    #[getter]
    fn totals(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.totals)
    }
    #[getter]
    fn diagnostics(&self) -> Vec<String> {
        self.inner.diagnostics.clone()
    }
    /// Baseline-comparison stats when the run was scored, else None.
    #[getter]
    fn stats(&self, py: Python<'_>) -> PyResult<Option<Py<PyAny>>> {
        match &self.inner.stats {
            Some(stats) => Ok(Some(to_py(py, stats)?)),
            None => Ok(None),
        }
    }

    /// Byte-stable pretty JSON, identical to the CLI's `--format json`.
    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.records.len()
    }

    fn __repr__(&self) -> String {
        let t = &self.inner.totals;
        format!(
            "BatchReport(inputs={}, contracts={}, errors={}, proxies={}, upgradeable={})",
            t.inputs, t.contracts, t.errors, t.proxies, t.upgradeable
        )
    }
}

/// Where one state variable lives in contract storage.
#[pyclass(name = "SlotAssignment", frozen, skip_from_py_object, module = "proxyscope_py")]
#[derive(Clone)]
pub struct PySlotAssignment {
    inner: proxyscope::layout::SlotAssignment,
}

#[pymethods]
impl PySlotAssignment {
    #[getter]
    fn var_name(&self) -> String {
        self.inner.var_name.clone()
    }
    #[getter]
    fn declaring_contract(&self) -> String {
        self.inner.declaring_contract.clone()
    }
    #[getter]
    fn slot(&self) -> u128 {
        self.inner.slot
    }
    /// Byte offset within the slot (0 for anything owning whole slots).
    #[getter]
    fn offset(&self) -> u8 {
        self.inner.offset
    }
    /// Bytes occupied (packed width, or slots x 32 for aggregates).
    #[getter]
    fn size(&self) -> u64 {
        self.inner.size
    }
    #[getter]
    fn type_label(&self) -> String {
        self.inner.type_label.clone()
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "SlotAssignment(slot={}, offset={}, size={}, {} {} [{}])",
            self.inner.slot,
            self.inner.offset,
            self.inner.size,
            self.inner.type_label,
            self.inner.var_name,
            self.inner.declaring_contract
        )
    }
}

// ---------------------------------------------------------------------------
// Analysis entry points
// ---------------------------------------------------------------------------

/// Analyze every deployable contract in a Solidity source string.
///
/// Runs the full pipeline — proxy detection, upgradeability decision tree,
/// pattern classification, baseline heuristic — and returns one record per
/// contract. Raises ValueError when the source does not parse.
#[pyfunction]
#[pyo3(signature = (source, file_name = "input.sol"))]
fn analyze_source(source: &str, file_name: &str) -> PyResult<Vec<PyContractRecord>> {
    let unit = unit_from_source(file_name, source)?;
    let mut records = Vec::new();
    for contract in &unit.contracts {
        if !contract.def.kind.is_deployable() {
            continue;
        }
        let mut record = corpus::analyze_contract(&unit, contract, file_name);
        for d in &unit.diagnostics {
            if d.contract.as_deref() == Some(contract.def.name.as_str()) {
                record.diagnostics.push(d.to_string());
            }
        }
        records.push(PyContractRecord { inner: record });
    }
    Ok(records)
}

/// Analyze one `.sol` file plus its resolvable import closure; records are
/// produced for deployable contracts defined in that file.
#[pyfunction]
fn analyze_file(path: &str) -> PyResult<Vec<PyContractRecord>> {
    let (unit, diags) =
        corpus::load_compilation_unit(Path::new(path), path).map_err(value_error)?;
    let mut records = Vec::new();
    for contract in &unit.contracts {
        if contract.file.as_str() != path || !contract.def.kind.is_deployable() {
            continue;
        }
        let mut record = corpus::analyze_contract(&unit, contract, path);
        for d in unit
            .diagnostics
            .iter()
            .filter(|d| d.contract.as_deref() == Some(contract.def.name.as_str()))
        {
            record.diagnostics.push(d.to_string());
        }
        record.diagnostics.extend(diags.iter().cloned());
        records.push(PyContractRecord { inner: record });
    }
    Ok(records)
}

/// Batch-analyze files and directories (recursing into `*.sol`), returning
/// a deterministic BatchReport. `jobs=0` uses one worker per core.
#[pyfunction]
#[pyo3(signature = (paths, jobs = 0))]
fn run_batch(paths: Vec<String>, jobs: usize) -> PyResult<PyBatchReport> {
    let inputs = corpus::expand_inputs(&paths).map_err(value_error)?;
    let config = corpus::BatchConfig { jobs, fetch: None };
    Ok(PyBatchReport { inner: corpus::run_batch(&inputs, &config) })
}

/// Score a batch report against a ground-truth CSV
/// (`key,contract,upgradeable|proxy_only|not_proxy`) and return the
/// false-positive/false-negative stats dict.
#[pyfunction]
fn compare_with_truth(
    py: Python<'_>,
    report: &PyBatchReport,
    labels_path: &str,
) -> PyResult<Py<PyAny>> {
    let text = std::fs::read_to_string(labels_path)
        .map_err(|e| value_error(format!("{labels_path}: {e}")))?;
    let truth = corpus::parse_truth_file(&text).map_err(value_error)?;
    let stats = corpus::compare_detectors(&report.inner, &truth).map_err(value_error)?;
    to_py(py, &stats)
}

// ---------------------------------------------------------------------------
// Storage layout
// ---------------------------------------------------------------------------

/// Compute the storage layout of one contract in `source`.
///
/// Returns `{"contract": str, "entries": [SlotAssignment], "diagnostics": [str]}`.
#[pyfunction]
#[pyo3(signature = (source, contract = None, file_name = "input.sol"))]
fn storage_layout(
    py: Python<'_>,
    source: &str,
    contract: Option<&str>,
    file_name: &str,
) -> PyResult<Py<PyAny>> {
    let unit = unit_from_source(file_name, source)?;
    let name = pick_contract(&unit, contract)?;
    let layout = compute_storage_layout(unit.get(&name).expect("picked"), &unit);

    let entries = PyList::empty(py);
    for e in &layout.entries {
        entries.append(PySlotAssignment { inner: e.clone() })?;
    }
    let diags = PyList::empty(py);
    for d in &layout.diagnostics {
        diags.append(d.to_string())?;
    }
    let doc = PyDict::new(py);
    doc.set_item("contract", name)?;
    doc.set_item("entries", entries)?;
    doc.set_item("diagnostics", diags)?;
    Ok(doc.into_any().unbind())
}

/// Diff the storage layouts of two contract versions for upgrade safety.
///
/// Returns the full report dict: `status` (`IDENTICAL`,
/// `APPEND_ONLY_COMPATIBLE`, `INCOMPATIBLE`), `violations`, `warnings`,
/// and both layouts.
#[pyfunction]
#[pyo3(signature = (old_source, new_source, old_contract = None, new_contract = None))]
fn diff_storage(
    py: Python<'_>,
    old_source: &str,
    new_source: &str,
    old_contract: Option<&str>,
    new_contract: Option<&str>,
) -> PyResult<Py<PyAny>> {
    let old_unit = unit_from_source("old.sol", old_source)?;
    let new_unit = unit_from_source("new.sol", new_source)?;
    let old_name = pick_contract(&old_unit, old_contract)?;
    let new_name = pick_contract(&new_unit, new_contract)?;
    let old_layout = compute_storage_layout(old_unit.get(&old_name).expect("picked"), &old_unit);
    let new_layout = compute_storage_layout(new_unit.get(&new_name).expect("picked"), &new_unit);
    let report = diff_storage_layouts(&old_layout.entries, &new_layout.entries);

    to_py(
        py,
        &serde_json::json!({
            "old_contract": old_name,
            "new_contract": new_name,
            "old_layout": old_layout.entries,
            "new_layout": new_layout.entries,
            "status": report.status,
            "violations": report.violations,
            "warnings": report.warnings,
        }),
    )
}

// ---------------------------------------------------------------------------
// Selectors and slots
// ---------------------------------------------------------------------------

/// 4-byte selector of a function signature, as `0x`-prefixed hex. The
/// signature is canonicalized first (`uint` -> `uint256`, names dropped).
#[pyfunction]
fn selector(signature: &str) -> PyResult<String> {
    let canonical = canonicalize_signature_text(signature).map_err(value_error)?;
    let s = function_selector(&canonical);
    Ok(format!("0x{:02x}{:02x}{:02x}{:02x}", s[0], s[1], s[2], s[3]))
}

/// Canonical form of a human-written signature:
/// `transfer(address to, uint amount)` -> `transfer(address,uint256)`.
#[pyfunction]
fn canonical_signature(signature: &str) -> PyResult<String> {
    canonicalize_signature_text(signature).map_err(value_error)
}

/// keccak-256 digest of `data`, as `0x`-prefixed hex.
#[pyfunction]
fn keccak(data: &[u8]) -> String {
    keccak256(data).to_hex()
}

/// Selector clashes between a proxy's external surface and an
/// implementation's. Returns
/// `{"proxy": .., "implementation": .., "proxy_surface": [..],
///   "implementation_surface": [..], "clashes": [..]}`; clash kinds are
/// `COLLISION` (different signatures, same selector) and `SHADOW`
/// (same signature declared on both sides).
#[pyfunction]
#[pyo3(signature = (proxy_source, implementation_source, proxy_contract = None, impl_contract = None))]
fn selector_clashes(
    py: Python<'_>,
    proxy_source: &str,
    implementation_source: &str,
    proxy_contract: Option<&str>,
    impl_contract: Option<&str>,
) -> PyResult<Py<PyAny>> {
    let proxy_unit = unit_from_source("proxy.sol", proxy_source)?;
    let impl_unit = unit_from_source("implementation.sol", implementation_source)?;
    let proxy_name = pick_contract(&proxy_unit, proxy_contract)?;
    let impl_name = pick_contract(&impl_unit, impl_contract)?;
    let proxy_surface =
        external_selectors(proxy_unit.get(&proxy_name).expect("picked"), &proxy_unit);
    let impl_surface =
        external_selectors(impl_unit.get(&impl_name).expect("picked"), &impl_unit);
    let clashes = clashes_between_surfaces(&proxy_surface, &impl_surface);

    to_py(
        py,
        &serde_json::json!({
            "proxy": proxy_name,
            "implementation": impl_name,
            "proxy_surface": proxy_surface,
            "implementation_surface": impl_surface,
            "clashes": clashes,
        }),
    )
}

/// The verified table of well-known proxy storage slots. Each entry is
/// `{"slot": hex, "role": str, "derivation": str, "minus_one": bool}`;
/// every slot is recomputed from its derivation on first use.
#[pyfunction]
fn known_slots(py: Python<'_>) -> PyResult<Py<PyAny>> {
    let list = PyList::empty(py);
    for entry in KnownSlots::verified().entries() {
        let d = PyDict::new(py);
        d.set_item("slot", entry.slot.to_hex())?;
        d.set_item("role", format!("{:?}", entry.role))?;
        d.set_item("derivation", entry.derivation)?;
        d.set_item("minus_one", entry.minus_one)?;
        list.append(d)?;
    }
    Ok(list.into_any().unbind())
}

// ---------------------------------------------------------------------------
// Module
// ---------------------------------------------------------------------------

#[pymodule]
fn proxyscope_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyContractRecord>()?;
    m.add_class::<PyBatchReport>()?;
    m.add_class::<PySlotAssignment>()?;
    m.add_function(wrap_pyfunction!(analyze_source, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_file, m)?)?;
    m.add_function(wrap_pyfunction!(run_batch, m)?)?;
    m.add_function(wrap_pyfunction!(compare_with_truth, m)?)?;
    m.add_function(wrap_pyfunction!(storage_layout, m)?)?;
    m.add_function(wrap_pyfunction!(diff_storage, m)?)?;
    m.add_function(wrap_pyfunction!(selector, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_signature, m)?)?;
    m.add_function(wrap_pyfunction!(keccak, m)?)?;
    m.add_function(wrap_pyfunction!(selector_clashes, m)?)?;
    m.add_function(wrap_pyfunction!(known_slots, m)?)?;
    Ok(())
}
