// SPDX-License-Identifier: Apache-2.0

//! Contract model: multi-file resolution, inheritance linearization, and a
//! lightweight control-flow view of function bodies.
//!
//! A [`CompilationUnit`] is built from one or more parsed files that belong
//! together (one verified-source bundle, one fixture file plus its imports).
//! Resolution never fails the unit: unknown bases, duplicate names, and
//! linearization conflicts degrade to diagnostics plus a best-effort model.

use crate::ast::*;
use crate::diag::{Diagnostic, FileId, Span};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};

// ---------------------------------------------------------------------------
// Variable references
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarScope {
    /// Contract storage (or a constant/immutable declared at contract level).
    State,
    /// Function parameter.
    Parameter,
    /// Solidity local or Yul `let` binding.
    Local,
    /// File-level constant.
    FileConstant,
    /// Synthesized for literal delegation targets (`0x…`.delegatecall),
    /// which behave like an unnamed constant.
    SyntheticConstant,
}

/// A resolved reference to the variable a proxy delegates through (or any
/// other variable the analyses need to talk about).
#[derive(Clone, Debug, PartialEq)]
pub struct VariableRef {
    pub name: String,
    pub scope: VarScope,
    /// Contract that declares the variable (state vars); `None` for locals,
    /// parameters, and synthetics.
    pub declaring_contract: Option<String>,
    pub ty: Option<TypeLabel>,
    /// Whether the value can never change after construction: `constant` /
    /// `immutable` state vars, file constants, locals initialized from a
    /// literal, and synthetic literal targets.
    pub is_constant: bool,
    pub initializer: Option<Expr>,
    pub visibility: Option<VarVisibility>,
    pub mutability: Option<VarMutability>,
    pub span: Option<Span>,
}

impl VariableRef {
    pub fn from_state_var(decl: &StateVarDecl, declaring: &str) -> Self {
        VariableRef {
            name: decl.name.clone(),
            scope: VarScope::State,
            declaring_contract: Some(declaring.to_string()),
            ty: Some(decl.ty.clone()),
            is_constant: decl.mutability != VarMutability::Mutable,
            initializer: decl.initializer.clone(),
            visibility: Some(decl.visibility),
            mutability: Some(decl.mutability),
            span: Some(decl.span.clone()),
        }
    }

    pub fn from_file_constant(decl: &StateVarDecl) -> Self {
        VariableRef {
            name: decl.name.clone(),
            scope: VarScope::FileConstant,
            declaring_contract: None,
            ty: Some(decl.ty.clone()),
            is_constant: true,
            initializer: decl.initializer.clone(),
            visibility: Some(decl.visibility),
            mutability: Some(VarMutability::Constant),
            span: Some(decl.span.clone()),
        }
    }
}

// ---------------------------------------------------------------------------
// Resolved contracts
// ---------------------------------------------------------------------------

/// A function together with the contract that contributed it to a resolved
/// hierarchy (the most derived override wins).
#[derive(Clone, Debug, PartialEq)]
pub struct OwnedFunction {
    pub def: FunctionDef,
    pub declared_in: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResolvedContract {
    pub def: ContractDef,
    pub file: FileId,
    /// Inheritance linearization, most-base-first, ending with the contract
    /// itself. Contains only bases that resolved.
    pub linearization: Vec<String>,
    /// Base names that could not be resolved in the unit.
    pub unresolved_bases: Vec<String>,
    /// State variables in storage-layout order (bases first, then own),
    /// including constants/immutables (layout computation filters those).
    pub all_state_vars: Vec<VariableRef>,
    /// Every callable resolved through the hierarchy, keyed by structural
    /// signature; overrides already applied. Constructors excluded.
    pub all_functions: BTreeMap<String, OwnedFunction>,
    /// Modifier definitions visible in this contract, most-derived wins.
    pub all_modifiers: BTreeMap<String, OwnedFunction0>,
    /// Resolved fallback/receive (most derived definition wins).
    pub fallback: Option<OwnedFunction>,
    pub receive: Option<OwnedFunction>,
}

/// A modifier with its declaring contract (name mirrors [`OwnedFunction`]).
#[derive(Clone, Debug, PartialEq)]
pub struct OwnedFunction0 {
    pub def: ModifierDef,
    pub declared_in: String,
}

impl ResolvedContract {
    pub fn name(&self) -> &str {
        &self.def.name
    }

    /// Whether `contract_name` is this contract or one of its bases.
    pub fn inherits(&self, contract_name: &str) -> bool {
        self.linearization.iter().any(|n| n == contract_name)
    }

    /// Look up a state variable (inherited included) by name.
    pub fn state_var(&self, name: &str) -> Option<&VariableRef> {
        self.all_state_vars.iter().find(|v| v.name == name)
    }

    /// All resolved functions with a body, in deterministic order.
    pub fn functions_with_bodies(&self) -> impl Iterator<Item = &OwnedFunction> {
        self.all_functions.values().filter(|f| f.def.body.is_some())
    }
}

// ---------------------------------------------------------------------------
// Compilation unit
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Default)]
pub struct CompilationUnit {
    /// Resolved contracts in file/declaration order.
    pub contracts: Vec<ResolvedContract>,
    /// File-level constants across the unit, by name (first wins on clash).
    pub file_constants: BTreeMap<String, VariableRef>,
    /// Unit-level diagnostics (per-file parser diagnostics are copied in,
    /// then resolution adds its own).
    pub diagnostics: Vec<Diagnostic>,
    index: HashMap<String, usize>,
}

impl CompilationUnit {
    pub fn get(&self, name: &str) -> Option<&ResolvedContract> {
        self.index.get(name).map(|i| &self.contracts[*i])
    }

    /// Struct definition lookup through the whole unit: `Contract.Struct`
    /// scoping is flattened — the first struct with a matching name wins,
    /// preferring the named scope when the name is qualified.
    pub fn find_struct(&self, name: &str) -> Option<&StructDef> {
        let (scope, bare) = match name.split_once('.') {
            Some((s, b)) => (Some(s), b),
            None => (None, name),
        };
        if let Some(scope_name) = scope {
            if let Some(c) = self.get(scope_name) {
                if let Some(s) = c.def.structs.iter().find(|s| s.name == bare) {
                    return Some(s);
                }
            }
        }
        self.contracts.iter().flat_map(|c| c.def.structs.iter()).find(|s| s.name == bare)
    }

    pub fn find_enum(&self, name: &str) -> Option<&EnumDef> {
        let bare = name.rsplit('.').next().unwrap_or(name);
        self.contracts.iter().flat_map(|c| c.def.enums.iter()).find(|e| e.name == bare)
    }

    /// Whether `name` denotes a contract/interface/library in this unit.
    pub fn is_contract_type(&self, name: &str) -> bool {
        let bare = name.rsplit('.').next().unwrap_or(name);
        self.index.contains_key(bare) || self.index.contains_key(name)
    }
}

/// Resolve a set of parsed files into one unit.
pub fn resolve_compilation_unit(units: &[SourceUnit]) -> CompilationUnit {
    let mut out = CompilationUnit::default();

    // Gather parser diagnostics and definitions.
    let mut defs: BTreeMap<String, (&ContractDef, FileId)> = BTreeMap::new();
    for unit in units {
        out.diagnostics.extend(unit.diagnostics.iter().cloned());
        for c in &unit.contracts {
            if defs.contains_key(&c.name) {
                out.diagnostics.push(
                    Diagnostic::warning(
                        format!("duplicate contract name `{}`; first definition wins", c.name),
                        Some(c.span.clone()),
                    )
                    .with_contract(c.name.clone()),
                );
            } else {
                defs.insert(c.name.clone(), (c, unit.file.clone()));
            }
        }
        for fc in &unit.file_constants {
            out.file_constants
                .entry(fc.name.clone())
                .or_insert_with(|| VariableRef::from_file_constant(fc));
        }
    }

    // Resolve each contract in input order (file order, then declaration
    // order) for deterministic output.
    for unit in units {
        for c in &unit.contracts {
            // Skip shadowed duplicates.
            let (canonical, file) = &defs[&c.name];
            if !std::ptr::eq(*canonical, c) {
                continue;
            }
            let resolved = resolve_contract(c, file.clone(), &defs, &mut out.diagnostics);
            out.index.insert(c.name.clone(), out.contracts.len());
            out.contracts.push(resolved);
        }
    }
    out
}

fn resolve_contract(
    def: &ContractDef,
    file: FileId,
    defs: &BTreeMap<String, (&ContractDef, FileId)>,
    diags: &mut Vec<Diagnostic>,
) -> ResolvedContract {
    let (linearization, unresolved) = linearize_inheritance(&def.name, defs, diags);

    let mut all_state_vars = Vec::new();
    let mut all_functions: BTreeMap<String, OwnedFunction> = BTreeMap::new();
    let mut all_modifiers: BTreeMap<String, OwnedFunction0> = BTreeMap::new();
    let mut fallback: Option<OwnedFunction> = None;
    let mut receive: Option<OwnedFunction> = None;

    for base_name in &linearization {
        let Some((base, _)) = defs.get(base_name) else { continue };
        for var in &base.state_vars {
            all_state_vars.push(VariableRef::from_state_var(var, base_name));
        }
        for f in &base.functions {
            let owned = OwnedFunction { def: f.clone(), declared_in: base_name.clone() };
            if f.is_constructor {
                continue;
            }
            if f.is_fallback {
                fallback = Some(owned);
                continue;
            }
            if f.is_receive {
                receive = Some(owned);
                continue;
            }
            // Most-derived definition wins; bodyless declarations do not
            // override an inherited body (virtual redeclarations in
            // interfaces/abstract contracts).
            let key = f.structural_signature();
            match all_functions.get(&key) {
                Some(existing) if existing.def.body.is_some() && f.body.is_none() => {}
                _ => {
                    all_functions.insert(key, owned);
                }
            }
        }
        for m in &base.modifiers {
            match all_modifiers.get(&m.name) {
                Some(existing) if existing.def.body.is_some() && m.body.is_none() => {}
                _ => {
                    all_modifiers.insert(
                        m.name.clone(),
                        OwnedFunction0 { def: m.clone(), declared_in: base_name.clone() },
                    );
                }
            }
        }
    }

    ResolvedContract {
        def: def.clone(),
        file,
        linearization,
        unresolved_bases: unresolved,
        all_state_vars,
        all_functions,
        all_modifiers,
        fallback,
        receive,
    }
}

// ---------------------------------------------------------------------------
// C3 linearization
// ---------------------------------------------------------------------------

/// Linearize `name`'s inheritance graph, most-base-first, self last.
///
/// Solidity uses C3 linearization over the *reversed* base list (`contract
/// D is B, C` linearizes with C more derived than B). When C3 fails —
/// inconsistent hierarchies or cycles — the function degrades to a
/// duplicate-free DFS order with a diagnostic, so analysis can continue.
pub fn linearize_inheritance(
    name: &str,
    defs: &BTreeMap<String, (&ContractDef, FileId)>,
    diags: &mut Vec<Diagnostic>,
) -> (Vec<String>, Vec<String>) {
    let mut unresolved = Vec::new();
    let mut visiting = HashSet::new();
    match c3(name, defs, &mut unresolved, &mut visiting) {
        Some(mut order) => {
            // c3 returns most-derived-first; Solidity storage layout wants
            // most-base-first.
            order.reverse();
            (order, unresolved)
        }
        None => {
            diags.push(
                Diagnostic::warning(
                    format!(
                        "C3 linearization failed for `{name}` (inconsistent or cyclic \
                         hierarchy); falling back to depth-first order"
                    ),
                    None,
                )
                .with_contract(name.to_string()),
            );
            let mut seen = HashSet::new();
            let mut order = Vec::new();
            dfs_fallback(name, defs, &mut seen, &mut order, &mut unresolved);
            (order, unresolved)
        }
    }
}

/// C3 merge, returning most-derived-first; `None` on failure.
fn c3(
    name: &str,
    defs: &BTreeMap<String, (&ContractDef, FileId)>,
    unresolved: &mut Vec<String>,
    visiting: &mut HashSet<String>,
) -> Option<Vec<String>> {
    if visiting.contains(name) {
        return None; // cycle
    }
    let Some((def, _)) = defs.get(name) else {
        // Unknown base: contributes nothing but is recorded.
        if !unresolved.contains(&name.to_string()) {
            unresolved.push(name.to_string());
        }
        return Some(vec![]);
    };
    visiting.insert(name.to_string());

    // Solidity reverses the source order of bases for the merge.
    let mut bases: Vec<&String> = def.bases.iter().collect();
    bases.reverse();

    let mut sequences: Vec<Vec<String>> = Vec::new();
    for base in &bases {
        let lin = c3(base, defs, unresolved, visiting)?;
        if !lin.is_empty() {
            sequences.push(lin);
        }
    }
    if !bases.is_empty() {
        let direct: Vec<String> = bases
            .iter()
            .filter(|b| defs.contains_key(b.as_str()))
            .map(|b| (*b).clone())
            .collect();
        if !direct.is_empty() {
            sequences.push(direct);
        }
    }
    visiting.remove(name);

    let mut result = vec![name.to_string()];
    result.extend(c3_merge(sequences)?);
    Some(result)
}

fn c3_merge(mut sequences: Vec<Vec<String>>) -> Option<Vec<String>> {
    let mut out = Vec::new();
    loop {
        sequences.retain(|s| !s.is_empty());
        if sequences.is_empty() {
            return Some(out);
        }
        // Find a head that appears in no other sequence's tail.
        let mut chosen: Option<String> = None;
        for s in &sequences {
            let head = &s[0];
            let blocked = sequences.iter().any(|other| other[1..].contains(head));
            if !blocked {
                chosen = Some(head.clone());
                break;
            }
        }
        let head = chosen?;
        if !out.contains(&head) {
            out.push(head.clone());
        }
        for s in sequences.iter_mut() {
            s.retain(|x| *x != head);
        }
    }
}

fn dfs_fallback(
    name: &str,
    defs: &BTreeMap<String, (&ContractDef, FileId)>,
    seen: &mut HashSet<String>,
    order: &mut Vec<String>,
    unresolved: &mut Vec<String>,
) {
    if seen.contains(name) {
        return;
    }
    seen.insert(name.to_string());
    let Some((def, _)) = defs.get(name) else {
        if !unresolved.contains(&name.to_string()) {
            unresolved.push(name.to_string());
        }
        return;
    };
    for base in &def.bases {
        dfs_fallback(base, defs, seen, order, unresolved);
    }
    order.push(name.to_string());
}

// ---------------------------------------------------------------------------
// CFG-lite
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CfgNodeType {
    Entry,
    Expression,
    VariableDecl,
    If,
    Return,
    Require,
    Assembly,
    Other,
}

/// Payload carried by a CFG node: the statement or expression the node was
/// built from, or the assembly block.
#[derive(Clone, Debug, PartialEq)]
pub enum CfgPayload {
    Entry,
    Expr(Expr),
    Stmt(Stmt),
    Yul(YulBlock),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CfgNode {
    pub node_type: CfgNodeType,
    pub payload: CfgPayload,
}

impl CfgNode {
    pub fn expr(&self) -> Option<&Expr> {
        match &self.payload {
            CfgPayload::Expr(e) => Some(e),
            CfgPayload::Stmt(s) => match &s.kind {
                StmtKind::Expr(e) => Some(e),
                StmtKind::Return(Some(e)) => Some(e),
                StmtKind::VarDecl { init: Some(e), .. } => Some(e),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn yul(&self) -> Option<&YulBlock> {
        match &self.payload {
            CfgPayload::Yul(b) => Some(b),
            _ => None,
        }
    }

    pub fn stmt(&self) -> Option<&Stmt> {
        match &self.payload {
            CfgPayload::Stmt(s) => Some(s),
            _ => None,
        }
    }
}

/// Flatten a function body into an ordered list of classified nodes.
///
/// This is a CFG-lite: statement order approximates control flow, branch and
/// loop bodies are inlined after their header node, and no edges are kept.
/// The detectors only need "which operations can execute and in what textual
/// order", not path conditions.
pub fn build_cfg(function: &FunctionDef) -> Vec<CfgNode> {
    let mut nodes = vec![CfgNode { node_type: CfgNodeType::Entry, payload: CfgPayload::Entry }];
    if let Some(body) = &function.body {
        flatten_stmts(body, &mut nodes);
    }
    nodes
}

/// Flatten a modifier body the same way.
pub fn build_modifier_cfg(modifier: &ModifierDef) -> Vec<CfgNode> {
    let mut nodes = vec![CfgNode { node_type: CfgNodeType::Entry, payload: CfgPayload::Entry }];
    if let Some(body) = &modifier.body {
        flatten_stmts(body, &mut nodes);
    }
    nodes
}

fn flatten_stmts(stmts: &[Stmt], nodes: &mut Vec<CfgNode>) {
    for s in stmts {
        match &s.kind {
            StmtKind::Expr(e) => {
                // `assert(…)` behaves like require for classification.
                let is_assert = matches!(
                    &e.kind,
                    ExprKind::Call { callee, .. }
                        if matches!(&callee.kind, ExprKind::Ident(n) if n == "assert")
                );
                nodes.push(CfgNode {
                    node_type: if is_assert { CfgNodeType::Require } else { CfgNodeType::Expression },
                    payload: CfgPayload::Expr(e.clone()),
                });
            }
            StmtKind::VarDecl { .. } => {
                nodes.push(CfgNode {
                    node_type: CfgNodeType::VariableDecl,
                    payload: CfgPayload::Stmt(s.clone()),
                });
            }
            StmtKind::If { cond, then_branch, else_branch } => {
                nodes.push(CfgNode {
                    node_type: CfgNodeType::If,
                    payload: CfgPayload::Expr(cond.clone()),
                });
                flatten_stmts(then_branch, nodes);
                if let Some(eb) = else_branch {
                    flatten_stmts(eb, nodes);
                }
            }
            StmtKind::While { cond, body } | StmtKind::DoWhile { cond, body } => {
                nodes.push(CfgNode {
                    node_type: CfgNodeType::Other,
                    payload: CfgPayload::Expr(cond.clone()),
                });
                flatten_stmts(body, nodes);
            }
            StmtKind::For { init, cond, post, body } => {
                if let Some(i) = init {
                    flatten_stmts(std::slice::from_ref(i), nodes);
                }
                if let Some(c) = cond {
                    nodes.push(CfgNode {
                        node_type: CfgNodeType::Other,
                        payload: CfgPayload::Expr(c.clone()),
                    });
                }
                flatten_stmts(body, nodes);
                if let Some(p) = post {
                    nodes.push(CfgNode {
                        node_type: CfgNodeType::Expression,
                        payload: CfgPayload::Expr(p.clone()),
                    });
                }
            }
            StmtKind::Return(_) => {
                nodes.push(CfgNode {
                    node_type: CfgNodeType::Return,
                    payload: CfgPayload::Stmt(s.clone()),
                });
            }
            StmtKind::Require { .. } => {
                nodes.push(CfgNode {
                    node_type: CfgNodeType::Require,
                    payload: CfgPayload::Stmt(s.clone()),
                });
            }
            StmtKind::Assembly(block) => {
                nodes.push(CfgNode {
                    node_type: CfgNodeType::Assembly,
                    payload: CfgPayload::Yul(block.clone()),
                });
            }
            StmtKind::Block(body) => flatten_stmts(body, nodes),
            StmtKind::Emit { .. }
            | StmtKind::Revert { .. }
            | StmtKind::Break
            | StmtKind::Continue
            | StmtKind::Placeholder => {
                nodes.push(CfgNode {
                    node_type: CfgNodeType::Other,
                    payload: CfgPayload::Stmt(s.clone()),
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_source;

    fn unit_of(srcs: &[(&str, &str)]) -> CompilationUnit {
        let units: Vec<SourceUnit> = srcs
            .iter()
            .map(|(name, src)| parse_source(FileId::new(*name), src).expect("parse"))
            .collect();
        resolve_compilation_unit(&units)
    }

    #[test]
    fn diamond_c3_linearization() {
        // D is B, C; B is A; C is A  →  [A, B, C, D].
        let unit = unit_of(&[(
            "d.sol",
            r#"
            contract A { uint256 a; }
            contract B is A { uint256 b; }
            contract C is A { uint256 c; }
            contract D is B, C { uint256 d; }
            "#,
        )]);
        let d = unit.get("D").unwrap();
        assert_eq!(d.linearization, vec!["A", "B", "C", "D"]);
        let names: Vec<&str> = d.all_state_vars.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, vec!["a", "b", "c", "d"]);
    }

    #[test]
    fn base_order_reversal_matches_solidity() {
        // `contract Z is X, Y`: Y is more derived than X, so storage puts
        // X's variables first.
        let unit = unit_of(&[(
            "z.sol",
            r#"
            contract X { uint256 x; }
            contract Y { uint256 y; }
            contract Z is X, Y { uint256 z; }
            "#,
        )]);
        let z = unit.get("Z").unwrap();
        assert_eq!(z.linearization, vec!["X", "Y", "Z"]);
    }

    #[test]
    fn override_takes_most_derived_body() {
        let unit = unit_of(&[(
            "o.sol",
            r#"
            contract Base {
                function impl() public view returns (address) { return address(1); }
                function only_base() public {}
            }
            contract Derived is Base {
                function impl() public view returns (address) { return address(2); }
            }
            "#,
        )]);
        let d = unit.get("Derived").unwrap();
        assert_eq!(d.all_functions["impl()"].declared_in, "Derived");
        assert_eq!(d.all_functions["only_base()"].declared_in, "Base");
    }

    #[test]
    fn interface_declaration_does_not_override_body() {
        let unit = unit_of(&[(
            "i.sol",
            r#"
            contract WithBody {
                function implementation() public view returns (address) { return address(0); }
            }
            interface IFace {
                function implementation() external view returns (address);
            }
            contract Both is WithBody, IFace {}
            "#,
        )]);
        let both = unit.get("Both").unwrap();
        let f = &both.all_functions["implementation()"];
        assert!(f.def.body.is_some(), "body from WithBody must survive");
        assert_eq!(f.declared_in, "WithBody");
    }

    #[test]
    fn unresolved_bases_are_reported_not_fatal() {
        let unit = unit_of(&[("u.sol", "contract C is Missing { uint256 c; }")]);
        let c = unit.get("C").unwrap();
        assert_eq!(c.linearization, vec!["C"]);
        assert_eq!(c.unresolved_bases, vec!["Missing"]);
    }

    #[test]
    fn cycle_falls_back_to_dfs_with_diagnostic() {
        let unit = unit_of(&[("cyc.sol", "contract A is B {} contract B is A {}")]);
        assert!(unit
            .diagnostics
            .iter()
            .any(|d| d.message.contains("C3 linearization failed")));
        // Still produced a model.
        assert!(unit.get("A").is_some());
        assert!(unit.get("B").is_some());
    }

    #[test]
    fn duplicate_contract_names_first_wins() {
        let unit = unit_of(&[
            ("one.sol", "contract Dup { uint256 from_one; }"),
            ("two.sol", "contract Dup { uint256 from_two; }"),
        ]);
        assert_eq!(unit.contracts.len(), 1);
        assert_eq!(unit.get("Dup").unwrap().all_state_vars[0].name, "from_one");
        assert!(unit.diagnostics.iter().any(|d| d.message.contains("duplicate contract name")));
    }

    #[test]
    fn fallback_and_receive_resolve_through_bases() {
        let unit = unit_of(&[(
            "f.sol",
            r#"
            contract ProxyBase {
                fallback() external payable {}
            }
            contract Child is ProxyBase {
                receive() external payable {}
            }
            "#,
        )]);
        let c = unit.get("Child").unwrap();
        assert_eq!(c.fallback.as_ref().unwrap().declared_in, "ProxyBase");
        assert_eq!(c.receive.as_ref().unwrap().declared_in, "Child");
    }

    #[test]
    fn cfg_flattening_classifies_nodes() {
        let unit = unit_of(&[(
            "c.sol",
            r#"
            pragma solidity ^0.8.9;
            contract C {
                uint256 x;
                function f(uint256 v) public returns (uint256) {
                    require(v > 0, "zero");
                    uint256 y = v + 1;
                    if (y > 10) {
                        x = y;
                    }
                    assembly { let z := sload(0) }
                    assert(x != 0);
                    return x;
                }
            }
            "#,
        )]);
        let c = unit.get("C").unwrap();
        let f = &c.all_functions["f(uint256)"];
        let cfg = build_cfg(&f.def);
        let types: Vec<CfgNodeType> = cfg.iter().map(|n| n.node_type).collect();
        assert_eq!(
            types,
            vec![
                CfgNodeType::Entry,
                CfgNodeType::Require,
                CfgNodeType::VariableDecl,
                CfgNodeType::If,
                CfgNodeType::Expression, // x = y inside the branch
                CfgNodeType::Assembly,
                CfgNodeType::Require, // assert
                CfgNodeType::Return,
            ]
        );
        assert!(cfg[5].yul().is_some());
    }

    #[test]
    fn file_constants_are_collected() {
        let unit = unit_of(&[(
            "k.sol",
            r#"
            pragma solidity ^0.8.9;
            bytes32 constant IMPL_SLOT = 0x360894a13ba1a3210667c828492db98dca3e2076cc3735a920a3ca505d382bbc;
            contract C {}
            "#,
        )]);
        let k = unit.file_constants.get("IMPL_SLOT").unwrap();
        assert!(k.is_constant);
        assert_eq!(k.scope, VarScope::FileConstant);
    }

    #[test]
    fn struct_and_enum_lookup() {
        let unit = unit_of(&[(
            "s.sol",
            r#"
            contract Holder {
                struct Pair { uint128 a; uint128 b; }
                enum Mode { Off, On }
            }
            contract User {}
            "#,
        )]);
        assert!(unit.find_struct("Pair").is_some());
        assert!(unit.find_struct("Holder.Pair").is_some());
        assert!(unit.find_enum("Mode").is_some());
        assert!(unit.is_contract_type("User"));
        assert!(!unit.is_contract_type("Pair"));
    }
}
