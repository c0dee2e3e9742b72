// SPDX-License-Identifier: Apache-2.0

//! Proxy detection: does a contract forward calls through `delegatecall`,
//! and which variable (or storage slot) names the delegation target?
//!
//! The search starts at the fallback (and receive) function and follows one
//! level of internal calls — the `_delegate(impl)` idiom — scanning each
//! flattened CFG node: assembly blocks through [`find_delegatecall_in_asm`]
//! (which handles both the raw-text and Yul-AST representations) and
//! ordinary expressions through [`find_delegatecall_in_expression`]. The
//! search stops early once both the flag and a resolved target are known.

use crate::ast::*;
use crate::consteval::{eval_const_expr, ConstContext};
use crate::model::{
    build_cfg, CfgNodeType, CompilationUnit, ResolvedContract, VarScope, VariableRef,
};
use crate::value::Bytes32;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// How the delegatecall was located.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mechanism {
    /// `target.delegatecall(...)` in ordinary Solidity.
    ExpressionDelegatecall,
    /// Inline assembly kept as raw text (pre-0.6 pragma).
    AsmString,
    /// Inline assembly parsed as a Yul AST (0.6+ pragma).
    AsmYul,
    None,
}

/// A function body the proxy search visited; the upgradeability pass reuses
/// this set to hunt for hardcoded-slot loads along the same call chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScannedFn {
    Fallback,
    Receive,
    /// Structural-signature key into `ResolvedContract::all_functions`.
    Named(String),
}

#[derive(Clone, Debug)]
pub struct ProxyFinding {
    pub is_proxy: bool,
    /// The variable the target address comes from, when it resolves: a state
    /// variable, a parameter/local, a slot-holding constant, or a synthetic
    /// constant for literal targets.
    pub delegates_to: Option<VariableRef>,
    pub mechanism: Mechanism,
    /// Storage slot the target is loaded from, when the load uses a literal
    /// or constant-evaluable slot.
    pub slot_literal: Option<Bytes32>,
    /// True when the target address is read from storage (`sload`) rather
    /// than being the value of `delegates_to` itself. A constant
    /// `delegates_to` with `via_storage_load` names a fixed *slot*, not a
    /// fixed target.
    pub via_storage_load: bool,
    /// The receiver/argument expression behind the target when it is richer
    /// than a plain identifier (mapping lookups, nested calls); kept for the
    /// pattern classifier.
    pub target_source: Option<Expr>,
    /// A delegatecall was found but its target could not be traced to any
    /// variable or slot.
    pub unresolved_target: bool,
    /// Function bodies visited, in visit order.
    pub scanned: Vec<ScannedFn>,
}

impl Default for ProxyFinding {
    fn default() -> Self {
        ProxyFinding {
            is_proxy: false,
            delegates_to: None,
            mechanism: Mechanism::None,
            slot_literal: None,
            via_storage_load: false,
            target_source: None,
            unresolved_target: false,
            scanned: Vec::new(),
        }
    }
}

impl ProxyFinding {
    fn satisfied(&self) -> bool {
        self.is_proxy && self.delegates_to.is_some()
    }
}

/// Result of searching one assembly block.
#[derive(Clone, Debug, Default)]
pub struct AsmFinding {
    pub found: bool,
    pub var: Option<VariableRef>,
    pub slot_literal: Option<Bytes32>,
    pub via_storage_load: bool,
    pub target_source: Option<Expr>,
}

/// Maximum internal-call depth searched from the fallback (1 = fallback
/// itself).
const MAX_CALL_DEPTH: u32 = 2;

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Decide whether `contract` is a proxy and resolve its delegation target.
pub fn is_proxy(unit: &CompilationUnit, contract: &ResolvedContract) -> ProxyFinding {
    let mut finding = ProxyFinding::default();
    let mut visited: HashSet<String> = HashSet::new();

    if let Some(fb) = &contract.fallback {
        finding.scanned.push(ScannedFn::Fallback);
        scan_function(unit, contract, &fb.def, 1, &mut finding, &mut visited);
    }
    if !finding.satisfied() {
        if let Some(rc) = &contract.receive {
            finding.scanned.push(ScannedFn::Receive);
            scan_function(unit, contract, &rc.def, 1, &mut finding, &mut visited);
        }
    }

    finding.unresolved_target = finding.is_proxy && finding.delegates_to.is_none();
    finding
}

/// Call-site context used to map a parameter target back to the caller's
/// argument.
struct CallSite<'a> {
    caller: &'a FunctionDef,
    args: &'a [Expr],
}

fn scan_function(
    unit: &CompilationUnit,
    contract: &ResolvedContract,
    func: &FunctionDef,
    depth: u32,
    finding: &mut ProxyFinding,
    visited: &mut HashSet<String>,
) {
    let cfg = build_cfg(func);
    for node in &cfg {
        if finding.satisfied() {
            return;
        }
        match node.node_type {
            CfgNodeType::Assembly => {
                if let Some(block) = node.yul() {
                    let asm = find_delegatecall_in_asm(block, func, contract, unit);
                    if asm.found {
                        finding.is_proxy = true;
                        if finding.mechanism == Mechanism::None {
                            finding.mechanism = match block.representation() {
                                AsmRepresentation::YulAst => Mechanism::AsmYul,
                                AsmRepresentation::RawText => Mechanism::AsmString,
                            };
                        }
                        merge_target(finding, asm.var, asm.slot_literal, asm.via_storage_load);
                        if finding.target_source.is_none() {
                            finding.target_source = asm.target_source;
                        }
                    }
                }
            }
            _ => {
                for expr in node_exprs(node) {
                    if let Some(receiver) = find_delegatecall_in_expression(expr) {
                        finding.is_proxy = true;
                        if finding.mechanism == Mechanism::None {
                            finding.mechanism = Mechanism::ExpressionDelegatecall;
                        }
                        let (var, source) = resolve_receiver(receiver, func, contract, unit);
                        merge_target(finding, var, None, false);
                        if finding.target_source.is_none() {
                            finding.target_source = source;
                        }
                        if finding.satisfied() {
                            return;
                        }
                    }
                }
            }
        }

        // One level of internal-call chasing: scan own functions invoked
        // from this node (the `_delegate(impl)` idiom).
        if depth < MAX_CALL_DEPTH {
            for expr in node_exprs(node) {
                let mut callees: Vec<(&str, &[Expr])> = Vec::new();
                expr.walk(&mut |e| {
                    if let ExprKind::Call { callee, args, .. } = &e.kind {
                        if let ExprKind::Ident(name) = &callee.kind {
                            callees.push((name, args));
                        }
                    }
                });
                for (name, args) in callees {
                    if finding.satisfied() {
                        return;
                    }
                    for (key, owned) in contract.all_functions.iter() {
                        if owned.def.name != name || owned.def.body.is_none() {
                            continue;
                        }
                        if !visited.insert(key.clone()) {
                            continue;
                        }
                        finding.scanned.push(ScannedFn::Named(key.clone()));
                        let site = CallSite { caller: func, args };
                        let before = finding.delegates_to.clone();
                        scan_function(unit, contract, &owned.def, depth + 1, finding, visited);
                        // If the callee's target resolved to one of its own
                        // parameters, substitute the call-site argument.
                        if before.is_none() {
                            refine_parameter_target(unit, contract, &owned.def, &site, finding);
                        }
                    }
                }
            }
        }
    }
}

/// Root expressions of a CFG node (statement payloads included).
fn node_exprs(node: &crate::model::CfgNode) -> Vec<&Expr> {
    use crate::model::CfgPayload;
    let mut out = Vec::new();
    match &node.payload {
        CfgPayload::Expr(e) => out.push(e),
        CfgPayload::Stmt(s) => match &s.kind {
            StmtKind::Expr(e) => out.push(e),
            StmtKind::VarDecl { init: Some(e), .. } => out.push(e),
            StmtKind::Return(Some(e)) => out.push(e),
            StmtKind::Require { args }
            | StmtKind::Emit { args, .. }
            | StmtKind::Revert { args, .. } => out.extend(args.iter()),
            _ => {}
        },
        _ => {}
    }
    out
}

/// Fold a newly found target into the finding without discarding earlier,
/// more specific evidence.
fn merge_target(
    finding: &mut ProxyFinding,
    var: Option<VariableRef>,
    slot: Option<Bytes32>,
    via_storage_load: bool,
) {
    if finding.delegates_to.is_none() {
        finding.delegates_to = var;
    }
    if finding.slot_literal.is_none() {
        finding.slot_literal = slot;
    }
    finding.via_storage_load |= via_storage_load;
}

/// After scanning a callee, replace a parameter-typed target with whatever
/// the caller passed in that position.
fn refine_parameter_target(
    unit: &CompilationUnit,
    contract: &ResolvedContract,
    callee: &FunctionDef,
    site: &CallSite,
    finding: &mut ProxyFinding,
) {
    let Some(target) = &finding.delegates_to else { return };
    if target.scope != VarScope::Parameter {
        return;
    }
    let Some(index) = callee
        .params
        .iter()
        .position(|p| p.name.as_deref() == Some(target.name.as_str()))
    else {
        return;
    };
    let Some(arg) = site.args.get(index) else { return };

    match &arg.kind {
        ExprKind::Ident(name) => {
            if let Some(var) = find_delegate_var_from_name(name, site.caller, contract, unit) {
                finding.delegates_to = Some(var);
            }
        }
        // `_delegate(_implementation())`: chase a single-level getter whose
        // returns name a state variable.
        ExprKind::Call { callee: inner, .. } => {
            if let ExprKind::Ident(getter_name) = &inner.kind {
                if let Some(var) = trace_getter_return(getter_name, contract, unit) {
                    finding.delegates_to = Some(var);
                    return;
                }
            }
            finding.delegates_to = None;
            if finding.target_source.is_none() {
                finding.target_source = Some(arg.clone());
            }
        }
        _ => {
            let ctx = ConstContext::new(unit, Some(contract));
            if let Some(value) = eval_const_expr(arg, &ctx) {
                finding.delegates_to = Some(synthetic_constant(arg, Some(value)));
            } else if let Some(var) = resolve_receiver(arg, site.caller, contract, unit).0 {
                finding.delegates_to = Some(var);
            } else {
                finding.delegates_to = None;
                if finding.target_source.is_none() {
                    finding.target_source = Some(arg.clone());
                }
            }
        }
    }
}

/// If `name` is an own function whose return statements all yield the same
/// resolvable variable, return that variable.
fn trace_getter_return(
    name: &str,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
) -> Option<VariableRef> {
    let getter = contract
        .all_functions
        .values()
        .find(|f| f.def.name == name && f.def.body.is_some())?;
    let body = getter.def.body.as_ref()?;
    let mut returned: Vec<&Expr> = Vec::new();
    for s in body {
        s.walk(&mut |st| {
            if let StmtKind::Return(Some(e)) = &st.kind {
                returned.push(e);
            }
        });
    }
    let mut resolved: Option<VariableRef> = None;
    if returned.is_empty() {
        return None;
    }
    for e in returned {
        let name = e.as_ident()?;
        let var = find_delegate_var_from_name(name, &getter.def, contract, unit)?;
        match &resolved {
            None => resolved = Some(var),
            Some(prev) if prev.name == var.name => {}
            Some(_) => return None,
        }
    }
    resolved.filter(|v| v.scope == VarScope::State)
}

// ---------------------------------------------------------------------------
// Expression-level search
// ---------------------------------------------------------------------------

/// Find a `<receiver>.delegatecall` anywhere inside `expr`; returns the
/// receiver expression. Chained call options (`.value(x)`, `.gas(x)`, or
/// `{value: x}`) sit above the member access and are skipped by the walk.
pub fn find_delegatecall_in_expression(expr: &Expr) -> Option<&Expr> {
    let mut found: Option<&Expr> = None;
    expr.walk(&mut |e| {
        if found.is_some() {
            return;
        }
        if let ExprKind::Member { base, member } = &e.kind {
            if member == "delegatecall" {
                found = Some(base);
            }
        }
    });
    found
}

/// Resolve a delegatecall receiver to a variable, plus the richer source
/// expression when the receiver is not a plain identifier.
fn resolve_receiver(
    receiver: &Expr,
    parent: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
) -> (Option<VariableRef>, Option<Expr>) {
    match &receiver.kind {
        ExprKind::Ident(name) => {
            let var = find_delegate_var_from_name(name, parent, contract, unit);
            // When the identifier chased through to a mapping (`address
            // facet = facets[msg.sig]`), surface the lookup expression for
            // the classifier.
            let source = var
                .as_ref()
                .filter(|v| v.ty.as_ref().is_some_and(TypeLabel::is_mapping))
                .and_then(|_| local_initializer(name, parent))
                .filter(|init| matches!(init.kind, ExprKind::Index { .. }))
                .cloned();
            (var, source)
        }
        // `Storage.implementation`-style member access to a state variable.
        ExprKind::Member { member, .. } => {
            let var = contract
                .state_var(member)
                .cloned()
                .or_else(|| foreign_state_var(member, contract, unit));
            (var, Some(receiver.clone()))
        }
        // `facets[msg.sig].delegatecall(...)` — the mapping itself is the
        // target variable; the classifier inspects the index expression.
        ExprKind::Index { base, .. } => {
            let var = match &base.kind {
                ExprKind::Ident(name) => {
                    find_delegate_var_from_name(name, parent, contract, unit)
                }
                _ => None,
            };
            (var, Some(receiver.clone()))
        }
        ExprKind::Literal(Lit::Address(_)) | ExprKind::Literal(Lit::Number { .. }) => {
            let ctx = ConstContext::new(unit, Some(contract));
            let value = eval_const_expr(receiver, &ctx);
            (Some(synthetic_constant(receiver, value)), None)
        }
        // Casts: `payable(x).delegatecall`, `address(x).delegatecall`.
        ExprKind::Call { callee, args, .. }
            if matches!(&callee.kind, ExprKind::ElemType(_)) && args.len() == 1 =>
        {
            resolve_receiver(&args[0], parent, contract, unit)
        }
        // A computed receiver (nested call, conditional, …) stays
        // unresolved; the source expression is preserved for the classifier.
        _ => (None, Some(receiver.clone())),
    }
}

fn synthetic_constant(expr: &Expr, value: Option<Bytes32>) -> VariableRef {
    let name = value
        .map(|v| v.to_hex())
        .unwrap_or_else(|| "<literal>".to_string());
    VariableRef {
        name,
        scope: VarScope::SyntheticConstant,
        declaring_contract: None,
        ty: Some(TypeLabel::Elementary(ElementaryType::Address { payable: false })),
        is_constant: true,
        initializer: Some(expr.clone()),
        visibility: None,
        mutability: Some(VarMutability::Constant),
        span: Some(expr.span.clone()),
    }
}

/// Initializer expression of the local named `name` in `parent`, if any.
pub fn local_initializer<'a>(name: &str, parent: &'a FunctionDef) -> Option<&'a Expr> {
    let body = parent.body.as_ref()?;
    let mut found: Option<&'a Expr> = None;
    for s in body {
        s.walk(&mut |st| {
            if found.is_some() {
                return;
            }
            if let StmtKind::VarDecl { decls, init: Some(init) } = &st.kind {
                if decls.len() == 1
                    && decls[0].as_ref().is_some_and(|d| d.name == name)
                {
                    found = Some(init);
                }
            }
        });
        if found.is_some() {
            break;
        }
    }
    found
}

fn foreign_state_var(
    name: &str,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
) -> Option<VariableRef> {
    unit.contracts
        .iter()
        .filter(|c| c.name() != contract.name())
        .flat_map(|c| c.def.state_vars.iter().map(move |v| (c, v)))
        .find(|(_, v)| v.name == name)
        .map(|(c, v)| VariableRef::from_state_var(v, c.name()))
}

// ---------------------------------------------------------------------------
// Name resolution
// ---------------------------------------------------------------------------

/// Resolve an identifier seen at a delegatecall site to a variable.
///
/// Order: parent function parameters and locals, then the contract's own
/// state variables (inherited included), then exact-name state variables of
/// other contracts in the unit. A local whose initializer is itself a plain
/// variable reference is traced through to that variable.
pub fn find_delegate_var_from_name(
    name: &str,
    parent: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
) -> Option<VariableRef> {
    // Parameters.
    if let Some(p) = parent.params.iter().find(|p| p.name.as_deref() == Some(name)) {
        return Some(VariableRef {
            name: name.to_string(),
            scope: VarScope::Parameter,
            declaring_contract: None,
            ty: Some(p.ty.clone()),
            is_constant: false,
            initializer: None,
            visibility: None,
            mutability: None,
            span: Some(p.span.clone()),
        });
    }

    // Locals: any declaration statement in the body with a matching name.
    if let Some(body) = &parent.body {
        let mut hit: Option<(&VarDeclPart, Option<&Expr>)> = None;
        for s in body {
            s.walk(&mut |st| {
                if hit.is_some() {
                    return;
                }
                if let StmtKind::VarDecl { decls, init } = &st.kind {
                    for d in decls.iter().flatten() {
                        if d.name == name {
                            let init = if decls.len() == 1 { init.as_ref() } else { None };
                            hit = Some((d, init));
                            return;
                        }
                    }
                }
            });
            if hit.is_some() {
                break;
            }
        }
        if let Some((decl, init)) = hit {
            // `address impl = implementation;` — prefer the variable the
            // local was loaded from.
            if let Some(init_expr) = init {
                if let ExprKind::Ident(source) = &init_expr.kind {
                    if let Some(var) = contract
                        .state_var(source)
                        .cloned()
                        .or_else(|| foreign_state_var(source, contract, unit))
                    {
                        return Some(var);
                    }
                }
                // `address facet = facets[msg.sig];` — the mapping is the
                // real target.
                if let ExprKind::Index { base, .. } = &init_expr.kind {
                    if let ExprKind::Ident(m) = &base.kind {
                        if let Some(var) = contract
                            .state_var(m)
                            .cloned()
                            .or_else(|| foreign_state_var(m, contract, unit))
                        {
                            if var.ty.as_ref().is_some_and(TypeLabel::is_mapping) {
                                return Some(var);
                            }
                        }
                    }
                }
                let ctx = ConstContext::new(unit, Some(contract));
                if let Some(value) = eval_const_expr(init_expr, &ctx) {
                    let mut var = synthetic_constant(init_expr, Some(value));
                    var.name = name.to_string();
                    return Some(var);
                }
            }
            return Some(VariableRef {
                name: name.to_string(),
                scope: VarScope::Local,
                declaring_contract: None,
                ty: Some(decl.ty.clone()),
                is_constant: false,
                initializer: init.cloned(),
                visibility: None,
                mutability: None,
                span: Some(decl.span.clone()),
            });
        }
    }

    // Own state variables, inherited included.
    if let Some(var) = contract.state_var(name) {
        return Some(var.clone());
    }

    // Cross-contract: exact-name state variables elsewhere in the unit.
    foreign_state_var(name, contract, unit)
}

// ---------------------------------------------------------------------------
// Assembly search
// ---------------------------------------------------------------------------

/// Search one assembly block for a delegatecall and trace its second
/// argument (the target address) to a variable and/or a storage slot.
pub fn find_delegatecall_in_asm(
    block: &YulBlock,
    parent: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
) -> AsmFinding {
    match &block.ast {
        Some(stmts) => find_in_yul_ast(stmts, parent, contract, unit),
        None => find_in_raw_text(&block.text, parent, contract, unit),
    }
}

// --- Yul AST path ---

fn find_in_yul_ast(
    stmts: &[YulStmt],
    parent: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
) -> AsmFinding {
    // Bindings: `let x := e` and `x := e`, last write wins.
    let mut bindings: Vec<(&str, &YulExpr)> = Vec::new();
    walk_yul_stmts(stmts, &mut |s| match s {
        YulStmt::Let { names, value: Some(v) } if names.len() == 1 => {
            bindings.push((names[0].as_str(), v));
        }
        YulStmt::Assign { names, value } if names.len() == 1 => {
            bindings.push((names[0].as_str(), value));
        }
        _ => {}
    });

    let mut finding = AsmFinding::default();
    let mut targets: Vec<&YulExpr> = Vec::new();
    collect_delegatecall_targets(stmts, &mut targets);

    for target in targets {
        finding.found = true;
        let mut seen = HashSet::new();
        resolve_yul_target(target, &bindings, parent, contract, unit, &mut finding, 0, &mut seen);
        if finding.var.is_some() || finding.slot_literal.is_some() {
            break;
        }
    }
    finding
}

/// Second arguments of every `delegatecall(...)` in the block.
fn collect_delegatecall_targets<'a>(stmts: &'a [YulStmt], out: &mut Vec<&'a YulExpr>) {
    walk_yul_stmts(stmts, &mut |s| {
        let exprs: Vec<&'a YulExpr> = match s {
            YulStmt::Let { value: Some(v), .. } => vec![v],
            YulStmt::Assign { value, .. } => vec![value],
            YulStmt::Expr(e) => vec![e],
            YulStmt::If { cond, .. } => vec![cond],
            YulStmt::Switch { scrutinee, .. } => vec![scrutinee],
            YulStmt::For { cond, .. } => vec![cond],
            _ => vec![],
        };
        for e in exprs {
            e.walk(&mut |inner| {
                if let YulExpr::Call { name, args } = inner {
                    if name == "delegatecall" && args.len() >= 2 {
                        out.push(&args[1]);
                    }
                }
            });
        }
    });
}

/// Trace a Yul expression that produced the delegatecall target.
#[allow(clippy::too_many_arguments)]
fn resolve_yul_target(
    expr: &YulExpr,
    bindings: &[(&str, &YulExpr)],
    parent: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
    finding: &mut AsmFinding,
    depth: u32,
    seen: &mut HashSet<String>,
) {
    if depth > 8 {
        return;
    }
    match expr {
        YulExpr::Lit(lit) => {
            if let Some(value) = lit.as_value() {
                finding.var = Some(synthetic_yul_constant(value));
            }
        }
        YulExpr::Ident(name) => {
            if !seen.insert(name.clone()) {
                return;
            }
            // Chase the most recent binding for this name.
            if let Some((_, bound)) = bindings.iter().rev().find(|(n, _)| n == name) {
                resolve_yul_target(
                    bound, bindings, parent, contract, unit, finding, depth + 1, seen,
                );
                // A local loaded from storage still deserves a variable ref
                // if nothing more specific resolved.
                if finding.var.is_none() {
                    finding.var = Some(yul_local(name));
                }
            } else if let Some(var) = find_delegate_var_from_name(name, parent, contract, unit) {
                finding.var = Some(var);
            }
        }
        YulExpr::Call { name, args } => match (name.as_str(), args.as_slice()) {
            ("sload", [slot_expr]) => {
                finding.via_storage_load = true;
                match slot_expr {
                    YulExpr::Lit(lit) => {
                        finding.slot_literal = lit.as_value();
                    }
                    YulExpr::Ident(slot_name) => {
                        // `sload(IMPL_SLOT)`: the slot-holding variable is
                        // the best handle for the setter hunt.
                        resolve_slot_ident(
                            slot_name, bindings, parent, contract, unit, finding, depth, seen,
                        );
                    }
                    other => {
                        // `sload(and(x, mask))` and friends: try to evaluate
                        // through unwrapping.
                        if let Some(inner) = unwrap_and(other) {
                            resolve_yul_target(
                                inner, bindings, parent, contract, unit, finding, depth + 1, seen,
                            );
                        }
                    }
                }
            }
            ("and", _) => {
                if let Some(inner) = unwrap_and(expr) {
                    resolve_yul_target(
                        inner, bindings, parent, contract, unit, finding, depth + 1, seen,
                    );
                }
            }
            _ => {}
        },
    }
}

/// Resolve an identifier used as an `sload` slot: a Yul binding, a constant
/// state variable, or a file constant.
#[allow(clippy::too_many_arguments)]
fn resolve_slot_ident(
    slot_name: &str,
    bindings: &[(&str, &YulExpr)],
    parent: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
    finding: &mut AsmFinding,
    depth: u32,
    seen: &mut HashSet<String>,
) {
    if depth > 8 || !seen.insert(format!("slot:{slot_name}")) {
        return;
    }
    // Yul-level binding: `let slot := 0x…` or `let slot := IMPL_SLOT`.
    if let Some((_, bound)) = bindings.iter().rev().find(|(n, _)| n == &slot_name) {
        match bound {
            YulExpr::Lit(lit) => {
                finding.slot_literal = lit.as_value();
                return;
            }
            YulExpr::Ident(next) => {
                resolve_slot_ident(
                    next, bindings, parent, contract, unit, finding, depth + 1, seen,
                );
                return;
            }
            _ => return,
        }
    }
    // A Solidity variable: constant slots evaluate; the variable itself is
    // the slot holder.
    if let Some(var) = find_delegate_var_from_name(slot_name, parent, contract, unit) {
        if let Some(init) = &var.initializer {
            let ctx = ConstContext::new(unit, Some(contract));
            finding.slot_literal = eval_const_expr(init, &ctx);
        }
        finding.var = Some(var);
    } else if let Some(fc) = unit.file_constants.get(slot_name) {
        if let Some(init) = &fc.initializer {
            let ctx = ConstContext::new(unit, Some(contract));
            finding.slot_literal = eval_const_expr(init, &ctx);
        }
        finding.var = Some(fc.clone());
    }
}

/// `and(x, mask)` unwrapping: prefer the operand that is not a literal
/// (masks like `0xffff…` are literals).
fn unwrap_and(expr: &YulExpr) -> Option<&YulExpr> {
    let YulExpr::Call { name, args } = expr else { return None };
    if name != "and" || args.len() != 2 {
        return None;
    }
    args.iter().find(|a| !matches!(a, YulExpr::Lit(_)))
}

fn synthetic_yul_constant(value: Bytes32) -> VariableRef {
    VariableRef {
        name: value.to_hex(),
        scope: VarScope::SyntheticConstant,
        declaring_contract: None,
        ty: Some(TypeLabel::Elementary(ElementaryType::Address { payable: false })),
        is_constant: true,
        initializer: None,
        visibility: None,
        mutability: Some(VarMutability::Constant),
        span: None,
    }
}

fn yul_local(name: &str) -> VariableRef {
    VariableRef {
        name: name.to_string(),
        scope: VarScope::Local,
        declaring_contract: None,
        ty: None,
        is_constant: false,
        initializer: None,
        visibility: None,
        mutability: None,
        span: None,
    }
}

// --- Raw-text path (pre-0.6 pragmas) ---

fn find_in_raw_text(
    text: &str,
    parent: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
) -> AsmFinding {
    let mut finding = AsmFinding::default();
    for line in text.split('\n') {
        let Some(arg) = second_delegatecall_arg(line) else { continue };
        finding.found = true;
        let mut seen = HashSet::new();
        resolve_raw_target(&arg, text, parent, contract, unit, &mut finding, 0, &mut seen);
        if finding.var.is_some() || finding.slot_literal.is_some() {
            break;
        }
    }
    finding
}

/// Extract the second argument of a `delegatecall(...)` occurrence on one
/// line, honoring nested parentheses.
fn second_delegatecall_arg(line: &str) -> Option<String> {
    let idx = find_word(line, "delegatecall")?;
    let rest = &line[idx + "delegatecall".len()..];
    let open = rest.find('(')?;
    let args_text = balanced_paren_contents(&rest[open..])?;
    let args = split_top_level_commas(&args_text);
    args.get(1).map(|s| s.trim().to_string())
}

/// Find `word` at an identifier boundary.
pub(crate) fn find_word(haystack: &str, word: &str) -> Option<usize> {
    let bytes = haystack.as_bytes();
    let mut from = 0;
    while let Some(pos) = haystack[from..].find(word) {
        let at = from + pos;
        let before_ok = at == 0 || !is_ident_char(bytes[at - 1]);
        let after = at + word.len();
        let after_ok = after >= bytes.len() || !is_ident_char(bytes[after]);
        if before_ok && after_ok {
            return Some(at);
        }
        from = at + word.len();
    }
    None
}

fn is_ident_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'$' || b == b'.'
}

/// Contents of the first balanced parenthesis group starting at `text[0] ==
/// '('`.
pub(crate) fn balanced_paren_contents(text: &str) -> Option<String> {
    let mut depth = 0i32;
    let mut out = String::new();
    for (i, c) in text.char_indices() {
        match c {
            '(' => {
                depth += 1;
                if depth == 1 {
                    continue;
                }
            }
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(out);
                }
            }
            _ => {}
        }
        if depth >= 1 && i > 0 {
            out.push(c);
        }
    }
    None
}

pub(crate) fn split_top_level_commas(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth -= 1;
                cur.push(c);
            }
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// Trace a textual target expression from the raw assembly.
#[allow(clippy::too_many_arguments)]
fn resolve_raw_target(
    arg: &str,
    whole_text: &str,
    parent: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
    finding: &mut AsmFinding,
    depth: u32,
    seen: &mut HashSet<String>,
) {
    if depth > 8 {
        return;
    }
    let arg = arg.trim();

    if let Some(rest) = arg.strip_prefix("sload") {
        let rest = rest.trim_start();
        if rest.starts_with('(') {
            if let Some(slot_text) = balanced_paren_contents(rest) {
                finding.via_storage_load = true;
                let slot_text = slot_text.trim();
                if let Some(value) = Bytes32::from_literal_text(slot_text) {
                    finding.slot_literal = Some(value);
                } else if is_identifier(slot_text) {
                    resolve_raw_slot_ident(
                        slot_text, whole_text, parent, contract, unit, finding, depth, seen,
                    );
                } else if let Some(inner) = unwrap_and_text(slot_text) {
                    resolve_raw_target(
                        &inner, whole_text, parent, contract, unit, finding, depth + 1, seen,
                    );
                }
            }
            return;
        }
    }

    if let Some(inner) = unwrap_and_text(arg) {
        resolve_raw_target(&inner, whole_text, parent, contract, unit, finding, depth + 1, seen);
        return;
    }

    if let Some(value) = Bytes32::from_literal_text(arg) {
        finding.var = Some(synthetic_yul_constant(value));
        return;
    }

    if is_identifier(arg) {
        if !seen.insert(arg.to_string()) {
            return;
        }
        // Textual binding scan: `let arg :=` / `arg :=` anywhere in the
        // block.
        if let Some(rhs) = textual_binding(whole_text, arg) {
            resolve_raw_target(&rhs, whole_text, parent, contract, unit, finding, depth + 1, seen);
            if finding.var.is_none() {
                finding.var = Some(yul_local(arg));
            }
            return;
        }
        if let Some(var) = find_delegate_var_from_name(arg, parent, contract, unit) {
            finding.var = Some(var);
        }
    }
}

/// Slot identifier in raw text: a Yul binding or a Solidity constant.
#[allow(clippy::too_many_arguments)]
fn resolve_raw_slot_ident(
    slot_name: &str,
    whole_text: &str,
    parent: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
    finding: &mut AsmFinding,
    depth: u32,
    seen: &mut HashSet<String>,
) {
    if depth > 8 || !seen.insert(format!("slot:{slot_name}")) {
        return;
    }
    if let Some(rhs) = textual_binding(whole_text, slot_name) {
        let rhs = rhs.trim().to_string();
        if let Some(value) = Bytes32::from_literal_text(&rhs) {
            finding.slot_literal = Some(value);
            return;
        }
        if is_identifier(&rhs) {
            resolve_raw_slot_ident(
                &rhs, whole_text, parent, contract, unit, finding, depth + 1, seen,
            );
        }
        return;
    }
    if let Some(var) = find_delegate_var_from_name(slot_name, parent, contract, unit) {
        if let Some(init) = &var.initializer {
            let ctx = ConstContext::new(unit, Some(contract));
            finding.slot_literal = eval_const_expr(init, &ctx);
        }
        finding.var = Some(var);
    } else if let Some(fc) = unit.file_constants.get(slot_name) {
        if let Some(init) = &fc.initializer {
            let ctx = ConstContext::new(unit, Some(contract));
            finding.slot_literal = eval_const_expr(init, &ctx);
        }
        finding.var = Some(fc.clone());
    }
}

/// Right-hand side of the last `let name :=` / `name :=` in the text.
pub(crate) fn textual_binding(text: &str, name: &str) -> Option<String> {
    let mut last: Option<String> = None;
    for line in text.split('\n') {
        let trimmed = line.trim();
        let after_let = trimmed.strip_prefix("let ").map(str::trim_start).unwrap_or(trimmed);
        if let Some(rest) = after_let.strip_prefix(name) {
            let rest = rest.trim_start();
            if let Some(rhs) = rest.strip_prefix(":=") {
                last = Some(rhs.trim().to_string());
            }
        }
    }
    last
}

pub(crate) fn is_identifier(text: &str) -> bool {
    !text.is_empty()
        && text.bytes().all(is_ident_char)
        && !text.as_bytes()[0].is_ascii_digit()
}

fn unwrap_and_text(text: &str) -> Option<String> {
    let rest = text.strip_prefix("and")?.trim_start();
    if !rest.starts_with('(') {
        return None;
    }
    let contents = balanced_paren_contents(rest)?;
    let args = split_top_level_commas(&contents);
    args.into_iter()
        .find(|a| Bytes32::from_literal_text(a).is_none())
}
