// SPDX-License-Identifier: Apache-2.0

//! Upgradeability determination: given a proxy finding, decide whether the
//! implementation address can actually change, and say why.
//!
//! The decision tree runs: constancy gate → setter search → getter search →
//! hardcoded-slot fallback. Setters and getters are searched in the contract
//! that owns the target variable (the proxy's own resolved view when the
//! variable is its own or inherited; the foreign contract when the proxy
//! reads another contract's storage).

use crate::ast::*;
use crate::consteval::{eval_const_expr, ConstContext};
use crate::model::{CompilationUnit, ResolvedContract, VarScope, VariableRef};
use crate::patterns::KnownSlots;
use crate::proxy::{
    balanced_paren_contents, find_word, is_identifier, split_top_level_commas, textual_binding,
    ProxyFinding, ScannedFn,
};
use crate::value::Bytes32;
use serde::{Deserialize, Serialize};
use std::fmt;

// ---------------------------------------------------------------------------
// Verdict types
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum UpgradeReason {
    NotProxy,
    TargetConstant,
    SetterFound,
    GetterNonconstant,
    HardcodedSlotKnown,
    HardcodedSlotUnknown,
    NoEvidence,
}

impl UpgradeReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            UpgradeReason::NotProxy => "NOT_PROXY",
            UpgradeReason::TargetConstant => "TARGET_CONSTANT",
            UpgradeReason::SetterFound => "SETTER_FOUND",
            UpgradeReason::GetterNonconstant => "GETTER_NONCONSTANT",
            UpgradeReason::HardcodedSlotKnown => "HARDCODED_SLOT_KNOWN",
            UpgradeReason::HardcodedSlotUnknown => "HARDCODED_SLOT_UNKNOWN",
            UpgradeReason::NoEvidence => "NO_EVIDENCE",
        }
    }
}

impl fmt::Display for UpgradeReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A stable reference to a function (or implicit getter) in the unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionRef {
    /// Contract the function is declared in.
    pub contract: String,
    pub name: String,
    /// Structural signature (`name(paramTypes)`), the lookup key within the
    /// resolved contract. Implicit public-variable getters use `name()`.
    pub signature: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct UpgradeabilityVerdict {
    pub is_upgradeable: bool,
    pub reason: UpgradeReason,
    pub impl_setter: Option<FunctionRef>,
    pub impl_getter: Option<FunctionRef>,
    pub slot: Option<Bytes32>,
    /// Every setter matched, canonical first.
    pub all_setters: Vec<FunctionRef>,
    /// Metadata only — the canonical setter sits behind an admin/owner
    /// check. Never changes the verdict; the classifier consumes it.
    pub setter_guarded_by_admin: bool,
    pub warning: Option<String>,
}

impl UpgradeabilityVerdict {
    fn negative(reason: UpgradeReason) -> Self {
        UpgradeabilityVerdict {
            is_upgradeable: false,
            reason,
            impl_setter: None,
            impl_getter: None,
            slot: None,
            all_setters: Vec::new(),
            setter_guarded_by_admin: false,
            warning: None,
        }
    }
}

// ---------------------------------------------------------------------------
// Decision tree
// ---------------------------------------------------------------------------

/// Decide whether the proxy's implementation address can be updated.
pub fn is_upgradeable_proxy(
    unit: &CompilationUnit,
    contract: &ResolvedContract,
    finding: &ProxyFinding,
) -> UpgradeabilityVerdict {
    // (1) Nothing to reason about: not a proxy, or the search produced
    // neither a target variable nor a slot.
    if !finding.is_proxy || (finding.delegates_to.is_none() && finding.slot_literal.is_none()) {
        return UpgradeabilityVerdict::negative(UpgradeReason::NotProxy);
    }

    let target = finding.delegates_to.as_ref();

    // (2) Constancy gate: a fixed target can never change. A constant that
    // merely *names the slot* (the target itself is then loaded from
    // storage) does not gate.
    if let Some(t) = target {
        if t.is_constant && !finding.via_storage_load {
            return UpgradeabilityVerdict::negative(UpgradeReason::TargetConstant);
        }
    }

    // Search scope: the contract that owns the target variable. A declaring
    // contract inside our own linearization is already folded into our
    // resolved view; a declaring contract outside it means the proxy reads
    // foreign storage, so the setter lives over there.
    let scope = target
        .and_then(|t| t.declaring_contract.as_deref())
        .filter(|decl| !contract.inherits(decl))
        .and_then(|decl| unit.get(decl))
        .unwrap_or(contract);

    let slot = finding.slot_literal;

    // (3) Setter search.
    let setters = find_setter_in_contract(scope, unit, target, slot, finding.via_storage_load);
    if !setters.is_empty() {
        let canonical = setters[0].clone();
        let guarded = scope
            .all_functions
            .get(&canonical.signature)
            .is_some_and(|f| setter_is_guarded(&f.def, scope));
        return UpgradeabilityVerdict {
            is_upgradeable: true,
            reason: UpgradeReason::SetterFound,
            impl_setter: Some(canonical),
            impl_getter: None,
            slot,
            all_setters: setters,
            setter_guarded_by_admin: guarded,
            warning: None,
        };
    }

    // (4) Getter search in the same scope.
    if let Some(getter) = find_getter_in_contract(scope, unit, target, slot, finding.via_storage_load)
    {
        let nonconstant = match &getter.kind {
            GetterKind::Explicit => scope
                .all_functions
                .get(&getter.func.signature)
                .map(|f| getter_return_nonconstant(&f.def, scope, unit))
                .unwrap_or(false),
            GetterKind::AsmOnly => true,
            GetterKind::ImplicitPublicVar { is_constant } => !is_constant,
        };
        if nonconstant {
            return UpgradeabilityVerdict {
                is_upgradeable: true,
                reason: UpgradeReason::GetterNonconstant,
                impl_setter: None,
                impl_getter: Some(getter.func),
                slot,
                all_setters: Vec::new(),
                setter_guarded_by_admin: false,
                warning: None,
            };
        }
        return UpgradeabilityVerdict {
            is_upgradeable: false,
            reason: UpgradeReason::NoEvidence,
            impl_setter: None,
            impl_getter: Some(getter.func),
            slot,
            all_setters: Vec::new(),
            setter_guarded_by_admin: false,
            warning: Some(
                "a getter for the delegation target exists but every return path is a \
                 compile-time constant; treating as not upgradeable"
                    .to_string(),
            ),
        };
    }

    // (5) Hardcoded-slot fallback over the functions the proxy search
    // visited.
    if let Some((found_slot, known)) = find_sload_from_hardcoded_storage_slot(contract, unit, finding)
    {
        if known {
            return UpgradeabilityVerdict {
                is_upgradeable: true,
                reason: UpgradeReason::HardcodedSlotKnown,
                impl_setter: None,
                impl_getter: None,
                slot: Some(found_slot),
                all_setters: Vec::new(),
                setter_guarded_by_admin: false,
                warning: None,
            };
        }
        if found_slot != Bytes32::from_u64(0) {
            return UpgradeabilityVerdict {
                is_upgradeable: false,
                reason: UpgradeReason::HardcodedSlotUnknown,
                impl_setter: None,
                impl_getter: None,
                slot: Some(found_slot),
                all_setters: Vec::new(),
                setter_guarded_by_admin: false,
                warning: Some(format!(
                    "delegation target is loaded from hardcoded storage slot {} which matches \
                     no known convention and has no in-source setter",
                    found_slot.to_hex()
                )),
            };
        }
        // Slot zero is the first declared state variable, not an
        // unstructured-storage convention; with no setter or getter it is
        // no evidence of upgradeability.
        let mut verdict = UpgradeabilityVerdict::negative(UpgradeReason::NoEvidence);
        verdict.slot = Some(found_slot);
        verdict.warning = Some(
            "delegation target is loaded from storage slot zero with no setter or getter in \
             scope"
                .to_string(),
        );
        return verdict;
    }

    let mut verdict = UpgradeabilityVerdict::negative(UpgradeReason::NoEvidence);
    verdict.slot = slot;
    verdict
}

// ---------------------------------------------------------------------------
// Setter search
// ---------------------------------------------------------------------------

/// All functions in `scope` that can overwrite the delegation target:
/// an assignment whose left side resolves to the target, an assembly
/// `sstore` into the slot, or a store into the target mapping. The first
/// entry (linearization order, derived contracts first) is canonical.
/// Constructors, fallback, and receive never count.
pub fn find_setter_in_contract(
    scope: &ResolvedContract,
    unit: &CompilationUnit,
    target: Option<&VariableRef>,
    slot: Option<Bytes32>,
    via_storage_load: bool,
) -> Vec<FunctionRef> {
    let mut matches: Vec<(usize, FunctionRef)> = Vec::new();
    for (sig, owned) in &scope.all_functions {
        let func = &owned.def;
        let Some(body) = &func.body else { continue };
        let mut hit = false;

        // (a)/(c) Solidity-level assignment to the target (or into the
        // target mapping).
        if let Some(t) = target {
            if t.scope == VarScope::State && !is_shadowed(&t.name, func) {
                for s in body {
                    s.walk_exprs(&mut |e| {
                        if hit {
                            return;
                        }
                        if let ExprKind::Assign { lhs, .. } = &e.kind {
                            if assign_base_name(lhs) == Some(t.name.as_str()) {
                                hit = true;
                            }
                        }
                    });
                }
            }
        }

        // (b) Assembly sstore into the known slot (or through the
        // slot-holding constant).
        if !hit {
            for arg in asm_slot_args("sstore", func, scope, unit) {
                if slot_arg_matches(&arg, slot, target, via_storage_load) {
                    hit = true;
                    break;
                }
            }
        }

        if hit {
            matches.push((
                linearization_rank(scope, &owned.declared_in),
                FunctionRef {
                    contract: owned.declared_in.clone(),
                    name: func.name.clone(),
                    signature: sig.clone(),
                },
            ));
        }
    }
    matches.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.signature.cmp(&b.1.signature)));
    matches.into_iter().map(|(_, f)| f).collect()
}

/// Position of `declared_in` in the scope's linearization, derived
/// contracts first (self = 0).
fn linearization_rank(scope: &ResolvedContract, declared_in: &str) -> usize {
    scope
        .linearization
        .iter()
        .rev()
        .position(|n| n == declared_in)
        .unwrap_or(usize::MAX)
}

/// Base variable name of an assignment left side, unwrapping mapping/array
/// indexing (`facets[sig] = x` stores into `facets`).
fn assign_base_name(lhs: &Expr) -> Option<&str> {
    match &lhs.kind {
        ExprKind::Ident(name) => Some(name),
        ExprKind::Index { base, .. } => assign_base_name(base),
        _ => None,
    }
}

/// Is `name` rebound by a parameter or local declaration inside `func`?
fn is_shadowed(name: &str, func: &FunctionDef) -> bool {
    if func.params.iter().any(|p| p.name.as_deref() == Some(name))
        || func.returns.iter().any(|p| p.name.as_deref() == Some(name))
    {
        return true;
    }
    let Some(body) = &func.body else { return false };
    let mut shadowed = false;
    for s in body {
        s.walk(&mut |st| {
            if let StmtKind::VarDecl { decls, .. } = &st.kind {
                if decls
                    .iter()
                    .flatten()
                    .any(|d| d.name == name)
                {
                    shadowed = true;
                }
            }
        });
    }
    shadowed
}

/// Guard metadata: does the setter sit behind an admin/owner comparison?
/// Checks `require(msg.sender == …)` in the body, the bodies of resolved
/// modifiers, and admin-flavored modifier names.
fn setter_is_guarded(setter: &FunctionDef, scope: &ResolvedContract) -> bool {
    for m in &setter.modifiers {
        let lower = m.name.to_ascii_lowercase();
        if lower.contains("admin") || lower.contains("owner") || lower.contains("auth") {
            return true;
        }
        if let Some(def) = scope.all_modifiers.get(&m.name) {
            if def.def.body.as_deref().is_some_and(body_has_sender_require) {
                return true;
            }
        }
    }
    setter.body.as_deref().is_some_and(body_has_sender_require)
}

fn body_has_sender_require(body: &[Stmt]) -> bool {
    let mut hit = false;
    for s in body {
        s.walk(&mut |st| {
            if hit {
                return;
            }
            if let StmtKind::Require { args } = &st.kind {
                if let Some(cond) = args.first() {
                    cond.walk(&mut |e| {
                        if let ExprKind::Binary { op: BinOp::Eq | BinOp::Ne, lhs, rhs } = &e.kind {
                            let is_sender =
                                |x: &Expr| matches!(x.kind, ExprKind::Msg(MsgField::Sender));
                            if is_sender(lhs) || is_sender(rhs) {
                                hit = true;
                            }
                        }
                    });
                }
            }
        });
        if hit {
            return true;
        }
    }
    hit
}

// ---------------------------------------------------------------------------
// Getter search
// ---------------------------------------------------------------------------

#[derive(Debug)]
enum GetterKind {
    /// A function with explicit `return` statements.
    Explicit,
    /// A function whose result is produced purely inside assembly
    /// (named-return + `sload` pattern) — always a storage read.
    AsmOnly,
    ImplicitPublicVar {
        is_constant: bool,
    },
}

#[derive(Debug)]
struct GetterMatch {
    func: FunctionRef,
    kind: GetterKind,
}

/// A function in `scope` that exposes the delegation target: returns the
/// target variable, loads the slot in assembly, or the implicit getter of a
/// public state variable.
fn find_getter_in_contract(
    scope: &ResolvedContract,
    unit: &CompilationUnit,
    target: Option<&VariableRef>,
    slot: Option<Bytes32>,
    via_storage_load: bool,
) -> Option<GetterMatch> {
    let mut matches: Vec<(usize, GetterMatch)> = Vec::new();
    for (sig, owned) in &scope.all_functions {
        let func = &owned.def;
        let Some(body) = &func.body else { continue };
        if func.returns.is_empty() {
            continue;
        }

        let mut returns_target = false;
        let mut has_return = false;
        if let Some(t) = target {
            if t.scope == VarScope::State && !is_shadowed_param(&t.name, func) {
                for s in body {
                    s.walk(&mut |st| {
                        if let StmtKind::Return(Some(expr)) = &st.kind {
                            has_return = true;
                            if expr.as_ident() == Some(t.name.as_str()) {
                                returns_target = true;
                            }
                        }
                    });
                }
            }
        }

        let mut loads_slot = false;
        if !returns_target {
            for arg in asm_slot_args("sload", func, scope, unit) {
                if slot_arg_matches(&arg, slot, target, via_storage_load) {
                    loads_slot = true;
                    break;
                }
            }
        }

        if returns_target || loads_slot {
            let kind = if returns_target || has_return {
                GetterKind::Explicit
            } else {
                GetterKind::AsmOnly
            };
            matches.push((
                linearization_rank(scope, &owned.declared_in),
                GetterMatch {
                    func: FunctionRef {
                        contract: owned.declared_in.clone(),
                        name: func.name.clone(),
                        signature: sig.clone(),
                    },
                    kind,
                },
            ));
        }
    }
    matches.sort_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| a.1.func.signature.cmp(&b.1.func.signature))
    });
    if let Some((_, m)) = matches.into_iter().next() {
        return Some(m);
    }

    // Implicit getter of a public state variable.
    let t = target?;
    if t.scope == VarScope::State && t.visibility == Some(VarVisibility::Public) {
        return Some(GetterMatch {
            func: FunctionRef {
                contract: t.declaring_contract.clone().unwrap_or_else(|| scope.name().to_string()),
                name: t.name.clone(),
                signature: format!("{}()", t.name),
            },
            kind: GetterKind::ImplicitPublicVar { is_constant: t.is_constant },
        });
    }
    None
}

/// Only parameters and named returns shadow for getter purposes — a local
/// `address implementation = …` inside the getter still reads state to
/// produce it, which is what the return-path analysis judges.
fn is_shadowed_param(name: &str, func: &FunctionDef) -> bool {
    func.params.iter().any(|p| p.name.as_deref() == Some(name))
        || func.returns.iter().any(|p| p.name.as_deref() == Some(name))
}

/// True iff every return path yields a runtime value (state read, sload,
/// external call); false as soon as any return is a compile-time constant.
pub fn getter_return_nonconstant(
    getter: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
) -> bool {
    let Some(body) = &getter.body else { return false };
    let ctx = ConstContext::new(unit, Some(contract));
    let mut any_constant = false;
    let mut saw_return = false;
    for s in body {
        s.walk(&mut |st| {
            if let StmtKind::Return(Some(expr)) = &st.kind {
                saw_return = true;
                let literal = matches!(expr.kind, ExprKind::Literal(_));
                if literal || eval_const_expr(expr, &ctx).is_some() {
                    any_constant = true;
                }
            }
        });
    }
    // No explicit returns at all (named-return + assembly) counts as a
    // runtime read.
    !saw_return || !any_constant
}

// ---------------------------------------------------------------------------
// Hardcoded-slot fallback
// ---------------------------------------------------------------------------

/// Search the functions the proxy scan visited (fallback and its callees)
/// for `sload` of a literal or constant-variable slot. Returns the first
/// slot found and whether it is in the known-slots table. The slot the
/// proxy analysis itself extracted is considered first.
pub fn find_sload_from_hardcoded_storage_slot(
    contract: &ResolvedContract,
    unit: &CompilationUnit,
    finding: &ProxyFinding,
) -> Option<(Bytes32, bool)> {
    let known = KnownSlots::verified();
    let mut candidates: Vec<Bytes32> = Vec::new();
    if let Some(s) = finding.slot_literal {
        candidates.push(s);
    }
    for func in scanned_function_defs(contract, finding) {
        for arg in asm_slot_args("sload", func, contract, unit) {
            if let SlotArg::Value(v) = arg {
                if !candidates.contains(&v) {
                    candidates.push(v);
                }
            }
        }
    }
    // Known slots win over unknown ones regardless of encounter order; the
    // proxy may load an admin slot before the implementation slot.
    if let Some(k) = candidates.iter().find(|c| known.contains(c)) {
        return Some((*k, true));
    }
    candidates.first().map(|c| (*c, false))
}

fn scanned_function_defs<'a>(
    contract: &'a ResolvedContract,
    finding: &ProxyFinding,
) -> Vec<&'a FunctionDef> {
    let mut out = Vec::new();
    for s in &finding.scanned {
        match s {
            ScannedFn::Fallback => {
                if let Some(f) = &contract.fallback {
                    out.push(&f.def);
                }
            }
            ScannedFn::Receive => {
                if let Some(f) = &contract.receive {
                    out.push(&f.def);
                }
            }
            ScannedFn::Named(key) => {
                if let Some(f) = contract.all_functions.get(key) {
                    out.push(&f.def);
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Assembly slot-argument extraction (shared by setter/getter/hardcoded)
// ---------------------------------------------------------------------------

/// First argument of every `op(…)` call in the assembly blocks of `func`,
/// resolved to a constant value where possible.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum SlotArg {
    Value(Bytes32),
    /// An identifier that did not resolve to a constant.
    Name(String),
}

fn slot_arg_matches(
    arg: &SlotArg,
    slot: Option<Bytes32>,
    target: Option<&VariableRef>,
    via_storage_load: bool,
) -> bool {
    match arg {
        SlotArg::Value(v) => slot.is_some_and(|s| s == *v),
        // `sstore(IMPL_SLOT, …)` matched by the slot-holder's name when the
        // proxy loads through that same constant.
        SlotArg::Name(n) => {
            via_storage_load && target.is_some_and(|t| t.is_constant && t.name == *n)
        }
    }
}

pub(crate) fn asm_slot_args(
    op: &str,
    func: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
) -> Vec<SlotArg> {
    let mut out = Vec::new();
    let Some(body) = &func.body else { return out };
    for s in body {
        s.walk(&mut |st| {
            if let StmtKind::Assembly(block) = &st.kind {
                match &block.ast {
                    Some(stmts) => yul_slot_args(op, stmts, func, contract, unit, &mut out),
                    None => raw_slot_args(op, &block.text, func, contract, unit, &mut out),
                }
            }
        });
    }
    out
}

fn yul_slot_args(
    op: &str,
    stmts: &[YulStmt],
    func: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
    out: &mut Vec<SlotArg>,
) {
    // Bindings in source order; shadowing within nesting is rare enough in
    // hand-written proxies that last-binding-wins is the right trade.
    let mut bindings: Vec<(&str, &YulExpr)> = Vec::new();
    walk_yul_stmts(stmts, &mut |st| match st {
        YulStmt::Let { names, value: Some(v) } | YulStmt::Assign { names, value: v }
            if names.len() == 1 =>
        {
            bindings.push((names[0].as_str(), v));
        }
        _ => {}
    });

    let mut calls: Vec<&YulExpr> = Vec::new();
    walk_yul_stmts(stmts, &mut |st| {
        let exprs: Vec<&YulExpr> = match st {
            YulStmt::Let { value: Some(v), .. } => vec![v],
            YulStmt::Assign { value, .. } => vec![value],
            YulStmt::Expr(e) => vec![e],
            YulStmt::If { cond, .. } => vec![cond],
            YulStmt::Switch { scrutinee, .. } => vec![scrutinee],
            YulStmt::For { cond, .. } => vec![cond],
            _ => vec![],
        };
        for e in exprs {
            e.walk(&mut |sub| {
                if let YulExpr::Call { name, args } = sub {
                    if name == op && !args.is_empty() {
                        calls.push(&args[0]);
                    }
                }
            });
        }
    });

    for arg in calls {
        out.push(resolve_yul_slot_arg(arg, &bindings, func, contract, unit, 0));
    }
}

fn resolve_yul_slot_arg(
    arg: &YulExpr,
    bindings: &[(&str, &YulExpr)],
    func: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
    depth: u32,
) -> SlotArg {
    if depth > 8 {
        return SlotArg::Name("<depth>".to_string());
    }
    match arg {
        YulExpr::Lit(lit) => match lit.as_value() {
            Some(v) => SlotArg::Value(v),
            None => SlotArg::Name("<literal>".to_string()),
        },
        YulExpr::Ident(name) => {
            if let Some((_, bound)) = bindings.iter().rev().find(|(n, _)| n == name) {
                let inner =
                    resolve_yul_slot_arg(bound, bindings, func, contract, unit, depth + 1);
                if matches!(inner, SlotArg::Value(_)) {
                    return inner;
                }
            }
            constant_named(name, func, contract, unit)
                .unwrap_or_else(|| SlotArg::Name(name.clone()))
        }
        YulExpr::Call { .. } => SlotArg::Name("<call>".to_string()),
    }
}

fn raw_slot_args(
    op: &str,
    text: &str,
    func: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
    out: &mut Vec<SlotArg>,
) {
    for line in text.split('\n') {
        let mut rest = line;
        while let Some(idx) = find_word(rest, op) {
            let after = &rest[idx + op.len()..];
            let Some(open) = after.find('(') else { break };
            if let Some(contents) = balanced_paren_contents(&after[open..]) {
                let args = split_top_level_commas(&contents);
                if let Some(first) = args.first() {
                    out.push(resolve_raw_slot_arg(first.trim(), text, func, contract, unit, 0));
                }
            }
            rest = &after[open..];
        }
    }
}

fn resolve_raw_slot_arg(
    arg: &str,
    whole_text: &str,
    func: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
    depth: u32,
) -> SlotArg {
    if depth > 8 {
        return SlotArg::Name("<depth>".to_string());
    }
    if let Some(v) = Bytes32::from_literal_text(arg) {
        return SlotArg::Value(v);
    }
    if is_identifier(arg) {
        if let Some(rhs) = textual_binding(whole_text, arg) {
            let inner =
                resolve_raw_slot_arg(rhs.trim(), whole_text, func, contract, unit, depth + 1);
            if matches!(inner, SlotArg::Value(_)) {
                return inner;
            }
        }
        return constant_named(arg, func, contract, unit)
            .unwrap_or_else(|| SlotArg::Name(arg.to_string()));
    }
    SlotArg::Name(arg.to_string())
}

/// A Solidity constant (state or file level) visible under `name`, folded
/// to its value.
fn constant_named(
    name: &str,
    func: &FunctionDef,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
) -> Option<SlotArg> {
    let _ = func;
    let var = contract
        .state_var(name)
        .or_else(|| unit.file_constants.get(name));
    let var = var?;
    if !var.is_constant {
        // The variable exists but is not a constant: still useful as a name
        // match (slot-holder immutables).
        return Some(SlotArg::Name(name.to_string()));
    }
    let ctx = ConstContext::new(unit, Some(contract));
    match var.initializer.as_ref().and_then(|e| eval_const_expr(e, &ctx)) {
        Some(v) => Some(SlotArg::Value(v)),
        None => Some(SlotArg::Name(name.to_string())),
    }
}
