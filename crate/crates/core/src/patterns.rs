// SPDX-License-Identifier: Apache-2.0

//! Pattern classification: function selectors, the table of well-known
//! storage slots, and the proxy-pattern taxonomy.
//!
//! The slot table is self-checking — every entry is recomputed from its
//! derivation string through [`keccak256`] on first use, and a mismatch
//! aborts the process rather than silently classifying against a corrupt
//! table.

use crate::ast::*;
use crate::consteval::{eval_const_expr, ConstContext};
use crate::keccak::keccak256;
use crate::model::{CompilationUnit, ResolvedContract, VarScope};
use crate::proxy::{local_initializer, ProxyFinding, ScannedFn};
use crate::upgradeability::UpgradeabilityVerdict;
use crate::value::Bytes32;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::OnceLock;

// ---------------------------------------------------------------------------
// Taxonomy labels
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PatternLabel {
    InheritedStorage,
    EternalStorage,
    Eip1967Unstructured,
    Eip1822Uups,
    TransparentAdmin,
    Eip1538Transparent,
    Eip2535Diamond,
    Beacon,
    Registry,
    Eip1167Minimal,
    Eip897Interface,
    BespokeUpgradeable,
}

impl PatternLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            PatternLabel::InheritedStorage => "INHERITED_STORAGE",
            PatternLabel::EternalStorage => "ETERNAL_STORAGE",
            PatternLabel::Eip1967Unstructured => "EIP1967_UNSTRUCTURED",
            PatternLabel::Eip1822Uups => "EIP1822_UUPS",
            PatternLabel::TransparentAdmin => "TRANSPARENT_ADMIN",
            PatternLabel::Eip1538Transparent => "EIP1538_TRANSPARENT",
            PatternLabel::Eip2535Diamond => "EIP2535_DIAMOND",
            PatternLabel::Beacon => "BEACON",
            PatternLabel::Registry => "REGISTRY",
            PatternLabel::Eip1167Minimal => "EIP1167_MINIMAL",
            PatternLabel::Eip897Interface => "EIP897_INTERFACE",
            PatternLabel::BespokeUpgradeable => "BESPOKE_UPGRADEABLE",
        }
    }

    /// Labels whose evidence is convention-level rather than structural.
    pub fn is_heuristic(&self) -> bool {
        matches!(self, PatternLabel::InheritedStorage | PatternLabel::EternalStorage)
    }
}

impl fmt::Display for PatternLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

// ---------------------------------------------------------------------------
// Known storage slots
// ---------------------------------------------------------------------------

/// Meaning of a well-known slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SlotRole {
    Eip1967Implementation,
    Eip1967Admin,
    Eip1967Beacon,
    Eip1822Proxiable,
    /// Pre-EIP-1967 unstructured-storage slot used by early upgradeable
    /// deployments.
    ZosImplementation,
}

impl SlotRole {
    pub fn label(&self) -> PatternLabel {
        match self {
            SlotRole::Eip1967Implementation
            | SlotRole::Eip1967Admin
            | SlotRole::Eip1967Beacon
            | SlotRole::ZosImplementation => PatternLabel::Eip1967Unstructured,
            SlotRole::Eip1822Proxiable => PatternLabel::Eip1822Uups,
        }
    }
}

#[derive(Clone, Debug)]
pub struct KnownSlot {
    pub slot: Bytes32,
    pub role: SlotRole,
    /// Preimage whose keccak-256 (minus one when `minus_one`) is the slot.
    pub derivation: &'static str,
    pub minus_one: bool,
}

/// The verified table of well-known slots.
pub struct KnownSlots {
    entries: Vec<KnownSlot>,
}

/// Pinned expected values; regenerated from the derivation at startup and
/// compared. The pins keep a silent keccak regression from reclassifying
/// the world.
const PINNED_SLOTS: &[(&str, bool, &str, SlotRole)] = &[
    (
        "eip1967.proxy.implementation",
        true,
        "0x360894a13ba1a3210667c828492db98dca3e2076cc3735a920a3ca505d382bbc",
        SlotRole::Eip1967Implementation,
    ),
    (
        "eip1967.proxy.admin",
        true,
        "0xb53127684a568b3173ae13b9f8a6016e243e63b6e8ee1178d6a717850b5d6103",
        SlotRole::Eip1967Admin,
    ),
    (
        "eip1967.proxy.beacon",
        true,
        "0xa3f0ad74e5423aebfd80d3ef4346578335a9a72aeaee59ff6cb3582b35133d50",
        SlotRole::Eip1967Beacon,
    ),
    (
        "PROXIABLE",
        false,
        "0xc5f16f0fcc639fa48a6947836d9850f504798523bf8c9a3a87d5876cf622bcf7",
        SlotRole::Eip1822Proxiable,
    ),
    (
        "org.zeppelinos.proxy.implementation",
        false,
        "0x7050c9e0f4ca769c69bd3a8ef740bc37934f8e2c036e5a723fd8ee048ed3f8c3",
        SlotRole::ZosImplementation,
    ),
];

static KNOWN_SLOTS: OnceLock<KnownSlots> = OnceLock::new();

impl KnownSlots {
    /// The slot table, recomputing every entry from its derivation on first
    /// access. Aborts on any mismatch with the pinned values.
    pub fn verified() -> &'static KnownSlots {
        KNOWN_SLOTS.get_or_init(|| {
            let mut entries = Vec::with_capacity(PINNED_SLOTS.len());
            for (derivation, minus_one, pinned_hex, role) in PINNED_SLOTS {
                let mut slot = keccak256(derivation.as_bytes());
                if *minus_one {
                    slot = slot.wrapping_sub_small(1);
                }
                let pinned = Bytes32::from_hex_str(pinned_hex)
                    .unwrap_or_else(|| panic!("bad pinned slot literal for {derivation}"));
                assert_eq!(
                    slot, pinned,
                    "known-slot self-check failed for \"{derivation}\": \
                     recomputed {} but the table pins {pinned_hex}",
                    slot.to_hex(),
                );
                entries.push(KnownSlot {
                    slot,
                    role: *role,
                    derivation,
                    minus_one: *minus_one,
                });
            }
            KnownSlots { entries }
        })
    }

    pub fn entries(&self) -> &[KnownSlot] {
        &self.entries
    }

    pub fn lookup(&self, slot: &Bytes32) -> Option<&KnownSlot> {
        self.entries.iter().find(|e| e.slot == *slot)
    }

    pub fn contains(&self, slot: &Bytes32) -> bool {
        self.lookup(slot).is_some()
    }

    pub fn slot_for(&self, role: SlotRole) -> Bytes32 {
        self.entries
            .iter()
            .find(|e| e.role == role)
            .map(|e| e.slot)
            .expect("every role has exactly one table entry")
    }
}

// ---------------------------------------------------------------------------
// Canonical signatures and selectors
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CanonicalizationError {
    #[error("malformed signature: {0}")]
    Malformed(String),
    #[error("type `{0}` cannot appear in an external signature")]
    UnsupportedType(String),
    #[error("unknown user-defined type `{0}`")]
    UnknownType(String),
}

/// First four bytes of keccak-256 over the canonical signature text.
pub fn function_selector(canonical_signature: &str) -> [u8; 4] {
    let hash = keccak256(canonical_signature.as_bytes());
    [hash.0[0], hash.0[1], hash.0[2], hash.0[3]]
}

/// Normalize a human-written signature: spaces removed, parameter names and
/// storage-location words dropped, `uint`→`uint256`, `int`→`int256`,
/// `byte`→`bytes1` (element types of arrays included).
pub fn canonicalize_signature_text(text: &str) -> Result<String, CanonicalizationError> {
    let text = text.trim();
    let open = text
        .find('(')
        .ok_or_else(|| CanonicalizationError::Malformed(text.to_string()))?;
    let name = text[..open].trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '$')
    {
        return Err(CanonicalizationError::Malformed(text.to_string()));
    }
    let rest = text[open..].trim();
    if !rest.ends_with(')') {
        return Err(CanonicalizationError::Malformed(text.to_string()));
    }
    let inner = &rest[1..rest.len() - 1];
    let params = split_params(inner);
    let mut canonical = Vec::with_capacity(params.len());
    for p in params {
        canonical.push(canonicalize_param_text(&p)?);
    }
    Ok(format!("{}({})", name, canonical.join(",")))
}

fn split_params(inner: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in inner.chars() {
        match c {
            '(' | '[' => {
                depth += 1;
                cur.push(c);
            }
            ')' | ']' => {
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

fn canonicalize_param_text(param: &str) -> Result<String, CanonicalizationError> {
    // Tuples canonicalize member-wise.
    if let Some(rest) = param.strip_prefix('(') {
        let close = rest
            .rfind(')')
            .ok_or_else(|| CanonicalizationError::Malformed(param.to_string()))?;
        let members = split_params(&rest[..close]);
        // After the tuple, keep only array dimensions; drop location words
        // and the parameter name.
        let suffix: String = rest[close + 1..]
            .chars()
            .filter(|c| !c.is_whitespace())
            .take_while(|c| matches!(c, '[' | ']') || c.is_ascii_digit())
            .collect();
        let mut canon = Vec::with_capacity(members.len());
        for m in members {
            canon.push(canonicalize_param_text(&m)?);
        }
        return Ok(format!("({}){}", canon.join(","), suffix));
    }
    // `uint256 memory amounts` → first word is the type; location words and
    // the parameter name are dropped.
    let mut words = param.split_whitespace();
    let ty = words
        .next()
        .ok_or_else(|| CanonicalizationError::Malformed(param.to_string()))?;
    // Split a possible array suffix off the base type.
    let base_end = ty.find('[').unwrap_or(ty.len());
    let (base, suffix) = ty.split_at(base_end);
    let base = match base {
        "uint" => "uint256",
        "int" => "int256",
        "byte" => "bytes1",
        other => other,
    };
    if base.is_empty() {
        return Err(CanonicalizationError::Malformed(param.to_string()));
    }
    Ok(format!("{base}{}", suffix.replace(' ', "")))
}

/// Canonical ABI name of a type as it appears in a selector signature.
pub fn canonical_type(
    ty: &TypeLabel,
    unit: &CompilationUnit,
) -> Result<String, CanonicalizationError> {
    match ty {
        TypeLabel::Elementary(e) => Ok(e.canonical_name()),
        TypeLabel::DynArray(elem) => Ok(format!("{}[]", canonical_type(elem, unit)?)),
        TypeLabel::FixedArray { elem, len } => {
            Ok(format!("{}[{}]", canonical_type(elem, unit)?, len))
        }
        TypeLabel::Mapping { .. } => {
            Err(CanonicalizationError::UnsupportedType("mapping".to_string()))
        }
        TypeLabel::User(name) => {
            if unit.is_contract_type(name) {
                return Ok("address".to_string());
            }
            if unit.find_enum(name).is_some() {
                return Ok("uint8".to_string());
            }
            if let Some(s) = unit.find_struct(name) {
                let mut fields = Vec::with_capacity(s.fields.len());
                for (_, fty) in &s.fields {
                    fields.push(canonical_type(fty, unit)?);
                }
                return Ok(format!("({})", fields.join(",")));
            }
            Err(CanonicalizationError::UnknownType(name.clone()))
        }
        TypeLabel::Unsupported(text) => {
            Err(CanonicalizationError::UnsupportedType(text.clone()))
        }
    }
}

/// Canonical signature of a function in a resolved unit.
pub fn canonical_signature(
    func: &FunctionDef,
    unit: &CompilationUnit,
) -> Result<String, CanonicalizationError> {
    let mut params = Vec::with_capacity(func.params.len());
    for p in &func.params {
        params.push(canonical_type(&p.ty, unit)?);
    }
    Ok(format!("{}({})", func.name, params.join(",")))
}

/// Selector of a resolved function.
pub fn selector_for_function(
    func: &FunctionDef,
    unit: &CompilationUnit,
) -> Result<[u8; 4], CanonicalizationError> {
    Ok(function_selector(&canonical_signature(func, unit)?))
}

// ---------------------------------------------------------------------------
// Classifier
// ---------------------------------------------------------------------------

/// Apply the taxonomy rules in fixed order; a contract may match several.
pub fn classify_pattern(
    unit: &CompilationUnit,
    contract: &ResolvedContract,
    finding: &ProxyFinding,
    verdict: &UpgradeabilityVerdict,
) -> Vec<PatternLabel> {
    let mut labels = Vec::new();
    if !finding.is_proxy {
        return labels;
    }
    let slots = KnownSlots::verified();
    let slot = verdict.slot.or(finding.slot_literal);

    // (1) EIP-1967 family: the target lives at a well-known unstructured
    // slot.
    if let Some(s) = &slot {
        if let Some(entry) = slots.lookup(s) {
            if entry.role.label() == PatternLabel::Eip1967Unstructured {
                labels.push(PatternLabel::Eip1967Unstructured);
            }
        }
    }

    // (2) EIP-1822 UUPS: PROXIABLE slot and the upgrade logic is not in the
    // proxy itself.
    if let Some(s) = &slot {
        if *s == slots.slot_for(SlotRole::Eip1822Proxiable) && verdict.impl_setter.is_none() {
            labels.push(PatternLabel::Eip1822Uups);
        }
    }

    // (3) Selector-routing proxies: target resolved through a mapping
    // indexed by msg.sig.
    if let Some(key) = mapping_lookup_key(unit, contract, finding) {
        if mentions_msg_sig(key) {
            if has_diamond_vocabulary(contract) {
                labels.push(PatternLabel::Eip2535Diamond);
            } else {
                labels.push(PatternLabel::Eip1538Transparent);
            }
        }
    }

    // (4)/(5) Beacon vs registry: the target comes from an external lookup
    // on a stored address, split by arity.
    if let Some(arity) = external_lookup_arity(unit, contract, finding) {
        if arity == 0 {
            labels.push(PatternLabel::Beacon);
        } else {
            labels.push(PatternLabel::Registry);
        }
    } else if let Some(key) = mapping_lookup_key(unit, contract, finding) {
        // A mapping lookup keyed by something dynamic that is not the call
        // selector routes by version — registry territory.
        let ctx = ConstContext::new(unit, Some(contract));
        if !mentions_msg_sig(key) && eval_const_expr(key, &ctx).is_none() {
            labels.push(PatternLabel::Registry);
        }
    }

    // (6) Minimal forwarder: fixed target and nothing in the contract can
    // mutate state.
    if finding
        .delegates_to
        .as_ref()
        .is_some_and(|t| t.is_constant && !finding.via_storage_load)
        && contract.all_functions.values().all(|f| {
            matches!(f.def.mutability, FnMutability::View | FnMutability::Pure)
        })
    {
        labels.push(PatternLabel::Eip1167Minimal);
    }

    // (7) Eternal storage: the storage-holding contract keeps everything in
    // 32-byte-keyed mappings.
    if let Some(decl) = declaring_contract_of_target(unit, finding) {
        let vars = &decl.def.state_vars;
        if !vars.is_empty()
            && vars.iter().all(|v| {
                v.ty.is_mapping()
                    && v.ty.mapping_key().is_some_and(is_word_sized_key)
            })
        {
            labels.push(PatternLabel::EternalStorage);
        }
    }

    // (8) Inherited storage: the target's declaring base is shared with
    // another (implementation-side) contract in the unit.
    if let Some(target) = &finding.delegates_to {
        if let Some(decl_name) = &target.declaring_contract {
            let inherited = decl_name != contract.name() && contract.inherits(decl_name);
            if inherited {
                let shared_elsewhere = unit.contracts.iter().any(|c| {
                    c.name() != contract.name()
                        && c.name() != decl_name.as_str()
                        && c.def.kind != ContractKind::Interface
                        && c.inherits(decl_name)
                });
                if shared_elsewhere {
                    labels.push(PatternLabel::InheritedStorage);
                }
            }
        }
    }

    // (9) Transparent-admin: guarded setter plus admin-aware routing in the
    // fallback.
    if verdict.setter_guarded_by_admin && fallback_compares_sender_to_admin(contract) {
        labels.push(PatternLabel::TransparentAdmin);
    }

    // (10) EIP-897: the contract advertises the interface.
    if exposes_eip897_interface(contract) {
        labels.push(PatternLabel::Eip897Interface);
    }

    // (11) Upgradeable but matching no named pattern.
    if verdict.is_upgradeable && labels.is_empty() {
        labels.push(PatternLabel::BespokeUpgradeable);
    }

    labels.dedup();
    labels
}

/// The index expression of the mapping lookup producing the target, when
/// the target resolves through a mapping.
fn mapping_lookup_key<'a>(
    unit: &CompilationUnit,
    contract: &'a ResolvedContract,
    finding: &'a ProxyFinding,
) -> Option<&'a Expr> {
    let target = finding.delegates_to.as_ref()?;
    if !target.ty.as_ref().is_some_and(TypeLabel::is_mapping) {
        return None;
    }
    // Prefer the recorded source expression.
    if let Some(src) = &finding.target_source {
        if let ExprKind::Index { index: Some(key), .. } = &src.kind {
            return Some(key);
        }
    }
    // Otherwise recover the lookup from the searched function bodies.
    let _ = unit;
    for func in scanned_functions(contract, finding) {
        let body = func.body.as_ref()?;
        let mut found: Option<&Expr> = None;
        for s in body {
            s.walk_exprs(&mut |e| {
                if found.is_some() {
                    return;
                }
                if let ExprKind::Index { base, index: Some(key) } = &e.kind {
                    if base.as_ident() == Some(target.name.as_str()) {
                        found = Some(key);
                    }
                }
            });
        }
        if found.is_some() {
            return found;
        }
    }
    None
}

fn mentions_msg_sig(expr: &Expr) -> bool {
    let mut hit = false;
    expr.walk(&mut |e| {
        if matches!(e.kind, ExprKind::Msg(MsgField::Sig)) {
            hit = true;
        }
    });
    hit
}

/// Contract names, function names, or state variables that carry the
/// diamond-standard vocabulary.
fn has_diamond_vocabulary(contract: &ResolvedContract) -> bool {
    let lower = |s: &str| s.to_ascii_lowercase();
    if lower(contract.name()).contains("diamond") {
        return true;
    }
    contract.all_functions.values().any(|f| {
        let n = lower(&f.def.name);
        n.contains("diamondcut") || n.contains("facet")
    }) || contract
        .all_state_vars
        .iter()
        .any(|v| lower(&v.name).contains("facet"))
}

/// Arity of the external call that produces the delegation target, when the
/// target is computed by calling a member function on a stored address
/// (`IBeacon(beacon).implementation()` → 0, registry lookups → ≥1).
fn external_lookup_arity(
    unit: &CompilationUnit,
    contract: &ResolvedContract,
    finding: &ProxyFinding,
) -> Option<usize> {
    let source = effective_target_source(contract, finding)?;
    let mut arity: Option<usize> = None;
    source.walk(&mut |e| {
        if arity.is_some() {
            return;
        }
        if let ExprKind::Call { callee, args, .. } = &e.kind {
            if let ExprKind::Member { base, .. } = &callee.kind {
                if resolves_to_stored_address(base, contract, unit) {
                    arity = Some(args.len());
                }
            }
        }
    });
    arity
}

/// The expression the target came from: the recorded source, or the
/// initializer of a local target.
fn effective_target_source<'a>(
    contract: &'a ResolvedContract,
    finding: &'a ProxyFinding,
) -> Option<&'a Expr> {
    if let Some(src) = &finding.target_source {
        return Some(src);
    }
    let target = finding.delegates_to.as_ref()?;
    if target.scope == VarScope::Local {
        if let Some(init) = &target.initializer {
            return Some(init);
        }
        // The local may live in the fallback rather than in the recorded
        // reference; look it up.
        for func in scanned_functions(contract, finding) {
            if let Some(init) = local_initializer(&target.name, func) {
                return Some(init);
            }
        }
    }
    None
}

/// Does the expression bottom out at a state variable holding an address
/// (unwrapping interface casts like `IBeacon(beacon)`)?
fn resolves_to_stored_address(
    expr: &Expr,
    contract: &ResolvedContract,
    unit: &CompilationUnit,
) -> bool {
    match &expr.kind {
        ExprKind::Ident(name) => contract
            .state_var(name)
            .or_else(|| {
                unit.contracts
                    .iter()
                    .flat_map(|c| c.all_state_vars.iter())
                    .find(|v| v.name == *name)
            })
            .is_some(),
        ExprKind::Call { callee, args, .. } if args.len() == 1 => {
            // Interface or address cast wrapping the stored value.
            matches!(&callee.kind, ExprKind::Ident(_) | ExprKind::ElemType(_))
                && resolves_to_stored_address(&args[0], contract, unit)
        }
        ExprKind::Member { base, .. } => resolves_to_stored_address(base, contract, unit),
        _ => false,
    }
}

fn is_word_sized_key(key: &TypeLabel) -> bool {
    matches!(
        key,
        TypeLabel::Elementary(ElementaryType::FixedBytes(32))
            | TypeLabel::Elementary(ElementaryType::Uint(256))
            | TypeLabel::Elementary(ElementaryType::Int(256))
    )
}

fn declaring_contract_of_target<'a>(
    unit: &'a CompilationUnit,
    finding: &ProxyFinding,
) -> Option<&'a ResolvedContract> {
    let target = finding.delegates_to.as_ref()?;
    unit.get(target.declaring_contract.as_deref()?)
}

/// Function bodies the proxy search visited, resolved back to definitions.
fn scanned_functions<'a>(
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

/// Does the fallback (or a modifier on it) compare `msg.sender` against an
/// admin-flavored expression? This is the routing half of the transparent
/// pattern.
fn fallback_compares_sender_to_admin(contract: &ResolvedContract) -> bool {
    let mut bodies: Vec<&[Stmt]> = Vec::new();
    let mut fns: Vec<&FunctionDef> = Vec::new();
    if let Some(f) = &contract.fallback {
        fns.push(&f.def);
    }
    if let Some(f) = &contract.receive {
        fns.push(&f.def);
    }
    for f in &fns {
        if let Some(b) = &f.body {
            bodies.push(b);
        }
        for m in &f.modifiers {
            if let Some(def) = contract.all_modifiers.get(&m.name) {
                if let Some(b) = &def.def.body {
                    bodies.push(b);
                }
            }
        }
    }
    for body in bodies {
        let mut hit = false;
        for s in body {
            s.walk_exprs(&mut |e| {
                if hit {
                    return;
                }
                if let ExprKind::Binary { op: BinOp::Eq | BinOp::Ne, lhs, rhs } = &e.kind {
                    let sender = |x: &Expr| matches!(x.kind, ExprKind::Msg(MsgField::Sender));
                    let other = if sender(lhs) {
                        Some(rhs)
                    } else if sender(rhs) {
                        Some(lhs)
                    } else {
                        None
                    };
                    if let Some(other) = other {
                        if mentions_admin(other) {
                            hit = true;
                        }
                    }
                }
            });
        }
        if hit {
            return true;
        }
    }
    false
}

/// Identifier vocabulary check: any name in the expression contains
/// "admin" or "owner".
fn mentions_admin(expr: &Expr) -> bool {
    let mut hit = false;
    expr.walk(&mut |e| {
        if hit {
            return;
        }
        let name = match &e.kind {
            ExprKind::Ident(n) => Some(n.as_str()),
            ExprKind::Member { member, .. } => Some(member.as_str()),
            _ => None,
        };
        if let Some(n) = name {
            let n = n.to_ascii_lowercase();
            if n.contains("admin") || n.contains("owner") {
                hit = true;
            }
        }
    });
    hit
}

/// `implementation()` and `proxyType()` both externally callable.
fn exposes_eip897_interface(contract: &ResolvedContract) -> bool {
    let exposes = |name: &str| {
        contract.all_functions.values().any(|f| {
            f.def.name == name
                && f.def.params.is_empty()
                && f.def.visibility.is_externally_callable()
        }) || contract.all_state_vars.iter().any(|v| {
            v.name == name && v.visibility == Some(VarVisibility::Public)
        })
    };
    exposes("implementation") && exposes("proxyType")
}
