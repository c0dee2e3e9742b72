// SPDX-License-Identifier: Apache-2.0

//! Storage layout computation and upgrade-compatibility diffing.
//!
//! Layouts follow the compiler's documented slot-assignment rules at the
//! subset level: state variables are placed in declaration order (bases
//! first, per the linearization), elementary values pack left-to-right
//! into 32-byte slots, and reference types claim whole slots.

use crate::ast::{ElementaryType, TypeLabel, VarMutability};
use crate::diag::{Diagnostic, Span};
use crate::model::{CompilationUnit, ResolvedContract};
use serde::{Deserialize, Serialize};
use std::fmt;

pub const SLOT_BYTES: u64 = 32;

// ---------------------------------------------------------------------------
// Layout types
// ---------------------------------------------------------------------------

/// Where one state variable lives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotAssignment {
    pub var_name: String,
    pub declaring_contract: String,
    pub slot: u128,
    /// Byte offset within the slot (0 for anything that owns the slot).
    pub offset: u8,
    /// Bytes occupied: the packed width for elementary types, the full
    /// reserved region (`slots × 32`) for multi-slot aggregates.
    pub size: u64,
    pub type_label: String,
}

impl SlotAssignment {
    /// The placement identity used by the compatibility diff: everything
    /// except the name.
    fn placement(&self) -> (u128, u8, u64, &str) {
        (self.slot, self.offset, self.size, self.type_label.as_str())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StorageLayout {
    pub contract: String,
    pub entries: Vec<SlotAssignment>,
    pub diagnostics: Vec<Diagnostic>,
}

// ---------------------------------------------------------------------------
// Sizing
// ---------------------------------------------------------------------------

/// How a type occupies storage.
enum Occupancy {
    /// Packs into the current slot when it fits (size ≤ 32).
    Packed(u64),
    /// Owns exactly one fresh slot (mappings, dynamic arrays, `bytes`,
    /// `string`).
    FullSlot,
    /// Starts a fresh slot and reserves `slots` whole slots (structs,
    /// fixed arrays).
    MultiSlot(u128),
    /// Unknown size: diagnosed, then treated as one conservative slot.
    Unknown(String),
}

fn elementary_size(e: &ElementaryType) -> Option<u64> {
    match e {
        ElementaryType::Address { .. } => Some(20),
        ElementaryType::Bool => Some(1),
        ElementaryType::Uint(bits) | ElementaryType::Int(bits) => Some(u64::from(*bits) / 8),
        ElementaryType::FixedBytes(n) => Some(u64::from(*n)),
        ElementaryType::Bytes | ElementaryType::String => None,
    }
}

fn occupancy(ty: &TypeLabel, unit: &CompilationUnit, depth: u32) -> Occupancy {
    if depth > 16 {
        return Occupancy::Unknown("type nesting too deep".to_string());
    }
    match ty {
        TypeLabel::Elementary(e) => match elementary_size(e) {
            Some(size) => Occupancy::Packed(size),
            None => Occupancy::FullSlot,
        },
        TypeLabel::Mapping { .. } | TypeLabel::DynArray(_) => Occupancy::FullSlot,
        TypeLabel::FixedArray { elem, len } => {
            match slots_for_array(elem, *len, unit, depth + 1) {
                Ok(slots) => Occupancy::MultiSlot(slots),
                Err(reason) => Occupancy::Unknown(reason),
            }
        }
        TypeLabel::User(name) => {
            if unit.is_contract_type(name) {
                return Occupancy::Packed(20);
            }
            if unit.find_enum(name).is_some() {
                return Occupancy::Packed(1);
            }
            if let Some(def) = unit.find_struct(name) {
                return match slots_for_fields(
                    def.fields.iter().map(|(_, t)| t),
                    unit,
                    depth + 1,
                ) {
                    Ok(slots) => Occupancy::MultiSlot(slots),
                    Err(reason) => Occupancy::Unknown(reason),
                };
            }
            Occupancy::Unknown(format!("unknown user type `{name}`"))
        }
        TypeLabel::Unsupported(text) => Occupancy::Unknown(format!("unsupported type `{text}`")),
    }
}

/// Whole slots reserved by `elem[len]`: elements pack within slots but
/// never straddle a boundary; struct/array elements each claim their own
/// whole slots.
fn slots_for_array(
    elem: &TypeLabel,
    len: u64,
    unit: &CompilationUnit,
    depth: u32,
) -> Result<u128, String> {
    if len == 0 {
        return Ok(0);
    }
    match occupancy(elem, unit, depth) {
        Occupancy::Packed(size) => {
            let per_slot = SLOT_BYTES / size.max(1);
            Ok(u128::from(len.div_ceil(per_slot.max(1))))
        }
        Occupancy::FullSlot => Ok(u128::from(len)),
        Occupancy::MultiSlot(slots) => Ok(u128::from(len).saturating_mul(slots)),
        Occupancy::Unknown(reason) => Err(reason),
    }
}

/// Whole slots reserved by a struct with the given field types: the same
/// left-to-right packing, rounded up to a slot boundary.
fn slots_for_fields<'a>(
    fields: impl Iterator<Item = &'a TypeLabel>,
    unit: &CompilationUnit,
    depth: u32,
) -> Result<u128, String> {
    let mut slots: u128 = 0;
    let mut offset: u64 = 0;
    for ty in fields {
        match occupancy(ty, unit, depth) {
            Occupancy::Packed(size) => {
                if offset + size > SLOT_BYTES {
                    slots += 1;
                    offset = 0;
                }
                offset += size;
            }
            Occupancy::FullSlot => {
                if offset > 0 {
                    slots += 1;
                    offset = 0;
                }
                slots += 1;
            }
            Occupancy::MultiSlot(n) => {
                if offset > 0 {
                    slots += 1;
                    offset = 0;
                }
                slots = slots.saturating_add(n);
            }
            Occupancy::Unknown(reason) => return Err(reason),
        }
    }
    if offset > 0 {
        slots += 1;
    }
    Ok(slots.max(1))
}

// ---------------------------------------------------------------------------
// Layout computation
// ---------------------------------------------------------------------------

/// Assign every non-constant, non-immutable state variable its slot,
/// walking the resolved variables in linearization order (bases first).
pub fn compute_storage_layout(
    contract: &ResolvedContract,
    unit: &CompilationUnit,
) -> StorageLayout {
    let mut entries = Vec::new();
    let mut diagnostics = Vec::new();
    let mut slot: u128 = 0;
    let mut offset: u64 = 0;

    for var in &contract.all_state_vars {
        if var.is_constant || var.mutability == Some(VarMutability::Immutable) {
            continue;
        }
        let declaring = var
            .declaring_contract
            .clone()
            .unwrap_or_else(|| contract.name().to_string());
        let Some(ty) = &var.ty else {
            diagnostics.push(
                untyped_diagnostic(&var.name, var.span.clone()).with_contract(&declaring),
            );
            // Conservative full slot.
            if offset > 0 {
                slot += 1;
                offset = 0;
            }
            entries.push(SlotAssignment {
                var_name: var.name.clone(),
                declaring_contract: declaring,
                slot,
                offset: 0,
                size: SLOT_BYTES,
                type_label: "<unknown>".to_string(),
            });
            slot += 1;
            continue;
        };
        let label = ty.display_name();
        match occupancy(ty, unit, 0) {
            Occupancy::Packed(size) => {
                if offset + size > SLOT_BYTES {
                    slot += 1;
                    offset = 0;
                }
                entries.push(SlotAssignment {
                    var_name: var.name.clone(),
                    declaring_contract: declaring,
                    slot,
                    offset: offset as u8,
                    size,
                    type_label: label,
                });
                offset += size;
            }
            Occupancy::FullSlot => {
                if offset > 0 {
                    slot += 1;
                    offset = 0;
                }
                entries.push(SlotAssignment {
                    var_name: var.name.clone(),
                    declaring_contract: declaring,
                    slot,
                    offset: 0,
                    size: SLOT_BYTES,
                    type_label: label,
                });
                slot += 1;
            }
            Occupancy::MultiSlot(slots) => {
                if offset > 0 {
                    slot += 1;
                    offset = 0;
                }
                entries.push(SlotAssignment {
                    var_name: var.name.clone(),
                    declaring_contract: declaring,
                    slot,
                    offset: 0,
                    size: u64::try_from(slots.saturating_mul(u128::from(SLOT_BYTES)))
                        .unwrap_or(u64::MAX),
                    type_label: label,
                });
                slot = slot.saturating_add(slots);
            }
            Occupancy::Unknown(reason) => {
                diagnostics.push(
                    Diagnostic::warning(
                        format!(
                            "cannot size state variable `{}` ({reason}); reserving one \
                             conservative slot",
                            var.name
                        ),
                        var.span.clone(),
                    )
                    .with_contract(&declaring),
                );
                if offset > 0 {
                    slot += 1;
                    offset = 0;
                }
                entries.push(SlotAssignment {
                    var_name: var.name.clone(),
                    declaring_contract: declaring,
                    slot,
                    offset: 0,
                    size: SLOT_BYTES,
                    type_label: label,
                });
                slot += 1;
            }
        }
    }

    StorageLayout { contract: contract.name().to_string(), entries, diagnostics }
}

fn untyped_diagnostic(name: &str, span: Option<Span>) -> Diagnostic {
    Diagnostic::warning(
        format!("state variable `{name}` has no resolvable type; reserving one slot"),
        span,
    )
}

// ---------------------------------------------------------------------------
// Compatibility diff
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CompatibilityStatus {
    Identical,
    AppendOnlyCompatible,
    Incompatible,
}

impl CompatibilityStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CompatibilityStatus::Identical => "IDENTICAL",
            CompatibilityStatus::AppendOnlyCompatible => "APPEND_ONLY_COMPATIBLE",
            CompatibilityStatus::Incompatible => "INCOMPATIBLE",
        }
    }
}

impl fmt::Display for CompatibilityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationKind {
    Reordered,
    TypeChanged,
    Inserted,
    Removed,
    InheritanceChanged,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::Reordered => "REORDERED",
            ViolationKind::TypeChanged => "TYPE_CHANGED",
            ViolationKind::Inserted => "INSERTED",
            ViolationKind::Removed => "REMOVED",
            ViolationKind::InheritanceChanged => "INHERITANCE_CHANGED",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub old_entry: Option<SlotAssignment>,
    pub new_entry: Option<SlotAssignment>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompatibilityReport {
    pub status: CompatibilityStatus,
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

/// Positional comparison of two layouts on (slot, offset, size, type) plus
/// name tracking. A clean equal prefix plus appended tail is the only
/// compatible change. A name change counts as a rename (warning) only when
/// the old name disappears entirely and the new name is genuinely new —
/// a permutation of existing names is a reorder, the classic slot-swap
/// hazard, even though the placements line up.
pub fn diff_storage_layouts(
    old: &[SlotAssignment],
    new: &[SlotAssignment],
) -> CompatibilityReport {
    let mut warnings = Vec::new();
    let mut violations: Vec<Violation> = Vec::new();
    let common = old.len().min(new.len());
    let old_names: Vec<&str> = old.iter().map(|e| e.var_name.as_str()).collect();
    let new_names: Vec<&str> = new.iter().map(|e| e.var_name.as_str()).collect();

    // Inheritance shuffle: the sequence of declaring-contract blocks over
    // the common prefix changed.
    let block_seq = |entries: &[SlotAssignment]| {
        let mut seq: Vec<&str> = Vec::new();
        for e in &entries[..common] {
            if seq.last() != Some(&e.declaring_contract.as_str()) {
                seq.push(&e.declaring_contract);
            }
        }
        seq.into_iter().map(str::to_string).collect::<Vec<_>>()
    };
    if common > 0 && block_seq(old) != block_seq(new) {
        let first = (0..common)
            .find(|&i| old[i].declaring_contract != new[i].declaring_contract)
            .unwrap_or(0);
        violations.push(Violation {
            kind: ViolationKind::InheritanceChanged,
            old_entry: Some(old[first].clone()),
            new_entry: Some(new[first].clone()),
        });
    }

    let mut had_placement_mismatch = false;
    for i in 0..common {
        let (o, n) = (&old[i], &new[i]);
        let placements_equal = o.placement() == n.placement();
        if !placements_equal {
            had_placement_mismatch = true;
        }
        if o.var_name == n.var_name {
            if placements_equal {
                continue;
            }
            if o.declaring_contract != n.declaring_contract {
                violations.push(Violation {
                    kind: ViolationKind::InheritanceChanged,
                    old_entry: Some(o.clone()),
                    new_entry: Some(n.clone()),
                });
            } else if o.type_label != n.type_label || o.size != n.size {
                // Size drift under the same label means the definition of
                // a struct/array type changed shape.
                violations.push(Violation {
                    kind: ViolationKind::TypeChanged,
                    old_entry: Some(o.clone()),
                    new_entry: Some(n.clone()),
                });
            }
            // Same name, same type and size, shifted slot: a consequence
            // of an earlier violation, not a separate one.
            continue;
        }
        // Names differ at this position.
        let old_still_exists = new_names.contains(&o.var_name.as_str());
        let new_already_existed = old_names.contains(&n.var_name.as_str());
        match (old_still_exists, new_already_existed) {
            (false, false) => {
                if placements_equal {
                    warnings.push(format!(
                        "state variable renamed in place: `{}` -> `{}` (slot {}, offset {})",
                        o.var_name, n.var_name, o.slot, o.offset
                    ));
                } else if o.type_label != n.type_label || o.size != n.size {
                    violations.push(Violation {
                        kind: ViolationKind::TypeChanged,
                        old_entry: Some(o.clone()),
                        new_entry: Some(n.clone()),
                    });
                } else {
                    violations.push(Violation {
                        kind: ViolationKind::Reordered,
                        old_entry: Some(o.clone()),
                        new_entry: Some(n.clone()),
                    });
                }
            }
            (true, true) => violations.push(Violation {
                kind: ViolationKind::Reordered,
                old_entry: Some(o.clone()),
                new_entry: Some(n.clone()),
            }),
            (true, false) => violations.push(Violation {
                kind: ViolationKind::Inserted,
                old_entry: None,
                new_entry: Some(n.clone()),
            }),
            (false, true) => violations.push(Violation {
                kind: ViolationKind::Removed,
                old_entry: Some(o.clone()),
                new_entry: None,
            }),
        }
    }

    // Old entries beyond the common prefix vanished entirely.
    for o in &old[common..] {
        if !new_names.contains(&o.var_name.as_str()) {
            violations.push(Violation {
                kind: ViolationKind::Removed,
                old_entry: Some(o.clone()),
                new_entry: None,
            });
        }
    }

    // Defensive: a placement mismatch must never pass silently. If nothing
    // above classified it, record the first mismatching position.
    if violations.is_empty() && had_placement_mismatch {
        let first = (0..common)
            .find(|&i| old[i].placement() != new[i].placement())
            .unwrap_or(0);
        violations.push(Violation {
            kind: ViolationKind::Reordered,
            old_entry: Some(old[first].clone()),
            new_entry: Some(new[first].clone()),
        });
    }

    let status = if !violations.is_empty() {
        CompatibilityStatus::Incompatible
    } else if new.len() > old.len() {
        CompatibilityStatus::AppendOnlyCompatible
    } else if new.len() < old.len() {
        // Trailing entries removed but each survives by name elsewhere —
        // still a removal of layout positions.
        violations.extend(old[new.len()..].iter().map(|e| Violation {
            kind: ViolationKind::Removed,
            old_entry: Some(e.clone()),
            new_entry: None,
        }));
        CompatibilityStatus::Incompatible
    } else {
        CompatibilityStatus::Identical
    };

    CompatibilityReport { status, violations, warnings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diag::FileId;
    use crate::model::resolve_compilation_unit;
    use crate::parser::parse_source;

    fn layout_of(src: &str, contract: &str) -> StorageLayout {
        let parsed = parse_source(FileId::new("t.sol"), src).expect("parse");
        let unit = resolve_compilation_unit(std::slice::from_ref(&parsed));
        let resolved = unit.get(contract).expect("contract present");
        compute_storage_layout(resolved, &unit)
    }

    fn entry(layout: &StorageLayout, name: &str) -> SlotAssignment {
        layout
            .entries
            .iter()
            .find(|e| e.var_name == name)
            .unwrap_or_else(|| panic!("no entry for {name}"))
            .clone()
    }

    fn assert_placed(layout: &StorageLayout, name: &str, slot: u128, offset: u8, size: u64) {
        let e = entry(layout, name);
        assert_eq!(
            (e.slot, e.offset, e.size),
            (slot, offset, size),
            "placement of {name}"
        );
    }

    #[test]
    fn single_address_at_slot_zero() {
        let l = layout_of(
            "pragma solidity ^0.8.0; contract Box { address public value; }",
            "Box",
        );
        assert_eq!(l.entries.len(), 1);
        assert_placed(&l, "value", 0, 0, 20);
    }

    #[test]
    fn no_state_vars_empty_layout() {
        let l = layout_of("pragma solidity ^0.8.0; contract Empty { }", "Empty");
        assert!(l.entries.is_empty());
        assert!(l.diagnostics.is_empty());
    }

    #[test]
    fn packs_uint128_pairs() {
        let l = layout_of(
            "pragma solidity ^0.8.0; contract P { uint128 a; uint128 b; uint256 c; }",
            "P",
        );
        assert_placed(&l, "a", 0, 0, 16);
        assert_placed(&l, "b", 0, 16, 16);
        assert_placed(&l, "c", 1, 0, 32);
    }

    #[test]
    fn bool_address_pack_then_word_advances() {
        let l = layout_of(
            "pragma solidity ^0.8.0; contract P { bool flag; address who; uint256 amount; uint8 tag; }",
            "P",
        );
        assert_placed(&l, "flag", 0, 0, 1);
        assert_placed(&l, "who", 0, 1, 20);
        assert_placed(&l, "amount", 1, 0, 32);
        assert_placed(&l, "tag", 2, 0, 1);
    }

    #[test]
    fn constants_and_immutables_skipped() {
        let l = layout_of(
            r#"
            pragma solidity ^0.8.0;
            contract P {
                uint256 public constant RATE = 100;
                address public immutable deployer;
                uint128 a;
            }
            "#,
            "P",
        );
        assert_eq!(l.entries.len(), 1);
        assert_placed(&l, "a", 0, 0, 16);
    }

    #[test]
    fn mappings_and_dynamic_types_take_full_slots() {
        let l = layout_of(
            r#"
            pragma solidity ^0.8.0;
            contract P {
                mapping(address => uint256) balances;
                uint8 small;
                uint256[] list;
                bytes blob;
                string name;
            }
            "#,
            "P",
        );
        assert_placed(&l, "balances", 0, 0, 32);
        assert_placed(&l, "small", 1, 0, 1);
        assert_placed(&l, "list", 2, 0, 32);
        assert_placed(&l, "blob", 3, 0, 32);
        assert_placed(&l, "name", 4, 0, 32);
    }

    #[test]
    fn fixed_arrays_pack_elements_per_slot() {
        let l = layout_of(
            r#"
            pragma solidity ^0.8.0;
            contract P {
                uint128[3] pair;
                uint8 after1;
                address[3] addrs;
                uint8 after2;
            }
            "#,
            "P",
        );
        // Two uint128 per slot: 3 elements need 2 slots.
        assert_placed(&l, "pair", 0, 0, 64);
        assert_placed(&l, "after1", 2, 0, 1);
        // Addresses do not straddle slot boundaries: one per slot.
        assert_placed(&l, "addrs", 3, 0, 96);
        assert_placed(&l, "after2", 6, 0, 1);
    }

    #[test]
    fn structs_recurse_with_packing() {
        let l = layout_of(
            r#"
            pragma solidity ^0.8.0;
            contract P {
                struct Pair { uint128 x; uint128 y; uint256 z; }
                Pair p;
                uint8 tail;
            }
            "#,
            "P",
        );
        // x,y pack into one slot, z takes the next: 2 slots.
        assert_placed(&l, "p", 0, 0, 64);
        assert_placed(&l, "tail", 2, 0, 1);
    }

    #[test]
    fn struct_with_mapping_member() {
        let l = layout_of(
            r#"
            pragma solidity ^0.8.0;
            contract P {
                struct S { uint8 tag; mapping(address => uint256) m; uint8 t2; }
                S s;
                uint256 next;
            }
            "#,
            "P",
        );
        // tag(1 slot, packed alone) + m(1 slot) + t2(1 slot) = 3 slots.
        assert_placed(&l, "s", 0, 0, 96);
        assert_placed(&l, "next", 3, 0, 32);
    }

    #[test]
    fn enum_and_contract_types_pack() {
        let l = layout_of(
            r#"
            pragma solidity ^0.8.0;
            interface IToken { function transfer(address to, uint256 v) external; }
            contract P {
                enum Phase { Init, Live, Done }
                Phase phase;
                IToken token;
                uint88 filler;
            }
            "#,
            "P",
        );
        assert_placed(&l, "phase", 0, 0, 1);
        assert_placed(&l, "token", 0, 1, 20);
        // 1 + 20 + 11 = 32: exactly fills the slot.
        assert_placed(&l, "filler", 0, 21, 11);
    }

    #[test]
    fn unknown_user_type_diagnosed_conservative_slot() {
        let l = layout_of(
            r#"
            pragma solidity ^0.8.0;
            contract P {
                uint8 a;
                SomeLibType mystery;
                uint8 b;
            }
            "#,
            "P",
        );
        assert_placed(&l, "a", 0, 0, 1);
        assert_placed(&l, "mystery", 1, 0, 32);
        assert_placed(&l, "b", 2, 0, 1);
        assert_eq!(l.diagnostics.len(), 1);
        assert!(l.diagnostics[0].message.contains("mystery"));
    }

    #[test]
    fn inherited_vars_come_first() {
        let l = layout_of(
            r#"
            pragma solidity ^0.8.0;
            contract Base { uint256 baseVal; }
            contract Mid is Base { uint128 midVal; }
            contract Leaf is Mid { uint128 leafVal; uint256 big; }
            "#,
            "Leaf",
        );
        assert_placed(&l, "baseVal", 0, 0, 32);
        assert_placed(&l, "midVal", 1, 0, 16);
        // Derived var packs into the base's half-filled slot.
        assert_placed(&l, "leafVal", 1, 16, 16);
        assert_placed(&l, "big", 2, 0, 32);
        assert_eq!(entry(&l, "baseVal").declaring_contract, "Base");
        assert_eq!(entry(&l, "leafVal").declaring_contract, "Leaf");
    }

    #[test]
    fn layout_invariants_hold() {
        let l = layout_of(
            r#"
            pragma solidity ^0.8.0;
            contract Mix {
                bool a; uint64 b; bytes32 c; mapping(uint256 => address) d;
                uint128[5] e; string f; uint8 g; uint248 h; address i;
            }
            "#,
            "Mix",
        );
        // Slot monotonicity and in-slot offset growth.
        for w in l.entries.windows(2) {
            assert!(w[0].slot <= w[1].slot, "slots nondecreasing");
            if w[0].slot == w[1].slot {
                assert!(w[0].offset < w[1].offset, "offsets strictly increase in a slot");
            }
        }
        // No overlap.
        for (i, x) in l.entries.iter().enumerate() {
            for y in &l.entries[i + 1..] {
                if x.slot == y.slot {
                    let x_end = u64::from(x.offset) + x.size;
                    assert!(
                        x_end <= u64::from(y.offset),
                        "{} and {} overlap",
                        x.var_name,
                        y.var_name
                    );
                }
            }
        }
        // Packed entries stay within their slot.
        for e in &l.entries {
            if e.size <= 32 {
                assert!(u64::from(e.offset) + e.size <= 32, "{} fits its slot", e.var_name);
            } else {
                assert_eq!(e.offset, 0);
            }
        }
    }

    // --- diff ---

    fn layouts(old_src: &str, new_src: &str, name: &str) -> (StorageLayout, StorageLayout) {
        (layout_of(old_src, name), layout_of(new_src, name))
    }

    #[test]
    fn identical_layouts() {
        let src = "pragma solidity ^0.8.0; contract C { uint256 number; address owner; }";
        let (a, b) = layouts(src, src, "C");
        let report = diff_storage_layouts(&a.entries, &b.entries);
        assert_eq!(report.status, CompatibilityStatus::Identical);
        assert!(report.violations.is_empty());
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn rename_in_place_is_warning_only() {
        let (a, b) = layouts(
            "pragma solidity ^0.8.0; contract C { uint256 number; address owner; }",
            "pragma solidity ^0.8.0; contract C { uint256 count; address owner; }",
            "C",
        );
        let report = diff_storage_layouts(&a.entries, &b.entries);
        assert_eq!(report.status, CompatibilityStatus::Identical);
        assert!(report.violations.is_empty());
        assert_eq!(report.warnings.len(), 1);
        assert!(report.warnings[0].contains("number"));
        assert!(report.warnings[0].contains("count"));
    }

    #[test]
    fn append_is_compatible() {
        let (a, b) = layouts(
            "pragma solidity ^0.8.0; contract C { uint256 number; address owner; }",
            "pragma solidity ^0.8.0; contract C { uint256 number; address owner; uint256 extra; }",
            "C",
        );
        let report = diff_storage_layouts(&a.entries, &b.entries);
        assert_eq!(report.status, CompatibilityStatus::AppendOnlyCompatible);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn alphabetical_reorder_is_incompatible() {
        // The two-variable scenario: number and owner swap slots, so reads
        // of one land on the other.
        let (a, b) = layouts(
            "pragma solidity ^0.8.0; contract C { uint256 number; uint256 owner; }",
            "pragma solidity ^0.8.0; contract C { uint256 owner; uint256 number; }",
            "C",
        );
        let report = diff_storage_layouts(&a.entries, &b.entries);
        assert_eq!(report.status, CompatibilityStatus::Incompatible);
        assert!(report
            .violations
            .iter()
            .all(|v| v.kind == ViolationKind::Reordered));
        assert_eq!(report.violations.len(), 2);
    }

    #[test]
    fn type_change_detected() {
        let (a, b) = layouts(
            "pragma solidity ^0.8.0; contract C { uint256 balance; address owner; }",
            "pragma solidity ^0.8.0; contract C { int256 balance; address owner; }",
            "C",
        );
        let report = diff_storage_layouts(&a.entries, &b.entries);
        assert_eq!(report.status, CompatibilityStatus::Incompatible);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::TypeChanged);
    }

    #[test]
    fn insert_in_middle_detected() {
        let (a, b) = layouts(
            "pragma solidity ^0.8.0; contract C { uint256 first; uint256 last; }",
            "pragma solidity ^0.8.0; contract C { uint256 first; uint256 wedge; uint256 last; }",
            "C",
        );
        let report = diff_storage_layouts(&a.entries, &b.entries);
        assert_eq!(report.status, CompatibilityStatus::Incompatible);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::Inserted);
        assert_eq!(report.violations[0].new_entry.as_ref().unwrap().var_name, "wedge");
    }

    #[test]
    fn removal_detected() {
        let (a, b) = layouts(
            "pragma solidity ^0.8.0; contract C { uint256 first; uint256 gone; uint256 last; }",
            "pragma solidity ^0.8.0; contract C { uint256 first; uint256 last; }",
            "C",
        );
        let report = diff_storage_layouts(&a.entries, &b.entries);
        assert_eq!(report.status, CompatibilityStatus::Incompatible);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::Removed);
        assert_eq!(report.violations[0].old_entry.as_ref().unwrap().var_name, "gone");
    }

    #[test]
    fn truncation_reports_removed_tail() {
        let (a, b) = layouts(
            "pragma solidity ^0.8.0; contract C { uint256 keep; uint256 dropA; uint256 dropB; }",
            "pragma solidity ^0.8.0; contract C { uint256 keep; }",
            "C",
        );
        let report = diff_storage_layouts(&a.entries, &b.entries);
        assert_eq!(report.status, CompatibilityStatus::Incompatible);
        assert_eq!(report.violations.len(), 2);
        assert!(report.violations.iter().all(|v| v.kind == ViolationKind::Removed));
    }

    #[test]
    fn inheritance_swap_detected() {
        let (a, b) = layouts(
            r#"
            pragma solidity ^0.8.0;
            contract A { uint256 aVal; }
            contract B { uint256 bVal; }
            contract C is A, B { uint256 own; }
            "#,
            r#"
            pragma solidity ^0.8.0;
            contract A { uint256 aVal; }
            contract B { uint256 bVal; }
            contract C is B, A { uint256 own; }
            "#,
            "C",
        );
        let report = diff_storage_layouts(&a.entries, &b.entries);
        assert_eq!(report.status, CompatibilityStatus::Incompatible);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::InheritanceChanged));
    }

    #[test]
    fn append_property_on_layout_family() {
        let base =
            "pragma solidity ^0.8.0; contract C { bool a; uint64 b; bytes32 c; mapping(uint256 => address) d; }";
        let extended = r#"
            pragma solidity ^0.8.0;
            contract C { bool a; uint64 b; bytes32 c; mapping(uint256 => address) d;
                         uint128 e; string f; }
        "#;
        let (old, new) = layouts(base, extended, "C");
        for cut in 1..=old.entries.len() {
            let report = diff_storage_layouts(&old.entries[..cut], &new.entries);
            assert_eq!(
                report.status,
                CompatibilityStatus::AppendOnlyCompatible,
                "prefix of {cut} entries"
            );
        }
        // The degenerate empty-old case is also append-only.
        let report = diff_storage_layouts(&[], &new.entries);
        assert_eq!(report.status, CompatibilityStatus::AppendOnlyCompatible);
    }

    #[test]
    fn status_serializes_screaming() {
        assert_eq!(
            serde_json::to_string(&CompatibilityStatus::AppendOnlyCompatible).unwrap(),
            "\"APPEND_ONLY_COMPATIBLE\""
        );
        assert_eq!(
            serde_json::to_string(&ViolationKind::InheritanceChanged).unwrap(),
            "\"INHERITANCE_CHANGED\""
        );
    }
}
