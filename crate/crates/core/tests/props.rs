// SPDX-License-Identifier: Apache-2.0
//! Property tests: the keccak core against an independent oracle,
//! signature canonicalization, layout well-formedness, append-only
//! compatibility, reorder detection, and parser totality.

use proptest::prelude::*;

use proxyscope::diag::FileId;
use proxyscope::keccak::keccak256;
use proxyscope::layout::{
    compute_storage_layout, diff_storage_layouts, CompatibilityStatus, SlotAssignment,
    ViolationKind,
};
use proxyscope::model::resolve_compilation_unit;
use proxyscope::parser::parse_source;
use proxyscope::patterns::{canonicalize_signature_text, function_selector};

fn oracle_keccak(data: &[u8]) -> [u8; 32] {
    use tiny_keccak::Hasher;
    let mut hasher = tiny_keccak::Keccak::v256();
    hasher.update(data);
    let mut digest = [0u8; 32];
    hasher.finalize(&mut digest);
    digest
}

/// Elementary state-variable types with their packed byte widths.
const ELEMENTARY: &[(&str, u64)] = &[
    ("uint8", 1),
    ("uint16", 2),
    ("uint32", 4),
    ("uint64", 8),
    ("uint96", 12),
    ("uint128", 16),
    ("uint256", 32),
    ("int256", 32),
    ("address", 20),
    ("bool", 1),
    ("bytes1", 1),
    ("bytes4", 4),
    ("bytes16", 16),
    ("bytes32", 32),
];

/// Types usable in external function signatures (already canonical).
const CANONICAL_PARAM_TYPES: &[&str] = &[
    "address",
    "uint256",
    "uint8",
    "uint128",
    "bool",
    "bytes32",
    "bytes4",
    "bytes",
    "string",
    "int256",
    "uint256[]",
    "address[3]",
    "bytes16",
];

fn layout_of(decls: &[(String, &str)]) -> Vec<SlotAssignment> {
    let body: String =
        decls.iter().map(|(name, ty)| format!("    {ty} {name};\n")).collect();
    let source = format!("pragma solidity ^0.8.0;\ncontract Generated {{\n{body}}}\n");
    let parsed = parse_source(FileId::new("gen.sol"), &source).expect("generated source parses");
    let unit = resolve_compilation_unit(std::slice::from_ref(&parsed));
    let layout = compute_storage_layout(unit.get("Generated").unwrap(), &unit);
    assert!(layout.diagnostics.is_empty(), "{:?}", layout.diagnostics);
    layout.entries
}

fn decl_strategy(max: usize) -> impl Strategy<Value = Vec<(String, &'static str)>> {
    prop::collection::vec(0..ELEMENTARY.len(), 1..=max).prop_map(|indices| {
        indices
            .into_iter()
            .enumerate()
            .map(|(i, ty_ix)| (format!("v{i}"), ELEMENTARY[ty_ix].0))
            .collect()
    })
}

proptest! {
    /// The hand-rolled keccak-256 agrees with an independent implementation
    /// on the full digest, including multi-block inputs past the 136-byte
    /// rate boundary.
    #[test]
    fn keccak_matches_independent_oracle(data in prop::collection::vec(any::<u8>(), 0..=512)) {
        let ours = keccak256(&data);
        prop_assert_eq!(ours.0, oracle_keccak(&data));
    }

    /// Selectors are the first four bytes of that digest for any
    /// signature-shaped string.
    #[test]
    fn selector_is_digest_prefix(
        name in "[a-zA-Z_][a-zA-Z0-9_]{0,14}",
        params in prop::collection::vec(0..CANONICAL_PARAM_TYPES.len(), 0..=6),
    ) {
        let sig = format!(
            "{name}({})",
            params.iter().map(|&i| CANONICAL_PARAM_TYPES[i]).collect::<Vec<_>>().join(",")
        );
        let selector = function_selector(&sig);
        prop_assert_eq!(selector, &oracle_keccak(sig.as_bytes())[..4]);
    }

    /// Canonicalization strips parameter names and whitespace and expands
    /// the `uint`/`int` aliases, landing on the exact canonical text.
    #[test]
    fn canonicalization_normalizes_aliases_and_names(
        name in "[a-z][a-zA-Z0-9]{0,11}",
        params in prop::collection::vec(
            (0..CANONICAL_PARAM_TYPES.len(), any::<bool>(), any::<bool>()),
            0..=5,
        ),
    ) {
        let mut written = Vec::new();
        let mut canonical = Vec::new();
        for (ix, (ty_ix, alias, with_name)) in params.iter().enumerate() {
            let ty = CANONICAL_PARAM_TYPES[*ty_ix];
            // Write the shorthand alias sometimes; canonical form is fixed.
            let spelled = match (ty, alias) {
                ("uint256", true) => "uint".to_string(),
                ("int256", true) => "int".to_string(),
                _ => ty.to_string(),
            };
            let suffix = if *with_name { format!(" arg{ix}") } else { String::new() };
            written.push(format!(" {spelled}{suffix} "));
            canonical.push(ty);
        }
        let text = format!("{name} ( {} )", written.join(","));
        let got = canonicalize_signature_text(&text).expect("canonicalizes");
        prop_assert_eq!(got, format!("{name}({})", canonical.join(",")));
    }

    /// Every computed layout is well-formed: entries ordered by
    /// (slot, offset), packed fields never straddle a 32-byte word, and
    /// fields within one slot never overlap.
    #[test]
    fn layouts_are_well_formed(decls in decl_strategy(14)) {
        let entries = layout_of(&decls);
        prop_assert_eq!(entries.len(), decls.len());
        for pair in entries.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            prop_assert!(
                (a.slot, a.offset) < (b.slot, b.offset),
                "entries out of order: {a:?} then {b:?}"
            );
            if a.slot == b.slot {
                prop_assert!(
                    u64::from(a.offset) + a.size <= u64::from(b.offset),
                    "overlap within slot {}: {a:?} then {b:?}", a.slot
                );
            }
        }
        for e in &entries {
            if e.size <= 32 {
                prop_assert!(
                    u64::from(e.offset) + e.size <= 32,
                    "packed field straddles a word: {e:?}"
                );
            } else {
                prop_assert_eq!(e.offset, 0, "multi-slot value must start a slot: {:?}", e);
            }
        }
    }

    /// Appending state variables never breaks storage compatibility: the
    /// old layout stays a placement-identical prefix.
    #[test]
    fn appending_variables_is_always_compatible(
        decls in decl_strategy(12),
        keep in 1..=12usize,
    ) {
        let keep = keep.min(decls.len());
        let old = layout_of(&decls[..keep]);
        let new = layout_of(&decls);
        let report = diff_storage_layouts(&old, &new);
        prop_assert_ne!(report.status, CompatibilityStatus::Incompatible);
        prop_assert!(report.violations.is_empty(), "{:?}", report.violations);
        if keep == decls.len() {
            prop_assert_eq!(report.status, CompatibilityStatus::Identical);
        }
    }

    /// Permuting same-shaped variables is flagged as a reorder even though
    /// every placement looks individually valid — the classic silent
    /// storage-collision upgrade bug.
    #[test]
    fn permuting_uniform_variables_is_a_reorder(
        order in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        prop_assume!(order.iter().enumerate().any(|(i, &v)| i != v));
        let old: Vec<(String, &str)> =
            (0..6).map(|i| (format!("name{i}"), "uint256")).collect();
        let new: Vec<(String, &str)> =
            order.iter().map(|&i| (format!("name{i}"), "uint256")).collect();
        let report = diff_storage_layouts(&layout_of(&old), &layout_of(&new));
        prop_assert_eq!(report.status, CompatibilityStatus::Incompatible);
        prop_assert!(
            report.violations.iter().any(|v| v.kind == ViolationKind::Reordered),
            "{:?}", report.violations
        );
    }

    /// The parser never panics, whatever bytes arrive: it returns a parse
    /// tree or a positioned error.
    #[test]
    fn parser_is_total_on_arbitrary_text(source in "\\PC*") {
        let _ = parse_source(FileId::new("fuzz.sol"), &source);
    }

    /// Same, for input that looks deceptively like Solidity.
    #[test]
    fn parser_is_total_on_token_soup(
        tokens in prop::collection::vec(
            prop::sample::select(vec![
                "contract", "function", "fallback", "assembly", "delegatecall",
                "{", "}", "(", ")", ";", "=", "uint256", "address", "x", "0x12",
                "\"s\"", "pragma", "solidity", "^0.8.0", "is", ",", "[", "]",
                ".", "mapping", "=>", "returns", "external", "payable",
            ]),
            0..=64,
        ),
    ) {
        let source = tokens.join(" ");
        let _ = parse_source(FileId::new("soup.sol"), &source);
    }
}
