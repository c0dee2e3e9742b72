// SPDX-License-Identifier: Apache-2.0

//! Function-selector clash detection between a proxy and its
//! implementation: two different signatures sharing the same 4-byte
//! selector (COLLISION) or the same signature on both sides (SHADOW).
//! Either way, calls meant for the implementation can be captured by the
//! proxy's own dispatcher.

use crate::ast::TypeLabel;
use crate::model::{CompilationUnit, ResolvedContract, VarScope};
use crate::patterns::{canonical_signature, canonical_type, function_selector};
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;

/// A 4-byte function selector, printed and serialized as `0x…` hex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
pub struct Selector(pub [u8; 4]);

impl Selector {
    pub fn of(canonical_signature: &str) -> Self {
        Selector(function_selector(canonical_signature))
    }

    pub fn to_hex(&self) -> String {
        format!("0x{}", hex::encode(self.0))
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for Selector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClashKind {
    /// Different signatures, same selector.
    Collision,
    /// The same signature exposed on both sides; routing decides which one
    /// runs, so this is reported as context rather than an error.
    Shadow,
}

impl fmt::Display for ClashKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClashKind::Collision => "COLLISION",
            ClashKind::Shadow => "SHADOW",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clash {
    pub selector: Selector,
    pub proxy_signature: String,
    pub impl_signature: String,
    pub kind: ClashKind,
}

/// One externally-callable entry point: an external/public function or the
/// implicit getter of a public state variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelectorEntry {
    pub selector: Selector,
    pub signature: String,
    /// Contract the entry is declared in.
    pub declared_in: String,
    pub implicit_getter: bool,
}

/// Every selector the contract answers to: external/public functions plus
/// implicit public-variable getters (mapping keys and array indices become
/// getter parameters). Entries whose signatures cannot be canonicalized
/// (unknown user types) are skipped — they cannot produce a selector.
pub fn external_selectors(
    contract: &ResolvedContract,
    unit: &CompilationUnit,
) -> Vec<SelectorEntry> {
    let mut out = Vec::new();
    for owned in contract.all_functions.values() {
        let func = &owned.def;
        if !func.visibility.is_externally_callable() {
            continue;
        }
        let Ok(sig) = canonical_signature(func, unit) else { continue };
        out.push(SelectorEntry {
            selector: Selector::of(&sig),
            signature: sig,
            declared_in: owned.declared_in.clone(),
            implicit_getter: false,
        });
    }
    for var in &contract.all_state_vars {
        if var.scope != VarScope::State
            || var.visibility != Some(crate::ast::VarVisibility::Public)
        {
            continue;
        }
        let Some(sig) = implicit_getter_signature(var.name.as_str(), var.ty.as_ref(), unit)
        else {
            continue;
        };
        out.push(SelectorEntry {
            selector: Selector::of(&sig),
            signature: sig,
            declared_in: var
                .declaring_contract
                .clone()
                .unwrap_or_else(|| contract.name().to_string()),
            implicit_getter: true,
        });
    }
    out.sort_by(|a, b| a.selector.cmp(&b.selector).then_with(|| a.signature.cmp(&b.signature)));
    out.dedup_by(|a, b| a.selector == b.selector && a.signature == b.signature);
    out
}

/// The compiler-generated getter signature for a public state variable:
/// each nested mapping key contributes a parameter, each array dimension a
/// `uint256` index.
fn implicit_getter_signature(
    name: &str,
    ty: Option<&TypeLabel>,
    unit: &CompilationUnit,
) -> Option<String> {
    let mut params: Vec<String> = Vec::new();
    let mut cursor = ty?;
    loop {
        match cursor {
            TypeLabel::Mapping { key, value } => {
                params.push(canonical_type(key, unit).ok()?);
                cursor = value;
            }
            TypeLabel::DynArray(elem) => {
                params.push("uint256".to_string());
                cursor = elem;
            }
            TypeLabel::FixedArray { elem, .. } => {
                params.push("uint256".to_string());
                cursor = elem;
            }
            _ => break,
        }
    }
    Some(format!("{}({})", name, params.join(",")))
}

/// All selector clashes between the proxy's own dispatch surface and the
/// implementation's: equal selectors across sides, COLLISION when the
/// signatures differ, SHADOW when they are identical. Deterministically
/// ordered by (selector, proxy signature, implementation signature).
pub fn find_selector_clashes(
    proxy: &ResolvedContract,
    implementation: &ResolvedContract,
    unit: &CompilationUnit,
) -> Vec<Clash> {
    clashes_between_surfaces(
        &external_selectors(proxy, unit),
        &external_selectors(implementation, unit),
    )
}

/// Pair two already-computed selector surfaces. Useful when the proxy and
/// the implementation come from different compilation units (separate
/// files with separate resolution contexts).
pub fn clashes_between_surfaces(
    proxy: &[SelectorEntry],
    implementation: &[SelectorEntry],
) -> Vec<Clash> {
    let mut clashes = Vec::new();
    for p in proxy {
        for i in implementation {
            if p.selector == i.selector {
                clashes.push(Clash {
                    selector: p.selector,
                    proxy_signature: p.signature.clone(),
                    impl_signature: i.signature.clone(),
                    kind: if p.signature == i.signature {
                        ClashKind::Shadow
                    } else {
                        ClashKind::Collision
                    },
                });
            }
        }
    }
    clashes.sort_by(|a, b| {
        a.selector
            .cmp(&b.selector)
            .then_with(|| a.proxy_signature.cmp(&b.proxy_signature))
            .then_with(|| a.impl_signature.cmp(&b.impl_signature))
    });
    clashes.dedup();
    clashes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diag::FileId;
    use crate::model::resolve_compilation_unit;
    use crate::parser::parse_source;

    fn unit_of(src: &str) -> CompilationUnit {
        let parsed = parse_source(FileId::new("t.sol"), src).expect("parse");
        resolve_compilation_unit(std::slice::from_ref(&parsed))
    }

    #[test]
    fn documented_collision_pair() {
        let unit = unit_of(
            r#"
            pragma solidity ^0.8.0;
            contract Proxy {
                function burn(uint256 amount) external {}
                fallback() external payable {}
            }
            contract Impl {
                function collate_propagate_storage(bytes16 x) external {}
            }
            "#,
        );
        let clashes = find_selector_clashes(
            unit.get("Proxy").unwrap(),
            unit.get("Impl").unwrap(),
            &unit,
        );
        assert_eq!(clashes.len(), 1);
        assert_eq!(clashes[0].selector.to_hex(), "0x42966c68");
        assert_eq!(clashes[0].kind, ClashKind::Collision);
        assert_eq!(clashes[0].proxy_signature, "burn(uint256)");
        assert_eq!(clashes[0].impl_signature, "collate_propagate_storage(bytes16)");
    }

    #[test]
    fn no_clash_between_unrelated_functions() {
        let unit = unit_of(
            r#"
            pragma solidity ^0.8.0;
            contract Proxy { function upgradeTo(address impl) external {} }
            contract Impl { function transfer(address to, uint256 v) external {} }
            "#,
        );
        let clashes = find_selector_clashes(
            unit.get("Proxy").unwrap(),
            unit.get("Impl").unwrap(),
            &unit,
        );
        assert!(clashes.is_empty());
    }

    #[test]
    fn shadow_when_both_sides_expose_same_signature() {
        let unit = unit_of(
            r#"
            pragma solidity ^0.8.0;
            contract Proxy {
                address public implementation;
                function upgradeTo(address impl) external {}
            }
            contract Impl {
                function implementation() external view returns (address) { return address(0); }
            }
            "#,
        );
        let clashes = find_selector_clashes(
            unit.get("Proxy").unwrap(),
            unit.get("Impl").unwrap(),
            &unit,
        );
        // The proxy's implicit `implementation()` getter shadows the
        // implementation's explicit function.
        assert_eq!(clashes.len(), 1);
        assert_eq!(clashes[0].kind, ClashKind::Shadow);
        assert_eq!(clashes[0].proxy_signature, "implementation()");
        assert_eq!(clashes[0].selector.to_hex(), "0x5c60da1b");
    }

    #[test]
    fn both_empty_no_clashes() {
        let unit = unit_of(
            "pragma solidity ^0.8.0; contract A { } contract B { }",
        );
        let clashes =
            find_selector_clashes(unit.get("A").unwrap(), unit.get("B").unwrap(), &unit);
        assert!(clashes.is_empty());
    }

    #[test]
    fn implicit_getter_signatures_expand_keys_and_indices() {
        let unit = unit_of(
            r#"
            pragma solidity ^0.8.0;
            contract Store {
                mapping(address => mapping(uint256 => bool)) public flags;
                uint256[] public values;
                uint64[4][] public grid;
                address public owner;
                mapping(bytes32 => address) private hidden;
            }
            "#,
        );
        let entries = external_selectors(unit.get("Store").unwrap(), &unit);
        let sigs: Vec<&str> = entries.iter().map(|e| e.signature.as_str()).collect();
        assert!(sigs.contains(&"flags(address,uint256)"));
        assert!(sigs.contains(&"values(uint256)"));
        // Outer dynamic dimension then inner fixed dimension.
        assert!(sigs.contains(&"grid(uint256,uint256)"));
        assert!(sigs.contains(&"owner()"));
        // Private variables have no getter.
        assert!(!sigs.iter().any(|s| s.starts_with("hidden")));
        assert!(entries.iter().all(|e| e.implicit_getter));
    }

    #[test]
    fn internal_functions_not_considered() {
        let unit = unit_of(
            r#"
            pragma solidity ^0.8.0;
            contract Proxy {
                function _upgrade(address impl) internal {}
                function admin() public view returns (address) { return address(0); }
            }
            contract Impl {
                function _upgrade(address impl) internal {}
                function admin() external view returns (address) { return address(1); }
            }
            "#,
        );
        let clashes = find_selector_clashes(
            unit.get("Proxy").unwrap(),
            unit.get("Impl").unwrap(),
            &unit,
        );
        // Only the public admin() pair clashes (as a shadow); the internal
        // functions have no selector surface.
        assert_eq!(clashes.len(), 1);
        assert_eq!(clashes[0].kind, ClashKind::Shadow);
        assert_eq!(clashes[0].proxy_signature, "admin()");
    }

    #[test]
    fn inherited_public_functions_counted_once() {
        let unit = unit_of(
            r#"
            pragma solidity ^0.8.0;
            contract Base { function ping() public pure returns (uint256) { return 1; } }
            contract Proxy is Base { }
            contract Impl { function ping() external pure returns (uint256) { return 2; } }
            "#,
        );
        let clashes = find_selector_clashes(
            unit.get("Proxy").unwrap(),
            unit.get("Impl").unwrap(),
            &unit,
        );
        assert_eq!(clashes.len(), 1);
        assert_eq!(clashes[0].kind, ClashKind::Shadow);
    }

    #[test]
    fn matches_brute_force_cross_product() {
        let unit = unit_of(
            r#"
            pragma solidity ^0.8.0;
            contract Proxy {
                address public implementation;
                function burn(uint256 v) external {}
                function upgradeTo(address impl) external {}
            }
            contract Impl {
                function collate_propagate_storage(bytes16 x) external {}
                function implementation() external view returns (address) { return address(0); }
                function transfer(address to, uint256 v) external {}
            }
            "#,
        );
        let proxy = unit.get("Proxy").unwrap();
        let implementation = unit.get("Impl").unwrap();
        let got = find_selector_clashes(proxy, implementation, &unit);

        // Independent brute force over the two selector surfaces.
        let mut expected = Vec::new();
        for p in external_selectors(proxy, &unit) {
            for i in external_selectors(implementation, &unit) {
                if p.selector == i.selector {
                    expected.push((p.selector, p.signature.clone(), i.signature.clone()));
                }
            }
        }
        assert_eq!(got.len(), expected.len());
        assert_eq!(got.len(), 2); // burn collision + implementation shadow
        for clash in &got {
            assert!(expected.iter().any(|(s, ps, is)| *s == clash.selector
                && *ps == clash.proxy_signature
                && *is == clash.impl_signature));
        }
    }

    #[test]
    fn selector_serializes_as_hex() {
        let sel = Selector::of("burn(uint256)");
        assert_eq!(serde_json::to_string(&sel).unwrap(), "\"0x42966c68\"");
        assert_eq!(sel.to_string(), "0x42966c68");
    }
}
