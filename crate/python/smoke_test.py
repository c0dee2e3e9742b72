#!/usr/bin/env python3
"""Smoke test for the proxyscope_py extension module.

Builds nothing itself: expects `cargo build -p proxyscope-py` (debug or
release) to have produced the cdylib, which it puts on sys.path under the
importable name. Run from anywhere:

    python3 python/smoke_test.py
"""

import json
import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def _bootstrap_module():
    try:
        import proxyscope_py  # noqa: F401 — already installed

        return
    except ImportError:
        pass
    for profile in ("release", "debug"):
        built = os.path.join(ROOT, "target", profile, "libproxyscope_py.so")
        if os.path.exists(built):
            stage = tempfile.mkdtemp(prefix="proxyscope_py_")
            shutil.copyfile(built, os.path.join(stage, "proxyscope_py.so"))
            sys.path.insert(0, stage)
            return
    sys.exit("proxyscope_py is not importable; run `cargo build -p proxyscope-py` first")


_bootstrap_module()

import proxyscope_py as ps  # noqa: E402

PROXY_SOURCE = """
pragma solidity ^0.8.10;

contract UpgradeableRelay {
    address public implementation;
    address public admin;

    constructor(address firstImplementation) {
        implementation = firstImplementation;
        admin = msg.sender;
    }

    function upgradeTo(address newImplementation) external {
        require(msg.sender == admin, "relay: admin only");
        implementation = newImplementation;
    }

    fallback() external payable {
        address target = implementation;
        assembly {
            calldatacopy(0, 0, calldatasize())
            let ok := delegatecall(gas(), target, 0, calldatasize(), 0, 0)
            returndatacopy(0, 0, returndatasize())
            switch ok
            case 0 { revert(0, returndatasize()) }
            default { return(0, returndatasize()) }
        }
    }
}
"""

TOKEN_V1 = """
pragma solidity ^0.8.17;
contract LedgerToken {
    address public owner;
    bool public paused;
    mapping(address => uint256) public balances;
    uint256 public totalSupply;
}
"""

TOKEN_V2_APPEND = TOKEN_V1.replace(
    "uint256 public totalSupply;\n}",
    "uint256 public totalSupply;\n    uint256 public rewardRate;\n}",
)

TOKEN_V2_REORDER = """
pragma solidity ^0.8.17;
contract LedgerToken {
    address public owner;
    bool public paused;
    uint256 public totalSupply;
    mapping(address => uint256) public balances;
}
"""

GATEWAY = """
pragma solidity ^0.8.9;
contract VaultGateway {
    function implementation() external view returns (address) { return address(0); }
    function collate_propagate_storage(bytes16 data) external {}
}
"""

BURNABLE = """
pragma solidity ^0.8.9;
contract BurnableToken {
    function burn(uint256 amount) external {}
    function transfer(address to, uint256 amount) external returns (bool) { return true; }
}
"""

checks = 0


def check(condition, label):
    global checks
    if not condition:
        sys.exit(f"FAIL: {label}")
    checks += 1
    print(f"ok: {label}")


# --- full analysis pipeline -------------------------------------------------

records = ps.analyze_source(PROXY_SOURCE, file_name="relay.sol")
check(len(records) == 1, "analyze_source returns one record for one contract")
rec = records[0]
check(rec.contract == "UpgradeableRelay", "record names the contract")
check(rec.is_proxy, "delegatecall forwarder detected as proxy")
check(rec.mechanism == "asm_yul", "0.8 assembly analyzed as structured Yul")
check(rec.delegates_to == "implementation", "delegation target traced to the state variable")
check(rec.upgradeable and rec.reason == "SETTER_FOUND", "upgradeable via setter")
check(rec.impl_setter == "UpgradeableRelay.upgradeTo(address)", "setter identified")
check(rec.setter_guarded_by_admin, "setter guard recognized")
check(rec.labels == ["BESPOKE_UPGRADEABLE"], "classified as bespoke upgradeable")
check(rec.baseline_flagged, "baseline also flags it (fallback contains delegatecall)")
check(rec.to_dict()["reason"] == "SETTER_FOUND", "record round-trips to dict")

# A name-only "proxy": the baseline flags it, the evidence-based detector
# does not — the false-positive class the comparison measures.
name_only = ps.analyze_source(
    "pragma solidity ^0.8.2;\n"
    "contract TokenProxy { uint256 public supply;"
    " function mint(uint256 n) external { supply += n; } }",
    file_name="token_proxy.sol",
)[0]
check(name_only.baseline_flagged, "baseline falls for the Proxy name")
check(not name_only.is_proxy, "evidence-based detector does not")

try:
    ps.analyze_source("contract (", file_name="bad.sol")
    sys.exit("FAIL: parse errors must raise ValueError")
except ValueError:
    check(True, "parse errors raise ValueError")

# --- selectors and slots ------------------------------------------------------

check(ps.selector("transfer(address,uint256)") == "0xa9059cbb", "pinned ERC-20 selector")
check(
    ps.selector("transfer(address to, uint amount)") == "0xa9059cbb",
    "selector canonicalizes names and uint alias",
)
check(
    ps.canonical_signature("balanceOf( address owner )") == "balanceOf(address)",
    "signature canonicalization",
)
check(ps.selector("burn(uint256)") == ps.selector("collate_propagate_storage(bytes16)"),
      "documented selector collision pair agrees")
check(
    ps.keccak(b"") == "0xc5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470",
    "keccak-256 of empty input matches the pinned digest",
)

slots = ps.known_slots()
check(len(slots) == 5, "verified slot table has all five entries")
by_role = {s["role"]: s for s in slots}
check(
    by_role["Eip1967Implementation"]["slot"]
    == "0x360894a13ba1a3210667c828492db98dca3e2076cc3735a920a3ca505d382bbc",
    "EIP-1967 implementation slot is the pinned constant",
)
check(by_role["Eip1967Implementation"]["minus_one"], "derivation subtracts one")

# --- storage layout ------------------------------------------------------------

layout = ps.storage_layout(TOKEN_V1)
check(layout["contract"] == "LedgerToken", "layout picks the sole contract")
entries = layout["entries"]
check(
    [(e.var_name, e.slot, e.offset, e.size) for e in entries]
    == [("owner", 0, 0, 20), ("paused", 0, 20, 1), ("balances", 1, 0, 32), ("totalSupply", 2, 0, 32)],
    "address+bool pack into slot 0; mapping and uint own full slots",
)

diff = ps.diff_storage(TOKEN_V1, TOKEN_V2_APPEND)
check(diff["status"] == "APPEND_ONLY_COMPATIBLE", "appending a variable stays compatible")
check(diff["violations"] == [], "append produces no violations")

diff = ps.diff_storage(TOKEN_V1, TOKEN_V2_REORDER)
check(diff["status"] == "INCOMPATIBLE", "swapping variables breaks the layout")
check(
    any(v["kind"] == "REORDERED" for v in diff["violations"]),
    "the swap is reported as REORDERED",
)

# --- selector clashes -----------------------------------------------------------

clash = ps.selector_clashes(GATEWAY, BURNABLE)
collisions = [c for c in clash["clashes"] if c["kind"] == "COLLISION"]
check(len(collisions) == 1, "exactly one proxy/implementation collision")
check(collisions[0]["selector"] == "0x42966c68", "collision on the documented selector")

# --- file and batch entry points -------------------------------------------------

fixture = os.path.join(ROOT, "fixtures", "corpus", "eip1967_transparent.sol")
if os.path.exists(fixture):
    file_records = ps.analyze_file(fixture)
    rec = next(r for r in file_records if r.contract == "TransparentUpgradeableProxy")
    check(
        rec.labels == ["EIP1967_UNSTRUCTURED", "TRANSPARENT_ADMIN"],
        "fixture file classifies as transparent EIP-1967 proxy",
    )

corpus_dir = os.path.join(ROOT, "fixtures", "corpus")
if os.path.isdir(corpus_dir):
    report = ps.run_batch([corpus_dir])
    totals = report.totals
    check(totals["contracts"] == 29 and totals["errors"] == 1, "batch totals match the corpus")
    check(len(report) == 30, "__len__ counts records")
    parsed = json.loads(report.to_json())
    check(parsed["schema_version"] == 1, "report JSON parses with the expected schema")

    stats = ps.compare_with_truth(report, os.path.join(corpus_dir, "truth.csv"))
    check(stats["eliminated_fp_ratio"] == 1.0, "every baseline false positive eliminated")
    check(stats["missed_tp"] == 0, "no true proxies missed")

print(f"\nsmoke test passed: {checks} checks")
