// SPDX-License-Identifier: Apache-2.0

//! proxyscope — a static analyzer for Solidity upgradeable-proxy patterns.
//!
//! The pipeline, end to end:
//!
//! 1. [`parser`] turns source text into per-file [`ast::SourceUnit`]s,
//!    preserving inline assembly raw (pre-0.6) or as Yul (0.6+).
//! 2. [`model`] resolves multi-contract units: inheritance linearization,
//!    flattened state variables and functions, and a per-function CFG-lite.
//! 3. [`proxy`] decides whether a contract forwards calls via
//!    `delegatecall` and to which variable.
//! 4. [`upgradeability`] decides whether the delegation target can change
//!    after deployment (setter / getter / hardcoded-slot evidence).
//! 5. [`patterns`] names the proxy mechanism against a taxonomy of known
//!    patterns, backed by [`keccak`]-derived selectors and storage slots.
//! 6. [`layout`] and [`clash`] check storage-layout compatibility between
//!    proxy and implementation and report function-selector clashes.
//! 7. [`corpus`] ingests verified sources from explorer APIs, runs batches,
//!    and compares findings against the name-based baseline detector.

pub mod ast;
pub mod clash;
pub mod consteval;
pub mod corpus;
pub mod diag;
pub mod keccak;
pub mod layout;
pub mod lexer;
pub mod model;
pub mod parser;
pub mod patterns;
pub mod printer;
pub mod proxy;
pub mod upgradeability;
pub mod value;
pub mod yul;

pub use diag::{Diagnostic, FileId, Severity, Span};
pub use value::Bytes32;
