// SPDX-License-Identifier: Apache-2.0

//! Source identity, spans, and diagnostics shared by every analysis stage.
//!
//! The analyzer never aborts a batch because one file is malformed: parse
//! and resolution problems are reported as [`Diagnostic`] values attached to
//! whatever output the stage still managed to produce.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Identity of one source file inside a compilation unit.
///
/// Cheap to clone; compares by path text. The path is whatever the caller
/// supplied (a filesystem path, a bundle-internal name like
/// `contracts/Proxy.sol`, or a synthetic name for inline sources).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FileId(Arc<str>);

impl FileId {
    pub fn new(path: impl AsRef<str>) -> Self {
        FileId(Arc::from(path.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for FileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FileId({})", self.0)
    }
}

impl Serialize for FileId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for FileId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(FileId::new(String::deserialize(d)?))
    }
}

/// Byte range inside one file. `start..end` are byte offsets into the
/// original source text; `end` is exclusive.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub file: FileId,
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(file: FileId, start: usize, end: usize) -> Self {
        Span { file, start, end }
    }

    /// Smallest span covering both inputs (same file assumed).
    pub fn join(&self, other: &Span) -> Span {
        Span {
            file: self.file.clone(),
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

impl fmt::Debug for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}..{}", self.file, self.start, self.end)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A non-fatal problem discovered while parsing or analyzing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
    /// Contract the problem belongs to, when attributable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contract: Option<String>,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>, span: Option<Span>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            span,
            contract: None,
        }
    }

    pub fn warning(message: impl Into<String>, span: Option<Span>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            message: message.into(),
            span,
            contract: None,
        }
    }

    pub fn with_contract(mut self, contract: impl Into<String>) -> Self {
        self.contract = Some(contract.into());
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        match (&self.span, &self.contract) {
            (Some(sp), Some(c)) => write!(f, "{sev}: {} ({:?}, contract {c})", self.message, sp),
            (Some(sp), None) => write!(f, "{sev}: {} ({:?})", self.message, sp),
            (None, Some(c)) => write!(f, "{sev}: {} (contract {c})", self.message, c = c),
            (None, None) => write!(f, "{sev}: {}", self.message),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_id_compares_by_path() {
        assert_eq!(FileId::new("a.sol"), FileId::new("a.sol"));
        assert_ne!(FileId::new("a.sol"), FileId::new("b.sol"));
    }

    #[test]
    fn span_join_covers_both() {
        let f = FileId::new("x.sol");
        let a = Span::new(f.clone(), 4, 10);
        let b = Span::new(f.clone(), 8, 20);
        let j = a.join(&b);
        assert_eq!((j.start, j.end), (4, 20));
    }

    #[test]
    fn diagnostic_display_mentions_severity() {
        let d = Diagnostic::warning("something odd", None).with_contract("C");
        let text = d.to_string();
        assert!(text.contains("warning"));
        assert!(text.contains("something odd"));
    }
}
