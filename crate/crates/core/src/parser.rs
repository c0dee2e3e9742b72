// SPDX-License-Identifier: Apache-2.0

//! Recursive-descent parser for the Solidity subset.
//!
//! Design rules:
//!
//! * One file either parses to a [`SourceUnit`] (possibly with diagnostics
//!   for skipped constructs) or fails with a fatal [`ParseError`]. Batch
//!   callers turn fatal errors into per-file error records and keep going.
//! * Constructs outside the modeled subset (custom errors, `using for`,
//!   try/catch, file-level functions, …) are consumed and skipped with a
//!   warning diagnostic — they never abort the file.
//! * Inline assembly is captured verbatim; when the file's pragma admits no
//!   compiler older than 0.6.0 the block is additionally parsed as Yul. A
//!   Yul parse failure degrades the block to raw text with a diagnostic.

use crate::ast::*;
use crate::diag::{Diagnostic, FileId, Span};
use crate::lexer::{lex, Punct, Tok, Token};
use crate::yul::parse_yul_body;
use thiserror::Error;

/// Default cap on accepted source size: 2 MiB.
pub const DEFAULT_MAX_SOURCE_BYTES: usize = 2 * 1024 * 1024;

#[derive(Clone, Debug)]
pub struct ParseOptions {
    pub max_source_bytes: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { max_source_bytes: DEFAULT_MAX_SOURCE_BYTES }
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("source is {size} bytes, over the {limit}-byte limit")]
    TooLarge { size: usize, limit: usize },
    #[error("lex error at byte {offset}: {message}")]
    Lex { message: String, offset: usize },
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { message: String, offset: usize },
}

/// Parse one source file with default options.
pub fn parse_source(file: FileId, source: &str) -> Result<SourceUnit, ParseError> {
    parse_source_with(file, source, &ParseOptions::default())
}

/// Parse one source file.
pub fn parse_source_with(
    file: FileId,
    source: &str,
    opts: &ParseOptions,
) -> Result<SourceUnit, ParseError> {
    if source.len() > opts.max_source_bytes {
        return Err(ParseError::TooLarge { size: source.len(), limit: opts.max_source_bytes });
    }
    let toks = lex(source).map_err(|e| ParseError::Lex { message: e.message, offset: e.offset })?;
    let mut p = Parser {
        src: source,
        file: file.clone(),
        toks,
        pos: 0,
        diags: Vec::new(),
        pragma: None,
        pragma_text: None,
    };
    let mut unit = SourceUnit {
        file,
        pragma_version: None,
        pragma_text: None,
        imports: Vec::new(),
        contracts: Vec::new(),
        file_constants: Vec::new(),
        diagnostics: Vec::new(),
    };
    p.parse_unit(&mut unit)?;
    unit.pragma_version = p.pragma;
    unit.pragma_text = p.pragma_text.take();
    unit.diagnostics = p.diags;
    Ok(unit)
}

/// Extract the compiler version range from the first `pragma solidity`
/// directive of `source`, if there is one and it parses.
pub fn parse_pragma(source: &str) -> Option<PragmaRange> {
    let toks = lex(source).ok()?;
    let mut i = 0;
    while i < toks.len() {
        if let Tok::Ident(w) = &toks[i].tok {
            if w == "pragma" {
                if let Tok::Ident(kind) = &toks[i + 1].tok {
                    if kind == "solidity" {
                        // Slice from after "solidity" to the semicolon.
                        let start = toks[i + 1].end;
                        let mut j = i + 2;
                        while j < toks.len() && !matches!(toks[j].tok, Tok::Punct(Punct::Semi) | Tok::Eof)
                        {
                            j += 1;
                        }
                        let end = toks[j].start;
                        return parse_version_constraint(&source[start..end]);
                    }
                }
            }
        }
        i += 1;
    }
    None
}

/// Parse a version constraint expression (the text after `pragma solidity`).
///
/// Supports the comparator forms that occur in practice: `^0.8.9`,
/// `>=0.4.22 <0.9.0`, `~0.5.0`, `=0.6.12`, bare versions, `0.8.x`
/// wildcards, hyphen ranges, and `||` unions (union is widened to its
/// bounding hull).
pub fn parse_version_constraint(text: &str) -> Option<PragmaRange> {
    let groups: Vec<&str> = text.split("||").collect();
    let mut hull: Option<PragmaRange> = None;
    for group in groups {
        let range = parse_comparator_group(group)?;
        hull = Some(match hull {
            None => range,
            Some(h) => PragmaRange {
                lo: h.lo.min(range.lo),
                hi: match (h.hi, range.hi) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    _ => None,
                },
            },
        });
    }
    hull
}

fn parse_comparator_group(text: &str) -> Option<PragmaRange> {
    // Tokenize into (op, version-text) pairs.
    let mut lo: Option<Version> = None;
    let mut hi: Option<Version> = None;
    let mut any = false;

    let mut rest = text.trim();
    // Hyphen range: `a - b`.
    if let Some((a, b)) = rest.split_once(" - ") {
        let (alo, _) = parse_partial_version(a.trim())?;
        let (_, bhi) = parse_partial_version(b.trim())?;
        return Some(PragmaRange { lo: alo, hi: bhi });
    }

    while !rest.is_empty() {
        rest = rest.trim_start();
        if rest.is_empty() {
            break;
        }
        let op: &str;
        if rest.starts_with(">=") || rest.starts_with("<=") {
            op = &rest[..2];
            rest = &rest[2..];
        } else if rest.starts_with('^')
            || rest.starts_with('~')
            || rest.starts_with('>')
            || rest.starts_with('<')
            || rest.starts_with('=')
        {
            op = &rest[..1];
            rest = &rest[1..];
        } else {
            op = "";
        }
        rest = rest.trim_start();
        let end = rest
            .find(|c: char| !(c.is_ascii_digit() || c == '.' || c == 'x' || c == 'X' || c == '*'))
            .unwrap_or(rest.len());
        if end == 0 {
            return None;
        }
        let vtext = &rest[..end];
        rest = &rest[end..];
        let (vlo, vhi_wild) = parse_partial_version(vtext)?;
        any = true;

        let (glo, ghi): (Option<Version>, Option<Version>) = match op {
            "^" => {
                let cap = if vlo.major > 0 {
                    Version::new(vlo.major + 1, 0, 0)
                } else {
                    Version::new(0, vlo.minor + 1, 0)
                };
                (Some(vlo), Some(cap))
            }
            "~" => (Some(vlo), Some(Version::new(vlo.major, vlo.minor + 1, 0))),
            ">=" => (Some(vlo), None),
            ">" => (Some(Version::new(vlo.major, vlo.minor, vlo.patch + 1)), None),
            "<=" => (None, Some(Version::new(vlo.major, vlo.minor, vlo.patch + 1))),
            "<" => (None, Some(vlo)),
            "=" | "" => (Some(vlo), vhi_wild),
            _ => return None,
        };
        if let Some(g) = glo {
            lo = Some(match lo {
                None => g,
                Some(cur) => cur.max(g),
            });
        }
        if let Some(g) = ghi {
            hi = Some(match hi {
                None => g,
                Some(cur) => cur.min(g),
            });
        }
    }
    if !any {
        return None;
    }
    Some(PragmaRange { lo: lo.unwrap_or(Version::new(0, 0, 0)), hi })
}

/// Parse `0.8.9`, `0.8`, `0.8.x`, `*` → (lower bound, exclusive upper bound
/// implied by wildcards; `None` when fully pinned is impossible).
fn parse_partial_version(text: &str) -> Option<(Version, Option<Version>)> {
    let parts: Vec<&str> = text.split('.').collect();
    if parts.is_empty() || parts.len() > 3 {
        return None;
    }
    let wild = |s: &str| s.is_empty() || s == "x" || s == "X" || s == "*";
    let num = |s: &str| s.parse::<u32>().ok();

    if wild(parts[0]) {
        return Some((Version::new(0, 0, 0), None));
    }
    let major = num(parts[0])?;
    if parts.len() == 1 || wild(parts[1]) {
        return Some((Version::new(major, 0, 0), Some(Version::new(major + 1, 0, 0))));
    }
    let minor = num(parts[1])?;
    if parts.len() == 2 || wild(parts[2]) {
        return Some((Version::new(major, minor, 0), Some(Version::new(major, minor + 1, 0))));
    }
    let patch = num(parts[2])?;
    let v = Version::new(major, minor, patch);
    Some((v, Some(Version::new(major, minor, patch + 1))))
}

// ---------------------------------------------------------------------------
// The parser proper
// ---------------------------------------------------------------------------

struct Parser<'s> {
    src: &'s str,
    file: FileId,
    toks: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
    pragma: Option<PragmaRange>,
    pragma_text: Option<String>,
}

type PResult<T> = Result<T, ParseError>;

const ELEMENTARY_KEYWORDS: &[&str] =
    &["address", "bool", "string", "bytes", "byte", "uint", "int"];

const UNIT_SUFFIXES: &[&str] = &[
    "wei", "gwei", "szabo", "finney", "ether", "seconds", "minutes", "hours", "days", "weeks",
    "years",
];

fn is_elementary_word(w: &str) -> bool {
    if ELEMENTARY_KEYWORDS.contains(&w) {
        return true;
    }
    for prefix in ["uint", "int", "bytes"] {
        if let Some(suffix) = w.strip_prefix(prefix) {
            if !suffix.is_empty() && suffix.chars().all(|c| c.is_ascii_digit()) {
                return true;
            }
        }
    }
    w.starts_with("fixed") || w.starts_with("ufixed")
}

impl<'s> Parser<'s> {
    // -- token plumbing ----------------------------------------------------

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn cur_token(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn cur_start(&self) -> usize {
        self.toks[self.pos].start
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].end
        }
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    fn span_from(&self, start: usize) -> Span {
        Span::new(self.file.clone(), start, self.prev_end())
    }

    fn here(&self) -> Span {
        let t = self.cur_token();
        Span::new(self.file.clone(), t.start, t.end)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn is_punct(&self, p: Punct) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn eat_punct(&mut self, p: Punct) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: Punct) -> PResult<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.fatal(format!("expected `{}`, found {}", p.text(), self.peek())))
        }
    }

    fn expect_ident(&mut self) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            other => Err(self.fatal(format!("expected identifier, found {other}"))),
        }
    }

    fn fatal(&self, message: String) -> ParseError {
        ParseError::Syntax { message, offset: self.cur_start() }
    }

    fn warn(&mut self, message: impl Into<String>, span: Span) {
        self.diags.push(Diagnostic::warning(message, Some(span)));
    }

    /// Skip tokens until a `;` at bracket depth zero is consumed or a `}` at
    /// depth zero is reached (not consumed). Used for recovery and for
    /// constructs we deliberately skip.
    fn skip_to_semi(&mut self) {
        let mut depth = 0i32;
        loop {
            match self.peek() {
                Tok::Eof => return,
                Tok::Punct(Punct::LBrace) | Tok::Punct(Punct::LParen) | Tok::Punct(Punct::LBracket) => {
                    depth += 1;
                    self.bump();
                }
                Tok::Punct(Punct::RBrace) | Tok::Punct(Punct::RParen) | Tok::Punct(Punct::RBracket) => {
                    if depth == 0 {
                        return;
                    }
                    depth -= 1;
                    self.bump();
                }
                Tok::Punct(Punct::Semi) if depth == 0 => {
                    self.bump();
                    return;
                }
                _ => {
                    self.bump();
                }
            }
        }
    }

    /// With the opening brace as the current token, skip the whole balanced
    /// block (consuming the closing brace).
    fn skip_balanced_braces(&mut self) -> PResult<()> {
        self.expect_punct(Punct::LBrace)?;
        let mut depth = 1;
        while depth > 0 {
            match self.peek() {
                Tok::Eof => return Err(self.fatal("unexpected end of file inside block".into())),
                Tok::Punct(Punct::LBrace) => depth += 1,
                Tok::Punct(Punct::RBrace) => depth -= 1,
                _ => {}
            }
            self.bump();
        }
        Ok(())
    }

    // -- top level ---------------------------------------------------------

    fn parse_unit(&mut self, unit: &mut SourceUnit) -> PResult<()> {
        while !self.at_eof() {
            let start = self.cur_start();
            match self.peek().clone() {
                Tok::Ident(w) => match w.as_str() {
                    "pragma" => self.parse_pragma_directive()?,
                    "import" => {
                        if let Some(dir) = self.parse_import()? {
                            unit.imports.push(dir);
                        }
                    }
                    "contract" | "interface" | "library" => {
                        let c = self.parse_contract(false)?;
                        unit.contracts.push(c);
                    }
                    "abstract" => {
                        self.bump();
                        if self.is_word("contract") {
                            let c = self.parse_contract(true)?;
                            unit.contracts.push(c);
                        } else {
                            let sp = self.span_from(start);
                            self.warn("stray `abstract` at file level skipped", sp);
                            self.skip_to_semi();
                        }
                    }
                    "struct" => {
                        let s = self.parse_struct()?;
                        self.warn(
                            format!("file-level struct `{}` is not modeled; skipped", s.name),
                            s.span,
                        );
                    }
                    "enum" => {
                        let e = self.parse_enum()?;
                        self.warn(
                            format!("file-level enum `{}` is not modeled; skipped", e.name),
                            e.span,
                        );
                    }
                    "function" => {
                        let f = self.parse_function("")?;
                        self.warn(
                            format!(
                                "file-level function `{}` is not modeled; skipped",
                                if f.name.is_empty() { "<unnamed>" } else { &f.name }
                            ),
                            f.span,
                        );
                    }
                    "error" | "using" | "type" => {
                        self.bump();
                        self.skip_to_semi();
                        let sp = self.span_from(start);
                        self.warn(format!("file-level `{w}` declaration skipped"), sp);
                    }
                    _ => {
                        // File-level constant or unknown junk.
                        if let Some(var) = self.try_parse_state_var()? {
                            unit.file_constants.push(var);
                        } else {
                            self.bump();
                            let sp = self.span_from(start);
                            self.warn(format!("unexpected `{w}` at file level skipped"), sp);
                            self.skip_to_semi();
                        }
                    }
                },
                Tok::Punct(Punct::Semi) => {
                    self.bump();
                }
                other => {
                    self.bump();
                    let sp = self.span_from(start);
                    self.warn(format!("unexpected {other} at file level skipped"), sp);
                    self.skip_to_semi();
                }
            }
        }
        Ok(())
    }

    fn parse_pragma_directive(&mut self) -> PResult<()> {
        let start = self.cur_start();
        self.bump(); // pragma
        let kind = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => String::new(),
        };
        // Capture everything to the semicolon for the raw text.
        let body_start = self.cur_start();
        let mut body_end = body_start;
        while !self.at_eof() && !self.is_punct(Punct::Semi) {
            body_end = self.bump().end;
        }
        self.eat_punct(Punct::Semi);
        if kind == "solidity" && self.pragma.is_none() {
            let text = &self.src[body_start..body_end];
            let payload = text.strip_prefix("solidity").unwrap_or(text);
            match parse_version_constraint(payload) {
                Some(range) => {
                    self.pragma = Some(range);
                    self.pragma_text = Some(format!("pragma {};", text.trim()));
                }
                None => {
                    let sp = self.span_from(start);
                    self.warn(format!("unparseable version constraint `{}`", payload.trim()), sp);
                }
            }
        }
        Ok(())
    }

    fn parse_import(&mut self) -> PResult<Option<ImportDirective>> {
        let start = self.cur_start();
        self.bump(); // import
        // Forms: import "p"; import "p" as x; import * as x from "p";
        //        import {a, b} from "p";
        let mut path: Option<String> = None;
        while !self.at_eof() && !self.is_punct(Punct::Semi) {
            if let Tok::Str(s) = self.peek() {
                path = Some(s.clone());
            }
            self.bump();
        }
        self.eat_punct(Punct::Semi);
        let span = self.span_from(start);
        match path {
            Some(p) => Ok(Some(ImportDirective { path: p, span })),
            None => {
                self.warn("import directive without a path string", span);
                Ok(None)
            }
        }
    }

    // -- contracts ---------------------------------------------------------

    fn parse_contract(&mut self, is_abstract: bool) -> PResult<ContractDef> {
        let start = self.cur_start();
        let kw = self.expect_ident()?; // contract | interface | library
        let kind = match (kw.as_str(), is_abstract) {
            ("interface", _) => ContractKind::Interface,
            ("library", _) => ContractKind::Library,
            (_, true) => ContractKind::AbstractContract,
            _ => ContractKind::Contract,
        };
        let name = self.expect_ident()?;
        let mut bases = Vec::new();
        if self.eat_word("is") {
            loop {
                let base = self.parse_dotted_name()?;
                // Base constructor arguments are irrelevant here.
                if self.is_punct(Punct::LParen) {
                    self.skip_balanced_parens()?;
                }
                bases.push(base);
                if !self.eat_punct(Punct::Comma) {
                    break;
                }
            }
        }
        self.expect_punct(Punct::LBrace)?;

        let mut def = ContractDef {
            name: name.clone(),
            kind,
            bases,
            state_vars: Vec::new(),
            functions: Vec::new(),
            modifiers: Vec::new(),
            structs: Vec::new(),
            enums: Vec::new(),
            events: Vec::new(),
            span: Span::new(self.file.clone(), start, start),
        };

        while !self.eat_punct(Punct::RBrace) {
            if self.at_eof() {
                return Err(self.fatal(format!("unexpected end of file inside contract `{name}`")));
            }
            self.parse_contract_member(&mut def)?;
        }
        def.span = self.span_from(start);
        Ok(def)
    }

    fn parse_contract_member(&mut self, def: &mut ContractDef) -> PResult<()> {
        let start = self.cur_start();
        let word = match self.peek() {
            Tok::Ident(w) => w.clone(),
            Tok::Punct(Punct::Semi) => {
                self.bump();
                return Ok(());
            }
            other => {
                let msg = format!("unexpected {other} in contract body; skipped");
                let sp = self.here();
                self.bump();
                self.warn(msg, sp);
                self.skip_to_semi();
                return Ok(());
            }
        };
        match word.as_str() {
            "function" | "constructor" | "fallback" | "receive" => {
                let f = self.parse_function(&def.name)?;
                def.functions.push(f);
            }
            "modifier" => {
                let m = self.parse_modifier()?;
                def.modifiers.push(m);
            }
            "event" => {
                self.bump();
                let ev = self.expect_ident()?;
                if self.is_punct(Punct::LParen) {
                    self.skip_balanced_parens()?;
                }
                self.eat_word("anonymous");
                self.eat_punct(Punct::Semi);
                def.events.push(ev);
            }
            "struct" => {
                let s = self.parse_struct()?;
                def.structs.push(s);
            }
            "enum" => {
                let e = self.parse_enum()?;
                def.enums.push(e);
            }
            "using" => {
                self.bump();
                self.skip_to_semi();
                let sp = self.span_from(start);
                self.warn("`using … for …` directive skipped", sp);
            }
            "error" => {
                self.bump();
                self.skip_to_semi();
                let sp = self.span_from(start);
                self.warn("custom error declaration skipped", sp);
            }
            _ => {
                match self.try_parse_state_var()? {
                    Some(var) => def.state_vars.push(var),
                    None => {
                        let sp = self.here();
                        self.warn(
                            format!("unrecognized contract member starting at `{word}`; skipped"),
                            sp,
                        );
                        self.skip_to_semi();
                    }
                }
            }
        }
        Ok(())
    }

    /// Attempt to parse `Type [attrs] name [= init];`. Returns `Ok(None)`
    /// (with position restored) when the tokens do not shape like a state
    /// variable declaration.
    fn try_parse_state_var(&mut self) -> PResult<Option<StateVarDecl>> {
        let snapshot = self.pos;
        let start = self.cur_start();
        let ty = match self.parse_type() {
            Ok(t) => t,
            Err(_) => {
                self.pos = snapshot;
                return Ok(None);
            }
        };
        let mut visibility = VarVisibility::Internal;
        let mut mutability = VarMutability::Mutable;
        loop {
            if self.eat_word("public") {
                visibility = VarVisibility::Public;
            } else if self.eat_word("internal") {
                visibility = VarVisibility::Internal;
            } else if self.eat_word("private") {
                visibility = VarVisibility::Private;
            } else if self.eat_word("constant") {
                mutability = VarMutability::Constant;
            } else if self.eat_word("immutable") {
                mutability = VarMutability::Immutable;
            } else if self.eat_word("override") {
                if self.is_punct(Punct::LParen) {
                    self.skip_balanced_parens()?;
                }
            } else if self.eat_word("transient") {
                // Transient storage: keep the variable, layout ignores it.
            } else {
                break;
            }
        }
        let name = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => {
                self.pos = snapshot;
                return Ok(None);
            }
        };
        self.bump();
        let initializer = if self.eat_punct(Punct::Assign) {
            Some(self.parse_expr()?)
        } else {
            None
        };
        if !self.eat_punct(Punct::Semi) {
            self.pos = snapshot;
            return Ok(None);
        }
        Ok(Some(StateVarDecl {
            name,
            ty,
            visibility,
            mutability,
            initializer,
            span: self.span_from(start),
        }))
    }

    fn parse_struct(&mut self) -> PResult<StructDef> {
        let start = self.cur_start();
        self.bump(); // struct
        let name = self.expect_ident()?;
        self.expect_punct(Punct::LBrace)?;
        let mut fields = Vec::new();
        while !self.eat_punct(Punct::RBrace) {
            if self.at_eof() {
                return Err(self.fatal(format!("unexpected end of file in struct `{name}`")));
            }
            let ty = self.parse_type()?;
            let fname = self.expect_ident()?;
            self.expect_punct(Punct::Semi)?;
            fields.push((fname, ty));
        }
        Ok(StructDef { name, fields, span: self.span_from(start) })
    }

    fn parse_enum(&mut self) -> PResult<EnumDef> {
        let start = self.cur_start();
        self.bump(); // enum
        let name = self.expect_ident()?;
        self.expect_punct(Punct::LBrace)?;
        let mut members = Vec::new();
        while !self.eat_punct(Punct::RBrace) {
            if self.at_eof() {
                return Err(self.fatal(format!("unexpected end of file in enum `{name}`")));
            }
            members.push(self.expect_ident()?);
            if !self.eat_punct(Punct::Comma) && !self.is_punct(Punct::RBrace) {
                return Err(self.fatal("expected `,` or `}` in enum body".into()));
            }
        }
        Ok(EnumDef { name, members, span: self.span_from(start) })
    }

    fn parse_modifier(&mut self) -> PResult<ModifierDef> {
        let start = self.cur_start();
        self.bump(); // modifier
        let name = self.expect_ident()?;
        let params = if self.is_punct(Punct::LParen) { self.parse_params()? } else { Vec::new() };
        // `virtual` / `override` may appear on modifiers.
        loop {
            if self.eat_word("virtual") {
                continue;
            }
            if self.eat_word("override") {
                if self.is_punct(Punct::LParen) {
                    self.skip_balanced_parens()?;
                }
                continue;
            }
            break;
        }
        let body = if self.eat_punct(Punct::Semi) { None } else { Some(self.parse_block()?) };
        Ok(ModifierDef { name, params, body, span: self.span_from(start) })
    }

    fn parse_function(&mut self, contract_name: &str) -> PResult<FunctionDef> {
        let start = self.cur_start();
        let head = self.expect_ident()?; // function | constructor | fallback | receive
        let mut is_constructor = head == "constructor";
        let mut is_fallback = head == "fallback";
        let is_receive = head == "receive";
        let mut name = String::new();
        if head == "function" {
            if let Tok::Ident(n) = self.peek() {
                name = n.clone();
                self.bump();
            }
            // Legacy forms: `function C()` constructor, `function()` fallback.
            if !contract_name.is_empty() && name == contract_name {
                is_constructor = true;
            }
            if name.is_empty() {
                is_fallback = true;
            }
        } else if head == "fallback" || head == "receive" {
            name = head.clone();
        }

        let params = self.parse_params()?;

        let mut visibility = if is_fallback || is_receive {
            FnVisibility::External
        } else {
            FnVisibility::Public
        };
        let mut mutability = FnMutability::NonPayable;
        let mut is_virtual = false;
        let mut is_override = false;
        let mut modifiers = Vec::new();
        let mut returns = Vec::new();

        while let Tok::Ident(w) = self.peek() {
            let word = w.clone();
            match word.as_str() {
                "public" => {
                    self.bump();
                    visibility = FnVisibility::Public;
                }
                "external" => {
                    self.bump();
                    visibility = FnVisibility::External;
                }
                "internal" => {
                    self.bump();
                    visibility = FnVisibility::Internal;
                }
                "private" => {
                    self.bump();
                    visibility = FnVisibility::Private;
                }
                "payable" => {
                    self.bump();
                    mutability = FnMutability::Payable;
                }
                "view" | "constant" => {
                    self.bump();
                    mutability = FnMutability::View;
                }
                "pure" => {
                    self.bump();
                    mutability = FnMutability::Pure;
                }
                "virtual" => {
                    self.bump();
                    is_virtual = true;
                }
                "override" => {
                    self.bump();
                    is_override = true;
                    if self.is_punct(Punct::LParen) {
                        self.skip_balanced_parens()?;
                    }
                }
                "returns" => {
                    self.bump();
                    returns = self.parse_params()?;
                }
                _ => {
                    // Modifier invocation.
                    let mstart = self.cur_start();
                    let mname = self.parse_dotted_name()?;
                    let margs = if self.is_punct(Punct::LParen) {
                        self.parse_call_arg_list()?
                    } else {
                        Vec::new()
                    };
                    modifiers.push(ModifierInvocation {
                        name: mname,
                        args: margs,
                        span: self.span_from(mstart),
                    });
                }
            }
        }

        let body = if self.eat_punct(Punct::Semi) { None } else { Some(self.parse_block()?) };
        Ok(FunctionDef {
            name,
            params,
            returns,
            visibility,
            mutability,
            is_constructor,
            is_fallback,
            is_receive,
            is_virtual,
            is_override,
            modifiers,
            body,
            span: self.span_from(start),
        })
    }

    fn parse_params(&mut self) -> PResult<Vec<Param>> {
        self.expect_punct(Punct::LParen)?;
        let mut params = Vec::new();
        if self.eat_punct(Punct::RParen) {
            return Ok(params);
        }
        loop {
            let start = self.cur_start();
            let ty = self.parse_type()?;
            let location = self.parse_location();
            let name = match self.peek() {
                Tok::Ident(n)
                    if !matches!(n.as_str(), "memory" | "calldata" | "storage") =>
                {
                    let n = n.clone();
                    self.bump();
                    Some(n)
                }
                _ => None,
            };
            params.push(Param { name, ty, location, span: self.span_from(start) });
            if self.eat_punct(Punct::Comma) {
                continue;
            }
            self.expect_punct(Punct::RParen)?;
            break;
        }
        Ok(params)
    }

    fn parse_location(&mut self) -> Option<StorageLocation> {
        if self.eat_word("memory") {
            Some(StorageLocation::Memory)
        } else if self.eat_word("calldata") {
            Some(StorageLocation::Calldata)
        } else if self.eat_word("storage") {
            Some(StorageLocation::Storage)
        } else {
            None
        }
    }

    fn parse_dotted_name(&mut self) -> PResult<String> {
        let mut name = self.expect_ident()?;
        while self.is_punct(Punct::Dot) {
            if let Tok::Ident(_) = self.peek_at(1) {
                self.bump();
                let part = self.expect_ident()?;
                name.push('.');
                name.push_str(&part);
            } else {
                break;
            }
        }
        Ok(name)
    }

    fn skip_balanced_parens(&mut self) -> PResult<()> {
        self.expect_punct(Punct::LParen)?;
        let mut depth = 1;
        while depth > 0 {
            match self.peek() {
                Tok::Eof => return Err(self.fatal("unexpected end of file inside `(…)`".into())),
                Tok::Punct(Punct::LParen) => depth += 1,
                Tok::Punct(Punct::RParen) => depth -= 1,
                _ => {}
            }
            self.bump();
        }
        Ok(())
    }

    // -- types ---------------------------------------------------------------

    fn parse_type(&mut self) -> PResult<TypeLabel> {
        let base = self.parse_type_base()?;
        self.parse_array_suffixes(base)
    }

    fn parse_type_base(&mut self) -> PResult<TypeLabel> {
        let word = match self.peek() {
            Tok::Ident(w) => w.clone(),
            other => return Err(self.fatal(format!("expected type, found {other}"))),
        };
        if word == "mapping" {
            self.bump();
            self.expect_punct(Punct::LParen)?;
            let key = self.parse_type()?;
            // Named mapping parameters (0.8.18+): `mapping(address owner => …)`.
            if matches!(self.peek(), Tok::Ident(_)) {
                self.bump();
            }
            self.expect_punct(Punct::FatArrow)?;
            let value = self.parse_type()?;
            if matches!(self.peek(), Tok::Ident(_)) {
                self.bump();
            }
            self.expect_punct(Punct::RParen)?;
            return Ok(TypeLabel::Mapping { key: Box::new(key), value: Box::new(value) });
        }
        if word == "function" {
            // Function type: consume `function (…) [attrs] [returns (…)]`.
            let start = self.cur_start();
            self.bump();
            if self.is_punct(Punct::LParen) {
                self.skip_balanced_parens()?;
            }
            loop {
                match self.peek() {
                    Tok::Ident(w)
                        if matches!(
                            w.as_str(),
                            "internal" | "external" | "public" | "private" | "pure" | "view"
                                | "payable" | "constant"
                        ) =>
                    {
                        self.bump();
                    }
                    Tok::Ident(w) if w == "returns" => {
                        self.bump();
                        if self.is_punct(Punct::LParen) {
                            self.skip_balanced_parens()?;
                        }
                    }
                    _ => break,
                }
            }
            let text = self.src[start..self.prev_end()].to_string();
            return Ok(TypeLabel::Unsupported(text));
        }
        if let Some(elem) = parse_elementary(&word) {
            self.bump();
            if let ElementaryType::Address { .. } = elem {
                if self.eat_word("payable") {
                    return Ok(TypeLabel::Elementary(ElementaryType::Address { payable: true }));
                }
            }
            return Ok(TypeLabel::Elementary(elem));
        }
        if word.starts_with("fixed") || word.starts_with("ufixed") {
            self.bump();
            return Ok(TypeLabel::Unsupported(word));
        }
        // Reject statement keywords so the var-decl probe fails fast.
        if matches!(
            word.as_str(),
            "return" | "if" | "else" | "for" | "while" | "do" | "emit" | "require" | "revert"
                | "assembly" | "delete" | "new" | "break" | "continue" | "unchecked" | "try"
                | "throw" | "_"
        ) {
            return Err(self.fatal(format!("`{word}` is not a type")));
        }
        let name = self.parse_dotted_name()?;
        Ok(TypeLabel::User(name))
    }

    fn parse_array_suffixes(&mut self, mut ty: TypeLabel) -> PResult<TypeLabel> {
        while self.is_punct(Punct::LBracket) {
            self.bump();
            if self.eat_punct(Punct::RBracket) {
                ty = TypeLabel::DynArray(Box::new(ty));
                continue;
            }
            // Fixed length: literal numbers are modeled, anything else is
            // kept but unsupported for layout purposes.
            let len_tok = self.peek().clone();
            let is_literal_len = matches!(&len_tok, Tok::Number(_))
                && matches!(self.peek_at(1), Tok::Punct(Punct::RBracket));
            if is_literal_len {
                if let Tok::Number(n) = len_tok {
                    self.bump();
                    self.expect_punct(Punct::RBracket)?;
                    match parse_number_as_u64(&n) {
                        Some(len) => {
                            ty = TypeLabel::FixedArray { elem: Box::new(ty), len };
                            continue;
                        }
                        None => {
                            ty = TypeLabel::Unsupported(format!("{}[{}]", ty.display_name(), n));
                            continue;
                        }
                    }
                }
            }
            // Non-literal length expression: consume to the closing bracket.
            let mut depth = 1;
            let mut text = String::new();
            while depth > 0 {
                match self.peek() {
                    Tok::Eof => return Err(self.fatal("unexpected end of file in `[…]`".into())),
                    Tok::Punct(Punct::LBracket) => depth += 1,
                    Tok::Punct(Punct::RBracket) => {
                        depth -= 1;
                        if depth == 0 {
                            self.bump();
                            break;
                        }
                    }
                    _ => {}
                }
                let t = self.bump();
                text.push_str(&self.src[t.start..t.end]);
            }
            ty = TypeLabel::Unsupported(format!("{}[{}]", ty.display_name(), text));
        }
        Ok(ty)
    }

    // -- statements ----------------------------------------------------------

    fn parse_block(&mut self) -> PResult<Vec<Stmt>> {
        self.expect_punct(Punct::LBrace)?;
        let mut stmts = Vec::new();
        while !self.eat_punct(Punct::RBrace) {
            if self.at_eof() {
                return Err(self.fatal("unexpected end of file inside block".into()));
            }
            stmts.push(self.parse_stmt()?);
        }
        Ok(stmts)
    }

    fn branch_body(&mut self) -> PResult<Vec<Stmt>> {
        if self.is_punct(Punct::LBrace) {
            self.parse_block()
        } else {
            Ok(vec![self.parse_stmt()?])
        }
    }

    fn parse_stmt(&mut self) -> PResult<Stmt> {
        let start = self.cur_start();
        if self.is_punct(Punct::LBrace) {
            let body = self.parse_block()?;
            return Ok(Stmt::new(self.span_from(start), StmtKind::Block(body)));
        }
        let word = match self.peek() {
            Tok::Ident(w) => Some(w.clone()),
            _ => None,
        };
        if let Some(w) = word {
            match w.as_str() {
                "if" => {
                    self.bump();
                    self.expect_punct(Punct::LParen)?;
                    let cond = self.parse_expr()?;
                    self.expect_punct(Punct::RParen)?;
                    let then_branch = self.branch_body()?;
                    let else_branch =
                        if self.eat_word("else") { Some(self.branch_body()?) } else { None };
                    return Ok(Stmt::new(
                        self.span_from(start),
                        StmtKind::If { cond, then_branch, else_branch },
                    ));
                }
                "while" => {
                    self.bump();
                    self.expect_punct(Punct::LParen)?;
                    let cond = self.parse_expr()?;
                    self.expect_punct(Punct::RParen)?;
                    let body = self.branch_body()?;
                    return Ok(Stmt::new(self.span_from(start), StmtKind::While { cond, body }));
                }
                "do" => {
                    self.bump();
                    let body = self.branch_body()?;
                    if !self.eat_word("while") {
                        return Err(self.fatal("expected `while` after `do` body".into()));
                    }
                    self.expect_punct(Punct::LParen)?;
                    let cond = self.parse_expr()?;
                    self.expect_punct(Punct::RParen)?;
                    self.expect_punct(Punct::Semi)?;
                    return Ok(Stmt::new(self.span_from(start), StmtKind::DoWhile { cond, body }));
                }
                "for" => {
                    self.bump();
                    self.expect_punct(Punct::LParen)?;
                    let init = if self.eat_punct(Punct::Semi) {
                        None
                    } else {
                        Some(Box::new(self.parse_simple_stmt_semi()?))
                    };
                    let cond =
                        if self.is_punct(Punct::Semi) { None } else { Some(self.parse_expr()?) };
                    self.expect_punct(Punct::Semi)?;
                    let post =
                        if self.is_punct(Punct::RParen) { None } else { Some(self.parse_expr()?) };
                    self.expect_punct(Punct::RParen)?;
                    let body = self.branch_body()?;
                    return Ok(Stmt::new(
                        self.span_from(start),
                        StmtKind::For { init, cond, post, body },
                    ));
                }
                "return" => {
                    self.bump();
                    let value =
                        if self.is_punct(Punct::Semi) { None } else { Some(self.parse_expr()?) };
                    self.expect_punct(Punct::Semi)?;
                    return Ok(Stmt::new(self.span_from(start), StmtKind::Return(value)));
                }
                "require" if matches!(self.peek_at(1), Tok::Punct(Punct::LParen)) => {
                    self.bump();
                    let args = self.parse_call_arg_list()?;
                    self.expect_punct(Punct::Semi)?;
                    return Ok(Stmt::new(self.span_from(start), StmtKind::Require { args }));
                }
                "emit" => {
                    self.bump();
                    let event = self.parse_dotted_name()?;
                    let args = self.parse_call_arg_list()?;
                    self.expect_punct(Punct::Semi)?;
                    return Ok(Stmt::new(self.span_from(start), StmtKind::Emit { event, args }));
                }
                "revert" => {
                    self.bump();
                    let mut error = None;
                    let mut args = Vec::new();
                    if let Tok::Ident(_) = self.peek() {
                        error = Some(self.parse_dotted_name()?);
                    }
                    if self.is_punct(Punct::LParen) {
                        args = self.parse_call_arg_list()?;
                    }
                    self.expect_punct(Punct::Semi)?;
                    return Ok(Stmt::new(self.span_from(start), StmtKind::Revert { error, args }));
                }
                "throw" => {
                    self.bump();
                    self.expect_punct(Punct::Semi)?;
                    return Ok(Stmt::new(
                        self.span_from(start),
                        StmtKind::Revert { error: None, args: Vec::new() },
                    ));
                }
                "assembly" => {
                    return self.parse_assembly(start);
                }
                "unchecked" => {
                    self.bump();
                    let body = self.parse_block()?;
                    return Ok(Stmt::new(self.span_from(start), StmtKind::Block(body)));
                }
                "break" => {
                    self.bump();
                    self.expect_punct(Punct::Semi)?;
                    return Ok(Stmt::new(self.span_from(start), StmtKind::Break));
                }
                "continue" => {
                    self.bump();
                    self.expect_punct(Punct::Semi)?;
                    return Ok(Stmt::new(self.span_from(start), StmtKind::Continue));
                }
                "try" => {
                    return self.skip_try_statement(start);
                }
                "_" if matches!(self.peek_at(1), Tok::Punct(Punct::Semi)) => {
                    self.bump();
                    self.bump();
                    return Ok(Stmt::new(self.span_from(start), StmtKind::Placeholder));
                }
                _ => {}
            }
        }
        let stmt = self.parse_simple_stmt_semi()?;
        Ok(stmt)
    }

    /// Variable declaration or expression statement, consuming the trailing
    /// semicolon.
    fn parse_simple_stmt_semi(&mut self) -> PResult<Stmt> {
        let start = self.cur_start();
        if let Some(stmt) = self.try_parse_var_decl()? {
            return Ok(stmt);
        }
        let expr = self.parse_expr()?;
        self.expect_punct(Punct::Semi)?;
        Ok(Stmt::new(self.span_from(start), StmtKind::Expr(expr)))
    }

    fn try_parse_var_decl(&mut self) -> PResult<Option<Stmt>> {
        let snapshot = self.pos;
        let start = self.cur_start();

        // Legacy `var (a, b) = …;` / `var x = …;`.
        if self.is_word("var") {
            self.bump();
            let mut decls = Vec::new();
            if self.eat_punct(Punct::LParen) {
                loop {
                    if self.is_punct(Punct::Comma) || self.is_punct(Punct::RParen) {
                        decls.push(None);
                    } else {
                        let nstart = self.cur_start();
                        let name = self.expect_ident()?;
                        decls.push(Some(VarDeclPart {
                            name,
                            ty: TypeLabel::Unsupported("var".into()),
                            location: None,
                            span: self.span_from(nstart),
                        }));
                    }
                    if self.eat_punct(Punct::Comma) {
                        continue;
                    }
                    self.expect_punct(Punct::RParen)?;
                    break;
                }
            } else {
                let nstart = self.cur_start();
                let name = self.expect_ident()?;
                decls.push(Some(VarDeclPart {
                    name,
                    ty: TypeLabel::Unsupported("var".into()),
                    location: None,
                    span: self.span_from(nstart),
                }));
            }
            let init =
                if self.eat_punct(Punct::Assign) { Some(self.parse_expr()?) } else { None };
            self.expect_punct(Punct::Semi)?;
            return Ok(Some(Stmt::new(self.span_from(start), StmtKind::VarDecl { decls, init })));
        }

        // Tuple destructuring declaration: `(T a, , U b) = expr;`.
        if self.is_punct(Punct::LParen) {
            if let Some(stmt) = self.try_parse_tuple_decl()? {
                return Ok(Some(stmt));
            }
            self.pos = snapshot;
            return Ok(None);
        }

        // Single declaration: `Type [loc] name [= init];`.
        if !matches!(self.peek(), Tok::Ident(_)) {
            return Ok(None);
        }
        let ty = match self.parse_type() {
            Ok(t) => t,
            Err(_) => {
                self.pos = snapshot;
                return Ok(None);
            }
        };
        let location = self.parse_location();
        let name = match self.peek() {
            Tok::Ident(n) => n.clone(),
            _ => {
                self.pos = snapshot;
                return Ok(None);
            }
        };
        let nstart = self.cur_start();
        self.bump();
        let next_ok = self.is_punct(Punct::Assign) || self.is_punct(Punct::Semi);
        if !next_ok {
            self.pos = snapshot;
            return Ok(None);
        }
        let part =
            VarDeclPart { name, ty, location, span: Span::new(self.file.clone(), nstart, self.prev_end()) };
        let init = if self.eat_punct(Punct::Assign) { Some(self.parse_expr()?) } else { None };
        if !self.eat_punct(Punct::Semi) {
            self.pos = snapshot;
            return Ok(None);
        }
        Ok(Some(Stmt::new(
            self.span_from(start),
            StmtKind::VarDecl { decls: vec![Some(part)], init },
        )))
    }

    fn try_parse_tuple_decl(&mut self) -> PResult<Option<Stmt>> {
        let snapshot = self.pos;
        let start = self.cur_start();
        self.expect_punct(Punct::LParen)?;
        let mut decls: Vec<Option<VarDeclPart>> = Vec::new();
        loop {
            if self.is_punct(Punct::Comma) || self.is_punct(Punct::RParen) {
                decls.push(None);
            } else {
                let dstart = self.cur_start();
                let ty = match self.parse_type() {
                    Ok(t) => t,
                    Err(_) => {
                        self.pos = snapshot;
                        return Ok(None);
                    }
                };
                let location = self.parse_location();
                let name = match self.peek() {
                    Tok::Ident(n) => n.clone(),
                    _ => {
                        self.pos = snapshot;
                        return Ok(None);
                    }
                };
                self.bump();
                decls.push(Some(VarDeclPart { name, ty, location, span: self.span_from(dstart) }));
            }
            if self.eat_punct(Punct::Comma) {
                continue;
            }
            if self.eat_punct(Punct::RParen) {
                break;
            }
            self.pos = snapshot;
            return Ok(None);
        }
        if !self.eat_punct(Punct::Assign) {
            self.pos = snapshot;
            return Ok(None);
        }
        // A declaration tuple needs at least one declared name.
        if decls.iter().all(|d| d.is_none()) {
            self.pos = snapshot;
            return Ok(None);
        }
        let init = self.parse_expr()?;
        self.expect_punct(Punct::Semi)?;
        Ok(Some(Stmt::new(
            self.span_from(start),
            StmtKind::VarDecl { decls, init: Some(init) },
        )))
    }

    fn parse_assembly(&mut self, start: usize) -> PResult<Stmt> {
        self.bump(); // assembly
        // Optional dialect string and/or flag list: assembly "evmasm" ("memory-safe").
        if let Tok::Str(_) = self.peek() {
            self.bump();
        }
        if self.is_punct(Punct::LParen) {
            self.skip_balanced_parens()?;
        }
        if !self.is_punct(Punct::LBrace) {
            return Err(self.fatal("expected `{` after `assembly`".into()));
        }
        let open = self.bump(); // consumes `{`
        let text_start = open.end;
        let mut depth = 1;
        let mut text_end = text_start;
        while depth > 0 {
            match self.peek() {
                Tok::Eof => {
                    return Err(self.fatal("unexpected end of file inside assembly block".into()))
                }
                Tok::Punct(Punct::LBrace) => depth += 1,
                Tok::Punct(Punct::RBrace) => {
                    depth -= 1;
                    if depth == 0 {
                        text_end = self.cur_start();
                    }
                }
                _ => {}
            }
            self.bump();
        }
        let text = self.src[text_start..text_end].to_string();
        let span = self.span_from(start);

        let modern = self
            .pragma
            .map(|p| p.entirely_at_or_above(Version::YUL_BOUNDARY))
            .unwrap_or(false);
        let ast = if modern {
            match parse_yul_body(&text) {
                Ok(stmts) => Some(stmts),
                Err(e) => {
                    self.warn(
                        format!(
                            "assembly block did not parse as Yul ({}); kept as raw text",
                            e.message
                        ),
                        span.clone(),
                    );
                    None
                }
            }
        } else {
            None
        };
        Ok(Stmt::new(span.clone(), StmtKind::Assembly(YulBlock { text, ast, span })))
    }

    fn skip_try_statement(&mut self, start: usize) -> PResult<Stmt> {
        self.bump(); // try
        let _ = self.parse_expr()?;
        if self.eat_word("returns")
            && self.is_punct(Punct::LParen) {
                self.skip_balanced_parens()?;
            }
        if self.is_punct(Punct::LBrace) {
            self.skip_balanced_braces()?;
        }
        while self.eat_word("catch") {
            if let Tok::Ident(_) = self.peek() {
                self.bump();
            }
            if self.is_punct(Punct::LParen) {
                self.skip_balanced_parens()?;
            }
            if self.is_punct(Punct::LBrace) {
                self.skip_balanced_braces()?;
            }
        }
        let span = self.span_from(start);
        self.warn("try/catch statement skipped (not modeled)", span.clone());
        Ok(Stmt::new(span, StmtKind::Block(Vec::new())))
    }

    // -- expressions ---------------------------------------------------------

    fn parse_expr(&mut self) -> PResult<Expr> {
        self.parse_assignment()
    }

    fn parse_assignment(&mut self) -> PResult<Expr> {
        let start = self.cur_start();
        let lhs = self.parse_conditional()?;
        let op = match self.peek() {
            Tok::Punct(Punct::Assign) => Some(None),
            Tok::Punct(Punct::PlusEq) => Some(Some(BinOp::Add)),
            Tok::Punct(Punct::MinusEq) => Some(Some(BinOp::Sub)),
            Tok::Punct(Punct::StarEq) => Some(Some(BinOp::Mul)),
            Tok::Punct(Punct::SlashEq) => Some(Some(BinOp::Div)),
            Tok::Punct(Punct::PercentEq) => Some(Some(BinOp::Mod)),
            Tok::Punct(Punct::AmpEq) => Some(Some(BinOp::BitAnd)),
            Tok::Punct(Punct::PipeEq) => Some(Some(BinOp::BitOr)),
            Tok::Punct(Punct::CaretEq) => Some(Some(BinOp::BitXor)),
            Tok::Punct(Punct::ShlEq) => Some(Some(BinOp::Shl)),
            Tok::Punct(Punct::ShrEq) => Some(Some(BinOp::Shr)),
            _ => None,
        };
        if let Some(op) = op {
            self.bump();
            let rhs = self.parse_assignment()?;
            return Ok(Expr::new(
                self.span_from(start),
                ExprKind::Assign { lhs: Box::new(lhs), op, rhs: Box::new(rhs) },
            ));
        }
        Ok(lhs)
    }

    fn parse_conditional(&mut self) -> PResult<Expr> {
        let start = self.cur_start();
        let cond = self.parse_binary(0)?;
        if self.eat_punct(Punct::Question) {
            let then_value = self.parse_expr()?;
            self.expect_punct(Punct::Colon)?;
            let else_value = self.parse_conditional()?;
            return Ok(Expr::new(
                self.span_from(start),
                ExprKind::Conditional {
                    cond: Box::new(cond),
                    then_value: Box::new(then_value),
                    else_value: Box::new(else_value),
                },
            ));
        }
        Ok(cond)
    }

    fn binop_at(&self, level: usize) -> Option<BinOp> {
        let p = match self.peek() {
            Tok::Punct(p) => *p,
            _ => return None,
        };
        let op = match (level, p) {
            (0, Punct::PipePipe) => BinOp::Or,
            (1, Punct::AmpAmp) => BinOp::And,
            (2, Punct::EqEq) => BinOp::Eq,
            (2, Punct::Ne) => BinOp::Ne,
            (3, Punct::Lt) => BinOp::Lt,
            (3, Punct::Gt) => BinOp::Gt,
            (3, Punct::Le) => BinOp::Le,
            (3, Punct::Ge) => BinOp::Ge,
            (4, Punct::Pipe) => BinOp::BitOr,
            (5, Punct::Caret) => BinOp::BitXor,
            (6, Punct::Amp) => BinOp::BitAnd,
            (7, Punct::Shl) => BinOp::Shl,
            (7, Punct::Shr) => BinOp::Shr,
            (8, Punct::Plus) => BinOp::Add,
            (8, Punct::Minus) => BinOp::Sub,
            (9, Punct::Star) => BinOp::Mul,
            (9, Punct::Slash) => BinOp::Div,
            (9, Punct::Percent) => BinOp::Mod,
            _ => return None,
        };
        Some(op)
    }

    const MAX_BIN_LEVEL: usize = 10;

    fn parse_binary(&mut self, level: usize) -> PResult<Expr> {
        if level >= Self::MAX_BIN_LEVEL {
            return self.parse_exponent();
        }
        let start = self.cur_start();
        let mut lhs = self.parse_binary(level + 1)?;
        while let Some(op) = self.binop_at(level) {
            self.bump();
            let rhs = self.parse_binary(level + 1)?;
            lhs = Expr::new(
                self.span_from(start),
                ExprKind::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) },
            );
        }
        Ok(lhs)
    }

    fn parse_exponent(&mut self) -> PResult<Expr> {
        let start = self.cur_start();
        let base = self.parse_unary()?;
        if self.eat_punct(Punct::StarStar) {
            // Right-associative.
            let exp = self.parse_exponent()?;
            return Ok(Expr::new(
                self.span_from(start),
                ExprKind::Binary { op: BinOp::Pow, lhs: Box::new(base), rhs: Box::new(exp) },
            ));
        }
        Ok(base)
    }

    fn parse_unary(&mut self) -> PResult<Expr> {
        let start = self.cur_start();
        let op = match self.peek() {
            Tok::Punct(Punct::Bang) => Some(UnOp::Not),
            Tok::Punct(Punct::Tilde) => Some(UnOp::BitNot),
            Tok::Punct(Punct::Minus) => Some(UnOp::Neg),
            Tok::Punct(Punct::PlusPlus) => Some(UnOp::Inc),
            Tok::Punct(Punct::MinusMinus) => Some(UnOp::Dec),
            Tok::Ident(w) if w == "delete" => Some(UnOp::Delete),
            Tok::Punct(Punct::Plus) => {
                // Deprecated unary plus: skip it.
                self.bump();
                return self.parse_unary();
            }
            _ => None,
        };
        if let Some(op) = op {
            self.bump();
            let operand = self.parse_unary()?;
            return Ok(Expr::new(
                self.span_from(start),
                ExprKind::Unary { op, operand: Box::new(operand), prefix: true },
            ));
        }
        self.parse_postfix()
    }

    fn parse_postfix(&mut self) -> PResult<Expr> {
        let start = self.cur_start();
        let mut expr = self.parse_primary()?;
        loop {
            match self.peek() {
                Tok::Punct(Punct::Dot) => {
                    // Only a member access when an identifier follows;
                    // `.5` numbers never reach here (lexed whole).
                    if let Tok::Ident(_) = self.peek_at(1) {
                        self.bump();
                        let member = self.expect_ident()?;
                        let is_msg = matches!(&expr.kind, ExprKind::Ident(b) if b == "msg");
                        let msg_field = match member.as_str() {
                            "sender" => Some(MsgField::Sender),
                            "sig" => Some(MsgField::Sig),
                            "data" => Some(MsgField::Data),
                            "value" => Some(MsgField::Value),
                            _ => None,
                        };
                        expr = match (is_msg, msg_field) {
                            (true, Some(field)) => {
                                Expr::new(self.span_from(start), ExprKind::Msg(field))
                            }
                            _ => Expr::new(
                                self.span_from(start),
                                ExprKind::Member { base: Box::new(expr), member },
                            ),
                        };
                    } else {
                        break;
                    }
                }
                Tok::Punct(Punct::LBracket) => {
                    self.bump();
                    let index = if self.is_punct(Punct::RBracket) {
                        None
                    } else {
                        Some(Box::new(self.parse_expr()?))
                    };
                    self.expect_punct(Punct::RBracket)?;
                    expr = Expr::new(
                        self.span_from(start),
                        ExprKind::Index { base: Box::new(expr), index },
                    );
                }
                Tok::Punct(Punct::LParen) => {
                    let args = self.parse_call_arg_list()?;
                    expr = Expr::new(
                        self.span_from(start),
                        ExprKind::Call { callee: Box::new(expr), options: Vec::new(), args },
                    );
                }
                Tok::Punct(Punct::LBrace) => {
                    // Either call options `{value: v}(args)` or a named-field
                    // literal `Struct({a: 1})` — in call-argument position the
                    // latter is handled by parse_call_arg_list, so a brace here
                    // is only legal as call options. Probe conservatively:
                    // require `ident :` after `{`, otherwise stop.
                    if !matches!(self.peek_at(1), Tok::Ident(_))
                        || !matches!(self.peek_at(2), Tok::Punct(Punct::Colon))
                    {
                        break;
                    }
                    let options = self.parse_named_list()?;
                    if self.is_punct(Punct::LParen) {
                        let args = self.parse_call_arg_list()?;
                        expr = Expr::new(
                            self.span_from(start),
                            ExprKind::Call { callee: Box::new(expr), options, args },
                        );
                    } else {
                        // Named-argument struct construction without a call:
                        // keep the values as positional arguments.
                        let args = options.into_iter().map(|(_, e)| e).collect();
                        expr = Expr::new(
                            self.span_from(start),
                            ExprKind::Call { callee: Box::new(expr), options: Vec::new(), args },
                        );
                    }
                }
                Tok::Punct(Punct::PlusPlus) => {
                    self.bump();
                    expr = Expr::new(
                        self.span_from(start),
                        ExprKind::Unary { op: UnOp::Inc, operand: Box::new(expr), prefix: false },
                    );
                }
                Tok::Punct(Punct::MinusMinus) => {
                    self.bump();
                    expr = Expr::new(
                        self.span_from(start),
                        ExprKind::Unary { op: UnOp::Dec, operand: Box::new(expr), prefix: false },
                    );
                }
                _ => break,
            }
        }
        Ok(expr)
    }

    /// `{name: expr, …}` with the braces consumed.
    fn parse_named_list(&mut self) -> PResult<Vec<(String, Expr)>> {
        self.expect_punct(Punct::LBrace)?;
        let mut out = Vec::new();
        if self.eat_punct(Punct::RBrace) {
            return Ok(out);
        }
        loop {
            let name = self.expect_ident()?;
            self.expect_punct(Punct::Colon)?;
            let value = self.parse_expr()?;
            out.push((name, value));
            if self.eat_punct(Punct::Comma) {
                continue;
            }
            self.expect_punct(Punct::RBrace)?;
            break;
        }
        Ok(out)
    }

    /// `(args…)` with the parens consumed. Handles the named-argument call
    /// form `f({a: 1, b: 2})` by flattening the values in written order.
    fn parse_call_arg_list(&mut self) -> PResult<Vec<Expr>> {
        self.expect_punct(Punct::LParen)?;
        if self.eat_punct(Punct::RParen) {
            return Ok(Vec::new());
        }
        if self.is_punct(Punct::LBrace) {
            let named = self.parse_named_list()?;
            self.expect_punct(Punct::RParen)?;
            return Ok(named.into_iter().map(|(_, e)| e).collect());
        }
        let mut args = vec![self.parse_expr()?];
        while self.eat_punct(Punct::Comma) {
            args.push(self.parse_expr()?);
        }
        self.expect_punct(Punct::RParen)?;
        Ok(args)
    }

    fn parse_primary(&mut self) -> PResult<Expr> {
        let start = self.cur_start();
        match self.peek().clone() {
            Tok::Number(lexeme) => {
                self.bump();
                // A 40-nibble hex literal denotes an address constant.
                let hexbody = lexeme.strip_prefix("0x").or_else(|| lexeme.strip_prefix("0X"));
                let is_address = hexbody.map(|h| h.len() == 40).unwrap_or(false);
                if is_address {
                    return Ok(Expr::new(
                        self.span_from(start),
                        ExprKind::Literal(Lit::Address(lexeme)),
                    ));
                }
                let unit = match self.peek() {
                    Tok::Ident(w) if UNIT_SUFFIXES.contains(&w.as_str()) => {
                        let u = w.clone();
                        self.bump();
                        Some(u)
                    }
                    _ => None,
                };
                Ok(Expr::new(
                    self.span_from(start),
                    ExprKind::Literal(Lit::Number { lexeme, unit }),
                ))
            }
            Tok::Str(s) => {
                self.bump();
                // Adjacent string literals concatenate.
                let mut full = s;
                while let Tok::Str(next) = self.peek() {
                    full.push_str(next);
                    self.bump();
                }
                Ok(Expr::new(self.span_from(start), ExprKind::Literal(Lit::Str(full))))
            }
            Tok::HexStr(h) => {
                self.bump();
                Ok(Expr::new(self.span_from(start), ExprKind::Literal(Lit::HexStr(h))))
            }
            Tok::Ident(word) => {
                match word.as_str() {
                    "true" | "false" => {
                        self.bump();
                        Ok(Expr::new(
                            self.span_from(start),
                            ExprKind::Literal(Lit::Bool(word == "true")),
                        ))
                    }
                    "new" => {
                        self.bump();
                        let ty = self.parse_type()?;
                        Ok(Expr::new(self.span_from(start), ExprKind::New(ty.display_name())))
                    }
                    "payable" => {
                        self.bump();
                        Ok(Expr::new(self.span_from(start), ExprKind::ElemType("payable".into())))
                    }
                    "mapping" => {
                        // Mapping type in expression position (e.g. inside
                        // abi.decode type lists) — consume as a type.
                        let ty = self.parse_type()?;
                        Ok(Expr::new(
                            self.span_from(start),
                            ExprKind::ElemType(ty.display_name()),
                        ))
                    }
                    w if is_elementary_word(w) => {
                        self.bump();
                        // `address payable` in cast position.
                        if w == "address" && self.is_word("payable") {
                            self.bump();
                        }
                        Ok(Expr::new(self.span_from(start), ExprKind::ElemType(word)))
                    }
                    _ => {
                        self.bump();
                        Ok(Expr::new(self.span_from(start), ExprKind::Ident(word)))
                    }
                }
            }
            Tok::Punct(Punct::LParen) => {
                self.bump();
                let mut items: Vec<Option<Expr>> = Vec::new();
                let mut saw_comma = false;
                loop {
                    if self.is_punct(Punct::RParen) {
                        if saw_comma || items.is_empty() {
                            items.push(None);
                        }
                        self.bump();
                        break;
                    }
                    if self.is_punct(Punct::Comma) {
                        items.push(None);
                        self.bump();
                        saw_comma = true;
                        continue;
                    }
                    items.push(Some(self.parse_expr()?));
                    if self.eat_punct(Punct::Comma) {
                        saw_comma = true;
                        continue;
                    }
                    self.expect_punct(Punct::RParen)?;
                    break;
                }
                if !saw_comma && items.len() == 1 {
                    if let Some(inner) = items.pop().unwrap() {
                        return Ok(inner);
                    }
                    // `()` — empty tuple.
                    return Ok(Expr::new(self.span_from(start), ExprKind::Tuple(vec![])));
                }
                Ok(Expr::new(self.span_from(start), ExprKind::Tuple(items)))
            }
            Tok::Punct(Punct::LBracket) => {
                // Array literal `[a, b, c]` — modeled as a tuple.
                self.bump();
                let mut items = Vec::new();
                if !self.is_punct(Punct::RBracket) {
                    items.push(Some(self.parse_expr()?));
                    while self.eat_punct(Punct::Comma) {
                        items.push(Some(self.parse_expr()?));
                    }
                }
                self.expect_punct(Punct::RBracket)?;
                Ok(Expr::new(self.span_from(start), ExprKind::Tuple(items)))
            }
            other => Err(self.fatal(format!("expected expression, found {other}"))),
        }
    }
}

fn parse_elementary(word: &str) -> Option<ElementaryType> {
    match word {
        "address" => return Some(ElementaryType::Address { payable: false }),
        "bool" => return Some(ElementaryType::Bool),
        "string" => return Some(ElementaryType::String),
        "bytes" => return Some(ElementaryType::Bytes),
        "byte" => return Some(ElementaryType::FixedBytes(1)),
        "uint" => return Some(ElementaryType::Uint(256)),
        "int" => return Some(ElementaryType::Int(256)),
        _ => {}
    }
    if let Some(n) = word.strip_prefix("uint") {
        if let Ok(w) = n.parse::<u16>() {
            if (8..=256).contains(&w) && w % 8 == 0 {
                return Some(ElementaryType::Uint(w));
            }
        }
        return None;
    }
    if let Some(n) = word.strip_prefix("int") {
        if let Ok(w) = n.parse::<u16>() {
            if (8..=256).contains(&w) && w % 8 == 0 {
                return Some(ElementaryType::Int(w));
            }
        }
        return None;
    }
    if let Some(n) = word.strip_prefix("bytes") {
        if let Ok(w) = n.parse::<u8>() {
            if (1..=32).contains(&w) {
                return Some(ElementaryType::FixedBytes(w));
            }
        }
        return None;
    }
    None
}

fn parse_number_as_u64(lexeme: &str) -> Option<u64> {
    let v = crate::value::Bytes32::from_literal_text(lexeme)?;
    v.as_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_ok(src: &str) -> SourceUnit {
        parse_source(FileId::new("test.sol"), src).expect("parse should succeed")
    }

    #[test]
    fn pragma_ranges() {
        assert_eq!(
            parse_pragma("pragma solidity ^0.8.9;"),
            Some(PragmaRange { lo: Version::new(0, 8, 9), hi: Some(Version::new(0, 9, 0)) })
        );
        assert_eq!(
            parse_pragma("pragma solidity >=0.4.22 <0.9.0;"),
            Some(PragmaRange { lo: Version::new(0, 4, 22), hi: Some(Version::new(0, 9, 0)) })
        );
        assert_eq!(
            parse_pragma("pragma solidity 0.5.17;"),
            Some(PragmaRange { lo: Version::new(0, 5, 17), hi: Some(Version::new(0, 5, 18)) })
        );
        assert_eq!(
            parse_pragma("pragma solidity 0.8.x;"),
            Some(PragmaRange { lo: Version::new(0, 8, 0), hi: Some(Version::new(0, 9, 0)) })
        );
        assert_eq!(
            parse_pragma("pragma solidity ~0.6.2;"),
            Some(PragmaRange { lo: Version::new(0, 6, 2), hi: Some(Version::new(0, 7, 0)) })
        );
        // Union widens to the hull.
        assert_eq!(
            parse_pragma("pragma solidity 0.6.12 || 0.7.6;"),
            Some(PragmaRange { lo: Version::new(0, 6, 12), hi: Some(Version::new(0, 7, 7)) })
        );
        assert_eq!(parse_pragma("contract C {}"), None);
    }

    #[test]
    fn parses_contract_with_state_and_function() {
        let unit = parse_ok(
            r#"
            pragma solidity ^0.8.9;
            contract Box {
                address public value;
                function setValue(address newValue) public {
                    value = newValue;
                }
            }
            "#,
        );
        assert_eq!(unit.contracts.len(), 1);
        let c = &unit.contracts[0];
        assert_eq!(c.name, "Box");
        assert_eq!(c.state_vars.len(), 1);
        assert_eq!(c.state_vars[0].name, "value");
        assert_eq!(c.state_vars[0].visibility, VarVisibility::Public);
        assert!(c.state_vars[0].ty.is_address());
        assert_eq!(c.functions.len(), 1);
        assert_eq!(c.functions[0].structural_signature(), "setValue(address)");
    }

    #[test]
    fn legacy_constructor_and_fallback_forms() {
        let unit = parse_ok(
            r#"
            pragma solidity ^0.5.0;
            contract Old {
                function Old() public {}
                function() external payable {}
            }
            "#,
        );
        let c = &unit.contracts[0];
        assert!(c.functions[0].is_constructor);
        assert!(c.functions[1].is_fallback);
        assert_eq!(c.functions[1].mutability, FnMutability::Payable);
    }

    #[test]
    fn modern_fallback_receive_constructor() {
        let unit = parse_ok(
            r#"
            pragma solidity ^0.8.9;
            contract P {
                constructor(address a) { }
                fallback() external payable {}
                receive() external payable {}
            }
            "#,
        );
        let c = &unit.contracts[0];
        assert!(c.functions[0].is_constructor);
        assert!(c.functions[1].is_fallback);
        assert!(c.functions[2].is_receive);
        assert!(c.fallback().is_some());
        assert!(c.receive().is_some());
    }

    #[test]
    fn inheritance_list_with_ctor_args() {
        let unit = parse_ok("contract D is A, B(1, 2), Lib.C {}");
        assert_eq!(unit.contracts[0].bases, vec!["A", "B", "Lib.C"]);
    }

    #[test]
    fn mapping_and_array_types() {
        let unit = parse_ok(
            r#"
            contract T {
                mapping(bytes4 => address) public facets;
                mapping(address => mapping(uint256 => bool)) nested;
                uint256[4] fixedArr;
                address[] dyn;
            }
            "#,
        );
        let vars = &unit.contracts[0].state_vars;
        assert_eq!(vars[0].ty.display_name(), "mapping(bytes4 => address)");
        assert_eq!(vars[1].ty.display_name(), "mapping(address => mapping(uint256 => bool))");
        assert_eq!(vars[2].ty.display_name(), "uint256[4]");
        assert_eq!(vars[3].ty.display_name(), "address[]");
    }

    #[test]
    fn delegatecall_chain_parses_as_nested_calls() {
        let unit = parse_ok(
            r#"
            pragma solidity ^0.4.21;
            contract P {
                address public implementation;
                function() public payable {
                    if (!implementation.delegatecall.value(msg.value)(msg.data)) revert;
                }
            }
            "#,
        );
        // `revert` as a bare statement parses; the delegatecall chain parses
        // into nested calls ending at a Member with member == delegatecall.
        let f = &unit.contracts[0].functions[0];
        let body = f.body.as_ref().unwrap();
        assert_eq!(body.len(), 1);
        let mut found = false;
        body[0].walk_exprs(&mut |e| {
            if let ExprKind::Member { member, .. } = &e.kind {
                if member == "delegatecall" {
                    found = true;
                }
            }
        });
        assert!(found, "delegatecall member access not found");
    }

    #[test]
    fn tuple_destructuring_declaration() {
        let unit = parse_ok(
            r#"
            contract T {
                function go(address target) internal returns (bool) {
                    (bool ok, bytes memory ret) = target.delegatecall(msg.data);
                    (, uint256 b) = (1, 2);
                    return ok;
                }
            }
            "#,
        );
        let body = unit.contracts[0].functions[0].body.as_ref().unwrap();
        match &body[0].kind {
            StmtKind::VarDecl { decls, init } => {
                assert_eq!(decls.len(), 2);
                assert_eq!(decls[0].as_ref().unwrap().name, "ok");
                assert_eq!(decls[1].as_ref().unwrap().name, "ret");
                assert!(init.is_some());
            }
            other => panic!("expected tuple decl, got {other:?}"),
        }
        match &body[1].kind {
            StmtKind::VarDecl { decls, .. } => {
                assert!(decls[0].is_none());
                assert_eq!(decls[1].as_ref().unwrap().name, "b");
            }
            other => panic!("expected tuple decl, got {other:?}"),
        }
    }

    #[test]
    fn assembly_raw_under_old_pragma() {
        let unit = parse_ok(
            r#"
            pragma solidity ^0.5.17;
            contract P {
                function() external {
                    assembly {
                        let impl := sload(0)
                        let ok := delegatecall(gas, impl, 0, calldatasize, 0, 0)
                    }
                }
            }
            "#,
        );
        let body = unit.contracts[0].functions[0].body.as_ref().unwrap();
        match &body[0].kind {
            StmtKind::Assembly(block) => {
                assert_eq!(block.representation(), AsmRepresentation::RawText);
                assert!(block.text.contains("delegatecall(gas, impl"));
            }
            other => panic!("expected assembly, got {other:?}"),
        }
    }

    #[test]
    fn assembly_yul_under_modern_pragma() {
        let unit = parse_ok(
            r#"
            pragma solidity ^0.8.9;
            contract P {
                fallback() external payable {
                    assembly {
                        let impl := sload(0x360894a13ba1a3210667c828492db98dca3e2076cc3735a920a3ca505d382bbc)
                        calldatacopy(0, 0, calldatasize())
                        let result := delegatecall(gas(), impl, 0, calldatasize(), 0, 0)
                    }
                }
            }
            "#,
        );
        assert!(unit.diagnostics.is_empty(), "diags: {:?}", unit.diagnostics);
        let body = unit.contracts[0].functions[0].body.as_ref().unwrap();
        match &body[0].kind {
            StmtKind::Assembly(block) => {
                assert_eq!(block.representation(), AsmRepresentation::YulAst);
                assert_eq!(block.ast.as_ref().unwrap().len(), 3);
            }
            other => panic!("expected assembly, got {other:?}"),
        }
    }

    #[test]
    fn skipped_constructs_produce_diagnostics_not_failures() {
        let unit = parse_ok(
            r#"
            pragma solidity ^0.8.9;
            error NotOwner(address caller);
            using SafeMath for uint256;
            contract C {
                using SafeMath for uint256;
                error Nope();
                function f(address t) public {
                    try IThing(t).poke() returns (uint256 v) {
                        emit Poked(v);
                    } catch {
                    }
                }
                event Poked(uint256 v);
            }
            "#,
        );
        assert_eq!(unit.contracts.len(), 1);
        assert!(unit.diagnostics.len() >= 4, "diags: {:?}", unit.diagnostics);
        assert_eq!(unit.contracts[0].events, vec!["Poked"]);
    }

    #[test]
    fn fatal_on_unterminated_contract() {
        let err = parse_source(FileId::new("bad.sol"), "contract C { function f() public {")
            .unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn fatal_on_oversized_source() {
        let big = "a".repeat(DEFAULT_MAX_SOURCE_BYTES + 1);
        let err = parse_source(FileId::new("big.sol"), &big).unwrap_err();
        assert!(matches!(err, ParseError::TooLarge { .. }));
    }

    #[test]
    fn file_level_constants_are_kept() {
        let unit = parse_ok(
            r#"
            pragma solidity ^0.8.9;
            bytes32 constant SLOT = keccak256("my.slot");
            contract C {}
            "#,
        );
        assert_eq!(unit.file_constants.len(), 1);
        assert_eq!(unit.file_constants[0].name, "SLOT");
        assert_eq!(unit.file_constants[0].mutability, VarMutability::Constant);
    }

    #[test]
    fn imports_collect_paths() {
        let unit = parse_ok(
            r#"
            import "./base_a.sol";
            import {Thing} from "./things.sol";
            import * as lib from "../lib.sol";
            contract C {}
            "#,
        );
        let paths: Vec<&str> = unit.imports.iter().map(|i| i.path.as_str()).collect();
        assert_eq!(paths, vec!["./base_a.sol", "./things.sol", "../lib.sol"]);
    }

    #[test]
    fn spans_cover_their_source() {
        let src = "contract C { uint256 x = 1 + 2; }";
        let unit = parse_ok(src);
        let c = &unit.contracts[0];
        assert_eq!(&src[c.span.start..c.span.end], src);
        let v = &c.state_vars[0];
        assert_eq!(&src[v.span.start..v.span.end], "uint256 x = 1 + 2;");
        let init = v.initializer.as_ref().unwrap();
        assert_eq!(&src[init.span.start..init.span.end], "1 + 2");
    }

    #[test]
    fn expression_statements_vs_declarations() {
        let unit = parse_ok(
            r#"
            contract T {
                uint256 x;
                mapping(address => uint256) m;
                function f(uint256 v) public returns (uint256) {
                    x = v;
                    m[msg.sender] = v;
                    uint256 local = x + 1;
                    Counter c = Counter(address(uint160(v)));
                    x += 2;
                    x++;
                    --x;
                    return local;
                }
            }
            "#,
        );
        let body = unit.contracts[0].functions[0].body.as_ref().unwrap();
        assert!(matches!(&body[0].kind, StmtKind::Expr(e) if matches!(e.kind, ExprKind::Assign { .. })));
        assert!(matches!(&body[1].kind, StmtKind::Expr(_)));
        assert!(matches!(&body[2].kind, StmtKind::VarDecl { .. }));
        assert!(matches!(&body[3].kind, StmtKind::VarDecl { .. }));
        assert!(matches!(&body[4].kind, StmtKind::Expr(e) if matches!(e.kind, ExprKind::Assign { op: Some(BinOp::Add), .. })));
        assert!(matches!(&body[7].kind, StmtKind::Return(_)));
    }

    #[test]
    fn modifier_with_placeholder() {
        let unit = parse_ok(
            r#"
            contract T {
                address owner;
                modifier onlyOwner() {
                    require(msg.sender == owner, "not owner");
                    _;
                }
                function f() public onlyOwner {}
            }
            "#,
        );
        let m = &unit.contracts[0].modifiers[0];
        let body = m.body.as_ref().unwrap();
        assert!(matches!(&body[0].kind, StmtKind::Require { args } if args.len() == 2));
        assert!(matches!(&body[1].kind, StmtKind::Placeholder));
        assert_eq!(unit.contracts[0].functions[0].modifiers[0].name, "onlyOwner");
    }

    #[test]
    fn number_units_and_address_literals() {
        let unit = parse_ok(
            r#"
            contract T {
                uint256 a = 1 ether;
                address b = 0x742d35Cc6634C0532925a3b844Bc454e4438f44e;
            }
            "#,
        );
        let vars = &unit.contracts[0].state_vars;
        match &vars[0].initializer.as_ref().unwrap().kind {
            ExprKind::Literal(Lit::Number { unit, .. }) => assert_eq!(unit.as_deref(), Some("ether")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            &vars[1].initializer.as_ref().unwrap().kind,
            ExprKind::Literal(Lit::Address(_))
        ));
    }
}
