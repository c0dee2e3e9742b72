// SPDX-License-Identifier: Apache-2.0

//! Abstract syntax tree for the Solidity subset the analyzer understands.
//!
//! The tree is deliberately smaller than the full language: constructs that
//! carry no signal for proxy analysis (custom errors, `using for`,
//! try/catch internals, …) are skipped at parse time with a diagnostic, and
//! the surrounding file still produces a usable [`SourceUnit`].
//!
//! Every node carries a byte-offset [`Span`] into its original file.

use crate::diag::{Diagnostic, FileId, Span};
use serde::{Deserialize, Serialize};
use std::fmt;

// ---------------------------------------------------------------------------
// Compiler version pragmas
// ---------------------------------------------------------------------------

/// A `major.minor.patch` Solidity compiler version.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Version {
    pub major: u32,
    pub minor: u32,
    pub patch: u32,
}

impl Version {
    pub const fn new(major: u32, minor: u32, patch: u32) -> Self {
        Version { major, minor, patch }
    }

    /// The boundary at which inline assembly switched from free-form text to
    /// structured Yul.
    pub const YUL_BOUNDARY: Version = Version::new(0, 6, 0);
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.major, self.minor, self.patch)
    }
}

/// Half-open version interval `[lo, hi)` extracted from a `pragma solidity`
/// directive. `hi = None` means unbounded above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PragmaRange {
    pub lo: Version,
    pub hi: Option<Version>,
}

impl PragmaRange {
    /// Whether every version admitted by the pragma is at least `v`.
    /// Used at the 0.6.0 boundary: a pragma like `>=0.4.22 <0.9.0` that
    /// straddles the boundary is treated as pre-0.6 (lenient raw-text
    /// assembly) because the lower bound admits pre-0.6 compilers.
    pub fn entirely_at_or_above(&self, v: Version) -> bool {
        self.lo >= v
    }
}

// ---------------------------------------------------------------------------
// Top level
// ---------------------------------------------------------------------------

/// One parsed source file.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceUnit {
    pub file: FileId,
    /// Version range from the first `pragma solidity` directive, if any.
    pub pragma_version: Option<PragmaRange>,
    /// The raw text of that directive (for reporting / reprinting).
    pub pragma_text: Option<String>,
    pub imports: Vec<ImportDirective>,
    pub contracts: Vec<ContractDef>,
    /// File-level `constant` declarations (Solidity ≥ 0.7.1).
    pub file_constants: Vec<StateVarDecl>,
    /// Non-fatal problems encountered while parsing this file.
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImportDirective {
    /// The literal import path as written (quotes stripped).
    pub path: String,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContractKind {
    Contract,
    AbstractContract,
    Interface,
    Library,
}

impl ContractKind {
    pub fn is_deployable(&self) -> bool {
        matches!(self, ContractKind::Contract)
    }
}

impl fmt::Display for ContractKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContractKind::Contract => "contract",
            ContractKind::AbstractContract => "abstract contract",
            ContractKind::Interface => "interface",
            ContractKind::Library => "library",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContractDef {
    pub name: String,
    pub kind: ContractKind,
    /// Direct base names in source order (`contract C is A, B`), arguments
    /// to base constructors dropped.
    pub bases: Vec<String>,
    pub state_vars: Vec<StateVarDecl>,
    pub functions: Vec<FunctionDef>,
    pub modifiers: Vec<ModifierDef>,
    pub structs: Vec<StructDef>,
    pub enums: Vec<EnumDef>,
    /// Event names only; parameters carry no proxy signal.
    pub events: Vec<String>,
    pub span: Span,
}

impl ContractDef {
    pub fn fallback(&self) -> Option<&FunctionDef> {
        self.functions.iter().find(|f| f.is_fallback)
    }

    pub fn receive(&self) -> Option<&FunctionDef> {
        self.functions.iter().find(|f| f.is_receive)
    }
}

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarVisibility {
    Public,
    Internal,
    Private,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarMutability {
    Mutable,
    Constant,
    Immutable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVarDecl {
    pub name: String,
    pub ty: TypeLabel,
    pub visibility: VarVisibility,
    pub mutability: VarMutability,
    pub initializer: Option<Expr>,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FnVisibility {
    External,
    Public,
    Internal,
    Private,
}

impl FnVisibility {
    pub fn is_externally_callable(&self) -> bool {
        matches!(self, FnVisibility::External | FnVisibility::Public)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FnMutability {
    NonPayable,
    Payable,
    View,
    Pure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StorageLocation {
    Memory,
    Calldata,
    Storage,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub name: Option<String>,
    pub ty: TypeLabel,
    pub location: Option<StorageLocation>,
    pub span: Span,
}

/// A modifier invocation attached to a function definition, e.g.
/// `onlyOwner` or `initializer()`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModifierInvocation {
    pub name: String,
    pub args: Vec<Expr>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionDef {
    /// Empty for constructors and for legacy unnamed fallbacks
    /// (`function() public { … }`).
    pub name: String,
    pub params: Vec<Param>,
    pub returns: Vec<Param>,
    pub visibility: FnVisibility,
    pub mutability: FnMutability,
    pub is_constructor: bool,
    pub is_fallback: bool,
    pub is_receive: bool,
    pub is_virtual: bool,
    pub is_override: bool,
    pub modifiers: Vec<ModifierInvocation>,
    /// `None` for bodyless declarations (interfaces, abstract functions).
    pub body: Option<Vec<Stmt>>,
    pub span: Span,
}

impl FunctionDef {
    /// Structural signature used for override resolution and display:
    /// `name(type,type,…)` with elementary types in canonical form and user
    /// types by name. (ABI-level canonicalization, which maps user types to
    /// their underlying representation, lives in the selector analysis.)
    pub fn structural_signature(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|p| p.ty.display_name()).collect();
        format!("{}({})", self.name, params.join(","))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModifierDef {
    pub name: String,
    pub params: Vec<Param>,
    pub body: Option<Vec<Stmt>>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructDef {
    pub name: String,
    pub fields: Vec<(String, TypeLabel)>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnumDef {
    pub name: String,
    pub members: Vec<String>,
    pub span: Span,
}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryType {
    /// `address` / `address payable` (same storage shape).
    Address { payable: bool },
    Bool,
    /// Bit width 8..=256, always normalized (`uint` parses as `Uint(256)`).
    Uint(u16),
    Int(u16),
    /// `bytes1`..`bytes32` (`byte` parses as `FixedBytes(1)`).
    FixedBytes(u8),
    /// Dynamic `bytes`.
    Bytes,
    /// `string`.
    String,
}

impl ElementaryType {
    /// Canonical ABI name (`uint256`, `bytes1`, …).
    pub fn canonical_name(&self) -> String {
        match self {
            ElementaryType::Address { .. } => "address".to_string(),
            ElementaryType::Bool => "bool".to_string(),
            ElementaryType::Uint(w) => format!("uint{w}"),
            ElementaryType::Int(w) => format!("int{w}"),
            ElementaryType::FixedBytes(n) => format!("bytes{n}"),
            ElementaryType::Bytes => "bytes".to_string(),
            ElementaryType::String => "string".to_string(),
        }
    }

    /// Storage footprint in bytes for packable types; `None` for the
    /// dynamically-sized ones (`bytes`, `string`), which always occupy a
    /// full fresh slot.
    pub fn packed_size(&self) -> Option<u32> {
        match self {
            ElementaryType::Address { .. } => Some(20),
            ElementaryType::Bool => Some(1),
            ElementaryType::Uint(w) | ElementaryType::Int(w) => Some(*w as u32 / 8),
            ElementaryType::FixedBytes(n) => Some(*n as u32),
            ElementaryType::Bytes | ElementaryType::String => None,
        }
    }
}

/// A type annotation as written in source, resolved only as far as the
/// grammar allows (user-defined names stay names until the contract model
/// looks them up).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeLabel {
    Elementary(ElementaryType),
    /// `mapping(K => V)`.
    Mapping { key: Box<TypeLabel>, value: Box<TypeLabel> },
    /// `T[]`.
    DynArray(Box<TypeLabel>),
    /// `T[n]` with a compile-time literal length.
    FixedArray { elem: Box<TypeLabel>, len: u64 },
    /// A user-defined name: contract, interface, struct, enum, or library
    /// type, possibly qualified (`Lib.Struct` keeps the raw dotted text).
    User(String),
    /// Anything the frontend recognized but does not model (function types,
    /// fixed-point numbers, arrays with non-literal lengths, …). The payload
    /// is the raw source text; layout analysis treats it conservatively.
    Unsupported(String),
}

impl TypeLabel {
    pub fn elementary(e: ElementaryType) -> Self {
        TypeLabel::Elementary(e)
    }

    /// Human-readable rendering: canonical elementary names, user types by
    /// their source name.
    pub fn display_name(&self) -> String {
        match self {
            TypeLabel::Elementary(e) => e.canonical_name(),
            TypeLabel::Mapping { key, value } => {
                format!("mapping({} => {})", key.display_name(), value.display_name())
            }
            TypeLabel::DynArray(elem) => format!("{}[]", elem.display_name()),
            TypeLabel::FixedArray { elem, len } => format!("{}[{}]", elem.display_name(), len),
            TypeLabel::User(name) => name.clone(),
            TypeLabel::Unsupported(text) => text.clone(),
        }
    }

    pub fn is_mapping(&self) -> bool {
        matches!(self, TypeLabel::Mapping { .. })
    }

    pub fn is_address(&self) -> bool {
        matches!(self, TypeLabel::Elementary(ElementaryType::Address { .. }))
    }

    /// For mappings: the key type. Used by the pattern classifier to spot
    /// selector-keyed and 32-byte-keyed storage.
    pub fn mapping_key(&self) -> Option<&TypeLabel> {
        match self {
            TypeLabel::Mapping { key, .. } => Some(key),
            _ => None,
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_name())
    }
}

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Pow,
    Shl,
    Shr,
    BitAnd,
    BitXor,
    BitOr,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
            BinOp::Pow => "**",
            BinOp::Shl => "<<",
            BinOp::Shr => ">>",
            BinOp::BitAnd => "&",
            BinOp::BitXor => "^",
            BinOp::BitOr => "|",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnOp {
    Not,
    BitNot,
    Neg,
    Delete,
    Inc,
    Dec,
}

/// Fields of the `msg` global that the analyses care about. Modeled as a
/// dedicated node so detectors can match `msg.sig` / `msg.sender` without
/// string comparisons on member chains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MsgField {
    Sender,
    Sig,
    Data,
    Value,
}

impl MsgField {
    pub fn name(&self) -> &'static str {
        match self {
            MsgField::Sender => "sender",
            MsgField::Sig => "sig",
            MsgField::Data => "data",
            MsgField::Value => "value",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Lit {
    /// Numeric literal: raw lexeme (decimal, hex, possibly with underscores
    /// or scientific notation) plus an optional denomination unit
    /// (`wei`, `ether`, `days`, …).
    Number { lexeme: String, unit: Option<String> },
    /// A 20-byte hex literal, distinguished from plain numbers because it
    /// denotes a constant account address (`0x1234…` with 40 nibbles).
    Address(String),
    /// String literal, escape sequences already cooked.
    Str(String),
    /// `hex"…"` literal; payload is the hex digit string.
    HexStr(String),
    Bool(bool),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub span: Span,
    pub kind: ExprKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Ident(String),
    /// `base.member`. `msg.sender`-style accesses parse as [`ExprKind::Msg`]
    /// instead.
    Member { base: Box<Expr>, member: String },
    /// `base[index]`; `index` is `None` for the type expression `T[]`.
    Index { base: Box<Expr>, index: Option<Box<Expr>> },
    /// `callee(args)` with optional call options (`{value: v, gas: g}`).
    Call { callee: Box<Expr>, options: Vec<(String, Expr)>, args: Vec<Expr> },
    /// `new T` (the allocation head of `new T(args)`; the argument list is
    /// the enclosing call).
    New(String),
    /// Assignment, possibly compound (`op` is the arithmetic part of `+=`).
    Assign { lhs: Box<Expr>, op: Option<BinOp>, rhs: Box<Expr> },
    Binary { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
    Unary { op: UnOp, operand: Box<Expr>, prefix: bool },
    Conditional { cond: Box<Expr>, then_value: Box<Expr>, else_value: Box<Expr> },
    /// Parenthesized tuple; single-element tuples are plain parens.
    /// Elements may be empty (`(a, , b)` in destructuring positions).
    Tuple(Vec<Option<Expr>>),
    Literal(Lit),
    /// `msg.<field>`.
    Msg(MsgField),
    /// An elementary type name in expression position — a cast head like
    /// `address(x)`, `uint256(y)`, `payable(z)`.
    ElemType(String),
}

impl Expr {
    pub fn new(span: Span, kind: ExprKind) -> Self {
        Expr { span, kind }
    }

    pub fn as_ident(&self) -> Option<&str> {
        match &self.kind {
            ExprKind::Ident(name) => Some(name),
            _ => None,
        }
    }

    /// Walk this expression and all sub-expressions, pre-order.
    pub fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a Expr)) {
        visit(self);
        match &self.kind {
            ExprKind::Ident(_)
            | ExprKind::New(_)
            | ExprKind::Literal(_)
            | ExprKind::Msg(_)
            | ExprKind::ElemType(_) => {}
            ExprKind::Member { base, .. } => base.walk(visit),
            ExprKind::Index { base, index } => {
                base.walk(visit);
                if let Some(ix) = index {
                    ix.walk(visit);
                }
            }
            ExprKind::Call { callee, options, args } => {
                callee.walk(visit);
                for (_, opt) in options {
                    opt.walk(visit);
                }
                for arg in args {
                    arg.walk(visit);
                }
            }
            ExprKind::Assign { lhs, rhs, .. } => {
                lhs.walk(visit);
                rhs.walk(visit);
            }
            ExprKind::Binary { lhs, rhs, .. } => {
                lhs.walk(visit);
                rhs.walk(visit);
            }
            ExprKind::Unary { operand, .. } => operand.walk(visit),
            ExprKind::Conditional { cond, then_value, else_value } => {
                cond.walk(visit);
                then_value.walk(visit);
                else_value.walk(visit);
            }
            ExprKind::Tuple(items) => {
                for item in items.iter().flatten() {
                    item.walk(visit);
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

/// One declarator inside a (possibly tuple) variable declaration.
#[derive(Clone, Debug, PartialEq)]
pub struct VarDeclPart {
    pub name: String,
    pub ty: TypeLabel,
    pub location: Option<StorageLocation>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stmt {
    pub span: Span,
    pub kind: StmtKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StmtKind {
    Expr(Expr),
    /// `T x = init;` or `(T a, , U b) = init;` — empty tuple positions are
    /// `None`.
    VarDecl { decls: Vec<Option<VarDeclPart>>, init: Option<Expr> },
    If { cond: Expr, then_branch: Vec<Stmt>, else_branch: Option<Vec<Stmt>> },
    While { cond: Expr, body: Vec<Stmt> },
    DoWhile { cond: Expr, body: Vec<Stmt> },
    For {
        init: Option<Box<Stmt>>,
        cond: Option<Expr>,
        post: Option<Expr>,
        body: Vec<Stmt>,
    },
    Return(Option<Expr>),
    /// `require(cond)` / `require(cond, message)`; kept as a dedicated node
    /// because guard analysis keys on it.
    Require { args: Vec<Expr> },
    Emit { event: String, args: Vec<Expr> },
    /// `revert()` / `revert("reason")` / `revert CustomError(args)`.
    Revert { error: Option<String>, args: Vec<Expr> },
    /// `assembly { … }` — see [`YulBlock`] for the dual representation.
    Assembly(YulBlock),
    /// Explicit `{ … }` scope or an `unchecked { … }` block.
    Block(Vec<Stmt>),
    Break,
    Continue,
    /// The `_;` placeholder inside modifier bodies.
    Placeholder,
}

impl Stmt {
    pub fn new(span: Span, kind: StmtKind) -> Self {
        Stmt { span, kind }
    }

    /// Walk this statement tree pre-order, visiting every nested statement.
    pub fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a Stmt)) {
        visit(self);
        match &self.kind {
            StmtKind::If { then_branch, else_branch, .. } => {
                for s in then_branch {
                    s.walk(visit);
                }
                if let Some(eb) = else_branch {
                    for s in eb {
                        s.walk(visit);
                    }
                }
            }
            StmtKind::While { body, .. } | StmtKind::DoWhile { body, .. } => {
                for s in body {
                    s.walk(visit);
                }
            }
            StmtKind::For { init, body, .. } => {
                if let Some(i) = init {
                    i.walk(visit);
                }
                for s in body {
                    s.walk(visit);
                }
            }
            StmtKind::Block(body) => {
                for s in body {
                    s.walk(visit);
                }
            }
            _ => {}
        }
    }

    /// Visit every expression contained in this statement subtree.
    pub fn walk_exprs<'a>(&'a self, visit: &mut dyn FnMut(&'a Expr)) {
        self.walk(&mut |s| match &s.kind {
            StmtKind::Expr(e) => e.walk(visit),
            StmtKind::VarDecl { init: Some(e), .. } => e.walk(visit),
            StmtKind::If { cond, .. } => cond.walk(visit),
            StmtKind::While { cond, .. } | StmtKind::DoWhile { cond, .. } => cond.walk(visit),
            StmtKind::For { cond, post, .. } => {
                if let Some(c) = cond {
                    c.walk(visit);
                }
                if let Some(p) = post {
                    p.walk(visit);
                }
            }
            StmtKind::Return(Some(e)) => e.walk(visit),
            StmtKind::Require { args } | StmtKind::Emit { args, .. } | StmtKind::Revert { args, .. } => {
                for a in args {
                    a.walk(visit);
                }
            }
            _ => {}
        });
    }
}

// ---------------------------------------------------------------------------
// Inline assembly (Yul)
// ---------------------------------------------------------------------------

/// An inline-assembly block in its dual representation.
///
/// Pre-0.6.0 sources keep only the raw text between the braces; 0.6.0 and
/// later sources additionally get a structured Yul tree. Exactly one
/// representation is *logical* — [`YulBlock::representation`] tells which —
/// but the raw text is always retained so the printer can reproduce the
/// block verbatim.
#[derive(Clone, Debug, PartialEq)]
pub struct YulBlock {
    /// Verbatim source between (not including) the outer braces.
    pub text: String,
    /// Structured statements, present only when the file's pragma admits
    /// no compiler older than 0.6.0 and the block parsed as Yul.
    pub ast: Option<Vec<YulStmt>>,
    pub span: Span,
}

/// Which representation of an assembly block is authoritative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsmRepresentation {
    RawText,
    YulAst,
}

impl YulBlock {
    pub fn representation(&self) -> AsmRepresentation {
        if self.ast.is_some() {
            AsmRepresentation::YulAst
        } else {
            AsmRepresentation::RawText
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum YulStmt {
    /// `let a, b := expr` (value absent for bare `let a`).
    Let { names: Vec<String>, value: Option<YulExpr> },
    /// `a := expr` / `a, b := expr`.
    Assign { names: Vec<String>, value: YulExpr },
    /// A bare call or other expression in statement position.
    Expr(YulExpr),
    If { cond: YulExpr, body: Vec<YulStmt> },
    Switch {
        scrutinee: YulExpr,
        cases: Vec<(YulLit, Vec<YulStmt>)>,
        default: Option<Vec<YulStmt>>,
    },
    For {
        pre: Vec<YulStmt>,
        cond: YulExpr,
        post: Vec<YulStmt>,
        body: Vec<YulStmt>,
    },
    /// `function f(a, b) -> c { … }`.
    FunctionDef { name: String, params: Vec<String>, returns: Vec<String>, body: Vec<YulStmt> },
    Block(Vec<YulStmt>),
    Leave,
    BreakStmt,
    ContinueStmt,
}

#[derive(Clone, Debug, PartialEq)]
pub enum YulExpr {
    /// `name(args…)` — builtins and user functions alike.
    Call { name: String, args: Vec<YulExpr> },
    Ident(String),
    Lit(YulLit),
}

impl YulExpr {
    /// Walk this expression and all sub-expressions, pre-order.
    pub fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a YulExpr)) {
        visit(self);
        if let YulExpr::Call { args, .. } = self {
            for a in args {
                a.walk(visit);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum YulLit {
    /// Decimal or `0x…` numeric literal, raw lexeme.
    Number(String),
    Str(String),
    Bool(bool),
}

impl YulLit {
    pub fn as_value(&self) -> Option<crate::value::Bytes32> {
        match self {
            YulLit::Number(lexeme) => crate::value::Bytes32::from_literal_text(lexeme),
            YulLit::Bool(b) => Some(crate::value::Bytes32::from_u64(*b as u64)),
            YulLit::Str(_) => None,
        }
    }
}

/// Walk a Yul statement list, visiting every nested statement pre-order.
pub fn walk_yul_stmts<'a>(stmts: &'a [YulStmt], visit: &mut dyn FnMut(&'a YulStmt)) {
    for stmt in stmts {
        visit(stmt);
        match stmt {
            YulStmt::If { body, .. } | YulStmt::Block(body) => walk_yul_stmts(body, visit),
            YulStmt::Switch { cases, default, .. } => {
                for (_, body) in cases {
                    walk_yul_stmts(body, visit);
                }
                if let Some(d) = default {
                    walk_yul_stmts(d, visit);
                }
            }
            YulStmt::For { pre, post, body, .. } => {
                walk_yul_stmts(pre, visit);
                walk_yul_stmts(post, visit);
                walk_yul_stmts(body, visit);
            }
            YulStmt::FunctionDef { body, .. } => walk_yul_stmts(body, visit),
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dummy_span() -> Span {
        Span::new(FileId::new("t.sol"), 0, 1)
    }

    #[test]
    fn version_ordering_is_lexicographic() {
        assert!(Version::new(0, 5, 17) < Version::new(0, 6, 0));
        assert!(Version::new(0, 6, 0) < Version::new(0, 10, 0));
        assert!(Version::new(1, 0, 0) > Version::new(0, 8, 30));
    }

    #[test]
    fn pragma_boundary_check() {
        let modern = PragmaRange { lo: Version::new(0, 8, 9), hi: Some(Version::new(0, 9, 0)) };
        assert!(modern.entirely_at_or_above(Version::YUL_BOUNDARY));
        let straddling = PragmaRange { lo: Version::new(0, 4, 22), hi: None };
        assert!(!straddling.entirely_at_or_above(Version::YUL_BOUNDARY));
    }

    #[test]
    fn elementary_canonical_names() {
        assert_eq!(ElementaryType::Uint(256).canonical_name(), "uint256");
        assert_eq!(ElementaryType::FixedBytes(1).canonical_name(), "bytes1");
        assert_eq!(ElementaryType::Address { payable: true }.canonical_name(), "address");
    }

    #[test]
    fn type_display_round_trips_structure() {
        let t = TypeLabel::Mapping {
            key: Box::new(TypeLabel::elementary(ElementaryType::FixedBytes(4))),
            value: Box::new(TypeLabel::elementary(ElementaryType::Address { payable: false })),
        };
        assert_eq!(t.display_name(), "mapping(bytes4 => address)");
        assert_eq!(
            TypeLabel::DynArray(Box::new(TypeLabel::User("Facet".into()))).display_name(),
            "Facet[]"
        );
    }

    #[test]
    fn expr_walk_visits_nested_nodes() {
        let sp = dummy_span();
        // f(a, b.c)
        let expr = Expr::new(
            sp.clone(),
            ExprKind::Call {
                callee: Box::new(Expr::new(sp.clone(), ExprKind::Ident("f".into()))),
                options: vec![],
                args: vec![
                    Expr::new(sp.clone(), ExprKind::Ident("a".into())),
                    Expr::new(
                        sp.clone(),
                        ExprKind::Member {
                            base: Box::new(Expr::new(sp.clone(), ExprKind::Ident("b".into()))),
                            member: "c".into(),
                        },
                    ),
                ],
            },
        );
        let mut idents = vec![];
        expr.walk(&mut |e| {
            if let ExprKind::Ident(name) = &e.kind {
                idents.push(name.clone());
            }
        });
        assert_eq!(idents, vec!["f", "a", "b"]);
    }

    #[test]
    fn yul_block_representation_follows_ast_presence() {
        let raw = YulBlock { text: "let x := 1".into(), ast: None, span: dummy_span() };
        assert_eq!(raw.representation(), AsmRepresentation::RawText);
        let parsed = YulBlock {
            text: "let x := 1".into(),
            ast: Some(vec![YulStmt::Let {
                names: vec!["x".into()],
                value: Some(YulExpr::Lit(YulLit::Number("1".into()))),
            }]),
            span: dummy_span(),
        };
        assert_eq!(parsed.representation(), AsmRepresentation::YulAst);
    }

    #[test]
    fn yul_literal_values() {
        assert_eq!(YulLit::Number("0x40".into()).as_value().unwrap().as_u64(), Some(0x40));
        assert_eq!(YulLit::Number("7".into()).as_value().unwrap().as_u64(), Some(7));
        assert!(YulLit::Str("x".into()).as_value().is_none());
    }
}
