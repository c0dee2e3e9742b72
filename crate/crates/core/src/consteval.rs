// SPDX-License-Identifier: Apache-2.0

//! Compile-time constant evaluation over the expression AST.
//!
//! The proxy analyses need concrete 256-bit values for a narrow slice of
//! Solidity's constant expressions: storage-slot definitions
//! (`keccak256("eip1967.proxy.implementation")` minus one, hardcoded hex
//! slots, chains of `constant` variables) and literal delegation targets.
//! Evaluation is best-effort — anything outside the supported subset yields
//! `None`, never an error.

use crate::ast::{BinOp, Expr, ExprKind, Lit};
use crate::keccak::keccak256;
use crate::model::{CompilationUnit, ResolvedContract, VarScope};
use crate::value::Bytes32;
use std::collections::HashSet;

/// Deepest chain of constant-variable references / nested expressions the
/// evaluator will follow before giving up.
const MAX_DEPTH: u32 = 8;

/// Name-resolution scope for identifier references inside constant
/// expressions.
pub struct ConstContext<'a> {
    pub unit: &'a CompilationUnit,
    /// Contract whose linearized constants are visible; `None` restricts
    /// lookup to file-level constants.
    pub contract: Option<&'a ResolvedContract>,
}

impl<'a> ConstContext<'a> {
    pub fn new(unit: &'a CompilationUnit, contract: Option<&'a ResolvedContract>) -> Self {
        ConstContext { unit, contract }
    }

    /// Initializer of the named constant, looked up through the contract's
    /// linearization first, then file-level constants.
    fn constant_initializer(&self, name: &str) -> Option<&'a Expr> {
        if let Some(c) = self.contract {
            if let Some(v) = c
                .all_state_vars
                .iter()
                .find(|v| v.name == name && v.is_constant && v.scope == VarScope::State)
            {
                return v.initializer.as_ref();
            }
        }
        self.unit
            .file_constants
            .get(name)
            .and_then(|v| v.initializer.as_ref())
    }
}

/// Evaluate `expr` to a 256-bit word if it is a supported compile-time
/// constant.
pub fn eval_const_expr(expr: &Expr, ctx: &ConstContext) -> Option<Bytes32> {
    let mut visiting = HashSet::new();
    eval(expr, ctx, 0, &mut visiting)
}

fn eval(
    expr: &Expr,
    ctx: &ConstContext,
    depth: u32,
    visiting: &mut HashSet<String>,
) -> Option<Bytes32> {
    if depth > MAX_DEPTH {
        return None;
    }
    match &expr.kind {
        ExprKind::Literal(lit) => eval_literal(lit),
        ExprKind::Ident(name) => {
            if !visiting.insert(name.clone()) {
                return None; // cyclic constant definition
            }
            let result = ctx
                .constant_initializer(name)
                .and_then(|init| eval(init, ctx, depth + 1, visiting));
            visiting.remove(name);
            result
        }
        ExprKind::Tuple(items) => {
            // Parenthesized expression: exactly one present element.
            match items.as_slice() {
                [Some(inner)] => eval(inner, ctx, depth + 1, visiting),
                _ => None,
            }
        }
        ExprKind::Binary { op, lhs, rhs } => {
            let l = eval(lhs, ctx, depth + 1, visiting)?;
            let r = eval(rhs, ctx, depth + 1, visiting)?;
            match op {
                BinOp::Add => Some(l.wrapping_add(&r)),
                BinOp::Sub => Some(l.wrapping_sub(&r)),
                BinOp::BitOr => {
                    let mut out = [0u8; 32];
                    for (i, byte) in out.iter_mut().enumerate() {
                        *byte = l.0[i] | r.0[i];
                    }
                    Some(Bytes32(out))
                }
                BinOp::BitAnd => {
                    let mut out = [0u8; 32];
                    for (i, byte) in out.iter_mut().enumerate() {
                        *byte = l.0[i] & r.0[i];
                    }
                    Some(Bytes32(out))
                }
                _ => None,
            }
        }
        ExprKind::Call { callee, args, .. } => eval_call(callee, args, ctx, depth, visiting),
        _ => None,
    }
}

fn eval_call(
    callee: &Expr,
    args: &[Expr],
    ctx: &ConstContext,
    depth: u32,
    visiting: &mut HashSet<String>,
) -> Option<Bytes32> {
    match &callee.kind {
        // keccak256("…") / keccak256(abi.encodePacked("…")) / sha3 alias.
        ExprKind::Ident(name) if name == "keccak256" || name == "sha3" => {
            let [arg] = args else { return None };
            let bytes = literal_byte_payload(arg)?;
            Some(keccak256(&bytes))
        }
        // Casts: uintN / bytes32 / address / payable keep or mask the value.
        ExprKind::ElemType(type_name) => {
            let [arg] = args else { return None };
            let v = eval(arg, ctx, depth + 1, visiting)?;
            cast_value(type_name, v)
        }
        _ => None,
    }
}

/// Byte payload of a hashable literal argument: a string literal, a hex
/// literal, or `abi.encodePacked(<single such literal>)`.
fn literal_byte_payload(arg: &Expr) -> Option<Vec<u8>> {
    match &arg.kind {
        ExprKind::Literal(Lit::Str(s)) => Some(s.as_bytes().to_vec()),
        ExprKind::Literal(Lit::HexStr(h)) => hex::decode(h).ok(),
        ExprKind::Call { callee, args, .. } => {
            let ExprKind::Member { base, member } = &callee.kind else { return None };
            if base.as_ident() != Some("abi") || member != "encodePacked" {
                return None;
            }
            let [inner] = args.as_slice() else { return None };
            literal_byte_payload(inner)
        }
        _ => None,
    }
}

fn cast_value(type_name: &str, v: Bytes32) -> Option<Bytes32> {
    match type_name {
        "address" | "payable" => Some(v.mask_low_bits(160)),
        "bytes32" | "uint" | "uint256" | "int" | "int256" => Some(v),
        _ => {
            if let Some(bits) = type_name.strip_prefix("uint").and_then(|n| n.parse::<u16>().ok())
            {
                if bits % 8 == 0 && bits <= 256 {
                    return Some(v.mask_low_bits(bits));
                }
            }
            // Narrower `bytesN` casts truncate from the high end; the
            // analyses never need them, so stay conservative.
            None
        }
    }
}

fn eval_literal(lit: &Lit) -> Option<Bytes32> {
    match lit {
        Lit::Number { lexeme, unit } => {
            let base = eval_number_lexeme(lexeme)?;
            match unit {
                None => Some(base),
                Some(u) => {
                    let mult = unit_multiplier(u)?;
                    base.checked_mul_small(mult)
                }
            }
        }
        Lit::Address(text) => Bytes32::from_hex_str(text),
        Lit::Bool(b) => Some(Bytes32::from_u64(*b as u64)),
        Lit::Str(_) | Lit::HexStr(_) => None,
    }
}

/// Parse a numeric lexeme including scientific notation (`1e18`, `2.5e3`).
fn eval_number_lexeme(lexeme: &str) -> Option<Bytes32> {
    let t = lexeme.trim();
    if t.starts_with("0x") || t.starts_with("0X") {
        return Bytes32::from_hex_str(t);
    }
    let (mantissa, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<u32>().ok()?),
        None => (t, 0),
    };
    // A fractional mantissa is only integral once the exponent shifts the
    // point past it: `2.5e3` = 2500.
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let frac_digits = frac_part.chars().filter(|c| *c != '_').count() as u32;
    if frac_digits > exp {
        return None;
    }
    let joined: String = int_part.chars().chain(frac_part.chars()).filter(|c| *c != '_').collect();
    let mut acc = Bytes32::from_dec_str(&joined)?;
    for _ in 0..(exp - frac_digits) {
        acc = acc.checked_mul_small(10)?;
    }
    Some(acc)
}

fn unit_multiplier(unit: &str) -> Option<u64> {
    Some(match unit {
        "wei" | "seconds" => 1,
        "gwei" => 1_000_000_000,
        "szabo" => 1_000_000_000_000,
        "finney" => 1_000_000_000_000_000,
        "ether" => 1_000_000_000_000_000_000,
        "minutes" => 60,
        "hours" => 3_600,
        "days" => 86_400,
        "weeks" => 604_800,
        _ => return None,
    })
}
