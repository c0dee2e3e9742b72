// SPDX-License-Identifier: Apache-2.0

//! Canonical pretty-printer for parsed source units.
//!
//! The printed form is deterministic and reparses to an equal tree (modulo
//! spans): `parse → print` is a fixpoint of `parse` after one round.
//! Inline assembly prints its captured raw text verbatim, which keeps both
//! representations (raw text and Yul AST) intact across a round trip.

use crate::ast::*;

pub fn print_source(unit: &SourceUnit) -> String {
    let mut p = Printer { out: String::new(), indent: 0 };
    if let Some(text) = &unit.pragma_text {
        p.line(text);
    }
    for imp in &unit.imports {
        p.line(&format!("import \"{}\";", imp.path));
    }
    for var in &unit.file_constants {
        let rendered = p.render_state_var(var);
        p.line(&rendered);
    }
    for (i, contract) in unit.contracts.iter().enumerate() {
        if i > 0 || !unit.imports.is_empty() || unit.pragma_text.is_some() {
            p.blank();
        }
        p.print_contract(contract);
    }
    p.out
}

struct Printer {
    out: String,
    indent: usize,
}

impl Printer {
    fn line(&mut self, text: &str) {
        for _ in 0..self.indent {
            self.out.push_str("    ");
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn blank(&mut self) {
        self.out.push('\n');
    }

    fn print_contract(&mut self, c: &ContractDef) {
        let mut header = format!("{} {}", c.kind, c.name);
        if !c.bases.is_empty() {
            header.push_str(" is ");
            header.push_str(&c.bases.join(", "));
        }
        header.push_str(" {");
        self.line(&header);
        self.indent += 1;

        for s in &c.structs {
            self.line(&format!("struct {} {{", s.name));
            self.indent += 1;
            for (name, ty) in &s.fields {
                self.line(&format!("{} {};", ty.display_name(), name));
            }
            self.indent -= 1;
            self.line("}");
        }
        for e in &c.enums {
            self.line(&format!("enum {} {{ {} }}", e.name, e.members.join(", ")));
        }
        for ev in &c.events {
            self.line(&format!("event {}();", ev));
        }
        for var in &c.state_vars {
            let rendered = self.render_state_var(var);
            self.line(&rendered);
        }
        for m in &c.modifiers {
            self.print_modifier(m);
        }
        for f in &c.functions {
            self.print_function(f);
        }

        self.indent -= 1;
        self.line("}");
    }

    fn render_state_var(&self, var: &StateVarDecl) -> String {
        let mut s = var.ty.display_name();
        match var.visibility {
            VarVisibility::Public => s.push_str(" public"),
            VarVisibility::Internal => s.push_str(" internal"),
            VarVisibility::Private => s.push_str(" private"),
        }
        match var.mutability {
            VarMutability::Mutable => {}
            VarMutability::Constant => s.push_str(" constant"),
            VarMutability::Immutable => s.push_str(" immutable"),
        }
        s.push(' ');
        s.push_str(&var.name);
        if let Some(init) = &var.initializer {
            s.push_str(" = ");
            s.push_str(&render_expr(init));
        }
        s.push(';');
        s
    }

    fn print_modifier(&mut self, m: &ModifierDef) {
        let params = render_params(&m.params);
        match &m.body {
            Some(body) => {
                self.line(&format!("modifier {}({params}) {{", m.name));
                self.print_stmts(body);
                self.line("}");
            }
            None => self.line(&format!("modifier {}({params});", m.name)),
        }
    }

    fn print_function(&mut self, f: &FunctionDef) {
        let mut head = if f.is_constructor {
            format!("constructor({})", render_params(&f.params))
        } else if f.is_receive && f.name == "receive" {
            format!("receive({})", render_params(&f.params))
        } else if f.is_fallback && f.name == "fallback" {
            format!("fallback({})", render_params(&f.params))
        } else {
            format!("function {}({})", f.name, render_params(&f.params))
        };
        match f.visibility {
            FnVisibility::External => head.push_str(" external"),
            FnVisibility::Public => head.push_str(" public"),
            FnVisibility::Internal => head.push_str(" internal"),
            FnVisibility::Private => head.push_str(" private"),
        }
        match f.mutability {
            FnMutability::NonPayable => {}
            FnMutability::Payable => head.push_str(" payable"),
            FnMutability::View => head.push_str(" view"),
            FnMutability::Pure => head.push_str(" pure"),
        }
        if f.is_virtual {
            head.push_str(" virtual");
        }
        if f.is_override {
            head.push_str(" override");
        }
        for m in &f.modifiers {
            head.push(' ');
            head.push_str(&m.name);
            if !m.args.is_empty() {
                head.push('(');
                head.push_str(&render_expr_list(&m.args));
                head.push(')');
            }
        }
        if !f.returns.is_empty() {
            head.push_str(&format!(" returns ({})", render_params(&f.returns)));
        }
        match &f.body {
            Some(body) => {
                head.push_str(" {");
                self.line(&head);
                self.print_stmts(body);
                self.line("}");
            }
            None => {
                head.push(';');
                self.line(&head);
            }
        }
    }

    fn print_stmts(&mut self, stmts: &[Stmt]) {
        self.indent += 1;
        for s in stmts {
            self.print_stmt(s);
        }
        self.indent -= 1;
    }

    fn print_stmt(&mut self, s: &Stmt) {
        match &s.kind {
            StmtKind::Expr(e) => self.line(&format!("{};", render_expr(e))),
            StmtKind::VarDecl { decls, init } => {
                let mut text = if decls.len() == 1 {
                    match &decls[0] {
                        Some(d) => render_decl_part(d),
                        None => "()".to_string(),
                    }
                } else {
                    let parts: Vec<String> = decls
                        .iter()
                        .map(|d| d.as_ref().map(render_decl_part).unwrap_or_default())
                        .collect();
                    format!("({})", parts.join(", "))
                };
                if let Some(e) = init {
                    text.push_str(" = ");
                    text.push_str(&render_expr(e));
                }
                text.push(';');
                self.line(&text);
            }
            StmtKind::If { cond, then_branch, else_branch } => {
                self.line(&format!("if ({}) {{", render_expr(cond)));
                self.print_stmts(then_branch);
                match else_branch {
                    Some(eb) => {
                        self.line("} else {");
                        self.print_stmts(eb);
                        self.line("}");
                    }
                    None => self.line("}"),
                }
            }
            StmtKind::While { cond, body } => {
                self.line(&format!("while ({}) {{", render_expr(cond)));
                self.print_stmts(body);
                self.line("}");
            }
            StmtKind::DoWhile { cond, body } => {
                self.line("do {");
                self.print_stmts(body);
                self.line(&format!("}} while ({});", render_expr(cond)));
            }
            StmtKind::For { init, cond, post, body } => {
                let init_text = match init {
                    Some(stmt) => render_inline_stmt(stmt),
                    None => ";".to_string(),
                };
                let cond_text = cond.as_ref().map(render_expr).unwrap_or_default();
                let post_text = post.as_ref().map(render_expr).unwrap_or_default();
                self.line(&format!("for ({init_text} {cond_text}; {post_text}) {{"));
                self.print_stmts(body);
                self.line("}");
            }
            StmtKind::Return(value) => match value {
                Some(e) => self.line(&format!("return {};", render_expr(e))),
                None => self.line("return;"),
            },
            StmtKind::Require { args } => {
                self.line(&format!("require({});", render_expr_list(args)))
            }
            StmtKind::Emit { event, args } => {
                self.line(&format!("emit {}({});", event, render_expr_list(args)))
            }
            StmtKind::Revert { error, args } => match error {
                Some(name) => self.line(&format!("revert {}({});", name, render_expr_list(args))),
                None if args.is_empty() => self.line("revert();"),
                None => self.line(&format!("revert({});", render_expr_list(args))),
            },
            StmtKind::Assembly(block) => {
                // Raw text verbatim — both representations survive a round
                // trip because reparsing re-derives the Yul tree from the
                // same text under the same pragma.
                self.line(&format!("assembly {{{}}}", block.text));
            }
            StmtKind::Block(body) => {
                self.line("{");
                self.print_stmts(body);
                self.line("}");
            }
            StmtKind::Break => self.line("break;"),
            StmtKind::Continue => self.line("continue;"),
            StmtKind::Placeholder => self.line("_;"),
        }
    }
}

fn render_inline_stmt(s: &Stmt) -> String {
    match &s.kind {
        StmtKind::Expr(e) => format!("{};", render_expr(e)),
        StmtKind::VarDecl { decls, init } => {
            let mut text = match (decls.len(), &decls[0]) {
                (1, Some(d)) => render_decl_part(d),
                _ => {
                    let parts: Vec<String> = decls
                        .iter()
                        .map(|d| d.as_ref().map(render_decl_part).unwrap_or_default())
                        .collect();
                    format!("({})", parts.join(", "))
                }
            };
            if let Some(e) = init {
                text.push_str(" = ");
                text.push_str(&render_expr(e));
            }
            text.push(';');
            text
        }
        _ => ";".to_string(),
    }
}

fn render_decl_part(d: &VarDeclPart) -> String {
    let mut s = d.ty.display_name();
    match d.location {
        Some(StorageLocation::Memory) => s.push_str(" memory"),
        Some(StorageLocation::Calldata) => s.push_str(" calldata"),
        Some(StorageLocation::Storage) => s.push_str(" storage"),
        None => {}
    }
    s.push(' ');
    s.push_str(&d.name);
    s
}

fn render_params(params: &[Param]) -> String {
    let parts: Vec<String> = params
        .iter()
        .map(|p| {
            let mut s = p.ty.display_name();
            match p.location {
                Some(StorageLocation::Memory) => s.push_str(" memory"),
                Some(StorageLocation::Calldata) => s.push_str(" calldata"),
                Some(StorageLocation::Storage) => s.push_str(" storage"),
                None => {}
            }
            if let Some(name) = &p.name {
                s.push(' ');
                s.push_str(name);
            }
            s
        })
        .collect();
    parts.join(", ")
}

fn render_expr_list(exprs: &[Expr]) -> String {
    exprs.iter().map(render_expr).collect::<Vec<_>>().join(", ")
}

/// Render an expression. Operands of composite operators are parenthesized
/// whenever they are themselves composite, which is deterministic and always
/// reparses to the same shape.
pub fn render_expr(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Ident(name) => name.clone(),
        ExprKind::Member { base, member } => format!("{}.{}", render_operand(base), member),
        ExprKind::Index { base, index } => match index {
            Some(ix) => format!("{}[{}]", render_operand(base), render_expr(ix)),
            None => format!("{}[]", render_operand(base)),
        },
        ExprKind::Call { callee, options, args } => {
            let mut s = render_operand(callee);
            if !options.is_empty() {
                let opts: Vec<String> =
                    options.iter().map(|(k, v)| format!("{k}: {}", render_expr(v))).collect();
                s.push_str(&format!("{{{}}}", opts.join(", ")));
            }
            s.push('(');
            s.push_str(&render_expr_list(args));
            s.push(')');
            s
        }
        ExprKind::New(ty) => format!("new {ty}"),
        ExprKind::Assign { lhs, op, rhs } => {
            let op_text = match op {
                None => "=".to_string(),
                Some(b) => format!("{}=", b.symbol()),
            };
            format!("{} {} {}", render_operand(lhs), op_text, render_expr(rhs))
        }
        ExprKind::Binary { op, lhs, rhs } => {
            format!("{} {} {}", render_operand(lhs), op.symbol(), render_operand(rhs))
        }
        ExprKind::Unary { op, operand, prefix } => {
            let sym = match op {
                UnOp::Not => "!",
                UnOp::BitNot => "~",
                UnOp::Neg => "-",
                UnOp::Delete => "delete ",
                UnOp::Inc => "++",
                UnOp::Dec => "--",
            };
            if *prefix {
                format!("{sym}{}", render_operand(operand))
            } else {
                format!("{}{sym}", render_operand(operand))
            }
        }
        ExprKind::Conditional { cond, then_value, else_value } => format!(
            "{} ? {} : {}",
            render_operand(cond),
            render_operand(then_value),
            render_operand(else_value)
        ),
        ExprKind::Tuple(items) => {
            let parts: Vec<String> =
                items.iter().map(|i| i.as_ref().map(render_expr).unwrap_or_default()).collect();
            format!("({})", parts.join(", "))
        }
        ExprKind::Literal(lit) => render_lit(lit),
        ExprKind::Msg(field) => format!("msg.{}", field.name()),
        ExprKind::ElemType(name) => name.clone(),
    }
}

/// Parenthesize composite sub-expressions in operand position.
fn render_operand(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Binary { .. }
        | ExprKind::Conditional { .. }
        | ExprKind::Assign { .. } => {
            format!("({})", render_expr(e))
        }
        _ => render_expr(e),
    }
}

fn render_lit(lit: &Lit) -> String {
    match lit {
        Lit::Number { lexeme, unit } => match unit {
            Some(u) => format!("{lexeme} {u}"),
            None => lexeme.clone(),
        },
        Lit::Address(lexeme) => lexeme.clone(),
        Lit::Str(s) => {
            let mut out = String::from("\"");
            for ch in s.chars() {
                match ch {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\t' => out.push_str("\\t"),
                    '\r' => out.push_str("\\r"),
                    '\0' => out.push_str("\\0"),
                    c if (c as u32) < 0x20 => out.push_str(&format!("\\x{:02x}", c as u32)),
                    c => out.push(c),
                }
            }
            out.push('"');
            out
        }
        Lit::HexStr(h) => format!("hex\"{h}\""),
        Lit::Bool(b) => b.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diag::FileId;
    use crate::parser::parse_source;

    fn round_trip_fixpoint(src: &str) {
        let u1 = parse_source(FileId::new("rt.sol"), src).expect("first parse");
        let p1 = print_source(&u1);
        let u2 = parse_source(FileId::new("rt.sol"), &p1)
            .unwrap_or_else(|e| panic!("printed source failed to reparse: {e}\n---\n{p1}"));
        let p2 = print_source(&u2);
        assert_eq!(p1, p2, "print(parse(print(parse(x)))) must equal print(parse(x))");
    }

    #[test]
    fn fixpoint_simple_contract() {
        round_trip_fixpoint(
            r#"
            pragma solidity ^0.8.9;
            contract Box {
                address public value;
                event ValueChanged();
                function setValue(address newValue) public {
                    value = newValue;
                    emit ValueChanged();
                }
            }
            "#,
        );
    }

    #[test]
    fn fixpoint_proxy_with_assembly() {
        round_trip_fixpoint(
            r#"
            pragma solidity ^0.8.9;
            contract Proxy {
                bytes32 internal constant SLOT = 0x360894a13ba1a3210667c828492db98dca3e2076cc3735a920a3ca505d382bbc;
                fallback() external payable {
                    assembly {
                        calldatacopy(0, 0, calldatasize())
                        let result := delegatecall(gas(), sload(SLOT), 0, calldatasize(), 0, 0)
                        returndatacopy(0, 0, returndatasize())
                        switch result
                        case 0 { revert(0, returndatasize()) }
                        default { return(0, returndatasize()) }
                    }
                }
            }
            "#,
        );
    }

    #[test]
    fn fixpoint_control_flow_and_tuples() {
        round_trip_fixpoint(
            r#"
            contract T {
                uint256 x;
                function f(address target) public returns (uint256) {
                    (bool ok, bytes memory ret) = target.call(msg.data);
                    if (!ok) {
                        revert();
                    } else {
                        x += 1;
                    }
                    for (uint256 i = 0; i < 10; i++) {
                        x = x * 2 + (x > 100 ? 1 : 0);
                    }
                    while (x > 0) {
                        x--;
                    }
                    do {
                        x = x / 2;
                    } while (x > 4);
                    return x;
                }
            }
            "#,
        );
    }

    #[test]
    fn fixpoint_inheritance_and_interfaces() {
        round_trip_fixpoint(
            r#"
            pragma solidity ^0.6.0;
            interface IBeacon {
                function implementation() external view returns (address);
            }
            abstract contract Base {
                modifier onlyOwner() {
                    require(msg.sender == owner(), "no");
                    _;
                }
                function owner() public view virtual returns (address);
            }
            contract Impl is Base, IBeacon {
                address private _impl;
                function owner() public view override returns (address) {
                    return address(uint160(1));
                }
                function implementation() external view override returns (address) {
                    return _impl;
                }
            }
            "#,
        );
    }

    #[test]
    fn nested_operator_parens_are_stable() {
        let src = "contract T { function f(uint a, uint b, uint c) public pure returns (uint) { return a + b * c - (a & b | c) ** 2; } }";
        round_trip_fixpoint(src);
    }
}
