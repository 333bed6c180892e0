//! Canonical layout: one blank line between top-level declarations,
//! `where` at four spaces with locals at eight, minimal parentheses.
//! A `case` in statement position (an equation or local body, a `let` body
//! there, or an alternative body) is laid out one alternative per line;
//! anywhere else it is written with braces.

use std::fmt::Write;

use super::ast::*;

const INDENT: usize = 4;

const PREC_TOP: u8 = 0;
const PREC_APP: u8 = 10;
const PREC_ATOM: u8 = 11;

fn op_info(op: BinOp) -> (u8, bool) {
    match op {
        BinOp::Concat => (5, true),
        BinOp::Add => (6, false),
        BinOp::Mul => (7, false),
    }
}

pub fn render_module(m: &ModuleDef) -> String {
    let mut out = String::new();
    out.push_str("module ");
    out.push_str(&m.name);
    if let Some(exports) = &m.exports {
        let _ = write!(out, " ({})", exports.join(", "));
    }
    out.push_str(" where\n");
    if !m.imports.is_empty() {
        out.push('\n');
        for i in &m.imports {
            let _ = writeln!(out, "import {i}");
        }
    }
    for d in &m.decls {
        out.push('\n');
        out.push_str(&render_decl(d));
    }
    out
}

pub fn render_decl(d: &TopDecl) -> String {
    let mut out = String::new();
    if let Some(c) = &d.comment {
        for line in &c.lines {
            if line.is_empty() {
                out.push_str("--\n");
            } else {
                let _ = writeln!(out, "-- {line}");
            }
        }
    }
    out.push_str(&render_decl_body(d));
    out
}

/// Renders a declaration without its attached comment.
pub fn render_decl_body(d: &TopDecl) -> String {
    let mut out = String::new();
    match &d.kind {
        DeclKind::Data(data) => {
            let cons: Vec<String> = data.constructors.iter().map(render_constructor).collect();
            let _ = writeln!(out, "data {} = {}", data.name, cons.join(" | "));
        }
        DeclKind::Fun(f) => {
            for eq in &f.equations {
                render_equation(&mut out, &f.name, eq);
            }
        }
    }
    out
}

fn render_constructor(c: &ConstructorDef) -> String {
    match &c.args {
        ArgShape::Curried(args) if args.is_empty() => c.name.clone(),
        ArgShape::Curried(args) => format!("{} {}", c.name, args.join(" ")),
        ArgShape::Tupled(args) => format!("{} ({})", c.name, args.join(", ")),
    }
}

fn render_equation(out: &mut String, name: &str, eq: &Equation) {
    out.push_str(name);
    for p in &eq.params {
        out.push(' ');
        out.push_str(&render_apat(p));
    }
    out.push_str(" = ");
    out.push_str(&block_expr(&eq.rhs, 0));
    out.push('\n');
    if !eq.locals.is_empty() {
        let _ = writeln!(out, "{}where", " ".repeat(INDENT));
        let ind = 2 * INDENT;
        for l in &eq.locals {
            out.push_str(&" ".repeat(ind));
            out.push_str(&l.name);
            for p in &l.params {
                out.push(' ');
                out.push_str(p);
            }
            out.push_str(" = ");
            out.push_str(&block_expr(&l.body, ind));
            out.push('\n');
        }
    }
}

/// Renders an expression standing in statement position on a line whose
/// layout column is `indent`.
fn block_expr(e: &Expr, indent: usize) -> String {
    match e {
        Expr::Case(scrut, alts) => {
            let mut s = format!("case {} of", inline(scrut, PREC_TOP));
            let ind = indent + INDENT;
            for a in alts {
                let _ = write!(s, "\n{}{} -> {}", " ".repeat(ind), render_pat(&a.pat), block_expr(&a.body, ind));
            }
            s
        }
        Expr::Let(name, value, body) => {
            format!("let {name} = {} in {}", inline(value, PREC_TOP), block_expr(body, indent))
        }
        _ => inline(e, PREC_TOP),
    }
}

/// Renders an expression on a single line.
pub fn render_expr(e: &Expr) -> String {
    inline(e, PREC_TOP)
}

fn paren_if(cond: bool, s: String) -> String {
    if cond {
        format!("({s})")
    } else {
        s
    }
}

fn inline(e: &Expr, prec: u8) -> String {
    match e {
        Expr::Var(q) | Expr::Con(q) => q.to_string(),
        Expr::Int(n) => paren_if(*n < 0, n.to_string()),
        Expr::Str(s) => quote(s),
        Expr::Builtin(b) => b.name().to_string(),
        Expr::App(f, a) => paren_if(prec > PREC_APP, format!("{} {}", inline(f, PREC_APP), inline(a, PREC_ATOM))),
        Expr::Infix(op, l, r) => {
            let (p, right) = op_info(*op);
            let (lp, rp) = if right { (p + 1, p) } else { (p, p + 1) };
            paren_if(prec > p, format!("{} {} {}", inline(l, lp), op.symbol(), inline(r, rp)))
        }
        Expr::Tuple(items) => {
            let parts: Vec<String> = items.iter().map(|i| inline(i, PREC_TOP)).collect();
            format!("({})", parts.join(", "))
        }
        Expr::Case(scrut, alts) => {
            let parts: Vec<String> =
                alts.iter().map(|a| format!("{} -> {}", render_pat(&a.pat), inline(&a.body, PREC_TOP))).collect();
            paren_if(prec > PREC_TOP, format!("case {} of {{ {} }}", inline(scrut, PREC_TOP), parts.join("; ")))
        }
        Expr::Let(name, value, body) => {
            paren_if(prec > PREC_TOP, format!("let {name} = {} in {}", inline(value, PREC_TOP), inline(body, PREC_TOP)))
        }
    }
}

pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Pattern in alternative position: constructor arguments unparenthesized.
pub fn render_pat(p: &Pattern) -> String {
    match p {
        Pattern::Con(c, args) if !args.is_empty() => {
            let parts: Vec<String> = args.iter().map(render_apat).collect();
            format!("{} {}", c, parts.join(" "))
        }
        _ => render_apat(p),
    }
}

/// Pattern in argument position.
pub fn render_apat(p: &Pattern) -> String {
    match p {
        Pattern::Var(v) => v.clone(),
        Pattern::Int(n) => paren_if(*n < 0, n.to_string()),
        Pattern::Wild => "_".into(),
        Pattern::Con(c, args) if args.is_empty() => c.to_string(),
        Pattern::Con(..) => format!("({})", render_pat(p)),
        Pattern::Tuple(items) => {
            let parts: Vec<String> = items.iter().map(render_pat).collect();
            format!("({})", parts.join(", "))
        }
    }
}
