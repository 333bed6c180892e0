//! α-equivalence of expressions and declarations.
//!
//! Bound variables on both sides are mapped to shared binder ids; free names
//! must match literally. A function's own name counts as bound inside its
//! declaration, so `fold1` and `fold2` compare equal when their bodies only
//! differ in the recursive reference.

use super::ast::*;

/// A declaration's name and home module.
type SelfRef = (String, Option<String>);

#[derive(Default)]
struct Env {
    left: Vec<(String, usize)>,
    right: Vec<(String, usize)>,
    next: usize,
    /// (name, home module) of the declarations being compared.
    selves: Option<(SelfRef, SelfRef)>,
}

#[derive(PartialEq)]
enum Binding {
    Bound(usize),
    SelfRef,
    Free,
}

impl Env {
    fn bind(&mut self, a: &str, b: &str) {
        self.left.push((a.to_string(), self.next));
        self.right.push((b.to_string(), self.next));
        self.next += 1;
    }

    fn mark(&self) -> (usize, usize) {
        (self.left.len(), self.right.len())
    }

    fn reset(&mut self, m: (usize, usize)) {
        self.left.truncate(m.0);
        self.right.truncate(m.1);
    }

    fn lookup(scope: &[(String, usize)], selfname: Option<&(String, Option<String>)>, q: &QName) -> Binding {
        if q.module.is_none() {
            if let Some((_, id)) = scope.iter().rev().find(|(n, _)| *n == q.ident) {
                return Binding::Bound(*id);
            }
        }
        match selfname {
            Some((name, home)) if *name == q.ident && (q.module.is_none() || q.module == *home) => Binding::SelfRef,
            _ => Binding::Free,
        }
    }

    fn vars_eq(&self, a: &QName, b: &QName) -> bool {
        let (sa, sb) = match &self.selves {
            Some((x, y)) => (Some(x), Some(y)),
            None => (None, None),
        };
        match (Env::lookup(&self.left, sa, a), Env::lookup(&self.right, sb, b)) {
            (Binding::Free, Binding::Free) => a == b,
            (x, y) => x == y,
        }
    }
}

pub fn alpha_eq_expr(a: &Expr, b: &Expr) -> bool {
    expr_eq(a, b, &mut Env::default())
}

fn expr_eq(a: &Expr, b: &Expr, env: &mut Env) -> bool {
    match (a, b) {
        (Expr::Var(x), Expr::Var(y)) => env.vars_eq(x, y),
        (Expr::Con(x), Expr::Con(y)) => x == y,
        (Expr::Int(x), Expr::Int(y)) => x == y,
        (Expr::Str(x), Expr::Str(y)) => x == y,
        (Expr::Builtin(x), Expr::Builtin(y)) => x == y,
        (Expr::App(f1, a1), Expr::App(f2, a2)) => expr_eq(f1, f2, env) && expr_eq(a1, a2, env),
        (Expr::Infix(o1, l1, r1), Expr::Infix(o2, l2, r2)) => o1 == o2 && expr_eq(l1, l2, env) && expr_eq(r1, r2, env),
        (Expr::Tuple(xs), Expr::Tuple(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| expr_eq(x, y, env))
        }
        (Expr::Case(s1, alts1), Expr::Case(s2, alts2)) => {
            if alts1.len() != alts2.len() || !expr_eq(s1, s2, env) {
                return false;
            }
            alts1.iter().zip(alts2).all(|(x, y)| {
                let m = env.mark();
                let ok = pat_eq(&x.pat, &y.pat, env) && expr_eq(&x.body, &y.body, env);
                env.reset(m);
                ok
            })
        }
        (Expr::Let(x1, v1, b1), Expr::Let(x2, v2, b2)) => {
            let m = env.mark();
            env.bind(x1, x2);
            let ok = expr_eq(v1, v2, env) && expr_eq(b1, b2, env);
            env.reset(m);
            ok
        }
        _ => false,
    }
}

/// Compares pattern shapes, binding corresponding variables.
fn pat_eq(a: &Pattern, b: &Pattern, env: &mut Env) -> bool {
    match (a, b) {
        (Pattern::Var(x), Pattern::Var(y)) => {
            env.bind(x, y);
            true
        }
        (Pattern::Int(x), Pattern::Int(y)) => x == y,
        (Pattern::Wild, Pattern::Wild) => true,
        (Pattern::Con(c1, ps1), Pattern::Con(c2, ps2)) => {
            c1 == c2 && ps1.len() == ps2.len() && ps1.iter().zip(ps2).all(|(x, y)| pat_eq(x, y, env))
        }
        (Pattern::Tuple(ps1), Pattern::Tuple(ps2)) => {
            ps1.len() == ps2.len() && ps1.iter().zip(ps2).all(|(x, y)| pat_eq(x, y, env))
        }
        _ => false,
    }
}

fn equation_eq(a: &Equation, b: &Equation, env: &mut Env) -> bool {
    if a.params.len() != b.params.len() || a.locals.len() != b.locals.len() {
        return false;
    }
    let m = env.mark();
    let mut ok = a.params.iter().zip(&b.params).all(|(x, y)| pat_eq(x, y, env));
    if ok {
        for (x, y) in a.locals.iter().zip(&b.locals) {
            env.bind(&x.name, &y.name);
        }
        ok = expr_eq(&a.rhs, &b.rhs, env)
            && a.locals.iter().zip(&b.locals).all(|(x, y)| {
                if x.params.len() != y.params.len() {
                    return false;
                }
                let lm = env.mark();
                for (p, q) in x.params.iter().zip(&y.params) {
                    env.bind(p, q);
                }
                let ok = expr_eq(&x.body, &y.body, env);
                env.reset(lm);
                ok
            });
    }
    env.reset(m);
    ok
}

/// α-equivalence of two declarations whose self-references may be
/// qualified with the given home modules.
pub fn alpha_eq_decl_in(a: &TopDecl, home_a: Option<&str>, b: &TopDecl, home_b: Option<&str>) -> bool {
    match (&a.kind, &b.kind) {
        (DeclKind::Data(x), DeclKind::Data(y)) => x == y,
        (DeclKind::Fun(f), DeclKind::Fun(g)) => {
            if f.equations.len() != g.equations.len() {
                return false;
            }
            let mut env = Env {
                selves: Some((
                    (f.name.clone(), home_a.map(str::to_string)),
                    (g.name.clone(), home_b.map(str::to_string)),
                )),
                ..Env::default()
            };
            f.equations.iter().zip(&g.equations).all(|(x, y)| equation_eq(x, y, &mut env))
        }
        _ => false,
    }
}

/// True iff the declarations differ only in bound-variable names (the
/// declared name included). Attached comments are ignored.
pub fn alpha_eq(a: &TopDecl, b: &TopDecl) -> bool {
    alpha_eq_decl_in(a, None, b, None)
}
