//! Traversal of every name reference in a declaration, with the set of
//! locally bound variables at each site.

use crate::lang::ast::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefKind {
    Var,
    Con,
    /// Constructor in a pattern.
    PatCon,
}

/// Calls `f` on every reference in `decl`, in document order. `bound` holds
/// the locally bound names visible at the site.
pub fn visit_decl_mut<E>(
    decl: &mut TopDecl,
    f: &mut impl FnMut(&mut QName, RefKind, &[String]) -> Result<(), E>,
) -> Result<(), E> {
    let DeclKind::Fun(fun) = &mut decl.kind else { return Ok(()) };
    for eq in &mut fun.equations {
        visit_equation_mut(eq, f)?;
    }
    Ok(())
}

pub fn visit_equation_mut<E>(
    eq: &mut Equation,
    f: &mut impl FnMut(&mut QName, RefKind, &[String]) -> Result<(), E>,
) -> Result<(), E> {
    let mut bound = Vec::new();
    for p in &mut eq.params {
        visit_pattern_mut(p, f, &bound)?;
    }
    bound.extend(eq.pattern_vars());
    bound.extend(eq.locals.iter().map(|l| l.name.clone()));
    visit_expr_mut(&mut eq.rhs, f, &mut bound)?;
    for local in &mut eq.locals {
        let n = bound.len();
        bound.extend(local.params.iter().cloned());
        visit_expr_mut(&mut local.body, f, &mut bound)?;
        bound.truncate(n);
    }
    Ok(())
}

fn visit_pattern_mut<E>(
    p: &mut Pattern,
    f: &mut impl FnMut(&mut QName, RefKind, &[String]) -> Result<(), E>,
    bound: &[String],
) -> Result<(), E> {
    match p {
        Pattern::Con(c, args) => {
            f(c, RefKind::PatCon, bound)?;
            for a in args {
                visit_pattern_mut(a, f, bound)?;
            }
        }
        Pattern::Tuple(items) => {
            for a in items {
                visit_pattern_mut(a, f, bound)?;
            }
        }
        Pattern::Var(_) | Pattern::Int(_) | Pattern::Wild => {}
    }
    Ok(())
}

pub fn visit_expr_mut<E>(
    e: &mut Expr,
    f: &mut impl FnMut(&mut QName, RefKind, &[String]) -> Result<(), E>,
    bound: &mut Vec<String>,
) -> Result<(), E> {
    match e {
        Expr::Var(q) => f(q, RefKind::Var, bound),
        Expr::Con(q) => f(q, RefKind::Con, bound),
        Expr::Int(_) | Expr::Str(_) | Expr::Builtin(_) => Ok(()),
        Expr::App(a, b) | Expr::Infix(_, a, b) => {
            visit_expr_mut(a, f, bound)?;
            visit_expr_mut(b, f, bound)
        }
        Expr::Tuple(items) => items.iter_mut().try_for_each(|i| visit_expr_mut(i, f, bound)),
        Expr::Case(s, alts) => {
            visit_expr_mut(s, f, bound)?;
            for alt in alts {
                visit_pattern_mut(&mut alt.pat, f, bound)?;
                let n = bound.len();
                bound.extend(alt.pat.vars());
                visit_expr_mut(&mut alt.body, f, bound)?;
                bound.truncate(n);
            }
            Ok(())
        }
        Expr::Let(x, v, b) => {
            bound.push(x.clone());
            visit_expr_mut(v, f, bound)?;
            visit_expr_mut(b, f, bound)?;
            bound.pop();
            Ok(())
        }
    }
}

/// Read-only variant of [`visit_decl_mut`].
pub fn visit_decl<E>(decl: &TopDecl, f: &mut impl FnMut(&QName, RefKind, &[String]) -> Result<(), E>) -> Result<(), E> {
    let mut copy = decl.clone();
    visit_decl_mut(&mut copy, &mut |q, k, b| f(q, k, b))
}

/// Every global (module-qualified) reference in a declaration of a
/// qualified project.
pub fn global_refs(decl: &TopDecl) -> Vec<(QName, RefKind)> {
    let mut out = Vec::new();
    let _ = visit_decl(decl, &mut |q, k, _| {
        if q.module.is_some() {
            out.push((q.clone(), k));
        }
        Ok::<(), ()>(())
    });
    out
}

/// Rewrites every reference in an expression (no binder tracking needed by
/// callers that work on qualified names).
pub fn map_refs_expr(e: &mut Expr, f: &mut impl FnMut(&mut QName, RefKind)) {
    let _ = visit_expr_mut(
        e,
        &mut |q, k, _| {
            f(q, k);
            Ok::<(), ()>(())
        },
        &mut Vec::new(),
    );
}

pub fn map_refs_decl(decl: &mut TopDecl, f: &mut impl FnMut(&mut QName, RefKind)) {
    let _ = visit_decl_mut(decl, &mut |q, k, _| {
        f(q, k);
        Ok::<(), ()>(())
    });
}
