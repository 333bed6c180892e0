//! Position-free addressing of expression nodes.
//!
//! A path starts with the equation index, then `0` for the equation's
//! right-hand side or `1 + i` for the body of its `i`-th `where` binding,
//! then child indices: `App` [function, argument], `Infix` [left, right],
//! `Tuple` items, `Case` [scrutinee, alternative bodies...], `Let`
//! [value, body].

use std::collections::BTreeSet;

use super::walk::{global_refs, RefKind};
use super::{qualify_project, ModuleScope, ResolveError};
use crate::lang::ast::*;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccRef {
    pub module: String,
    /// Name of the enclosing top-level declaration.
    pub decl: String,
    pub path: Vec<usize>,
}

fn child(e: &Expr, i: usize) -> Option<&Expr> {
    match (e, i) {
        (Expr::App(f, _), 0) | (Expr::Infix(_, f, _), 0) => Some(f),
        (Expr::App(_, a), 1) | (Expr::Infix(_, _, a), 1) => Some(a),
        (Expr::Tuple(items), i) => items.get(i),
        (Expr::Case(s, _), 0) => Some(s),
        (Expr::Case(_, alts), i) => alts.get(i - 1).map(|a| &a.body),
        (Expr::Let(_, v, _), 0) => Some(v),
        (Expr::Let(_, _, b), 1) => Some(b),
        _ => None,
    }
}

fn child_mut(e: &mut Expr, i: usize) -> Option<&mut Expr> {
    match (e, i) {
        (Expr::App(f, _), 0) | (Expr::Infix(_, f, _), 0) => Some(f),
        (Expr::App(_, a), 1) | (Expr::Infix(_, _, a), 1) => Some(a),
        (Expr::Tuple(items), i) => items.get_mut(i),
        (Expr::Case(s, _), 0) => Some(s),
        (Expr::Case(_, alts), i) => alts.get_mut(i - 1).map(|a| &mut a.body),
        (Expr::Let(_, v, _), 0) => Some(v),
        (Expr::Let(_, _, b), 1) => Some(b),
        _ => None,
    }
}

/// The node at `path` inside a function declaration.
pub fn expr_at<'a>(f: &'a FunDecl, path: &[usize]) -> Option<&'a Expr> {
    let [eq, part, rest @ ..] = path else { return None };
    let eq = f.equations.get(*eq)?;
    let mut e = if *part == 0 { &eq.rhs } else { &eq.locals.get(part - 1)?.body };
    for &i in rest {
        e = child(e, i)?;
    }
    Some(e)
}

pub fn expr_at_mut<'a>(f: &'a mut FunDecl, path: &[usize]) -> Option<&'a mut Expr> {
    let [eq, part, rest @ ..] = path else { return None };
    let eq = f.equations.get_mut(*eq)?;
    let mut e = if *part == 0 { &mut eq.rhs } else { &mut eq.locals.get_mut(part - 1)?.body };
    for &i in rest {
        e = child_mut(e, i)?;
    }
    Some(e)
}

/// Dereferences an occurrence in a project.
pub fn deref<'a>(project: &'a Project, occ: &OccRef) -> Option<&'a Expr> {
    expr_at(project.module(&occ.module)?.fun(&occ.decl)?, &occ.path)
}

/// Pre-order walk over every expression node of a function declaration.
/// The callback receives the node, its path and whether it is the function
/// part of an application.
pub fn walk_paths(f: &FunDecl, visit: &mut impl FnMut(&Expr, &[usize], bool)) {
    fn go(e: &Expr, path: &mut Vec<usize>, in_fun_pos: bool, visit: &mut impl FnMut(&Expr, &[usize], bool)) {
        visit(e, path, in_fun_pos);
        let n = match e {
            Expr::App(..) | Expr::Infix(..) | Expr::Let(..) => 2,
            Expr::Tuple(items) => items.len(),
            Expr::Case(_, alts) => alts.len() + 1,
            _ => 0,
        };
        for i in 0..n {
            path.push(i);
            let c = child(e, i).expect("child in range");
            go(c, path, matches!(e, Expr::App(..)) && i == 0, visit);
            path.pop();
        }
    }
    for (i, eq) in f.equations.iter().enumerate() {
        let mut path = vec![i, 0];
        go(&eq.rhs, &mut path, false, visit);
        for (l, local) in eq.locals.iter().enumerate() {
            let mut path = vec![i, l + 1];
            go(&local.body, &mut path, false, visit);
        }
    }
}

fn target_of(project: &Project, module: &str, name: &str) -> Result<(QName, RefKind), ResolveError> {
    let q = QName::parse(name);
    let kind = if q.ident.starts_with(|c: char| c.is_ascii_uppercase()) { RefKind::Con } else { RefKind::Var };
    let home = ModuleScope::new(project, module).resolve(&q, kind)?;
    Ok((QName::global(home, q.ident), kind))
}

/// Every reference to the binding `name` as seen from `module`, in
/// document order per module, modules in name order.
pub fn occurrences_of(project: &Project, module: &str, name: &str) -> Result<Vec<OccRef>, ResolveError> {
    let qualified = qualify_project(project)?;
    let (target, _) = target_of(&qualified, module, name)?;
    let mut out = Vec::new();
    for (mname, m) in &qualified.modules {
        for f in m.decls.iter().filter_map(TopDecl::as_fun) {
            walk_paths(f, &mut |e, path, _| {
                if matches!(e, Expr::Var(q) | Expr::Con(q) if *q == target) {
                    out.push(OccRef { module: mname.clone(), decl: f.name.clone(), path: path.to_vec() });
                }
            });
        }
    }
    Ok(out)
}

/// The first maximal application in `module` whose head is `name` applied to
/// exactly `arity` arguments. `name` may also be a `where`-bound function.
pub fn find_application(project: &Project, module: &str, name: &str, arity: usize) -> Result<OccRef, ResolveError> {
    let qualified = qualify_project(project)?;
    let target = match target_of(&qualified, module, name) {
        Ok((t, _)) => t,
        Err(_) if !name.contains('.') => QName::local(name),
        Err(e) => return Err(e),
    };
    let missing = || ResolveError::NoSuchApplication { module: module.to_string(), name: name.to_string(), arity };
    if arity == 0 {
        return Err(missing());
    }
    let m = qualified.module(module).ok_or_else(missing)?;
    for f in m.decls.iter().filter_map(TopDecl::as_fun) {
        let mut found = None;
        walk_paths(f, &mut |e, path, in_fun_pos| {
            if found.is_some() || in_fun_pos || !matches!(e, Expr::App(..)) {
                return;
            }
            let (head, args) = e.spine();
            if args.len() == arity && head.as_var() == Some(&target) {
                found = Some(path.to_vec());
            }
        });
        if let Some(path) = found {
            return Ok(OccRef { module: module.to_string(), decl: f.name.clone(), path });
        }
    }
    Err(missing())
}

/// Imports of `module` from which nothing is referenced.
pub fn unused_imports(project: &Project, module: &str) -> Result<Vec<String>, ResolveError> {
    let qualified = qualify_project(project)?;
    let Some(m) = qualified.module(module) else {
        return Err(ResolveError::UnresolvedName { module: module.to_string(), name: module.to_string() });
    };
    let used: BTreeSet<String> = m.decls.iter().flat_map(global_refs).filter_map(|(q, _)| q.module).collect();
    Ok(m.imports.iter().filter(|i| !used.contains(*i)).cloned().collect())
}
