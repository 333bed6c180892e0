use std::collections::BTreeMap;

use super::{err, ErrorKind, RefactorResult};
use crate::lang::alpha_eq_expr;
use crate::lang::ast::*;
use crate::lang::terms::{free_locals, substitute_many};
use crate::resolve::{expr_at, walk_paths};

/// Names bound between the equation level and the node at `path`: the
/// parameters of the enclosing `where` binding, then `case` and `let`
/// binders on the way down.
pub fn bound_along(f: &FunDecl, path: &[usize]) -> Vec<String> {
    let mut out = Vec::new();
    let [eq, part, rest @ ..] = path else { return out };
    let Some(eq) = f.equations.get(*eq) else { return out };
    let mut e = if *part == 0 {
        &eq.rhs
    } else {
        let Some(local) = eq.locals.get(part - 1) else { return out };
        out.extend(local.params.iter().cloned());
        &local.body
    };
    for &i in rest {
        let next = match (e, i) {
            (Expr::App(a, b), _) | (Expr::Infix(_, a, b), _) => {
                if i == 0 {
                    a
                } else {
                    b
                }
            }
            (Expr::Tuple(items), i) => &items[i],
            (Expr::Case(s, _), 0) => s,
            (Expr::Case(_, alts), i) => {
                out.extend(alts[i - 1].pat.vars());
                &alts[i - 1].body
            }
            (Expr::Let(x, v, b), i) => {
                out.push(x.clone());
                if i == 0 {
                    v
                } else {
                    b
                }
            }
            _ => return out,
        };
        e = next;
    }
    out
}

/// First reference to `target` in document order. An unqualified target
/// only matches inside equation `eq` and where no inner binder hides it.
pub fn first_use(f: &FunDecl, eq: Option<usize>, target: &QName) -> Option<Vec<usize>> {
    let mut found = None;
    walk_paths(f, &mut |e, path, _| {
        if found.is_some() || e.as_var() != Some(target) {
            return;
        }
        if target.is_local() && (Some(path[0]) != eq || bound_along(f, path).contains(&target.ident)) {
            return;
        }
        found = Some(path.to_vec());
    });
    found
}

/// All uses of a local name in one equation that refer to its
/// equation-level binding.
pub fn local_uses(f: &FunDecl, eq: usize, name: &str) -> Vec<Vec<usize>> {
    let target = QName::local(name);
    let mut out = Vec::new();
    walk_paths(f, &mut |e, path, _| {
        if path[0] == eq && e.as_var() == Some(&target) && !bound_along(f, path).contains(&target.ident) {
            out.push(path.to_vec());
        }
    });
    out
}

/// The application whose head is the node at `path`: its path and number
/// of arguments.
pub fn spine_root(f: &FunDecl, path: &[usize]) -> (Vec<usize>, usize) {
    let mut root = path.to_vec();
    let mut args = 0;
    while root.len() > 2 && root.last() == Some(&0) {
        let parent = &root[..root.len() - 1];
        if !matches!(expr_at(f, parent), Some(Expr::App(..))) {
            break;
        }
        root.pop();
        args += 1;
    }
    (root, args)
}

/// Replaces occurrences of `target` whose free variables are not rebound
/// at the site by the variable `x`. Returns the rewrite and the count.
pub fn abstract_expr(e: &Expr, target: &Expr, x: &str) -> (Expr, usize) {
    let fv = free_locals(target);
    let mut count = 0;
    let out = abstract_go(e, target, x, &fv, &mut Vec::new(), &mut count);
    (out, count)
}

fn abstract_go(
    e: &Expr,
    target: &Expr,
    x: &str,
    fv: &std::collections::BTreeSet<String>,
    bound: &mut Vec<String>,
    count: &mut usize,
) -> Expr {
    if e == target && !bound.iter().any(|b| fv.contains(b)) {
        *count += 1;
        return Expr::var(x);
    }
    let mut go = |e: &Expr, bound: &mut Vec<String>| abstract_go(e, target, x, fv, bound, count);
    match e {
        Expr::App(f, a) => {
            let f = go(f, bound);
            f.app(go(a, bound))
        }
        Expr::Infix(op, l, r) => {
            let l = go(l, bound);
            Expr::infix(*op, l, go(r, bound))
        }
        Expr::Tuple(items) => Expr::Tuple(items.iter().map(|i| go(i, bound)).collect()),
        Expr::Case(s, alts) => {
            let s = go(s, bound);
            let alts = alts
                .iter()
                .map(|a| {
                    let n = bound.len();
                    bound.extend(a.pat.vars());
                    let body = go(&a.body, bound);
                    bound.truncate(n);
                    Alt { pat: a.pat.clone(), body }
                })
                .collect();
            Expr::Case(Box::new(s), alts)
        }
        Expr::Let(v, val, body) => {
            bound.push(v.clone());
            let val = go(val, bound);
            let body = go(body, bound);
            bound.pop();
            Expr::Let(v.clone(), Box::new(val), Box::new(body))
        }
        other => other.clone(),
    }
}

/// Rewrites every reference to the global `from` with `to`.
pub fn replace_global(e: &Expr, from: &QName, to: &Expr) -> Expr {
    crate::lang::terms::map_expr(e, &mut |node| match &node {
        Expr::Var(q) if q == from => to.clone(),
        _ => node,
    })
}

pub fn replace_global_in_fun(f: &mut FunDecl, from: &QName, to: &Expr) {
    for eq in &mut f.equations {
        eq.rhs = replace_global(&eq.rhs, from, to);
        for l in &mut eq.locals {
            l.body = replace_global(&l.body, from, to);
        }
    }
}

/// Second-order matching of `pattern` against `e`, where the names in
/// `metas` stand for arbitrary expressions and every other name must match
/// exactly (binders up to renaming). Returns the instantiation in `metas`
/// order.
pub fn match_instance(pattern: &Expr, metas: &[String], e: &Expr) -> Option<Vec<Expr>> {
    let mut m = Matcher { metas, subst: BTreeMap::new(), pairs: Vec::new() };
    if !m.go(pattern, e) {
        return None;
    }
    metas.iter().map(|v| m.subst.get(v).cloned()).collect()
}

struct Matcher<'a> {
    metas: &'a [String],
    subst: BTreeMap<String, Expr>,
    /// Binder correspondences (pattern side, expression side).
    pairs: Vec<(String, String)>,
}

impl Matcher<'_> {
    fn pattern_binding(&self, n: &str) -> Option<usize> {
        self.pairs.iter().rposition(|(p, _)| p == n)
    }

    fn expr_binding(&self, n: &str) -> Option<usize> {
        self.pairs.iter().rposition(|(_, e)| e == n)
    }

    fn go(&mut self, p: &Expr, e: &Expr) -> bool {
        match (p, e) {
            (Expr::Var(pq), _) if pq.is_local() => {
                if let Some(i) = self.pattern_binding(&pq.ident) {
                    return matches!(e, Expr::Var(eq) if eq.is_local() && self.expr_binding(&eq.ident) == Some(i));
                }
                if self.metas.contains(&pq.ident) {
                    if free_locals(e).iter().any(|v| self.expr_binding(v).is_some()) {
                        return false;
                    }
                    return match self.subst.get(&pq.ident) {
                        Some(prev) => alpha_eq_expr(prev, e),
                        None => {
                            self.subst.insert(pq.ident.clone(), e.clone());
                            true
                        }
                    };
                }
                matches!(e, Expr::Var(eq) if eq == pq && self.expr_binding(&eq.ident).is_none())
            }
            (Expr::Var(a), Expr::Var(b)) => a == b && (a.module.is_some() || self.expr_binding(&b.ident).is_none()),
            (Expr::Con(a), Expr::Con(b)) => a == b,
            (Expr::Int(a), Expr::Int(b)) => a == b,
            (Expr::Str(a), Expr::Str(b)) => a == b,
            (Expr::Builtin(a), Expr::Builtin(b)) => a == b,
            (Expr::App(f1, a1), Expr::App(f2, a2)) => self.go(f1, f2) && self.go(a1, a2),
            (Expr::Infix(o1, l1, r1), Expr::Infix(o2, l2, r2)) => o1 == o2 && self.go(l1, l2) && self.go(r1, r2),
            (Expr::Tuple(xs), Expr::Tuple(ys)) => xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.go(x, y)),
            (Expr::Case(s1, a1), Expr::Case(s2, a2)) => {
                if a1.len() != a2.len() || !self.go(s1, s2) {
                    return false;
                }
                a1.iter().zip(a2).all(|(x, y)| {
                    let n = self.pairs.len();
                    let ok = pattern_pairs(&x.pat, &y.pat, &mut self.pairs) && self.go(&x.body, &y.body);
                    self.pairs.truncate(n);
                    ok
                })
            }
            (Expr::Let(x1, v1, b1), Expr::Let(x2, v2, b2)) => {
                self.pairs.push((x1.clone(), x2.clone()));
                let ok = self.go(v1, v2) && self.go(b1, b2);
                self.pairs.pop();
                ok
            }
            _ => false,
        }
    }
}

/// Compares two patterns' shapes, recording variable correspondences.
pub fn pattern_pairs(a: &Pattern, b: &Pattern, out: &mut Vec<(String, String)>) -> bool {
    match (a, b) {
        (Pattern::Var(x), Pattern::Var(y)) => {
            out.push((x.clone(), y.clone()));
            true
        }
        (Pattern::Int(x), Pattern::Int(y)) => x == y,
        (Pattern::Wild, Pattern::Wild) => true,
        (Pattern::Con(c1, p1), Pattern::Con(c2, p2)) => {
            c1 == c2 && p1.len() == p2.len() && p1.iter().zip(p2).all(|(x, y)| pattern_pairs(x, y, out))
        }
        (Pattern::Tuple(p1), Pattern::Tuple(p2)) => {
            p1.len() == p2.len() && p1.iter().zip(p2).all(|(x, y)| pattern_pairs(x, y, out))
        }
        _ => false,
    }
}

/// Replaces, top-down, every instance of `pattern` in `e` by `make(args)`.
pub fn fold_instances(
    e: &Expr,
    pattern: &Expr,
    metas: &[String],
    make: &impl Fn(Vec<Expr>) -> Expr,
    count: &mut usize,
) -> Expr {
    if let Some(args) = match_instance(pattern, metas, e) {
        *count += 1;
        return make(args);
    }
    let mut go = |x: &Expr| fold_instances(x, pattern, metas, make, count);
    match e {
        Expr::App(f, a) => {
            let f = go(f);
            f.app(go(a))
        }
        Expr::Infix(op, l, r) => {
            let l = go(l);
            Expr::infix(*op, l, go(r))
        }
        Expr::Tuple(items) => Expr::Tuple(items.iter().map(go).collect()),
        Expr::Case(s, alts) => {
            let s = go(s);
            Expr::Case(Box::new(s), alts.iter().map(|a| Alt { pat: a.pat.clone(), body: go(&a.body) }).collect())
        }
        Expr::Let(x, v, b) => {
            let v = go(v);
            Expr::Let(x.clone(), Box::new(v), Box::new(go(b)))
        }
        other => other.clone(),
    }
}

/// The expression an application of a definition with these equations to
/// `args` unfolds to. A single equation over variables is β-reduced; other
/// definitions become a `case` over the arguments.
pub fn instantiate(op: &str, name: &str, equations: &[Equation], args: Vec<Expr>) -> RefactorResult<Expr> {
    let arity = equations.first().map_or(0, |e| e.params.len());
    if args.len() < arity {
        return err(
            ErrorKind::NotApplicable,
            format!("{op}: `{name}` takes {arity} argument(s) but is applied to {}", args.len()),
        );
    }
    if equations.iter().any(|e| !e.locals.is_empty()) {
        return err(ErrorKind::NotApplicable, format!("{op}: `{name}` has `where` bindings and cannot be inlined"));
    }
    let mut args = args;
    let rest = args.split_off(arity);
    let simple = equations.len() == 1 && equations[0].params.iter().all(|p| matches!(p, Pattern::Var(_)));
    let body = if simple {
        let eq = &equations[0];
        let map: BTreeMap<String, Expr> = eq
            .params
            .iter()
            .zip(args)
            .map(|(p, a)| match p {
                Pattern::Var(v) => (v.clone(), a),
                _ => unreachable!(),
            })
            .collect();
        substitute_many(&eq.rhs, &map)
    } else {
        if arity == 0 {
            return err(ErrorKind::NotApplicable, format!("{op}: `{name}` has no parameters to match on"));
        }
        let scrutinee = if arity == 1 { args.pop().expect("one argument") } else { Expr::Tuple(args) };
        let alts = equations
            .iter()
            .map(|eq| Alt {
                pat: if arity == 1 { eq.params[0].clone() } else { Pattern::Tuple(eq.params.clone()) },
                body: eq.rhs.clone(),
            })
            .collect();
        Expr::Case(Box::new(scrutinee), alts)
    };
    Ok(body.apply(rest))
}

/// Every local name visible at `path`, from the equation level down.
pub fn in_scope(f: &FunDecl, path: &[usize]) -> Vec<String> {
    let eq = &f.equations[path[0]];
    let mut out = eq.pattern_vars();
    out.extend(eq.locals.iter().map(|l| l.name.clone()));
    out.extend(bound_along(f, path));
    out
}
