use std::collections::{BTreeMap, BTreeSet};

use super::ast::*;

/// Variables occurring free in `e`. Qualified references are reported as
/// `M.x`; constructors are not variables.
pub fn free_vars(e: &Expr) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_free(e, &mut Vec::new(), &mut out);
    out
}

/// Unqualified free variables only (the ones a binder could capture).
pub fn free_locals(e: &Expr) -> BTreeSet<String> {
    free_vars(e).into_iter().filter(|v| !v.contains('.')).collect()
}

fn collect_free(e: &Expr, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match e {
        Expr::Var(q) => {
            if q.module.is_some() || !bound.contains(&q.ident) {
                out.insert(q.to_string());
            }
        }
        Expr::Con(_) | Expr::Int(_) | Expr::Str(_) | Expr::Builtin(_) => {}
        Expr::App(f, a) => {
            collect_free(f, bound, out);
            collect_free(a, bound, out);
        }
        Expr::Infix(_, l, r) => {
            collect_free(l, bound, out);
            collect_free(r, bound, out);
        }
        Expr::Tuple(items) => items.iter().for_each(|i| collect_free(i, bound, out)),
        Expr::Case(s, alts) => {
            collect_free(s, bound, out);
            for a in alts {
                let vars = a.pat.vars();
                let n = vars.len();
                bound.extend(vars);
                collect_free(&a.body, bound, out);
                bound.truncate(bound.len() - n);
            }
        }
        Expr::Let(x, v, b) => {
            bound.push(x.clone());
            collect_free(v, bound, out);
            collect_free(b, bound, out);
            bound.pop();
        }
    }
}

/// Every unqualified name appearing in `e`, bound or free.
pub fn all_local_names(e: &Expr) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    walk_names(e, &mut out);
    out
}

fn walk_names(e: &Expr, out: &mut BTreeSet<String>) {
    match e {
        Expr::Var(q) if q.module.is_none() => {
            out.insert(q.ident.clone());
        }
        Expr::Var(_) | Expr::Con(_) | Expr::Int(_) | Expr::Str(_) | Expr::Builtin(_) => {}
        Expr::App(f, a) | Expr::Infix(_, f, a) => {
            walk_names(f, out);
            walk_names(a, out);
        }
        Expr::Tuple(items) => items.iter().for_each(|i| walk_names(i, out)),
        Expr::Case(s, alts) => {
            walk_names(s, out);
            for a in alts {
                out.extend(a.pat.vars());
                walk_names(&a.body, out);
            }
        }
        Expr::Let(x, v, b) => {
            out.insert(x.clone());
            walk_names(v, out);
            walk_names(b, out);
        }
    }
}

/// `<base>_gen`, then `<base>_gen_1`, `<base>_gen_2`, ... : the first not in
/// `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let first = format!("{base}_gen");
    if !avoid.contains(&first) {
        return first;
    }
    (1..).map(|i| format!("{base}_gen_{i}")).find(|n| !avoid.contains(n)).expect("unbounded")
}

/// Primes `base` until it is not in `avoid`; used to rename binders.
pub fn fresh_binder(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

/// Capture-avoiding substitution of `replacement` for the free unqualified
/// variable `name`.
pub fn substitute(e: &Expr, name: &str, replacement: &Expr) -> Expr {
    let mut map = BTreeMap::new();
    map.insert(name.to_string(), replacement.clone());
    substitute_many(e, &map)
}

/// Simultaneous capture-avoiding substitution.
pub fn substitute_many(e: &Expr, map: &BTreeMap<String, Expr>) -> Expr {
    if map.is_empty() {
        return e.clone();
    }
    match e {
        Expr::Var(q) if q.module.is_none() => map.get(&q.ident).cloned().unwrap_or_else(|| e.clone()),
        Expr::Var(_) | Expr::Con(_) | Expr::Int(_) | Expr::Str(_) | Expr::Builtin(_) => e.clone(),
        Expr::App(f, a) => substitute_many(f, map).app(substitute_many(a, map)),
        Expr::Infix(op, l, r) => Expr::infix(*op, substitute_many(l, map), substitute_many(r, map)),
        Expr::Tuple(items) => Expr::Tuple(items.iter().map(|i| substitute_many(i, map)).collect()),
        Expr::Case(s, alts) => {
            let s = substitute_many(s, map);
            let alts = alts
                .iter()
                .map(|a| {
                    let (pat, body) = under_binders(a.pat.vars(), &a.body, map, |renames| {
                        let mut p = a.pat.clone();
                        p.rename_vars(&|v| renames.get(v).cloned());
                        p
                    });
                    Alt { pat, body }
                })
                .collect();
            Expr::Case(Box::new(s), alts)
        }
        Expr::Let(x, v, b) => {
            let inner = restrict(map, std::slice::from_ref(x));
            if inner.is_empty() {
                return e.clone();
            }
            let fv_r = replacement_free(&inner);
            let mut x2 = x.clone();
            let (mut v2, mut b2) = ((**v).clone(), (**b).clone());
            if fv_r.contains(x) {
                let mut avoid = fv_r.clone();
                avoid.extend(all_local_names(v));
                avoid.extend(all_local_names(b));
                avoid.extend(inner.keys().cloned());
                x2 = fresh_binder(x, &avoid);
                let r = Expr::var(x2.clone());
                v2 = substitute(&v2, x, &r);
                b2 = substitute(&b2, x, &r);
            }
            Expr::Let(x2, Box::new(substitute_many(&v2, &inner)), Box::new(substitute_many(&b2, &inner)))
        }
    }
}

fn restrict(map: &BTreeMap<String, Expr>, shadowed: &[String]) -> BTreeMap<String, Expr> {
    map.iter().filter(|(k, _)| !shadowed.contains(k)).map(|(k, v)| (k.clone(), v.clone())).collect()
}

fn replacement_free(map: &BTreeMap<String, Expr>) -> BTreeSet<String> {
    map.values().flat_map(free_locals).collect()
}

/// Substitutes into `body` under the binders `vars`, renaming binders that
/// would capture a free variable of a replacement.
fn under_binders<P>(
    vars: Vec<String>,
    body: &Expr,
    map: &BTreeMap<String, Expr>,
    rebuild: impl FnOnce(&BTreeMap<String, String>) -> P,
) -> (P, Expr) {
    let inner = restrict(map, &vars);
    let fv_r = replacement_free(&inner);
    let mut renames = BTreeMap::new();
    let mut body = body.clone();
    if !inner.is_empty() {
        let mut avoid = fv_r.clone();
        avoid.extend(all_local_names(&body));
        avoid.extend(vars.iter().cloned());
        avoid.extend(inner.keys().cloned());
        for v in &vars {
            if fv_r.contains(v) {
                let fresh = fresh_binder(v, &avoid);
                avoid.insert(fresh.clone());
                body = substitute(&body, v, &Expr::var(fresh.clone()));
                renames.insert(v.clone(), fresh);
            }
        }
    }
    let body = substitute_many(&body, &inner);
    (rebuild(&renames), body)
}

/// Pre-order check for a sub-expression satisfying `pred`.
pub fn any_subexpr(e: &Expr, pred: &mut impl FnMut(&Expr) -> bool) -> bool {
    if pred(e) {
        return true;
    }
    match e {
        Expr::App(f, a) | Expr::Infix(_, f, a) => any_subexpr(f, pred) || any_subexpr(a, pred),
        Expr::Tuple(items) => items.iter().any(|i| any_subexpr(i, pred)),
        Expr::Case(s, alts) => any_subexpr(s, pred) || alts.iter().any(|a| any_subexpr(&a.body, pred)),
        Expr::Let(_, v, b) => any_subexpr(v, pred) || any_subexpr(b, pred),
        Expr::Var(_) | Expr::Con(_) | Expr::Int(_) | Expr::Str(_) | Expr::Builtin(_) => false,
    }
}

/// Bottom-up rewrite of every node.
pub fn map_expr(e: &Expr, f: &mut impl FnMut(Expr) -> Expr) -> Expr {
    let rebuilt = match e {
        Expr::App(g, a) => map_expr(g, f).app(map_expr(a, f)),
        Expr::Infix(op, l, r) => Expr::infix(*op, map_expr(l, f), map_expr(r, f)),
        Expr::Tuple(items) => Expr::Tuple(items.iter().map(|i| map_expr(i, f)).collect()),
        Expr::Case(s, alts) => Expr::Case(
            Box::new(map_expr(s, f)),
            alts.iter().map(|a| Alt { pat: a.pat.clone(), body: map_expr(&a.body, f) }).collect(),
        ),
        Expr::Let(x, v, b) => Expr::Let(x.clone(), Box::new(map_expr(v, f)), Box::new(map_expr(b, f))),
        other => other.clone(),
    };
    f(rebuilt)
}
