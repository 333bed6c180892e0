//! Random terms for property tests.

use std::collections::BTreeMap;

use proptest::prelude::*;
use viewshift::lang::ast::*;

/// Few names, so shadowing and capture happen often.
pub const POOL: &[&str] = &["a", "b", "x", "y", "z"];

fn local_name() -> impl Strategy<Value = String> {
    prop::sample::select(POOL).prop_map(str::to_string)
}

fn small_int() -> impl Strategy<Value = i64> {
    -3i64..20
}

fn text() -> impl Strategy<Value = String> {
    "[a-z +*\"\\\\]{0,4}"
}

pub fn pattern() -> impl Strategy<Value = Pattern> {
    let leaf = prop_oneof![
        4 => local_name().prop_map(Pattern::Var),
        1 => Just(Pattern::Wild),
        1 => small_int().prop_map(Pattern::Int),
        1 => Just(Pattern::Con(QName::local("Nil"), Vec::new())),
    ];
    leaf.prop_recursive(2, 6, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|p| Pattern::Con(QName::local("Const"), vec![p])),
            prop::collection::vec(inner, 2..=3).prop_map(Pattern::Tuple),
        ]
    })
    .prop_map(linear)
}

/// Replaces repeated variables by wildcards.
fn linear(p: Pattern) -> Pattern {
    fn go(p: Pattern, seen: &mut Vec<String>) -> Pattern {
        match p {
            Pattern::Var(v) if seen.contains(&v) => Pattern::Wild,
            Pattern::Var(v) => {
                seen.push(v.clone());
                Pattern::Var(v)
            }
            Pattern::Con(c, ps) => Pattern::Con(c, ps.into_iter().map(|p| go(p, seen)).collect()),
            Pattern::Tuple(ps) => Pattern::Tuple(ps.into_iter().map(|p| go(p, seen)).collect()),
            other => other,
        }
    }
    go(p, &mut Vec::new())
}

/// Any syntactically valid expression; not necessarily well scoped or typed.
pub fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        3 => local_name().prop_map(Expr::var),
        2 => small_int().prop_map(Expr::Int),
        1 => text().prop_map(Expr::Str),
        1 => prop::sample::select(&["f", "Lib.g", "Lib.f"][..]).prop_map(|n| Expr::Var(QName::parse(n))),
        1 => prop::sample::select(&["Const", "Nil", "Lib.Add"][..]).prop_map(|n| Expr::Con(QName::parse(n))),
        1 => Just(Expr::Builtin(Builtin::Show)),
        1 => Just(Expr::Builtin(Builtin::Print)),
    ];
    leaf.prop_recursive(4, 40, 4, |inner| {
        let op = prop::sample::select(&[BinOp::Add, BinOp::Mul, BinOp::Concat][..]);
        prop_oneof![
            3 => (inner.clone(), inner.clone()).prop_map(|(f, a)| f.app(a)),
            2 => (op, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Expr::infix(op, l, r)),
            1 => prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::Tuple),
            2 => (inner.clone(), prop::collection::vec((pattern(), inner.clone()), 1..=3)).prop_map(|(s, alts)| {
                Expr::Case(Box::new(s), alts.into_iter().map(|(pat, body)| Alt { pat, body }).collect())
            }),
            2 => (local_name(), inner.clone(), inner).prop_map(|(x, v, b)| Expr::Let(x, Box::new(v), Box::new(b))),
        ]
    })
}

/// Closed integer expressions that always evaluate: every variable is bound,
/// a `let` never refers to itself, every `case` ends in a catch-all.
pub fn int_expr() -> impl Strategy<Value = Expr> {
    int_expr_in(Vec::new())
}

/// Like [`int_expr`], but the names in `scope` may occur free.
pub fn int_expr_in(scope: Vec<String>) -> impl Strategy<Value = Expr> {
    let names = prop::sample::select(&["a", "b", "x", "y", "z", "p"][..]).prop_map(Expr::var);
    let leaf = prop_oneof![3 => small_int().prop_map(Expr::Int), 2 => names];
    let tree = leaf.prop_recursive(5, 48, 3, |inner| {
        let int_pat = prop_oneof![small_int().prop_map(Pattern::Int), local_name().prop_map(Pattern::Var), Just(Pattern::Wild)];
        prop_oneof![
            3 => (prop::sample::select(&[BinOp::Add, BinOp::Mul][..]), inner.clone(), inner.clone())
                .prop_map(|(op, l, r)| Expr::infix(op, l, r)),
            3 => (local_name(), inner.clone(), inner.clone()).prop_map(|(x, v, b)| Expr::Let(x, Box::new(v), Box::new(b))),
            2 => (inner.clone(), inner.clone(), prop::collection::vec(((int_pat.clone(), int_pat.clone()), inner.clone()), 0..=2), local_name(), inner.clone())
                .prop_map(|(l, r, alts, y, last)| {
                    let mut alts: Vec<Alt> = alts
                        .into_iter()
                        .map(|((p, q), body)| Alt { pat: linear(Pattern::Tuple(vec![p, q])), body })
                        .collect();
                    alts.push(Alt { pat: Pattern::Tuple(vec![Pattern::Var(y), Pattern::Wild]), body: last });
                    Expr::Case(Box::new(Expr::Tuple(vec![l, r])), alts)
                }),
            1 => (inner.clone(), small_int(), inner.clone(), local_name(), inner).prop_map(|(s, k, hit, y, miss)| {
                Expr::Case(
                    Box::new(s),
                    vec![Alt { pat: Pattern::Int(k), body: hit }, Alt { pat: Pattern::Var(y), body: miss }],
                )
            }),
        ]
    });
    tree.prop_map(move |e| close(&e, &scope))
}

/// Binds free variables to literals and cuts `let` self-reference.
fn close(e: &Expr, scope: &[String]) -> Expr {
    let under = |names: Vec<String>| -> Vec<String> { scope.iter().cloned().chain(names).collect() };
    match e {
        Expr::Var(q) if q.is_local() && !scope.contains(&q.ident) => Expr::Int(q.ident.len() as i64),
        Expr::Let(x, v, b) => {
            let outer: Vec<String> = scope.iter().filter(|s| *s != x).cloned().collect();
            Expr::Let(x.clone(), Box::new(close(v, &outer)), Box::new(close(b, &under(vec![x.clone()]))))
        }
        Expr::Case(s, alts) => Expr::Case(
            Box::new(close(s, scope)),
            alts.iter().map(|a| Alt { pat: a.pat.clone(), body: close(&a.body, &under(a.pat.vars())) }).collect(),
        ),
        Expr::Infix(op, l, r) => Expr::infix(*op, close(l, scope), close(r, scope)),
        Expr::Tuple(items) => Expr::Tuple(items.iter().map(|i| close(i, scope)).collect()),
        Expr::App(f, a) => close(f, scope).app(close(a, scope)),
        other => other.clone(),
    }
}

/// Renames every binder to a fresh `<prefix><n>`, keeping free names.
pub fn rename_binders(e: &Expr, prefix: &str) -> Expr {
    let mut counter = 0;
    go(e, prefix, &BTreeMap::new(), &mut counter)
}

fn fresh(prefix: &str, counter: &mut usize) -> String {
    *counter += 1;
    format!("{prefix}{counter}")
}

fn rename_pattern(p: &Pattern, map: &mut BTreeMap<String, String>, prefix: &str, counter: &mut usize) -> Pattern {
    match p {
        Pattern::Var(v) => {
            let n = fresh(prefix, counter);
            map.insert(v.clone(), n.clone());
            Pattern::Var(n)
        }
        Pattern::Con(c, ps) => {
            Pattern::Con(c.clone(), ps.iter().map(|p| rename_pattern(p, map, prefix, counter)).collect())
        }
        Pattern::Tuple(ps) => Pattern::Tuple(ps.iter().map(|p| rename_pattern(p, map, prefix, counter)).collect()),
        other => other.clone(),
    }
}

fn go(e: &Expr, prefix: &str, map: &BTreeMap<String, String>, counter: &mut usize) -> Expr {
    match e {
        Expr::Var(q) if q.is_local() => Expr::var(map.get(&q.ident).cloned().unwrap_or_else(|| q.ident.clone())),
        Expr::Let(x, v, b) => {
            let n = fresh(prefix, counter);
            let mut inner = map.clone();
            inner.insert(x.clone(), n.clone());
            Expr::Let(n, Box::new(go(v, prefix, &inner, counter)), Box::new(go(b, prefix, &inner, counter)))
        }
        Expr::Case(s, alts) => Expr::Case(
            Box::new(go(s, prefix, map, counter)),
            alts.iter()
                .map(|a| {
                    let mut inner = map.clone();
                    let pat = rename_pattern(&a.pat, &mut inner, prefix, counter);
                    Alt { pat, body: go(&a.body, prefix, &inner, counter) }
                })
                .collect(),
        ),
        Expr::Infix(op, l, r) => Expr::infix(*op, go(l, prefix, map, counter), go(r, prefix, map, counter)),
        Expr::Tuple(items) => Expr::Tuple(items.iter().map(|i| go(i, prefix, map, counter)).collect()),
        Expr::App(f, a) => go(f, prefix, map, counter).app(go(a, prefix, map, counter)),
        other => other.clone(),
    }
}

/// Substitution that ignores capture; correct only when no binder of `e`
/// occurs free in `r`.
pub fn naive_substitute(e: &Expr, x: &str, r: &Expr) -> Expr {
    match e {
        Expr::Var(q) if q.is_local() && q.ident == x => r.clone(),
        Expr::Let(y, _, _) if y == x => e.clone(),
        Expr::Let(y, v, b) => {
            Expr::Let(y.clone(), Box::new(naive_substitute(v, x, r)), Box::new(naive_substitute(b, x, r)))
        }
        Expr::Case(s, alts) => Expr::Case(
            Box::new(naive_substitute(s, x, r)),
            alts.iter()
                .map(|a| Alt {
                    pat: a.pat.clone(),
                    body: if a.pat.vars().iter().any(|v| v == x) {
                        a.body.clone()
                    } else {
                        naive_substitute(&a.body, x, r)
                    },
                })
                .collect(),
        ),
        Expr::Infix(op, l, rr) => Expr::infix(*op, naive_substitute(l, x, r), naive_substitute(rr, x, r)),
        Expr::Tuple(items) => Expr::Tuple(items.iter().map(|i| naive_substitute(i, x, r)).collect()),
        Expr::App(f, a) => naive_substitute(f, x, r).app(naive_substitute(a, x, r)),
        other => other.clone(),
    }
}

/// Body of a one-parameter helper (parameter `p`) and the argument of a
/// call to it.
pub fn helper_and_argument() -> impl Strategy<Value = (Expr, Expr)> {
    (int_expr_in(vec!["p".into()]), int_expr())
}
