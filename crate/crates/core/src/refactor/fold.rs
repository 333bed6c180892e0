//! Unfolding definitions into use sites and folding instances back.

use super::util::{bound_along, first_use, fold_instances, instantiate, spine_root};
use super::*;
use crate::lang::parse_decl;
use crate::lang::terms::{free_locals, substitute};
use crate::resolve::walk::RefKind;
use crate::resolve::{expr_at, expr_at_mut, qualify_expr, ModuleScope};

/// Replaces the first occurrence of `d` in `f` (the whole application when
/// `d` is applied) by the definition's body.
pub fn unfold_instance(project: &Project, d: &str, f: &str, m: &str) -> RefactorResult<Project> {
    const OP: &str = "unfold-instance";
    let mut q = prepare(OP, project)?;
    let fi = fun_index(OP, &q, m, f)?;
    let fun = q.modules[m].decls[fi].as_fun().expect("function").clone();
    let local = fun
        .equations
        .iter()
        .enumerate()
        .find_map(|(ei, eq)| eq.locals.iter().find(|l| l.name == d).map(|l| (ei, l.clone())))
        .filter(|_| !d.contains('.'));
    let (root, replacement) = if let Some((ei, def)) = local {
        let target = QName::local(d);
        let path = first_use(&fun, Some(ei), &target)
            .ok_or_else(|| RefactorError::new(ErrorKind::NotFound, format!("{OP}: `{d}` is not used in `{f}`")))?;
        let (root, _) = spine_root(&fun, &path);
        let app = expr_at(&fun, &root).expect("root");
        let args: Vec<Expr> = app.spine().1.into_iter().cloned().collect();
        let recursive = free_locals(&def.body).contains(d);
        let body = if def.params.is_empty() && recursive {
            Expr::Let(d.to_string(), Box::new(def.body.clone()), Box::new(Expr::var(d)))
        } else {
            def.body.clone()
        };
        let mut needed = free_locals(&body);
        for p in &def.params {
            needed.remove(p);
        }
        let inner = bound_along(&fun, &root);
        if let Some(v) = needed.iter().find(|v| inner.contains(v)) {
            return err(ErrorKind::NotApplicable, format!("{OP}: `{v}` is rebound at the use of `{d}`"));
        }
        let equation =
            Equation { params: def.params.iter().cloned().map(Pattern::Var).collect(), rhs: body, locals: Vec::new() };
        (root, instantiate(OP, d, &[equation], args)?)
    } else {
        let target = ModuleScope::new(&q, m)
            .resolve(&QName::parse(d), RefKind::Var)
            .map(|home| QName::global(home, QName::parse(d).ident))
            .map_err(|_| {
                RefactorError::new(ErrorKind::NotFound, format!("{OP}: `{d}` is not defined in the scope of {m}"))
            })?;
        let def = q
            .module(target.module.as_deref().expect("global"))
            .and_then(|md| md.fun(&target.ident))
            .cloned()
            .ok_or_else(|| RefactorError::new(ErrorKind::NotFound, format!("{OP}: `{d}` has no definition")))?;
        let path = first_use(&fun, None, &target)
            .ok_or_else(|| RefactorError::new(ErrorKind::NotFound, format!("{OP}: `{d}` is not used in `{f}`")))?;
        let (root, _) = spine_root(&fun, &path);
        let args: Vec<Expr> = expr_at(&fun, &root).expect("root").spine().1.into_iter().cloned().collect();
        (root, instantiate(OP, d, &def.equations, args)?)
    };
    let decl = q.modules.get_mut(m).expect("module").decls[fi].as_fun_mut().expect("function");
    *expr_at_mut(decl, &root).expect("root") = replacement;
    finish(OP, q)
}

/// Folds every instance of `f`'s right-hand side elsewhere in `m` into a
/// call of `f`.
pub fn fold_top_level(project: &Project, f: &str, m: &str) -> RefactorResult<Project> {
    const OP: &str = "fold-def";
    let mut q = prepare(OP, project)?;
    let fi = fun_index(OP, &q, m, f)?;
    let fun = q.modules[m].decls[fi].as_fun().expect("function").clone();
    let [eq] = fun.equations.as_slice() else {
        return err(ErrorKind::NotApplicable, format!("{OP}: `{f}` must have exactly one equation"));
    };
    let metas: Option<Vec<String>> = eq
        .params
        .iter()
        .map(|p| match p {
            Pattern::Var(v) => Some(v.clone()),
            _ => None,
        })
        .collect();
    let Some(metas) = metas else {
        return err(ErrorKind::NotApplicable, format!("{OP}: the parameters of `{f}` must be variables"));
    };
    if !eq.locals.is_empty() {
        return err(ErrorKind::NotApplicable, format!("{OP}: `{f}` has `where` bindings"));
    }
    if matches!(&eq.rhs, Expr::Var(v) if v.is_local()) {
        return err(ErrorKind::NotApplicable, format!("{OP}: the body of `{f}` is a bare parameter"));
    }
    let head = Expr::global(m, f);
    let make = |args: Vec<Expr>| head.clone().apply(args);
    let mut count = 0;
    let md = q.modules.get_mut(m).expect("module");
    for (j, decl) in md.decls.iter_mut().enumerate() {
        if j == fi {
            continue;
        }
        if let Some(g) = decl.as_fun_mut() {
            for e in &mut g.equations {
                e.rhs = fold_instances(&e.rhs, &eq.rhs, &metas, &make, &mut count);
                for l in &mut e.locals {
                    l.body = fold_instances(&l.body, &eq.rhs, &metas, &make, &mut count);
                }
            }
        }
    }
    if count == 0 {
        return err(ErrorKind::NotApplicable, format!("{OP}: no instance of the body of `{f}` found in {m}"));
    }
    finish(OP, q)
}

/// In a `case` over a tuple, substitutes every position that all
/// alternatives bind to a plain variable and drops it.
fn drop_variable_positions(e: Expr) -> Expr {
    let Expr::Case(scrut, alts) = e else { return e };
    let mut items = match *scrut {
        Expr::Tuple(items) if alts.iter().all(|a| matches!(&a.pat, Pattern::Tuple(ps) if ps.len() == items.len())) => {
            items
        }
        single => {
            if let Some(first) = alts.first() {
                if let Pattern::Var(v) = &first.pat {
                    return substitute(&first.body, v, &single);
                }
            }
            return Expr::Case(Box::new(single), alts);
        }
    };
    let mut alts: Vec<(Vec<Pattern>, Expr)> = alts
        .into_iter()
        .map(|a| match a.pat {
            Pattern::Tuple(ps) => (ps, a.body),
            _ => unreachable!(),
        })
        .collect();
    let mut p = 0;
    while p < items.len() {
        let fv = free_locals(&items[p]);
        let droppable = alts.iter().all(|(ps, _)| {
            matches!(&ps[p], Pattern::Var(_))
                && ps.iter().enumerate().all(|(j, other)| j == p || other.vars().iter().all(|v| !fv.contains(v)))
        });
        if !droppable {
            p += 1;
            continue;
        }
        let item = items.remove(p);
        for (ps, body) in &mut alts {
            let Pattern::Var(v) = ps.remove(p) else { unreachable!() };
            *body = substitute(body, &v, &item);
        }
    }
    match items.len() {
        0 => alts.into_iter().next().map(|(_, b)| b).expect("alternative"),
        1 => Expr::Case(
            Box::new(items.pop().expect("item")),
            alts.into_iter().map(|(mut ps, body)| Alt { pat: ps.pop().expect("pattern"), body }).collect(),
        ),
        _ => Expr::Case(
            Box::new(Expr::Tuple(items)),
            alts.into_iter().map(|(ps, body)| Alt { pat: Pattern::Tuple(ps), body }).collect(),
        ),
    }
}

/// Unfolds the first application of `f` to `k` arguments in `m`, then folds
/// instances of the definition saved in the enclosing declaration's comment
/// back into calls of that definition.
pub fn generative_fold(project: &Project, f: &str, k: usize, m: &str) -> RefactorResult<Project> {
    const OP: &str = "generative-fold";
    let occ = crate::resolve::find_application(project, m, f, k)
        .map_err(|e| RefactorError::new(ErrorKind::NotFound, format!("{OP}: {e}")))?;
    let mut q = prepare(OP, project)?;
    let di = fun_index(OP, &q, m, &occ.decl)?;
    let decl = &q.modules[m].decls[di];
    let Some(comment) = &decl.comment else {
        return err(ErrorKind::NotFound, format!("{OP}: `{}` has no comment holding its definition", occ.decl));
    };
    let saved = parse_decl(&comment.lines.join("\n")).map_err(|e| {
        RefactorError::new(
            ErrorKind::NotFound,
            format!("{OP}: the comment above `{}` is not a definition: {e}", occ.decl),
        )
    })?;
    let saved_eq = match saved.as_fun().map(|g| g.equations.as_slice()) {
        Some([eq]) if eq.locals.is_empty() => eq.clone(),
        _ => {
            return err(
                ErrorKind::NotFound,
                format!("{OP}: the comment above `{}` is not a single-equation definition", occ.decl),
            )
        }
    };
    let g = saved.name().to_string();
    let metas: Vec<String> = saved_eq
        .params
        .iter()
        .map(|p| match p {
            Pattern::Var(v) => Ok(v.clone()),
            _ => err(ErrorKind::NotFound, format!("{OP}: the saved definition of `{g}` must have variable parameters")),
        })
        .collect::<RefactorResult<_>>()?;
    if q.modules[m].fun(&g).is_none() {
        return err(ErrorKind::NotFound, format!("{OP}: the saved definition names `{g}`, which {m} does not define"));
    }
    let pattern = qualify_expr(&q, m, &saved_eq.rhs, &metas).map_err(|e| {
        RefactorError::new(ErrorKind::NotFound, format!("{OP}: the saved definition does not resolve: {e}"))
    })?;

    let fun = decl.as_fun().expect("function").clone();
    let app = expr_at(&fun, &occ.path).expect("application");
    let (head, args) = app.spine();
    let target = head.as_var().cloned().expect("application head");
    let def = target
        .module
        .as_deref()
        .and_then(|home| q.module(home))
        .and_then(|md| md.fun(&target.ident))
        .cloned()
        .ok_or_else(|| RefactorError::new(ErrorKind::NotFound, format!("{OP}: `{f}` has no definition to unfold")))?;
    let args: Vec<Expr> = args.into_iter().cloned().collect();
    let unfolded = drop_variable_positions(instantiate(OP, f, &def.equations, args)?);
    let call = Expr::global(m, g.clone());
    let mut count = 0;
    let folded = fold_instances(&unfolded, &pattern, &metas, &|a| call.clone().apply(a), &mut count);
    if count == 0 {
        return err(
            ErrorKind::NotApplicable,
            format!("{OP}: after unfolding `{f}`, no instance of the saved body of `{g}` remains to fold"),
        );
    }
    let decl = q.modules.get_mut(m).expect("module").decls[di].as_fun_mut().expect("function");
    *expr_at_mut(decl, &occ.path).expect("application") = folded;
    finish(OP, q)
}
