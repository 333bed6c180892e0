//! Case-expression restructuring and definition comments.

use std::collections::BTreeSet;

use super::*;
use crate::lang::render::render_decl_body;
use crate::lang::terms::{all_local_names, free_locals, fresh_binder, substitute};

/// Follows `let` bodies down to the first `case`.
fn case_below(e: &mut Expr) -> Option<&mut Expr> {
    match e {
        Expr::Case(..) => Some(e),
        Expr::Let(_, _, body) => case_below(body),
        _ => None,
    }
}

/// Pulls out the first tuple position that every alternative binds to the
/// same variable, turning it into a `let`.
pub fn simplify_case_pattern(project: &Project, f: &str, m: &str) -> RefactorResult<Project> {
    const OP: &str = "simplify-case-pattern";
    let mut q = prepare(OP, project)?;
    let fun = fun_mut(OP, &mut q, m, f)?;
    let Some(node) = fun.equations.iter_mut().find_map(|eq| case_below(&mut eq.rhs)) else {
        return err(ErrorKind::NotApplicable, format!("{OP}: the body of `{f}` has no case expression"));
    };
    let Expr::Case(scrut, alts) = node.clone() else { unreachable!() };
    let Expr::Tuple(mut items) = *scrut else {
        return err(ErrorKind::NotApplicable, format!("{OP}: the case in `{f}` is not over a tuple"));
    };
    let mut rows = Vec::new();
    for a in alts {
        match a.pat {
            Pattern::Tuple(ps) if ps.len() == items.len() => rows.push((ps, a.body)),
            _ => return err(ErrorKind::NotApplicable, format!("{OP}: an alternative in `{f}` is not a tuple pattern")),
        }
    }
    let common = (0..items.len()).find_map(|p| {
        let Pattern::Var(y) = &rows.first()?.0[p] else { return None };
        rows.iter().all(|(ps, _)| matches!(&ps[p], Pattern::Var(v) if v == y)).then(|| (p, y.clone()))
    });
    let Some((p, y)) = common else {
        return err(
            ErrorKind::NotApplicable,
            format!("{OP}: no tuple position in `{f}` binds the same variable in every alternative"),
        );
    };
    let bound = items.remove(p);
    for (ps, _) in &mut rows {
        ps.remove(p);
    }
    let mut clashing: BTreeSet<String> = free_locals(&bound);
    for it in &items {
        clashing.extend(free_locals(it));
    }
    let binder = if clashing.contains(&y) {
        let mut avoid = clashing;
        avoid.extend(all_local_names(&bound));
        for (ps, body) in &rows {
            avoid.extend(all_local_names(body));
            avoid.extend(ps.iter().flat_map(Pattern::vars));
        }
        let fresh = fresh_binder(&y, &avoid);
        for (_, body) in &mut rows {
            *body = substitute(body, &y, &Expr::var(fresh.clone()));
        }
        fresh
    } else {
        y
    };
    let rest = match items.len() {
        0 => rows.into_iter().next().map(|(_, b)| b).expect("alternative"),
        1 => Expr::Case(
            Box::new(items.pop().expect("item")),
            rows.into_iter().map(|(mut ps, body)| Alt { pat: ps.pop().expect("pattern"), body }).collect(),
        ),
        _ => Expr::Case(
            Box::new(Expr::Tuple(items)),
            rows.into_iter().map(|(ps, body)| Alt { pat: Pattern::Tuple(ps), body }).collect(),
        ),
    };
    *node = Expr::Let(binder, Box::new(bound), Box::new(rest));
    finish(OP, q)
}

/// Turns `f x = case x of ...` (or `case (x, y) of ...` when `k` is 2) into
/// one equation per alternative.
pub fn case_to_eq(project: &Project, f: &str, m: &str, k: usize) -> RefactorResult<Project> {
    let op = if k == 2 { "case-to-eq2" } else { "case-to-eq" };
    let mut q = prepare(op, project)?;
    let fun = fun_mut(op, &mut q, m, f)?;
    let [eq] = fun.equations.as_slice() else {
        return err(ErrorKind::NotApplicable, format!("{op}: `{f}` must have exactly one equation"));
    };
    if !eq.locals.is_empty() {
        return err(ErrorKind::NotApplicable, format!("{op}: `{f}` has `where` bindings"));
    }
    let Expr::Case(scrut, alts) = &eq.rhs else {
        return err(ErrorKind::NotApplicable, format!("{op}: the body of `{f}` is not a case expression"));
    };
    let param_pos = |e: &Expr| -> Option<usize> {
        let v = e.as_var().filter(|v| v.is_local())?;
        eq.params.iter().position(|p| matches!(p, Pattern::Var(x) if *x == v.ident))
    };
    let positions: Vec<usize> = match (k, scrut.as_ref()) {
        (1, s) => param_pos(s).into_iter().collect(),
        (2, Expr::Tuple(items)) if items.len() == 2 => items.iter().filter_map(param_pos).collect(),
        _ => Vec::new(),
    };
    if positions.len() != k || (k == 2 && positions[0] == positions[1]) {
        return err(
            ErrorKind::NotApplicable,
            format!("{op}: the case in `{f}` does not scrutinise {k} distinct parameter(s)"),
        );
    }
    let scrutinised: Vec<String> = positions.iter().flat_map(|&i| eq.params[i].vars()).collect();
    let others: BTreeSet<String> =
        eq.params.iter().enumerate().filter(|(i, _)| !positions.contains(i)).flat_map(|(_, p)| p.vars()).collect();
    let mut equations = Vec::new();
    for alt in alts {
        let pats = match (k, &alt.pat) {
            (1, p) => vec![p.clone()],
            (_, Pattern::Tuple(ps)) if ps.len() == 2 => ps.clone(),
            _ => {
                return err(ErrorKind::NotApplicable, format!("{op}: an alternative in `{f}` is not a pair pattern"));
            }
        };
        let free = free_locals(&alt.body);
        if let Some(v) = scrutinised.iter().find(|v| free.contains(*v)) {
            return err(ErrorKind::NotApplicable, format!("{op}: `{v}` is still used inside an alternative"));
        }
        if let Some(v) = pats.iter().flat_map(Pattern::vars).find(|v| others.contains(v)) {
            return err(ErrorKind::NotApplicable, format!("{op}: pattern variable `{v}` clashes with a parameter"));
        }
        let mut params = eq.params.clone();
        for (&i, p) in positions.iter().zip(pats) {
            params[i] = p;
        }
        equations.push(Equation { params, rhs: alt.body.clone(), locals: Vec::new() });
    }
    fun.equations = equations;
    finish(op, q)
}

fn decl_index(op: &str, p: &Project, m: &str, f: &str) -> RefactorResult<usize> {
    module(op, p, m)?.decls.iter().position(|d| d.name() == f).ok_or_else(|| {
        RefactorError::new(ErrorKind::NotFound, format!("{op}: `{f}` is not defined at the top level of {m}"))
    })
}

/// Saves the current definition of `f` in the comment block above it.
pub fn duplicate_into_comment(project: &Project, f: &str, m: &str) -> RefactorResult<Project> {
    const OP: &str = "duplicate-into-comment";
    let q = prepare(OP, project)?;
    let i = decl_index(OP, &q, m, f)?;
    let mut shown = project.clone();
    let decl = &mut shown.modules.get_mut(m).expect("module").decls[i];
    let text = render_decl_body(decl);
    decl.comment = Some(CommentBlock { lines: text.lines().map(str::to_string).collect() });
    finish(OP, prepare(OP, &shown)?)
}

pub fn rm_comment_before(project: &Project, f: &str, m: &str) -> RefactorResult<Project> {
    const OP: &str = "rm-comment-before";
    let mut q = prepare(OP, project)?;
    let i = decl_index(OP, &q, m, f)?;
    let decl = &mut q.modules.get_mut(m).expect("module").decls[i];
    if decl.comment.take().is_none() {
        return err(ErrorKind::NotFound, format!("{OP}: `{f}` has no comment"));
    }
    finish(OP, q)
}
