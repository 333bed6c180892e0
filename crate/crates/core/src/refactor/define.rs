//! Introducing, abstracting and lifting definitions.

use super::util::{abstract_expr, bound_along, replace_global_in_fun};
use super::*;
use crate::lang::terms::{all_local_names, free_locals, fresh_name, substitute};
use crate::resolve::walk::RefKind;
use crate::resolve::{expr_at, expr_at_mut, walk_paths, ModuleScope};

/// Index of the first equation of `f` whose first constructor pattern is `c`.
fn equation_for(op: &str, f: &FunDecl, c: &str) -> RefactorResult<usize> {
    let c = QName::parse(c);
    f.equations.iter().position(|eq| eq.first_constructor().is_some_and(|(_, k, _)| k.ident == c.ident)).ok_or_else(
        || {
            RefactorError::new(
                ErrorKind::NotFound,
                format!("{op}: `{}` has no equation for constructor {}", f.name, c.ident),
            )
        },
    )
}

/// Names an equation binds at its own level.
fn equation_binders(eq: &Equation) -> Vec<String> {
    let mut out = eq.pattern_vars();
    out.extend(eq.locals.iter().map(|l| l.name.clone()));
    out
}

/// Every unqualified name mentioned anywhere in an equation.
fn equation_names(eq: &Equation) -> std::collections::BTreeSet<String> {
    let mut out: std::collections::BTreeSet<String> = equation_binders(eq).into_iter().collect();
    out.extend(all_local_names(&eq.rhs));
    for l in &eq.locals {
        out.extend(l.params.iter().cloned());
        out.extend(all_local_names(&l.body));
    }
    out
}

/// Makes the right-hand side of `f`'s equation for constructor `c` a new
/// `where` binding `n`.
pub fn exhibit_function(project: &Project, f: &str, c: &str, n: &str, m: &str) -> RefactorResult<Project> {
    const OP: &str = "exhibit-function";
    let mut q = prepare(OP, project)?;
    check_new_name(OP, n)?;
    let fun = fun_mut(OP, &mut q, m, f)?;
    let i = equation_for(OP, fun, c)?;
    let eq = &mut fun.equations[i];
    if equation_binders(eq).iter().any(|b| b == n) {
        return err(ErrorKind::NameClash, format!("{OP}: `{n}` is already bound in the equation of `{f}` for {c}"));
    }
    let body = std::mem::replace(&mut eq.rhs, Expr::var(n));
    eq.locals.push(LocalDef { name: n.to_string(), params: Vec::new(), body });
    finish(OP, q)
}

/// Names the first application of `f` to `k` arguments in `m` with a new
/// `where` binding `new_name` of the enclosing equation.
pub fn new_def_fun_app(project: &Project, f: &str, k: usize, new_name: &str, m: &str) -> RefactorResult<Project> {
    const OP: &str = "new-def-fun-app";
    if k == 0 {
        return err(ErrorKind::NotApplicable, format!("{OP}: an application has at least one argument"));
    }
    check_new_name(OP, new_name)?;
    let occ = crate::resolve::find_application(project, m, f, k)
        .map_err(|e| RefactorError::new(ErrorKind::NotFound, format!("{OP}: {e}")))?;
    let mut q = prepare(OP, project)?;
    let decl = fun_mut(OP, &mut q, m, &occ.decl)?;
    let app = expr_at(decl, &occ.path).expect("application path").clone();
    let inner = bound_along(decl, &occ.path);
    if let Some(v) = free_locals(&app).into_iter().find(|v| inner.contains(v)) {
        return err(
            ErrorKind::NotApplicable,
            format!("{OP}: the application uses `{v}`, which is not visible at the level of the equation"),
        );
    }
    let eq_index = occ.path[0];
    if equation_names(&decl.equations[eq_index]).contains(new_name) {
        return err(ErrorKind::NameClash, format!("{OP}: `{new_name}` is already used in `{}`", decl.name));
    }
    *expr_at_mut(decl, &occ.path).expect("application path") = Expr::var(new_name);
    decl.equations[eq_index].locals.push(LocalDef { name: new_name.to_string(), params: Vec::new(), body: app });
    finish(OP, q)
}

/// Abstracts a constructor argument (or the recursive call on it) out of
/// the `where` binding `local` as a new first parameter `x`.
#[allow(clippy::too_many_arguments)]
pub fn generalise(
    project: &Project,
    f: &str,
    c: &str,
    local: &str,
    m: &str,
    n: usize,
    x: &str,
    shape: ArgShapeFlag,
    mode: GeneraliseMode,
) -> RefactorResult<Project> {
    const OP: &str = "generalise";
    let mut q = prepare(OP, project)?;
    check_new_name(OP, x)?;
    let fun = q.module(m).and_then(|md| md.fun(f)).cloned();
    let Some(fun) = fun else {
        return err(ErrorKind::NotFound, format!("{OP}: `{f}` is not defined at the top level of {m}"));
    };
    let i = equation_for(OP, &fun, c)?;
    let eq = &fun.equations[i];
    let (_, con, args) = eq.first_constructor().expect("constructor equation");
    let con_def = con
        .module
        .as_deref()
        .and_then(|home| q.module(home))
        .and_then(|md| md.data_decls().find(|d| d.constructors.iter().any(|k| k.name == con.ident)).cloned())
        .ok_or_else(|| RefactorError::new(ErrorKind::NotFound, format!("{OP}: unknown constructor {c}")))?;
    let shape_def = &con_def.constructors.iter().find(|k| k.name == con.ident).expect("constructor").args;
    let (sub_patterns, types): (Vec<&Pattern>, &Vec<String>) = match (shape_def, shape, args) {
        (ArgShape::Tupled(types), ArgShapeFlag::Tupled, [Pattern::Tuple(ps)]) => (ps.iter().collect(), types),
        (ArgShape::Curried(types), ArgShapeFlag::Curried, ps) => (ps.iter().collect(), types),
        // A single argument reads the same either way.
        (ArgShape::Curried(types), ArgShapeFlag::Tupled, ps) if types.len() == 1 => (ps.iter().collect(), types),
        _ => {
            return err(
                ErrorKind::NotApplicable,
                format!(
                    "{OP}: the arguments of {c} are not {}",
                    if shape == ArgShapeFlag::Tupled { "tupled" } else { "curried" }
                ),
            )
        }
    };
    if n == 0 || n > sub_patterns.len() {
        return err(ErrorKind::NotFound, format!("{OP}: {c} has no argument {n}"));
    }
    let Pattern::Var(v) = sub_patterns[n - 1] else {
        return err(ErrorKind::NotFound, format!("{OP}: argument {n} of {c} is not bound to a variable"));
    };
    if mode == GeneraliseMode::RecType && types.get(n - 1) != Some(&con_def.name) {
        return err(
            ErrorKind::NotApplicable,
            format!("{OP}: argument {n} of {c} is not of the recursive type {}", con_def.name),
        );
    }
    let Some(li) = eq.locals.iter().position(|l| l.name == local) else {
        return err(ErrorKind::NotFound, format!("{OP}: the equation of `{f}` for {c} has no local `{local}`"));
    };
    let target = match mode {
        GeneraliseMode::OtherType => Expr::var(v.clone()),
        GeneraliseMode::RecType => Expr::global(m, f).app(Expr::var(v.clone())),
    };
    let def = &eq.locals[li];
    if def.params.iter().any(|p| p == x) || all_local_names(&def.body).contains(x) || def.name == x {
        return err(ErrorKind::NameClash, format!("{OP}: `{x}` is already used in `{local}`"));
    }
    let (body, count) = abstract_expr(&def.body, &target, x);
    if count == 0 {
        return err(
            ErrorKind::NotApplicable,
            format!("{OP}: `{}` does not occur in `{local}`", crate::lang::render_expr(&display_target(&target, f))),
        );
    }
    let mut new_eq = eq.clone();
    let def = &mut new_eq.locals[li];
    let mut params = vec![x.to_string()];
    params.extend(def.params.iter().cloned());
    def.params = params;
    def.body = substitute(&body, local, &Expr::var(local).app(Expr::var(x)));
    let use_site = Expr::var(local).app(target);
    new_eq.rhs = substitute(&new_eq.rhs, local, &use_site);
    for (j, l) in new_eq.locals.iter_mut().enumerate() {
        if j != li && !l.params.iter().any(|p| p == local) {
            l.body = substitute(&l.body, local, &use_site);
        }
    }
    let fun = fun_mut(OP, &mut q, m, f)?;
    fun.equations[i] = new_eq;
    finish(OP, q)
}

fn display_target(e: &Expr, f: &str) -> Expr {
    match e {
        Expr::App(_, a) => Expr::var(f).app((**a).clone()),
        other => other.clone(),
    }
}

/// Abstracts the top-level identifier `v` out of `f` as a new first
/// parameter `x`; callers outside `f` pass a new binding `<f>_gen* = v`.
pub fn generalise_ident(project: &Project, f: &str, m: &str, v: &str, x: &str) -> RefactorResult<Project> {
    const OP: &str = "generalise-ident";
    let mut q = prepare(OP, project)?;
    check_new_name(OP, x)?;
    let fi = fun_index(OP, &q, m, f)?;
    let target = ModuleScope::new(&q, m)
        .resolve(&QName::parse(v), RefKind::Var)
        .map(|home| QName::global(home, QName::parse(v).ident))
        .map_err(|_| {
            RefactorError::new(ErrorKind::NotFound, format!("{OP}: `{v}` is not a top-level name visible in {m}"))
        })?;
    let this = QName::global(m, f);
    if target == this {
        return err(ErrorKind::NotApplicable, format!("{OP}: cannot generalise `{f}` over itself"));
    }
    let fun = q.modules[m].decls[fi].as_fun().expect("function").clone();
    let mut uses = 0;
    walk_paths(&fun, &mut |e, _, _| {
        if e.as_var() == Some(&target) {
            uses += 1;
        }
    });
    if uses == 0 {
        return err(ErrorKind::NotFound, format!("{OP}: `{v}` does not occur free in `{f}`"));
    }
    if fun.equations.iter().any(|eq| equation_names(eq).contains(x)) {
        return err(ErrorKind::NameClash, format!("{OP}: `{x}` is already used in `{f}`"));
    }
    let aux = fresh_name(f, &all_top_level_names(&q));
    let mut new_fun = fun.clone();
    for eq in &mut new_fun.equations {
        eq.params.insert(0, Pattern::Var(x.to_string()));
    }
    replace_global_in_fun(&mut new_fun, &target, &Expr::var(x));
    replace_global_in_fun(&mut new_fun, &this, &Expr::Var(this.clone()).app(Expr::var(x)));
    let extra = Expr::Var(this.clone()).app(Expr::global(m, aux.clone()));
    for module in q.modules.values_mut() {
        for (j, decl) in module.decls.iter_mut().enumerate() {
            if module.name == m && j == fi {
                continue;
            }
            if let Some(g) = decl.as_fun_mut() {
                replace_global_in_fun(g, &this, &extra);
            }
        }
    }
    let md = q.modules.get_mut(m).expect("module");
    md.decls[fi] = TopDecl { comment: md.decls[fi].comment.clone(), kind: DeclKind::Fun(new_fun) };
    let aux_decl = FunDecl {
        name: aux,
        equations: vec![Equation { params: Vec::new(), rhs: Expr::Var(target), locals: Vec::new() }],
    };
    md.decls.insert(fi + 1, TopDecl::fun(aux_decl));
    finish(OP, q)
}

/// Moves the `where` binding `d` of `f` to the top level of `m`, passing
/// the variables it captures from the equation as leading parameters.
pub fn lift_to_top(project: &Project, f: &str, d: &str, m: &str) -> RefactorResult<Project> {
    const OP: &str = "lift-def";
    let mut q = prepare(OP, project)?;
    let fun = fun_mut(OP, &mut q, m, f)?.clone();
    let Some((ei, li)) = fun
        .equations
        .iter()
        .enumerate()
        .find_map(|(ei, eq)| eq.locals.iter().position(|l| l.name == d).map(|li| (ei, li)))
    else {
        return err(ErrorKind::NotFound, format!("{OP}: `{f}` has no local definition `{d}`"));
    };
    if q.modules[m].value_names().any(|n| n == d) {
        return err(ErrorKind::NameClash, format!("{OP}: {m} already defines `{d}` at the top level"));
    }
    let eq = &fun.equations[ei];
    let local = &eq.locals[li];
    let level = equation_binders(eq);
    let free = free_locals(&local.body);
    let captured: Vec<String> =
        level.into_iter().filter(|v| v != d && !local.params.contains(v) && free.contains(v)).collect();
    let call = Expr::global(m, d).apply(captured.iter().map(Expr::var));
    let mut params: Vec<Pattern> = captured.iter().cloned().map(Pattern::Var).collect();
    params.extend(local.params.iter().cloned().map(Pattern::Var));
    let lifted = FunDecl {
        name: d.to_string(),
        equations: vec![Equation { params, rhs: substitute(&local.body, d, &call), locals: Vec::new() }],
    };
    let mut new_eq = eq.clone();
    new_eq.locals.remove(li);
    new_eq.rhs = substitute(&new_eq.rhs, d, &call);
    for l in &mut new_eq.locals {
        if !l.params.iter().any(|p| p == d) {
            l.body = substitute(&l.body, d, &call);
        }
    }
    fun_mut(OP, &mut q, m, f)?.equations[ei] = new_eq;
    q.modules.get_mut(m).expect("module").decls.push(TopDecl::fun(lifted));
    finish(OP, q)
}
