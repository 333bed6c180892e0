//! Renaming, moving and removing definitions, and export/import hygiene.

use super::util::{in_scope, local_uses, replace_global_in_fun};
use super::*;
use crate::lang::alpha::alpha_eq_decl_in;
use crate::resolve::walk::global_refs;
use crate::resolve::{unused_imports, walk_paths};

/// Points every reference to `from` anywhere in the project at `to`.
fn retarget(p: &mut Project, from: &QName, to: &QName) {
    let to = Expr::Var(to.clone());
    for md in p.modules.values_mut() {
        for decl in &mut md.decls {
            if let Some(f) = decl.as_fun_mut() {
                replace_global_in_fun(f, from, &to);
            }
        }
    }
}

/// Declarations (other than `skip`) that mention `target`, as `Module.decl`.
fn users(p: &Project, target: &QName, skip: Option<(&str, usize)>) -> Vec<String> {
    let mut out = Vec::new();
    for (name, md) in &p.modules {
        for (i, decl) in md.decls.iter().enumerate() {
            if skip == Some((name.as_str(), i)) {
                continue;
            }
            if global_refs(decl).iter().any(|(q, _)| q == target) {
                out.push(format!("{name}.{}", decl.name()));
            }
        }
    }
    out
}

fn prune_export(md: &mut ModuleDef, name: &str) {
    if let Some(exports) = &mut md.exports {
        exports.retain(|e| e != name);
    }
}

pub fn rename_top_level(project: &Project, f: &str, m: &str, new: &str) -> RefactorResult<Project> {
    const OP: &str = "rename-top-level";
    let mut q = prepare(OP, project)?;
    let fi = fun_index(OP, &q, m, f)?;
    if f == new {
        return Ok(project.clone());
    }
    check_new_name(OP, new)?;
    if q.modules[m].value_names().any(|n| n == new) {
        return err(ErrorKind::NameClash, format!("{OP}: {m} already defines `{new}`"));
    }
    let from = QName::global(m, f);
    for (name, md) in &q.modules {
        for decl in &md.decls {
            let Some(g) = decl.as_fun() else { continue };
            let mut clash = false;
            walk_paths(g, &mut |e, path, _| {
                if matches!(e, Expr::Var(v) if *v == from) && in_scope(g, path).iter().any(|b| b == new) {
                    clash = true;
                }
            });
            if clash {
                return err(
                    ErrorKind::NameClash,
                    format!("{OP}: `{new}` is bound locally where `{f}` is used in {name}.{}", g.name),
                );
            }
        }
    }
    retarget(&mut q, &from, &QName::global(m, new));
    let md = q.modules.get_mut(m).expect("module");
    md.decls[fi].as_fun_mut().expect("function").name = new.to_string();
    if let Some(exports) = &mut md.exports {
        for e in exports.iter_mut().filter(|e| *e == f) {
            *e = new.to_string();
        }
    }
    finish(OP, q)
}

/// Moves `f` from `m` to `target`, creating `target` when it does not exist.
pub fn move_def(project: &Project, f: &str, m: &str, target: &str) -> RefactorResult<Project> {
    const OP: &str = "move-def";
    let mut q = prepare(OP, project)?;
    let fi = fun_index(OP, &q, m, f)?;
    if m == target {
        return err(ErrorKind::NotApplicable, format!("{OP}: `{f}` is already in {m}"));
    }
    match q.module(target) {
        Some(t) if t.value_names().any(|n| n == f) => {
            return err(ErrorKind::NameClash, format!("{OP}: {target} already defines `{f}`"));
        }
        Some(_) => {}
        None => {
            if !crate::lang::is_module_ident(target) {
                return err(ErrorKind::NotApplicable, format!("{OP}: `{target}` is not a valid module name"));
            }
            q.modules.insert(target.to_string(), ModuleDef::new(target));
        }
    }
    let md = q.modules.get_mut(m).expect("module");
    let decl = md.decls.remove(fi);
    prune_export(md, f);
    q.modules.get_mut(target).expect("module").decls.push(decl);
    retarget(&mut q, &QName::global(m, f), &QName::global(target, f));
    finish(OP, q)
}

pub fn remove_def(project: &Project, f: &str, m: &str) -> RefactorResult<Project> {
    const OP: &str = "remove-def";
    let mut q = prepare(OP, project)?;
    let fi = fun_index(OP, &q, m, f)?;
    let used = users(&q, &QName::global(m, f), Some((m, fi)));
    if !used.is_empty() {
        return err(ErrorKind::StillUsed, format!("{OP}: `{f}` is still used in {}", used.join(", ")));
    }
    let md = q.modules.get_mut(m).expect("module");
    md.decls.remove(fi);
    prune_export(md, f);
    finish(OP, q)
}

pub fn remove_local_def(project: &Project, d: &str, f: &str, m: &str) -> RefactorResult<Project> {
    const OP: &str = "remove-local-def";
    let mut q = prepare(OP, project)?;
    let fun = fun_mut(OP, &mut q, m, f)?;
    let Some((ei, li)) = fun
        .equations
        .iter()
        .enumerate()
        .find_map(|(ei, eq)| eq.locals.iter().position(|l| l.name == d).map(|li| (ei, li)))
    else {
        return err(ErrorKind::NotFound, format!("{OP}: `{f}` has no local definition `{d}`"));
    };
    let uses = local_uses(fun, ei, d);
    if uses.iter().any(|path| path[1] != li + 1) {
        return err(ErrorKind::StillUsed, format!("{OP}: `{d}` is still used in `{f}`"));
    }
    fun.equations[ei].locals.remove(li);
    finish(OP, q)
}

pub fn clean_imports(project: &Project, m: &str) -> RefactorResult<Project> {
    const OP: &str = "clean-imports";
    module(OP, project, m)?;
    let unused = unused_imports(project, m)
        .map_err(|e| RefactorError::new(ErrorKind::PreconditionFailed, format!("{OP}: {e}")))?;
    let mut q = prepare(OP, project)?;
    module_mut(OP, &mut q, m)?.imports.retain(|i| !unused.contains(i));
    finish(OP, q)
}

pub fn rm_from_exports(project: &Project, f: &str, m: &str) -> RefactorResult<Project> {
    const OP: &str = "rm-from-exports";
    let mut q = prepare(OP, project)?;
    let md = module(OP, &q, m)?;
    if !md.exports.as_ref().is_some_and(|ex| ex.iter().any(|e| e == f)) {
        return err(ErrorKind::NotFound, format!("{OP}: `{f}` is not in the export list of {m}"));
    }
    let target = QName::global(m, f);
    let used: Vec<String> = users(&q, &target, None).into_iter().filter(|u| !u.starts_with(&format!("{m}."))).collect();
    if !used.is_empty() {
        return err(ErrorKind::StillUsed, format!("{OP}: `{f}` is still used in {}", used.join(", ")));
    }
    prune_export(module_mut(OP, &mut q, m)?, f);
    finish(OP, q)
}

/// Replaces every use of `drop` by `keep` and deletes `drop`; both must be
/// top-level in `m` and equal up to renaming of bound variables.
pub fn unify_alpha(project: &Project, keep: &str, drop: &str, m: &str) -> RefactorResult<Project> {
    const OP: &str = "unify-alpha";
    if keep == drop {
        return err(ErrorKind::NotFound, format!("{OP}: `{keep}` cannot be unified with itself"));
    }
    let mut q = prepare(OP, project)?;
    let ki = fun_index(OP, &q, m, keep)?;
    let di = fun_index(OP, &q, m, drop)?;
    let md = &q.modules[m];
    if !alpha_eq_decl_in(&md.decls[ki], Some(m), &md.decls[di], Some(m)) {
        return err(ErrorKind::PreconditionFailed, format!("{OP}: `{keep}` and `{drop}` are not alpha-equivalent"));
    }
    let md = q.modules.get_mut(m).expect("module");
    md.decls.remove(di);
    prune_export(md, drop);
    retarget(&mut q, &QName::global(m, drop), &QName::global(m, keep));
    finish(OP, q)
}
