//! Name resolution across a project.
//!
//! Scoping follows Haskell: a module sees its own top-level bindings plus
//! everything its imports export. An unqualified name offered by more than
//! one of those sources is ambiguous and must be written `M.x`. Locally bound
//! variables shadow all of them.
//!
//! The refactorings operate on the *qualified* form produced by
//! [`qualify_project`], where every global reference names its home module.
//! [`display_project`] turns that back into the minimally qualified text.

mod occurrences;
pub mod walk;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::lang::alpha::alpha_eq_decl_in;
use crate::lang::ast::*;
use walk::{global_refs, visit_decl, visit_decl_mut, RefKind};

pub use occurrences::{
    deref, expr_at, expr_at_mut, find_application, occurrences_of, unused_imports, walk_paths, OccRef,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("`{name}` is defined more than once in module {module}")]
    DuplicateDefinition { module: String, name: String },
    #[error("`{name}` is not in scope in module {module}")]
    UnresolvedName { module: String, name: String },
    #[error("`{name}` is ambiguous in module {module} (could be {})", candidates.join(" or "))]
    AmbiguousName { module: String, name: String, candidates: Vec<String> },
    #[error("module {module} imports unknown module {import}")]
    UnknownModule { module: String, import: String },
    #[error("import cycle: {}", .0.join(" -> "))]
    ImportCycle(Vec<String>),
    #[error("module {module} exports `{name}`, which it does not define")]
    UnknownExport { module: String, name: String },
    #[error("no application of `{name}` to {arity} argument(s) in module {module}")]
    NoSuchApplication { module: String, name: String, arity: usize },
}

/// Names a module exports: (values, constructors).
fn exported(m: &ModuleDef) -> (BTreeSet<String>, BTreeSet<String>) {
    let values: BTreeSet<String> = m.value_names().map(str::to_string).collect();
    let cons: BTreeSet<String> = m.data_decls().flat_map(|d| d.constructors.iter().map(|c| c.name.clone())).collect();
    match &m.exports {
        None => (values, cons),
        Some(list) => {
            let mut v = BTreeSet::new();
            let mut c = BTreeSet::new();
            for item in list {
                if values.contains(item) {
                    v.insert(item.clone());
                } else if cons.contains(item) {
                    c.insert(item.clone());
                } else if let Some(d) = m.data_decls().find(|d| d.name == *item) {
                    c.extend(d.constructors.iter().map(|k| k.name.clone()));
                }
            }
            (v, c)
        }
    }
}

/// Unqualified names visible in one module, each with the modules that
/// provide it.
#[derive(Debug, Clone, Default)]
pub struct ModuleScope {
    pub module: String,
    pub values: BTreeMap<String, Vec<String>>,
    pub cons: BTreeMap<String, Vec<String>>,
    /// Per importable module, what it offers under `M.x` here.
    qualified: BTreeMap<String, (BTreeSet<String>, BTreeSet<String>)>,
}

impl ModuleScope {
    pub fn new(project: &Project, module: &str) -> Self {
        let mut scope = ModuleScope { module: module.to_string(), ..Default::default() };
        let Some(m) = project.module(module) else { return scope };
        let own = (
            m.value_names().map(str::to_string).collect::<BTreeSet<_>>(),
            m.data_decls().flat_map(|d| d.constructors.iter().map(|c| c.name.clone())).collect::<BTreeSet<_>>(),
        );
        let mut sources = vec![(module.to_string(), own)];
        for imp in &m.imports {
            if imp == module || sources.iter().any(|(n, _)| n == imp) {
                continue;
            }
            if let Some(im) = project.module(imp) {
                sources.push((imp.clone(), exported(im)));
            }
        }
        for (name, (values, cons)) in &sources {
            for v in values {
                scope.values.entry(v.clone()).or_default().push(name.clone());
            }
            for c in cons {
                scope.cons.entry(c.clone()).or_default().push(name.clone());
            }
        }
        scope.qualified = sources.into_iter().collect();
        scope
    }

    fn table(&self, kind: RefKind) -> &BTreeMap<String, Vec<String>> {
        match kind {
            RefKind::Var => &self.values,
            RefKind::Con | RefKind::PatCon => &self.cons,
        }
    }

    /// Modules offering `name` unqualified.
    pub fn candidates(&self, name: &str, kind: RefKind) -> &[String] {
        self.table(kind).get(name).map_or(&[], Vec::as_slice)
    }

    /// Home module of a global reference written as `q` in this module.
    pub fn resolve(&self, q: &QName, kind: RefKind) -> Result<String, ResolveError> {
        match &q.module {
            Some(m) => {
                let ok = self.qualified.get(m).is_some_and(|(v, c)| match kind {
                    RefKind::Var => v.contains(&q.ident),
                    RefKind::Con | RefKind::PatCon => c.contains(&q.ident),
                });
                if ok {
                    Ok(m.clone())
                } else {
                    Err(self.unresolved(q))
                }
            }
            None => match self.candidates(&q.ident, kind) {
                [] => Err(self.unresolved(q)),
                [home] => Ok(home.clone()),
                many => Err(ResolveError::AmbiguousName {
                    module: self.module.clone(),
                    name: q.ident.clone(),
                    candidates: many.iter().map(|m| format!("{m}.{}", q.ident)).collect(),
                }),
            },
        }
    }

    fn unresolved(&self, q: &QName) -> ResolveError {
        ResolveError::UnresolvedName { module: self.module.clone(), name: q.to_string() }
    }
}

/// Rewrites every global reference to carry its home module.
pub fn qualify_project(project: &Project) -> Result<Project, ResolveError> {
    let mut out = project.clone();
    for (name, module) in out.modules.iter_mut() {
        let scope = ModuleScope::new(project, name);
        for decl in &mut module.decls {
            visit_decl_mut(decl, &mut |q, kind, bound| {
                if kind == RefKind::Var && q.module.is_none() && bound.contains(&q.ident) {
                    return Ok(());
                }
                q.module = Some(scope.resolve(q, kind)?);
                Ok(())
            })?;
        }
    }
    Ok(out)
}

/// Qualifies the references in one expression as seen from `module`, with
/// `bound` names treated as local.
pub fn qualify_expr(project: &Project, module: &str, e: &Expr, bound: &[String]) -> Result<Expr, ResolveError> {
    let scope = ModuleScope::new(project, module);
    let mut e = e.clone();
    let mut b = bound.to_vec();
    walk::visit_expr_mut(
        &mut e,
        &mut |q, kind, bound| {
            if kind == RefKind::Var && q.module.is_none() && bound.contains(&q.ident) {
                return Ok(());
            }
            q.module = Some(scope.resolve(q, kind)?);
            Ok(())
        },
        &mut b,
    )?;
    Ok(e)
}

/// Resolves the name of a top-level value as written in `module`
/// (`f` or `M.f`).
pub fn resolve_value(project: &Project, module: &str, name: &str) -> Result<QName, ResolveError> {
    let q = QName::parse(name);
    let scope = ModuleScope::new(project, module);
    let home = scope.resolve(&q, RefKind::Var)?;
    Ok(QName::global(home, q.ident))
}

/// Minimal qualification of a qualified project: a reference is written
/// unqualified when that resolves to the same definition and no local binder
/// hides it.
pub fn display_project(project: &Project) -> Project {
    let mut out = project.clone();
    for (name, module) in out.modules.iter_mut() {
        let scope = ModuleScope::new(project, name);
        for decl in &mut module.decls {
            let _ = visit_decl_mut(decl, &mut |q, kind, bound| {
                if let Some(home) = &q.module {
                    let shadowed = kind == RefKind::Var && bound.contains(&q.ident);
                    if !shadowed && scope.candidates(&q.ident, kind) == std::slice::from_ref(home) {
                        q.module = None;
                    }
                }
                Ok::<(), ()>(())
            });
        }
    }
    out
}

/// Adds the imports and explicit exports a qualified project needs for all
/// of its cross-module references.
pub fn ensure_imports(project: &mut Project) {
    let mut needs: Vec<(String, String, String)> = Vec::new();
    for (name, module) in &project.modules {
        for decl in &module.decls {
            for (q, _) in global_refs(decl) {
                let home = q.module.expect("global");
                if home != *name {
                    needs.push((name.clone(), home, q.ident));
                }
            }
        }
    }
    for (user, home, ident) in needs {
        if let Some(m) = project.module_mut(&user) {
            if !m.imports.contains(&home) {
                m.imports.push(home.clone());
            }
        }
        if let Some(h) = project.module_mut(&home) {
            if let Some(exports) = &mut h.exports {
                if !exports.contains(&ident) {
                    exports.push(ident);
                }
            }
        }
    }
}

/// Removes modules with no declarations that nothing imports.
pub fn drop_empty_modules(project: &mut Project) {
    loop {
        let imported: BTreeSet<String> = project.modules.values().flat_map(|m| m.imports.iter().cloned()).collect();
        let dead: Vec<String> = project
            .modules
            .values()
            .filter(|m| m.decls.is_empty() && !imported.contains(&m.name))
            .map(|m| m.name.clone())
            .collect();
        if dead.is_empty() {
            return;
        }
        for d in dead {
            project.modules.remove(&d);
        }
    }
}

/// Fails with the first import cycle found, if any.
pub fn check_import_cycles(project: &Project) -> Result<(), ResolveError> {
    fn visit(
        project: &Project,
        m: &str,
        stack: &mut Vec<String>,
        done: &mut BTreeSet<String>,
    ) -> Result<(), ResolveError> {
        if let Some(pos) = stack.iter().position(|s| s == m) {
            let mut cycle = stack[pos..].to_vec();
            cycle.push(m.to_string());
            return Err(ResolveError::ImportCycle(cycle));
        }
        if done.contains(m) {
            return Ok(());
        }
        stack.push(m.to_string());
        if let Some(module) = project.module(m) {
            for i in &module.imports {
                visit(project, i, stack, done)?;
            }
        }
        stack.pop();
        done.insert(m.to_string());
        Ok(())
    }
    let mut done = BTreeSet::new();
    for m in project.modules.keys() {
        visit(project, m, &mut Vec::new(), &mut done)?;
    }
    Ok(())
}

/// Where a binding is defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefRef {
    pub module: String,
    pub decl_index: usize,
    /// (equation index, local index) for `where` bindings.
    pub local: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    /// Keys are `M.f` for top-level values and constructors and
    /// `M.f/<equation>/<local>` for `where` bindings.
    pub defs: BTreeMap<String, DefRef>,
    scopes: BTreeMap<String, ModuleScope>,
}

impl SymbolTable {
    pub fn get(&self, key: &str) -> Option<&DefRef> {
        self.defs.get(key)
    }

    /// The definition a top-level value name refers to inside `module`.
    pub fn lookup(&self, module: &str, name: &str) -> Result<&DefRef, ResolveError> {
        let scope = self
            .scopes
            .get(module)
            .ok_or_else(|| ResolveError::UnresolvedName { module: module.to_string(), name: name.to_string() })?;
        let q = QName::parse(name);
        let kind = if q.ident.starts_with(|c: char| c.is_ascii_uppercase()) { RefKind::Con } else { RefKind::Var };
        let home = scope.resolve(&q, kind)?;
        Ok(&self.defs[&format!("{home}.{}", q.ident)])
    }
}

fn dup(module: &str, name: &str) -> ResolveError {
    ResolveError::DuplicateDefinition { module: module.to_string(), name: name.to_string() }
}

fn check_linear(module: &str, names: &[String]) -> Result<(), ResolveError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(dup(module, n));
        }
    }
    Ok(())
}

/// Builds the symbol table, checking imports, exports, duplicate bindings
/// and that every reference resolves unambiguously.
pub fn resolve_project(project: &Project) -> Result<SymbolTable, ResolveError> {
    let mut table = SymbolTable::default();
    for (name, m) in &project.modules {
        for imp in &m.imports {
            if !project.modules.contains_key(imp) {
                return Err(ResolveError::UnknownModule { module: name.clone(), import: imp.clone() });
            }
        }
        for (i, decl) in m.decls.iter().enumerate() {
            let here = DefRef { module: name.clone(), decl_index: i, local: None };
            match &decl.kind {
                DeclKind::Data(d) => {
                    for c in &d.constructors {
                        if table.defs.insert(format!("{name}.{}", c.name), here.clone()).is_some() {
                            return Err(dup(name, &c.name));
                        }
                    }
                }
                DeclKind::Fun(f) => {
                    if table.defs.insert(format!("{name}.{}", f.name), here).is_some() {
                        return Err(dup(name, &f.name));
                    }
                    for (e, eq) in f.equations.iter().enumerate() {
                        check_linear(name, &eq.pattern_vars())?;
                        let locals: Vec<String> = eq.locals.iter().map(|l| l.name.clone()).collect();
                        check_linear(name, &locals)?;
                        for (l, local) in eq.locals.iter().enumerate() {
                            check_linear(name, &local.params)?;
                            table.defs.insert(
                                format!("{name}.{}/{e}/{}", f.name, local.name),
                                DefRef { module: name.clone(), decl_index: i, local: Some((e, l)) },
                            );
                        }
                    }
                    if f.equations.iter().any(|eq| eq.params.len() != f.arity()) {
                        return Err(ResolveError::DuplicateDefinition {
                            module: name.clone(),
                            name: format!("{} (equations of different arity)", f.name),
                        });
                    }
                }
            }
        }
        if let Some(exports) = &m.exports {
            let known = |x: &String| {
                m.value_names().any(|v| v == x) || m.constructor(x).is_some() || m.data_decls().any(|d| d.name == *x)
            };
            if let Some(bad) = exports.iter().find(|x| !known(x)) {
                return Err(ResolveError::UnknownExport { module: name.clone(), name: bad.clone() });
            }
        }
    }
    check_import_cycles(project)?;
    for name in project.modules.keys() {
        let scope = ModuleScope::new(project, name);
        let m = &project.modules[name];
        for decl in &m.decls {
            visit_decl(decl, &mut |q, kind, bound| {
                if kind == RefKind::Var && q.module.is_none() && bound.contains(&q.ident) {
                    return Ok(());
                }
                scope.resolve(q, kind).map(|_| ())
            })?;
            if let DeclKind::Fun(f) = &decl.kind {
                for eq in &f.equations {
                    check_case_linear(name, &eq.rhs)?;
                    for l in &eq.locals {
                        check_case_linear(name, &l.body)?;
                    }
                }
            }
        }
        table.scopes.insert(name.clone(), scope);
    }
    Ok(table)
}

fn check_case_linear(module: &str, e: &Expr) -> Result<(), ResolveError> {
    let mut result = Ok(());
    crate::lang::terms::any_subexpr(e, &mut |node| {
        if let Expr::Case(_, alts) = node {
            for a in alts {
                if let Err(err) = check_linear(module, &a.pat.vars()) {
                    result = Err(err);
                    return true;
                }
            }
        }
        false
    });
    result
}

/// Project α-equivalence: same modules, same imports and exports (as sets),
/// and declarations pairwise α-equivalent by name, ignoring order and
/// comments. Projects that fail to resolve are never equivalent.
pub fn alpha_eq_project(a: &Project, b: &Project) -> bool {
    let (Ok(qa), Ok(qb)) = (qualify_project(a), qualify_project(b)) else { return false };
    if qa.modules.len() != qb.modules.len() {
        return false;
    }
    qa.modules.iter().all(|(name, ma)| {
        let Some(mb) = qb.modules.get(name) else { return false };
        let set = |v: &[String]| v.iter().cloned().collect::<BTreeSet<_>>();
        let exports_eq = match (&ma.exports, &mb.exports) {
            (None, None) => true,
            (Some(x), Some(y)) => set(x) == set(y),
            _ => false,
        };
        exports_eq
            && set(&ma.imports) == set(&mb.imports)
            && ma.decls.len() == mb.decls.len()
            && ma.decls.iter().all(|da| {
                mb.decls
                    .iter()
                    .find(|db| {
                        db.name() == da.name() && std::mem::discriminant(&db.kind) == std::mem::discriminant(&da.kind)
                    })
                    .is_some_and(|db| alpha_eq_decl_in(da, Some(name), db, Some(name)))
            })
    })
}

/// Explains the first difference [`alpha_eq_project`] would find.
pub fn project_difference(a: &Project, b: &Project) -> Option<String> {
    let qa = match qualify_project(a) {
        Ok(p) => p,
        Err(e) => return Some(format!("left project does not resolve: {e}")),
    };
    let qb = match qualify_project(b) {
        Ok(p) => p,
        Err(e) => return Some(format!("right project does not resolve: {e}")),
    };
    let names_a: BTreeSet<_> = qa.modules.keys().collect();
    let names_b: BTreeSet<_> = qb.modules.keys().collect();
    if names_a != names_b {
        return Some(format!("module sets differ: {names_a:?} vs {names_b:?}"));
    }
    for (name, ma) in &qa.modules {
        let mb = &qb.modules[name];
        let set = |v: &[String]| v.iter().cloned().collect::<BTreeSet<_>>();
        if set(&ma.imports) != set(&mb.imports) {
            return Some(format!("{name}: imports differ: {:?} vs {:?}", ma.imports, mb.imports));
        }
        if ma.exports.as_deref().map(set) != mb.exports.as_deref().map(set) {
            return Some(format!("{name}: exports differ"));
        }
        for da in &ma.decls {
            match mb.decls.iter().find(|db| db.name() == da.name()) {
                None => return Some(format!("{name}: `{}` only on the left", da.name())),
                Some(db) if !alpha_eq_decl_in(da, Some(name), db, Some(name)) => {
                    return Some(format!(
                        "{name}: `{}` differs:\n{}---\n{}",
                        da.name(),
                        crate::lang::render::render_decl_body(da),
                        crate::lang::render::render_decl_body(db)
                    ))
                }
                Some(_) => {}
            }
        }
        for db in &mb.decls {
            if !ma.decls.iter().any(|da| da.name() == db.name()) {
                return Some(format!("{name}: `{}` only on the right", db.name()));
            }
        }
    }
    None
}
