//! The refactoring operations.
//!
//! Every operation takes a project in display form and returns a new one or
//! an error; the input is never modified. Internally an operation works on
//! the qualified form, then the result goes through the same pipeline:
//! missing imports and exports are added, empty unimported modules are
//! dropped, import cycles are rejected, names are minimally qualified again
//! and the project is re-resolved.

mod cases;
mod define;
mod fold;
mod names;
mod ops;
mod util;

use std::fmt;

use thiserror::Error;

use crate::lang::ast::*;
use crate::resolve::{
    check_import_cycles, display_project, drop_empty_modules, ensure_imports, qualify_project, resolve_project,
    ResolveError,
};

pub use cases::{case_to_eq, duplicate_into_comment, rm_comment_before, simplify_case_pattern};
pub use define::{exhibit_function, generalise, generalise_ident, lift_to_top, new_def_fun_app};
pub use fold::{fold_top_level, generative_fold, unfold_instance};
pub use names::{
    clean_imports, move_def, remove_def, remove_local_def, rename_top_level, rm_from_exports, unify_alpha,
};
pub use ops::{CommandError, CommandSpec, Operation, COMMANDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    NameClash,
    NotFound,
    NotApplicable,
    StillUsed,
    PreconditionFailed,
    ImportCycle,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind}: {message}")]
pub struct RefactorError {
    pub kind: ErrorKind,
    pub message: String,
}

impl RefactorError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        RefactorError { kind, message: message.into() }
    }
}

pub type RefactorResult<T> = Result<T, RefactorError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgShapeFlag {
    Curried,
    Tupled,
}

/// What `generalise` abstracts: the pattern variable itself, or the
/// recursive call on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneraliseMode {
    OtherType,
    RecType,
}

pub(crate) fn err<T>(kind: ErrorKind, message: impl Into<String>) -> RefactorResult<T> {
    Err(RefactorError::new(kind, message))
}

fn resolve_failure(op: &str, e: ResolveError) -> RefactorError {
    match e {
        ResolveError::ImportCycle(_) => RefactorError::new(ErrorKind::ImportCycle, format!("{op}: {e}")),
        other => RefactorError::new(ErrorKind::PreconditionFailed, format!("{op}: {other}")),
    }
}

/// Qualified form of the input.
pub(crate) fn prepare(op: &str, project: &Project) -> RefactorResult<Project> {
    qualify_project(project)
        .map_err(|e| RefactorError::new(ErrorKind::PreconditionFailed, format!("{op}: input does not resolve: {e}")))
}

/// Turns a rewritten qualified project back into a checked display project.
pub(crate) fn finish(op: &str, mut project: Project) -> RefactorResult<Project> {
    ensure_imports(&mut project);
    drop_empty_modules(&mut project);
    check_import_cycles(&project).map_err(|e| resolve_failure(op, e))?;
    let shown = display_project(&project);
    resolve_project(&shown).map_err(|e| resolve_failure(op, e))?;
    Ok(shown)
}

pub(crate) fn module<'a>(op: &str, p: &'a Project, m: &str) -> RefactorResult<&'a ModuleDef> {
    p.module(m).ok_or_else(|| RefactorError::new(ErrorKind::NotFound, format!("{op}: no module {m}")))
}

pub(crate) fn module_mut<'a>(op: &str, p: &'a mut Project, m: &str) -> RefactorResult<&'a mut ModuleDef> {
    p.module_mut(m).ok_or_else(|| RefactorError::new(ErrorKind::NotFound, format!("{op}: no module {m}")))
}

pub(crate) fn fun_index(op: &str, p: &Project, m: &str, f: &str) -> RefactorResult<usize> {
    module(op, p, m)?.fun_index(f).ok_or_else(|| {
        RefactorError::new(ErrorKind::NotFound, format!("{op}: `{f}` is not defined at the top level of {m}"))
    })
}

pub(crate) fn fun_mut<'a>(op: &str, p: &'a mut Project, m: &str, f: &str) -> RefactorResult<&'a mut FunDecl> {
    let i = fun_index(op, p, m, f)?;
    Ok(p.modules.get_mut(m).expect("module").decls[i].as_fun_mut().expect("function"))
}

pub(crate) fn check_new_name(op: &str, name: &str) -> RefactorResult<()> {
    if name == "show" || name == "print" {
        return err(ErrorKind::NameClash, format!("{op}: `{name}` is a builtin"));
    }
    if !crate::lang::is_value_ident(name) {
        return err(ErrorKind::NotApplicable, format!("{op}: `{name}` is not a valid identifier"));
    }
    Ok(())
}

/// Every top-level value name in the project.
pub(crate) fn all_top_level_names(p: &Project) -> std::collections::BTreeSet<String> {
    p.modules.values().flat_map(|m| m.value_names().map(str::to_string)).collect()
}
