//! The object language: syntax tree, parser, canonical renderer and the
//! pure term utilities the refactorings are built from.

pub mod alpha;
pub mod ast;
pub mod io;
mod lexer;
pub mod parser;
pub mod render;
pub mod terms;

use thiserror::Error;

pub use alpha::{alpha_eq, alpha_eq_expr};
pub use ast::*;
pub use parser::{parse_decl, parse_expr, parse_module};
pub use render::{render_decl, render_expr, render_module};
pub use terms::{free_vars, fresh_name, substitute};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{line}:{col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("{line}:1: duplicate top-level binding `{name}`")]
    DuplicateBinding { name: String, line: usize },
}

/// True if `name` can be used as a value binder.
pub fn is_value_ident(name: &str) -> bool {
    let mut chars = name.chars();
    let starts_ok = chars.next().is_some_and(|c| c.is_ascii_lowercase() || c == '_');
    starts_ok
        && name != "_"
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && !lexer::KEYWORDS.contains(&name)
}

/// True if `name` is a valid module name.
pub fn is_module_ident(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_uppercase()) && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}
