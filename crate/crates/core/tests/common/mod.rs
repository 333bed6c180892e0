#![allow(dead_code)]

pub mod criteria;
pub mod gen;
pub mod preconditions;
pub mod props;

use viewshift::lang::ast::Project;
use viewshift::lang::io::{parse_bundle, render_bundle};

pub fn bundle(text: &str) -> Project {
    parse_bundle(text).unwrap_or_else(|e| panic!("test bundle does not parse: {e}\n{text}"))
}

/// Canonical text of a project, for bit-identical comparisons.
pub fn canonical(p: &Project) -> String {
    render_bundle(p)
}
