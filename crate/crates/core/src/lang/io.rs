//! Projects on disk: a directory of `<Module>.mfn` files.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::ast::{ModuleDef, Project};
use super::{parse_module, render_module, SyntaxError};

pub const EXTENSION: &str = "mfn";

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{error}")]
    Syntax { path: PathBuf, error: SyntaxError },
    #[error("{path}: file declares module `{module}`")]
    NameMismatch { path: PathBuf, module: String },
    #[error("module `{0}` is defined more than once")]
    DuplicateModule(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> LoadError + '_ {
    move |source| LoadError::Io { path: path.to_path_buf(), source }
}

pub fn load_project_dir(dir: &Path) -> Result<Project, LoadError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == EXTENSION))
        .collect();
    paths.sort();
    let mut project = Project::default();
    for path in paths {
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        let module = parse_module(&text).map_err(|error| LoadError::Syntax { path: path.clone(), error })?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
        if stem != module.name {
            return Err(LoadError::NameMismatch { path, module: module.name });
        }
        project.modules.insert(module.name.clone(), module);
    }
    Ok(project)
}

/// Writes every module in canonical form. Existing `.mfn` files in `dir` that
/// do not belong to the project are removed so the directory mirrors it.
pub fn write_project_dir(project: &Project, dir: &Path) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let stale = path.extension().is_some_and(|x| x == EXTENSION)
            && path.file_stem().and_then(|s| s.to_str()).is_some_and(|s| !project.modules.contains_key(s));
        if stale {
            fs::remove_file(path)?;
        }
    }
    for m in project.modules.values() {
        fs::write(dir.join(format!("{}.{EXTENSION}", m.name)), render_module(m))?;
    }
    Ok(())
}

/// Parses several modules concatenated in one text; each starts at a line
/// beginning with `module `.
pub fn parse_bundle(text: &str) -> Result<Project, LoadError> {
    let mut chunks: Vec<(usize, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.starts_with("module ") || chunks.is_empty() {
            chunks.push((i, String::new()));
        }
        let chunk = &mut chunks.last_mut().expect("chunk").1;
        chunk.push_str(line);
        chunk.push('\n');
    }
    let mut project = Project::default();
    for (offset, chunk) in chunks {
        if chunk.trim().is_empty() {
            continue;
        }
        let module: ModuleDef = parse_module(&chunk).map_err(|error| LoadError::Syntax {
            path: PathBuf::from("<bundle>"),
            error: match error {
                SyntaxError::Parse { line, col, message } => SyntaxError::Parse { line: line + offset, col, message },
                SyntaxError::DuplicateBinding { name, line } => {
                    SyntaxError::DuplicateBinding { name, line: line + offset }
                }
            },
        })?;
        if project.modules.contains_key(&module.name) {
            return Err(LoadError::DuplicateModule(module.name));
        }
        project.modules.insert(module.name.clone(), module);
    }
    Ok(project)
}

pub fn render_bundle(project: &Project) -> String {
    project.modules.values().map(render_module).collect::<Vec<_>>().join("\n")
}
