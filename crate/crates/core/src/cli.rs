//! Command-line front end. Results go to `out`, diagnostics to `err`.
//!
//! Exit status: 0 on success, 1 when a refactoring or an equivalence check
//! fails, 2 on usage, input or parse errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::corpus::{fixture_files, FIXTURE_NAMES};
use crate::eval::{compare_observations, default_entries, observe_entry_with, EvalOptions};
use crate::lang::ast::Project;
use crate::lang::io::{load_project_dir, write_project_dir};
use crate::refactor::Operation;
use crate::resolve::{project_difference, resolve_project};
use crate::script::{parse_script, run_script, RunOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "viewshift",
    about = "Move programs between function-oriented and constructor-oriented module layouts"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Run a script on a project and write the result.
    Apply {
        script: PathBuf,
        project: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Check observational equivalence with the input after every step.
        #[arg(long)]
        checked: bool,
        /// Comma-separated entries to observe (default: Client's r* bindings).
        #[arg(long, value_delimiter = ',')]
        entries: Option<Vec<String>>,
        /// Write every intermediate project below this directory.
        #[arg(long)]
        snapshots: Option<PathBuf>,
    },
    /// Apply one refactoring: `op <command> <args...> <project> --out <dir>`.
    Op {
        #[arg(required = true, num_args = 2..)]
        words: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Are two projects equal up to renaming of bound variables?
    AlphaEq { left: PathBuf, right: PathBuf },
    /// Do two projects print the same for every entry?
    ObsEq {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_delimiter = ',')]
        entries: Option<Vec<String>>,
    },
    /// Print what an entry outputs.
    Eval {
        project: PathBuf,
        entry: String,
        #[arg(long, default_value_t = EvalOptions::default().step_budget)]
        budget: u64,
    },
    /// Rewrite a project in canonical layout.
    Render {
        project: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Built-in fixtures.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Debug, Subcommand)]
enum CorpusAction {
    /// Write a fixture's files to a directory.
    Extract {
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// List fixture names.
    List,
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn failed(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_FAILED, message: message.into() }
}

fn load(dir: &Path) -> Result<Project, Failure> {
    let p = load_project_dir(dir).map_err(|e| usage(format!("cannot load {}: {e}", dir.display())))?;
    if p.modules.is_empty() {
        return Err(usage(format!("{} contains no modules", dir.display())));
    }
    resolve_project(&p).map_err(|e| usage(format!("{} does not resolve: {e}", dir.display())))?;
    Ok(p)
}

/// Refuses to write over an input directory.
fn check_out(out: &Path, inputs: &[&Path]) -> Result<(), Failure> {
    let canon = |p: &Path| fs::canonicalize(p).ok();
    if let Some(o) = canon(out) {
        if inputs.iter().any(|i| canon(i).as_ref() == Some(&o)) {
            return Err(usage(format!("refusing to overwrite input directory {}", out.display())));
        }
    }
    Ok(())
}

fn save(p: &Project, out: &Path) -> Result<(), Failure> {
    write_project_dir(p, out).map_err(|e| usage(format!("cannot write {}: {e}", out.display())))
}

fn dispatch(verb: Verb, out: &mut dyn Write) -> Result<(), Failure> {
    let mut say = |s: String| {
        let _ = writeln!(out, "{s}");
    };
    match verb {
        Verb::Apply { script, project, out: dir, checked, entries, snapshots } => {
            check_out(&dir, &[&project])?;
            let text =
                fs::read_to_string(&script).map_err(|e| usage(format!("cannot read {}: {e}", script.display())))?;
            let name = script.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let script = parse_script(&name, &text).map_err(|e| usage(e.to_string()))?;
            let start = load(&project)?;
            let options = RunOptions { checked, entries, snapshot_dir: snapshots };
            let (result, log) = run_script(&start, &script, &options);
            say(log.summary().trim_end().to_string());
            if let Some(e) = &log.setup_error {
                return Err(usage(e.clone()));
            }
            save(&result, &dir)?;
            if let Some(rec) = log.failure() {
                return Err(failed(format!(
                    "{name}:{}: step {} ({}) stopped the run; the project after {} step(s) was written to {}",
                    rec.line,
                    rec.index + 1,
                    rec.command,
                    rec.index,
                    dir.display()
                )));
            }
            say(format!("wrote {} module(s) to {}", result.modules.len(), dir.display()));
        }
        Verb::Op { mut words, out: dir } => {
            let project = PathBuf::from(words.pop().expect("at least two words"));
            check_out(&dir, &[&project])?;
            let command = words.remove(0);
            let op = Operation::from_command(&command, &words).map_err(|e| usage(e.to_string()))?;
            let start = load(&project)?;
            let result = op.apply(&start).map_err(|e| failed(e.to_string()))?;
            save(&result, &dir)?;
            say(format!("{command}: wrote {} module(s) to {}", result.modules.len(), dir.display()));
        }
        Verb::AlphaEq { left, right } => {
            let (a, b) = (load(&left)?, load(&right)?);
            match project_difference(&a, &b) {
                None => say("alpha-equivalent".into()),
                Some(d) => {
                    say("not alpha-equivalent".into());
                    return Err(failed(d));
                }
            }
        }
        Verb::ObsEq { left, right, entries } => {
            let (a, b) = (load(&left)?, load(&right)?);
            let entries = entries.unwrap_or_else(|| default_entries(&a));
            let rows = compare_observations(&a, &b, &entries).map_err(|e| failed(e.to_string()))?;
            let mut same = true;
            for (entry, x, y) in rows {
                let mark = if x == y { "same" } else { "DIFFERENT" };
                same &= x == y;
                say(format!("{entry}: {mark} {x:?} {y:?}"));
            }
            if !same {
                return Err(failed("the projects are not observationally equivalent"));
            }
        }
        Verb::Eval { project, entry, budget } => {
            let p = load(&project)?;
            let text = observe_entry_with(&p, &entry, EvalOptions { step_budget: budget })
                .map_err(|e| failed(format!("{entry}: {e}")))?;
            say(text);
        }
        Verb::Render { project, out: dir } => {
            check_out(&dir, &[&project])?;
            let p = load_project_dir(&project).map_err(|e| usage(format!("cannot load {}: {e}", project.display())))?;
            save(&p, &dir)?;
        }
        Verb::Corpus { action: CorpusAction::List } => {
            for n in FIXTURE_NAMES {
                say(n.to_string());
            }
        }
        Verb::Corpus { action: CorpusAction::Extract { name, out: dir } } => {
            let files = fixture_files(&name).map_err(|e| usage(e.to_string()))?;
            for (rel, text) in &files {
                let path = dir.join(rel);
                if let Some(parent) = path.parent() {
                    fs::create_dir_all(parent)
                        .map_err(|e| usage(format!("cannot create {}: {e}", parent.display())))?;
                }
                fs::write(&path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            }
            say(format!("{name}: wrote {} file(s) to {}", files.len(), dir.display()));
        }
    }
    Ok(())
}

/// Runs the command line `args` (program name first) and returns the exit status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.verb, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
