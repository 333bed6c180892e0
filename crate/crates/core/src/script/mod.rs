//! Transformation scripts: one refactoring command per line.
//!
//! ```text
//! # comment
//! rename-top-level eval EvalMod fold1
//! #@ checkpoint-name
//! ```
//!
//! Lines starting with `#@` name a checkpoint: the state reached after every
//! step above it. Other `#` lines and blank lines are ignored.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::eval::{compare_observations, default_entries};
use crate::lang::ast::Project;
use crate::lang::io::write_project_dir;
use crate::refactor::{Operation, RefactorError};
use crate::resolve::resolve_project;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefactorStep {
    pub command: String,
    pub args: Vec<String>,
    pub line: usize,
    pub op: Operation,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub name: String,
    pub steps: Vec<RefactorStep>,
    /// Checkpoint label and the number of steps before it.
    pub checkpoints: Vec<(String, usize)>,
}

impl Script {
    pub fn new(name: impl Into<String>, steps: Vec<RefactorStep>) -> Self {
        Script { name: name.into(), steps, checkpoints: Vec::new() }
    }

    /// The steps leading up to checkpoint `label`.
    pub fn prefix(&self, label: &str) -> Option<Script> {
        let &(_, n) = self.checkpoints.iter().find(|(l, _)| l == label)?;
        Some(Script {
            name: format!("{}@{label}", self.name),
            steps: self.steps[..n].to_vec(),
            checkpoints: self.checkpoints.iter().filter(|(_, k)| *k <= n).cloned().collect(),
        })
    }

    pub fn concat(&self, other: &Script) -> Script {
        let offset = self.steps.len();
        let mut checkpoints = self.checkpoints.clone();
        checkpoints.extend(other.checkpoints.iter().map(|(l, k)| (l.clone(), k + offset)));
        Script {
            name: format!("{}+{}", self.name, other.name),
            steps: self.steps.iter().chain(&other.steps).cloned().collect(),
            checkpoints,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut marks = self.checkpoints.iter().peekable();
        for (i, step) in self.steps.iter().enumerate() {
            while let Some((label, _)) = marks.next_if(|(_, k)| *k == i) {
                out.push_str(&format!("#@ {label}\n"));
            }
            out.push_str(&step.op.to_words().join(" "));
            out.push('\n');
        }
        for (label, _) in marks {
            out.push_str(&format!("#@ {label}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{script}:{line}: {message}")]
pub struct ScriptSyntaxError {
    pub script: String,
    pub line: usize,
    pub message: String,
}

pub fn parse_script(name: &str, text: &str) -> Result<Script, ScriptSyntaxError> {
    let mut script = Script::new(name, Vec::new());
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(label) = line.strip_prefix("#@") {
            script.checkpoints.push((label.trim().to_string(), script.steps.len()));
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = line.split_whitespace().map(str::to_string);
        let command = words.next().expect("non-empty line");
        let args: Vec<String> = words.collect();
        let op = Operation::from_command(&command, &args).map_err(|e| ScriptSyntaxError {
            script: name.to_string(),
            line: i + 1,
            message: e.to_string(),
        })?;
        script.steps.push(RefactorStep { command, args, line: i + 1, op });
    }
    Ok(script)
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Compare observations against the starting project after every step.
    pub checked: bool,
    /// Entries to observe; `None` means the default `Client.r*` bindings.
    pub entries: Option<Vec<String>>,
    /// Write every intermediate project to `step-NN` below this directory.
    pub snapshot_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Differs { entry: String, before: String, after: String },
    EvalFailed(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        *self == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Applied,
    Failed(RefactorError),
}

#[derive(Debug, Clone)]
pub struct StepRecord {
    pub index: usize,
    pub command: String,
    pub line: usize,
    pub outcome: StepOutcome,
    pub verdict: Option<Verdict>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default)]
pub struct RunLog {
    pub script: String,
    pub records: Vec<StepRecord>,
    /// Set when a snapshot or the starting project could not be handled.
    pub setup_error: Option<String>,
}

impl RunLog {
    pub fn succeeded(&self) -> bool {
        self.setup_error.is_none()
            && self
                .records
                .iter()
                .all(|r| r.outcome == StepOutcome::Applied && r.verdict.as_ref().is_none_or(Verdict::is_pass))
    }

    pub fn applied(&self) -> usize {
        self.records.iter().filter(|r| r.outcome == StepOutcome::Applied).count()
    }

    /// The record that stopped the run, if any.
    pub fn failure(&self) -> Option<&StepRecord> {
        self.records
            .last()
            .filter(|r| r.outcome != StepOutcome::Applied || r.verdict.as_ref().is_some_and(|v| !v.is_pass()))
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let outcome = match &r.outcome {
                StepOutcome::Applied => "applied".to_string(),
                StepOutcome::Failed(e) => format!("FAILED {e}"),
            };
            let verdict = match &r.verdict {
                None => String::new(),
                Some(Verdict::Pass) => " [equivalent]".into(),
                Some(Verdict::Differs { entry, before, after }) => {
                    format!(" [NOT EQUIVALENT: {entry} was {before:?}, now {after:?}]")
                }
                Some(Verdict::EvalFailed(e)) => format!(" [NOT EQUIVALENT: {e}]"),
            };
            out.push_str(&format!(
                "{:>3} line {:>3} {:<24} {outcome}{verdict} ({:.1?})\n",
                r.index + 1,
                r.line,
                r.command,
                r.elapsed
            ));
        }
        if let Some(e) = &self.setup_error {
            out.push_str(&format!("error: {e}\n"));
        }
        out
    }
}

fn snapshot(dir: &Path, index: usize, p: &Project) -> Result<(), String> {
    let target = dir.join(format!("step-{index:02}"));
    write_project_dir(p, &target).map_err(|e| format!("cannot write snapshot {}: {e}", target.display()))
}

/// Runs the steps in order and stops at the first failure, returning the
/// last project that passed every check.
pub fn run_script(project: &Project, script: &Script, options: &RunOptions) -> (Project, RunLog) {
    let mut log = RunLog { script: script.name.clone(), ..RunLog::default() };
    if let Err(e) = resolve_project(project) {
        log.setup_error = Some(format!("starting project does not resolve: {e}"));
        return (project.clone(), log);
    }
    let entries = options.entries.clone().unwrap_or_else(|| default_entries(project));
    let mut current = project.clone();
    if let Some(dir) = &options.snapshot_dir {
        if let Err(e) = snapshot(dir, 0, &current) {
            log.setup_error = Some(e);
            return (current, log);
        }
    }
    for (index, step) in script.steps.iter().enumerate() {
        let started = Instant::now();
        let result = step.op.apply(&current);
        let mut record = StepRecord {
            index,
            command: step.command.clone(),
            line: step.line,
            outcome: StepOutcome::Applied,
            verdict: None,
            elapsed: Duration::ZERO,
        };
        let next = match result {
            Ok(next) => next,
            Err(e) => {
                record.outcome = StepOutcome::Failed(e);
                record.elapsed = started.elapsed();
                log.records.push(record);
                return (current, log);
            }
        };
        if options.checked {
            let verdict = match compare_observations(project, &next, &entries) {
                Ok(rows) => rows
                    .into_iter()
                    .find(|(_, a, b)| a != b)
                    .map_or(Verdict::Pass, |(entry, before, after)| Verdict::Differs { entry, before, after }),
                Err(e) => Verdict::EvalFailed(e.to_string()),
            };
            let pass = verdict.is_pass();
            record.verdict = Some(verdict);
            if !pass {
                record.elapsed = started.elapsed();
                log.records.push(record);
                return (current, log);
            }
        }
        record.elapsed = started.elapsed();
        log.records.push(record);
        current = next;
        if let Some(dir) = &options.snapshot_dir {
            if let Err(e) = snapshot(dir, index + 1, &current) {
                log.setup_error = Some(e);
                return (current, log);
            }
        }
    }
    (current, log)
}
