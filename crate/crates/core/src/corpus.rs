//! Fixtures shipped with the crate: the two architectures of the expression
//! program, the transformation scripts between them, the expected
//! intermediate states of the forward run, and two evolution scenarios.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::lang::io::parse_bundle;
use crate::lang::{parse_module, Project};
use crate::script::{parse_script, Script};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}` (known: {})", FIXTURE_NAMES.join(", "))]
    Unknown(String),
}

pub const FIXTURE_NAMES: &[&str] =
    &["pfun", "pdata", "forward-script", "reverse-script", "step-states", "scenario-mult", "scenario-derive"];

/// Observation expected from every corpus entry.
pub const EXPECTED_OBSERVATIONS: &[(&str, &str)] = &[("r1", "1+2"), ("r2", "3"), ("r3", "1+2+3"), ("r4", "6")];

const PFUN: &[&str] = &[
    include_str!("../corpus/pfun/Expr.mfn"),
    include_str!("../corpus/pfun/EvalMod.mfn"),
    include_str!("../corpus/pfun/ToStringMod.mfn"),
    include_str!("../corpus/pfun/Client.mfn"),
];

const PDATA: &[&str] = &[
    include_str!("../corpus/pdata/Expr.mfn"),
    include_str!("../corpus/pdata/ConstMod.mfn"),
    include_str!("../corpus/pdata/AddMod.mfn"),
    include_str!("../corpus/pdata/Client.mfn"),
];

pub const FORWARD_SCRIPT: &str = include_str!("../corpus/scripts/forward.vs");
pub const REVERSE_SCRIPT: &str = include_str!("../corpus/scripts/reverse.vs");

const STEP_STATES: &[&str] = &[
    include_str!("../corpus/step-states/step-01.mfp"),
    include_str!("../corpus/step-states/step-02.mfp"),
    include_str!("../corpus/step-states/step-03.mfp"),
    include_str!("../corpus/step-states/step-04.mfp"),
    include_str!("../corpus/step-states/step-05.mfp"),
    include_str!("../corpus/step-states/step-06.mfp"),
    include_str!("../corpus/step-states/step-07.mfp"),
    include_str!("../corpus/step-states/step-08.mfp"),
    include_str!("../corpus/step-states/step-09.mfp"),
    include_str!("../corpus/step-states/step-10.mfp"),
    include_str!("../corpus/step-states/step-11.mfp"),
];

const MULT_PDATA: &str = include_str!("../corpus/scenario-mult/pdata.mfp");
const MULT_PFUN: &str = include_str!("../corpus/scenario-mult/pfun.mfp");
const MULT_SCRIPT: &str = include_str!("../corpus/scenario-mult/reverse.vs");
const DERIVE_PFUN: &str = include_str!("../corpus/scenario-derive/pfun.mfp");
const DERIVE_PDATA: &str = include_str!("../corpus/scenario-derive/pdata.mfp");
const DERIVE_SCRIPT: &str = include_str!("../corpus/scenario-derive/forward.vs");

fn modules(texts: &[&str]) -> Project {
    Project::new(texts.iter().map(|t| parse_module(t).expect("corpus module parses")))
}

fn bundle(text: &str) -> Project {
    parse_bundle(text).expect("corpus bundle parses")
}

fn script(name: &str, text: &str) -> Script {
    parse_script(name, text).expect("corpus script parses")
}

pub fn pfun() -> Project {
    modules(PFUN)
}

pub fn pdata() -> Project {
    modules(PDATA)
}

pub fn forward_script() -> Script {
    script("forward", FORWARD_SCRIPT)
}

pub fn reverse_script() -> Script {
    script("reverse", REVERSE_SCRIPT)
}

/// Expected projects after each of the eleven forward steps for `eval`.
pub fn step_states() -> Vec<Project> {
    STEP_STATES.iter().map(|t| bundle(t)).collect()
}

/// An evolution scenario: a project changed in its convenient view, the
/// script converting it to the other view, and the expected result.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub start: Project,
    pub script: Script,
    pub expected: Project,
    pub observations: BTreeMap<String, String>,
}

fn observations(extra: &[(&str, &str)]) -> BTreeMap<String, String> {
    EXPECTED_OBSERVATIONS.iter().chain(extra).map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

/// `Mult` added as a new constructor module in the data view.
pub fn scenario_mult() -> Scenario {
    Scenario {
        start: bundle(MULT_PDATA),
        script: script("scenario-mult", MULT_SCRIPT),
        expected: bundle(MULT_PFUN),
        observations: observations(&[("r5", "6"), ("r6", "2*3")]),
    }
}

/// `size` added as a new function module in the function view.
pub fn scenario_derive() -> Scenario {
    Scenario {
        start: bundle(DERIVE_PFUN),
        script: script("scenario-derive", DERIVE_SCRIPT),
        expected: bundle(DERIVE_PDATA),
        observations: observations(&[("r5", "3"), ("r6", "5")]),
    }
}

#[derive(Debug, Clone)]
pub enum Fixture {
    Project(Project),
    Script(Script),
    Steps(Vec<Project>),
    Scenario(Box<Scenario>),
}

pub fn load_fixture(name: &str) -> Result<Fixture, FixtureError> {
    Ok(match name {
        "pfun" => Fixture::Project(pfun()),
        "pdata" => Fixture::Project(pdata()),
        "forward-script" => Fixture::Script(forward_script()),
        "reverse-script" => Fixture::Script(reverse_script()),
        "step-states" => Fixture::Steps(step_states()),
        "scenario-mult" => Fixture::Scenario(Box::new(scenario_mult())),
        "scenario-derive" => Fixture::Scenario(Box::new(scenario_derive())),
        other => return Err(FixtureError::Unknown(other.to_string())),
    })
}

/// Raw files of a fixture, as `(relative path, contents)`, for extraction.
pub fn fixture_files(name: &str) -> Result<Vec<(String, String)>, FixtureError> {
    use crate::lang::io::render_bundle;
    use crate::lang::render_module;
    let project_files = |p: &Project| -> Vec<(String, String)> {
        p.modules.values().map(|m| (format!("{}.mfn", m.name), render_module(m))).collect()
    };
    Ok(match name {
        "pfun" => project_files(&pfun()),
        "pdata" => project_files(&pdata()),
        "forward-script" => vec![("forward.vs".into(), FORWARD_SCRIPT.into())],
        "reverse-script" => vec![("reverse.vs".into(), REVERSE_SCRIPT.into())],
        "step-states" => step_states()
            .iter()
            .enumerate()
            .flat_map(|(i, p)| {
                p.modules.values().map(move |m| (format!("step-{:02}/{}.mfn", i + 1, m.name), render_module(m)))
            })
            .collect(),
        "scenario-mult" | "scenario-derive" => {
            let s = if name == "scenario-mult" { scenario_mult() } else { scenario_derive() };
            let script_text = if name == "scenario-mult" { MULT_SCRIPT } else { DERIVE_SCRIPT };
            let mut files: Vec<(String, String)> =
                project_files(&s.start).into_iter().map(|(p, t)| (format!("start/{p}"), t)).collect();
            files.extend(project_files(&s.expected).into_iter().map(|(p, t)| (format!("expected/{p}"), t)));
            files.push(("script.vs".into(), script_text.into()));
            files.push(("expected.mfp".into(), render_bundle(&s.expected)));
            files
        }
        other => return Err(FixtureError::Unknown(other.to_string())),
    })
}
