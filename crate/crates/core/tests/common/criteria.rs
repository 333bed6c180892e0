//! The end-to-end checks, each returning a description of the first problem.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use viewshift::corpus::{self, Scenario, EXPECTED_OBSERVATIONS};
use viewshift::eval::{compare_observations, observe_entries};
use viewshift::lang::ast::Project;
use viewshift::lang::render_module;
use viewshift::resolve::{project_difference, resolve_project};
use viewshift::script::{run_script, RunLog, RunOptions, Script, Verdict};

use super::preconditions::{check, REFUSALS};
use super::{bundle, canonical, props};

pub type Check = fn() -> Result<(), String>;

pub const CRITERIA: &[(&str, Check)] = &[
    ("forward script turns the function view into the data view in under a second", forward_golden),
    ("reverse script turns the data view into the function view", reverse_golden),
    ("forward then reverse, and reverse then forward, return to the start", round_trips),
    ("every step of both scripts keeps r1 to r4 printing the same, and a mutant is caught", stepwise_equivalence),
    ("the eleven recorded eval states are reproduced step by step", step_states),
    ("every refused refactoring reports its kind and leaves the project untouched", refusals),
    ("new constructor and new function scenarios stay modular and convert", scenarios),
    ("property suites hold on 100 generated cases each", properties),
];

pub const ENTRIES: [&str; 4] = ["r1", "r2", "r3", "r4"];

pub fn entries() -> Vec<String> {
    ENTRIES.iter().map(|e| e.to_string()).collect()
}

/// Runs a script unchecked and requires every step to apply.
pub fn run_all(start: &Project, script: &Script) -> Result<(Project, RunLog), String> {
    let (out, log) = run_script(start, script, &RunOptions::default());
    if !log.succeeded() || log.applied() != script.steps.len() {
        return Err(format!("{} did not run to completion:\n{}", script.name, log.summary()));
    }
    Ok((out, log))
}

pub fn same(label: &str, got: &Project, expected: &Project) -> Result<(), String> {
    match project_difference(got, expected) {
        None => Ok(()),
        Some(d) => Err(format!("{label}: {d}\n{}", canonical(got))),
    }
}

pub fn forward_golden() -> Result<(), String> {
    let script = corpus::forward_script();
    let started = Instant::now();
    let (out, _) = run_all(&corpus::pfun(), &script)?;
    let elapsed = started.elapsed();
    same("forward result", &out, &corpus::pdata())?;
    if script.steps.len() < 24 {
        return Err(format!("forward script has only {} steps", script.steps.len()));
    }
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("forward run took {elapsed:?}"));
    }
    Ok(())
}

pub fn reverse_golden() -> Result<(), String> {
    let (out, _) = run_all(&corpus::pdata(), &corpus::reverse_script())?;
    same("reverse result", &out, &corpus::pfun())
}

pub fn round_trips() -> Result<(), String> {
    let (fwd, rev) = (corpus::forward_script(), corpus::reverse_script());
    let (data, _) = run_all(&corpus::pfun(), &fwd)?;
    let (back, _) = run_all(&data, &rev)?;
    same("forward then reverse", &back, &corpus::pfun())?;
    let (fun, _) = run_all(&corpus::pdata(), &rev)?;
    let (again, _) = run_all(&fun, &fwd)?;
    same("reverse then forward", &again, &corpus::pdata())
}

/// `pfun` with the constant case of `eval` off by one.
pub fn mutant() -> Project {
    let text = canonical(&corpus::pfun());
    let changed = text.replace("eval (Const i) = i\n", "eval (Const i) = i + 1\n");
    assert_ne!(text, changed, "mutation site not found");
    bundle(&changed)
}

pub fn checked_run(start: &Project, script: &Script) -> Result<(), String> {
    let options = RunOptions { checked: true, entries: Some(entries()), snapshot_dir: None };
    let (_, log) = run_script(start, script, &options);
    if log.records.len() != script.steps.len() {
        return Err(format!("{} stopped early:\n{}", script.name, log.summary()));
    }
    for r in &log.records {
        if r.verdict != Some(Verdict::Pass) {
            return Err(format!("{} step {} ({}): {:?}", script.name, r.index + 1, r.command, r.verdict));
        }
    }
    Ok(())
}

pub fn stepwise_equivalence() -> Result<(), String> {
    let expected: BTreeMap<String, String> =
        EXPECTED_OBSERVATIONS.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    for (name, p) in [("pfun", corpus::pfun()), ("pdata", corpus::pdata())] {
        let seen = observe_entries(&p, &entries()).map_err(|e| format!("{name}: {e}"))?;
        if seen != expected {
            return Err(format!("{name} prints {seen:?}"));
        }
    }
    checked_run(&corpus::pfun(), &corpus::forward_script())?;
    checked_run(&corpus::pdata(), &corpus::reverse_script())?;

    let rows = compare_observations(&corpus::pfun(), &mutant(), &entries()).map_err(|e| e.to_string())?;
    let differing: Vec<&str> = rows.iter().filter(|(_, a, b)| a != b).map(|(e, _, _)| e.as_str()).collect();
    if !differing.contains(&"r2") {
        return Err(format!("mutant not caught on r2: {rows:?}"));
    }
    // The mutation survives conversion, and the converted mutant is told apart too.
    let (converted, _) = run_all(&mutant(), &corpus::forward_script())?;
    let rows = compare_observations(&corpus::pdata(), &converted, &entries()).map_err(|e| e.to_string())?;
    if rows.iter().all(|(_, a, b)| a == b) {
        return Err("converted mutant not caught".into());
    }
    Ok(())
}

pub fn step_states() -> Result<(), String> {
    let script = corpus::forward_script();
    let states = corpus::step_states();
    if states.len() != 11 {
        return Err(format!("{} step states", states.len()));
    }
    for (k, expected) in states.iter().enumerate() {
        let label = format!("eval-step-{}", k + 1);
        let prefix = script.prefix(&label).ok_or_else(|| format!("no checkpoint {label}"))?;
        let (got, _) = run_all(&corpus::pfun(), &prefix)?;
        same(&label, &got, expected)?;
        for module in ["EvalMod", "Client"] {
            let render = |p: &Project| p.module(module).map(render_module);
            if render(&got) != render(expected) {
                return Err(format!("{label}: {module} renders differently"));
            }
        }
    }
    let text = |k: usize| canonical(&states[k - 1]);
    if !text(4).contains("eval a c (Const i) = c i\n") {
        return Err("step 4 lacks `eval a c (Const i) = c i`".into());
    }
    if !text(7).contains("r4 = print (show (eval e2))\n") {
        return Err("step 7 lacks `r4 = print (show (eval e2))`".into());
    }
    Ok(())
}

pub fn refusals() -> Result<(), String> {
    if REFUSALS.len() < 25 {
        return Err(format!("only {} refusal cases", REFUSALS.len()));
    }
    for r in REFUSALS {
        check(r)?;
    }
    if !REFUSALS.iter().any(|r| r.name == "rename_onto_existing_definition") {
        return Err("rename name-clash case missing".into());
    }
    Ok(())
}

/// Modules of `start` that also exist in `origin` and differ from it.
pub fn touched(origin: &Project, start: &Project, modules: &[&str]) -> Vec<String> {
    modules
        .iter()
        .filter(|m| origin.module(m).map(render_module) != start.module(m).map(render_module))
        .map(|m| m.to_string())
        .collect()
}

pub fn scenario(
    name: &str,
    s: &Scenario,
    origin: &Project,
    untouched: &[&str],
    handlers: &[&str],
) -> Result<(), String> {
    resolve_project(&s.start).map_err(|e| format!("{name} start: {e}"))?;
    let changed = touched(origin, &s.start, untouched);
    if !changed.is_empty() {
        return Err(format!("{name}: adding the extension changed {changed:?}"));
    }
    let entries: Vec<String> = s.observations.keys().cloned().collect();
    let (out, _) = run_all(&s.start, &s.script)?;
    same(name, &out, &s.expected)?;
    for (label, p) in [("start", &s.start), ("result", &out)] {
        let seen = observe_entries(p, &entries).map_err(|e| format!("{name} {label}: {e}"))?;
        if seen != s.observations {
            return Err(format!("{name} {label} prints {seen:?}"));
        }
    }
    for h in handlers {
        if out.module(h).is_none() {
            return Err(format!("{name}: result has no module {h}"));
        }
    }
    Ok(())
}

pub fn scenarios() -> Result<(), String> {
    let mult = corpus::scenario_mult();
    scenario("mult", &mult, &corpus::pdata(), &["ConstMod", "AddMod"], &["EvalMod", "ToStringMod"])?;
    for m in ["EvalMod", "ToStringMod"] {
        let text = render_module(mult.expected.module(m).expect("module"));
        if !text.contains("(Mult (") {
            return Err(format!("{m} has no Mult case"));
        }
    }
    if mult.observations.get("r5").map(String::as_str) != Some("6") {
        return Err("Mult (Const 2, Const 3) should evaluate to 6".into());
    }
    let derive = corpus::scenario_derive();
    scenario("size", &derive, &corpus::pfun(), &["EvalMod", "ToStringMod"], &["ConstMod", "AddMod"])?;
    for m in ["ConstMod", "AddMod"] {
        if derive.expected.module(m).and_then(|md| md.fun("size")).is_none() {
            return Err(format!("{m} has no size case"));
        }
    }
    Ok(())
}

pub fn properties() -> Result<(), String> {
    for (name, property) in props::ALL {
        property(100).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}
