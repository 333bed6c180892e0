//! Generative properties, each runnable with a chosen number of cases.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use viewshift::corpus;
use viewshift::eval::{evaluate, observe_entries};
use viewshift::lang::ast::*;
use viewshift::lang::{alpha_eq_expr, free_vars, parse_expr, parse_module, render_expr, render_module, substitute};
use viewshift::refactor::{clean_imports, fold_top_level, move_def, rename_top_level, unfold_instance};
use viewshift::resolve::{alpha_eq_project, qualify_project};

use super::gen::{expr, helper_and_argument, int_expr, naive_substitute, pattern, rename_binders, POOL};
use super::{bundle, canonical, oracle};

pub type Property = fn(u32) -> Result<(), String>;

/// Every property, by name.
pub const ALL: &[(&str, Property)] = &[
    ("alpha_eq_is_reflexive", alpha_reflexive),
    ("alpha_eq_is_symmetric", alpha_symmetric),
    ("alpha_eq_is_transitive", alpha_transitive),
    ("expressions_survive_render_then_parse", expr_round_trip),
    ("rendered_text_is_a_fixed_point", text_round_trip),
    ("modules_survive_render_then_parse", module_round_trip),
    ("substituting_a_variable_for_itself_changes_nothing", substitute_identity),
    ("substitution_adds_only_free_names_of_the_replacement", substitute_free_vars),
    ("substitution_avoids_capture", substitute_avoids_capture),
    ("need_and_name_agree_on_generated_programs", need_agrees_with_name),
    ("need_and_name_agree_on_corpus_entries", corpus_agrees_with_oracle),
    ("fold_undoes_unfold", fold_after_unfold),
    ("rename_back_restores_the_project", rename_inverse),
    ("move_back_restores_the_project", move_inverse),
];

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn alpha_reflexive(cases: u32) -> Result<(), String> {
    run(cases, expr(), |e| {
        prop_assert!(alpha_eq_expr(&e, &e));
        Ok(())
    })
}

/// A term and either a binder-renamed copy of it or an unrelated term.
fn pair() -> impl Strategy<Value = (Expr, Expr)> {
    prop_oneof![
        expr().prop_map(|e| {
            let r = rename_binders(&e, "u");
            (e, r)
        }),
        (expr(), expr()),
    ]
}

fn alpha_symmetric(cases: u32) -> Result<(), String> {
    run(cases, pair(), |(a, b)| {
        prop_assert_eq!(alpha_eq_expr(&a, &b), alpha_eq_expr(&b, &a));
        if rename_binders(&a, "u") == b {
            prop_assert!(alpha_eq_expr(&a, &b));
        }
        Ok(())
    })
}

fn alpha_transitive(cases: u32) -> Result<(), String> {
    let triple = prop_oneof![
        expr().prop_map(|a| {
            let b = rename_binders(&a, "u");
            let c = rename_binders(&b, "v");
            (a, b, c)
        }),
        (expr(), expr(), expr()),
    ];
    run(cases, triple, |(a, b, c)| {
        if alpha_eq_expr(&a, &b) && alpha_eq_expr(&b, &c) {
            prop_assert!(alpha_eq_expr(&a, &c));
        }
        if rename_binders(&rename_binders(&a, "u"), "v") == c {
            prop_assert!(alpha_eq_expr(&a, &c));
        }
        Ok(())
    })
}

fn expr_round_trip(cases: u32) -> Result<(), String> {
    run(cases, expr(), |e| {
        let text = render_expr(&e);
        let back = parse_expr(&text).map_err(|err| TestCaseError::fail(format!("{err} in {text}")))?;
        prop_assert_eq!(back, e, "{}", text);
        Ok(())
    })
}

fn text_round_trip(cases: u32) -> Result<(), String> {
    run(cases, expr(), |e| {
        let text = render_expr(&e);
        let again = render_expr(&parse_expr(&text).map_err(|err| TestCaseError::fail(err.to_string()))?);
        prop_assert_eq!(again, text);
        Ok(())
    })
}

fn local_def() -> impl Strategy<Value = LocalDef> {
    let name = prop::sample::select(&["h", "k", "go"][..]).prop_map(str::to_string);
    let params = prop::collection::vec(prop::sample::select(POOL).prop_map(str::to_string), 0..=2);
    (name, params, expr()).prop_map(|(name, mut params, body)| {
        params.dedup();
        LocalDef { name, params, body }
    })
}

fn fun_decl(name: &'static str) -> impl Strategy<Value = TopDecl> {
    let arity = 0usize..=2;
    let comment = prop::option::of(prop::collection::vec("[a-z =]{1,12}", 1..=2));
    (arity, comment).prop_flat_map(move |(arity, comment)| {
        let equation = (prop::collection::vec(pattern(), arity), expr(), prop::collection::vec(local_def(), 0..=2))
            .prop_map(|(params, rhs, mut locals)| {
                locals.dedup_by(|a, b| a.name == b.name);
                Equation { params, rhs, locals }
            });
        let count = if arity == 0 { 1..=1 } else { 1..=3 };
        prop::collection::vec(equation, count).prop_map(move |equations| TopDecl {
            comment: comment
                .clone()
                .map(|lines| CommentBlock {
                    lines: lines.iter().map(|l| l.trim().to_string()).filter(|l| !l.is_empty()).collect(),
                })
                .filter(|c| !c.lines.is_empty()),
            kind: DeclKind::Fun(FunDecl { name: name.to_string(), equations }),
        })
    })
}

fn data_decl() -> impl Strategy<Value = TopDecl> {
    let shape = prop_oneof![
        prop::collection::vec(Just("Int".to_string()), 0..=2).prop_map(ArgShape::Curried),
        prop::collection::vec(Just("T".to_string()), 2..=3).prop_map(ArgShape::Tupled),
    ];
    prop::collection::vec(shape, 1..=3).prop_map(|shapes| TopDecl {
        comment: None,
        kind: DeclKind::Data(DataDecl {
            name: "T".into(),
            constructors: shapes
                .into_iter()
                .enumerate()
                .map(|(i, args)| ConstructorDef { name: format!("C{i}"), args })
                .collect(),
        }),
    })
}

fn module() -> impl Strategy<Value = ModuleDef> {
    let exports = prop::option::of(prop::sample::subsequence(vec!["f".to_string(), "g".to_string()], 1..=2));
    let imports = prop::sample::subsequence(vec!["Lib".to_string(), "Util".to_string()], 0..=2);
    (exports, imports, prop::option::of(data_decl()), fun_decl("f"), fun_decl("g")).prop_map(
        |(exports, imports, data, f, g)| ModuleDef {
            name: "Main".into(),
            exports,
            imports,
            decls: data.into_iter().chain([f, g]).collect(),
        },
    )
}

fn module_round_trip(cases: u32) -> Result<(), String> {
    run(cases, module(), |m| {
        let text = render_module(&m);
        let back = parse_module(&text).map_err(|err| TestCaseError::fail(format!("{err} in\n{text}")))?;
        prop_assert_eq!(&back, &m, "{}", text);
        prop_assert_eq!(render_module(&back), text);
        Ok(())
    })
}

fn var_name() -> impl Strategy<Value = String> {
    prop::sample::select(POOL).prop_map(str::to_string)
}

fn substitute_identity(cases: u32) -> Result<(), String> {
    run(cases, (expr(), var_name()), |(e, x)| {
        prop_assert!(alpha_eq_expr(&substitute(&e, &x, &Expr::var(x.clone())), &e));
        Ok(())
    })
}

fn substitute_free_vars(cases: u32) -> Result<(), String> {
    run(cases, (expr(), var_name(), expr()), |(e, x, r)| {
        let out = free_vars(&substitute(&e, &x, &r));
        let mut allowed = free_vars(&e);
        allowed.remove(&x);
        allowed.extend(free_vars(&r));
        prop_assert!(out.is_subset(&allowed), "{:?} not within {:?}", out, allowed);
        Ok(())
    })
}

/// Renaming the binders of `e` apart from everything in `r` makes naive
/// replacement correct; the library result must agree with it.
fn substitute_avoids_capture(cases: u32) -> Result<(), String> {
    run(cases, (expr(), var_name(), expr()), |(e, x, r)| {
        let expected = naive_substitute(&rename_binders(&e, "u"), &x, &r);
        let got = substitute(&e, &x, &r);
        prop_assert!(alpha_eq_expr(&got, &expected), "{} vs {}", render_expr(&got), render_expr(&expected));
        Ok(())
    })
}

fn need_agrees_with_name(cases: u32) -> Result<(), String> {
    let project = bundle("module Main where\n\nr = 0\n");
    let qualified = qualify_project(&project).expect("resolves");
    run(cases, int_expr(), |e| {
        let lazy =
            evaluate(&project, "Main", &e).map_err(|err| TestCaseError::fail(format!("{err}: {}", render_expr(&e))))?;
        let by_name = oracle::show_expr(&qualified, &e).map_err(TestCaseError::fail)?;
        prop_assert_eq!(lazy.show(), Some(by_name), "{}", render_expr(&e));
        Ok(())
    })
}

/// Every project the corpus ships, with its entries.
pub fn corpus_entries() -> Vec<(String, Project, Vec<String>)> {
    let entries = |p: &Project| viewshift::eval::default_entries(p);
    let mut all = vec![("pfun".to_string(), corpus::pfun()), ("pdata".to_string(), corpus::pdata())];
    for (i, p) in corpus::step_states().into_iter().enumerate() {
        all.push((format!("step-{:02}", i + 1), p));
    }
    for (name, s) in [("mult", corpus::scenario_mult()), ("derive", corpus::scenario_derive())] {
        all.push((format!("{name}-start"), s.start));
        all.push((format!("{name}-expected"), s.expected));
    }
    all.into_iter()
        .map(|(n, p)| {
            let e = entries(&p);
            (n, p, e)
        })
        .collect()
}

fn corpus_agrees_with_oracle(cases: u32) -> Result<(), String> {
    let all = corpus_entries();
    for (name, p, entries) in &all {
        let lazy = observe_entries(p, entries).map_err(|e| format!("{name}: {e}"))?;
        for entry in entries {
            let by_name = oracle::observe(p, "Client", entry).map_err(|e| format!("{name}.{entry}: {e}"))?;
            if lazy[entry] != by_name {
                return Err(format!("{name}.{entry}: {:?} vs {by_name:?}", lazy[entry]));
            }
        }
    }
    let picks: Vec<(usize, usize)> =
        all.iter().enumerate().flat_map(|(i, (_, _, es))| (0..es.len()).map(move |j| (i, j))).collect();
    run(cases, prop::sample::select(picks), |(i, j)| {
        let (_, p, entries) = &all[i];
        let lazy = viewshift::eval::observe_entry_with(p, &entries[j], Default::default())
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(Ok(lazy), oracle::observe(p, "Client", &entries[j]));
        Ok(())
    })
}

fn helper_project(body: &Expr, arg: &Expr) -> Project {
    let mut m = ModuleDef::new("Main");
    m.decls.push(TopDecl::fun(FunDecl {
        name: "f".into(),
        equations: vec![Equation { params: vec![Pattern::Var("p".into())], rhs: body.clone(), locals: Vec::new() }],
    }));
    let call = Expr::infix(BinOp::Add, Expr::Int(7), Expr::var("f").app(arg.clone()));
    m.decls.push(TopDecl::fun(FunDecl {
        name: "g".into(),
        equations: vec![Equation { params: Vec::new(), rhs: call, locals: Vec::new() }],
    }));
    Project::new([m])
}

fn fold_after_unfold(cases: u32) -> Result<(), String> {
    run(cases, helper_and_argument(), |(body, arg)| {
        prop_assume!(free_vars(&body).contains("p"));
        prop_assume!(body != Expr::var("p"));
        let original = helper_project(&body, &arg);
        // The call `f arg` must be the only place the body occurs.
        prop_assume!(fold_top_level(&original, "f", "Main").is_err());
        let unfolded = unfold_instance(&original, "f", "g", "Main").map_err(|e| TestCaseError::fail(e.to_string()))?;
        let folded = fold_top_level(&unfolded, "f", "Main").map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(alpha_eq_project(&folded, &original), "{}\nbecame\n{}", canonical(&original), canonical(&folded));
        Ok(())
    })
}

fn library(body: &Expr) -> Project {
    let mut lib = ModuleDef::new("Lib");
    lib.decls.push(TopDecl::fun(FunDecl {
        name: "f".into(),
        equations: vec![Equation { params: vec![Pattern::Var("p".into())], rhs: body.clone(), locals: Vec::new() }],
    }));
    let mut client = ModuleDef::new("Client");
    client.imports.push("Lib".into());
    client.decls.push(TopDecl::fun(FunDecl {
        name: "r1".into(),
        equations: vec![Equation {
            params: Vec::new(),
            rhs: Expr::Builtin(Builtin::Print).app(Expr::var("f").app(Expr::Int(1))),
            locals: Vec::new(),
        }],
    }));
    Project::new([lib, client])
}

fn rename_inverse(cases: u32) -> Result<(), String> {
    let names = prop::sample::select(&["g", "h", "x", "fold1", "evalConst", "f'"][..]);
    run(cases, (super::gen::int_expr_in(vec!["p".into()]), names), |(body, name)| {
        let p = library(&body);
        let there = match rename_top_level(&p, "f", "Lib", name) {
            Ok(q) => q,
            Err(e) => return Err(TestCaseError::reject(e.to_string())),
        };
        prop_assert!(there.module("Lib").unwrap().fun(name).is_some());
        let back = rename_top_level(&there, name, "Lib", "f").map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(canonical(&back), canonical(&p));
        Ok(())
    })
}

fn move_inverse(cases: u32) -> Result<(), String> {
    let targets = prop::sample::select(&["Other", "Util", "Client2"][..]);
    run(cases, (super::gen::int_expr_in(vec!["p".into()]), targets), |(body, target)| {
        let p = library(&body);
        let moved = move_def(&p, "f", "Lib", target).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(moved.module(target).and_then(|m| m.fun("f")).is_some());
        let back = move_def(&moved, "f", target, "Lib").map_err(|e| TestCaseError::fail(e.to_string()))?;
        let back = clean_imports(&back, "Client").map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(alpha_eq_project(&back, &p), "{}", canonical(&back));
        Ok(())
    })
}
