//! Refactorings that must be refused, with the error kind expected.

use viewshift::corpus;
use viewshift::lang::ast::Project;
use viewshift::refactor::{ErrorKind, Operation};

use super::{bundle, canonical};

pub struct Refusal {
    pub name: &'static str,
    pub project: fn() -> Project,
    pub command: &'static str,
    pub kind: ErrorKind,
}

fn step(k: usize) -> Project {
    corpus::step_states().swap_remove(k - 1)
}

fn step1() -> Project {
    step(1)
}

fn step3() -> Project {
    step(3)
}

fn with_exports() -> Project {
    bundle(
        "module Lib (f, g) where\n\nf x = x + 1\n\ng = 2\n\n\
         module Main where\n\nimport Lib\n\nr1 = print (f g)\n",
    )
}

fn lifted_twice() -> Project {
    bundle(
        "module M where\n\nh x = helper x\n    where\n        helper y = y + 1\n\nhelper z = z\n\n\
         module Client where\n\nimport M\n\nr1 = print (h 1)\n",
    )
}

fn tupled_case() -> Project {
    bundle(
        "module M where\n\ng x y = case (x, y) of\n    (0, c) -> c\n    (a, b) -> a\n\n\
         module Client where\n\nimport M\n\nr1 = print (g 1 2)\n",
    )
}

fn pattern_clash() -> Project {
    bundle(
        "module M where\n\nk x y = case x of\n    y -> 1\n\n\
         module Client where\n\nimport M\n\nr1 = print (k 1 2)\n",
    )
}

fn unresolved() -> Project {
    bundle("module M where\n\nf x = g x\n")
}

pub const REFUSALS: &[Refusal] = &[
    Refusal {
        name: "exhibit_unknown_module",
        project: corpus::pfun,
        command: "exhibit-function eval Const evalConst Nowhere",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "exhibit_unknown_function",
        project: corpus::pfun,
        command: "exhibit-function evaluate Const evalConst EvalMod",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "exhibit_unknown_constructor_case",
        project: corpus::pfun,
        command: "exhibit-function eval Mult evalMult EvalMod",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "exhibit_name_is_pattern_variable",
        project: corpus::pfun,
        command: "exhibit-function eval Const i EvalMod",
        kind: ErrorKind::NameClash,
    },
    Refusal {
        name: "exhibit_name_is_builtin",
        project: corpus::pfun,
        command: "exhibit-function eval Const show EvalMod",
        kind: ErrorKind::NameClash,
    },
    Refusal {
        name: "exhibit_name_not_an_identifier",
        project: corpus::pfun,
        command: "exhibit-function eval Const Foo EvalMod",
        kind: ErrorKind::NotApplicable,
    },
    Refusal {
        name: "new_def_zero_arity",
        project: corpus::pfun,
        command: "new-def-fun-app eval 0 v Client",
        kind: ErrorKind::NotApplicable,
    },
    Refusal {
        name: "new_def_no_such_application",
        project: corpus::pfun,
        command: "new-def-fun-app eval 2 v Client",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "new_def_name_is_pattern_variable",
        project: corpus::pfun,
        command: "new-def-fun-app eval 1 e2 EvalMod",
        kind: ErrorKind::NameClash,
    },
    Refusal {
        name: "generalise_wrong_shape",
        project: step1,
        command: "generalise eval Add evalAdd EvalMod 1 x curried RecType",
        kind: ErrorKind::NotApplicable,
    },
    Refusal {
        name: "generalise_no_such_argument",
        project: step1,
        command: "generalise eval Add evalAdd EvalMod 3 x tupled RecType",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "generalise_unknown_local",
        project: step1,
        command: "generalise eval Add evalSum EvalMod 1 x tupled RecType",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "generalise_recursive_on_non_recursive_argument",
        project: step1,
        command: "generalise eval Const evalConst EvalMod 1 x tupled RecType",
        kind: ErrorKind::NotApplicable,
    },
    Refusal {
        name: "generalise_new_name_captures",
        project: step1,
        command: "generalise eval Add evalAdd EvalMod 1 e2 tupled RecType",
        kind: ErrorKind::NameClash,
    },
    Refusal {
        name: "generalise_ident_not_used",
        project: step3,
        command: "generalise-ident eval EvalMod e1 c",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "generalise_ident_name_taken",
        project: step3,
        command: "generalise-ident eval EvalMod evalConst i",
        kind: ErrorKind::NameClash,
    },
    Refusal {
        name: "lift_unknown_local",
        project: step1,
        command: "lift-def eval evalMul EvalMod",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "lift_onto_existing_top_level",
        project: lifted_twice,
        command: "lift-def h helper M",
        kind: ErrorKind::NameClash,
    },
    Refusal {
        name: "rename_onto_existing_definition",
        project: corpus::pdata,
        command: "rename-top-level eval Client toString",
        kind: ErrorKind::NameClash,
    },
    Refusal {
        name: "rename_captured_by_pattern_variable",
        project: step3,
        command: "rename-top-level evalConst EvalMod i",
        kind: ErrorKind::NameClash,
    },
    Refusal {
        name: "rename_onto_builtin",
        project: corpus::pfun,
        command: "rename-top-level eval EvalMod print",
        kind: ErrorKind::NameClash,
    },
    Refusal {
        name: "rename_unknown_function",
        project: corpus::pfun,
        command: "rename-top-level evaluate EvalMod fold1",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "rename_not_an_identifier",
        project: corpus::pfun,
        command: "rename-top-level eval EvalMod Fold",
        kind: ErrorKind::NotApplicable,
    },
    Refusal {
        name: "move_into_same_module",
        project: corpus::pfun,
        command: "move-def eval EvalMod EvalMod",
        kind: ErrorKind::NotApplicable,
    },
    Refusal {
        name: "move_onto_existing_definition",
        project: corpus::pdata,
        command: "move-def eval ConstMod AddMod",
        kind: ErrorKind::NameClash,
    },
    Refusal {
        name: "move_creates_import_cycle",
        project: corpus::pfun,
        command: "move-def r2 Client EvalMod",
        kind: ErrorKind::ImportCycle,
    },
    Refusal {
        name: "move_unknown_function",
        project: corpus::pfun,
        command: "move-def evaluate EvalMod Expr",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "unfold_unknown_definition",
        project: corpus::pdata,
        command: "unfold-instance nothing eval Client",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "unfold_not_used_there",
        project: corpus::pdata,
        command: "unfold-instance e1 eval Client",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "unfold_definition_with_where",
        project: step1,
        command: "unfold-instance eval r2 Client",
        kind: ErrorKind::NotApplicable,
    },
    Refusal {
        name: "fold_several_equations",
        project: corpus::pfun,
        command: "fold-def eval EvalMod",
        kind: ErrorKind::NotApplicable,
    },
    Refusal {
        name: "fold_no_instance",
        project: corpus::pdata,
        command: "fold-def toString Client",
        kind: ErrorKind::NotApplicable,
    },
    Refusal {
        name: "fold_unknown_function",
        project: corpus::pdata,
        command: "fold-def size Client",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "generative_fold_without_comment",
        project: corpus::pdata,
        command: "generative-fold fold 3 Client",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "generative_fold_wrong_arity",
        project: corpus::pdata,
        command: "generative-fold fold 2 Client",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "remove_still_used",
        project: corpus::pfun,
        command: "remove-def eval EvalMod",
        kind: ErrorKind::StillUsed,
    },
    Refusal {
        name: "remove_unknown",
        project: corpus::pfun,
        command: "remove-def fold EvalMod",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "remove_local_still_used",
        project: step1,
        command: "remove-local-def evalConst eval EvalMod",
        kind: ErrorKind::StillUsed,
    },
    Refusal {
        name: "remove_local_unknown",
        project: step1,
        command: "remove-local-def evalMul eval EvalMod",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "clean_imports_unknown_module",
        project: corpus::pfun,
        command: "clean-imports Main",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "unexport_without_export_list",
        project: corpus::pfun,
        command: "rm-from-exports eval EvalMod",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "unexport_still_imported",
        project: with_exports,
        command: "rm-from-exports f Lib",
        kind: ErrorKind::StillUsed,
    },
    Refusal {
        name: "simplify_without_case",
        project: corpus::pfun,
        command: "simplify-case-pattern eval EvalMod",
        kind: ErrorKind::NotApplicable,
    },
    Refusal {
        name: "simplify_no_common_variable",
        project: tupled_case,
        command: "simplify-case-pattern g M",
        kind: ErrorKind::NotApplicable,
    },
    Refusal {
        name: "case_to_eq_several_equations",
        project: corpus::pfun,
        command: "case-to-eq eval EvalMod",
        kind: ErrorKind::NotApplicable,
    },
    Refusal {
        name: "case_to_eq_pattern_shadows_parameter",
        project: pattern_clash,
        command: "case-to-eq k M",
        kind: ErrorKind::NotApplicable,
    },
    Refusal {
        name: "case_to_eq2_not_a_pair_of_parameters",
        project: corpus::pdata,
        command: "case-to-eq2 eval Client",
        kind: ErrorKind::NotApplicable,
    },
    Refusal {
        name: "comment_unknown_declaration",
        project: corpus::pfun,
        command: "duplicate-into-comment evaluate Client",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "uncomment_without_comment",
        project: corpus::pfun,
        command: "rm-comment-before eval EvalMod",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "unify_different_bodies",
        project: corpus::pdata,
        command: "unify-alpha eval toString ConstMod",
        kind: ErrorKind::PreconditionFailed,
    },
    Refusal {
        name: "unify_with_itself",
        project: corpus::pdata,
        command: "unify-alpha eval eval ConstMod",
        kind: ErrorKind::NotFound,
    },
    Refusal {
        name: "input_does_not_resolve",
        project: unresolved,
        command: "rename-top-level f M h",
        kind: ErrorKind::PreconditionFailed,
    },
];

pub fn refusal(name: &str) -> &'static Refusal {
    REFUSALS.iter().find(|r| r.name == name).unwrap_or_else(|| panic!("no refusal case {name}"))
}

/// Applies the command and checks the error kind and that the input is
/// untouched. Returns a description of the first problem.
pub fn check(r: &Refusal) -> Result<(), String> {
    let project = (r.project)();
    let before = canonical(&project);
    let words: Vec<String> = r.command.split_whitespace().map(str::to_string).collect();
    let op = Operation::from_command(&words[0], &words[1..]).map_err(|e| format!("{}: {e}", r.name))?;
    match op.apply(&project) {
        Ok(_) => Err(format!("{}: `{}` was applied", r.name, r.command)),
        Err(e) if e.kind != r.kind => Err(format!("{}: expected {}, got {e}", r.name, r.kind)),
        Err(_) if canonical(&project) != before => Err(format!("{}: input changed", r.name)),
        Err(_) => Ok(()),
    }
}
