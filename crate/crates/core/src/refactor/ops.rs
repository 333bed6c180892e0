//! Refactoring commands as data: parsing from script words and dispatch.

use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommandSpec {
    pub name: &'static str,
    pub arity: usize,
    pub usage: &'static str,
}

pub const COMMANDS: &[CommandSpec] = &[
    CommandSpec { name: "exhibit-function", arity: 4, usage: "F CONSTRUCTOR NEW MODULE" },
    CommandSpec { name: "new-def-fun-app", arity: 4, usage: "F ARITY NEW MODULE" },
    CommandSpec {
        name: "generalise",
        arity: 8,
        usage: "F CONSTRUCTOR LOCAL MODULE POSITION NEW curried|tupled OtherType|RecType",
    },
    CommandSpec { name: "generalise-ident", arity: 4, usage: "F MODULE VALUE NEW" },
    CommandSpec { name: "lift-def", arity: 3, usage: "F LOCAL MODULE" },
    CommandSpec { name: "rename-top-level", arity: 3, usage: "F MODULE NEW" },
    CommandSpec { name: "move-def", arity: 3, usage: "F FROM TO" },
    CommandSpec { name: "unfold-instance", arity: 3, usage: "D F MODULE" },
    CommandSpec { name: "fold-def", arity: 2, usage: "F MODULE" },
    CommandSpec { name: "generative-fold", arity: 3, usage: "F ARITY MODULE" },
    CommandSpec { name: "remove-def", arity: 2, usage: "F MODULE" },
    CommandSpec { name: "remove-local-def", arity: 3, usage: "LOCAL F MODULE" },
    CommandSpec { name: "clean-imports", arity: 1, usage: "MODULE" },
    CommandSpec { name: "rm-from-exports", arity: 2, usage: "F MODULE" },
    CommandSpec { name: "simplify-case-pattern", arity: 2, usage: "F MODULE" },
    CommandSpec { name: "case-to-eq", arity: 2, usage: "F MODULE" },
    CommandSpec { name: "case-to-eq2", arity: 2, usage: "F MODULE" },
    CommandSpec { name: "duplicate-into-comment", arity: 2, usage: "F MODULE" },
    CommandSpec { name: "rm-comment-before", arity: 2, usage: "F MODULE" },
    CommandSpec { name: "unify-alpha", arity: 3, usage: "KEEP DROP MODULE" },
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CommandError {
    #[error("unknown command `{0}`")]
    Unknown(String),
    #[error("`{command}` takes {expected} arguments ({usage}), got {got}")]
    Arity { command: String, expected: usize, got: usize, usage: &'static str },
    #[error("`{command}`: bad argument `{arg}`: {reason}")]
    BadArgument { command: String, arg: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operation {
    ExhibitFunction {
        f: String,
        constructor: String,
        new: String,
        module: String,
    },
    NewDefFunApp {
        f: String,
        arity: usize,
        new: String,
        module: String,
    },
    Generalise {
        f: String,
        constructor: String,
        local: String,
        module: String,
        position: usize,
        new: String,
        shape: ArgShapeFlag,
        mode: GeneraliseMode,
    },
    GeneraliseIdent {
        f: String,
        module: String,
        value: String,
        new: String,
    },
    LiftDef {
        f: String,
        local: String,
        module: String,
    },
    RenameTopLevel {
        f: String,
        module: String,
        new: String,
    },
    MoveDef {
        f: String,
        from: String,
        to: String,
    },
    UnfoldInstance {
        d: String,
        f: String,
        module: String,
    },
    FoldDef {
        f: String,
        module: String,
    },
    GenerativeFold {
        f: String,
        arity: usize,
        module: String,
    },
    RemoveDef {
        f: String,
        module: String,
    },
    RemoveLocalDef {
        local: String,
        f: String,
        module: String,
    },
    CleanImports {
        module: String,
    },
    RmFromExports {
        f: String,
        module: String,
    },
    SimplifyCasePattern {
        f: String,
        module: String,
    },
    CaseToEq {
        f: String,
        module: String,
        width: usize,
    },
    DuplicateIntoComment {
        f: String,
        module: String,
    },
    RmCommentBefore {
        f: String,
        module: String,
    },
    UnifyAlpha {
        keep: String,
        drop: String,
        module: String,
    },
}

impl Operation {
    pub fn from_command(command: &str, args: &[String]) -> Result<Operation, CommandError> {
        let spec =
            COMMANDS.iter().find(|c| c.name == command).ok_or_else(|| CommandError::Unknown(command.to_string()))?;
        if args.len() != spec.arity {
            return Err(CommandError::Arity {
                command: command.to_string(),
                expected: spec.arity,
                got: args.len(),
                usage: spec.usage,
            });
        }
        let bad = |arg: &str, reason: &str| CommandError::BadArgument {
            command: command.to_string(),
            arg: arg.to_string(),
            reason: reason.to_string(),
        };
        let number = |arg: &String| arg.parse::<usize>().map_err(|_| bad(arg, "expected a non-negative integer"));
        let a = |i: usize| args[i].clone();
        use Operation::*;
        Ok(match command {
            "exhibit-function" => ExhibitFunction { f: a(0), constructor: a(1), new: a(2), module: a(3) },
            "new-def-fun-app" => NewDefFunApp { f: a(0), arity: number(&args[1])?, new: a(2), module: a(3) },
            "generalise" => Generalise {
                f: a(0),
                constructor: a(1),
                local: a(2),
                module: a(3),
                position: number(&args[4])?,
                new: a(5),
                shape: match args[6].as_str() {
                    "curried" => ArgShapeFlag::Curried,
                    "tupled" => ArgShapeFlag::Tupled,
                    other => return Err(bad(other, "expected `curried` or `tupled`")),
                },
                mode: match args[7].as_str() {
                    "OtherType" => GeneraliseMode::OtherType,
                    "RecType" => GeneraliseMode::RecType,
                    other => return Err(bad(other, "expected `OtherType` or `RecType`")),
                },
            },
            "generalise-ident" => GeneraliseIdent { f: a(0), module: a(1), value: a(2), new: a(3) },
            "lift-def" => LiftDef { f: a(0), local: a(1), module: a(2) },
            "rename-top-level" => RenameTopLevel { f: a(0), module: a(1), new: a(2) },
            "move-def" => MoveDef { f: a(0), from: a(1), to: a(2) },
            "unfold-instance" => UnfoldInstance { d: a(0), f: a(1), module: a(2) },
            "fold-def" => FoldDef { f: a(0), module: a(1) },
            "generative-fold" => GenerativeFold { f: a(0), arity: number(&args[1])?, module: a(2) },
            "remove-def" => RemoveDef { f: a(0), module: a(1) },
            "remove-local-def" => RemoveLocalDef { local: a(0), f: a(1), module: a(2) },
            "clean-imports" => CleanImports { module: a(0) },
            "rm-from-exports" => RmFromExports { f: a(0), module: a(1) },
            "simplify-case-pattern" => SimplifyCasePattern { f: a(0), module: a(1) },
            "case-to-eq" => CaseToEq { f: a(0), module: a(1), width: 1 },
            "case-to-eq2" => CaseToEq { f: a(0), module: a(1), width: 2 },
            "duplicate-into-comment" => DuplicateIntoComment { f: a(0), module: a(1) },
            "rm-comment-before" => RmCommentBefore { f: a(0), module: a(1) },
            "unify-alpha" => UnifyAlpha { keep: a(0), drop: a(1), module: a(2) },
            _ => unreachable!("command table and dispatch disagree"),
        })
    }

    pub fn apply(&self, p: &Project) -> RefactorResult<Project> {
        use Operation::*;
        match self {
            ExhibitFunction { f, constructor, new, module } => exhibit_function(p, f, constructor, new, module),
            NewDefFunApp { f, arity, new, module } => new_def_fun_app(p, f, *arity, new, module),
            Generalise { f, constructor, local, module, position, new, shape, mode } => {
                generalise(p, f, constructor, local, module, *position, new, *shape, *mode)
            }
            GeneraliseIdent { f, module, value, new } => generalise_ident(p, f, module, value, new),
            LiftDef { f, local, module } => lift_to_top(p, f, local, module),
            RenameTopLevel { f, module, new } => rename_top_level(p, f, module, new),
            MoveDef { f, from, to } => move_def(p, f, from, to),
            UnfoldInstance { d, f, module } => unfold_instance(p, d, f, module),
            FoldDef { f, module } => fold_top_level(p, f, module),
            GenerativeFold { f, arity, module } => generative_fold(p, f, *arity, module),
            RemoveDef { f, module } => remove_def(p, f, module),
            RemoveLocalDef { local, f, module } => remove_local_def(p, local, f, module),
            CleanImports { module } => clean_imports(p, module),
            RmFromExports { f, module } => rm_from_exports(p, f, module),
            SimplifyCasePattern { f, module } => simplify_case_pattern(p, f, module),
            CaseToEq { f, module, width } => case_to_eq(p, f, module, *width),
            DuplicateIntoComment { f, module } => duplicate_into_comment(p, f, module),
            RmCommentBefore { f, module } => rm_comment_before(p, f, module),
            UnifyAlpha { keep, drop, module } => unify_alpha(p, keep, drop, module),
        }
    }

    /// The command name and arguments, as written in a script.
    pub fn to_words(&self) -> Vec<String> {
        use Operation::*;
        let s = |x: &String| x.clone();
        match self {
            ExhibitFunction { f, constructor, new, module } => {
                vec!["exhibit-function".into(), s(f), s(constructor), s(new), s(module)]
            }
            NewDefFunApp { f, arity, new, module } => {
                vec!["new-def-fun-app".into(), s(f), arity.to_string(), s(new), s(module)]
            }
            Generalise { f, constructor, local, module, position, new, shape, mode } => vec![
                "generalise".into(),
                s(f),
                s(constructor),
                s(local),
                s(module),
                position.to_string(),
                s(new),
                match shape {
                    ArgShapeFlag::Curried => "curried".into(),
                    ArgShapeFlag::Tupled => "tupled".into(),
                },
                format!("{mode:?}"),
            ],
            GeneraliseIdent { f, module, value, new } => {
                vec!["generalise-ident".into(), s(f), s(module), s(value), s(new)]
            }
            LiftDef { f, local, module } => vec!["lift-def".into(), s(f), s(local), s(module)],
            RenameTopLevel { f, module, new } => vec!["rename-top-level".into(), s(f), s(module), s(new)],
            MoveDef { f, from, to } => vec!["move-def".into(), s(f), s(from), s(to)],
            UnfoldInstance { d, f, module } => vec!["unfold-instance".into(), s(d), s(f), s(module)],
            FoldDef { f, module } => vec!["fold-def".into(), s(f), s(module)],
            GenerativeFold { f, arity, module } => {
                vec!["generative-fold".into(), s(f), arity.to_string(), s(module)]
            }
            RemoveDef { f, module } => vec!["remove-def".into(), s(f), s(module)],
            RemoveLocalDef { local, f, module } => vec!["remove-local-def".into(), s(local), s(f), s(module)],
            CleanImports { module } => vec!["clean-imports".into(), s(module)],
            RmFromExports { f, module } => vec!["rm-from-exports".into(), s(f), s(module)],
            SimplifyCasePattern { f, module } => vec!["simplify-case-pattern".into(), s(f), s(module)],
            CaseToEq { f, module, width } => {
                vec![if *width == 2 { "case-to-eq2" } else { "case-to-eq" }.into(), s(f), s(module)]
            }
            DuplicateIntoComment { f, module } => vec!["duplicate-into-comment".into(), s(f), s(module)],
            RmCommentBefore { f, module } => vec!["rm-comment-before".into(), s(f), s(module)],
            UnifyAlpha { keep, drop, module } => vec!["unify-alpha".into(), s(keep), s(drop), s(module)],
        }
    }
}
