//! Call-by-need interpreter.
//!
//! Every argument, `let` value and zero-argument binding is a heap cell that
//! holds either a suspended computation or, once forced, its weak head
//! normal form. Top-level zero-argument bindings are shared cells, so
//! recursive definitions behave like `letrec`.

mod value;

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use thiserror::Error;

use crate::lang::ast::*;
use crate::resolve::{qualify_expr, qualify_project, ResolveError};
pub use value::Value;

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;
const MAX_DEPTH: usize = 10_000;
const STACK_BYTES: usize = 256 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no equation or alternative of `{0}` matches")]
    PatternMatchFailure(String),
    #[error(transparent)]
    UnresolvedName(#[from] ResolveError),
    #[error("unknown entry `{0}`")]
    UnknownEntry(String),
    #[error("entry `{0}` is defined in several modules; qualify it")]
    AmbiguousEntry(String),
    #[error("reduction budget of {0} steps exceeded")]
    StepBudgetExceeded(u64),
    #[error("evaluation nested deeper than {MAX_DEPTH} levels")]
    DepthExceeded,
    #[error("value depends on itself")]
    Loop,
    #[error("type error: {0}")]
    TypeError(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub step_budget: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { step_budget: DEFAULT_STEP_BUDGET }
    }
}

/// Counters of one evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalStats {
    pub steps: u64,
    /// Suspended computations run to a value (each at most once).
    pub thunk_forces: u64,
}

type CellId = usize;

struct EnvNode<'p> {
    name: &'p str,
    cell: CellId,
    next: Env<'p>,
}

type Env<'p> = Option<Rc<EnvNode<'p>>>;

fn extend<'p>(env: &Env<'p>, name: &'p str, cell: CellId) -> Env<'p> {
    Some(Rc::new(EnvNode { name, cell, next: env.clone() }))
}

fn lookup(env: &Env<'_>, name: &str) -> Option<CellId> {
    let mut cur = env.as_ref();
    while let Some(node) = cur {
        if node.name == name {
            return Some(node.cell);
        }
        cur = node.next.as_ref();
    }
    None
}

#[derive(Clone)]
enum FunKind<'p> {
    Global(&'p FunDecl),
    Local(&'p LocalDef, Env<'p>),
    Con(&'p QName, usize),
    Builtin(Builtin),
}

#[derive(Clone)]
struct FunVal<'p> {
    kind: FunKind<'p>,
    args: Vec<CellId>,
}

impl FunVal<'_> {
    fn arity(&self) -> usize {
        match &self.kind {
            FunKind::Global(f) => f.arity(),
            FunKind::Local(l, _) => l.params.len(),
            FunKind::Con(_, n) => *n,
            FunKind::Builtin(_) => 1,
        }
    }

    fn name(&self) -> String {
        match &self.kind {
            FunKind::Global(f) => f.name.clone(),
            FunKind::Local(l, _) => l.name.clone(),
            FunKind::Con(c, _) => c.ident.clone(),
            FunKind::Builtin(b) => b.name().to_string(),
        }
    }
}

#[derive(Clone)]
enum Whnf<'p> {
    Int(i64),
    Str(Rc<str>),
    Con(&'p QName, Vec<CellId>),
    Tuple(Vec<CellId>),
    Fun(Rc<FunVal<'p>>),
    Output(Rc<str>),
}

enum Cell<'p> {
    Expr(&'p Expr, Env<'p>),
    /// Zero-argument top-level binding.
    Caf(&'p FunDecl),
    Value(Whnf<'p>),
    Blackhole,
}

struct Machine<'p> {
    project: &'p Project,
    heap: Vec<Cell<'p>>,
    cafs: HashMap<(&'p str, &'p str), CellId>,
    stats: EvalStats,
    budget: u64,
    depth: usize,
}

impl<'p> Machine<'p> {
    fn new(project: &'p Project, options: EvalOptions) -> Self {
        Machine {
            project,
            heap: Vec::new(),
            cafs: HashMap::new(),
            stats: EvalStats::default(),
            budget: options.step_budget,
            depth: 0,
        }
    }

    fn alloc(&mut self, cell: Cell<'p>) -> CellId {
        self.heap.push(cell);
        self.heap.len() - 1
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        self.stats.steps += 1;
        if self.stats.steps > self.budget {
            return Err(EvalError::StepBudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn enter(&mut self) -> Result<(), EvalError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(EvalError::DepthExceeded);
        }
        Ok(())
    }

    fn force(&mut self, id: CellId) -> Result<Whnf<'p>, EvalError> {
        match std::mem::replace(&mut self.heap[id], Cell::Blackhole) {
            Cell::Value(v) => {
                self.heap[id] = Cell::Value(v.clone());
                Ok(v)
            }
            Cell::Blackhole => Err(EvalError::Loop),
            pending => {
                self.enter()?;
                let result = match pending {
                    Cell::Expr(e, env) => self.whnf(e, &env),
                    Cell::Caf(f) => self.call_global(f, &[]),
                    Cell::Value(_) | Cell::Blackhole => unreachable!(),
                };
                self.depth -= 1;
                let v = result?;
                self.stats.thunk_forces += 1;
                self.heap[id] = Cell::Value(v.clone());
                Ok(v)
            }
        }
    }

    fn global(&mut self, q: &'p QName) -> Result<Whnf<'p>, EvalError> {
        let module = q.module.as_deref().expect("qualified");
        let unresolved = || ResolveError::UnresolvedName { module: module.to_string(), name: q.to_string() };
        let m = self.project.module(module).ok_or_else(unresolved)?;
        let f = m.fun(&q.ident).ok_or_else(unresolved)?;
        if f.arity() > 0 {
            return Ok(Whnf::Fun(Rc::new(FunVal { kind: FunKind::Global(f), args: Vec::new() })));
        }
        let key = (module_name(m), f.name.as_str());
        let id = match self.cafs.get(&key) {
            Some(id) => *id,
            None => {
                let id = self.alloc(Cell::Caf(f));
                self.cafs.insert(key, id);
                id
            }
        };
        self.force(id)
    }

    fn constructor(&mut self, q: &'p QName) -> Result<Whnf<'p>, EvalError> {
        let module = q.module.as_deref().expect("qualified");
        let arity = self
            .project
            .module(module)
            .and_then(|m| m.constructor(&q.ident))
            .map(|c| c.args.arity())
            .ok_or_else(|| ResolveError::UnresolvedName { module: module.to_string(), name: q.to_string() })?;
        Ok(if arity == 0 {
            Whnf::Con(q, Vec::new())
        } else {
            Whnf::Fun(Rc::new(FunVal { kind: FunKind::Con(q, arity), args: Vec::new() }))
        })
    }

    fn whnf(&mut self, e: &'p Expr, env: &Env<'p>) -> Result<Whnf<'p>, EvalError> {
        self.tick()?;
        match e {
            Expr::Var(q) => match &q.module {
                None => {
                    let id = lookup(env, &q.ident).ok_or_else(|| {
                        EvalError::UnresolvedName(ResolveError::UnresolvedName {
                            module: String::new(),
                            name: q.ident.clone(),
                        })
                    })?;
                    self.force(id)
                }
                Some(_) => self.global(q),
            },
            Expr::Con(q) => self.constructor(q),
            Expr::Int(n) => Ok(Whnf::Int(*n)),
            Expr::Str(s) => Ok(Whnf::Str(Rc::from(s.as_str()))),
            Expr::Builtin(b) => Ok(Whnf::Fun(Rc::new(FunVal { kind: FunKind::Builtin(*b), args: Vec::new() }))),
            Expr::Tuple(items) => {
                Ok(Whnf::Tuple(items.iter().map(|i| self.alloc(Cell::Expr(i, env.clone()))).collect()))
            }
            Expr::App(..) => {
                let (head, args) = e.spine();
                let f = self.whnf(head, env)?;
                let cells: Vec<CellId> = args.into_iter().map(|a| self.alloc(Cell::Expr(a, env.clone()))).collect();
                self.apply(f, cells)
            }
            Expr::Infix(op, l, r) => {
                let a = self.whnf(l, env)?;
                let b = self.whnf(r, env)?;
                match (op, a, b) {
                    (BinOp::Add, Whnf::Int(x), Whnf::Int(y)) => Ok(Whnf::Int(x.wrapping_add(y))),
                    (BinOp::Mul, Whnf::Int(x), Whnf::Int(y)) => Ok(Whnf::Int(x.wrapping_mul(y))),
                    (BinOp::Concat, Whnf::Str(x), Whnf::Str(y)) => Ok(Whnf::Str(Rc::from(format!("{x}{y}")))),
                    (op, _, _) => Err(EvalError::TypeError(format!("bad operands for `{}`", op.symbol()))),
                }
            }
            Expr::Case(scrut, alts) => {
                let cell = self.alloc(Cell::Expr(scrut, env.clone()));
                for alt in alts {
                    let mut binds = Vec::new();
                    if self.matches(&alt.pat, cell, &mut binds)? {
                        let env = binds.into_iter().fold(env.clone(), |acc, (n, c)| extend(&acc, n, c));
                        return self.whnf(&alt.body, &env);
                    }
                }
                Err(EvalError::PatternMatchFailure("case".into()))
            }
            Expr::Let(x, v, b) => {
                let cell = self.alloc(Cell::Blackhole);
                let env = extend(env, x, cell);
                self.heap[cell] = Cell::Expr(v, env.clone());
                self.whnf(b, &env)
            }
        }
    }

    fn apply(&mut self, f: Whnf<'p>, args: Vec<CellId>) -> Result<Whnf<'p>, EvalError> {
        let Whnf::Fun(fun) = f else {
            return Err(EvalError::TypeError("applying a value that is not a function".into()));
        };
        if args.is_empty() {
            return Ok(Whnf::Fun(fun));
        }
        let mut all = fun.args.clone();
        all.extend(args);
        let arity = fun.arity();
        if all.len() < arity {
            return Ok(Whnf::Fun(Rc::new(FunVal { kind: fun.kind.clone(), args: all })));
        }
        let rest = all.split_off(arity);
        self.enter()?;
        let result = self.call(&fun.kind, &all);
        self.depth -= 1;
        let result = result?;
        if rest.is_empty() {
            Ok(result)
        } else {
            self.apply(result, rest)
        }
    }

    fn call(&mut self, kind: &FunKind<'p>, args: &[CellId]) -> Result<Whnf<'p>, EvalError> {
        match kind {
            FunKind::Global(f) => self.call_global(f, args),
            FunKind::Local(l, env) => {
                let env = l.params.iter().zip(args).fold(env.clone(), |acc, (p, c)| extend(&acc, p, *c));
                self.whnf(&l.body, &env)
            }
            FunKind::Con(q, _) => Ok(Whnf::Con(q, args.to_vec())),
            FunKind::Builtin(Builtin::Show) => {
                let v = self.deep(args[0])?;
                let text = v.show().ok_or_else(|| EvalError::TypeError(format!("cannot show {v}")))?;
                Ok(Whnf::Str(Rc::from(text)))
            }
            FunKind::Builtin(Builtin::Print) => {
                let v = self.deep(args[0])?;
                let text = match v {
                    Value::Str(s) => s,
                    other => other.show().ok_or_else(|| EvalError::TypeError(format!("cannot print {other}")))?,
                };
                Ok(Whnf::Output(Rc::from(text)))
            }
        }
    }

    fn call_global(&mut self, f: &'p FunDecl, args: &[CellId]) -> Result<Whnf<'p>, EvalError> {
        for eq in &f.equations {
            let mut binds = Vec::new();
            let mut ok = true;
            for (p, c) in eq.params.iter().zip(args) {
                if !self.matches(p, *c, &mut binds)? {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let mut env: Env<'p> = None;
            for (n, c) in binds {
                env = extend(&env, n, c);
            }
            let cells: Vec<CellId> = eq.locals.iter().map(|_| self.alloc(Cell::Blackhole)).collect();
            for (l, c) in eq.locals.iter().zip(&cells) {
                env = extend(&env, &l.name, *c);
            }
            for (l, c) in eq.locals.iter().zip(&cells) {
                self.heap[*c] = if l.params.is_empty() {
                    Cell::Expr(&l.body, env.clone())
                } else {
                    Cell::Value(Whnf::Fun(Rc::new(FunVal { kind: FunKind::Local(l, env.clone()), args: Vec::new() })))
                };
            }
            return self.whnf(&eq.rhs, &env);
        }
        Err(EvalError::PatternMatchFailure(f.name.clone()))
    }

    fn matches(&mut self, p: &'p Pattern, cell: CellId, binds: &mut Vec<(&'p str, CellId)>) -> Result<bool, EvalError> {
        match p {
            Pattern::Var(v) => {
                binds.push((v, cell));
                Ok(true)
            }
            Pattern::Wild => Ok(true),
            Pattern::Int(n) => match self.force(cell)? {
                Whnf::Int(m) => Ok(*n == m),
                _ => Err(EvalError::TypeError("integer pattern against a non-integer".into())),
            },
            Pattern::Con(c, ps) => match self.force(cell)? {
                Whnf::Con(k, args) => {
                    if k != c {
                        return Ok(false);
                    }
                    if args.len() != ps.len() {
                        return Err(EvalError::TypeError(format!("constructor `{}` used with wrong arity", c.ident)));
                    }
                    for (p, a) in ps.iter().zip(args) {
                        if !self.matches(p, a, binds)? {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                }
                _ => Err(EvalError::TypeError(format!("pattern `{}` against a non-constructor", c.ident))),
            },
            Pattern::Tuple(ps) => match self.force(cell)? {
                Whnf::Tuple(items) if items.len() == ps.len() => {
                    for (p, a) in ps.iter().zip(items) {
                        if !self.matches(p, a, binds)? {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                }
                _ => Err(EvalError::TypeError("tuple pattern against a non-tuple".into())),
            },
        }
    }

    fn deep(&mut self, id: CellId) -> Result<Value, EvalError> {
        let v = self.force(id)?;
        self.force_value(v)
    }

    fn force_value(&mut self, v: Whnf<'p>) -> Result<Value, EvalError> {
        self.enter()?;
        let out = match v {
            Whnf::Int(n) => Value::Int(n),
            Whnf::Str(s) => Value::Str(s.to_string()),
            Whnf::Output(s) => Value::Output(s.to_string()),
            Whnf::Con(q, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.deep(a)?);
                }
                Value::Con(q.ident.clone(), vals)
            }
            Whnf::Tuple(items) => {
                let mut vals = Vec::with_capacity(items.len());
                for a in items {
                    vals.push(self.deep(a)?);
                }
                Value::Tuple(vals)
            }
            Whnf::Fun(f) => Value::Closure { name: f.name(), remaining: f.arity() - f.args.len() },
        };
        self.depth -= 1;
        Ok(out)
    }
}

fn module_name(m: &ModuleDef) -> &str {
    &m.name
}

/// Evaluates `expr` as if written in `module`, with statistics.
pub fn evaluate_with(
    project: &Project,
    module: &str,
    expr: &Expr,
    options: EvalOptions,
) -> (Result<Value, EvalError>, EvalStats) {
    let qualified = match qualify_project(project) {
        Ok(p) => p,
        Err(e) => return (Err(e.into()), EvalStats::default()),
    };
    let expr = match qualify_expr(&qualified, module, expr, &[]) {
        Ok(e) => e,
        Err(e) => return (Err(e.into()), EvalStats::default()),
    };
    // Deeply recursive programs need more stack than a default thread has.
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(STACK_BYTES)
            .spawn_scoped(scope, || {
                let mut machine = Machine::new(&qualified, options);
                let result = machine.whnf(&expr, &None).and_then(|v| machine.force_value(v));
                (result, machine.stats)
            })
            .expect("spawn evaluator thread")
            .join()
            .expect("evaluator thread panicked")
    })
}

/// Evaluates `expr` in the scope of `module` to a fully forced value.
pub fn evaluate(project: &Project, module: &str, expr: &Expr) -> Result<Value, EvalError> {
    evaluate_with(project, module, expr, EvalOptions::default()).0
}

/// Finds the module defining a zero-argument entry (`r2` or `Client.r2`).
pub fn locate_entry(project: &Project, entry: &str) -> Result<(String, String), EvalError> {
    let q = QName::parse(entry);
    let is_entry = |m: &ModuleDef| m.fun(&q.ident).is_some_and(|f| f.arity() == 0);
    let homes: Vec<&ModuleDef> = match &q.module {
        Some(m) => project.module(m).filter(|m| is_entry(m)).into_iter().collect(),
        None => project.modules.values().filter(|m| is_entry(m)).collect(),
    };
    match homes.as_slice() {
        [] => Err(EvalError::UnknownEntry(entry.to_string())),
        [m] => Ok((m.name.clone(), q.ident)),
        _ => Err(EvalError::AmbiguousEntry(entry.to_string())),
    }
}

/// Observation of a single entry under an explicit budget.
pub fn observe_entry_with(project: &Project, entry: &str, options: EvalOptions) -> Result<String, EvalError> {
    let (module, name) = locate_entry(project, entry)?;
    let expr = Expr::global(module.clone(), name);
    evaluate_with(project, &module, &expr, options).0.map(|v| v.observation())
}

/// Forces each entry and returns its observation: the printed text for
/// `print`, the shown value otherwise.
pub fn observe_entries(project: &Project, entries: &[String]) -> Result<BTreeMap<String, String>, EvalError> {
    entries.iter().map(|e| observe_entry_with(project, e, EvalOptions::default()).map(|o| (e.clone(), o))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("evaluation of the {} project failed: {error}", if *side == Side::Left { "left" } else { "right" })]
pub struct ObsEqError {
    pub side: Side,
    pub error: EvalError,
}

/// Per-entry observations of two projects.
pub fn compare_observations(
    a: &Project,
    b: &Project,
    entries: &[String],
) -> Result<Vec<(String, String, String)>, ObsEqError> {
    let left = observe_entries(a, entries).map_err(|error| ObsEqError { side: Side::Left, error })?;
    let right = observe_entries(b, entries).map_err(|error| ObsEqError { side: Side::Right, error })?;
    Ok(entries.iter().map(|e| (e.clone(), left[e].clone(), right[e].clone())).collect())
}

/// True iff both projects produce the same text for every entry.
pub fn observational_eq(a: &Project, b: &Project, entries: &[String]) -> Result<bool, ObsEqError> {
    Ok(compare_observations(a, b, entries)?.iter().all(|(_, x, y)| x == y))
}

/// Zero-argument bindings of `Client` whose names start with `r`.
pub fn default_entries(project: &Project) -> Vec<String> {
    project
        .module("Client")
        .map(|m| {
            m.decls
                .iter()
                .filter_map(TopDecl::as_fun)
                .filter(|f| f.arity() == 0 && f.name.starts_with('r'))
                .map(|f| f.name.clone())
                .collect()
        })
        .unwrap_or_default()
}
