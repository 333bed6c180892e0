//! Abstract syntax of the object language.
//!
//! A [`Project`] is a closed set of modules. Inside the refactoring engine
//! every reference to a top-level binding or constructor carries its home
//! module in [`QName::module`]; only locally bound variables stay
//! unqualified. Text read from disk uses the minimal qualification the
//! module needs (see [`crate::resolve::display_project`]).

use std::collections::BTreeMap;
use std::fmt;

/// A possibly module-qualified identifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QName {
    pub module: Option<String>,
    pub ident: String,
}

impl QName {
    pub fn local(ident: impl Into<String>) -> Self {
        QName { module: None, ident: ident.into() }
    }

    pub fn global(module: impl Into<String>, ident: impl Into<String>) -> Self {
        QName { module: Some(module.into()), ident: ident.into() }
    }

    /// Parses `M.x` or `x`.
    pub fn parse(text: &str) -> Self {
        match text.split_once('.') {
            Some((m, x)) if m.starts_with(|c: char| c.is_ascii_uppercase()) && !x.is_empty() => QName::global(m, x),
            _ => QName::local(text),
        }
    }

    pub fn is_local(&self) -> bool {
        self.module.is_none()
    }
}

impl fmt::Display for QName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.module {
            Some(m) => write!(f, "{m}.{}", self.ident),
            None => f.write_str(&self.ident),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Mul,
    Concat,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Mul => "*",
            BinOp::Concat => "++",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Show,
    Print,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Show => "show",
            Builtin::Print => "print",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(QName),
    /// Constructor reference; applied through [`Expr::App`] like a function.
    Con(QName),
    Int(i64),
    Str(String),
    App(Box<Expr>, Box<Expr>),
    Infix(BinOp, Box<Expr>, Box<Expr>),
    /// Arity is at least 2.
    Tuple(Vec<Expr>),
    Case(Box<Expr>, Vec<Alt>),
    /// Recursive single binding: the name scopes over its own value.
    Let(String, Box<Expr>, Box<Expr>),
    Builtin(Builtin),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alt {
    pub pat: Pattern,
    pub body: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pattern {
    Var(String),
    Int(i64),
    /// A tupled constructor pattern `Add (a, b)` has a single tuple argument.
    Con(QName, Vec<Pattern>),
    Tuple(Vec<Pattern>),
    Wild,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalDef {
    pub name: String,
    pub params: Vec<String>,
    pub body: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub params: Vec<Pattern>,
    pub rhs: Expr,
    /// `where` bindings; mutually recursive, scoped over the rhs.
    pub locals: Vec<LocalDef>,
}

/// A function or value binding. Values are functions of arity zero with a
/// single equation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunDecl {
    pub name: String,
    pub equations: Vec<Equation>,
}

impl FunDecl {
    pub fn arity(&self) -> usize {
        self.equations.first().map_or(0, |eq| eq.params.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ArgShape {
    Curried(Vec<String>),
    Tupled(Vec<String>),
}

impl ArgShape {
    /// Number of arguments the constructor takes when applied.
    pub fn arity(&self) -> usize {
        match self {
            ArgShape::Curried(args) => args.len(),
            ArgShape::Tupled(_) => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstructorDef {
    pub name: String,
    pub args: ArgShape,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DataDecl {
    pub name: String,
    pub constructors: Vec<ConstructorDef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DeclKind {
    Data(DataDecl),
    Fun(FunDecl),
}

/// Contiguous `--` lines directly above a declaration, without the marker.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CommentBlock {
    pub lines: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TopDecl {
    pub comment: Option<CommentBlock>,
    pub kind: DeclKind,
}

impl TopDecl {
    pub fn fun(decl: FunDecl) -> Self {
        TopDecl { comment: None, kind: DeclKind::Fun(decl) }
    }

    pub fn name(&self) -> &str {
        match &self.kind {
            DeclKind::Data(d) => &d.name,
            DeclKind::Fun(f) => &f.name,
        }
    }

    pub fn as_fun(&self) -> Option<&FunDecl> {
        match &self.kind {
            DeclKind::Fun(f) => Some(f),
            DeclKind::Data(_) => None,
        }
    }

    pub fn as_fun_mut(&mut self) -> Option<&mut FunDecl> {
        match &mut self.kind {
            DeclKind::Fun(f) => Some(f),
            DeclKind::Data(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleDef {
    pub name: String,
    pub exports: Option<Vec<String>>,
    pub imports: Vec<String>,
    pub decls: Vec<TopDecl>,
}

impl ModuleDef {
    pub fn new(name: impl Into<String>) -> Self {
        ModuleDef { name: name.into(), exports: None, imports: Vec::new(), decls: Vec::new() }
    }

    pub fn fun_index(&self, name: &str) -> Option<usize> {
        self.decls.iter().position(|d| d.as_fun().is_some_and(|f| f.name == name))
    }

    pub fn fun(&self, name: &str) -> Option<&FunDecl> {
        self.decls.iter().filter_map(TopDecl::as_fun).find(|f| f.name == name)
    }

    pub fn fun_mut(&mut self, name: &str) -> Option<&mut FunDecl> {
        self.decls.iter_mut().filter_map(TopDecl::as_fun_mut).find(|f| f.name == name)
    }

    pub fn data_decls(&self) -> impl Iterator<Item = &DataDecl> {
        self.decls.iter().filter_map(|d| match &d.kind {
            DeclKind::Data(data) => Some(data),
            DeclKind::Fun(_) => None,
        })
    }

    pub fn constructor(&self, name: &str) -> Option<&ConstructorDef> {
        self.data_decls().flat_map(|d| d.constructors.iter()).find(|c| c.name == name)
    }

    /// Names of top-level value bindings, in declaration order.
    pub fn value_names(&self) -> impl Iterator<Item = &str> {
        self.decls.iter().filter_map(TopDecl::as_fun).map(|f| f.name.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Project {
    pub modules: BTreeMap<String, ModuleDef>,
}

impl Project {
    pub fn new(modules: impl IntoIterator<Item = ModuleDef>) -> Self {
        Project { modules: modules.into_iter().map(|m| (m.name.clone(), m)).collect() }
    }

    pub fn module(&self, name: &str) -> Option<&ModuleDef> {
        self.modules.get(name)
    }

    pub fn module_mut(&mut self, name: &str) -> Option<&mut ModuleDef> {
        self.modules.get_mut(name)
    }
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(QName::local(name))
    }

    pub fn global(module: impl Into<String>, name: impl Into<String>) -> Self {
        Expr::Var(QName::global(module, name))
    }

    pub fn app(self, arg: Expr) -> Self {
        Expr::App(Box::new(self), Box::new(arg))
    }

    pub fn apply(self, args: impl IntoIterator<Item = Expr>) -> Self {
        args.into_iter().fold(self, Expr::app)
    }

    pub fn infix(op: BinOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Infix(op, Box::new(lhs), Box::new(rhs))
    }

    /// Head and arguments of a curried application spine.
    pub fn spine(&self) -> (&Expr, Vec<&Expr>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Expr::App(f, a) = head {
            args.push(a.as_ref());
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn as_var(&self) -> Option<&QName> {
        match self {
            Expr::Var(q) => Some(q),
            _ => None,
        }
    }
}

impl Pattern {
    /// Variables bound by the pattern, left to right.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Pattern::Var(v) => out.push(v.clone()),
            Pattern::Con(_, ps) | Pattern::Tuple(ps) => ps.iter().for_each(|p| p.collect_vars(out)),
            Pattern::Int(_) | Pattern::Wild => {}
        }
    }

    pub fn rename_vars(&mut self, f: &impl Fn(&str) -> Option<String>) {
        match self {
            Pattern::Var(v) => {
                if let Some(new) = f(v) {
                    *v = new;
                }
            }
            Pattern::Con(_, ps) | Pattern::Tuple(ps) => ps.iter_mut().for_each(|p| p.rename_vars(f)),
            Pattern::Int(_) | Pattern::Wild => {}
        }
    }

    /// The expression a pattern denotes, when it has no wildcard.
    pub fn to_expr(&self) -> Option<Expr> {
        Some(match self {
            Pattern::Var(v) => Expr::var(v.clone()),
            Pattern::Int(n) => Expr::Int(*n),
            Pattern::Con(c, ps) => {
                let args = ps.iter().map(Pattern::to_expr).collect::<Option<Vec<_>>>()?;
                Expr::Con(c.clone()).apply(args)
            }
            Pattern::Tuple(ps) => Expr::Tuple(ps.iter().map(Pattern::to_expr).collect::<Option<_>>()?),
            Pattern::Wild => return None,
        })
    }
}

impl Equation {
    pub fn pattern_vars(&self) -> Vec<String> {
        self.params.iter().flat_map(Pattern::vars).collect()
    }

    /// The first constructor pattern among the parameters, if any.
    pub fn first_constructor(&self) -> Option<(usize, &QName, &[Pattern])> {
        self.params.iter().enumerate().find_map(|(i, p)| match p {
            Pattern::Con(c, args) => Some((i, c, args.as_slice())),
            _ => None,
        })
    }
}
