//! Recursive-descent parser with a small layout rule: a token that starts a
//! line at or left of the current block column ends the construct being
//! parsed. Top-level declarations live in column 1; `where` locals and
//! `case` alternatives open blocks at the column of their first token.

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::SyntaxError;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    layout: Vec<usize>,
}

type PResult<T> = Result<T, SyntaxError>;

fn is_reserved_binder(name: &str) -> bool {
    name == "show" || name == "print"
}

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0, layout: vec![1] })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn tok(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        let t = self.peek();
        Err(SyntaxError::Parse { line: t.line, col: t.col, message: message.into() })
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        let found = match self.tok() {
            Tok::Eof => "end of input".to_string(),
            other => format!("{other:?}"),
        };
        self.err(format!("expected {wanted}, found {found}"))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> PResult<Token> {
        if *self.tok() == tok {
            Ok(self.bump())
        } else {
            self.unexpected(wanted)
        }
    }

    /// True when the current token closes the innermost layout block.
    fn stop(&self) -> bool {
        let t = self.peek();
        matches!(t.tok, Tok::Eof) || (t.line_start && t.col <= *self.layout.last().unwrap_or(&0))
    }

    fn lower(&mut self, wanted: &str) -> PResult<String> {
        match self.tok().clone() {
            Tok::Lower(name) => {
                self.bump();
                Ok(name)
            }
            _ => self.unexpected(wanted),
        }
    }

    fn binder(&mut self, wanted: &str) -> PResult<String> {
        let at = self.peek().clone();
        let name = self.lower(wanted)?;
        if is_reserved_binder(&name) {
            return Err(SyntaxError::Parse {
                line: at.line,
                col: at.col,
                message: format!("`{name}` is a builtin and cannot be bound"),
            });
        }
        Ok(name)
    }

    fn upper(&mut self, wanted: &str) -> PResult<String> {
        match self.tok().clone() {
            Tok::Upper(name) => {
                self.bump();
                Ok(name)
            }
            _ => self.unexpected(wanted),
        }
    }

    // ---- module level -------------------------------------------------

    fn module(&mut self) -> PResult<ModuleDef> {
        while matches!(self.tok(), Tok::Comment(_)) {
            self.bump();
        }
        self.expect(Tok::Module, "`module`")?;
        let name = self.upper("module name")?;
        let exports = if *self.tok() == Tok::LParen {
            self.bump();
            let mut items = Vec::new();
            if *self.tok() != Tok::RParen {
                loop {
                    match self.tok().clone() {
                        Tok::Lower(n) | Tok::Upper(n) => {
                            self.bump();
                            items.push(n);
                        }
                        _ => return self.unexpected("exported name"),
                    }
                    if *self.tok() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen, "`)`")?;
            Some(items)
        } else {
            None
        };
        self.expect(Tok::Where, "`where`")?;
        let mut module = ModuleDef { name, exports, imports: Vec::new(), decls: Vec::new() };

        let mut pending: Vec<(usize, String)> = Vec::new();
        loop {
            let t = self.peek().clone();
            if !matches!(t.tok, Tok::Eof) && !(t.line_start && t.col == 1) {
                return self.unexpected("a top-level declaration in column 1");
            }
            match t.tok {
                Tok::Eof => break,
                Tok::Comment(text) => {
                    self.bump();
                    if pending.last().is_some_and(|(l, _)| *l + 1 != t.line) {
                        pending.clear();
                    }
                    pending.push((t.line, text));
                    continue;
                }
                Tok::Import => {
                    self.bump();
                    let m = self.upper("module name after `import`")?;
                    module.imports.push(m);
                }
                Tok::Data => {
                    let data = self.data_decl()?;
                    if module.decls.iter().any(|d| d.name() == data.name) {
                        return Err(SyntaxError::DuplicateBinding { name: data.name, line: t.line });
                    }
                    let comment = take_comment(&mut pending, t.line);
                    module.decls.push(TopDecl { comment, kind: DeclKind::Data(data) });
                }
                Tok::Lower(_) => {
                    let (name, eq) = self.equation()?;
                    let comment = take_comment(&mut pending, t.line);
                    match module.decls.last_mut().and_then(TopDecl::as_fun_mut) {
                        Some(f) if f.name == name => {
                            if f.arity() != eq.params.len() {
                                return Err(SyntaxError::Parse {
                                    line: t.line,
                                    col: 1,
                                    message: format!("equations of `{name}` have different numbers of arguments"),
                                });
                            }
                            f.equations.push(eq);
                        }
                        _ => {
                            if module.decls.iter().any(|d| d.name() == name) {
                                return Err(SyntaxError::DuplicateBinding { name, line: t.line });
                            }
                            module
                                .decls
                                .push(TopDecl { comment, kind: DeclKind::Fun(FunDecl { name, equations: vec![eq] }) });
                        }
                    }
                }
                _ => return self.unexpected("a top-level declaration"),
            }
            pending.clear();
        }
        Ok(module)
    }

    fn data_decl(&mut self) -> PResult<DataDecl> {
        self.expect(Tok::Data, "`data`")?;
        let name = self.upper("type name")?;
        self.expect(Tok::Equals, "`=`")?;
        let mut constructors = Vec::new();
        loop {
            let cname = self.upper("constructor name")?;
            let mut atoms: Vec<Vec<String>> = Vec::new();
            let mut tupled = false;
            while !self.stop() {
                match self.tok().clone() {
                    Tok::Upper(t) => {
                        self.bump();
                        atoms.push(vec![t]);
                    }
                    Tok::LParen => {
                        self.bump();
                        let mut items = vec![self.upper("type name")?];
                        while *self.tok() == Tok::Comma {
                            self.bump();
                            items.push(self.upper("type name")?);
                        }
                        self.expect(Tok::RParen, "`)`")?;
                        if items.len() > 1 {
                            tupled = true;
                        }
                        atoms.push(items);
                    }
                    _ => break,
                }
            }
            let args = if tupled {
                if atoms.len() != 1 {
                    return self.err(format!("constructor `{cname}` mixes curried and tupled arguments"));
                }
                ArgShape::Tupled(atoms.remove(0))
            } else {
                ArgShape::Curried(atoms.into_iter().flatten().collect())
            };
            constructors.push(ConstructorDef { name: cname, args });
            if *self.tok() == Tok::Bar && !self.stop() {
                self.bump();
            } else {
                break;
            }
        }
        if !self.stop() {
            return self.unexpected("end of data declaration");
        }
        Ok(DataDecl { name, constructors })
    }

    fn equation(&mut self) -> PResult<(String, Equation)> {
        let name = self.binder("function name")?;
        let mut params = Vec::new();
        while *self.tok() != Tok::Equals {
            if self.stop() {
                return self.unexpected("`=`");
            }
            params.push(self.apat()?);
        }
        self.bump();
        let rhs = self.expr()?;
        let mut locals = Vec::new();
        if *self.tok() == Tok::Where && !self.stop() {
            self.bump();
            if self.stop() {
                return self.unexpected("a local definition after `where`");
            }
            let col = self.peek().col;
            self.layout.push(col);
            loop {
                let lname = self.binder("local name")?;
                let mut lparams = Vec::new();
                while *self.tok() != Tok::Equals {
                    lparams.push(self.binder("parameter name or `=`")?);
                }
                self.bump();
                let body = self.expr()?;
                locals.push(LocalDef { name: lname, params: lparams, body });
                let t = self.peek();
                if t.line_start && t.col == col && matches!(t.tok, Tok::Lower(_)) {
                    continue;
                }
                break;
            }
            self.layout.pop();
        }
        if !self.stop() {
            return self.unexpected("end of equation");
        }
        Ok((name, Equation { params, rhs, locals }))
    }

    // ---- expressions --------------------------------------------------

    fn expr(&mut self) -> PResult<Expr> {
        self.op_expr(0)
    }

    fn binop(&self) -> Option<(BinOp, u8, bool)> {
        match self.tok() {
            Tok::PlusPlus => Some((BinOp::Concat, 5, true)),
            Tok::Plus => Some((BinOp::Add, 6, false)),
            Tok::Star => Some((BinOp::Mul, 7, false)),
            _ => None,
        }
    }

    fn op_expr(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.operand()?;
        loop {
            if self.stop() {
                break;
            }
            let Some((op, prec, right)) = self.binop() else { break };
            if prec < min_prec {
                break;
            }
            self.bump();
            let rhs = self.op_expr(if right { prec } else { prec + 1 })?;
            lhs = Expr::infix(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn operand(&mut self) -> PResult<Expr> {
        if self.stop() {
            return self.unexpected("an expression");
        }
        match self.tok() {
            Tok::Case => return self.case_expr(),
            Tok::Let => return self.let_expr(),
            _ => {}
        }
        let mut f = self.aexpr()?;
        while !self.stop() && self.starts_aexpr() {
            let a = self.aexpr()?;
            f = f.app(a);
        }
        Ok(f)
    }

    fn starts_aexpr(&self) -> bool {
        matches!(
            self.tok(),
            Tok::Lower(_)
                | Tok::Upper(_)
                | Tok::QualLower(..)
                | Tok::QualUpper(..)
                | Tok::Int(_)
                | Tok::Str(_)
                | Tok::LParen
        )
    }

    fn aexpr(&mut self) -> PResult<Expr> {
        let e = match self.tok().clone() {
            Tok::Lower(n) => match n.as_str() {
                "show" => Expr::Builtin(Builtin::Show),
                "print" => Expr::Builtin(Builtin::Print),
                _ => Expr::Var(QName::local(n)),
            },
            Tok::QualLower(m, n) => Expr::Var(QName::global(m, n)),
            Tok::Upper(n) => Expr::Con(QName::local(n)),
            Tok::QualUpper(m, n) => Expr::Con(QName::global(m, n)),
            Tok::Int(n) => Expr::Int(n),
            Tok::Str(s) => Expr::Str(s),
            Tok::LParen => {
                self.bump();
                self.layout.push(0);
                let first = self.expr()?;
                let e = if *self.tok() == Tok::Comma {
                    let mut items = vec![first];
                    while *self.tok() == Tok::Comma {
                        self.bump();
                        items.push(self.expr()?);
                    }
                    Expr::Tuple(items)
                } else {
                    first
                };
                self.layout.pop();
                self.expect(Tok::RParen, "`)`")?;
                return Ok(e);
            }
            _ => return self.unexpected("an expression"),
        };
        self.bump();
        Ok(e)
    }

    fn case_expr(&mut self) -> PResult<Expr> {
        self.expect(Tok::Case, "`case`")?;
        let scrut = self.expr()?;
        self.expect(Tok::Of, "`of`")?;
        let mut alts = Vec::new();
        if *self.tok() == Tok::LBrace {
            self.bump();
            self.layout.push(0);
            loop {
                alts.push(self.alt()?);
                if *self.tok() == Tok::Semi {
                    self.bump();
                } else {
                    break;
                }
            }
            self.layout.pop();
            self.expect(Tok::RBrace, "`}`")?;
        } else {
            if self.stop() {
                return self.unexpected("a case alternative");
            }
            let col = self.peek().col;
            self.layout.push(col);
            loop {
                alts.push(self.alt()?);
                let t = self.peek();
                if t.tok == Tok::Semi && !(t.line_start && t.col < col) {
                    self.bump();
                    continue;
                }
                let t = self.peek();
                if t.line_start && t.col == col && !matches!(t.tok, Tok::Eof | Tok::Comment(_) | Tok::Where) {
                    continue;
                }
                break;
            }
            self.layout.pop();
        }
        Ok(Expr::Case(Box::new(scrut), alts))
    }

    fn alt(&mut self) -> PResult<Alt> {
        // The alternative's first token sits on the block column; only later
        // lines are subject to the layout rule.
        let pat = {
            let saved = self.layout.clone();
            self.layout.push(0);
            let p = self.pattern();
            self.layout = saved;
            p?
        };
        self.expect(Tok::Arrow, "`->`")?;
        let body = self.expr()?;
        Ok(Alt { pat, body })
    }

    fn let_expr(&mut self) -> PResult<Expr> {
        self.expect(Tok::Let, "`let`")?;
        let name = self.binder("let-bound name")?;
        self.expect(Tok::Equals, "`=`")?;
        let value = self.expr()?;
        self.expect(Tok::In, "`in`")?;
        let body = self.expr()?;
        Ok(Expr::Let(name, Box::new(value), Box::new(body)))
    }

    // ---- patterns -----------------------------------------------------

    fn pattern(&mut self) -> PResult<Pattern> {
        let con = match self.tok().clone() {
            Tok::Upper(n) => Some(QName::local(n)),
            Tok::QualUpper(m, n) => Some(QName::global(m, n)),
            _ => None,
        };
        match con {
            Some(c) => {
                self.bump();
                let mut args = Vec::new();
                while !self.stop() && self.starts_apat() {
                    args.push(self.apat()?);
                }
                Ok(Pattern::Con(c, args))
            }
            None => self.apat(),
        }
    }

    fn starts_apat(&self) -> bool {
        matches!(
            self.tok(),
            Tok::Lower(_) | Tok::Underscore | Tok::Int(_) | Tok::Upper(_) | Tok::QualUpper(..) | Tok::LParen
        )
    }

    fn apat(&mut self) -> PResult<Pattern> {
        let p = match self.tok().clone() {
            Tok::Lower(_) => return Ok(Pattern::Var(self.binder("pattern variable")?)),
            Tok::Underscore => Pattern::Wild,
            Tok::Int(n) => Pattern::Int(n),
            Tok::Upper(n) => Pattern::Con(QName::local(n), Vec::new()),
            Tok::QualUpper(m, n) => Pattern::Con(QName::global(m, n), Vec::new()),
            Tok::LParen => {
                self.bump();
                self.layout.push(0);
                let first = self.pattern()?;
                let p = if *self.tok() == Tok::Comma {
                    let mut items = vec![first];
                    while *self.tok() == Tok::Comma {
                        self.bump();
                        items.push(self.pattern()?);
                    }
                    Pattern::Tuple(items)
                } else {
                    first
                };
                self.layout.pop();
                self.expect(Tok::RParen, "`)`")?;
                return Ok(p);
            }
            _ => return self.unexpected("a pattern"),
        };
        self.bump();
        Ok(p)
    }
}

fn take_comment(pending: &mut Vec<(usize, String)>, decl_line: usize) -> Option<CommentBlock> {
    let attached = pending.last().is_some_and(|(l, _)| l + 1 == decl_line);
    let lines: Vec<String> = pending.drain(..).map(|(_, t)| t).collect();
    (attached && !lines.is_empty()).then_some(CommentBlock { lines })
}

/// Parses the text of one module file.
pub fn parse_module(src: &str) -> Result<ModuleDef, SyntaxError> {
    let mut p = Parser::new(src)?;
    let m = p.module()?;
    Ok(m)
}

/// Parses a single expression, e.g. `eval e1 + 1`.
pub fn parse_expr(src: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser::new(src)?;
    p.layout = vec![0];
    let e = p.expr()?;
    if *p.tok() != Tok::Eof {
        return p.unexpected("end of expression");
    }
    Ok(e)
}

/// Parses the text of a single top-level declaration (possibly several
/// equations of one function).
pub fn parse_decl(src: &str) -> Result<TopDecl, SyntaxError> {
    let wrapped = format!("module Fragment where\n{src}");
    let m = parse_module(&wrapped).map_err(|e| match e {
        SyntaxError::Parse { line, col, message } => SyntaxError::Parse { line: line - 1, col, message },
        SyntaxError::DuplicateBinding { name, line } => SyntaxError::DuplicateBinding { name, line: line - 1 },
    })?;
    if !m.imports.is_empty() || m.decls.len() != 1 {
        return Err(SyntaxError::Parse { line: 1, col: 1, message: "expected exactly one declaration".into() });
    }
    Ok(m.decls.into_iter().next().expect("one declaration"))
}
