use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Lower(String),
    Upper(String),
    QualLower(String, String),
    QualUpper(String, String),
    Int(i64),
    Str(String),
    Module,
    Where,
    Import,
    Data,
    Case,
    Of,
    Let,
    In,
    Equals,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Arrow,
    Bar,
    Underscore,
    Plus,
    PlusPlus,
    Star,
    /// A `--` comment starting in column 1; other comments are discarded.
    Comment(String),
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// First token on its line.
    pub line_start: bool,
}

pub const KEYWORDS: &[&str] = &["module", "where", "import", "data", "case", "of", "let", "in", "show", "print"];

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut out = Vec::new();
    for (lineno, line) in src.lines().enumerate() {
        let line_no = lineno + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        let mut first = true;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == ' ' || c == '\t' || c == '\r' {
                i += 1;
                continue;
            }
            let err = |msg: String| SyntaxError::Parse { line: line_no, col, message: msg };
            if c == '-' && chars.get(i + 1) == Some(&'-') {
                if col == 1 {
                    let text: String = chars[i + 2..].iter().collect();
                    let text = text.strip_prefix(' ').unwrap_or(&text).to_string();
                    out.push(Token { tok: Tok::Comment(text), line: line_no, col, line_start: true });
                }
                break;
            }
            let start = i;
            let negative = c == '-'
                && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())
                && matches!(out.last(), Some(Token { tok: Tok::LParen, .. }));
            let tok = if c.is_ascii_digit() || negative {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                Tok::Int(text.parse().map_err(|_| err(format!("integer literal `{text}` out of range")))?)
            } else if c == '"' {
                i += 1;
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None => return Err(err("unterminated string literal".into())),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            let esc = chars.get(i + 1).ok_or_else(|| err("unterminated escape".into()))?;
                            s.push(match esc {
                                'n' => '\n',
                                't' => '\t',
                                '\\' => '\\',
                                '"' => '"',
                                other => return Err(err(format!("unknown escape `\\{other}`"))),
                            });
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                Tok::Str(s)
            } else if c.is_ascii_alphabetic() || c == '_' {
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let qualified = c.is_ascii_uppercase()
                    && chars.get(i) == Some(&'.')
                    && chars.get(i + 1).is_some_and(|ch| ch.is_ascii_alphabetic() || *ch == '_');
                if qualified {
                    i += 1;
                    let s = i;
                    while i < chars.len() && is_ident_char(chars[i]) {
                        i += 1;
                    }
                    let name: String = chars[s..i].iter().collect();
                    if name.starts_with(|ch: char| ch.is_ascii_uppercase()) {
                        Tok::QualUpper(word, name)
                    } else {
                        Tok::QualLower(word, name)
                    }
                } else if c.is_ascii_uppercase() {
                    Tok::Upper(word)
                } else {
                    match word.as_str() {
                        "_" => Tok::Underscore,
                        "module" => Tok::Module,
                        "where" => Tok::Where,
                        "import" => Tok::Import,
                        "data" => Tok::Data,
                        "case" => Tok::Case,
                        "of" => Tok::Of,
                        "let" => Tok::Let,
                        "in" => Tok::In,
                        _ => Tok::Lower(word),
                    }
                }
            } else {
                let next = chars.get(i + 1).copied();
                let (tok, len) = match (c, next) {
                    ('-', Some('>')) => (Tok::Arrow, 2),
                    ('+', Some('+')) => (Tok::PlusPlus, 2),
                    ('+', _) => (Tok::Plus, 1),
                    ('*', _) => (Tok::Star, 1),
                    ('=', _) => (Tok::Equals, 1),
                    ('(', _) => (Tok::LParen, 1),
                    (')', _) => (Tok::RParen, 1),
                    ('{', _) => (Tok::LBrace, 1),
                    ('}', _) => (Tok::RBrace, 1),
                    (',', _) => (Tok::Comma, 1),
                    (';', _) => (Tok::Semi, 1),
                    ('|', _) => (Tok::Bar, 1),
                    _ => return Err(err(format!("unexpected character `{c}`"))),
                };
                i += len;
                tok
            };
            out.push(Token { tok, line: line_no, col, line_start: first });
            first = false;
        }
    }
    let last_line = src.lines().count() + 1;
    out.push(Token { tok: Tok::Eof, line: last_line, col: 1, line_start: true });
    Ok(out)
}
