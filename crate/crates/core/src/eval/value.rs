use std::fmt;

use crate::lang::render::quote;

/// A fully evaluated result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Str(String),
    /// Constructor with its (unqualified) name and arguments.
    Con(String, Vec<Value>),
    Tuple(Vec<Value>),
    /// A function still waiting for `remaining` arguments.
    Closure {
        name: String,
        remaining: usize,
    },
    /// Result of `print`.
    Output(String),
}

impl Value {
    /// Haskell-style `show`; `None` for values that have no text form.
    pub fn show(&self) -> Option<String> {
        let mut out = String::new();
        self.write(&mut out, false).then_some(out)
    }

    fn write(&self, out: &mut String, nested: bool) -> bool {
        match self {
            Value::Int(n) => {
                if nested && *n < 0 {
                    out.push_str(&format!("({n})"));
                } else {
                    out.push_str(&n.to_string());
                }
            }
            Value::Str(s) => out.push_str(&quote(s)),
            Value::Con(c, args) if args.is_empty() => out.push_str(c),
            Value::Con(c, args) => {
                if nested {
                    out.push('(');
                }
                out.push_str(c);
                for a in args {
                    out.push(' ');
                    if !a.write(out, true) {
                        return false;
                    }
                }
                if nested {
                    out.push(')');
                }
            }
            Value::Tuple(items) => {
                out.push('(');
                for (i, a) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    if !a.write(out, false) {
                        return false;
                    }
                }
                out.push(')');
            }
            Value::Closure { .. } | Value::Output(_) => return false,
        }
        true
    }

    /// Text an entry produces: the printed text for `print`, the shown
    /// form otherwise.
    pub fn observation(&self) -> String {
        match self {
            Value::Output(s) => s.clone(),
            other => other.to_string(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Closure { name, remaining } => write!(f, "<function {name}/{remaining}>"),
            Value::Output(s) => write!(f, "<output {}>", quote(s)),
            other => f.write_str(&other.show().unwrap_or_default()),
        }
    }
}
