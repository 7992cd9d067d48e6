//! Arithmetic over numbers, `pi`/`π`, `Trev`/`T_rev`, `sqrt(..)`, the four
//! operators, parentheses and unary minus.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("cannot parse '{input}': {reason}")]
pub struct ExprError {
    pub input: String,
    pub reason: String,
}

/// Values bound to the symbolic names.
#[derive(Debug, Clone, Copy)]
pub struct Symbols {
    /// T_rev = π/χ; None when the context has no Kerr coupling.
    pub t_rev: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
    Open,
    Close,
}

fn tokenize(s: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut k = i + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    i = k;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<f64>().map_err(|_| format!("bad number '{text}'"))?;
            out.push(Token::Num(v));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else if c == '(' {
            out.push(Token::Open);
            i += 1;
        } else if c == ')' {
            out.push(Token::Close);
            i += 1;
        } else {
            return Err(format!("unexpected character '{c}'"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    symbols: &'a Symbols,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<f64, String> {
        let mut acc = self.term()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<f64, String> {
        let mut acc = self.unary()?;
        while let Some(Token::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' { acc * rhs } else { acc / rhs };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<f64, String> {
        if let Some(Token::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        if let Some(Token::Op('+')) = self.peek() {
            self.pos += 1;
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<f64, String> {
        match self.next() {
            Some(Token::Num(v)) => Ok(v),
            Some(Token::Open) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Token::Close) => Ok(v),
                    _ => Err("missing ')'".into()),
                }
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "pi" | "π" | "PI" => Ok(PI),
                "Trev" | "T_rev" => self
                    .symbols
                    .t_rev
                    .ok_or_else(|| "T_rev is not available here".to_string()),
                "sqrt" => sqrt(self.atom()?),
                other => match other.strip_prefix("sqrt").map(str::parse::<f64>) {
                    Some(Ok(v)) => sqrt(v),
                    _ => Err(format!("unknown name '{other}'")),
                },
            },
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}

fn sqrt(v: f64) -> Result<f64, String> {
    if v < 0.0 {
        return Err("sqrt of a negative number".into());
    }
    Ok(v.sqrt())
}

/// Evaluates an expression; `sqrt2` is shorthand for `sqrt(2)`.
pub fn eval(input: &str, symbols: &Symbols) -> Result<f64, ExprError> {
    let err = |reason: String| ExprError {
        input: input.to_string(),
        reason,
    };
    let tokens = tokenize(input).map_err(err)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        symbols,
    };
    let v = p.expr().map_err(err)?;
    if p.pos != p.tokens.len() {
        return Err(err("trailing input".into()));
    }
    if !v.is_finite() {
        return Err(err("value is not finite".into()));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str) -> Result<f64, ExprError> {
        eval(s, &Symbols { t_rev: Some(PI / 5.0) })
    }

    #[test]
    fn numbers_and_operators() {
        assert_eq!(ev("1 + 2 * 3").unwrap(), 7.0);
        assert_eq!(ev("(1 + 2) * 3").unwrap(), 9.0);
        assert_eq!(ev("-4 / 2").unwrap(), -2.0);
        assert_eq!(ev("1.5e2").unwrap(), 150.0);
        assert_eq!(ev("2 - -1").unwrap(), 3.0);
    }

    #[test]
    fn symbols() {
        assert_eq!(ev("pi/10").unwrap(), PI / 10.0);
        assert_eq!(ev("π/4").unwrap(), PI / 4.0);
        assert_eq!(ev("Trev/8").unwrap(), PI / 5.0 / 8.0);
        assert_eq!(ev("T_rev/sqrt(2)").unwrap(), PI / 5.0 / 2f64.sqrt());
        assert_eq!(ev("Trev/sqrt2").unwrap(), PI / 5.0 / 2f64.sqrt());
        assert_eq!(ev("1/sqrt 2").unwrap(), 1.0 / 2f64.sqrt());
    }

    #[test]
    fn errors() {
        assert!(ev("pi/").is_err());
        assert!(ev("foo").is_err());
        assert!(ev("(1").is_err());
        assert!(ev("1 2").is_err());
        assert!(ev("1/0").is_err());
        assert!(ev("sqrt(-1)").is_err());
        assert!(eval("Trev", &Symbols { t_rev: None }).is_err());
    }
}
