//! Line-oriented problem grammar and a precedence-climbing expression parser.

use super::expr::{BinOp, Expr, Func, Literal};
use super::{MapSpec, ParseError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            out.push(Token { tok: Tok::Num(chars[start..i].iter().collect()), col });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), col });
        } else if "+-*/^(),".contains(c) {
            out.push(Token { tok: Tok::Op(c), col });
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                line,
                col,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct ExprParser {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
    end_col: usize,
    dim: usize,
    has_param: bool,
}

impl ExprParser {
    fn err(&self, message: impl Into<String>) -> ParseError {
        let col = self.toks.get(self.pos).map_or(self.end_col, |t| t.col);
        ParseError::Syntax { line: self.line, col, message: message.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_op(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat_op('+') {
                BinOp::Add
            } else if self.eat_op('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat_op('*') {
                BinOp::Mul
            } else if self.eat_op('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            lhs = Expr::binary(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat_op('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        let negative = self.eat_op('-');
        let exp = match self.peek().cloned() {
            Some(Tok::Num(s)) if s.bytes().all(|b| b.is_ascii_digit()) => {
                let n: i32 = s.parse().map_err(|_| self.err("exponent out of range"))?;
                self.pos += 1;
                if negative {
                    -n
                } else {
                    n
                }
            }
            _ => return Err(self.err("exponent must be an integer literal")),
        };
        Ok(Expr::Pow(Box::new(base), exp))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let Some(tok) = self.toks.get(self.pos).cloned() else {
            return Err(self.err("unexpected end of expression"));
        };
        match tok.tok {
            Tok::Num(s) => {
                self.pos += 1;
                Literal::parse(&s).map(Expr::Const).ok_or_else(|| ParseError::Syntax {
                    line: self.line,
                    col: tok.col,
                    message: format!("invalid number '{s}'"),
                })
            }
            Tok::Op('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if let Some(func) = Func::from_name(&name) {
                    self.expect_op('(')?;
                    let mut args = vec![self.expr()?];
                    while self.eat_op(',') {
                        args.push(self.expr()?);
                    }
                    self.expect_op(')')?;
                    if args.len() != func.arity() {
                        return Err(ParseError::Syntax {
                            line: self.line,
                            col: tok.col,
                            message: format!(
                                "{} takes {} argument(s), got {}",
                                func.name(),
                                func.arity(),
                                args.len()
                            ),
                        });
                    }
                    return Ok(Expr::Call(func, args));
                }
                if name == "t" && self.has_param {
                    return Ok(Expr::Param);
                }
                if let Some(idx) = name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
                    if idx >= 1 && idx <= self.dim && !name[1..].starts_with('0') {
                        return Ok(Expr::Var(idx - 1));
                    }
                }
                Err(ParseError::UnknownIdentifier { name, line: self.line, col: tok.col })
            }
            Tok::Op(c) => Err(self.err(format!("unexpected '{c}'"))),
        }
    }
}

/// Parses one expression over `x1..x{dim}` (and `t` if `has_param`).
pub fn parse_expr(src: &str, dim: usize, has_param: bool) -> Result<Expr, ParseError> {
    parse_expr_at(src, dim, has_param, 1, 1)
}

fn parse_expr_at(
    src: &str,
    dim: usize,
    has_param: bool,
    line: usize,
    col0: usize,
) -> Result<Expr, ParseError> {
    let toks = lex(src, line, col0)?;
    let mut p = ExprParser {
        toks,
        pos: 0,
        line,
        end_col: col0 + src.chars().count(),
        dim,
        has_param,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input after expression"));
    }
    Ok(e)
}

/// A problem file split into its parts. Domain and `set` lines are kept as
/// raw text for the problem layer.
#[derive(Debug, Clone)]
pub struct Program {
    pub map: MapSpec,
    pub domain: Option<(usize, String)>,
    pub settings: Vec<(usize, String, String)>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    let mut dim: Option<usize> = None;
    let mut has_param = false;
    let mut components: Vec<Option<Expr>> = Vec::new();
    let mut domain = None;
    let mut settings = Vec::new();

    for (ln, raw) in source.lines().enumerate() {
        let line_no = ln + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        let (keyword, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let syntax = |col: usize, message: &str| ParseError::Syntax {
            line: line_no,
            col,
            message: message.to_string(),
        };
        match keyword {
            "dim" => {
                if dim.is_some() {
                    return Err(syntax(indent + 1, "duplicate dim line"));
                }
                let n: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| syntax(indent + 5, "dim expects a positive integer"))?;
                if n == 0 {
                    return Err(syntax(indent + 5, "dim must be positive"));
                }
                dim = Some(n);
                components = vec![None; n];
            }
            "param" => {
                if rest.trim() != "t" {
                    return Err(syntax(indent + 7, "only 'param t' is supported"));
                }
                if components.iter().any(Option::is_some) {
                    return Err(syntax(indent + 1, "'param t' must precede the map lines"));
                }
                has_param = true;
            }
            "map" => {
                let n = dim.ok_or_else(|| syntax(indent + 1, "map line before dim"))?;
                let (lhs, rhs) = rest
                    .split_once('=')
                    .ok_or_else(|| syntax(indent + 5, "expected 'map gK = expr'"))?;
                let name = lhs.trim();
                let k: usize = name
                    .strip_prefix('g')
                    .and_then(|d| d.parse().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| syntax(indent + 5, "map component must be named g1, g2, ..."))?;
                if k > n {
                    return Err(ParseError::DimensionMismatch {
                        declared: n,
                        found: k,
                        message: format!("component g{k} exceeds dim {n}"),
                    });
                }
                if components[k - 1].is_some() {
                    return Err(syntax(indent + 5, &format!("duplicate definition of g{k}")));
                }
                let rhs_col = indent + 1 + keyword.len() + 1 + lhs.len() + 1;
                components[k - 1] = Some(parse_expr_at(rhs, n, has_param, line_no, rhs_col)?);
            }
            "domain" => {
                if domain.is_some() {
                    return Err(syntax(indent + 1, "duplicate domain line"));
                }
                domain = Some((line_no, rest.trim().to_string()));
            }
            "set" => {
                let (k, v) = rest
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| syntax(indent + 5, "expected 'set key=value'"))?;
                settings.push((line_no, k.trim().to_string(), v.trim().to_string()));
            }
            other => {
                return Err(syntax(indent + 1, &format!("unknown directive '{other}'")));
            }
        }
    }

    let n = dim.ok_or(ParseError::Syntax {
        line: 1,
        col: 1,
        message: "missing 'dim' line".into(),
    })?;
    let found = components.iter().filter(|c| c.is_some()).count();
    if found != n {
        return Err(ParseError::DimensionMismatch {
            declared: n,
            found,
            message: format!("dim {n} declares {n} components but {found} were given"),
        });
    }
    let components = components.into_iter().map(|c| c.expect("checked")).collect();
    let map = MapSpec::from_components(n, has_param, components)
        .expect("parser only produces resolved identifiers");
    Ok(Program { map, domain, settings })
}
