//! Text syntax for ring elements, polynomials, maps and factor lists.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*      division only by t-expressions
//! unary   := '-' unary | power
//! power   := atom ('^' integer)?
//! atom    := integer | 't' | variable | '(' expr ')'
//! map     := '(' expr (',' expr)* ')'
//! factor  := VAR '+=' expr
//!          | 'affine' '[' row (',' row)* ']' ('+' '[' expr (',' expr)* ']')?
//!          | 'diag' '(' expr ')'
//!          | 'shift' '(' expr (',' expr)* ')'
//! factors := factor (';' factor)*           leftmost factor is outermost
//! ```
//!
//! Variables are `X`, `Y`, `Z`, `W`, `V`, `U`. A parsed map or factor list
//! uses the variables that occur, in that canonical order, padded with unused
//! names up to the dimension.

use num_bigint::BigInt;

use crate::automorphism::{Factor, PolyMap};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::multipoly::{MultiPoly, ScaledPoly, CANONICAL_NAMES};
use crate::ring::RingElem;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(&'static str),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Int(s.parse().expect("digits")),
                line: l0,
                column: c0,
            });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(s),
                line: l0,
                column: c0,
            });
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let sym: &'static str = if two == "+=" {
            "+="
        } else {
            match c {
                '+' => "+",
                '-' => "-",
                '*' => "*",
                '/' => "/",
                '^' => "^",
                '(' => "(",
                ')' => ")",
                '[' => "[",
                ']' => "]",
                ',' => ",",
                ';' => ";",
                '=' => "=",
                _ => {
                    return Err(Error::Syntax {
                        line: l0,
                        column: c0,
                        message: format!("unexpected character '{c}'"),
                    })
                }
            }
        };
        i += sym.len();
        col += sym.len();
        out.push(Token {
            tok: Tok::Sym(sym),
            line: l0,
            column: c0,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Int(BigInt),
    T,
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize, usize),
    Pow(Box<Expr>, u32),
}

fn is_var_name(s: &str) -> bool {
    CANONICAL_NAMES.contains(&s)
}

impl Expr {
    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _, _) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Int(_) | Expr::T => {}
        }
    }

    fn eval(&self, names: &[String]) -> Result<ScaledPoly> {
        let n = names.len();
        Ok(match self {
            Expr::Int(k) => ScaledPoly::from_poly(MultiPoly::constant(n, RingElem::from_bigint(k.clone()))),
            Expr::T => ScaledPoly::from_poly(MultiPoly::constant(n, RingElem::t())),
            Expr::Var(v) => {
                let i = names.iter().position(|x| x == v).ok_or_else(|| Error::Syntax {
                    line: 0,
                    column: 0,
                    message: format!("unknown variable {v}"),
                })?;
                ScaledPoly::var(n, i)
            }
            Expr::Neg(a) => -a.eval(names)?,
            Expr::Add(a, b) => &a.eval(names)? + &b.eval(names)?,
            Expr::Sub(a, b) => &a.eval(names)? - &b.eval(names)?,
            Expr::Mul(a, b) => &a.eval(names)? * &b.eval(names)?,
            Expr::Pow(a, e) => a.eval(names)?.pow(*e),
            Expr::Div(a, b, line, column) => {
                let d = b.eval(names)?;
                if !d.num().is_constant() || d.is_zero() {
                    return Err(Error::Syntax {
                        line: *line,
                        column: *column,
                        message: "division only by a nonzero expression in t".into(),
                    });
                }
                let k = Fraction::new(d.den().clone(), d.num().constant_term())?;
                a.eval(names)?.scale(&k)
            }
        })
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        let t = self.peek();
        let found = match &t.tok {
            Tok::Int(k) => format!("'{k}'"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Sym(s) => format!("'{s}'"),
            Tok::End => "end of input".to_string(),
        };
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: format!("{msg}, found {found}"),
        })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            self.err(&format!("expected '{s}'"))
        }
    }

    fn at_end(&self) -> bool {
        self.peek().tok == Tok::End
    }

    fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("expected end of input")
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.is_sym("+") {
                self.bump();
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.is_sym("-") {
                self.bump();
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.is_sym("*") {
                self.bump();
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.is_sym("/") {
                let t = self.bump();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), t.line, t.column);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.is_sym("-") {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.is_sym("^") {
            self.bump();
            match self.peek().tok.clone() {
                Tok::Int(k) => {
                    let e: u32 = k.try_into().or_else(|_| self.err("exponent too large"))?;
                    self.bump();
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return self.err("expected a non-negative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().tok.clone() {
            Tok::Int(k) => {
                self.bump();
                Ok(Expr::Int(k))
            }
            Tok::Ident(s) if s == "t" => {
                self.bump();
                Ok(Expr::T)
            }
            Tok::Ident(s) if is_var_name(&s) => {
                self.bump();
                Ok(Expr::Var(s))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            _ => self.err("expected a number, 't', a variable or '('"),
        }
    }
}

fn order_names(used: &[String], dim: usize) -> Result<Vec<String>> {
    let mut names: Vec<String> = CANONICAL_NAMES
        .iter()
        .filter(|c| used.iter().any(|u| u == *c))
        .map(|s| s.to_string())
        .collect();
    if names.len() > dim {
        return Err(Error::Syntax {
            line: 1,
            column: 1,
            message: format!(
                "{} variables ({}) used in a map of dimension {dim}",
                names.len(),
                names.join(", ")
            ),
        });
    }
    for c in CANONICAL_NAMES {
        if names.len() == dim {
            break;
        }
        if !names.iter().any(|n| n == c) {
            names.push(c.to_string());
        }
    }
    names.sort_by_key(|n| CANONICAL_NAMES.iter().position(|c| c == n));
    Ok(names)
}

fn eval_constant(e: &Expr) -> Result<Fraction> {
    let mut vars = Vec::new();
    e.collect_vars(&mut vars);
    if let Some(v) = vars.first() {
        return Err(Error::Syntax {
            line: 1,
            column: 1,
            message: format!("expected an expression in t, found variable {v}"),
        });
    }
    let s = e.eval(&[])?;
    Fraction::new(s.num().constant_term(), s.den().clone())
}

/// Parses an element of `Z[t]`, e.g. `(t+1)^3`.
pub fn parse_ring(src: &str) -> Result<RingElem> {
    let f = parse_fraction(src)?;
    f.as_ring().cloned().ok_or_else(|| Error::Syntax {
        line: 1,
        column: 1,
        message: format!("{f} is not an element of Z[t]"),
    })
}

/// Parses an element of `Frac(Z[t])`.
pub fn parse_fraction(src: &str) -> Result<Fraction> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_end()?;
    eval_constant(&e)
}

/// Parses a polynomial in the given variable names.
pub fn parse_poly(src: &str, names: &[&str]) -> Result<ScaledPoly> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_end()?;
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let mut used = Vec::new();
    e.collect_vars(&mut used);
    if let Some(v) = used.iter().find(|v| !names.contains(v)) {
        return Err(Error::Syntax {
            line: 1,
            column: 1,
            message: format!("variable {v} is not among {}", names.join(", ")),
        });
    }
    e.eval(&names)
}

/// Parses a polynomial in at most one variable, returned in one variable.
pub fn parse_univariate(src: &str) -> Result<MultiPoly> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_end()?;
    let mut used = Vec::new();
    e.collect_vars(&mut used);
    if used.len() > 1 {
        return Err(Error::Syntax {
            line: 1,
            column: 1,
            message: format!("expected one variable, found {}", used.join(", ")),
        });
    }
    let name = used.pop().unwrap_or_else(|| "X".to_string());
    e.eval(&[name])?.into_poly()
}

/// Parses a map such as `(X, Y + (X^2)/(t))`.
pub fn parse_map(src: &str) -> Result<PolyMap> {
    let mut p = Parser::new(src)?;
    p.expect("(")?;
    let mut exprs = vec![p.expr()?];
    while p.is_sym(",") {
        p.bump();
        exprs.push(p.expr()?);
    }
    p.expect(")")?;
    p.expect_end()?;
    let mut used = Vec::new();
    for e in &exprs {
        e.collect_vars(&mut used);
    }
    let names = order_names(&used, exprs.len())?;
    let coords = exprs
        .iter()
        .map(|e| e.eval(&names))
        .collect::<Result<Vec<_>>>()?;
    PolyMap::with_names(coords, names)
}

/// A parsed factor list with its ambient variables.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorList {
    pub factors: Vec<Factor>,
    pub names: Vec<String>,
}

impl FactorList {
    pub fn dim(&self) -> usize {
        self.names.len()
    }
}

enum RawFactor {
    Elem(String, Expr),
    Affine(Vec<Vec<Expr>>, Vec<Expr>),
    Diag(Expr),
    Shift(Vec<Expr>),
}

impl Parser {
    fn expr_list(&mut self, open: &str, close: &str) -> Result<Vec<Expr>> {
        self.expect(open)?;
        let mut v = vec![self.expr()?];
        while self.is_sym(",") {
            self.bump();
            v.push(self.expr()?);
        }
        self.expect(close)?;
        Ok(v)
    }

    fn factor(&mut self) -> Result<RawFactor> {
        match self.peek().tok.clone() {
            Tok::Ident(s) if is_var_name(&s) => {
                self.bump();
                self.expect("+=")?;
                Ok(RawFactor::Elem(s, self.expr()?))
            }
            Tok::Ident(s) if s == "affine" => {
                self.bump();
                self.expect("[")?;
                let mut rows = vec![self.expr_list("[", "]")?];
                while self.is_sym(",") {
                    self.bump();
                    rows.push(self.expr_list("[", "]")?);
                }
                self.expect("]")?;
                let shift = if self.is_sym("+") {
                    self.bump();
                    self.expr_list("[", "]")?
                } else {
                    (0..rows.len()).map(|_| Expr::Int(0.into())).collect()
                };
                Ok(RawFactor::Affine(rows, shift))
            }
            Tok::Ident(s) if s == "diag" => {
                self.bump();
                self.expect("(")?;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(RawFactor::Diag(e))
            }
            Tok::Ident(s) if s == "shift" => {
                self.bump();
                Ok(RawFactor::Shift(self.expr_list("(", ")")?))
            }
            _ => self.err("expected a factor ('V += ...', 'affine', 'diag' or 'shift')"),
        }
    }
}

/// Parses a `;`-separated factor list. Its dimension is the largest of 2, the
/// number of variables used, and the size of any affine or shift literal.
pub fn parse_factors(src: &str) -> Result<FactorList> {
    let mut p = Parser::new(src)?;
    let mut raws = vec![p.factor()?];
    while p.is_sym(";") {
        p.bump();
        if p.at_end() {
            break;
        }
        raws.push(p.factor()?);
    }
    p.expect_end()?;
    let mut used: Vec<String> = Vec::new();
    let mut dim = 2;
    for r in &raws {
        match r {
            RawFactor::Elem(v, e) => {
                if !used.contains(v) {
                    used.push(v.clone());
                }
                e.collect_vars(&mut used);
            }
            RawFactor::Affine(rows, shift) => {
                dim = dim.max(rows.len());
                if rows.iter().any(|r| r.len() != rows.len()) || shift.len() != rows.len() {
                    return Err(Error::Syntax {
                        line: 1,
                        column: 1,
                        message: "affine literal must be square with a matching shift".into(),
                    });
                }
            }
            RawFactor::Shift(v) => dim = dim.max(v.len()),
            RawFactor::Diag(_) => {}
        }
    }
    let dim = dim.max(used.len());
    let names = order_names(&used, dim)?;
    let mut factors = Vec::new();
    for r in raws {
        let f = match r {
            RawFactor::Elem(v, e) => {
                let target = names.iter().position(|n| *n == v).expect("collected");
                Factor::elementary(target, e.eval(&names)?)?
            }
            RawFactor::Affine(rows, shift) => {
                if rows.len() != dim {
                    return Err(Error::Shape {
                        expected: dim,
                        found: rows.len(),
                    });
                }
                let matrix = rows
                    .iter()
                    .map(|r| r.iter().map(eval_constant).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let shift = shift.iter().map(eval_constant).collect::<Result<Vec<_>>>()?;
                Factor::Affine { matrix, shift }
            }
            RawFactor::Diag(e) => Factor::Diagonal {
                a: eval_constant(&e)?,
            },
            RawFactor::Shift(v) => {
                if v.len() != dim {
                    return Err(Error::Shape {
                        expected: dim,
                        found: v.len(),
                    });
                }
                Factor::Translation {
                    shift: v.iter().map(eval_constant).collect::<Result<Vec<_>>>()?,
                }
            }
        };
        f.validate(dim)?;
        factors.push(f);
    }
    Ok(FactorList { factors, names })
}

/// Either a map or a factor list, decided by the first token.
#[derive(Clone, Debug)]
pub enum MapInput {
    Map(PolyMap),
    Factors(FactorList),
}

impl MapInput {
    pub fn parse(src: &str) -> Result<MapInput> {
        if src.trim_start().starts_with('(') {
            Ok(MapInput::Map(parse_map(src)?))
        } else {
            Ok(MapInput::Factors(parse_factors(src)?))
        }
    }

    /// The expanded map.
    pub fn to_map(&self) -> Result<PolyMap> {
        match self {
            MapInput::Map(m) => Ok(m.clone()),
            MapInput::Factors(fl) => {
                let m = crate::automorphism::compose_factors(&fl.factors, fl.dim())?;
                let names: Vec<&str> = fl.names.iter().map(|s| s.as_str()).collect();
                Ok(m.renamed(&names))
            }
        }
    }
}

/// Prints a factor in the factor grammar.
pub fn print_factor(f: &Factor, names: &[String]) -> String {
    let list = |v: &[Fraction]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    match f {
        Factor::Elementary { target, rule } => {
            format!("{} += {}", names[*target], rule.display_with(names))
        }
        Factor::Affine { matrix, shift } => {
            let rows: Vec<String> = matrix.iter().map(|r| format!("[{}]", list(r))).collect();
            format!("affine[{}] + [{}]", rows.join(", "), list(shift))
        }
        Factor::Diagonal { a } => format!("diag({a})"),
        Factor::Translation { shift } => format!("shift({})", list(shift)),
    }
}

pub fn print_factors(fs: &[Factor], names: &[String]) -> String {
    fs.iter()
        .map(|f| print_factor(f, names))
        .collect::<Vec<_>>()
        .join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::{compose_factors, nagata, nagata_factors};

    #[test]
    fn parses_ring_elements() {
        let r = parse_ring("(t+1)^3").unwrap();
        assert_eq!(r, (RingElem::t() + RingElem::one()).pow(3));
        assert_eq!(parse_ring("-t + 3").unwrap().to_string(), "-t + 3");
        assert!(parse_ring("1/t").is_err());
    }

    #[test]
    fn parses_elementary_map() {
        let m = parse_map("(X, Y + (X^2)/(t))").unwrap();
        let f = &nagata_factors()[2];
        assert_eq!(m, compose_factors(std::slice::from_ref(f), 2).unwrap());
        assert!(parse_map("(X, Y)").unwrap().is_identity());
    }

    #[test]
    fn reports_position() {
        match parse_map("(X, Y +") {
            Err(Error::Syntax { line, column, message }) => {
                assert_eq!((line, column), (1, 8));
                assert!(message.contains("end of input"));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_map("(X,\n  Y $ 2)") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 5)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_map("(X, Y/X)"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn map_roundtrip() {
        let n = nagata();
        assert_eq!(parse_map(&n.display()).unwrap(), n);
        let m = parse_map("(X, Y, W + X^2)").unwrap();
        assert_eq!(m.names(), &["X", "Y", "W"]);
        assert_eq!(parse_map(&m.display()).unwrap().names(), m.names());
    }

    #[test]
    fn factor_roundtrip() {
        let fs = nagata_factors();
        let names: Vec<String> = vec!["X".into(), "Y".into()];
        let s = print_factors(&fs, &names);
        assert_eq!(parse_factors(&s).unwrap().factors, fs);
        let extra = "affine[[0, 1], [-1, (1)/(t)]] + [t, 0]; diag(-1); shift(1, t^2)";
        let fl = parse_factors(extra).unwrap();
        assert_eq!(parse_factors(&print_factors(&fl.factors, &fl.names)).unwrap(), fl);
    }
}
