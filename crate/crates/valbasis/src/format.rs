//! The plain-text curve format.
//!
//! One directive per line, `#` starts a comment:
//!
//! ```text
//! variables x y z
//! branch t^6 ; t^8 + 2*t^9 ; t^10 + t^11
//! branch {6:1} ; {8:1, 9:1} ; {10:1, 11:1}
//! equation y - x^2
//! generator f1 = 3*z^2 - 4*x^2*z + x*y^2
//! ideal h1 = x^2 + y
//! ideal h2 = [t^-1 ; t^-1 + O(t^20)]
//! precision 60
//! rho 31,31
//! ```
//!
//! Series are Laurent polynomials in `t`, optionally with a `+ O(t^N)` tail,
//! or `{exponent:coefficient, ...}` term lists. Coefficients are exact
//! rationals written as integers, fractions `a/b` or decimals.

use std::fmt::Write as _;
use std::str::FromStr;

use valbasis_core::{CurveModel, Polynomial, Rational, TruncatedSeries, ValueVector};

use crate::error::CliError;

/// A fractional-ideal generator: a polynomial in the curve variables or an
/// explicit series on each branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealGenerator {
    Polynomial(Polynomial),
    Series(Vec<TruncatedSeries>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFile {
    pub variables: Vec<String>,
    pub branches: Vec<Vec<TruncatedSeries>>,
    pub equations: Vec<Polynomial>,
    pub generators: Vec<(String, Polynomial)>,
    pub ideal: Vec<(String, IdealGenerator)>,
    pub precision: Option<i64>,
    pub rho: Option<ValueVector>,
}

impl CurveFile {
    /// The validated curve model with equations and named generators.
    pub fn model(&self) -> Result<CurveModel, CliError> {
        let mut curve = CurveModel::new(self.variables.clone(), self.branches.clone())?;
        if !self.equations.is_empty() {
            curve = curve.with_equations(self.equations.clone())?;
        }
        Ok(curve.with_generators(self.generators.clone())?)
    }

    /// The ideal generators as series on each branch.
    pub fn ideal_series(&self) -> Result<Vec<(String, Vec<TruncatedSeries>)>, CliError> {
        let curve = CurveModel::new(self.variables.clone(), self.branches.clone())?;
        let mut out = Vec::with_capacity(self.ideal.len());
        for (name, g) in &self.ideal {
            let series = match g {
                IdealGenerator::Series(s) => s.clone(),
                IdealGenerator::Polynomial(p) => curve
                    .branches()
                    .iter()
                    .map(|b| valbasis_core::series::substitute(p, b.params(), None))
                    .collect::<Result<Vec<_>, _>>()?,
            };
            out.push((name.clone(), series));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> CliError {
    CliError::Syntax {
        line,
        column: col,
        message: message.into(),
    }
}

fn semantic(line: usize, message: impl AsRef<str>) -> CliError {
    CliError::Semantic(format!("line {}: {}", line, message.as_ref()))
}

/// `digits`, `digits/digits` or `digits.digits`, exactly.
fn parse_number(text: &str) -> Option<Rational> {
    if let Some((int, frac)) = text.split_once('.') {
        let scale = format!("1{}", "0".repeat(frac.len()));
        return Rational::from_str(&format!("{}{}/{}", int, frac, scale)).ok();
    }
    let q = Rational::from_str(text).ok()?;
    if text.contains('/') && text.ends_with("/0") {
        return None;
    }
    Some(q)
}

fn lex(text: &str, line: usize, offset: usize) -> Result<Vec<Token>, CliError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = offset + i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && (chars[i] == '/' || chars[i] == '.') && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let lit: String = chars[start..i].iter().collect();
            let q = parse_number(&lit).ok_or_else(|| syntax(line, col, format!("invalid number `{}`", lit)))?;
            out.push(Token { tok: Tok::Num(q), col });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
        } else if "+-*^(){}[]:,;=".contains(c) {
            out.push(Token { tok: Tok::Sym(c), col });
            i += 1;
        } else {
            return Err(syntax(line, col, format!("unexpected character `{}`", c)));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Ast {
    Num(Rational),
    Var(String, usize),
    Terms(Vec<(i64, Rational)>),
    BigO(i64),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64, usize),
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Token], line: usize, end: usize) -> Self {
        Self { toks, pos: 0, line, end }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.col)
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn expect_sym(&mut self, c: char) -> Result<(), CliError> {
        if self.at_sym(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{}`", c)))
        }
    }

    fn unexpected(&self, wanted: &str) -> CliError {
        let found = match self.peek() {
            None => "end of line".to_string(),
            Some(Tok::Num(q)) => format!("`{}`", q),
            Some(Tok::Ident(s)) => format!("`{}`", s),
            Some(Tok::Sym(c)) => format!("`{}`", c),
        };
        syntax(self.line, self.col(), format!("expected {}, found {}", wanted, found))
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn ident(&mut self) -> Result<String, CliError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn integer(&mut self) -> Result<i64, CliError> {
        let neg = self.at_sym('-');
        if neg {
            self.pos += 1;
        }
        match self.peek() {
            Some(Tok::Num(q)) if q.is_integer() => {
                let col = self.col();
                let v: i64 = q
                    .to_integer()
                    .try_into()
                    .map_err(|_| syntax(self.line, col, "integer out of range"))?;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn signed_number(&mut self) -> Result<Rational, CliError> {
        let neg = self.at_sym('-');
        if neg {
            self.pos += 1;
        }
        match self.peek() {
            Some(Tok::Num(q)) => {
                let q = q.clone();
                self.pos += 1;
                Ok(if neg { -q } else { q })
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn expr(&mut self) -> Result<Ast, CliError> {
        let mut lhs = self.term()?;
        loop {
            if self.at_sym('+') {
                self.pos += 1;
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.at_sym('-') {
                self.pos += 1;
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast, CliError> {
        let mut lhs = self.unary()?;
        while self.at_sym('*') {
            self.pos += 1;
            lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast, CliError> {
        if self.at_sym('-') {
            self.pos += 1;
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.at_sym('^') {
            self.pos += 1;
            let col = self.col();
            let e = self.integer()?;
            return Ok(Ast::Pow(Box::new(base), e, col));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, CliError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(Ast::Num(q))
            }
            Some(Tok::Ident(s)) if s == "O" && self.toks.get(self.pos + 1).map(|t| &t.tok) == Some(&Tok::Sym('(')) => {
                self.pos += 2;
                match self.peek() {
                    Some(Tok::Ident(t)) if t == "t" => self.pos += 1,
                    _ => return Err(self.unexpected("`t`")),
                }
                let n = if self.at_sym('^') {
                    self.pos += 1;
                    self.integer()?
                } else {
                    1
                };
                self.expect_sym(')')?;
                Ok(Ast::BigO(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Ast::Var(s, col))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Some(Tok::Sym('{')) => {
                self.pos += 1;
                let mut terms = Vec::new();
                if !self.at_sym('}') {
                    loop {
                        let e = self.integer()?;
                        self.expect_sym(':')?;
                        let c = self.signed_number()?;
                        terms.push((e, c));
                        if self.at_sym(',') {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect_sym('}')?;
                Ok(Ast::Terms(terms))
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}

fn eval_poly(ast: &Ast, vars: &[String], line: usize) -> Result<Polynomial, CliError> {
    let n = vars.len();
    Ok(match ast {
        Ast::Num(q) => Polynomial::constant(n, q.clone()),
        Ast::Var(s, col) => match vars.iter().position(|v| v == s) {
            Some(i) => Polynomial::variable(n, i),
            None => return Err(semantic(line, format!("column {}: unknown variable `{}`", col, s))),
        },
        Ast::Terms(_) | Ast::BigO(_) => {
            return Err(semantic(line, "series notation inside a polynomial"));
        }
        Ast::Neg(a) => eval_poly(a, vars, line)?.scale(&-Rational::from_integer(1.into())),
        Ast::Add(a, b) => eval_poly(a, vars, line)?.add(&eval_poly(b, vars, line)?),
        Ast::Sub(a, b) => eval_poly(a, vars, line)?.sub(&eval_poly(b, vars, line)?),
        Ast::Mul(a, b) => eval_poly(a, vars, line)?.mul(&eval_poly(b, vars, line)?),
        Ast::Pow(a, e, col) => {
            let e = u32::try_from(*e)
                .map_err(|_| semantic(line, format!("column {}: negative power of a polynomial", col)))?;
            eval_poly(a, vars, line)?.pow(e)
        }
    })
}

fn eval_series(ast: &Ast, line: usize) -> Result<TruncatedSeries, CliError> {
    Ok(match ast {
        Ast::Num(q) => TruncatedSeries::monomial(0, q.clone()),
        Ast::Var(s, col) if s == "t" => {
            let _ = col;
            TruncatedSeries::monomial(1, Rational::from_integer(1.into()))
        }
        Ast::Var(s, col) => {
            return Err(semantic(line, format!("column {}: series use the parameter `t`, found `{}`", col, s)));
        }
        Ast::Terms(terms) => TruncatedSeries::from_terms(terms.iter().cloned(), None),
        Ast::BigO(n) => TruncatedSeries::zero_to(*n),
        Ast::Neg(a) => -&eval_series(a, line)?,
        Ast::Add(a, b) => eval_series(a, line)? + eval_series(b, line)?,
        Ast::Sub(a, b) => eval_series(a, line)? - eval_series(b, line)?,
        Ast::Mul(a, b) => eval_series(a, line)? * eval_series(b, line)?,
        Ast::Pow(a, e, col) => {
            if let (Ast::Var(s, _), true) = (a.as_ref(), *e < 0) {
                if s == "t" {
                    return Ok(TruncatedSeries::monomial(*e, Rational::from_integer(1.into())));
                }
            }
            let e = u32::try_from(*e)
                .map_err(|_| semantic(line, format!("column {}: only `t` may carry a negative power", col)))?;
            eval_series(a, line)?.pow(e)
        }
    })
}

/// Splits `toks` at top-level `sep` symbols.
fn split_tokens(toks: &[Token], sep: char) -> Vec<&[Token]> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, t) in toks.iter().enumerate() {
        match t.tok {
            Tok::Sym('(') | Tok::Sym('{') | Tok::Sym('[') => depth += 1,
            Tok::Sym(')') | Tok::Sym('}') | Tok::Sym(']') => depth -= 1,
            Tok::Sym(c) if c == sep && depth == 0 => {
                out.push(&toks[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&toks[start..]);
    out
}

fn parse_full(toks: &[Token], line: usize, end: usize) -> Result<Ast, CliError> {
    let mut p = Parser::new(toks, line, end);
    if p.done() {
        return Err(syntax(line, end, "expected an expression"));
    }
    let ast = p.expr()?;
    if !p.done() {
        return Err(p.unexpected("an operator or end of expression"));
    }
    Ok(ast)
}

fn series_list(toks: &[Token], line: usize, end: usize) -> Result<Vec<TruncatedSeries>, CliError> {
    split_tokens(toks, ';')
        .into_iter()
        .map(|part| {
            let part_end = part.last().map_or(end, |t| t.col + 1);
            eval_series(&parse_full(part, line, part_end)?, line)
        })
        .collect()
}

/// `name = rest`, returning the name and the tokens after `=`.
fn named(toks: &[Token], line: usize, end: usize) -> Result<(String, &[Token]), CliError> {
    let mut p = Parser::new(toks, line, end);
    let name = p.ident()?;
    p.expect_sym('=')?;
    Ok((name, &toks[p.pos..]))
}

#[derive(Default)]
struct Pending {
    variables: Option<(usize, Vec<String>)>,
    branches: Vec<(usize, Vec<Token>)>,
    equations: Vec<(usize, Vec<Token>)>,
    generators: Vec<(usize, Vec<Token>)>,
    ideal: Vec<(usize, Vec<Token>)>,
    precision: Option<i64>,
    rho: Option<(usize, ValueVector)>,
}

/// Parses and validates a curve file.
pub fn parse_curve_file(text: &str) -> Result<CurveFile, CliError> {
    let mut pending = Pending::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let lead = content.chars().count() - trimmed.chars().count();
        let keyword: String = trimmed.chars().take_while(|c| !c.is_whitespace()).collect();
        let rest_offset = lead + keyword.chars().count();
        let rest: String = trimmed.chars().skip(keyword.chars().count()).collect();
        let end = content.trim_end().chars().count() + 1;
        let toks = lex(&rest, line, rest_offset)?;
        match keyword.as_str() {
            "variables" => {
                if pending.variables.is_some() {
                    return Err(semantic(line, "variables declared twice"));
                }
                let mut names = Vec::new();
                for part in split_tokens(&toks, ',') {
                    for t in part {
                        match &t.tok {
                            Tok::Ident(s) => names.push(s.clone()),
                            _ => return Err(syntax(line, t.col, "expected a variable name")),
                        }
                    }
                }
                if names.is_empty() {
                    return Err(syntax(line, end, "expected at least one variable name"));
                }
                if names.iter().any(|s| s == "t") {
                    return Err(semantic(line, "`t` is reserved for the branch parameter"));
                }
                pending.variables = Some((line, names));
            }
            "branch" => pending.branches.push((line, toks)),
            "equation" => pending.equations.push((line, toks)),
            "generator" => pending.generators.push((line, toks)),
            "ideal" => pending.ideal.push((line, toks)),
            "precision" => {
                let mut p = Parser::new(&toks, line, end);
                let n = p.integer()?;
                if !p.done() {
                    return Err(p.unexpected("end of line"));
                }
                if n < 1 {
                    return Err(semantic(line, "precision must be positive"));
                }
                pending.precision = Some(n);
            }
            "rho" => {
                let v = ValueVector::from_str(rest.trim())
                    .map_err(|e| syntax(line, rest_offset + 2, e))?;
                pending.rho = Some((line, v));
            }
            _ => {
                return Err(syntax(line, lead + 1, format!("unknown directive `{}`", keyword)));
            }
        }
    }
    finish(pending)
}

fn end_of(toks: &[Token]) -> usize {
    toks.last().map_or(1, |t| t.col + 1)
}

fn finish(p: Pending) -> Result<CurveFile, CliError> {
    let (_, variables) = p
        .variables
        .ok_or_else(|| CliError::Semantic("missing `variables` directive".into()))?;
    if p.branches.is_empty() {
        return Err(CliError::Semantic("the curve has no branches".into()));
    }
    for (i, v) in variables.iter().enumerate() {
        if variables[..i].contains(v) {
            return Err(CliError::Semantic(format!("duplicate variable `{}`", v)));
        }
    }
    let mut branches: Vec<Vec<TruncatedSeries>> = Vec::new();
    for (line, toks) in &p.branches {
        let b = series_list(toks, *line, end_of(toks))?;
        if b.len() != variables.len() {
            return Err(semantic(
                *line,
                format!("branch has {} coordinates, expected {}", b.len(), variables.len()),
            ));
        }
        if let Some(j) = branches.iter().position(|o| *o == b) {
            return Err(semantic(*line, format!("duplicate of branch {}", j + 1)));
        }
        branches.push(b);
    }
    let mut equations = Vec::new();
    for (line, toks) in &p.equations {
        equations.push(eval_poly(&parse_full(toks, *line, end_of(toks))?, &variables, *line)?);
    }
    if !equations.is_empty() && equations.len() != branches.len() {
        return Err(CliError::Semantic(format!(
            "{} equations for {} branches",
            equations.len(),
            branches.len()
        )));
    }
    let mut taken: Vec<String> = variables.clone();
    let mut generators = Vec::new();
    for (line, toks) in &p.generators {
        let (name, rest) = named(toks, *line, end_of(toks))?;
        if taken.contains(&name) {
            return Err(semantic(*line, format!("name `{}` is already in use", name)));
        }
        let poly = eval_poly(&parse_full(rest, *line, end_of(toks))?, &variables, *line)?;
        taken.push(name.clone());
        generators.push((name, poly));
    }
    let mut ideal = Vec::new();
    for (line, toks) in &p.ideal {
        let (name, rest) = named(toks, *line, end_of(toks))?;
        if taken.contains(&name) {
            return Err(semantic(*line, format!("name `{}` is already in use", name)));
        }
        let g = if rest.first().map(|t| &t.tok) == Some(&Tok::Sym('[')) {
            let close = rest.last().filter(|t| t.tok == Tok::Sym(']'));
            if close.is_none() {
                return Err(syntax(*line, end_of(toks), "expected `]`"));
            }
            let s = series_list(&rest[1..rest.len() - 1], *line, end_of(toks))?;
            if s.len() != branches.len() {
                return Err(semantic(
                    *line,
                    format!("ideal generator has {} series, expected {}", s.len(), branches.len()),
                ));
            }
            IdealGenerator::Series(s)
        } else {
            IdealGenerator::Polynomial(eval_poly(&parse_full(rest, *line, end_of(toks))?, &variables, *line)?)
        };
        taken.push(name.clone());
        ideal.push((name, g));
    }
    if let Some((line, rho)) = &p.rho {
        if rho.len() != branches.len() {
            return Err(semantic(*line, format!("rho has {} entries, expected {}", rho.len(), branches.len())));
        }
    }
    let file = CurveFile {
        variables,
        branches,
        equations,
        generators,
        ideal,
        precision: p.precision,
        rho: p.rho.map(|(_, v)| v),
    };
    file.model().map_err(|e| match e {
        CliError::Core(c) => CliError::Semantic(c.to_string()),
        other => other,
    })?;
    Ok(file)
}

fn write_rational(out: &mut String, q: &Rational) {
    write!(out, "{}", q).expect("string write");
}

/// Canonical series text, parseable by [`parse_curve_file`].
pub fn render_series(s: &TruncatedSeries) -> String {
    let mut out = String::new();
    for (e, c) in s.terms() {
        let neg = *c < Rational::from_integer(0.into());
        let mag = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let unit = mag == Rational::from_integer(1.into());
        if *e == 0 {
            write_rational(&mut out, &mag);
            continue;
        }
        if !unit {
            write_rational(&mut out, &mag);
            out.push('*');
        }
        if *e == 1 {
            out.push('t');
        } else {
            write!(out, "t^{}", e).expect("string write");
        }
    }
    match s.precision() {
        Some(n) if out.is_empty() => format!("O(t^{})", n),
        Some(n) => format!("{} + O(t^{})", out, n),
        None if out.is_empty() => "0".into(),
        None => out,
    }
}

fn render_list(series: &[TruncatedSeries]) -> String {
    series.iter().map(render_series).collect::<Vec<_>>().join(" ; ")
}

/// Canonical text of a curve file.
pub fn render_curve_file(file: &CurveFile) -> String {
    let mut out = String::new();
    let vars = &file.variables;
    writeln!(out, "variables {}", vars.join(" ")).expect("string write");
    for b in &file.branches {
        writeln!(out, "branch {}", render_list(b)).expect("string write");
    }
    for f in &file.equations {
        writeln!(out, "equation {}", f.display_with(vars)).expect("string write");
    }
    for (name, g) in &file.generators {
        writeln!(out, "generator {} = {}", name, g.display_with(vars)).expect("string write");
    }
    for (name, g) in &file.ideal {
        match g {
            IdealGenerator::Polynomial(p) => writeln!(out, "ideal {} = {}", name, p.display_with(vars)),
            IdealGenerator::Series(s) => writeln!(out, "ideal {} = [{}]", name, render_list(s)),
        }
        .expect("string write");
    }
    if let Some(n) = file.precision {
        writeln!(out, "precision {}", n).expect("string write");
    }
    if let Some(rho) = &file.rho {
        let entries: Vec<String> = rho.iter().map(|v| v.to_string()).collect();
        writeln!(out, "rho {}", entries.join(",")).expect("string write");
    }
    out
}
