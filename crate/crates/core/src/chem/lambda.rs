//! Untyped lambda terms in de Bruijn form, a parser for `\x.body` syntax,
//! and a step-bounded normal-order reducer.

use std::fmt;
use std::mem;

use thiserror::Error;

use crate::algebra::Algebra;
use crate::signature::Signature;

/// A lambda term with bound variables as de Bruijn indices.
///
/// α-equivalent terms are structurally equal. A `Bound(i)` under `d`
/// enclosing abstractions always has `i < d`; anything else is `Free`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LambdaTerm {
    Bound(u32),
    Free(String),
    Abs(Box<LambdaTerm>),
    App(Box<LambdaTerm>, Box<LambdaTerm>),
}

impl LambdaTerm {
    pub fn abs(body: LambdaTerm) -> Self {
        LambdaTerm::Abs(Box::new(body))
    }

    pub fn app(f: LambdaTerm, a: LambdaTerm) -> Self {
        LambdaTerm::App(Box::new(f), Box::new(a))
    }

    pub fn free(name: impl Into<String>) -> Self {
        LambdaTerm::Free(name.into())
    }

    /// `λx.x`
    pub fn identity() -> Self {
        Self::abs(LambdaTerm::Bound(0))
    }

    /// `λx.λy.x`
    pub fn k() -> Self {
        Self::abs(Self::abs(LambdaTerm::Bound(1)))
    }

    /// `λx.λy.λz.x z (y z)`
    pub fn s() -> Self {
        use LambdaTerm::Bound;
        Self::abs(Self::abs(Self::abs(Self::app(
            Self::app(Bound(2), Bound(0)),
            Self::app(Bound(1), Bound(0)),
        ))))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            LambdaTerm::Bound(_) | LambdaTerm::Free(_) => 1,
            LambdaTerm::Abs(b) => 1 + b.size(),
            LambdaTerm::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn is_normal(&self) -> bool {
        match self {
            LambdaTerm::Bound(_) | LambdaTerm::Free(_) => true,
            LambdaTerm::Abs(b) => b.is_normal(),
            LambdaTerm::App(f, a) => !matches!(**f, LambdaTerm::Abs(_)) && f.is_normal() && a.is_normal(),
        }
    }

    /// Contracts the leftmost-outermost redex, if any.
    pub fn step_normal_order(&mut self) -> bool {
        match self {
            LambdaTerm::App(f, _) if matches!(**f, LambdaTerm::Abs(_)) => {
                let LambdaTerm::App(f, arg) = mem::replace(self, LambdaTerm::Bound(0)) else {
                    unreachable!()
                };
                let LambdaTerm::Abs(mut body) = *f else { unreachable!() };
                substitute(&mut body, 0, &arg);
                *self = *body;
                true
            }
            LambdaTerm::App(f, a) => f.step_normal_order() || a.step_normal_order(),
            LambdaTerm::Abs(b) => b.step_normal_order(),
            LambdaTerm::Bound(_) | LambdaTerm::Free(_) => false,
        }
    }
}

/// Replaces the variable bound `depth` binders above `t` by `arg`, and
/// lowers indices pointing past it (the consumed binder disappears).
fn substitute(t: &mut LambdaTerm, depth: u32, arg: &LambdaTerm) {
    match t {
        LambdaTerm::Bound(i) if *i == depth => *t = shifted(arg, depth, 0),
        LambdaTerm::Bound(i) if *i > depth => *i -= 1,
        LambdaTerm::Bound(_) | LambdaTerm::Free(_) => {}
        LambdaTerm::Abs(b) => substitute(b, depth + 1, arg),
        LambdaTerm::App(f, a) => {
            substitute(f, depth, arg);
            substitute(a, depth, arg);
        }
    }
}

/// Raises every index `>= cutoff` by `by`.
fn shifted(t: &LambdaTerm, by: u32, cutoff: u32) -> LambdaTerm {
    if by == 0 {
        return t.clone();
    }
    match t {
        LambdaTerm::Bound(i) if *i >= cutoff => LambdaTerm::Bound(i + by),
        LambdaTerm::Bound(_) | LambdaTerm::Free(_) => t.clone(),
        LambdaTerm::Abs(b) => LambdaTerm::abs(shifted(b, by, cutoff + 1)),
        LambdaTerm::App(f, a) => LambdaTerm::app(shifted(f, by, cutoff), shifted(a, by, cutoff)),
    }
}

/// Prints with binders named `x0, x1, …` by nesting depth.
impl fmt::Display for LambdaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, 0, f)
    }
}

fn write_term(t: &LambdaTerm, depth: u32, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        LambdaTerm::Abs(body) => {
            write!(f, "\\x{depth}.")?;
            write_term(body, depth + 1, f)
        }
        LambdaTerm::App(fun, arg) => {
            match **fun {
                LambdaTerm::Abs(_) => write_parens(fun, depth, f)?,
                _ => write_term(fun, depth, f)?,
            }
            write!(f, " ")?;
            match **arg {
                LambdaTerm::Abs(_) | LambdaTerm::App(..) => write_parens(arg, depth, f),
                _ => write_term(arg, depth, f),
            }
        }
        LambdaTerm::Bound(i) if *i < depth => write!(f, "x{}", depth - 1 - i),
        LambdaTerm::Bound(i) => write!(f, "#{i}"),
        LambdaTerm::Free(name) => write!(f, "{name}"),
    }
}

fn write_parens(t: &LambdaTerm, depth: u32, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "(")?;
    write_term(t, depth, f)?;
    write!(f, ")")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at {position}: {message}")]
pub struct SyntaxError {
    /// Character offset into the source.
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Lambda,
    Dot,
    Open,
    Close,
    Ident(String),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let token = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '\\' | 'λ' => Token::Lambda,
            '.' => Token::Dot,
            '(' => Token::Open,
            ')' => Token::Close,
            c if is_ident_char(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                tokens.push((start, Token::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(SyntaxError {
                    position: i,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        tokens.push((i, token));
        i += 1;
    }
    Ok(tokens)
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    binders: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            position: self.offset(),
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<(), SyntaxError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn term(&mut self) -> Result<LambdaTerm, SyntaxError> {
        if self.peek() != Some(&Token::Lambda) {
            return self.app_seq();
        }
        self.pos += 1;
        let name = match self.peek() {
            Some(Token::Ident(name)) => name.clone(),
            _ => return Err(self.error("expected a variable after `\\`")),
        };
        self.pos += 1;
        self.expect(Token::Dot, "`.`")?;
        self.binders.push(name);
        let body = self.term();
        self.binders.pop();
        Ok(LambdaTerm::abs(body?))
    }

    fn app_seq(&mut self) -> Result<LambdaTerm, SyntaxError> {
        let mut acc = self.atom()?;
        while matches!(self.peek(), Some(Token::Ident(_) | Token::Open)) {
            let arg = self.atom()?;
            acc = LambdaTerm::app(acc, arg);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<LambdaTerm, SyntaxError> {
        match self.peek().cloned() {
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(match self.binders.iter().rposition(|b| *b == name) {
                    Some(at) => LambdaTerm::Bound((self.binders.len() - 1 - at) as u32),
                    None => LambdaTerm::Free(name),
                })
            }
            Some(Token::Open) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Token::Close, "`)`")?;
                Ok(t)
            }
            Some(_) => Err(self.error("expected a variable or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses `term ::= '\' ident '.' term | atom+` with `atom ::= ident | '(' term ')'`.
/// Application is left-associative; unbound names become free variables.
pub fn parse_lambda(src: &str) -> Result<LambdaTerm, SyntaxError> {
    let mut parser = Parser {
        tokens: tokenize(src)?,
        pos: 0,
        end: src.chars().count(),
        binders: Vec::new(),
    };
    let t = parser.term()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducerConfig {
    /// Upper bound on β-contractions per evaluation.
    pub max_steps: usize,
    /// Reduction stops once the term has more than this many nodes. `None`
    /// lets terms grow without limit.
    pub max_size: Option<usize>,
}

pub const DEFAULT_MAX_SIZE: usize = 1000;

impl Default for ReducerConfig {
    fn default() -> Self {
        Self {
            max_steps: 1000,
            max_size: Some(DEFAULT_MAX_SIZE),
        }
    }
}

impl ReducerConfig {
    pub fn with_max_steps(max_steps: usize) -> Self {
        Self {
            max_steps,
            ..Self::default()
        }
    }

    pub fn without_size_limit(self) -> Self {
        Self { max_size: None, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub term: LambdaTerm,
    /// β-contractions performed; never above `max_steps`.
    pub steps: usize,
    /// True if `term` is not a normal form (the step or size budget ran out).
    pub hit_limit: bool,
}

/// The bounded evaluator: normal-order β-reduction until a normal form is
/// reached, `cfg.max_steps` contractions have been made, or the term grows
/// past `cfg.max_size`.
pub fn reduce(t: &LambdaTerm, cfg: ReducerConfig) -> Reduction {
    let mut term = t.clone();
    let mut steps = 0;
    let oversized = |t: &LambdaTerm| cfg.max_size.is_some_and(|max| t.size() > max);
    while steps < cfg.max_steps && !oversized(&term) && term.step_normal_order() {
        steps += 1;
    }
    let hit_limit = !term.is_normal();
    Reduction { term, steps, hit_limit }
}

/// Lambda terms where `interact(t1, t2)` is the bounded reduction of `t1 t2`.
///
/// A collision whose result is larger than `max_size` does not react:
/// `interact` returns `t1` unchanged, which keeps every molecule in a
/// reactor seeded with small terms within the bound.
#[derive(Debug, Clone)]
pub struct LambdaAlgebra {
    sig: Signature,
    cfg: ReducerConfig,
}

impl LambdaAlgebra {
    pub fn new(cfg: ReducerConfig) -> Self {
        Self {
            sig: Signature::binary("interact"),
            cfg,
        }
    }

    pub fn config(&self) -> ReducerConfig {
        self.cfg
    }
}

pub fn lambda_algebra(cfg: ReducerConfig) -> LambdaAlgebra {
    LambdaAlgebra::new(cfg)
}

impl Algebra for LambdaAlgebra {
    type Elem = LambdaTerm;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn apply(&self, _op: usize, args: &[LambdaTerm]) -> LambdaTerm {
        let collision = LambdaTerm::app(args[0].clone(), args[1].clone());
        let result = reduce(&collision, self.cfg).term;
        match self.cfg.max_size {
            Some(max) if result.size() > max => args[0].clone(),
            _ => result,
        }
    }
}
