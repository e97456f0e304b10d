//! Abstract syntax, parser and renderer for Fitting programs.
//!
//! Concrete grammar:
//!
//! ```text
//! program  := { clause }
//! clause   := atom [ "<-" formula ] "."
//! formula  := formula binop formula
//!           | ("exists" | "forall") VAR ":" formula
//!           | "~" primary
//!           | primary
//! primary  := atom | truth | term "=" term | "(" formula ")"
//! truth    := "#t" | "#f" | "#u" | "#i"
//! atom     := IDENT [ "(" term { "," term } ")" ]
//! term     := VAR | IDENT
//! ```
//!
//! Binary operators from loosest to tightest: `+` (⊕), `*` (⊗), `|` (∨),
//! `&` (∧), all left-associative. A quantifier body extends as far right as
//! possible. `%` starts a comment running to the end of the line.
//!
//! Identifiers starting with an uppercase letter or `_` are variables; all
//! others are constants or predicate names.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::bilattice::TruthValue;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Self {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn prop(predicate: impl Into<String>) -> Self {
        Self::new(predicate, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    /// `∧`, written `&`
    And,
    /// `∨`, written `|`
    Or,
    /// `⊗`, written `*`
    Consensus,
    /// `⊕`, written `+`
    Gullibility,
}

impl BinOp {
    pub fn token(self) -> &'static str {
        match self {
            BinOp::And => "&",
            BinOp::Or => "|",
            BinOp::Consensus => "*",
            BinOp::Gullibility => "+",
        }
    }

    /// Binding strength; higher binds tighter.
    fn precedence(self) -> u8 {
        match self {
            BinOp::Gullibility => 1,
            BinOp::Consensus => 2,
            BinOp::Or => 3,
            BinOp::And => 4,
        }
    }

    pub fn apply(self, a: TruthValue, b: TruthValue) -> TruthValue {
        match self {
            BinOp::And => a.and(b),
            BinOp::Or => a.or(b),
            BinOp::Consensus => a.consensus(b),
            BinOp::Gullibility => a.gullibility(b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    NegAtom(Atom),
    Truth(TruthValue),
    Equal(Term, Term),
    /// Negation of an atom-free formula (equalities and truth constants).
    /// It is resolved to a truth constant at ground time, so contrajoin never
    /// sees it.
    NegGuard(Box<Formula>),
    Binary(BinOp, Box<Formula>, Box<Formula>),
    Quantified(Quantifier, String, Box<Formula>),
}

impl Formula {
    pub fn binary(op: BinOp, l: Formula, r: Formula) -> Self {
        Formula::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Self::binary(BinOp::And, l, r)
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Self::binary(BinOp::Or, l, r)
    }

    /// True if no atom occurs, so the value is fixed once variables are bound.
    pub fn is_static(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) => false,
            Formula::Truth(_) | Formula::Equal(..) => true,
            Formula::NegGuard(f) | Formula::Quantified(_, _, f) => f.is_static(),
            Formula::Binary(_, l, r) => l.is_static() && r.is_static(),
        }
    }

    /// Calls `visit` on every sub-formula, pre-order.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        match self {
            Formula::NegGuard(f) | Formula::Quantified(_, _, f) => f.walk(visit),
            Formula::Binary(_, l, r) => {
                l.walk(visit);
                r.walk(visit);
            }
            _ => {}
        }
    }

    fn terms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        self.walk(&mut |f| match f {
            Formula::Atom(a) | Formula::NegAtom(a) => out.extend(a.args.iter()),
            Formula::Equal(l, r) => {
                out.push(l);
                out.push(r);
            }
            _ => {}
        });
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::NegAtom(a) => write!(f, "~{a}"),
            Formula::Truth(v) => write!(f, "#{}", v.as_char().to_ascii_lowercase()),
            Formula::Equal(l, r) => write!(f, "{l} = {r}"),
            Formula::NegGuard(inner) => write!(f, "~({inner})"),
            Formula::Binary(op, l, r) => {
                let p = op.precedence();
                write_operand(f, l, p, false)?;
                write!(f, " {} ", op.token())?;
                write_operand(f, r, p, true)
            }
            Formula::Quantified(q, var, body) => write!(f, "{} {var}: ({body})", q.keyword()),
        }
    }
}

fn write_operand(
    f: &mut fmt::Formatter<'_>,
    child: &Formula,
    parent: u8,
    right: bool,
) -> fmt::Result {
    let parens = match child {
        Formula::Binary(op, ..) => {
            let p = op.precedence();
            p < parent || (p == parent && right)
        }
        Formula::Quantified(..) => true,
        _ => false,
    };
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

/// 1-based source position.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// A clause `head <- body`. Equality ignores the source position.
#[derive(Debug, Clone, Eq)]
pub struct Clause {
    pub head: Atom,
    pub body: Formula,
    pub position: Position,
}

impl Clause {
    pub fn new(head: Atom, body: Formula) -> Self {
        Self {
            head,
            body,
            position: Position::default(),
        }
    }

    pub fn fact(head: Atom) -> Self {
        Self::new(head, Formula::Truth(TruthValue::True))
    }
}

impl PartialEq for Clause {
    fn eq(&self, other: &Self) -> bool {
        self.head == other.head && self.body == other.body
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.body == Formula::Truth(TruthValue::True) {
            write!(f, "{}.", self.head)
        } else {
            write!(f, "{} <- {}.", self.head, self.body)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub clauses: Vec<Clause>,
}

impl Program {
    pub fn new(clauses: Vec<Clause>) -> Self {
        Self { clauses }
    }

    /// Every constant occurring anywhere in the program.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for c in &self.clauses {
            for t in c.head.args.iter().chain(c.body.terms()) {
                if let Term::Const(name) = t {
                    out.insert(name.clone());
                }
            }
        }
        out
    }

    /// Predicate names with their arity, heads and bodies alike.
    pub fn predicates(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for c in &self.clauses {
            out.insert(c.head.predicate.clone(), c.head.arity());
            c.body.walk(&mut |f| {
                if let Formula::Atom(a) | Formula::NegAtom(a) = f {
                    out.insert(a.predicate.clone(), a.arity());
                }
            });
        }
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Renders a program in the concrete syntax accepted by [`parse_program`].
pub fn render_program(p: &Program) -> String {
    p.to_string()
}

/// True if the program avoids `⊗`, `⊕`, `∀`, `U` and `I`.
///
/// With `strict`, every body must additionally be a conjunction of literals
/// or a single truth constant, i.e. the classical clause form.
pub fn is_conventional(p: &Program, strict: bool) -> bool {
    p.clauses.iter().all(|c| {
        let mut ok = true;
        c.body.walk(&mut |f| match f {
            Formula::Binary(BinOp::Consensus | BinOp::Gullibility, ..)
            | Formula::Quantified(Quantifier::Forall, ..)
            | Formula::Truth(TruthValue::Unknown | TruthValue::Inconsistent) => ok = false,
            _ => {}
        });
        ok && (!strict || is_literal_conjunction(&c.body))
    })
}

fn is_literal_conjunction(f: &Formula) -> bool {
    match f {
        Formula::Truth(_) => true,
        _ => literals_only(f),
    }
}

fn literals_only(f: &Formula) -> bool {
    match f {
        Formula::Atom(_) | Formula::NegAtom(_) => true,
        Formula::Binary(BinOp::And, l, r) => literals_only(l) && literals_only(r),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{position}: {message}")]
    Parse { position: Position, message: String },
    #[error("{position}: predicate `{predicate}` used with arity {found}, but arity {expected} elsewhere")]
    Arity {
        position: Position,
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("{position}: variable `{variable}` is free in the body but not in the head")]
    FreeVariable {
        position: Position,
        variable: String,
    },
}

impl SyntaxError {
    pub fn position(&self) -> Position {
        match self {
            SyntaxError::Parse { position, .. }
            | SyntaxError::Arity { position, .. }
            | SyntaxError::FreeVariable { position, .. } => *position,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Truth(TruthValue),
    LParen,
    RParen,
    Comma,
    Dot,
    Arrow,
    Tilde,
    Op(BinOp),
    Eq,
    Colon,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) => write!(f, "`{s}`"),
            Tok::Truth(v) => write!(f, "`#{}`", v.as_char().to_ascii_lowercase()),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Arrow => f.write_str("`<-`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Op(op) => write!(f, "`{}`", op.token()),
            Tok::Eq => f.write_str("`=`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Position)>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let pos = Position { line, column };
        let err = |message: String| SyntaxError::Parse {
            position: pos,
            message,
        };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump!();
            }
            continue;
        }
        if c.is_alphanumeric() || c == '_' {
            let mut name = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_alphanumeric() || c == '_' {
                    name.push(c);
                    bump!();
                } else {
                    break;
                }
            }
            let is_var = name.starts_with(|c: char| c.is_uppercase() || c == '_');
            out.push((
                if is_var {
                    Tok::Var(name)
                } else {
                    Tok::Ident(name)
                },
                pos,
            ));
            continue;
        }
        bump!();
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '~' => Tok::Tilde,
            '&' => Tok::Op(BinOp::And),
            '|' => Tok::Op(BinOp::Or),
            '*' => Tok::Op(BinOp::Consensus),
            '+' => Tok::Op(BinOp::Gullibility),
            '=' => Tok::Eq,
            ':' => Tok::Colon,
            '<' => match bump!() {
                Some('-') => Tok::Arrow,
                _ => return Err(err("expected `<-`".into())),
            },
            '#' => match bump!() {
                Some('t') => Tok::Truth(TruthValue::True),
                Some('f') => Tok::Truth(TruthValue::False),
                Some('u') => Tok::Truth(TruthValue::Unknown),
                Some('i') => Tok::Truth(TruthValue::Inconsistent),
                _ => return Err(err("expected one of `#t`, `#f`, `#u`, `#i`".into())),
            },
            other => return Err(err(format!("unexpected character {other:?}"))),
        };
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Position { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Position)>,
    at: usize,
    arities: HashMap<String, usize>,
    head_vars: BTreeSet<String>,
    bound: Vec<String>,
}

/// Parses a program. Clause order is preserved.
pub fn parse_program(text: &str) -> Result<Program, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        arities: HashMap::new(),
        head_vars: BTreeSet::new(),
        bound: Vec::new(),
    };
    let mut clauses = Vec::new();
    while *p.peek() != Tok::Eof {
        clauses.push(p.clause()?);
    }
    Ok(Program { clauses })
}

/// Parses a single formula with no head context; every variable must be
/// bound by a quantifier.
pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        arities: HashMap::new(),
        head_vars: BTreeSet::new(),
        bound: Vec::new(),
    };
    let f = p.formula(0)?;
    p.expect(Tok::Eof)?;
    Ok(f)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Position {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Position) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse {
            position: self.pos(),
            message: message.into(),
        })
    }

    fn expect(&mut self, want: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected {want}, found {}", self.peek()))
        }
    }

    fn clause(&mut self) -> Result<Clause, SyntaxError> {
        let position = self.pos();
        self.head_vars.clear();
        self.bound.clear();
        let head = match self.next() {
            (Tok::Ident(name), pos) => self.atom_rest(name, pos, true)?,
            (tok, pos) => {
                return Err(SyntaxError::Parse {
                    position: pos,
                    message: format!("expected a clause head, found {tok}"),
                })
            }
        };
        let body = if *self.peek() == Tok::Arrow {
            self.next();
            self.formula(0)?
        } else {
            Formula::Truth(TruthValue::True)
        };
        self.expect(Tok::Dot)?;
        Ok(Clause {
            head,
            body,
            position,
        })
    }

    fn formula(&mut self, min_prec: u8) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while let Tok::Op(op) = *self.peek() {
            if op.precedence() < min_prec {
                break;
            }
            self.next();
            let rhs = self.formula(op.precedence() + 1)?;
            lhs = Formula::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(kw)
                if (kw == "exists" || kw == "forall") && matches!(self.peek2(), Tok::Var(_)) =>
            {
                self.next();
                let q = if kw == "exists" {
                    Quantifier::Exists
                } else {
                    Quantifier::Forall
                };
                let Tok::Var(var) = self.next().0 else {
                    unreachable!()
                };
                self.expect(Tok::Colon)?;
                self.bound.push(var.clone());
                let body = self.formula(0);
                self.bound.pop();
                Ok(Formula::Quantified(q, var, Box::new(body?)))
            }
            Tok::Tilde => {
                let pos = self.pos();
                self.next();
                match self.primary()? {
                    Formula::Atom(a) => Ok(Formula::NegAtom(a)),
                    f if f.is_static() => Ok(Formula::NegGuard(Box::new(f))),
                    _ => Err(SyntaxError::Parse {
                        position: pos,
                        message: "`~` applies only to an atom or to an atom-free guard".into(),
                    }),
                }
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, SyntaxError> {
        let (tok, pos) = self.next();
        match tok {
            Tok::LParen => {
                let f = self.formula(0)?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Truth(v) => Ok(Formula::Truth(v)),
            Tok::Var(name) => {
                let lhs = self.var_term(name, pos)?;
                self.expect(Tok::Eq)?;
                let rhs = self.term()?;
                Ok(Formula::Equal(lhs, rhs))
            }
            Tok::Ident(name) if *self.peek() == Tok::Eq => {
                self.next();
                let rhs = self.term()?;
                Ok(Formula::Equal(Term::Const(name), rhs))
            }
            Tok::Ident(name) => Ok(Formula::Atom(self.atom_rest(name, pos, false)?)),
            other => Err(SyntaxError::Parse {
                position: pos,
                message: format!("expected a formula, found {other}"),
            }),
        }
    }

    fn atom_rest(
        &mut self,
        predicate: String,
        pos: Position,
        in_head: bool,
    ) -> Result<Atom, SyntaxError> {
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.next();
            loop {
                let (tok, tpos) = self.next();
                let term = match tok {
                    Tok::Var(v) if in_head => {
                        self.head_vars.insert(v.clone());
                        Term::Var(v)
                    }
                    Tok::Var(v) => self.var_term(v, tpos)?,
                    Tok::Ident(c) => Term::Const(c),
                    other => {
                        return Err(SyntaxError::Parse {
                            position: tpos,
                            message: format!("expected a term, found {other}"),
                        })
                    }
                };
                args.push(term);
                match self.next() {
                    (Tok::Comma, _) => continue,
                    (Tok::RParen, _) => break,
                    (other, p) => {
                        return Err(SyntaxError::Parse {
                            position: p,
                            message: format!("expected `,` or `)`, found {other}"),
                        })
                    }
                }
            }
        }
        match self.arities.get(&predicate) {
            Some(&expected) if expected != args.len() => {
                return Err(SyntaxError::Arity {
                    position: pos,
                    predicate,
                    expected,
                    found: args.len(),
                })
            }
            Some(_) => {}
            None => {
                self.arities.insert(predicate.clone(), args.len());
            }
        }
        Ok(Atom { predicate, args })
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        match self.next() {
            (Tok::Var(v), pos) => self.var_term(v, pos),
            (Tok::Ident(c), _) => Ok(Term::Const(c)),
            (other, pos) => Err(SyntaxError::Parse {
                position: pos,
                message: format!("expected a term, found {other}"),
            }),
        }
    }

    fn var_term(&self, name: String, pos: Position) -> Result<Term, SyntaxError> {
        if self.head_vars.contains(&name) || self.bound.contains(&name) {
            Ok(Term::Var(name))
        } else {
            Err(SyntaxError::FreeVariable {
                position: pos,
                variable: name,
            })
        }
    }
}
