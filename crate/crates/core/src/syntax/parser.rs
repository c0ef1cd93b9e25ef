//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula := "~" formula | formula ("&"|"|"|"->"|"<->") formula
//!          | ("exists"|"forall") IDENT "." formula
//!          | IDENT "(" termlist ")" | term "=" term | term "=in=" term
//!          | "T" "(" "<" formula ">" ")" | "#" ("t"|"f"|"top"|"bot")
//!          | "(" formula ")"
//! term    := IDENT | "<" formula ">"
//! ```
//!
//! Precedence, tightest first: `~`, `&`, `|`, `->` (right associative),
//! `<->`. A quantifier's scope extends as far right as possible.
//!
//! Parsing runs in two passes: the first builds a name-based tree and
//! resolves every variable occurrence to its binder; the second infers
//! variable sorts from predicate signatures and emits the positional AST.

use std::collections::HashMap;

use super::lexer::{tokenize, Tok, Token};
use super::{AbstractTerm, BinOp, Constant, Formula, Quantifier, Term, Variable, SENTENCE_SORT};
use crate::bilattice::TruthValue;
use crate::error::{Error, Pos};
use crate::kb::Signature;
use crate::Sym;

/// Parses `text` against the declarations in `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, Error> {
    parse_formula_at(text, sig, Pos { line: 1, col: 1 })
}

pub(crate) fn parse_formula_at(text: &str, sig: &Signature, origin: Pos) -> Result<Formula, Error> {
    let tokens = tokenize(text, origin)?;
    let mut p = Parser {
        tokens,
        at: 0,
        sig,
        elab: Elab::default(),
    };
    let tree = p.formula()?;
    p.expect(&Tok::Eof)?;
    let mut elab = p.elab;
    elab.solve()?;
    elab.build(&tree)
}

/// Parses a single term. Bare identifiers must be declared constants.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, Error> {
    let tokens = tokenize(text, Pos { line: 1, col: 1 })?;
    let mut p = Parser {
        tokens,
        at: 0,
        sig,
        elab: Elab::default(),
    };
    let t = p.term()?;
    p.expect(&Tok::Eof)?;
    let mut elab = p.elab;
    if let ETerm::Var(id, pos) = &t {
        return Err(Error::parse(
            *pos,
            format!("unknown constant `{}`", elab.bindings[*id].name),
        ));
    }
    elab.solve()?;
    elab.build_term(&t)
}

// Intermediate tree: variables already resolved to binding ids.
#[derive(Debug)]
enum ETerm {
    Var(usize, Pos),
    Const(Constant, Pos),
    Abs(Box<EForm>, Pos),
}

#[derive(Debug)]
enum EForm {
    Atom(Sym, Vec<ETerm>),
    Truth(TruthValue),
    Identity(ETerm, ETerm),
    IntEq(ETerm, ETerm),
    TruthPred(Box<EForm>, Pos),
    Not(Box<EForm>),
    Bin(BinOp, Box<EForm>, Box<EForm>),
    Quant(Quantifier, usize, Pos, Box<EForm>),
}

#[derive(Debug)]
struct Binding {
    name: String,
    sort: Option<Sym>,
    pos: Pos,
    quantified: bool,
}

#[derive(Default)]
struct Elab {
    bindings: Vec<Binding>,
    /// innermost last
    scopes: Vec<(String, usize)>,
    /// scope index below which lookups may not see (abstraction bodies)
    barriers: Vec<usize>,
    free: HashMap<String, usize>,
    equalities: Vec<(usize, usize, Pos)>,
}

impl Elab {
    fn resolve(&mut self, name: &str, pos: Pos) -> Result<usize, Error> {
        let floor = self.barriers.last().copied().unwrap_or(0);
        if let Some((_, id)) = self.scopes[floor..].iter().rev().find(|(n, _)| n == name) {
            return Ok(*id);
        }
        if !self.barriers.is_empty() {
            return Err(Error::parse(
                pos,
                format!("abstraction bodies must be sentences, but `{name}` is free"),
            ));
        }
        if let Some(id) = self.free.get(name) {
            return Ok(*id);
        }
        let id = self.new_binding(name, pos, false);
        self.free.insert(name.to_string(), id);
        Ok(id)
    }

    fn new_binding(&mut self, name: &str, pos: Pos, quantified: bool) -> usize {
        self.bindings.push(Binding {
            name: name.to_string(),
            sort: None,
            pos,
            quantified,
        });
        self.bindings.len() - 1
    }

    fn constrain(&mut self, id: usize, sort: &Sym, pos: Pos) -> Result<(), Error> {
        let b = &mut self.bindings[id];
        if &**sort == SENTENCE_SORT {
            return Err(Error::parse(
                pos,
                format!("variable `{}` cannot range over reified sentences", b.name),
            ));
        }
        match &b.sort {
            Some(s) if s != sort => Err(Error::parse(
                pos,
                format!(
                    "sort mismatch: variable `{}` used as `{s}` and as `{sort}`",
                    b.name
                ),
            )),
            Some(_) => Ok(()),
            None => {
                b.sort = Some(sort.clone());
                Ok(())
            }
        }
    }

    fn solve(&mut self) -> Result<(), Error> {
        loop {
            let mut changed = false;
            for k in 0..self.equalities.len() {
                let (a, b, pos) = self.equalities[k];
                match (self.bindings[a].sort.clone(), self.bindings[b].sort.clone()) {
                    (Some(sa), None) => {
                        self.constrain(b, &sa, pos)?;
                        changed = true;
                    }
                    (None, Some(sb)) => {
                        self.constrain(a, &sb, pos)?;
                        changed = true;
                    }
                    (Some(sa), Some(_)) => self.constrain(b, &sa, pos)?,
                    (None, None) => {}
                }
            }
            if !changed {
                break;
            }
        }
        for b in &self.bindings {
            if b.sort.is_none() {
                let msg = if b.quantified {
                    format!("quantifying a non-free variable `{}`", b.name)
                } else {
                    format!("cannot infer the sort of variable `{}`", b.name)
                };
                return Err(Error::parse(b.pos, msg));
            }
        }
        Ok(())
    }

    fn variable(&self, id: usize) -> Variable {
        let b = &self.bindings[id];
        Variable {
            name: b.name.as_str().into(),
            sort: b.sort.clone().expect("sorts solved"),
        }
    }

    fn build_term(&self, t: &ETerm) -> Result<Term, Error> {
        Ok(match t {
            ETerm::Var(id, _) => Term::Var(self.variable(*id)),
            ETerm::Const(c, _) => Term::Const(c.clone()),
            ETerm::Abs(body, pos) => {
                let body = self.build(body)?;
                Term::Abstract(Box::new(
                    AbstractTerm::closed(body).map_err(|e| Error::parse(*pos, e.to_string()))?,
                ))
            }
        })
    }

    fn build(&self, f: &EForm) -> Result<Formula, Error> {
        Ok(match f {
            EForm::Atom(pred, args) => Formula::Atom {
                pred: pred.clone(),
                args: args
                    .iter()
                    .map(|t| self.build_term(t))
                    .collect::<Result<_, _>>()?,
            },
            EForm::Truth(a) => Formula::Truth(*a),
            EForm::Identity(a, b) => Formula::Identity(self.build_term(a)?, self.build_term(b)?),
            EForm::IntEq(a, b) => Formula::IntEq(self.build_term(a)?, self.build_term(b)?),
            EForm::TruthPred(body, pos) => {
                let body = self.build(body)?;
                Formula::TruthPred(Box::new(
                    AbstractTerm::closed(body).map_err(|e| Error::parse(*pos, e.to_string()))?,
                ))
            }
            EForm::Not(g) => Formula::not(self.build(g)?),
            EForm::Bin(op, l, r) => Formula::bin(*op, self.build(l)?, self.build(r)?),
            EForm::Quant(kind, id, pos, body) => {
                let var = self.variable(*id);
                let body = self.build(body)?;
                Formula::quantify(*kind, &var, body).map_err(|_| {
                    Error::parse(*pos, format!("quantifying a non-free variable `{var}`"))
                })?
            }
        })
    }
}

struct Parser<'a> {
    tokens: Vec<Token>,
    at: usize,
    sig: &'a Signature,
    elab: Elab,
}

fn level(t: &Tok) -> Option<(u8, BinOp, bool)> {
    // (precedence, op, right associative)
    match t {
        Tok::DArrow => Some((0, BinOp::Equiv, false)),
        Tok::Arrow => Some((1, BinOp::Imp, true)),
        Tok::Bar => Some((2, BinOp::Or, false)),
        Tok::Amp => Some((3, BinOp::And, false)),
        _ => None,
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek2(&self) -> &Tok {
        &self.tokens[(self.at + 1).min(self.tokens.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, t: &Tok) -> Result<(), Error> {
        if self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(Error::parse(
                self.pos(),
                format!(
                    "expected {}, found {}",
                    t.describe(),
                    self.peek().describe()
                ),
            ))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), Error> {
        let pos = self.pos();
        match self.bump().tok {
            Tok::Ident(s) => Ok((s, pos)),
            other => Err(Error::parse(
                pos,
                format!("expected identifier, found {}", other.describe()),
            )),
        }
    }

    fn formula(&mut self) -> Result<EForm, Error> {
        self.binary(0)
    }

    fn binary(&mut self, min: u8) -> Result<EForm, Error> {
        let mut lhs = self.unary()?;
        while let Some((prec, op, right)) = level(self.peek()) {
            if prec < min {
                break;
            }
            self.bump();
            let rhs = self.binary(if right { prec } else { prec + 1 })?;
            lhs = EForm::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<EForm, Error> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(EForm::Not(Box::new(self.unary()?)))
            }
            Tok::Ident(k) if k == "exists" || k == "forall" => {
                self.bump();
                let kind = if k == "exists" {
                    Quantifier::Exists
                } else {
                    Quantifier::Forall
                };
                let (name, pos) = self.ident()?;
                if self.sig.constant(&name).is_some() {
                    return Err(Error::parse(
                        pos,
                        format!("cannot quantify the constant `{name}`"),
                    ));
                }
                self.expect(&Tok::Dot)?;
                let id = self.elab.new_binding(&name, pos, true);
                self.elab.scopes.push((name, id));
                let body = self.formula();
                self.elab.scopes.pop();
                Ok(EForm::Quant(kind, id, pos, Box::new(body?)))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<EForm, Error> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::TruthLit(lit) => {
                self.bump();
                let a = lit.parse::<TruthValue>().expect("lexer validated");
                Ok(EForm::Truth(a))
            }
            Tok::Ident(name) if name == "T" && *self.peek2() == Tok::LParen => {
                self.bump();
                self.bump();
                let apos = self.pos();
                self.expect(&Tok::LAngle)?;
                let body = self.abstraction_body()?;
                self.expect(&Tok::RAngle)?;
                self.expect(&Tok::RParen)?;
                Ok(EForm::TruthPred(Box::new(body), apos))
            }
            Tok::Ident(name) if *self.peek2() == Tok::LParen => {
                self.bump();
                self.bump();
                let mut args = vec![self.term()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.term()?);
                }
                self.expect(&Tok::RParen)?;
                self.atom(name, args, pos)
            }
            Tok::Ident(_) | Tok::LAngle => {
                let lhs = self.term()?;
                let op_pos = self.pos();
                let intensional = match self.peek() {
                    Tok::Eq => false,
                    Tok::IntEq => true,
                    other => {
                        return Err(Error::parse(
                            op_pos,
                            format!("expected `(`, `=` or `=in=`, found {}", other.describe()),
                        ))
                    }
                };
                self.bump();
                let rhs = self.term()?;
                self.equation(&lhs, &rhs, op_pos)?;
                Ok(if intensional {
                    EForm::IntEq(lhs, rhs)
                } else {
                    EForm::Identity(lhs, rhs)
                })
            }
            other => Err(Error::parse(
                pos,
                format!("expected a formula, found {}", other.describe()),
            )),
        }
    }

    fn abstraction_body(&mut self) -> Result<EForm, Error> {
        self.elab.barriers.push(self.elab.scopes.len());
        let body = self.formula();
        self.elab.barriers.pop();
        body
    }

    fn term(&mut self) -> Result<ETerm, Error> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::LAngle => {
                self.bump();
                let body = self.abstraction_body()?;
                self.expect(&Tok::RAngle)?;
                Ok(ETerm::Abs(Box::new(body), pos))
            }
            Tok::Ident(name) => {
                self.bump();
                if name == "exists" || name == "forall" {
                    return Err(Error::parse(pos, format!("`{name}` is a keyword")));
                }
                if let Some(c) = self.sig.constant(&name) {
                    return Ok(ETerm::Const(
                        Constant {
                            name: c.name.clone(),
                            sort: c.sort.clone(),
                        },
                        pos,
                    ));
                }
                Ok(ETerm::Var(self.elab.resolve(&name, pos)?, pos))
            }
            other => Err(Error::parse(
                pos,
                format!("expected a term, found {}", other.describe()),
            )),
        }
    }

    fn atom(&mut self, name: String, args: Vec<ETerm>, pos: Pos) -> Result<EForm, Error> {
        let decl = self
            .sig
            .predicate(&name)
            .ok_or_else(|| Error::parse(pos, format!("unknown predicate `{name}`")))?;
        if decl.args.len() != args.len() {
            return Err(Error::parse(
                pos,
                format!(
                    "arity mismatch: `{name}` takes {} arguments, got {}",
                    decl.args.len(),
                    args.len()
                ),
            ));
        }
        let sorts = decl.args.clone();
        let pred = decl.name.clone();
        for (k, (arg, sort)) in args.iter().zip(&sorts).enumerate() {
            let is_sentence = &**sort == SENTENCE_SORT;
            let mismatch = |found: &str, at: Pos| {
                Error::parse(
                    at,
                    format!(
                        "sort mismatch: argument {} of `{name}` expects `{sort}`, found `{found}`",
                        k + 1
                    ),
                )
            };
            match arg {
                ETerm::Var(id, at) => {
                    if is_sentence {
                        return Err(mismatch("variable", *at));
                    }
                    self.elab.constrain(*id, sort, *at)?;
                }
                ETerm::Const(c, at) => match &c.sort {
                    Some(s) if s != sort => return Err(mismatch(s, *at)),
                    None if is_sentence => return Err(mismatch("non-meaning constant", *at)),
                    _ => {}
                },
                ETerm::Abs(_, at) => {
                    if !is_sentence {
                        return Err(mismatch(SENTENCE_SORT, *at));
                    }
                }
            }
        }
        Ok(EForm::Atom(pred, args))
    }

    fn equation(&mut self, lhs: &ETerm, rhs: &ETerm, pos: Pos) -> Result<(), Error> {
        match (lhs, rhs) {
            (ETerm::Var(a, _), ETerm::Var(b, _)) => {
                self.elab.equalities.push((*a, *b, pos));
            }
            (ETerm::Var(a, at), ETerm::Const(c, _)) | (ETerm::Const(c, _), ETerm::Var(a, at)) => {
                if let Some(s) = &c.sort {
                    self.elab.constrain(*a, s, *at)?;
                }
            }
            (ETerm::Var(_, at), ETerm::Abs(..)) | (ETerm::Abs(..), ETerm::Var(_, at)) => {
                return Err(Error::parse(
                    *at,
                    "sort mismatch: variables cannot be compared with reified sentences",
                ));
            }
            _ => {}
        }
        Ok(())
    }
}
