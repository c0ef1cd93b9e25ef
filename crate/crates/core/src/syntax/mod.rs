//! Terms and formulas of the four-valued intensional first-order language.
//!
//! Users write named variables; the AST stores quantifiers positionally
//! (`index` into the body's canonical variable tuple) and every binary node
//! carries the join set of its operands. The smart constructors on
//! [`Formula`] keep both derived artifacts consistent.

mod lexer;
mod parser;
mod printer;

use std::collections::BTreeMap;
use std::fmt;

use crate::bilattice::TruthValue;
use crate::error::Error;
use crate::Sym;

pub(crate) use parser::parse_formula_at;
pub use parser::{parse_formula, parse_term};
pub use printer::print_formula;

/// Reserved sort name of reified sentences.
pub const SENTENCE_SORT: &str = "sentence";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    pub name: Sym,
    pub sort: Sym,
}

impl Variable {
    pub fn new(name: &str, sort: &str) -> Self {
        Variable {
            name: name.into(),
            sort: sort.into(),
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A language constant. A constant without a sort is non-meaningful and
/// denotes the non-meaning individual.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constant {
    pub name: Sym,
    pub sort: Option<Sym>,
}

impl Constant {
    pub fn new(name: &str, sort: &str) -> Self {
        Constant {
            name: name.into(),
            sort: Some(sort.into()),
        }
    }

    pub fn unmeaning(name: &str) -> Self {
        Constant {
            name: name.into(),
            sort: None,
        }
    }

    pub fn is_meaningful(&self) -> bool {
        self.sort.is_some()
    }
}

/// `<body>` with hidden variables `hidden` and visible (assignable)
/// variables `visible`. Both lists follow the body's canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbstractTerm {
    pub body: Formula,
    pub hidden: Vec<Variable>,
    pub visible: Vec<Variable>,
}

impl AbstractTerm {
    /// Reification of a sentence.
    pub fn closed(body: Formula) -> Result<Self, Error> {
        let vars = canonical_vars(&body).vars;
        if !vars.is_empty() {
            return Err(Error::Syntax(format!(
                "abstraction body `{}` is not a sentence",
                print_formula(&body)
            )));
        }
        Ok(AbstractTerm {
            body,
            hidden: vec![],
            visible: vec![],
        })
    }

    /// General abstraction: `hidden` are compressed, every other free
    /// variable of the body stays visible.
    pub fn with_hidden(body: Formula, hidden: &[Variable]) -> Result<Self, Error> {
        let vars = canonical_vars(&body).vars;
        for h in hidden {
            if !vars.contains(h) {
                return Err(Error::Syntax(format!(
                    "hidden variable `{h}` is not free in the abstraction body"
                )));
            }
        }
        let (hidden, visible) = vars.into_iter().partition(|v| hidden.contains(v));
        Ok(AbstractTerm {
            body,
            hidden,
            visible,
        })
    }

    pub fn is_ground(&self) -> bool {
        self.visible.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Variable),
    Const(Constant),
    Abstract(Box<AbstractTerm>),
}

impl Term {
    /// `None` for non-meaningful constants, which fit any sort.
    pub fn sort(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(&v.sort),
            Term::Const(c) => c.sort.as_deref(),
            Term::Abstract(_) => Some(SENTENCE_SORT),
        }
    }

    fn free_vars_into(&self, out: &mut Vec<Variable>) {
        match self {
            Term::Var(v) => push_unique(out, v),
            Term::Const(_) => {}
            Term::Abstract(a) => a.visible.iter().for_each(|v| push_unique(out, v)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    And,
    Or,
    Imp,
    Equiv,
}

impl BinOp {
    pub fn apply(self, a: TruthValue, b: TruthValue) -> TruthValue {
        use crate::bilattice::*;
        match self {
            BinOp::And => truth_meet(a, b),
            BinOp::Or => truth_join(a, b),
            BinOp::Imp => implies(a, b),
            BinOp::Equiv => equiv(a, b),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&",
            BinOp::Or => "|",
            BinOp::Imp => "->",
            BinOp::Equiv => "<->",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// Pairs `(i, j)` (1-based) of equal variables at position `i` of the left
/// operand and `j` of the right operand. Kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JoinSet(Vec<(usize, usize)>);

impl JoinSet {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        JoinSet(pairs)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// `π₂(S)`: the joined right-hand positions.
    pub fn right_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&(_, j)| j)
    }
}

impl fmt::Display for JoinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (i, j)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "({i},{j})")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom {
        pred: Sym,
        args: Vec<Term>,
    },
    Truth(TruthValue),
    Identity(Term, Term),
    IntEq(Term, Term),
    TruthPred(Box<AbstractTerm>),
    Not(Box<Formula>),
    Bin {
        op: BinOp,
        left: Box<Formula>,
        right: Box<Formula>,
        join: JoinSet,
    },
    Quant {
        kind: Quantifier,
        index: usize,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Self {
        Formula::Atom {
            pred: pred.into(),
            args,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    /// Binary node with its join set computed from the operands.
    pub fn bin(op: BinOp, left: Formula, right: Formula) -> Self {
        let join = compute_join_set(&canonical_vars(&left), &canonical_vars(&right));
        Formula::Bin {
            op,
            left: Box::new(left),
            right: Box::new(right),
            join,
        }
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::bin(BinOp::And, left, right)
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::bin(BinOp::Or, left, right)
    }

    /// Quantifies `var`, which must be free in `body`.
    pub fn quantify(kind: Quantifier, var: &Variable, body: Formula) -> Result<Self, Error> {
        let vars = canonical_vars(&body).vars;
        let pos = vars.iter().position(|v| v == var).ok_or_else(|| {
            Error::Syntax(format!(
                "quantified variable `{var}` is not free in the body"
            ))
        })?;
        Ok(Formula::Quant {
            kind,
            index: pos + 1,
            body: Box::new(body),
        })
    }

    pub fn exists(var: &Variable, body: Formula) -> Result<Self, Error> {
        Formula::quantify(Quantifier::Exists, var, body)
    }

    pub fn forall(var: &Variable, body: Formula) -> Result<Self, Error> {
        Formula::quantify(Quantifier::Forall, var, body)
    }

    /// The variable bound by a quantifier node, if the index is in range.
    pub fn bound_variable(&self) -> Option<Variable> {
        match self {
            Formula::Quant { index, body, .. } => canonical_vars(body)
                .vars
                .get(index.wrapping_sub(1))
                .cloned(),
            _ => None,
        }
    }

    pub fn is_sentence(&self) -> bool {
        canonical_vars(self).vars.is_empty()
    }

    /// Nesting depth of connectives; atomic formulas have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Not(f) => 1 + f.depth(),
            Formula::Quant { body, .. } => 1 + body.depth(),
            Formula::Bin { left, right, .. } => 1 + left.depth().max(right.depth()),
            _ => 0,
        }
    }

    pub fn is_atomic(&self) -> bool {
        !matches!(
            self,
            Formula::Not(_) | Formula::Bin { .. } | Formula::Quant { .. }
        )
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

/// A formula paired with its canonical tuple of free variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VirtualPredicate {
    pub formula: Formula,
    pub vars: Vec<Variable>,
}

impl VirtualPredicate {
    pub fn new(formula: Formula) -> Self {
        canonical_vars(&formula)
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }
}

fn push_unique(out: &mut Vec<Variable>, v: &Variable) {
    if !out.contains(v) {
        out.push(v.clone());
    }
}

fn free_vars_into(f: &Formula, out: &mut Vec<Variable>) {
    match f {
        Formula::Atom { args, .. } => args.iter().for_each(|t| t.free_vars_into(out)),
        Formula::Truth(_) => {}
        Formula::Identity(a, b) | Formula::IntEq(a, b) => {
            a.free_vars_into(out);
            b.free_vars_into(out);
        }
        Formula::TruthPred(a) => a.visible.iter().for_each(|v| push_unique(out, v)),
        Formula::Not(g) => free_vars_into(g, out),
        Formula::Bin { left, right, .. } => {
            free_vars_into(left, out);
            free_vars_into(right, out);
        }
        Formula::Quant { index, body, .. } => {
            let mut inner = Vec::new();
            free_vars_into(body, &mut inner);
            if *index >= 1 && *index <= inner.len() {
                inner.remove(index - 1);
            }
            inner.iter().for_each(|v| push_unique(out, v));
        }
    }
}

/// Free variables of `f` ordered by first appearance, left to right.
pub fn canonical_vars(f: &Formula) -> VirtualPredicate {
    let mut vars = Vec::new();
    free_vars_into(f, &mut vars);
    VirtualPredicate {
        formula: f.clone(),
        vars,
    }
}

/// Free variables of `f` without cloning the formula.
pub fn free_vars(f: &Formula) -> Vec<Variable> {
    let mut vars = Vec::new();
    free_vars_into(f, &mut vars);
    vars
}

/// Every pair of positions carrying the same variable.
pub fn compute_join_set(left: &VirtualPredicate, right: &VirtualPredicate) -> JoinSet {
    join_set_of(&left.vars, &right.vars)
}

pub(crate) fn join_set_of(left: &[Variable], right: &[Variable]) -> JoinSet {
    let mut pairs = Vec::new();
    for (i, l) in left.iter().enumerate() {
        for (j, r) in right.iter().enumerate() {
            if l == r {
                pairs.push((i + 1, j + 1));
            }
        }
    }
    JoinSet::new(pairs)
}

fn term_free_vars(t: &Term) -> Vec<Variable> {
    let mut out = Vec::new();
    t.free_vars_into(&mut out);
    out
}

fn check_substitutable(x: &Variable, t: &Term) -> Result<(), Error> {
    match t.sort() {
        Some(s) if s != &*x.sort => Err(Error::SortMismatch {
            expected: x.sort.to_string(),
            found: s.to_string(),
            context: format!("substitution for `{x}`"),
        }),
        _ => Ok(()),
    }
}

/// `f[x/t]`: replaces every free occurrence of `x` by `t`.
///
/// Capture of a free variable of `t` by a quantifier or a hidden
/// abstraction variable is rejected.
pub fn substitute(f: &Formula, x: &Variable, t: &Term) -> Result<Formula, Error> {
    check_substitutable(x, t)?;
    let tvars = term_free_vars(t);
    subst_formula(f, x, t, &tvars)
}

fn subst_term(term: &Term, x: &Variable, t: &Term, tvars: &[Variable]) -> Result<Term, Error> {
    Ok(match term {
        Term::Var(v) if v == x => t.clone(),
        Term::Abstract(a) => Term::Abstract(Box::new(subst_abstract(a, x, t, tvars)?)),
        other => other.clone(),
    })
}

fn subst_abstract(
    a: &AbstractTerm,
    x: &Variable,
    t: &Term,
    tvars: &[Variable],
) -> Result<AbstractTerm, Error> {
    if !a.visible.contains(x) {
        return Ok(a.clone());
    }
    if let Some(c) = tvars.iter().find(|v| a.hidden.contains(v)) {
        return Err(Error::Capture(format!(
            "`{c}` would be captured by a hidden abstraction variable"
        )));
    }
    let body = subst_formula(&a.body, x, t, tvars)?;
    let vars = free_vars(&body);
    let visible = vars.into_iter().filter(|v| !a.hidden.contains(v)).collect();
    Ok(AbstractTerm {
        body,
        hidden: a.hidden.clone(),
        visible,
    })
}

fn subst_formula(
    f: &Formula,
    x: &Variable,
    t: &Term,
    tvars: &[Variable],
) -> Result<Formula, Error> {
    Ok(match f {
        Formula::Atom { pred, args } => Formula::Atom {
            pred: pred.clone(),
            args: args
                .iter()
                .map(|a| subst_term(a, x, t, tvars))
                .collect::<Result<_, _>>()?,
        },
        Formula::Truth(a) => Formula::Truth(*a),
        Formula::Identity(a, b) => {
            Formula::Identity(subst_term(a, x, t, tvars)?, subst_term(b, x, t, tvars)?)
        }
        Formula::IntEq(a, b) => {
            Formula::IntEq(subst_term(a, x, t, tvars)?, subst_term(b, x, t, tvars)?)
        }
        Formula::TruthPred(a) => Formula::TruthPred(Box::new(subst_abstract(a, x, t, tvars)?)),
        Formula::Not(g) => Formula::not(subst_formula(g, x, t, tvars)?),
        Formula::Bin {
            op, left, right, ..
        } => Formula::bin(
            *op,
            subst_formula(left, x, t, tvars)?,
            subst_formula(right, x, t, tvars)?,
        ),
        Formula::Quant { kind, index, body } => {
            let vars = free_vars(body);
            let Some(bound) = vars.get(index.wrapping_sub(1)).cloned() else {
                // vacuous quantifier: nothing is bound
                return Ok(Formula::Quant {
                    kind: *kind,
                    index: *index,
                    body: Box::new(subst_formula(body, x, t, tvars)?),
                });
            };
            if &bound == x || !vars.contains(x) {
                return Ok(f.clone());
            }
            if tvars.contains(&bound) {
                return Err(Error::Capture(format!(
                    "`{bound}` would be captured by a quantifier"
                )));
            }
            Formula::quantify(*kind, &bound, subst_formula(body, x, t, tvars)?)?
        }
    })
}

/// A variable assignment `g`: variables to constant names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(BTreeMap<Variable, Sym>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, v: Variable, c: Sym) -> Option<Sym> {
        self.0.insert(v, c)
    }

    pub fn with(mut self, v: Variable, c: Sym) -> Self {
        self.0.insert(v, c);
        self
    }

    pub fn unbind(&mut self, v: &Variable) -> Option<Sym> {
        self.0.remove(v)
    }

    pub fn get(&self, v: &Variable) -> Option<&Sym> {
        self.0.get(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Sym)> {
        self.0.iter()
    }

    /// Values of `vars` in order; `None` if one is unbound.
    pub fn tuple(&self, vars: &[Variable]) -> Option<Vec<Sym>> {
        vars.iter().map(|v| self.0.get(v).cloned()).collect()
    }
}

impl FromIterator<(Variable, Sym)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Variable, Sym)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

/// `f/g`: substitutes every free variable of `f` by its value under `g`.
///
/// Abstraction terms receive values for their visible variables only.
/// Sort membership of the values is the caller's concern (see
/// [`crate::kb::HerbrandKB::check_assignment`]).
pub fn ground(f: &Formula, g: &Assignment) -> Result<Formula, Error> {
    let mut out = f.clone();
    for v in free_vars(f) {
        let c = g
            .get(&v)
            .ok_or_else(|| Error::Unbound(v.name.to_string()))?;
        let term = Term::Const(Constant {
            name: c.clone(),
            sort: Some(v.sort.clone()),
        });
        out = substitute(&out, &v, &term)?;
    }
    Ok(out)
}

/// Grounds the visible variables of an abstraction term.
pub fn ground_abstract(a: &AbstractTerm, g: &Assignment) -> Result<AbstractTerm, Error> {
    let mut out = a.clone();
    for v in &a.visible {
        let c = g.get(v).ok_or_else(|| Error::Unbound(v.name.to_string()))?;
        let term = Term::Const(Constant {
            name: c.clone(),
            sort: Some(v.sort.clone()),
        });
        out = subst_abstract(&out, v, &term, &[])?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(n: &str) -> Variable {
        Variable::new(n, "d")
    }

    fn atom(p: &str, vs: &[&str]) -> Formula {
        Formula::atom(p, vs.iter().map(|v| Term::Var(var(v))).collect())
    }

    fn names(vp: &VirtualPredicate) -> Vec<String> {
        vp.vars.iter().map(|v| v.name.to_string()).collect()
    }

    #[test]
    fn canonical_order_is_first_appearance() {
        let f = Formula::and(atom("p", &["x", "y"]), atom("q", &["y", "z"]));
        assert_eq!(names(&canonical_vars(&f)), ["x", "y", "z"]);
        assert_eq!(
            names(&canonical_vars(&atom("p", &["y", "x", "y"]))),
            ["y", "x"]
        );
        assert!(canonical_vars(&Formula::Truth(TruthValue::True))
            .vars
            .is_empty());
    }

    #[test]
    fn join_set_of_shared_variables() {
        let l = atom("psi1", &["xi", "xj", "xk", "xl", "xm"]);
        let r = atom("psi2", &["xl", "yi", "xj", "yj"]);
        let s = compute_join_set(&canonical_vars(&l), &canonical_vars(&r));
        assert_eq!(s.pairs(), &[(2, 3), (4, 1)]);
        let whole = canonical_vars(&Formula::and(l, r));
        assert_eq!(names(&whole), ["xi", "xj", "xk", "xl", "xm", "yi", "yj"]);
    }

    #[test]
    fn join_set_edge_cases() {
        let a = canonical_vars(&atom("p", &["x", "y"]));
        let b = canonical_vars(&atom("q", &["u", "w"]));
        assert!(compute_join_set(&a, &b).is_empty());
        assert_eq!(compute_join_set(&a, &a).pairs(), &[(1, 1), (2, 2)]);
    }

    #[test]
    fn substitution() {
        let alice = Term::Const(Constant::new("alice", "d"));
        let f = atom("likes", &["x", "y"]);
        let g = substitute(&f, &var("x"), &alice).unwrap();
        assert_eq!(
            g,
            Formula::atom("likes", vec![alice.clone(), Term::Var(var("y"))])
        );

        let q = Formula::exists(&var("x"), atom("p", &["x"])).unwrap();
        assert_eq!(substitute(&q, &var("x"), &alice).unwrap(), q);

        let both = Formula::and(atom("p", &["x"]), atom("q", &["x"]));
        let grounded = substitute(&both, &var("x"), &alice).unwrap();
        assert_eq!(
            grounded,
            Formula::and(
                Formula::atom("p", vec![alice.clone()]),
                Formula::atom("q", vec![alice.clone()])
            )
        );
        if let Formula::Bin { join, .. } = &grounded {
            assert!(join.is_empty());
        }

        let wrong = Term::Const(Constant::new("paris", "city"));
        assert!(matches!(
            substitute(&f, &var("x"), &wrong),
            Err(Error::SortMismatch { .. })
        ));
    }

    #[test]
    fn substitution_reindexes_quantifiers() {
        // exists y. p(x, y): y is position 2, becomes position 1 after x := c
        let body = atom("p", &["x", "y"]);
        let q = Formula::exists(&var("y"), body).unwrap();
        let c = Term::Const(Constant::new("c", "d"));
        let g = substitute(&q, &var("x"), &c).unwrap();
        match g {
            Formula::Quant { index, .. } => assert_eq!(index, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn capture_is_rejected() {
        let q = Formula::exists(&var("y"), atom("p", &["x", "y"])).unwrap();
        assert!(matches!(
            substitute(&q, &var("x"), &Term::Var(var("y"))),
            Err(Error::Capture(_))
        ));
    }

    #[test]
    fn ground_abstraction_visible_vars() {
        let body = atom("p", &["x"]);
        let a = AbstractTerm::with_hidden(body, &[]).unwrap();
        assert_eq!(a.visible, vec![var("x")]);
        let f = Formula::TruthPred(Box::new(a));
        assert_eq!(names(&canonical_vars(&f)), ["x"]);
        let g = Assignment::new().with(var("x"), "c".into());
        let grounded = ground(&f, &g).unwrap();
        let c = Term::Const(Constant::new("c", "d"));
        let expected = Formula::TruthPred(Box::new(
            AbstractTerm::closed(Formula::atom("p", vec![c])).unwrap(),
        ));
        assert_eq!(grounded, expected);
        assert!(grounded.is_sentence());
    }

    #[test]
    fn hidden_variables_are_not_substituted() {
        let body = atom("p", &["x", "y"]);
        let a = AbstractTerm::with_hidden(body, &[var("x")]).unwrap();
        assert_eq!(a.visible, vec![var("y")]);
        let f = Formula::atom("says", vec![Term::Abstract(Box::new(a))]);
        assert_eq!(names(&canonical_vars(&f)), ["y"]);
        let g = Assignment::new().with(var("y"), "c".into());
        let grounded = ground(&f, &g).unwrap();
        assert!(grounded.is_sentence());
        if let Formula::Atom { args, .. } = &grounded {
            let Term::Abstract(a) = &args[0] else {
                panic!()
            };
            assert_eq!(a.hidden, vec![var("x")]);
            assert_eq!(names(&canonical_vars(&a.body)), ["x"]);
        }
    }

    #[test]
    fn ground_requires_bindings() {
        let f = atom("p", &["x"]);
        assert!(matches!(
            ground(&f, &Assignment::new()),
            Err(Error::Unbound(_))
        ));
        let s = Formula::Truth(TruthValue::Both);
        assert_eq!(ground(&s, &Assignment::new()).unwrap(), s);
    }

    #[test]
    fn quantifying_a_non_free_variable_fails() {
        assert!(Formula::exists(&var("z"), atom("p", &["x"])).is_err());
    }
}
