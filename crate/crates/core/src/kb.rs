//! Sorted finite domains, the Herbrand interpretation and its file format.
//!
//! ```text
//! sort person = {alice, bob}
//! const unicorn : unmeaning
//! pred likes(person, person)
//! pred says(person, sentence)
//! fact likes(alice, bob) = t
//! fact says(bob, <likes(alice, bob)>) = top
//! query q1 : exists x. likes(alice, x)
//! ```
//!
//! `#` starts a comment unless it begins a truth literal (`#t`, `#top`, ...).
//! Atoms not listed as facts are unknown.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::bilattice::{k_join, k_leq, TruthValue};
use crate::concepts::{intensional_interpret, source_formula, ConceptId};
use crate::error::{Error, Pos, Result};
use crate::syntax::{
    ground_abstract, parse_formula_at, print_formula, Assignment, Formula, Term, Variable,
    SENTENCE_SORT,
};
use crate::Sym;

const RESERVED: &[&str] = &["T", "exists", "forall", "unmeaning", SENTENCE_SORT];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortDecl {
    pub name: Sym,
    pub elements: Vec<Sym>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstDecl {
    pub name: Sym,
    /// `None` for non-meaningful constants.
    pub sort: Option<Sym>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateDecl {
    pub name: Sym,
    pub args: Vec<Sym>,
}

/// Declared sorts, constants and predicates.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    sorts: Vec<SortDecl>,
    consts: Vec<ConstDecl>,
    preds: Vec<PredicateDecl>,
    sort_index: HashMap<Sym, usize>,
    const_index: HashMap<Sym, usize>,
    pred_index: HashMap<Sym, usize>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.sorts == other.sorts && self.consts == other.consts && self.preds == other.preds
    }
}

impl Eq for Signature {}

fn check_ident(name: &str) -> std::result::Result<(), String> {
    let mut chars = name.chars();
    let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(format!("`{name}` is not an identifier"))
    }
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sort(&mut self, name: &str, elements: &[&str]) -> Result<()> {
        check_ident(name).map_err(Error::Kb)?;
        if RESERVED.contains(&name) {
            return Err(Error::Kb(format!("`{name}` is a reserved sort name")));
        }
        if self.sort_index.contains_key(name) {
            return Err(Error::Kb(format!("sort `{name}` declared twice")));
        }
        self.sort_index.insert(name.into(), self.sorts.len());
        self.sorts.push(SortDecl {
            name: name.into(),
            elements: vec![],
        });
        for e in elements {
            self.add_constant(e, Some(name))?;
        }
        Ok(())
    }

    /// Declares a constant. A meaningful constant joins its sort's
    /// extension; `sort = None` declares a non-meaningful one.
    pub fn add_constant(&mut self, name: &str, sort: Option<&str>) -> Result<()> {
        check_ident(name).map_err(Error::Kb)?;
        if RESERVED.contains(&name) {
            return Err(Error::Kb(format!("`{name}` cannot name a constant")));
        }
        if self.const_index.contains_key(name) {
            return Err(Error::Kb(format!(
                "constant `{name}` declared twice (names are unique across sorts)"
            )));
        }
        let sort: Option<Sym> = match sort {
            Some(s) => {
                let k = *self
                    .sort_index
                    .get(s)
                    .ok_or_else(|| Error::Kb(format!("undeclared sort `{s}`")))?;
                self.sorts[k].elements.push(name.into());
                Some(self.sorts[k].name.clone())
            }
            None => None,
        };
        self.const_index.insert(name.into(), self.consts.len());
        self.consts.push(ConstDecl {
            name: name.into(),
            sort,
        });
        Ok(())
    }

    pub fn add_predicate(&mut self, name: &str, args: &[&str]) -> Result<()> {
        check_ident(name).map_err(Error::Kb)?;
        if RESERVED.contains(&name) {
            return Err(Error::Kb(format!("`{name}` is built in")));
        }
        if self.pred_index.contains_key(name) {
            return Err(Error::Kb(format!("predicate `{name}` declared twice")));
        }
        if args.is_empty() {
            return Err(Error::Kb(format!("predicate `{name}` needs an argument")));
        }
        let mut sorts = Vec::with_capacity(args.len());
        for a in args {
            if *a == SENTENCE_SORT {
                sorts.push(Sym::from(SENTENCE_SORT));
            } else {
                let k = self
                    .sort_index
                    .get(*a)
                    .ok_or_else(|| Error::Kb(format!("undeclared sort `{a}`")))?;
                sorts.push(self.sorts[*k].name.clone());
            }
        }
        self.pred_index.insert(name.into(), self.preds.len());
        self.preds.push(PredicateDecl {
            name: name.into(),
            args: sorts,
        });
        Ok(())
    }

    pub fn sorts(&self) -> &[SortDecl] {
        &self.sorts
    }

    pub fn sort(&self, name: &str) -> Option<&SortDecl> {
        self.sort_index.get(name).map(|&k| &self.sorts[k])
    }

    pub fn constants(&self) -> &[ConstDecl] {
        &self.consts
    }

    pub fn constant(&self, name: &str) -> Option<&ConstDecl> {
        self.const_index.get(name).map(|&k| &self.consts[k])
    }

    pub fn unmeaning_constants(&self) -> impl Iterator<Item = &ConstDecl> {
        self.consts.iter().filter(|c| c.sort.is_none())
    }

    pub fn predicates(&self) -> &[PredicateDecl] {
        &self.preds
    }

    pub fn predicate(&self, name: &str) -> Option<&PredicateDecl> {
        self.pred_index.get(name).map(|&k| &self.preds[k])
    }

    /// Extension of a sort; `sentence` has none.
    pub fn domain(&self, sort: &str) -> Result<&[Sym]> {
        if sort == SENTENCE_SORT {
            return Ok(&[]);
        }
        self.sort(sort)
            .map(|s| s.elements.as_slice())
            .ok_or_else(|| Error::Kb(format!("undeclared sort `{sort}`")))
    }
}

/// Argument of a ground atom: a domain element or a reified sentence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Elem(Sym),
    Concept(ConceptId),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub pred: Sym,
    pub args: Vec<Value>,
}

impl GroundAtom {
    pub fn new(pred: &str, args: &[&str]) -> Self {
        GroundAtom {
            pred: pred.into(),
            args: args.iter().map(|a| Value::Elem((*a).into())).collect(),
        }
    }
}

fn value_text(v: &Value) -> String {
    match v {
        Value::Elem(e) => e.to_string(),
        Value::Concept(c) => match source_formula(*c) {
            Some(f) => format!("<{}>", print_formula(&f)),
            None => format!("<{c}>"),
        },
    }
}

impl std::fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let args: Vec<_> = self.args.iter().map(value_text).collect();
        write!(f, "{}({})", self.pred, args.join(", "))
    }
}

/// What a term denotes under an assignment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Denotation {
    Element(Sym),
    /// The non-meaning individual.
    Unmeaning,
    Concept(ConceptId),
}

impl Denotation {
    pub fn value(&self) -> Option<Value> {
        match self {
            Denotation::Element(e) => Some(Value::Elem(e.clone())),
            Denotation::Concept(c) => Some(Value::Concept(*c)),
            Denotation::Unmeaning => None,
        }
    }
}

/// How a second value for an already known atom is combined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MergePolicy {
    #[default]
    Overwrite,
    /// Knowledge join: t and f together give top.
    KJoin,
}

/// Result of [`HerbrandKB::fuse`].
#[derive(Clone, Debug)]
pub struct Fusion {
    pub kb: HerbrandKB,
    /// Atoms that became top although neither input had top.
    pub conflicts: Vec<GroundAtom>,
}

/// A finite Herbrand interpretation. Absent atoms are unknown.
#[derive(Clone, Debug)]
pub struct HerbrandKB {
    sig: Arc<Signature>,
    facts: BTreeMap<GroundAtom, TruthValue>,
    queries: Vec<(Sym, Formula)>,
    /// how this KB spells the reified sentences its facts mention; distinct
    /// sentences may share a concept (every atom over `unmeaning` is `u_⊥`)
    sources: BTreeMap<ConceptId, Formula>,
}

impl HerbrandKB {
    pub fn new(sig: Signature) -> Self {
        HerbrandKB {
            sig: Arc::new(sig),
            facts: BTreeMap::new(),
            queries: vec![],
            sources: BTreeMap::new(),
        }
    }

    /// Same signature, no facts, no queries.
    pub fn empty_like(&self) -> Self {
        HerbrandKB {
            sig: self.sig.clone(),
            facts: BTreeMap::new(),
            queries: vec![],
            sources: BTreeMap::new(),
        }
    }

    /// The concept of a sentence, remembering `body` as its spelling in
    /// this KB's text.
    pub fn reify(&mut self, body: &Formula) -> Result<ConceptId> {
        if !body.is_sentence() {
            return Err(Error::NotClosed(print_formula(body)));
        }
        let id = intensional_interpret(body);
        self.sources.entry(id).or_insert_with(|| body.clone());
        Ok(id)
    }

    fn atom_text(&self, atom: &GroundAtom) -> String {
        let args: Vec<String> = atom
            .args
            .iter()
            .map(|v| match v {
                Value::Concept(c) => match self.sources.get(c) {
                    Some(f) => format!("<{}>", print_formula(f)),
                    None => value_text(v),
                },
                Value::Elem(_) => value_text(v),
            })
            .collect();
        format!("{}({})", atom.pred, args.join(", "))
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn facts(&self) -> impl Iterator<Item = (&GroundAtom, TruthValue)> {
        self.facts.iter().map(|(a, v)| (a, *v))
    }

    pub fn fact_count(&self) -> usize {
        self.facts.len()
    }

    pub fn queries(&self) -> &[(Sym, Formula)] {
        &self.queries
    }

    pub fn add_query(&mut self, name: &str, f: Formula) {
        self.queries.push((name.into(), f));
    }

    /// Stored value, ⊥ when absent. No well-sortedness check.
    pub fn get(&self, atom: &GroundAtom) -> TruthValue {
        self.facts.get(atom).copied().unwrap_or(TruthValue::Unknown)
    }

    pub fn check_atom(&self, atom: &GroundAtom) -> Result<()> {
        let decl = self.sig.predicate(&atom.pred).ok_or_else(|| {
            if matches!(&*atom.pred, "T" | "=" | "=in=") {
                Error::Kb(format!("`{}` is built in", atom.pred))
            } else {
                Error::Kb(format!("unknown predicate `{}`", atom.pred))
            }
        })?;
        if decl.args.len() != atom.args.len() {
            return Err(Error::Kb(format!(
                "`{}` takes {} arguments, got {}",
                atom.pred,
                decl.args.len(),
                atom.args.len()
            )));
        }
        for (v, sort) in atom.args.iter().zip(&decl.args) {
            let ok = match v {
                Value::Concept(_) => &**sort == SENTENCE_SORT,
                Value::Elem(e) => self.sig.domain(sort)?.contains(e),
            };
            if !ok {
                return Err(Error::SortMismatch {
                    expected: sort.to_string(),
                    found: value_text(v),
                    context: format!("atom `{atom}`"),
                });
            }
        }
        Ok(())
    }

    /// Ground atom of a ground atomic formula; `None` when an argument
    /// denotes the non-meaning individual.
    pub fn ground_atom(&self, f: &Formula) -> Result<Option<GroundAtom>> {
        let Formula::Atom { pred, args } = f else {
            return Err(Error::Kb(format!("`{f}` is not a predicate atom")));
        };
        let g = Assignment::new();
        let mut vals = Vec::with_capacity(args.len());
        for t in args {
            match self.extend_assignment(&g, t)?.value() {
                Some(v) => vals.push(v),
                None => return Ok(None),
            }
        }
        let atom = GroundAtom {
            pred: pred.clone(),
            args: vals,
        };
        self.check_atom(&atom)?;
        Ok(Some(atom))
    }

    /// Value of a ground atom or truth constant.
    pub fn lookup(&self, f: &Formula) -> Result<TruthValue> {
        match f {
            Formula::Truth(a) => Ok(*a),
            Formula::Atom { .. } => Ok(self
                .ground_atom(f)?
                .map_or(TruthValue::Unknown, |a| self.get(&a))),
            other => Err(Error::Kb(format!(
                "`{other}` is not a stored atom; evaluate it instead"
            ))),
        }
    }

    /// Stores `value` for `atom`, returning the previous stored value.
    pub fn assert_fact(
        &mut self,
        atom: GroundAtom,
        value: TruthValue,
    ) -> Result<Option<TruthValue>> {
        self.check_atom(&atom)?;
        if value == TruthValue::Unknown {
            return Err(Error::Kb(
                "cannot store bot; retract the atom instead".into(),
            ));
        }
        Ok(self.facts.insert(atom, value))
    }

    /// Stores `value` combined with the current value under `policy`;
    /// returns the resulting value.
    pub fn assert_with(
        &mut self,
        atom: GroundAtom,
        value: TruthValue,
        policy: MergePolicy,
    ) -> Result<TruthValue> {
        let new = match policy {
            MergePolicy::Overwrite => value,
            MergePolicy::KJoin => k_join(self.get(&atom), value),
        };
        self.assert_fact(atom, new)?;
        Ok(new)
    }

    pub fn retract(&mut self, atom: &GroundAtom) -> Option<TruthValue> {
        self.facts.remove(atom)
    }

    fn same_signature(&self, other: &HerbrandKB) -> Result<()> {
        if self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(
                "knowledge bases declare different sorts, constants or predicates".into(),
            ))
        }
    }

    /// Pointwise knowledge order over the Herbrand base.
    pub fn knowledge_leq(&self, other: &HerbrandKB) -> Result<bool> {
        self.same_signature(other)?;
        Ok(self.facts.iter().all(|(a, v)| k_leq(*v, other.get(a))))
    }

    /// Pointwise knowledge join.
    pub fn fuse(&self, other: &HerbrandKB) -> Result<Fusion> {
        self.same_signature(other)?;
        let mut kb = self.clone();
        let mut conflicts = vec![];
        for (a, v) in &other.facts {
            let old = kb.get(a);
            let new = k_join(old, *v);
            if new == TruthValue::Both && old != TruthValue::Both && *v != TruthValue::Both {
                conflicts.push(a.clone());
            }
            kb.facts.insert(a.clone(), new);
        }
        for q in &other.queries {
            if !kb.queries.contains(q) {
                kb.queries.push(q.clone());
            }
        }
        for (c, f) in &other.sources {
            kb.sources.entry(*c).or_insert_with(|| f.clone());
        }
        Ok(Fusion { kb, conflicts })
    }

    /// Adds `other`'s facts and queries under `policy`.
    pub fn merge(&mut self, other: &HerbrandKB, policy: MergePolicy) -> Result<()> {
        self.same_signature(other)?;
        for (a, v) in &other.facts {
            self.assert_with(a.clone(), *v, policy)?;
        }
        self.queries.extend(other.queries.iter().cloned());
        for (c, f) in &other.sources {
            self.sources.entry(*c).or_insert_with(|| f.clone());
        }
        Ok(())
    }

    /// All ground atoms over predicates without `sentence` arguments.
    pub fn herbrand_base(&self) -> Vec<GroundAtom> {
        let mut out = vec![];
        for p in self.sig.predicates() {
            if p.args.iter().any(|s| &**s == SENTENCE_SORT) {
                continue;
            }
            let doms: Vec<&[Sym]> = p
                .args
                .iter()
                .map(|s| self.sig.domain(s).expect("declared"))
                .collect();
            for tuple in product(&doms) {
                out.push(GroundAtom {
                    pred: p.name.clone(),
                    args: tuple.into_iter().map(Value::Elem).collect(),
                });
            }
        }
        out
    }

    /// Cross product of the variables' sort extensions, last variable
    /// varying fastest.
    pub fn enumerate_assignments(&self, vars: &[Variable]) -> Result<Vec<Assignment>> {
        let mut doms = Vec::with_capacity(vars.len());
        for v in vars {
            if &*v.sort == SENTENCE_SORT {
                return Err(Error::Kb(format!(
                    "variable `{v}` ranges over `sentence`, which has no elements"
                )));
            }
            doms.push(self.sig.domain(&v.sort)?);
        }
        Ok(product(&doms)
            .into_iter()
            .map(|t| vars.iter().cloned().zip(t).collect())
            .collect())
    }

    pub fn check_assignment(&self, g: &Assignment) -> Result<()> {
        for (v, c) in g.iter() {
            if !self.sig.domain(&v.sort)?.contains(c) {
                return Err(Error::SortMismatch {
                    expected: v.sort.to_string(),
                    found: c.to_string(),
                    context: format!("assignment of `{v}`"),
                });
            }
        }
        Ok(())
    }

    /// `g*(t)`.
    pub fn extend_assignment(&self, g: &Assignment, t: &Term) -> Result<Denotation> {
        Ok(match t {
            Term::Var(v) => Denotation::Element(
                g.get(v)
                    .cloned()
                    .ok_or_else(|| Error::Unbound(v.name.to_string()))?,
            ),
            Term::Const(c) => match &c.sort {
                Some(_) => Denotation::Element(c.name.clone()),
                None => Denotation::Unmeaning,
            },
            Term::Abstract(a) => {
                let a = ground_abstract(a, g)?;
                Denotation::Concept(intensional_interpret(&a.body))
            }
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut sig = Signature::new();
        let mut facts: Vec<(Pos, Formula, TruthValue, String)> = vec![];
        let mut queries = vec![];
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = strip_comment(raw);
            let body = line.trim();
            if body.is_empty() {
                continue;
            }
            let col = |s: &str| s.as_ptr() as usize - raw.as_ptr() as usize + 1;
            let at = |s: &str| Pos {
                line: line_no,
                col: col(s),
            };
            let (kw, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            let rest = rest.trim_start();
            let wrap = |e: Error, s: &str| match e {
                Error::Parse { .. } => e,
                other => Error::parse(at(s), other.to_string()),
            };
            match kw {
                "sort" => {
                    let (name, elems) = rest
                        .split_once('=')
                        .ok_or_else(|| Error::parse(at(rest), "expected `sort NAME = {...}`"))?;
                    let elems = elems.trim();
                    let inner = elems
                        .strip_prefix('{')
                        .and_then(|e| e.strip_suffix('}'))
                        .ok_or_else(|| Error::parse(at(elems), "expected `{a, b, ...}`"))?;
                    let list = split_list(inner);
                    sig.add_sort(name.trim(), &list)
                        .map_err(|e| wrap(e, rest))?;
                }
                "const" => {
                    let (name, sort) = rest
                        .split_once(':')
                        .ok_or_else(|| Error::parse(at(rest), "expected `const NAME : SORT`"))?;
                    let sort = sort.trim();
                    let sort = (sort != "unmeaning").then_some(sort);
                    sig.add_constant(name.trim(), sort)
                        .map_err(|e| wrap(e, rest))?;
                }
                "pred" => {
                    let (name, args) = rest
                        .split_once('(')
                        .ok_or_else(|| Error::parse(at(rest), "expected `pred NAME(SORT, ...)`"))?;
                    let args = args
                        .trim_end()
                        .strip_suffix(')')
                        .ok_or_else(|| Error::parse(at(args), "expected `)`"))?;
                    sig.add_predicate(name.trim(), &split_list(args))
                        .map_err(|e| wrap(e, rest))?;
                }
                "fact" => {
                    let eq = rest
                        .rfind('=')
                        .ok_or_else(|| Error::parse(at(rest), "expected `fact ATOM = VALUE`"))?;
                    let (atom_text, value_text) = (&rest[..eq], rest[eq + 1..].trim());
                    let value = match value_text {
                        "t" | "f" | "top" => value_text.parse::<TruthValue>().expect("literal"),
                        "bot" => {
                            return Err(Error::parse(
                                at(value_text),
                                "`bot` is the default and cannot be stored",
                            ))
                        }
                        _ => {
                            return Err(Error::parse(
                                at(value_text),
                                format!("expected t, f or top, found `{value_text}`"),
                            ))
                        }
                    };
                    let f = parse_formula_at(atom_text, &sig, at(atom_text))?;
                    facts.push((at(atom_text), f, value, atom_text.trim().to_string()));
                }
                "query" => {
                    let (name, formula) = rest
                        .split_once(':')
                        .ok_or_else(|| Error::parse(at(rest), "expected `query NAME : FORMULA`"))?;
                    let name = name.trim();
                    check_ident(name).map_err(|m| Error::parse(at(rest), m))?;
                    let f = parse_formula_at(formula, &sig, at(formula))?;
                    queries.push((Sym::from(name), f));
                }
                other => {
                    return Err(Error::parse(
                        at(body),
                        format!("unknown declaration `{other}`"),
                    ))
                }
            }
        }

        let mut kb = HerbrandKB::new(sig);
        kb.queries = queries;
        for (pos, f, value, text) in facts {
            let atom = match &f {
                Formula::Atom { args, .. } => {
                    if let Some(v) = crate::syntax::free_vars(&f).first() {
                        return Err(Error::parse(pos, format!("undeclared constant `{v}`")));
                    }
                    if args
                        .iter()
                        .any(|t| matches!(t, Term::Const(c) if c.sort.is_none()))
                    {
                        return Err(Error::parse(
                            pos,
                            format!(
                                "`{text}` mentions a non-meaningful constant and is always bot"
                            ),
                        ));
                    }
                    for t in args {
                        if let Term::Abstract(a) = t {
                            kb.reify(&a.body)
                                .map_err(|e| Error::parse(pos, e.to_string()))?;
                        }
                    }
                    kb.ground_atom(&f)
                        .map_err(|e| Error::parse(pos, e.to_string()))?
                        .expect("meaningful arguments")
                }
                _ => {
                    return Err(Error::parse(
                        pos,
                        format!("`{text}` is built in; facts need a declared predicate"),
                    ))
                }
            };
            if let Some(old) = kb.facts.get(&atom) {
                if *old != value {
                    return Err(Error::parse(
                        pos,
                        format!("conflicting values for `{text}`: {old} and {value}"),
                    ));
                }
            }
            kb.facts.insert(atom, value);
        }
        Ok(kb)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        HerbrandKB::parse(&text).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse {
                pos,
                msg: format!("{}: {msg}", path.display()),
            },
            other => other,
        })
    }

    /// Canonical text: declarations in order, facts sorted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in self.sig.sorts() {
            let elems: Vec<&str> = s.elements.iter().map(|e| &**e).collect();
            let _ = writeln!(out, "sort {} = {{{}}}", s.name, elems.join(", "));
        }
        for c in self.sig.unmeaning_constants() {
            let _ = writeln!(out, "const {} : unmeaning", c.name);
        }
        for p in self.sig.predicates() {
            let args: Vec<&str> = p.args.iter().map(|a| &**a).collect();
            let _ = writeln!(out, "pred {}({})", p.name, args.join(", "));
        }
        let mut facts: Vec<String> = self
            .facts
            .iter()
            .map(|(a, v)| format!("fact {} = {v}", self.atom_text(a)))
            .collect();
        facts.sort();
        for f in facts {
            out.push_str(&f);
            out.push('\n');
        }
        for (name, f) in &self.queries {
            let _ = writeln!(out, "query {name} : {}", print_formula(f));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text())
            .map_err(|e| Error::io(format!("writing {}", path.display()), e))
    }
}

fn strip_comment(line: &str) -> &str {
    let mut i = 0;
    while let Some(off) = line[i..].find('#') {
        let k = i + off;
        let word: String = line[k + 1..]
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
            .collect();
        if !matches!(word.as_str(), "t" | "f" | "top" | "bot") {
            return &line[..k];
        }
        i = k + 1;
    }
    line
}

fn split_list(s: &str) -> Vec<&str> {
    let s = s.trim();
    if s.is_empty() {
        return vec![];
    }
    s.split(',').map(str::trim).collect()
}

/// Cartesian product, last factor fastest.
pub(crate) fn product(doms: &[&[Sym]]) -> Vec<Vec<Sym>> {
    let mut out = vec![vec![]];
    for d in doms {
        let mut next = Vec::with_capacity(out.len() * d.len());
        for prefix in &out {
            for e in d.iter() {
                let mut t = prefix.clone();
                t.push(e.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}
