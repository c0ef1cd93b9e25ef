//! Intensional concepts and their extensionalization in a world.
//!
//! A concept is an interned algebra term, so structurally equal concepts
//! share one [`ConceptId`] and identity between concepts is decidable.
//! [`intensional_interpret`] maps formulas homomorphically into this
//! algebra; an [`Extensionalization`] maps concepts into m-extensions.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::bilattice::TruthValue;
use crate::error::{Error, Result};
use crate::kb::{GroundAtom, Value};
use crate::mext::{
    ext_and, ext_binary, ext_equiv, ext_equiv_op, ext_exists, ext_forall, ext_imp, ext_leq,
    ext_neg, ext_or, includes_completed, Column, MExtension,
};
use crate::par;
use crate::syntax::{
    free_vars, ground_abstract, AbstractTerm, Assignment, BinOp, Formula, JoinSet, Quantifier,
    Term, VirtualPredicate,
};
use crate::valuation::World;
use crate::Sym;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConceptId(u32);

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "concept{}", self.0)
    }
}

/// Argument position of an atomic concept.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    /// Position in the concept's variable tuple (0-based).
    Var(usize),
    Elem(Sym),
    Unmeaning,
    Concept(ConceptId),
    /// Abstraction with visible variables at the given tuple positions.
    Open {
        term: AbstractTerm,
        positions: Vec<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Identity, `Id`.
    Id,
    /// Weak intensional equivalence, `Eq`.
    Eq,
    /// The truth concept `u_T`.
    Truth,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConceptNode {
    /// `u_a`; `u_⊥` is `Truth(Unknown)`.
    Truth(TruthValue),
    /// Empty extension over the given sorts (open atoms touching ℛ).
    Void {
        columns: Vec<Sym>,
    },
    Builtin(Builtin),
    Atom {
        pred: Sym,
        slots: Vec<Slot>,
        columns: Vec<Sym>,
    },
    /// Open atom of a built-in relation.
    Apply {
        base: Builtin,
        slots: Vec<Slot>,
        columns: Vec<Sym>,
    },
    /// `T(<φ>)`.
    TruthOf {
        slot: Slot,
        columns: Vec<Sym>,
    },
    /// `pred_k(v_1, ..., v_k, base)` with `value` as the last entry.
    Pred {
        args: Vec<Slot>,
        value: TruthValue,
        base: ConceptId,
    },
    Neg(ConceptId),
    Meet(ConceptId, ConceptId, JoinSet),
    Join(ConceptId, ConceptId, JoinSet),
    Impl(ConceptId, ConceptId, JoinSet),
    Equiv(ConceptId, ConceptId, JoinSet),
    Exists(usize, ConceptId),
    Forall(usize, ConceptId),
}

#[derive(Default)]
struct Interner {
    nodes: Vec<Arc<ConceptNode>>,
    sources: Vec<Option<Formula>>,
    ids: HashMap<Arc<ConceptNode>, ConceptId>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(Default::default)
}

pub fn intern(node: ConceptNode) -> ConceptId {
    if let Some(id) = interner().read().expect("interner").ids.get(&node) {
        return *id;
    }
    let mut w = interner().write().expect("interner");
    if let Some(id) = w.ids.get(&node) {
        return *id;
    }
    let id = ConceptId(u32::try_from(w.nodes.len()).expect("concept table overflow"));
    let node = Arc::new(node);
    w.nodes.push(node.clone());
    w.sources.push(None);
    w.ids.insert(node, id);
    id
}

pub fn node(id: ConceptId) -> Arc<ConceptNode> {
    interner().read().expect("interner").nodes[id.0 as usize].clone()
}

/// A formula whose interpretation produced `id`, if any was recorded.
pub fn source_formula(id: ConceptId) -> Option<Formula> {
    interner().read().expect("interner").sources[id.0 as usize].clone()
}

fn record_source(id: ConceptId, f: &Formula) {
    let mut w = interner().write().expect("interner");
    let slot = &mut w.sources[id.0 as usize];
    if slot.is_none() {
        *slot = Some(f.clone());
    }
}

/// `n` such that the concept lives in `D_n`: argument columns plus one.
pub fn degree(id: ConceptId) -> usize {
    match &*node(id) {
        ConceptNode::Truth(_) | ConceptNode::Pred { .. } => 1,
        ConceptNode::Builtin(Builtin::Id | Builtin::Eq) => 3,
        ConceptNode::Builtin(Builtin::Truth) => 2,
        ConceptNode::Void { columns }
        | ConceptNode::Atom { columns, .. }
        | ConceptNode::Apply { columns, .. }
        | ConceptNode::TruthOf { columns, .. } => columns.len() + 1,
        ConceptNode::Neg(c) => degree(*c),
        ConceptNode::Meet(a, b, s)
        | ConceptNode::Join(a, b, s)
        | ConceptNode::Impl(a, b, s)
        | ConceptNode::Equiv(a, b, s) => {
            let (da, db) = (degree(*a), degree(*b));
            if matches!(&*node(id), ConceptNode::Equiv(..)) && da == 1 && db == 1 {
                return 1;
            }
            (da - 1) + (db - 1) - s.len() + 1
        }
        ConceptNode::Exists(i, c) | ConceptNode::Forall(i, c) => {
            let d = degree(*c);
            if *i >= 1 && *i < d {
                d - 1
            } else {
                d
            }
        }
    }
}

/// `I(φ)`: the concept of a formula, whose extension columns follow the
/// formula's canonical variable tuple.
pub fn intensional_interpret(f: &Formula) -> ConceptId {
    let id = interp(f);
    record_source(id, f);
    id
}

/// `I` on a virtual predicate.
pub fn interpret_virtual(vp: &VirtualPredicate) -> ConceptId {
    intensional_interpret(&vp.formula)
}

fn slot(t: &Term, vars: &[crate::syntax::Variable]) -> Slot {
    match t {
        Term::Var(v) => Slot::Var(vars.iter().position(|x| x == v).expect("free variable")),
        Term::Const(c) if c.sort.is_some() => Slot::Elem(c.name.clone()),
        Term::Const(_) => Slot::Unmeaning,
        Term::Abstract(a) if a.visible.is_empty() => Slot::Concept(intensional_interpret(&a.body)),
        Term::Abstract(a) => Slot::Open {
            term: (**a).clone(),
            positions: a
                .visible
                .iter()
                .map(|v| vars.iter().position(|x| x == v).expect("visible variable"))
                .collect(),
        },
    }
}

fn void(columns: Vec<Sym>) -> ConceptNode {
    if columns.is_empty() {
        ConceptNode::Truth(TruthValue::Unknown)
    } else {
        ConceptNode::Void { columns }
    }
}

fn interp(f: &Formula) -> ConceptId {
    let vars = free_vars(f);
    let columns = || vars.iter().map(|v| v.sort.clone()).collect::<Vec<_>>();
    let node = match f {
        Formula::Truth(a) => ConceptNode::Truth(*a),
        Formula::Atom { pred, args } => {
            let slots: Vec<Slot> = args.iter().map(|t| slot(t, &vars)).collect();
            if slots.contains(&Slot::Unmeaning) {
                void(columns())
            } else {
                ConceptNode::Atom {
                    pred: pred.clone(),
                    slots,
                    columns: columns(),
                }
            }
        }
        Formula::Identity(a, b) | Formula::IntEq(a, b) => {
            let base = if matches!(f, Formula::Identity(..)) {
                Builtin::Id
            } else {
                Builtin::Eq
            };
            let slots = vec![slot(a, &vars), slot(b, &vars)];
            if slots.contains(&Slot::Unmeaning) {
                void(columns())
            } else if vars.is_empty() {
                ConceptNode::Pred {
                    args: slots,
                    value: TruthValue::True,
                    base: intern(ConceptNode::Builtin(base)),
                }
            } else {
                ConceptNode::Apply {
                    base,
                    slots,
                    columns: columns(),
                }
            }
        }
        Formula::TruthPred(a) => ConceptNode::TruthOf {
            slot: slot(&Term::Abstract(a.clone()), &vars),
            columns: columns(),
        },
        Formula::Not(g) => ConceptNode::Neg(interp(g)),
        Formula::Bin {
            op,
            left,
            right,
            join,
        } => {
            let (l, r, s) = (interp(left), interp(right), join.clone());
            match op {
                BinOp::And => ConceptNode::Meet(l, r, s),
                BinOp::Or => ConceptNode::Join(l, r, s),
                BinOp::Imp => ConceptNode::Impl(l, r, s),
                BinOp::Equiv => ConceptNode::Equiv(l, r, s),
            }
        }
        Formula::Quant { kind, index, body } => match kind {
            Quantifier::Exists => ConceptNode::Exists(*index, interp(body)),
            Quantifier::Forall => ConceptNode::Forall(*index, interp(body)),
        },
    };
    intern(node)
}

/// `h`: concepts to m-extensions in one world, memoized.
pub struct Extensionalization {
    world: World,
    memo: HashMap<ConceptId, Arc<MExtension>>,
    columns: HashMap<Sym, Column>,
}

impl Extensionalization {
    pub fn new(world: &World) -> Self {
        Extensionalization {
            world: world.clone(),
            memo: HashMap::new(),
            columns: HashMap::new(),
        }
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    fn column(&mut self, sort: &Sym) -> Result<Column> {
        if let Some(c) = self.columns.get(sort) {
            return Ok(c.clone());
        }
        let domain = self.world.kb().signature().domain(sort)?;
        let c = Column {
            sort: sort.clone(),
            domain: domain.iter().cloned().collect(),
        };
        self.columns.insert(sort.clone(), c.clone());
        Ok(c)
    }

    fn columns_of(&mut self, sorts: &[Sym]) -> Result<Vec<Column>> {
        sorts.iter().map(|s| self.column(s)).collect()
    }

    /// `h(c)`.
    pub fn extensionalize(&mut self, c: ConceptId) -> Result<Arc<MExtension>> {
        if let Some(r) = self.memo.get(&c) {
            return Ok(r.clone());
        }
        let r = Arc::new(self.compute(c)?);
        self.memo.insert(c, r.clone());
        Ok(r)
    }

    /// Recomputes `h(c)` without consulting or filling the memo.
    pub fn extensionalize_fresh(&mut self, c: ConceptId) -> Result<MExtension> {
        let saved = std::mem::take(&mut self.memo);
        let r = self.compute(c);
        self.memo = saved;
        r
    }

    fn compute(&mut self, c: ConceptId) -> Result<MExtension> {
        let n = node(c);
        Ok(match &*n {
            ConceptNode::Truth(a) => MExtension::scalar(*a),
            ConceptNode::Void { columns } => MExtension::empty(self.columns_of(columns)?),
            ConceptNode::Builtin(Builtin::Id) => self.identity_relation()?,
            ConceptNode::Builtin(b) => {
                return Err(Error::Relation(format!(
                    "built-in {b:?} has no finite extension; use predication"
                )))
            }
            ConceptNode::Atom {
                pred,
                slots,
                columns,
            } => {
                let cols = self.columns_of(columns)?;
                let tuples = MExtension::empty(cols.clone()).tuples();
                let kb = self.world.kb();
                let values = par::try_map(&tuples, |t| {
                    let args = ground_slots(slots, t, columns)?;
                    Ok::<_, Error>(kb.get(&GroundAtom {
                        pred: pred.clone(),
                        args,
                    }))
                })?;
                MExtension::from_rows(cols, tuples.into_iter().zip(values))?
            }
            ConceptNode::Apply {
                base,
                slots,
                columns,
            } => {
                let cols = self.columns_of(columns)?;
                let base = intern(ConceptNode::Builtin(*base));
                let mut rows = vec![];
                for t in MExtension::empty(cols.clone()).tuples() {
                    let args = ground_slots(slots, &t, columns)?;
                    let holds = self.predication(&args, TruthValue::True, base)?;
                    rows.push((t, TruthValue::from_bool(holds)));
                }
                MExtension::from_rows(cols, rows)?
            }
            ConceptNode::TruthOf { slot, columns } => {
                let cols = self.columns_of(columns)?;
                let mut rows = vec![];
                for t in MExtension::empty(cols.clone()).tuples() {
                    let args = ground_slots(std::slice::from_ref(slot), &t, columns)?;
                    let Value::Concept(u) = args[0] else {
                        return Err(Error::Relation("T applied to a non-concept".into()));
                    };
                    rows.push((t, self.truth_of_lconcept(u)?));
                }
                MExtension::from_rows(cols, rows)?
            }
            ConceptNode::Pred { args, value, base } => {
                let args = ground_slots(args, &[], &[])?;
                MExtension::scalar(TruthValue::from_bool(
                    self.predication(&args, *value, *base)?,
                ))
            }
            ConceptNode::Neg(a) => ext_neg(&*self.extensionalize(*a)?),
            ConceptNode::Meet(a, b, s) => {
                ext_and(&*self.extensionalize(*a)?, &*self.extensionalize(*b)?, s)?
            }
            ConceptNode::Join(a, b, s) => {
                ext_or(&*self.extensionalize(*a)?, &*self.extensionalize(*b)?, s)?
            }
            ConceptNode::Impl(a, b, s) => {
                ext_imp(&*self.extensionalize(*a)?, &*self.extensionalize(*b)?, s)?
            }
            ConceptNode::Equiv(a, b, s) => {
                let (ra, rb) = (self.extensionalize(*a)?, self.extensionalize(*b)?);
                if ra.width() == 0 && rb.width() == 0 {
                    ext_equiv_op(&ra, &rb)?
                } else {
                    ext_binary(BinOp::Equiv, &ra, &rb, s)?
                }
            }
            ConceptNode::Exists(i, a) => ext_exists(&*self.extensionalize(*a)?, *i),
            ConceptNode::Forall(i, a) => ext_forall(&*self.extensionalize(*a)?, *i),
        })
    }

    /// `R_=` over every declared element (sort `_`).
    fn identity_relation(&mut self) -> Result<MExtension> {
        let sig = self.world.kb().signature();
        let all: Arc<[Sym]> = sig
            .sorts()
            .iter()
            .flat_map(|s| s.elements.iter().cloned())
            .collect();
        let col = Column {
            sort: "_".into(),
            domain: all.clone(),
        };
        let rows = all.iter().flat_map(|u| {
            all.iter()
                .map(move |v| (vec![u.clone(), v.clone()], TruthValue::from_bool(u == v)))
        });
        MExtension::from_rows(vec![col.clone(), col], rows)
    }

    /// `pred_k(args, value, base)`: whether `(args, value)` lies in the
    /// completion of `h(base)` up to a permutation of argument columns.
    pub fn predication(
        &mut self,
        args: &[Value],
        value: TruthValue,
        base: ConceptId,
    ) -> Result<bool> {
        match &*node(base) {
            ConceptNode::Builtin(Builtin::Id) => {
                let [a, b] = args else {
                    return Err(Error::Relation("Id takes two arguments".into()));
                };
                // R_= is total, so completion adds nothing
                Ok(value == TruthValue::from_bool(a == b))
            }
            ConceptNode::Builtin(Builtin::Eq) => {
                let [a, b] = args else {
                    return Err(Error::Relation("Eq takes two arguments".into()));
                };
                let same = match (a, b) {
                    (Value::Concept(x), Value::Concept(y)) => {
                        let (rx, ry) = (self.extensionalize(*x)?, self.extensionalize(*y)?);
                        ext_equiv(&rx, &ry)
                    }
                    (Value::Elem(x), Value::Elem(y)) => x == y,
                    _ => false,
                };
                Ok(value == TruthValue::from_bool(same))
            }
            ConceptNode::Builtin(Builtin::Truth) => {
                let [Value::Concept(u)] = args else {
                    return Ok(false);
                };
                Ok(degree(*u) == 1 && self.truth_of_lconcept(*u)? == value)
            }
            _ => {
                let r = self.extensionalize(base)?;
                if args.len() != r.width() {
                    return Err(Error::Relation(format!(
                        "predication with {} arguments on a concept of degree {}",
                        args.len(),
                        r.width() + 1
                    )));
                }
                let mut tuple = Vec::with_capacity(args.len());
                for a in args {
                    match a {
                        Value::Elem(e) => tuple.push(e.clone()),
                        Value::Concept(_) => return Ok(false),
                    }
                }
                includes_completed(&[(tuple, value)], args.len(), &r.complete())
            }
        }
    }

    /// The truth value an L-concept carries: `a` for `{a}`, ⊥ for `∅`.
    pub fn truth_of_lconcept(&mut self, u: ConceptId) -> Result<TruthValue> {
        let d = degree(u);
        if d != 1 {
            return Err(Error::Relation(format!(
                "{u} has degree {d}; only degree-1 concepts carry a truth value"
            )));
        }
        Ok(self
            .extensionalize(u)?
            .truth()
            .expect("degree 1 is width 0"))
    }
}

fn ground_slots(slots: &[Slot], tuple: &[Sym], columns: &[Sym]) -> Result<Vec<Value>> {
    slots
        .iter()
        .map(|s| {
            Ok(match s {
                Slot::Var(k) => Value::Elem(tuple[*k].clone()),
                Slot::Elem(e) => Value::Elem(e.clone()),
                Slot::Concept(c) => Value::Concept(*c),
                Slot::Unmeaning => {
                    return Err(Error::Relation("non-meaning argument in a slot".into()))
                }
                Slot::Open { term, positions } => {
                    let g: Assignment = term
                        .visible
                        .iter()
                        .zip(positions)
                        .map(|(v, &k)| {
                            debug_assert_eq!(v.sort, columns[k]);
                            (v.clone(), tuple[k].clone())
                        })
                        .collect();
                    let a = ground_abstract(term, &g)?;
                    Value::Concept(intensional_interpret(&a.body))
                }
            })
        })
        .collect()
}

/// `u ⊑ v` over every supplied world.
pub fn isa(u: ConceptId, v: ConceptId, worlds: &[World]) -> Result<bool> {
    for w in worlds {
        let mut h = Extensionalization::new(w);
        if !ext_leq(&*h.extensionalize(u)?, &*h.extensionalize(v)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `u ≡ v` over every supplied world.
pub fn strong_equiv(u: ConceptId, v: ConceptId, worlds: &[World]) -> Result<bool> {
    Ok(isa(u, v, worlds)? && isa(v, u, worlds)?)
}

/// One line of a commutation report.
#[derive(Clone, Debug)]
pub struct Commutation {
    pub formula: String,
    pub direct: TruthValue,
    pub concept: MExtension,
    pub pass: bool,
}

pub(crate) fn scalar_text(r: &MExtension) -> String {
    match r.truth() {
        Some(TruthValue::Unknown) => "∅".into(),
        Some(a) => a.to_string(),
        None => format!("<width {}>", r.width()),
    }
}

impl fmt::Display for Commutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}  {}  v*={}  hI={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.formula,
            self.direct,
            scalar_text(&self.concept)
        )
    }
}

/// Compares `v*(φ)` with `h(I(φ))` for a sentence.
pub fn check_commutation(world: &World, sentence: &Formula) -> Result<Commutation> {
    let direct = world.eval(sentence)?;
    let mut h = Extensionalization::new(world);
    let concept = (*h.extensionalize(intensional_interpret(sentence))?).clone();
    let pass = concept.width() == 0
        && match direct {
            TruthValue::Unknown => concept.is_empty(),
            a => concept.truth() == Some(a),
        };
    Ok(Commutation {
        formula: sentence.to_string(),
        direct,
        concept,
        pass,
    })
}

/// Compares the many-valued extension of an open formula with `h(I(φ))`
/// setwise; returns both sides.
pub fn check_commutation_open(
    world: &World,
    f: &Formula,
) -> Result<(bool, MExtension, MExtension)> {
    let vp = VirtualPredicate::new(f.clone());
    let direct = world.mv_extension(&vp)?;
    let mut h = Extensionalization::new(world);
    let concept = (*h.extensionalize(interpret_virtual(&vp))?).clone();
    Ok((direct == concept, direct, concept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilattice::TruthValue::*;
    use crate::kb::HerbrandKB;
    use crate::syntax::{canonical_vars, parse_formula};

    const KB: &str = "\
sort person = {alice, bob}
sort city = {paris, rome}
const unicorn : unmeaning
pred likes(person, person)
pred lives(person, city)
pred blu(person)
pred sold(person, person)
pred bought(person, person)
pred says(person, sentence)
fact likes(alice, bob) = t
fact likes(alice, alice) = f
fact likes(bob, alice) = top
fact lives(alice, paris) = t
fact blu(unicorn) = t
fact sold(alice, bob) = t
fact bought(alice, bob) = t
fact says(bob, <likes(alice, bob)>) = t
";

    fn world() -> World {
        // `blu(unicorn)` is rejected as a fact, so drop that line
        let text: String = KB
            .lines()
            .filter(|l| !l.contains("blu(unicorn)"))
            .map(|l| format!("{l}\n"))
            .collect();
        World::new(HerbrandKB::parse(&text).unwrap())
    }

    fn parse(w: &World, s: &str) -> Formula {
        parse_formula(s, w.kb().signature()).unwrap()
    }

    #[test]
    fn interpretation_is_homomorphic() {
        let w = world();
        let f = parse(&w, "likes(alice, x)");
        let nf = parse(&w, "~likes(alice, x)");
        assert_eq!(
            *node(intensional_interpret(&nf)),
            ConceptNode::Neg(intensional_interpret(&f))
        );
        assert_eq!(
            intensional_interpret(&parse(&w, "blu(unicorn)")),
            intern(ConceptNode::Truth(Unknown))
        );
        let a = intensional_interpret(&parse(&w, "exists x. likes(x, bob)"));
        let b = intensional_interpret(&parse(&w, "exists x. likes(x, bob)"));
        assert_eq!(a, b);
    }

    #[test]
    fn degree_of_mixed_meet() {
        // D6 ⊓_S D5 with S = {(2,3),(4,1)} lands in D8
        let mut text = String::from("sort d = {a}\npred p(d, d, d, d, d)\npred q(d, d, d, d)\n");
        text.push_str("query z : p(xi, xj, xk, xl, xm) & q(xl, yi, xj, yj)\n");
        let kb = HerbrandKB::parse(&text).unwrap();
        let f = kb.queries()[0].1.clone();
        let Formula::Bin { left, right, .. } = &f else {
            panic!()
        };
        assert_eq!(degree(intensional_interpret(left)), 6);
        assert_eq!(degree(intensional_interpret(right)), 5);
        assert_eq!(degree(intensional_interpret(&f)), 8);
        assert_eq!(canonical_vars(&f).vars.len(), 7);
    }

    #[test]
    fn base_and_builtin_extensions() {
        let w = world();
        let mut h = Extensionalization::new(&w);
        let t = intern(ConceptNode::Truth(True));
        let bot = intern(ConceptNode::Truth(Unknown));
        assert_eq!(*h.extensionalize(t).unwrap(), MExtension::scalar(True));
        assert!(h.extensionalize(bot).unwrap().is_empty());

        let likes = intensional_interpret(&parse(&w, "likes(x, y)"));
        let r = h.extensionalize(likes).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.get(&["bob".into(), "alice".into()]), Both);

        let id = intern(ConceptNode::Builtin(Builtin::Id));
        let eq = h.extensionalize(id).unwrap();
        assert_eq!(eq.get(&["rome".into(), "rome".into()]), True);
        assert_eq!(eq.get(&["rome".into(), "alice".into()]), False);
    }

    #[test]
    fn predication_uses_completion() {
        let w = world();
        let mut h = Extensionalization::new(&w);
        let likes = intensional_interpret(&parse(&w, "likes(x, y)"));
        let v = |s: &str| Value::Elem(s.into());
        assert!(h.predication(&[v("alice"), v("bob")], True, likes).unwrap());
        assert!(h
            .predication(&[v("bob"), v("bob")], Unknown, likes)
            .unwrap());
        assert!(!h
            .predication(&[v("alice"), v("alice")], True, likes)
            .unwrap());
        assert!(h
            .predication(&[v("alice"), v("alice")], False, likes)
            .unwrap());
    }

    #[test]
    fn lconcept_truth() {
        let w = world();
        let mut h = Extensionalization::new(&w);
        let c = intensional_interpret(&parse(&w, "likes(alice, bob)"));
        assert_eq!(h.truth_of_lconcept(c).unwrap(), True);
        let c = intensional_interpret(&parse(&w, "likes(bob, bob)"));
        assert_eq!(h.truth_of_lconcept(c).unwrap(), Unknown);
        let open = intensional_interpret(&parse(&w, "likes(x, bob)"));
        assert!(h.truth_of_lconcept(open).is_err());
        let ut = intern(ConceptNode::Builtin(Builtin::Truth));
        let c = intensional_interpret(&parse(&w, "likes(bob, alice)"));
        assert!(h.predication(&[Value::Concept(c)], Both, ut).unwrap());
    }

    #[test]
    fn identity_versus_strong_equivalence() {
        let w = world();
        let sold = intensional_interpret(&parse(&w, "sold(x, y)"));
        let bought = intensional_interpret(&parse(&w, "bought(x, y)"));
        assert_ne!(sold, bought);
        assert!(strong_equiv(sold, bought, std::slice::from_ref(&w)).unwrap());
        let likes = intensional_interpret(&parse(&w, "likes(x, y)"));
        assert!(isa(likes, likes, std::slice::from_ref(&w)).unwrap());
        let bot = intern(ConceptNode::Truth(Unknown));
        assert!(isa(bot, likes, std::slice::from_ref(&w)).unwrap());
        let f = parse(&w, "<sold(alice, bob)> = <bought(alice, bob)>");
        assert_eq!(w.eval(&f).unwrap(), False);
        let g = parse(&w, "<sold(alice, bob)> =in= <bought(alice, bob)>");
        assert_eq!(w.eval(&g).unwrap(), True);
    }

    #[test]
    fn commutation_examples() {
        let w = world();
        for s in [
            "likes(alice, bob)",
            "likes(bob, bob)",
            "exists x. likes(alice, x)",
            "forall x. likes(alice, x)",
            "~likes(bob, alice)",
            "says(bob, <likes(alice, bob)>)",
            "T(<likes(bob, alice)>) & #top",
            "forall x. exists y. likes(x, y) -> lives(x, paris)",
            "blu(unicorn) | likes(alice, unicorn)",
            "likes(alice, bob) <-> likes(bob, alice)",
            "<likes(alice, bob)> =in= <#t>",
        ] {
            let r = check_commutation(&w, &parse(&w, s)).unwrap();
            assert!(r.pass, "{r}");
        }
        for s in [
            "likes(x, y)",
            "likes(x, y) & lives(y, z)",
            "likes(x, y) <-> likes(y, x)",
            "x = y | lives(x, z)",
            "exists y. likes(x, y) -> ~blu(x)",
        ] {
            let (ok, a, b) = check_commutation_open(&w, &parse(&w, s)).unwrap();
            assert!(ok, "{s}: {a:?} vs {b:?}");
        }
    }

    #[test]
    fn open_abstractions() {
        let w = world();
        let body = parse(&w, "likes(x, bob)");
        let a = AbstractTerm::with_hidden(body.clone(), &[]).unwrap();
        assert_eq!(a.visible.len(), 1);
        let t = Formula::TruthPred(Box::new(a.clone()));
        let (ok, direct, concept) = check_commutation_open(&w, &t).unwrap();
        assert!(ok, "{direct:?} vs {concept:?}");
        assert_eq!(direct.get(&["bob".into()]), Unknown);
        assert_eq!(direct.get(&["alice".into()]), True);

        let said = Formula::atom(
            "says",
            vec![
                Term::Const(crate::syntax::Constant::new("bob", "person")),
                Term::Abstract(Box::new(a)),
            ],
        );
        let (ok, direct, _) = check_commutation_open(&w, &said).unwrap();
        assert!(ok);
        assert_eq!(direct.get(&["alice".into()]), True);
        assert_eq!(direct.len(), 1);
    }

    #[test]
    fn memo_is_consistent() {
        let w = world();
        let mut h = Extensionalization::new(&w);
        let c = intensional_interpret(&parse(&w, "exists x. likes(x, y) | lives(y, z)"));
        let first = (*h.extensionalize(c).unwrap()).clone();
        assert_eq!(h.extensionalize_fresh(c).unwrap(), first);
        assert_eq!(*h.extensionalize(c).unwrap(), first);
    }

    #[test]
    fn report_line() {
        let w = world();
        let r = check_commutation(&w, &parse(&w, "likes(bob, bob)")).unwrap();
        assert_eq!(r.to_string(), "PASS  likes(bob, bob)  v*=bot  hI=∅");
    }
}
