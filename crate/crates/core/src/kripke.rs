//! Set-valued Kripke satisfaction over generalized worlds `(w, g, x)`.
//!
//! `sat_set` returns every truth value `x` with `(w, g, x) ⊨ φ`. A formula
//! has a Kripke truth value at `(w, g)` when that set is a singleton.

use crate::bilattice::{TruthSet, TruthValue};
use crate::error::{Error, Result};
use crate::kb::{Denotation, GroundAtom};
use crate::mext::{ext_equiv, Column, MExtension};
use crate::par;
use crate::syntax::{ground_abstract, Assignment, Formula, Quantifier, Term, VirtualPredicate};
use crate::valuation::World;

#[derive(Clone, Debug)]
pub struct KripkeModel {
    worlds: Vec<World>,
}

/// A generalized world `(w, g, x)`.
#[derive(Clone, Debug)]
pub struct GeneralizedWorld {
    pub world: usize,
    pub assignment: Assignment,
    pub value: TruthValue,
}

impl KripkeModel {
    pub fn new(worlds: Vec<World>) -> Result<Self> {
        if let Some(first) = worlds.first() {
            for w in &worlds[1..] {
                if w.kb().signature() != first.kb().signature() {
                    return Err(Error::SignatureMismatch(
                        "worlds of a Kripke model must share a signature".into(),
                    ));
                }
            }
        }
        Ok(KripkeModel { worlds })
    }

    pub fn single(world: World) -> Self {
        KripkeModel {
            worlds: vec![world],
        }
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    fn world(&self, w: usize) -> Result<&World> {
        self.worlds
            .get(w)
            .ok_or_else(|| Error::Kb(format!("no world {w} in a model of {}", self.worlds.len())))
    }

    /// `(w, g, x) ⊨ φ`.
    pub fn satisfies(&self, gw: &GeneralizedWorld, f: &Formula) -> Result<bool> {
        Ok(self
            .sat_set(gw.world, f, &gw.assignment)?
            .contains(gw.value))
    }

    /// `{x | (w, g, x) ⊨ φ}`.
    pub fn sat_set(&self, w: usize, f: &Formula, g: &Assignment) -> Result<TruthSet> {
        let world = self.world(w)?;
        let kb = world.kb();
        Ok(match f {
            Formula::Truth(a) => TruthSet::singleton(*a),
            Formula::Atom { pred, args } => {
                let mut vals = Vec::with_capacity(args.len());
                for t in args {
                    match kb.extend_assignment(g, t)?.value() {
                        Some(v) => vals.push(v),
                        None => return Ok(TruthSet::singleton(TruthValue::Unknown)),
                    }
                }
                TruthSet::singleton(kb.get(&GroundAtom {
                    pred: pred.clone(),
                    args: vals,
                }))
            }
            Formula::Identity(a, b) => TruthSet::singleton(
                match (kb.extend_assignment(g, a)?, kb.extend_assignment(g, b)?) {
                    (Denotation::Unmeaning, _) | (_, Denotation::Unmeaning) => TruthValue::Unknown,
                    (x, y) => TruthValue::from_bool(x == y),
                },
            ),
            Formula::IntEq(a, b) => TruthSet::singleton(match (a, b) {
                (Term::Abstract(x), Term::Abstract(y)) => {
                    let x = ground_abstract(x, g)?;
                    let y = ground_abstract(y, g)?;
                    let rx = self.kripke_extension(w, &VirtualPredicate::new(x.body))?;
                    let ry = self.kripke_extension(w, &VirtualPredicate::new(y.body))?;
                    TruthValue::from_bool(ext_equiv(&rx, &ry))
                }
                _ => match (kb.extend_assignment(g, a)?, kb.extend_assignment(g, b)?) {
                    (Denotation::Unmeaning, _) | (_, Denotation::Unmeaning) => TruthValue::Unknown,
                    (x, y) => TruthValue::from_bool(x == y),
                },
            }),
            Formula::TruthPred(a) => {
                let a = ground_abstract(a, g)?;
                if !a.hidden.is_empty() {
                    return Err(Error::NotClosed(format!("T(<{}>)", a.body)));
                }
                self.sat_set(w, &a.body, &Assignment::new())?
            }
            Formula::Not(h) => self.sat_set(w, h, g)?.map(TruthValue::negate),
            Formula::Bin {
                op, left, right, ..
            } => {
                let l = self.sat_set(w, left, g)?;
                let r = self.sat_set(w, right, g)?;
                l.combine(r, |a, b| op.apply(a, b))
            }
            Formula::Quant { kind, body, .. } => {
                let Some(x) = f.bound_variable() else {
                    return self.sat_set(w, body, g);
                };
                let (unit, op): (TruthValue, fn(TruthValue, TruthValue) -> TruthValue) = match kind
                {
                    Quantifier::Exists => (TruthValue::False, TruthValue::or),
                    Quantifier::Forall => (TruthValue::True, TruthValue::and),
                };
                let mut acc = TruthSet::singleton(unit);
                for d in kb.signature().domain(&x.sort)? {
                    let gd = g.clone().with(x.clone(), d.clone());
                    acc = acc.combine(self.sat_set(w, body, &gd)?, op);
                }
                acc
            }
        })
    }

    /// The unique `x` with `(w, g, x) ⊨ φ`.
    pub fn kripke_truth(&self, w: usize, f: &Formula, g: &Assignment) -> Result<TruthValue> {
        let s = self.sat_set(w, f, g)?;
        s.single().ok_or_else(|| Error::KripkeInconsistent {
            formula: f.to_string(),
            count: s.len(),
        })
    }

    /// Tuples over the canonical variables with their Kripke value, ⊥
    /// omitted.
    pub fn kripke_extension(&self, w: usize, vp: &VirtualPredicate) -> Result<MExtension> {
        let kb = self.world(w)?.kb();
        let gs = kb.enumerate_assignments(&vp.vars)?;
        let values = par::try_map(&gs, |g| self.kripke_truth(w, &vp.formula, g))?;
        let columns = vp
            .vars
            .iter()
            .map(|v| {
                Ok(Column {
                    sort: v.sort.clone(),
                    domain: kb.signature().domain(&v.sort)?.iter().cloned().collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let rows = gs
            .iter()
            .map(|g| g.tuple(&vp.vars).expect("complete assignment"))
            .zip(values);
        MExtension::from_rows(columns, rows)
    }
}
