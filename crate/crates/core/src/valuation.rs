//! Direct many-valued valuation `v*` over a Herbrand knowledge base.

use std::sync::Arc;

use crate::bilattice::{big_join, big_meet, TruthValue};
use crate::concepts::intensional_interpret;
use crate::error::{Error, Result};
use crate::kb::{Denotation, GroundAtom, HerbrandKB};
use crate::mext::{ext_equiv, Column, MExtension};
use crate::par;
use crate::syntax::{
    free_vars, ground_abstract, Assignment, Formula, Quantifier, Term, VirtualPredicate,
};

/// A possible world: one Herbrand interpretation.
#[derive(Clone, Debug)]
pub struct World {
    kb: Arc<HerbrandKB>,
}

impl World {
    pub fn new(kb: HerbrandKB) -> Self {
        World { kb: Arc::new(kb) }
    }

    pub fn from_arc(kb: Arc<HerbrandKB>) -> Self {
        World { kb }
    }

    pub fn kb(&self) -> &HerbrandKB {
        &self.kb
    }

    /// `v*(φ)` for a sentence.
    pub fn eval(&self, f: &Formula) -> Result<TruthValue> {
        if !f.is_sentence() {
            let names: Vec<_> = free_vars(f).iter().map(|v| v.name.to_string()).collect();
            return Err(Error::NotClosed(names.join(", ")));
        }
        self.ev(f, &mut Assignment::new())
    }

    /// `v*(φ/g)`; `g` must cover the free variables of `φ`.
    pub fn eval_with(&self, f: &Formula, g: &Assignment) -> Result<TruthValue> {
        self.kb.check_assignment(g)?;
        for v in free_vars(f) {
            if g.get(&v).is_none() {
                return Err(Error::Unbound(v.name.to_string()));
            }
        }
        self.ev(f, &mut g.clone())
    }

    /// `v*(T(<φ>))`, which equals `v*(φ)`.
    pub fn eval_truth_pred(&self, sentence: &Formula) -> Result<TruthValue> {
        let a = crate::syntax::AbstractTerm::closed(sentence.clone())?;
        self.eval(&Formula::TruthPred(Box::new(a)))
    }

    /// Whether `T(<φ>) <-> #a` is true; exactly one `a` qualifies.
    pub fn truth_scheme_holds(&self, a: TruthValue, sentence: &Formula) -> Result<bool> {
        let t = Formula::TruthPred(Box::new(crate::syntax::AbstractTerm::closed(
            sentence.clone(),
        )?));
        let f = Formula::bin(crate::syntax::BinOp::Equiv, t, Formula::Truth(a));
        Ok(self.eval(&f)? == TruthValue::True)
    }

    fn ev(&self, f: &Formula, g: &mut Assignment) -> Result<TruthValue> {
        use TruthValue::*;
        Ok(match f {
            Formula::Truth(a) => *a,
            Formula::Atom { pred, args } => {
                let mut vals = Vec::with_capacity(args.len());
                for t in args {
                    match self.kb.extend_assignment(g, t)?.value() {
                        Some(v) => vals.push(v),
                        None => return Ok(Unknown),
                    }
                }
                self.kb.get(&GroundAtom {
                    pred: pred.clone(),
                    args: vals,
                })
            }
            Formula::Identity(a, b) => {
                match (
                    self.kb.extend_assignment(g, a)?,
                    self.kb.extend_assignment(g, b)?,
                ) {
                    (Denotation::Unmeaning, _) | (_, Denotation::Unmeaning) => Unknown,
                    (x, y) => TruthValue::from_bool(x == y),
                }
            }
            Formula::IntEq(a, b) => match (a, b) {
                (Term::Abstract(x), Term::Abstract(y)) => {
                    let x = ground_abstract(x, g)?;
                    let y = ground_abstract(y, g)?;
                    let rx = self.mv_extension(&VirtualPredicate::new(x.body))?;
                    let ry = self.mv_extension(&VirtualPredicate::new(y.body))?;
                    TruthValue::from_bool(ext_equiv(&rx, &ry))
                }
                _ => match (
                    self.kb.extend_assignment(g, a)?,
                    self.kb.extend_assignment(g, b)?,
                ) {
                    (Denotation::Unmeaning, _) | (_, Denotation::Unmeaning) => Unknown,
                    (x, y) => TruthValue::from_bool(x == y),
                },
            },
            Formula::TruthPred(a) => {
                let a = ground_abstract(a, g)?;
                if !a.hidden.is_empty() {
                    return Err(Error::NotClosed(format!("T(<{}>)", a.body)));
                }
                self.ev(&a.body, &mut Assignment::new())?
            }
            Formula::Not(h) => self.ev(h, g)?.negate(),
            Formula::Bin {
                op, left, right, ..
            } => op.apply(self.ev(left, g)?, self.ev(right, g)?),
            Formula::Quant { kind, body, .. } => {
                let Some(x) = f.bound_variable() else {
                    return self.ev(body, g);
                };
                let dom = self.kb.signature().domain(&x.sort)?.to_vec();
                let saved = g.unbind(&x);
                let mut vals = Vec::with_capacity(dom.len());
                let mut err = None;
                for d in dom {
                    g.bind(x.clone(), d);
                    match self.ev(body, g) {
                        Ok(v) => vals.push(v),
                        Err(e) => {
                            err = Some(e);
                            break;
                        }
                    }
                }
                g.unbind(&x);
                if let Some(s) = saved {
                    g.bind(x, s);
                }
                if let Some(e) = err {
                    return Err(e);
                }
                match kind {
                    Quantifier::Exists => big_join(vals),
                    Quantifier::Forall => big_meet(vals),
                }
            }
        })
    }

    fn columns(&self, vp: &VirtualPredicate) -> Result<Vec<Column>> {
        vp.vars
            .iter()
            .map(|v| {
                Ok(Column {
                    sort: v.sort.clone(),
                    domain: self
                        .kb
                        .signature()
                        .domain(&v.sort)?
                        .iter()
                        .cloned()
                        .collect(),
                })
            })
            .collect()
    }

    /// `‖φ(x̄)‖`: every tuple over the canonical variables with its
    /// non-⊥ value.
    pub fn mv_extension(&self, vp: &VirtualPredicate) -> Result<MExtension> {
        let gs = self.kb.enumerate_assignments(&vp.vars)?;
        let values = par::try_map(&gs, |g| self.ev(&vp.formula, &mut g.clone()))?;
        let rows = gs
            .iter()
            .map(|g| g.tuple(&vp.vars).expect("complete assignment"))
            .zip(values);
        MExtension::from_rows(self.columns(vp)?, rows)
    }

    /// The concept a reified formula denotes, for callers that only hold a
    /// world.
    pub fn concept_of(&self, f: &Formula) -> crate::concepts::ConceptId {
        intensional_interpret(f)
    }
}

/// Montague intension: the many-valued extension in each world, in order.
pub fn montague_intension(vp: &VirtualPredicate, worlds: &[World]) -> Result<Vec<MExtension>> {
    worlds.iter().map(|w| w.mv_extension(vp)).collect()
}

/// Searches for a variable position where `¬∃¬φ` and `∀φ` disagree in
/// `world`. Returns the 1-based position with both extensions.
pub fn quantifier_duality_witness(
    world: &World,
    vp: &VirtualPredicate,
) -> Result<Option<(usize, MExtension, MExtension)>> {
    for (k, x) in vp.vars.iter().enumerate() {
        let dual = Formula::not(Formula::exists(x, Formula::not(vp.formula.clone()))?);
        let all = Formula::forall(x, vp.formula.clone())?;
        let rd = world.mv_extension(&VirtualPredicate::new(dual))?;
        let ra = world.mv_extension(&VirtualPredicate::new(all))?;
        if rd != ra {
            return Ok(Some((k + 1, rd, ra)));
        }
    }
    Ok(None)
}
