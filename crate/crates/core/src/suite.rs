//! Cross-checks of the three semantics, shared by the CLI and the tests.

use std::fmt;

use crate::bilattice::TruthValue;
use crate::concepts::{intensional_interpret, scalar_text, Extensionalization};
use crate::error::Result;
use crate::gen::{self, GenConfig};
use crate::kb::HerbrandKB;
use crate::kripke::KripkeModel;
use crate::mext::MExtension;
use crate::par;
use crate::syntax::{Assignment, Formula, VirtualPredicate};
use crate::valuation::World;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Semantics {
    Direct,
    Concept,
    Kripke,
    #[default]
    All,
    /// `v*` against `K` only.
    DirectKripke,
}

impl Semantics {
    fn direct(self) -> bool {
        matches!(
            self,
            Semantics::Direct | Semantics::All | Semantics::DirectKripke
        )
    }
    fn concept(self) -> bool {
        matches!(self, Semantics::Concept | Semantics::All)
    }
    fn kripke(self) -> bool {
        matches!(
            self,
            Semantics::Kripke | Semantics::All | Semantics::DirectKripke
        )
    }
}

/// `h(I(φ))` read as a truth value: ∅ is ⊥.
fn concept_truth(r: &MExtension) -> Option<TruthValue> {
    r.truth()
}

/// The values one sentence receives under the selected semantics.
#[derive(Clone, Debug)]
pub struct Verdicts {
    pub formula: String,
    pub direct: Option<TruthValue>,
    pub concept: Option<MExtension>,
    pub kripke: Option<TruthValue>,
}

impl Verdicts {
    pub fn values(&self) -> Vec<TruthValue> {
        let mut out = vec![];
        out.extend(self.direct);
        if let Some(r) = &self.concept {
            out.push(concept_truth(r).unwrap_or(TruthValue::Unknown));
        }
        out.extend(self.kripke);
        out
    }

    pub fn agree(&self) -> bool {
        if matches!(&self.concept, Some(r) if r.width() != 0) {
            return false;
        }
        let vs = self.values();
        vs.windows(2).all(|w| w[0] == w[1])
    }
}

impl fmt::Display for Verdicts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}  {}",
            if self.agree() { "PASS" } else { "FAIL" },
            self.formula
        )?;
        if let Some(a) = self.direct {
            write!(f, "  v*={a}")?;
        }
        if let Some(r) = &self.concept {
            write!(f, "  hI={}", scalar_text(r))?;
        }
        if let Some(a) = self.kripke {
            write!(f, "  K={a}")?;
        }
        Ok(())
    }
}

pub fn evaluate(world: &World, f: &Formula, sem: Semantics) -> Result<Verdicts> {
    if !f.is_sentence() {
        let names: Vec<_> = crate::syntax::free_vars(f)
            .iter()
            .map(|v| v.name.to_string())
            .collect();
        return Err(crate::error::Error::NotClosed(names.join(", ")));
    }
    let direct = sem.direct().then(|| world.eval(f)).transpose()?;
    let concept = if sem.concept() {
        let mut h = Extensionalization::new(world);
        Some((*h.extensionalize(intensional_interpret(f))?).clone())
    } else {
        None
    };
    let kripke = if sem.kripke() {
        let m = KripkeModel::single(world.clone());
        Some(m.kripke_truth(0, f, &Assignment::new())?)
    } else {
        None
    };
    Ok(Verdicts {
        formula: f.to_string(),
        direct,
        concept,
        kripke,
    })
}

/// Extensions of an open formula under the selected semantics.
#[derive(Clone, Debug)]
pub struct OpenVerdicts {
    pub formula: String,
    pub extensions: Vec<(&'static str, MExtension)>,
}

impl OpenVerdicts {
    pub fn agree(&self) -> bool {
        self.extensions.windows(2).all(|w| w[0].1 == w[1].1)
    }
}

impl fmt::Display for OpenVerdicts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}  {}",
            if self.agree() { "PASS" } else { "FAIL" },
            self.formula
        )?;
        for (name, r) in &self.extensions {
            write!(f, "  {name}={}rows", r.len())?;
        }
        Ok(())
    }
}

pub fn evaluate_open(world: &World, f: &Formula, sem: Semantics) -> Result<OpenVerdicts> {
    let vp = VirtualPredicate::new(f.clone());
    let mut extensions = vec![];
    if sem.direct() {
        extensions.push(("v*", world.mv_extension(&vp)?));
    }
    if sem.concept() {
        let mut h = Extensionalization::new(world);
        extensions.push(("hI", (*h.extensionalize(intensional_interpret(f))?).clone()));
    }
    if sem.kripke() {
        let m = KripkeModel::single(world.clone());
        extensions.push(("K", m.kripke_extension(0, &vp)?));
    }
    Ok(OpenVerdicts {
        formula: f.to_string(),
        extensions,
    })
}

/// Outcome of a randomized suite, lines in generation order.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub lines: Vec<String>,
    pub failures: usize,
    pub errors: usize,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.errors == 0
    }
}

enum Outcome {
    Pass(String),
    Fail(String),
    Error(String),
}

fn check_sentence(world: &World, f: &Formula, sem: Semantics) -> Outcome {
    match evaluate(world, f, sem) {
        Ok(v) if v.agree() => Outcome::Pass(v.to_string()),
        Ok(v) => Outcome::Fail(v.to_string()),
        Err(e) => Outcome::Error(format!("ERROR  {f}  {e}")),
    }
}

fn check_open(world: &World, f: &Formula, sem: Semantics) -> Outcome {
    match evaluate_open(world, f, sem) {
        Ok(v) if v.agree() => Outcome::Pass(v.to_string()),
        Ok(v) => Outcome::Fail(v.to_string()),
        Err(e) => Outcome::Error(format!("ERROR  {f}  {e}")),
    }
}

/// `count` checks, each a sentence and an open formula. With a KB the
/// formulas range over its signature; without one each check draws its
/// own KB. Deterministic in `seed`.
pub fn run_suite(
    kb: Option<&HerbrandKB>,
    count: usize,
    seed: u64,
    sem: Semantics,
    cfg: &GenConfig,
) -> SuiteReport {
    let world = kb.map(|kb| World::new(kb.clone()));
    let outcomes = par::map_range(count, |k| {
        let s = seed.wrapping_add(k as u64);
        match &world {
            Some(w) => {
                let mut r = gen::rng(s);
                let sentence = gen::random_sentence(&mut r, w.kb().signature(), cfg);
                let open = gen::random_formula(&mut r, w.kb().signature(), cfg);
                [check_sentence(w, &sentence, sem), check_open(w, &open, sem)]
            }
            None => {
                let i = gen::instance(s, cfg);
                let o = gen::open_instance(s, cfg);
                [
                    check_sentence(&World::new(i.kb), &i.formula, sem),
                    check_open(&World::new(o.kb), &o.formula, sem),
                ]
            }
        }
    });
    collect(outcomes.into_iter().flatten())
}

fn dual_lines(world: &World, f: &Formula) -> Result<Vec<Outcome>> {
    let vp = VirtualPredicate::new(f.clone());
    let mut out = vec![];
    for x in &vp.vars {
        let dual = Formula::not(Formula::exists(x, Formula::not(f.clone()))?);
        let all = Formula::forall(x, f.clone())?;
        let mut h = Extensionalization::new(world);
        let pairs = [
            (
                "v*",
                world.mv_extension(&VirtualPredicate::new(dual.clone()))?,
                world.mv_extension(&VirtualPredicate::new(all.clone()))?,
            ),
            (
                "hI",
                (*h.extensionalize(intensional_interpret(&dual))?).clone(),
                (*h.extensionalize(intensional_interpret(&all))?).clone(),
            ),
        ];
        let differ: Vec<_> = pairs
            .iter()
            .filter(|(_, a, b)| a != b)
            .map(|(n, _, _)| *n)
            .collect();
        let line = format!(
            "{}  {f}  {}",
            if differ.is_empty() { "SAME" } else { "DIFF" },
            x.name
        );
        out.push(if differ.is_empty() {
            Outcome::Pass(line)
        } else {
            Outcome::Fail(format!("{line}  under {}", differ.join(",")))
        });
    }
    Ok(out)
}

/// Differential search for `¬∃x¬φ` against `∀xφ` on `count` random open
/// formulas, under `v*` and `h∘I`. One line per free variable; a `DIFF`
/// line counts as a failure.
pub fn dual_search(
    kb: Option<&HerbrandKB>,
    count: usize,
    seed: u64,
    cfg: &GenConfig,
) -> SuiteReport {
    let world = kb.map(|kb| World::new(kb.clone()));
    let outcomes = par::map_range(count, |k| {
        let s = seed.wrapping_add(k as u64);
        let (w, f) = match &world {
            Some(w) => (
                w.clone(),
                gen::random_formula(&mut gen::rng(s), w.kb().signature(), cfg),
            ),
            None => {
                let i = gen::open_instance(s, cfg);
                (World::new(i.kb), i.formula)
            }
        };
        dual_lines(&w, &f).unwrap_or_else(|e| vec![Outcome::Error(format!("ERROR  {f}  {e}"))])
    });
    collect(outcomes.into_iter().flatten())
}

fn collect(outcomes: impl Iterator<Item = Outcome>) -> SuiteReport {
    let mut report = SuiteReport::default();
    for o in outcomes {
        match o {
            Outcome::Pass(l) => report.lines.push(l),
            Outcome::Fail(l) => {
                report.failures += 1;
                report.lines.push(l);
            }
            Outcome::Error(l) => {
                report.errors += 1;
                report.lines.push(l);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let r = run_suite(None, 60, 11, Semantics::All, &GenConfig::default());
        let bad: Vec<_> = r.lines.iter().filter(|l| !l.starts_with("PASS")).collect();
        assert!(r.passed(), "{bad:#?}");
        assert_eq!(r.lines.len(), 120);
    }

    #[test]
    fn suite_is_deterministic() {
        let cfg = GenConfig::default();
        let a = run_suite(None, 20, 5, Semantics::All, &cfg);
        par::set_mode(par::Mode::Sequential);
        let b = run_suite(None, 20, 5, Semantics::All, &cfg);
        par::set_mode(par::Mode::Parallel);
        assert_eq!(a.lines, b.lines);
    }

    #[test]
    fn disagreement_is_reported() {
        let v = Verdicts {
            formula: "p(a)".into(),
            direct: Some(TruthValue::True),
            concept: Some(MExtension::scalar(TruthValue::True)),
            kripke: Some(TruthValue::Both),
        };
        assert!(!v.agree());
        assert!(v.to_string().starts_with("FAIL"));
        let open = Verdicts {
            kripke: Some(TruthValue::True),
            concept: Some(MExtension::empty(vec![crate::mext::Column::new(
                "d",
                &["a"],
            )])),
            ..v
        };
        assert!(!open.agree());
    }

    #[test]
    fn duality_search_runs() {
        let r = dual_search(None, 40, 3, &GenConfig::default());
        assert_eq!(r.errors, 0, "{:#?}", r.lines);
        assert!(r
            .lines
            .iter()
            .all(|l| l.starts_with("SAME") || l.starts_with("DIFF")));
    }

    #[test]
    fn direct_against_kripke() {
        let r = run_suite(None, 30, 2, Semantics::DirectKripke, &GenConfig::default());
        assert!(r.passed());
        assert!(r.lines.iter().all(|l| !l.contains("hI=")));
    }
}
