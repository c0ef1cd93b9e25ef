//! Seeded random knowledge bases, formulas and relations for the
//! differential suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bilattice::TruthValue;
use crate::kb::{GroundAtom, HerbrandKB, Signature, Value};
use crate::mext::{Column, MExtension};
use crate::syntax::{
    free_vars, substitute, AbstractTerm, BinOp, Constant, Formula, Quantifier, Term, Variable,
    SENTENCE_SORT,
};
use crate::Sym;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_sorts: usize,
    pub min_elems: usize,
    pub max_elems: usize,
    pub max_preds: usize,
    pub max_arity: usize,
    pub max_depth: usize,
    pub max_vars: usize,
    /// total t/f facts, classical connectives only
    pub classical: bool,
    /// identity, `=in=`, `T`, truth constants and a sentence-taking predicate
    pub builtins: bool,
    pub unmeaning: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_sorts: 2,
            min_elems: 1,
            max_elems: 3,
            max_preds: 3,
            max_arity: 3,
            max_depth: 4,
            max_vars: 3,
            classical: false,
            builtins: true,
            unmeaning: true,
        }
    }
}

impl GenConfig {
    /// Two-element sorts, t/f facts, no built-ins.
    pub fn classical() -> Self {
        GenConfig {
            min_elems: 2,
            max_elems: 2,
            classical: true,
            builtins: false,
            unmeaning: false,
            ..GenConfig::default()
        }
    }
}

const SORT_LETTERS: [char; 4] = ['a', 'b', 'c', 'd'];

pub fn random_signature(rng: &mut impl Rng, cfg: &GenConfig) -> Signature {
    let mut sig = Signature::new();
    let nsorts = rng.gen_range(1..=cfg.max_sorts.clamp(1, SORT_LETTERS.len()));
    let mut sorts = vec![];
    for (k, letter) in SORT_LETTERS.iter().enumerate().take(nsorts) {
        let n = rng.gen_range(cfg.min_elems..=cfg.max_elems);
        let elems: Vec<String> = (0..n).map(|i| format!("{letter}{i}")).collect();
        let refs: Vec<&str> = elems.iter().map(String::as_str).collect();
        let name = format!("s{k}");
        sig.add_sort(&name, &refs).expect("fresh sort");
        sorts.push(name);
    }
    let npreds = rng.gen_range(1..=cfg.max_preds.max(1));
    for k in 0..npreds {
        let args: Vec<String> = if cfg.builtins && k == npreds - 1 && k > 0 && rng.gen_bool(0.5) {
            vec![
                sorts.choose(rng).unwrap().clone(),
                SENTENCE_SORT.to_string(),
            ]
        } else {
            let arity = rng.gen_range(1..=cfg.max_arity.max(1));
            (0..arity)
                .map(|_| sorts.choose(rng).unwrap().clone())
                .collect()
        };
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        sig.add_predicate(&format!("p{k}"), &refs)
            .expect("fresh predicate");
    }
    if cfg.unmeaning && rng.gen_bool(0.5) {
        sig.add_constant("r", None).expect("fresh constant");
    }
    sig
}

pub fn random_value(rng: &mut impl Rng, classical: bool) -> TruthValue {
    if classical {
        TruthValue::from_bool(rng.gen())
    } else {
        *TruthValue::ALL.choose(rng).unwrap()
    }
}

/// Facts over `sig`: total and classical, or sparse four-valued.
pub fn random_facts(rng: &mut impl Rng, sig: Signature, cfg: &GenConfig) -> HerbrandKB {
    let mut kb = HerbrandKB::new(sig);
    for atom in kb.herbrand_base() {
        let v = random_value(rng, cfg.classical);
        if v != TruthValue::Unknown {
            kb.assert_fact(atom, v).expect("well-sorted");
        }
    }
    let sentence_preds: Vec<_> = kb
        .signature()
        .predicates()
        .iter()
        .filter(|p| p.args.iter().any(|s| &**s == SENTENCE_SORT))
        .cloned()
        .collect();
    for p in sentence_preds {
        for _ in 0..rng.gen_range(0..=3) {
            let mut args = vec![];
            for s in &p.args {
                if &**s == SENTENCE_SORT {
                    let body = FormulaGen::new(rng, kb.signature(), cfg).closed_sentence();
                    args.push(Value::Concept(kb.reify(&body).expect("closed")));
                } else {
                    let dom = kb.signature().domain(s).expect("declared");
                    args.push(Value::Elem(dom.choose(rng).unwrap().clone()));
                }
            }
            let v = random_value(rng, false);
            let atom = GroundAtom {
                pred: p.name.clone(),
                args,
            };
            if v == TruthValue::Unknown {
                kb.retract(&atom);
            } else {
                kb.assert_fact(atom, v).expect("well-sorted");
            }
        }
    }
    kb
}

pub fn random_kb(rng: &mut impl Rng, cfg: &GenConfig) -> HerbrandKB {
    let sig = random_signature(rng, cfg);
    random_facts(rng, sig, cfg)
}

/// A formula with at most `cfg.max_vars` free variables.
pub fn random_formula(rng: &mut impl Rng, sig: &Signature, cfg: &GenConfig) -> Formula {
    let mut g = FormulaGen::new(rng, sig, cfg);
    let d = g.cfg.max_depth;
    g.formula(d)
}

/// A sentence: free variables are quantified while depth allows, then
/// replaced by random elements.
pub fn random_sentence(rng: &mut impl Rng, sig: &Signature, cfg: &GenConfig) -> Formula {
    let mut g = FormulaGen::new(rng, sig, cfg);
    let d = g.cfg.max_depth;
    let f = g.formula(d);
    g.close(f, true)
}

struct FormulaGen<'a, R> {
    rng: &'a mut R,
    sig: &'a Signature,
    cfg: GenConfig,
    pool: Vec<Variable>,
}

impl<'a, R: Rng> FormulaGen<'a, R> {
    fn new(rng: &'a mut R, sig: &'a Signature, cfg: &GenConfig) -> Self {
        let sorts: Vec<Sym> = sig
            .sorts()
            .iter()
            .filter(|s| !s.elements.is_empty())
            .map(|s| s.name.clone())
            .collect();
        let n = if sorts.is_empty() {
            0
        } else {
            rng.gen_range(1..=cfg.max_vars.max(1))
        };
        let pool = ["x", "y", "z", "u", "v", "w"]
            .iter()
            .take(n)
            .map(|name| Variable::new(name, sorts.choose(rng).unwrap()))
            .collect();
        FormulaGen {
            rng,
            sig,
            cfg: cfg.clone(),
            pool,
        }
    }

    fn formula(&mut self, depth: usize) -> Formula {
        if depth == 0 {
            return self.atom();
        }
        let roll = self.rng.gen_range(0..100);
        if roll < 40 {
            let op = *[BinOp::And, BinOp::Or, BinOp::Imp, BinOp::Equiv]
                .choose(self.rng)
                .unwrap();
            let l = self.formula(depth - 1);
            let r = self.formula(depth - 1);
            Formula::bin(op, l, r)
        } else if roll < 60 {
            Formula::not(self.formula(depth - 1))
        } else if roll < 80 {
            let body = self.formula(depth - 1);
            let free = free_vars(&body);
            match free.choose(self.rng) {
                Some(v) => {
                    let kind = self.quantifier();
                    Formula::quantify(kind, v, body).expect("free in body")
                }
                None => body,
            }
        } else {
            self.atom()
        }
    }

    fn quantifier(&mut self) -> Quantifier {
        if self.rng.gen() {
            Quantifier::Exists
        } else {
            Quantifier::Forall
        }
    }

    fn element(&mut self, sort: &str) -> Term {
        let dom = self.sig.domain(sort).expect("declared sort");
        Term::Const(Constant::new(
            dom.choose(self.rng).expect("non-empty sort"),
            sort,
        ))
    }

    fn unmeaning(&mut self) -> Option<Term> {
        let us: Vec<Sym> = self
            .sig
            .unmeaning_constants()
            .map(|c| c.name.clone())
            .collect();
        us.choose(self.rng)
            .map(|n| Term::Const(Constant::unmeaning(n)))
    }

    fn term(&mut self, sort: &str) -> Term {
        if sort == SENTENCE_SORT {
            let body = self.closed_sentence();
            return Term::Abstract(Box::new(AbstractTerm::closed(body).expect("closed")));
        }
        if self.rng.gen_bool(0.1) {
            if let Some(t) = self.unmeaning() {
                return t;
            }
        }
        let vars: Vec<Variable> = self
            .pool
            .iter()
            .filter(|v| &*v.sort == sort)
            .cloned()
            .collect();
        if !vars.is_empty() && self.rng.gen_bool(0.6) {
            return Term::Var(vars.choose(self.rng).unwrap().clone());
        }
        self.element(sort)
    }

    fn atom(&mut self) -> Formula {
        if self.cfg.builtins && self.rng.gen_bool(0.25) {
            return self.builtin();
        }
        let Some(p) = self.sig.predicates().choose(self.rng).cloned() else {
            return Formula::Truth(random_value(self.rng, self.cfg.classical));
        };
        let args = p.args.iter().map(|s| self.term(s)).collect();
        Formula::Atom {
            pred: p.name.clone(),
            args,
        }
    }

    fn builtin(&mut self) -> Formula {
        let sorts: Vec<Sym> = self
            .sig
            .sorts()
            .iter()
            .filter(|s| !s.elements.is_empty())
            .map(|s| s.name.clone())
            .collect();
        match self.rng.gen_range(0..5) {
            0 => Formula::Truth(random_value(self.rng, false)),
            1 if !sorts.is_empty() => {
                let s = sorts.choose(self.rng).unwrap().clone();
                let vars: Vec<Variable> =
                    self.pool.iter().filter(|v| v.sort == s).cloned().collect();
                // a variable is only compared with a meaningful constant so
                // that its sort stays inferable from the text
                let lhs = match vars.choose(self.rng) {
                    Some(v) if self.rng.gen_bool(0.6) => Term::Var(v.clone()),
                    _ => match self.unmeaning() {
                        Some(u) if self.rng.gen_bool(0.2) => u,
                        _ => self.element(&s),
                    },
                };
                let rhs = self.element(&s);
                if self.rng.gen() {
                    Formula::Identity(lhs, rhs)
                } else {
                    Formula::Identity(rhs, lhs)
                }
            }
            2 => {
                let body = self.closed_sentence();
                Formula::TruthPred(Box::new(AbstractTerm::closed(body).expect("closed")))
            }
            3 | 4 => {
                let a = self.closed_sentence();
                let b = if self.rng.gen_bool(0.3) {
                    a.clone()
                } else {
                    self.closed_sentence()
                };
                let a = Term::Abstract(Box::new(AbstractTerm::closed(a).expect("closed")));
                let b = Term::Abstract(Box::new(AbstractTerm::closed(b).expect("closed")));
                if self.rng.gen() {
                    Formula::IntEq(a, b)
                } else {
                    Formula::Identity(a, b)
                }
            }
            _ => Formula::Truth(random_value(self.rng, false)),
        }
    }

    /// A small sentence for abstraction bodies; no nested built-ins.
    fn closed_sentence(&mut self) -> Formula {
        let saved = (self.cfg.builtins, self.cfg.max_depth);
        self.cfg.builtins = false;
        self.cfg.max_depth = 1;
        let d = self.rng.gen_range(0..=1);
        let f = self.formula(d);
        let f = self.close(f, false);
        (self.cfg.builtins, self.cfg.max_depth) = saved;
        f
    }

    fn close(&mut self, mut f: Formula, quantify: bool) -> Formula {
        for v in free_vars(&f) {
            if quantify && f.depth() < self.cfg.max_depth && self.rng.gen_bool(0.6) {
                let kind = self.quantifier();
                f = Formula::quantify(kind, &v, f).expect("free in body");
            } else {
                let c = self.element(&v.sort);
                f = substitute(&f, &v, &c).expect("ground terms cannot be captured");
            }
        }
        f
    }
}

/// Sorts used by [`random_extension`]; one of them is empty.
pub fn relation_sorts() -> Vec<Column> {
    vec![
        Column::new("s0", &["a0", "a1"]),
        Column::new("s1", &["b0", "b1", "b2"]),
        Column::new("s2", &[]),
        Column::new("s3", &["d0"]),
    ]
}

/// A random relation of width `0..=max_width`, columns drawn from
/// [`relation_sorts`].
pub fn random_extension(rng: &mut impl Rng, max_width: usize) -> MExtension {
    let sorts = relation_sorts();
    let width = rng.gen_range(0..=max_width);
    let columns: Vec<Column> = (0..width)
        .map(|_| sorts.choose(rng).unwrap().clone())
        .collect();
    random_extension_over(rng, columns)
}

/// A random relation over the given columns; each tuple is ⊥ with
/// probability 1/4.
pub fn random_extension_over(rng: &mut impl Rng, columns: Vec<Column>) -> MExtension {
    let empty = MExtension::empty(columns.clone());
    let rows: Vec<_> = empty
        .tuples()
        .into_iter()
        .map(|t| (t, random_value(rng, false)))
        .collect();
    MExtension::from_rows(columns, rows).expect("tuples come from the domains")
}

/// A (KB, sentence) pair drawn from `seed`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub seed: u64,
    pub kb: HerbrandKB,
    pub formula: Formula,
}

pub fn instance(seed: u64, cfg: &GenConfig) -> Instance {
    let mut r = rng(seed);
    let kb = random_kb(&mut r, cfg);
    let formula = random_sentence(&mut r, kb.signature(), cfg);
    Instance { seed, kb, formula }
}

/// As [`instance`], with a formula that may keep free variables.
pub fn open_instance(seed: u64, cfg: &GenConfig) -> Instance {
    let mut r = rng(seed);
    let kb = random_kb(&mut r, cfg);
    let formula = random_formula(&mut r, kb.signature(), cfg);
    Instance { seed, kb, formula }
}
