use proptest::prelude::*;
use rand::Rng;

use ifol_core::bilattice::{
    big_join, big_meet, equiv, implies, k_join, k_leq, negate, truth_join, truth_meet, TruthValue,
};
use ifol_core::concepts::{
    degree, intensional_interpret, node, ConceptId, ConceptNode, Extensionalization,
};
use ifol_core::gen::{self, GenConfig};
use ifol_core::kb::HerbrandKB;
use ifol_core::kripke::KripkeModel;
use ifol_core::mext::{
    expand, ext_and, ext_binary, ext_equiv_op, ext_exists, ext_forall, ext_imp, ext_leq, ext_neg,
    ext_or, MExtension,
};
use ifol_core::syntax::{
    canonical_vars, compute_join_set, free_vars, ground, parse_formula, substitute, Assignment,
    BinOp, Constant, Formula, JoinSet, Term, VirtualPredicate,
};
use ifol_core::valuation::{montague_intension, World};

fn truth() -> impl Strategy<Value = TruthValue> {
    prop::sample::select(TruthValue::ALL.to_vec())
}

fn classical_value() -> impl Strategy<Value = TruthValue> {
    prop::sample::select(vec![TruthValue::False, TruthValue::True])
}

fn open(seed: u64) -> gen::Instance {
    gen::open_instance(seed, &GenConfig::default())
}

fn sentence(seed: u64) -> gen::Instance {
    gen::instance(seed, &GenConfig::default())
}

fn subformulas(f: &Formula, out: &mut Vec<Formula>) {
    out.push(f.clone());
    match f {
        Formula::Not(g) | Formula::Quant { body: g, .. } => subformulas(g, out),
        Formula::Bin { left, right, .. } => {
            subformulas(left, out);
            subformulas(right, out);
        }
        _ => {}
    }
}

fn lift(a: TruthValue) -> MExtension {
    MExtension::scalar(a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn classical_values_closed(a in classical_value(), b in classical_value()) {
        for v in [truth_meet(a, b), truth_join(a, b), negate(a), implies(a, b), equiv(a, b)] {
            prop_assert!(v.is_classical());
        }
    }

    #[test]
    fn big_ops_fold(vs in prop::collection::vec(truth(), 0..6)) {
        prop_assert_eq!(big_join(vs.clone()), vs.iter().fold(TruthValue::False, |a, &b| truth_join(a, b)));
        prop_assert_eq!(big_meet(vs.clone()), vs.iter().fold(TruthValue::True, |a, &b| truth_meet(a, b)));
    }

    #[test]
    fn canonical_vars_stable(seed in any::<u64>()) {
        let i = open(seed);
        let vp = canonical_vars(&i.formula);
        prop_assert_eq!(&canonical_vars(&vp.formula).vars, &vp.vars);
        let back = parse_formula(&i.formula.to_string(), i.kb.signature()).unwrap();
        prop_assert_eq!(canonical_vars(&back).vars, vp.vars);
    }

    #[test]
    fn join_sets_match_operands(seed in any::<u64>()) {
        let i = open(seed);
        let mut subs = vec![];
        subformulas(&i.formula, &mut subs);
        for f in subs {
            if let Formula::Bin { left, right, join, .. } = &f {
                let (l, r) = (canonical_vars(left), canonical_vars(right));
                prop_assert_eq!(join, &compute_join_set(&l, &r));
                for &(a, b) in join.pairs() {
                    prop_assert_eq!(&l.vars[a - 1], &r.vars[b - 1]);
                }
            }
        }
    }

    #[test]
    fn substitute_then_ground(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let i = open(seed);
        let vars = free_vars(&i.formula);
        prop_assume!(!vars.is_empty());
        let gs = i.kb.enumerate_assignments(&vars).unwrap();
        let g = pick.get(&gs);
        let x = &vars[0];
        let c = g.get(x).unwrap().clone();
        let rest: Assignment = g.iter().filter(|(v, _)| *v != x).map(|(v, e)| (v.clone(), e.clone())).collect();
        let t = Term::Const(Constant::new(&c, &x.sort));
        let lhs = ground(&substitute(&i.formula, x, &t).unwrap(), &rest).unwrap();
        prop_assert_eq!(lhs, ground(&i.formula, g).unwrap());
    }

    #[test]
    fn kb_lookup_and_knowledge_growth(seed in any::<u64>(), a in truth(), pick in any::<prop::sample::Index>()) {
        let kb = gen::random_kb(&mut gen::rng(seed), &GenConfig::default());
        let base = kb.herbrand_base();
        for atom in &base {
            kb.get(atom);
        }
        prop_assert!(kb.facts().all(|(_, v)| v != TruthValue::Unknown));
        prop_assert!(kb.knowledge_leq(&kb).unwrap());
        let atom = pick.get(&base).clone();
        let mut grown = kb.clone();
        let mut bigger = kb.clone();
        if kb.get(&atom) == TruthValue::Unknown && a != TruthValue::Unknown {
            grown.assert_fact(atom.clone(), a).unwrap();
            prop_assert!(kb.knowledge_leq(&grown).unwrap());
            bigger = grown.clone();
            bigger.assert_with(atom, TruthValue::Both, ifol_core::MergePolicy::KJoin).unwrap();
            prop_assert!(grown.knowledge_leq(&bigger).unwrap());
        }
        prop_assert!(kb.knowledge_leq(&bigger).unwrap());
        if grown.knowledge_leq(&kb).unwrap() {
            prop_assert_eq!(grown.to_text(), kb.to_text());
        }
    }

    #[test]
    fn assignment_count(seed in any::<u64>()) {
        let i = open(seed);
        let vars = free_vars(&i.formula);
        let expected: usize = vars.iter().map(|v| i.kb.signature().domain(&v.sort).unwrap().len()).product();
        prop_assert_eq!(i.kb.enumerate_assignments(&vars).unwrap().len(), expected);
    }

    #[test]
    fn double_negation(seed in any::<u64>()) {
        let i = sentence(seed);
        let w = World::new(i.kb);
        let nn = Formula::not(Formula::not(i.formula.clone()));
        prop_assert_eq!(w.eval(&nn).unwrap(), w.eval(&i.formula).unwrap());
    }

    #[test]
    fn one_truth_scheme_value(seed in any::<u64>()) {
        let i = sentence(seed);
        let w = World::new(i.kb);
        let n = TruthValue::ALL.into_iter().filter(|&a| w.truth_scheme_holds(a, &i.formula).unwrap()).count();
        prop_assert_eq!(n, 1);
    }

    #[test]
    fn extensions_are_functional(seed in any::<u64>()) {
        let i = open(seed);
        let r = World::new(i.kb).mv_extension(&VirtualPredicate::new(i.formula)).unwrap();
        prop_assert!(r.check_invariants().is_ok());
        prop_assert!(r.rows().all(|(_, a)| a != TruthValue::Unknown));
    }

    #[test]
    fn positive_fragment_is_knowledge_monotone(seed in any::<u64>(), extra in any::<u64>()) {
        let cfg = GenConfig { builtins: false, ..GenConfig::default() };
        let i = gen::instance(seed, &cfg);
        let mut subs = vec![];
        subformulas(&i.formula, &mut subs);
        prop_assume!(subs.iter().all(|f| !matches!(f,
            Formula::Not(_) | Formula::Bin { op: BinOp::Imp | BinOp::Equiv, .. })));
        let more = gen::random_facts(&mut gen::rng(extra), i.kb.signature().clone(), &cfg);
        let bigger = i.kb.fuse(&more).unwrap().kb;
        prop_assert!(i.kb.knowledge_leq(&bigger).unwrap());
        let v1 = World::new(i.kb).eval(&i.formula).unwrap();
        let v2 = World::new(bigger).eval(&i.formula).unwrap();
        prop_assert!(k_leq(v1, v2), "{} went from {} to {}", i.formula, v1, v2);
    }

    #[test]
    fn algebra_closure(s1 in any::<u64>(), s2 in any::<u64>()) {
        let r1 = gen::random_extension(&mut gen::rng(s1), 3);
        let r2 = gen::random_extension(&mut gen::rng(s2), 3);
        let none = JoinSet::default();
        let outs = [
            ext_neg(&r1),
            ext_exists(&r1, 1),
            ext_forall(&r1, r1.width()),
            ext_and(&r1, &r2, &none).unwrap(),
            ext_or(&r1, &r2, &none).unwrap(),
            ext_imp(&r1, &r2, &none).unwrap(),
            ext_equiv_op(&r1, &r2).unwrap(),
            ext_neg(&ext_neg(&r1)),
        ];
        for o in &outs {
            prop_assert!(o.check_invariants().is_ok());
        }
        prop_assert_eq!(&outs[7], &r1);
        let c = r1.complete();
        prop_assert_eq!(c.complete(), c.clone());
        prop_assert_eq!(expand(&r1, r1.columns()).unwrap(), r1.clone());
    }

    #[test]
    fn extensional_order(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        // like-sorted samples: Ex pads with the wider relation's columns,
        // so relations over different sorts are not comparable
        let sort = gen::relation_sorts()[1].clone();
        let rs: Vec<MExtension> = [s1, s2, s3]
            .iter()
            .map(|&s| {
                let mut rng = gen::rng(s);
                let w = rng.gen_range(0..=2);
                gen::random_extension_over(&mut rng, vec![sort.clone(); w])
            })
            .collect();
        let bottom = MExtension::empty(vec![]);
        let top = lift(TruthValue::True);
        for r in &rs {
            prop_assert!(ext_leq(r, r));
            prop_assert!(ext_leq(&bottom, r));
            prop_assert!(ext_leq(r, &top));
        }
        if ext_leq(&rs[0], &rs[1]) && ext_leq(&rs[1], &rs[2]) {
            prop_assert!(ext_leq(&rs[0], &rs[2]));
        }
    }

    #[test]
    fn unary_embedding(a in truth(), b in truth()) {
        let none = JoinSet::default();
        prop_assert_eq!(ext_and(&lift(a), &lift(b), &none).unwrap(), lift(truth_meet(a, b)));
        prop_assert_eq!(ext_or(&lift(a), &lift(b), &none).unwrap(), lift(truth_join(a, b)));
        prop_assert_eq!(ext_imp(&lift(a), &lift(b), &none).unwrap(), lift(implies(a, b)));
        prop_assert_eq!(ext_neg(&lift(a)), lift(negate(a)));
        // ∅ ≼ {f} ≼ {⊤} ≼ {t}
        let rank = |v: TruthValue| [TruthValue::Unknown, TruthValue::False, TruthValue::Both, TruthValue::True]
            .iter()
            .position(|&x| x == v)
            .unwrap();
        prop_assert_eq!(ext_leq(&lift(a), &lift(b)), rank(a) <= rank(b));
        prop_assert_eq!(k_join(a, b), k_join(b, a));
    }

    #[test]
    fn homomorphism_node_by_node(seed in any::<u64>()) {
        let i = open(seed);
        let w = World::new(i.kb);
        let mut h = Extensionalization::new(&w);
        let mut subs = vec![];
        subformulas(&i.formula, &mut subs);
        for f in subs {
            let c = intensional_interpret(&f);
            let got = h.extensionalize(c).unwrap();
            let e = |h: &mut Extensionalization, c: ConceptId| h.extensionalize(c).unwrap();
            let want = match &*node(c) {
                ConceptNode::Neg(a) => ext_neg(&e(&mut h, *a)),
                ConceptNode::Meet(a, b, s) => ext_and(&e(&mut h, *a), &e(&mut h, *b), s).unwrap(),
                ConceptNode::Join(a, b, s) => ext_or(&e(&mut h, *a), &e(&mut h, *b), s).unwrap(),
                ConceptNode::Impl(a, b, s) => ext_imp(&e(&mut h, *a), &e(&mut h, *b), s).unwrap(),
                ConceptNode::Equiv(a, b, s) => {
                    if degree(*a) == 1 && degree(*b) == 1 {
                        ext_equiv_op(&e(&mut h, *a), &e(&mut h, *b)).unwrap()
                    } else {
                        ext_binary(BinOp::Equiv, &e(&mut h, *a), &e(&mut h, *b), s).unwrap()
                    }
                }
                ConceptNode::Exists(k, a) => ext_exists(&e(&mut h, *a), *k),
                ConceptNode::Forall(k, a) => ext_forall(&e(&mut h, *a), *k),
                _ => (*got).clone(),
            };
            prop_assert_eq!(&*got, &want, "{}", f);
        }
    }

    #[test]
    fn interning_and_memo(seed in any::<u64>()) {
        let i = open(seed);
        let c = intensional_interpret(&i.formula);
        prop_assert_eq!(c, intensional_interpret(&i.formula.clone()));
        let w = World::new(i.kb);
        let mut h = Extensionalization::new(&w);
        let memo = (*h.extensionalize(c).unwrap()).clone();
        prop_assert_eq!(h.extensionalize_fresh(c).unwrap(), memo);
    }

    #[test]
    fn semantics_chain(seed in any::<u64>()) {
        let i = open(seed);
        let w = World::new(i.kb);
        let vp = VirtualPredicate::new(i.formula.clone());
        let many = w.mv_extension(&vp).unwrap();
        let m = KripkeModel::single(w.clone());
        prop_assert_eq!(&m.kripke_extension(0, &vp).unwrap(), &many);
        prop_assert_eq!(&montague_intension(&vp, std::slice::from_ref(&w)).unwrap()[0], &many);
        let mut h = Extensionalization::new(&w);
        prop_assert_eq!(&*h.extensionalize(intensional_interpret(&i.formula)).unwrap(), &many);
        for g in w.kb().enumerate_assignments(&vp.vars).unwrap() {
            prop_assert_eq!(m.sat_set(0, &i.formula, &g).unwrap().len(), 1);
        }
    }

    #[test]
    fn fusion_is_a_join(seed in any::<u64>()) {
        let cfg = GenConfig::default();
        let mut rng = gen::rng(seed);
        let sig = gen::random_signature(&mut rng, &cfg);
        let a = gen::random_facts(&mut rng, sig.clone(), &cfg);
        let b = gen::random_facts(&mut rng, sig, &cfg);
        let ab = a.fuse(&b).unwrap().kb;
        let ba = b.fuse(&a).unwrap().kb;
        prop_assert_eq!(ab.to_text().lines().filter(|l| l.starts_with("fact")).count(),
                        ba.to_text().lines().filter(|l| l.starts_with("fact")).count());
        prop_assert!(ab.knowledge_leq(&ba).unwrap() && ba.knowledge_leq(&ab).unwrap());
        let empty = HerbrandKB::new(a.signature().clone());
        let same = a.fuse(&empty).unwrap();
        prop_assert!(same.conflicts.is_empty());
        prop_assert!(same.kb.knowledge_leq(&a).unwrap() && a.knowledge_leq(&same.kb).unwrap());
    }
}
