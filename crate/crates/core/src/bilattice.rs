//! The Belnap bilattice FOUR.
//!
//! Each value is a pair of bits `(told_true, told_false)`:
//!
//! | value | told true | told false |
//! |-------|-----------|------------|
//! | `t`   | 1         | 0          |
//! | `f`   | 0         | 1          |
//! | `bot` | 0         | 0          |
//! | `top` | 1         | 1          |
//!
//! The truth order raises the first bit and lowers the second; the knowledge
//! order raises both. Every lattice operation is then a pair of bitwise ops.

use std::fmt;
use std::str::FromStr;

/// One of the four Belnap truth values.
///
/// The derived `Ord` is an arbitrary total order used for sorting and map
/// keys only. Use [`truth_leq`] and [`k_leq`] for the logical orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TruthValue {
    False,
    Unknown,
    Both,
    True,
}

pub use TruthValue::{Both, False, True, Unknown};

impl TruthValue {
    pub const ALL: [TruthValue; 4] = [False, Unknown, Both, True];

    const fn bits(self) -> (bool, bool) {
        match self {
            True => (true, false),
            False => (false, true),
            Unknown => (false, false),
            Both => (true, true),
        }
    }

    const fn from_bits(told_true: bool, told_false: bool) -> Self {
        match (told_true, told_false) {
            (true, false) => True,
            (false, true) => False,
            (false, false) => Unknown,
            (true, true) => Both,
        }
    }

    const fn index(self) -> usize {
        match self {
            False => 0,
            Unknown => 1,
            Both => 2,
            True => 3,
        }
    }

    pub fn is_classical(self) -> bool {
        matches!(self, True | False)
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            True
        } else {
            False
        }
    }

    /// The textual literal used in every file format: `t`, `f`, `top`, `bot`.
    pub fn literal(self) -> &'static str {
        match self {
            True => "t",
            False => "f",
            Both => "top",
            Unknown => "bot",
        }
    }

    pub fn and(self, other: Self) -> Self {
        truth_meet(self, other)
    }

    pub fn or(self, other: Self) -> Self {
        truth_join(self, other)
    }

    pub fn implies(self, other: Self) -> Self {
        implies(self, other)
    }

    pub fn negate(self) -> Self {
        negate(self)
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.literal())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown truth literal `{0}` (expected t, f, top or bot)")]
pub struct UnknownLiteral(pub String);

impl FromStr for TruthValue {
    type Err = UnknownLiteral;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "t" => Ok(True),
            "f" => Ok(False),
            "top" => Ok(Both),
            "bot" => Ok(Unknown),
            other => Err(UnknownLiteral(other.to_string())),
        }
    }
}

/// Greatest lower bound in the truth order (`∧`).
pub fn truth_meet(a: TruthValue, b: TruthValue) -> TruthValue {
    let (at, af) = a.bits();
    let (bt, bf) = b.bits();
    TruthValue::from_bits(at && bt, af || bf)
}

/// Least upper bound in the truth order (`∨`).
pub fn truth_join(a: TruthValue, b: TruthValue) -> TruthValue {
    let (at, af) = a.bits();
    let (bt, bf) = b.bits();
    TruthValue::from_bits(at || bt, af && bf)
}

/// Greatest lower bound in the knowledge order (`⊗`).
pub fn k_meet(a: TruthValue, b: TruthValue) -> TruthValue {
    let (at, af) = a.bits();
    let (bt, bf) = b.bits();
    TruthValue::from_bits(at && bt, af && bf)
}

/// Least upper bound in the knowledge order (`⊕`).
pub fn k_join(a: TruthValue, b: TruthValue) -> TruthValue {
    let (at, af) = a.bits();
    let (bt, bf) = b.bits();
    TruthValue::from_bits(at || bt, af || bf)
}

/// Swaps `t` and `f`, fixes `bot` and `top`.
pub fn negate(a: TruthValue) -> TruthValue {
    let (at, af) = a.bits();
    TruthValue::from_bits(af, at)
}

// Rows and columns indexed by `TruthValue::index` (f, bot, top, t).
const IMPLIES: [[TruthValue; 4]; 4] = [
    // f => _
    [True, True, True, True],
    // bot => _
    [Both, True, Both, True],
    // top => _
    [Unknown, Unknown, True, True],
    // t => _
    [False, Unknown, Both, True],
];

/// Relative pseudocomplement in the truth order: the join of every `z` with
/// `z ∧ a ≤ b`.
pub fn implies(a: TruthValue, b: TruthValue) -> TruthValue {
    IMPLIES[a.index()][b.index()]
}

/// `t` when both values are identical, `f` otherwise.
pub fn equiv(a: TruthValue, b: TruthValue) -> TruthValue {
    TruthValue::from_bool(a == b)
}

pub fn truth_leq(a: TruthValue, b: TruthValue) -> bool {
    let (at, af) = a.bits();
    let (bt, bf) = b.bits();
    (!at || bt) && (!bf || af)
}

pub fn k_leq(a: TruthValue, b: TruthValue) -> bool {
    let (at, af) = a.bits();
    let (bt, bf) = b.bits();
    (!at || bt) && (!af || bf)
}

/// The negation `x ⇒ f`, which reverses both orders. Not used by the
/// formula semantics.
pub fn pseudo_negate(a: TruthValue) -> TruthValue {
    implies(a, False)
}

/// n-ary truth join; the empty join is `f`.
pub fn big_join<I: IntoIterator<Item = TruthValue>>(values: I) -> TruthValue {
    values.into_iter().fold(False, truth_join)
}

/// n-ary truth meet; the empty meet is `t`.
pub fn big_meet<I: IntoIterator<Item = TruthValue>>(values: I) -> TruthValue {
    values.into_iter().fold(True, truth_meet)
}

/// A subset of the four truth values, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct TruthSet(u8);

impl TruthSet {
    pub const EMPTY: TruthSet = TruthSet(0);

    pub fn singleton(a: TruthValue) -> Self {
        TruthSet(1 << a.index())
    }

    pub fn insert(&mut self, a: TruthValue) {
        self.0 |= 1 << a.index();
    }

    pub fn contains(self, a: TruthValue) -> bool {
        self.0 & (1 << a.index()) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = TruthValue> {
        TruthValue::ALL
            .into_iter()
            .filter(move |a| self.contains(*a))
    }

    /// The only member, if there is exactly one.
    pub fn single(self) -> Option<TruthValue> {
        if self.len() == 1 {
            self.iter().next()
        } else {
            None
        }
    }

    pub fn map(self, f: impl Fn(TruthValue) -> TruthValue) -> Self {
        self.iter().map(f).collect()
    }

    /// `{ op(a, b) | a ∈ self, b ∈ other }`.
    pub fn combine(self, other: Self, op: impl Fn(TruthValue, TruthValue) -> TruthValue) -> Self {
        let mut out = TruthSet::EMPTY;
        for a in self.iter() {
            for b in other.iter() {
                out.insert(op(a, b));
            }
        }
        out
    }
}

impl FromIterator<TruthValue> for TruthSet {
    fn from_iter<I: IntoIterator<Item = TruthValue>>(iter: I) -> Self {
        let mut s = TruthSet::EMPTY;
        for a in iter {
            s.insert(a);
        }
        s
    }
}

impl fmt::Debug for TruthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Hasse diagrams written out as explicit strict-successor lists, so the
    // order checks below do not go through the bit encoding.
    fn truth_leq_oracle(a: TruthValue, b: TruthValue) -> bool {
        a == b || a == False || b == True
    }

    fn k_leq_oracle(a: TruthValue, b: TruthValue) -> bool {
        a == b || a == Unknown || b == Both
    }

    fn implies_oracle(x: TruthValue, y: TruthValue) -> TruthValue {
        big_join(
            TruthValue::ALL
                .into_iter()
                .filter(|z| truth_leq_oracle(truth_meet(*z, x), y)),
        )
    }

    #[test]
    fn defining_identities() {
        assert_eq!(truth_meet(Both, Unknown), False);
        assert_eq!(truth_join(Both, Unknown), True);
        assert_eq!(k_meet(False, True), Unknown);
        assert_eq!(k_join(False, True), Both);
    }

    #[test]
    fn bounds_by_enumeration() {
        for a in TruthValue::ALL {
            for b in TruthValue::ALL {
                let ub: Vec<_> = TruthValue::ALL
                    .into_iter()
                    .filter(|z| truth_leq_oracle(a, *z) && truth_leq_oracle(b, *z))
                    .collect();
                let lub = ub
                    .iter()
                    .copied()
                    .find(|c| ub.iter().all(|z| truth_leq_oracle(*c, *z)))
                    .unwrap();
                assert_eq!(truth_join(a, b), lub, "{a} ∨ {b}");

                let kl: Vec<_> = TruthValue::ALL
                    .into_iter()
                    .filter(|z| k_leq_oracle(*z, a) && k_leq_oracle(*z, b))
                    .collect();
                let glb = kl
                    .iter()
                    .copied()
                    .find(|c| kl.iter().all(|z| k_leq_oracle(*z, *c)))
                    .unwrap();
                assert_eq!(k_meet(a, b), glb, "{a} ⊗ {b}");
            }
        }
        assert_eq!(truth_join(False, Both), Both);
        assert_eq!(k_meet(Both, True), True);
    }

    #[test]
    fn orders_match_hasse_diagrams() {
        for a in TruthValue::ALL {
            for b in TruthValue::ALL {
                assert_eq!(truth_leq(a, b), truth_leq_oracle(a, b));
                assert_eq!(k_leq(a, b), k_leq_oracle(a, b));
            }
        }
        assert!(truth_leq(False, Both));
        assert!(!truth_leq(Unknown, Both) && !truth_leq(Both, Unknown));
        assert!(k_leq(Unknown, True));
    }

    #[test]
    fn implication_table_matches_oracle() {
        for x in TruthValue::ALL {
            for y in TruthValue::ALL {
                assert_eq!(implies(x, y), implies_oracle(x, y), "{x} => {y}");
            }
        }
        assert_eq!(implies(True, False), False);
    }

    #[test]
    fn negation_and_equivalence() {
        assert_eq!(negate(True), False);
        assert_eq!(negate(Both), Both);
        assert_eq!(negate(Unknown), Unknown);
        assert_eq!(equiv(Both, Both), True);
        assert_eq!(equiv(Unknown, Both), False);
        for a in TruthValue::ALL {
            assert_eq!(negate(negate(a)), a);
            assert_eq!(equiv(a, a), True);
            assert_eq!(truth_meet(True, a), a);
            assert_eq!(k_join(Unknown, a), a);
        }
    }

    #[test]
    fn literals_round_trip() {
        for a in TruthValue::ALL {
            assert_eq!(a.literal().parse::<TruthValue>().unwrap(), a);
        }
        assert!("T".parse::<TruthValue>().is_err());
    }

    #[test]
    fn pseudo_negation_reverses_both_orders() {
        for a in TruthValue::ALL {
            for b in TruthValue::ALL {
                if truth_leq(a, b) {
                    assert!(truth_leq(pseudo_negate(b), pseudo_negate(a)));
                }
            }
        }
    }

    #[test]
    fn truth_set_combine() {
        let s: TruthSet = [True, False].into_iter().collect();
        let r = s.combine(TruthSet::singleton(Unknown), truth_meet);
        assert_eq!(r.iter().collect::<Vec<_>>(), vec![False, Unknown]);
        assert_eq!(TruthSet::singleton(Both).single(), Some(Both));
        assert_eq!(s.single(), None);
    }
}
