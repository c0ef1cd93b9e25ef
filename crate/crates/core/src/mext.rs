//! m-extensions: functional relations whose last column is a truth value,
//! and the relational algebra over them.
//!
//! Unknown is never stored; a missing argument tuple means ⊥. Each argument
//! column carries the finite domain it ranges over, which is what
//! completion needs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::bilattice::{big_join, big_meet, truth_leq, TruthValue};
use crate::error::{Error, Result};
use crate::kb::product;
use crate::par;
use crate::syntax::{BinOp, JoinSet};
use crate::Sym;

/// Largest width for which [`includes`] searches column permutations.
pub const MAX_INC_WIDTH: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Column {
    pub sort: Sym,
    pub domain: Arc<[Sym]>,
}

impl Column {
    pub fn new(sort: &str, domain: &[&str]) -> Self {
        Column {
            sort: sort.into(),
            domain: domain.iter().map(|d| Sym::from(*d)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MExtension {
    columns: Vec<Column>,
    rows: BTreeMap<Vec<Sym>, TruthValue>,
}

impl MExtension {
    pub fn empty(columns: Vec<Column>) -> Self {
        MExtension {
            columns,
            rows: BTreeMap::new(),
        }
    }

    /// Width-0 value: `{a}`, or `∅` for ⊥.
    pub fn scalar(a: TruthValue) -> Self {
        let mut r = MExtension::empty(vec![]);
        r.set(vec![], a);
        r
    }

    /// Builds a relation; ⊥ rows are dropped, conflicting duplicates and
    /// out-of-domain elements are errors.
    pub fn from_rows<I>(columns: Vec<Column>, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<Sym>, TruthValue)>,
    {
        let mut r = MExtension::empty(columns);
        for (t, a) in rows {
            r.check_tuple(&t)?;
            if let Some(old) = r.rows.get(&t) {
                if *old != a {
                    return Err(Error::Relation(format!(
                        "not functional: ({}) has {old} and {a}",
                        t.join(", ")
                    )));
                }
            }
            r.set(t, a);
        }
        Ok(r)
    }

    fn check_tuple(&self, t: &[Sym]) -> Result<()> {
        if t.len() != self.width() {
            return Err(Error::Relation(format!(
                "tuple of width {} in a relation of width {}",
                t.len(),
                self.width()
            )));
        }
        for (e, c) in t.iter().zip(&self.columns) {
            if !c.domain.contains(e) {
                return Err(Error::Relation(format!(
                    "`{e}` is not in sort `{}`",
                    c.sort
                )));
            }
        }
        Ok(())
    }

    /// Sets the value of `tuple`; ⊥ removes it.
    pub(crate) fn set(&mut self, tuple: Vec<Sym>, a: TruthValue) {
        debug_assert_eq!(tuple.len(), self.width());
        if a == TruthValue::Unknown {
            self.rows.remove(&tuple);
        } else {
            self.rows.insert(tuple, a);
        }
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    /// Number of argument columns.
    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[Sym], TruthValue)> {
        self.rows.iter().map(|(t, a)| (t.as_slice(), *a))
    }

    /// Value of a tuple, ⊥ when absent.
    pub fn get(&self, tuple: &[Sym]) -> TruthValue {
        self.rows.get(tuple).copied().unwrap_or(TruthValue::Unknown)
    }

    /// The truth value of a width-0 relation.
    pub fn truth(&self) -> Option<TruthValue> {
        (self.width() == 0).then(|| self.get(&[]))
    }

    /// Every argument tuple over the column domains, lexicographic.
    pub fn tuples(&self) -> Vec<Vec<Sym>> {
        tuples_of(&self.columns)
    }

    /// `Com(R)`.
    pub fn complete(&self) -> Completed {
        Completed {
            columns: self.columns.clone(),
            rows: self
                .tuples()
                .into_iter()
                .map(|t| {
                    let a = self.get(&t);
                    (t, a)
                })
                .collect(),
        }
    }

    /// Functional, ⊥-free and within the column domains.
    pub fn check_invariants(&self) -> Result<()> {
        for (t, a) in &self.rows {
            if *a == TruthValue::Unknown {
                return Err(Error::Relation("stored ⊥ row".into()));
            }
            self.check_tuple(t)?;
        }
        Ok(())
    }

    /// Tab-separated dump, rows sorted, optionally completed with `bot`.
    pub fn dump(&self, name: &str, complete: bool) -> String {
        let mut out = format!("# extension {name} arity {}\n", self.width());
        let rows: Vec<(Vec<Sym>, TruthValue)> = if complete {
            self.complete().rows.into_iter().collect()
        } else {
            self.rows.iter().map(|(t, a)| (t.clone(), *a)).collect()
        };
        for (t, a) in rows {
            for e in &t {
                let _ = write!(out, "{e}\t");
            }
            let _ = writeln!(out, "{a}");
        }
        out
    }
}

fn tuples_of(columns: &[Column]) -> Vec<Vec<Sym>> {
    let doms: Vec<&[Sym]> = columns.iter().map(|c| &*c.domain).collect();
    product(&doms)
}

/// A completed relation; ⊥ rows are explicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completed {
    pub columns: Vec<Column>,
    pub rows: BTreeMap<Vec<Sym>, TruthValue>,
}

impl Completed {
    /// Fills missing tuples with ⊥ (a no-op on the output of
    /// [`MExtension::complete`]).
    pub fn complete(&self) -> Completed {
        let mut rows = self.rows.clone();
        for t in tuples_of(&self.columns) {
            rows.entry(t).or_insert(TruthValue::Unknown);
        }
        Completed {
            columns: self.columns.clone(),
            rows,
        }
    }

    /// Drops the ⊥ rows.
    pub fn to_extension(&self) -> MExtension {
        let mut r = MExtension::empty(self.columns.clone());
        for (t, a) in &self.rows {
            r.set(t.clone(), *a);
        }
        r
    }

    /// Value of `tuple`, `None` when it lies outside the column domains.
    fn lookup(&self, tuple: &[Sym]) -> Option<TruthValue> {
        self.rows.get(tuple).copied()
    }
}

/// `Ex(R, m)`: pads `r` to `columns`, whose prefix must be `r`'s columns.
pub fn expand(r: &MExtension, columns: &[Column]) -> Result<MExtension> {
    if columns.len() < r.width() || columns[..r.width()] != r.columns[..] {
        return Err(Error::Relation(format!(
            "cannot expand width {} to width {} with a different column prefix",
            r.width(),
            columns.len()
        )));
    }
    let pad = tuples_of(&columns[r.width()..]);
    let mut out = MExtension::empty(columns.to_vec());
    for (t, a) in &r.rows {
        for e in &pad {
            let mut u = t.clone();
            u.extend(e.iter().cloned());
            out.rows.insert(u, *a);
        }
    }
    Ok(out)
}

/// `R1 ≼ R2`.
pub fn ext_leq(r1: &MExtension, r2: &MExtension) -> bool {
    if r1.is_empty() {
        return true;
    }
    if r2.is_empty() {
        return false;
    }
    let (w1, w2) = (r1.width(), r2.width());
    if w1 >= w2 {
        // Ex(R2) repeats each row over the padded columns
        r1.rows.iter().all(|(u, a)| match r2.rows.get(&u[..w2]) {
            Some(b) => truth_leq(*a, *b),
            None => false,
        })
    } else {
        let pad = tuples_of(&r2.columns[w1..]);
        r1.rows.iter().all(|(u, a)| {
            pad.iter().all(|e| {
                let mut v = u.clone();
                v.extend(e.iter().cloned());
                matches!(r2.rows.get(&v), Some(b) if truth_leq(*a, *b))
            })
        })
    }
}

/// `R1 ≃ R2`.
pub fn ext_equiv(r1: &MExtension, r2: &MExtension) -> bool {
    ext_leq(r1, r2) && ext_leq(r2, r1)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                go(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = vec![];
    go(&mut vec![], &mut vec![false; n], &mut out);
    out
}

fn inc_by<F>(rows: &[(Vec<Sym>, TruthValue)], w1: usize, w2: usize, lookup: F) -> Result<bool>
where
    F: Fn(&[Sym]) -> Option<TruthValue>,
{
    if w1 != w2 {
        return Ok(false);
    }
    if w1 > MAX_INC_WIDTH {
        return Err(Error::Relation(format!(
            "inclusion test over {w1} columns exceeds the permutation bound {MAX_INC_WIDTH}"
        )));
    }
    let mut v = vec![Sym::from(""); w1];
    'perm: for p in permutations(w1) {
        for (u, a) in rows {
            // row u of R1 must be row v of R2 with v[p[j]] = u[j]
            for (j, &pj) in p.iter().enumerate() {
                v[pj] = u[j].clone();
            }
            if lookup(&v) != Some(*a) {
                continue 'perm;
            }
        }
        return Ok(true);
    }
    Ok(false)
}

fn rows_of(r: &MExtension) -> Vec<(Vec<Sym>, TruthValue)> {
    r.rows.iter().map(|(t, a)| (t.clone(), *a)).collect()
}

/// `Inc(R1, R2)`: `{t}` when some permutation of `R2`'s argument columns
/// contains `R1`, `{f}` otherwise.
pub fn includes(r1: &MExtension, r2: &MExtension) -> Result<MExtension> {
    let ok = inc_by(&rows_of(r1), r1.width(), r2.width(), |v| {
        r2.rows.get(v).copied()
    })?;
    Ok(MExtension::scalar(TruthValue::from_bool(ok)))
}

/// `Inc` against a completed relation; `rows` may mention ⊥.
pub fn includes_completed(
    rows: &[(Vec<Sym>, TruthValue)],
    width: usize,
    r2: &Completed,
) -> Result<bool> {
    inc_by(rows, width, r2.columns.len(), |v| r2.lookup(v))
}

/// `⊘(R)`.
pub fn ext_neg(r: &MExtension) -> MExtension {
    MExtension {
        columns: r.columns.clone(),
        rows: r
            .rows
            .iter()
            .map(|(t, a)| (t.clone(), a.negate()))
            .collect(),
    }
}

/// Binary operator over the completions of both operands, natural join on
/// `s`; result columns are `r1`'s then `r2`'s unjoined ones, ⊥ rows dropped.
pub fn ext_binary(op: BinOp, r1: &MExtension, r2: &MExtension, s: &JoinSet) -> Result<MExtension> {
    let (w1, w2) = (r1.width(), r2.width());
    let mut joined: Vec<Option<usize>> = vec![None; w2];
    for &(i, j) in s.pairs() {
        if i == 0 || i > w1 || j == 0 || j > w2 {
            return Err(Error::Relation(format!(
                "join pair ({i},{j}) out of range for widths {w1} and {w2}"
            )));
        }
        if r1.columns[i - 1] != r2.columns[j - 1] {
            return Err(Error::Relation(format!(
                "join pair ({i},{j}) relates sorts `{}` and `{}`",
                r1.columns[i - 1].sort,
                r2.columns[j - 1].sort
            )));
        }
        joined[j - 1] = Some(i - 1);
    }
    let free: Vec<usize> = (0..w2).filter(|j| joined[*j].is_none()).collect();
    let mut columns = r1.columns.clone();
    columns.extend(free.iter().map(|&j| r2.columns[j].clone()));

    let left = r1.tuples();
    let right = tuples_of(
        &free
            .iter()
            .map(|&j| r2.columns[j].clone())
            .collect::<Vec<_>>(),
    );
    let chunks = par::map(&left, |u| {
        let a = r1.get(u);
        let mut out = Vec::new();
        let mut v = vec![Sym::from(""); w2];
        for e in &right {
            for (j, src) in joined.iter().enumerate() {
                if let Some(i) = src {
                    v[j] = u[*i].clone();
                }
            }
            for (k, &j) in free.iter().enumerate() {
                v[j] = e[k].clone();
            }
            let c = op.apply(a, r2.get(&v));
            if c != TruthValue::Unknown {
                let mut t = u.clone();
                t.extend(e.iter().cloned());
                out.push((t, c));
            }
        }
        out
    });
    Ok(MExtension {
        columns,
        rows: chunks.into_iter().flatten().collect(),
    })
}

/// `R1 ⊗_S R2`.
pub fn ext_and(r1: &MExtension, r2: &MExtension, s: &JoinSet) -> Result<MExtension> {
    ext_binary(BinOp::And, r1, r2, s)
}

/// `R1 ⊕_S R2`.
pub fn ext_or(r1: &MExtension, r2: &MExtension, s: &JoinSet) -> Result<MExtension> {
    ext_binary(BinOp::Or, r1, r2, s)
}

/// `R1 ⊖_S R2`.
pub fn ext_imp(r1: &MExtension, r2: &MExtension, s: &JoinSet) -> Result<MExtension> {
    ext_binary(BinOp::Imp, r1, r2, s)
}

/// `⊛(R1, R2) = Inc(R1, R2) ⊗ Inc(R2, R1)`.
pub fn ext_equiv_op(r1: &MExtension, r2: &MExtension) -> Result<MExtension> {
    ext_and(&includes(r1, r2)?, &includes(r2, r1)?, &JoinSet::default())
}

fn quantify(r: &MExtension, i: usize, fold: fn(Vec<TruthValue>) -> TruthValue) -> MExtension {
    let w = r.width();
    if w == 0 || i == 0 || i > w {
        return r.clone();
    }
    let mut columns = r.columns.clone();
    let bound = columns.remove(i - 1);
    let mut out = MExtension::empty(columns);
    for u in out.tuples() {
        let values = bound
            .domain
            .iter()
            .map(|d| {
                let mut v = u.clone();
                v.insert(i - 1, d.clone());
                r.get(&v)
            })
            .collect();
        out.set(u, fold(values));
    }
    out
}

/// `⊞_i(R)`: join over column `i` (1-based); out-of-range `i` is the identity.
pub fn ext_exists(r: &MExtension, i: usize) -> MExtension {
    quantify(r, i, big_join)
}

/// `⊠_i(R)`.
pub fn ext_forall(r: &MExtension, i: usize) -> MExtension {
    quantify(r, i, big_meet)
}
