//! Belnap four-valued intensional first-order logic.
//!
//! Formulas over a finite sorted Herbrand knowledge base can be evaluated
//! three ways: directly ([`valuation`]), through the concept algebra and
//! its relational image ([`concepts`], [`mext`]), and by generalized
//! Kripke satisfaction ([`kripke`]). [`suite`] cross-checks them.

use std::sync::Arc;

pub mod bilattice;
pub mod concepts;
pub mod error;
pub mod gen;
pub mod kb;
pub mod kripke;
pub mod mext;
pub mod par;
pub mod suite;
pub mod syntax;
pub mod valuation;

/// Interned-ish name of a sort, constant, predicate or variable.
pub type Sym = Arc<str>;

pub use bilattice::{TruthSet, TruthValue};
pub use concepts::{intensional_interpret, ConceptId, Extensionalization};
pub use error::{Error, Pos, Result};
pub use kb::{GroundAtom, HerbrandKB, MergePolicy, Signature, Value};
pub use kripke::KripkeModel;
pub use mext::{Column, MExtension};
pub use syntax::{parse_formula, print_formula, Formula, Term, Variable};
pub use valuation::World;
