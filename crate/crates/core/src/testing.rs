//! Fixtures shared by unit tests.

use crate::elem::{Elem, ElemSet};
use crate::structure::FiniteStructure;

/// The product of two 2-element fields: xor for `f`, and for `g`.
/// Not local, so it separates J from prime.
pub(crate) fn f2_squared() -> FiniteStructure {
    let labels = ["0", "a", "b", "1"].map(String::from).to_vec();
    FiniteStructure::from_fns(
        "f2xf2",
        labels,
        2,
        2,
        Elem(0),
        |t| ElemSet::singleton(Elem(t[0].0 ^ t[1].0)),
        |t| Elem(t[0].0 & t[1].0),
    )
    .expect("total tables")
}
