//! Finite structures, indexed families, indiscernibility, basing and
//! extraction of indiscernibles.

mod extract;
mod family;
mod indiscernible;
pub mod io;
mod structure;

pub use extract::{
    check_array_decomposition, extract_array_indiscernible, extract_indiscernible_sequence, extract_str0_from_str,
    homogenize_levels, level_coloring, ArrayExtraction, DecompositionSide, DecompositionVerdict, LevelColoring,
    SequenceExtraction,
};
pub use family::{FragmentDesc, IndexedFamily};
pub use indiscernible::{
    em_type, is_based_on, is_em_based_on, is_indiscernible, is_locally_based_on, BasingVerdict, EmType,
    IndiscernibleVerdict,
};
pub use structure::{Atom, AtomicType, Elem, FiniteStructure, Relation, Slot};
