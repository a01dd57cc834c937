//! Generalized indiscernibles over tree and array index structures.
//!
//! * [`node`]: trees `ω^{<ω}`, their fragments `k^{≤m}`, and array indices.
//! * [`qftp`]: canonical quantifier-free type codes under the `s`, `str`,
//!   `str₀` and `ar` signatures.
//! * [`reindex`]: explicit maps between index structures and a brute-force
//!   check that a map respects qftp.
//! * [`modelling`]: finite structures, indexed families, indiscernibility,
//!   basing, EM-types and Ramsey-style extraction.
//! * [`tp2`]: finite k-TP2 witnesses and the reduction to 2-TP2.

pub mod error;
pub mod facts;
pub mod modelling;
pub mod node;
pub mod qftp;
pub mod reindex;
pub mod tp2;
pub mod tuples;

pub use error::{ModellingError, ParseError, QftpError, ReindexError, Tp2Error};
pub use node::{parse_index_tuple, ArrayFragment, ArrayIndex, Fragment, Index, IndexKind, TreeFragment, TreeNode};
pub use qftp::{qftp_code, qftp_equal, QfTypeCode, Signature};
pub use reindex::{check_qftp_respecting, IndexMap, RespectVerdict};
pub use modelling::{
    em_type, is_based_on, is_em_based_on, is_indiscernible, is_locally_based_on, BasingVerdict, FiniteStructure,
    FragmentDesc, IndexedFamily, IndiscernibleVerdict, Relation,
};
pub use tp2::{check_ktp2, reduce_k_to_2, verify_ktp2, Ktp2Verdict, ReductionTrace, Tp2Witness};
