//! Canonical quantifier-free type codes for index tuples.
//!
//! A [`QfTypeCode`] is a byte string; two tuples of the same arity get equal
//! codes exactly when they satisfy the same atomic formulas of the chosen
//! signature. Layout:
//!
//! ```text
//! byte 0        signature tag: 0 = s, 1 = str, 2 = str0, 3 = ar
//! bytes 1..5    arity n, u32 little-endian
//! tree sigs     E = n + n(n-1)/2 extended positions: x_0..x_{n-1}, then
//!               x_i ∧ x_j for i < j in lexicographic (i, j) order.
//!               E*E relation bytes, row-major over ordered pairs (p, q):
//!                 bit 0  p ⊴ q
//!                 bit 1  p <_lex q
//!                 bit 2  p <_len q          (str and s only)
//!               s only: E levels, u64 little-endian each.
//! ar            n*n relation bytes, row-major over (p, q):
//!                 bit 0  p <_1 q
//!                 bit 1  p <_2 q
//!                 bit 2  p = q
//! ```
//!
//! Only pairwise meets of original positions are materialised: a meet of any
//! finite set of nodes already equals the meet of two of them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ParseError, QftpError};
use crate::node::{ArrayIndex, Index, IndexKind, TreeNode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    /// `{⊴, ∧, <_lex, P_γ}`
    S,
    /// `{⊴, ∧, <_lex, <_len}`
    Str,
    /// `{⊴, ∧, <_lex}`
    Str0,
    /// `{<_1, <_2}`
    Ar,
}

impl Signature {
    pub const ALL: [Signature; 4] = [Signature::S, Signature::Str, Signature::Str0, Signature::Ar];

    pub fn tag(self) -> u8 {
        match self {
            Signature::S => 0,
            Signature::Str => 1,
            Signature::Str0 => 2,
            Signature::Ar => 3,
        }
    }

    fn from_tag(tag: u8) -> Option<Self> {
        Signature::ALL.into_iter().find(|s| s.tag() == tag)
    }

    pub fn index_kind(self) -> IndexKind {
        match self {
            Signature::Ar => IndexKind::Array,
            _ => IndexKind::Tree,
        }
    }

    fn has_len(self) -> bool {
        matches!(self, Signature::S | Signature::Str)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signature::S => "s",
            Signature::Str => "str",
            Signature::Str0 => "str0",
            Signature::Ar => "ar",
        })
    }
}

impl FromStr for Signature {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "s" => Ok(Signature::S),
            "str" => Ok(Signature::Str),
            "str0" => Ok(Signature::Str0),
            "ar" => Ok(Signature::Ar),
            _ => Err(ParseError::new(s, "signature must be one of s, str, str0, ar")),
        }
    }
}

pub const TREE_INITIAL: u8 = 1;
pub const TREE_LEX: u8 = 2;
pub const TREE_LEN: u8 = 4;
pub const AR_LT1: u8 = 1;
pub const AR_LT2: u8 = 2;
pub const AR_EQ: u8 = 4;

const HEADER: usize = 5;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QfTypeCode {
    bytes: Vec<u8>,
}

impl fmt::Debug for QfTypeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QfTypeCode({})", self.to_hex())
    }
}

impl fmt::Display for QfTypeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

fn extended_len(sig: Signature, arity: usize) -> usize {
    match sig {
        Signature::Ar => arity,
        _ => arity + arity * arity.saturating_sub(1) / 2,
    }
}

/// Original positions `(i, j)` whose meet sits at extended position `p >= n`.
fn meet_pair(arity: usize, p: usize) -> (usize, usize) {
    let mut k = p - arity;
    for i in 0..arity {
        let row = arity - i - 1;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
    }
    unreachable!("extended position {p} out of range for arity {arity}")
}

impl QfTypeCode {
    pub fn signature(&self) -> Signature {
        Signature::from_tag(self.bytes[0]).expect("validated on construction")
    }

    pub fn arity(&self) -> usize {
        u32::from_le_bytes(self.bytes[1..5].try_into().unwrap()) as usize
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.bytes)
    }

    pub fn from_hex(s: &str) -> Result<Self, QftpError> {
        let bytes = hex::decode(s.trim()).map_err(|e| QftpError::MalformedCode(e.to_string()))?;
        Self::from_bytes(bytes)
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self, QftpError> {
        if bytes.len() < HEADER {
            return Err(QftpError::MalformedCode("shorter than header".into()));
        }
        let sig = Signature::from_tag(bytes[0])
            .ok_or_else(|| QftpError::MalformedCode(format!("unknown signature tag {}", bytes[0])))?;
        let arity = u32::from_le_bytes(bytes[1..5].try_into().unwrap()) as usize;
        let e = extended_len(sig, arity);
        let expected = HEADER + e * e + if sig == Signature::S { 8 * e } else { 0 };
        if bytes.len() != expected {
            return Err(QftpError::MalformedCode(format!(
                "expected {expected} bytes for arity {arity} under {sig}, got {}",
                bytes.len()
            )));
        }
        let allowed = if sig.has_len() || sig == Signature::Ar { 7 } else { 3 };
        if bytes[HEADER..HEADER + e * e].iter().any(|b| b & !allowed != 0) {
            return Err(QftpError::MalformedCode("relation byte with unknown bits".into()));
        }
        Ok(QfTypeCode { bytes })
    }

    /// Number of positions the relation table ranges over.
    pub fn extended_len(&self) -> usize {
        extended_len(self.signature(), self.arity())
    }

    /// Relation byte for the ordered pair of extended positions `(p, q)`.
    pub fn relation(&self, p: usize, q: usize) -> u8 {
        let e = self.extended_len();
        self.bytes[HEADER + p * e + q]
    }

    /// Exact level of extended position `p` (signature `s` only).
    pub fn level(&self, p: usize) -> Option<u64> {
        if self.signature() != Signature::S {
            return None;
        }
        let e = self.extended_len();
        let off = HEADER + e * e + 8 * p;
        Some(u64::from_le_bytes(self.bytes[off..off + 8].try_into().unwrap()))
    }

    pub fn position_label(&self, p: usize) -> String {
        let n = self.arity();
        if p < n || self.signature() == Signature::Ar {
            format!("x{p}")
        } else {
            let (i, j) = meet_pair(n, p);
            format!("x{i}∧x{j}")
        }
    }

    fn tree_same(&self, p: usize, q: usize) -> bool {
        self.relation(p, q) & TREE_INITIAL != 0 && self.relation(q, p) & TREE_INITIAL != 0
    }

    /// True when every pairwise meet coincides with one of the original
    /// positions. Always false for `ar` codes.
    pub fn is_meet_closed(&self) -> bool {
        if self.signature() == Signature::Ar {
            return false;
        }
        let n = self.arity();
        (n..self.extended_len()).all(|p| (0..n).any(|q| self.tree_same(p, q)))
    }

    /// Number of distinct levels among the original positions, for `str`
    /// and `s` codes.
    pub fn level_count(&self) -> Option<usize> {
        let sig = self.signature();
        if !sig.has_len() {
            return None;
        }
        let n = self.arity();
        let mut classes = 0;
        for p in 0..n {
            let new_class = (0..p).all(|q| {
                self.relation(p, q) & TREE_LEN != 0 || self.relation(q, p) & TREE_LEN != 0
            });
            if new_class {
                classes += 1;
            }
        }
        Some(classes)
    }

    /// Human-readable listing of the atoms that hold; reflexive `⊴` and `=`
    /// atoms are omitted.
    pub fn atoms(&self) -> Vec<String> {
        let sig = self.signature();
        let e = self.extended_len();
        let mut out = Vec::new();
        for p in 0..e {
            for q in 0..e {
                let r = self.relation(p, q);
                let (a, b) = (self.position_label(p), self.position_label(q));
                if sig == Signature::Ar {
                    if r & AR_LT1 != 0 {
                        out.push(format!("{a} <1 {b}"));
                    }
                    if r & AR_LT2 != 0 {
                        out.push(format!("{a} <2 {b}"));
                    }
                    if r & AR_EQ != 0 && p != q {
                        out.push(format!("{a} = {b}"));
                    }
                } else {
                    if r & TREE_INITIAL != 0 && p != q {
                        out.push(format!("{a} ⊴ {b}"));
                    }
                    if r & TREE_LEX != 0 {
                        out.push(format!("{a} <lex {b}"));
                    }
                    if r & TREE_LEN != 0 {
                        out.push(format!("{a} <len {b}"));
                    }
                }
            }
        }
        if sig == Signature::S {
            for p in 0..e {
                out.push(format!("P{}({})", self.level(p).unwrap(), self.position_label(p)));
            }
        }
        out
    }
}

fn header(sig: Signature, arity: usize, body: usize) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(HEADER + body);
    bytes.push(sig.tag());
    bytes.extend_from_slice(&(arity as u32).to_le_bytes());
    bytes
}

/// Original nodes followed by their pairwise meets, in code order.
pub fn extended_positions<N: AsRef<TreeNode>>(nodes: &[N]) -> Vec<TreeNode> {
    let n = nodes.len();
    let mut ext: Vec<TreeNode> = nodes.iter().map(|x| x.as_ref().clone()).collect();
    for i in 0..n {
        for j in i + 1..n {
            ext.push(nodes[i].as_ref().meet(nodes[j].as_ref()));
        }
    }
    ext
}

impl AsRef<TreeNode> for TreeNode {
    fn as_ref(&self) -> &TreeNode {
        self
    }
}

/// Code of a tree tuple under `s`, `str` or `str0`.
///
/// Panics if `sig` is `ar`; use [`qftp_code`] for checked dispatch.
pub fn tree_code<N: AsRef<TreeNode>>(nodes: &[N], sig: Signature) -> QfTypeCode {
    assert!(sig != Signature::Ar, "tree_code called with the array signature");
    let ext = extended_positions(nodes);
    let e = ext.len();
    let mut bytes = header(sig, nodes.len(), e * e + 8 * e);
    for p in &ext {
        for q in &ext {
            let mut r = 0u8;
            if p.is_initial_segment_of(q) {
                r |= TREE_INITIAL;
            }
            if p.lex_less(q) {
                r |= TREE_LEX;
            }
            if sig.has_len() && p.len_less(q) {
                r |= TREE_LEN;
            }
            bytes.push(r);
        }
    }
    if sig == Signature::S {
        for p in &ext {
            bytes.extend_from_slice(&(p.level() as u64).to_le_bytes());
        }
    }
    QfTypeCode { bytes }
}

pub fn array_code<A: AsRef<ArrayIndex>>(indices: &[A]) -> QfTypeCode {
    let n = indices.len();
    let mut bytes = header(Signature::Ar, n, n * n);
    for p in indices {
        for q in indices {
            let (p, q) = (p.as_ref(), q.as_ref());
            let mut r = 0u8;
            if p.lt1(q) {
                r |= AR_LT1;
            }
            if p.lt2(q) {
                r |= AR_LT2;
            }
            if p == q {
                r |= AR_EQ;
            }
            bytes.push(r);
        }
    }
    QfTypeCode { bytes }
}

impl AsRef<ArrayIndex> for ArrayIndex {
    fn as_ref(&self) -> &ArrayIndex {
        self
    }
}

/// Code of a tuple of indices, checking that the signature fits.
pub fn qftp_code<I: AsRef<Index>>(tuple: &[I], sig: Signature) -> Result<QfTypeCode, QftpError> {
    match sig {
        Signature::Ar => {
            let idx = tuple
                .iter()
                .map(|i| match i.as_ref() {
                    Index::Array(a) => Ok(a),
                    Index::Tree(_) => Err(QftpError::SignatureMismatch { sig, kind: IndexKind::Tree }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(array_code(&idx))
        }
        _ => {
            let nodes = tuple
                .iter()
                .map(|i| match i.as_ref() {
                    Index::Tree(n) => Ok(n),
                    Index::Array(_) => Err(QftpError::SignatureMismatch { sig, kind: IndexKind::Array }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(tree_code(&nodes, sig))
        }
    }
}

impl AsRef<Index> for Index {
    fn as_ref(&self) -> &Index {
        self
    }
}

pub fn qftp_equal<I: AsRef<Index>>(a: &[I], b: &[I], sig: Signature) -> Result<bool, QftpError> {
    if a.len() != b.len() {
        return Err(QftpError::ArityMismatch { left: a.len(), right: b.len() });
    }
    Ok(qftp_code(a, sig)? == qftp_code(b, sig)?)
}

/// `cl_∧`: the nodes plus all pairwise meets, deduplicated, in (level, lex)
/// order.
pub fn meet_closure<N: AsRef<TreeNode>>(nodes: &[N]) -> Vec<TreeNode> {
    let mut ext = extended_positions(nodes);
    ext.sort_by(|a, b| a.level_lex_cmp(b));
    ext.dedup();
    ext
}

/// The set of levels of a tree tuple.
pub fn levels<N: AsRef<TreeNode>>(nodes: &[N]) -> BTreeSet<usize> {
    nodes.iter().map(|n| n.as_ref().level()).collect()
}

/// True when the set of nodes is closed under pairwise meets.
pub fn is_meet_closed<N: AsRef<TreeNode>>(nodes: &[N]) -> bool {
    nodes.iter().all(|a| {
        nodes.iter().all(|b| {
            let m = a.as_ref().meet(b.as_ref());
            nodes.iter().any(|c| *c.as_ref() == m)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Vec<Index> {
        crate::node::parse_index_tuple(s).unwrap()
    }

    fn nodes(s: &str) -> Vec<TreeNode> {
        t(s).into_iter().map(|i| i.as_tree().unwrap().clone()).collect()
    }

    #[test]
    fn meet_closure_examples() {
        let cl = meet_closure(&nodes("(<0,0>,<0,1>,<1>)"));
        assert_eq!(cl, nodes("(<>,<0>,<1>,<0,0>,<0,1>)"));
        let as_set: BTreeSet<TreeNode> = cl.into_iter().collect();
        assert_eq!(as_set, nodes("(<>,<0>,<0,0>,<0,1>,<1>)").into_iter().collect());
        assert_eq!(meet_closure(&nodes("(<0>,)")), nodes("(<0>,)"));
        assert_eq!(meet_closure(&nodes("(<0>,<0,1>)")), nodes("(<0>,<0,1>)"));
    }

    #[test]
    fn levels_examples() {
        assert_eq!(levels(&nodes("(<0>,<1>,<0,0>)")), BTreeSet::from([1, 2]));
        assert_eq!(levels(&nodes("(<>,)")), BTreeSet::from([0]));
        assert_eq!(levels::<TreeNode>(&[]), BTreeSet::new());
    }

    #[test]
    fn code_examples() {
        let eq = |a: &str, b: &str, sig| qftp_equal(&t(a), &t(b), sig).unwrap();
        assert!(eq("(<0>,<1>)", "(<0>,<2>)", Signature::Str0));
        assert!(!eq("(<0>,<1,0>)", "(<0,0>,<1>)", Signature::Str));
        assert!(eq("(<0>,<1,0>)", "(<0,0>,<1>)", Signature::Str0));
        assert!(eq("((0,0),(0,1),(1,0))", "((2,3),(2,7),(5,0))", Signature::Ar));
        assert!(eq("(<0>,<0,1>)", "(<1>,<1,5>)", Signature::Str0));
        assert!(!eq("(<0>,)", "(<0,0>,)", Signature::S));
        assert!(eq("(<0>,)", "(<0,0>,)", Signature::Str0));
    }

    #[test]
    fn signature_mismatch_and_arity() {
        assert_eq!(
            qftp_code(&t("((0,0),)"), Signature::Str),
            Err(QftpError::SignatureMismatch { sig: Signature::Str, kind: IndexKind::Array })
        );
        assert!(qftp_code(&t("(<0>,)"), Signature::Ar).is_err());
        assert_eq!(
            qftp_equal(&t("(<0>,)"), &t("(<0>,<1>)"), Signature::S),
            Err(QftpError::ArityMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn empty_tuple_has_one_code_per_signature() {
        let codes: BTreeSet<_> =
            Signature::ALL.iter().map(|&s| qftp_code::<Index>(&[], s).unwrap()).collect();
        assert_eq!(codes.len(), 4);
        for s in Signature::ALL {
            assert_eq!(qftp_code::<Index>(&[], s).unwrap().arity(), 0);
        }
    }

    #[test]
    fn bytes_round_trip_and_validation() {
        let code = qftp_code(&t("(<0,1>,<1>,<>)"), Signature::S).unwrap();
        assert_eq!(QfTypeCode::from_hex(&code.to_hex()).unwrap(), code);
        assert_eq!(code.extended_len(), 6);
        assert_eq!(code.level(0), Some(2));
        assert_eq!(code.level(3), Some(0));
        let mut bad = code.as_bytes().to_vec();
        bad.pop();
        assert!(QfTypeCode::from_bytes(bad).is_err());
        assert!(QfTypeCode::from_bytes(vec![9, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn meet_pair_layout() {
        let pairs: Vec<_> = (4..10).map(|p| meet_pair(4, p)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn code_metadata() {
        let c = qftp_code(&t("(<0>,<1>,<0,0>)"), Signature::Str).unwrap();
        assert_eq!(c.level_count(), Some(2));
        assert!(!c.is_meet_closed());
        let c = qftp_code(&t("(<>,<0>,<1>)"), Signature::Str).unwrap();
        assert!(c.is_meet_closed());
        assert!(c.atoms().contains(&"x0 ⊴ x1".to_string()));
        assert!(c.atoms().contains(&"x1 <lex x2".to_string()));
        assert_eq!(qftp_code(&t("(<0>,)"), Signature::Str0).unwrap().level_count(), None);
    }
}
