//! Maps between index structures and a brute-force qftp-respecting checker.
//!
//! The named constructions are:
//!
//! * [`identity_map`]: a fragment mapped to itself, typically between two
//!   tree signatures (a reduct, or `s` onto `str`).
//! * [`level_restriction_map`]: `η ↦ ν_η`, spreading a tree onto a chosen
//!   set of levels.
//! * [`path_map`]: the linear order `0..count` onto the children of a node.
//! * [`str0_embedding`]: the recursion `f_k^m`, with its length bound
//!   `l_k^m`.
//! * [`array_stretch_map`]: a tree fragment into an array by
//!   `η ↦ (level, lex rank)`.
//! * [`array_to_tree_map`]: `(i, j) ↦ ⟨0⟩^{2i} ⌢ ⟨j + 1⟩`.
//!
//! [`search_ar_embedding`] is the exhaustive search showing that a tree with
//! `<_1 := <_len` does not embed into a finite array once a level is wider
//! than a row.

use std::collections::HashMap;
use std::fmt;

use crate::error::ReindexError;
use crate::node::{ArrayFragment, ArrayIndex, Index, TreeFragment, TreeNode};
use crate::qftp::{qftp_code, QfTypeCode, Signature};
use crate::tuples::Tuples;

/// A finite map between index lists, tagged with the signatures its source
/// and target are read in.
#[derive(Clone, Debug)]
pub struct IndexMap {
    source_sig: Signature,
    target_sig: Signature,
    source: Vec<Index>,
    target: Vec<Index>,
    lookup: HashMap<Index, usize>,
}

impl PartialEq for IndexMap {
    fn eq(&self, other: &Self) -> bool {
        self.source_sig == other.source_sig
            && self.target_sig == other.target_sig
            && self.source == other.source
            && self.target == other.target
    }
}

impl IndexMap {
    pub fn new(
        source_sig: Signature,
        target_sig: Signature,
        pairs: impl IntoIterator<Item = (Index, Index)>,
    ) -> Result<Self, ReindexError> {
        let (source, target): (Vec<Index>, Vec<Index>) = pairs.into_iter().unzip();
        for s in &source {
            if s.kind() != source_sig.index_kind() {
                return Err(crate::error::QftpError::SignatureMismatch { sig: source_sig, kind: s.kind() }.into());
            }
        }
        for t in &target {
            if t.kind() != target_sig.index_kind() {
                return Err(crate::error::QftpError::SignatureMismatch { sig: target_sig, kind: t.kind() }.into());
            }
        }
        let mut lookup = HashMap::with_capacity(source.len());
        for (i, s) in source.iter().enumerate() {
            if lookup.insert(s.clone(), i).is_some() {
                return Err(ReindexError::NotInSource(format!("{s} listed twice")));
            }
        }
        Ok(IndexMap { source_sig, target_sig, source, target, lookup })
    }

    pub fn source_sig(&self) -> Signature {
        self.source_sig
    }

    pub fn target_sig(&self) -> Signature {
        self.target_sig
    }

    pub fn source(&self) -> &[Index] {
        &self.source
    }

    pub fn target(&self) -> &[Index] {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Index, &Index)> {
        self.source.iter().zip(&self.target)
    }

    pub fn apply(&self, idx: &Index) -> Option<&Index> {
        self.lookup.get(idx).map(|&i| &self.target[i])
    }

    /// Same mapping read under different signatures.
    pub fn with_signatures(&self, source_sig: Signature, target_sig: Signature) -> Result<Self, ReindexError> {
        IndexMap::new(source_sig, target_sig, self.source.iter().cloned().zip(self.target.iter().cloned()))
    }

    /// `self ∘ inner`: apply `inner`, then `self`. Every image of `inner`
    /// must lie in `self`'s source.
    pub fn compose_after(&self, inner: &IndexMap) -> Result<IndexMap, ReindexError> {
        let pairs = inner
            .pairs()
            .map(|(s, mid)| {
                self.apply(mid)
                    .map(|t| (s.clone(), t.clone()))
                    .ok_or_else(|| ReindexError::NotInSource(mid.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        IndexMap::new(inner.source_sig, self.target_sig, pairs)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.target.iter().all(|t| seen.insert(t))
    }
}

impl fmt::Display for IndexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {} -> {}", self.source_sig, self.target_sig)?;
        for (s, t) in self.pairs() {
            writeln!(f, "{s}\t{t}")?;
        }
        Ok(())
    }
}

pub fn identity_map(fragment: TreeFragment, source_sig: Signature, target_sig: Signature) -> Result<IndexMap, ReindexError> {
    let nodes = fragment.nodes();
    IndexMap::new(source_sig, target_sig, nodes.into_iter().map(|n| (Index::Tree(n.clone()), Index::Tree(n))))
}

/// `ν_η` for the level list `levels = (ℓ_0, ℓ_1, ...)`: a node of length
/// `ℓ_n` with `η(i)` at position `ℓ_{i+1} - 1` and zeroes elsewhere.
pub fn restrict_to_levels(levels: &[usize], node: &TreeNode) -> Result<TreeNode, ReindexError> {
    check_levels(levels, node.level())?;
    let n = node.level();
    let mut digits = vec![0u64; levels[n]];
    for (i, &d) in node.digits().iter().enumerate() {
        digits[levels[i + 1] - 1] = d;
    }
    Ok(TreeNode::new(digits))
}

fn check_levels(levels: &[usize], height: usize) -> Result<(), ReindexError> {
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ReindexError::LevelsNotIncreasing);
    }
    if levels.len() <= height {
        return Err(ReindexError::LevelsTooShort { given: levels.len(), height });
    }
    Ok(())
}

/// `f_L` on a fragment, read as `s` on both sides.
pub fn level_restriction_map(levels: &[usize], source: TreeFragment) -> Result<IndexMap, ReindexError> {
    check_levels(levels, source.m)?;
    let pairs = source
        .nodes()
        .into_iter()
        .map(|n| {
            let img = restrict_to_levels(levels, &n)?;
            Ok((Index::Tree(n), Index::Tree(img)))
        })
        .collect::<Result<Vec<_>, ReindexError>>()?;
    IndexMap::new(Signature::S, Signature::S, pairs)
}

/// `i ↦ η ⌢ ⟨i⟩` for `i < count`. The linear order is the one-row array
/// `1 × count`, read in `ar`; the target is read in `s`.
pub fn path_map(node: &TreeNode, count: u64) -> IndexMap {
    IndexMap::new(
        Signature::Ar,
        Signature::S,
        (0..count).map(|i| (Index::Array(ArrayIndex::new(0, i)), Index::Tree(node.child(i)))),
    )
    .expect("kinds match by construction")
}

/// `f_k^m` on `k^{≤m}` together with `l_k^m`.
#[derive(Clone, Debug)]
pub struct Str0Embedding {
    pub k: u64,
    pub m: usize,
    pub map: IndexMap,
    /// `l_k^m = max { level(f_k^m(η)) + 1 : η ∈ k^{≤m} }`.
    pub length_bound: usize,
}

impl Str0Embedding {
    /// Deepest level reached by an image node, i.e. the least height a
    /// source fragment needs to contain the whole image.
    pub fn max_image_level(&self) -> usize {
        self.length_bound - 1
    }
}

/// `l_k^j` for `j = 0..=m`, computed from the images themselves.
fn str0_length_bounds(k: u64, m: usize) -> Vec<usize> {
    let mut bounds = Vec::with_capacity(m + 1);
    // f^0 is defined on the root only
    bounds.push(1);
    for j in 1..=m {
        let max_len = TreeFragment::new(k, j)
            .nodes()
            .iter()
            .map(|n| str0_image_at(&bounds, j, n).level())
            .max()
            .unwrap_or(0);
        bounds.push(max_len + 1);
    }
    bounds
}

/// `f_k^m(η)`; `bounds[j]` is `l_k^j` and must be known for `j < m`.
fn str0_image_at(bounds: &[usize], m: usize, node: &TreeNode) -> TreeNode {
    let digits = node.digits();
    if digits.is_empty() {
        return TreeNode::root();
    }
    let i = digits[0];
    let rest = TreeNode::new(digits[1..].to_vec());
    let pad = (i as usize + 1) * bounds[m - 1];
    let mut out = Vec::with_capacity(1 + pad);
    out.push(i);
    out.resize(1 + pad, 0);
    out.extend_from_slice(str0_image_at(bounds, m - 1, &rest).digits());
    TreeNode::new(out)
}

/// `f_k^m(η)` for a single node of `k^{≤m}`.
pub fn str0_image(k: u64, m: usize, node: &TreeNode) -> Result<TreeNode, ReindexError> {
    if k == 0 {
        return Err(ReindexError::ZeroBranching);
    }
    if !TreeFragment::new(k, m).contains(node) {
        return Err(ReindexError::NotInSource(node.to_string()));
    }
    let bounds = str0_length_bounds(k, m.saturating_sub(1));
    Ok(str0_image_at(&bounds, m, node))
}

pub fn str0_embedding(k: u64, m: usize) -> Result<Str0Embedding, ReindexError> {
    if k == 0 {
        return Err(ReindexError::ZeroBranching);
    }
    let bounds = str0_length_bounds(k, m);
    let nodes = TreeFragment::new(k, m).nodes();
    let pairs: Vec<_> = nodes
        .into_iter()
        .map(|n| {
            let img = str0_image_at(&bounds, m, &n);
            (Index::Tree(n), Index::Tree(img))
        })
        .collect();
    let map = IndexMap::new(Signature::Str0, Signature::Str0, pairs)?;
    Ok(Str0Embedding { k, m, map, length_bound: bounds[m] })
}

/// `η ↦ (level(η), lex rank of η among `nodes`)`, read as `str` into `ar`.
pub fn array_stretch_on(nodes: &[TreeNode]) -> Result<IndexMap, ReindexError> {
    let mut sorted: Vec<&TreeNode> = nodes.iter().collect();
    sorted.sort();
    sorted.dedup();
    let rank: HashMap<&TreeNode, u64> = sorted.iter().enumerate().map(|(r, n)| (*n, r as u64)).collect();
    IndexMap::new(
        Signature::Str,
        Signature::Ar,
        nodes
            .iter()
            .map(|n| (Index::Tree(n.clone()), Index::Array(ArrayIndex::new(n.level() as u64, rank[n])))),
    )
}

pub fn array_stretch_map(source: TreeFragment) -> IndexMap {
    array_stretch_on(&source.nodes()).expect("fragment nodes are distinct")
}

/// `g(i, j) = ⟨0⟩^{2i} ⌢ ⟨j + 1⟩`.
pub fn tree_into_array_g(i: u64, j: u64) -> TreeNode {
    let zeros = usize::try_from(2 * i).expect("row index too large for a node");
    let mut digits = vec![0u64; zeros];
    digits.push(j.checked_add(1).expect("column index overflows a digit"));
    TreeNode::new(digits)
}

/// `g` on an array fragment, read as `ar` into `str`.
pub fn array_to_tree_map(source: ArrayFragment) -> IndexMap {
    IndexMap::new(
        Signature::Ar,
        Signature::Str,
        source
            .indices()
            .into_iter()
            .map(|a| (Index::Array(a), Index::Tree(tree_into_array_g(a.row, a.col)))),
    )
    .expect("kinds match by construction")
}

/// The composite `f ∘ g` on an array fragment, with `f` the stretch map over
/// the image of `g`.
pub fn stretch_after_g(source: ArrayFragment) -> IndexMap {
    let g = array_to_tree_map(source);
    let image: Vec<TreeNode> = g.target().iter().map(|i| i.as_tree().unwrap().clone()).collect();
    let f = array_stretch_on(&image).expect("g is injective");
    f.compose_after(&g).expect("f covers the image of g")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RespectVerdict {
    Respecting,
    /// Two source tuples with equal source codes whose images have different
    /// target codes. `first` is the earliest tuple of that source code.
    Counterexample { first: Vec<Index>, second: Vec<Index> },
}

impl RespectVerdict {
    pub fn is_respecting(&self) -> bool {
        matches!(self, RespectVerdict::Respecting)
    }
}

/// Exhaustive check over all source tuples of arity `1..=max_arity`.
pub fn check_qftp_respecting(map: &IndexMap, max_arity: usize) -> RespectVerdict {
    let n = map.len();
    let mut seen: HashMap<QfTypeCode, (Vec<usize>, QfTypeCode)> = HashMap::new();
    let mut tuples = Tuples::new(n, 1, max_arity);
    let mut src = Vec::with_capacity(max_arity);
    let mut dst = Vec::with_capacity(max_arity);
    while let Some(t) = tuples.next_tuple() {
        src.clear();
        dst.clear();
        src.extend(t.iter().map(|&i| &map.source[i]));
        dst.extend(t.iter().map(|&i| &map.target[i]));
        let sc = qftp_code(&src, map.source_sig).expect("validated on construction");
        let tc = qftp_code(&dst, map.target_sig).expect("validated on construction");
        match seen.get(&sc) {
            Some((first, code)) if *code != tc => {
                return RespectVerdict::Counterexample {
                    first: first.iter().map(|&i| map.source[i].clone()).collect(),
                    second: src.iter().map(|&i| i.clone()).collect(),
                };
            }
            Some(_) => {}
            None => {
                seen.insert(sc, (t.to_vec(), tc));
            }
        }
    }
    RespectVerdict::Respecting
}

/// Injective map of `source` into `rows × cols` that preserves and reflects
/// `<_1` (read as `<_len` on nodes) and `<_2` (read as "same level and
/// `<_lex`"). Plain backtracking; the first map found in (source order,
/// row-major target order) is returned.
pub fn search_ar_embedding(source: &[TreeNode], rows: u64, cols: u64) -> Option<IndexMap> {
    let targets = ArrayFragment::new(rows, cols).indices();
    let lt1 = |a: &TreeNode, b: &TreeNode| a.len_less(b);
    let lt2 = |a: &TreeNode, b: &TreeNode| a.level() == b.level() && a.lex_less(b);

    fn go(
        source: &[TreeNode],
        targets: &[ArrayIndex],
        used: &mut Vec<bool>,
        assigned: &mut Vec<usize>,
        lt1: &dyn Fn(&TreeNode, &TreeNode) -> bool,
        lt2: &dyn Fn(&TreeNode, &TreeNode) -> bool,
    ) -> bool {
        let next = assigned.len();
        if next == source.len() {
            return true;
        }
        let x = &source[next];
        for (ti, t) in targets.iter().enumerate() {
            if used[ti] {
                continue;
            }
            let consistent = assigned.iter().enumerate().all(|(si, &tj)| {
                let (y, u) = (&source[si], &targets[tj]);
                t.lt1(u) == lt1(x, y) && u.lt1(t) == lt1(y, x) && t.lt2(u) == lt2(x, y) && u.lt2(t) == lt2(y, x)
            });
            if consistent {
                used[ti] = true;
                assigned.push(ti);
                if go(source, targets, used, assigned, lt1, lt2) {
                    return true;
                }
                assigned.pop();
                used[ti] = false;
            }
        }
        false
    }

    // a map that is not injective on the source cannot reflect anything
    let mut distinct = source.to_vec();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != source.len() {
        return None;
    }
    let mut used = vec![false; targets.len()];
    let mut assigned = Vec::with_capacity(source.len());
    if !go(source, &targets, &mut used, &mut assigned, &lt1, &lt2) {
        return None;
    }
    let pairs = source
        .iter()
        .zip(&assigned)
        .map(|(s, &t)| (Index::Tree(s.clone()), Index::Array(targets[t])));
    Some(IndexMap::new(Signature::Str, Signature::Ar, pairs).expect("kinds match by construction"))
}
