//! Index algebra: tree nodes of `ω^<ω`, array indices of `ω × ω`, and the
//! finite fragments `k^{≤m}` and `R × C` that stand in for them.
//!
//! Node literals are written `<>` for the root and `<0,1,3>` otherwise; array
//! indices are written `(i,j)`. Both forms round-trip through `Display` and
//! `FromStr`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// A node of `ω^<ω`: a finite sequence of naturals.
///
/// `Ord` is the lexicographic order `<_lex` (a proper initial segment comes
/// first), which is also what `Vec<u64>` compares by.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeNode(Vec<u64>);

impl TreeNode {
    pub fn root() -> Self {
        TreeNode(Vec::new())
    }

    pub fn new(digits: Vec<u64>) -> Self {
        TreeNode(digits)
    }

    pub fn digits(&self) -> &[u64] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// `self ⊴ other`: self is an initial segment of other.
    pub fn is_initial_segment_of(&self, other: &TreeNode) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Longest common prefix.
    pub fn meet(&self, other: &TreeNode) -> TreeNode {
        let n = self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count();
        TreeNode(self.0[..n].to_vec())
    }

    /// Level of the meet, without allocating it.
    pub fn meet_level(&self, other: &TreeNode) -> usize {
        self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count()
    }

    pub fn lex_less(&self, other: &TreeNode) -> bool {
        let n = self.meet_level(other);
        match (self.0.get(n), other.0.get(n)) {
            // self is a proper initial segment of other
            (None, Some(_)) => true,
            (Some(a), Some(b)) => a < b,
            _ => false,
        }
    }

    pub fn len_less(&self, other: &TreeNode) -> bool {
        self.level() < other.level()
    }

    pub fn concat(&self, other: &TreeNode) -> TreeNode {
        let mut digits = Vec::with_capacity(self.0.len() + other.0.len());
        digits.extend_from_slice(&self.0);
        digits.extend_from_slice(&other.0);
        TreeNode(digits)
    }

    /// `self` concatenated with itself `n` times; `power(_, 0)` is the root.
    pub fn power(&self, n: usize) -> TreeNode {
        TreeNode(self.0.repeat(n))
    }

    /// `self ⌢ ⟨digit⟩`.
    pub fn child(&self, digit: u64) -> TreeNode {
        let mut digits = self.0.clone();
        digits.push(digit);
        TreeNode(digits)
    }

    /// Key for the (level, lex) enumeration order of fragments.
    pub fn level_lex_cmp(&self, other: &TreeNode) -> Ordering {
        self.level().cmp(&other.level()).then_with(|| self.cmp(other))
    }
}

impl From<Vec<u64>> for TreeNode {
    fn from(digits: Vec<u64>) -> Self {
        TreeNode(digits)
    }
}

impl<const N: usize> From<[u64; N]> for TreeNode {
    fn from(digits: [u64; N]) -> Self {
        TreeNode(digits.to_vec())
    }
}

/// Meet of a nonempty set of nodes. `None` on empty input.
pub fn meet_all<'a, I>(nodes: I) -> Option<TreeNode>
where
    I: IntoIterator<Item = &'a TreeNode>,
{
    let mut it = nodes.into_iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, n| acc.meet(n)))
}

impl fmt::Display for TreeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(">")
    }
}

fn parse_naturals(body: &str, literal: &str) -> Result<Vec<u64>, ParseError> {
    let body = body.trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|e| ParseError::new(literal, format!("bad natural `{}`: {e}", part.trim())))
        })
        .collect()
}

impl FromStr for TreeNode {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let body = t
            .strip_prefix('<')
            .and_then(|r| r.strip_suffix('>'))
            .ok_or_else(|| ParseError::new(s, "node literal must look like `<>` or `<0,1>`"))?;
        parse_naturals(body, s).map(TreeNode)
    }
}

/// A position `(row, col)` of `ω × ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrayIndex {
    pub row: u64,
    pub col: u64,
}

impl ArrayIndex {
    pub fn new(row: u64, col: u64) -> Self {
        ArrayIndex { row, col }
    }

    /// `<_1`: strictly earlier row.
    pub fn lt1(&self, other: &ArrayIndex) -> bool {
        self.row < other.row
    }

    /// `<_2`: same row, strictly earlier column.
    pub fn lt2(&self, other: &ArrayIndex) -> bool {
        self.row == other.row && self.col < other.col
    }
}

impl fmt::Display for ArrayIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl FromStr for ArrayIndex {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let body = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| ParseError::new(s, "array index literal must look like `(i,j)`"))?;
        match parse_naturals(body, s)?.as_slice() {
            [row, col] => Ok(ArrayIndex::new(*row, *col)),
            _ => Err(ParseError::new(s, "array index needs exactly two coordinates")),
        }
    }
}

/// An element of either kind of index structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    Tree(TreeNode),
    Array(ArrayIndex),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IndexKind {
    Tree,
    Array,
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexKind::Tree => "tree",
            IndexKind::Array => "array",
        })
    }
}

impl Index {
    pub fn kind(&self) -> IndexKind {
        match self {
            Index::Tree(_) => IndexKind::Tree,
            Index::Array(_) => IndexKind::Array,
        }
    }

    pub fn as_tree(&self) -> Option<&TreeNode> {
        match self {
            Index::Tree(n) => Some(n),
            Index::Array(_) => None,
        }
    }

    pub fn as_array(&self) -> Option<&ArrayIndex> {
        match self {
            Index::Array(a) => Some(a),
            Index::Tree(_) => None,
        }
    }
}

impl From<TreeNode> for Index {
    fn from(n: TreeNode) -> Self {
        Index::Tree(n)
    }
}

impl From<ArrayIndex> for Index {
    fn from(a: ArrayIndex) -> Self {
        Index::Array(a)
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Tree(n) => n.fmt(f),
            Index::Array(a) => a.fmt(f),
        }
    }
}

impl FromStr for Index {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.starts_with('<') {
            t.parse().map(Index::Tree)
        } else if t.starts_with('(') {
            t.parse().map(Index::Array)
        } else {
            Err(ParseError::new(s, "expected a node `<..>` or an array index `(i,j)`"))
        }
    }
}

impl Serialize for Index {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Index {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parse a parenthesised tuple of index literals, e.g. `(<0>,<1,2>)` or
/// `((0,1),(2,3))`. The empty tuple is `()`.
pub fn parse_index_tuple(s: &str) -> Result<Vec<Index>, ParseError> {
    let t = s.trim();
    let body = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| ParseError::new(s, "tuple literal must be parenthesised"))?;
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, ch) in body.char_indices() {
        match ch {
            '<' | '(' => depth += 1,
            '>' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(body[start..i].parse()?);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(ParseError::new(s, "unbalanced brackets"));
        }
    }
    if depth != 0 {
        return Err(ParseError::new(s, "unbalanced brackets"));
    }
    // an empty tail is a trailing comma, as in `(<0>,)`
    let last = body[start..].trim();
    if !last.is_empty() {
        out.push(last.parse()?);
    }
    Ok(out)
}

/// `k^{≤m}`: all nodes with digits below `k` and level at most `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeFragment {
    pub k: u64,
    pub m: usize,
}

impl TreeFragment {
    pub fn new(k: u64, m: usize) -> Self {
        assert!(k >= 1, "branching must be at least 1");
        TreeFragment { k, m }
    }

    pub fn len(&self) -> usize {
        (0..=self.m).map(|l| (self.k as usize).pow(l as u32)).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, node: &TreeNode) -> bool {
        node.level() <= self.m && node.digits().iter().all(|&d| d < self.k)
    }

    /// Nodes by level, then lex.
    pub fn nodes(&self) -> Vec<TreeNode> {
        let mut out = Vec::with_capacity(self.len());
        let mut layer = vec![TreeNode::root()];
        for level in 0..=self.m {
            if level > 0 {
                layer = layer.iter().flat_map(|n| (0..self.k).map(move |d| n.child(d))).collect();
            }
            out.extend(layer.iter().cloned());
        }
        out
    }

    /// Nodes of exactly one level, in lex order.
    pub fn level_nodes(&self, level: usize) -> Vec<TreeNode> {
        let mut layer = vec![TreeNode::root()];
        for _ in 0..level {
            layer = layer.iter().flat_map(|n| (0..self.k).map(move |d| n.child(d))).collect();
        }
        layer
    }
}

/// `R × C` with the array relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArrayFragment {
    pub rows: u64,
    pub cols: u64,
}

impl ArrayFragment {
    pub fn new(rows: u64, cols: u64) -> Self {
        ArrayFragment { rows, cols }
    }

    pub fn len(&self) -> usize {
        (self.rows * self.cols) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, idx: &ArrayIndex) -> bool {
        idx.row < self.rows && idx.col < self.cols
    }

    /// Row-major.
    pub fn indices(&self) -> Vec<ArrayIndex> {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| ArrayIndex::new(r, c)))
            .collect()
    }
}

/// Either kind of fragment, enumerated in the contract order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fragment {
    Tree(TreeFragment),
    Array(ArrayFragment),
}

impl Fragment {
    pub fn enumerate(&self) -> Vec<Index> {
        match self {
            Fragment::Tree(t) => t.nodes().into_iter().map(Index::Tree).collect(),
            Fragment::Array(a) => a.indices().into_iter().map(Index::Array).collect(),
        }
    }

    pub fn kind(&self) -> IndexKind {
        match self {
            Fragment::Tree(_) => IndexKind::Tree,
            Fragment::Array(_) => IndexKind::Array,
        }
    }
}
