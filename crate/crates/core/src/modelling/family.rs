//! Families of tuples indexed by a tree or array fragment.

use std::collections::HashMap;
use std::fmt;

use crate::error::ModellingError;
use crate::node::{ArrayFragment, Fragment, Index, IndexKind, TreeFragment};
use crate::reindex::IndexMap;

use super::structure::{Elem, FiniteStructure};

/// What a family is indexed by. `List` is an arbitrary finite index set of
/// one kind, kept in the order given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FragmentDesc {
    Tree(TreeFragment),
    Array(ArrayFragment),
    List(IndexKind),
}

impl FragmentDesc {
    pub fn kind(&self) -> IndexKind {
        match self {
            FragmentDesc::Tree(_) => IndexKind::Tree,
            FragmentDesc::Array(_) => IndexKind::Array,
            FragmentDesc::List(k) => *k,
        }
    }

    pub fn fragment(&self) -> Option<Fragment> {
        match self {
            FragmentDesc::Tree(t) => Some(Fragment::Tree(*t)),
            FragmentDesc::Array(a) => Some(Fragment::Array(*a)),
            FragmentDesc::List(_) => None,
        }
    }
}

impl From<Fragment> for FragmentDesc {
    fn from(f: Fragment) -> Self {
        match f {
            Fragment::Tree(t) => FragmentDesc::Tree(t),
            Fragment::Array(a) => FragmentDesc::Array(a),
        }
    }
}

impl fmt::Display for FragmentDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FragmentDesc::Tree(t) => write!(f, "tree {}^<={}", t.k, t.m),
            FragmentDesc::Array(a) => write!(f, "array {}x{}", a.rows, a.cols),
            FragmentDesc::List(k) => write!(f, "{k} list"),
        }
    }
}

/// `(a_i)_{i ∈ I}` together with the parameter list `C`. All tuples have the
/// same width. For a fragment descriptor, indices are stored in the
/// fragment's enumeration order.
#[derive(Clone, Debug)]
pub struct IndexedFamily {
    desc: FragmentDesc,
    indices: Vec<Index>,
    tuples: Vec<Vec<Elem>>,
    params: Vec<Elem>,
    width: usize,
    lookup: HashMap<Index, usize>,
}

impl PartialEq for IndexedFamily {
    fn eq(&self, other: &Self) -> bool {
        self.desc == other.desc
            && self.indices == other.indices
            && self.tuples == other.tuples
            && self.params == other.params
    }
}

impl IndexedFamily {
    pub fn from_entries(
        desc: FragmentDesc,
        entries: Vec<(Index, Vec<Elem>)>,
        params: Vec<Elem>,
    ) -> Result<Self, ModellingError> {
        let width = entries.first().map_or(0, |(_, t)| t.len());
        let mut lookup = HashMap::with_capacity(entries.len());
        for (pos, (idx, t)) in entries.iter().enumerate() {
            if idx.kind() != desc.kind() {
                return Err(ModellingError::FragmentMismatch(format!("{idx} is not a {} index", desc.kind())));
            }
            if t.len() != width {
                return Err(ModellingError::RaggedFamily { expected: width, found: t.len() });
            }
            if lookup.insert(idx.clone(), pos).is_some() {
                return Err(ModellingError::DuplicateIndex(idx.to_string()));
            }
        }
        let (indices, tuples): (Vec<Index>, Vec<Vec<Elem>>) = match desc.fragment() {
            None => entries.into_iter().unzip(),
            Some(frag) => {
                let order = frag.enumerate();
                if order.len() != entries.len() {
                    return Err(ModellingError::FragmentMismatch(format!(
                        "{desc} has {} indices, table has {}",
                        order.len(),
                        entries.len()
                    )));
                }
                let mut slots: Vec<Option<Vec<Elem>>> = entries.into_iter().map(|(_, t)| Some(t)).collect();
                let mut tuples = Vec::with_capacity(order.len());
                for idx in &order {
                    let pos = lookup.get(idx).ok_or_else(|| ModellingError::MissingIndex(idx.to_string()))?;
                    tuples.push(slots[*pos].take().expect("positions are distinct"));
                }
                lookup = order.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
                (order, tuples)
            }
        };
        Ok(IndexedFamily { desc, indices, tuples, params, width, lookup })
    }

    /// Family over a whole fragment, built index by index.
    pub fn over_fragment(
        fragment: Fragment,
        params: Vec<Elem>,
        mut f: impl FnMut(&Index) -> Vec<Elem>,
    ) -> Result<Self, ModellingError> {
        let entries = fragment.enumerate().into_iter().map(|i| {
            let t = f(&i);
            (i, t)
        });
        IndexedFamily::from_entries(fragment.into(), entries.collect(), params)
    }

    pub fn constant(fragment: Fragment, tuple: Vec<Elem>, params: Vec<Elem>) -> Result<Self, ModellingError> {
        IndexedFamily::over_fragment(fragment, params, |_| tuple.clone())
    }

    /// The sequence `a_0, …, a_{n-1}` as a family over the `1 × n` array.
    pub fn sequence(tuples: Vec<Vec<Elem>>, params: Vec<Elem>) -> Result<Self, ModellingError> {
        let frag = Fragment::Array(ArrayFragment::new(1, tuples.len() as u64));
        let entries = frag.enumerate().into_iter().zip(tuples).collect();
        IndexedFamily::from_entries(frag.into(), entries, params)
    }

    pub fn desc(&self) -> FragmentDesc {
        self.desc
    }

    pub fn kind(&self) -> IndexKind {
        self.desc.kind()
    }

    pub fn indices(&self) -> &[Index] {
        &self.indices
    }

    pub fn tuples(&self) -> &[Vec<Elem>] {
        &self.tuples
    }

    pub fn tuple(&self, pos: usize) -> &[Elem] {
        &self.tuples[pos]
    }

    pub fn get(&self, idx: &Index) -> Option<&[Elem]> {
        self.lookup.get(idx).map(|&p| self.tuples[p].as_slice())
    }

    pub fn position(&self, idx: &Index) -> Option<usize> {
        self.lookup.get(idx).copied()
    }

    pub fn params(&self) -> &[Elem] {
        &self.params
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Index, &[Elem])> {
        self.indices.iter().zip(self.tuples.iter().map(|t| t.as_slice()))
    }

    pub fn check_in(&self, s: &FiniteStructure) -> Result<(), ModellingError> {
        s.check_elements(self.tuples.iter().flatten().chain(&self.params))
    }

    pub fn index_tuple(&self, positions: &[usize]) -> Vec<Index> {
        positions.iter().map(|&p| self.indices[p].clone()).collect()
    }

    /// `a_{i_0} ⌢ a_{i_1} ⌢ …` for the given positions.
    pub fn concat_into(&self, positions: &[usize], buf: &mut Vec<Elem>) {
        buf.clear();
        for &p in positions {
            buf.extend_from_slice(&self.tuples[p]);
        }
    }

    pub fn with_params(mut self, params: Vec<Elem>) -> Self {
        self.params = params;
        self
    }

    /// `b_i = a_{M(i)}` over the source of `map`, listed in the map's order.
    pub fn pullback(&self, map: &IndexMap) -> Result<IndexedFamily, ModellingError> {
        let entries = map
            .pairs()
            .map(|(s, t)| {
                self.get(t)
                    .map(|tuple| (s.clone(), tuple.to_vec()))
                    .ok_or_else(|| ModellingError::MissingIndex(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        IndexedFamily::from_entries(
            FragmentDesc::List(map.source_sig().index_kind()),
            entries,
            self.params.clone(),
        )
    }

    /// Same table under another descriptor (reordered to its enumeration).
    pub fn relabel(&self, desc: FragmentDesc) -> Result<IndexedFamily, ModellingError> {
        let entries = self.indices.iter().cloned().zip(self.tuples.iter().cloned()).collect();
        IndexedFamily::from_entries(desc, entries, self.params.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::node::{ArrayIndex, TreeNode};

    #[test]
    fn entries_are_reordered_to_the_fragment() {
        let frag = TreeFragment::new(2, 1);
        let entries = vec![
            (Index::Tree(TreeNode::from([1])), vec![2]),
            (Index::Tree(TreeNode::root()), vec![0]),
            (Index::Tree(TreeNode::from([0])), vec![1]),
        ];
        let fam = IndexedFamily::from_entries(FragmentDesc::Tree(frag), entries, vec![]).unwrap();
        assert_eq!(fam.tuples(), &[vec![0], vec![1], vec![2]]);
        assert_eq!(fam.get(&Index::Tree(TreeNode::from([1]))), Some(&[2][..]));
    }

    #[test]
    fn validation() {
        let a = |r, c| Index::Array(ArrayIndex::new(r, c));
        let desc = FragmentDesc::List(IndexKind::Array);
        let ragged = IndexedFamily::from_entries(desc, vec![(a(0, 0), vec![1]), (a(0, 1), vec![1, 2])], vec![]);
        assert_eq!(ragged, Err(ModellingError::RaggedFamily { expected: 1, found: 2 }));
        let dup = IndexedFamily::from_entries(desc, vec![(a(0, 0), vec![1]), (a(0, 0), vec![1])], vec![]);
        assert!(matches!(dup, Err(ModellingError::DuplicateIndex(_))));
        let short = IndexedFamily::from_entries(
            FragmentDesc::Array(ArrayFragment::new(1, 2)),
            vec![(a(0, 0), vec![1])],
            vec![],
        );
        assert!(matches!(short, Err(ModellingError::FragmentMismatch(_))));
        let wrong = IndexedFamily::from_entries(
            FragmentDesc::Array(ArrayFragment::new(1, 1)),
            vec![(a(3, 3), vec![1])],
            vec![],
        );
        assert!(matches!(wrong, Err(ModellingError::MissingIndex(_))));
    }

    #[test]
    fn pullback_along_a_map() {
        let fam = IndexedFamily::sequence(vec![vec![10], vec![11], vec![12]], vec![]).unwrap();
        let map = crate::reindex::path_map(&TreeNode::root(), 3);
        // path_map reads an array row into a tree; pull a tree family back instead
        let tree_fam = IndexedFamily::over_fragment(Fragment::Tree(TreeFragment::new(3, 1)), vec![], |i| {
            vec![i.as_tree().unwrap().level() as u32]
        })
        .unwrap();
        let pulled = tree_fam.pullback(&map).unwrap();
        assert_eq!(pulled.tuples(), &[vec![1], vec![1], vec![1]]);
        assert!(fam.pullback(&map).is_err());
    }
}
