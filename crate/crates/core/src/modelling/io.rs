//! JSON file format for a structure together with an indexed family.
//!
//! ```json
//! {
//!   "version": 1,
//!   "structure": {
//!     "universe": [0, 1, 2],
//!     "relations": [{ "name": "P", "arity": 1, "tuples": [[0], [2]] }]
//!   },
//!   "family": {
//!     "fragment": { "kind": "tree", "k": 2, "m": 1 },
//!     "entries": [{ "index": "<>", "tuple": [0] }, { "index": "<0>", "tuple": [1] }],
//!     "params": []
//!   }
//! }
//! ```
//!
//! `fragment` is `{"kind": "tree", "k", "m"}`, `{"kind": "array", "rows",
//! "cols"}` or `{"kind": "list"}`. Indices use the node literal syntax
//! (`<0,1>`, `(2,3)`).

use serde::{Deserialize, Serialize};

use crate::error::ModellingError;
use crate::node::{ArrayFragment, Index, IndexKind, TreeFragment};

use super::family::{FragmentDesc, IndexedFamily};
use super::structure::{Elem, FiniteStructure, Relation};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub name: String,
    pub arity: usize,
    pub tuples: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureJson {
    pub universe: Vec<Elem>,
    #[serde(default)]
    pub relations: Vec<RelationJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FragmentJson {
    Tree { k: u64, m: usize },
    Array { rows: u64, cols: u64 },
    List,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub index: Index,
    pub tuple: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub fragment: FragmentJson,
    pub entries: Vec<EntryJson>,
    #[serde(default)]
    pub params: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub version: u32,
    pub structure: StructureJson,
    pub family: FamilyJson,
}

impl From<&FiniteStructure> for StructureJson {
    fn from(s: &FiniteStructure) -> Self {
        StructureJson {
            universe: s.universe().to_vec(),
            relations: s
                .relations()
                .iter()
                .map(|r| RelationJson { name: r.name.clone(), arity: r.arity, tuples: r.tuples.iter().cloned().collect() })
                .collect(),
        }
    }
}

impl StructureJson {
    pub fn build(&self) -> Result<FiniteStructure, ModellingError> {
        FiniteStructure::new(
            self.universe.clone(),
            self.relations.iter().map(|r| Relation::new(r.name.clone(), r.arity, r.tuples.iter().cloned())).collect(),
        )
    }
}

impl From<&IndexedFamily> for FamilyJson {
    fn from(f: &IndexedFamily) -> Self {
        FamilyJson {
            fragment: match f.desc() {
                FragmentDesc::Tree(t) => FragmentJson::Tree { k: t.k, m: t.m },
                FragmentDesc::Array(a) => FragmentJson::Array { rows: a.rows, cols: a.cols },
                FragmentDesc::List(_) => FragmentJson::List,
            },
            entries: f.entries().map(|(i, t)| EntryJson { index: i.clone(), tuple: t.to_vec() }).collect(),
            params: f.params().to_vec(),
        }
    }
}

impl FamilyJson {
    pub fn build(&self) -> Result<IndexedFamily, ModellingError> {
        let desc = match self.fragment {
            FragmentJson::Tree { k, m } => {
                if k == 0 {
                    return Err(ModellingError::FragmentMismatch("tree branching must be at least 1".into()));
                }
                FragmentDesc::Tree(TreeFragment::new(k, m))
            }
            FragmentJson::Array { rows, cols } => FragmentDesc::Array(ArrayFragment::new(rows, cols)),
            FragmentJson::List => FragmentDesc::List(self.entries.first().map_or(IndexKind::Tree, |e| e.index.kind())),
        };
        let entries = self.entries.iter().map(|e| (e.index.clone(), e.tuple.clone())).collect();
        IndexedFamily::from_entries(desc, entries, self.params.clone())
    }
}

impl FamilyFile {
    pub fn new(s: &FiniteStructure, f: &IndexedFamily) -> Self {
        FamilyFile { version: FORMAT_VERSION, structure: s.into(), family: f.into() }
    }

    /// Structure and family, validated against each other.
    pub fn build(&self) -> Result<(FiniteStructure, IndexedFamily), ModellingError> {
        if self.version != FORMAT_VERSION {
            return Err(ModellingError::FragmentMismatch(format!("unsupported format version {}", self.version)));
        }
        let s = self.structure.build()?;
        let f = self.family.build()?;
        f.check_in(&s)?;
        Ok((s, f))
    }
}
