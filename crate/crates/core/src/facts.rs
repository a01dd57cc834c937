//! Exhaustive self-checks of the finite facts the constructions rely on.
//!
//! Each check enumerates a bounded instance and reports the number of cases
//! examined together with the first violation, if any.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::node::{ArrayFragment, ArrayIndex, Index, TreeFragment, TreeNode};
use crate::qftp::{array_code, is_meet_closed, levels, tree_code, QfTypeCode, Signature};
use crate::reindex::{search_ar_embedding, str0_embedding, stretch_after_g, tree_into_array_g};
use crate::tuples::Tuples;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactReport {
    pub name: &'static str,
    pub checked: usize,
    pub violation: Option<String>,
}

impl FactReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for FactReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => write!(f, "PASS  {:<28} {} cases", self.name, self.checked),
            Some(v) => write!(f, "FAIL  {:<28} {v}", self.name),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactBounds {
    pub fragment: TreeFragment,
    pub array: ArrayFragment,
    pub max_arity: usize,
}

impl Default for FactBounds {
    fn default() -> Self {
        FactBounds { fragment: TreeFragment::new(2, 2), array: ArrayFragment::new(4, 4), max_arity: 3 }
    }
}

fn report(name: &'static str, checked: usize, violation: Option<String>) -> FactReport {
    FactReport { name, checked, violation }
}

fn show(nodes: &[&TreeNode]) -> String {
    let parts: Vec<String> = nodes.iter().map(|n| n.to_string()).collect();
    format!("({})", parts.join(","))
}

/// On meet-closed tuples, the `s` code is determined by, and determines,
/// the `str` code together with the set of levels.
pub fn s_is_str_plus_levels(frag: TreeFragment, max_arity: usize) -> FactReport {
    const NAME: &str = "s = str + levels";
    let nodes = frag.nodes();
    let mut by_s: HashMap<QfTypeCode, (QfTypeCode, BTreeSet<usize>)> = HashMap::new();
    let mut by_str: HashMap<(QfTypeCode, BTreeSet<usize>), QfTypeCode> = HashMap::new();
    let mut checked = 0;
    let mut tuples = Tuples::new(nodes.len(), 1, max_arity);
    while let Some(t) = tuples.next_tuple() {
        let tuple: Vec<&TreeNode> = t.iter().map(|&p| &nodes[p]).collect();
        if !is_meet_closed(&tuple) {
            continue;
        }
        checked += 1;
        let s = tree_code(&tuple, Signature::S);
        let key = (tree_code(&tuple, Signature::Str), levels(&tuple));
        if by_s.entry(s.clone()).or_insert_with(|| key.clone()) != &key {
            return report(NAME, checked, Some(format!("s class of {} has two (str, levels) keys", show(&tuple))));
        }
        if by_str.entry(key).or_insert(s.clone()) != &s {
            return report(NAME, checked, Some(format!("(str, levels) class of {} has two s codes", show(&tuple))));
        }
    }
    report(NAME, checked, None)
}

/// `f_k^m` preserves and reflects `⊴`, `∧` and `<_lex`, and `<_lex` between
/// images implies `<_len`.
pub fn str0_embedding_property(frag: TreeFragment) -> FactReport {
    const NAME: &str = "str0 embedding property";
    let emb = match str0_embedding(frag.k, frag.m) {
        Ok(e) => e,
        Err(e) => return report(NAME, 0, Some(e.to_string())),
    };
    let image: HashMap<&TreeNode, &TreeNode> =
        emb.map.pairs().map(|(a, b)| (a.as_tree().expect("tree map"), b.as_tree().expect("tree map"))).collect();
    let mut checked = 0;
    for (&a, &fa) in &image {
        for (&b, &fb) in &image {
            checked += 1;
            let ok = a.is_initial_segment_of(b) == fa.is_initial_segment_of(fb)
                && image.get(&a.meet(b)).is_some_and(|m| **m == fa.meet(fb))
                && a.lex_less(b) == fa.lex_less(fb)
                && (!fa.lex_less(fb) || fa.len_less(fb));
            if !ok {
                return report(NAME, checked, Some(format!("pair {a}, {b}")));
            }
        }
    }
    report(NAME, checked, None)
}

/// The five order bullets for `f ∘ g` on an array fragment, and equality of
/// `ar` codes between tuples and their images.
pub fn array_composite_bullets(array: ArrayFragment, max_arity: usize) -> FactReport {
    const NAME: &str = "array composite bullets";
    let fg = stretch_after_g(array);
    let cells = array.indices();
    let img = |a: &ArrayIndex| *fg.apply(&Index::Array(*a)).and_then(Index::as_array).expect("total on the fragment");
    let mut checked = 0;
    for a in &cells {
        for b in &cells {
            checked += 1;
            let (fa, fb) = (img(a), img(b));
            let (ga, gb) = (tree_into_array_g(a.row, a.col), tree_into_array_g(b.row, b.col));
            let bullets = [
                (a == b) == (fa == fb),
                !a.lt1(b) || (ga.len_less(&gb) && fa.lt1(&fb)),
                !fa.lt1(&fb) || a.lt1(b),
                !a.lt2(b) || (ga.level() == gb.level() && ga.lex_less(&gb) && fa.lt2(&fb)),
                !fa.lt2(&fb) || a.lt2(b),
            ];
            if let Some(n) = bullets.iter().position(|ok| !ok) {
                return report(NAME, checked, Some(format!("bullet {} fails on {a}, {b}", n + 1)));
            }
        }
    }
    let mut tuples = Tuples::new(cells.len(), 1, max_arity);
    while let Some(t) = tuples.next_tuple() {
        checked += 1;
        let src: Vec<ArrayIndex> = t.iter().map(|&p| cells[p]).collect();
        let dst: Vec<ArrayIndex> = src.iter().map(img).collect();
        if array_code(&src) != array_code(&dst) {
            let parts: Vec<String> = src.iter().map(|a| a.to_string()).collect();
            return report(NAME, checked, Some(format!("({}) changes its ar type", parts.join(","))));
        }
    }
    report(NAME, checked, None)
}

/// A level of `cols + 1` siblings under `<0>` plus `<1,0>` does not embed into
/// `rows × cols`, while a comparable pair does.
pub fn ar_non_embedding(array: ArrayFragment) -> FactReport {
    const NAME: &str = "ar non-embedding";
    let mut source: Vec<TreeNode> = (0..=array.cols).map(|i| TreeNode::new(vec![0, i])).collect();
    source.push(TreeNode::new(vec![1, 0]));
    if let Some(m) = search_ar_embedding(&source, array.rows, array.cols) {
        return report(NAME, 1, Some(format!("unexpected embedding {m}")));
    }
    let pair = [TreeNode::new(vec![0]), TreeNode::new(vec![0, 0])];
    if array.rows >= 2 && search_ar_embedding(&pair, array.rows, array.cols).is_none() {
        return report(NAME, 2, Some("no embedding of the comparable pair <0>, <0,0>".into()));
    }
    report(NAME, 2, None)
}

pub fn all_facts(b: &FactBounds) -> Vec<FactReport> {
    vec![
        s_is_str_plus_levels(b.fragment, b.max_arity.max(1)),
        str0_embedding_property(b.fragment),
        array_composite_bullets(b.array, b.max_arity),
        ar_non_embedding(b.array),
    ]
}
