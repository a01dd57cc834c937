//! Finite Ramsey searches producing indiscernible subfamilies, and the
//! row/column decomposition of array indiscernibility.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::ModellingError;
use crate::node::{ArrayFragment, ArrayIndex, Fragment, Index, TreeFragment, TreeNode};
use crate::qftp::{array_code, levels, tree_code, QfTypeCode, Signature};
use crate::reindex::str0_embedding;
use crate::tuples::{least_subset, Tuples};

use super::family::{FragmentDesc, IndexedFamily};
use super::indiscernible::{is_indiscernible, IndiscernibleVerdict};
use super::structure::{AtomicType, Elem, FiniteStructure};

type Colors = HashMap<QfTypeCode, AtomicType>;

/// Record `ty` as the color of `code`; false if the code already has another.
fn agree(colors: &mut Colors, code: QfTypeCode, ty: AtomicType) -> bool {
    match colors.get(&code) {
        Some(prev) => *prev == ty,
        None => {
            colors.insert(code, ty);
            true
        }
    }
}

/// Lex-least `h`-subset of `0..n` whose members, read as a sequence of
/// tuples `elems(i)`, are indiscernible over `params` up to arity `t`.
fn select_sequence<'a>(
    s: &FiniteStructure,
    n: usize,
    h: usize,
    t: usize,
    params: &[Elem],
    elems: impl Fn(usize) -> &'a [Elem],
) -> Option<Vec<usize>> {
    least_subset(n, h, Colors::new(), |colors, chosen, next| {
        let mut colors = colors.clone();
        let mut set = chosen.to_vec();
        set.push(next);
        let last = set.len() - 1;
        let mut tuples = Tuples::new(set.len(), 1, t);
        let mut buf = Vec::new();
        while let Some(tup) = tuples.next_tuple() {
            if !tup.contains(&last) {
                continue;
            }
            let idx: Vec<ArrayIndex> = tup.iter().map(|&p| ArrayIndex::new(0, set[p] as u64)).collect();
            buf.clear();
            for &p in tup {
                buf.extend_from_slice(elems(set[p]));
            }
            if !agree(&mut colors, array_code(&idx), s.atomic_type_unchecked(&buf, params)) {
                return None;
            }
        }
        Some(colors)
    })
}

fn wrong_fragment(expected: &str, fam: &IndexedFamily) -> ModellingError {
    ModellingError::WrongFragment { expected: expected.to_string(), found: fam.desc().to_string() }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceExtraction {
    /// Chosen columns of the input, increasing.
    pub selection: Vec<usize>,
    /// The chosen tuples as a family over `1 × h`.
    pub family: IndexedFamily,
}

/// Lex-least `h` columns of a `1 × N` family forming a sequence
/// indiscernible over `C` for every arity up to `t`.
pub fn extract_indiscernible_sequence(
    s: &FiniteStructure,
    fam: &IndexedFamily,
    t: usize,
    h: usize,
) -> Result<SequenceExtraction, ModellingError> {
    let n = match fam.desc() {
        FragmentDesc::Array(ArrayFragment { rows: 1, cols }) => cols as usize,
        _ => return Err(wrong_fragment("a 1xN array", fam)),
    };
    fam.check_in(s)?;
    let selection = select_sequence(s, n, h, t, fam.params(), |i| fam.tuple(i))
        .ok_or(ModellingError::InsufficientLength { target: h, available: n })?;
    let family = IndexedFamily::sequence(selection.iter().map(|&i| fam.tuple(i).to_vec()).collect(), fam.params().to_vec())?;
    Ok(SequenceExtraction { selection, family })
}

/// The coloring `E ↦ tp(a_{η̄_E}/C)` of `n`-element level sets, where
/// `η̄_E` is the first tuple (in fragment enumeration order) with the target
/// code whose level set is `E`. Sets without such a tuple are uncolored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelColoring {
    pub n: usize,
    pub colors: BTreeMap<Vec<usize>, Option<AtomicType>>,
    pub representatives: BTreeMap<Vec<usize>, Vec<TreeNode>>,
}

impl LevelColoring {
    /// True when every `n`-subset of `levels` is colored, all alike.
    pub fn is_constant_on(&self, levels: &[usize]) -> bool {
        let mut common: Option<&AtomicType> = None;
        for sub in subsets(levels, self.n) {
            match self.colors.get(&sub).and_then(|c| c.as_ref()) {
                None => return false,
                Some(c) if common.is_some_and(|p| p != c) => return false,
                Some(c) => common = Some(c),
            }
        }
        true
    }
}

fn subsets(items: &[usize], n: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, n, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, n, 0, &mut Vec::with_capacity(n), &mut out);
    out
}

fn tree_fragment_of(fam: &IndexedFamily) -> Result<TreeFragment, ModellingError> {
    match fam.desc() {
        FragmentDesc::Tree(t) => Ok(t),
        _ => Err(wrong_fragment("a tree fragment", fam)),
    }
}

/// Builds the level coloring for a meet-closed `str` code. The family must
/// be `s`-indiscernible at the code's arity, which makes the color
/// independent of the representative.
pub fn level_coloring(
    s: &FiniteStructure,
    fam: &IndexedFamily,
    code: &QfTypeCode,
) -> Result<LevelColoring, ModellingError> {
    let frag = tree_fragment_of(fam)?;
    if code.signature() != Signature::Str || !code.is_meet_closed() {
        return Err(ModellingError::NotMeetClosedCode(code.to_hex()));
    }
    let n = code.level_count().expect("str codes carry levels");
    let arity = code.arity();
    if !is_indiscernible(s, fam, Signature::S, arity)?.holds() {
        return Err(ModellingError::NotIndiscernible(Signature::S));
    }
    let all_levels: Vec<usize> = (0..=frag.m).collect();
    let mut colors = BTreeMap::new();
    let mut representatives = BTreeMap::new();
    for e in subsets(&all_levels, n) {
        let candidates: Vec<&TreeNode> = fam
            .indices()
            .iter()
            .filter_map(|i| i.as_tree())
            .filter(|node| e.contains(&node.level()))
            .collect();
        let mut found = None;
        let mut tuples = Tuples::new(candidates.len(), arity, arity);
        let mut tup: Vec<&TreeNode> = Vec::with_capacity(arity);
        while let Some(t) = tuples.next_tuple() {
            tup.clear();
            tup.extend(t.iter().map(|&p| candidates[p]));
            if levels(&tup).into_iter().eq(e.iter().copied()) && tree_code(&tup, Signature::Str) == *code {
                found = Some(tup.iter().map(|&n| n.clone()).collect::<Vec<TreeNode>>());
                break;
            }
        }
        let color = found.as_ref().map(|rep| {
            let mut elems = Vec::new();
            for node in rep {
                elems.extend_from_slice(fam.get(&Index::Tree(node.clone())).expect("candidate from family"));
            }
            s.atomic_type_unchecked(&elems, fam.params())
        });
        if let Some(rep) = found {
            representatives.insert(e.clone(), rep);
        }
        colors.insert(e, color);
    }
    Ok(LevelColoring { n, colors, representatives })
}

/// Lex-least `h` levels on which the level coloring of `code` is constant.
pub fn homogenize_levels(
    s: &FiniteStructure,
    fam: &IndexedFamily,
    code: &QfTypeCode,
    h: usize,
) -> Result<Vec<usize>, ModellingError> {
    let coloring = level_coloring(s, fam, code)?;
    let height = tree_fragment_of(fam)?.m + 1;
    least_subset(height, h, (), |_, chosen, next| {
        let mut set = chosen.to_vec();
        set.push(next);
        coloring.is_constant_on(&set).then_some(())
    })
    .ok_or(ModellingError::InsufficientHeight { target: h, available: height })
}

/// `b_η = a_{f_k^m(η)}` over `k^{≤m}`, from a `str`-indiscernible family on
/// a large enough tree fragment.
pub fn extract_str0_from_str(
    s: &FiniteStructure,
    fam: &IndexedFamily,
    k: u64,
    m: usize,
    max_arity: usize,
) -> Result<IndexedFamily, ModellingError> {
    let source = tree_fragment_of(fam)?;
    let emb = str0_embedding(k, m)?;
    let need = emb.max_image_level();
    if source.m < need || (m > 0 && source.k < k) {
        return Err(ModellingError::FragmentTooSmall { branching: k, height: need });
    }
    if !is_indiscernible(s, fam, Signature::Str, max_arity)?.holds() {
        return Err(ModellingError::NotIndiscernible(Signature::Str));
    }
    fam.pullback(&emb.map)?.relabel(FragmentDesc::Tree(TreeFragment::new(k, m)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArrayExtraction {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// `b_{i,j} = a_{rows[i], cols[j]}` over `r × c`.
    pub family: IndexedFamily,
}

fn array_shape(fam: &IndexedFamily) -> Result<ArrayFragment, ModellingError> {
    match fam.desc() {
        FragmentDesc::Array(a) => Ok(a),
        _ => Err(wrong_fragment("an array fragment", fam)),
    }
}

fn row_elems(fam: &IndexedFamily, shape: ArrayFragment, row: usize) -> Vec<Elem> {
    let c = shape.cols as usize;
    (row * c..(row + 1) * c).flat_map(|p| fam.tuple(p).iter().copied()).collect()
}

/// Rows first (the row-tuples form an indiscernible sequence up to arity
/// `t`), then columns homogeneous for all tuples of arity up to `t` inside
/// the chosen rows. Both selections are lex-least.
pub fn extract_array_indiscernible(
    s: &FiniteStructure,
    fam: &IndexedFamily,
    t: usize,
    r: usize,
    c: usize,
) -> Result<ArrayExtraction, ModellingError> {
    let shape = array_shape(fam)?;
    fam.check_in(s)?;
    let (big_r, big_c) = (shape.rows as usize, shape.cols as usize);
    let rows_data: Vec<Vec<Elem>> = (0..big_r).map(|i| row_elems(fam, shape, i)).collect();
    let rows = select_sequence(s, big_r, r, t, fam.params(), |i| &rows_data[i]).ok_or_else(|| {
        ModellingError::InsufficientSize(format!("no {r} rows of {big_r} form an indiscernible sequence"))
    })?;
    let cols = least_subset(big_c, c, Colors::new(), |colors, chosen, next| {
        let mut colors = colors.clone();
        let mut set = chosen.to_vec();
        set.push(next);
        // cells of the chosen rows and columns; the new column is the last
        let cells: Vec<ArrayIndex> = rows
            .iter()
            .flat_map(|&i| set.iter().map(move |&j| ArrayIndex::new(i as u64, j as u64)))
            .collect();
        let mut tuples = Tuples::new(cells.len(), 1, t);
        let mut buf = Vec::new();
        let mut idx = Vec::with_capacity(t);
        while let Some(tup) = tuples.next_tuple() {
            if !tup.iter().any(|&p| cells[p].col == next as u64) {
                continue;
            }
            idx.clear();
            idx.extend(tup.iter().map(|&p| cells[p]));
            buf.clear();
            for a in &idx {
                buf.extend_from_slice(fam.tuple(a.row as usize * big_c + a.col as usize));
            }
            if !agree(&mut colors, array_code(&idx), s.atomic_type_unchecked(&buf, fam.params())) {
                return None;
            }
        }
        Some(colors)
    })
    .ok_or_else(|| {
        ModellingError::InsufficientSize(format!("no {c} of {big_c} columns are homogeneous across the chosen rows"))
    })?;
    let family = IndexedFamily::over_fragment(
        Fragment::Array(ArrayFragment::new(r as u64, c as u64)),
        fam.params().to_vec(),
        |i| {
            let a = i.as_array().expect("array fragment");
            fam.tuple(rows[a.row as usize] * big_c + cols[a.col as usize]).to_vec()
        },
    )?;
    Ok(ArrayExtraction { rows, cols, family })
}

/// Outcome of checking the array side against the row/column side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionVerdict {
    pub array_side: IndiscernibleVerdict,
    pub decomposition_side: DecompositionSide,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionSide {
    Holds,
    /// Row `row` is not indiscernible over `C` and the other rows.
    RowFails { row: usize, verdict: IndiscernibleVerdict },
    /// The sequence of row-tuples is not indiscernible over `C`.
    RowSequenceFails { verdict: IndiscernibleVerdict },
}

impl DecompositionVerdict {
    pub fn array_holds(&self) -> bool {
        self.array_side.holds()
    }

    pub fn decomposition_holds(&self) -> bool {
        matches!(self.decomposition_side, DecompositionSide::Holds)
    }

    pub fn agree(&self) -> bool {
        self.array_holds() == self.decomposition_holds()
    }
}

impl fmt::Display for DecompositionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |b: bool| if b { "indiscernible" } else { "not indiscernible" };
        write!(f, "array: {}; rows: ", side(self.array_holds()))?;
        match &self.decomposition_side {
            DecompositionSide::Holds => f.write_str("indiscernible"),
            DecompositionSide::RowFails { row, .. } => write!(f, "row {row} fails"),
            DecompositionSide::RowSequenceFails { .. } => f.write_str("row sequence fails"),
        }
    }
}

/// Compares array indiscernibility with the conjunction of (a) the row-tuple
/// sequence is indiscernible over `C` and (b) each row is indiscernible over
/// `C` plus the other rows. Both sides are checked at `max(max_arity, s)`,
/// where `s` is the structure's saturation arity, so each side is decided
/// completely and a disagreement would be a genuine bug.
pub fn check_array_decomposition(
    s: &FiniteStructure,
    fam: &IndexedFamily,
    max_arity: usize,
) -> Result<DecompositionVerdict, ModellingError> {
    let shape = array_shape(fam)?;
    let arity = max_arity.max(s.saturation_arity());
    let array_side = is_indiscernible(s, fam, Signature::Ar, arity)?;
    let (big_r, big_c) = (shape.rows as usize, shape.cols as usize);
    let rows: Vec<Vec<Elem>> = (0..big_r).map(|i| row_elems(fam, shape, i)).collect();
    let mut decomposition_side = DecompositionSide::Holds;
    for i in 0..big_r {
        let mut params = fam.params().to_vec();
        for (r, data) in rows.iter().enumerate() {
            if r != i {
                params.extend_from_slice(data);
            }
        }
        let row = IndexedFamily::sequence((0..big_c).map(|j| fam.tuple(i * big_c + j).to_vec()).collect(), params)?;
        let verdict = is_indiscernible(s, &row, Signature::Ar, arity)?;
        if !verdict.holds() {
            decomposition_side = DecompositionSide::RowFails { row: i, verdict };
            break;
        }
    }
    if matches!(decomposition_side, DecompositionSide::Holds) {
        let seq = IndexedFamily::sequence(rows, fam.params().to_vec())?;
        let verdict = is_indiscernible(s, &seq, Signature::Ar, arity)?;
        if !verdict.holds() {
            decomposition_side = DecompositionSide::RowSequenceFails { verdict };
        }
    }
    Ok(DecompositionVerdict { array_side, decomposition_side })
}
