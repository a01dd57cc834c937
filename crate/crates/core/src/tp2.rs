//! Finite k-TP2 witnesses, the indiscernible-array normal form, and the
//! reduction from k-TP2 to 2-TP2 for a conjunction.
//!
//! A witness is an `R × C` array of subsets `S[i][j]` of a finite universe,
//! read as the solution sets of `φ(x, a_{i,j})`. Inconsistency is empty
//! intersection.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::Tp2Error;
use crate::modelling::{is_indiscernible, Elem, FiniteStructure, FragmentDesc, IndexedFamily, Relation};
use crate::node::{ArrayFragment, Fragment};
use crate::qftp::Signature;
use crate::tuples::Tuples;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tp2Witness {
    universe: Vec<Elem>,
    rows: usize,
    cols: usize,
    /// Row-major; bit `p` stands for `universe[p]`.
    cells: Vec<FixedBitSet>,
    conj_arity: usize,
}

impl Tp2Witness {
    /// `cells[i][j]` lists the elements of `S[i][j]`.
    pub fn new(universe: Vec<Elem>, cells: &[Vec<Vec<Elem>>], conj_arity: usize) -> Result<Self, Tp2Error> {
        let rows = cells.len();
        let cols = cells.first().map_or(0, |r| r.len());
        if rows == 0 || cols == 0 {
            return Err(Tp2Error::EmptyShape);
        }
        let mut pos = std::collections::HashMap::with_capacity(universe.len());
        for (p, &u) in universe.iter().enumerate() {
            if pos.insert(u, p).is_some() {
                return Err(Tp2Error::DuplicateElement(u));
            }
        }
        let mut sets = Vec::with_capacity(rows * cols);
        for (i, row) in cells.iter().enumerate() {
            if row.len() != cols {
                return Err(Tp2Error::RaggedCells { row: i, expected: cols, found: row.len() });
            }
            for (j, cell) in row.iter().enumerate() {
                let mut set = FixedBitSet::with_capacity(universe.len());
                for &e in cell {
                    let p = pos.get(&e).ok_or(Tp2Error::NotInUniverse { row: i, col: j, elem: e })?;
                    set.insert(*p);
                }
                sets.push(set);
            }
        }
        Ok(Tp2Witness { universe, rows, cols, cells: sets, conj_arity })
    }

    /// Builds `S[i][j] = { u ∈ U : member(i, j, u) }`.
    pub fn from_fn(
        universe: Vec<Elem>,
        rows: usize,
        cols: usize,
        conj_arity: usize,
        mut member: impl FnMut(usize, usize, Elem) -> bool,
    ) -> Result<Self, Tp2Error> {
        let cells: Vec<Vec<Vec<Elem>>> = (0..rows)
            .map(|i| (0..cols).map(|j| universe.iter().copied().filter(|&u| member(i, j, u)).collect()).collect())
            .collect();
        Tp2Witness::new(universe, &cells, conj_arity)
    }

    fn with_cells(&self, rows: usize, cols: usize, cells: Vec<FixedBitSet>, conj_arity: usize) -> Tp2Witness {
        Tp2Witness { universe: self.universe.clone(), rows, cols, cells, conj_arity }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn universe(&self) -> &[Elem] {
        &self.universe
    }

    pub fn conj_arity(&self) -> usize {
        self.conj_arity
    }

    pub fn cell(&self, i: usize, j: usize) -> &FixedBitSet {
        &self.cells[i * self.cols + j]
    }

    pub fn cell_elems(&self, i: usize, j: usize) -> Vec<Elem> {
        self.cell(i, j).ones().map(|p| self.universe[p]).collect()
    }

    fn full(&self) -> FixedBitSet {
        let mut all = FixedBitSet::with_capacity(self.universe.len());
        all.insert_range(..);
        all
    }

    /// `⋂_i S[i][σ(i)]` as elements.
    pub fn path_intersection(&self, path: &[usize]) -> Vec<Elem> {
        let mut acc = self.full();
        for (i, &j) in path.iter().enumerate() {
            acc.intersect_with(self.cell(i, j));
        }
        acc.ones().map(|p| self.universe[p]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tp2WitnessJson {
    pub version: u32,
    pub universe: Vec<Elem>,
    pub rows: usize,
    pub cols: usize,
    pub cells: Vec<Vec<Vec<Elem>>>,
    #[serde(default = "one")]
    pub conj_arity: usize,
}

fn one() -> usize {
    1
}

impl From<&Tp2Witness> for Tp2WitnessJson {
    fn from(w: &Tp2Witness) -> Self {
        Tp2WitnessJson {
            version: 1,
            universe: w.universe.clone(),
            rows: w.rows,
            cols: w.cols,
            cells: (0..w.rows).map(|i| (0..w.cols).map(|j| w.cell_elems(i, j)).collect()).collect(),
            conj_arity: w.conj_arity,
        }
    }
}

impl TryFrom<&Tp2WitnessJson> for Tp2Witness {
    type Error = Tp2Error;

    fn try_from(j: &Tp2WitnessJson) -> Result<Self, Tp2Error> {
        if j.cells.len() != j.rows {
            return Err(Tp2Error::ShapeMismatch(format!("{} rows declared, {} given", j.rows, j.cells.len())));
        }
        if let Some((i, row)) = j.cells.iter().enumerate().find(|(_, r)| r.len() != j.cols) {
            return Err(Tp2Error::RaggedCells { row: i, expected: j.cols, found: row.len() });
        }
        Tp2Witness::new(j.universe.clone(), &j.cells, j.conj_arity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ktp2Verdict {
    Holds,
    /// A path `σ` with empty intersection.
    InconsistentPath { path: Vec<usize> },
    /// `k` cells of one row sharing the element `witness`.
    ConsistentRow { row: usize, cols: Vec<usize>, witness: Elem },
}

impl Ktp2Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Ktp2Verdict::Holds)
    }
}

fn first_inconsistent_path(w: &Tp2Witness) -> Option<Vec<usize>> {
    fn go(w: &Tp2Witness, acc: &FixedBitSet, path: &mut Vec<usize>) -> bool {
        let i = path.len();
        if i == w.rows {
            return acc.is_clear();
        }
        for j in 0..w.cols {
            let mut next = acc.clone();
            next.intersect_with(w.cell(i, j));
            path.push(j);
            if go(w, &next, path) {
                return true;
            }
            path.pop();
        }
        false
    }
    let mut path = Vec::with_capacity(w.rows);
    go(w, &w.full(), &mut path).then_some(path)
}

/// Smallest element lying in at least `k` cells of the row, with the first
/// `k` such columns.
fn consistent_k_set(w: &Tp2Witness, row: usize, k: usize) -> Option<(Vec<usize>, Elem)> {
    let mut counts = vec![0usize; w.universe.len()];
    for j in 0..w.cols {
        for p in w.cell(row, j).ones() {
            counts[p] += 1;
        }
    }
    let p = counts.iter().position(|&c| c >= k)?;
    let cols = (0..w.cols).filter(|&j| w.cell(row, j).contains(p)).take(k).collect();
    Some((cols, w.universe[p]))
}

/// Paths first (in lex order of `σ`), then rows.
pub fn check_ktp2(w: &Tp2Witness, k: usize) -> Result<Ktp2Verdict, Tp2Error> {
    if k < 2 {
        return Err(Tp2Error::KTooSmall(k));
    }
    if let Some(path) = first_inconsistent_path(w) {
        return Ok(Ktp2Verdict::InconsistentPath { path });
    }
    for row in 0..w.rows {
        if let Some((cols, witness)) = consistent_k_set(w, row, k) {
            return Ok(Ktp2Verdict::ConsistentRow { row, cols, witness });
        }
    }
    Ok(Ktp2Verdict::Holds)
}

/// Every path is consistent and every row is `k`-inconsistent.
pub fn verify_ktp2(w: &Tp2Witness, k: usize) -> Result<bool, Tp2Error> {
    Ok(check_ktp2(w, k)?.holds())
}

/// The normal form for an array-indiscernible witness: column 0 is
/// consistent and row 0 is `k`-inconsistent. `fam` must index the same
/// `R × C` array and be array-indiscernible in `s`.
pub fn verify_indiscernible_form(
    s: &FiniteStructure,
    w: &Tp2Witness,
    fam: &IndexedFamily,
    k: usize,
) -> Result<bool, Tp2Error> {
    if k < 2 {
        return Err(Tp2Error::KTooSmall(k));
    }
    let shape = FragmentDesc::Array(ArrayFragment::new(w.rows as u64, w.cols as u64));
    if fam.desc() != shape {
        return Err(Tp2Error::ShapeMismatch(format!("witness is {}x{}, family is over {}", w.rows, w.cols, fam.desc())));
    }
    if !is_indiscernible(s, fam, Signature::Ar, s.saturation_arity())?.holds() {
        return Err(Tp2Error::NotIndiscernible);
    }
    let column_zero = vec![0; w.rows];
    Ok(!w.path_intersection(&column_zero).is_empty() && consistent_k_set(w, 0, k).is_none())
}

/// Least `n` with `⋂_{i<n} (S[i][0] ∩ S[i][1]) = ∅`.
pub fn minimal_inconsistency_n(w: &Tp2Witness) -> Result<Option<usize>, Tp2Error> {
    if w.cols < 2 {
        return Err(Tp2Error::TooFewColumns);
    }
    let mut acc = w.full();
    for i in 0..w.rows {
        acc.intersect_with(w.cell(i, 0));
        acc.intersect_with(w.cell(i, 1));
        if acc.is_clear() {
            return Ok(Some(i + 1));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StepKind {
    /// Columns `2j, 2j+1` merged into column `j`.
    Pair,
    /// Rows `n i, …, n i + n - 1` merged into row `i`.
    Block { n: usize },
}

impl StepKind {
    pub fn multiplicity(&self) -> usize {
        match self {
            StepKind::Pair => 2,
            StepKind::Block { n } => *n,
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepKind::Pair => f.write_str("Pair"),
            StepKind::Block { n } => write!(f, "Block({n})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    #[serde(flatten)]
    pub kind: StepKind,
    pub k_before: usize,
    pub k_after: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

impl ReductionTrace {
    /// Product of the step multiplicities.
    pub fn conj_factor(&self) -> usize {
        self.steps.iter().map(|s| s.kind.multiplicity()).product()
    }
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(|s| s.kind.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn pair_columns(w: &Tp2Witness) -> Tp2Witness {
    let cols = w.cols / 2;
    let mut cells = Vec::with_capacity(w.rows * cols);
    for i in 0..w.rows {
        for j in 0..cols {
            let mut c = w.cell(i, 2 * j).clone();
            c.intersect_with(w.cell(i, 2 * j + 1));
            cells.push(c);
        }
    }
    w.with_cells(w.rows, cols, cells, w.conj_arity * 2)
}

fn block_rows(w: &Tp2Witness, n: usize) -> Tp2Witness {
    let rows = w.rows / n;
    let mut cells = Vec::with_capacity(rows * w.cols);
    for i in 0..rows {
        for j in 0..w.cols {
            let mut c = w.cell(n * i, j).clone();
            for r in 1..n {
                c.intersect_with(w.cell(n * i + r, j));
            }
            cells.push(c);
        }
    }
    w.with_cells(rows, w.cols, cells, w.conj_arity * n)
}

/// Repeats the case split until `k = 2`. If `S[i][0] ∩ S[i][1]` is jointly
/// consistent over all rows, columns are paired and `k` becomes `⌈k/2⌉`;
/// otherwise rows are blocked by `minimal_inconsistency_n` and `k` becomes
/// 2. Each intermediate witness is verified.
pub fn reduce_k_to_2(w: &Tp2Witness, k: usize) -> Result<(Tp2Witness, ReductionTrace), Tp2Error> {
    if !verify_ktp2(w, k)? {
        return Err(Tp2Error::NotKtp2(k));
    }
    let mut cur = w.clone();
    let mut k = k;
    let mut trace = ReductionTrace::default();
    while k > 2 {
        if cur.cols < 2 {
            return Err(Tp2Error::FragmentExhausted(format!("{} column(s) left with k = {k}", cur.cols)));
        }
        let (next, kind, k_after) = match minimal_inconsistency_n(&cur)? {
            None => {
                if cur.cols < 4 {
                    return Err(Tp2Error::FragmentExhausted(format!(
                        "pairing needs at least 4 columns, have {}",
                        cur.cols
                    )));
                }
                (pair_columns(&cur), StepKind::Pair, k.div_ceil(2))
            }
            Some(n) => (block_rows(&cur, n), StepKind::Block { n }, 2),
        };
        if !verify_ktp2(&next, k_after)? {
            return Err(Tp2Error::StepFailed { step: kind.to_string(), k: k_after });
        }
        trace.steps.push(ReductionStep { kind, k_before: k, k_after });
        cur = next;
        k = k_after;
    }
    Ok((cur, trace))
}

/// The witness as a structure on its cells: element `i·C + j` is the cell
/// `(i, j)`, and `cons_n(y_1, …, y_n)` holds when the cells intersect, for
/// `n` up to `max_n`. The family `a_{i,j} = (i·C + j)` lives over `R × C`.
pub fn consistency_structure(w: &Tp2Witness, max_n: usize) -> (FiniteStructure, IndexedFamily) {
    let cells = w.rows * w.cols;
    let relations = (1..=max_n)
        .map(|n| {
            let mut tuples = Vec::new();
            let mut it = Tuples::new(cells, n, n);
            while let Some(t) = it.next_tuple() {
                let mut acc = w.cells[t[0]].clone();
                for &c in &t[1..] {
                    acc.intersect_with(&w.cells[c]);
                }
                if !acc.is_clear() {
                    tuples.push(t.iter().map(|&c| c as Elem).collect());
                }
            }
            Relation::new(format!("cons{n}"), n, tuples)
        })
        .collect();
    let s = FiniteStructure::on_range(cells as u32, relations).expect("tuples are cell ids");
    let cols = w.cols;
    let fam = IndexedFamily::over_fragment(
        Fragment::Array(ArrayFragment::new(w.rows as u64, w.cols as u64)),
        vec![],
        |i| {
            let a = i.as_array().expect("array fragment");
            vec![(a.row as usize * cols + a.col as usize) as Elem]
        },
    )
    .expect("fragment family");
    (s, fam)
}

/// `U` = all maps `τ` from the `R` rows to `size`-subsets of the `C`
/// columns, encoded as element ids; `S[i][j] = {τ : j ∈ τ(i)}`.
pub fn subset_pattern_witness(rows: usize, cols: usize, size: usize) -> Tp2Witness {
    let choices: Vec<Vec<usize>> = (0..1usize << cols)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (0..cols).filter(|j| m >> j & 1 == 1).collect())
        .collect();
    let mut taus: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..rows {
        taus = taus.iter().flat_map(|t| (0..choices.len()).map(move |c| [t.as_slice(), &[c]].concat())).collect();
    }
    let universe = (0..taus.len() as Elem).collect();
    Tp2Witness::from_fn(universe, rows, cols, 1, |i, j, u| choices[taus[u as usize][i]].contains(&j))
        .expect("well-formed by construction")
}

/// The 2 × 4 witness of 2-element subsets: 3-TP2 but not 2-TP2.
pub fn pairs_witness() -> Tp2Witness {
    subset_pattern_witness(2, 4, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_witness_is_3_but_not_2_tp2() {
        let w = pairs_witness();
        assert_eq!(w.universe().len(), 36);
        assert!(verify_ktp2(&w, 3).unwrap());
        assert_eq!(
            check_ktp2(&w, 2).unwrap(),
            Ktp2Verdict::ConsistentRow { row: 0, cols: vec![0, 1], witness: 0 }
        );
        assert_eq!(verify_ktp2(&w, 1), Err(Tp2Error::KTooSmall(1)));
    }

    #[test]
    fn empty_cell_breaks_every_k() {
        let w = Tp2Witness::new(vec![0, 1], &[vec![vec![0], vec![]]], 1).unwrap();
        for k in 2..5 {
            assert_eq!(check_ktp2(&w, k).unwrap(), Ktp2Verdict::InconsistentPath { path: vec![1] });
        }
    }

    #[test]
    fn minimal_n_examples() {
        assert_eq!(minimal_inconsistency_n(&pairs_witness()).unwrap(), None);
        // rows 0 and 1 meet in u = 0 and v = 1 respectively
        let w = Tp2Witness::new(
            vec![0, 1, 2, 3],
            &[vec![vec![0, 2], vec![0, 3]], vec![vec![1, 2, 3], vec![1, 2]]],
            1,
        )
        .unwrap();
        assert_eq!(minimal_inconsistency_n(&w).unwrap(), Some(2));
        let w = Tp2Witness::new(vec![0, 1], &[vec![vec![0], vec![1]]], 1).unwrap();
        assert_eq!(minimal_inconsistency_n(&w).unwrap(), Some(1));
        let w = Tp2Witness::new(vec![0], &[vec![vec![0]]], 1).unwrap();
        assert_eq!(minimal_inconsistency_n(&w), Err(Tp2Error::TooFewColumns));
    }

    #[test]
    fn pairs_reduction() {
        let w = pairs_witness();
        let (out, trace) = reduce_k_to_2(&w, 3).unwrap();
        assert_eq!((out.rows(), out.cols()), (2, 2));
        assert_eq!(trace.to_string(), "[Pair]");
        assert_eq!(out.conj_arity(), 2);
        assert!(verify_ktp2(&out, 2).unwrap());
    }

    #[test]
    fn k2_is_the_identity() {
        let w = subset_pattern_witness(2, 3, 1);
        let (out, trace) = reduce_k_to_2(&w, 2).unwrap();
        assert_eq!(out, w);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn rejects_non_witnesses() {
        assert_eq!(reduce_k_to_2(&pairs_witness(), 2), Err(Tp2Error::NotKtp2(2)));
    }

    #[test]
    fn json_round_trip() {
        let w = pairs_witness();
        let j = Tp2WitnessJson::from(&w);
        let text = serde_json::to_string(&j).unwrap();
        let back: Tp2WitnessJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Tp2Witness::try_from(&back).unwrap(), w);
        let trace = ReductionTrace {
            steps: vec![ReductionStep { kind: StepKind::Block { n: 2 }, k_before: 3, k_after: 2 }],
        };
        let text = serde_json::to_string(&trace).unwrap();
        assert_eq!(text, r#"{"steps":[{"kind":"block","n":2,"k_before":3,"k_after":2}]}"#);
        assert_eq!(serde_json::from_str::<ReductionTrace>(&text).unwrap(), trace);
    }

    #[test]
    fn witness_validation() {
        assert_eq!(Tp2Witness::new(vec![0], &[], 1), Err(Tp2Error::EmptyShape));
        assert_eq!(
            Tp2Witness::new(vec![0], &[vec![vec![5]]], 1),
            Err(Tp2Error::NotInUniverse { row: 0, col: 0, elem: 5 })
        );
        assert_eq!(Tp2Witness::new(vec![0, 0], &[vec![vec![0]]], 1), Err(Tp2Error::DuplicateElement(0)));
        assert!(matches!(
            Tp2Witness::new(vec![0], &[vec![vec![0]], vec![]], 1),
            Err(Tp2Error::RaggedCells { row: 1, .. })
        ));
    }

    #[test]
    fn normal_form_on_pairs() {
        let w = pairs_witness();
        let (s, fam) = consistency_structure(&w, 3);
        assert!(verify_indiscernible_form(&s, &w, &fam, 3).unwrap());
        assert!(!verify_indiscernible_form(&s, &w, &fam, 2).unwrap());
        let single = Tp2Witness::new(vec![0], &[vec![vec![0]]], 1).unwrap();
        let (s, fam) = consistency_structure(&single, 2);
        assert!(verify_indiscernible_form(&s, &single, &fam, 2).unwrap());
    }
}
