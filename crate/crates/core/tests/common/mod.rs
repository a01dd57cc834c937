//! Independent oracles and random generators shared by the integration
//! suites. The oracles never call the library's node algebra or type codes;
//! the generators may.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use indisc::modelling::{Elem, FiniteStructure, FragmentDesc, IndexedFamily, Relation};
use indisc::tp2::Tp2Witness;
use indisc::node::{ArrayFragment, TreeFragment};
use indisc::reindex::{
    array_stretch_map, array_to_tree_map, identity_map, level_restriction_map, path_map, str0_embedding,
    stretch_after_g,
};
use indisc::{Index, IndexKind, IndexMap, QfTypeCode, Signature, TreeNode};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Raw node algebra on digit vectors.

pub fn prefix(a: &[u64], b: &[u64]) -> bool {
    a.len() <= b.len() && b[..a.len()] == *a
}

pub fn meet(a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    a[..n].to_vec()
}

pub fn lex_less(a: &[u64], b: &[u64]) -> bool {
    if prefix(a, b) {
        return a.len() < b.len();
    }
    if prefix(b, a) {
        return false;
    }
    let i = a.iter().zip(b).position(|(x, y)| x != y).unwrap();
    a[i] < b[i]
}

pub fn len_less(a: &[u64], b: &[u64]) -> bool {
    a.len() < b.len()
}

/// All nodes of `k^{≤m}` as digit vectors, any order.
pub fn raw_fragment(k: u64, m: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..m {
        layer = layer
            .iter()
            .flat_map(|n: &Vec<u64>| {
                (0..k).map(move |d| {
                    let mut c = n.clone();
                    c.push(d);
                    c
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn digits(i: &Index) -> Vec<u64> {
    i.as_tree().unwrap().digits().to_vec()
}

/// Truth values of every atomic formula of the signature over the terms of
/// the tuple. Terms are meets of nonempty sets of variables; `P_γ` is
/// tested for `γ ≤ max_level + 1`.
pub fn tree_atoms(t: &[Vec<u64>], sig: Signature, max_level: usize) -> Vec<bool> {
    let n = t.len();
    let terms: Vec<Vec<u64>> = (1u32..(1 << n))
        .map(|mask| {
            let mut it = (0..n).filter(|i| mask >> i & 1 == 1);
            let first = it.next().unwrap();
            it.fold(t[first].clone(), |acc, i| meet(&acc, &t[i]))
        })
        .collect();
    let mut out = Vec::new();
    for x in &terms {
        for y in &terms {
            out.push(x == y);
            out.push(prefix(x, y));
            out.push(lex_less(x, y));
            if sig == Signature::Str {
                out.push(len_less(x, y));
            }
        }
        if sig == Signature::S {
            for g in 0..=max_level + 1 {
                out.push(x.len() == g);
            }
        }
    }
    out
}

pub fn ar_atoms(t: &[(u64, u64)]) -> Vec<bool> {
    let mut out = Vec::new();
    for x in t {
        for y in t {
            out.push(x == y);
            out.push(x.0 < y.0);
            out.push(x.0 == y.0 && x.1 < y.1);
        }
    }
    out
}

/// Brute-force qf equality of two index tuples.
pub fn brute_qf_equal(a: &[Index], b: &[Index], sig: Signature) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if sig == Signature::Ar {
        let pa: Vec<(u64, u64)> = a.iter().map(|i| i.as_array().map(|x| (x.row, x.col)).unwrap()).collect();
        let pb: Vec<(u64, u64)> = b.iter().map(|i| i.as_array().map(|x| (x.row, x.col)).unwrap()).collect();
        return ar_atoms(&pa) == ar_atoms(&pb);
    }
    let da: Vec<Vec<u64>> = a.iter().map(digits).collect();
    let db: Vec<Vec<u64>> = b.iter().map(digits).collect();
    let max_level = da.iter().chain(&db).map(|d| d.len()).max().unwrap_or(0);
    tree_atoms(&da, sig, max_level) == tree_atoms(&db, sig, max_level)
}

pub fn raw_is_meet_closed(t: &[Vec<u64>]) -> bool {
    t.iter().all(|a| t.iter().all(|b| t.contains(&meet(a, b))))
}

// ---------------------------------------------------------------------------
// The str₀ embedding by the closed form of its length bound.

/// Longest image length `L^m` of `f_k^m`: `L^0 = 0`,
/// `L^m = 1 + k (L^{m-1} + 1) + L^{m-1}`.
pub fn str0_max_len(k: u64, m: usize) -> usize {
    (1..=m).fold(0usize, |l, _| 1 + k as usize * (l + 1) + l)
}

pub fn str0_oracle(k: u64, m: usize, eta: &[u64]) -> Vec<u64> {
    if eta.is_empty() {
        return vec![];
    }
    let i = eta[0];
    let l = str0_max_len(k, m - 1) + 1;
    let mut out = vec![i];
    out.extend(std::iter::repeat_n(0, (i as usize + 1) * l));
    out.extend(str0_oracle(k, m - 1, &eta[1..]));
    out
}

// ---------------------------------------------------------------------------
// Random structures and families.

pub fn random_structure(rng: &mut ChaCha8Rng, n: u32, unary: usize, binary: usize, density: f64) -> FiniteStructure {
    let mut rels = Vec::new();
    for u in 0..unary {
        rels.push(Relation::unary(format!("P{u}"), (0..n).filter(|_| rng.gen_bool(density))));
    }
    for b in 0..binary {
        let tuples: Vec<Vec<Elem>> = (0..n)
            .flat_map(|x| (0..n).map(move |y| vec![x, y]))
            .filter(|_| rng.gen_bool(density))
            .collect();
        rels.push(Relation::new(format!("R{b}"), 2, tuples));
    }
    FiniteStructure::on_range(n, rels).unwrap()
}

/// A family whose structure is defined from index qftp codes: the universe
/// is the list of positions, `a_i = (pos(i))`, and `R_a(p_1, …, p_a)` holds
/// by a random bit attached to the code of `(i_1, …, i_a)`. Indiscernible
/// for `sig` at every arity by construction.
pub fn definable_family(
    rng: &mut ChaCha8Rng,
    indices: &[Index],
    sig: Signature,
    max_arity: usize,
) -> (FiniteStructure, IndexedFamily) {
    let n = indices.len();
    let mut bits: HashMap<QfTypeCode, bool> = HashMap::new();
    let mut rels = Vec::new();
    for a in 1..=max_arity {
        let mut tuples = Vec::new();
        let mut cur = vec![0usize; a];
        'outer: loop {
            let idx: Vec<&Index> = cur.iter().map(|&p| &indices[p]).collect();
            let code = indisc::qftp_code(&idx, sig).unwrap();
            let bit = *bits.entry(code).or_insert_with(|| rng.gen_bool(0.5));
            if bit {
                tuples.push(cur.iter().map(|&p| p as Elem).collect());
            }
            let mut i = a;
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < n {
                    break;
                }
                cur[i] = 0;
            }
        }
        rels.push(Relation::new(format!("D{a}"), a, tuples));
    }
    let s = FiniteStructure::on_range(n as u32, rels).unwrap();
    let kind = indices.first().map_or(IndexKind::Tree, |i| i.kind());
    let fam = IndexedFamily::from_entries(
        FragmentDesc::List(kind),
        indices.iter().enumerate().map(|(p, i)| (i.clone(), vec![p as Elem])).collect(),
        vec![],
    )
    .unwrap();
    (s, fam)
}

/// Doubles the universe: `e` and its copy `e + n`. Each relation keeps its
/// tuples and gains copies of them (each dropped with probability `drop`),
/// plus random extra tuples among copies with probability `extra`. Returns
/// the new structure, the family on originals and the family on copies.
pub fn copy_with_noise(
    rng: &mut ChaCha8Rng,
    s: &FiniteStructure,
    fam: &IndexedFamily,
    extra: f64,
    drop: f64,
) -> (FiniteStructure, IndexedFamily, IndexedFamily) {
    let n = s.universe().iter().max().map_or(0, |m| m + 1);
    let mut rels = Vec::new();
    for r in s.relations() {
        let mut tuples: BTreeSet<Vec<Elem>> = r.tuples.clone();
        for t in &r.tuples {
            if !rng.gen_bool(drop) {
                tuples.insert(t.iter().map(|e| e + n).collect());
            }
        }
        if extra > 0.0 && r.arity <= 2 {
            let all: Vec<Vec<Elem>> = match r.arity {
                1 => (0..n).map(|x| vec![x + n]).collect(),
                _ => (0..n).flat_map(|x| (0..n).map(move |y| vec![x + n, y + n])).collect(),
            };
            for t in all {
                if rng.gen_bool(extra) {
                    tuples.insert(t);
                }
            }
        }
        rels.push(Relation::new(r.name.clone(), r.arity, tuples));
    }
    let mut universe = s.universe().to_vec();
    universe.extend(s.universe().iter().map(|e| e + n));
    let s2 = FiniteStructure::new(universe, rels).unwrap();
    let copies = IndexedFamily::from_entries(
        fam.desc(),
        fam.entries().map(|(i, t)| (i.clone(), t.iter().map(|e| e + n).collect())).collect(),
        fam.params().to_vec(),
    )
    .unwrap();
    (s2, fam.clone(), copies)
}

// ---------------------------------------------------------------------------
// TP2 generators and a brute-force verifier.

/// `U` is a list of maps `τ` from rows to column masks; `S[i][j] = {τ : j ∈ τ(i)}`.
pub fn witness_from_taus(rows: usize, cols: usize, taus: &[Vec<u32>]) -> Tp2Witness {
    let mut uniq: Vec<Vec<u32>> = taus.to_vec();
    uniq.sort();
    uniq.dedup();
    let universe = (0..uniq.len() as Elem).collect();
    Tp2Witness::from_fn(universe, rows, cols, 1, |i, j, u| uniq[u as usize][i] >> j & 1 == 1).unwrap()
}

fn all_paths(rows: usize, cols: usize) -> Vec<Vec<usize>> {
    let mut paths = vec![vec![]];
    for _ in 0..rows {
        paths = paths.iter().flat_map(|p: &Vec<usize>| (0..cols).map(move |j| [p.as_slice(), &[j]].concat())).collect();
    }
    paths
}

fn random_mask(rng: &mut ChaCha8Rng, cols: usize, max_size: usize) -> u32 {
    let size = rng.gen_range(1..=max_size.min(cols));
    let mut cs: Vec<usize> = (0..cols).collect();
    cs.shuffle(rng);
    cs[..size].iter().fold(0, |m, &j| m | 1 << j)
}

/// Column pairing applies: paired paths cover every path and `τ(i) = {0,1}`
/// for all rows is present.
pub fn case_a_witness(rng: &mut ChaCha8Rng, k: usize) -> Tp2Witness {
    let (cols, max_rows) = *[(4usize, 5usize), (6, 3), (8, 2)].choose(rng).unwrap();
    let rows = rng.gen_range(1..=max_rows);
    let mut taus: Vec<Vec<u32>> = all_paths(rows, cols / 2)
        .into_iter()
        .map(|p| p.iter().map(|&j| 0b11u32 << (2 * j)).collect())
        .collect();
    let room = 64 - taus.len();
    for _ in 0..rng.gen_range(0..=room.min(16)) {
        taus.push((0..rows).map(|_| random_mask(rng, cols, k - 1)).collect());
    }
    witness_from_taus(rows, cols, &taus)
}

/// Row blocking applies with `n = 2`: singletons cover every path, and each
/// extra element has a single row holding two columns, the first one at row
/// 0 on columns `{0, 1}`.
pub fn case_b_witness(rng: &mut ChaCha8Rng) -> Tp2Witness {
    let shapes: Vec<(usize, usize)> =
        (2..=8usize).flat_map(|c| (2..=6usize).map(move |r| (r, c))).filter(|&(r, c)| c.pow(r as u32) <= 60).collect();
    let &(rows, cols) = shapes.choose(rng).unwrap();
    let mut taus: Vec<Vec<u32>> =
        all_paths(rows, cols).into_iter().map(|p| p.iter().map(|&j| 1u32 << j).collect()).collect();
    let room = 64 - taus.len();
    let extras = rng.gen_range(1..=room.min(12));
    for e in 0..extras {
        let mut tau: Vec<u32> = (0..rows).map(|_| 1u32 << rng.gen_range(0..cols)).collect();
        if e == 0 {
            tau[0] = 0b11;
        } else {
            let row = rng.gen_range(0..rows);
            let a = rng.gen_range(0..cols);
            let b = (a + rng.gen_range(1..cols)) % cols;
            tau[row] = 1 << a | 1 << b;
        }
        taus.push(tau);
    }
    witness_from_taus(rows, cols, &taus)
}

/// Brute force: all paths and every `k`-subset of columns in every row.
pub fn brute_ktp2(w: &Tp2Witness, k: usize) -> bool {
    let cell = |i: usize, j: usize| -> BTreeSet<Elem> { w.cell_elems(i, j).into_iter().collect() };
    for p in all_paths(w.rows(), w.cols()) {
        let mut acc: BTreeSet<Elem> = w.universe().iter().copied().collect();
        for (i, &j) in p.iter().enumerate() {
            acc = acc.intersection(&cell(i, j)).copied().collect();
        }
        if acc.is_empty() {
            return false;
        }
    }
    for i in 0..w.rows() {
        for mask in 0u32..(1 << w.cols()) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let mut acc: BTreeSet<Elem> = w.universe().iter().copied().collect();
            for j in (0..w.cols()).filter(|j| mask >> j & 1 == 1) {
                acc = acc.intersection(&cell(i, j)).copied().collect();
            }
            if !acc.is_empty() {
                return false;
            }
        }
    }
    true
}

/// Symmetric witnesses: `τ` ranges over maps from rows to `size`-subsets of
/// columns whose union has at most `spread` columns.
pub fn symmetric_witness(rows: usize, cols: usize, size: usize, spread: usize) -> Tp2Witness {
    let masks: Vec<u32> = (0u32..(1 << cols)).filter(|m| m.count_ones() as usize == size).collect();
    let mut taus: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..rows {
        taus = taus.iter().flat_map(|t| masks.iter().map(move |&m| [t.as_slice(), &[m]].concat())).collect();
    }
    taus.retain(|t| t.iter().fold(0, |a, m| a | m).count_ones() as usize <= spread);
    witness_from_taus(rows, cols, &taus)
}

// ---------------------------------------------------------------------------
// Shipped maps.

/// Every map the library ships, instantiated on small fragments.
pub fn shipped_maps() -> Vec<(String, IndexMap)> {
    let mut maps = Vec::new();
    for (a, b) in [
        (Signature::S, Signature::Str),
        (Signature::Str, Signature::Str0),
        (Signature::Str, Signature::S),
        (Signature::Str0, Signature::Str),
    ] {
        maps.push((format!("identity {a:?}->{b:?}"), identity_map(TreeFragment::new(2, 2), a, b).unwrap()));
    }
    maps.push(("levels [0,2,3]".into(), level_restriction_map(&[0, 2, 3], TreeFragment::new(2, 2)).unwrap()));
    maps.push(("levels [1,2,4]".into(), level_restriction_map(&[1, 2, 4], TreeFragment::new(2, 2)).unwrap()));
    maps.push(("path <1>".into(), path_map(&TreeNode::new(vec![1]), 4)));
    maps.push(("str0 2,1".into(), str0_embedding(2, 1).unwrap().map));
    maps.push(("str0 2,2".into(), str0_embedding(2, 2).unwrap().map));
    maps.push(("stretch 2^<=2".into(), array_stretch_map(TreeFragment::new(2, 2))));
    maps.push(("g 3x3".into(), array_to_tree_map(ArrayFragment::new(3, 3))));
    maps.push(("fg 3x3".into(), stretch_after_g(ArrayFragment::new(3, 3))));
    maps
}
