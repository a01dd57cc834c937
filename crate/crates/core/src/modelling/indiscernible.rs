//! Indiscernibility, EM-types and the three basing relations.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::ControlFlow;

use crate::error::{ModellingError, QftpError};
use crate::node::Index;
use crate::qftp::{qftp_code, QfTypeCode, Signature};
use crate::tuples::Tuples;

use super::family::IndexedFamily;
use super::structure::{AtomicType, FiniteStructure};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndiscernibleVerdict {
    Indiscernible,
    /// Two index tuples with equal qftp codes and different atomic types.
    /// `first` is the earliest tuple of that code.
    Counterexample { first: Vec<Index>, second: Vec<Index> },
}

impl IndiscernibleVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, IndiscernibleVerdict::Indiscernible)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasingVerdict {
    Holds,
    /// A tuple of the new family with no acceptable match in the old one.
    Fails { tuple: Vec<Index> },
}

impl BasingVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, BasingVerdict::Holds)
    }
}

/// Walk every index tuple of arity `min..=max` in enumeration order with its
/// code and atomic type over the family's parameters.
pub(crate) fn scan<F>(
    s: &FiniteStructure,
    fam: &IndexedFamily,
    sig: Signature,
    min_arity: usize,
    max_arity: usize,
    mut visit: F,
) -> Result<(), ModellingError>
where
    F: FnMut(&[usize], QfTypeCode, AtomicType) -> ControlFlow<()>,
{
    if sig.index_kind() != fam.kind() {
        return Err(QftpError::SignatureMismatch { sig, kind: fam.kind() }.into());
    }
    fam.check_in(s)?;
    let mut tuples = Tuples::new(fam.len(), min_arity, max_arity);
    let mut idx: Vec<&Index> = Vec::with_capacity(max_arity);
    let mut elems = Vec::new();
    while let Some(t) = tuples.next_tuple() {
        idx.clear();
        idx.extend(t.iter().map(|&p| &fam.indices()[p]));
        let code = qftp_code(&idx, sig)?;
        fam.concat_into(t, &mut elems);
        let ty = s.atomic_type_unchecked(&elems, fam.params());
        if visit(t, code, ty).is_break() {
            break;
        }
    }
    Ok(())
}

/// Checks `a_η̄ ≡_C a_ν̄` for all index tuples of arity `1..=max_arity` with
/// equal codes.
pub fn is_indiscernible(
    s: &FiniteStructure,
    fam: &IndexedFamily,
    sig: Signature,
    max_arity: usize,
) -> Result<IndiscernibleVerdict, ModellingError> {
    let mut seen: HashMap<QfTypeCode, (Vec<usize>, AtomicType)> = HashMap::new();
    let mut verdict = IndiscernibleVerdict::Indiscernible;
    scan(s, fam, sig, 1, max_arity, |t, code, ty| match seen.get(&code) {
        Some((first, expected)) if *expected != ty => {
            verdict = IndiscernibleVerdict::Counterexample {
                first: fam.index_tuple(first),
                second: fam.index_tuple(t),
            };
            ControlFlow::Break(())
        }
        Some(_) => ControlFlow::Continue(()),
        None => {
            seen.insert(code, (t.to_vec(), ty));
            ControlFlow::Continue(())
        }
    })?;
    Ok(verdict)
}

/// For each realized code of arity `0..=max_arity`, the atoms common to all
/// tuples realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmType {
    pub sig: Signature,
    pub max_arity: usize,
    pub entries: BTreeMap<QfTypeCode, AtomicType>,
}

impl EmType {
    pub fn get(&self, code: &QfTypeCode) -> Option<&AtomicType> {
        self.entries.get(code)
    }
}

pub fn em_type(
    s: &FiniteStructure,
    fam: &IndexedFamily,
    sig: Signature,
    max_arity: usize,
) -> Result<EmType, ModellingError> {
    let mut entries: BTreeMap<QfTypeCode, AtomicType> = BTreeMap::new();
    scan(s, fam, sig, 0, max_arity, |_, code, ty| {
        match entries.get_mut(&code) {
            Some(acc) => *acc = acc.intersect(&ty),
            None => {
                entries.insert(code, ty);
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(EmType { sig, max_arity, entries })
}

fn same_params(fam2: &IndexedFamily, fam1: &IndexedFamily) -> Result<(), ModellingError> {
    if fam2.params() != fam1.params() {
        return Err(ModellingError::StructureMismatch);
    }
    Ok(())
}

/// Every tuple of `fam2` of arity `0..=max_arity` has an equal-code tuple
/// of `fam1` with the same atomic type over `C`.
pub fn is_based_on(
    s: &FiniteStructure,
    fam2: &IndexedFamily,
    fam1: &IndexedFamily,
    sig: Signature,
    max_arity: usize,
) -> Result<BasingVerdict, ModellingError> {
    same_params(fam2, fam1)?;
    let mut old: HashMap<QfTypeCode, HashSet<AtomicType>> = HashMap::new();
    scan(s, fam1, sig, 0, max_arity, |_, code, ty| {
        old.entry(code).or_default().insert(ty);
        ControlFlow::Continue(())
    })?;
    first_failure(s, fam2, sig, max_arity, |code, ty| old.get(code).is_some_and(|set| set.contains(ty)))
}

/// Local basing, with formulas ranging over single literals: every atom of
/// `b_η̄`'s type holds of some equal-code `a_ν̄`, and every relation atom
/// failing of `b_η̄` fails of some equal-code `a_ν̄`. Equivalently the
/// code is realized in `fam1` and `em ⊆ type(b_η̄) ⊆ ⋃ types`.
pub fn is_locally_based_on(
    s: &FiniteStructure,
    fam2: &IndexedFamily,
    fam1: &IndexedFamily,
    sig: Signature,
    max_arity: usize,
) -> Result<BasingVerdict, ModellingError> {
    same_params(fam2, fam1)?;
    let mut bounds: HashMap<QfTypeCode, (AtomicType, AtomicType)> = HashMap::new();
    scan(s, fam1, sig, 0, max_arity, |_, code, ty| {
        match bounds.get_mut(&code) {
            Some((meet, join)) => {
                *meet = meet.intersect(&ty);
                for a in ty.atoms() {
                    join.insert(a.clone());
                }
            }
            None => {
                bounds.insert(code, (ty.clone(), ty));
            }
        }
        ControlFlow::Continue(())
    })?;
    first_failure(s, fam2, sig, max_arity, |code, ty| {
        bounds.get(code).is_some_and(|(meet, join)| meet.is_subset(ty) && ty.is_subset(join))
    })
}

/// Every atom of `EM(fam1)` holds of every `fam2` tuple of the associated
/// code. Codes not realized in `fam1` impose nothing.
pub fn is_em_based_on(
    s: &FiniteStructure,
    fam2: &IndexedFamily,
    fam1: &IndexedFamily,
    sig: Signature,
    max_arity: usize,
) -> Result<BasingVerdict, ModellingError> {
    same_params(fam2, fam1)?;
    let em = em_type(s, fam1, sig, max_arity)?;
    first_failure(s, fam2, sig, max_arity, |code, ty| em.get(code).is_none_or(|e| e.is_subset(ty)))
}

fn first_failure(
    s: &FiniteStructure,
    fam: &IndexedFamily,
    sig: Signature,
    max_arity: usize,
    mut accept: impl FnMut(&QfTypeCode, &AtomicType) -> bool,
) -> Result<BasingVerdict, ModellingError> {
    let mut verdict = BasingVerdict::Holds;
    scan(s, fam, sig, 0, max_arity, |t, code, ty| {
        if accept(&code, &ty) {
            ControlFlow::Continue(())
        } else {
            verdict = BasingVerdict::Fails { tuple: fam.index_tuple(t) };
            ControlFlow::Break(())
        }
    })?;
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modelling::structure::{Atom, Relation, Slot};
    use crate::node::{ArrayIndex, Fragment, TreeFragment};

    fn order(n: u32) -> Relation {
        Relation::new("<", 2, (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b])))
    }

    fn seq(n: u32) -> IndexedFamily {
        IndexedFamily::sequence((0..n).map(|i| vec![i]).collect(), vec![]).unwrap()
    }

    fn col(j: u64) -> Index {
        Index::Array(ArrayIndex::new(0, j))
    }

    #[test]
    fn constant_family_is_indiscernible() {
        let s = FiniteStructure::on_range(3, vec![order(3)]).unwrap();
        let fam = IndexedFamily::constant(Fragment::Tree(TreeFragment::new(2, 2)), vec![1, 2], vec![0]).unwrap();
        for sig in [Signature::S, Signature::Str, Signature::Str0] {
            assert!(is_indiscernible(&s, &fam, sig, 3).unwrap().holds());
        }
    }

    #[test]
    fn increasing_sequence_in_a_linear_order() {
        let s = FiniteStructure::on_range(10, vec![order(10)]).unwrap();
        assert!(is_indiscernible(&s, &seq(10), Signature::Ar, 3).unwrap().holds());
        let s = FiniteStructure::on_range(10, vec![order(10), Relation::unary("P", (0..10).step_by(2))]).unwrap();
        assert_eq!(
            is_indiscernible(&s, &seq(10), Signature::Ar, 3).unwrap(),
            IndiscernibleVerdict::Counterexample { first: vec![col(0)], second: vec![col(1)] }
        );
    }

    #[test]
    fn signature_must_match_family() {
        let s = FiniteStructure::on_range(10, vec![]).unwrap();
        assert!(is_indiscernible(&s, &seq(3), Signature::Str, 2).is_err());
    }

    #[test]
    fn em_type_of_parity_sequence() {
        let s = FiniteStructure::on_range(10, vec![Relation::unary("P", (0..10).step_by(2)), order(10)]).unwrap();
        let fam = seq(10);
        let em = em_type(&s, &fam, Signature::Ar, 2).unwrap();
        let code = qftp_code(&[col(0), col(1)], Signature::Ar).unwrap();
        // relations sorted by name: "<" is 0, "P" is 1
        let expected: AtomicType = [
            Atom::Neq(Slot::Pos(0), Slot::Pos(1)),
            Atom::Rel(0, vec![Slot::Pos(0), Slot::Pos(1)]),
        ]
        .into_iter()
        .collect();
        assert_eq!(em.get(&code), Some(&expected));
        let empty = qftp_code::<Index>(&[], Signature::Ar).unwrap();
        assert_eq!(em.get(&empty), Some(&AtomicType::default()));
    }

    #[test]
    fn empty_arity_entry_describes_parameters() {
        let s = FiniteStructure::on_range(4, vec![Relation::unary("P", [3])]).unwrap();
        let fam = IndexedFamily::sequence(vec![vec![0], vec![1]], vec![3]).unwrap();
        let em = em_type(&s, &fam, Signature::Ar, 1).unwrap();
        let empty = qftp_code::<Index>(&[], Signature::Ar).unwrap();
        let expected: AtomicType = [Atom::Rel(0, vec![Slot::Param(0)])].into_iter().collect();
        assert_eq!(em.get(&empty), Some(&expected));
    }

    #[test]
    fn basing_levels() {
        // a: 0,1,2 with P = {0,1}; b: 1,2 is a subsequence of a
        let s = FiniteStructure::on_range(3, vec![Relation::unary("P", [0, 1])]).unwrap();
        let a = IndexedFamily::sequence(vec![vec![0], vec![1], vec![2]], vec![]).unwrap();
        let b = IndexedFamily::sequence(vec![vec![1], vec![2]], vec![]).unwrap();
        assert!(is_based_on(&s, &b, &a, Signature::Ar, 2).unwrap().holds());
        assert!(is_locally_based_on(&s, &b, &a, Signature::Ar, 2).unwrap().holds());
        assert!(is_em_based_on(&s, &b, &a, Signature::Ar, 2).unwrap().holds());

        // b_0 = b_1 = 0: the pair has pos0 = pos1, which no increasing a-pair has
        let b = IndexedFamily::sequence(vec![vec![0], vec![0]], vec![]).unwrap();
        let a = IndexedFamily::sequence(vec![vec![0], vec![1]], vec![]).unwrap();
        assert!(!is_based_on(&s, &b, &a, Signature::Ar, 2).unwrap().holds());
        assert!(!is_em_based_on(&s, &b, &a, Signature::Ar, 2).unwrap().holds());
    }

    #[test]
    fn extra_atom_breaks_basing_but_not_em_basing() {
        // a-singletons: 0 (P) and 1 (not P); b-singleton 2 has P and Q,
        // strictly more than any a-singleton
        let s = FiniteStructure::on_range(3, vec![Relation::unary("P", [0, 2]), Relation::unary("Q", [2])]).unwrap();
        let a = IndexedFamily::sequence(vec![vec![0], vec![1]], vec![]).unwrap();
        let b = IndexedFamily::sequence(vec![vec![2]], vec![]).unwrap();
        assert!(!is_based_on(&s, &b, &a, Signature::Ar, 1).unwrap().holds());
        assert!(!is_locally_based_on(&s, &b, &a, Signature::Ar, 1).unwrap().holds());
        assert!(is_em_based_on(&s, &b, &a, Signature::Ar, 1).unwrap().holds());
    }

    #[test]
    fn parameters_must_agree() {
        let s = FiniteStructure::on_range(3, vec![]).unwrap();
        let a = IndexedFamily::sequence(vec![vec![0]], vec![1]).unwrap();
        let b = IndexedFamily::sequence(vec![vec![0]], vec![2]).unwrap();
        assert_eq!(is_based_on(&s, &b, &a, Signature::Ar, 1), Err(ModellingError::StructureMismatch));
    }
}
