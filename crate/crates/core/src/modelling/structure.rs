//! Finite relational structures and atomic types of tuples over parameters.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::ModellingError;

/// Element id of a finite structure.
pub type Elem = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
    pub tuples: BTreeSet<Vec<Elem>>,
}

impl Relation {
    pub fn new(name: impl Into<String>, arity: usize, tuples: impl IntoIterator<Item = Vec<Elem>>) -> Self {
        Relation { name: name.into(), arity, tuples: tuples.into_iter().collect() }
    }

    pub fn unary(name: impl Into<String>, members: impl IntoIterator<Item = Elem>) -> Self {
        Relation::new(name, 1, members.into_iter().map(|e| vec![e]))
    }
}

/// A finite universe with named relations, sorted by name.
#[derive(Clone, Debug)]
pub struct FiniteStructure {
    universe: Vec<Elem>,
    members: HashSet<Elem>,
    relations: Vec<Relation>,
}

impl PartialEq for FiniteStructure {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.relations == other.relations
    }
}

impl FiniteStructure {
    pub fn new(universe: Vec<Elem>, mut relations: Vec<Relation>) -> Result<Self, ModellingError> {
        let members: HashSet<Elem> = universe.iter().copied().collect();
        relations.sort_by(|a, b| a.name.cmp(&b.name));
        for w in relations.windows(2) {
            if w[0].name == w[1].name {
                return Err(ModellingError::DuplicateRelation(w[0].name.clone()));
            }
        }
        for r in &relations {
            for t in &r.tuples {
                if t.len() != r.arity {
                    return Err(ModellingError::RelationArity { name: r.name.clone(), arity: r.arity, len: t.len() });
                }
                if let Some(e) = t.iter().find(|e| !members.contains(e)) {
                    return Err(ModellingError::NotInUniverse(*e));
                }
            }
        }
        Ok(FiniteStructure { universe, members, relations })
    }

    /// Universe `0..n` with the given relations.
    pub fn on_range(n: u32, relations: Vec<Relation>) -> Result<Self, ModellingError> {
        FiniteStructure::new((0..n).collect(), relations)
    }

    pub fn universe(&self) -> &[Elem] {
        &self.universe
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.members.contains(&e)
    }

    pub fn check_elements<'a>(&self, elems: impl IntoIterator<Item = &'a Elem>) -> Result<(), ModellingError> {
        match elems.into_iter().find(|e| !self.contains(**e)) {
            Some(e) => Err(ModellingError::NotInUniverse(*e)),
            None => Ok(()),
        }
    }

    /// Largest relation arity, at least 2 (equality is binary).
    ///
    /// Every atom mentions at most this many slots, so indiscernibility
    /// checked at this index arity already implies it at every arity.
    pub fn saturation_arity(&self) -> usize {
        self.relations.iter().map(|r| r.arity).max().unwrap_or(0).max(2)
    }

    /// All atoms over `tuple ∪ params` that hold.
    pub fn atomic_type(&self, tuple: &[Elem], params: &[Elem]) -> Result<AtomicType, ModellingError> {
        self.check_elements(tuple.iter().chain(params))?;
        Ok(self.atomic_type_unchecked(tuple, params))
    }

    pub(crate) fn atomic_type_unchecked(&self, tuple: &[Elem], params: &[Elem]) -> AtomicType {
        let slots: Vec<(Slot, Elem)> = tuple
            .iter()
            .enumerate()
            .map(|(i, &e)| (Slot::Pos(i as u32), e))
            .chain(params.iter().enumerate().map(|(i, &e)| (Slot::Param(i as u32), e)))
            .collect();
        let mut atoms = BTreeSet::new();
        for (i, &(a, x)) in slots.iter().enumerate() {
            for &(b, y) in &slots[i + 1..] {
                atoms.insert(if x == y { Atom::Eq(a, b) } else { Atom::Neq(a, b) });
            }
        }
        let mut where_is: HashMap<Elem, Vec<Slot>> = HashMap::new();
        for &(s, e) in &slots {
            where_is.entry(e).or_default().push(s);
        }
        let mut present: Vec<Elem> = where_is.keys().copied().collect();
        present.sort_unstable();
        for (ri, rel) in self.relations.iter().enumerate() {
            let candidates = (present.len() as u128).checked_pow(rel.arity as u32).unwrap_or(u128::MAX);
            if candidates < rel.tuples.len() as u128 {
                let mut it = crate::tuples::Tuples::new(present.len(), rel.arity, rel.arity);
                let mut t = Vec::with_capacity(rel.arity);
                while let Some(p) = it.next_tuple() {
                    t.clear();
                    t.extend(p.iter().map(|&i| present[i]));
                    if rel.tuples.contains(&t) {
                        add_readings(&mut atoms, ri, &t, &where_is);
                    }
                }
            } else {
                for t in &rel.tuples {
                    if t.iter().all(|e| where_is.contains_key(e)) {
                        add_readings(&mut atoms, ri, t, &where_is);
                    }
                }
            }
        }
        AtomicType(atoms)
    }

    pub fn display_type<'a>(&'a self, ty: &'a AtomicType) -> impl fmt::Display + 'a {
        TypeDisplay { structure: self, ty }
    }
}

/// Every way of reading the relation tuple `t` as a list of slots.
fn add_readings(atoms: &mut BTreeSet<Atom>, rel: usize, t: &[Elem], where_is: &HashMap<Elem, Vec<Slot>>) {
    let choices: Vec<&Vec<Slot>> = t.iter().map(|e| &where_is[e]).collect();
    let mut pick = vec![0usize; choices.len()];
    loop {
        atoms.insert(Atom::Rel(rel as u32, pick.iter().zip(&choices).map(|(&p, c)| c[p]).collect()));
        let mut i = pick.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// A variable place in an atom: a tuple position or a parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Pos(u32),
    Param(u32),
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Pos(i) => write!(f, "pos{i}"),
            Slot::Param(i) => write!(f, "param{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Eq(Slot, Slot),
    Neq(Slot, Slot),
    /// Relation (by index into the structure's sorted relation list) applied
    /// to slots.
    Rel(u32, Vec<Slot>),
}

/// The set of atoms holding of a tuple over a parameter list. Relation atoms
/// are positive only; equality is recorded both ways.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomicType(BTreeSet<Atom>);

impl AtomicType {
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.0.contains(atom)
    }

    pub fn is_subset(&self, other: &AtomicType) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersect(&self, other: &AtomicType) -> AtomicType {
        AtomicType(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn insert(&mut self, atom: Atom) -> bool {
        self.0.insert(atom)
    }
}

impl FromIterator<Atom> for AtomicType {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        AtomicType(iter.into_iter().collect())
    }
}

struct TypeDisplay<'a> {
    structure: &'a FiniteStructure,
    ty: &'a AtomicType,
}

impl fmt::Display for TypeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, atom) in self.ty.atoms().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match atom {
                Atom::Eq(a, b) => write!(f, "{a} = {b}")?,
                Atom::Neq(a, b) => write!(f, "{a} != {b}")?,
                Atom::Rel(r, args) => {
                    let name = &self.structure.relations[*r as usize].name;
                    let symbolic = !name.chars().any(|c| c.is_alphanumeric());
                    if symbolic && args.len() == 2 {
                        write!(f, "{} {name} {}", args[0], args[1])?;
                    } else {
                        let list: Vec<String> = args.iter().map(|s| s.to_string()).collect();
                        write!(f, "{name}({})", list.join(","))?;
                    }
                }
            }
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_order(n: u32) -> Relation {
        Relation::new("<", 2, (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b])))
    }

    #[test]
    fn order_atoms() {
        let s = FiniteStructure::on_range(5, vec![linear_order(5)]).unwrap();
        let ty = s.atomic_type(&[1, 3], &[]).unwrap();
        assert!(ty.contains(&Atom::Rel(0, vec![Slot::Pos(0), Slot::Pos(1)])));
        assert!(!ty.contains(&Atom::Rel(0, vec![Slot::Pos(1), Slot::Pos(0)])));
        assert!(ty.contains(&Atom::Neq(Slot::Pos(0), Slot::Pos(1))));
        assert_eq!(s.display_type(&ty).to_string(), "{pos0 != pos1, pos0 < pos1}");
        let ty = s.atomic_type(&[2, 2], &[]).unwrap();
        assert!(ty.contains(&Atom::Eq(Slot::Pos(0), Slot::Pos(1))));
    }

    #[test]
    fn parameter_atoms() {
        let s = FiniteStructure::on_range(5, vec![Relation::unary("P", [0, 2, 4])]).unwrap();
        let ty = s.atomic_type(&[3], &[0]).unwrap();
        assert!(ty.contains(&Atom::Rel(0, vec![Slot::Param(0)])));
        assert!(!ty.contains(&Atom::Rel(0, vec![Slot::Pos(0)])));
    }

    #[test]
    fn repeated_elements_give_every_reading() {
        let s = FiniteStructure::on_range(3, vec![Relation::new("R", 2, [vec![1, 1]])]).unwrap();
        let ty = s.atomic_type(&[1, 1], &[]).unwrap();
        let rel_atoms = ty.atoms().filter(|a| matches!(a, Atom::Rel(..))).count();
        assert_eq!(rel_atoms, 4);
    }

    #[test]
    fn validation() {
        let s = FiniteStructure::on_range(2, vec![]).unwrap();
        assert_eq!(s.atomic_type(&[5], &[]), Err(ModellingError::NotInUniverse(5)));
        assert!(FiniteStructure::on_range(2, vec![Relation::new("R", 2, [vec![0]])]).is_err());
        assert!(FiniteStructure::on_range(2, vec![Relation::unary("P", [7])]).is_err());
        assert!(FiniteStructure::on_range(2, vec![Relation::unary("P", [0]), Relation::unary("P", [1])]).is_err());
    }
}
