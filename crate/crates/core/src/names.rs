//! Names, finite name sets and finitely supported permutations.
//!
//! Names are indices into a fixed countable enumeration `a0, a1, a2, ...`.
//! Permutations are stored without fixed points, so two permutations are
//! equal as group elements exactly when they are structurally equal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

/// An atom. Printed as `a<index>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(pub u32);

impl Name {
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

/// A finite set of names. Printed as `{a0,a1}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NameSet(BTreeSet<Name>);

impl NameSet {
    pub fn new() -> Self {
        NameSet(BTreeSet::new())
    }

    /// The canonical object `[n] = {a0, ..., a(n-1)}`.
    pub fn canonical(n: usize) -> Self {
        (0..n as u32).map(Name).collect()
    }

    pub fn singleton(a: Name) -> Self {
        let mut s = NameSet::new();
        s.insert(a);
        s
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: Name) -> bool {
        self.0.contains(&a)
    }

    pub fn insert(&mut self, a: Name) -> bool {
        self.0.insert(a)
    }

    pub fn remove(&mut self, a: Name) -> bool {
        self.0.remove(&a)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Name> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &NameSet) -> NameSet {
        NameSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &NameSet) -> NameSet {
        NameSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &NameSet) -> NameSet {
        NameSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &NameSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &NameSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn with(&self, a: Name) -> NameSet {
        let mut s = self.clone();
        s.insert(a);
        s
    }

    pub fn without(&self, a: Name) -> NameSet {
        let mut s = self.clone();
        s.remove(a);
        s
    }

    /// All subsets with at most `max` elements, smallest first.
    pub fn subsets_up_to(&self, max: usize) -> Vec<NameSet> {
        let elems: Vec<Name> = self.iter().collect();
        (0..=max.min(elems.len()))
            .flat_map(|k| elems.iter().copied().combinations(k).map(NameSet::from_iter))
            .collect()
    }

    /// Position of `a` in ascending order, if present.
    pub fn rank(&self, a: Name) -> Option<usize> {
        self.0.iter().position(|&b| b == a)
    }
}

impl FromIterator<Name> for NameSet {
    fn from_iter<I: IntoIterator<Item = Name>>(iter: I) -> Self {
        NameSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a NameSet {
    type Item = Name;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, Name>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

impl fmt::Display for NameSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.iter().join(","))
    }
}

/// The least-index name not in `avoid`.
pub fn fresh_name(avoid: &NameSet) -> Name {
    (0..).map(Name).find(|a| !avoid.contains(*a)).expect("name space exhausted")
}

/// `n` distinct names outside `avoid`, in ascending order.
pub fn fresh_names(avoid: &NameSet, n: usize) -> Vec<Name> {
    (0..).map(Name).filter(|a| !avoid.contains(*a)).take(n).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("partial bijection is not injective: {first} and {second} both map to {target}")]
    NotInjective { first: Name, second: Name, target: Name },
}

/// How unmatched range names are sent back to unmatched domain names when a
/// partial bijection is completed to a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Completion {
    #[default]
    Ascending,
    /// Pairs ascending range leftovers with descending domain leftovers.
    Descending,
}

/// A finite permutation of the names, identity outside its carrier.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinPerm {
    map: BTreeMap<Name, Name>,
}

impl FinPerm {
    pub fn identity() -> Self {
        FinPerm::default()
    }

    fn normalized(map: BTreeMap<Name, Name>) -> Self {
        FinPerm { map: map.into_iter().filter(|(k, v)| k != v).collect() }
    }

    /// The transposition `(a b)`; the identity when `a == b`.
    pub fn swap(a: Name, b: Name) -> Self {
        if a == b {
            return FinPerm::identity();
        }
        FinPerm { map: [(a, b), (b, a)].into_iter().collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, a: Name) -> Name {
        self.map.get(&a).copied().unwrap_or(a)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &FinPerm) -> FinPerm {
        let carrier = self.carrier().union(&other.carrier());
        FinPerm::normalized(carrier.iter().map(|a| (a, self.apply(other.apply(a)))).collect())
    }

    pub fn inverse(&self) -> FinPerm {
        FinPerm { map: self.map.iter().map(|(&k, &v)| (v, k)).collect() }
    }

    /// Names moved by the permutation.
    pub fn carrier(&self) -> NameSet {
        self.map.keys().copied().collect()
    }

    pub fn image(&self, names: &NameSet) -> NameSet {
        names.iter().map(|a| self.apply(a)).collect()
    }

    /// Whether every name in `names` is a fixed point.
    pub fn fixes(&self, names: &NameSet) -> bool {
        names.iter().all(|a| self.apply(a) == a)
    }

    /// Extends an injective partial map to a permutation with carrier inside
    /// its domain and range.
    pub fn from_partial_bijection(pairs: &BTreeMap<Name, Name>) -> Result<FinPerm, PermError> {
        FinPerm::from_partial_bijection_with(pairs, Completion::Ascending)
    }

    pub fn from_partial_bijection_with(
        pairs: &BTreeMap<Name, Name>,
        completion: Completion,
    ) -> Result<FinPerm, PermError> {
        let mut seen: BTreeMap<Name, Name> = BTreeMap::new();
        for (&k, &v) in pairs {
            if let Some(&first) = seen.get(&v) {
                return Err(PermError::NotInjective { first, second: k, target: v });
            }
            seen.insert(v, k);
        }
        let domain: NameSet = pairs.keys().copied().collect();
        let range: NameSet = pairs.values().copied().collect();
        // range names needing an image, domain names needing a preimage
        let dangling = range.difference(&domain);
        let mut unreached: Vec<Name> = domain.difference(&range).iter().collect();
        if completion == Completion::Descending {
            unreached.reverse();
        }
        let mut map = pairs.clone();
        map.extend(dangling.iter().zip(unreached));
        Ok(FinPerm::normalized(map))
    }

    /// All permutations of `names` (as permutations of the name space).
    pub fn all_on(names: &NameSet) -> Vec<FinPerm> {
        let elems: Vec<Name> = names.iter().collect();
        elems
            .iter()
            .copied()
            .permutations(elems.len())
            .map(|img| FinPerm::normalized(elems.iter().copied().zip(img).collect()))
            .collect()
    }

    pub(crate) fn cycles(&self) -> Vec<Vec<Name>> {
        let mut done = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.map.keys() {
            if done.contains(&start) {
                continue;
            }
            let mut cycle = vec![start];
            done.insert(start);
            let mut next = self.apply(start);
            while next != start {
                cycle.push(next);
                done.insert(next);
                next = self.apply(next);
            }
            out.push(cycle);
        }
        out
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(cycles: &[Vec<Name>]) -> Option<FinPerm> {
        let mut map = BTreeMap::new();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                if map.insert(a, b).is_some() {
                    return None;
                }
            }
        }
        Some(FinPerm::normalized(map))
    }
}

impl fmt::Display for FinPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "()");
        }
        for cycle in self.cycles() {
            write!(f, "({})", cycle.iter().join(" "))?;
        }
        Ok(())
    }
}
