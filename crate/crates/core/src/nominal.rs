//! Nominal sets as carriers with a permutation action and least supports,
//! plus (n-ary) name abstraction.

use std::fmt;

use crate::cube::Bit;
use crate::names::{fresh_name, fresh_names, FinPerm, Name, NameSet};
use crate::subsets::SubstSet;

/// A nominal set, given as a carrier object acting on its elements.
///
/// Equality goes through the carrier because some carriers (equivalence
/// classes, abstractions) have non-structural equality.
pub trait NominalSet {
    type Elem: Clone + fmt::Debug;

    fn act(&self, p: &FinPerm, x: &Self::Elem) -> Self::Elem;

    /// The least finite supporting set.
    fn support(&self, x: &Self::Elem) -> NameSet;

    fn equal(&self, x: &Self::Elem, y: &Self::Elem) -> bool;

    fn is_fresh(&self, a: Name, x: &Self::Elem) -> bool {
        !self.support(x).contains(a)
    }

    fn show(&self, x: &Self::Elem) -> String {
        format!("{x:?}")
    }
}

impl<X: NominalSet + ?Sized> NominalSet for &X {
    type Elem = X::Elem;

    fn act(&self, p: &FinPerm, x: &Self::Elem) -> Self::Elem {
        (**self).act(p, x)
    }

    fn support(&self, x: &Self::Elem) -> NameSet {
        (**self).support(x)
    }

    fn equal(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        (**self).equal(x, y)
    }

    fn show(&self, x: &Self::Elem) -> String {
        (**self).show(x)
    }
}

/// The nominal set of names itself.
#[derive(Debug, Clone, Copy, Default)]
pub struct Atoms;

impl NominalSet for Atoms {
    type Elem = Name;

    fn act(&self, p: &FinPerm, x: &Name) -> Name {
        p.apply(*x)
    }

    fn support(&self, x: &Name) -> NameSet {
        NameSet::singleton(*x)
    }

    fn equal(&self, x: &Name, y: &Name) -> bool {
        x == y
    }

    fn show(&self, x: &Name) -> String {
        x.to_string()
    }
}

/// `⟨a1,...,an⟩x` with distinct binders.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Abstraction<E> {
    binders: Vec<Name>,
    body: E,
}

impl<E> Abstraction<E> {
    /// Panics if the binders repeat.
    pub fn new(binders: Vec<Name>, body: E) -> Self {
        let distinct: NameSet = binders.iter().copied().collect();
        assert_eq!(distinct.len(), binders.len(), "abstraction binders must be distinct");
        Abstraction { binders, body }
    }

    pub fn unary(binder: Name, body: E) -> Self {
        Abstraction { binders: vec![binder], body }
    }

    pub fn binders(&self) -> &[Name] {
        &self.binders
    }

    pub fn body(&self) -> &E {
        &self.body
    }

    pub fn arity(&self) -> usize {
        self.binders.len()
    }

    pub fn binder_set(&self) -> NameSet {
        self.binders.iter().copied().collect()
    }
}

/// `[𝔸]^n X`: n-ary name abstractions over a carrier, with the lifted
/// substitution pushed under the binders.
#[derive(Debug, Clone)]
pub struct BoxSet<X> {
    inner: X,
    arity: usize,
}

impl<X: NominalSet> BoxSet<X> {
    pub fn new(inner: X, arity: usize) -> Self {
        BoxSet { inner, arity }
    }

    pub fn unary(inner: X) -> Self {
        BoxSet::new(inner, 1)
    }

    pub fn inner(&self) -> &X {
        &self.inner
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Renames the binders to `fresh`, which must avoid the support of the
    /// abstraction and be distinct.
    pub fn rename(&self, abs: &Abstraction<X::Elem>, fresh: &[Name]) -> Abstraction<X::Elem> {
        let pairs = abs.binders.iter().copied().zip(fresh.iter().copied()).collect();
        let p = FinPerm::from_partial_bijection(&pairs).expect("fresh binders are distinct");
        Abstraction { binders: fresh.to_vec(), body: self.inner.act(&p, &abs.body) }
    }

    /// α-equivalence tested by renaming both sides to the given fresh names.
    pub fn alpha_eq_using(
        &self,
        x: &Abstraction<X::Elem>,
        y: &Abstraction<X::Elem>,
        fresh: &[Name],
    ) -> bool {
        if x.arity() != y.arity() || fresh.len() != x.arity() {
            return false;
        }
        let rx = self.rename(x, fresh);
        let ry = self.rename(y, fresh);
        self.inner.equal(&rx.body, &ry.body)
    }

    /// Names that are fresh for both abstractions, their binders and bodies.
    pub fn common_fresh(&self, xs: &[&Abstraction<X::Elem>], avoid: &NameSet) -> Vec<Name> {
        let mut used = avoid.clone();
        for x in xs {
            used = used.union(&self.inner.support(&x.body)).union(&x.binder_set());
        }
        fresh_names(&used, self.arity)
    }

    /// Renames a binder equal to `avoid` away from it.
    fn freshen_against(&self, abs: &Abstraction<X::Elem>, avoid: Name) -> Abstraction<X::Elem> {
        if !abs.binders.contains(&avoid) {
            return abs.clone();
        }
        let used = self
            .inner
            .support(&abs.body)
            .union(&abs.binder_set())
            .with(avoid);
        let replacement = fresh_name(&used);
        let renamed: Vec<Name> =
            abs.binders.iter().map(|&b| if b == avoid { replacement } else { b }).collect();
        self.rename(abs, &renamed)
    }
}

impl<X: NominalSet> NominalSet for BoxSet<X> {
    type Elem = Abstraction<X::Elem>;

    fn act(&self, p: &FinPerm, x: &Self::Elem) -> Self::Elem {
        Abstraction {
            binders: x.binders.iter().map(|&b| p.apply(b)).collect(),
            body: self.inner.act(p, &x.body),
        }
    }

    fn support(&self, x: &Self::Elem) -> NameSet {
        self.inner.support(&x.body).difference(&x.binder_set())
    }

    fn equal(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        let fresh = self.common_fresh(&[x, y], &NameSet::new());
        self.alpha_eq_using(x, y, &fresh)
    }

    fn show(&self, x: &Self::Elem) -> String {
        let binders: Vec<String> = x.binders.iter().map(Name::to_string).collect();
        format!("<{}>{}", binders.join(","), self.inner.show(&x.body))
    }
}

impl<X: SubstSet> BoxSet<X> {
    /// `(⟨a⃗⟩x)(a′:=i) = ⟨a⃗⟩(x(a′:=i))`, renaming a binder equal to `a′` first.
    pub fn abs_subst(&self, abs: &Abstraction<X::Elem>, a: Name, i: Bit) -> Abstraction<X::Elem> {
        let abs = self.freshen_against(abs, a);
        Abstraction { body: self.inner.subst(&abs.body, a, i), binders: abs.binders }
    }
}

impl<X: SubstSet> SubstSet for BoxSet<X> {
    fn subst(&self, x: &Self::Elem, a: Name, i: Bit) -> Self::Elem {
        self.abs_subst(x, a, i)
    }

    /// Binders are the least names outside `names`; distinct bodies give
    /// distinct abstractions.
    fn enumerate_with_support(&self, names: &NameSet) -> Vec<Self::Elem> {
        let binders = fresh_names(names, self.arity);
        let scope = names.union(&binders.iter().copied().collect());
        self.inner
            .enumerate_with_support(&scope)
            .into_iter()
            .map(|body| Abstraction { binders: binders.clone(), body })
            .collect()
    }
}

/// `support(x)` through a carrier.
pub fn support<X: NominalSet>(carrier: &X, x: &X::Elem) -> NameSet {
    carrier.support(x)
}

/// `a # x` through a carrier.
pub fn is_fresh<X: NominalSet>(carrier: &X, a: Name, x: &X::Elem) -> bool {
    carrier.is_fresh(a, x)
}
