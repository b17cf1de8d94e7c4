//! Computable cubical sets: functors from the cube category to finite sets.
//!
//! Functors are only ever evaluated on objects drawn from a bounded universe.
//! Tabulated functors are presented on the canonical objects `[n]` and
//! extended to other name sets through the ascending-order renaming.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::cube::{CubeMorphism, Value};
use crate::names::{Completion, FinPerm, Name, NameSet};
use crate::report::{Bounds, Check, Report};
use crate::subsets::{subst_all, SubstSet};

pub trait CubicalSet {
    type Elem: Clone + fmt::Debug;

    /// The elements of `F A`, duplicate-free.
    fn on_object(&self, names: &NameSet) -> Vec<Self::Elem>;

    /// `F f` applied to an element of `F (dom f)`.
    fn on_morphism(&self, f: &CubeMorphism, x: &Self::Elem) -> Self::Elem;

    fn same(&self, x: &Self::Elem, y: &Self::Elem) -> bool;

    /// Largest object the functor can be evaluated on, if bounded.
    fn max_object_size(&self) -> Option<usize> {
        None
    }

    fn show(&self, x: &Self::Elem) -> String {
        format!("{x:?}")
    }
}

impl<F: CubicalSet + ?Sized> CubicalSet for &F {
    type Elem = F::Elem;

    fn on_object(&self, names: &NameSet) -> Vec<Self::Elem> {
        (**self).on_object(names)
    }

    fn on_morphism(&self, f: &CubeMorphism, x: &Self::Elem) -> Self::Elem {
        (**self).on_morphism(f, x)
    }

    fn same(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        (**self).same(x, y)
    }

    fn max_object_size(&self) -> Option<usize> {
        (**self).max_object_size()
    }

    fn show(&self, x: &Self::Elem) -> String {
        (**self).show(x)
    }
}

/// Position of `x` in `xs` up to the functor's element equality.
pub fn position<F: CubicalSet>(functor: &F, xs: &[F::Elem], x: &F::Elem) -> Option<usize> {
    xs.iter().position(|y| functor.same(x, y))
}

/// The ascending-order bijection `A -> [|A|]`.
pub fn canonical_renaming(names: &NameSet) -> CubeMorphism {
    let table = names.iter().enumerate().map(|(k, a)| (a, Value::Name(Name(k as u32)))).collect();
    CubeMorphism::new(names.clone(), NameSet::canonical(names.len()), table)
        .expect("renaming is a bijection")
}

/// The inverse of [`canonical_renaming`].
pub fn canonical_unrenaming(names: &NameSet) -> CubeMorphism {
    canonical_renaming(names).left_inverse().expect("renamings are injections")
}

fn effective_support<F: CubicalSet>(functor: &F, bounds: Bounds) -> usize {
    functor.max_object_size().map_or(bounds.support, |m| m.min(bounds.support))
}

/// The co-representable functor `A ↦ 𝒞(B, A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representable {
    base: NameSet,
}

impl Representable {
    pub fn new(base: NameSet) -> Self {
        Representable { base }
    }

    pub fn base(&self) -> &NameSet {
        &self.base
    }
}

impl CubicalSet for Representable {
    type Elem = CubeMorphism;

    fn on_object(&self, names: &NameSet) -> Vec<CubeMorphism> {
        CubeMorphism::enumerate(&self.base, names)
    }

    fn on_morphism(&self, f: &CubeMorphism, x: &CubeMorphism) -> CubeMorphism {
        f.compose(x).expect("element lives over the domain of f")
    }

    fn same(&self, x: &CubeMorphism, y: &CubeMorphism) -> bool {
        x == y
    }

    fn show(&self, x: &CubeMorphism) -> String {
        x.to_string()
    }
}

/// The cubical set of elements of a 01-substitution set supported in each
/// object, with morphisms acting by substitution followed by a permutation.
#[derive(Debug, Clone)]
pub struct FromSub<X> {
    carrier: X,
    completion: Completion,
    reversed: bool,
}

impl<X: SubstSet> FromSub<X> {
    pub fn new(carrier: X) -> Self {
        FromSub { carrier, completion: Completion::Ascending, reversed: false }
    }

    /// Same functor computed with a different permutation completion.
    pub fn with_completion(self, completion: Completion) -> Self {
        FromSub { completion, ..self }
    }

    /// Same functor computed with the endpoint assignments listed in
    /// descending name order.
    pub fn with_reversed_listing(self) -> Self {
        FromSub { reversed: true, ..self }
    }

    pub fn carrier(&self) -> &X {
        &self.carrier
    }

    /// `π·(x(a1:=i1)⋯(an:=in))` for an explicitly chosen permutation and
    /// assignment list.
    pub fn transport(&self, perm: &FinPerm, assignments: &[(Name, crate::cube::Bit)], x: &X::Elem) -> X::Elem {
        self.carrier.act(perm, &subst_all(&self.carrier, x, assignments))
    }
}

impl<X: SubstSet> CubicalSet for FromSub<X> {
    type Elem = X::Elem;

    fn on_object(&self, names: &NameSet) -> Vec<X::Elem> {
        self.carrier.enumerate_with_support(names)
    }

    fn on_morphism(&self, f: &CubeMorphism, x: &X::Elem) -> X::Elem {
        let mut d = f.decompose_with(self.completion).expect("morphisms are valid");
        if self.reversed {
            d.assignments.reverse();
        }
        self.transport(&d.perm, &d.assignments, x)
    }

    fn same(&self, x: &X::Elem, y: &X::Elem) -> bool {
        self.carrier.equal(x, y)
    }

    fn show(&self, x: &X::Elem) -> String {
        self.carrier.show(x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("object [{n}] is beyond the tabulated range {max}")]
    OutOfRange { n: usize, max: usize },
    #[error("no action given for {morphism}")]
    MissingAction { morphism: String },
    #[error("action of {morphism} has {got} entries, expected {expected}")]
    WrongArity { morphism: String, got: usize, expected: usize },
    #[error("action of {morphism} sends element {index} outside the codomain")]
    OutOfCodomain { morphism: String, index: usize },
    #[error("{morphism} is not a morphism between canonical objects")]
    NotCanonical { morphism: String },
    #[error("object [{n}] lists element {label} twice")]
    Duplicate { n: usize, label: String },
}

/// A functor presented by its values on `[0]..[max]` and action tables for
/// every morphism between them. Actions are stored as index maps.
#[derive(Debug, Clone)]
pub struct Tabulated<E> {
    objects: Vec<Vec<E>>,
    actions: BTreeMap<CubeMorphism, Vec<usize>>,
}

impl<E: Clone + fmt::Debug + PartialEq> Tabulated<E> {
    /// Checks that every canonical morphism has a complete action table.
    pub fn new(objects: Vec<Vec<E>>, actions: BTreeMap<CubeMorphism, Vec<usize>>) -> Result<Self, TableError> {
        let max = objects.len().saturating_sub(1);
        for (n, elems) in objects.iter().enumerate() {
            for (k, e) in elems.iter().enumerate() {
                if elems[..k].contains(e) {
                    return Err(TableError::Duplicate { n, label: format!("{e:?}") });
                }
            }
        }
        for f in actions.keys() {
            let (m, n) = (f.dom().len(), f.cod().len());
            if m > max || n > max {
                return Err(TableError::OutOfRange { n: m.max(n), max });
            }
            if *f.dom() != NameSet::canonical(m) || *f.cod() != NameSet::canonical(n) {
                return Err(TableError::NotCanonical { morphism: f.to_string() });
            }
        }
        for m in 0..=max {
            for n in 0..=max {
                for f in CubeMorphism::enumerate(&NameSet::canonical(m), &NameSet::canonical(n)) {
                    let Some(table) = actions.get(&f) else {
                        return Err(TableError::MissingAction { morphism: f.to_string() });
                    };
                    if table.len() != objects[m].len() {
                        return Err(TableError::WrongArity {
                            morphism: f.to_string(),
                            got: table.len(),
                            expected: objects[m].len(),
                        });
                    }
                    if let Some(index) = table.iter().position(|&t| t >= objects[n].len()) {
                        return Err(TableError::OutOfCodomain { morphism: f.to_string(), index });
                    }
                }
            }
        }
        Ok(Tabulated { objects, actions })
    }

    /// Tabulates any functor on `[0]..[max]`.
    pub fn tabulate<F>(functor: &F, max: usize) -> Self
    where
        F: CubicalSet<Elem = E>,
    {
        let objects: Vec<Vec<E>> = (0..=max).map(|n| functor.on_object(&NameSet::canonical(n))).collect();
        let mut actions = BTreeMap::new();
        for m in 0..=max {
            for n in 0..=max {
                for f in CubeMorphism::enumerate(&NameSet::canonical(m), &NameSet::canonical(n)) {
                    let table = objects[m]
                        .iter()
                        .map(|x| {
                            position(functor, &objects[n], &functor.on_morphism(&f, x))
                                .expect("functor maps into its codomain")
                        })
                        .collect();
                    actions.insert(f, table);
                }
            }
        }
        Tabulated { objects, actions }
    }

    pub fn max(&self) -> usize {
        self.objects.len().saturating_sub(1)
    }

    pub fn elements(&self, n: usize) -> &[E] {
        &self.objects[n]
    }

    pub fn actions(&self) -> &BTreeMap<CubeMorphism, Vec<usize>> {
        &self.actions
    }

    /// Overwrites one entry of an action table; used to build broken tables.
    pub fn set_action(&mut self, f: &CubeMorphism, from: usize, to: usize) {
        self.actions.get_mut(f).expect("canonical morphism")[from] = to;
    }
}

impl<E: Clone + fmt::Debug + PartialEq> CubicalSet for Tabulated<E> {
    type Elem = E;

    fn on_object(&self, names: &NameSet) -> Vec<E> {
        assert!(names.len() <= self.max(), "object {names} is beyond the tabulated range");
        self.objects[names.len()].clone()
    }

    fn on_morphism(&self, f: &CubeMorphism, x: &E) -> E {
        let to = canonical_renaming(f.cod());
        let from = canonical_unrenaming(f.dom());
        let conjugated = to.compose(&f.compose(&from).unwrap()).unwrap();
        let m = f.dom().len();
        let index = self.objects[m].iter().position(|y| y == x).expect("element of the domain object");
        self.objects[f.cod().len()][self.actions[&conjugated][index]].clone()
    }

    fn same(&self, x: &E, y: &E) -> bool {
        x == y
    }

    fn max_object_size(&self) -> Option<usize> {
        Some(self.max())
    }
}

/// A natural transformation given by its components on `[0]..[max]`, aligned
/// with the source functor's enumeration of each canonical object.
#[derive(Debug, Clone)]
pub struct NatTrans<T> {
    components: Vec<Vec<T>>,
}

impl<T: Clone> NatTrans<T> {
    pub fn new(components: Vec<Vec<T>>) -> Self {
        NatTrans { components }
    }

    /// Components computed from a function on canonical objects.
    pub fn from_fn<F, G>(source: &F, max: usize, mut component: G) -> Self
    where
        F: CubicalSet,
        G: FnMut(&NameSet, &F::Elem) -> T,
    {
        let components = (0..=max)
            .map(|n| {
                let names = NameSet::canonical(n);
                source.on_object(&names).iter().map(|x| component(&names, x)).collect()
            })
            .collect();
        NatTrans { components }
    }

    pub fn identity<F: CubicalSet<Elem = T>>(source: &F, max: usize) -> Self {
        NatTrans::from_fn(source, max, |_, x| x.clone())
    }

    pub fn max(&self) -> usize {
        self.components.len().saturating_sub(1)
    }

    pub fn components(&self) -> &[Vec<T>] {
        &self.components
    }

    /// The component at an arbitrary object, obtained by renaming to the
    /// canonical object of the same size and back.
    pub fn apply<F, G>(&self, source: &F, target: &G, names: &NameSet, x: &F::Elem) -> G::Elem
    where
        F: CubicalSet,
        G: CubicalSet<Elem = T>,
    {
        let n = names.len();
        let canonical = NameSet::canonical(n);
        let moved = source.on_morphism(&canonical_renaming(names), x);
        let index = position(source, &source.on_object(&canonical), &moved).expect("element of the source object");
        target.on_morphism(&canonical_unrenaming(names), &self.components[n][index])
    }

    /// `other ∘ self`.
    pub fn then<U: Clone, F, G, H>(&self, other: &NatTrans<U>, source: &F, middle: &G, target: &H) -> NatTrans<U>
    where
        F: CubicalSet,
        G: CubicalSet<Elem = T>,
        H: CubicalSet<Elem = U>,
    {
        NatTrans::from_fn(source, self.max().min(other.max()), |names, x| {
            other.apply(middle, target, names, &self.apply(source, middle, names, x))
        })
    }

    /// Componentwise equality on the common range.
    pub fn same_as<G: CubicalSet<Elem = T>>(&self, other: &NatTrans<T>, target: &G) -> bool {
        self.components.len() == other.components.len()
            && self.components.iter().zip(&other.components).all(|(xs, ys)| {
                xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| target.same(x, y))
            })
    }
}

/// Every composable pair over the bounded objects, and every identity.
pub fn check_functor_laws<F>(functor: &F, bounds: Bounds) -> Report
where
    F: CubicalSet + Sync,
    F::Elem: Send + Sync,
{
    let support = effective_support(functor, bounds);
    let objects = bounds.names().subsets_up_to(support);
    let show = |x: &F::Elem| functor.show(x);

    let mut identity = Check::new("functor:identity");
    let mut typed = Check::new("functor:maps-into-codomain");
    for a in &objects {
        let elems = functor.on_object(a);
        for x in &elems {
            let y = functor.on_morphism(&CubeMorphism::identity(a), x);
            identity.record(functor.same(&y, x), || format!("A={a} x={}", show(x)));
        }
        for b in &objects {
            let targets = functor.on_object(b);
            for f in CubeMorphism::enumerate(a, b) {
                for x in &elems {
                    let y = functor.on_morphism(&f, x);
                    typed.record(position(functor, &targets, &y).is_some(), || {
                        format!("f={f} x={} gives {}", show(x), show(&y))
                    });
                }
            }
        }
    }

    // shard the composition law by domain object; merge in order
    let shards: Vec<Check> = objects
        .par_iter()
        .map(|a| {
            let mut check = Check::new("functor:composition");
            let elems = functor.on_object(a);
            for b in &objects {
                let fs = CubeMorphism::enumerate(a, b);
                let images: Vec<Vec<F::Elem>> =
                    fs.iter().map(|f| elems.iter().map(|x| functor.on_morphism(f, x)).collect()).collect();
                for c in &objects {
                    for g in CubeMorphism::enumerate(b, c) {
                        for (f, fx) in fs.iter().zip(&images) {
                            let gf = g.compose(f).expect("composable");
                            for (x, y) in elems.iter().zip(fx) {
                                let lhs = functor.on_morphism(&gf, x);
                                let rhs = functor.on_morphism(&g, y);
                                check.record(functor.same(&lhs, &rhs), || {
                                    format!("f={f} g={g} x={}: F(g∘f)x={} F(g)F(f)x={}", show(x), show(&lhs), show(&rhs))
                                });
                            }
                        }
                    }
                }
            }
            check
        })
        .collect();
    let mut composition = Check::new("functor:composition");
    for shard in shards {
        composition.merge(shard);
    }

    let mut report = Report::new();
    report.push(identity);
    report.push(typed);
    report.push(composition);
    report
}

/// A commuting square of finite sets `D -p-> A -f-> C`, `D -q-> B -g-> C`,
/// with functions as index maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSquare {
    pub apex: usize,
    pub left: usize,
    pub right: usize,
    pub bottom: usize,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

/// Why a finite square fails to be a pullback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PullbackFailure {
    NotCommuting { apex: usize },
    NoWitness { left: usize, right: usize },
    ManyWitnesses { left: usize, right: usize, witnesses: Vec<usize> },
}

impl FiniteSquare {
    pub fn commutes(&self) -> Result<(), PullbackFailure> {
        match (0..self.apex).find(|&d| self.f[self.p[d]] != self.g[self.q[d]]) {
            Some(apex) => Err(PullbackFailure::NotCommuting { apex }),
            None => Ok(()),
        }
    }

    /// Every pair agreeing in the bottom corner has exactly one witness.
    pub fn is_pullback(&self) -> Result<(), PullbackFailure> {
        self.commutes()?;
        for l in 0..self.left {
            for r in 0..self.right {
                if self.f[l] != self.g[r] {
                    continue;
                }
                let witnesses: Vec<usize> = (0..self.apex).filter(|&d| self.p[d] == l && self.q[d] == r).collect();
                match witnesses.len() {
                    0 => return Err(PullbackFailure::NoWitness { left: l, right: r }),
                    1 => {}
                    _ => return Err(PullbackFailure::ManyWitnesses { left: l, right: r, witnesses }),
                }
            }
        }
        Ok(())
    }

    /// The hypotheses of the retraction criterion: `p'` and `g'` are left
    /// inverses of `p` and `g`, and `q ∘ p' = g' ∘ f`.
    pub fn retractions_commute(&self, p_back: &[usize], g_back: &[usize]) -> bool {
        let retracts = |there: &[usize], back: &[usize]| there.iter().enumerate().all(|(k, &t)| back[t] == k);
        retracts(&self.p, p_back)
            && retracts(&self.g, g_back)
            && (0..self.left).all(|l| self.q[p_back[l]] == g_back[self.f[l]])
    }
}

fn index_map<F: CubicalSet>(functor: &F, f: &CubeMorphism, from: &[F::Elem], to: &[F::Elem]) -> Option<Vec<usize>> {
    from.iter().map(|x| position(functor, to, &functor.on_morphism(f, x))).collect()
}

/// Checks that the functor sends every intersection square
/// `A∩A′ ↪ A, A′ ↪ A∪A′` (with `|A∪A′|` within the support bound) to a
/// pullback of sets, together with the retraction hypotheses that force it.
pub fn check_pullback_preservation<F: CubicalSet>(functor: &F, bounds: Bounds) -> Report {
    let support = effective_support(functor, bounds);
    let objects = bounds.names().subsets_up_to(support);
    let mut retractions = Check::new("pullback:retraction-square");
    let mut pullback = Check::new("pullback:unique-witness");
    for a in &objects {
        for a2 in &objects {
            let union = a.union(a2);
            if union.len() > support || a > a2 {
                continue;
            }
            let meet = a.intersection(a2);
            let incl = |x: &NameSet, y: &NameSet| CubeMorphism::inclusion(x, y).expect("subset");
            let (p, q, f, g) = (incl(&meet, a), incl(&meet, a2), incl(a, &union), incl(a2, &union));
            let (fd, fa, fb, fc) = (
                functor.on_object(&meet),
                functor.on_object(a),
                functor.on_object(a2),
                functor.on_object(&union),
            );
            let maps = (
                index_map(functor, &p, &fd, &fa),
                index_map(functor, &q, &fd, &fb),
                index_map(functor, &f, &fa, &fc),
                index_map(functor, &g, &fb, &fc),
                index_map(functor, &p.left_inverse().unwrap(), &fa, &fd),
                index_map(functor, &g.left_inverse().unwrap(), &fc, &fb),
            );
            let (Some(pm), Some(qm), Some(fm), Some(gm), Some(p_back), Some(g_back)) = maps else {
                pullback.record(false, || format!("A={a} A'={a2}: image leaves the codomain"));
                continue;
            };
            let square = FiniteSquare {
                apex: fd.len(),
                left: fa.len(),
                right: fb.len(),
                bottom: fc.len(),
                p: pm,
                q: qm,
                f: fm,
                g: gm,
            };
            retractions.record(square.retractions_commute(&p_back, &g_back), || format!("A={a} A'={a2}"));
            let verdict = square.is_pullback();
            pullback.record(verdict.is_ok(), || {
                let describe = |k: usize, xs: &[F::Elem]| functor.show(&xs[k]);
                match verdict.unwrap_err() {
                    PullbackFailure::NotCommuting { apex } => {
                        format!("A={a} A'={a2}: square does not commute at {}", describe(apex, &fd))
                    }
                    PullbackFailure::NoWitness { left, right } => format!(
                        "A={a} A'={a2}: pair ({}, {}) has no witness in F({meet})",
                        describe(left, &fa),
                        describe(right, &fb)
                    ),
                    PullbackFailure::ManyWitnesses { left, right, witnesses } => format!(
                        "A={a} A'={a2}: pair ({}, {}) has {} witnesses in F({meet})",
                        describe(left, &fa),
                        describe(right, &fb),
                        witnesses.len()
                    ),
                }
            });
        }
    }
    let mut report = Report::new();
    report.push(retractions);
    report.push(pullback);
    report
}

/// Every naturality square over the bounded objects commutes, and every
/// component lands in the target object.
pub fn check_naturality<T, F, G>(phi: &NatTrans<T>, source: &F, target: &G, bounds: Bounds) -> Report
where
    T: Clone,
    F: CubicalSet,
    G: CubicalSet<Elem = T>,
{
    let support = effective_support(source, bounds).min(effective_support(target, bounds)).min(phi.max());
    let objects = bounds.names().subsets_up_to(support);
    let mut typed = Check::new("natural:component-typed");
    let mut squares = Check::new("natural:squares");
    for a in &objects {
        let elems = source.on_object(a);
        let here = target.on_object(a);
        let phi_a: Vec<T> = elems.iter().map(|x| phi.apply(source, target, a, x)).collect();
        for (x, px) in elems.iter().zip(&phi_a) {
            typed.record(position(target, &here, px).is_some(), || format!("A={a} x={}", source.show(x)));
        }
        for b in &objects {
            for f in CubeMorphism::enumerate(a, b) {
                for (x, px) in elems.iter().zip(&phi_a) {
                    let lhs = phi.apply(source, target, b, &source.on_morphism(&f, x));
                    let rhs = target.on_morphism(&f, px);
                    squares.record(target.same(&lhs, &rhs), || {
                        format!("f={f} x={}: {} vs {}", source.show(x), target.show(&lhs), target.show(&rhs))
                    });
                }
            }
        }
    }
    let mut report = Report::new();
    report.push(typed);
    report.push(squares);
    report
}
