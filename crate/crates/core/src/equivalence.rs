//! From cubical sets back to 01-substitution sets: classes `[A,x]`, their
//! substitution and support, `ε_X`, and transport of morphisms.

use std::fmt;

use thiserror::Error;

use crate::cube::{Bit, CubeMorphism, Value};
use crate::names::{fresh_name, FinPerm, Name, NameSet};
use crate::nominal::NominalSet;
use crate::presheaf::{check_naturality, position, CubicalSet, FromSub, NatTrans, Representable};
use crate::report::{Bounds, Check, Report};
use crate::subsets::{check_morphism, FreeElem, FreeSub, SubstSet};

/// A representative `[A,x]` with `x ∈ F A`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EqClass<E> {
    pub names: NameSet,
    pub elem: E,
}

impl<E> EqClass<E> {
    pub fn new(names: NameSet, elem: E) -> Self {
        EqClass { names, elem }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("class has support {support}, not contained in {target}")]
    SupportNotContained { support: NameSet, target: NameSet },
    #[error("image of {class} has support {support} outside {names}")]
    SupportGrew { class: String, support: NameSet, names: NameSet },
}

/// `I*F`: classes of a cubical set, as a 01-substitution set.
#[derive(Debug, Clone)]
pub struct IStar<F> {
    functor: F,
}

impl<F: CubicalSet> IStar<F> {
    pub fn new(functor: F) -> Self {
        IStar { functor }
    }

    pub fn functor(&self) -> &F {
        &self.functor
    }

    /// Equal iff some `y ∈ F(A∩A′)` restricts to both representatives.
    pub fn class_equal(&self, c1: &EqClass<F::Elem>, c2: &EqClass<F::Elem>) -> bool {
        let meet = c1.names.intersection(&c2.names);
        let left = CubeMorphism::inclusion(&meet, &c1.names).expect("subset");
        let right = CubeMorphism::inclusion(&meet, &c2.names).expect("subset");
        self.functor.on_object(&meet).iter().any(|y| {
            self.functor.same(&self.functor.on_morphism(&left, y), &c1.elem)
                && self.functor.same(&self.functor.on_morphism(&right, y), &c2.elem)
        })
    }

    /// Equal iff both representatives agree after inclusion into `A∪A′`.
    pub fn class_equal_via_union(&self, c1: &EqClass<F::Elem>, c2: &EqClass<F::Elem>) -> bool {
        let join = c1.names.union(&c2.names);
        let left = CubeMorphism::inclusion(&c1.names, &join).expect("subset");
        let right = CubeMorphism::inclusion(&c2.names, &join).expect("subset");
        self.functor.same(&self.functor.on_morphism(&left, &c1.elem), &self.functor.on_morphism(&right, &c2.elem))
    }

    /// `π·[A,x] = [πA, F(π|_A) x]`.
    pub fn i_star_act(&self, p: &FinPerm, c: &EqClass<F::Elem>) -> EqClass<F::Elem> {
        let restricted = CubeMorphism::from_perm(p, &c.names);
        EqClass { names: restricted.cod().clone(), elem: self.functor.on_morphism(&restricted, &c.elem) }
    }

    /// `[A,x](a:=i) = [A−{a}, F(f_{A,a,i}) x]`, and the class itself when `a ∉ A`.
    pub fn i_star_subst(&self, c: &EqClass<F::Elem>, a: Name, i: Bit) -> EqClass<F::Elem> {
        if !c.names.contains(a) {
            return c.clone();
        }
        let f = CubeMorphism::generator_subst(&c.names, a, i);
        EqClass { names: f.cod().clone(), elem: self.functor.on_morphism(&f, &c.elem) }
    }

    /// Names of `A` moved by a swap with `fresh`, which must lie outside `A`.
    pub fn class_support_using(&self, c: &EqClass<F::Elem>, fresh: Name) -> NameSet {
        debug_assert!(!c.names.contains(fresh));
        c.names
            .iter()
            .filter(|&a| !self.class_equal(&self.i_star_act(&FinPerm::swap(a, fresh), c), c))
            .collect()
    }

    pub fn class_support(&self, c: &EqClass<F::Elem>) -> NameSet {
        self.class_support_using(c, fresh_name(&c.names))
    }

    /// The unique `x ∈ F A` with `[A,x]` equal to `c`: zero-substitute the
    /// names of the representative outside `A`, then include.
    pub fn canonical_representative(&self, c: &EqClass<F::Elem>, target: &NameSet) -> Result<F::Elem, EquivError> {
        let support = self.class_support(c);
        if !support.is_subset(target) {
            return Err(EquivError::SupportNotContained { support, target: target.clone() });
        }
        let kept = c.names.intersection(target);
        let table = c
            .names
            .iter()
            .map(|b| (b, if kept.contains(b) { Value::Name(b) } else { Value::Bit(Bit::Zero) }))
            .collect();
        let zeroed = CubeMorphism::new(c.names.clone(), kept.clone(), table).expect("valid restriction");
        let incl = CubeMorphism::inclusion(&kept, target).expect("subset");
        let y = self.functor.on_morphism(&zeroed, &c.elem);
        Ok(self.functor.on_morphism(&incl, &y))
    }

    fn bounded(&self, names: &NameSet) -> bool {
        self.functor.max_object_size().map_or(true, |m| names.len() <= m)
    }
}

impl<F: CubicalSet> NominalSet for IStar<F> {
    type Elem = EqClass<F::Elem>;

    fn act(&self, p: &FinPerm, x: &Self::Elem) -> Self::Elem {
        self.i_star_act(p, x)
    }

    fn support(&self, x: &Self::Elem) -> NameSet {
        self.class_support(x)
    }

    fn equal(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.class_equal(x, y)
    }

    fn show(&self, x: &Self::Elem) -> String {
        format!("[{}, {}]", x.names, self.functor.show(&x.elem))
    }
}

impl<F: CubicalSet> SubstSet for IStar<F> {
    fn subst(&self, x: &Self::Elem, a: Name, i: Bit) -> Self::Elem {
        self.i_star_subst(x, a, i)
    }

    /// `[S,x]` for `x ∈ F S`; every class supported in `S` has exactly one
    /// such representative.
    fn enumerate_with_support(&self, names: &NameSet) -> Vec<Self::Elem> {
        assert!(self.bounded(names), "object {names} is beyond the functor's range");
        self.functor.on_object(names).into_iter().map(|x| EqClass::new(names.clone(), x)).collect()
    }
}

impl<E: fmt::Display> fmt::Display for EqClass<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.names, self.elem)
    }
}

/// `[A,x] ↦ [A, φ_A x]`.
pub fn i_star_morphism<F, G>(phi: &NatTrans<G::Elem>, source: &F, target: &G, c: &EqClass<F::Elem>) -> EqClass<G::Elem>
where
    F: CubicalSet,
    G: CubicalSet,
{
    EqClass::new(c.names.clone(), phi.apply(source, target, &c.names, &c.elem))
}

/// `ε_X [A,x] = x`.
pub fn epsilon<X: SubstSet>(c: &EqClass<X::Elem>) -> X::Elem {
    c.elem.clone()
}

/// `x ↦ [supp x, x]`.
pub fn epsilon_inverse<X: SubstSet>(carrier: &X, x: &X::Elem) -> EqClass<X::Elem> {
    EqClass::new(carrier.support(x), x.clone())
}

/// `φ_[n] x = canonical_representative(g [[n],x], [n])` for `n ≤ max`.
pub fn transport_morphism<F, G, M>(g: M, source: &F, target: &G, max: usize) -> Result<NatTrans<G::Elem>, EquivError>
where
    F: CubicalSet,
    G: CubicalSet,
    M: Fn(&EqClass<F::Elem>) -> EqClass<G::Elem>,
{
    let classes = IStar::new(target);
    let mut components = Vec::with_capacity(max + 1);
    for n in 0..=max {
        let names = NameSet::canonical(n);
        let mut column = Vec::new();
        for x in source.on_object(&names) {
            let image = g(&EqClass::new(names.clone(), x));
            let rep = classes.canonical_representative(&image, &names).map_err(|err| match err {
                EquivError::SupportNotContained { support, .. } => EquivError::SupportGrew {
                    class: classes.show(&image),
                    support,
                    names: names.clone(),
                },
                other => other,
            })?;
            column.push(rep);
        }
        components.push(column);
    }
    Ok(NatTrans::new(components))
}

fn classes_up_to<X: SubstSet>(carrier: &X, bounds: Bounds) -> Vec<X::Elem> {
    bounds.objects().iter().flat_map(|a| carrier.enumerate_with_support(a)).collect()
}

/// `ε_X` is a well-defined bijection on each bounded enumeration, with
/// inverse `x ↦ [supp x, x]`, equivariant and substitution-preserving.
pub fn check_epsilon<X: SubstSet + Clone>(carrier: &X, bounds: Bounds) -> Report {
    let classes = IStar::new(FromSub::new(carrier.clone()));
    let show_c = |c: &EqClass<X::Elem>| classes.show(c);

    let mut bijective = Check::new("epsilon:bijective");
    for a in bounds.objects() {
        let images: Vec<X::Elem> = classes.enumerate_with_support(&a).iter().map(epsilon::<X>).collect();
        let targets = carrier.enumerate_with_support(&a);
        for (k, y) in images.iter().enumerate() {
            let fresh = !images[..k].iter().any(|z| carrier.equal(y, z));
            bijective.record(fresh && targets.iter().any(|t| carrier.equal(t, y)), || {
                format!("A={a}: image {} repeated or outside X(A)", carrier.show(y))
            });
        }
        for t in &targets {
            bijective.record(images.iter().any(|y| carrier.equal(t, y)), || {
                format!("A={a}: {} is not hit", carrier.show(t))
            });
        }
    }

    let all = classes_up_to(&classes, bounds);
    let mut reflects = Check::new("epsilon:well-defined-injective");
    for c1 in &all {
        for c2 in &all {
            let lhs = classes.class_equal(c1, c2);
            let rhs = carrier.equal(&epsilon::<X>(c1), &epsilon::<X>(c2));
            reflects.record(lhs == rhs, || format!("{} vs {}: classes equal={lhs}, images equal={rhs}", show_c(c1), show_c(c2)));
        }
    }

    let mut inverse = Check::new("epsilon:inverse");
    for c in &all {
        let back = epsilon_inverse(carrier, &epsilon::<X>(c));
        inverse.record(classes.class_equal(&back, c), || show_c(c));
    }

    let names = bounds.names_plus(1);
    let mut equivariant = Check::new("epsilon:equivariant");
    let mut substitution = Check::new("epsilon:preserves-subst");
    for c in &all {
        let x = epsilon::<X>(c);
        for p in bounds.perms_on(&names) {
            let lhs = epsilon::<X>(&classes.act(&p, c));
            equivariant.record(carrier.equal(&lhs, &carrier.act(&p, &x)), || format!("{} p={p}", show_c(c)));
        }
        for a in names.iter() {
            for i in Bit::BOTH {
                let lhs = epsilon::<X>(&classes.subst(c, a, i));
                substitution.record(carrier.equal(&lhs, &carrier.subst(&x, a, i)), || {
                    format!("{} ({a}:={i})", show_c(c))
                });
            }
        }
    }

    let mut report = Report::new();
    for c in [bijective, reflects, inverse, equivariant, substitution] {
        report.push(c);
    }
    report
}

/// `x ↦ [A,x]` is a natural isomorphism `F ≅ I_*(I*F)` on `[0]..[max]`,
/// inverse to `c ↦ canonical_representative(c, A)`.
pub fn check_unit_round_trip<F>(functor: &F, max: usize, bounds: Bounds) -> Report
where
    F: CubicalSet + Clone,
{
    let classes = IStar::new(functor.clone());
    let back = FromSub::new(classes.clone());
    let bounds = Bounds { universe: bounds.universe.min(max), support: bounds.support.min(max), ..bounds };

    let eta = NatTrans::from_fn(functor, max, |names, x| EqClass::new(names.clone(), x.clone()));
    let theta = NatTrans::from_fn(&back, max, |names, c| {
        classes.canonical_representative(c, names).expect("enumerated classes are supported in their object")
    });

    let mut report = Report::new();
    for mut check in check_naturality(&eta, functor, &back, bounds).checks {
        check.name = format!("unit:{}", check.name);
        report.push(check);
    }
    for mut check in check_naturality(&theta, &back, functor, bounds).checks {
        check.name = format!("counit:{}", check.name);
        report.push(check);
    }

    let mut left = Check::new("unit:inverse-on-F");
    let there_and_back = eta.then(&theta, functor, &back, functor);
    left.record(there_and_back.same_as(&NatTrans::identity(functor, max), functor), || "θ∘η differs from id".into());
    let mut right = Check::new("unit:inverse-on-classes");
    let back_and_there = theta.then(&eta, &back, functor, &back);
    right.record(back_and_there.same_as(&NatTrans::identity(&back, max), &back), || "η∘θ differs from id".into());
    report.push(left);
    report.push(right);

    // every class supported in A, whatever its representative, is hit
    let mut surjective = Check::new("unit:surjective");
    let representatives = classes_up_to(&classes, bounds);
    for a in bounds.objects() {
        let hits = back.on_object(&a);
        for c in &representatives {
            if !classes.class_support(c).is_subset(&a) {
                continue;
            }
            let x = classes.canonical_representative(c, &a).expect("support checked");
            let ok = classes.class_equal(&EqClass::new(a.clone(), x.clone()), c)
                && position(&back, &hits, &EqClass::new(a.clone(), x)).is_some();
            surjective.record(ok, || format!("A={a} class {}", classes.show(c)));
        }
    }
    report.push(surjective);
    report
}

/// `transport(I*φ) = φ` componentwise, and `I*φ` is a well-defined
/// morphism of 01-substitution sets.
pub fn check_faithful<F, G>(phi: &NatTrans<G::Elem>, source: &F, target: &G, bounds: Bounds) -> Report
where
    F: CubicalSet + Clone,
    G: CubicalSet + Clone,
{
    let max = phi.max();
    let from = IStar::new(source.clone());
    let to = IStar::new(target.clone());
    let bounds = Bounds { universe: bounds.universe.min(max), support: bounds.support.min(max), ..bounds };
    let lifted = |c: &EqClass<F::Elem>| i_star_morphism(phi, source, target, c);

    let mut report = check_morphism(lifted, &from, &to, bounds);
    let mut well_defined = Check::new("i-star:well-defined");
    let all = classes_up_to(&from, bounds);
    for c1 in &all {
        for c2 in &all {
            if from.class_equal(c1, c2) {
                well_defined.record(to.class_equal(&lifted(c1), &lifted(c2)), || {
                    format!("{} = {}", from.show(c1), from.show(c2))
                });
            }
        }
    }
    report.push(well_defined);

    let mut recovers = Check::new("transport:recovers-components");
    match transport_morphism(lifted, source, target, max) {
        Ok(back) => recovers.record(back.same_as(phi, target), || "transport(I*φ) differs from φ".into()),
        Err(err) => recovers.record(false, || err.to_string()),
    }
    report.push(recovers);
    report
}

/// `transport(g)` is natural and `I*(transport g) = g` on the enumerated
/// classes.
pub fn check_full<F, G, M>(g: M, source: &F, target: &G, max: usize, bounds: Bounds) -> Report
where
    F: CubicalSet + Clone,
    G: CubicalSet + Clone,
    M: Fn(&EqClass<F::Elem>) -> EqClass<G::Elem>,
{
    let from = IStar::new(source.clone());
    let to = IStar::new(target.clone());
    let bounds = Bounds { universe: bounds.universe.min(max), support: bounds.support.min(max), ..bounds };
    let mut report = Report::new();
    let mut agrees = Check::new("transport:i-star-agrees");
    match transport_morphism(&g, source, target, max) {
        Ok(phi) => {
            report.extend(check_naturality(&phi, source, target, bounds));
            for c in classes_up_to(&from, bounds) {
                let lhs = i_star_morphism(&phi, source, target, &c);
                let rhs = g(&c);
                agrees.record(to.class_equal(&lhs, &rhs), || {
                    format!("{}: {} vs {}", from.show(&c), to.show(&lhs), to.show(&rhs))
                });
            }
        }
        Err(err) => agrees.record(false, || err.to_string()),
    }
    report.push(agrees);
    report
}

/// `[A, x : B → A] ↦ (b_k ↦ x β_k)` with `β_k` the k-th name of `B`.
pub fn representable_to_free(base: &NameSet, c: &EqClass<CubeMorphism>) -> FreeElem {
    FreeElem::from_pairs(base.iter().enumerate().map(|(k, b)| (k as u32, c.elem.at(b).expect("total on base"))))
}

/// `e ↦ [supp e, β_k ↦ e(b_k)]`.
pub fn free_to_representable(base: &NameSet, e: &FreeElem) -> EqClass<CubeMorphism> {
    let names: NameSet = e.assignment().values().filter_map(|v| v.as_name()).collect();
    let table = base.iter().zip(e.assignment().values()).map(|(b, &v)| (b, v)).collect();
    EqClass::new(names.clone(), CubeMorphism::new(base.clone(), names, table).expect("generators map injectively"))
}

/// `I*(Representable(B)) ≅ FreeSub(|B|)` through the explicit bijection.
pub fn check_free_oracle(base: &NameSet, bounds: Bounds) -> Report {
    let classes = IStar::new(Representable::new(base.clone()));
    let free = FreeSub::new(base.len());
    let there = |c: &EqClass<CubeMorphism>| representable_to_free(base, c);
    let back = |e: &FreeElem| free_to_representable(base, e);

    let mut report = Report::new();
    for mut check in check_morphism(there, &classes, &free, bounds).checks {
        check.name = format!("oracle:to-free:{}", check.name);
        report.push(check);
    }
    for mut check in check_morphism(back, &free, &classes, bounds).checks {
        check.name = format!("oracle:from-free:{}", check.name);
        report.push(check);
    }
    let mut bijection = Check::new("oracle:bijective");
    for a in bounds.objects() {
        let cs = classes.enumerate_with_support(&a);
        let es = free.enumerate_with_support(&a);
        bijection.record(cs.len() == es.len(), || format!("A={a}: {} classes, {} elements", cs.len(), es.len()));
        for c in &cs {
            bijection.record(classes.class_equal(&back(&there(c)), c), || classes.show(c));
            bijection.record(es.contains(&there(c)), || format!("A={a}: {} leaves FreeSub(A)", classes.show(c)));
        }
        for e in &es {
            bijection.record(there(&back(e)) == *e, || e.to_string());
        }
    }
    report.push(bijection);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::Tabulated;
    use crate::subsets::{check_sub_laws, Discrete, ProductSub};

    fn a(i: u32) -> Name {
        Name(i)
    }

    fn set(ix: &[u32]) -> NameSet {
        ix.iter().map(|&i| a(i)).collect()
    }

    /// An element `b ↦ v` of `Representable({a9})` over `names`.
    fn point(names: &[u32], v: Value) -> EqClass<CubeMorphism> {
        let names = set(names);
        EqClass::new(names.clone(), CubeMorphism::new(set(&[9]), names, [(a(9), v)].into()).unwrap())
    }

    fn rep1() -> IStar<Representable> {
        IStar::new(Representable::new(set(&[9])))
    }

    const ZERO: Value = Value::Bit(Bit::Zero);

    #[test]
    fn class_equality_examples() {
        let i = rep1();
        let x = point(&[0], Value::Name(a(0)));
        assert!(i.class_equal(&x, &x));
        assert!(!i.class_equal(&x, &point(&[2], Value::Name(a(2)))));
        assert!(i.class_equal(&point(&[0], ZERO), &point(&[], ZERO)));
        assert!(i.class_equal_via_union(&point(&[0], ZERO), &point(&[], ZERO)));
    }

    #[test]
    fn both_equality_tests_agree() {
        let i = IStar::new(Representable::new(set(&[8, 9])));
        let all = classes_up_to(&i, Bounds::new(3, 2));
        for c1 in &all {
            for c2 in &all {
                assert_eq!(i.class_equal(c1, c2), i.class_equal_via_union(c1, c2));
            }
        }
    }

    #[test]
    fn substitution_and_action_examples() {
        let i = rep1();
        let x = point(&[2], Value::Name(a(2)));
        assert_eq!(i.i_star_subst(&x, a(2), Bit::Zero), point(&[], ZERO));
        assert_eq!(i.i_star_subst(&x, a(5), Bit::One), x);
        let y = point(&[0], Value::Name(a(0)));
        assert!(i.class_equal(&i.i_star_act(&FinPerm::swap(a(0), a(2)), &y), &x));
        assert!(i.class_equal(&i.i_star_act(&FinPerm::swap(a(4), a(5)), &y), &y));
    }

    #[test]
    fn support_examples() {
        let i = rep1();
        let x = point(&[0], Value::Name(a(0)));
        assert_eq!(i.class_support(&x), set(&[0]));
        assert_eq!(i.class_support(&point(&[0], ZERO)), set(&[]));
        // a second fresh name gives the same answer
        let z = point(&[0, 1], Value::Name(a(1)));
        assert_eq!(i.class_support_using(&z, a(7)), i.class_support(&z));
        assert_eq!(i.class_support(&z), set(&[1]));
    }

    #[test]
    fn canonical_representatives() {
        let i = rep1();
        let x = point(&[0], Value::Name(a(0)));
        assert_eq!(i.canonical_representative(&x, &set(&[0])).unwrap(), x.elem);
        let z = point(&[0, 1], Value::Name(a(0)));
        assert_eq!(i.canonical_representative(&z, &set(&[0])).unwrap(), point(&[0], Value::Name(a(0))).elem);
        assert_eq!(i.canonical_representative(&point(&[], ZERO), &set(&[0])).unwrap(), point(&[0], ZERO).elem);
        assert!(matches!(
            i.canonical_representative(&x, &set(&[1])),
            Err(EquivError::SupportNotContained { .. })
        ));
    }

    #[test]
    fn classes_satisfy_the_laws() {
        let b = Bounds::new(3, 3);
        assert!(check_sub_laws(&rep1(), b).passed());
        let r = check_sub_laws(&IStar::new(FromSub::new(FreeSub::new(1))), b);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn epsilon_round_trip() {
        let b = Bounds::new(3, 3);
        let x = FreeElem::from_pairs([(0, Value::Name(a(0)))]);
        assert_eq!(epsilon::<FreeSub>(&EqClass::new(set(&[0]), x.clone())), x);
        let r = check_epsilon(&FreeSub::new(1), b);
        assert!(r.passed(), "{r}");
        assert!(check_epsilon(&ProductSub::new(FreeSub::new(1), Discrete::new(2)), b).passed());
    }

    #[test]
    fn unit_round_trip_on_tables() {
        let tab = Tabulated::tabulate(&Representable::new(set(&[9])), 2);
        let r = check_unit_round_trip(&tab, 2, Bounds::new(3, 2));
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn transport_recovers_precomposition() {
        let source = Representable::new(set(&[9]));
        let target = Representable::new(set(&[8]));
        let g = CubeMorphism::new(set(&[8]), set(&[9]), [(a(8), Value::Name(a(9)))].into()).unwrap();
        let phi = NatTrans::from_fn(&source, 3, |_, x: &CubeMorphism| x.compose(&g).unwrap());
        let r = check_faithful(&phi, &source, &target, Bounds::new(3, 3));
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn transport_of_discrete_endomap() {
        let d = FromSub::new(Discrete::new(3));
        let g = |c: &EqClass<usize>| EqClass::new(c.names.clone(), (c.elem + 1) % 3);
        let phi = transport_morphism(g, &d, &d, 2).unwrap();
        assert!(phi.components().iter().all(|col| col == &vec![1, 2, 0]));
        assert!(check_full(g, &d, &d, 2, Bounds::new(3, 2)).passed());
    }

    #[test]
    fn transport_rejects_support_growth() {
        // sends every class to one supported in a0
        let f = FromSub::new(FreeSub::new(1));
        let g = |_: &EqClass<FreeElem>| EqClass::new(set(&[0]), FreeElem::from_pairs([(0, Value::Name(a(0)))]));
        assert!(matches!(transport_morphism(g, &f, &f, 1), Err(EquivError::SupportGrew { .. })));
    }

    #[test]
    fn free_oracle() {
        let r = check_free_oracle(&set(&[8, 9]), Bounds::new(3, 3));
        assert!(r.passed(), "{r}");
    }
}
