//! 01-substitution sets: the substitution contract, shipped carriers, and
//! exhaustive law checkers.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::cube::{Bit, Value};
use crate::names::{fresh_name, FinPerm, Name, NameSet};
use crate::nominal::NominalSet;
use crate::report::{Bounds, Check, Report};

/// A nominal set with a 01-substitution `x(a:=i)` and enumeration by support.
pub trait SubstSet: NominalSet {
    fn subst(&self, x: &Self::Elem, a: Name, i: Bit) -> Self::Elem;

    /// All elements whose support lies inside `names`, without duplicates.
    fn enumerate_with_support(&self, names: &NameSet) -> Vec<Self::Elem>;
}

impl<X: SubstSet + ?Sized> SubstSet for &X {
    fn subst(&self, x: &Self::Elem, a: Name, i: Bit) -> Self::Elem {
        (**self).subst(x, a, i)
    }

    fn enumerate_with_support(&self, names: &NameSet) -> Vec<Self::Elem> {
        (**self).enumerate_with_support(names)
    }
}

/// Substitutes `x(a1:=i1)...(an:=in)` left to right.
pub fn subst_all<X: SubstSet>(carrier: &X, x: &X::Elem, assignments: &[(Name, Bit)]) -> X::Elem {
    assignments.iter().fold(x.clone(), |acc, &(a, i)| carrier.subst(&acc, a, i))
}

/// A finite set with trivial action and substitution. Elements are `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Discrete {
    size: usize,
}

impl Discrete {
    pub fn new(size: usize) -> Self {
        Discrete { size }
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

impl NominalSet for Discrete {
    type Elem = usize;

    fn act(&self, _: &FinPerm, x: &usize) -> usize {
        *x
    }

    fn support(&self, _: &usize) -> NameSet {
        NameSet::new()
    }

    fn equal(&self, x: &usize, y: &usize) -> bool {
        x == y
    }

    fn show(&self, x: &usize) -> String {
        format!("#{x}")
    }
}

impl SubstSet for Discrete {
    fn subst(&self, x: &usize, _: Name, _: Bit) -> usize {
        *x
    }

    fn enumerate_with_support(&self, _: &NameSet) -> Vec<usize> {
        (0..self.size).collect()
    }
}

/// A generator of a free 01-substitution set. Printed as `b<index>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen(pub u32);

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{}", self.0)
    }
}

/// An element of the free 01-substitution set on some generators: each
/// generator goes to a name or an endpoint, distinct generators to distinct
/// names. Printed as `[b0=>a1, b1=>0]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeElem {
    assignment: BTreeMap<Gen, Value>,
}

impl FreeElem {
    /// Panics if two generators share a name.
    pub fn new(assignment: BTreeMap<Gen, Value>) -> Self {
        assert!(
            assignment.values().filter_map(|v| v.as_name()).all_unique(),
            "free elements are injective on names"
        );
        FreeElem { assignment }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, Value)>) -> Self {
        FreeElem::new(pairs.into_iter().map(|(g, v)| (Gen(g), v)).collect())
    }

    pub fn assignment(&self) -> &BTreeMap<Gen, Value> {
        &self.assignment
    }

    pub fn get(&self, g: Gen) -> Option<Value> {
        self.assignment.get(&g).copied()
    }
}

impl fmt::Display for FreeElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.assignment.iter().map(|(g, v)| format!("{g}=>{v}")).join(", "))
    }
}

/// The free 01-substitution set on generators `b0..b(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeSub {
    gens: Vec<Gen>,
}

impl FreeSub {
    pub fn new(generators: usize) -> Self {
        FreeSub { gens: (0..generators as u32).map(Gen).collect() }
    }

    pub fn generators(&self) -> &[Gen] {
        &self.gens
    }
}

impl NominalSet for FreeSub {
    type Elem = FreeElem;

    fn act(&self, p: &FinPerm, x: &FreeElem) -> FreeElem {
        let assignment = x
            .assignment
            .iter()
            .map(|(&g, &v)| match v {
                Value::Name(a) => (g, Value::Name(p.apply(a))),
                bit => (g, bit),
            })
            .collect();
        FreeElem { assignment }
    }

    fn support(&self, x: &FreeElem) -> NameSet {
        x.assignment.values().filter_map(|v| v.as_name()).collect()
    }

    fn equal(&self, x: &FreeElem, y: &FreeElem) -> bool {
        x == y
    }

    fn show(&self, x: &FreeElem) -> String {
        x.to_string()
    }
}

impl SubstSet for FreeSub {
    fn subst(&self, x: &FreeElem, a: Name, i: Bit) -> FreeElem {
        let assignment = x
            .assignment
            .iter()
            .map(|(&g, &v)| if v == Value::Name(a) { (g, Value::Bit(i)) } else { (g, v) })
            .collect();
        FreeElem { assignment }
    }

    fn enumerate_with_support(&self, names: &NameSet) -> Vec<FreeElem> {
        if self.gens.is_empty() {
            return vec![FreeElem { assignment: BTreeMap::new() }];
        }
        let mut choices: Vec<Value> = names.iter().map(Value::Name).collect();
        choices.extend(Bit::BOTH.map(Value::Bit));
        self.gens
            .iter()
            .map(|_| choices.iter().copied())
            .multi_cartesian_product()
            .filter(|vals| vals.iter().filter_map(|v| v.as_name()).all_unique())
            .map(|vals| FreeElem { assignment: self.gens.iter().copied().zip(vals).collect() })
            .collect()
    }
}

/// Binary product with componentwise structure.
#[derive(Debug, Clone)]
pub struct ProductSub<X, Y> {
    pub left: X,
    pub right: Y,
}

impl<X, Y> ProductSub<X, Y> {
    pub fn new(left: X, right: Y) -> Self {
        ProductSub { left, right }
    }
}

impl<X: NominalSet, Y: NominalSet> NominalSet for ProductSub<X, Y> {
    type Elem = (X::Elem, Y::Elem);

    fn act(&self, p: &FinPerm, (x, y): &Self::Elem) -> Self::Elem {
        (self.left.act(p, x), self.right.act(p, y))
    }

    fn support(&self, (x, y): &Self::Elem) -> NameSet {
        self.left.support(x).union(&self.right.support(y))
    }

    fn equal(&self, (x, y): &Self::Elem, (x2, y2): &Self::Elem) -> bool {
        self.left.equal(x, x2) && self.right.equal(y, y2)
    }

    fn show(&self, (x, y): &Self::Elem) -> String {
        format!("({}, {})", self.left.show(x), self.right.show(y))
    }
}

impl<X: SubstSet, Y: SubstSet> SubstSet for ProductSub<X, Y> {
    fn subst(&self, (x, y): &Self::Elem, a: Name, i: Bit) -> Self::Elem {
        (self.left.subst(x, a, i), self.right.subst(y, a, i))
    }

    fn enumerate_with_support(&self, names: &NameSet) -> Vec<Self::Elem> {
        let rights = self.right.enumerate_with_support(names);
        self.left
            .enumerate_with_support(names)
            .into_iter()
            .cartesian_product(rights)
            .collect()
    }
}

/// Whether `x` occurs in `xs` up to carrier equality.
pub fn contains<X: NominalSet>(carrier: &X, xs: &[X::Elem], x: &X::Elem) -> bool {
    xs.iter().any(|y| carrier.equal(x, y))
}

/// Checks the nominal-set axioms, the exactness of `support`, the four
/// substitution laws and the enumeration contract on every element supported in the universe.
///
/// Substituted names range over the universe plus one fresh name.
pub fn check_sub_laws<X: SubstSet>(carrier: &X, bounds: Bounds) -> Report {
    let universe = bounds.names();
    let names = bounds.names_plus(1);
    let perms = bounds.perms_on(&names);
    let elems = carrier.enumerate_with_support(&universe);
    let show = |x: &X::Elem| carrier.show(x);

    let mut report = Report::new();

    let mut enum_support = Check::new("enumeration:support");
    let mut enum_distinct = Check::new("enumeration:distinct");
    let mut enum_monotone = Check::new("enumeration:monotone");
    for (k, x) in elems.iter().enumerate() {
        enum_support.record(carrier.support(x).is_subset(&universe), || show(x));
        enum_distinct.record(!elems[..k].iter().any(|y| carrier.equal(x, y)), || show(x));
    }
    for smaller in universe.subsets_up_to(universe.len()) {
        for x in carrier.enumerate_with_support(&smaller) {
            enum_monotone.record(contains(carrier, &elems, &x), || format!("{} from {smaller}", show(&x)));
        }
    }
    report.push(enum_support);
    report.push(enum_distinct);
    report.push(enum_monotone);

    let mut act_id = Check::new("nominal:act-identity");
    let mut act_comp = Check::new("nominal:act-compose");
    let mut supp_exact = Check::new("nominal:support-exact");
    let mut supp_eqv = Check::new("nominal:support-equivariant");
    for x in &elems {
        act_id.record(carrier.equal(&carrier.act(&FinPerm::identity(), x), x), || show(x));
        for (k, p) in perms.iter().enumerate() {
            let q = &perms[(k * 7 + 3) % perms.len()];
            let lhs = carrier.act(&p.compose(q), x);
            let rhs = carrier.act(p, &carrier.act(q, x));
            act_comp.record(carrier.equal(&lhs, &rhs), || format!("x={} p={p} q={q}", show(x)));
            let moved = carrier.support(&carrier.act(p, x));
            supp_eqv.record(moved == p.image(&carrier.support(x)), || format!("x={} p={p}", show(x)));
        }
        let supp = carrier.support(x);
        let outside = fresh_name(&names.union(&supp));
        // every swap outside the support fixes x ...
        let pool: Vec<Name> = names.difference(&supp).iter().chain([outside]).collect();
        for (&b, &c) in pool.iter().tuple_combinations() {
            let sw = FinPerm::swap(b, c);
            supp_exact.record(carrier.equal(&carrier.act(&sw, x), x), || {
                format!("{sw} moves {} although both names are outside its support", show(x))
            });
        }
        // ... and every name in it is needed
        for b in supp.iter() {
            let sw = FinPerm::swap(b, outside);
            supp_exact.record(!carrier.equal(&carrier.act(&sw, x), x), || {
                format!("{sw} fixes {} although {b} is in its support", show(x))
            });
        }
    }
    report.push(act_id);
    report.push(act_comp);
    report.push(supp_exact);
    report.push(supp_eqv);

    let mut fresh_after = Check::new("subst:fresh-after");
    let mut fresh_trivial = Check::new("subst:fresh-trivial");
    let mut commute = Check::new("subst:commute");
    let mut equivariant = Check::new("subst:equivariant");
    for x in &elems {
        for a in names.iter() {
            for i in Bit::BOTH {
                let xa = carrier.subst(x, a, i);
                fresh_after.record(carrier.is_fresh(a, &xa), || format!("x={} a={a} i={i} gives {}", show(x), show(&xa)));
                if carrier.is_fresh(a, x) {
                    fresh_trivial.record(carrier.equal(&xa, x), || format!("x={} a={a} i={i} gives {}", show(x), show(&xa)));
                }
                for b in names.iter().filter(|&b| b != a) {
                    for j in Bit::BOTH {
                        let lhs = carrier.subst(&xa, b, j);
                        let rhs = carrier.subst(&carrier.subst(x, b, j), a, i);
                        commute.record(carrier.equal(&lhs, &rhs), || {
                            format!("x={} (a={a}:={i}) (b={b}:={j}): {} vs {}", show(x), show(&lhs), show(&rhs))
                        });
                    }
                }
                for p in &perms {
                    let lhs = carrier.act(p, &xa);
                    let rhs = carrier.subst(&carrier.act(p, x), p.apply(a), i);
                    equivariant.record(carrier.equal(&lhs, &rhs), || format!("x={} a={a} i={i} p={p}", show(x)));
                }
            }
        }
    }
    report.push(fresh_after);
    report.push(fresh_trivial);
    report.push(commute);
    report.push(equivariant);
    report
}

/// Checks that `f` is equivariant and preserves substitution on the
/// elements of `source` supported in the universe.
pub fn check_morphism<X, Y, F>(f: F, source: &X, target: &Y, bounds: Bounds) -> Report
where
    X: SubstSet,
    Y: SubstSet,
    F: Fn(&X::Elem) -> Y::Elem,
{
    let names = bounds.names_plus(1);
    let perms = bounds.perms_on(&names);
    let elems = source.enumerate_with_support(&bounds.names());
    let mut equivariant = Check::new("morphism:equivariant");
    let mut preserves = Check::new("morphism:preserves-subst");
    for x in &elems {
        let fx = f(x);
        for p in &perms {
            let lhs = f(&source.act(p, x));
            let rhs = target.act(p, &fx);
            equivariant.record(target.equal(&lhs, &rhs), || {
                format!("x={} p={p}: f(p·x)={} but p·f(x)={}", source.show(x), target.show(&lhs), target.show(&rhs))
            });
        }
        for a in names.iter() {
            for i in Bit::BOTH {
                let lhs = f(&source.subst(x, a, i));
                let rhs = target.subst(&fx, a, i);
                preserves.record(target.equal(&lhs, &rhs), || {
                    format!("x={} a={a} i={i}: {} vs {}", source.show(x), target.show(&lhs), target.show(&rhs))
                });
            }
        }
    }
    let mut report = Report::new();
    report.push(equivariant);
    report.push(preserves);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{morphism_count, CubeMorphism};

    fn a(i: u32) -> Name {
        Name(i)
    }

    fn n(i: u32) -> Value {
        Value::Name(a(i))
    }

    const ZERO: Value = Value::Bit(Bit::Zero);

    #[test]
    fn free_substitution_examples() {
        let x = FreeSub::new(1);
        let e = FreeElem::from_pairs([(0, n(0))]);
        assert_eq!(x.subst(&e, a(0), Bit::Zero), FreeElem::from_pairs([(0, ZERO)]));
        let e = FreeElem::from_pairs([(0, n(2))]);
        assert_eq!(x.subst(&e, a(0), Bit::One), e);
        assert_eq!(Discrete::new(3).subst(&2, a(0), Bit::One), 2);
    }

    #[test]
    fn display_format() {
        let e = FreeElem::from_pairs([(0, n(1)), (1, ZERO)]);
        assert_eq!(e.to_string(), "[b0=>a1, b1=>0]");
    }

    #[test]
    fn shipped_carriers_pass() {
        let b = Bounds::new(3, 3);
        for report in [
            check_sub_laws(&FreeSub::new(2), b),
            check_sub_laws(&FreeSub::new(0), b),
            check_sub_laws(&Discrete::new(3), b),
            check_sub_laws(&ProductSub::new(FreeSub::new(1), Discrete::new(2)), b),
        ] {
            assert!(report.passed(), "{report}");
        }
    }

    /// Substitution that overwrites the first generator even when the name is
    /// fresh, so substituting a fresh name is not trivial.
    struct Overwriting(FreeSub);

    impl NominalSet for Overwriting {
        type Elem = FreeElem;
        fn act(&self, p: &FinPerm, x: &FreeElem) -> FreeElem {
            self.0.act(p, x)
        }
        fn support(&self, x: &FreeElem) -> NameSet {
            self.0.support(x)
        }
        fn equal(&self, x: &FreeElem, y: &FreeElem) -> bool {
            x == y
        }
    }

    impl SubstSet for Overwriting {
        fn subst(&self, x: &FreeElem, a: Name, i: Bit) -> FreeElem {
            let mut out = self.0.subst(x, a, i);
            if out.assignment[&Gen(0)].as_name().is_none() {
                out.assignment.insert(Gen(0), Value::Bit(i));
            }
            out
        }
        fn enumerate_with_support(&self, names: &NameSet) -> Vec<FreeElem> {
            self.0.enumerate_with_support(names)
        }
    }

    #[test]
    fn broken_instance_is_caught() {
        let report = check_sub_laws(&Overwriting(FreeSub::new(1)), Bounds::new(3, 3));
        assert!(!report.check("subst:fresh-trivial").unwrap().passed());
        assert!(report.check("subst:fresh-after").unwrap().passed());
        assert!(!report.check("subst:fresh-trivial").unwrap().witnesses.is_empty());
    }

    #[test]
    fn free_enumeration_matches_morphism_count() {
        for gens in 0..=2 {
            for size in 0..=3 {
                let names = NameSet::canonical(size);
                let elems = FreeSub::new(gens).enumerate_with_support(&names);
                assert_eq!(elems.len() as u64, morphism_count(gens, size));
                let other: NameSet = (10..10 + gens as u32).map(Name).collect();
                assert_eq!(elems.len(), CubeMorphism::enumerate(&other, &names).len());
            }
        }
    }

    #[test]
    fn morphism_checks() {
        let b = Bounds::new(3, 3);
        let x = FreeSub::new(1);
        assert!(check_morphism(|e: &FreeElem| e.clone(), &x, &x, b).passed());
        assert!(check_morphism(|_: &FreeElem| 0usize, &x, &Discrete::new(1), b).passed());
        let special = FreeElem::from_pairs([(0, n(0))]);
        let bent = |e: &FreeElem| if *e == special { FreeElem::from_pairs([(0, ZERO)]) } else { e.clone() };
        let report = check_morphism(bent, &x, &x, b);
        assert!(!report.check("morphism:equivariant").unwrap().passed());
    }
}
