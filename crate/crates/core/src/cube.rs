//! The cube category: finite name sets as objects, morphisms `A -> B + {0,1}`
//! that are injective on the names they hit.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::names::{Completion, FinPerm, Name, NameSet};

/// An endpoint of the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub const BOTH: [Bit; 2] = [Bit::Zero, Bit::One];

    pub fn flip(self) -> Bit {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bit::Zero => write!(f, "0"),
            Bit::One => write!(f, "1"),
        }
    }
}

/// Either a name or an endpoint; the values of a cube morphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Name(Name),
    Bit(Bit),
}

impl Value {
    pub fn as_name(self) -> Option<Name> {
        match self {
            Value::Name(a) => Some(a),
            Value::Bit(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Name(a) => a.fmt(f),
            Value::Bit(i) => i.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("{first} and {second} both map to {target}")]
    Clash { first: Name, second: Name, target: Name },
    #[error("{name} is in the domain but has no value")]
    Partial { name: Name },
    #[error("{name} is not in the domain {dom}")]
    StrayEntry { name: Name, dom: NameSet },
    #[error("value {value} of {name} is not in the codomain {cod}")]
    OutsideCodomain { name: Name, value: Name, cod: NameSet },
    #[error("cannot compose: codomain {cod} differs from domain {dom}")]
    Mismatch { cod: NameSet, dom: NameSet },
    #[error("morphism is not an injection: {name} maps to {bit}")]
    NotInjection { name: Name, bit: Bit },
    #[error("{sub} is not a subset of {sup}")]
    NotSubset { sub: NameSet, sup: NameSet },
}

/// A morphism of the cube category with explicit domain and codomain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeMorphism {
    dom: NameSet,
    cod: NameSet,
    table: BTreeMap<Name, Value>,
}

impl CubeMorphism {
    /// Checked constructor.
    pub fn new(dom: NameSet, cod: NameSet, table: BTreeMap<Name, Value>) -> Result<Self, CubeError> {
        check_table(&dom, &cod, &table)?;
        Ok(CubeMorphism { dom, cod, table })
    }

    pub fn dom(&self) -> &NameSet {
        &self.dom
    }

    pub fn cod(&self) -> &NameSet {
        &self.cod
    }

    pub fn table(&self) -> &BTreeMap<Name, Value> {
        &self.table
    }

    pub fn at(&self, a: Name) -> Option<Value> {
        self.table.get(&a).copied()
    }

    /// Totality, codomain and name-part injectivity.
    pub fn validate(&self) -> bool {
        check_table(&self.dom, &self.cod, &self.table).is_ok()
    }

    pub fn identity(names: &NameSet) -> Self {
        CubeMorphism {
            dom: names.clone(),
            cod: names.clone(),
            table: names.iter().map(|a| (a, Value::Name(a))).collect(),
        }
    }

    /// `g ∘ f` where `self = g`.
    pub fn compose(&self, f: &CubeMorphism) -> Result<CubeMorphism, CubeError> {
        if f.cod != self.dom {
            return Err(CubeError::Mismatch { cod: f.cod.clone(), dom: self.dom.clone() });
        }
        let table = f
            .table
            .iter()
            .map(|(&a, &v)| {
                let w = match v {
                    Value::Name(b) => self.table[&b],
                    bit => bit,
                };
                (a, w)
            })
            .collect();
        Ok(CubeMorphism { dom: f.dom.clone(), cod: self.cod.clone(), table })
    }

    /// The names of the domain sent to names (`f⁻¹B`).
    pub fn name_part(&self) -> NameSet {
        self.table.iter().filter(|(_, v)| matches!(v, Value::Name(_))).map(|(&a, _)| a).collect()
    }

    /// Names of the codomain that are hit.
    pub fn image(&self) -> NameSet {
        self.table.values().filter_map(|v| v.as_name()).collect()
    }

    pub fn is_injection(&self) -> bool {
        self.table.values().all(|v| matches!(v, Value::Name(_)))
    }

    /// The retraction `C -> A` of an injection `A -> C`, sending names outside
    /// the image to `0`.
    pub fn left_inverse(&self) -> Result<CubeMorphism, CubeError> {
        if let Some((&name, &v)) = self.table.iter().find(|(_, v)| matches!(v, Value::Bit(_))) {
            let Value::Bit(bit) = v else { unreachable!() };
            return Err(CubeError::NotInjection { name, bit });
        }
        let back: BTreeMap<Name, Name> =
            self.table.iter().map(|(&a, v)| (v.as_name().unwrap(), a)).collect();
        let table = self
            .cod
            .iter()
            .map(|c| (c, back.get(&c).map_or(Value::Bit(Bit::Zero), |&a| Value::Name(a))))
            .collect();
        Ok(CubeMorphism { dom: self.cod.clone(), cod: self.dom.clone(), table })
    }

    /// `f_{A,a,i} : A -> A - {a}`; the identity when `a ∉ A`.
    pub fn generator_subst(names: &NameSet, a: Name, i: Bit) -> CubeMorphism {
        let cod = names.without(a);
        let table = names
            .iter()
            .map(|b| (b, if b == a { Value::Bit(i) } else { Value::Name(b) }))
            .collect();
        CubeMorphism { dom: names.clone(), cod, table }
    }

    /// `π|_A : A -> πA`.
    pub fn from_perm(p: &FinPerm, names: &NameSet) -> CubeMorphism {
        CubeMorphism {
            dom: names.clone(),
            cod: p.image(names),
            table: names.iter().map(|a| (a, Value::Name(p.apply(a)))).collect(),
        }
    }

    pub fn inclusion(sub: &NameSet, sup: &NameSet) -> Result<CubeMorphism, CubeError> {
        if !sub.is_subset(sup) {
            return Err(CubeError::NotSubset { sub: sub.clone(), sup: sup.clone() });
        }
        Ok(CubeMorphism {
            dom: sub.clone(),
            cod: sup.clone(),
            table: sub.iter().map(|a| (a, Value::Name(a))).collect(),
        })
    }

    /// Splits the morphism into a permutation agreeing with it on the name
    /// part and the endpoint assignments of the remaining names, ascending.
    pub fn decompose(&self) -> Result<Decomposition, CubeError> {
        self.decompose_with(Completion::Ascending)
    }

    pub fn decompose_with(&self, completion: Completion) -> Result<Decomposition, CubeError> {
        check_table(&self.dom, &self.cod, &self.table)?;
        let pairs: BTreeMap<Name, Name> =
            self.table.iter().filter_map(|(&a, v)| v.as_name().map(|b| (a, b))).collect();
        let perm = FinPerm::from_partial_bijection_with(&pairs, completion)
            .expect("validated morphisms are injective on names");
        let assignments = self
            .table
            .iter()
            .filter_map(|(&a, v)| match v {
                Value::Bit(i) => Some((a, *i)),
                Value::Name(_) => None,
            })
            .collect();
        Ok(Decomposition { perm, assignments })
    }

    /// Every morphism `dom -> cod`, in a fixed order without duplicates.
    pub fn enumerate(dom: &NameSet, cod: &NameSet) -> Vec<CubeMorphism> {
        let mut choices: Vec<Value> = cod.iter().map(Value::Name).collect();
        choices.push(Value::Bit(Bit::Zero));
        choices.push(Value::Bit(Bit::One));
        let names: Vec<Name> = dom.iter().collect();
        if names.is_empty() {
            return vec![CubeMorphism { dom: dom.clone(), cod: cod.clone(), table: BTreeMap::new() }];
        }
        names
            .iter()
            .map(|_| choices.iter().copied())
            .multi_cartesian_product()
            .filter(|vals| vals.iter().filter_map(|v| v.as_name()).all_unique())
            .map(|vals| CubeMorphism {
                dom: dom.clone(),
                cod: cod.clone(),
                table: names.iter().copied().zip(vals).collect(),
            })
            .collect()
    }

    /// Every injection `dom -> cod`.
    pub fn enumerate_injections(dom: &NameSet, cod: &NameSet) -> Vec<CubeMorphism> {
        let names: Vec<Name> = dom.iter().collect();
        cod.iter()
            .permutations(names.len())
            .map(|img| CubeMorphism {
                dom: dom.clone(),
                cod: cod.clone(),
                table: names.iter().copied().zip(img.into_iter().map(Value::Name)).collect(),
            })
            .collect()
    }
}

fn check_table(dom: &NameSet, cod: &NameSet, table: &BTreeMap<Name, Value>) -> Result<(), CubeError> {
    if let Some(&name) = table.keys().find(|a| !dom.contains(**a)) {
        return Err(CubeError::StrayEntry { name, dom: dom.clone() });
    }
    if let Some(name) = dom.iter().find(|a| !table.contains_key(a)) {
        return Err(CubeError::Partial { name });
    }
    let mut hit: BTreeMap<Name, Name> = BTreeMap::new();
    for (&a, v) in table {
        if let Value::Name(b) = *v {
            if !cod.contains(b) {
                return Err(CubeError::OutsideCodomain { name: a, value: b, cod: cod.clone() });
            }
            if let Some(&first) = hit.get(&b) {
                return Err(CubeError::Clash { first, second: a, target: b });
            }
            hit.insert(b, a);
        }
    }
    Ok(())
}

/// `{a0,a1} -> {a2} : a0=>a2, a1=>0`
impl fmt::Display for CubeMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} :", self.dom, self.cod)?;
        for (k, (a, v)) in self.table.iter().enumerate() {
            let sep = if k == 0 { " " } else { ", " };
            write!(f, "{sep}{a}=>{v}")?;
        }
        Ok(())
    }
}

/// A permutation together with the endpoint assignments of a morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub perm: FinPerm,
    pub assignments: Vec<(Name, Bit)>,
}

/// `Σ_k C(m,k)·P(n,k)·2^(m−k)`, the number of morphisms from an `m`-set to an
/// `n`-set.
pub fn morphism_count(m: usize, n: usize) -> u64 {
    (0..=m.min(n))
        .map(|k| {
            let choose = (0..k).fold(1u64, |acc, j| acc * (m - j) as u64 / (j + 1) as u64);
            let perms = (0..k).fold(1u64, |acc, j| acc * (n - j) as u64);
            choose * perms * (1u64 << (m - k))
        })
        .sum()
}

/// A pullback square of injections `D -p-> A -f-> C`, `D -q-> B -g-> C`.
#[derive(Debug, Clone)]
pub struct InjectionSquare {
    pub p: CubeMorphism,
    pub q: CubeMorphism,
    pub f: CubeMorphism,
    pub g: CubeMorphism,
}

impl InjectionSquare {
    /// The pullback of two injections into the same object, with apex the
    /// subset of `dom f` landing in the image of `g`.
    pub fn pullback(f: &CubeMorphism, g: &CubeMorphism) -> Result<InjectionSquare, CubeError> {
        if f.cod != g.cod {
            return Err(CubeError::Mismatch { cod: f.cod.clone(), dom: g.cod.clone() });
        }
        let g_back = g.left_inverse()?;
        f.left_inverse()?;
        let image_g = g.image();
        let apex: NameSet = f
            .table
            .iter()
            .filter(|(_, v)| v.as_name().is_some_and(|c| image_g.contains(c)))
            .map(|(&a, _)| a)
            .collect();
        let p = CubeMorphism::inclusion(&apex, &f.dom)?;
        let q = CubeMorphism {
            dom: apex.clone(),
            cod: g.dom.clone(),
            table: apex.iter().map(|a| (a, g_back.table[&f.table[&a].as_name().unwrap()])).collect(),
        };
        Ok(InjectionSquare { p, q, f: f.clone(), g: g.clone() })
    }

    pub fn commutes(&self) -> bool {
        self.f.compose(&self.p).ok() == self.g.compose(&self.q).ok()
    }

    /// Whether `q ∘ p' = g' ∘ f` for the left inverses `p'`, `g'`.
    pub fn retractions_commute(&self) -> bool {
        let (Ok(p_back), Ok(g_back)) = (self.p.left_inverse(), self.g.left_inverse()) else {
            return false;
        };
        self.q.compose(&p_back).ok() == g_back.compose(&self.f).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::names::NameSet;

    fn a(i: u32) -> Name {
        Name(i)
    }

    fn set(ix: &[u32]) -> NameSet {
        ix.iter().map(|&i| a(i)).collect()
    }

    fn mor(dom: &[u32], cod: &[u32], table: &[(u32, Value)]) -> CubeMorphism {
        CubeMorphism::new(set(dom), set(cod), table.iter().map(|&(k, v)| (a(k), v)).collect()).unwrap()
    }

    fn n(i: u32) -> Value {
        Value::Name(a(i))
    }

    const ZERO: Value = Value::Bit(Bit::Zero);
    const ONE: Value = Value::Bit(Bit::One);

    #[test]
    fn validation() {
        assert!(mor(&[0, 1], &[2], &[(0, n(2)), (1, ZERO)]).validate());
        let clash = CubeMorphism::new(set(&[0, 1]), set(&[2]), [(a(0), n(2)), (a(1), n(2))].into());
        assert_eq!(clash.unwrap_err(), CubeError::Clash { first: a(0), second: a(1), target: a(2) });
        assert!(mor(&[0], &[], &[(0, ONE)]).validate());
        let partial = CubeMorphism::new(set(&[0, 1]), set(&[2]), [(a(0), n(2))].into());
        assert!(matches!(partial, Err(CubeError::Partial { .. })));
    }

    #[test]
    fn identity_and_composition_examples() {
        assert!(CubeMorphism::identity(&NameSet::new()).table().is_empty());
        assert_eq!(CubeMorphism::identity(&set(&[0])).at(a(0)), Some(n(0)));

        let f = mor(&[0], &[1], &[(0, n(1))]);
        let g = mor(&[1], &[], &[(1, ZERO)]);
        assert_eq!(g.compose(&f).unwrap(), mor(&[0], &[], &[(0, ZERO)]));

        let f = mor(&[0], &[1], &[(0, ONE)]);
        let g = mor(&[1], &[2], &[(1, n(2))]);
        assert_eq!(g.compose(&f).unwrap(), mor(&[0], &[2], &[(0, ONE)]));

        assert!(matches!(f.compose(&g), Err(CubeError::Mismatch { .. })));
    }

    #[test]
    fn category_laws_exhaustive() {
        let objects = NameSet::canonical(4).subsets_up_to(2);
        for x in &objects {
            for y in &objects {
                for f in CubeMorphism::enumerate(x, y) {
                    assert_eq!(CubeMorphism::identity(y).compose(&f).unwrap(), f);
                    assert_eq!(f.compose(&CubeMorphism::identity(x)).unwrap(), f);
                    for z in &objects {
                        for g in CubeMorphism::enumerate(y, z) {
                            let gf = g.compose(&f).unwrap();
                            assert!(gf.validate());
                            for w in &objects {
                                for h in CubeMorphism::enumerate(z, w) {
                                    assert_eq!(
                                        h.compose(&gf).unwrap(),
                                        h.compose(&g).unwrap().compose(&f).unwrap()
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn injections() {
        assert!(CubeMorphism::identity(&set(&[0, 1])).is_injection());
        assert!(!mor(&[0], &[], &[(0, ZERO)]).is_injection());
        assert!(mor(&[0], &[1, 2], &[(0, n(1))]).is_injection());
    }

    #[test]
    fn left_inverse_examples() {
        let incl = CubeMorphism::inclusion(&set(&[0]), &set(&[0, 1])).unwrap();
        assert_eq!(incl.left_inverse().unwrap(), mor(&[0, 1], &[0], &[(0, n(0)), (1, ZERO)]));
        let f = mor(&[0], &[1], &[(0, n(1))]);
        assert_eq!(f.left_inverse().unwrap(), mor(&[1], &[0], &[(1, n(0))]));
        let empty = mor(&[], &[2], &[]);
        assert_eq!(empty.left_inverse().unwrap(), mor(&[2], &[], &[(2, ZERO)]));
        assert!(matches!(mor(&[0], &[], &[(0, ONE)]).left_inverse(), Err(CubeError::NotInjection { .. })));
    }

    #[test]
    fn left_inverse_is_retraction() {
        for c in NameSet::canonical(4).subsets_up_to(3) {
            for d in NameSet::canonical(4).subsets_up_to(3) {
                for f in CubeMorphism::enumerate_injections(&d, &c) {
                    let back = f.left_inverse().unwrap();
                    assert_eq!(back.compose(&f).unwrap(), CubeMorphism::identity(&d));
                }
            }
        }
    }

    #[test]
    fn generators() {
        let f = CubeMorphism::generator_subst(&set(&[0, 1]), a(0), Bit::One);
        assert_eq!(f, mor(&[0, 1], &[1], &[(0, ONE), (1, n(1))]));
        assert_eq!(CubeMorphism::generator_subst(&set(&[1]), a(0), Bit::Zero), CubeMorphism::identity(&set(&[1])));
        // the commuting square for distinct names
        let whole = set(&[0, 1, 2]);
        for (x, y) in [(a(0), a(1)), (a(1), a(2)), (a(0), a(3))] {
            for i in Bit::BOTH {
                for j in Bit::BOTH {
                    let left = CubeMorphism::generator_subst(&whole.without(x), y, j)
                        .compose(&CubeMorphism::generator_subst(&whole, x, i))
                        .unwrap();
                    let right = CubeMorphism::generator_subst(&whole.without(y), x, i)
                        .compose(&CubeMorphism::generator_subst(&whole, y, j))
                        .unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn perm_restriction() {
        let s = set(&[0, 1]);
        assert_eq!(CubeMorphism::from_perm(&FinPerm::identity(), &s), CubeMorphism::identity(&s));
        let sw = FinPerm::swap(a(0), a(1));
        assert_eq!(CubeMorphism::from_perm(&sw, &set(&[0])), mor(&[0], &[1], &[(0, n(1))]));
        let universe = NameSet::canonical(4);
        let perms = FinPerm::all_on(&universe);
        for obj in universe.subsets_up_to(2) {
            for p in perms.iter().step_by(3) {
                for q in perms.iter().step_by(5) {
                    let lhs = CubeMorphism::from_perm(q, &p.image(&obj))
                        .compose(&CubeMorphism::from_perm(p, &obj))
                        .unwrap();
                    assert_eq!(lhs, CubeMorphism::from_perm(&q.compose(p), &obj));
                }
            }
        }
    }

    #[test]
    fn inclusions() {
        let s = set(&[0]);
        let t = set(&[0, 1]);
        let u = set(&[0, 1, 2]);
        assert_eq!(CubeMorphism::inclusion(&s, &s).unwrap(), CubeMorphism::identity(&s));
        assert_eq!(CubeMorphism::inclusion(&s, &t).unwrap(), mor(&[0], &[0, 1], &[(0, n(0))]));
        let two_step = CubeMorphism::inclusion(&t, &u)
            .unwrap()
            .compose(&CubeMorphism::inclusion(&s, &t).unwrap())
            .unwrap();
        assert_eq!(two_step, CubeMorphism::inclusion(&s, &u).unwrap());
        assert!(matches!(CubeMorphism::inclusion(&t, &s), Err(CubeError::NotSubset { .. })));
    }

    #[test]
    fn decompose_examples() {
        let f = mor(&[0, 1], &[2], &[(0, n(2)), (1, ZERO)]);
        let d = f.decompose().unwrap();
        assert_eq!(d.perm, FinPerm::swap(a(0), a(2)));
        assert_eq!(d.assignments, vec![(a(1), Bit::Zero)]);

        let inj = mor(&[0, 1], &[1, 2], &[(0, n(1)), (1, n(2))]);
        let d = inj.decompose().unwrap();
        assert!(d.assignments.is_empty());
        assert_eq!((d.perm.apply(a(0)), d.perm.apply(a(1))), (a(1), a(2)));

        let g = CubeMorphism::generator_subst(&set(&[0, 1]), a(0), Bit::One);
        let d = g.decompose().unwrap();
        assert!(d.perm.is_identity());
        assert_eq!(d.assignments, vec![(a(0), Bit::One)]);
    }

    #[test]
    fn decompose_reconstructs() {
        let objects = NameSet::canonical(4).subsets_up_to(3);
        for x in &objects {
            for y in &objects {
                for f in CubeMorphism::enumerate(x, y) {
                    for completion in [Completion::Ascending, Completion::Descending] {
                        let d = f.decompose_with(completion).unwrap();
                        for a in &f.name_part() {
                            assert_eq!(Value::Name(d.perm.apply(a)), f.at(a).unwrap());
                        }
                        for &(a, i) in &d.assignments {
                            assert_eq!(f.at(a), Some(Value::Bit(i)));
                        }
                        let moved = f.name_part().union(&f.image());
                        assert!(d.perm.carrier().is_subset(&moved));
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(CubeMorphism::enumerate(&set(&[0]), &set(&[1])).len(), 3);
        assert_eq!(CubeMorphism::enumerate(&NameSet::new(), &set(&[0, 1])).len(), 1);
        assert_eq!(CubeMorphism::enumerate(&set(&[0, 1]), &NameSet::new()).len(), 4);
        for m in 0..=3 {
            for n in 0..=3 {
                let dom = NameSet::canonical(m);
                let cod: NameSet = (10..10 + n as u32).map(Name).collect();
                let all = CubeMorphism::enumerate(&dom, &cod);
                assert_eq!(all.len() as u64, morphism_count(m, n), "m={m} n={n}");
                assert!(all.iter().all_unique());
                assert!(all.iter().all(CubeMorphism::validate));
            }
        }
    }

    #[test]
    fn pullbacks_of_injections_have_commuting_retractions() {
        let universe = NameSet::canonical(4);
        let objects = universe.subsets_up_to(3);
        let mut squares = 0;
        for c in &objects {
            for x in objects.iter().filter(|x| x.len() <= c.len()) {
                for y in objects.iter().filter(|y| y.len() <= c.len()) {
                    for f in CubeMorphism::enumerate_injections(x, c) {
                        for g in CubeMorphism::enumerate_injections(y, c) {
                            let sq = InjectionSquare::pullback(&f, &g).unwrap();
                            assert!(sq.commutes());
                            assert!(sq.retractions_commute(), "{sq:?}");
                            squares += 1;
                        }
                    }
                }
            }
        }
        assert!(squares > 1000);
    }
}
