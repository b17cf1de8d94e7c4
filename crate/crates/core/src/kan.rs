//! Open boxes, fillings and uniform-Kan structures, checked on bounded
//! enumerations; faces and degeneracies of n-cubes as name abstractions.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::cube::Bit;
use crate::names::{fresh_name, fresh_names, FinPerm, Name, NameSet};
use crate::nominal::{Abstraction, BoxSet, NominalSet};
use crate::report::{Bounds, Check, Report};
use crate::subsets::{check_morphism, Discrete, SubstSet};

/// Which entry of the box is absent: `(a,1)` for `Up`, `(a,0)` for `Down`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Up, Direction::Down];

    pub fn missing_bit(self) -> Bit {
        match self {
            Direction::Up => Bit::One,
            Direction::Down => Bit::Zero,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-open", self.missing_bit())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KanError {
    #[error("box shape has no names")]
    EmptyShape,
    #[error("distinguished name {missing} is not in {names}")]
    MissingOutsideShape { missing: Name, names: NameSet },
    #[error("box entry ({name},{bit}) is {problem}")]
    BadEntry { name: Name, bit: Bit, problem: &'static str },
    #[error("{name} is not fresh for box entry ({name},{bit})")]
    NotFresh { name: Name, bit: Bit },
    #[error("entries ({b},{i}) and ({c},{j}) are incompatible")]
    Incompatible { b: Name, i: Bit, c: Name, j: Bit },
    #[error("cannot substitute {name}: it belongs to the box shape {names}")]
    NameInShape { name: Name, names: NameSet },
    #[error("face index {index} out of range for a {arity}-cube")]
    IndexOutOfRange { index: usize, arity: usize },
}

/// An `(A,a)`-box: entries at every `(b,i) ∈ A×2` except the missing pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenBox<E> {
    direction: Direction,
    names: NameSet,
    missing: Name,
    table: BTreeMap<(Name, Bit), E>,
}

/// The keys an `(A,a)`-box must define, in order.
pub fn shape_keys(names: &NameSet, missing: Name, direction: Direction) -> Vec<(Name, Bit)> {
    names
        .iter()
        .flat_map(|b| Bit::BOTH.map(|i| (b, i)))
        .filter(|&key| key != (missing, direction.missing_bit()))
        .collect()
}

impl<E: Clone + fmt::Debug> OpenBox<E> {
    /// Validated constructor: shape, domain, freshness and compatibility.
    pub fn new<X: SubstSet<Elem = E>>(
        carrier: &X,
        direction: Direction,
        names: NameSet,
        missing: Name,
        table: BTreeMap<(Name, Bit), E>,
    ) -> Result<Self, KanError> {
        let u = OpenBox { direction, names, missing, table };
        u.validate(carrier)?;
        Ok(u)
    }

    pub fn validate<X: SubstSet<Elem = E>>(&self, carrier: &X) -> Result<(), KanError> {
        if self.names.is_empty() {
            return Err(KanError::EmptyShape);
        }
        if !self.names.contains(self.missing) {
            return Err(KanError::MissingOutsideShape { missing: self.missing, names: self.names.clone() });
        }
        let keys = shape_keys(&self.names, self.missing, self.direction);
        for &(name, bit) in self.table.keys() {
            if !keys.contains(&(name, bit)) {
                return Err(KanError::BadEntry { name, bit, problem: "outside the box shape" });
            }
        }
        for &(name, bit) in &keys {
            let Some(e) = self.table.get(&(name, bit)) else {
                return Err(KanError::BadEntry { name, bit, problem: "missing" });
            };
            if !carrier.is_fresh(name, e) {
                return Err(KanError::NotFresh { name, bit });
            }
        }
        for (&(b, i), x) in &self.table {
            for (&(c, j), y) in &self.table {
                if b < c && !carrier.equal(&carrier.subst(x, c, j), &carrier.subst(y, b, i)) {
                    return Err(KanError::Incompatible { b, i, c, j });
                }
            }
        }
        Ok(())
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn names(&self) -> &NameSet {
        &self.names
    }

    pub fn missing(&self) -> Name {
        self.missing
    }

    pub fn table(&self) -> &BTreeMap<(Name, Bit), E> {
        &self.table
    }

    pub fn get(&self, b: Name, i: Bit) -> Option<&E> {
        self.table.get(&(b, i))
    }

    /// Names of the shape together with the supports of all entries.
    pub fn scope<X: NominalSet<Elem = E>>(&self, carrier: &X) -> NameSet {
        self.table.values().fold(self.names.clone(), |acc, e| acc.union(&carrier.support(e)))
    }
}

/// Entrywise equality through the carrier.
pub fn box_equal<X: NominalSet>(carrier: &X, u: &OpenBox<X::Elem>, v: &OpenBox<X::Elem>) -> bool {
    u.direction == v.direction
        && u.names == v.names
        && u.missing == v.missing
        && u.table.len() == v.table.len()
        && u.table.iter().all(|(k, x)| v.table.get(k).is_some_and(|y| carrier.equal(x, y)))
}

/// `u_x(b,i) = x(b:=i)`.
pub fn box_of_element<X: SubstSet>(
    carrier: &X,
    x: &X::Elem,
    names: &NameSet,
    missing: Name,
    direction: Direction,
) -> Result<OpenBox<X::Elem>, KanError> {
    if names.is_empty() {
        return Err(KanError::EmptyShape);
    }
    if !names.contains(missing) {
        return Err(KanError::MissingOutsideShape { missing, names: names.clone() });
    }
    let table = shape_keys(names, missing, direction)
        .into_iter()
        .map(|(b, i)| ((b, i), carrier.subst(x, b, i)))
        .collect();
    Ok(OpenBox { direction, names: names.clone(), missing, table })
}

pub fn is_filling<X: SubstSet>(carrier: &X, x: &X::Elem, u: &OpenBox<X::Elem>) -> bool {
    u.table.iter().all(|(&(b, i), e)| carrier.equal(&carrier.subst(x, b, i), e))
}

/// `(u(c:=j))(b,i) = u(b,i)(c:=j)` for `c ∉ A`.
pub fn box_subst<X: SubstSet>(carrier: &X, u: &OpenBox<X::Elem>, c: Name, j: Bit) -> Result<OpenBox<X::Elem>, KanError> {
    if u.names.contains(c) {
        return Err(KanError::NameInShape { name: c, names: u.names.clone() });
    }
    let table = u.table.iter().map(|(&k, e)| (k, carrier.subst(e, c, j))).collect();
    Ok(OpenBox { table, ..u.clone() })
}

/// `(π·u)(πb,i) = π·u(b,i)`, an `(πA,πa)`-box.
pub fn box_act<X: NominalSet>(carrier: &X, p: &FinPerm, u: &OpenBox<X::Elem>) -> OpenBox<X::Elem> {
    OpenBox {
        direction: u.direction,
        names: p.image(&u.names),
        missing: p.apply(u.missing),
        table: u.table.iter().map(|(&(b, i), e)| ((p.apply(b), i), carrier.act(p, e))).collect(),
    }
}

/// All fillings supported in `bound`, in enumeration order.
///
/// Searching with `bound ⊇ u.scope()` is complete: zero-substituting a name
/// outside the scope turns any filling into one supported inside it.
pub fn search_filling<X: SubstSet>(carrier: &X, u: &OpenBox<X::Elem>, bound: &NameSet) -> Vec<X::Elem> {
    carrier.enumerate_with_support(bound).into_iter().filter(|x| is_filling(carrier, x, u)).collect()
}

/// Every valid box of the given shape whose entry at `(b,i)` is drawn from
/// `candidates(b,i)`.
pub fn boxes_of_shape<X, C>(
    carrier: &X,
    names: &NameSet,
    missing: Name,
    direction: Direction,
    candidates: C,
) -> Vec<OpenBox<X::Elem>>
where
    X: SubstSet,
    C: Fn(Name, Bit) -> Vec<X::Elem>,
{
    let keys = shape_keys(names, missing, direction);
    let choices: Vec<Vec<X::Elem>> = keys
        .iter()
        .map(|&(b, i)| candidates(b, i).into_iter().filter(|e| carrier.is_fresh(b, e)).collect())
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<X::Elem> = Vec::with_capacity(keys.len());
    extend_boxes(carrier, &keys, &choices, &mut chosen, &mut |entries| {
        out.push(OpenBox {
            direction,
            names: names.clone(),
            missing,
            table: keys.iter().copied().zip(entries.iter().cloned()).collect(),
        })
    });
    out
}

fn extend_boxes<X: SubstSet>(
    carrier: &X,
    keys: &[(Name, Bit)],
    choices: &[Vec<X::Elem>],
    chosen: &mut Vec<X::Elem>,
    emit: &mut dyn FnMut(&[X::Elem]),
) {
    let k = chosen.len();
    if k == keys.len() {
        emit(chosen);
        return;
    }
    let (c, j) = keys[k];
    for y in &choices[k] {
        let compatible = keys[..k].iter().zip(chosen.iter()).all(|(&(b, i), x)| {
            b == c || carrier.equal(&carrier.subst(x, c, j), &carrier.subst(y, b, i))
        });
        if compatible {
            chosen.push(y.clone());
            extend_boxes(carrier, keys, choices, chosen, emit);
            chosen.pop();
        }
    }
}

/// Every valid box with shape inside the universe, `|A| ≤ max`, and entries
/// supported in the universe.
pub fn all_boxes<X: SubstSet>(carrier: &X, bounds: Bounds, max: usize) -> Vec<OpenBox<X::Elem>> {
    let pool = carrier.enumerate_with_support(&bounds.names());
    let mut out = Vec::new();
    for names in bounds.names().subsets_up_to(max) {
        for missing in names.iter() {
            for direction in Direction::BOTH {
                out.extend(boxes_of_shape(carrier, &names, missing, direction, |_, _| pool.clone()));
            }
        }
    }
    out
}

/// The first box with no filling, if any; see [`search_filling`] for why
/// the bounded search is complete.
pub fn find_unfillable_box<X: SubstSet>(carrier: &X, bounds: Bounds, max: usize) -> Option<OpenBox<X::Elem>> {
    all_boxes(carrier, bounds, max).into_iter().find(|u| search_filling(carrier, u, &u.scope(carrier)).is_empty())
}

pub fn show_box<X: NominalSet>(carrier: &X, u: &OpenBox<X::Elem>) -> String {
    let entries: Vec<String> =
        u.table.iter().map(|(&(b, i), e)| format!("({b},{i})=>{}", carrier.show(e))).collect();
    format!("{} ({}, {}) {{ {} }}", u.direction, u.names, u.missing, entries.join("; "))
}

/// A choice of fillings for 1-open (`fill_up`) and 0-open (`fill_down`)
/// boxes. `None` means the chooser found nothing.
pub trait KanStructure {
    type Elem: Clone + fmt::Debug;

    fn fill_up(&self, u: &OpenBox<Self::Elem>) -> Option<Self::Elem>;

    fn fill_down(&self, u: &OpenBox<Self::Elem>) -> Option<Self::Elem>;

    fn fill(&self, u: &OpenBox<Self::Elem>) -> Option<Self::Elem> {
        match u.direction {
            Direction::Up => self.fill_up(u),
            Direction::Down => self.fill_down(u),
        }
    }
}

/// Discrete carriers: compatibility forces every entry to be equal, and
/// that value is the only filling.
#[derive(Debug, Clone, Copy)]
pub struct DiscreteKan;

pub fn discrete_kan(_carrier: &Discrete) -> DiscreteKan {
    DiscreteKan
}

impl KanStructure for DiscreteKan {
    type Elem = usize;

    fn fill_up(&self, u: &OpenBox<usize>) -> Option<usize> {
        u.table.values().next().copied()
    }

    fn fill_down(&self, u: &OpenBox<usize>) -> Option<usize> {
        self.fill_up(u)
    }
}

/// The first filling in enumeration order over the box's scope. Its
/// uniformity is an empirical question.
#[derive(Debug, Clone)]
pub struct LeastFilling<X> {
    carrier: X,
}

impl<X: SubstSet> LeastFilling<X> {
    pub fn new(carrier: X) -> Self {
        LeastFilling { carrier }
    }
}

impl<X: SubstSet> KanStructure for LeastFilling<X> {
    type Elem = X::Elem;

    fn fill_up(&self, u: &OpenBox<X::Elem>) -> Option<X::Elem> {
        search_filling(&self.carrier, u, &u.scope(&self.carrier)).into_iter().next()
    }

    fn fill_down(&self, u: &OpenBox<X::Elem>) -> Option<X::Elem> {
        self.fill_up(u)
    }
}

/// `⁺u = (↑u)(a:=1)` for a 1-open box.
pub fn plus_face<K, X>(kan: &K, carrier: &X, u: &OpenBox<X::Elem>) -> Option<X::Elem>
where
    X: SubstSet,
    K: KanStructure<Elem = X::Elem>,
{
    debug_assert_eq!(u.direction, Direction::Up);
    kan.fill_up(u).map(|x| carrier.subst(&x, u.missing, Bit::One))
}

/// `⁻u = (↓u)(a:=0)` for a 0-open box.
pub fn minus_face<K, X>(kan: &K, carrier: &X, u: &OpenBox<X::Elem>) -> Option<X::Elem>
where
    X: SubstSet,
    K: KanStructure<Elem = X::Elem>,
{
    debug_assert_eq!(u.direction, Direction::Down);
    kan.fill_down(u).map(|x| carrier.subst(&x, u.missing, Bit::Zero))
}

/// The face opposite the missing entry.
fn far_face<K, X>(kan: &K, carrier: &X, u: &OpenBox<X::Elem>) -> Option<X::Elem>
where
    X: SubstSet,
    K: KanStructure<Elem = X::Elem>,
{
    match u.direction {
        Direction::Up => plus_face(kan, carrier, u),
        Direction::Down => minus_face(kan, carrier, u),
    }
}

/// Boxes `u_x` for every element supported in the universe and every shape
/// with `|A| ≤ max`.
fn element_boxes<X: SubstSet>(carrier: &X, bounds: Bounds, max: usize) -> Vec<OpenBox<X::Elem>> {
    let elems = carrier.enumerate_with_support(&bounds.names());
    let mut out = Vec::new();
    for names in bounds.names().subsets_up_to(max) {
        for missing in names.iter() {
            for direction in Direction::BOTH {
                for x in &elems {
                    out.push(box_of_element(carrier, x, &names, missing, direction).expect("valid shape"));
                }
            }
        }
    }
    out
}

/// Fillings, equivariance and substitution uniformity of a chooser over
/// every box `u_x` with `|A| ≤ bounds.support`, plus consistency of the far
/// faces `⁺u`/`⁻u`.
pub fn check_uniform_kan<K, X>(kan: &K, carrier: &X, bounds: Bounds) -> Report
where
    X: SubstSet,
    K: KanStructure<Elem = X::Elem>,
{
    let names = bounds.names_plus(1);
    let perms = bounds.perms_on(&names);
    let show = |x: &X::Elem| carrier.show(x);
    let same = |x: &Option<X::Elem>, y: &Option<X::Elem>| match (x, y) {
        (Some(x), Some(y)) => carrier.equal(x, y),
        _ => false,
    };

    let mut fills = Check::new("kan:fills");
    let mut equivariant = Check::new("kan:equivariant");
    let mut uniform = Check::new("kan:subst-uniform");
    let mut faces = Check::new("kan:face-consistent");
    for u in element_boxes(carrier, bounds, bounds.support) {
        let shown = show_box(carrier, &u);
        let filled = kan.fill(&u);
        fills.record(filled.as_ref().is_some_and(|x| is_filling(carrier, x, &u)), || {
            format!("u={shown} gives {}", filled.as_ref().map_or("nothing".into(), show))
        });
        let Some(x) = filled else { continue };
        let face = far_face(kan, carrier, &u);
        faces.record(face.as_ref().is_some_and(|f| carrier.is_fresh(u.missing, f)), || {
            format!("u={shown}: {} not fresh for the far face", u.missing)
        });
        for p in &perms {
            let moved = kan.fill(&box_act(carrier, p, &u));
            let expected = Some(carrier.act(p, &x));
            equivariant.record(same(&moved, &expected), || {
                format!("u={shown} p={p}: fill(p·u)={:?} but p·fill(u)={}", moved.as_ref().map(show), show(&carrier.act(p, &x)))
            });
            let moved_face = far_face(kan, carrier, &box_act(carrier, p, &u));
            faces.record(same(&moved_face, &face.as_ref().map(|f| carrier.act(p, f))), || {
                format!("u={shown} p={p}: far face not equivariant")
            });
        }
        for c in names.difference(&u.names).iter() {
            for j in Bit::BOTH {
                let v = box_subst(carrier, &u, c, j).expect("c outside the shape");
                let lhs = kan.fill(&v);
                let rhs = carrier.subst(&x, c, j);
                uniform.record(same(&lhs, &Some(rhs.clone())), || {
                    format!(
                        "u={shown} c={c} j={j}: fill(u(c:=j))={} but fill(u)(c:=j)={}",
                        lhs.as_ref().map_or("nothing".into(), show),
                        show(&rhs)
                    )
                });
                let face_v = far_face(kan, carrier, &v);
                faces.record(same(&face_v, &face.as_ref().map(|f| carrier.subst(f, c, j))), || {
                    format!("u={shown} c={c} j={j}: far face not uniform")
                });
            }
        }
    }
    let mut report = Report::new();
    for c in [fills, equivariant, uniform, faces] {
        report.push(c);
    }
    report
}

/// Validity of every `u_x` and of every box under substitution and action;
/// `x` always fills `u_x`.
pub fn check_boxes<X: SubstSet>(carrier: &X, bounds: Bounds, max: usize) -> Report {
    let names = bounds.names_plus(1);
    let perms = bounds.perms_on(&names);
    let elems = carrier.enumerate_with_support(&bounds.names());

    let mut valid = Check::new("box:element-box-valid");
    let mut filled = Check::new("box:element-fills-its-box");
    for shape in bounds.names().subsets_up_to(max) {
        for missing in shape.iter() {
            for direction in Direction::BOTH {
                for x in &elems {
                    let u = box_of_element(carrier, x, &shape, missing, direction).expect("valid shape");
                    valid.record(u.validate(carrier).is_ok(), || show_box(carrier, &u));
                    let bound = carrier.support(x).union(&shape);
                    let found = search_filling(carrier, &u, &bound);
                    filled.record(found.iter().any(|y| carrier.equal(x, y)), || {
                        format!("{} missing from fillings of {}", carrier.show(x), show_box(carrier, &u))
                    });
                }
            }
        }
    }

    let mut subst_valid = Check::new("box:subst-preserves-validity");
    let mut act_valid = Check::new("box:act-preserves-validity");
    let mut act_law = Check::new("box:act-compose");
    for u in all_boxes(carrier, bounds, max) {
        for c in names.difference(&u.names).iter() {
            for j in Bit::BOTH {
                let v = box_subst(carrier, &u, c, j).expect("c outside the shape");
                subst_valid.record(v.validate(carrier).is_ok(), || format!("{} ({c}:={j})", show_box(carrier, &u)));
            }
        }
        for (k, p) in perms.iter().enumerate() {
            let v = box_act(carrier, p, &u);
            act_valid.record(v.validate(carrier).is_ok(), || format!("{} p={p}", show_box(carrier, &u)));
            let q = &perms[(k * 5 + 1) % perms.len()];
            let lhs = box_act(carrier, &q.compose(p), &u);
            let rhs = box_act(carrier, q, &v);
            act_law.record(box_equal(carrier, &lhs, &rhs), || format!("{} p={p} q={q}", show_box(carrier, &u)));
        }
    }
    let mut report = Report::new();
    for c in [valid, filled, subst_valid, act_valid, act_law] {
        report.push(c);
    }
    report
}

/// `δ^m_i ⟨a₁…aₙ⟩x = ⟨a₁…â_m…aₙ⟩ x(a_m:=i)`, with `1 ≤ m ≤ n`.
pub fn face<X: SubstSet>(carrier: &X, m: usize, i: Bit, cube: &Abstraction<X::Elem>) -> Result<Abstraction<X::Elem>, KanError> {
    if m == 0 || m > cube.arity() {
        return Err(KanError::IndexOutOfRange { index: m, arity: cube.arity() });
    }
    let mut binders = cube.binders().to_vec();
    let a = binders.remove(m - 1);
    Ok(Abstraction::new(binders, carrier.subst(cube.body(), a, i)))
}

/// `ι^m` inserts the binder `fresh` at position `m+1`; `fresh` must avoid
/// the binders and the support of the body.
pub fn degeneracy_with<X: NominalSet>(
    carrier: &X,
    m: usize,
    cube: &Abstraction<X::Elem>,
    fresh: Name,
) -> Result<Abstraction<X::Elem>, KanError> {
    if m > cube.arity() {
        return Err(KanError::IndexOutOfRange { index: m, arity: cube.arity() });
    }
    debug_assert!(carrier.is_fresh(fresh, cube.body()) && !cube.binders().contains(&fresh));
    let mut binders = cube.binders().to_vec();
    binders.insert(m, fresh);
    Ok(Abstraction::new(binders, cube.body().clone()))
}

/// `ι^m` with the least name fresh for the cube.
pub fn degeneracy<X: NominalSet>(carrier: &X, m: usize, cube: &Abstraction<X::Elem>) -> Result<Abstraction<X::Elem>, KanError> {
    let used = carrier.support(cube.body()).union(&cube.binder_set());
    degeneracy_with(carrier, m, cube, fresh_name(&used))
}

/// A box under binders `⟨a⃗a⟩u`, the last binder being the missing name.
#[derive(Debug, Clone)]
pub struct AbstractedBox<E> {
    pub binders: Vec<Name>,
    pub open: OpenBox<E>,
}

/// `p_n(⟨a⃗a⟩x) = ⟨a⃗a⟩u_x` (`Up`), and its mirror `q_n` (`Down`).
pub fn open_box_of_cube<X: SubstSet>(
    carrier: &X,
    cube: &Abstraction<X::Elem>,
    direction: Direction,
) -> Result<AbstractedBox<X::Elem>, KanError> {
    let missing = *cube.binders().last().ok_or(KanError::EmptyShape)?;
    let open = box_of_element(carrier, cube.body(), &cube.binder_set(), missing, direction)?;
    Ok(AbstractedBox { binders: cube.binders().to_vec(), open })
}

/// `⟨a⃗a⟩u ↦ ⟨a⃗a⟩(fill u)`.
pub fn fill_abstracted<K: KanStructure>(kan: &K, b: &AbstractedBox<K::Elem>) -> Option<Abstraction<K::Elem>> {
    kan.fill(&b.open).map(|x| Abstraction::new(b.binders.clone(), x))
}

fn rename_abstracted<X: NominalSet>(carrier: &X, b: &AbstractedBox<X::Elem>, fresh: &[Name]) -> OpenBox<X::Elem> {
    let pairs = b.binders.iter().copied().zip(fresh.iter().copied()).collect();
    let p = FinPerm::from_partial_bijection(&pairs).expect("fresh names are distinct");
    box_act(carrier, &p, &b.open)
}

/// α-equality of abstracted boxes.
pub fn abstracted_box_equal<X: NominalSet>(carrier: &X, x: &AbstractedBox<X::Elem>, y: &AbstractedBox<X::Elem>) -> bool {
    if x.binders.len() != y.binders.len() {
        return false;
    }
    let used = [x, y].iter().fold(NameSet::new(), |acc, b| {
        acc.union(&b.open.scope(carrier)).union(&b.binders.iter().copied().collect())
    });
    let fresh = fresh_names(&used, x.binders.len());
    box_equal(carrier, &rename_abstracted(carrier, x, &fresh), &rename_abstracted(carrier, y, &fresh))
}

/// Pointwise checks of `p_n`/`q_n` on `(n+1)`-cubes for `n ≤ max_n`: the
/// chooser splits them (`p(fill(p c)) = p c`), and they commute with the
/// action and with substitution.
pub fn check_box_projection<K, X>(kan: &K, carrier: &X, max_n: usize, bounds: Bounds) -> Report
where
    X: SubstSet,
    K: KanStructure<Elem = X::Elem>,
{
    let names = bounds.names_plus(1);
    let perms = bounds.perms_on(&names);
    let mut split = Check::new("projection:split");
    let mut equivariant = Check::new("projection:equivariant");
    let mut substitution = Check::new("projection:preserves-subst");
    for n in 0..=max_n {
        let binders = fresh_names(&names, n + 1);
        let scope = bounds.names().union(&binders.iter().copied().collect());
        let cubes = BoxSet::new(carrier, n + 1);
        for body in carrier.enumerate_with_support(&scope) {
            let cube = Abstraction::new(binders.clone(), body);
            for direction in Direction::BOTH {
                let projected = open_box_of_cube(carrier, &cube, direction).expect("non-empty binders");
                let shown = || cubes.show(&cube);
                let back = fill_abstracted(kan, &projected)
                    .and_then(|c| open_box_of_cube(carrier, &c, direction).ok());
                split.record(back.is_some_and(|b| abstracted_box_equal(carrier, &b, &projected)), || {
                    format!("{direction} cube {}", shown())
                });
                for p in &perms {
                    let lhs = open_box_of_cube(carrier, &cubes.act(p, &cube), direction).expect("non-empty");
                    let rhs = AbstractedBox {
                        binders: projected.binders.iter().map(|&b| p.apply(b)).collect(),
                        open: box_act(carrier, p, &projected.open),
                    };
                    equivariant.record(abstracted_box_equal(carrier, &lhs, &rhs), || format!("{} p={p}", shown()));
                }
                for c in names.iter() {
                    for j in Bit::BOTH {
                        let lhs = open_box_of_cube(carrier, &cubes.subst(&cube, c, j), direction).expect("non-empty");
                        let rhs = AbstractedBox {
                            binders: projected.binders.clone(),
                            open: box_subst(carrier, &projected.open, c, j).expect("binders avoid the universe"),
                        };
                        substitution.record(abstracted_box_equal(carrier, &lhs, &rhs), || {
                            format!("{} ({c}:={j})", shown())
                        });
                    }
                }
            }
        }
    }
    let mut report = Report::new();
    for c in [split, equivariant, substitution] {
        report.push(c);
    }
    report
}

/// Faces and degeneracies of n-cubes for `n ≤ max_n`: both are morphisms of
/// 01-substitution sets; `δ^m_i δ^{m′}_{i′} = δ^{m′−1}_{i′} δ^m_i` for `m < m′`;
/// `δ^{m+1}_i ι^m = id`; degeneracy ignores the fresh choice.
pub fn check_faces<X: SubstSet + Clone>(carrier: &X, max_n: usize, bounds: Bounds) -> Report {
    let mut report = Report::new();
    let mut commute = Check::new("face:commute");
    let mut section = Check::new("face:degeneracy-section");
    let mut fresh_choice = Check::new("degeneracy:fresh-choice");
    for n in 1..=max_n {
        let cubes = BoxSet::new(carrier.clone(), n);
        let lower = BoxSet::new(carrier.clone(), n - 1);
        for m in 1..=n {
            for i in Bit::BOTH {
                let r = check_morphism(|c| face(carrier, m, i, c).expect("in range"), &cubes, &lower, bounds);
                for mut check in r.checks {
                    check.name = format!("face[{m},{i}]:{}", check.name);
                    report.push(check);
                }
            }
        }
        for m in 0..n {
            let higher = BoxSet::new(carrier.clone(), n);
            let r = check_morphism(|c| degeneracy(carrier, m, c).expect("in range"), &lower, &higher, bounds);
            for mut check in r.checks {
                check.name = format!("degeneracy[{m}]:{}", check.name);
                report.push(check);
            }
        }
        let elems = cubes.enumerate_with_support(&bounds.names());
        for x in &elems {
            for m in 1..=n {
                for m2 in m + 1..=n {
                    for i in Bit::BOTH {
                        for i2 in Bit::BOTH {
                            let lhs = face(carrier, m, i, &face(carrier, m2, i2, x).unwrap()).unwrap();
                            let rhs = face(carrier, m2 - 1, i2, &face(carrier, m, i, x).unwrap()).unwrap();
                            let lower2 = BoxSet::new(carrier.clone(), n - 2);
                            commute.record(lower2.equal(&lhs, &rhs), || {
                                format!("{} m={m} m'={m2} i={i} i'={i2}", cubes.show(x))
                            });
                        }
                    }
                }
            }
            for m in 0..=n {
                let up = BoxSet::new(carrier.clone(), n + 1);
                let d = degeneracy(carrier, m, x).unwrap();
                for i in Bit::BOTH {
                    let back = face(carrier, m + 1, i, &d).unwrap();
                    section.record(cubes.equal(&back, x), || format!("{} m={m} i={i}", cubes.show(x)));
                }
                let used = carrier.support(x.body()).union(&x.binder_set()).union(&bounds.names_plus(1));
                let other = degeneracy_with(carrier, m, x, fresh_name(&used)).unwrap();
                fresh_choice.record(up.equal(&d, &other), || format!("{} m={m}", cubes.show(x)));
            }
        }
    }
    report.push(commute);
    report.push(section);
    report.push(fresh_choice);
    report
}

/// Boxes over `y`: entries at `(b,i)` lie over `y(b:=i)`.
pub fn boxes_over<X, Y, P>(source: &X, target: &Y, p: &P, y: &Y::Elem, pool: &[X::Elem], max: usize, universe: &NameSet) -> Vec<OpenBox<X::Elem>>
where
    X: SubstSet,
    Y: SubstSet,
    P: Fn(&X::Elem) -> Y::Elem,
{
    let mut out = Vec::new();
    for names in universe.subsets_up_to(max) {
        for missing in names.iter() {
            for direction in Direction::BOTH {
                out.extend(boxes_of_shape(source, &names, missing, direction, |b, i| {
                    let below = target.subst(y, b, i);
                    pool.iter().filter(|x| target.equal(&p(x), &below)).cloned().collect()
                }));
            }
        }
    }
    out
}

/// Lifts over every enumerated `y` for every box over `y` with
/// `|A| ≤ bounds.support`; the least lift in enumeration order is tested for
/// equivariance and for uniformity under `c # (A, y)`.
pub fn check_fibration<X, Y, P>(p: P, source: &X, target: &Y, bounds: Bounds) -> Report
where
    X: SubstSet,
    Y: SubstSet,
    P: Fn(&X::Elem) -> Y::Elem,
{
    let universe = bounds.names();
    let pool = source.enumerate_with_support(&universe);
    let perms = bounds.perms_on(&universe);
    let lift = |u: &OpenBox<X::Elem>, y: &Y::Elem| -> Option<X::Elem> {
        let bound = u.scope(source).union(&target.support(y));
        search_filling(source, u, &bound).into_iter().find(|x| target.equal(&p(x), y))
    };
    let same = |x: &Option<X::Elem>, y: &Option<X::Elem>| match (x, y) {
        (Some(x), Some(y)) => source.equal(x, y),
        _ => false,
    };

    let mut exists = Check::new("fibration:lift-exists");
    let mut equivariant = Check::new("fibration:equivariant");
    let mut uniform = Check::new("fibration:subst-uniform");
    for y in target.enumerate_with_support(&universe) {
        for u in boxes_over(source, target, &p, &y, &pool, bounds.support, &universe) {
            let shown = || format!("y={} u={}", target.show(&y), show_box(source, &u));
            let Some(x) = lift(&u, &y) else {
                exists.record(false, || format!("{}: no filling over y", shown()));
                continue;
            };
            exists.record(true, String::new);
            for pi in &perms {
                let moved = lift(&box_act(source, pi, &u), &target.act(pi, &y));
                equivariant.record(same(&moved, &Some(source.act(pi, &x))), || format!("{} p={pi}", shown()));
            }
            let avoid = u.names.union(&target.support(&y));
            for c in universe.difference(&avoid).iter() {
                for j in Bit::BOTH {
                    let v = box_subst(source, &u, c, j).expect("c outside the shape");
                    let moved = lift(&v, &target.subst(&y, c, j));
                    uniform.record(same(&moved, &Some(source.subst(&x, c, j))), || format!("{} c={c} j={j}", shown()));
                }
            }
        }
    }
    let mut report = Report::new();
    for c in [exists, equivariant, uniform] {
        report.push(c);
    }
    report
}
