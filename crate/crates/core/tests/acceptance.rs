//! Acceptance suite: one line per criterion, with pinned time limits.
//!
//! Runs without the libtest harness so the verdict lines always print.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cubesub::cube::morphism_count;
use cubesub::equivalence::{
    check_epsilon, check_faithful, check_free_oracle, check_full, check_unit_round_trip, epsilon, epsilon_inverse,
    i_star_morphism, transport_morphism,
};
use cubesub::kan::{
    box_of_element, check_box_projection, check_boxes, check_faces, check_fibration, check_uniform_kan, discrete_kan,
    Direction, KanStructure, LeastFilling, OpenBox,
};
use cubesub::presheaf::{check_functor_laws, check_pullback_preservation};
use cubesub::subsets::{check_sub_laws, subst_all};
use cubesub::{
    Bit, Bounds, BoxSet, Completion, CubeMorphism, CubicalSet, Discrete, EqClass, FinPerm, FreeElem, FreeSub, FromSub,
    Gen, IStar, Name, NameSet, NatTrans, NominalSet, ProductSub, Report, Representable, SubstSet, Tabulated, Value,
};

struct Outcome {
    ok: bool,
    cases: usize,
    detail: String,
}

impl Outcome {
    fn from_reports(reports: &[Report]) -> Self {
        let cases = reports.iter().flat_map(|r| &r.checks).map(|c| c.cases).sum();
        let failures: Vec<String> = reports
            .iter()
            .flat_map(|r| r.failures())
            .map(|c| format!("{} ({} violations; {})", c.name, c.violations, c.witnesses.join(" | ")))
            .collect();
        Outcome { ok: failures.is_empty(), cases, detail: failures.join("; ") }
    }

    fn and(mut self, ok: bool, what: &str) -> Self {
        if !ok {
            self.ok = false;
            if !self.detail.is_empty() {
                self.detail += "; ";
            }
            self.detail += what;
        }
        self
    }
}

fn a(i: u32) -> Name {
    Name(i)
}

fn set(ix: &[u32]) -> NameSet {
    ix.iter().map(|&i| a(i)).collect()
}

/// Base names for representables, disjoint from every universe used here.
fn base(n: usize) -> NameSet {
    (0..n as u32).map(|k| a(100 + k)).collect()
}

// ---------------------------------------------------------------- 1

/// Counts `A -> B + {0,1}` maps injective on names by listing all
/// `(n+2)^m` value tuples.
fn brute_force_count(m: usize, n: usize) -> u64 {
    let k = n + 2;
    let mut count = 0;
    for code in 0..k.pow(m as u32) {
        let digits: Vec<usize> = (0..m).map(|j| code / k.pow(j as u32) % k).collect();
        let names: Vec<usize> = digits.iter().copied().filter(|&d| d < n).collect();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == names.len() {
            count += 1;
        }
    }
    count
}

fn cube_category() -> Outcome {
    let objects = NameSet::canonical(4).subsets_up_to(2);
    let homs: Vec<Vec<Vec<CubeMorphism>>> =
        objects.iter().map(|x| objects.iter().map(|y| CubeMorphism::enumerate(x, y)).collect()).collect();
    let index: Vec<Vec<HashMap<CubeMorphism, usize>>> = homs
        .iter()
        .map(|row| row.iter().map(|fs| fs.iter().cloned().enumerate().map(|(k, f)| (f, k)).collect()).collect())
        .collect();
    let n = objects.len();
    let mut cases = 0;
    let mut ok = true;

    // identities
    for x in 0..n {
        for y in 0..n {
            let (idx, idy) = (CubeMorphism::identity(&objects[x]), CubeMorphism::identity(&objects[y]));
            for f in &homs[x][y] {
                cases += 1;
                ok &= idy.compose(f).as_ref() == Ok(f) && f.compose(&idx).as_ref() == Ok(f);
            }
        }
    }

    // composition tables comp[x][y][z][f][g] = index of g∘f in hom(x,z)
    let mut comp = vec![vec![vec![Vec::<Vec<usize>>::new(); n]; n]; n];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                comp[x][y][z] = homs[x][y]
                    .iter()
                    .map(|f| homs[y][z].iter().map(|g| index[x][z][&g.compose(f).expect("composable")]).collect())
                    .collect();
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    for f in 0..homs[x][y].len() {
                        for g in 0..homs[y][z].len() {
                            let gf = comp[x][y][z][f][g];
                            for h in 0..homs[z][w].len() {
                                let hg = comp[y][z][w][g][h];
                                cases += 1;
                                ok &= comp[x][z][w][gf][h] == comp[x][y][w][f][hg];
                            }
                        }
                    }
                }
            }
        }
    }
    let mut out = Outcome { ok, cases, detail: String::new() }.and(ok, "identity or associativity fails");

    let single = CubeMorphism::enumerate(&set(&[0]), &set(&[1])).len();
    out = out.and(single == 3 && brute_force_count(1, 1) == 3, "|C({a},{b})| != 3");
    for m in 0..=3 {
        for k in 0..=3 {
            let listed = CubeMorphism::enumerate(&NameSet::canonical(m), &set(&(10..10 + k as u32).collect::<Vec<_>>())).len() as u64;
            let brute = brute_force_count(m, k);
            out.cases += 1;
            out = out.and(listed == brute && morphism_count(m, k) == brute, &format!("count mismatch at m={m}, n={k}"));
        }
    }
    out
}

// ---------------------------------------------------------------- 2

fn substitution_laws() -> Outcome {
    let b = Bounds::new(3, 3);
    Outcome::from_reports(&[
        check_sub_laws(&Discrete::new(2), b),
        check_sub_laws(&FreeSub::new(0), b),
        check_sub_laws(&FreeSub::new(1), b),
        check_sub_laws(&FreeSub::new(2), b),
        check_sub_laws(&ProductSub::new(FreeSub::new(1), Discrete::new(2)), b),
        check_sub_laws(&BoxSet::unary(FreeSub::new(1)), b),
        check_sub_laws(&IStar::new(Representable::new(base(0))), b),
        check_sub_laws(&IStar::new(Representable::new(base(1))), b),
        check_sub_laws(&IStar::new(Representable::new(base(2))), b),
        check_sub_laws(&IStar::new(FromSub::new(Discrete::new(2))), b),
        check_sub_laws(&IStar::new(FromSub::new(FreeSub::new(1))), b),
    ])
}

// ---------------------------------------------------------------- 3

fn composition_law() -> Outcome {
    let report = check_functor_laws(&FromSub::new(FreeSub::new(1)), Bounds::new(4, 2));
    let composed = report.check("functor:composition").map_or(0, |c| c.cases);
    Outcome::from_reports(&[report]).and(composed > 0, "no composable pairs checked")
}

// ---------------------------------------------------------------- 4

fn pullback_preservation() -> Outcome {
    let b = Bounds::new(4, 3);
    let reports = [
        check_pullback_preservation(&Representable::new(base(0)), b),
        check_pullback_preservation(&Representable::new(base(1)), b),
        check_pullback_preservation(&Representable::new(base(2)), b),
        check_pullback_preservation(&FromSub::new(Discrete::new(2)), b),
        check_pullback_preservation(&FromSub::new(FreeSub::new(1)), b),
        check_pullback_preservation(&FromSub::new(FreeSub::new(2)), b),
        check_pullback_preservation(&FromSub::new(ProductSub::new(FreeSub::new(1), Discrete::new(2))), b),
        check_pullback_preservation(&FromSub::new(BoxSet::unary(FreeSub::new(1))), b),
    ];
    Outcome::from_reports(&reports)
}

// ---------------------------------------------------------------- 5

fn round_trips() -> Outcome {
    let b = Bounds::new(3, 3);
    let rep_table = Tabulated::tabulate(&Representable::new(base(1)), 3);
    let free_table = Tabulated::tabulate(&FromSub::new(FreeSub::new(1)), 2);
    Outcome::from_reports(&[
        check_epsilon(&Discrete::new(2), b),
        check_epsilon(&FreeSub::new(1), b),
        check_epsilon(&ProductSub::new(FreeSub::new(1), Discrete::new(2)), b),
        check_unit_round_trip(&rep_table, 3, b),
        check_unit_round_trip(&free_table, 2, b),
    ])
}

// ---------------------------------------------------------------- 6

fn full_and_faithful() -> Outcome {
    let b = Bounds::new(3, 3);
    let source = Representable::new(set(&[100]));
    let target = Representable::new(set(&[101]));
    let along = |v: Value| CubeMorphism::new(set(&[101]), set(&[100]), [(a(101), v)].into()).unwrap();
    let pre = |g: CubeMorphism| NatTrans::from_fn(&source, 3, move |_, x: &CubeMorphism| x.compose(&g).unwrap());
    let phi = pre(along(Value::Name(a(100))));
    let psi = pre(along(Value::Bit(Bit::Zero)));

    let identity = NatTrans::identity(&source, 3);
    let lifted_id = |c: &EqClass<CubeMorphism>| i_star_morphism(&identity, &source, &source, c);
    let d = FromSub::new(Discrete::new(3));
    let shift = |c: &EqClass<usize>| epsilon_inverse(&Discrete::new(3), &((epsilon::<Discrete>(c) + 1) % 3));
    let shifted = NatTrans::from_fn(&d, 3, |_, x: &usize| (x + 2) % 3);

    let mut out = Outcome::from_reports(&[
        check_faithful(&identity, &source, &source, b),
        check_faithful(&phi, &source, &target, b),
        check_faithful(&psi, &source, &target, b),
        check_faithful(&shifted, &d, &d, b),
        check_full(lifted_id, &source, &source, 3, b),
        check_full(shift, &d, &d, 3, b),
    ]);

    // the shift transports to constant-preserving components
    let transported = transport_morphism(shift, &d, &d, 3).expect("support does not grow");
    out = out.and(transported.components().iter().all(|col| col == &vec![1, 2, 0]), "shift components");

    // distinct transformations stay distinct after lifting
    let classes = IStar::new(source.clone());
    let targets = IStar::new(target.clone());
    let all: Vec<_> = b.objects().iter().flat_map(|x| classes.enumerate_with_support(x)).collect();
    let differ = all.iter().any(|c| {
        !targets.class_equal(&i_star_morphism(&phi, &source, &target, c), &i_star_morphism(&psi, &source, &target, c))
    });
    out = out.and(differ && !phi.same_as(&psi, &target), "distinct transformations collapse");

    // I*(ψ∘φ) = I*ψ ∘ I*φ with ψ = precomposition along {a102} -> {a101}
    let third = Representable::new(set(&[102]));
    let g2 = CubeMorphism::new(set(&[102]), set(&[101]), [(a(102), Value::Name(a(101)))].into()).unwrap();
    let chi = NatTrans::from_fn(&target, 3, move |_, x: &CubeMorphism| x.compose(&g2).unwrap());
    let both = phi.then(&chi, &source, &target, &third);
    let ends = IStar::new(third.clone());
    for c in &all {
        out.cases += 1;
        let lhs = i_star_morphism(&both, &source, &third, c);
        let rhs = i_star_morphism(&chi, &target, &third, &i_star_morphism(&phi, &source, &target, c));
        out = out.and(ends.class_equal(&lhs, &rhs), "lifting is not functorial");
    }
    out
}

// ---------------------------------------------------------------- 7

fn free_oracle() -> Outcome {
    let b = Bounds::new(3, 3);
    Outcome::from_reports(&[check_free_oracle(&base(0), b), check_free_oracle(&base(1), b), check_free_oracle(&base(2), b)])
}

// ---------------------------------------------------------------- 8

/// Substitution that overwrites the generator even at fresh names.
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
        let out = self.0.subst(x, a, i);
        match out.get(Gen(0)) {
            Some(Value::Name(_)) => out,
            _ => FreeElem::from_pairs([(0, Value::Bit(i))]),
        }
    }
    fn enumerate_with_support(&self, names: &NameSet) -> Vec<FreeElem> {
        self.0.enumerate_with_support(names)
    }
}

/// Fills `(a,0) ↦ b0=>0` with the path `b0=>a`, and everything else with
/// the least filling.
struct PathWhenClosed(LeastFilling<FreeSub>);

impl KanStructure for PathWhenClosed {
    type Elem = FreeElem;
    fn fill_up(&self, u: &OpenBox<FreeElem>) -> Option<FreeElem> {
        let closed = FreeElem::from_pairs([(0, Value::Bit(Bit::Zero))]);
        if u.names().len() == 1 && u.get(u.missing(), Bit::Zero) == Some(&closed) {
            return Some(FreeElem::from_pairs([(0, Value::Name(u.missing()))]));
        }
        self.0.fill_up(u)
    }
    fn fill_down(&self, u: &OpenBox<FreeElem>) -> Option<FreeElem> {
        self.0.fill_down(u)
    }
}

fn detected(report: &Report, check: &str) -> bool {
    report.check(check).is_some_and(|c| !c.passed() && !c.witnesses.is_empty())
}

fn kan_suite() -> Outcome {
    let d = Discrete::new(2);
    let positive = [
        check_uniform_kan(&discrete_kan(&d), &d, Bounds::new(3, 3)),
        check_box_projection(&discrete_kan(&d), &d, 1, Bounds::new(3, 3)),
        check_boxes(&FreeSub::new(2), Bounds::new(3, 2), 2),
        check_faces(&FreeSub::new(1), 2, Bounds::new(3, 3)),
        check_faces(&FreeSub::new(2), 2, Bounds::new(2, 2)),
    ];
    let mut out = Outcome::from_reports(&positive);

    let broken = check_sub_laws(&Overwriting(FreeSub::new(1)), Bounds::new(3, 3));
    out = out.and(detected(&broken, "subst:fresh-trivial"), "broken substitution law not detected");

    let free = FreeSub::new(1);
    let bent = check_uniform_kan(&PathWhenClosed(LeastFilling::new(free.clone())), &free, Bounds::new(3, 1));
    out = out.and(detected(&bent, "kan:subst-uniform"), "non-uniform filler not detected");

    let bang = check_fibration(|_: &FreeElem| 0usize, &free, &Discrete::new(1), Bounds::new(2, 2));
    out = out.and(detected(&bang, "fibration:lift-exists"), "lift-less fibration not detected");

    let mut table = Tabulated::tabulate(&Representable::new(base(1)), 2);
    let f = CubeMorphism::generator_subst(&NameSet::canonical(1), a(0), Bit::Zero);
    let was = table.actions()[&f][0];
    table.set_action(&f, 0, 1 - was);
    let corrupted = check_functor_laws(&table, Bounds::new(3, 2));
    out = out.and(detected(&corrupted, "functor:composition"), "corrupted table not detected");

    let mut collapsed = Tabulated::tabulate(&Representable::new(base(1)), 2);
    let incl = CubeMorphism::inclusion(&NameSet::canonical(0), &NameSet::canonical(1)).unwrap();
    let target = collapsed.actions()[&incl][0];
    collapsed.set_action(&incl, 1, target);
    let squares = check_pullback_preservation(&collapsed, Bounds::new(3, 2));
    out = out.and(detected(&squares, "pullback:unique-witness"), "collapsed table not detected");

    let u = box_of_element(&free, &FreeElem::from_pairs([(0, Value::Name(a(0)))]), &set(&[0]), a(0), Direction::Up).unwrap();
    let stale = OpenBox::new(&free, Direction::Up, set(&[0]), a(0), [((a(0), Bit::Zero), FreeElem::from_pairs([(0, Value::Name(a(0)))]))].into());
    out.and(u.validate(&free).is_ok() && stale.is_err(), "box validation")
}

// ---------------------------------------------------------------- 9

fn choice_independence() -> Outcome {
    fn run<X: SubstSet + Clone>(carrier: X, out: &mut Outcome) {
        let standard = FromSub::new(carrier.clone());
        let descending = FromSub::new(carrier.clone()).with_completion(Completion::Descending);
        let reversed = FromSub::new(carrier.clone()).with_reversed_listing();
        let objects = NameSet::canonical(4).subsets_up_to(2);
        for dom in &objects {
            let elems = standard.on_object(dom);
            for cod in &objects {
                for f in CubeMorphism::enumerate(dom, cod) {
                    let d = f.decompose().unwrap();
                    // π composed with a swap of each substituted name and a far name
                    let far = a(50);
                    let swapped = d.assignments.iter().fold(d.perm.clone(), |p, &(b, _)| p.compose(&FinPerm::swap(b, far)));
                    for x in &elems {
                        let reference = standard.on_morphism(&f, x);
                        let alternatives = [
                            descending.on_morphism(&f, x),
                            reversed.on_morphism(&f, x),
                            standard.transport(&swapped, &d.assignments, x),
                            carrier.act(&d.perm, &subst_all(&carrier, x, &d.assignments)),
                        ];
                        for alt in &alternatives {
                            out.cases += 1;
                            if !carrier.equal(alt, &reference) {
                                out.ok = false;
                                out.detail = format!("f={f} x={}", carrier.show(x));
                            }
                        }
                    }
                }
            }
        }
    }
    let mut out = Outcome { ok: true, cases: 0, detail: String::new() };
    run(FreeSub::new(1), &mut out);
    run(FreeSub::new(2), &mut out);
    run(ProductSub::new(FreeSub::new(1), Discrete::new(2)), &mut out);
    run(BoxSet::unary(FreeSub::new(1)), &mut out);
    out
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        (1, "cube category laws and hom-set counts", 10, cube_category),
        (2, "substitution laws for every carrier", 30, substitution_laws),
        (3, "composition law for FreeSub({b}) as a cubical set", 60, composition_law),
        (4, "intersection pullbacks preserved", 30, pullback_preservation),
        (5, "epsilon and unit round trips", 60, round_trips),
        (6, "transport and lifting mutually inverse", 30, full_and_faithful),
        (7, "classes of Representable(B) match FreeSub(B)", 30, free_oracle),
        (8, "Kan suite and negative controls", 30, kan_suite),
        (9, "action independent of permutation and listing choices", 30, choice_independence),
    ];
    let mut all = true;
    for (id, title, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(limit);
        let ok = outcome.ok && in_time;
        all &= ok;
        println!(
            "{} criterion {id}: {title} ({} cases, {:.2} s, limit {limit} s)",
            if ok { "PASS" } else { "FAIL" },
            outcome.cases,
            elapsed.as_secs_f64()
        );
        if !outcome.ok {
            println!("     {}", outcome.detail);
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
