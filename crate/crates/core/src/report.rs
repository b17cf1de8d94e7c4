//! Check reports: one line per law, in a stable order.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::names::{fresh_names, FinPerm, NameSet};

/// Witnesses kept per check; the violation count is always exact.
const MAX_WITNESSES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub violations: usize,
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), cases: 0, violations: 0, witnesses: Vec::new() }
    }

    /// Records one case; `witness` is only rendered on failure.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn merge(&mut self, other: Check) {
        self.cases += other.cases;
        self.violations += other.violations;
        let room = MAX_WITNESSES.saturating_sub(self.witnesses.len());
        self.witnesses.extend(other.witnesses.into_iter().take(room));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Lines,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
    pub notes: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Informational line that does not affect the verdict.
    pub fn note(&mut self, topic: impl Into<String>, message: impl Into<String>) {
        self.notes.push((topic.into(), message.into()));
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for c in &self.checks {
            match format {
                Format::Text => {
                    let status = if c.passed() { "PASS" } else { "FAIL" };
                    out += &format!("{status} {:<28} {} cases", c.name, c.cases);
                    if !c.passed() {
                        out += &format!(", {} violations", c.violations);
                    }
                    out.push('\n');
                    for w in &c.witnesses {
                        out += &format!("       witness: {w}\n");
                    }
                }
                Format::Lines => {
                    let status = if c.passed() { "pass" } else { "fail" };
                    out += &format!(
                        "check={} status={} cases={} violations={}\n",
                        c.name, status, c.cases, c.violations
                    );
                    for w in &c.witnesses {
                        out += &format!("witness check={} {w}\n", c.name);
                    }
                }
            }
        }
        for (topic, msg) in &self.notes {
            match format {
                Format::Text => out += &format!("INFO {topic}: {msg}\n"),
                Format::Lines => out += &format!("note topic={topic} {msg}\n"),
            }
        }
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Format::Text))
    }
}

/// Enumeration bounds shared by the checkers.
///
/// Elements are drawn with support inside the universe `a0..a(universe-1)`;
/// objects and box shapes have at most `support` names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub universe: usize,
    pub support: usize,
    pub seed: u64,
}

/// Exhaustive permutation checks are used up to this many names.
const EXHAUSTIVE_PERMS: usize = 5;
const SAMPLED_PERMS: usize = 48;

impl Bounds {
    pub fn new(universe: usize, support: usize) -> Self {
        Bounds { universe, support, seed: 0 }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Bounds { seed, ..self }
    }

    pub fn names(&self) -> NameSet {
        NameSet::canonical(self.universe)
    }

    /// Universe plus `extra` names outside it.
    pub fn names_plus(&self, extra: usize) -> NameSet {
        let u = self.names();
        u.union(&fresh_names(&u, extra).into_iter().collect())
    }

    pub fn objects(&self) -> Vec<NameSet> {
        self.names().subsets_up_to(self.support)
    }

    /// Permutations of `names`: all of them for small sets, a seeded sample
    /// (always including the identity) otherwise.
    pub fn perms_on(&self, names: &NameSet) -> Vec<FinPerm> {
        if names.len() <= EXHAUSTIVE_PERMS {
            return FinPerm::all_on(names);
        }
        let elems: Vec<_> = names.iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = vec![FinPerm::identity()];
        for _ in 0..SAMPLED_PERMS {
            let mut img = elems.clone();
            img.shuffle(&mut rng);
            let map = elems.iter().copied().zip(img).collect();
            out.push(FinPerm::from_partial_bijection(&map).expect("shuffle is a bijection"));
        }
        out
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::new(4, 3)
    }
}
