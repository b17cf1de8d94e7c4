use std::fs;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cubesub::equivalence::{check_epsilon, check_free_oracle, check_full, check_unit_round_trip, i_star_morphism};
use cubesub::kan::{
    check_box_projection, check_boxes, check_faces, check_fibration, check_uniform_kan, discrete_kan,
    find_unfillable_box, show_box, LeastFilling,
};
use cubesub::presheaf::{check_functor_laws, check_pullback_preservation};
use cubesub::subsets::check_sub_laws;
use cubesub::syntax::{parse_morphism, parse_name_set, parse_tabulated};
use cubesub::{
    Bounds, BoxSet, CubeMorphism, CubicalSet, Discrete, Format, FreeElem, FreeSub, IStar, NatTrans, ProductSub,
    Report, Representable, SubstSet,
};

/// Functor laws are checked on objects of at most this size; composition
/// grows too fast beyond it for an interactive run.
const FUNCTOR_SUPPORT: usize = 2;

#[derive(Parser)]
#[command(name = "cubesub", version, about = "Cube category, cubical sets and 01-substitution sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Number of names in the universe `a0..a(N-1)`.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    universe: u32,
    /// Largest object or box shape considered.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    support: u32,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Seed for sampled permutation checks on large universes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Lines,
}

#[derive(Subcommand)]
enum Command {
    /// Print `g∘f`.
    Compose { f: String, g: String },
    /// Print every morphism `A -> B` and their number.
    Enumerate { dom: String, cod: String },
    /// Print the permutation and endpoint assignments of a morphism.
    Decompose { f: String },
    /// Substitution, functor and pullback laws for an instance.
    Laws { instance: String },
    /// Round trips between cubical sets and 01-substitution sets.
    Roundtrip { instance: String },
    /// Open boxes, fillings, faces and degeneracies.
    Kan { instance: String },
    /// Lifting along `proj`, `id` or `bang`.
    Fibration { map: String },
}

/// Instances named on the command line.
enum Instance {
    Discrete(usize),
    Free(usize),
    Product(usize, usize),
    Boxed(usize),
    Rep(usize),
    Table(String),
}

fn parse_instance(text: &str) -> Result<Instance> {
    let (kind, arg) = text.split_once(':').with_context(|| format!("instance `{text}` needs the form kind:arg"))?;
    let num = |s: &str| s.trim().parse::<usize>().with_context(|| format!("`{s}` in `{text}` is not a number"));
    Ok(match kind {
        "discrete" => Instance::Discrete(num(arg)?),
        "freesub" => Instance::Free(num(arg)?),
        "box" => Instance::Boxed(num(arg)?),
        "rep" => Instance::Rep(num(arg)?),
        "product" => {
            let (n, k) = arg.split_once(',').with_context(|| format!("`{text}` needs product:N,K"))?;
            Instance::Product(num(n)?, num(k)?)
        }
        "tab" => Instance::Table(arg.to_string()),
        other => bail!("unknown instance kind `{other}` (expected discrete, freesub, product, box, rep or tab)"),
    })
}

fn sub_laws<X: SubstSet + Clone + Sync>(carrier: X, bounds: Bounds) -> Report
where
    X::Elem: Send + Sync,
{
    let mut report = check_sub_laws(&carrier, bounds);
    let functor = cubesub::FromSub::new(carrier);
    report.extend(check_functor_laws(&functor, functor_bounds(bounds)));
    report.extend(check_pullback_preservation(&functor, bounds));
    report
}

fn functor_bounds(bounds: Bounds) -> Bounds {
    Bounds { support: bounds.support.min(FUNCTOR_SUPPORT), ..bounds }
}

fn cubical_laws<F>(functor: F, bounds: Bounds) -> Report
where
    F: CubicalSet + Clone + Sync,
    F::Elem: Send + Sync,
{
    let mut report = check_functor_laws(&functor, functor_bounds(bounds));
    report.extend(check_pullback_preservation(&functor, bounds));
    let universe = functor.max_object_size().map_or(bounds.universe, |m| bounds.universe.min(m));
    report.extend(check_sub_laws(&IStar::new(functor), Bounds { universe, ..bounds }));
    report
}

fn laws(instance: Instance, bounds: Bounds) -> Result<Report> {
    let mut report = match instance {
        Instance::Discrete(k) => sub_laws(Discrete::new(k), bounds),
        Instance::Free(n) => sub_laws(FreeSub::new(n), bounds),
        Instance::Product(n, k) => sub_laws(ProductSub::new(FreeSub::new(n), Discrete::new(k)), bounds),
        Instance::Boxed(n) => sub_laws(BoxSet::unary(FreeSub::new(n)), bounds),
        Instance::Rep(n) => cubical_laws(Representable::new(cubesub::NameSet::canonical(n)), bounds),
        Instance::Table(path) => cubical_laws(load_table(&path)?, bounds),
    };
    if bounds.support > FUNCTOR_SUPPORT {
        report.note("bounds", format!("functor laws use objects of size <= {FUNCTOR_SUPPORT}"));
    }
    Ok(report)
}

fn load_table(path: &str) -> Result<cubesub::Tabulated<cubesub::Label>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    parse_tabulated(&text).with_context(|| format!("parsing {path}"))
}

fn cubical_round_trip<F>(functor: F, max: usize, bounds: Bounds) -> Report
where
    F: CubicalSet + Clone,
{
    let mut report = check_unit_round_trip(&functor, max, bounds);
    let identity = NatTrans::identity(&functor, max);
    report.extend(cubesub::equivalence::check_faithful(&identity, &functor, &functor, bounds));
    let lifted = |c: &cubesub::EqClass<F::Elem>| i_star_morphism(&identity, &functor, &functor, c);
    report.extend(check_full(lifted, &functor, &functor, max, bounds));
    report
}

fn roundtrip(instance: Instance, bounds: Bounds) -> Result<Report> {
    Ok(match instance {
        Instance::Discrete(k) => check_epsilon(&Discrete::new(k), bounds),
        Instance::Free(n) => {
            let mut report = check_epsilon(&FreeSub::new(n), bounds);
            report.extend(check_free_oracle(&cubesub::NameSet::canonical(n), bounds));
            report
        }
        Instance::Product(n, k) => check_epsilon(&ProductSub::new(FreeSub::new(n), Discrete::new(k)), bounds),
        Instance::Boxed(n) => check_epsilon(&BoxSet::unary(FreeSub::new(n)), bounds),
        Instance::Rep(n) => {
            let max = bounds.support.min(bounds.universe);
            cubical_round_trip(Representable::new(cubesub::NameSet::canonical(n)), max, bounds)
        }
        Instance::Table(path) => {
            let table = load_table(&path)?;
            let max = table.max();
            cubical_round_trip(table, max, bounds)
        }
    })
}

/// Box suites for any carrier; the existence of a uniform structure is
/// reported, not asserted.
fn kan_suite<X: SubstSet + Clone>(carrier: X, bounds: Bounds) -> Report {
    let shapes = bounds.support.min(2);
    let mut report = check_boxes(&carrier, bounds, shapes);
    report.extend(check_faces(&carrier, 2, bounds));
    match find_unfillable_box(&carrier, bounds, shapes) {
        Some(u) => report.note("kan", format!("no filling exists for {}", show_box(&carrier, &u))),
        None => report.note("kan", format!("every box with |A| <= {shapes} has a filling")),
    }
    let least = check_uniform_kan(&LeastFilling::new(carrier.clone()), &carrier, Bounds { support: shapes, ..bounds });
    let violations: usize = least.checks.iter().map(|c| c.violations).sum();
    report.note("kan", format!("least-filling chooser: {violations} violations over {} checks", least.checks.len()));
    report
}

fn kan(instance: Instance, bounds: Bounds) -> Result<Report> {
    Ok(match instance {
        Instance::Discrete(k) => {
            let d = Discrete::new(k);
            let mut report = check_uniform_kan(&discrete_kan(&d), &d, bounds);
            report.extend(check_box_projection(&discrete_kan(&d), &d, 1, bounds));
            report.extend(check_boxes(&d, bounds, bounds.support.min(2)));
            report.extend(check_faces(&d, 2, bounds));
            report
        }
        Instance::Free(n) => kan_suite(FreeSub::new(n), bounds),
        Instance::Product(n, k) => kan_suite(ProductSub::new(FreeSub::new(n), Discrete::new(k)), bounds),
        Instance::Boxed(n) => kan_suite(BoxSet::unary(FreeSub::new(n)), bounds),
        Instance::Rep(_) | Instance::Table(_) => bail!("kan suites need a 01-substitution instance"),
    })
}

fn fibration(map: &str, bounds: Bounds) -> Result<Report> {
    let free = FreeSub::new(1);
    Ok(match map {
        "proj" => {
            let product = ProductSub::new(Discrete::new(2), free.clone());
            check_fibration(|(_, y): &(usize, FreeElem)| y.clone(), &product, &free, bounds)
        }
        "id" => {
            let d = Discrete::new(2);
            check_fibration(|x: &usize| *x, &d, &d, bounds)
        }
        "bang" => check_fibration(|_: &FreeElem| 0usize, &free, &Discrete::new(1), bounds),
        other => bail!("unknown map `{other}` (expected proj, id or bang)"),
    })
}

fn run(cli: Cli) -> Result<bool> {
    let bounds = Bounds::new(cli.universe as usize, cli.support as usize).with_seed(cli.seed);
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Lines => Format::Lines,
    };
    let report = match cli.command {
        Command::Compose { f, g } => {
            let f = parse_morphism(&f).with_context(|| format!("first morphism `{f}`"))?;
            let g = parse_morphism(&g).with_context(|| format!("second morphism `{g}`"))?;
            println!("{}", g.compose(&f)?);
            return Ok(true);
        }
        Command::Enumerate { dom, cod } => {
            let dom = parse_name_set(&dom).with_context(|| format!("domain `{dom}`"))?;
            let cod = parse_name_set(&cod).with_context(|| format!("codomain `{cod}`"))?;
            let all = CubeMorphism::enumerate(&dom, &cod);
            for f in &all {
                println!("{f}");
            }
            println!("{} morphisms", all.len());
            return Ok(true);
        }
        Command::Decompose { f } => {
            let f = parse_morphism(&f).with_context(|| format!("morphism `{f}`"))?;
            let d = f.decompose()?;
            println!("perm: {}", d.perm);
            let assignments: Vec<String> = d.assignments.iter().map(|(a, i)| format!("{a}:={i}")).collect();
            println!("assignments: {}", assignments.join(", "));
            return Ok(true);
        }
        Command::Laws { instance } => laws(parse_instance(&instance)?, bounds)?,
        Command::Roundtrip { instance } => roundtrip(parse_instance(&instance)?, bounds)?,
        Command::Kan { instance } => kan(parse_instance(&instance)?, bounds)?,
        Command::Fibration { map } => fibration(&map, bounds)?,
    };
    print!("{}", report.render(format));
    Ok(report.passed())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
