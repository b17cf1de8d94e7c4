//! Text formats: names, permutations, morphisms, elements, classes,
//! abstractions, boxes and tabulated functors. Printing then parsing is the
//! identity on every value the printers produce.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::cube::{Bit, CubeError, CubeMorphism, Value};
use crate::equivalence::{EqClass, IStar};
use crate::kan::{Direction, KanError, OpenBox};
use crate::names::{FinPerm, Name, NameSet};
use crate::nominal::{Abstraction, BoxSet, NominalSet};
use crate::presheaf::{CubicalSet, FromSub, Representable, TableError, Tabulated};
use crate::subsets::{Discrete, FreeElem, FreeSub, Gen, ProductSub, SubstSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("at offset {position}: expected {expected}, found {found}")]
    Unexpected { position: usize, expected: String, found: String },
    #[error("at offset {position}: {cause}")]
    Morphism { position: usize, cause: CubeError },
    #[error("at offset {position}: {cause}")]
    Box { position: usize, cause: KanError },
    #[error("at offset {position}: {message}")]
    Invalid { position: usize, message: String },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error(transparent)]
    Table(#[from] TableError),
}

/// A position in the input being parsed.
#[derive(Debug, Clone)]
pub struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    /// The next whitespace-delimited chunk, for diagnostics.
    fn found(&mut self) -> String {
        self.skip_ws();
        match self.rest().split_whitespace().next() {
            Some(tok) => format!("`{tok}`"),
            None => "end of input".into(),
        }
    }

    pub fn error(&mut self, expected: &str) -> SyntaxError {
        let found = self.found();
        SyntaxError::Unexpected { position: self.pos, expected: expected.into(), found }
    }

    pub fn peek(&mut self, token: &str) -> bool {
        self.skip_ws();
        self.rest().starts_with(token)
    }

    pub fn eat(&mut self, token: &str) -> bool {
        let hit = self.peek(token);
        if hit {
            self.pos += token.len();
        }
        hit
    }

    pub fn expect(&mut self, token: &str) -> Result<(), SyntaxError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("`{token}`")))
        }
    }

    pub fn number(&mut self) -> Result<u32, SyntaxError> {
        self.skip_ws();
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        let parsed = self.rest()[..digits].parse().map_err(|_| self.error("a number"))?;
        self.pos += digits;
        Ok(parsed)
    }

    fn prefixed(&mut self, prefix: char, what: &str) -> Result<u32, SyntaxError> {
        self.skip_ws();
        let mut chars = self.rest().chars();
        if chars.next() == Some(prefix) && chars.next().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
            self.number()
        } else {
            Err(self.error(what))
        }
    }

    pub fn name(&mut self) -> Result<Name, SyntaxError> {
        self.prefixed('a', "a name like `a0`").map(Name)
    }

    pub fn bit(&mut self) -> Result<Bit, SyntaxError> {
        if self.eat("0") {
            Ok(Bit::Zero)
        } else if self.eat("1") {
            Ok(Bit::One)
        } else {
            Err(self.error("`0` or `1`"))
        }
    }

    pub fn value(&mut self) -> Result<Value, SyntaxError> {
        if self.peek("a") {
            self.name().map(Value::Name)
        } else {
            self.bit().map(Value::Bit).map_err(|_| self.error("a name, `0` or `1`"))
        }
    }

    pub fn name_set(&mut self) -> Result<NameSet, SyntaxError> {
        self.expect("{")?;
        let mut names = NameSet::new();
        if self.eat("}") {
            return Ok(names);
        }
        loop {
            let at = self.position();
            let a = self.name()?;
            if !names.insert(a) {
                return Err(SyntaxError::Invalid { position: at, message: format!("{a} listed twice") });
            }
            if self.eat("}") {
                return Ok(names);
            }
            self.expect(",")?;
        }
    }

    /// Fails unless only whitespace remains.
    pub fn finish(&mut self) -> Result<(), SyntaxError> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn label(&mut self) -> Result<String, SyntaxError> {
        self.skip_ws();
        let len = self.rest().find(|c: char| c.is_whitespace() || ",{}:".contains(c)).unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("an element label"));
        }
        let label = self.rest()[..len].to_string();
        self.pos += len;
        Ok(label)
    }
}

fn whole<T>(text: &str, parse: impl FnOnce(&mut Cursor) -> Result<T, SyntaxError>) -> Result<T, SyntaxError> {
    let mut cur = Cursor::new(text);
    let out = parse(&mut cur)?;
    cur.finish()?;
    Ok(out)
}

pub fn parse_name(text: &str) -> Result<Name, SyntaxError> {
    whole(text, |cur| cur.name())
}

pub fn parse_name_set(text: &str) -> Result<NameSet, SyntaxError> {
    whole(text, |cur| cur.name_set())
}

/// Disjoint cycles, `(a0 a1)(a2 a3)`, or `()` for the identity.
pub fn parse_perm(text: &str) -> Result<FinPerm, SyntaxError> {
    whole(text, perm)
}

fn perm(cur: &mut Cursor) -> Result<FinPerm, SyntaxError> {
    let start = cur.position();
    let mut cycles = Vec::new();
    cur.expect("(")?;
    if cur.eat(")") {
        return Ok(FinPerm::identity());
    }
    loop {
        let mut cycle = vec![cur.name()?];
        while !cur.eat(")") {
            cycle.push(cur.name()?);
        }
        cycles.push(cycle);
        if !cur.eat("(") {
            break;
        }
    }
    FinPerm::from_cycles(&cycles).ok_or_else(|| SyntaxError::Invalid {
        position: start,
        message: "cycles are not disjoint".into(),
    })
}

/// `{a0,a1} -> {a2} : a0=>a2, a1=>0`; whitespace is optional.
pub fn parse_morphism(text: &str) -> Result<CubeMorphism, SyntaxError> {
    whole(text, morphism)
}

pub fn morphism(cur: &mut Cursor) -> Result<CubeMorphism, SyntaxError> {
    let start = cur.position();
    let dom = cur.name_set()?;
    cur.expect("->")?;
    let cod = cur.name_set()?;
    cur.expect(":")?;
    let mut table = BTreeMap::new();
    if cur.peek("a") {
        loop {
            let at = cur.position();
            let a = cur.name()?;
            cur.expect("=>")?;
            let v = cur.value()?;
            if table.insert(a, v).is_some() {
                return Err(SyntaxError::Invalid { position: at, message: format!("{a} mapped twice") });
            }
            // a comma followed by something other than an entry belongs to the caller
            let mut probe = cur.clone();
            if probe.eat(",") && probe.peek("a") && probe.clone().name().is_ok() {
                let mut look = probe.clone();
                look.name()?;
                if look.peek("=>") {
                    *cur = probe;
                    continue;
                }
            }
            break;
        }
    }
    CubeMorphism::new(dom, cod, table).map_err(|cause| SyntaxError::Morphism { position: start, cause })
}

/// Element syntax for a carrier or a cubical set; `print` is always the
/// carrier's `show`.
pub trait ElementSyntax {
    type Elem;

    fn parse_elem(&self, cur: &mut Cursor) -> Result<Self::Elem, SyntaxError>;

    fn print_elem(&self, x: &Self::Elem) -> String;

    fn parse_str(&self, text: &str) -> Result<Self::Elem, SyntaxError> {
        whole(text, |cur| self.parse_elem(cur))
    }
}

impl ElementSyntax for Discrete {
    type Elem = usize;

    /// `#k` with `k < size`.
    fn parse_elem(&self, cur: &mut Cursor) -> Result<usize, SyntaxError> {
        let at = cur.position();
        cur.expect("#")?;
        let k = cur.number()? as usize;
        if k >= self.size() {
            return Err(SyntaxError::Invalid { position: at, message: format!("#{k} is not below {}", self.size()) });
        }
        Ok(k)
    }

    fn print_elem(&self, x: &usize) -> String {
        self.show(x)
    }
}

impl ElementSyntax for FreeSub {
    type Elem = FreeElem;

    /// `[b0=>a1, b1=>0]`, one entry per generator in order.
    fn parse_elem(&self, cur: &mut Cursor) -> Result<FreeElem, SyntaxError> {
        let start = cur.position();
        cur.expect("[")?;
        let mut assignment = BTreeMap::new();
        for (k, &g) in self.generators().iter().enumerate() {
            if k > 0 {
                cur.expect(",")?;
            }
            let at = cur.position();
            let got = Gen(cur.prefixed('b', "a generator like `b0`")?);
            if got != g {
                return Err(SyntaxError::Invalid { position: at, message: format!("expected generator {g}, found {got}") });
            }
            cur.expect("=>")?;
            assignment.insert(g, cur.value()?);
        }
        cur.expect("]")?;
        let names: Vec<Name> = assignment.values().filter_map(|v| v.as_name()).collect();
        let distinct: NameSet = names.iter().copied().collect();
        if distinct.len() != names.len() {
            return Err(SyntaxError::Invalid { position: start, message: "two generators share a name".into() });
        }
        Ok(FreeElem::new(assignment))
    }

    fn print_elem(&self, x: &FreeElem) -> String {
        self.show(x)
    }
}

impl<X: ElementSyntax + NominalSet<Elem = <X as ElementSyntax>::Elem>, Y: ElementSyntax + NominalSet<Elem = <Y as ElementSyntax>::Elem>>
    ElementSyntax for ProductSub<X, Y>
{
    type Elem = (<X as ElementSyntax>::Elem, <Y as ElementSyntax>::Elem);

    /// `(x, y)`.
    fn parse_elem(&self, cur: &mut Cursor) -> Result<Self::Elem, SyntaxError> {
        cur.expect("(")?;
        let x = self.left.parse_elem(cur)?;
        cur.expect(",")?;
        let y = self.right.parse_elem(cur)?;
        cur.expect(")")?;
        Ok((x, y))
    }

    fn print_elem(&self, x: &Self::Elem) -> String {
        self.show(x)
    }
}

impl<X: ElementSyntax + NominalSet<Elem = <X as ElementSyntax>::Elem>> ElementSyntax for BoxSet<X> {
    type Elem = Abstraction<<X as ElementSyntax>::Elem>;

    /// `<a0,a1>body`.
    fn parse_elem(&self, cur: &mut Cursor) -> Result<Self::Elem, SyntaxError> {
        let start = cur.position();
        cur.expect("<")?;
        let mut binders = Vec::new();
        if !cur.eat(">") {
            loop {
                binders.push(cur.name()?);
                if cur.eat(">") {
                    break;
                }
                cur.expect(",")?;
            }
        }
        let distinct: NameSet = binders.iter().copied().collect();
        if distinct.len() != binders.len() || binders.len() != self.arity() {
            return Err(SyntaxError::Invalid {
                position: start,
                message: format!("expected {} distinct binders", self.arity()),
            });
        }
        let body = self.inner().parse_elem(cur)?;
        Ok(Abstraction::new(binders, body))
    }

    fn print_elem(&self, x: &Self::Elem) -> String {
        self.show(x)
    }
}

impl ElementSyntax for Representable {
    type Elem = CubeMorphism;

    /// A morphism out of the base.
    fn parse_elem(&self, cur: &mut Cursor) -> Result<CubeMorphism, SyntaxError> {
        let at = cur.position();
        let f = morphism(cur)?;
        if f.dom() != self.base() {
            return Err(SyntaxError::Invalid { position: at, message: format!("domain must be {}", self.base()) });
        }
        Ok(f)
    }

    fn print_elem(&self, x: &CubeMorphism) -> String {
        x.to_string()
    }
}

impl<X: SubstSet + ElementSyntax<Elem = <X as NominalSet>::Elem>> ElementSyntax for FromSub<X> {
    type Elem = <X as NominalSet>::Elem;

    fn parse_elem(&self, cur: &mut Cursor) -> Result<Self::Elem, SyntaxError> {
        self.carrier().parse_elem(cur)
    }

    fn print_elem(&self, x: &Self::Elem) -> String {
        self.carrier().print_elem(x)
    }
}

/// An element label of a tabulated functor, printed verbatim.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub String);

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl ElementSyntax for Tabulated<Label> {
    type Elem = Label;

    fn parse_elem(&self, cur: &mut Cursor) -> Result<Label, SyntaxError> {
        let at = cur.position();
        let label = Label(cur.label()?);
        if !(0..=self.max()).any(|n| self.elements(n).contains(&label)) {
            return Err(SyntaxError::Invalid { position: at, message: format!("unknown element {label}") });
        }
        Ok(label)
    }

    fn print_elem(&self, x: &Label) -> String {
        x.0.clone()
    }
}

impl<F: CubicalSet + ElementSyntax<Elem = <F as CubicalSet>::Elem>> ElementSyntax for IStar<F> {
    type Elem = EqClass<<F as CubicalSet>::Elem>;

    /// `[{a0}, elem]`.
    fn parse_elem(&self, cur: &mut Cursor) -> Result<Self::Elem, SyntaxError> {
        cur.expect("[")?;
        let names = cur.name_set()?;
        cur.expect(",")?;
        let elem = self.functor().parse_elem(cur)?;
        cur.expect("]")?;
        Ok(EqClass::new(names, elem))
    }

    fn print_elem(&self, x: &Self::Elem) -> String {
        format!("[{}, {}]", x.names, self.functor().print_elem(&x.elem))
    }
}

/// `1-open ({a0,a1}, a0) { (a0,0)=>elem; (a1,0)=>elem; (a1,1)=>elem }`,
/// validated against the carrier.
pub fn parse_box<X>(carrier: &X, text: &str) -> Result<OpenBox<<X as NominalSet>::Elem>, SyntaxError>
where
    X: SubstSet + ElementSyntax<Elem = <X as NominalSet>::Elem>,
{
    whole(text, |cur| open_box(carrier, cur))
}

pub fn open_box<X>(carrier: &X, cur: &mut Cursor) -> Result<OpenBox<<X as NominalSet>::Elem>, SyntaxError>
where
    X: SubstSet + ElementSyntax<Elem = <X as NominalSet>::Elem>,
{
    let start = cur.position();
    let direction = match cur.bit()? {
        Bit::One => Direction::Up,
        Bit::Zero => Direction::Down,
    };
    cur.expect("-open")?;
    cur.expect("(")?;
    let names = cur.name_set()?;
    cur.expect(",")?;
    let missing = cur.name()?;
    cur.expect(")")?;
    cur.expect("{")?;
    let mut table = BTreeMap::new();
    loop {
        cur.expect("(")?;
        let at = cur.position();
        let b = cur.name()?;
        cur.expect(",")?;
        let i = cur.bit()?;
        cur.expect(")")?;
        cur.expect("=>")?;
        let e = carrier.parse_elem(cur)?;
        if table.insert((b, i), e).is_some() {
            return Err(SyntaxError::Invalid { position: at, message: format!("entry ({b},{i}) given twice") });
        }
        if cur.eat("}") {
            break;
        }
        cur.expect(";")?;
    }
    OpenBox::new(carrier, direction, names, missing, table).map_err(|cause| SyntaxError::Box { position: start, cause })
}

/// Tabulated functor files:
///
/// ```text
/// # comment
/// object [0] = {p, q}
/// object [1] = {x, y, z}
/// {a0} -> {} : a0=>0 : x -> p
/// ```
///
/// Action lines are split at their last `:`. Identity actions may be left
/// out; every other morphism between listed objects needs a line per element.
pub fn parse_tabulated(text: &str) -> Result<Tabulated<Label>, SyntaxError> {
    let mut objects: Vec<Vec<Label>> = Vec::new();
    let mut lines = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: SyntaxError| SyntaxError::Line { line: k + 1, message: e.to_string() };
        if let Some(rest) = line.strip_prefix("object") {
            let mut cur = Cursor::new(rest);
            cur.expect("[").map_err(at)?;
            let n = cur.number().map_err(at)? as usize;
            cur.expect("]").map_err(at)?;
            cur.expect("=").map_err(at)?;
            cur.expect("{").map_err(at)?;
            let mut elems = Vec::new();
            if !cur.eat("}") {
                loop {
                    elems.push(Label(cur.label().map_err(at)?));
                    if cur.eat("}") {
                        break;
                    }
                    cur.expect(",").map_err(at)?;
                }
            }
            cur.finish().map_err(at)?;
            if n != objects.len() {
                return Err(SyntaxError::Line { line: k + 1, message: format!("expected object [{}]", objects.len()) });
            }
            objects.push(elems);
        } else {
            lines.push((k + 1, line));
        }
    }
    if objects.is_empty() {
        return Err(SyntaxError::Line { line: 1, message: "no objects declared".into() });
    }

    let mut actions: BTreeMap<CubeMorphism, Vec<Option<usize>>> = BTreeMap::new();
    for (line, text) in lines {
        let fail = |message: String| SyntaxError::Line { line, message };
        let (head, mapping) = text.rsplit_once(':').ok_or_else(|| fail("expected `f : x -> y`".into()))?;
        let f = parse_morphism(head).map_err(|e| fail(e.to_string()))?;
        let (m, n) = (f.dom().len(), f.cod().len());
        if m >= objects.len() || n >= objects.len() {
            return Err(fail(format!("{f} leaves the tabulated range")));
        }
        if *f.dom() != NameSet::canonical(m) || *f.cod() != NameSet::canonical(n) {
            return Err(fail(format!("{f} is not between canonical objects")));
        }
        let (x, y) = mapping.split_once("->").ok_or_else(|| fail("expected `x -> y`".into()))?;
        let (x, y) = (Label(x.trim().to_string()), Label(y.trim().to_string()));
        let from = objects[m].iter().position(|e| *e == x).ok_or_else(|| fail(format!("{x} is not in [{m}]")))?;
        let to = objects[n].iter().position(|e| *e == y).ok_or_else(|| fail(format!("{y} is not in [{n}]")))?;
        let table = actions.entry(f.clone()).or_insert_with(|| vec![None; objects[m].len()]);
        if table[from].replace(to).is_some_and(|old| old != to) {
            return Err(fail(format!("{f} sends {x} to two elements")));
        }
    }
    let mut complete = BTreeMap::new();
    for m in 0..objects.len() {
        for n in 0..objects.len() {
            for f in CubeMorphism::enumerate(&NameSet::canonical(m), &NameSet::canonical(n)) {
                let identity = m == n && f == CubeMorphism::identity(&NameSet::canonical(m));
                let table = match actions.remove(&f) {
                    Some(t) => t,
                    None if identity => (0..objects[m].len()).map(Some).collect(),
                    None => return Err(TableError::MissingAction { morphism: f.to_string() }.into()),
                };
                let filled: Option<Vec<usize>> = table.iter().copied().collect();
                let Some(filled) = filled else {
                    let k = table.iter().position(Option::is_none).unwrap();
                    return Err(SyntaxError::Line {
                        line: 0,
                        message: format!("{f} has no image for {}", objects[m][k]),
                    });
                };
                complete.insert(f, filled);
            }
        }
    }
    Ok(Tabulated::new(objects, complete)?)
}

/// The file format read by [`parse_tabulated`], with every action listed.
pub fn print_tabulated<E: Clone + fmt::Debug + PartialEq>(table: &Tabulated<E>) -> String {
    let mut out = String::new();
    for n in 0..=table.max() {
        let elems: Vec<String> = table.elements(n).iter().map(|e| format!("{e:?}")).collect();
        out += &format!("object [{n}] = {{{}}}\n", elems.join(", "));
    }
    for (f, images) in table.actions() {
        let (m, n) = (f.dom().len(), f.cod().len());
        for (k, &t) in images.iter().enumerate() {
            out += &format!("{f} : {:?} -> {:?}\n", table.elements(m)[k], table.elements(n)[t]);
        }
    }
    out
}

/// Relabels a tabulated functor with the printed form of its elements.
pub fn label_table<E: Clone + fmt::Debug + PartialEq>(table: &Tabulated<E>, show: impl Fn(&E) -> String) -> Tabulated<Label> {
    let objects = (0..=table.max())
        .map(|n| table.elements(n).iter().map(|e| Label(show(e))).collect())
        .collect();
    Tabulated::new(objects, table.actions().clone()).expect("relabelling keeps the table valid")
}
