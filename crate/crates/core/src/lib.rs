//! Cubical sets and 01-substitution sets.
//!
//! The crate implements the cube category, computable cubical sets, nominal
//! sets with a 01-substitution operation, and the functors between them, with
//! exhaustive checkers for every law involved at small sizes. The [`kan`]
//! module adds open boxes and uniform-Kan filling structures.

pub mod cube;
pub mod equivalence;
pub mod kan;
pub mod names;
pub mod nominal;
pub mod presheaf;
pub mod report;
pub mod subsets;
pub mod syntax;

pub use cube::{Bit, CubeError, CubeMorphism, Decomposition, Value};
pub use names::{fresh_name, fresh_names, Completion, FinPerm, Name, NameSet};
pub use nominal::{Abstraction, Atoms, BoxSet, NominalSet};
pub use report::{Bounds, Check, Format, Report};
pub use subsets::{Discrete, FreeElem, FreeSub, Gen, ProductSub, SubstSet};
pub use equivalence::{EqClass, EquivError, IStar};
pub use kan::{Direction, KanError, KanStructure, OpenBox};
pub use presheaf::{CubicalSet, FromSub, NatTrans, Representable, Tabulated};
pub use syntax::{ElementSyntax, Label, SyntaxError};
