//! Specifications shipped with the engine, stored as DSL text.

use crate::dsl::parse_spec;
use crate::spec::Specification;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// `Av(321)`, tracking both extremes; `CR` and `C` are the Dyck-path classes.
    Av321,
    /// `Av(312)` from its insertion encoding, tracking the rightmost entry only.
    Av312,
    /// Separable permutations `Av(2413, 3142)`, tracking both extremes.
    Separable,
    /// `Av(21)`, tracking both extremes.
    Monotone,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [
        Builtin::Av321,
        Builtin::Av312,
        Builtin::Separable,
        Builtin::Monotone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Av321 => "av321",
            Builtin::Av312 => "av312",
            Builtin::Separable => "separable",
            Builtin::Monotone => "monotone",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }

    pub fn source(self) -> &'static str {
        match self {
            Builtin::Av321 => include_str!("../builtins/av321.spec"),
            Builtin::Av312 => include_str!("../builtins/av312.spec"),
            Builtin::Separable => include_str!("../builtins/separable.spec"),
            Builtin::Monotone => include_str!("../builtins/monotone.spec"),
        }
    }

    /// Basis of the class, as one-line permutations.
    pub fn basis(self) -> &'static [&'static str] {
        match self {
            Builtin::Av321 => &["321"],
            Builtin::Av312 => &["312"],
            Builtin::Separable => &["2413", "3142"],
            Builtin::Monotone => &["21"],
        }
    }

    pub fn spec(self) -> Specification {
        parse_spec(self.source()).expect("built-in specifications are valid")
    }
}
