//! Combinatorial specifications of permutation classes and their
//! juxtapositions with monotone classes.
//!
//! Products are read bottom to top: in `A B` every entry of `A` lies below
//! every entry of `B`. The atoms `ZL`, `ZR` and `ZLR` mark the leftmost, the
//! rightmost, or the single entry that is both.

pub mod builtins;
pub mod dsl;
pub mod error;
pub mod expr;
pub mod juxt;
pub mod ops;
pub mod serial;
pub mod series;
pub mod spec;

pub use builtins::Builtin;
pub use dsl::{parse_spec, render_spec};
pub use error::{Error, ParseError, Result};
pub use expr::{Atom, Expr, Marker, SZ};
pub use juxt::{
    build_grid, build_grid_with, juxtapose, juxtapose_right_inc, Cell, Direction, GridPattern,
    JuxtaRequest, Side, TrackMode,
};
pub use ops::{
    apply_atom, apply_expr, complement, expand, reverse, DecoratedSymbol, Omega, OperatorTag,
};
pub use serial::{from_json, to_json};
pub use series::{
    compare_series, count_series, count_series_with, productivity_check, AtomWeights, Comparison,
    Diagnostic, Series,
};
pub use spec::{Classification, Equation, Specification, TrackingKind};
