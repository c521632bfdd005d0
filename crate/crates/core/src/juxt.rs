//! Juxtaposition of a class with `Av(21)` or `Av(12)` on either side, and k×1
//! grid classes built by repeating it.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::expr::{Atom, Expr, Marker, SZ};
use crate::ops::{complement, reverse, Expander, Omega};
use crate::spec::{Equation, Specification};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// The monotone class being attached: `Inc` is `Av(21)`, `Dec` is `Av(12)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Inc,
    Dec,
}

/// Which extreme entries the output keeps track of.
///
/// `RightOnly` keeps only the marker on the side that was juxtaposed, `Both`
/// keeps leftmost and rightmost, and `None` keeps neither on that side and
/// yields a smaller system that cannot be extended further on that side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrackMode {
    RightOnly,
    Both,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JuxtaRequest {
    pub side: Side,
    pub direction: Direction,
    pub track: TrackMode,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Inc => "inc",
            Direction::Dec => "dec",
        })
    }
}

fn demote_left(spec: &Specification) -> Specification {
    spec.map_rhs(|e| {
        e.map_atoms(|a| match a {
            Atom::ZL => Atom::Z,
            Atom::ZLR => Atom::ZR,
            other => other,
        })
    })
    .expect("forgetting the leftmost marker preserves validity")
}

fn require(spec: &Specification, side: Side, marker: Marker) -> Result<()> {
    if spec.root_tracking().has(marker) {
        Ok(())
    } else {
        Err(Error::MissingTracking {
            root: spec.root().to_string(),
            side: match side {
                Side::Left => "left",
                Side::Right => "right",
            },
            marker,
        })
    }
}

fn right_inc(spec: &Specification, track: TrackMode, name: &str) -> Result<Specification> {
    let demoted;
    let spec = if track == TrackMode::RightOnly && spec.tracking_map().values().any(|t| t.has_l) {
        demoted = demote_left(spec);
        &demoted
    } else {
        spec
    };
    let root = spec.root().to_string();
    let mut ex = Expander::new(spec, [name.to_string()]);
    let sz = || Expr::class(SZ);
    let a = Expr::Atom;
    let mut terms = vec![Expr::EMPTY];
    match track {
        TrackMode::RightOnly | TrackMode::Both => {
            if track == TrackMode::Both {
                terms.push(a(Atom::ZLR));
                terms.push(Expr::product([a(Atom::ZL), sz(), a(Atom::ZR)]));
            } else {
                terms.push(Expr::product([sz(), a(Atom::ZR)]));
            }
            terms.push(Expr::class(ex.name(&root, Omega::I)?));
            terms.push(Expr::class(ex.name(&root, Omega::II)?));
            let io = Expr::class(ex.name(&root, Omega::IO)?);
            terms.push(Expr::product([io, sz(), a(Atom::ZR)]));
        }
        TrackMode::None => {
            let first = if spec.root_tracking().has_l {
                Atom::ZL
            } else {
                Atom::Z
            };
            terms.push(Expr::product([a(first), sz()]));
            let io = Expr::class(ex.name(&root, Omega::IO)?);
            terms.push(Expr::product([io, sz()]));
        }
    }
    let mut eqs = vec![Equation::new(name, Expr::sum(terms))];
    eqs.extend(ex.finish()?);
    Specification::new(eqs)
}

/// `C|Av(21)` from a specification of `C` tracking its rightmost entry.
pub fn juxtapose_right_inc(spec: &Specification, track: TrackMode) -> Result<Specification> {
    juxtapose(
        spec,
        JuxtaRequest {
            side: Side::Right,
            direction: Direction::Inc,
            track,
        },
    )
}

/// Name given to the root of a juxtaposition.
pub fn juxtaposed_name(root: &str, side: Side, direction: Direction) -> String {
    match side {
        Side::Right => format!("{root}_{direction}"),
        Side::Left => format!("{direction}_{root}"),
    }
}

/// Attaches a monotone cell to one side of the root class:
/// `C|Av(12) = Θ(Θ(C)|Av(21))`, `Av(12)|C = Φ(Φ(C)|Av(21))` and
/// `Av(21)|C = ΘΦ(ΦΘ(C)|Av(21))`.
pub fn juxtapose(spec: &Specification, req: JuxtaRequest) -> Result<Specification> {
    let (near, far) = match req.side {
        Side::Right => (Marker::Right, Marker::Left),
        Side::Left => (Marker::Left, Marker::Right),
    };
    require(spec, req.side, near)?;
    if req.track == TrackMode::Both {
        require(spec, req.side, far)?;
    }
    let name = juxtaposed_name(spec.root(), req.side, req.direction);
    let flip_values = match req.side {
        Side::Right => req.direction == Direction::Dec,
        Side::Left => req.direction == Direction::Inc,
    };
    let mut s = spec.clone();
    if req.side == Side::Left {
        s = reverse(&s);
    }
    if flip_values {
        s = complement(&s);
    }
    let mut out = right_inc(&s, req.track, &name)?;
    if flip_values {
        out = complement(&out);
    }
    if req.side == Side::Left {
        out = reverse(&out);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    Inc,
    Dec,
    Core,
}

/// A k×1 grid: monotone cells around a single core cell, left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPattern {
    cells: Vec<Cell>,
}

impl GridPattern {
    pub fn new(cells: Vec<Cell>) -> Result<Self> {
        let cores = cells.iter().filter(|c| **c == Cell::Core).count();
        if cores != 1 {
            let text = cells
                .iter()
                .map(|c| match c {
                    Cell::Inc => "inc",
                    Cell::Dec => "dec",
                    Cell::Core => "core",
                })
                .collect::<Vec<_>>()
                .join("|");
            return Err(Error::GridPattern {
                pattern: text,
                reason: format!("expected exactly one `core` cell, found {cores}"),
            });
        }
        Ok(GridPattern { cells })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    fn core_index(&self) -> usize {
        self.cells.iter().position(|c| *c == Cell::Core).unwrap()
    }

    /// Juxtaposition steps in application order: right cells left to right,
    /// then left cells right to left.
    pub fn steps(&self) -> Vec<(Side, Direction)> {
        let k = self.core_index();
        let dir = |c: &Cell| match c {
            Cell::Inc => Direction::Inc,
            Cell::Dec => Direction::Dec,
            Cell::Core => unreachable!(),
        };
        let right = self.cells[k + 1..].iter().map(|c| (Side::Right, dir(c)));
        let left = self.cells[..k].iter().rev().map(|c| (Side::Left, dir(c)));
        right.chain(left).collect()
    }
}

impl FromStr for GridPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cells = Vec::new();
        for part in s.split('|') {
            cells.push(match part.trim() {
                "inc" => Cell::Inc,
                "dec" => Cell::Dec,
                "core" => Cell::Core,
                other => {
                    return Err(Error::GridPattern {
                        pattern: s.to_string(),
                        reason: format!("unknown cell `{other}`"),
                    })
                }
            });
        }
        GridPattern::new(cells).map_err(|e| match e {
            Error::GridPattern { reason, .. } => Error::GridPattern {
                pattern: s.to_string(),
                reason,
            },
            other => other,
        })
    }
}

/// The grid class with `core` in its core cell; the last step drops tracking.
pub fn build_grid(core: &Specification, pattern: &GridPattern) -> Result<Specification> {
    build_grid_with(core, pattern, TrackMode::None)
}

/// As [`build_grid`], with an explicit tracking mode for the last step.
pub fn build_grid_with(
    core: &Specification,
    pattern: &GridPattern,
    last: TrackMode,
) -> Result<Specification> {
    let steps = pattern.steps();
    let mut spec = core.clone();
    for (i, &(side, direction)) in steps.iter().enumerate() {
        let track = if i + 1 == steps.len() {
            last
        } else {
            TrackMode::Both
        };
        spec = juxtapose(
            &spec,
            JuxtaRequest {
                side,
                direction,
                track,
            },
        )?;
    }
    Ok(spec)
}
