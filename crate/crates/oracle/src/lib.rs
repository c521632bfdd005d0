//! Brute-force ground truth for permutation classes: pattern containment,
//! basis avoidance and membership in juxtapositions of cells, checked
//! exhaustively over every permutation of a given length.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

/// Largest permutation length the oracle will enumerate.
pub const MAX_LEN: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("length {n} exceeds the oracle limit of {max}")]
    SizeLimit { n: usize, max: usize },
    #[error("invalid permutation `{0}`")]
    BadPerm(String),
    #[error("invalid cell `{0}`: expected inc, dec or basis:<patterns>")]
    BadCell(String),
    #[error("at least one cell is required")]
    NoCells,
}

/// A permutation in one-line notation with values `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn new(values: Vec<u8>) -> Result<Perm, OracleError> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(OracleError::BadPerm(format!("{values:?}")));
            }
            seen[v] = true;
        }
        Ok(Perm(values))
    }

    pub fn empty() -> Perm {
        Perm(Vec::new())
    }

    pub fn values(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reverse(&self) -> Perm {
        Perm(self.0.iter().rev().copied().collect())
    }

    pub fn complement(&self) -> Perm {
        let n = self.0.len() as u8;
        Perm(self.0.iter().map(|v| n + 1 - v).collect())
    }
}

/// One-line digits (`2413`), or comma-free only for lengths below 10.
impl FromStr for Perm {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Perm, OracleError> {
        let s = s.trim();
        if s == "e" || s == "ε" {
            return Ok(Perm::empty());
        }
        let values: Option<Vec<u8>> = s.chars().map(|c| c.to_digit(10).map(|d| d as u8)).collect();
        match values {
            Some(v) if !v.is_empty() => Perm::new(v).map_err(|_| OracleError::BadPerm(s.into())),
            _ => Err(OracleError::BadPerm(s.into())),
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for v in &self.0 {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Whether some subsequence of `host` is order-isomorphic to `pattern`.
/// Works on any sequences of distinct values.
pub fn contains_seq(pattern: &[u8], host: &[u8]) -> bool {
    fn extend(pattern: &[u8], host: &[u8], chosen: &mut Vec<usize>, from: usize) -> bool {
        let j = chosen.len();
        if j == pattern.len() {
            return true;
        }
        for h in from..host.len() {
            let fits = chosen
                .iter()
                .enumerate()
                .all(|(m, &c)| (pattern[m] < pattern[j]) == (host[c] < host[h]));
            if fits {
                chosen.push(h);
                if extend(pattern, host, chosen, h + 1) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    pattern.len() <= host.len() && extend(pattern, host, &mut Vec::new(), 0)
}

pub fn contains(pattern: &Perm, host: &Perm) -> bool {
    contains_seq(&pattern.0, &host.0)
}

/// One cell of a juxtaposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellSpec {
    /// `Av(21)`.
    Inc,
    /// `Av(12)`.
    Dec,
    /// `Av(B)` for a finite set of patterns `B`.
    Basis(Vec<Perm>),
}

impl CellSpec {
    pub fn basis(patterns: &[&str]) -> Result<CellSpec, OracleError> {
        patterns
            .iter()
            .map(|p| p.parse())
            .collect::<Result<_, _>>()
            .map(CellSpec::Basis)
    }
}

impl FromStr for CellSpec {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<CellSpec, OracleError> {
        let s = s.trim();
        match s {
            "inc" => Ok(CellSpec::Inc),
            "dec" => Ok(CellSpec::Dec),
            _ => {
                let list = s
                    .strip_prefix("basis:")
                    .ok_or_else(|| OracleError::BadCell(s.into()))?;
                let patterns: Vec<&str> = list.split(',').map(str::trim).collect();
                CellSpec::basis(&patterns).map_err(|_| OracleError::BadCell(s.into()))
            }
        }
    }
}

impl fmt::Display for CellSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellSpec::Inc => f.write_str("inc"),
            CellSpec::Dec => f.write_str("dec"),
            CellSpec::Basis(b) => {
                f.write_str("basis:")?;
                for (i, p) in b.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses cells separated by `|`, e.g. `basis:2413,3142 | inc`.
pub fn parse_cells(s: &str) -> Result<Vec<CellSpec>, OracleError> {
    let cells: Vec<CellSpec> = s.split('|').map(str::parse).collect::<Result<_, _>>()?;
    if cells.is_empty() {
        return Err(OracleError::NoCells);
    }
    Ok(cells)
}

/// Whether a block of entries (any distinct values) lies in the cell's class.
pub fn avoids_cell_seq(block: &[u8], cell: &CellSpec) -> bool {
    match cell {
        CellSpec::Inc => block.windows(2).all(|w| w[0] < w[1]),
        CellSpec::Dec => block.windows(2).all(|w| w[0] > w[1]),
        CellSpec::Basis(b) => b.iter().all(|p| !contains_seq(&p.0, block)),
    }
}

pub fn avoids_cell(perm: &Perm, cell: &CellSpec) -> bool {
    avoids_cell_seq(&perm.0, cell)
}

/// Whether `perm` splits into contiguous (possibly empty) blocks, one per
/// cell, each lying in its cell.
pub fn juxt_membership(perm: &Perm, cells: &[CellSpec]) -> bool {
    fn split(rest: &[u8], cells: &[CellSpec]) -> bool {
        match cells {
            [] => rest.is_empty(),
            [last] => avoids_cell_seq(rest, last),
            [first, more @ ..] => (0..=rest.len())
                .any(|i| avoids_cell_seq(&rest[..i], first) && split(&rest[i..], more)),
        }
    }
    split(&perm.0, cells)
}

fn check_len(n: usize) -> Result<(), OracleError> {
    if n > MAX_LEN {
        Err(OracleError::SizeLimit { n, max: MAX_LEN })
    } else {
        Ok(())
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// The permutation of rank `r` in lexicographic order.
fn unrank(n: usize, mut r: u64) -> Vec<u8> {
    let mut pool: Vec<u8> = (1..=n as u8).collect();
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = factorial(i);
        let k = (r / f) as usize;
        r %= f;
        out.push(pool.remove(k));
    }
    out
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

const CHUNK: u64 = 1 << 12;

/// Counts permutations of length `n` satisfying `pred`, in parallel.
pub fn count_perms(n: usize, pred: impl Fn(&Perm) -> bool + Sync) -> Result<u64, OracleError> {
    check_len(n)?;
    let total = factorial(n);
    let chunks = total.div_ceil(CHUNK);
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut p = Perm(unrank(n, start));
            let mut count = 0u64;
            for r in start..end {
                if pred(&p) {
                    count += 1;
                }
                if r + 1 < end {
                    next_permutation(&mut p.0);
                }
            }
            count
        })
        .sum())
}

/// Whether every permutation of length `n` satisfies `pred`.
pub fn all_perms(n: usize, pred: impl Fn(&Perm) -> bool + Sync) -> Result<bool, OracleError> {
    let total = factorial(n);
    Ok(count_perms(n, pred)? == total)
}

/// Number of permutations of length `n` in the juxtaposition of `cells`.
pub fn count_class(cells: &[CellSpec], n: usize) -> Result<u64, OracleError> {
    if cells.is_empty() {
        return Err(OracleError::NoCells);
    }
    count_perms(n, |p| juxt_membership(p, cells))
}

/// `count_class` for every length `0..=max_n`.
pub fn count_sequence(cells: &[CellSpec], max_n: usize) -> Result<Vec<u64>, OracleError> {
    (0..=max_n).map(|n| count_class(cells, n)).collect()
}

/// Start of the longest increasing suffix: the cut that puts as many entries
/// as possible in a right-hand `Av(21)` cell.
pub fn greedy_cut(perm: &Perm) -> usize {
    let v = &perm.0;
    (0..=v.len())
        .find(|&i| avoids_cell_seq(&v[i..], &CellSpec::Inc))
        .unwrap_or(v.len())
}

/// Whether every member of `core|Av(21)` of length `n` is already gridded by
/// its greedy cut, so the decomposition with the largest monotone part is
/// the one the master equation counts.
pub fn greedy_unique(core: &CellSpec, n: usize) -> Result<bool, OracleError> {
    let cells = [core.clone(), CellSpec::Inc];
    all_perms(n, |p| {
        !juxt_membership(p, &cells) || avoids_cell_seq(&p.0[..greedy_cut(p)], core)
    })
}
