//! Systems of equations with a distinguished root, plus tracking inference and
//! classification.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{Atom, Expr, Marker, SZ};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: String,
    pub rhs: Expr,
}

impl Equation {
    pub fn new(lhs: impl Into<String>, rhs: Expr) -> Self {
        Equation {
            lhs: lhs.into(),
            rhs,
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Whether every nonempty object of a class carries exactly one rightmost
/// (`has_r`) and/or leftmost (`has_l`) marker atom.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct TrackingKind {
    pub has_r: bool,
    pub has_l: bool,
}

impl TrackingKind {
    pub fn has(self, marker: Marker) -> bool {
        match marker {
            Marker::Right => self.has_r,
            Marker::Left => self.has_l,
        }
    }
}

/// Constructor classes a specification falls into. Both flags may hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub regular: bool,
    pub context_free: bool,
}

impl Classification {
    pub fn is_general(self) -> bool {
        !self.regular && !self.context_free
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.regular, self.context_free) {
            (true, true) => f.write_str("regular, context-free"),
            (true, false) => f.write_str("regular"),
            (false, true) => f.write_str("context-free"),
            (false, false) => f.write_str("general"),
        }
    }
}

/// A validated, canonical specification. The first equation defines the root.
#[derive(Clone, Debug)]
pub struct Specification {
    equations: Vec<Equation>,
    index: HashMap<String, usize>,
    tracking: BTreeMap<String, TrackingKind>,
}

impl PartialEq for Specification {
    fn eq(&self, other: &Self) -> bool {
        self.equations == other.equations
    }
}

impl Eq for Specification {}

pub(crate) fn sz_rhs() -> Expr {
    Expr::Sum(vec![
        Expr::EMPTY,
        Expr::Product(vec![Expr::class(SZ), Expr::atom(Atom::Z)]),
    ])
}

impl Specification {
    /// Canonicalises, validates and infers tracking. Empty classes other than
    /// the root are pruned; `SZ` is appended when referenced but undefined.
    pub fn new(equations: Vec<Equation>) -> Result<Self> {
        if equations.is_empty() {
            return Err(Error::EmptySpec);
        }
        let mut eqs: Vec<Equation> = equations
            .into_iter()
            .map(|e| Equation::new(e.lhs, e.rhs.canonicalize()))
            .collect();

        let mut seen = HashSet::new();
        for eq in &eqs {
            if !seen.insert(eq.lhs.as_str()) {
                return Err(Error::DuplicateLhs(eq.lhs.clone()));
            }
            if eq.lhs == SZ && eq.rhs != sz_rhs() {
                return Err(Error::ReservedSymbol(SZ.into()));
            }
        }

        prune_empty_classes(&mut eqs)?;

        let defined: HashSet<&str> = eqs.iter().map(|e| e.lhs.as_str()).collect();
        let mut needs_sz = false;
        for eq in &eqs {
            for name in eq.rhs.refs() {
                if name == SZ {
                    needs_sz |= !defined.contains(SZ);
                } else if !defined.contains(name) {
                    return Err(Error::UndefinedSymbol {
                        name: name.into(),
                        user: eq.lhs.clone(),
                    });
                }
            }
        }
        if needs_sz {
            eqs.push(Equation::new(SZ, sz_rhs()));
        }

        let index = eqs
            .iter()
            .enumerate()
            .map(|(i, e)| (e.lhs.clone(), i))
            .collect();
        let tracking = infer_equations(&eqs)?;
        Ok(Specification {
            equations: eqs,
            index,
            tracking,
        })
    }

    pub fn root(&self) -> &str {
        &self.equations[0].lhs
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn rhs(&self, symbol: &str) -> Option<&Expr> {
        self.index.get(symbol).map(|&i| &self.equations[i].rhs)
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.index.contains_key(symbol)
    }

    pub fn tracking(&self, symbol: &str) -> Option<TrackingKind> {
        self.tracking.get(symbol).copied()
    }

    pub fn tracking_map(&self) -> &BTreeMap<String, TrackingKind> {
        &self.tracking
    }

    pub fn root_tracking(&self) -> TrackingKind {
        self.tracking[self.root()]
    }

    /// True if any right-hand side contains a `Seq` node.
    pub fn uses_seq(&self) -> bool {
        self.equations.iter().any(|e| e.rhs.contains_seq())
    }

    /// The same system with `symbol` moved to the front as the new root.
    pub fn with_root(&self, symbol: &str) -> Result<Self> {
        let i = *self
            .index
            .get(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.into()))?;
        let mut eqs = self.equations.clone();
        let root = eqs.remove(i);
        eqs.insert(0, root);
        Specification::new(eqs)
    }

    /// Renames one symbol everywhere.
    pub fn rename(&self, from: &str, to: &str) -> Result<Self> {
        if !self.contains(from) {
            return Err(Error::UnknownSymbol(from.into()));
        }
        if from == to {
            return Ok(self.clone());
        }
        if self.contains(to) {
            return Err(Error::DuplicateLhs(to.into()));
        }
        let rename = |n: &str| {
            if n == from {
                to.to_string()
            } else {
                n.to_string()
            }
        };
        let eqs = self
            .equations
            .iter()
            .map(|e| Equation::new(rename(&e.lhs), e.rhs.rename_refs(&rename)))
            .collect();
        Specification::new(eqs)
    }

    /// Rebuilds every equation except the reserved `SZ` one with `f`.
    pub fn map_rhs(&self, mut f: impl FnMut(&Expr) -> Expr) -> Result<Self> {
        let eqs = self
            .equations
            .iter()
            .map(|e| {
                if e.lhs == SZ {
                    e.clone()
                } else {
                    Equation::new(e.lhs.clone(), f(&e.rhs))
                }
            })
            .collect();
        Specification::new(eqs)
    }

    /// Replaces every `SZ` reference by `Seq(Z)` and drops the `SZ` equation.
    /// A specification rooted at `SZ` itself is returned unchanged.
    pub fn inline_seq(&self) -> Self {
        if !self.contains(SZ) || self.root() == SZ {
            return self.clone();
        }
        let seq_z = Expr::seq(Expr::atom(Atom::Z));
        let eqs = self
            .equations
            .iter()
            .filter(|e| e.lhs != SZ)
            .map(|e| {
                let rhs = e.rhs.map_leaves(&mut Expr::Atom, &mut |n| {
                    if n == SZ {
                        seq_z.clone()
                    } else {
                        Expr::class(n)
                    }
                });
                Equation::new(e.lhs.clone(), rhs)
            })
            .collect();
        Specification::new(eqs).expect("inlining SZ preserves validity")
    }

    /// Regular: after inlining `SZ`, no class depends on itself, so every
    /// right-hand side unfolds into atoms under `+`, `×` and `Seq`.
    /// Context-free: no `Seq` node anywhere.
    pub fn classify(&self) -> Classification {
        let inlined = self.inline_seq();
        Classification {
            regular: !inlined.has_recursion(),
            context_free: !self.uses_seq(),
        }
    }

    fn has_recursion(&self) -> bool {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        fn visit(spec: &Specification, i: usize, marks: &mut [Mark]) -> bool {
            match marks[i] {
                Mark::Active => return true,
                Mark::Done => return false,
                Mark::New => {}
            }
            marks[i] = Mark::Active;
            for r in spec.equations[i].rhs.refs() {
                if visit(spec, spec.index[r], marks) {
                    return true;
                }
            }
            marks[i] = Mark::Done;
            false
        }
        let mut marks = vec![Mark::New; self.equations.len()];
        (0..self.equations.len()).any(|i| visit(self, i, &mut marks))
    }

    /// Symbols reachable from the root, in equation order.
    pub fn reachable(&self) -> Vec<&str> {
        let mut seen = vec![false; self.equations.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for r in self.equations[i].rhs.refs() {
                let j = self.index[r];
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        self.equations
            .iter()
            .zip(seen)
            .filter(|(_, s)| *s)
            .map(|(e, _)| e.lhs.as_str())
            .collect()
    }

    /// Drops equations not reachable from the root.
    pub fn prune_unreachable(&self) -> Self {
        let keep: HashSet<&str> = self.reachable().into_iter().collect();
        let eqs = self
            .equations
            .iter()
            .filter(|e| keep.contains(e.lhs.as_str()))
            .cloned()
            .collect();
        Specification::new(eqs).expect("pruning unreachable equations preserves validity")
    }
}

/// Infers, for every symbol, whether it tracks the rightmost and leftmost entries.
pub fn infer_tracking(spec: &Specification) -> Result<BTreeMap<String, TrackingKind>> {
    infer_equations(spec.equations())
}

fn prune_empty_classes(eqs: &mut Vec<Equation>) -> Result<()> {
    loop {
        let empty: HashSet<String> = eqs
            .iter()
            .filter(|e| e.rhs == Expr::Zero)
            .map(|e| e.lhs.clone())
            .collect();
        if empty.is_empty() {
            return Ok(());
        }
        if empty.contains(&eqs[0].lhs) {
            return Err(Error::EmptyRoot(eqs[0].lhs.clone()));
        }
        eqs.retain(|e| !empty.contains(&e.lhs));
        for eq in eqs.iter_mut() {
            eq.rhs = eq.rhs.map_leaves(&mut Expr::Atom, &mut |n| {
                if empty.contains(n) {
                    Expr::Zero
                } else {
                    Expr::class(n)
                }
            });
        }
    }
}

fn infer_equations(eqs: &[Equation]) -> Result<BTreeMap<String, TrackingKind>> {
    let right = infer_marker(eqs, Marker::Right)?;
    let left = infer_marker(eqs, Marker::Left)?;
    Ok(eqs
        .iter()
        .map(|e| {
            let kind = TrackingKind {
                has_r: right[e.lhs.as_str()],
                has_l: left[e.lhs.as_str()],
            };
            (e.lhs.clone(), kind)
        })
        .collect())
}

enum CountError {
    InSeq,
    Disagree,
    NullableFactor(String),
}

/// Sets of marker counts as bit masks: bit `c` means some object carries `c`
/// markers, with 2 standing for "two or more".
const NONE: u8 = 0b001;
const ONE: u8 = 0b010;

fn add_counts(a: u8, b: u8) -> u8 {
    let mut out = 0;
    for i in 0..3 {
        for j in 0..3 {
            if a & (1 << i) != 0 && b & (1 << j) != 0 {
                out |= 1 << (i + j).min(2);
            }
        }
    }
    out
}

struct Counter<'a> {
    marker: Marker,
    state: &'a HashMap<&'a str, u8>,
    nullable: &'a HashSet<&'a str>,
    strict: bool,
}

impl Counter<'_> {
    /// Marker counts over the nonempty objects of a top-level term; the
    /// empty object of a class is exempt when the class is a whole term.
    fn term(&self, t: &Expr) -> std::result::Result<u8, CountError> {
        match t {
            Expr::Ref(n) => {
                let m = self.state[n.as_str()];
                Ok(if m == 0 && self.nullable.contains(n.as_str()) {
                    NONE
                } else {
                    m
                })
            }
            other => self.count(other),
        }
    }

    fn count(&self, e: &Expr) -> std::result::Result<u8, CountError> {
        Ok(match e {
            Expr::Zero => 0,
            Expr::Atom(a) => {
                if a.marks(self.marker) {
                    ONE
                } else {
                    NONE
                }
            }
            Expr::Ref(n) => {
                let m = self.state[n.as_str()];
                if !self.nullable.contains(n.as_str()) {
                    m
                } else if self.strict && m & ONE != 0 {
                    // Inside a product the empty object would leave the term unmarked.
                    return Err(CountError::NullableFactor(n.clone()));
                } else {
                    m | NONE
                }
            }
            Expr::Product(fs) => {
                let mut acc = NONE;
                for f in fs {
                    acc = add_counts(acc, self.count(f)?);
                }
                acc
            }
            Expr::Sum(ts) => {
                let mut acc = 0;
                for t in ts {
                    let m = self.count(t)?;
                    if self.strict && acc != 0 && m != 0 && m != acc {
                        return Err(CountError::Disagree);
                    }
                    acc |= m;
                }
                acc
            }
            Expr::Seq(a) => {
                if self.count(a)? & !NONE != 0 {
                    return Err(CountError::InSeq);
                }
                NONE
            }
        })
    }
}

fn nullable_symbols(eqs: &[Equation]) -> HashSet<&str> {
    fn nullable(e: &Expr, set: &HashSet<&str>) -> bool {
        match e {
            Expr::Zero => false,
            Expr::Atom(a) => *a == Atom::Empty,
            Expr::Ref(n) => set.contains(n.as_str()),
            Expr::Product(fs) => fs.iter().all(|f| nullable(f, set)),
            Expr::Sum(ts) => ts.iter().any(|t| nullable(t, set)),
            Expr::Seq(_) => true,
        }
    }
    let mut set = HashSet::new();
    loop {
        let before = set.len();
        for eq in eqs {
            if nullable(&eq.rhs, &set) {
                set.insert(eq.lhs.as_str());
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

fn infer_marker(eqs: &[Equation], marker: Marker) -> Result<HashMap<String, bool>> {
    let fail = |symbol: &str, err: CountError| match err {
        CountError::InSeq => Error::RestrictedInSeq {
            symbol: symbol.into(),
            marker,
        },
        CountError::Disagree => Error::Tracking {
            symbol: symbol.into(),
            marker,
            detail: "alternatives of a parenthesised sum disagree".into(),
        },
        CountError::NullableFactor(bad) => Error::Tracking {
            symbol: symbol.into(),
            marker,
            detail: format!(
                "`{bad}` admits the empty object yet is tracked, so it cannot be a factor"
            ),
        },
    };

    // Least fixpoint of the marker counts each class can produce. Classes
    // that never produce an object are untracked.
    let nullable = nullable_symbols(eqs);
    let mut counts: HashMap<&str, u8> = eqs.iter().map(|e| (e.lhs.as_str(), 0)).collect();
    loop {
        let mut changed = false;
        for eq in eqs {
            let mut m = 0;
            {
                let c = Counter {
                    marker,
                    state: &counts,
                    nullable: &nullable,
                    strict: false,
                };
                for term in eq.rhs.terms().iter().filter(|t| !t.is_empty_atom()) {
                    m |= c.term(term).map_err(|e| fail(&eq.lhs, e))?;
                }
            }
            let old = counts[eq.lhs.as_str()];
            if m | old != old {
                counts.insert(&eq.lhs, m | old);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let c = Counter {
        marker,
        state: &counts,
        nullable: &nullable,
        strict: true,
    };
    let mut state: HashMap<&str, bool> = HashMap::new();
    for eq in eqs {
        let terms: Vec<(&Expr, u8)> = eq
            .rhs
            .terms()
            .iter()
            .filter(|t| !t.is_empty_atom())
            .map(|t| c.term(t).map(|m| (t, m)))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| fail(&eq.lhs, e))?;
        let expected = terms
            .iter()
            .map(|(_, m)| *m)
            .find(|&m| m == NONE || m == ONE)
            .unwrap_or(NONE);
        for (term, m) in &terms {
            if *m == 0 || *m == expected {
                continue;
            }
            let detail = if m & 0b100 != 0 {
                format!("term `{term}` can carry more than one marker")
            } else if m & NONE != 0 && m & ONE != 0 {
                format!("term `{term}` carries a marker on some objects only")
            } else if expected == ONE {
                format!("term `{term}` carries no marker while other terms do")
            } else {
                format!("term `{term}` carries a marker while other terms do not")
            };
            return Err(Error::Tracking {
                symbol: eq.lhs.clone(),
                marker,
                detail,
            });
        }
        state.insert(&eq.lhs, expected == ONE);
    }

    Ok(state.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_spec;

    fn kind(spec: &Specification, s: &str) -> (bool, bool) {
        let t = spec.tracking(s).unwrap();
        (t.has_r, t.has_l)
    }

    #[test]
    fn dyck_spec_tracks_right_only_on_cr() {
        let s = parse_spec("CR = C CR Z + C ZR\nC = E + C C Z").unwrap();
        assert_eq!(kind(&s, "CR"), (true, false));
        assert_eq!(kind(&s, "C"), (false, false));
    }

    #[test]
    fn monotone_line_tracks_both() {
        let s = parse_spec("M = ZLR + ZL Seq(Z) ZR").unwrap();
        assert_eq!(kind(&s, "M"), (true, true));
    }

    #[test]
    fn mixed_terms_are_rejected() {
        let err = parse_spec("A = Z + ZR").unwrap_err();
        assert!(
            matches!(
                err,
                Error::Tracking {
                    marker: Marker::Right,
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn two_markers_in_one_term_are_rejected() {
        let err = parse_spec("A = ZR ZR").unwrap_err();
        assert!(matches!(err, Error::Tracking { .. }), "{err}");
    }

    #[test]
    fn empty_term_is_exempt_for_tracked_roots() {
        let s = parse_spec("P = E + CR\nCR = C CR Z + C ZR\nC = E + C C Z").unwrap();
        assert_eq!(kind(&s, "P"), (true, false));
    }

    #[test]
    fn nullable_tracked_class_cannot_be_a_factor() {
        let err = parse_spec("A = P Z\nP = E + ZR").unwrap_err();
        assert!(matches!(err, Error::Tracking { .. }), "{err}");
    }

    #[test]
    fn tracked_class_inside_seq_is_rejected() {
        let err = parse_spec("A = Seq(B)\nB = ZR").unwrap_err();
        assert!(matches!(err, Error::RestrictedInSeq { .. }), "{err}");
    }

    #[test]
    fn unproductive_cycles_default_to_untracked() {
        let s = parse_spec("A = A Z").unwrap();
        assert_eq!(kind(&s, "A"), (false, false));
    }

    #[test]
    fn classification_examples() {
        let mono = parse_spec("M = ZLR + ZL Seq(Z) ZR").unwrap();
        assert!(mono.classify().regular);
        assert!(!mono.classify().context_free);

        let dyck = parse_spec("CR = C CR Z + C ZR\nC = E + C C Z").unwrap();
        assert_eq!(
            dyck.classify(),
            Classification {
                regular: false,
                context_free: true
            }
        );

        let general = parse_spec("A = Seq(B)\nB = Z + B B").unwrap();
        assert!(general.classify().is_general());

        let both = parse_spec("A = Z + Z Z").unwrap();
        assert!(both.classify().regular && both.classify().context_free);
    }

    #[test]
    fn inline_seq_replaces_sz() {
        let s = parse_spec("A = SZ Z").unwrap();
        assert!(s.contains(SZ));
        let t = s.inline_seq();
        assert_eq!(t.equations().len(), 1);
        assert_eq!(t.equations()[0].to_string(), "A = Seq(Z) Z");
    }

    #[test]
    fn inline_seq_without_sz_is_identity() {
        let s = parse_spec("C = E + C C Z").unwrap();
        assert_eq!(s.inline_seq(), s);
    }

    #[test]
    fn sz_reference_is_both_regular_and_context_free() {
        let s = parse_spec("A = SZ Z").unwrap();
        // SZ recurses on itself; inlining removes the cycle.
        assert!(s.classify().regular);
        assert!(s.classify().context_free);
    }

    #[test]
    fn rename_and_reroot() {
        let s = parse_spec("CR = C CR Z + C ZR\nC = E + C C Z").unwrap();
        let r = s.rename("C", "D").unwrap();
        assert_eq!(r.equations()[0].to_string(), "CR = D CR Z + D ZR");
        let c = s.with_root("C").unwrap();
        assert_eq!(c.root(), "C");
    }

    #[test]
    fn zero_classes_are_pruned() {
        let eqs = vec![
            Equation::new("A", Expr::sum([Expr::atom(Atom::Z), Expr::class("B")])),
            Equation::new("B", Expr::Zero),
        ];
        let s = Specification::new(eqs).unwrap();
        assert_eq!(s.equations().len(), 1);
        assert_eq!(s.equations()[0].rhs, Expr::atom(Atom::Z));
    }
}
