//! Exact counting sequences by fixed-point iteration on truncated power series.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::{Atom, Expr};
use crate::spec::Specification;

/// Coefficients `c[0..=N]` of a counting sequence, lowest order first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Series(Vec<BigUint>);

impl Series {
    pub fn new(coeffs: Vec<BigUint>) -> Self {
        Series(coeffs)
    }

    pub fn from_u64s(xs: &[u64]) -> Self {
        Series(xs.iter().map(|&x| BigUint::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The first `n` coefficients.
    pub fn prefix(&self, n: usize) -> Series {
        Series(self.0[..n.min(self.0.len())].to_vec())
    }
}

impl std::ops::Index<usize> for Series {
    type Output = BigUint;

    fn index(&self, i: usize) -> &BigUint {
        &self.0[i]
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Per-atom weights; `E` always counts 1 at size 0. Setting a marker atom to
/// `w` multiplies the count of each object by `w` per marker it carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomWeights {
    pub z: BigUint,
    pub zl: BigUint,
    pub zr: BigUint,
    pub zlr: BigUint,
}

impl Default for AtomWeights {
    fn default() -> Self {
        AtomWeights {
            z: BigUint::one(),
            zl: BigUint::one(),
            zr: BigUint::one(),
            zlr: BigUint::one(),
        }
    }
}

impl AtomWeights {
    fn of(&self, a: Atom) -> &BigUint {
        match a {
            Atom::Empty => unreachable!("E is not weighted"),
            Atom::Z => &self.z,
            Atom::ZL => &self.zl,
            Atom::ZR => &self.zr,
            Atom::ZLR => &self.zlr,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Leaf {
    Atom(Atom),
    Var(usize),
}

#[derive(Debug)]
enum Node {
    Sum(Vec<Leaf>),
    Prod(Leaf, Leaf),
    Seq(Leaf),
}

/// The system in binary form: every product has two factors and every
/// sequence its own node. Nodes `0..symbols.len()` are the equations.
struct System {
    symbols: Vec<String>,
    nodes: Vec<Node>,
    owner: Vec<usize>,
}

impl System {
    fn build(spec: &Specification) -> System {
        let symbols: Vec<String> = spec.equations().iter().map(|e| e.lhs.clone()).collect();
        let index: HashMap<&str, usize> = symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut sys = System {
            nodes: Vec::new(),
            owner: Vec::new(),
            symbols: symbols.clone(),
        };
        let n = symbols.len();
        for i in 0..n {
            sys.nodes.push(Node::Sum(Vec::new()));
            sys.owner.push(i);
        }
        for (i, eq) in spec.equations().iter().enumerate() {
            let leaves = eq
                .rhs
                .terms()
                .iter()
                .map(|t| sys.leaf(t, i, &index))
                .collect();
            sys.nodes[i] = Node::Sum(leaves);
        }
        sys
    }

    fn push(&mut self, node: Node, owner: usize) -> Leaf {
        self.nodes.push(node);
        self.owner.push(owner);
        Leaf::Var(self.nodes.len() - 1)
    }

    fn leaf(&mut self, e: &Expr, owner: usize, index: &HashMap<&str, usize>) -> Leaf {
        match e {
            Expr::Zero => {
                let node = Node::Sum(Vec::new());
                self.push(node, owner)
            }
            Expr::Atom(a) => Leaf::Atom(*a),
            Expr::Ref(n) => Leaf::Var(index[n.as_str()]),
            Expr::Sum(ts) => {
                let leaves = ts.iter().map(|t| self.leaf(t, owner, index)).collect();
                self.push(Node::Sum(leaves), owner)
            }
            Expr::Product(fs) => {
                let mut acc = self.leaf(&fs[fs.len() - 1], owner, index);
                for f in fs[..fs.len() - 1].iter().rev() {
                    let head = self.leaf(f, owner, index);
                    acc = self.push(Node::Prod(head, acc), owner);
                }
                acc
            }
            Expr::Seq(a) => {
                let arg = self.leaf(a, owner, index);
                self.push(Node::Seq(arg), owner)
            }
        }
    }
}

struct Solver<'a> {
    sys: System,
    weights: &'a AtomWeights,
    values: Vec<Vec<BigUint>>,
}

impl Solver<'_> {
    fn coeff(&self, leaf: Leaf, k: usize) -> BigUint {
        match leaf {
            Leaf::Atom(Atom::Empty) => {
                if k == 0 {
                    BigUint::one()
                } else {
                    BigUint::zero()
                }
            }
            Leaf::Atom(a) => {
                if k == 1 {
                    self.weights.of(a).clone()
                } else {
                    BigUint::zero()
                }
            }
            Leaf::Var(i) => self.values[i][k].clone(),
        }
    }

    fn eval(&self, i: usize, k: usize) -> BigUint {
        match &self.sys.nodes[i] {
            Node::Sum(ls) => ls.iter().map(|&l| self.coeff(l, k)).sum(),
            Node::Prod(a, b) => (0..=k)
                .map(|j| self.coeff(*a, j) * self.coeff(*b, k - j))
                .sum(),
            Node::Seq(a) => {
                if k == 0 {
                    BigUint::one()
                } else {
                    (1..=k)
                        .map(|j| self.coeff(*a, j) * &self.values[i][k - j])
                        .sum()
                }
            }
        }
    }

    /// Fixes coefficient `k` of every node by repeated sweeps.
    fn round(&mut self, k: usize) -> Result<()> {
        let bound = self.sys.nodes.len() + 2;
        for _ in 0..bound {
            let mut changed = None;
            for i in 0..self.sys.nodes.len() {
                let v = self.eval(i, k);
                if v != self.values[i][k] {
                    self.values[i][k] = v;
                    changed.get_or_insert(i);
                }
            }
            if changed.is_none() {
                return Ok(());
            }
        }
        let culprit = (0..self.sys.nodes.len())
            .find(|&i| self.eval(i, k) != self.values[i][k])
            .unwrap_or(0);
        Err(Error::NonProductive {
            symbol: self.sys.symbols[self.sys.owner[culprit]].clone(),
            order: k,
        })
    }

    fn check_seq_arguments(&self) -> Result<()> {
        for (i, node) in self.sys.nodes.iter().enumerate() {
            if let Node::Seq(a) = node {
                if !self.coeff(*a, 0).is_zero() {
                    return Err(Error::SeqConstantTerm(
                        self.sys.symbols[self.sys.owner[i]].clone(),
                    ));
                }
            }
        }
        Ok(())
    }
}

fn solve(
    spec: &Specification,
    order: usize,
    weights: &AtomWeights,
    mut on_round: impl FnMut(usize, &[Vec<BigUint>]),
) -> Result<Vec<Vec<BigUint>>> {
    let sys = System::build(spec);
    let values = vec![vec![BigUint::zero(); order + 1]; sys.nodes.len()];
    let mut solver = Solver {
        sys,
        weights,
        values,
    };
    for k in 0..=order {
        solver.round(k)?;
        if k == 0 {
            solver.check_seq_arguments()?;
        }
        on_round(k, &solver.values);
    }
    let n = solver.sys.symbols.len();
    solver.values.truncate(n);
    Ok(solver.values)
}

/// Counting sequence of the root up to size `order` inclusive.
pub fn count_series(spec: &Specification, order: usize) -> Result<Series> {
    count_series_with(spec, order, &AtomWeights::default())
}

/// As [`count_series`], weighting each atom kind.
pub fn count_series_with(
    spec: &Specification,
    order: usize,
    weights: &AtomWeights,
) -> Result<Series> {
    let mut values = solve(spec, order, weights, |_, _| {})?;
    Ok(Series(values.swap_remove(0)))
}

/// Counting sequences of every symbol, keyed by name.
pub fn count_all(spec: &Specification, order: usize) -> Result<Vec<(String, Series)>> {
    let values = solve(spec, order, &AtomWeights::default(), |_, _| {})?;
    Ok(spec
        .equations()
        .iter()
        .map(|e| e.lhs.clone())
        .zip(values.into_iter().map(Series))
        .collect())
}

/// The root's coefficients after each round of the iteration.
pub fn count_rounds(spec: &Specification, order: usize) -> Result<Vec<Series>> {
    let mut trace = Vec::new();
    solve(spec, order, &AtomWeights::default(), |_, v| {
        trace.push(Series(v[0].clone()))
    })?;
    Ok(trace)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal {
        overlap: usize,
    },
    Mismatch {
        index: usize,
        left: BigUint,
        right: BigUint,
    },
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal { .. })
    }

    /// Equal only because one side has no coefficients.
    pub fn is_zero_length(&self) -> bool {
        matches!(self, Comparison::Equal { overlap: 0 })
    }
}

/// Compares two sequences on their common prefix.
pub fn compare_series(a: &Series, b: &Series) -> Comparison {
    for (i, (x, y)) in a.0.iter().zip(&b.0).enumerate() {
        if x != y {
            return Comparison::Mismatch {
                index: i,
                left: x.clone(),
                right: y.clone(),
            };
        }
    }
    Comparison::Equal {
        overlap: a.len().min(b.len()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    /// The class is empty: no finite derivation exists.
    Unproductive(String),
    /// A `Seq` argument in this equation admits the empty object.
    SeqConstantTerm(String),
    /// These classes depend on each other through nullable factors, so some
    /// size has infinitely many derivations.
    EpsilonCycle(Vec<String>),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Unproductive(s) => write!(f, "`{s}` is unproductive"),
            Diagnostic::SeqConstantTerm(s) => {
                write!(f, "Seq argument in `{s}` has a nonzero constant term")
            }
            Diagnostic::EpsilonCycle(c) => write!(f, "nullable cycle through {}", c.join(", ")),
        }
    }
}

fn valuation(e: &Expr, val: &HashMap<&str, Option<usize>>) -> Option<usize> {
    match e {
        Expr::Zero => None,
        Expr::Atom(a) => Some(a.size()),
        Expr::Ref(n) => val[n.as_str()],
        Expr::Sum(ts) => ts.iter().filter_map(|t| valuation(t, val)).min(),
        Expr::Product(fs) => fs.iter().map(|f| valuation(f, val)).sum(),
        Expr::Seq(_) => Some(0),
    }
}

fn nullable_refs<'a>(e: &'a Expr, val: &HashMap<&str, Option<usize>>, out: &mut Vec<&'a str>) {
    match e {
        Expr::Ref(n) => out.push(n),
        Expr::Sum(ts) => ts.iter().for_each(|t| nullable_refs(t, val, out)),
        Expr::Product(fs) => {
            for (i, f) in fs.iter().enumerate() {
                let rest_nullable = fs
                    .iter()
                    .enumerate()
                    .all(|(j, g)| j == i || valuation(g, val) == Some(0));
                if rest_nullable {
                    nullable_refs(f, val, out);
                }
            }
        }
        Expr::Seq(a) => nullable_refs(a, val, out),
        Expr::Zero | Expr::Atom(_) => {}
    }
}

fn seq_args<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
    match e {
        Expr::Seq(a) => {
            out.push(a);
            seq_args(a, out);
        }
        Expr::Sum(xs) | Expr::Product(xs) => xs.iter().for_each(|x| seq_args(x, out)),
        _ => {}
    }
}

/// Checks that every class is nonempty and that the iteration is well founded.
pub fn productivity_check(spec: &Specification) -> std::result::Result<(), Vec<Diagnostic>> {
    let mut val: HashMap<&str, Option<usize>> = spec
        .equations()
        .iter()
        .map(|e| (e.lhs.as_str(), None))
        .collect();
    loop {
        let mut changed = false;
        for eq in spec.equations() {
            let v = valuation(&eq.rhs, &val);
            if v != val[eq.lhs.as_str()] {
                val.insert(&eq.lhs, v);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut problems = Vec::new();
    for eq in spec.equations() {
        if val[eq.lhs.as_str()].is_none() {
            problems.push(Diagnostic::Unproductive(eq.lhs.clone()));
        }
    }
    for eq in spec.equations() {
        let mut args = Vec::new();
        seq_args(&eq.rhs, &mut args);
        if args.iter().any(|a| valuation(a, &val) == Some(0)) {
            problems.push(Diagnostic::SeqConstantTerm(eq.lhs.clone()));
        }
    }

    let names: Vec<&str> = spec.equations().iter().map(|e| e.lhs.as_str()).collect();
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let edges: Vec<Vec<usize>> = spec
        .equations()
        .iter()
        .map(|eq| {
            let mut out = Vec::new();
            for t in eq.rhs.terms() {
                nullable_refs(t, &val, &mut out);
            }
            let mut v: Vec<usize> = out
                .into_iter()
                .filter(|n| val[n].is_some())
                .map(|n| index[n])
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    for c in cycles(&edges) {
        problems.push(Diagnostic::EpsilonCycle(
            c.into_iter().map(|i| names[i].to_string()).collect(),
        ));
    }

    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems)
    }
}

/// Strongly connected components that contain a cycle (Tarjan).
fn cycles(edges: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        edges: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut State, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for &w in &s.edges[v] {
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                _ => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().unwrap();
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            if comp.len() > 1 || s.edges[v].contains(&v) {
                comp.sort_unstable();
                s.out.push(comp);
            }
        }
    }
    let n = edges.len();
    let mut s = State {
        edges,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out
}
