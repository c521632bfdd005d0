//! Insertion operators `o i oo io oi ii` and the symmetry operators
//! complement (`Θ`) and reverse (`Φ`).
//!
//! An insertion operator applied to a class describes the ways of adding the
//! entries of a monotone increasing cell to the right of it. `i` inserts the
//! lowest new entry only, `oo` inserts (possibly empty) increasing runs in
//! every gap, `io` inserts the lowest entry then runs above it, `oi` inserts
//! runs and then a new rightmost entry, `ii` does both, and `o` inserts
//! nothing but forgets the old rightmost marker.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{Atom, Expr, Marker, SZ};
use crate::spec::{Equation, Specification, TrackingKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Omega {
    O,
    I,
    OO,
    IO,
    OI,
    II,
}

impl Omega {
    pub const ALL: [Omega; 6] = [
        Omega::O,
        Omega::I,
        Omega::OO,
        Omega::IO,
        Omega::OI,
        Omega::II,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Omega::O => "o",
            Omega::I => "i",
            Omega::OO => "oo",
            Omega::IO => "io",
            Omega::OI => "oi",
            Omega::II => "ii",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Omega> {
        Omega::ALL.into_iter().find(|o| o.tag() == tag)
    }

    /// Operators that insert the lowest entry of the new cell; their product
    /// rules depend on which factor carries the rightmost marker.
    pub fn is_r_sensitive(self) -> bool {
        matches!(self, Omega::I | Omega::IO | Omega::II)
    }

    /// Operators whose output carries a fresh rightmost marker.
    pub fn emits_r(self) -> bool {
        matches!(self, Omega::I | Omega::OI | Omega::II)
    }
}

impl fmt::Display for Omega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorTag {
    Omega(Omega),
    Complement,
    Reverse,
}

impl OperatorTag {
    pub fn tag(self) -> &'static str {
        match self {
            OperatorTag::Omega(o) => o.tag(),
            OperatorTag::Complement => "c",
            OperatorTag::Reverse => "r",
        }
    }
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A class symbol under an operator, written `base.tag`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecoratedSymbol {
    pub base: String,
    pub tag: OperatorTag,
}

impl DecoratedSymbol {
    pub fn new(base: impl Into<String>, op: Omega) -> Self {
        DecoratedSymbol {
            base: base.into(),
            tag: OperatorTag::Omega(op),
        }
    }
}

impl fmt::Display for DecoratedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.base, self.tag)
    }
}

type Terms = Vec<Vec<Expr>>;

fn one() -> Terms {
    vec![Vec::new()]
}

fn single(e: Expr) -> Terms {
    vec![vec![e]]
}

fn mul(a: &Terms, b: &Terms) -> Terms {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let mut t = x.clone();
            t.extend(y.iter().cloned());
            out.push(t);
        }
    }
    out
}

fn mul_all(parts: &[&Terms]) -> Terms {
    parts.iter().fold(one(), |acc, p| mul(&acc, p))
}

fn to_expr(terms: Terms) -> Expr {
    Expr::sum(terms.into_iter().map(Expr::product))
}

fn from_expr(e: &Expr) -> Terms {
    match e {
        Expr::Zero => Vec::new(),
        _ => e.terms().iter().map(|t| t.factors().to_vec()).collect(),
    }
}

/// The action of an insertion operator on a single atom.
pub fn apply_atom(op: Omega, atom: Atom) -> Expr {
    use Atom::*;
    if atom == Empty {
        return match op {
            Omega::O | Omega::OO => Expr::EMPTY,
            _ => Expr::Zero,
        };
    }
    let last = if atom.marks(Marker::Left) { ZL } else { Z };
    let sz = Expr::class(SZ);
    let a = Expr::Atom;
    let factors = match op {
        Omega::O => vec![a(last)],
        Omega::I => vec![a(ZR), a(last)],
        Omega::OO => vec![sz, a(last)],
        Omega::IO => vec![a(Z), sz, a(last)],
        Omega::OI => vec![sz, a(ZR), a(last)],
        Omega::II => vec![a(Z), sz, a(ZR), a(last)],
    };
    Expr::product(factors)
}

struct Rewriter<'a> {
    tracking: &'a dyn Fn(&str) -> Option<TrackingKind>,
    name: &'a mut dyn FnMut(&str, Omega) -> Expr,
    context: &'a str,
}

impl Rewriter<'_> {
    fn has(&self, e: &Expr, marker: Marker) -> Result<bool> {
        Ok(match e {
            Expr::Zero => false,
            Expr::Atom(a) => a.marks(marker),
            Expr::Ref(n) => (self.tracking)(n)
                .ok_or_else(|| Error::UnknownSymbol(n.clone()))?
                .has(marker),
            Expr::Seq(_) => false,
            Expr::Sum(xs) | Expr::Product(xs) => {
                for x in xs {
                    if self.has(x, marker)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    fn apply(&mut self, op: Omega, e: &Expr) -> Result<Terms> {
        match e {
            Expr::Zero => Ok(Vec::new()),
            Expr::Atom(a) => Ok(from_expr(&apply_atom(op, *a))),
            Expr::Ref(n) => {
                if (self.tracking)(n).is_none() {
                    return Err(Error::UnknownSymbol(n.clone()));
                }
                Ok(from_expr(&(self.name)(n, op)))
            }
            Expr::Sum(ts) => {
                let mut out = Vec::new();
                for t in ts {
                    out.extend(self.apply(op, t)?);
                }
                Ok(out)
            }
            Expr::Product(fs) => {
                let mut memo = HashMap::new();
                self.product(op, fs, 0, &mut memo)
            }
            Expr::Seq(a) => self.seq(op, a),
        }
    }

    fn product(
        &mut self,
        op: Omega,
        fs: &[Expr],
        k: usize,
        memo: &mut HashMap<(Omega, usize), Terms>,
    ) -> Result<Terms> {
        if let Some(t) = memo.get(&(op, k)) {
            return Ok(t.clone());
        }
        let out = if k + 1 == fs.len() {
            self.apply(op, &fs[k])?
        } else {
            let head = &fs[k];
            let free = !self.has(head, Marker::Right)?;
            let h = |s: &mut Self, o| s.apply(o, head);
            let mut out = Vec::new();
            match op {
                Omega::O | Omega::OO => {
                    out = mul(&h(self, op)?, &self.product(op, fs, k + 1, memo)?);
                }
                Omega::OI => {
                    out.extend(mul(
                        &h(self, Omega::OI)?,
                        &self.product(Omega::O, fs, k + 1, memo)?,
                    ));
                    out.extend(mul(
                        &h(self, Omega::OO)?,
                        &self.product(Omega::OI, fs, k + 1, memo)?,
                    ));
                }
                Omega::I => {
                    out.extend(mul(
                        &h(self, Omega::I)?,
                        &self.product(Omega::O, fs, k + 1, memo)?,
                    ));
                    if free {
                        out.extend(mul(
                            &h(self, Omega::O)?,
                            &self.product(Omega::I, fs, k + 1, memo)?,
                        ));
                    }
                }
                Omega::IO => {
                    out.extend(mul(
                        &h(self, Omega::IO)?,
                        &self.product(Omega::OO, fs, k + 1, memo)?,
                    ));
                    if free {
                        out.extend(mul(
                            &h(self, Omega::O)?,
                            &self.product(Omega::IO, fs, k + 1, memo)?,
                        ));
                    }
                }
                Omega::II => {
                    out.extend(mul(
                        &h(self, Omega::II)?,
                        &self.product(Omega::O, fs, k + 1, memo)?,
                    ));
                    out.extend(mul(
                        &h(self, Omega::IO)?,
                        &self.product(Omega::OI, fs, k + 1, memo)?,
                    ));
                    if free {
                        out.extend(mul(
                            &h(self, Omega::O)?,
                            &self.product(Omega::II, fs, k + 1, memo)?,
                        ));
                    }
                }
            }
            out
        };
        memo.insert((op, k), out.clone());
        Ok(out)
    }

    fn seq(&mut self, op: Omega, a: &Expr) -> Result<Terms> {
        for marker in [Marker::Right, Marker::Left] {
            if self.has(a, marker)? {
                return Err(Error::RestrictedInSeq {
                    symbol: self.context.to_string(),
                    marker,
                });
            }
        }
        let seq_of = |s: &mut Self, o| -> Result<Terms> {
            let inner = to_expr(s.apply(o, a)?);
            Ok(single(Expr::seq_of(inner)))
        };
        Ok(match op {
            Omega::O | Omega::OO => seq_of(self, op)?,
            Omega::I => {
                let so = seq_of(self, Omega::O)?;
                mul_all(&[&so, &self.apply(Omega::I, a)?, &so])
            }
            Omega::IO => {
                let so = seq_of(self, Omega::O)?;
                let soo = seq_of(self, Omega::OO)?;
                mul_all(&[&so, &self.apply(Omega::IO, a)?, &soo])
            }
            Omega::OI => {
                let so = seq_of(self, Omega::O)?;
                let soo = seq_of(self, Omega::OO)?;
                mul_all(&[&soo, &self.apply(Omega::OI, a)?, &so])
            }
            Omega::II => {
                let so = seq_of(self, Omega::O)?;
                let soo = seq_of(self, Omega::OO)?;
                let io = self.apply(Omega::IO, a)?;
                let oi = self.apply(Omega::OI, a)?;
                let ii = self.apply(Omega::II, a)?;
                let mut out = mul_all(&[&so, &io, &soo, &oi, &so]);
                out.extend(mul_all(&[&so, &ii, &so]));
                out
            }
        })
    }
}

/// Applies an insertion operator to an expression, naming `op(S)` as `S.op`.
/// The result is a canonical, fully distributed sum of products.
pub fn apply_expr(
    op: Omega,
    expr: &Expr,
    tracking: &BTreeMap<String, TrackingKind>,
) -> Result<Expr> {
    let lookup = |n: &str| tracking.get(n).copied();
    let mut name = |n: &str, o: Omega| Expr::class(DecoratedSymbol::new(n, o).to_string());
    let mut rw = Rewriter {
        tracking: &lookup,
        name: &mut name,
        context: "<expression>",
    };
    Ok(to_expr(rw.apply(op, expr)?))
}

/// Builds the equations for decorated symbols on demand, following every
/// decorated reference until the system is closed.
///
/// When the source uses `Seq`, `SZ` is treated as `Seq(Z)` under the
/// operators so regular inputs stay regular; otherwise `SZ` is expanded
/// through its own equation so no `Seq` is introduced.
pub struct Expander<'a> {
    spec: &'a Specification,
    seq_mode: bool,
    names: HashMap<(String, Omega), String>,
    taken: HashSet<String>,
    queue: VecDeque<(String, Omega)>,
    equations: Vec<Equation>,
}

impl<'a> Expander<'a> {
    /// `reserved` lists names the caller will define itself.
    pub fn new(spec: &'a Specification, reserved: impl IntoIterator<Item = String>) -> Self {
        let mut taken: HashSet<String> = reserved.into_iter().collect();
        taken.insert(SZ.to_string());
        Expander {
            spec,
            seq_mode: spec.uses_seq(),
            names: HashMap::new(),
            taken,
            queue: VecDeque::new(),
            equations: Vec::new(),
        }
    }

    /// Name of `op(base)`, scheduling its equation if new.
    pub fn name(&mut self, base: &str, op: Omega) -> Result<String> {
        if !self.spec.contains(base) {
            return Err(Error::UnknownSymbol(base.into()));
        }
        Ok(self.name_of(base, op))
    }

    fn name_of(&mut self, base: &str, op: Omega) -> String {
        let key = (base.to_string(), op);
        if let Some(n) = self.names.get(&key) {
            return n.clone();
        }
        let stem = DecoratedSymbol::new(base, op).to_string();
        let mut candidate = stem.clone();
        let mut k = 2;
        while self.taken.contains(&candidate) {
            candidate = format!("{stem}_{k}");
            k += 1;
        }
        self.taken.insert(candidate.clone());
        self.names.insert(key.clone(), candidate.clone());
        self.queue.push_back(key);
        candidate
    }

    /// Applies `op` to an expression over the source symbols.
    pub fn apply(&mut self, op: Omega, expr: &Expr, context: &str) -> Result<Expr> {
        let spec = self.spec;
        let seq_mode = self.seq_mode;
        let lookup = |n: &str| spec.tracking(n);
        let mut pending: Vec<(String, Omega)> = Vec::new();
        let mut planned: HashMap<(String, Omega), String> = HashMap::new();
        // Names are resolved in two passes so the closure need not borrow self.
        let terms = {
            let names = &self.names;
            let mut name = |n: &str, o: Omega| -> Expr {
                if seq_mode && n == SZ {
                    return seq_z(o);
                }
                let key = (n.to_string(), o);
                if let Some(x) = names.get(&key) {
                    return Expr::class(x.clone());
                }
                let placeholder = format!("\u{0}{}", pending.len());
                let got = planned.entry(key.clone()).or_insert_with(|| {
                    pending.push(key);
                    placeholder
                });
                Expr::class(got.clone())
            };
            let mut rw = Rewriter {
                tracking: &lookup,
                name: &mut name,
                context,
            };
            rw.apply(op, expr)?
        };
        let resolved: HashMap<String, String> = planned
            .into_iter()
            .map(|((b, o), ph)| (ph, self.name_of(&b, o)))
            .collect();
        let expr = to_expr(terms);
        if resolved.is_empty() {
            return Ok(expr);
        }
        Ok(expr.rename_refs(&|n: &str| resolved.get(n).cloned().unwrap_or_else(|| n.to_string())))
    }

    /// Expands every scheduled symbol and returns the generated equations.
    pub fn finish(mut self) -> Result<Vec<Equation>> {
        while let Some((base, op)) = self.queue.pop_front() {
            let name = self.names[&(base.clone(), op)].clone();
            let rhs = self
                .spec
                .rhs(&base)
                .ok_or_else(|| Error::UnknownSymbol(base.clone()))?
                .clone();
            let rhs = self.apply(op, &rhs, &base)?;
            self.equations.push(Equation::new(name, rhs));
        }
        Ok(self.equations)
    }
}

fn seq_z(op: Omega) -> Expr {
    let none = BTreeMap::new();
    apply_expr(op, &Expr::seq(Expr::atom(Atom::Z)), &none).expect("Seq(Z) has no references")
}

/// The closed system generated from the decorated symbols in `needed`; the
/// first one becomes the root.
pub fn expand(spec: &Specification, needed: &[DecoratedSymbol]) -> Result<Specification> {
    if needed.is_empty() {
        return Err(Error::NothingToExpand);
    }
    let mut ex = Expander::new(spec, []);
    for d in needed {
        let OperatorTag::Omega(op) = d.tag else {
            return Err(Error::UnknownSymbol(d.to_string()));
        };
        ex.name(&d.base, op)?;
    }
    Specification::new(ex.finish()?)
}

/// `Θ`: the specification of the complement class, with every product reversed.
pub fn complement(spec: &Specification) -> Specification {
    spec.map_rhs(Expr::reversed_products)
        .expect("reversing products preserves validity")
}

/// `Φ`: the specification of the reverse class, with `ZL` and `ZR` swapped.
pub fn reverse(spec: &Specification) -> Specification {
    spec.map_rhs(|e| {
        e.map_atoms(|a| match a {
            Atom::ZL => Atom::ZR,
            Atom::ZR => Atom::ZL,
            other => other,
        })
    })
    .expect("swapping markers preserves validity")
}
