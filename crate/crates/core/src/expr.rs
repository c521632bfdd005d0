//! Right-hand-side algebra: atoms, class references, sums, products and sequences.

use std::fmt;

/// Name of the reserved class `SZ = E + SZ Z`, i.e. `Seq(Z)` written context-free.
pub const SZ: &str = "SZ";

/// The five size-generators of a bottom-to-top specification.
///
/// `Empty` has size 0; the four others have size 1 and differ only in which
/// extreme entry (leftmost, rightmost, or both) they mark.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Empty,
    Z,
    ZL,
    ZR,
    ZLR,
}

impl Atom {
    pub const ALL: [Atom; 5] = [Atom::Empty, Atom::Z, Atom::ZL, Atom::ZR, Atom::ZLR];

    pub fn name(self) -> &'static str {
        match self {
            Atom::Empty => "E",
            Atom::Z => "Z",
            Atom::ZL => "ZL",
            Atom::ZR => "ZR",
            Atom::ZLR => "ZLR",
        }
    }

    pub fn from_name(name: &str) -> Option<Atom> {
        Atom::ALL.into_iter().find(|a| a.name() == name)
    }

    pub fn size(self) -> usize {
        usize::from(self != Atom::Empty)
    }

    /// Whether this atom marks the entry tracked by `marker`.
    pub fn marks(self, marker: Marker) -> bool {
        match marker {
            Marker::Right => matches!(self, Atom::ZR | Atom::ZLR),
            Marker::Left => matches!(self, Atom::ZL | Atom::ZLR),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which extreme entry a marker atom identifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Marker {
    Left,
    Right,
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Marker::Left => "leftmost",
            Marker::Right => "rightmost",
        })
    }
}

/// A right-hand side. Product order is the bottom-to-top reading order and is
/// significant; sums are unordered semantically but keep their written order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    /// The empty class; absorbs products and vanishes from sums.
    Zero,
    Atom(Atom),
    Ref(String),
    Product(Vec<Expr>),
    Sum(Vec<Expr>),
    Seq(Box<Expr>),
}

impl Expr {
    pub const EMPTY: Expr = Expr::Atom(Atom::Empty);

    pub fn atom(atom: Atom) -> Expr {
        Expr::Atom(atom)
    }

    pub fn class(name: impl Into<String>) -> Expr {
        Expr::Ref(name.into())
    }

    pub fn seq(arg: Expr) -> Expr {
        Expr::Seq(Box::new(arg))
    }

    /// Builds a canonical product from canonical factors.
    pub fn product(factors: impl IntoIterator<Item = Expr>) -> Expr {
        let mut out = Vec::new();
        for f in factors {
            match f {
                Expr::Zero => return Expr::Zero,
                Expr::Atom(Atom::Empty) => {}
                Expr::Product(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Expr::EMPTY,
            1 => out.pop().unwrap(),
            _ => Expr::Product(out),
        }
    }

    /// Builds a canonical sum from canonical terms.
    pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
        let mut out = Vec::new();
        for t in terms {
            match t {
                Expr::Zero => {}
                Expr::Sum(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Expr::Zero,
            1 => out.pop().unwrap(),
            _ => Expr::Sum(out),
        }
    }

    /// Canonical sequence node; `Seq(0)` is the class holding only the empty object.
    pub fn seq_of(arg: Expr) -> Expr {
        match arg {
            Expr::Zero => Expr::EMPTY,
            other => Expr::seq(other),
        }
    }

    /// Flattened, Zero-absorbed, Empty-unit normal form. Idempotent.
    pub fn canonicalize(&self) -> Expr {
        match self {
            Expr::Zero | Expr::Atom(_) | Expr::Ref(_) => self.clone(),
            Expr::Product(fs) => Expr::product(fs.iter().map(Expr::canonicalize)),
            Expr::Sum(ts) => Expr::sum(ts.iter().map(Expr::canonicalize)),
            Expr::Seq(a) => Expr::seq_of(a.canonicalize()),
        }
    }

    /// Top-level summands of a canonical expression (none for `Zero`).
    pub fn terms(&self) -> &[Expr] {
        match self {
            Expr::Zero => &[],
            Expr::Sum(ts) => ts,
            other => std::slice::from_ref(other),
        }
    }

    /// Factors of a canonical term (none for `E`).
    pub fn factors(&self) -> &[Expr] {
        match self {
            Expr::Atom(Atom::Empty) => &[],
            Expr::Product(fs) => fs,
            other => std::slice::from_ref(other),
        }
    }

    pub fn is_empty_atom(&self) -> bool {
        matches!(self, Expr::Atom(Atom::Empty))
    }

    pub fn contains_seq(&self) -> bool {
        match self {
            Expr::Seq(_) => true,
            Expr::Product(xs) | Expr::Sum(xs) => xs.iter().any(Expr::contains_seq),
            _ => false,
        }
    }

    /// Visits every class name referenced, in reading order.
    pub fn for_each_ref<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Expr::Ref(name) => f(name),
            Expr::Product(xs) | Expr::Sum(xs) => xs.iter().for_each(|x| x.for_each_ref(f)),
            Expr::Seq(a) => a.for_each_ref(f),
            Expr::Zero | Expr::Atom(_) => {}
        }
    }

    pub fn refs(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.for_each_ref(&mut |r| out.push(r));
        out
    }

    /// Rebuilds the tree bottom-up, replacing atoms and references. Result is canonical.
    pub fn map_leaves(
        &self,
        atom: &mut impl FnMut(Atom) -> Expr,
        class: &mut impl FnMut(&str) -> Expr,
    ) -> Expr {
        match self {
            Expr::Zero => Expr::Zero,
            Expr::Atom(a) => atom(*a),
            Expr::Ref(name) => class(name),
            Expr::Product(fs) => {
                let fs: Vec<Expr> = fs.iter().map(|x| x.map_leaves(atom, class)).collect();
                Expr::product(fs)
            }
            Expr::Sum(ts) => {
                let ts: Vec<Expr> = ts.iter().map(|x| x.map_leaves(atom, class)).collect();
                Expr::sum(ts)
            }
            Expr::Seq(a) => Expr::seq_of(a.map_leaves(atom, class)),
        }
    }

    /// Replaces every atom by `f(atom)`.
    pub fn map_atoms(&self, f: impl Fn(Atom) -> Atom) -> Expr {
        self.map_leaves(&mut |a| Expr::Atom(f(a)), &mut |n: &str| Expr::class(n))
    }

    pub fn rename_refs(&self, rename: &impl Fn(&str) -> String) -> Expr {
        self.map_leaves(&mut Expr::Atom, &mut |name| Expr::Ref(rename(name)))
    }

    /// Reverses every product, recursively.
    pub fn reversed_products(&self) -> Expr {
        match self {
            Expr::Product(fs) => Expr::product(fs.iter().rev().map(Expr::reversed_products)),
            Expr::Sum(ts) => Expr::sum(ts.iter().map(Expr::reversed_products)),
            Expr::Seq(a) => Expr::seq_of(a.reversed_products()),
            other => other.clone(),
        }
    }
}

impl From<Atom> for Expr {
    fn from(a: Atom) -> Expr {
        Expr::Atom(a)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // Only reachable for non-canonical trees; canonical specs never hold Zero.
            Expr::Zero => f.write_str("0"),
            Expr::Atom(a) => write!(f, "{a}"),
            Expr::Ref(name) => f.write_str(name),
            Expr::Sum(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Expr::Product(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    match x {
                        Expr::Sum(_) | Expr::Product(_) => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
            Expr::Seq(a) => write!(f, "Seq({a})"),
        }
    }
}
