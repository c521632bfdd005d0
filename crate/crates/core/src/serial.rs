//! JSON form of a specification.
//!
//! ```json
//! { "root": "M",
//!   "equations": [
//!     { "lhs": "M",
//!       "rhs": { "kind": "sum", "terms": [
//!         { "kind": "atom", "atom": "ZLR" },
//!         { "kind": "product", "factors": [
//!           { "kind": "atom", "atom": "ZL" },
//!           { "kind": "seq", "arg": { "kind": "atom", "atom": "Z" } },
//!           { "kind": "atom", "atom": "ZR" } ] } ] } } ] }
//! ```
//!
//! Node kinds are `zero`, `atom` (field `atom`: one of `E Z ZL ZR ZLR`),
//! `ref` (field `name`), `sum` (field `terms`), `product` (field `factors`)
//! and `seq` (field `arg`). `root` must name the first equation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Atom, Expr};
use crate::spec::{Equation, Specification};

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Node {
    Zero,
    Atom { atom: String },
    Ref { name: String },
    Sum { terms: Vec<Node> },
    Product { factors: Vec<Node> },
    Seq { arg: Box<Node> },
}

#[derive(Serialize, Deserialize)]
struct EquationDoc {
    lhs: String,
    rhs: Node,
}

#[derive(Serialize, Deserialize)]
struct SpecDoc {
    root: String,
    equations: Vec<EquationDoc>,
}

impl From<&Expr> for Node {
    fn from(e: &Expr) -> Node {
        match e {
            Expr::Zero => Node::Zero,
            Expr::Atom(a) => Node::Atom {
                atom: a.name().into(),
            },
            Expr::Ref(n) => Node::Ref { name: n.clone() },
            Expr::Sum(ts) => Node::Sum {
                terms: ts.iter().map(Node::from).collect(),
            },
            Expr::Product(fs) => Node::Product {
                factors: fs.iter().map(Node::from).collect(),
            },
            Expr::Seq(a) => Node::Seq {
                arg: Box::new(Node::from(a.as_ref())),
            },
        }
    }
}

impl TryFrom<Node> for Expr {
    type Error = Error;

    fn try_from(n: Node) -> Result<Expr> {
        let many = |xs: Vec<Node>| {
            xs.into_iter()
                .map(Expr::try_from)
                .collect::<Result<Vec<_>>>()
        };
        Ok(match n {
            Node::Zero => Expr::Zero,
            Node::Atom { atom } => Expr::Atom(
                Atom::from_name(&atom)
                    .ok_or_else(|| Error::Json(format!("unknown atom `{atom}`")))?,
            ),
            Node::Ref { name } => {
                if !crate::dsl::is_name(&name) {
                    return Err(Error::Json(format!("invalid class name `{name}`")));
                }
                Expr::Ref(name)
            }
            Node::Sum { terms } => Expr::Sum(many(terms)?),
            Node::Product { factors } => Expr::Product(many(factors)?),
            Node::Seq { arg } => Expr::seq(Expr::try_from(*arg)?),
        })
    }
}

pub fn to_json(spec: &Specification) -> String {
    let doc = SpecDoc {
        root: spec.root().to_string(),
        equations: spec
            .equations()
            .iter()
            .map(|e| EquationDoc {
                lhs: e.lhs.clone(),
                rhs: Node::from(&e.rhs),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("specification documents always serialise")
}

pub fn from_json(text: &str) -> Result<Specification> {
    let doc: SpecDoc = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    if doc.equations.first().map(|e| e.lhs.as_str()) != Some(doc.root.as_str()) {
        return Err(Error::Json(format!(
            "root `{}` must be the first equation",
            doc.root
        )));
    }
    let mut eqs = Vec::with_capacity(doc.equations.len());
    for e in doc.equations {
        if !crate::dsl::is_name(&e.lhs) {
            return Err(Error::Json(format!("invalid class name `{}`", e.lhs)));
        }
        eqs.push(Equation::new(e.lhs, Expr::try_from(e.rhs)?));
    }
    Specification::new(eqs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_spec;

    #[test]
    fn json_round_trip() {
        let s = parse_spec("M = ZLR + ZL Seq(Z) ZR\nA = E + SZ M").unwrap();
        let back = from_json(&to_json(&s)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn json_field_names() {
        let s = parse_spec("A = Seq(Z) B\nB = Z + ZR").unwrap_err();
        assert!(matches!(s, Error::Tracking { .. }));
        let s = parse_spec("A = Seq(Z) Z").unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&s)).unwrap();
        assert_eq!(v["root"], "A");
        assert_eq!(v["equations"][0]["rhs"]["kind"], "product");
        assert_eq!(v["equations"][0]["rhs"]["factors"][0]["kind"], "seq");
        assert_eq!(v["equations"][0]["rhs"]["factors"][0]["arg"]["atom"], "Z");
    }

    #[test]
    fn json_rejects_bad_root_and_atoms() {
        let bad_root = r#"{"root":"B","equations":[{"lhs":"A","rhs":{"kind":"atom","atom":"Z"}}]}"#;
        assert!(matches!(from_json(bad_root), Err(Error::Json(_))));
        let bad_atom = r#"{"root":"A","equations":[{"lhs":"A","rhs":{"kind":"atom","atom":"Q"}}]}"#;
        assert!(matches!(from_json(bad_atom), Err(Error::Json(_))));
    }
}
