use std::cmp::Ordering;
use std::fmt;

use super::surd::QuadraticSurd;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Relation {
    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            Relation::Lt => ord == Ordering::Less,
            Relation::Le => ord != Ordering::Greater,
            Relation::Eq => ord == Ordering::Equal,
            Relation::Ge => ord != Ordering::Less,
            Relation::Gt => ord == Ordering::Greater,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

/// `lhs rel rhs`, with the outcome recorded when it was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub label: String,
    pub lhs: QuadraticSurd,
    pub rel: Relation,
    pub rhs: QuadraticSurd,
    pub holds: bool,
}

impl Inequality {
    pub fn new(label: impl Into<String>, lhs: QuadraticSurd, rel: Relation, rhs: QuadraticSurd) -> Inequality {
        let holds = rel.holds(lhs.cmp(&rhs));
        Inequality {
            label: label.into(),
            lhs,
            rel,
            rhs,
            holds,
        }
    }

    /// Recomputes the comparison and checks it against the recorded outcome.
    pub fn reverify(&self) -> bool {
        self.rel.holds(self.lhs.cmp(&self.rhs)) == self.holds
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "label": self.label,
            "lhs": self.lhs.to_string(),
            "rel": self.rel.symbol(),
            "rhs": self.rhs.to_string(),
            "holds": self.holds,
        })
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} {} [{}]",
            self.label,
            self.lhs,
            self.rel.symbol(),
            self.rhs,
            if self.holds { "holds" } else { "fails" }
        )
    }
}
