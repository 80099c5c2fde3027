//! Finite model classes and their validators.

mod dynamical;
mod general;
mod io;
mod lfdf;
mod standard;

pub use dynamical::{DynamicalModel, TruncationInfo};
pub use general::{GeneralRelationalModel, MAX_GENERAL_UNIVERSE};
pub use io::{model_from_json, model_to_json, Model, ModelIoError};
pub use lfdf::{Assignment, LfdFModel};
pub use standard::StandardRelationalModel;

use serde::{Deserialize, Serialize};
use std::fmt;

/// Opaque value of a dynamical variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Str(String),
    /// Fresh "infinite time" object used when converting timed models
    /// into assignment-team models.
    Inf,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Str(s) => write!(f, "{s}"),
            Value::Inf => write!(f, "∞"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Int(n) => ser.serialize_i64(*n),
            Value::Str(s) => ser.serialize_str(s),
            Value::Inf => ser.serialize_str("∞"),
        }
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = serde_json::Value::deserialize(de)?;
        match raw {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(Value::Int)
                .ok_or_else(|| serde::de::Error::custom("value numbers must be integers")),
            serde_json::Value::String(s) => {
                if s == "∞" {
                    Ok(Value::Inf)
                } else {
                    Ok(Value::Str(s))
                }
            }
            other => Err(serde::de::Error::custom(format!(
                "expected integer or string value, got {other}"
            ))),
        }
    }
}

/// An equivalence relation on `0..n`, stored as a class-id vector in
/// first-occurrence (restricted growth) normal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    class_of: Vec<usize>,
    num_classes: usize,
}

impl Partition {
    /// Normalizes arbitrary class labels into first-occurrence form.
    pub fn from_labels<T: Eq + std::hash::Hash>(labels: &[T]) -> Partition {
        let mut seen: std::collections::HashMap<&T, usize> = std::collections::HashMap::new();
        let mut class_of = Vec::with_capacity(labels.len());
        for label in labels {
            let next = seen.len();
            let id = *seen.entry(label).or_insert(next);
            class_of.push(id);
        }
        Partition {
            class_of,
            num_classes: seen.len(),
        }
    }

    pub fn by_key<T: Eq + std::hash::Hash>(n: usize, mut key: impl FnMut(usize) -> T) -> Partition {
        let labels: Vec<T> = (0..n).map(|i| key(i)).collect();
        Partition::from_labels(&labels)
    }

    pub fn singletons(n: usize) -> Partition {
        Partition {
            class_of: (0..n).collect(),
            num_classes: n,
        }
    }

    pub fn universal(n: usize) -> Partition {
        Partition {
            class_of: vec![0; n],
            num_classes: if n == 0 { 0 } else { 1 },
        }
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn same_class(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// Members of each class, ordered by class id then element.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_classes];
        for (elem, class) in self.class_of.iter().enumerate() {
            out[*class].push(elem);
        }
        out
    }

    /// Intersection of two partitions on the same carrier.
    pub fn meet(&self, other: &Partition) -> Partition {
        assert_eq!(self.len(), other.len());
        Partition::by_key(self.len(), |i| (self.class_of[i], other.class_of[i]))
    }

    pub fn is_refinement_of(&self, coarser: &Partition) -> bool {
        (0..self.len()).all(|i| {
            (0..self.len())
                .all(|j| !self.same_class(i, j) || coarser.same_class(i, j))
        })
    }
}

/// Violations reported by the model validators. The first violation
/// found is returned, with witnesses.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("transition function is not total: state `{state}` has no image")]
    TotalFunction { state: String },
    #[error("transition image `{target}` of `{state}` is not a state")]
    DanglingTransition { state: String, target: String },
    #[error("states `{first}` and `{second}` agree on every basic variable")]
    StateDetermination { first: String, second: String },
    #[error("state `{state}` has no value for variable `{variable}`")]
    MissingValue { state: String, variable: String },
    #[error("predicate `{predicate}` holds of a tuple of arity {got}, expected {expected}")]
    PredicateArity {
        predicate: String,
        expected: usize,
        got: usize,
    },
    #[error("function `{function}` is not total: no image for ({args})")]
    FunctionNotTotal { function: String, args: String },
    #[error("function `{function}` row has arity {got}, expected {expected}")]
    FunctionArity {
        function: String,
        expected: usize,
        got: usize,
    },
    #[error("relation for `{key}` is not a valid partition")]
    MalformedRelation { key: String },
    #[error("relation family misses an entry for `{key}`")]
    MissingRelation { key: String },
    #[error("transition does not preserve full-agreement: `{first}` ~V `{second}` but their images differ on `{variable}`")]
    Preservation {
        first: String,
        second: String,
        variable: String,
    },
    #[error("atom `{atom}` is not invariant: `{holds}` and `{fails}` agree on its terms")]
    AtomInvariance {
        atom: String,
        holds: String,
        fails: String,
    },
    #[error("atom `{atom}` disagrees with its next-step reduct at `{state}`")]
    NextCoherence { atom: String, state: String },
    #[error("atom `{atom}` mentions terms beyond the stored depth bound {bound}")]
    AtomBeyondBound { atom: String, bound: usize },
    #[error("condition {condition} fails: {detail}")]
    Condition {
        condition: &'static str,
        detail: String,
    },
    #[error("assignment {index} has no value for variable `{variable}`")]
    PartialAssignment { index: usize, variable: String },
    #[error("vocabulary error: {0}")]
    Vocabulary(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_normal_form_and_meet() {
        let p = Partition::from_labels(&["b", "a", "b", "c"]);
        assert_eq!(p.num_classes(), 3);
        assert!(p.same_class(0, 2));
        assert!(!p.same_class(0, 1));
        let q = Partition::from_labels(&[1, 1, 2, 2]);
        let m = p.meet(&q);
        assert_eq!(m.num_classes(), 4);
        assert!(m.is_refinement_of(&p));
        assert!(m.is_refinement_of(&q));
    }

    #[test]
    fn value_round_trip() {
        for v in [Value::Int(-3), Value::Str("a b".into()), Value::Inf] {
            let text = serde_json::to_string(&v).unwrap();
            let back: Value = serde_json::from_str(&text).unwrap();
            assert_eq!(v, back);
        }
    }
}
