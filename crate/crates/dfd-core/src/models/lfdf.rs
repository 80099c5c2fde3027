//! Assignment-team models for the dependence language with function
//! terms: a finite object domain, interpretations, and a team of
//! admissible assignments. No next-step operator is interpreted here.

use super::{Value, Violation};
use crate::syntax::{FuncId, PredId, Term, TermSet, Vocabulary};
use std::collections::{BTreeMap, BTreeSet};

/// Total assignment of objects to the vocabulary's variables.
pub type Assignment = Vec<Value>;

#[derive(Debug, Clone, PartialEq)]
pub struct LfdFModel {
    voc: Vocabulary,
    objects: BTreeSet<Value>,
    pred_interp: Vec<BTreeSet<Vec<Value>>>,
    func_interp: Vec<BTreeMap<Vec<Value>, Value>>,
    team: Vec<Assignment>,
}

impl LfdFModel {
    pub fn new(
        voc: Vocabulary,
        objects: BTreeSet<Value>,
        pred_interp: Vec<BTreeSet<Vec<Value>>>,
        func_interp: Vec<BTreeMap<Vec<Value>, Value>>,
        team: Vec<Assignment>,
    ) -> Self {
        LfdFModel {
            voc,
            objects,
            pred_interp,
            func_interp,
            team,
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.voc
    }

    pub fn objects(&self) -> &BTreeSet<Value> {
        &self.objects
    }

    pub fn team(&self) -> &[Assignment] {
        &self.team
    }

    pub fn team_size(&self) -> usize {
        self.team.len()
    }

    pub fn pred_interp(&self) -> &[BTreeSet<Vec<Value>>] {
        &self.pred_interp
    }

    pub fn func_interp(&self) -> &[BTreeMap<Vec<Value>, Value>] {
        &self.func_interp
    }

    pub fn pred_tuples(&self, p: PredId) -> &BTreeSet<Vec<Value>> {
        &self.pred_interp[p.0]
    }

    pub fn func_table(&self, f: FuncId) -> &BTreeMap<Vec<Value>, Value> {
        &self.func_interp[f.0]
    }

    /// Term value under an assignment; next-step terms are not part of
    /// this language.
    pub fn term_value(&self, assignment: &Assignment, t: &Term) -> Result<Value, Violation> {
        match t {
            Term::Var(v) => assignment
                .get(v.0)
                .cloned()
                .ok_or_else(|| Violation::PartialAssignment {
                    index: 0,
                    variable: self
                        .voc
                        .variable_names()
                        .get(v.0)
                        .cloned()
                        .unwrap_or_default(),
                }),
            Term::Next(_) => Err(Violation::Vocabulary(
                "next-step terms have no meaning on assignment teams".into(),
            )),
            Term::App(f, args) => {
                let mut row = Vec::with_capacity(args.len());
                for a in args {
                    row.push(self.term_value(assignment, a)?);
                }
                self.func_interp
                    .get(f.0)
                    .and_then(|table| table.get(&row))
                    .cloned()
                    .ok_or_else(|| Violation::FunctionNotTotal {
                        function: self.voc.func_name(*f).to_string(),
                        args: row
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                    })
            }
        }
    }

    pub fn agree(&self, a: usize, b: usize, x: &TermSet) -> Result<bool, Violation> {
        for t in x {
            if self.term_value(&self.team[a], t)? != self.term_value(&self.team[b], t)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn validate(&self) -> Result<(), Violation> {
        for (i, assignment) in self.team.iter().enumerate() {
            if assignment.len() != self.voc.num_variables() {
                return Err(Violation::PartialAssignment {
                    index: i,
                    variable: self
                        .voc
                        .variable_names()
                        .get(assignment.len())
                        .cloned()
                        .unwrap_or_default(),
                });
            }
            for v in assignment {
                if !self.objects.contains(v) {
                    return Err(Violation::Vocabulary(format!(
                        "assignment {i} uses `{v}` which is not an object"
                    )));
                }
            }
        }
        for (p, name, arity) in self.voc.predicates() {
            for tuple in &self.pred_interp[p.0] {
                if tuple.len() != arity {
                    return Err(Violation::PredicateArity {
                        predicate: name.to_string(),
                        expected: arity,
                        got: tuple.len(),
                    });
                }
            }
        }
        // Function tables must be total over the object domain.
        for (f, name, arity) in self.voc.functions() {
            let table = &self.func_interp[f.0];
            for (args, result) in table {
                if args.len() != arity {
                    return Err(Violation::FunctionArity {
                        function: name.to_string(),
                        expected: arity,
                        got: args.len(),
                    });
                }
                if !self.objects.contains(result) {
                    return Err(Violation::Vocabulary(format!(
                        "function `{name}` maps into `{result}` which is not an object"
                    )));
                }
            }
            let expected = (self.objects.len() as u64).checked_pow(arity as u32);
            match expected {
                Some(count) if count <= 1_000_000 => {
                    if table.len() as u64 != count {
                        return Err(Violation::FunctionNotTotal {
                            function: name.to_string(),
                            args: format!("{} of {} rows", table.len(), count),
                        });
                    }
                }
                _ => {
                    return Err(Violation::Vocabulary(format!(
                        "function `{name}` needs too many rows to validate totality"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn voc() -> Vocabulary {
        Vocabulary::new(
            vec!["x".into(), "y".into()],
            BTreeMap::new(),
            BTreeMap::from([("f".into(), 1)]),
        )
        .unwrap()
    }

    #[test]
    fn totality_is_enforced() {
        let objects: BTreeSet<Value> = [Value::Int(0), Value::Int(1)].into();
        let partial = LfdFModel::new(
            voc(),
            objects.clone(),
            vec![],
            vec![BTreeMap::from([(vec![Value::Int(0)], Value::Int(1))])],
            vec![vec![Value::Int(0), Value::Int(1)]],
        );
        assert!(matches!(
            partial.validate(),
            Err(Violation::FunctionNotTotal { .. })
        ));
        let total = LfdFModel::new(
            voc(),
            objects,
            vec![],
            vec![BTreeMap::from([
                (vec![Value::Int(0)], Value::Int(1)),
                (vec![Value::Int(1)], Value::Int(1)),
            ])],
            vec![vec![Value::Int(0), Value::Int(1)]],
        );
        assert_eq!(total.validate(), Ok(()));
    }

    #[test]
    fn next_terms_are_rejected() {
        let m = LfdFModel::new(
            voc(),
            [Value::Int(0)].into(),
            vec![],
            vec![BTreeMap::from([(vec![Value::Int(0)], Value::Int(0))])],
            vec![vec![Value::Int(0), Value::Int(0)]],
        );
        let t = Term::var(0).next();
        assert!(m.term_value(&m.team()[0].clone(), &t).is_err());
    }
}
