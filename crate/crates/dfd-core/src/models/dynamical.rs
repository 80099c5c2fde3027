//! Dynamical dependence models: a finite state set with a total
//! transition function, per-variable valuations, and interpretations
//! for predicate and function symbols.

use super::{Partition, Value, Violation};
use crate::syntax::{FuncId, PredId, Term, TermSet, VarId, Vocabulary};
use std::collections::{BTreeMap, BTreeSet};

/// Which states are truncation sentinels: their outgoing transition is
/// a placeholder self-loop standing in for a cut-off infinite tail.
/// Analysis passes treat the transition as absent there.
pub type TruncationInfo = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicalModel {
    voc: Vocabulary,
    state_names: Vec<String>,
    transition: Vec<usize>,
    /// `values[state][var]`
    values: Vec<Vec<Value>>,
    pred_interp: Vec<BTreeSet<Vec<Value>>>,
    func_interp: Vec<BTreeMap<Vec<Value>, Value>>,
    truncated: TruncationInfo,
}

impl DynamicalModel {
    pub fn new(
        voc: Vocabulary,
        state_names: Vec<String>,
        transition: Vec<usize>,
        values: Vec<Vec<Value>>,
        pred_interp: Vec<BTreeSet<Vec<Value>>>,
        func_interp: Vec<BTreeMap<Vec<Value>, Value>>,
        truncated: TruncationInfo,
    ) -> Self {
        DynamicalModel {
            voc,
            state_names,
            transition,
            values,
            pred_interp,
            func_interp,
            truncated,
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.voc
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = usize> {
        0..self.state_names.len()
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.state_names[s]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn lookup_state(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn step(&self, s: usize) -> usize {
        self.transition[s]
    }

    pub fn step_n(&self, s: usize, n: usize) -> usize {
        (0..n).fold(s, |acc, _| self.step(acc))
    }

    pub fn transition(&self) -> &[usize] {
        &self.transition
    }

    /// The transition as a partial map: `None` at truncation sentinels.
    pub fn partial_step(&self, s: usize) -> Option<usize> {
        if self.truncated.contains(&s) {
            None
        } else {
            Some(self.transition[s])
        }
    }

    pub fn truncated(&self) -> &TruncationInfo {
        &self.truncated
    }

    pub fn var_value(&self, s: usize, v: VarId) -> &Value {
        &self.values[s][v.0]
    }

    pub fn state_values(&self, s: usize) -> &[Value] {
        &self.values[s]
    }

    pub fn pred_tuples(&self, p: PredId) -> &BTreeSet<Vec<Value>> {
        &self.pred_interp[p.0]
    }

    pub fn func_table(&self, f: FuncId) -> &BTreeMap<Vec<Value>, Value> {
        &self.func_interp[f.0]
    }

    pub fn pred_interp(&self) -> &[BTreeSet<Vec<Value>>] {
        &self.pred_interp
    }

    pub fn func_interp(&self) -> &[BTreeMap<Vec<Value>, Value>] {
        &self.func_interp
    }

    /// Recursive term evaluation: the next-step marker follows the
    /// transition, function symbols apply their interpretation.
    pub fn term_value(&self, s: usize, t: &Term) -> Result<Value, Violation> {
        match t {
            Term::Var(v) => {
                if v.0 >= self.voc.num_variables() {
                    return Err(Violation::Vocabulary(format!(
                        "variable index {} out of range",
                        v.0
                    )));
                }
                Ok(self.values[s][v.0].clone())
            }
            Term::Next(inner) => self.term_value(self.step(s), inner),
            Term::App(f, args) => {
                if f.0 >= self.func_interp.len() {
                    return Err(Violation::Vocabulary(format!(
                        "function index {} out of range",
                        f.0
                    )));
                }
                let mut row = Vec::with_capacity(args.len());
                for a in args {
                    row.push(self.term_value(s, a)?);
                }
                self.func_interp[f.0].get(&row).cloned().ok_or_else(|| {
                    Violation::FunctionNotTotal {
                        function: self.voc.func_name(*f).to_string(),
                        args: row
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                    }
                })
            }
        }
    }

    /// Value agreement: do `s` and `t` give every term of `X` the same
    /// value? The empty set relates everything.
    pub fn agree(&self, s: usize, t: usize, x: &TermSet) -> Result<bool, Violation> {
        for term in x {
            if self.term_value(s, term)? != self.term_value(t, term)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// States partitioned by their joint value on `X`.
    pub fn agreement_partition(&self, x: &TermSet) -> Result<Partition, Violation> {
        let mut rows: Vec<Vec<Value>> = Vec::with_capacity(self.num_states());
        for s in self.states() {
            let mut row = Vec::with_capacity(x.len());
            for t in x {
                row.push(self.term_value(s, t)?);
            }
            rows.push(row);
        }
        Ok(Partition::from_labels(&rows))
    }

    /// Every value mentioned by a valuation, closed under the function
    /// tables (bounded by `cap` rounds).
    pub fn value_universe(&self, cap: usize) -> BTreeSet<Value> {
        let mut universe: BTreeSet<Value> = self.values.iter().flatten().cloned().collect();
        for _ in 0..cap {
            let mut grew = false;
            for table in &self.func_interp {
                for (args, result) in table {
                    if args.iter().all(|a| universe.contains(a)) && universe.insert(result.clone())
                    {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        universe
    }

    pub fn validate(&self) -> Result<(), Violation> {
        validate_dynamical(self)
    }
}

/// Checks totality of the transition, unique determination of states by
/// their variable rows, arities, and totality of function tables over
/// the value universe.
pub fn validate_dynamical(m: &DynamicalModel) -> Result<(), Violation> {
    let n = m.num_states();
    if m.transition.len() != n {
        let state = m
            .state_names
            .get(m.transition.len())
            .cloned()
            .unwrap_or_else(|| "?".to_string());
        return Err(Violation::TotalFunction { state });
    }
    for (s, &target) in m.transition.iter().enumerate() {
        if target >= n {
            return Err(Violation::DanglingTransition {
                state: m.state_names[s].clone(),
                target: target.to_string(),
            });
        }
    }
    for (s, row) in m.values.iter().enumerate() {
        if row.len() != m.voc.num_variables() {
            let variable = m
                .voc
                .variable_names()
                .get(row.len())
                .cloned()
                .unwrap_or_default();
            return Err(Violation::MissingValue {
                state: m.state_names[s].clone(),
                variable,
            });
        }
    }
    for s in 0..n {
        for t in (s + 1)..n {
            if m.values[s] == m.values[t] {
                return Err(Violation::StateDetermination {
                    first: m.state_names[s].clone(),
                    second: m.state_names[t].clone(),
                });
            }
        }
    }
    for (p, name, arity) in m.voc.predicates() {
        for tuple in &m.pred_interp[p.0] {
            if tuple.len() != arity {
                return Err(Violation::PredicateArity {
                    predicate: name.to_string(),
                    expected: arity,
                    got: tuple.len(),
                });
            }
        }
    }
    if m.voc.has_functions() {
        let universe: Vec<Value> = m.value_universe(64).into_iter().collect();
        for (f, name, arity) in m.voc.functions() {
            for args in &m.func_interp[f.0] {
                if args.0.len() != arity {
                    return Err(Violation::FunctionArity {
                        function: name.to_string(),
                        expected: arity,
                        got: args.0.len(),
                    });
                }
            }
            let mut stack = vec![Vec::new()];
            while let Some(prefix) = stack.pop() {
                if prefix.len() == arity {
                    if !m.func_interp[f.0].contains_key(&prefix) {
                        return Err(Violation::FunctionNotTotal {
                            function: name.to_string(),
                            args: prefix
                                .iter()
                                .map(|v: &Value| v.to_string())
                                .collect::<Vec<_>>()
                                .join(","),
                        });
                    }
                    continue;
                }
                for v in &universe {
                    let mut next = prefix.clone();
                    next.push(v.clone());
                    stack.push(next);
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::syntax::{parse_term, Dialect};

    #[test]
    fn fibonacci_mod_5_is_valid() {
        let m = gallery::fib_mod(5);
        assert_eq!(m.num_states(), 25);
        assert_eq!(m.validate(), Ok(()));
    }

    #[test]
    fn duplicate_rows_are_rejected() {
        let voc = Vocabulary::of_variables(&["x"]).unwrap();
        let m = DynamicalModel::new(
            voc,
            vec!["a".into(), "b".into()],
            vec![0, 1],
            vec![vec![Value::Int(0)], vec![Value::Int(0)]],
            vec![],
            vec![],
            TruncationInfo::new(),
        );
        assert!(matches!(
            m.validate(),
            Err(Violation::StateDetermination { .. })
        ));
    }

    #[test]
    fn partial_transition_is_rejected() {
        let voc = Vocabulary::of_variables(&["x"]).unwrap();
        let m = DynamicalModel::new(
            voc,
            vec!["a".into(), "b".into()],
            vec![0],
            vec![vec![Value::Int(0)], vec![Value::Int(1)]],
            vec![],
            vec![],
            TruncationInfo::new(),
        );
        assert!(matches!(m.validate(), Err(Violation::TotalFunction { .. })));
    }

    #[test]
    fn term_values_on_fibonacci() {
        let m = gallery::fib_mod(5);
        let voc = m.vocabulary().clone();
        let s = m.lookup_state("1,1").unwrap();
        let t = |src: &str| parse_term(src, &voc, Dialect::TimedFuncId).unwrap();
        assert_eq!(m.term_value(s, &t("Ox")).unwrap(), Value::Int(1));
        assert_eq!(m.term_value(s, &t("Oy")).unwrap(), Value::Int(2));
        assert_eq!(m.term_value(s, &t("x")).unwrap(), Value::Int(1));
        // addition table
        let u = m.lookup_state("2,3").unwrap();
        assert_eq!(m.term_value(u, &t("S(x,y)")).unwrap(), Value::Int(0));
    }

    #[test]
    fn agreement_on_fibonacci() {
        let m = gallery::fib_mod(5);
        let voc = m.vocabulary().clone();
        let x = TermSet::singleton(parse_term("x", &voc, Dialect::Core).unwrap());
        let xy = crate::syntax::parse_term_set("x,y", &voc, Dialect::Core).unwrap();
        let a = m.lookup_state("1,2").unwrap();
        let b = m.lookup_state("1,4").unwrap();
        assert!(m.agree(a, b, &x).unwrap());
        assert!(!m.agree(a, b, &xy).unwrap());
        assert!(m.agree(a, a, &xy).unwrap());
        assert!(m.agree(a, b, &TermSet::empty()).unwrap());
    }
}
