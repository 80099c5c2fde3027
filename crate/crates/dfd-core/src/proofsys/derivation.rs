//! Line-by-line checking of Hilbert-style derivations. Propositional
//! reasoning is admitted wholesale through a tautology justification
//! verified by truth tables over the maximal non-Boolean subformulas.

use super::schemas::{instantiate, lookup_schema, Bindings, SlotKind, SlotValue};
use crate::syntax::{
    parse_formula, parse_term, parse_term_set, Dialect, Formula, TermSet, Vocabulary,
};
use std::collections::HashMap;

/// How a derivation line is justified. Line references are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Justification {
    Axiom { schema: String, bindings: Bindings },
    ModusPonens { implication: usize, antecedent: usize },
    DepNecessitation { from: usize, set: TermSet },
    NextNecessitation { from: usize },
    Tautology,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Derivation {
    pub lines: Vec<Line>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct CheckError {
    /// 1-based line number.
    pub line: usize,
    pub reason: String,
}

const MAX_TAUTOLOGY_ATOMS: usize = 20;

/// Is the formula a tautology of its Boolean skeleton? The atoms are
/// the maximal subformulas that are not negations or conjunctions.
pub fn is_propositional_tautology(f: &Formula) -> Result<bool, String> {
    #[derive(Debug)]
    enum Skeleton {
        Atom(usize),
        Not(Box<Skeleton>),
        And(Box<Skeleton>, Box<Skeleton>),
    }
    fn build(f: &Formula, atoms: &mut HashMap<Formula, usize>) -> Skeleton {
        match f {
            Formula::Not(g) => Skeleton::Not(Box::new(build(g, atoms))),
            Formula::And(a, b) => {
                Skeleton::And(Box::new(build(a, atoms)), Box::new(build(b, atoms)))
            }
            other => {
                let next = atoms.len();
                let id = *atoms.entry(other.clone()).or_insert(next);
                Skeleton::Atom(id)
            }
        }
    }
    fn eval(s: &Skeleton, assignment: u32) -> bool {
        match s {
            Skeleton::Atom(i) => assignment & (1 << i) != 0,
            Skeleton::Not(g) => !eval(g, assignment),
            Skeleton::And(a, b) => eval(a, assignment) && eval(b, assignment),
        }
    }
    let mut atoms = HashMap::new();
    let skeleton = build(f, &mut atoms);
    if atoms.len() > MAX_TAUTOLOGY_ATOMS {
        return Err(format!(
            "{} distinct atoms exceed the tautology checker's limit of {MAX_TAUTOLOGY_ATOMS}",
            atoms.len()
        ));
    }
    for assignment in 0..(1u32 << atoms.len()) {
        if !eval(&skeleton, assignment) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Does the next-necessitation rule belong to the calculus? It is
/// derivable but not primitive in the full system.
fn has_next_necessitation(system: Dialect) -> bool {
    !matches!(system, Dialect::Core)
}

/// Verifies every line of a derivation against the chosen calculus.
pub fn check_derivation(
    d: &Derivation,
    system: Dialect,
    voc: &Vocabulary,
) -> Result<(), CheckError> {
    for (index, line) in d.lines.iter().enumerate() {
        let number = index + 1;
        let fail = |reason: String| CheckError {
            line: number,
            reason,
        };
        line.formula
            .check_dialect(voc, system)
            .map_err(|e| fail(format!("formula outside the {system} language: {e}")))?;
        let earlier = |reference: usize| -> Result<&Formula, CheckError> {
            if reference == 0 || reference > index {
                return Err(fail(format!(
                    "reference to line {reference} is not an earlier line"
                )));
            }
            Ok(&d.lines[reference - 1].formula)
        };
        match &line.justification {
            Justification::Axiom { schema, bindings } => {
                let schema_def = lookup_schema(schema)
                    .ok_or_else(|| fail(format!("unknown axiom schema `{schema}`")))?;
                let expected = instantiate(&schema_def, bindings, voc, system)
                    .map_err(|e| fail(e.to_string()))?;
                if expected != line.formula {
                    return Err(fail(format!(
                        "formula does not match the `{schema}` instance from its bindings"
                    )));
                }
            }
            Justification::ModusPonens {
                implication,
                antecedent,
            } => {
                let implication_formula = earlier(*implication)?;
                let antecedent_formula = earlier(*antecedent)?;
                // an implication `a -> b` is stored as `!(a & !b)`
                let (a, b) = match implication_formula {
                    Formula::Not(inner) => match &**inner {
                        Formula::And(a, rhs) => match &**rhs {
                            Formula::Not(b) => (a, b),
                            _ => {
                                return Err(fail(
                                    "referenced line is not an implication".into(),
                                ))
                            }
                        },
                        _ => return Err(fail("referenced line is not an implication".into())),
                    },
                    _ => return Err(fail("referenced line is not an implication".into())),
                };
                if **a != *antecedent_formula {
                    return Err(fail(
                        "antecedent does not match the implication's left side".into(),
                    ));
                }
                if **b != line.formula {
                    return Err(fail(
                        "formula does not match the implication's right side".into(),
                    ));
                }
            }
            Justification::DepNecessitation { from, set } => {
                let premise = earlier(*from)?;
                if set.is_empty() && !system.allows_empty_dep_sets() {
                    return Err(fail(
                        "dependence necessitation needs a non-empty set here".into(),
                    ));
                }
                let expected = Formula::dep_mod(set.clone(), premise.clone());
                if expected != line.formula {
                    return Err(fail(
                        "formula is not the dependence modality over the premise".into(),
                    ));
                }
            }
            Justification::NextNecessitation { from } => {
                if !has_next_necessitation(system) {
                    return Err(fail(format!(
                        "next-step necessitation is not a primitive rule of {system}"
                    )));
                }
                let premise = earlier(*from)?;
                let expected = premise.clone().next();
                if expected != line.formula {
                    return Err(fail("formula is not the next-step of the premise".into()));
                }
            }
            Justification::Tautology => {
                match is_propositional_tautology(&line.formula) {
                    Ok(true) => {}
                    Ok(false) => {
                        return Err(fail("formula is not a propositional tautology".into()))
                    }
                    Err(reason) => return Err(fail(reason)),
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum DerivationIoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {reason}")]
    Bad { line: usize, reason: String },
}

/// Parses the derivation file format: a JSON list of lines
/// `{"formula": "...", "by": {"rule": ..., ...}}`.
pub fn derivation_from_json(
    text: &str,
    voc: &Vocabulary,
    dialect: Dialect,
) -> Result<Derivation, DerivationIoError> {
    let raw: Vec<serde_json::Value> = serde_json::from_str(text)?;
    let mut lines = Vec::with_capacity(raw.len());
    for (index, entry) in raw.iter().enumerate() {
        let number = index + 1;
        let bad = |reason: String| DerivationIoError::Bad {
            line: number,
            reason,
        };
        let obj = entry
            .as_object()
            .ok_or_else(|| bad("expected an object".into()))?;
        let formula_text = obj
            .get("formula")
            .and_then(|v| v.as_str())
            .ok_or_else(|| bad("missing `formula` string".into()))?;
        let formula =
            parse_formula(formula_text, voc, dialect).map_err(|e| bad(e.to_string()))?;
        let by = obj
            .get("by")
            .and_then(|v| v.as_object())
            .ok_or_else(|| bad("missing `by` object".into()))?;
        let rule = by
            .get("rule")
            .and_then(|v| v.as_str())
            .ok_or_else(|| bad("missing `rule`".into()))?;
        let line_ref = |key: &str| -> Result<usize, DerivationIoError> {
            by.get(key)
                .and_then(|v| v.as_u64())
                .map(|n| n as usize)
                .ok_or_else(|| bad(format!("missing line reference `{key}`")))
        };
        let justification = match rule {
            "axiom" => {
                let schema = by
                    .get("schema")
                    .and_then(|v| v.as_str())
                    .ok_or_else(|| bad("missing `schema`".into()))?
                    .to_string();
                let schema_def = lookup_schema(&schema)
                    .ok_or_else(|| bad(format!("unknown axiom schema `{schema}`")))?;
                let mut bindings: Bindings = Bindings::new();
                for (slot, kind) in schema_def.slots {
                    let value = by
                        .get(*slot)
                        .ok_or_else(|| bad(format!("missing binding `{slot}`")))?;
                    let parsed = match kind {
                        SlotKind::Formula | SlotKind::Atom => {
                            let text = value
                                .as_str()
                                .ok_or_else(|| bad(format!("binding `{slot}` must be a string")))?;
                            SlotValue::Formula(
                                parse_formula(text, voc, dialect)
                                    .map_err(|e| bad(e.to_string()))?,
                            )
                        }
                        SlotKind::Term | SlotKind::Variable => {
                            let text = value
                                .as_str()
                                .ok_or_else(|| bad(format!("binding `{slot}` must be a string")))?;
                            SlotValue::Term(
                                parse_term(text, voc, dialect).map_err(|e| bad(e.to_string()))?,
                            )
                        }
                        SlotKind::TermSet | SlotKind::NonEmptyTermSet => {
                            let items = value
                                .as_array()
                                .ok_or_else(|| bad(format!("binding `{slot}` must be a list")))?;
                            let mut terms = Vec::with_capacity(items.len());
                            for item in items {
                                let text = item.as_str().ok_or_else(|| {
                                    bad(format!("binding `{slot}` must list term strings"))
                                })?;
                                terms.push(
                                    parse_term(text, voc, dialect)
                                        .map_err(|e| bad(e.to_string()))?,
                                );
                            }
                            SlotValue::TermSet(TermSet::new(terms))
                        }
                        SlotKind::Func => {
                            let text = value
                                .as_str()
                                .ok_or_else(|| bad(format!("binding `{slot}` must be a string")))?;
                            let (f, _) = voc
                                .lookup_func(text)
                                .ok_or_else(|| bad(format!("unknown function `{text}`")))?;
                            SlotValue::Func(f)
                        }
                        SlotKind::Nat => {
                            let n = value
                                .as_u64()
                                .ok_or_else(|| bad(format!("binding `{slot}` must be a number")))?;
                            SlotValue::Nat(n as usize)
                        }
                    };
                    bindings.insert(slot, parsed);
                }
                Justification::Axiom { schema, bindings }
            }
            "mp" => Justification::ModusPonens {
                implication: line_ref("implication")?,
                antecedent: line_ref("antecedent")?,
            },
            "dnec" => {
                let items = by
                    .get("set")
                    .and_then(|v| v.as_array())
                    .ok_or_else(|| bad("missing `set` list".into()))?;
                let mut terms = Vec::with_capacity(items.len());
                for item in items {
                    let text = item
                        .as_str()
                        .ok_or_else(|| bad("`set` must list term strings".into()))?;
                    terms.push(parse_term(text, voc, dialect).map_err(|e| bad(e.to_string()))?);
                }
                Justification::DepNecessitation {
                    from: line_ref("from")?,
                    set: TermSet::new(terms),
                }
            }
            "onec" => Justification::NextNecessitation {
                from: line_ref("from")?,
            },
            "taut" => Justification::Tautology,
            other => return Err(bad(format!("unknown rule `{other}`"))),
        };
        lines.push(Line {
            formula,
            justification,
        });
    }
    Ok(Derivation { lines })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn voc() -> Vocabulary {
        Vocabulary::new(
            vec!["x".into(), "y".into()],
            BTreeMap::from([("P".into(), 1)]),
            BTreeMap::new(),
        )
        .unwrap()
    }

    fn p(src: &str, voc: &Vocabulary) -> Formula {
        parse_formula(src, voc, Dialect::Core).unwrap()
    }

    #[test]
    fn necessitation_rules() {
        let voc = voc();
        let taut = p("P(x) -> P(x)", &voc);
        let d = Derivation {
            lines: vec![
                Line {
                    formula: taut.clone(),
                    justification: Justification::Tautology,
                },
                Line {
                    formula: Formula::dep_mod(
                        TermSet::singleton(crate::syntax::Term::var(0)),
                        taut.clone(),
                    ),
                    justification: Justification::DepNecessitation {
                        from: 1,
                        set: TermSet::singleton(crate::syntax::Term::var(0)),
                    },
                },
            ],
        };
        check_derivation(&d, Dialect::Core, &voc).unwrap();

        let with_onec = Derivation {
            lines: vec![
                Line {
                    formula: taut.clone(),
                    justification: Justification::Tautology,
                },
                Line {
                    formula: taut.clone().next(),
                    justification: Justification::NextNecessitation { from: 1 },
                },
            ],
        };
        // next-step necessitation is primitive only outside the full system
        let err = check_derivation(&with_onec, Dialect::Core, &voc).unwrap_err();
        assert_eq!(err.line, 2);
        check_derivation(&with_onec, Dialect::NonEmpty, &voc).unwrap();
        check_derivation(&with_onec, Dialect::Timed, &voc).unwrap();
    }

    #[test]
    fn modus_ponens_shape() {
        let voc = voc();
        let d = Derivation {
            lines: vec![
                Line {
                    formula: p("P(x) -> (P(x) -> P(x))", &voc),
                    justification: Justification::Tautology,
                },
                Line {
                    formula: p("P(x)", &voc),
                    justification: Justification::Tautology,
                },
            ],
        };
        // P(x) alone is not a tautology
        let err = check_derivation(&d, Dialect::Core, &voc).unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn tautology_atoms_are_maximal_non_boolean_subformulas() {
        let voc = voc();
        assert!(is_propositional_tautology(&p("D[x] P(x) | !D[x] P(x)", &voc)).unwrap());
        // O distributes nothing propositionally: O(p) and p are distinct atoms
        assert!(!is_propositional_tautology(&p("O P(x) -> P(x)", &voc)).unwrap());
        assert!(!is_propositional_tautology(&p("dep[x] y", &voc)).unwrap());
    }

    #[test]
    fn prefixes_of_accepted_derivations_are_accepted() {
        let voc = voc();
        let taut = p("P(x) -> P(x)", &voc);
        let lines = vec![
            Line {
                formula: taut.clone(),
                justification: Justification::Tautology,
            },
            Line {
                formula: taut.clone().next(),
                justification: Justification::NextNecessitation { from: 1 },
            },
            Line {
                formula: Formula::dep_mod(
                    TermSet::singleton(crate::syntax::Term::var(1)),
                    taut.clone().next(),
                ),
                justification: Justification::DepNecessitation {
                    from: 2,
                    set: TermSet::singleton(crate::syntax::Term::var(1)),
                },
            },
        ];
        for cut in 0..=lines.len() {
            let prefix = Derivation {
                lines: lines[..cut].to_vec(),
            };
            check_derivation(&prefix, Dialect::Timed, &voc).unwrap();
        }
    }
}
