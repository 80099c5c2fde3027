//! Axiom schemas of the four calculi, plus the derived principles used
//! by the soundness sweep. Set-valued dependence atoms `dep[X] Y`
//! abbreviate the pointwise conjunction; the expansion happens here at
//! instantiation time.

use crate::syntax::{Dialect, Formula, FuncId, Term, TermSet, VarId, Vocabulary};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstantiateError {
    #[error("unknown schema `{0}`")]
    UnknownSchema(String),
    #[error("schema `{schema}` is not part of the {system} calculus")]
    NotInSystem { schema: String, system: Dialect },
    #[error("slot `{0}` is not bound")]
    UnboundSlot(&'static str),
    #[error("slot `{slot}` expects {expected}")]
    WrongSlotKind {
        slot: &'static str,
        expected: &'static str,
    },
    #[error("side condition failed: {0}")]
    SideCondition(String),
    #[error("instance violates the {0} dialect")]
    Dialect(Dialect),
    #[error("occurrence index {index} out of range; the term occurs {count} times")]
    OccurrenceOutOfRange { index: usize, count: usize },
}

/// A value filling one metavariable slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotValue {
    Formula(Formula),
    Term(Term),
    TermSet(TermSet),
    Func(FuncId),
    Nat(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    Formula,
    Term,
    /// A bare variable term.
    Variable,
    TermSet,
    /// A non-empty term set (set-valued right-hand sides).
    NonEmptyTermSet,
    /// A predicate atom.
    Atom,
    Func,
    Nat,
}

pub type Bindings = BTreeMap<&'static str, SlotValue>;

#[derive(Clone)]
pub struct AxiomSchema {
    pub name: &'static str,
    pub slots: &'static [(&'static str, SlotKind)],
    pub dialects: &'static [Dialect],
    build: fn(&Bindings, &Vocabulary) -> Result<Formula, InstantiateError>,
}

impl std::fmt::Debug for AxiomSchema {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AxiomSchema")
            .field("name", &self.name)
            .field("slots", &self.slots)
            .field("dialects", &self.dialects)
            .finish()
    }
}

fn get_formula(b: &Bindings, slot: &'static str) -> Result<Formula, InstantiateError> {
    match b.get(slot) {
        Some(SlotValue::Formula(f)) => Ok(f.clone()),
        Some(_) => Err(InstantiateError::WrongSlotKind {
            slot,
            expected: "a formula",
        }),
        None => Err(InstantiateError::UnboundSlot(slot)),
    }
}

fn get_term(b: &Bindings, slot: &'static str) -> Result<Term, InstantiateError> {
    match b.get(slot) {
        Some(SlotValue::Term(t)) => Ok(t.clone()),
        Some(_) => Err(InstantiateError::WrongSlotKind {
            slot,
            expected: "a term",
        }),
        None => Err(InstantiateError::UnboundSlot(slot)),
    }
}

fn get_var(b: &Bindings, slot: &'static str) -> Result<Term, InstantiateError> {
    let t = get_term(b, slot)?;
    match t {
        Term::Var(_) => Ok(t),
        _ => Err(InstantiateError::WrongSlotKind {
            slot,
            expected: "a basic variable",
        }),
    }
}

fn get_set(b: &Bindings, slot: &'static str) -> Result<TermSet, InstantiateError> {
    match b.get(slot) {
        Some(SlotValue::TermSet(x)) => Ok(x.clone()),
        Some(_) => Err(InstantiateError::WrongSlotKind {
            slot,
            expected: "a term set",
        }),
        None => Err(InstantiateError::UnboundSlot(slot)),
    }
}

fn get_nonempty_set(b: &Bindings, slot: &'static str) -> Result<TermSet, InstantiateError> {
    let x = get_set(b, slot)?;
    if x.is_empty() {
        return Err(InstantiateError::SideCondition(format!(
            "slot `{slot}` needs a non-empty set"
        )));
    }
    Ok(x)
}

fn get_atom(b: &Bindings, slot: &'static str) -> Result<(crate::syntax::PredId, Vec<Term>), InstantiateError> {
    match get_formula(b, slot)? {
        Formula::Pred(p, args) => Ok((p, args)),
        _ => Err(InstantiateError::WrongSlotKind {
            slot,
            expected: "a predicate atom",
        }),
    }
}

fn get_func(b: &Bindings, slot: &'static str) -> Result<FuncId, InstantiateError> {
    match b.get(slot) {
        Some(SlotValue::Func(f)) => Ok(*f),
        Some(_) => Err(InstantiateError::WrongSlotKind {
            slot,
            expected: "a function symbol",
        }),
        None => Err(InstantiateError::UnboundSlot(slot)),
    }
}

fn get_nat(b: &Bindings, slot: &'static str) -> Result<usize, InstantiateError> {
    match b.get(slot) {
        Some(SlotValue::Nat(n)) => Ok(*n),
        Some(_) => Err(InstantiateError::WrongSlotKind {
            slot,
            expected: "a number",
        }),
        None => Err(InstantiateError::UnboundSlot(slot)),
    }
}

/// `dep[X] Y` as the conjunction of pointwise atoms; `Y` non-empty.
fn dep_set_formula(x: &TermSet, y: &TermSet) -> Result<Formula, InstantiateError> {
    Formula::dep_set(x, y).ok_or_else(|| {
        InstantiateError::SideCondition("set-valued dependence needs a non-empty target".into())
    })
}

/// Occurrences of `target` as a subterm anywhere in the formula, in a
/// fixed left-to-right traversal.
pub fn count_term_occurrences(f: &Formula, target: &Term) -> usize {
    fn in_term(t: &Term, target: &Term) -> usize {
        let here = usize::from(t == target);
        here + match t {
            Term::Var(_) => 0,
            Term::Next(inner) => in_term(inner, target),
            Term::App(_, args) => args.iter().map(|a| in_term(a, target)).sum(),
        }
    }
    fn go(f: &Formula, target: &Term) -> usize {
        match f {
            Formula::Pred(_, args) => args.iter().map(|a| in_term(a, target)).sum(),
            Formula::Ident(a, b) => in_term(a, target) + in_term(b, target),
            Formula::Not(g) | Formula::Next(g) => go(g, target),
            Formula::And(a, b) => go(a, target) + go(b, target),
            Formula::DepMod(x, g) => {
                x.iter().map(|t| in_term(t, target)).sum::<usize>() + go(g, target)
            }
            Formula::DepAtom(x, y) => {
                x.iter().map(|t| in_term(t, target)).sum::<usize>() + in_term(y, target)
            }
        }
    }
    go(f, target)
}

/// Replaces the `index`-th occurrence (0-based) of `target` by
/// `replacement`.
pub fn replace_term_occurrence(
    f: &Formula,
    target: &Term,
    replacement: &Term,
    index: usize,
) -> Result<Formula, InstantiateError> {
    fn in_term(t: &Term, target: &Term, replacement: &Term, counter: &mut i64) -> Term {
        if t == target {
            // a term never properly contains itself, so no recursion here
            let hit = *counter == 0;
            *counter -= 1;
            if hit {
                return replacement.clone();
            }
            return t.clone();
        }
        match t {
            Term::Var(v) => Term::Var(*v),
            Term::Next(inner) => in_term(inner, target, replacement, counter).next(),
            Term::App(f, args) => Term::App(
                *f,
                args.iter()
                    .map(|a| in_term(a, target, replacement, counter))
                    .collect(),
            ),
        }
    }
    fn go(f: &Formula, target: &Term, replacement: &Term, counter: &mut i64) -> Formula {
        match f {
            Formula::Pred(p, args) => Formula::Pred(
                *p,
                args.iter()
                    .map(|a| in_term(a, target, replacement, counter))
                    .collect(),
            ),
            Formula::Ident(a, b) => Formula::Ident(
                in_term(a, target, replacement, counter),
                in_term(b, target, replacement, counter),
            ),
            Formula::Not(g) => go(g, target, replacement, counter).not(),
            Formula::And(a, b) => {
                let left = go(a, target, replacement, counter);
                let right = go(b, target, replacement, counter);
                left.and(right)
            }
            Formula::Next(g) => go(g, target, replacement, counter).next(),
            Formula::DepMod(x, g) => {
                let set: TermSet = x
                    .iter()
                    .map(|t| in_term(t, target, replacement, counter))
                    .collect();
                Formula::dep_mod(set, go(g, target, replacement, counter))
            }
            Formula::DepAtom(x, y) => {
                let set: TermSet = x
                    .iter()
                    .map(|t| in_term(t, target, replacement, counter))
                    .collect();
                Formula::DepAtom(set, in_term(y, target, replacement, counter))
            }
        }
    }
    let count = count_term_occurrences(f, target);
    if index >= count {
        return Err(InstantiateError::OccurrenceOutOfRange { index, count });
    }
    let mut counter = index as i64;
    Ok(go(f, target, replacement, &mut counter))
}

const ALL: &[Dialect] = &Dialect::ALL;
const UNTIMED: &[Dialect] = &[Dialect::Core, Dialect::NonEmpty];
const TIMED: &[Dialect] = &[Dialect::Timed, Dialect::TimedFuncId];
const CORE_ONLY: &[Dialect] = &[Dialect::Core];
const FUNC_ONLY: &[Dialect] = &[Dialect::TimedFuncId];

/// The primitive axiom schemas; each appears exactly once.
pub fn schemas() -> Vec<AxiomSchema> {
    vec![
        AxiomSchema {
            name: "O-Distribution",
            slots: &[("phi", SlotKind::Formula), ("psi", SlotKind::Formula)],
            dialects: ALL,
            build: |b, _| {
                let phi = get_formula(b, "phi")?;
                let psi = get_formula(b, "psi")?;
                Ok(phi
                    .clone()
                    .implies(psi.clone())
                    .next()
                    .implies(phi.next().implies(psi.next())))
            },
        },
        AxiomSchema {
            name: "Functionality",
            slots: &[("phi", SlotKind::Formula)],
            dialects: ALL,
            build: |b, _| {
                let phi = get_formula(b, "phi")?;
                Ok(phi.clone().not().next().iff(phi.next().not()))
            },
        },
        AxiomSchema {
            name: "D-Distribution",
            slots: &[
                ("X", SlotKind::TermSet),
                ("phi", SlotKind::Formula),
                ("psi", SlotKind::Formula),
            ],
            dialects: ALL,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let phi = get_formula(b, "phi")?;
                let psi = get_formula(b, "psi")?;
                Ok(Formula::dep_mod(x.clone(), phi.clone().implies(psi.clone()))
                    .implies(
                        Formula::dep_mod(x.clone(), phi).implies(Formula::dep_mod(x, psi)),
                    ))
            },
        },
        AxiomSchema {
            name: "D-Introduction-1",
            slots: &[("atom", SlotKind::Atom)],
            dialects: ALL,
            build: |b, _| {
                let (p, args) = get_atom(b, "atom")?;
                let set: TermSet = args.iter().cloned().collect();
                let atom = Formula::Pred(p, args);
                Ok(atom.clone().implies(Formula::dep_mod(set, atom)))
            },
        },
        AxiomSchema {
            name: "D-Introduction-2",
            slots: &[("X", SlotKind::TermSet), ("y", SlotKind::Term)],
            dialects: ALL,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let y = get_term(b, "y")?;
                let atom = Formula::DepAtom(x.clone(), y);
                Ok(atom.clone().implies(Formula::dep_mod(x, atom)))
            },
        },
        AxiomSchema {
            name: "D-T",
            slots: &[("X", SlotKind::TermSet), ("phi", SlotKind::Formula)],
            dialects: ALL,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let phi = get_formula(b, "phi")?;
                Ok(Formula::dep_mod(x, phi.clone()).implies(phi))
            },
        },
        AxiomSchema {
            name: "D-4",
            slots: &[("X", SlotKind::TermSet), ("phi", SlotKind::Formula)],
            dialects: ALL,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let phi = get_formula(b, "phi")?;
                Ok(Formula::dep_mod(x.clone(), phi.clone())
                    .implies(Formula::dep_mod(x.clone(), Formula::dep_mod(x, phi))))
            },
        },
        AxiomSchema {
            name: "D-5",
            slots: &[("X", SlotKind::TermSet), ("phi", SlotKind::Formula)],
            dialects: ALL,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let phi = get_formula(b, "phi")?;
                let boxed = Formula::dep_mod(x.clone(), phi);
                Ok(boxed
                    .clone()
                    .not()
                    .implies(Formula::dep_mod(x, boxed.not())))
            },
        },
        AxiomSchema {
            name: "Dep-Ref",
            slots: &[("X", SlotKind::TermSet), ("x", SlotKind::Term)],
            dialects: ALL,
            build: |b, _| {
                let set = get_set(b, "X")?;
                let x = get_term(b, "x")?;
                if !set.contains(&x) {
                    return Err(InstantiateError::SideCondition(
                        "the target must be a member of the set".into(),
                    ));
                }
                Ok(Formula::DepAtom(set, x))
            },
        },
        AxiomSchema {
            name: "Dep-Trans",
            slots: &[
                ("X", SlotKind::TermSet),
                ("Y", SlotKind::NonEmptyTermSet),
                ("Z", SlotKind::NonEmptyTermSet),
            ],
            dialects: ALL,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let y = get_nonempty_set(b, "Y")?;
                let z = get_nonempty_set(b, "Z")?;
                let lhs = dep_set_formula(&x, &y)?.and(dep_set_formula(&y, &z)?);
                Ok(lhs.implies(dep_set_formula(&x, &z)?))
            },
        },
        AxiomSchema {
            name: "Determinism",
            slots: &[("v", SlotKind::Variable)],
            dialects: ALL,
            build: |b, voc| {
                let v = get_var(b, "v")?;
                Ok(Formula::DepAtom(voc.all_variables(), v.next()))
            },
        },
        AxiomSchema {
            name: "Transfer",
            slots: &[
                ("X", SlotKind::TermSet),
                ("Y", SlotKind::NonEmptyTermSet),
                ("phi", SlotKind::Formula),
            ],
            dialects: ALL,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let y = get_nonempty_set(b, "Y")?;
                let phi = get_formula(b, "phi")?;
                let lhs = dep_set_formula(&x, &y)?.and(Formula::dep_mod(y, phi.clone()));
                Ok(lhs.implies(Formula::dep_mod(x, phi)))
            },
        },
        AxiomSchema {
            name: "D-O",
            slots: &[("phi", SlotKind::Formula)],
            dialects: CORE_ONLY,
            build: |b, _| {
                let phi = get_formula(b, "phi")?;
                Ok(Formula::dep_mod(TermSet::empty(), phi.clone()).implies(phi.next()))
            },
        },
        AxiomSchema {
            name: "Atomic-Reduction",
            slots: &[("atom", SlotKind::Atom)],
            dialects: ALL,
            build: |b, _| {
                let (p, args) = get_atom(b, "atom")?;
                let shifted: Vec<Term> = args.iter().map(|t| t.clone().next()).collect();
                Ok(Formula::Pred(p, args)
                    .next()
                    .iff(Formula::Pred(p, shifted)))
            },
        },
        AxiomSchema {
            name: "Next-Time-1",
            slots: &[("X", SlotKind::TermSet), ("phi", SlotKind::Formula)],
            dialects: UNTIMED,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let phi = get_formula(b, "phi")?;
                Ok(Formula::dep_mod(x.clone(), phi.clone())
                    .next()
                    .implies(Formula::dep_mod(x.next_n(1), phi.next())))
            },
        },
        AxiomSchema {
            name: "Next-Time-2",
            slots: &[("X", SlotKind::TermSet), ("y", SlotKind::Term)],
            dialects: UNTIMED,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let y = get_term(b, "y")?;
                Ok(Formula::DepAtom(x.clone(), y.clone())
                    .next()
                    .implies(Formula::DepAtom(x.next_n(1), y.next())))
            },
        },
        AxiomSchema {
            name: "t-Next-Time-1",
            slots: &[("X", SlotKind::TermSet), ("phi", SlotKind::Formula)],
            dialects: TIMED,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let phi = get_formula(b, "phi")?;
                Ok(Formula::dep_mod(x.clone(), phi.clone())
                    .next()
                    .iff(Formula::dep_mod(x.next_n(1), phi.next())))
            },
        },
        AxiomSchema {
            name: "t-Next-Time-2",
            slots: &[("X", SlotKind::TermSet), ("y", SlotKind::Term)],
            dialects: TIMED,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let y = get_term(b, "y")?;
                Ok(Formula::DepAtom(x.clone(), y.clone())
                    .next()
                    .iff(Formula::DepAtom(x.next_n(1), y.next())))
            },
        },
        AxiomSchema {
            name: "Function-Dependence",
            slots: &[("f", SlotKind::Func), ("args", SlotKind::NonEmptyTermSet)],
            dialects: FUNC_ONLY,
            build: |b, voc| {
                let f = get_func(b, "f")?;
                let args = match b.get("args") {
                    Some(SlotValue::TermSet(set)) => set.terms().to_vec(),
                    Some(_) => {
                        return Err(InstantiateError::WrongSlotKind {
                            slot: "args",
                            expected: "a term set",
                        })
                    }
                    None => return Err(InstantiateError::UnboundSlot("args")),
                };
                if args.len() != voc.func_arity(f) {
                    return Err(InstantiateError::SideCondition(format!(
                        "`{}` has arity {}",
                        voc.func_name(f),
                        voc.func_arity(f)
                    )));
                }
                let set: TermSet = args.iter().cloned().collect();
                Ok(Formula::DepAtom(set, Term::App(f, args)))
            },
        },
        AxiomSchema {
            name: "Identity-Reflexivity",
            slots: &[("x", SlotKind::Term)],
            dialects: FUNC_ONLY,
            build: |b, _| {
                let x = get_term(b, "x")?;
                Ok(Formula::Ident(x.clone(), x))
            },
        },
        AxiomSchema {
            name: "Identity-Substitution",
            slots: &[
                ("x", SlotKind::Term),
                ("y", SlotKind::Term),
                ("phi", SlotKind::Formula),
                ("occurrence", SlotKind::Nat),
            ],
            dialects: FUNC_ONLY,
            build: |b, _| {
                let x = get_term(b, "x")?;
                let y = get_term(b, "y")?;
                let phi = get_formula(b, "phi")?;
                let index = get_nat(b, "occurrence")?;
                let psi = replace_term_occurrence(&phi, &x, &y, index)?;
                Ok(Formula::Ident(x, y).implies(phi.implies(psi)))
            },
        },
        AxiomSchema {
            name: "Term-Reduction",
            slots: &[("f", SlotKind::Func), ("args", SlotKind::NonEmptyTermSet)],
            dialects: FUNC_ONLY,
            build: |b, voc| {
                let f = get_func(b, "f")?;
                let args = match b.get("args") {
                    Some(SlotValue::TermSet(set)) => set.terms().to_vec(),
                    Some(_) => {
                        return Err(InstantiateError::WrongSlotKind {
                            slot: "args",
                            expected: "a term set",
                        })
                    }
                    None => return Err(InstantiateError::UnboundSlot("args")),
                };
                if args.len() != voc.func_arity(f) {
                    return Err(InstantiateError::SideCondition(format!(
                        "`{}` has arity {}",
                        voc.func_name(f),
                        voc.func_arity(f)
                    )));
                }
                let shifted: Vec<Term> = args.iter().map(|t| t.clone().next()).collect();
                Ok(Formula::Ident(
                    Term::App(f, args).next(),
                    Term::App(f, shifted),
                ))
            },
        },
    ]
}

/// Provable principles tested by the soundness sweep; they justify no
/// derivation lines.
pub fn derived_principles() -> Vec<AxiomSchema> {
    vec![
        AxiomSchema {
            name: "Dep-Additivity",
            slots: &[
                ("X", SlotKind::TermSet),
                ("Y", SlotKind::NonEmptyTermSet),
                ("Z", SlotKind::TermSet),
                ("U", SlotKind::NonEmptyTermSet),
            ],
            dialects: ALL,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let y = get_nonempty_set(b, "Y")?;
                let z = get_set(b, "Z")?;
                let u = get_nonempty_set(b, "U")?;
                let lhs = dep_set_formula(&x, &y)?.and(dep_set_formula(&z, &u)?);
                Ok(lhs.implies(dep_set_formula(&x.union(&z), &y.union(&u))?))
            },
        },
        AxiomSchema {
            name: "Dep-Monotonicity",
            slots: &[
                ("X", SlotKind::TermSet),
                ("Z", SlotKind::TermSet),
                ("y", SlotKind::Term),
            ],
            dialects: ALL,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let z = get_set(b, "Z")?;
                let y = get_term(b, "y")?;
                if !x.is_subset_of(&z) {
                    return Err(InstantiateError::SideCondition(
                        "the first set must be included in the second".into(),
                    ));
                }
                Ok(Formula::DepAtom(x, y.clone()).implies(Formula::DepAtom(z, y)))
            },
        },
        AxiomSchema {
            name: "Quantifier-Monotonicity",
            slots: &[
                ("X", SlotKind::TermSet),
                ("Y", SlotKind::TermSet),
                ("phi", SlotKind::Formula),
            ],
            dialects: ALL,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let y = get_set(b, "Y")?;
                let phi = get_formula(b, "phi")?;
                if !x.is_subset_of(&y) {
                    return Err(InstantiateError::SideCondition(
                        "the first set must be included in the second".into(),
                    ));
                }
                Ok(Formula::dep_mod(x, phi.clone()).implies(Formula::dep_mod(y, phi)))
            },
        },
        AxiomSchema {
            name: "Dyn-Transfer",
            slots: &[
                ("X", SlotKind::TermSet),
                ("Y", SlotKind::NonEmptyTermSet),
                ("phi", SlotKind::Formula),
                ("n", SlotKind::Nat),
            ],
            dialects: ALL,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let y = get_nonempty_set(b, "Y")?;
                let phi = get_formula(b, "phi")?;
                let n = get_nat(b, "n")?;
                let lhs = dep_set_formula(&x, &y.next_n(n))?
                    .and(Formula::dep_mod(y, phi.clone()).next_n(n));
                Ok(lhs.implies(Formula::dep_mod(x, phi.next_n(n))))
            },
        },
        AxiomSchema {
            name: "Dyn-Trans",
            slots: &[
                ("X", SlotKind::TermSet),
                ("Y", SlotKind::NonEmptyTermSet),
                ("Z", SlotKind::NonEmptyTermSet),
                ("n", SlotKind::Nat),
                ("m", SlotKind::Nat),
            ],
            dialects: ALL,
            build: |b, _| {
                let x = get_set(b, "X")?;
                let y = get_nonempty_set(b, "Y")?;
                let z = get_nonempty_set(b, "Z")?;
                let n = get_nat(b, "n")?;
                let m = get_nat(b, "m")?;
                let lhs = dep_set_formula(&x, &y.next_n(n))?
                    .and(dep_set_formula(&y, &z.next_n(m))?.next_n(n));
                Ok(lhs.implies(dep_set_formula(&x, &z.next_n(n + m))?))
            },
        },
        AxiomSchema {
            name: "Next-Full-Commutation",
            slots: &[("phi", SlotKind::Formula)],
            dialects: ALL,
            build: |b, voc| {
                let phi = get_formula(b, "phi")?;
                let v = voc.all_variables();
                Ok(Formula::dep_mod(v.clone(), phi.clone())
                    .next()
                    .implies(Formula::dep_mod(v, phi.next())))
            },
        },
    ]
}

pub fn lookup_schema(name: &str) -> Option<AxiomSchema> {
    schemas().into_iter().find(|s| s.name == name)
}

/// Instantiates a schema, enforcing its dialect constraints.
pub fn instantiate(
    schema: &AxiomSchema,
    bindings: &Bindings,
    voc: &Vocabulary,
    dialect: Dialect,
) -> Result<Formula, InstantiateError> {
    if !schema.dialects.contains(&dialect) {
        return Err(InstantiateError::NotInSystem {
            schema: schema.name.to_string(),
            system: dialect,
        });
    }
    let formula = (schema.build)(bindings, voc)?;
    formula
        .check_dialect(voc, dialect)
        .map_err(|_| InstantiateError::Dialect(dialect))?;
    Ok(formula)
}

pub fn var_term(i: usize) -> Term {
    Term::Var(VarId(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_term_set, render};
    use std::collections::BTreeMap as Map;

    fn voc() -> Vocabulary {
        Vocabulary::new(
            vec!["x".into(), "y".into()],
            Map::from([("P".into(), 1)]),
            Map::new(),
        )
        .unwrap()
    }

    #[test]
    fn determinism_instance() {
        let voc = voc();
        let schema = lookup_schema("Determinism").unwrap();
        let bindings: Bindings = Map::from([("v", SlotValue::Term(var_term(0)))]);
        let f = instantiate(&schema, &bindings, &voc, Dialect::Core).unwrap();
        assert_eq!(render(&f, &voc), "dep[x,y] Ox");
    }

    #[test]
    fn d_t_with_empty_set_in_core_only() {
        let voc = voc();
        let schema = lookup_schema("D-T").unwrap();
        let phi = parse_formula("P(x)", &voc, Dialect::Core).unwrap();
        let bindings: Bindings = Map::from([
            ("X", SlotValue::TermSet(TermSet::empty())),
            ("phi", SlotValue::Formula(phi)),
        ]);
        let f = instantiate(&schema, &bindings, &voc, Dialect::Core).unwrap();
        assert_eq!(render(&f, &voc), "!(D[] P(x) & !P(x))");
        assert!(matches!(
            instantiate(&schema, &bindings, &voc, Dialect::NonEmpty),
            Err(InstantiateError::Dialect(Dialect::NonEmpty))
        ));
    }

    #[test]
    fn transfer_expands_set_targets() {
        let voc = voc();
        let schema = lookup_schema("Transfer").unwrap();
        let phi = parse_formula("P(x)", &voc, Dialect::Core).unwrap();
        let bindings: Bindings = Map::from([
            ("X", SlotValue::TermSet(parse_term_set("x", &voc, Dialect::Core).unwrap())),
            ("Y", SlotValue::TermSet(parse_term_set("y,Oy", &voc, Dialect::Core).unwrap())),
            ("phi", SlotValue::Formula(phi)),
        ]);
        let f = instantiate(&schema, &bindings, &voc, Dialect::Core).unwrap();
        let expected = parse_formula(
            "dep[x] y & dep[x] Oy & D[y,Oy] P(x) -> D[x] P(x)",
            &voc,
            Dialect::Core,
        )
        .unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn schema_registry_is_unique_and_complete() {
        let names: Vec<&str> = schemas().iter().map(|s| s.name).collect();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len(), "duplicate schema names");
        for expected in [
            "O-Distribution",
            "Functionality",
            "D-Distribution",
            "D-Introduction-1",
            "D-Introduction-2",
            "D-T",
            "D-4",
            "D-5",
            "Dep-Ref",
            "Dep-Trans",
            "Determinism",
            "Transfer",
            "D-O",
            "Atomic-Reduction",
            "Next-Time-1",
            "Next-Time-2",
            "t-Next-Time-1",
            "t-Next-Time-2",
            "Function-Dependence",
            "Identity-Reflexivity",
            "Identity-Substitution",
            "Term-Reduction",
        ] {
            assert!(names.contains(&expected), "missing {expected}");
        }
        // the timed systems drop the one-directional next-time axioms
        // and the universal-future axiom
        let by_name = |n: &str| lookup_schema(n).unwrap();
        assert!(!by_name("Next-Time-1").dialects.contains(&Dialect::Timed));
        assert!(!by_name("D-O").dialects.contains(&Dialect::NonEmpty));
        assert!(!by_name("D-O").dialects.contains(&Dialect::Timed));
        assert!(by_name("t-Next-Time-1")
            .dialects
            .contains(&Dialect::TimedFuncId));
    }

    #[test]
    fn substitution_replaces_one_occurrence() {
        let voc = voc();
        let phi = parse_formula("P(x) & dep[x] x", &voc, Dialect::Core).unwrap();
        let x = var_term(0);
        let y = var_term(1);
        assert_eq!(count_term_occurrences(&phi, &x), 3);
        let replaced = replace_term_occurrence(&phi, &x, &y, 0).unwrap();
        assert_eq!(
            replaced,
            parse_formula("P(y) & dep[x] x", &voc, Dialect::Core).unwrap()
        );
        let replaced = replace_term_occurrence(&phi, &x, &y, 2).unwrap();
        assert_eq!(
            replaced,
            parse_formula("P(x) & dep[x] y", &voc, Dialect::Core).unwrap()
        );
        assert!(matches!(
            replace_term_occurrence(&phi, &x, &y, 3),
            Err(InstantiateError::OccurrenceOutOfRange { .. })
        ));
    }
}
