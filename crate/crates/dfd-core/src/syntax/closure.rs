//! Closure of a formula set under the four closure clauses that drive
//! the filtration: dependence-scaffold formulas, single negations,
//! generalized subformulas up to the set's temporal depth, and
//! dependence-modality wrappings of next- and predicate-headed members.

use super::{
    nonempty_subsets, set_temporal_depth, term_universe, Formula, Term, TermSet, VarId,
};
use std::collections::{BTreeSet, HashMap, HashSet};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ClosureError {
    #[error("term universe has {size} terms; closure is only tractable up to {max}")]
    UniverseTooLarge { size: usize, max: usize },
    #[error("closure input must be in the non-empty dialect (no functions, identities or empty dependence sets)")]
    UnsupportedInput,
}

/// Maximal term-universe size the closure enumeration will attempt.
pub const MAX_UNIVERSE: usize = 6;

/// A closed formula set together with its term universe.
#[derive(Debug, Clone)]
pub struct Closure {
    /// Canonically ordered: by temporal depth, then structurally.
    formulas: Vec<Formula>,
    index: HashSet<Formula>,
    depth: usize,
    vars: Vec<VarId>,
    universe: TermSet,
}

impl Closure {
    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains(f)
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    /// `td` of the closed set.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    /// The term universe: every `O^n v` with `v` occurring and `n <= td`.
    pub fn universe(&self) -> &TermSet {
        &self.universe
    }

    /// Formulas of temporal depth `< layer`.
    pub fn layer(&self, layer: usize) -> impl Iterator<Item = &Formula> {
        self.formulas
            .iter()
            .take_while(move |f| f.temporal_depth() < layer)
    }

    /// `{O^m v : v occurring}`.
    pub fn shifted_vars(&self, m: usize) -> TermSet {
        self.vars
            .iter()
            .map(|v| Term::Var(*v).next_n(m))
            .collect()
    }
}

/// Peels outer negations and outer dependence wrappings of next- or
/// predicate-headed bodies; those layers are regenerated by the
/// negation and wrapping stages, so the strip basis ignores them.
/// This keeps re-closing a closed set stable.
fn peel_scaffold(f: &Formula) -> &Formula {
    match f {
        Formula::Not(g) => peel_scaffold(g),
        Formula::DepMod(_, g) if matches!(**g, Formula::Next(_) | Formula::Pred(..)) => {
            peel_scaffold(g)
        }
        _ => f,
    }
}

/// Computes the least closed superset of `seed`.
pub fn closure(seed: &[Formula]) -> Result<Closure, ClosureError> {
    for f in seed {
        if f.has_function() || f.has_ident() || has_empty_dep_set(f) {
            return Err(ClosureError::UnsupportedInput);
        }
    }
    let depth = set_temporal_depth(seed.iter());
    let (vars, universe) = term_universe(seed.iter());
    if universe.len() > MAX_UNIVERSE {
        return Err(ClosureError::UniverseTooLarge {
            size: universe.len(),
            max: MAX_UNIVERSE,
        });
    }

    let subsets = nonempty_subsets(&universe);

    // Ordinary subformula closure of the seed.
    let mut set: HashSet<Formula> = HashSet::new();
    for f in seed {
        for sub in f.subformulas() {
            set.insert(sub.clone());
        }
    }

    // Dependence scaffold: D[Y] dep[X] y over the whole universe.
    let mut scaffold: Vec<Formula> = Vec::new();
    for y_set in &subsets {
        for x_set in &subsets {
            for y in universe.iter() {
                scaffold.push(Formula::dep_mod(
                    y_set.clone(),
                    Formula::DepAtom(x_set.clone(), y.clone()),
                ));
            }
        }
    }

    // Generalized subformulas: every formula of depth <= td whose
    // next-erasure is a subformula of a basis member's next-erasure.
    let mut strips: BTreeSet<Formula> = BTreeSet::new();
    for f in seed.iter().map(|f| peel_scaffold(f)).chain(scaffold.iter()) {
        let stripped = f.strip_next();
        for sub in stripped.subformulas() {
            strips.insert(sub.clone());
        }
    }
    let mut decorator = Decorator { memo: HashMap::new() };
    for sigma in &strips {
        for f in decorator.decorations(sigma, depth) {
            set.insert(f);
        }
    }
    set.extend(scaffold);

    // Dependence wrappings of next-headed formulas and predicate atoms.
    let wrap_targets: Vec<Formula> = set
        .iter()
        .filter(|f| matches!(f, Formula::Next(_) | Formula::Pred(..)))
        .cloned()
        .collect();
    for f in wrap_targets {
        for y_set in &subsets {
            set.insert(Formula::dep_mod(y_set.clone(), f.clone()));
        }
    }

    // Single negations, skipping formulas that are already negations.
    let positives: Vec<Formula> = set
        .iter()
        .filter(|f| !matches!(f, Formula::Not(_)))
        .cloned()
        .collect();
    for f in positives {
        set.insert(f.not());
    }

    let mut formulas: Vec<Formula> = set.iter().cloned().collect();
    formulas.sort_by(|a, b| {
        a.temporal_depth()
            .cmp(&b.temporal_depth())
            .then_with(|| a.cmp(b))
    });
    Ok(Closure {
        formulas,
        index: set,
        depth,
        vars,
        universe,
    })
}

fn has_empty_dep_set(f: &Formula) -> bool {
    match f {
        Formula::Pred(..) | Formula::Ident(..) => false,
        Formula::Not(g) | Formula::Next(g) => has_empty_dep_set(g),
        Formula::And(a, b) => has_empty_dep_set(a) || has_empty_dep_set(b),
        Formula::DepMod(x, g) => x.is_empty() || has_empty_dep_set(g),
        Formula::DepAtom(x, _) => x.is_empty(),
    }
}

/// Enumerates all formulas of bounded temporal depth whose next-erasure
/// equals a given next-free formula.
struct Decorator {
    memo: HashMap<(Formula, usize), Vec<Formula>>,
}

impl Decorator {
    fn decorations(&mut self, sigma: &Formula, budget: usize) -> Vec<Formula> {
        let key = (sigma.clone(), budget);
        if let Some(cached) = self.memo.get(&key) {
            return cached.clone();
        }
        let mut out = Vec::new();
        for lead in 0..=budget {
            for core in self.core_decorations(sigma, budget - lead) {
                out.push(core.next_n(lead));
            }
        }
        out.sort();
        out.dedup();
        self.memo.insert(key, out.clone());
        out
    }

    fn core_decorations(&mut self, sigma: &Formula, budget: usize) -> Vec<Formula> {
        match sigma {
            Formula::Pred(p, args) => {
                let mut acc: Vec<Vec<Term>> = vec![Vec::new()];
                for arg in args {
                    let choices = term_decorations(arg, budget);
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            choices.iter().map(move |c| {
                                let mut next = prefix.clone();
                                next.push(c.clone());
                                next
                            })
                        })
                        .collect();
                }
                acc.into_iter().map(|args| Formula::Pred(*p, args)).collect()
            }
            Formula::Not(inner) => self
                .decorations(inner, budget)
                .into_iter()
                .map(Formula::not)
                .collect(),
            Formula::And(a, b) => {
                let left = self.decorations(a, budget);
                let right = self.decorations(b, budget);
                left.iter()
                    .flat_map(|l| right.iter().map(move |r| l.clone().and(r.clone())))
                    .collect()
            }
            Formula::DepMod(x, inner) => {
                let sets = set_decorations(x, budget);
                let bodies = self.decorations(inner, budget);
                sets.iter()
                    .flat_map(|s| {
                        bodies
                            .iter()
                            .map(move |b| Formula::dep_mod(s.clone(), b.clone()))
                    })
                    .collect()
            }
            Formula::DepAtom(x, y) => {
                let sets = set_decorations(x, budget);
                let targets = term_decorations(y, budget);
                sets.iter()
                    .flat_map(|s| {
                        targets
                            .iter()
                            .map(move |t| Formula::DepAtom(s.clone(), t.clone()))
                    })
                    .collect()
            }
            // Stripped input never contains these.
            Formula::Next(_) | Formula::Ident(..) => unreachable!("decorating a next-free core"),
        }
    }
}

/// All `O^n base` with `n <= budget`, for a next-free base term.
fn term_decorations(base: &Term, budget: usize) -> Vec<Term> {
    debug_assert_eq!(base.temporal_depth(), 0);
    (0..=budget).map(|n| base.clone().next_n(n)).collect()
}

/// All term sets whose next-erasure equals the given next-free set:
/// per base term a non-empty selection of its shifted copies.
fn set_decorations(stripped: &TermSet, budget: usize) -> Vec<TermSet> {
    let mut out: Vec<Vec<Term>> = vec![Vec::new()];
    for base in stripped.iter() {
        let copies = term_decorations(base, budget);
        let mut grown = Vec::new();
        for selection_mask in 1u32..(1u32 << copies.len()) {
            let chosen: Vec<Term> = copies
                .iter()
                .enumerate()
                .filter(|(i, _)| selection_mask & (1 << i) != 0)
                .map(|(_, t)| t.clone())
                .collect();
            for prefix in &out {
                let mut next = prefix.clone();
                next.extend(chosen.iter().cloned());
                grown.push(next);
            }
        }
        out = grown;
    }
    out.into_iter().map(TermSet::new).collect()
}

#[cfg(test)]
mod tests {
    use super::super::{parse_formula, Dialect, Vocabulary};
    use super::*;
    use std::collections::BTreeMap;

    fn voc() -> Vocabulary {
        Vocabulary::new(
            vec!["x".into()],
            BTreeMap::from([("P".into(), 1)]),
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn closure_of_p_v() {
        let voc = voc();
        let f = parse_formula("P(x)", &voc, Dialect::NonEmpty).unwrap();
        let cl = closure(std::slice::from_ref(&f)).unwrap();
        assert_eq!(cl.depth(), 0);
        let p = |s: &str| parse_formula(s, &voc, Dialect::NonEmpty).unwrap();
        for expect in ["!P(x)", "D[x] P(x)", "!D[x] P(x)", "dep[x] x", "D[x] dep[x] x"] {
            assert!(cl.contains(&p(expect)), "missing {expect}");
        }
    }

    #[test]
    fn closure_is_idempotent() {
        let voc = voc();
        let f = parse_formula("O P(x) & dep[x] Ox", &voc, Dialect::NonEmpty).unwrap();
        let cl = closure(std::slice::from_ref(&f)).unwrap();
        let again = closure(cl.formulas()).unwrap();
        assert_eq!(cl.len(), again.len());
        for g in cl.formulas() {
            assert!(again.contains(g));
        }
    }

    #[test]
    fn closure_wraps_next_formulas() {
        let voc = voc();
        let f = parse_formula("O P(x)", &voc, Dialect::NonEmpty).unwrap();
        let cl = closure(std::slice::from_ref(&f)).unwrap();
        let p = |s: &str| parse_formula(s, &voc, Dialect::NonEmpty).unwrap();
        // every non-empty Y over {x, Ox}
        for expect in ["D[x] O P(x)", "D[Ox] O P(x)", "D[x,Ox] O P(x)"] {
            assert!(cl.contains(&p(expect)), "missing {expect}");
        }
    }

    #[test]
    fn closure_depth_is_preserved() {
        let voc = voc();
        let f = parse_formula("O O P(x)", &voc, Dialect::NonEmpty).unwrap();
        let cl = closure(std::slice::from_ref(&f)).unwrap();
        assert_eq!(cl.depth(), 2);
        assert!(cl
            .formulas()
            .iter()
            .all(|g| g.temporal_depth() <= cl.depth()));
    }

    #[test]
    fn layers_are_prefixes() {
        let voc = voc();
        let f = parse_formula("O P(x)", &voc, Dialect::NonEmpty).unwrap();
        let cl = closure(std::slice::from_ref(&f)).unwrap();
        let l1: Vec<_> = cl.layer(1).collect();
        assert!(!l1.is_empty());
        assert!(l1.iter().all(|g| g.temporal_depth() < 1));
        let l2: Vec<_> = cl.layer(2).collect();
        assert!(l2.len() > l1.len());
    }

    #[test]
    fn rejects_oversized_universe() {
        let voc = Vocabulary::new(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            BTreeMap::from([("P".into(), 1)]),
            BTreeMap::new(),
        )
        .unwrap();
        let f = parse_formula("P(Oa) & P(b) & P(c) & P(d)", &voc, Dialect::NonEmpty).unwrap();
        assert!(matches!(
            closure(std::slice::from_ref(&f)),
            Err(ClosureError::UniverseTooLarge { .. })
        ));
    }
}
