//! Standard relational models: worlds with one primitive equivalence
//! relation per basic variable, a transition preserving joint
//! agreement, and an atom valuation.
//!
//! Relations for compound terms are derived: next-step terms follow the
//! transition, sets intersect. Atoms whose terms all start with a
//! next-step marker reduce along the transition, so the stored atom
//! table only needs reduced atoms up to the depth bound; a stored
//! unreduced atom is validated against its reduct.

use super::{Partition, Violation};
use crate::syntax::{render_term, PredId, Term, TermSet, Vocabulary};
use std::collections::{BTreeMap, BTreeSet};

pub type AtomKey = (PredId, Vec<Term>);

#[derive(Debug, Clone, PartialEq)]
pub struct StandardRelationalModel {
    voc: Vocabulary,
    world_names: Vec<String>,
    transition: Vec<usize>,
    var_eqv: Vec<Partition>,
    atom_val: BTreeMap<AtomKey, BTreeSet<usize>>,
    depth_bound: usize,
}

impl StandardRelationalModel {
    pub fn new(
        voc: Vocabulary,
        world_names: Vec<String>,
        transition: Vec<usize>,
        var_eqv: Vec<Partition>,
        atom_val: BTreeMap<AtomKey, BTreeSet<usize>>,
        depth_bound: usize,
    ) -> Self {
        StandardRelationalModel {
            voc,
            world_names,
            transition,
            var_eqv,
            atom_val,
            depth_bound,
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.voc
    }

    pub fn num_worlds(&self) -> usize {
        self.world_names.len()
    }

    pub fn worlds(&self) -> impl Iterator<Item = usize> {
        0..self.world_names.len()
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.world_names[w]
    }

    pub fn world_names(&self) -> &[String] {
        &self.world_names
    }

    pub fn lookup_world(&self, name: &str) -> Option<usize> {
        self.world_names.iter().position(|n| n == name)
    }

    pub fn step(&self, w: usize) -> usize {
        self.transition[w]
    }

    pub fn transition(&self) -> &[usize] {
        &self.transition
    }

    pub fn depth_bound(&self) -> usize {
        self.depth_bound
    }

    pub fn var_eqv(&self) -> &[Partition] {
        &self.var_eqv
    }

    pub fn atom_val(&self) -> &BTreeMap<AtomKey, BTreeSet<usize>> {
        &self.atom_val
    }

    /// Equivalence classes for a single term: basic variables are
    /// stored, next-step terms pull the inner relation back along the
    /// transition.
    pub fn term_partition(&self, t: &Term) -> Result<Partition, Violation> {
        match t {
            Term::Var(v) => {
                self.var_eqv
                    .get(v.0)
                    .cloned()
                    .ok_or_else(|| Violation::Vocabulary(format!(
                        "variable index {} out of range",
                        v.0
                    )))
            }
            Term::Next(inner) => {
                let base = self.term_partition(inner)?;
                Ok(Partition::by_key(self.num_worlds(), |w| {
                    base.class_of(self.step(w))
                }))
            }
            Term::App(..) => Err(Violation::Vocabulary(
                "function terms are not interpreted on relational models".into(),
            )),
        }
    }

    /// Intersection relation for a term set; empty set is universal.
    pub fn set_partition(&self, x: &TermSet) -> Result<Partition, Violation> {
        let mut acc = Partition::universal(self.num_worlds());
        for t in x {
            acc = acc.meet(&self.term_partition(t)?);
        }
        Ok(acc)
    }

    /// Truth of an atom at a world. Atoms whose arguments all carry a
    /// leading next-step marker reduce along the transition first; the
    /// reduced atom is then looked up, absent meaning false. Reduced
    /// atoms beyond the depth bound are an error.
    pub fn atom_holds(&self, w: usize, p: PredId, args: &[Term]) -> Result<bool, Violation> {
        let mut world = w;
        let mut current: Vec<Term> = args.to_vec();
        loop {
            if !current.is_empty()
                && current.iter().all(|t| matches!(t, Term::Next(_)))
            {
                current = current
                    .iter()
                    .map(|t| match t {
                        Term::Next(inner) => (**inner).clone(),
                        _ => unreachable!(),
                    })
                    .collect();
                world = self.step(world);
            } else {
                break;
            }
        }
        let depth = current.iter().map(Term::temporal_depth).max().unwrap_or(0);
        if depth > self.depth_bound {
            return Err(Violation::AtomBeyondBound {
                atom: self.render_atom(p, &current),
                bound: self.depth_bound,
            });
        }
        Ok(self
            .atom_val
            .get(&(p, current))
            .map(|set| set.contains(&world))
            .unwrap_or(false))
    }

    pub fn render_atom(&self, p: PredId, args: &[Term]) -> String {
        let rendered: Vec<String> = args.iter().map(|t| render_term(t, &self.voc)).collect();
        format!("{}({})", self.voc.pred_name(p), rendered.join(","))
    }

    pub fn validate(&self) -> Result<(), Violation> {
        validate_standard(self)
    }
}

/// Checks partition well-formedness, transition preservation of joint
/// agreement, invariance of every stored atom under agreement on its
/// terms, and coherence of stored unreduced atoms with their reducts.
pub fn validate_standard(m: &StandardRelationalModel) -> Result<(), Violation> {
    let n = m.num_worlds();
    if m.transition.len() != n {
        let state = m
            .world_names
            .get(m.transition.len())
            .cloned()
            .unwrap_or_else(|| "?".to_string());
        return Err(Violation::TotalFunction { state });
    }
    for (w, &target) in m.transition.iter().enumerate() {
        if target >= n {
            return Err(Violation::DanglingTransition {
                state: m.world_names[w].clone(),
                target: target.to_string(),
            });
        }
    }
    if m.var_eqv.len() != m.voc.num_variables() {
        return Err(Violation::MissingRelation {
            key: m
                .voc
                .variable_names()
                .get(m.var_eqv.len())
                .cloned()
                .unwrap_or_default(),
        });
    }
    for (v, part) in m.var_eqv.iter().enumerate() {
        if part.len() != n {
            return Err(Violation::MalformedRelation {
                key: m.voc.variable_names()[v].clone(),
            });
        }
    }

    // Transition preserves joint agreement on all basic variables.
    let joint = m
        .var_eqv
        .iter()
        .fold(Partition::universal(n), |acc, p| acc.meet(p));
    for s in 0..n {
        for w in (s + 1)..n {
            if joint.same_class(s, w) && !joint.same_class(m.step(s), m.step(w)) {
                let offending = m
                    .voc
                    .variables()
                    .find(|(v, _)| !m.var_eqv[v.0].same_class(m.step(s), m.step(w)))
                    .map(|(_, name)| name.to_string())
                    .unwrap_or_default();
                return Err(Violation::Preservation {
                    first: m.world_names[s].clone(),
                    second: m.world_names[w].clone(),
                    variable: offending,
                });
            }
        }
    }

    for ((p, args), holds_at) in &m.atom_val {
        let arity = m.voc.pred_arity(*p);
        if args.len() != arity {
            return Err(Violation::PredicateArity {
                predicate: m.voc.pred_name(*p).to_string(),
                expected: arity,
                got: args.len(),
            });
        }
        let depth = args.iter().map(Term::temporal_depth).max().unwrap_or(0);
        if depth > m.depth_bound {
            return Err(Violation::AtomBeyondBound {
                atom: m.render_atom(*p, args),
                bound: m.depth_bound,
            });
        }
        if let Some(&out_of_range) = holds_at.iter().find(|&&w| w >= n) {
            return Err(Violation::MalformedRelation {
                key: format!("{} world {}", m.render_atom(*p, args), out_of_range),
            });
        }

        // Invariance under agreement on the atom's own terms.
        let set: TermSet = args.iter().cloned().collect();
        let agreement = m.set_partition(&set)?;
        for &s in holds_at {
            for w in 0..n {
                if agreement.same_class(s, w) && !holds_at.contains(&w) {
                    return Err(Violation::AtomInvariance {
                        atom: m.render_atom(*p, args),
                        holds: m.world_names[s].clone(),
                        fails: m.world_names[w].clone(),
                    });
                }
            }
        }

        // Stored unreduced atoms must agree with their reducts.
        if !args.is_empty() && args.iter().all(|t| matches!(t, Term::Next(_))) {
            for w in 0..n {
                if m.atom_holds(w, *p, args)? != holds_at.contains(&w) {
                    return Err(Violation::NextCoherence {
                        atom: m.render_atom(*p, args),
                        state: m.world_names[w].clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, Dialect};

    fn tiny_voc() -> Vocabulary {
        Vocabulary::new(
            vec!["x".into()],
            BTreeMap::from([("P".into(), 1)]),
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn non_preserving_transition_is_rejected() {
        let voc = Vocabulary::of_variables(&["x"]).unwrap();
        // worlds a ~x b, but their images split
        let m = StandardRelationalModel::new(
            voc,
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![2, 3, 2, 3],
            vec![Partition::from_labels(&[0, 0, 1, 2])],
            BTreeMap::new(),
            0,
        );
        assert!(matches!(m.validate(), Err(Violation::Preservation { .. })));
    }

    #[test]
    fn atom_invariance_is_checked() {
        let voc = tiny_voc();
        let m = StandardRelationalModel::new(
            voc.clone(),
            vec!["a".into(), "b".into()],
            vec![0, 1],
            vec![Partition::universal(2)],
            BTreeMap::from([(
                (PredId(0), vec![parse_term("x", &voc, Dialect::Core).unwrap()]),
                BTreeSet::from([0]),
            )]),
            0,
        );
        assert!(matches!(
            m.validate(),
            Err(Violation::AtomInvariance { .. })
        ));
    }

    #[test]
    fn next_atoms_reduce_along_transition() {
        let voc = tiny_voc();
        let x = parse_term("x", &voc, Dialect::Core).unwrap();
        let ox = parse_term("Ox", &voc, Dialect::Core).unwrap();
        let m = StandardRelationalModel::new(
            voc,
            vec!["a".into(), "b".into()],
            vec![1, 1],
            vec![Partition::singletons(2)],
            BTreeMap::from([((PredId(0), vec![x]), BTreeSet::from([1]))]),
            1,
        );
        m.validate().unwrap();
        // P(Ox) at a reduces to P(x) at b
        assert!(m.atom_holds(0, PredId(0), &[ox.clone()]).unwrap());
        assert!(m.atom_holds(1, PredId(0), &[ox]).unwrap());
    }

    #[test]
    fn incoherent_stored_next_atom_is_rejected() {
        let voc = tiny_voc();
        let x = parse_term("x", &voc, Dialect::Core).unwrap();
        let ox = parse_term("Ox", &voc, Dialect::Core).unwrap();
        let m = StandardRelationalModel::new(
            voc,
            vec!["a".into(), "b".into()],
            vec![1, 0],
            vec![Partition::singletons(2)],
            BTreeMap::from([
                ((PredId(0), vec![x]), BTreeSet::from([0])),
                ((PredId(0), vec![ox]), BTreeSet::from([0])),
            ]),
            1,
        );
        // with the swap transition, P(Ox) should hold exactly at b
        assert!(matches!(m.validate(), Err(Violation::NextCoherence { .. })));
    }

    #[test]
    fn relation_recursion_follows_transition() {
        let voc = Vocabulary::of_variables(&["x"]).unwrap();
        let m = StandardRelationalModel::new(
            voc.clone(),
            vec!["a".into(), "b".into(), "c".into()],
            vec![1, 2, 2],
            vec![Partition::from_labels(&[0, 1, 1])],
            BTreeMap::new(),
            0,
        );
        let ox = parse_term("Ox", &voc, Dialect::Core).unwrap();
        let p = m.term_partition(&ox).unwrap();
        // images are b,c,c which all agree on x
        assert!(p.same_class(0, 1) && p.same_class(1, 2));
    }
}
