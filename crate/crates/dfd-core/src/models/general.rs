//! General relational models: one primitive equivalence relation per
//! term set over a bounded term universe, and dependence atoms read
//! straight off an extended valuation. The eight coherence conditions
//! are checked exhaustively over the bounded universe.

use super::standard::AtomKey;
use super::{Partition, Violation};
use crate::syntax::{
    bounded_universe, nonempty_subsets, render_term, render_term_set, Dialect, PredId, Term,
    TermSet, Vocabulary,
};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Largest bounded universe the exhaustive validator will take on.
pub const MAX_GENERAL_UNIVERSE: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralRelationalModel {
    voc: Vocabulary,
    world_names: Vec<String>,
    transition: Vec<usize>,
    depth_bound: usize,
    /// Primitive equivalence relations per term set. Non-empty sets
    /// always; the empty set is present exactly in the full dialect.
    eq_fam: BTreeMap<TermSet, Partition>,
    atom_val: BTreeMap<AtomKey, BTreeSet<usize>>,
    dep_val: BTreeMap<(TermSet, Term), BTreeSet<usize>>,
}

impl GeneralRelationalModel {
    pub fn new(
        voc: Vocabulary,
        world_names: Vec<String>,
        transition: Vec<usize>,
        depth_bound: usize,
        eq_fam: BTreeMap<TermSet, Partition>,
        atom_val: BTreeMap<AtomKey, BTreeSet<usize>>,
        dep_val: BTreeMap<(TermSet, Term), BTreeSet<usize>>,
    ) -> Self {
        GeneralRelationalModel {
            voc,
            world_names,
            transition,
            depth_bound,
            eq_fam,
            atom_val,
            dep_val,
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

    pub fn universe(&self) -> TermSet {
        bounded_universe(&self.voc, self.depth_bound)
    }

    pub fn eq_fam(&self) -> &BTreeMap<TermSet, Partition> {
        &self.eq_fam
    }

    pub fn atom_val(&self) -> &BTreeMap<AtomKey, BTreeSet<usize>> {
        &self.atom_val
    }

    pub fn dep_val(&self) -> &BTreeMap<(TermSet, Term), BTreeSet<usize>> {
        &self.dep_val
    }

    fn out_of_universe(&self, what: String) -> Violation {
        Violation::AtomBeyondBound {
            atom: what,
            bound: self.depth_bound,
        }
    }

    /// Primitive agreement lookup. Querying outside the stored family
    /// is a hard error, not a default.
    pub fn agree(&self, s: usize, t: usize, x: &TermSet) -> Result<bool, Violation> {
        match self.eq_fam.get(x) {
            Some(p) => Ok(p.same_class(s, t)),
            None => Err(self.out_of_universe(render_term_set(x, &self.voc))),
        }
    }

    pub fn set_partition(&self, x: &TermSet) -> Result<&Partition, Violation> {
        self.eq_fam
            .get(x)
            .ok_or_else(|| self.out_of_universe(render_term_set(x, &self.voc)))
    }

    pub fn atom_holds(&self, w: usize, p: PredId, args: &[Term]) -> Result<bool, Violation> {
        let depth = args.iter().map(Term::temporal_depth).max().unwrap_or(0);
        if depth > self.depth_bound {
            let rendered: Vec<String> = args.iter().map(|t| render_term(t, &self.voc)).collect();
            return Err(self.out_of_universe(format!(
                "{}({})",
                self.voc.pred_name(p),
                rendered.join(",")
            )));
        }
        Ok(self
            .atom_val
            .get(&(p, args.to_vec()))
            .map(|set| set.contains(&w))
            .unwrap_or(false))
    }

    pub fn dep_holds(&self, w: usize, x: &TermSet, y: &Term) -> Result<bool, Violation> {
        if x.temporal_depth().max(y.temporal_depth()) > self.depth_bound {
            return Err(self.out_of_universe(format!(
                "dep[{}] {}",
                render_term_set(x, &self.voc),
                render_term(y, &self.voc)
            )));
        }
        Ok(self
            .dep_val
            .get(&(x.clone(), y.clone()))
            .map(|set| set.contains(&w))
            .unwrap_or(false))
    }

    /// All `y` in the universe with `dep[X] y` at `w`.
    fn dep_image(&self, w: usize, x: &TermSet) -> BTreeSet<Term> {
        self.dep_val
            .iter()
            .filter(|((set, _), holds)| set == x && holds.contains(&w))
            .map(|((_, y), _)| y.clone())
            .collect()
    }

    pub fn validate(&self, dialect: Dialect) -> Result<(), Violation> {
        validate_general(self, dialect)
    }
}

fn cond(condition: &'static str, detail: String) -> Violation {
    Violation::Condition { condition, detail }
}

/// Exhaustive check of the coherence conditions over the bounded
/// universe: universal empty relation (full dialect only), equivalence
/// relations, the three dependence-atom laws, transfer of dependence
/// atoms and agreement, atom invariance, atomic next-step reduction,
/// agreement transfer along the transition, and dependence transfer
/// back along the transition.
pub fn validate_general(m: &GeneralRelationalModel, dialect: Dialect) -> Result<(), Violation> {
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
    let universe = m.universe();
    if universe.len() > MAX_GENERAL_UNIVERSE {
        return Err(Violation::Vocabulary(format!(
            "bounded universe has {} terms; exhaustive validation is capped at {}",
            universe.len(),
            MAX_GENERAL_UNIVERSE
        )));
    }
    let subsets = nonempty_subsets(&universe);
    let render_set = |x: &TermSet| render_term_set(x, &m.voc);

    // Relation family coverage and well-formedness (C2 holds by the
    // partition representation once lengths match).
    for x in &subsets {
        match m.eq_fam.get(x) {
            None => {
                return Err(Violation::MissingRelation { key: render_set(x) });
            }
            Some(p) if p.len() != n => {
                return Err(Violation::MalformedRelation { key: render_set(x) });
            }
            Some(_) => {}
        }
    }
    match dialect {
        Dialect::NonEmpty => {}
        _ => match m.eq_fam.get(&TermSet::empty()) {
            None => {
                return Err(Violation::MissingRelation { key: "<empty>".into() });
            }
            Some(p) if p.num_classes() > 1 => {
                return Err(cond(
                    "C1",
                    "relation for the empty set is not universal".into(),
                ));
            }
            Some(_) => {}
        },
    }
    let empty_set = TermSet::empty();
    let queried_sets: Vec<&TermSet> = if dialect == Dialect::NonEmpty {
        subsets.iter().collect()
    } else {
        std::iter::once(&empty_set).chain(subsets.iter()).collect()
    };
    // Collect only sets actually carrying dependence atoms or needed.
    for ((x, y), holds) in &m.dep_val {
        if x.temporal_depth() > m.depth_bound || y.temporal_depth() > m.depth_bound {
            return Err(Violation::AtomBeyondBound {
                atom: format!("dep[{}] {}", render_set(x), render_term(y, &m.voc)),
                bound: m.depth_bound,
            });
        }
        if x.is_empty() && dialect == Dialect::NonEmpty {
            return Err(cond(
                "C3",
                "empty-set dependence atom stored in the non-empty dialect".into(),
            ));
        }
        if let Some(&w) = holds.iter().find(|&&w| w >= n) {
            return Err(Violation::MalformedRelation {
                key: format!("dep[{}] {} world {}", render_set(x), render_term(y, &m.voc), w),
            });
        }
    }

    // Dependence images per (world, set), for the subset conditions.
    let set_index: HashMap<&TermSet, usize> = queried_sets
        .iter()
        .enumerate()
        .map(|(i, x)| (*x, i))
        .collect();
    let dep_images: Vec<Vec<BTreeSet<Term>>> = queried_sets
        .iter()
        .map(|x| (0..n).map(|w| m.dep_image(w, x)).collect())
        .collect();
    let image =
        |w: usize, x: &TermSet| -> &BTreeSet<Term> { &dep_images[set_index[x]][w] };

    let all_vars = m.voc.all_variables();
    for w in 0..n {
        for x in queried_sets.iter() {
            let img = image(w, x);
            // Dep-Reflexivity
            for t in x.iter() {
                if !img.contains(t) {
                    return Err(cond(
                        "C3/Dep-Reflexivity",
                        format!(
                            "dep[{}] {} fails at `{}`",
                            render_set(x),
                            render_term(t, &m.voc),
                            m.world_name(w)
                        ),
                    ));
                }
            }
            // Determinism: dep[V] Ox for every term with room in the bound.
            if x.terms() == all_vars.terms() {
                for t in universe.iter() {
                    if t.temporal_depth() + 1 <= m.depth_bound {
                        let target = t.clone().next();
                        if !img.contains(&target) {
                            return Err(cond(
                                "C3/Determinism",
                                format!(
                                    "dep[{}] {} fails at `{}`",
                                    render_set(x),
                                    render_term(&target, &m.voc),
                                    m.world_name(w)
                                ),
                            ));
                        }
                    }
                }
            }
            // Dep-Transitivity: any Y inside the image passes its own
            // image along.
            for y_set in queried_sets.iter() {
                if y_set.iter().all(|t| img.contains(t)) {
                    let via = image(w, y_set);
                    if let Some(missing) = via.iter().find(|t| !img.contains(*t)) {
                        return Err(cond(
                            "C3/Dep-Transitivity",
                            format!(
                                "dep[{}] {} via [{}] fails at `{}`",
                                render_set(x),
                                render_term(missing, &m.voc),
                                render_set(y_set),
                                m.world_name(w)
                            ),
                        ));
                    }
                }
            }
        }
    }

    // C4: agreement plus a dependence atom transfers both the atom and
    // agreement on its targets.
    for x in queried_sets.iter() {
        let part = m.eq_fam.get(*x).unwrap();
        for s in 0..n {
            for w in 0..n {
                if s == w || !part.same_class(s, w) {
                    continue;
                }
                let img_s = image(s, x);
                let img_w = image(w, x);
                if let Some(missing) = img_s.iter().find(|t| !img_w.contains(*t)) {
                    return Err(cond(
                        "C4",
                        format!(
                            "`{}` ={} `{}` and dep[{}] {} holds at the former only",
                            m.world_name(s),
                            render_set(x),
                            m.world_name(w),
                            render_set(x),
                            render_term(missing, &m.voc)
                        ),
                    ));
                }
                for y_set in queried_sets.iter() {
                    if y_set.iter().all(|t| img_s.contains(t))
                        && !m.eq_fam.get(*y_set).unwrap().same_class(s, w)
                    {
                        return Err(cond(
                            "C4",
                            format!(
                                "dep[{}] [{}] holds at `{}` but agreement on the target set fails",
                                render_set(x),
                                render_set(y_set),
                                m.world_name(s)
                            ),
                        ));
                    }
                }
            }
        }
    }

    // C5: stored atoms are invariant under agreement on their terms.
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
                atom: format!("{}(...)", m.voc.pred_name(*p)),
                bound: m.depth_bound,
            });
        }
        if args.is_empty() {
            continue;
        }
        let set: TermSet = args.iter().cloned().collect();
        let part = m.eq_fam.get(&set).ok_or(Violation::MissingRelation {
            key: render_set(&set),
        })?;
        for &s in holds_at {
            for w in 0..n {
                if part.same_class(s, w) && !holds_at.contains(&w) {
                    let rendered: Vec<String> =
                        args.iter().map(|t| render_term(t, &m.voc)).collect();
                    return Err(Violation::AtomInvariance {
                        atom: format!("{}({})", m.voc.pred_name(*p), rendered.join(",")),
                        holds: m.world_names[s].clone(),
                        fails: m.world_names[w].clone(),
                    });
                }
            }
        }
    }

    // C6: atomic next-step reduction over all in-bound tuples.
    for (p, _, arity) in m.voc.predicates() {
        let inner: Vec<Term> = universe
            .iter()
            .filter(|t| t.temporal_depth() + 1 <= m.depth_bound)
            .cloned()
            .collect();
        let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
        for _ in 0..arity {
            tuples = tuples
                .into_iter()
                .flat_map(|prefix| {
                    inner.iter().map(move |t| {
                        let mut next = prefix.clone();
                        next.push(t.clone());
                        next
                    })
                })
                .collect();
        }
        for tuple in tuples {
            let shifted: Vec<Term> = tuple.iter().map(|t| t.clone().next()).collect();
            for s in 0..n {
                if m.atom_holds(s, p, &shifted)? != m.atom_holds(m.step(s), p, &tuple)? {
                    let rendered: Vec<String> =
                        shifted.iter().map(|t| render_term(t, &m.voc)).collect();
                    return Err(cond(
                        "C6",
                        format!(
                            "{}({}) at `{}` disagrees with its reduct at the image",
                            m.voc.pred_name(p),
                            rendered.join(","),
                            m.world_name(s)
                        ),
                    ));
                }
            }
        }
    }

    // C7: agreement on shifted sets transfers along the transition.
    for x in &subsets {
        if x.temporal_depth() + 1 > m.depth_bound {
            continue;
        }
        let shifted = x.next_n(1);
        let part_shifted = m.eq_fam.get(&shifted).unwrap();
        let part = m.eq_fam.get(x).unwrap();
        for s in 0..n {
            for w in 0..n {
                if part_shifted.same_class(s, w) && !part.same_class(m.step(s), m.step(w)) {
                    return Err(cond(
                        "C7",
                        format!(
                            "`{}` ={} `{}` but their images disagree on {}",
                            m.world_name(s),
                            render_set(&shifted),
                            m.world_name(w),
                            render_set(x)
                        ),
                    ));
                }
            }
        }
    }

    // C8: dependence at the image pulls back to shifted dependence.
    for x in &subsets {
        if x.temporal_depth() + 1 > m.depth_bound {
            continue;
        }
        let shifted_x = x.next_n(1);
        for y in universe.iter() {
            if y.temporal_depth() + 1 > m.depth_bound {
                continue;
            }
            let shifted_y = y.clone().next();
            for s in 0..n {
                if m.dep_holds(m.step(s), x, y)? && !m.dep_holds(s, &shifted_x, &shifted_y)? {
                    return Err(cond(
                        "C8",
                        format!(
                            "dep[{}] {} holds at the image of `{}` but dep[{}] {} fails there",
                            render_set(x),
                            render_term(y, &m.voc),
                            m.world_name(s),
                            render_set(&shifted_x),
                            render_term(&shifted_y, &m.voc)
                        ),
                    ));
                }
            }
        }
    }

    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::induce_general;
    use crate::gallery;

    #[test]
    fn induced_model_from_fibonacci_validates() {
        let m = gallery::fib_mod(3);
        let g = induce_general(&m, 1).unwrap();
        assert_eq!(g.validate(Dialect::NonEmpty), Ok(()));
        assert_eq!(g.validate(Dialect::Core), Ok(()));
    }

    #[test]
    fn missing_empty_relation_fails_full_dialect() {
        let m = gallery::fib_mod(2);
        let g = crate::gen::restrict_nonempty(&induce_general(&m, 1).unwrap());
        assert!(matches!(
            g.validate(Dialect::Core),
            Err(Violation::MissingRelation { .. })
        ));
        assert_eq!(g.validate(Dialect::NonEmpty), Ok(()));
    }

    #[test]
    fn dropped_reflexivity_atom_fails_c3() {
        let m = gallery::fib_mod(2);
        let g = induce_general(&m, 1).unwrap();
        let mut dep = g.dep_val().clone();
        let x = TermSet::singleton(Term::var(0));
        dep.get_mut(&(x, Term::var(0))).unwrap().clear();
        let broken = GeneralRelationalModel::new(
            g.vocabulary().clone(),
            g.world_names().to_vec(),
            g.transition().to_vec(),
            g.depth_bound(),
            g.eq_fam().clone(),
            g.atom_val().clone(),
            dep,
        );
        let err = broken.validate(Dialect::NonEmpty).unwrap_err();
        assert!(matches!(
            err,
            Violation::Condition {
                condition: "C3/Dep-Reflexivity",
                ..
            }
        ));
    }

    use crate::syntax::Term;

    #[test]
    fn out_of_universe_queries_are_errors() {
        let m = gallery::fib_mod(2);
        let g = induce_general(&m, 1).unwrap();
        let deep = TermSet::singleton(Term::var(0).next_n(2));
        assert!(matches!(
            g.agree(0, 0, &deep),
            Err(Violation::AtomBeyondBound { .. })
        ));
    }
}
