//! Seeded random model and formula generators, plus the canonical
//! construction of a general relational model out of value agreement.
//! Used by the soundness harness, the bounded satisfiability search
//! and the test suites.

use crate::models::{
    DynamicalModel, GeneralRelationalModel, Partition, StandardRelationalModel, TruncationInfo,
    Value, Violation,
};
use crate::syntax::{
    bounded_universe, nonempty_subsets, Dialect, Formula, Term, TermSet, VarId,
    Vocabulary,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The general relational model a value model induces: agreement
/// relations per term set, dependence atoms and predicate atoms read
/// off the value semantics, all over the bounded universe. The empty
/// set is included; strip it for the non-empty dialect.
pub fn induce_general(
    m: &DynamicalModel,
    depth_bound: usize,
) -> Result<GeneralRelationalModel, Violation> {
    let voc = m.vocabulary().clone();
    let universe = bounded_universe(&voc, depth_bound);
    if universe.len() > crate::models::MAX_GENERAL_UNIVERSE {
        return Err(Violation::Vocabulary(format!(
            "bounded universe has {} terms, too many to induce",
            universe.len()
        )));
    }
    let subsets = nonempty_subsets(&universe);
    let n = m.num_states();

    let mut term_parts: BTreeMap<Term, Partition> = BTreeMap::new();
    for t in universe.iter() {
        term_parts.insert(
            t.clone(),
            m.agreement_partition(&TermSet::singleton(t.clone()))?,
        );
    }

    let mut eq_fam: BTreeMap<TermSet, Partition> = BTreeMap::new();
    eq_fam.insert(TermSet::empty(), Partition::universal(n));
    for x in &subsets {
        eq_fam.insert(x.clone(), m.agreement_partition(x)?);
    }

    let mut dep_val: BTreeMap<(TermSet, Term), BTreeSet<usize>> = BTreeMap::new();
    for x in std::iter::once(&TermSet::empty()).chain(subsets.iter()) {
        let px = &eq_fam[x];
        for y in universe.iter() {
            let py = &term_parts[y];
            let mut holds = BTreeSet::new();
            for class in px.classes() {
                let witness = py.class_of(class[0]);
                if class.iter().all(|&s| py.class_of(s) == witness) {
                    holds.extend(class);
                }
            }
            if !holds.is_empty() {
                dep_val.insert((x.clone(), y.clone()), holds);
            }
        }
    }

    let mut atom_val = BTreeMap::new();
    for (p, _, arity) in voc.predicates() {
        let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
        for _ in 0..arity {
            tuples = tuples
                .into_iter()
                .flat_map(|prefix| {
                    universe.iter().map(move |t| {
                        let mut next = prefix.clone();
                        next.push(t.clone());
                        next
                    })
                })
                .collect();
        }
        for args in tuples {
            let mut holds = BTreeSet::new();
            for s in 0..n {
                let mut row = Vec::with_capacity(args.len());
                for t in &args {
                    row.push(m.term_value(s, t)?);
                }
                if m.pred_tuples(p).contains(&row) {
                    holds.insert(s);
                }
            }
            if !holds.is_empty() {
                atom_val.insert((p, args), holds);
            }
        }
    }

    Ok(GeneralRelationalModel::new(
        voc,
        m.state_names().to_vec(),
        m.transition().to_vec(),
        depth_bound,
        eq_fam,
        atom_val,
        dep_val,
    ))
}

/// Drops the empty-set relation and dependence atoms, yielding a model
/// of the non-empty dialect.
pub fn restrict_nonempty(g: &GeneralRelationalModel) -> GeneralRelationalModel {
    let eq_fam = g
        .eq_fam()
        .iter()
        .filter(|(k, _)| !k.is_empty())
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let dep_val = g
        .dep_val()
        .iter()
        .filter(|((k, _), _)| !k.is_empty())
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    GeneralRelationalModel::new(
        g.vocabulary().clone(),
        g.world_names().to_vec(),
        g.transition().to_vec(),
        g.depth_bound(),
        eq_fam,
        g.atom_val().clone(),
        dep_val,
    )
}

#[derive(Debug, Clone)]
pub struct ModelCfg {
    pub num_states: usize,
    pub num_vars: usize,
    /// Values are drawn from `0..num_values`.
    pub num_values: i64,
    /// Predicate arities; names are `P`, `Q`, `R`, ...
    pub pred_arities: Vec<usize>,
    /// Function arities; names are `f`, `h`, `k`, ...
    pub func_arities: Vec<usize>,
}

impl Default for ModelCfg {
    fn default() -> Self {
        ModelCfg {
            num_states: 4,
            num_vars: 2,
            num_values: 3,
            pred_arities: vec![1],
            func_arities: vec![],
        }
    }
}

fn build_vocabulary(cfg: &ModelCfg) -> Vocabulary {
    let var_names = ["x", "y", "z", "u", "w"];
    let pred_names = ["P", "Q", "R", "T"];
    let func_names = ["f", "h", "k"];
    let variables: Vec<String> = (0..cfg.num_vars)
        .map(|i| var_names[i % var_names.len()].to_string())
        .collect();
    let predicates: BTreeMap<String, usize> = cfg
        .pred_arities
        .iter()
        .enumerate()
        .map(|(i, &a)| (pred_names[i % pred_names.len()].to_string(), a))
        .collect();
    let functions: BTreeMap<String, usize> = cfg
        .func_arities
        .iter()
        .enumerate()
        .map(|(i, &a)| (func_names[i % func_names.len()].to_string(), a))
        .collect();
    Vocabulary::new(variables, predicates, functions).expect("generator vocabulary")
}

fn all_rows(num_vars: usize, num_values: i64) -> Vec<Vec<Value>> {
    let mut rows: Vec<Vec<Value>> = vec![Vec::new()];
    for _ in 0..num_vars {
        rows = rows
            .into_iter()
            .flat_map(|prefix| {
                (0..num_values).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(Value::Int(v));
                    next
                })
            })
            .collect();
    }
    rows
}

fn random_pred_interp(
    rng: &mut ChaCha8Rng,
    voc: &Vocabulary,
    num_values: i64,
) -> Vec<BTreeSet<Vec<Value>>> {
    voc.predicates()
        .map(|(_, _, arity)| {
            all_rows(arity, num_values)
                .into_iter()
                .filter(|_| rng.gen_bool(0.5))
                .collect()
        })
        .collect()
}

fn random_func_interp(
    rng: &mut ChaCha8Rng,
    voc: &Vocabulary,
    num_values: i64,
) -> Vec<BTreeMap<Vec<Value>, Value>> {
    voc.functions()
        .map(|(_, _, arity)| {
            all_rows(arity, num_values)
                .into_iter()
                .map(|args| (args, Value::Int(rng.gen_range(0..num_values))))
                .collect()
        })
        .collect()
}

/// Random dynamical model: distinct value rows, arbitrary transition,
/// random interpretations.
pub fn random_dynamical(rng: &mut ChaCha8Rng, cfg: &ModelCfg) -> DynamicalModel {
    let voc = build_vocabulary(cfg);
    let mut rows = all_rows(cfg.num_vars, cfg.num_values);
    rows.shuffle(rng);
    let n = cfg.num_states.min(rows.len());
    let values: Vec<Vec<Value>> = rows.into_iter().take(n).collect();
    let transition: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let pred_interp = random_pred_interp(rng, &voc, cfg.num_values);
    let func_interp = random_func_interp(rng, &voc, cfg.num_values);
    DynamicalModel::new(
        voc,
        names,
        transition,
        values,
        pred_interp,
        func_interp,
        TruncationInfo::new(),
    )
}

/// Random timed model: either a permutation (every time infinite) or a
/// layered truncation with complete layers and sentinel frontier.
pub fn random_timed(rng: &mut ChaCha8Rng, cfg: &ModelCfg) -> DynamicalModel {
    let voc = build_vocabulary(cfg);
    let mut rows = all_rows(cfg.num_vars, cfg.num_values);
    rows.shuffle(rng);
    let n = cfg.num_states.min(rows.len());
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let values: Vec<Vec<Value>> = rows.into_iter().take(n).collect();
    let pred_interp = random_pred_interp(rng, &voc, cfg.num_values);
    let func_interp = random_func_interp(rng, &voc, cfg.num_values);

    if rng.gen_bool(0.4) {
        // permutation shape
        let mut transition: Vec<usize> = (0..n).collect();
        transition.shuffle(rng);
        DynamicalModel::new(
            voc,
            names,
            transition,
            values,
            pred_interp,
            func_interp,
            TruncationInfo::new(),
        )
    } else {
        // layered shape: consecutive layers of non-increasing size, with
        // each layer mapped onto the whole next layer so that the layer
        // index is exactly the time value
        let depth = rng.gen_range(1..=3).min(n.saturating_sub(1)).max(1);
        let mut sizes = vec![1usize; depth + 1];
        for _ in 0..n.saturating_sub(depth + 1) {
            let i = rng.gen_range(0..sizes.len());
            sizes[i] += 1;
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let mut layers: Vec<Vec<usize>> = Vec::new();
        let mut start = 0;
        for &size in &sizes {
            layers.push((start..start + size).collect());
            start += size;
        }
        let mut transition = vec![0usize; n];
        let mut truncated = TruncationInfo::new();
        for (i, layer) in layers.iter().enumerate() {
            if i + 1 < layers.len() {
                let next = &layers[i + 1];
                for (j, &s) in layer.iter().enumerate() {
                    transition[s] = if j < next.len() {
                        next[j]
                    } else {
                        next[rng.gen_range(0..next.len())]
                    };
                }
            } else {
                for &s in layer {
                    transition[s] = s;
                    truncated.insert(s);
                }
            }
        }
        DynamicalModel::new(
            voc,
            names,
            transition,
            values,
            pred_interp,
            func_interp,
            truncated,
        )
    }
}

/// Reduced term tuples over the bounded universe: tuples where not all
/// entries carry a leading next-step marker (those reduce away).
fn reduced_tuples(universe: &TermSet, arity: usize) -> Vec<Vec<Term>> {
    let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
    for _ in 0..arity {
        tuples = tuples
            .into_iter()
            .flat_map(|prefix| {
                universe.iter().map(move |t| {
                    let mut next = prefix.clone();
                    next.push(t.clone());
                    next
                })
            })
            .collect();
    }
    tuples
        .into_iter()
        .filter(|args| args.is_empty() || !args.iter().all(|t| matches!(t, Term::Next(_))))
        .collect()
}

/// Random standard relational model: random per-variable partitions, a
/// transition built on agreement classes (so preservation holds), and
/// atom valuations assembled from agreement classes (so invariance
/// holds). Only reduced atoms are stored.
pub fn random_standard(
    rng: &mut ChaCha8Rng,
    cfg: &ModelCfg,
    depth_bound: usize,
) -> StandardRelationalModel {
    let voc = build_vocabulary(cfg);
    let n = cfg.num_states;
    let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let var_eqv: Vec<Partition> = (0..cfg.num_vars)
        .map(|_| {
            let k = rng.gen_range(1..=n);
            Partition::by_key(n, |_| rng.gen_range(0..k))
        })
        .collect();
    let joint = var_eqv
        .iter()
        .fold(Partition::universal(n), |acc, p| acc.meet(p));
    let classes = joint.classes();
    let class_image: Vec<usize> = (0..classes.len())
        .map(|_| rng.gen_range(0..classes.len()))
        .collect();
    let transition: Vec<usize> = (0..n)
        .map(|w| {
            let target_class = &classes[class_image[joint.class_of(w)]];
            target_class[rng.gen_range(0..target_class.len())]
        })
        .collect();

    let model_without_atoms = StandardRelationalModel::new(
        voc.clone(),
        names.clone(),
        transition.clone(),
        var_eqv.clone(),
        BTreeMap::new(),
        depth_bound,
    );
    let universe = bounded_universe(&voc, depth_bound);
    let mut atom_val = BTreeMap::new();
    for (p, _, arity) in voc.predicates() {
        for args in reduced_tuples(&universe, arity) {
            if rng.gen_bool(0.5) {
                continue;
            }
            let set: TermSet = args.iter().cloned().collect();
            let agreement = model_without_atoms
                .set_partition(&set)
                .expect("variable terms only");
            let mut holds = BTreeSet::new();
            for class in agreement.classes() {
                if rng.gen_bool(0.4) {
                    holds.extend(class);
                }
            }
            if !holds.is_empty() {
                atom_val.insert((p, args), holds);
            }
        }
    }
    StandardRelationalModel::new(voc, names, transition, var_eqv, atom_val, depth_bound)
}

#[derive(Debug, Clone)]
pub struct FormulaCfg {
    pub max_depth: usize,
    /// Temporal-depth budget.
    pub max_td: usize,
    pub dialect: Dialect,
    /// Allow global identity atoms (functional dialect only).
    pub allow_ident: bool,
}

impl Default for FormulaCfg {
    fn default() -> Self {
        FormulaCfg {
            max_depth: 4,
            max_td: 2,
            dialect: Dialect::Core,
            allow_ident: false,
        }
    }
}

pub fn random_term(
    rng: &mut ChaCha8Rng,
    voc: &Vocabulary,
    td_budget: usize,
    dialect: Dialect,
) -> Term {
    let base = if dialect.allows_functions() && voc.has_functions() && rng.gen_bool(0.25) {
        let functions: Vec<_> = voc.functions().collect();
        let (f, _, arity) = functions[rng.gen_range(0..functions.len())];
        let args = (0..arity)
            .map(|_| {
                let inner = rng.gen_range(0..=td_budget);
                Term::Var(VarId(rng.gen_range(0..voc.num_variables()))).next_n(inner)
            })
            .collect();
        Term::App(f, args)
    } else {
        Term::Var(VarId(rng.gen_range(0..voc.num_variables())))
    };
    let room = td_budget.saturating_sub(base.temporal_depth());
    base.next_n(rng.gen_range(0..=room))
}

pub fn random_term_set(
    rng: &mut ChaCha8Rng,
    voc: &Vocabulary,
    td_budget: usize,
    dialect: Dialect,
) -> TermSet {
    if dialect.allows_empty_dep_sets() && rng.gen_bool(0.1) {
        return TermSet::empty();
    }
    let size = rng.gen_range(1..=2);
    (0..size)
        .map(|_| random_term(rng, voc, td_budget, dialect))
        .collect()
}

pub fn random_formula(rng: &mut ChaCha8Rng, voc: &Vocabulary, cfg: &FormulaCfg) -> Formula {
    fn atom(rng: &mut ChaCha8Rng, voc: &Vocabulary, td: usize, cfg: &FormulaCfg) -> Formula {
        let preds: Vec<_> = voc.predicates().collect();
        let mut choices: Vec<u8> = vec![1];
        if !preds.is_empty() {
            choices.push(0);
        }
        if cfg.allow_ident && cfg.dialect.allows_identity() {
            choices.push(2);
        }
        match choices[rng.gen_range(0..choices.len())] {
            0 => {
                let (p, _, arity) = preds[rng.gen_range(0..preds.len())];
                let args = (0..arity)
                    .map(|_| random_term(rng, voc, td, cfg.dialect))
                    .collect();
                Formula::Pred(p, args)
            }
            2 => Formula::Ident(
                random_term(rng, voc, td, cfg.dialect),
                random_term(rng, voc, td, cfg.dialect),
            ),
            _ => Formula::DepAtom(
                random_term_set(rng, voc, td, cfg.dialect),
                random_term(rng, voc, td, cfg.dialect),
            ),
        }
    }
    fn go(
        rng: &mut ChaCha8Rng,
        voc: &Vocabulary,
        depth: usize,
        td: usize,
        cfg: &FormulaCfg,
    ) -> Formula {
        if depth == 0 {
            return atom(rng, voc, td, cfg);
        }
        match rng.gen_range(0..10) {
            0 | 1 => go(rng, voc, depth - 1, td, cfg).not(),
            2 | 3 => {
                let a = go(rng, voc, depth - 1, td, cfg);
                let b = go(rng, voc, depth - 1, td, cfg);
                a.and(b)
            }
            4 | 5 if td > 0 => go(rng, voc, depth - 1, td - 1, cfg).next(),
            6 | 7 => Formula::dep_mod(
                random_term_set(rng, voc, td, cfg.dialect),
                go(rng, voc, depth - 1, td, cfg),
            ),
            _ => atom(rng, voc, td, cfg),
        }
    }
    go(rng, voc, cfg.max_depth, cfg.max_td, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_dynamical_models_validate() {
        let mut rng = rng_from_seed(7);
        for _ in 0..20 {
            let cfg = ModelCfg {
                num_states: rng.gen_range(1..=8),
                num_vars: rng.gen_range(1..=3),
                num_values: rng.gen_range(2..=3),
                pred_arities: vec![1, 2],
                func_arities: vec![],
            };
            random_dynamical(&mut rng, &cfg).validate().unwrap();
        }
    }

    #[test]
    fn random_standard_models_validate() {
        let mut rng = rng_from_seed(8);
        for _ in 0..20 {
            let cfg = ModelCfg {
                num_states: rng.gen_range(2..=6),
                num_vars: rng.gen_range(1..=2),
                num_values: 3,
                pred_arities: vec![1],
                func_arities: vec![],
            };
            random_standard(&mut rng, &cfg, 2).validate().unwrap();
        }
    }

    #[test]
    fn random_formulas_fit_their_budget() {
        let mut rng = rng_from_seed(9);
        let cfg = ModelCfg::default();
        let voc = build_vocabulary(&cfg);
        for _ in 0..100 {
            let fcfg = FormulaCfg {
                max_depth: 4,
                max_td: 2,
                dialect: Dialect::Core,
                allow_ident: false,
            };
            let f = random_formula(&mut rng, &voc, &fcfg);
            assert!(f.temporal_depth() <= 2);
            f.check_dialect(&voc, Dialect::Core).unwrap();
        }
    }

    #[test]
    fn induced_general_respects_value_semantics() {
        let m = crate::gallery::fib_mod(2);
        let g = induce_general(&m, 1).unwrap();
        // dep[x,y] Ox holds everywhere, dep[x] y nowhere on fib-mod-2
        let xy = TermSet::new(vec![Term::var(0), Term::var(1)]);
        let ox = Term::var(0).next();
        for w in g.worlds() {
            assert!(g.dep_holds(w, &xy, &ox).unwrap());
        }
        let x = TermSet::singleton(Term::var(0));
        for w in g.worlds() {
            assert!(!g.dep_holds(w, &x, &Term::var(1)).unwrap());
        }
    }
}
