//! The model constructions between the classes: value models to
//! relational models and back (quotient), assignment teams unrolled
//! into layered timed models, and timed models packed into assignment
//! teams with step functions.

use crate::analysis::{timing_map, NotTimed, TimeValue, TimingMap};
use crate::models::{
    Assignment, DynamicalModel, LfdFModel, Partition, StandardRelationalModel, TruncationInfo,
    Value, Violation,
};
use crate::semantics::{DynamicalEvaluator, EvalError};
use crate::syntax::{bounded_universe, Formula, Term, Vocabulary};
use crate::translate::{extended_vocabulary, ExtendedVocabulary};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, thiserror::Error)]
pub enum TransformError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Model(#[from] Violation),
    #[error(transparent)]
    NotTimed(#[from] NotTimed),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
    #[error("states `{first}` and `{second}` share one basic-variable row; refusing to merge them")]
    RowCollision { first: String, second: String },
    #[error("vocabulary has no step function for `{0}`")]
    MissingStepFunction(String),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("assignment index {0} out of range")]
    BadAssignment(usize),
    #[error("conversion needs {0} table rows, beyond the supported size")]
    TableTooLarge(u64),
}

/// The induced relational model: same states and transition, agreement
/// relations per basic variable, and atom valuations read off the value
/// semantics for every reduced atom within the depth bound.
pub fn to_standard(
    m: &DynamicalModel,
    atom_depth: usize,
) -> Result<StandardRelationalModel, TransformError> {
    // function symbols have no relational presentation
    let voc = Vocabulary::new(
        m.vocabulary().variable_names().to_vec(),
        m.vocabulary().predicates_map(),
        BTreeMap::new(),
    )
    .expect("relational vocabulary");
    let var_eqv: Vec<Partition> = voc
        .var_ids()
        .map(|v| m.agreement_partition(&crate::syntax::TermSet::singleton(Term::Var(v))))
        .collect::<Result<_, _>>()?;
    let universe = bounded_universe(&voc, atom_depth);
    let mut atom_val = BTreeMap::new();
    let mut evaluator = DynamicalEvaluator::new(m);
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
            // atoms whose arguments all start with a next-step marker
            // reduce along the transition; only reduced atoms are stored
            if !args.is_empty() && args.iter().all(|t| matches!(t, Term::Next(_))) {
                continue;
            }
            let mut holds = BTreeSet::new();
            for s in m.states() {
                if evaluator.eval(s, &Formula::Pred(p, args.clone()))? {
                    holds.insert(s);
                }
            }
            if !holds.is_empty() {
                atom_val.insert((p, args), holds);
            }
        }
    }
    Ok(StandardRelationalModel::new(
        voc,
        m.state_names().to_vec(),
        m.transition().to_vec(),
        var_eqv,
        atom_val,
        atom_depth,
    ))
}

/// The quotient by joint agreement: states are full-agreement classes,
/// values are per-variable agreement classes tagged by their variable
/// (classes of different variables are distinct values even when they
/// contain the same worlds), named after their least member.
pub fn to_dynamical(
    m: &StandardRelationalModel,
) -> Result<(DynamicalModel, Vec<usize>), TransformError> {
    let voc = Vocabulary::new(
        m.vocabulary().variable_names().to_vec(),
        m.vocabulary().predicates_map(),
        BTreeMap::new(),
    )
    .expect("quotient vocabulary");
    let n = m.num_worlds();
    let joint = m
        .var_eqv()
        .iter()
        .fold(Partition::universal(n), |acc, p| acc.meet(p));
    let classes = joint.classes();
    let class_of: Vec<usize> = (0..n).map(|w| joint.class_of(w)).collect();

    let value_of = |w: usize, v: usize| -> Value {
        let partition = &m.var_eqv()[v];
        let least = (0..n)
            .find(|&u| partition.same_class(u, w))
            .expect("class has members");
        Value::Str(format!("{}:{}", voc.variable_names()[v], m.world_name(least)))
    };

    let state_names: Vec<String> = classes
        .iter()
        .map(|c| m.world_name(c[0]).to_string())
        .collect();
    let values: Vec<Vec<Value>> = classes
        .iter()
        .map(|c| (0..voc.num_variables()).map(|v| value_of(c[0], v)).collect())
        .collect();

    // the transition descends to classes; a validated model guarantees
    // this, and we recheck representative independence
    let mut transition = Vec::with_capacity(classes.len());
    for class in &classes {
        let target = class_of[m.step(class[0])];
        for &w in class {
            if class_of[m.step(w)] != target {
                return Err(TransformError::InternalInvariant(format!(
                    "quotient transition depends on the representative of class of `{}`",
                    m.world_name(class[0])
                )));
            }
        }
        transition.push(target);
    }

    // predicate interpretation: value tuples realized by stored atoms
    let mut pred_interp = vec![BTreeSet::new(); voc.predicates_map().len()];
    for ((p, args), holds_at) in m.atom_val() {
        for &w in holds_at {
            let mut tuple = Vec::with_capacity(args.len());
            for t in args {
                let (depth, base) = t.peel_next();
                let base_var = match base {
                    Term::Var(v) => v.0,
                    _ => {
                        return Err(TransformError::InternalInvariant(
                            "relational atoms hold variable terms only".into(),
                        ))
                    }
                };
                let mut world = w;
                for _ in 0..depth {
                    world = m.step(world);
                }
                tuple.push(value_of(world, base_var));
            }
            pred_interp[p.0].insert(tuple);
        }
    }

    let model = DynamicalModel::new(
        voc,
        state_names,
        transition,
        values,
        pred_interp,
        vec![],
        TruncationInfo::new(),
    );
    model.validate()?;
    Ok((model, class_of))
}

/// Unrolls an assignment team along its step functions into a layered
/// timed model: states are (assignment, stage) pairs for assignments
/// sharing the start's time value, cut off at the horizon with sentinel
/// states. Stage values follow the step-function recursion.
pub fn unroll_lfdf(
    m: &LfdFModel,
    start: usize,
    horizon: usize,
) -> Result<(DynamicalModel, TimingMap), TransformError> {
    if horizon == 0 {
        return Err(TransformError::ZeroHorizon);
    }
    if start >= m.team_size() {
        return Err(TransformError::BadAssignment(start));
    }
    let voc = m.vocabulary();
    let num_basic = voc.num_variables().saturating_sub(1);
    if num_basic == 0 {
        return Err(TransformError::InternalInvariant(
            "unrolling needs at least one basic variable besides the time variable".into(),
        ));
    }
    let time_idx = num_basic;
    let mut step_funcs = Vec::with_capacity(num_basic);
    for v in 0..num_basic {
        let name = format!("f_{}", voc.variable_names()[v]);
        let (f, arity) = voc
            .lookup_func(&name)
            .ok_or_else(|| TransformError::MissingStepFunction(voc.variable_names()[v].clone()))?;
        if arity != num_basic {
            return Err(TransformError::MissingStepFunction(
                voc.variable_names()[v].clone(),
            ));
        }
        step_funcs.push(f);
    }

    let members: Vec<usize> = (0..m.team_size())
        .filter(|&a| m.team()[a][time_idx] == m.team()[start][time_idx])
        .collect();

    // per member, rows for stages 0..=horizon by the step recursion
    let mut rows: Vec<Vec<Vec<Value>>> = Vec::with_capacity(members.len());
    for &a in &members {
        let mut member_rows = Vec::with_capacity(horizon + 1);
        let mut current: Vec<Value> = m.team()[a][..num_basic].to_vec();
        member_rows.push(current.clone());
        for _ in 0..horizon {
            let mut next = Vec::with_capacity(num_basic);
            for f in &step_funcs {
                let value = m
                    .func_table(*f)
                    .get(&current)
                    .cloned()
                    .ok_or_else(|| Violation::FunctionNotTotal {
                        function: "step".into(),
                        args: current
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                    })?;
                next.push(value);
            }
            member_rows.push(next.clone());
            current = next;
        }
        rows.push(member_rows);
    }

    let basic_voc = Vocabulary::new(
        voc.variable_names()[..num_basic].to_vec(),
        voc.predicates_map(),
        voc.functions_map()
            .into_iter()
            .filter(|(name, _)| {
                !(0..num_basic).any(|v| name == &format!("f_{}", voc.variable_names()[v]))
            })
            .collect(),
    )
    .expect("unrolled vocabulary");

    let mut names = Vec::new();
    let mut values = Vec::new();
    let mut transition = Vec::new();
    let mut times = Vec::new();
    let mut truncated = TruncationInfo::new();
    let state_index = |j: usize, i: usize| j * (horizon + 1) + i;
    for (j, &member) in members.iter().enumerate() {
        for i in 0..=horizon {
            names.push(format!("a{member}@{i}"));
            values.push(rows[j][i].clone());
            times.push(TimeValue::Finite(i as u64));
            if i < horizon {
                transition.push(state_index(j, i + 1));
            } else {
                transition.push(state_index(j, i));
                truncated.insert(state_index(j, i));
            }
        }
    }

    // unique determination by the basic rows; merging colliding states
    // would change next-step values, so refuse instead
    for a in 0..values.len() {
        for b in (a + 1)..values.len() {
            if values[a] == values[b] {
                return Err(TransformError::RowCollision {
                    first: names[a].clone(),
                    second: names[b].clone(),
                });
            }
        }
    }

    // keep only the function tables mentioned by the reduced vocabulary
    let func_interp: Vec<BTreeMap<Vec<Value>, Value>> = basic_voc
        .functions()
        .map(|(_, name, _)| {
            let (old, _) = voc.lookup_func(name).expect("kept function");
            m.func_table(old).clone()
        })
        .collect();
    let pred_interp = m.pred_interp().to_vec();

    let model = DynamicalModel::new(
        basic_voc,
        names,
        transition,
        values,
        pred_interp,
        func_interp,
        truncated,
    );
    model.validate()?;
    let timing = TimingMap::new(times);
    Ok((model, timing))
}

/// Packs a timed model into an assignment team over an added time
/// variable: one assignment per state carrying its values and time, and
/// per basic variable a step function defined on realized rows by the
/// transition and elsewhere by the fresh infinite object.
pub fn to_lfdf(
    m: &DynamicalModel,
    timing: &TimingMap,
) -> Result<(LfdFModel, ExtendedVocabulary), TransformError> {
    let voc = m.vocabulary();
    let num_basic = voc.num_variables();
    let ext = extended_vocabulary(voc);

    let time_value = |t: TimeValue| match t {
        TimeValue::Finite(n) => Value::Int(n as i64),
        TimeValue::Infinite => Value::Inf,
    };

    let mut objects: BTreeSet<Value> = m.value_universe(64);
    let max_finite = timing
        .values()
        .iter()
        .filter_map(|t| match t {
            TimeValue::Finite(n) => Some(*n),
            TimeValue::Infinite => None,
        })
        .max();
    if let Some(max) = max_finite {
        for i in 0..=max {
            objects.insert(Value::Int(i as i64));
        }
    }
    objects.insert(Value::Inf);

    let team: Vec<Assignment> = m
        .states()
        .map(|s| {
            let mut row = m.state_values(s).to_vec();
            row.push(time_value(timing.time(s)));
            row
        })
        .collect();

    // realized basic rows pin down a unique state
    let mut row_to_state: BTreeMap<Vec<Value>, usize> = BTreeMap::new();
    for s in m.states() {
        row_to_state.insert(m.state_values(s).to_vec(), s);
    }

    let object_list: Vec<Value> = objects.iter().cloned().collect();
    let table_size = (object_list.len() as u64)
        .checked_pow(num_basic as u32)
        .unwrap_or(u64::MAX);
    if table_size > 250_000 {
        return Err(TransformError::TableTooLarge(table_size));
    }
    let mut all_tuples: Vec<Vec<Value>> = vec![Vec::new()];
    for _ in 0..num_basic {
        all_tuples = all_tuples
            .into_iter()
            .flat_map(|prefix| {
                object_list.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v.clone());
                    next
                })
            })
            .collect();
    }

    let mut func_interp: Vec<BTreeMap<Vec<Value>, Value>> =
        vec![BTreeMap::new(); ext.voc.functions_map().len()];
    for (v, f) in ext.step_funcs.iter().enumerate() {
        let mut table = BTreeMap::new();
        for tuple in &all_tuples {
            let image = match row_to_state.get(tuple) {
                Some(&s) => m.var_value(m.step(s), crate::syntax::VarId(v)).clone(),
                None => Value::Inf,
            };
            table.insert(tuple.clone(), image);
        }
        func_interp[f.0] = table;
    }
    // original function symbols: defined rows kept, the rest infinite
    for (old, name, arity) in voc.functions() {
        let (new, _) = ext.voc.lookup_func(name).expect("kept function");
        let mut rows: Vec<Vec<Value>> = vec![Vec::new()];
        for _ in 0..arity {
            rows = rows
                .into_iter()
                .flat_map(|prefix| {
                    object_list.iter().map(move |v| {
                        let mut next = prefix.clone();
                        next.push(v.clone());
                        next
                    })
                })
                .collect();
        }
        let mut table = BTreeMap::new();
        for row in rows {
            let image = m
                .func_table(old)
                .get(&row)
                .cloned()
                .unwrap_or(Value::Inf);
            table.insert(row, image);
        }
        func_interp[new.0] = table;
    }

    let model = LfdFModel::new(
        ext.voc.clone(),
        objects,
        m.pred_interp().to_vec(),
        func_interp,
        team,
    );
    model.validate()?;
    Ok((model, ext))
}

/// Convenience: computes the timing map first.
pub fn to_lfdf_auto(m: &DynamicalModel) -> Result<(LfdFModel, ExtendedVocabulary), TransformError> {
    let timing = timing_map(m)?;
    to_lfdf(m, &timing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::gen;
    use crate::semantics::{
        eval_dynamical, eval_lfdf, eval_standard, eval_timed, valid_on_dynamical,
    };
    use crate::syntax::{parse_formula, Dialect};
    use crate::translate::{eliminate_next, tr_to_lfdf};

    #[test]
    fn fib_to_standard_shape() {
        let m = gallery::fib_mod(5);
        let r = to_standard(&m, 2).unwrap();
        assert_eq!(r.num_worlds(), 25);
        // agreement on x has five classes of five
        let x_classes = r.var_eqv()[0].classes();
        assert_eq!(x_classes.len(), 5);
        assert!(x_classes.iter().all(|c| c.len() == 5));
        r.validate().unwrap();
    }

    #[test]
    fn one_state_model_round_trips() {
        let m = gallery::fib_mod(1);
        assert_eq!(m.num_states(), 1);
        let r = to_standard(&m, 1).unwrap();
        assert_eq!(r.num_worlds(), 1);
        assert!(r.var_eqv().iter().all(|p| p.num_classes() == 1));
        let (back, map) = to_dynamical(&r).unwrap();
        assert_eq!(back.num_states(), 1);
        assert_eq!(map, vec![0]);
    }

    #[test]
    fn quotient_collapses_agreeing_worlds() {
        // three worlds, two of them fully agreeing
        let voc = crate::syntax::Vocabulary::of_variables(&["x"]).unwrap();
        let m = StandardRelationalModel::new(
            voc,
            vec!["a".into(), "b".into(), "c".into()],
            vec![2, 2, 2],
            vec![Partition::from_labels(&[0, 0, 1])],
            BTreeMap::new(),
            0,
        );
        m.validate().unwrap();
        let (quotient, map) = to_dynamical(&m).unwrap();
        assert_eq!(quotient.num_states(), 2);
        assert_eq!(map[0], map[1]);
        assert_ne!(map[0], map[2]);
        quotient.validate().unwrap();
    }

    #[test]
    fn quotient_values_are_tagged_per_variable() {
        // two variables with identical partitions must still produce
        // distinct values, or cross-variable atoms would bleed truth
        let voc = crate::syntax::Vocabulary::new(
            vec!["u".into(), "w".into()],
            BTreeMap::from([("P".into(), 1)]),
            BTreeMap::new(),
        )
        .unwrap();
        let x = crate::syntax::parse_term("u", &voc, Dialect::Core).unwrap();
        let m = StandardRelationalModel::new(
            voc.clone(),
            vec!["a".into(), "b".into()],
            vec![0, 1],
            vec![Partition::singletons(2), Partition::singletons(2)],
            BTreeMap::from([(
                (voc.lookup_pred("P").unwrap().0, vec![x]),
                BTreeSet::from([0]),
            )]),
            1,
        );
        m.validate().unwrap();
        let (quotient, map) = to_dynamical(&m).unwrap();
        let f = parse_formula("P(w)", &voc, Dialect::Core).unwrap();
        for world in m.worlds() {
            assert_eq!(
                eval_standard(&m, world, &f).unwrap(),
                eval_dynamical(&quotient, map[world], &f).unwrap()
            );
        }
    }

    #[test]
    fn semantics_preserved_both_ways() {
        let mut rng = gen::rng_from_seed(71);
        for round in 0..8 {
            let cfg = gen::ModelCfg {
                num_states: 5,
                num_vars: 2,
                num_values: 2,
                pred_arities: vec![1],
                func_arities: vec![],
            };
            let m = gen::random_dynamical(&mut rng, &cfg);
            let standard = to_standard(&m, 2).unwrap();
            standard.validate().unwrap();
            let voc = m.vocabulary().clone();
            let fcfg = gen::FormulaCfg {
                max_depth: 3,
                max_td: 2,
                dialect: Dialect::Core,
                allow_ident: false,
            };
            for _ in 0..25 {
                let f = gen::random_formula(&mut rng, &voc, &fcfg);
                for s in m.states() {
                    assert_eq!(
                        eval_dynamical(&m, s, &f).unwrap(),
                        eval_standard(&standard, s, &f).unwrap(),
                        "round {round}: {}",
                        crate::syntax::render(&f, &voc)
                    );
                }
            }

            let relational = gen::random_standard(&mut rng, &cfg, 2);
            relational.validate().unwrap();
            let (quotient, map) = to_dynamical(&relational).unwrap();
            for _ in 0..25 {
                let f = gen::random_formula(&mut rng, &voc, &fcfg);
                for w in relational.worlds() {
                    assert_eq!(
                        eval_standard(&relational, w, &f).unwrap(),
                        eval_dynamical(&quotient, map[w], &f).unwrap(),
                        "round {round}: {}",
                        crate::syntax::render(&f, &voc)
                    );
                }
            }
        }
    }

    #[test]
    fn unroll_single_assignment_chain() {
        // one assignment, one basic variable, f_x is the identity
        let voc = crate::syntax::Vocabulary::new(
            vec!["x".into(), "tau".into()],
            BTreeMap::new(),
            BTreeMap::from([("f_x".into(), 1)]),
        )
        .unwrap();
        let objects: BTreeSet<Value> = [Value::Int(0), Value::Int(7)].into();
        let m = LfdFModel::new(
            voc,
            objects.clone(),
            vec![],
            vec![objects
                .iter()
                .map(|v| (vec![v.clone()], Value::Int(7)))
                .collect()],
            vec![vec![Value::Int(0), Value::Int(0)]],
        );
        m.validate().unwrap();
        let err = unroll_lfdf(&m, 0, 0).unwrap_err();
        assert!(matches!(err, TransformError::ZeroHorizon));
        // identity dynamics collide rows; horizon 1 is fine (0 then 7)
        let (model, timing) = unroll_lfdf(&m, 0, 1).unwrap();
        assert_eq!(model.num_states(), 2);
        assert_eq!(timing.time(0), TimeValue::Finite(0));
        assert_eq!(timing.time(1), TimeValue::Finite(1));
        // horizon 2 repeats the value 7 and is refused
        assert!(matches!(
            unroll_lfdf(&m, 0, 2),
            Err(TransformError::RowCollision { .. })
        ));
    }

    #[test]
    fn timed_model_to_team_and_back() {
        let mut rng = gen::rng_from_seed(81);
        for _ in 0..6 {
            let cfg = gen::ModelCfg {
                num_states: 6,
                num_vars: 2,
                num_values: 3,
                pred_arities: vec![1],
                func_arities: vec![],
            };
            let m = gen::random_timed(&mut rng, &cfg);
            let timing = timing_map(&m).unwrap();
            let (team, ext) = to_lfdf(&m, &timing).unwrap();
            assert_eq!(team.team_size(), m.num_states());

            // truth transfer for next-free formulas
            let voc = m.vocabulary().clone();
            let fcfg = gen::FormulaCfg {
                max_depth: 3,
                max_td: 1,
                dialect: Dialect::Timed,
                allow_ident: false,
            };
            let horizon = crate::analysis::truncation_horizon(&m, &timing);
            for _ in 0..10 {
                let f = eliminate_next(&gen::random_formula(&mut rng, &voc, &fcfg));
                let (translated, ext2) = tr_to_lfdf(&f, &voc).unwrap();
                assert_eq!(ext2.voc, ext.voc);
                let td = f.temporal_depth() as u64;
                for s in m.states() {
                    let in_range = match (horizon, timing.time(s)) {
                        (None, _) => true,
                        (Some(TimeValue::Finite(h)), TimeValue::Finite(t)) => t + td <= h,
                        _ => false,
                    };
                    if !in_range {
                        continue;
                    }
                    assert_eq!(
                        eval_timed(&m, &timing, s, &f).unwrap(),
                        eval_lfdf(&team, s, &translated).unwrap(),
                        "formula {}",
                        crate::syntax::render(&f, &voc)
                    );
                }
            }
        }
    }

    #[test]
    fn unrolled_model_satisfies_stage_value_law() {
        // build a team from a concrete timed model, then unroll it
        // the two branches of this system merge at stage 2, which the
        // unrolling refuses; horizon 1 stays collision-free
        let m = gallery::fig2_s3();
        let timing = timing_map(&m).unwrap();
        let (team, ext) = to_lfdf(&m, &timing).unwrap();
        let start = 0; // state w0, time 0
        assert!(matches!(
            unroll_lfdf(&team, start, 2),
            Err(TransformError::RowCollision { .. })
        ));
        let horizon = 1;
        let (unrolled, unrolled_timing) = unroll_lfdf(&team, start, horizon).unwrap();
        unrolled.validate().unwrap();
        assert_eq!(timing_map(&unrolled).unwrap(), unrolled_timing);
        let c = crate::analysis::classify(&unrolled);
        assert!(c.timed && c.temporal && c.linear_time && c.finite_past);

        // stage values equal the translated repeated-shift terms
        let num_basic = m.vocabulary().num_variables();
        for j in 0..team.team_size() {
            if team.team()[j][num_basic] != team.team()[start][num_basic] {
                continue;
            }
            for n in 0..=horizon {
                for v in 0..num_basic {
                    let term = Term::var(v).next_n(n);
                    let translated = {
                        // Tr(O^n v) via the embedding of the bare term
                        let f = Formula::Ident(term.clone(), term.clone());
                        let (t, _) = tr_to_lfdf(&f, m.vocabulary()).unwrap();
                        match t {
                            Formula::Ident(a, _) => a,
                            _ => unreachable!(),
                        }
                    };
                    let member_index: Vec<usize> = (0..team.team_size())
                        .filter(|&a| team.team()[a][num_basic] == team.team()[start][num_basic])
                        .collect();
                    let slot = member_index.iter().position(|&a| a == j).unwrap();
                    let state = slot * (horizon + 1) + n;
                    let expected = team
                        .term_value(&team.team()[j].clone(), &translated)
                        .unwrap();
                    assert_eq!(
                        unrolled.term_value(state, &Term::var(v)).unwrap(),
                        expected,
                        "stage {n} variable {v}"
                    );
                    let _ = ext.time_var;
                }
            }
        }
    }

    #[test]
    fn fibonacci_axioms_survive_to_standard() {
        let m = gallery::fib_mod(3);
        let standard = to_standard(&m, 1).unwrap();
        let voc = m.vocabulary().clone();
        let f = parse_formula("dep[x,y] Ox", &voc, Dialect::Core).unwrap();
        assert!(valid_on_dynamical(&m, &f).unwrap());
        for w in standard.worlds() {
            assert!(eval_standard(&standard, w, &f).unwrap());
        }
    }
}
