//! Randomized soundness sweep: schema instances evaluated for validity
//! on suites of validated models. Any counterexample indicates an
//! implementation bug, never a genuine failure of the calculus.

use super::schemas::{derived_principles, instantiate, schemas, AxiomSchema, Bindings, SlotKind, SlotValue};
use crate::analysis::{truncation_horizon, TimeValue, TimingMap};
use crate::gen;
use crate::models::{DynamicalModel, GeneralRelationalModel};
use crate::semantics::{DynamicalEvaluator, EvalError, GeneralEvaluator};
use crate::syntax::{Dialect, Formula, Term, TermSet, VarId, Vocabulary};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// One suite member, paired with whatever timing data its semantics
/// needs.
#[derive(Debug, Clone)]
pub enum SuiteModel {
    Dynamical(DynamicalModel),
    General(GeneralRelationalModel),
    Timed(DynamicalModel, TimingMap),
}

#[derive(Debug, Clone)]
pub struct HarnessConfig {
    pub samples: usize,
    pub max_term_depth: usize,
    pub seed: u64,
    pub parallel: bool,
    pub include_derived: bool,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            samples: 100,
            max_term_depth: 2,
            seed: 0,
            parallel: false,
            include_derived: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub schema: String,
    pub formula: String,
    pub model_index: usize,
    pub state: String,
}

#[derive(Debug, Clone)]
pub struct SoundnessReport {
    pub system: Dialect,
    pub instances: usize,
    pub pairs_checked: usize,
    pub pairs_skipped: usize,
    pub counterexamples: Vec<Counterexample>,
}

fn random_bindings(
    rng: &mut ChaCha8Rng,
    schema: &AxiomSchema,
    voc: &Vocabulary,
    dialect: Dialect,
    max_term_depth: usize,
) -> Option<Bindings> {
    let fcfg = gen::FormulaCfg {
        max_depth: 2,
        max_td: max_term_depth.min(1),
        dialect,
        allow_ident: dialect.allows_identity(),
    };
    let mut bindings = Bindings::new();
    // substitution needs its replaced term to occur in the formula
    if schema.name == "Identity-Substitution" {
        let phi = gen::random_formula(rng, voc, &fcfg);
        let mut subterms = Vec::new();
        collect_subterms(&phi, &mut subterms);
        if subterms.is_empty() {
            return None;
        }
        let x = subterms[rng.gen_range(0..subterms.len())].clone();
        let count = super::schemas::count_term_occurrences(&phi, &x);
        let occurrence = rng.gen_range(0..count);
        let y = gen::random_term(rng, voc, max_term_depth, dialect);
        bindings.insert("phi", SlotValue::Formula(phi));
        bindings.insert("x", SlotValue::Term(x));
        bindings.insert("y", SlotValue::Term(y));
        bindings.insert("occurrence", SlotValue::Nat(occurrence));
        return Some(bindings);
    }
    for (slot, kind) in schema.slots {
        let value = match kind {
            SlotKind::Formula => SlotValue::Formula(gen::random_formula(rng, voc, &fcfg)),
            SlotKind::Atom => {
                let preds: Vec<_> = voc.predicates().collect();
                if preds.is_empty() {
                    return None;
                }
                let (p, _, arity) = preds[rng.gen_range(0..preds.len())];
                let args = (0..arity)
                    .map(|_| gen::random_term(rng, voc, max_term_depth, dialect))
                    .collect();
                SlotValue::Formula(Formula::Pred(p, args))
            }
            SlotKind::Term => SlotValue::Term(gen::random_term(rng, voc, max_term_depth, dialect)),
            SlotKind::Variable => {
                SlotValue::Term(Term::Var(VarId(rng.gen_range(0..voc.num_variables()))))
            }
            SlotKind::TermSet => {
                SlotValue::TermSet(gen::random_term_set(rng, voc, max_term_depth, dialect))
            }
            SlotKind::NonEmptyTermSet => {
                let mut set = gen::random_term_set(rng, voc, max_term_depth, dialect);
                if set.is_empty() {
                    set = TermSet::singleton(gen::random_term(rng, voc, max_term_depth, dialect));
                }
                SlotValue::TermSet(set)
            }
            SlotKind::Func => {
                let funcs: Vec<_> = voc.functions().collect();
                if funcs.is_empty() {
                    return None;
                }
                let (f, _, _) = funcs[rng.gen_range(0..funcs.len())];
                SlotValue::Func(f)
            }
            SlotKind::Nat => SlotValue::Nat(rng.gen_range(0..=2)),
        };
        bindings.insert(slot, value);
    }
    // side conditions that relate slots
    match schema.name {
        "Dep-Ref" => {
            let set = match bindings.get("X") {
                Some(SlotValue::TermSet(set)) if !set.is_empty() => set.clone(),
                _ => TermSet::singleton(gen::random_term(rng, voc, max_term_depth, dialect)),
            };
            let member = set.terms()[rng.gen_range(0..set.len())].clone();
            bindings.insert("X", SlotValue::TermSet(set));
            bindings.insert("x", SlotValue::Term(member));
        }
        "Dep-Monotonicity" => {
            if let (Some(SlotValue::TermSet(x)), Some(SlotValue::TermSet(z))) =
                (bindings.get("X"), bindings.get("Z"))
            {
                let union = x.union(z);
                bindings.insert("Z", SlotValue::TermSet(union));
            }
        }
        "Quantifier-Monotonicity" => {
            if let (Some(SlotValue::TermSet(x)), Some(SlotValue::TermSet(y))) =
                (bindings.get("X"), bindings.get("Y"))
            {
                let union = x.union(y);
                bindings.insert("Y", SlotValue::TermSet(union));
            }
        }
        "Function-Dependence" | "Term-Reduction" => {
            // argument list must match the function's arity
            if let Some(SlotValue::Func(f)) = bindings.get("f") {
                let arity = voc.func_arity(*f);
                if arity == 0 {
                    return None;
                }
                let args: Vec<Term> = (0..arity)
                    .map(|_| gen::random_term(rng, voc, max_term_depth, dialect))
                    .collect();
                bindings.insert("args", SlotValue::TermSet(TermSet::new(args)));
            }
        }
        _ => {}
    }
    Some(bindings)
}

fn collect_subterms(f: &Formula, out: &mut Vec<Term>) {
    fn from_term(t: &Term, out: &mut Vec<Term>) {
        out.push(t.clone());
        match t {
            Term::Var(_) => {}
            Term::Next(inner) => from_term(inner, out),
            Term::App(_, args) => args.iter().for_each(|a| from_term(a, out)),
        }
    }
    match f {
        Formula::Pred(_, args) => args.iter().for_each(|a| from_term(a, out)),
        Formula::Ident(a, b) => {
            from_term(a, out);
            from_term(b, out);
        }
        Formula::Not(g) | Formula::Next(g) => collect_subterms(g, out),
        Formula::And(a, b) => {
            collect_subterms(a, out);
            collect_subterms(b, out);
        }
        Formula::DepMod(x, g) => {
            x.iter().for_each(|t| from_term(t, out));
            collect_subterms(g, out);
        }
        Formula::DepAtom(x, y) => {
            x.iter().for_each(|t| from_term(t, out));
            from_term(y, out);
        }
    }
}

/// Validity on one suite model. Timed models with truncation sentinels
/// are checked on the states whose next-step reach stays inside the
/// horizon; general models whose depth bound cannot host the instance
/// report a skip.
fn check_on_model(
    model: &SuiteModel,
    formula: &Formula,
) -> Result<Option<Option<String>>, EvalError> {
    match model {
        SuiteModel::Dynamical(m) => {
            let mut evaluator = DynamicalEvaluator::new(m);
            for s in m.states() {
                if !evaluator.eval(s, formula)? {
                    return Ok(Some(Some(m.state_name(s).to_string())));
                }
            }
            Ok(Some(None))
        }
        SuiteModel::General(m) => {
            if formula.temporal_depth() > m.depth_bound() {
                return Ok(None); // skip: out of the stored universe
            }
            let mut evaluator = GeneralEvaluator::new(m);
            for w in m.worlds() {
                if !evaluator.eval(w, formula)? {
                    return Ok(Some(Some(m.world_name(w).to_string())));
                }
            }
            Ok(Some(None))
        }
        SuiteModel::Timed(m, timing) => {
            let horizon = truncation_horizon(m, timing);
            let td = formula.temporal_depth() as u64;
            let mut evaluator = DynamicalEvaluator::new_timed(m, timing);
            let mut any = false;
            for s in m.states() {
                let in_range = match (horizon, timing.time(s)) {
                    (None, _) => true,
                    (Some(TimeValue::Finite(h)), TimeValue::Finite(t)) => t + td <= h,
                    _ => false,
                };
                if !in_range {
                    continue;
                }
                any = true;
                if !evaluator.eval(s, formula)? {
                    return Ok(Some(Some(m.state_name(s).to_string())));
                }
            }
            if any {
                Ok(Some(None))
            } else {
                Ok(None) // skip: no state lies inside the horizon
            }
        }
    }
}

fn suite_vocabulary(model: &SuiteModel) -> &Vocabulary {
    match model {
        SuiteModel::Dynamical(m) => m.vocabulary(),
        SuiteModel::General(m) => m.vocabulary(),
        SuiteModel::Timed(m, _) => m.vocabulary(),
    }
}

/// Sweeps random instances of the calculus over the suite. All suite
/// members must share one vocabulary.
pub fn soundness_harness(
    system: Dialect,
    suite: &[SuiteModel],
    cfg: &HarnessConfig,
) -> Result<SoundnessReport, EvalError> {
    let voc = match suite.first() {
        Some(model) => suite_vocabulary(model).clone(),
        None => {
            return Ok(SoundnessReport {
                system,
                instances: 0,
                pairs_checked: 0,
                pairs_skipped: 0,
                counterexamples: Vec::new(),
            })
        }
    };
    let mut rng = gen::rng_from_seed(cfg.seed);
    let mut pool: Vec<AxiomSchema> = schemas()
        .into_iter()
        .filter(|s| s.dialects.contains(&system))
        .collect();
    if cfg.include_derived {
        pool.extend(
            derived_principles()
                .into_iter()
                .filter(|s| s.dialects.contains(&system)),
        );
    }

    let mut instances: Vec<(String, Formula)> = Vec::with_capacity(cfg.samples);
    let mut guard = 0;
    while instances.len() < cfg.samples && guard < cfg.samples * 50 {
        guard += 1;
        let schema = &pool[rng.gen_range(0..pool.len())];
        let Some(bindings) = random_bindings(&mut rng, schema, &voc, system, cfg.max_term_depth)
        else {
            continue;
        };
        match instantiate(schema, &bindings, &voc, system) {
            Ok(formula) => instances.push((schema.name.to_string(), formula)),
            Err(_) => continue,
        }
    }

    let jobs: Vec<(usize, &(String, Formula))> = suite
        .iter()
        .enumerate()
        .flat_map(|(i, _)| instances.iter().map(move |inst| (i, inst)))
        .collect();
    let run_one = |(model_index, (name, formula)): &(usize, &(String, Formula))| -> Result<
        (bool, Option<Counterexample>),
        EvalError,
    > {
        match check_on_model(&suite[*model_index], formula)? {
            None => Ok((false, None)),
            Some(None) => Ok((true, None)),
            Some(Some(state)) => Ok((
                true,
                Some(Counterexample {
                    schema: name.clone(),
                    formula: crate::syntax::render(formula, &voc),
                    model_index: *model_index,
                    state,
                }),
            )),
        }
    };
    let outcomes: Result<Vec<(bool, Option<Counterexample>)>, EvalError> = if cfg.parallel {
        jobs.par_iter().map(run_one).collect()
    } else {
        jobs.iter().map(run_one).collect()
    };
    let outcomes = outcomes?;
    let mut checked = 0;
    let mut skipped = 0;
    let mut counterexamples = Vec::new();
    for (ran, counterexample) in outcomes {
        if ran {
            checked += 1;
        } else {
            skipped += 1;
        }
        if let Some(c) = counterexample {
            counterexamples.push(c);
        }
    }
    counterexamples.sort_by(|a, b| {
        (a.model_index, &a.schema, &a.formula).cmp(&(b.model_index, &b.schema, &b.formula))
    });
    Ok(SoundnessReport {
        system,
        instances: instances.len(),
        pairs_checked: checked,
        pairs_skipped: skipped,
        counterexamples,
    })
}

/// A standard suite of random models matching the system's semantics.
/// One vocabulary is drawn for the whole suite so that instances
/// evaluate on every member; for the untimed systems a third of the
/// members are induced general models whose depth bound is 3.
pub fn random_suite(
    system: Dialect,
    count: usize,
    max_states: usize,
    max_vars: usize,
    seed: u64,
) -> Vec<SuiteModel> {
    let mut rng = gen::rng_from_seed(seed);
    let num_vars = rng.gen_range(1..=max_vars.max(1));
    let base_cfg = gen::ModelCfg {
        num_states: max_states.max(1),
        num_vars,
        num_values: 3,
        pred_arities: vec![1, 2],
        func_arities: if system.allows_functions() {
            vec![1, 2]
        } else {
            vec![]
        },
    };
    let mut suite = Vec::with_capacity(count);
    for i in 0..count {
        let cfg = gen::ModelCfg {
            num_states: rng.gen_range(1..=max_states.max(1)),
            num_values: rng.gen_range(2..=3),
            ..base_cfg.clone()
        };
        let model = match system {
            Dialect::Core | Dialect::NonEmpty => {
                // induced general models need a small bounded universe
                // for their exhaustive validator: one variable, bound 3
                if i % 3 == 2 && num_vars == 1 {
                    let small = gen::ModelCfg {
                        num_states: rng.gen_range(1..=4),
                        num_values: 2,
                        pred_arities: vec![1, 2],
                        ..base_cfg.clone()
                    };
                    let base = gen::random_dynamical(&mut rng, &small);
                    let induced = gen::induce_general(&base, 3).expect("small universe");
                    if system == Dialect::NonEmpty {
                        SuiteModel::General(gen::restrict_nonempty(&induced))
                    } else {
                        SuiteModel::General(induced)
                    }
                } else {
                    SuiteModel::Dynamical(gen::random_dynamical(&mut rng, &cfg))
                }
            }
            Dialect::Timed | Dialect::TimedFuncId => {
                let m = gen::random_timed(&mut rng, &cfg);
                let timing = crate::analysis::timing_map(&m).expect("generator yields timed");
                SuiteModel::Timed(m, timing)
            }
        };
        suite.push(model);
    }
    suite
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_sweep_finds_no_counterexamples() {
        for system in Dialect::ALL {
            let suite = random_suite(system, 6, 6, 3, 1000 + system as u64);
            let cfg = HarnessConfig {
                samples: 40,
                max_term_depth: 2,
                seed: 7,
                parallel: false,
                include_derived: true,
            };
            let report = soundness_harness(system, &suite, &cfg).unwrap();
            assert!(
                report.counterexamples.is_empty(),
                "{system}: {:?}",
                report.counterexamples.first()
            );
            assert!(report.pairs_checked > 0);
        }
    }

    #[test]
    fn parallel_reports_match_sequential() {
        let suite = random_suite(Dialect::Core, 4, 5, 2, 42);
        let mut cfg = HarnessConfig {
            samples: 20,
            max_term_depth: 1,
            seed: 3,
            parallel: false,
            include_derived: false,
        };
        let sequential = soundness_harness(Dialect::Core, &suite, &cfg).unwrap();
        cfg.parallel = true;
        let parallel = soundness_harness(Dialect::Core, &suite, &cfg).unwrap();
        assert_eq!(sequential.pairs_checked, parallel.pairs_checked);
        assert_eq!(sequential.counterexamples, parallel.counterexamples);
    }

    #[test]
    fn dropped_axiom_fails_under_synchronized_semantics() {
        // the universal-future axiom is not part of the timed calculus;
        // build a direct counterexample to confirm the gap is real
        use crate::models::{TruncationInfo, Value};
        let voc = Vocabulary::new(
            vec!["x".into()],
            std::collections::BTreeMap::from([("P".into(), 1)]),
            std::collections::BTreeMap::new(),
        )
        .unwrap();
        // two chains: values chosen so that P(x) holds at time 0 states
        // but fails at a time 1 state
        let m = DynamicalModel::new(
            voc.clone(),
            vec!["a0".into(), "a1".into(), "b0".into(), "b1".into()],
            vec![1, 1, 3, 3],
            vec![
                vec![Value::Int(0)],
                vec![Value::Int(1)],
                vec![Value::Int(2)],
                vec![Value::Int(3)],
            ],
            vec![[vec![Value::Int(0)], vec![Value::Int(2)]]
                .into_iter()
                .collect()],
            vec![],
            TruncationInfo::from([1usize, 3usize]),
        );
        let timing = crate::analysis::timing_map(&m).unwrap();
        let f = crate::syntax::parse_formula("D[] P(x) -> O P(x)", &voc, Dialect::Timed).unwrap();
        // under the synchronized reading the premise only quantifies
        // over the current moment, so the instance fails at time 0
        assert!(!crate::semantics::eval_timed(&m, &timing, 0, &f).unwrap());
    }
}
