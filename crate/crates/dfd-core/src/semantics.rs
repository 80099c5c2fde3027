//! Formula evaluation on the four model classes, plus the synchronized
//! variant on timed models. Each evaluator memoizes term-set agreement
//! partitions and per-state truth within its own lifetime; a fresh
//! evaluator recomputes from scratch.

use crate::analysis::{timing_map, NotTimed, TimingMap};
use crate::models::{
    DynamicalModel, GeneralRelationalModel, LfdFModel, Model, Partition,
    StandardRelationalModel, Value, Violation,
};
use crate::syntax::{Formula, Term, TermSet};
use std::collections::HashMap;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Model(#[from] Violation),
    #[error("`{construct}` cannot be evaluated on {model_kind} models")]
    Unsupported {
        construct: &'static str,
        model_kind: &'static str,
    },
    #[error(transparent)]
    NotTimed(#[from] NotTimed),
    #[error("unknown state `{0}`")]
    UnknownState(String),
}

/// Evaluator for dynamical models; with a timing map attached, the
/// dependence operators quantify over synchronized value agreement
/// instead of plain value agreement. These are two distinct relation
/// constructions, not a defaulted parameter: the empty set yields the
/// universal relation in one and the equal-time relation in the other.
pub struct DynamicalEvaluator<'m> {
    model: &'m DynamicalModel,
    timing: Option<&'m TimingMap>,
    classes: HashMap<TermSet, (Partition, Vec<Vec<usize>>)>,
    truth: HashMap<(Formula, usize), bool>,
    ident: HashMap<(Term, Term), bool>,
}

impl<'m> DynamicalEvaluator<'m> {
    pub fn new(model: &'m DynamicalModel) -> Self {
        DynamicalEvaluator {
            model,
            timing: None,
            classes: HashMap::new(),
            truth: HashMap::new(),
            ident: HashMap::new(),
        }
    }

    pub fn new_timed(model: &'m DynamicalModel, timing: &'m TimingMap) -> Self {
        DynamicalEvaluator {
            model,
            timing: Some(timing),
            classes: HashMap::new(),
            truth: HashMap::new(),
            ident: HashMap::new(),
        }
    }

    fn partition_for(&mut self, x: &TermSet) -> Result<&(Partition, Vec<Vec<usize>>), EvalError> {
        if !self.classes.contains_key(x) {
            let plain = self.model.agreement_partition(x)?;
            let partition = match self.timing {
                None => plain,
                Some(t) => Partition::by_key(self.model.num_states(), |s| {
                    (plain.class_of(s), t.time(s))
                }),
            };
            let members = partition.classes();
            self.classes.insert(x.clone(), (partition, members));
        }
        Ok(&self.classes[x])
    }

    fn global_ident(&mut self, a: &Term, b: &Term) -> Result<bool, EvalError> {
        let key = (a.clone(), b.clone());
        if let Some(&cached) = self.ident.get(&key) {
            return Ok(cached);
        }
        let mut holds = true;
        for s in self.model.states() {
            if self.model.term_value(s, a)? != self.model.term_value(s, b)? {
                holds = false;
                break;
            }
        }
        self.ident.insert(key, holds);
        Ok(holds)
    }

    pub fn eval(&mut self, state: usize, formula: &Formula) -> Result<bool, EvalError> {
        let key = (formula.clone(), state);
        if let Some(&cached) = self.truth.get(&key) {
            return Ok(cached);
        }
        let result = match formula {
            Formula::Pred(p, args) => {
                let mut row = Vec::with_capacity(args.len());
                for t in args {
                    row.push(self.model.term_value(state, t)?);
                }
                self.model.pred_tuples(*p).contains(&row)
            }
            // Term identity is global over all states, also under the
            // synchronized semantics.
            Formula::Ident(a, b) => self.global_ident(a, b)?,
            Formula::Not(f) => !self.eval(state, f)?,
            Formula::And(a, b) => self.eval(state, a)? && self.eval(state, b)?,
            Formula::Next(f) => {
                let next = self.model.step(state);
                self.eval(next, f)?
            }
            Formula::DepMod(x, f) => {
                let (partition, classes) = self.partition_for(x)?;
                let members = classes[partition.class_of(state)].clone();
                let mut all = true;
                for w in members {
                    if !self.eval(w, f)? {
                        all = false;
                        break;
                    }
                }
                all
            }
            Formula::DepAtom(x, y) => {
                let model = self.model;
                let (partition, classes) = self.partition_for(x)?;
                let members = &classes[partition.class_of(state)];
                let target = model.term_value(state, y)?;
                let mut all = true;
                for &w in members {
                    if model.term_value(w, y)? != target {
                        all = false;
                        break;
                    }
                }
                all
            }
        };
        self.truth.insert(key, result);
        Ok(result)
    }
}

pub struct StandardEvaluator<'m> {
    model: &'m StandardRelationalModel,
    classes: HashMap<TermSet, (Partition, Vec<Vec<usize>>)>,
    truth: HashMap<(Formula, usize), bool>,
}

impl<'m> StandardEvaluator<'m> {
    pub fn new(model: &'m StandardRelationalModel) -> Self {
        StandardEvaluator {
            model,
            classes: HashMap::new(),
            truth: HashMap::new(),
        }
    }

    fn partition_for(&mut self, x: &TermSet) -> Result<&(Partition, Vec<Vec<usize>>), EvalError> {
        if !self.classes.contains_key(x) {
            let partition = self.model.set_partition(x)?;
            let members = partition.classes();
            self.classes.insert(x.clone(), (partition, members));
        }
        Ok(&self.classes[x])
    }

    pub fn eval(&mut self, world: usize, formula: &Formula) -> Result<bool, EvalError> {
        let key = (formula.clone(), world);
        if let Some(&cached) = self.truth.get(&key) {
            return Ok(cached);
        }
        let result = match formula {
            Formula::Pred(p, args) => self.model.atom_holds(world, *p, args)?,
            Formula::Ident(..) => {
                return Err(EvalError::Unsupported {
                    construct: "term identity",
                    model_kind: "standard relational",
                })
            }
            Formula::Not(f) => !self.eval(world, f)?,
            Formula::And(a, b) => self.eval(world, a)? && self.eval(world, b)?,
            Formula::Next(f) => {
                let next = self.model.step(world);
                self.eval(next, f)?
            }
            Formula::DepMod(x, f) => {
                let (partition, classes) = self.partition_for(x)?;
                let members = classes[partition.class_of(world)].clone();
                let mut all = true;
                for w in members {
                    if !self.eval(w, f)? {
                        all = false;
                        break;
                    }
                }
                all
            }
            Formula::DepAtom(x, y) => {
                let y_partition = self.model.term_partition(y)?;
                let (partition, classes) = self.partition_for(x)?;
                let members = &classes[partition.class_of(world)];
                members
                    .iter()
                    .all(|&w| y_partition.same_class(w, world))
            }
        };
        self.truth.insert(key, result);
        Ok(result)
    }
}

pub struct GeneralEvaluator<'m> {
    model: &'m GeneralRelationalModel,
    classes: HashMap<TermSet, Vec<Vec<usize>>>,
    truth: HashMap<(Formula, usize), bool>,
}

impl<'m> GeneralEvaluator<'m> {
    pub fn new(model: &'m GeneralRelationalModel) -> Self {
        GeneralEvaluator {
            model,
            classes: HashMap::new(),
            truth: HashMap::new(),
        }
    }

    pub fn eval(&mut self, world: usize, formula: &Formula) -> Result<bool, EvalError> {
        let key = (formula.clone(), world);
        if let Some(&cached) = self.truth.get(&key) {
            return Ok(cached);
        }
        let result = match formula {
            Formula::Pred(p, args) => self.model.atom_holds(world, *p, args)?,
            Formula::Ident(..) => {
                return Err(EvalError::Unsupported {
                    construct: "term identity",
                    model_kind: "general relational",
                })
            }
            Formula::Not(f) => !self.eval(world, f)?,
            Formula::And(a, b) => self.eval(world, a)? && self.eval(world, b)?,
            Formula::Next(f) => {
                let next = self.model.step(world);
                self.eval(next, f)?
            }
            Formula::DepMod(x, f) => {
                if !self.classes.contains_key(x) {
                    let partition = self.model.set_partition(x)?;
                    self.classes.insert(x.clone(), partition.classes());
                }
                let partition = self.model.set_partition(x)?;
                let members = self.classes[x][partition.class_of(world)].clone();
                let mut all = true;
                for w in members {
                    if !self.eval(w, f)? {
                        all = false;
                        break;
                    }
                }
                all
            }
            // Dependence atoms are read off the valuation.
            Formula::DepAtom(x, y) => self.model.dep_holds(world, x, y)?,
        };
        self.truth.insert(key, result);
        Ok(result)
    }
}

pub struct LfdfEvaluator<'m> {
    model: &'m LfdFModel,
    truth: HashMap<(Formula, usize), bool>,
    ident: HashMap<(Term, Term), bool>,
}

impl<'m> LfdfEvaluator<'m> {
    pub fn new(model: &'m LfdFModel) -> Self {
        LfdfEvaluator {
            model,
            truth: HashMap::new(),
            ident: HashMap::new(),
        }
    }

    fn agree(&self, a: usize, b: usize, x: &TermSet) -> Result<bool, EvalError> {
        Ok(self.model.agree(a, b, x)?)
    }

    pub fn eval(&mut self, assignment: usize, formula: &Formula) -> Result<bool, EvalError> {
        let key = (formula.clone(), assignment);
        if let Some(&cached) = self.truth.get(&key) {
            return Ok(cached);
        }
        let team = self.model.team();
        let result = match formula {
            Formula::Pred(p, args) => {
                let mut row = Vec::with_capacity(args.len());
                for t in args {
                    row.push(self.model.term_value(&team[assignment], t)?);
                }
                self.model.pred_tuples(*p).contains(&row)
            }
            Formula::Ident(a, b) => {
                let key = (a.clone(), b.clone());
                if let Some(&cached) = self.ident.get(&key) {
                    cached
                } else {
                    let mut holds = true;
                    for w in team {
                        if self.model.term_value(w, a)? != self.model.term_value(w, b)? {
                            holds = false;
                            break;
                        }
                    }
                    self.ident.insert(key, holds);
                    holds
                }
            }
            Formula::Not(f) => !self.eval(assignment, f)?,
            Formula::And(a, b) => self.eval(assignment, a)? && self.eval(assignment, b)?,
            Formula::Next(_) => {
                return Err(EvalError::Unsupported {
                    construct: "next-step formulas",
                    model_kind: "assignment-team",
                })
            }
            Formula::DepMod(x, f) => {
                let mut all = true;
                for other in 0..team.len() {
                    if self.agree(assignment, other, x)? && !self.eval(other, f)? {
                        all = false;
                        break;
                    }
                }
                all
            }
            Formula::DepAtom(x, y) => {
                let y_set = TermSet::singleton(y.clone());
                let mut all = true;
                for other in 0..team.len() {
                    if self.agree(assignment, other, x)? && !self.agree(assignment, other, &y_set)? {
                        all = false;
                        break;
                    }
                }
                all
            }
        };
        self.truth.insert(key, result);
        Ok(result)
    }
}

pub fn eval_dynamical(m: &DynamicalModel, state: usize, f: &Formula) -> Result<bool, EvalError> {
    DynamicalEvaluator::new(m).eval(state, f)
}

pub fn eval_standard(
    m: &StandardRelationalModel,
    world: usize,
    f: &Formula,
) -> Result<bool, EvalError> {
    StandardEvaluator::new(m).eval(world, f)
}

pub fn eval_general(
    m: &GeneralRelationalModel,
    world: usize,
    f: &Formula,
) -> Result<bool, EvalError> {
    GeneralEvaluator::new(m).eval(world, f)
}

/// Synchronized semantics; the timing map is usually the output of
/// [`timing_map`] but truncated constructions may carry their own.
pub fn eval_timed(
    m: &DynamicalModel,
    timing: &TimingMap,
    state: usize,
    f: &Formula,
) -> Result<bool, EvalError> {
    DynamicalEvaluator::new_timed(m, timing).eval(state, f)
}

pub fn eval_lfdf(m: &LfdFModel, assignment: usize, f: &Formula) -> Result<bool, EvalError> {
    LfdfEvaluator::new(m).eval(assignment, f)
}

/// First state refuting the formula, if any, under the given model's
/// own semantics. `None` means the formula is valid on the model.
pub fn find_countermodel_state(
    model: &Model,
    f: &Formula,
    timed: bool,
) -> Result<Option<String>, EvalError> {
    match model {
        Model::Dynamical(m) => {
            if timed {
                let timing = timing_map(m)?;
                let mut evaluator = DynamicalEvaluator::new_timed(m, &timing);
                for s in m.states() {
                    if !evaluator.eval(s, f)? {
                        return Ok(Some(m.state_name(s).to_string()));
                    }
                }
            } else {
                let mut evaluator = DynamicalEvaluator::new(m);
                for s in m.states() {
                    if !evaluator.eval(s, f)? {
                        return Ok(Some(m.state_name(s).to_string()));
                    }
                }
            }
            Ok(None)
        }
        Model::Standard(m) => {
            let mut evaluator = StandardEvaluator::new(m);
            for w in m.worlds() {
                if !evaluator.eval(w, f)? {
                    return Ok(Some(m.world_name(w).to_string()));
                }
            }
            Ok(None)
        }
        Model::General(m) => {
            let mut evaluator = GeneralEvaluator::new(m);
            for w in m.worlds() {
                if !evaluator.eval(w, f)? {
                    return Ok(Some(m.world_name(w).to_string()));
                }
            }
            Ok(None)
        }
        Model::LfdF(m) => {
            let mut evaluator = LfdfEvaluator::new(m);
            for a in 0..m.team_size() {
                if !evaluator.eval(a, f)? {
                    return Ok(Some(format!("assignment {a}")));
                }
            }
            Ok(None)
        }
    }
}

/// True at every state.
pub fn valid_on_model(model: &Model, f: &Formula, timed: bool) -> Result<bool, EvalError> {
    Ok(find_countermodel_state(model, f, timed)?.is_none())
}

pub fn valid_on_dynamical(m: &DynamicalModel, f: &Formula) -> Result<bool, EvalError> {
    let mut evaluator = DynamicalEvaluator::new(m);
    for s in m.states() {
        if !evaluator.eval(s, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn valid_on_timed(
    m: &DynamicalModel,
    timing: &TimingMap,
    f: &Formula,
) -> Result<bool, EvalError> {
    let mut evaluator = DynamicalEvaluator::new_timed(m, timing);
    for s in m.states() {
        if !evaluator.eval(s, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reference implementation without caches, used to cross-check the
/// memoized evaluator.
pub fn eval_dynamical_naive(
    m: &DynamicalModel,
    state: usize,
    f: &Formula,
) -> Result<bool, EvalError> {
    Ok(match f {
        Formula::Pred(p, args) => {
            let mut row = Vec::with_capacity(args.len());
            for t in args {
                row.push(m.term_value(state, t)?);
            }
            m.pred_tuples(*p).contains(&row)
        }
        Formula::Ident(a, b) => {
            let mut holds = true;
            for s in m.states() {
                if m.term_value(s, a)? != m.term_value(s, b)? {
                    holds = false;
                    break;
                }
            }
            holds
        }
        Formula::Not(g) => !eval_dynamical_naive(m, state, g)?,
        Formula::And(a, b) => {
            eval_dynamical_naive(m, state, a)? && eval_dynamical_naive(m, state, b)?
        }
        Formula::Next(g) => eval_dynamical_naive(m, m.step(state), g)?,
        Formula::DepMod(x, g) => {
            let mut all = true;
            for w in m.states() {
                if m.agree(state, w, x)? && !eval_dynamical_naive(m, w, g)? {
                    all = false;
                    break;
                }
            }
            all
        }
        Formula::DepAtom(x, y) => {
            let target = m.term_value(state, y)?;
            let mut all = true;
            for w in m.states() {
                if m.agree(state, w, x)? && m.term_value(w, y)? != target {
                    all = false;
                    break;
                }
            }
            all
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::TimeValue;
    use crate::gallery;
    use crate::models::TruncationInfo;
    use crate::syntax::{parse_formula, Dialect, Vocabulary};

    fn p(src: &str, voc: &Vocabulary, dialect: Dialect) -> Formula {
        parse_formula(src, voc, dialect).unwrap()
    }

    #[test]
    fn fibonacci_dependence_patterns() {
        let m = gallery::fib_mod(5);
        let voc = m.vocabulary().clone();
        assert!(valid_on_dynamical(&m, &p("dep[x,y] Ox", &voc, Dialect::Core)).unwrap());
        assert!(valid_on_dynamical(&m, &p("dep[x,Ox] OOx", &voc, Dialect::Core)).unwrap());
        // brute-force oracle for dep[x,Ox] OOx over all state pairs
        let voc2 = voc.clone();
        let terms = |src: &str| crate::syntax::parse_term(src, &voc2, Dialect::Core).unwrap();
        let (x, ox, oox) = (terms("x"), terms("Ox"), terms("OOx"));
        for s in m.states() {
            for w in m.states() {
                let agree_x = m.term_value(s, &x).unwrap() == m.term_value(w, &x).unwrap();
                let agree_ox = m.term_value(s, &ox).unwrap() == m.term_value(w, &ox).unwrap();
                if agree_x && agree_ox {
                    assert_eq!(
                        m.term_value(s, &oox).unwrap(),
                        m.term_value(w, &oox).unwrap()
                    );
                }
            }
        }
        // dep[x] y fails everywhere, with a countermodel state
        let dep_xy = p("dep[x] y", &voc, Dialect::Core);
        assert!(!valid_on_dynamical(&m, &dep_xy).unwrap());
        let counter =
            find_countermodel_state(&Model::Dynamical(m.clone()), &dep_xy, false).unwrap();
        assert_eq!(counter, Some("0,0".to_string()));
    }

    #[test]
    fn fibonacci_identities() {
        let m = gallery::fib_mod(5);
        let voc = m.vocabulary().clone();
        for src in ["Ox == y", "Oy == S(x,y)", "OOx == S(x,Ox)"] {
            let f = p(src, &voc, Dialect::TimedFuncId);
            assert!(valid_on_dynamical(&m, &f).unwrap(), "{src}");
        }
        assert!(!valid_on_dynamical(&m, &p("Ox == x", &voc, Dialect::TimedFuncId)).unwrap());
    }

    #[test]
    fn universal_modality_on_empty_set() {
        let m = gallery::fib_mod(3);
        let voc = m.vocabulary().clone();
        // D[] phi is the universal modality under the plain semantics
        let f = p("D[] dep[x,y] Ox", &voc, Dialect::Core);
        assert!(valid_on_dynamical(&m, &f).unwrap());
        let g = p("D[] dep[x] y", &voc, Dialect::Core);
        assert!(!eval_dynamical(&m, 0, &g).unwrap());
    }

    #[test]
    fn functionality_and_atomic_reduction() {
        let mut rng = crate::gen::rng_from_seed(21);
        for _ in 0..10 {
            let cfg = crate::gen::ModelCfg {
                num_states: 4,
                num_vars: 2,
                num_values: 2,
                pred_arities: vec![1],
                func_arities: vec![],
            };
            let m = crate::gen::random_dynamical(&mut rng, &cfg);
            let voc = m.vocabulary().clone();
            let fcfg = crate::gen::FormulaCfg {
                max_depth: 3,
                max_td: 2,
                dialect: Dialect::Core,
                allow_ident: false,
            };
            let f = crate::gen::random_formula(&mut rng, &voc, &fcfg);
            for s in m.states() {
                let a = eval_dynamical(&m, s, &f.clone().not().next()).unwrap();
                let b = eval_dynamical(&m, s, &f.clone().next().not()).unwrap();
                assert_eq!(a, b);
            }
            // O P(x) vs P(Ox)
            let lhs = p("O P(x)", &voc, Dialect::Core);
            let rhs = p("P(Ox)", &voc, Dialect::Core);
            for s in m.states() {
                assert_eq!(
                    eval_dynamical(&m, s, &lhs).unwrap(),
                    eval_dynamical(&m, s, &rhs).unwrap()
                );
            }
        }
    }

    #[test]
    fn memoized_matches_naive() {
        let mut rng = crate::gen::rng_from_seed(31);
        for _ in 0..15 {
            let cfg = crate::gen::ModelCfg {
                num_states: 5,
                num_vars: 2,
                num_values: 2,
                pred_arities: vec![1],
                func_arities: vec![],
            };
            let m = crate::gen::random_dynamical(&mut rng, &cfg);
            let voc = m.vocabulary().clone();
            let fcfg = crate::gen::FormulaCfg {
                max_depth: 4,
                max_td: 2,
                dialect: Dialect::Core,
                allow_ident: false,
            };
            let f = crate::gen::random_formula(&mut rng, &voc, &fcfg);
            let mut evaluator = DynamicalEvaluator::new(&m);
            for s in m.states() {
                assert_eq!(
                    evaluator.eval(s, &f).unwrap(),
                    eval_dynamical_naive(&m, s, &f).unwrap()
                );
            }
        }
    }

    #[test]
    fn timed_empty_set_is_synchronous_only() {
        // two disjoint 2-chains, x equal at time 0, diverging at time 1
        let voc = Vocabulary::of_variables(&["x", "y"]).unwrap();
        let m = DynamicalModel::new(
            voc.clone(),
            vec!["a0".into(), "a1".into(), "b0".into(), "b1".into()],
            vec![1, 1, 3, 3],
            vec![
                vec![Value::Int(0), Value::Int(0)],
                vec![Value::Int(1), Value::Int(0)],
                vec![Value::Int(0), Value::Int(1)],
                vec![Value::Int(2), Value::Int(1)],
            ],
            vec![],
            vec![],
            TruncationInfo::from([1usize, 3usize]),
        );
        m.validate().unwrap();
        let timing = timing_map(&m).unwrap();
        assert_eq!(timing.time(0), TimeValue::Finite(0));
        assert_eq!(timing.time(1), TimeValue::Finite(1));
        let f = p("dep[] x", &voc, Dialect::Timed);
        assert!(eval_timed(&m, &timing, 0, &f).unwrap());
        assert!(eval_timed(&m, &timing, 2, &f).unwrap());
        assert!(!eval_timed(&m, &timing, 1, &f).unwrap());
        assert!(!eval_timed(&m, &timing, 3, &f).unwrap());
        // under the plain semantics it fails even at time 0
        assert!(!eval_dynamical(&m, 0, &f).unwrap());
    }

    #[test]
    fn timed_equals_plain_on_single_state() {
        let voc = Vocabulary::of_variables(&["x"]).unwrap();
        let m = DynamicalModel::new(
            voc.clone(),
            vec!["s".into()],
            vec![0],
            vec![vec![Value::Int(0)]],
            vec![],
            vec![],
            TruncationInfo::new(),
        );
        let timing = timing_map(&m).unwrap();
        let mut rng = crate::gen::rng_from_seed(5);
        for _ in 0..20 {
            let fcfg = crate::gen::FormulaCfg {
                max_depth: 3,
                max_td: 1,
                dialect: Dialect::Timed,
                allow_ident: false,
            };
            let f = crate::gen::random_formula(&mut rng, &voc, &fcfg);
            assert_eq!(
                eval_timed(&m, &timing, 0, &f).unwrap(),
                eval_dynamical(&m, 0, &f).unwrap()
            );
        }
    }

    #[test]
    fn timed_next_commutation() {
        use crate::analysis::truncation_horizon;
        let mut rng = crate::gen::rng_from_seed(41);
        for _ in 0..15 {
            let cfg = crate::gen::ModelCfg {
                num_states: 6,
                num_vars: 2,
                num_values: 3,
                pred_arities: vec![1],
                func_arities: vec![],
            };
            let m = crate::gen::random_timed(&mut rng, &cfg);
            let timing = timing_map(&m).unwrap();
            let voc = m.vocabulary().clone();
            let fcfg = crate::gen::FormulaCfg {
                max_depth: 2,
                max_td: 1,
                dialect: Dialect::Timed,
                allow_ident: false,
            };
            let body = crate::gen::random_formula(&mut rng, &voc, &fcfg);
            let x = crate::gen::random_term_set(&mut rng, &voc, 1, Dialect::Timed);
            // O D[X] f <-> D[OX] O f under the synchronized semantics
            let lhs = Formula::dep_mod(x.clone(), body.clone()).next();
            let rhs = Formula::dep_mod(x.shift(1), body.clone().next());
            let horizon = truncation_horizon(&m, &timing);
            let td = lhs.temporal_depth() as u64;
            for s in m.states() {
                // stay strictly inside the truncation horizon
                let in_range = match (horizon, timing.time(s)) {
                    (None, _) => true,
                    (Some(TimeValue::Finite(h)), TimeValue::Finite(t)) => t + td <= h,
                    _ => false,
                };
                if !in_range {
                    continue;
                }
                assert_eq!(
                    eval_timed(&m, &timing, s, &lhs).unwrap(),
                    eval_timed(&m, &timing, s, &rhs).unwrap()
                );
            }
        }
    }

    #[test]
    fn general_model_agrees_with_inducing_model() {
        let mut rng = crate::gen::rng_from_seed(51);
        for _ in 0..10 {
            let cfg = crate::gen::ModelCfg {
                num_states: 4,
                num_vars: 2,
                num_values: 2,
                pred_arities: vec![1],
                func_arities: vec![],
            };
            let m = crate::gen::random_dynamical(&mut rng, &cfg);
            let g = crate::gen::induce_general(&m, 2).unwrap();
            let voc = m.vocabulary().clone();
            let fcfg = crate::gen::FormulaCfg {
                max_depth: 3,
                max_td: 2,
                dialect: Dialect::Core,
                allow_ident: false,
            };
            for _ in 0..20 {
                let f = crate::gen::random_formula(&mut rng, &voc, &fcfg);
                for s in m.states() {
                    assert_eq!(
                        eval_dynamical(&m, s, &f).unwrap(),
                        eval_general(&g, s, &f).unwrap(),
                        "disagreement on {}",
                        crate::syntax::render(&f, &voc)
                    );
                }
            }
        }
    }

    #[test]
    fn lfdf_singleton_team_collapses_modality() {
        let voc = Vocabulary::of_variables(&["x", "y"]).unwrap();
        let m = LfdFModel::new(
            voc.clone(),
            [Value::Int(0), Value::Int(1)].into(),
            vec![],
            vec![],
            vec![vec![Value::Int(0), Value::Int(1)]],
        );
        let f = p("dep[x] y", &voc, Dialect::Core);
        assert!(eval_lfdf(&m, 0, &f).unwrap());
        let g = Formula::dep_mod(
            TermSet::singleton(Term::var(0)),
            p("dep[x] y", &voc, Dialect::Core),
        );
        assert_eq!(eval_lfdf(&m, 0, &g).unwrap(), eval_lfdf(&m, 0, &f).unwrap());
    }
}
