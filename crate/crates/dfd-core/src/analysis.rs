//! Dynamical-system analysis: orbits, rank and eventual values,
//! stability, timing maps and synchronicity, the system classification,
//! and the dual-route variable profile.
//!
//! All passes respect truncation sentinels: a flagged state has no
//! outgoing transition as far as the analysis is concerned, standing in
//! for a cut-off infinite tail.

use crate::models::{DynamicalModel, Value, Violation};
use crate::semantics::{eval_dynamical, EvalError};
use crate::syntax::{Formula, Term, TermSet};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// A time value in the one-point extension of the naturals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TimeValue {
    Finite(u64),
    Infinite,
}

impl TimeValue {
    pub fn succ(self) -> TimeValue {
        match self {
            TimeValue::Finite(n) => TimeValue::Finite(n + 1),
            TimeValue::Infinite => TimeValue::Infinite,
        }
    }
}

impl fmt::Display for TimeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeValue::Finite(n) => write!(f, "{n}"),
            TimeValue::Infinite => write!(f, "∞"),
        }
    }
}

/// Per-state time values: zero at initial states, successor along the
/// transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimingMap {
    values: Vec<TimeValue>,
}

impl TimingMap {
    pub fn new(values: Vec<TimeValue>) -> Self {
        TimingMap { values }
    }

    pub fn time(&self, s: usize) -> TimeValue {
        self.values[s]
    }

    pub fn values(&self) -> &[TimeValue] {
        &self.values
    }

    pub fn synchronous(&self, s: usize, t: usize) -> bool {
        self.values[s] == self.values[t]
    }
}

/// Why a system has no timing map: a state whose maximal backward
/// histories have different lengths.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no timing map: state `{witness}` has maximal histories of lengths {shorter} and {longer}")]
pub struct NotTimed {
    pub witness: String,
    pub witness_index: usize,
    pub shorter: TimeValue,
    pub longer: TimeValue,
}

/// The orbit of a state: the simple tail walked before entering the
/// first repeated cycle, and the cycle itself. On a truncated model the
/// walk stops at sentinel states, leaving the cycle empty.
pub fn orbit(m: &DynamicalModel, start: usize) -> (Vec<usize>, Vec<usize>) {
    let mut seen_at = vec![usize::MAX; m.num_states()];
    let mut path = Vec::new();
    let mut current = start;
    loop {
        if seen_at[current] != usize::MAX {
            let split = seen_at[current];
            let cycle = path.split_off(split);
            return (path, cycle);
        }
        seen_at[current] = path.len();
        path.push(current);
        match m.partial_step(current) {
            Some(next) => current = next,
            None => return (path, Vec::new()),
        }
    }
}

/// Rank of a term set: the least number of steps after which every term
/// in the set is constant across the whole model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rank {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::Infinite => write!(f, "∞"),
        }
    }
}

/// Successive images of the whole state set under the transition,
/// until they stabilize (at most `|S|` steps).
fn image_chain(m: &DynamicalModel) -> Vec<BTreeSet<usize>> {
    let mut chain = vec![(0..m.num_states()).collect::<BTreeSet<usize>>()];
    loop {
        let last = chain.last().unwrap();
        let next: BTreeSet<usize> = last.iter().map(|&s| m.step(s)).collect();
        if &next == last || chain.len() > m.num_states() {
            return chain;
        }
        chain.push(next);
    }
}

fn constant_on(m: &DynamicalModel, states: &BTreeSet<usize>, x: &TermSet) -> Result<bool, Violation> {
    let mut witness: Option<Vec<Value>> = None;
    for &s in states {
        let mut row = Vec::with_capacity(x.len());
        for t in x {
            row.push(m.term_value(s, t)?);
        }
        match &witness {
            None => witness = Some(row),
            Some(w) if *w != row => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}

/// Least `n` with all terms of the set constant on the `n`-step image;
/// the image chain stabilizes within `|S|` steps, so stabilization
/// without constancy means the rank is infinite.
pub fn rank(m: &DynamicalModel, x: &TermSet) -> Result<Rank, Violation> {
    let chain = image_chain(m);
    for (n, image) in chain.iter().enumerate() {
        if constant_on(m, image, x)? {
            return Ok(Rank::Finite(n));
        }
    }
    Ok(Rank::Infinite)
}

/// The stabilized value a finite-rank term settles on.
pub fn eventual_value(m: &DynamicalModel, x: &Term) -> Result<Option<Value>, Violation> {
    let set = TermSet::singleton(x.clone());
    match rank(m, &set)? {
        Rank::Infinite => Ok(None),
        Rank::Finite(n) => {
            let s = m.step_n(0, n);
            Ok(Some(m.term_value(s, x)?))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stability {
    pub absolute: bool,
    /// Per-state: does this state's orbit eventually stabilize the term?
    pub relative: Vec<bool>,
}

/// Absolute stability asks one value to eventually hold on every orbit;
/// relative stability asks each orbit separately. On truncated models
/// an orbit that ends at a sentinel counts as stabilized at its last
/// value.
pub fn stability(m: &DynamicalModel, x: &Term) -> Result<Stability, Violation> {
    let mut relative = Vec::with_capacity(m.num_states());
    let mut stable_values: Vec<Option<Value>> = Vec::with_capacity(m.num_states());
    for s in m.states() {
        let (prefix, cycle) = orbit(m, s);
        let settled = if cycle.is_empty() {
            // truncated orbit: last value reached
            prefix.last().map(|&t| m.term_value(t, x)).transpose()?
        } else {
            let first = m.term_value(cycle[0], x)?;
            let mut same = true;
            for &t in &cycle {
                if m.term_value(t, x)? != first {
                    same = false;
                    break;
                }
            }
            if same {
                Some(first)
            } else {
                None
            }
        };
        relative.push(settled.is_some());
        stable_values.push(settled);
    }
    let absolute = stable_values.iter().all(|v| v.is_some())
        && stable_values.windows(2).all(|w| w[0] == w[1]);
    Ok(Stability { absolute, relative })
}

/// States lying on a transition cycle (truncation sentinels never do).
fn cycle_states(m: &DynamicalModel) -> Vec<bool> {
    let n = m.num_states();
    let mut on_cycle = vec![false; n];
    let mut color = vec![0u8; n]; // 0 unvisited, 1 active, 2 done
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut current = root;
        loop {
            if color[current] == 1 {
                // found a new cycle: mark from current back
                let pos = path.iter().position(|&s| s == current).unwrap();
                for &s in &path[pos..] {
                    on_cycle[s] = true;
                }
                break;
            }
            if color[current] == 2 {
                break;
            }
            color[current] = 1;
            path.push(current);
            match m.partial_step(current) {
                Some(next) => current = next,
                None => break,
            }
        }
        for &s in &path {
            color[s] = 2;
        }
    }
    on_cycle
}

fn predecessors(m: &DynamicalModel) -> Vec<Vec<usize>> {
    let mut preds = vec![Vec::new(); m.num_states()];
    for s in m.states() {
        if let Some(t) = m.partial_step(s) {
            preds[t].push(s);
        }
    }
    preds
}

/// Longest-backward-history time of every state: infinite exactly on
/// cycles, otherwise the longest chain of predecessors.
fn supremum_times(m: &DynamicalModel) -> Vec<TimeValue> {
    let n = m.num_states();
    let on_cycle = cycle_states(m);
    let preds = predecessors(m);
    let mut times: Vec<Option<TimeValue>> = (0..n)
        .map(|s| on_cycle[s].then_some(TimeValue::Infinite))
        .collect();
    // The off-cycle part is a DAG under predecessors; resolve by depth.
    fn resolve(
        s: usize,
        preds: &[Vec<usize>],
        times: &mut Vec<Option<TimeValue>>,
    ) -> TimeValue {
        if let Some(t) = times[s] {
            return t;
        }
        let mut best = TimeValue::Finite(0);
        for &p in &preds[s] {
            let t = resolve(p, preds, times).succ();
            if t > best {
                best = t;
            }
        }
        times[s] = Some(best);
        best
    }
    for s in 0..n {
        resolve(s, &preds, &mut times);
    }
    times.into_iter().map(|t| t.unwrap()).collect()
}

/// Computes the timing map, or reports a state whose maximal backward
/// histories have unequal lengths.
pub fn timing_map(m: &DynamicalModel) -> Result<TimingMap, NotTimed> {
    let times = supremum_times(m);
    for s in m.states() {
        if let Some(next) = m.partial_step(s) {
            if times[next] != times[s].succ() {
                return Err(NotTimed {
                    witness: m.state_name(next).to_string(),
                    witness_index: next,
                    shorter: times[s].succ(),
                    longer: times[next],
                });
            }
        }
    }
    Ok(TimingMap::new(times))
}

/// Earliest time value carried by a truncation sentinel: formulas
/// whose next-step reach stays strictly inside it never cross a
/// placeholder transition. `None` when nothing is truncated.
pub fn truncation_horizon(m: &DynamicalModel, timing: &TimingMap) -> Option<TimeValue> {
    m.truncated().iter().map(|&s| timing.time(s)).min()
}

/// Equal-time classes, one per time value.
pub fn synchronicity(m: &DynamicalModel, timing: &TimingMap) -> Vec<Vec<usize>> {
    let mut distinct: Vec<TimeValue> = timing.values().to_vec();
    distinct.sort();
    distinct.dedup();
    distinct
        .into_iter()
        .map(|t| m.states().filter(|&s| timing.time(s) == t).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub timed: bool,
    pub temporal: bool,
    pub linear_time: bool,
    pub finite_past: bool,
}

/// Graph classification. Temporal systems have at most one predecessor
/// per state; linear-time systems are additionally acyclic; finite past
/// additionally requires every backward history to be finite (on these
/// finite representations, acyclicity already gives that).
pub fn classify(m: &DynamicalModel) -> Classification {
    let timed = timing_map(m).is_ok();
    let temporal = predecessors(m).iter().all(|p| p.len() <= 1);
    let acyclic = !cycle_states(m).iter().any(|&c| c);
    let linear_time = temporal && acyclic;
    let finite_past = linear_time;
    Classification {
        timed,
        temporal,
        linear_time,
        finite_past,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VariableProfile {
    pub fixed: bool,
    pub eventually_fixed_at: Option<usize>,
    pub period: Option<usize>,
    pub eventual_period: Option<(usize, usize)>,
}

/// Profile of one term's behavior, computed twice: by direct value
/// iteration and by model-checking the corresponding global-identity
/// formulas. The two routes must agree.
pub fn variable_profile(
    m: &DynamicalModel,
    x: &Term,
    max_steps: usize,
) -> Result<VariableProfile, EvalError> {
    assert!(max_steps >= 1, "max_steps must be at least 1");

    // Route 1: value iteration.
    let holds_shift = |n: usize, m_steps: usize| -> Result<bool, Violation> {
        // x at g^(n+m_steps) equals x at g^n, for every state
        for s in m.states() {
            let a = m.term_value(m.step_n(s, n + m_steps), x)?;
            let b = m.term_value(m.step_n(s, n), x)?;
            if a != b {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let fixed_iter = holds_shift(0, 1)?;
    let eventually_fixed_iter = (0..=max_steps)
        .map(|n| holds_shift(n, 1))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .position(|b| b);
    let period_iter = (1..=max_steps)
        .map(|p| holds_shift(0, p))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .position(|b| b)
        .map(|i| i + 1);
    let mut eventual_period_iter = None;
    'outer: for n in 0..=max_steps {
        for p in 1..=max_steps {
            if holds_shift(n, p)? {
                eventual_period_iter = Some((n, p));
                break 'outer;
            }
        }
    }

    // Route 2: the identity formulas `O^(n+m) x == O^n x`, which is the
    // shift-normal form of iterating the next-step operator over
    // `O^m x == x`.
    let ident = |n: usize, p: usize| {
        Formula::Ident(x.clone().next_n(n + p), x.clone().next_n(n))
    };
    let check = |f: Formula| -> Result<bool, EvalError> {
        // global identity: any state decides it
        eval_dynamical(m, 0, &f)
    };
    let fixed_formula = check(ident(0, 1))?;
    let mut eventually_fixed_formula = None;
    for n in 0..=max_steps {
        if check(ident(n, 1))? {
            eventually_fixed_formula = Some(n);
            break;
        }
    }
    let mut period_formula = None;
    for p in 1..=max_steps {
        if check(ident(0, p))? {
            period_formula = Some(p);
            break;
        }
    }
    let mut eventual_period_formula = None;
    'outer2: for n in 0..=max_steps {
        for p in 1..=max_steps {
            if check(ident(n, p))? {
                eventual_period_formula = Some((n, p));
                break 'outer2;
            }
        }
    }

    let profile = VariableProfile {
        fixed: fixed_iter,
        eventually_fixed_at: eventually_fixed_iter,
        period: period_iter,
        eventual_period: eventual_period_iter,
    };
    let via_formulas = VariableProfile {
        fixed: fixed_formula,
        eventually_fixed_at: eventually_fixed_formula,
        period: period_formula,
        eventual_period: eventual_period_formula,
    };
    assert_eq!(
        profile, via_formulas,
        "iteration and formula routes disagree"
    );
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::models::TruncationInfo;
    use crate::syntax::Vocabulary;

    fn chain_into_loop() -> DynamicalModel {
        // c0 -> c1 -> c2 -> c2, x distinct on the chain, constant from c2
        let voc = Vocabulary::of_variables(&["x"]).unwrap();
        DynamicalModel::new(
            voc,
            vec!["c0".into(), "c1".into(), "c2".into()],
            vec![1, 2, 2],
            vec![vec![Value::Int(0)], vec![Value::Int(1)], vec![Value::Int(2)]],
            vec![],
            vec![],
            TruncationInfo::new(),
        )
    }

    #[test]
    fn orbit_shapes() {
        let m = gallery::fig1_s1();
        let s1 = m.lookup_state("s1").unwrap();
        let (prefix, cycle) = orbit(&m, s1);
        let names = |v: &[usize]| -> Vec<String> {
            v.iter().map(|&s| m.state_name(s).to_string()).collect()
        };
        assert_eq!(names(&prefix), ["s1", "s2"]);
        assert_eq!(names(&cycle), ["s3", "s4", "s5"]);

        let loop_model = chain_into_loop();
        let (p, c) = orbit(&loop_model, 2);
        assert!(p.is_empty());
        assert_eq!(c, vec![2]);
    }

    #[test]
    fn fibonacci_orbit_has_pisano_period() {
        let m = gallery::fib_mod(5);
        let s = m.lookup_state("1,1").unwrap();
        let (_, cycle) = orbit(&m, s);
        assert_eq!(cycle.len(), 20);
        // brute force: smallest k > 0 with g^k fixing the state
        let mut k = 1;
        let mut current = m.step(s);
        while current != s {
            current = m.step(current);
            k += 1;
        }
        assert_eq!(k, 20);
    }

    #[test]
    fn rank_examples() {
        let m = chain_into_loop();
        let x = TermSet::singleton(Term::var(0));
        assert_eq!(rank(&m, &x).unwrap(), Rank::Finite(2));
        assert_eq!(
            eventual_value(&m, &Term::var(0)).unwrap(),
            Some(Value::Int(2))
        );

        let cycle = gallery::fig1_s2();
        assert_eq!(
            rank(&cycle, &TermSet::singleton(Term::var(0))).unwrap(),
            Rank::Infinite
        );
        assert_eq!(eventual_value(&cycle, &Term::var(0)).unwrap(), None);

        // constant variable has rank 0
        let voc = Vocabulary::of_variables(&["x", "y"]).unwrap();
        let constant = DynamicalModel::new(
            voc,
            vec!["a".into(), "b".into()],
            vec![1, 0],
            vec![
                vec![Value::Int(5), Value::Int(0)],
                vec![Value::Int(5), Value::Int(1)],
            ],
            vec![],
            vec![],
            TruncationInfo::new(),
        );
        assert_eq!(
            rank(&constant, &TermSet::singleton(Term::var(0))).unwrap(),
            Rank::Finite(0)
        );
        assert_eq!(
            eventual_value(&constant, &Term::var(0)).unwrap(),
            Some(Value::Int(5))
        );
    }

    #[test]
    fn rank_of_set_is_max_of_members() {
        let m = chain_into_loop();
        let x = Term::var(0);
        let singleton = TermSet::singleton(x.clone());
        let with_next = TermSet::new(vec![x.clone(), x.clone().next()]);
        let r1 = rank(&m, &singleton).unwrap();
        let r2 = rank(&m, &TermSet::singleton(x.next())).unwrap();
        let joint = rank(&m, &with_next).unwrap();
        let max = match (r1, r2) {
            (Rank::Finite(a), Rank::Finite(b)) => Rank::Finite(a.max(b)),
            _ => Rank::Infinite,
        };
        assert_eq!(joint, max);
    }

    #[test]
    fn stability_examples() {
        let m = chain_into_loop();
        let st = stability(&m, &Term::var(0)).unwrap();
        assert!(st.absolute);
        assert!(st.relative.iter().all(|&b| b));

        let cycle = gallery::fig1_s2();
        let st = stability(&cycle, &Term::var(0)).unwrap();
        assert!(!st.absolute);
        assert!(st.relative.iter().all(|&b| !b));
    }

    #[test]
    fn timing_of_figure_fixtures() {
        let s3 = gallery::fig2_s3();
        let t = timing_map(&s3).unwrap();
        let at = |name: &str| t.time(s3.lookup_state(name).unwrap());
        assert_eq!(at("w0"), TimeValue::Finite(0));
        assert_eq!(at("k0"), TimeValue::Finite(0));
        assert_eq!(at("w1"), TimeValue::Finite(1));
        assert_eq!(at("k1"), TimeValue::Finite(1));
        assert_eq!(at("w2"), TimeValue::Finite(2));

        let s4 = gallery::fig2_s4();
        let t = timing_map(&s4).unwrap();
        assert!(t.values().iter().all(|&v| v == TimeValue::Infinite));

        let s3p = gallery::fig3_s3p();
        let err = timing_map(&s3p).unwrap_err();
        assert_eq!(err.witness, "i3");

        let s4p = gallery::fig3_s4p();
        let err = timing_map(&s4p).unwrap_err();
        assert_eq!(err.witness, "j1");
    }

    #[test]
    fn not_timed_witness_has_unequal_histories() {
        // exhaustive backward search for maximal history lengths
        let m = gallery::fig3_s3p();
        let err = timing_map(&m).unwrap_err();
        let preds = super::predecessors(&m);
        fn lengths(s: usize, preds: &[Vec<usize>], depth: usize, out: &mut BTreeSet<usize>) {
            if depth > preds.len() + 1 {
                return; // infinite history; represented by absence here
            }
            if preds[s].is_empty() {
                out.insert(depth);
            } else {
                for &p in &preds[s] {
                    lengths(p, preds, depth + 1, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        lengths(err.witness_index, &preds, 1, &mut out);
        assert!(out.len() > 1, "witness should have unequal history lengths");
    }

    #[test]
    fn synchronicity_classes() {
        let s3 = gallery::fig2_s3();
        let t = timing_map(&s3).unwrap();
        let classes = synchronicity(&s3, &t);
        let named: Vec<Vec<&str>> = classes
            .iter()
            .map(|c| c.iter().map(|&s| s3.state_name(s)).collect())
            .collect();
        assert_eq!(
            named,
            vec![vec!["w0", "k0"], vec!["w1", "k1"], vec!["w2"], vec!["wtail"]]
        );
        // synchronicity conditions
        for s in s3.states() {
            for w in s3.states() {
                if let (Some(gs), Some(gw)) = (s3.partial_step(s), s3.partial_step(w)) {
                    assert_eq!(t.synchronous(s, w), t.synchronous(gs, gw));
                }
                if let Some(gw) = s3.partial_step(w) {
                    if t.synchronous(s, gw) {
                        assert!(
                            s3.states().any(|w2| s3.partial_step(w2) == Some(s)),
                            "synchronous with a successor implies being a successor"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn classification_of_fixtures() {
        let c = classify(&gallery::fig1_s2());
        assert!(c.timed && c.temporal && !c.linear_time && !c.finite_past);

        let c = classify(&gallery::fig2_s3());
        assert!(c.timed && !c.temporal);

        let c = classify(&gallery::fig3_s3p());
        assert!(!c.timed);

        // implications
        for model in [
            gallery::fig1_s1(),
            gallery::fig1_s2(),
            gallery::fig2_s3(),
            gallery::fig2_s4(),
            gallery::fig2_s6(),
            gallery::fig3_s3p(),
            gallery::fig3_s4p(),
        ] {
            let c = classify(&model);
            assert!(!c.temporal || c.timed);
            assert!(!c.linear_time || c.temporal);
            assert!(!c.finite_past || c.linear_time);
        }
    }

    #[test]
    fn profile_examples() {
        let m = chain_into_loop();
        let p = variable_profile(&m, &Term::var(0), 6).unwrap();
        assert!(!p.fixed);
        assert_eq!(p.eventually_fixed_at, Some(2));
        assert_eq!(p.period, None);
        assert_eq!(p.eventual_period, Some((2, 1)));

        let cycle = gallery::fig1_s2();
        let p = variable_profile(&cycle, &Term::var(0), 6).unwrap();
        assert!(!p.fixed);
        assert_eq!(p.period, Some(4));
        assert_eq!(p.eventual_period, Some((0, 4)));
    }

    #[test]
    fn rank_matches_image_constancy_both_ways() {
        let mut rng = crate::gen::rng_from_seed(11);
        for _ in 0..20 {
            let cfg = crate::gen::ModelCfg {
                num_states: 5,
                num_vars: 2,
                num_values: 2,
                pred_arities: vec![],
                func_arities: vec![],
            };
            let m = crate::gen::random_dynamical(&mut rng, &cfg);
            let x = TermSet::singleton(Term::var(0));
            let r = rank(&m, &x).unwrap();
            let chain = super::image_chain(&m);
            for (n, image) in chain.iter().enumerate() {
                let constant = super::constant_on(&m, image, &x).unwrap();
                match r {
                    Rank::Finite(k) => assert_eq!(constant, n >= k),
                    Rank::Infinite => assert!(!constant),
                }
            }
        }
    }

    #[test]
    fn stabilized_image_lies_on_cycles_when_rank_finite() {
        let m = chain_into_loop();
        let x = TermSet::singleton(Term::var(0));
        if let Rank::Finite(n) = rank(&m, &x).unwrap() {
            // the rank image maps into itself
            let chain = super::image_chain(&m);
            let image = &chain[n.min(chain.len() - 1)];
            let mapped: BTreeSet<usize> = image.iter().map(|&s| m.step(s)).collect();
            assert!(mapped.is_subset(image));
            // the fully stabilized image consists of cycle states and
            // carries the eventual value
            let stable = chain.last().unwrap();
            let on_cycle = super::cycle_states(&m);
            let ev = eventual_value(&m, &Term::var(0)).unwrap().unwrap();
            for &s in stable {
                assert!(on_cycle[s]);
                assert_eq!(m.term_value(s, &Term::var(0)).unwrap(), ev);
            }
        } else {
            panic!("expected finite rank");
        }
    }
}
