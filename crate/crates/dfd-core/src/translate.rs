//! Truth- and theorem-preserving translations: next-step elimination,
//! the embedding into the functional dependence language over an added
//! time variable, the subscript-extension map and its inverse, identity
//! patterns per variable partition, and global-identity elimination.

use crate::models::Partition;
use crate::syntax::{Formula, FuncId, Term, TermSet, VarId, Vocabulary};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("input still contains a formula-level next-step operator")]
    InputHasFormulaNext,
    #[error("formula already mentions the time variable")]
    AlreadyMentionsTimeVariable,
    #[error("a dependence subscript does not carry the time variable")]
    TimeVariableMissing,
    #[error("function terms must be flattened away first")]
    FunctionTermsPresent,
    #[error("identity elimination expects plain variable terms")]
    NonVariableTerms,
    #[error("partition covers {got} variables, vocabulary has {expected}")]
    WrongPartitionSize { expected: usize, got: usize },
}

/// One fired rewrite clause, for the provenance trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    /// Path from the root: `0`/`1` child indices.
    pub path: String,
    pub clause: &'static str,
}

/// Rewrites away every formula-level next-step operator by shifting
/// basic variables under it; term-level shifts remain. Sound under the
/// synchronized semantics on timed models.
pub fn eliminate_next(f: &Formula) -> Formula {
    eliminate_next_traced(f).0
}

pub fn eliminate_next_traced(f: &Formula) -> (Formula, Vec<TraceEntry>) {
    let mut trace = Vec::new();
    let out = elim(f, String::new(), &mut trace);
    (out, trace)
}

fn elim(f: &Formula, path: String, trace: &mut Vec<TraceEntry>) -> Formula {
    let note = |clause, trace: &mut Vec<TraceEntry>| {
        trace.push(TraceEntry {
            path: path.clone(),
            clause,
        })
    };
    match f {
        Formula::Pred(..) | Formula::DepAtom(..) | Formula::Ident(..) => {
            note("keep-atom", trace);
            f.clone()
        }
        Formula::Not(g) => {
            note("negation", trace);
            elim(g, format!("{path}0"), trace).not()
        }
        Formula::And(a, b) => {
            note("conjunction", trace);
            let left = elim(a, format!("{path}0"), trace);
            let right = elim(b, format!("{path}1"), trace);
            left.and(right)
        }
        Formula::DepMod(x, g) => {
            note("dependence-modality", trace);
            Formula::dep_mod(x.clone(), elim(g, format!("{path}0"), trace))
        }
        Formula::Next(g) => {
            note("next-shift", trace);
            elim(g, format!("{path}0"), trace).next_shift(1)
        }
    }
}

/// The vocabulary extended for the embedding: one fresh time variable
/// appended after the basic variables, and one fresh step function of
/// arity `N` per basic variable. Function indices of the original
/// vocabulary may shift; `func_map` translates them.
#[derive(Debug, Clone)]
pub struct ExtendedVocabulary {
    pub voc: Vocabulary,
    pub time_var: VarId,
    /// Step function per basic variable, in variable order.
    pub step_funcs: Vec<FuncId>,
    /// Old function index -> new function index.
    pub func_map: Vec<FuncId>,
}

fn fresh_name(base: &str, taken: &mut Vec<String>) -> String {
    let mut name = base.to_string();
    while taken.iter().any(|t| t == &name) {
        name.push('\'');
    }
    taken.push(name.clone());
    name
}

pub fn extended_vocabulary(voc: &Vocabulary) -> ExtendedVocabulary {
    let mut taken: Vec<String> = voc.variable_names().to_vec();
    taken.extend(voc.predicates_map().into_keys());
    taken.extend(voc.functions_map().into_keys());

    let time_name = fresh_name("tau", &mut taken);
    let base_vars = voc.variable_names().to_vec();
    let step_names: Vec<String> = base_vars
        .iter()
        .map(|v| fresh_name(&format!("f_{v}"), &mut taken))
        .collect();

    let mut variables = voc.variable_names().to_vec();
    variables.push(time_name);
    let mut functions = voc.functions_map();
    let arity = voc.num_variables();
    for name in &step_names {
        functions.insert(name.clone(), arity);
    }
    let extended = Vocabulary::new(variables, voc.predicates_map(), functions)
        .expect("extended vocabulary");
    let time_var = VarId(voc.num_variables());
    let step_funcs: Vec<FuncId> = step_names
        .iter()
        .map(|n| extended.lookup_func(n).expect("step function").0)
        .collect();
    let func_map: Vec<FuncId> = voc
        .functions()
        .map(|(_, name, _)| extended.lookup_func(name).expect("kept function").0)
        .collect();
    ExtendedVocabulary {
        voc: extended,
        time_var,
        step_funcs,
        func_map,
    }
}

/// Embeds a formula without formula-level next-steps into the language
/// over the extended vocabulary: shifted variables become nested step
/// functions, shifts push through function symbols, and every
/// dependence subscript gains the time variable.
pub fn tr_to_lfdf(
    f: &Formula,
    voc: &Vocabulary,
) -> Result<(Formula, ExtendedVocabulary), TranslateError> {
    let (formula, ext, _) = tr_to_lfdf_traced(f, voc)?;
    Ok((formula, ext))
}

pub fn tr_to_lfdf_traced(
    f: &Formula,
    voc: &Vocabulary,
) -> Result<(Formula, ExtendedVocabulary, Vec<TraceEntry>), TranslateError> {
    if f.has_formula_next() {
        return Err(TranslateError::InputHasFormulaNext);
    }
    let ext = extended_vocabulary(voc);
    let mut trace = Vec::new();
    let out = tr_formula(f, &ext, voc.num_variables(), String::new(), &mut trace);
    Ok((out, ext, trace))
}

fn tr_term(t: &Term, ext: &ExtendedVocabulary, num_vars: usize) -> Term {
    match t {
        Term::Var(v) => Term::Var(*v),
        Term::App(f, args) => Term::App(
            ext.func_map[f.0],
            args.iter().map(|a| tr_term(a, ext, num_vars)).collect(),
        ),
        Term::Next(_) => {
            let (depth, base) = t.peel_next();
            match base {
                // O^(n+1) v  =>  f_v(Tr(O^n v_1), ..., Tr(O^n v_N))
                Term::Var(v) => {
                    let args = (0..num_vars)
                        .map(|i| tr_term(&Term::var(i).next_n(depth - 1), ext, num_vars))
                        .collect();
                    Term::App(ext.step_funcs[v.0], args)
                }
                // O^m f(x1,...,xn)  =>  f(Tr(O^m x1), ..., Tr(O^m xn))
                Term::App(f, args) => Term::App(
                    ext.func_map[f.0],
                    args.iter()
                        .map(|a| tr_term(&a.clone().next_n(depth), ext, num_vars))
                        .collect(),
                ),
                Term::Next(_) => unreachable!("peel removes leading next-steps"),
            }
        }
    }
}

fn tr_set(x: &TermSet, ext: &ExtendedVocabulary, num_vars: usize) -> TermSet {
    let mut terms: Vec<Term> = x.iter().map(|t| tr_term(t, ext, num_vars)).collect();
    terms.push(Term::Var(ext.time_var));
    TermSet::new(terms)
}

fn tr_formula(
    f: &Formula,
    ext: &ExtendedVocabulary,
    num_vars: usize,
    path: String,
    trace: &mut Vec<TraceEntry>,
) -> Formula {
    let note = |clause, trace: &mut Vec<TraceEntry>| {
        trace.push(TraceEntry {
            path: path.clone(),
            clause,
        })
    };
    match f {
        Formula::Pred(p, args) => {
            note("predicate", trace);
            Formula::Pred(*p, args.iter().map(|t| tr_term(t, ext, num_vars)).collect())
        }
        Formula::Ident(a, b) => {
            note("identity", trace);
            Formula::Ident(tr_term(a, ext, num_vars), tr_term(b, ext, num_vars))
        }
        Formula::Not(g) => {
            note("negation", trace);
            tr_formula(g, ext, num_vars, format!("{path}0"), trace).not()
        }
        Formula::And(a, b) => {
            note("conjunction", trace);
            let left = tr_formula(a, ext, num_vars, format!("{path}0"), trace);
            let right = tr_formula(b, ext, num_vars, format!("{path}1"), trace);
            left.and(right)
        }
        Formula::DepMod(x, g) => {
            note("dependence-modality-add-time", trace);
            Formula::dep_mod(
                tr_set(x, ext, num_vars),
                tr_formula(g, ext, num_vars, format!("{path}0"), trace),
            )
        }
        Formula::DepAtom(x, y) => {
            note("dependence-atom-add-time", trace);
            Formula::DepAtom(tr_set(x, ext, num_vars), tr_term(y, ext, num_vars))
        }
        Formula::Next(_) => unreachable!("checked by tr_to_lfdf"),
    }
}

fn mentions_var(f: &Formula, v: VarId) -> bool {
    let mut vars = std::collections::BTreeSet::new();
    f.collect_vars(&mut vars);
    vars.contains(&v)
}

/// Adds the time variable to every dependence subscript. Injective;
/// its range is exactly the range of the embedding on matching inputs.
pub fn rho(f: &Formula, time_var: VarId) -> Result<Formula, TranslateError> {
    if mentions_var(f, time_var) {
        return Err(TranslateError::AlreadyMentionsTimeVariable);
    }
    Ok(rho_unchecked(f, time_var))
}

fn rho_unchecked(f: &Formula, time_var: VarId) -> Formula {
    match f {
        Formula::Pred(..) | Formula::Ident(..) => f.clone(),
        Formula::Not(g) => rho_unchecked(g, time_var).not(),
        Formula::And(a, b) => rho_unchecked(a, time_var).and(rho_unchecked(b, time_var)),
        Formula::Next(g) => rho_unchecked(g, time_var).next(),
        Formula::DepMod(x, g) => Formula::dep_mod(
            x.insert(Term::Var(time_var)),
            rho_unchecked(g, time_var),
        ),
        Formula::DepAtom(x, y) => Formula::DepAtom(x.insert(Term::Var(time_var)), y.clone()),
    }
}

/// Inverse of [`rho`] on its range: strips the time variable out of
/// every dependence subscript, failing if one lacks it.
pub fn rho_inverse(f: &Formula, time_var: VarId) -> Result<Formula, TranslateError> {
    let time = Term::Var(time_var);
    Ok(match f {
        Formula::Pred(..) | Formula::Ident(..) => f.clone(),
        Formula::Not(g) => rho_inverse(g, time_var)?.not(),
        Formula::And(a, b) => rho_inverse(a, time_var)?.and(rho_inverse(b, time_var)?),
        Formula::Next(g) => rho_inverse(g, time_var)?.next(),
        Formula::DepMod(x, g) => {
            if !x.contains(&time) {
                return Err(TranslateError::TimeVariableMissing);
            }
            let stripped: TermSet = x.iter().filter(|t| **t != time).cloned().collect();
            Formula::dep_mod(stripped, rho_inverse(g, time_var)?)
        }
        Formula::DepAtom(x, y) => {
            if !x.contains(&time) {
                return Err(TranslateError::TimeVariableMissing);
            }
            let stripped: TermSet = x.iter().filter(|t| **t != time).cloned().collect();
            Formula::DepAtom(stripped, y.clone())
        }
    })
}

/// The identity pattern of a variable partition: positive identities
/// for related ordered pairs, negated identities for unrelated ones,
/// in lexicographic pair order.
pub fn chi(e: &Partition, voc: &Vocabulary) -> Result<Formula, TranslateError> {
    let n = voc.num_variables();
    if e.len() != n {
        return Err(TranslateError::WrongPartitionSize {
            expected: n,
            got: e.len(),
        });
    }
    let mut conjuncts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if e.same_class(i, j) {
                conjuncts.push(Formula::Ident(Term::var(i), Term::var(j)));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !e.same_class(i, j) {
                conjuncts.push(Formula::Ident(Term::var(i), Term::var(j)).not());
            }
        }
    }
    let mut it = conjuncts.into_iter();
    let first = it.next().expect("at least the reflexive identities");
    Ok(it.fold(first, Formula::and))
}

/// All partitions of `0..n` in restricted-growth order.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Partition>) {
        if prefix.len() == n {
            out.push(Partition::from_labels(prefix));
            return;
        }
        let next_free = prefix.iter().copied().max().map_or(0, |m| m + 1);
        for label in 0..=next_free {
            prefix.push(label);
            go(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

/// An identity-free formula, or one of the two constants the rewrite
/// can collapse to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdFree {
    Top,
    Bottom,
    Formula(Formula),
}

impl IdFree {
    fn not(self) -> IdFree {
        match self {
            IdFree::Top => IdFree::Bottom,
            IdFree::Bottom => IdFree::Top,
            IdFree::Formula(f) => IdFree::Formula(f.not()),
        }
    }

    fn and(self, other: IdFree) -> IdFree {
        match (self, other) {
            (IdFree::Bottom, _) | (_, IdFree::Bottom) => IdFree::Bottom,
            (IdFree::Top, x) | (x, IdFree::Top) => x,
            (IdFree::Formula(a), IdFree::Formula(b)) => IdFree::Formula(a.and(b)),
        }
    }

    fn or(self, other: IdFree) -> IdFree {
        match (self, other) {
            (IdFree::Top, _) | (_, IdFree::Top) => IdFree::Top,
            (IdFree::Bottom, x) | (x, IdFree::Bottom) => x,
            (IdFree::Formula(a), IdFree::Formula(b)) => IdFree::Formula(a.or(b)),
        }
    }
}

fn class_rep(e: &Partition, v: VarId) -> VarId {
    let class = e.class_of(v.0);
    for i in 0..e.len() {
        if e.class_of(i) == class {
            return VarId(i);
        }
    }
    v
}

fn rep_term(t: &Term, e: &Partition) -> Result<Term, TranslateError> {
    match t {
        Term::Var(v) => Ok(Term::Var(class_rep(e, *v))),
        Term::App(..) => Err(TranslateError::FunctionTermsPresent),
        Term::Next(_) => Err(TranslateError::NonVariableTerms),
    }
}

/// Per-partition translation: replace every variable by the first
/// member of its class, then resolve identity atoms to constants.
pub fn t_e(f: &Formula, e: &Partition, voc: &Vocabulary) -> Result<IdFree, TranslateError> {
    if e.len() != voc.num_variables() {
        return Err(TranslateError::WrongPartitionSize {
            expected: voc.num_variables(),
            got: e.len(),
        });
    }
    go_t_e(f, e)
}

fn go_t_e(f: &Formula, e: &Partition) -> Result<IdFree, TranslateError> {
    Ok(match f {
        Formula::Pred(p, args) => {
            let replaced = args
                .iter()
                .map(|t| rep_term(t, e))
                .collect::<Result<Vec<_>, _>>()?;
            IdFree::Formula(Formula::Pred(*p, replaced))
        }
        Formula::Ident(a, b) => {
            if rep_term(a, e)? == rep_term(b, e)? {
                IdFree::Top
            } else {
                IdFree::Bottom
            }
        }
        Formula::Not(g) => go_t_e(g, e)?.not(),
        Formula::And(a, b) => go_t_e(a, e)?.and(go_t_e(b, e)?),
        Formula::DepMod(x, g) => {
            let replaced: TermSet = x
                .iter()
                .map(|t| rep_term(t, e))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .collect();
            match go_t_e(g, e)? {
                // agreement relations are reflexive, so the modality
                // collapses with its body on constants
                IdFree::Top => IdFree::Top,
                IdFree::Bottom => IdFree::Bottom,
                IdFree::Formula(body) => IdFree::Formula(Formula::dep_mod(replaced, body)),
            }
        }
        Formula::DepAtom(x, y) => {
            let replaced: TermSet = x
                .iter()
                .map(|t| rep_term(t, e))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .collect();
            IdFree::Formula(Formula::DepAtom(replaced, rep_term(y, e)?))
        }
        Formula::Next(_) => return Err(TranslateError::NonVariableTerms),
    })
}

/// Global-identity elimination: the per-partition translations and
/// their disjunction, enumerated in restricted-growth order.
pub fn eliminate_identity(
    f: &Formula,
    voc: &Vocabulary,
) -> Result<(Vec<(Partition, IdFree)>, IdFree), TranslateError> {
    let mut per_partition = Vec::new();
    let mut combined = IdFree::Bottom;
    for e in all_partitions(voc.num_variables()) {
        let translated = t_e(f, &e, voc)?;
        combined = combined.or(translated.clone());
        per_partition.push((e, translated));
    }
    Ok((per_partition, combined))
}

/// Replaces function applications innermost-first by fresh variables
/// `w1, w2, ...` in traversal order, each paired with a definitional
/// identity. Identical applications share one variable. Returns the
/// rewritten formula with the definitions conjoined, and the vocabulary
/// extended by the fresh variables.
pub fn flatten_function_terms(
    f: &Formula,
    voc: &Vocabulary,
) -> Result<(Formula, Vocabulary), TranslateError> {
    struct Flattener {
        defs: Vec<(String, Term)>,
        seen: BTreeMap<Term, usize>,
        base_vars: usize,
        taken: Vec<String>,
    }
    impl Flattener {
        fn term(&mut self, t: &Term) -> Term {
            match t {
                Term::Var(v) => Term::Var(*v),
                Term::Next(inner) => self.term(inner).next(),
                Term::App(func, args) => {
                    let shallow = Term::App(*func, args.iter().map(|a| self.term(a)).collect());
                    let idx = match self.seen.get(&shallow) {
                        Some(&idx) => idx,
                        None => {
                            let idx = self.defs.len();
                            let name = fresh_name(&format!("w{}", idx + 1), &mut self.taken);
                            self.defs.push((name, shallow.clone()));
                            self.seen.insert(shallow, idx);
                            idx
                        }
                    };
                    Term::Var(VarId(self.base_vars + idx))
                }
            }
        }
        fn formula(&mut self, f: &Formula) -> Formula {
            match f {
                Formula::Pred(p, args) => {
                    Formula::Pred(*p, args.iter().map(|a| self.term(a)).collect())
                }
                Formula::Ident(a, b) => Formula::Ident(self.term(a), self.term(b)),
                Formula::Not(g) => self.formula(g).not(),
                Formula::And(a, b) => self.formula(a).and(self.formula(b)),
                Formula::Next(g) => self.formula(g).next(),
                Formula::DepMod(x, g) => {
                    let set: TermSet = x.iter().map(|t| self.term(t)).collect();
                    Formula::dep_mod(set, self.formula(g))
                }
                Formula::DepAtom(x, y) => {
                    let set: TermSet = x.iter().map(|t| self.term(t)).collect();
                    Formula::DepAtom(set, self.term(y))
                }
            }
        }
    }

    let mut taken: Vec<String> = voc.variable_names().to_vec();
    taken.extend(voc.predicates_map().into_keys());
    taken.extend(voc.functions_map().into_keys());
    let mut flattener = Flattener {
        defs: Vec::new(),
        seen: BTreeMap::new(),
        base_vars: voc.num_variables(),
        taken,
    };
    let body = flattener.formula(f);
    let mut variables = voc.variable_names().to_vec();
    for (name, _) in &flattener.defs {
        variables.push(name.clone());
    }
    let extended = Vocabulary::new(variables, voc.predicates_map(), voc.functions_map())
        .expect("flattened vocabulary");
    let mut out = body;
    for (i, (_, definition)) in flattener.defs.iter().enumerate() {
        out = out.and(Formula::Ident(
            Term::Var(VarId(voc.num_variables() + i)),
            definition.clone(),
        ));
    }
    Ok((out, extended))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, render, Dialect};
    use std::collections::BTreeMap;

    fn voc2() -> Vocabulary {
        Vocabulary::new(
            vec!["x".into(), "y".into()],
            BTreeMap::from([("P".into(), 1)]),
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn next_elimination_examples() {
        let voc = voc2();
        let p = |s: &str| parse_formula(s, &voc, Dialect::Timed).unwrap();
        assert_eq!(eliminate_next(&p("O P(x)")), p("P(Ox)"));
        assert_eq!(eliminate_next(&p("O dep[x] y")), p("dep[Ox] Oy"));
        let untouched = p("dep[x,Oy] OOx & !P(y)");
        assert_eq!(eliminate_next(&untouched), untouched);
        let nested = p("O O D[x] P(y)");
        let out = eliminate_next(&nested);
        assert!(!out.has_formula_next());
        assert_eq!(out, p("D[OOx] P(OOy)"));
    }

    #[test]
    fn embedding_examples() {
        let voc = voc2();
        let p = |s: &str| parse_formula(s, &voc, Dialect::Timed).unwrap();
        // Tr(O v1) with two variables becomes f_v1(v1, v2)
        let (out, ext) = tr_to_lfdf(&p("dep[x] Ox"), &voc).unwrap();
        let rendered = render(&out, &ext.voc);
        assert_eq!(rendered, "dep[x,tau] f_x(x,y)");
        // Tr(v) = v, subscripts always carry the time variable
        let (out, ext) = tr_to_lfdf(&p("D[x] P(x)"), &voc).unwrap();
        assert_eq!(render(&out, &ext.voc), "D[x,tau] P(x)");
        // rejects formula-level next-steps
        assert!(matches!(
            tr_to_lfdf(&p("O P(x)"), &voc),
            Err(TranslateError::InputHasFormulaNext)
        ));
    }

    #[test]
    fn embedding_output_is_well_formed() {
        let voc = voc2();
        let mut rng = crate::gen::rng_from_seed(61);
        for _ in 0..50 {
            let cfg = crate::gen::FormulaCfg {
                max_depth: 4,
                max_td: 2,
                dialect: Dialect::Timed,
                allow_ident: false,
            };
            let f = crate::gen::random_formula(&mut rng, &voc, &cfg);
            let stripped = eliminate_next(&f);
            let (out, ext) = tr_to_lfdf(&stripped, &voc).unwrap();
            let time = Term::Var(ext.time_var);
            // never an empty subscript; the time variable in every
            // subscript; no shifted time variable anywhere
            fn walk(f: &Formula, time: &Term, check: &mut impl FnMut(&TermSet)) {
                match f {
                    Formula::Pred(..) | Formula::Ident(..) => {}
                    Formula::Not(g) | Formula::Next(g) => walk(g, time, check),
                    Formula::And(a, b) => {
                        walk(a, time, check);
                        walk(b, time, check);
                    }
                    Formula::DepMod(x, g) => {
                        check(x);
                        walk(g, time, check);
                    }
                    Formula::DepAtom(x, _) => check(x),
                }
            }
            walk(&out, &time, &mut |x: &TermSet| {
                assert!(!x.is_empty());
                assert!(x.contains(&time));
            });
            let mut vars = std::collections::BTreeSet::new();
            out.collect_vars(&mut vars);
            // the time variable never occurs shifted
            fn no_shifted_time(t: &Term, time: VarId, under_next: bool) -> bool {
                match t {
                    Term::Var(v) => !(under_next && *v == time),
                    Term::Next(inner) => no_shifted_time(inner, time, true),
                    Term::App(_, args) => {
                        args.iter().all(|a| no_shifted_time(a, time, under_next))
                    }
                }
            }
            walk(&out, &time, &mut |x: &TermSet| {
                for t in x {
                    assert!(no_shifted_time(t, ext.time_var, false));
                }
            });
            assert!(!out.has_formula_next());
        }
    }

    #[test]
    fn rho_round_trip() {
        let voc = voc2();
        let ext = extended_vocabulary(&voc);
        let p = |s: &str| parse_formula(s, &voc, Dialect::Core).unwrap();
        for src in ["D[x] P(y)", "dep[x,y] x & !P(x)", "P(x)"] {
            let f = p(src);
            let lifted = rho(&f, ext.time_var).unwrap();
            assert_eq!(rho_inverse(&lifted, ext.time_var).unwrap(), f);
        }
        let f = Formula::dep_mod(TermSet::singleton(Term::Var(ext.time_var)), p("P(x)"));
        assert!(matches!(
            rho(&f, ext.time_var),
            Err(TranslateError::AlreadyMentionsTimeVariable)
        ));
        assert!(matches!(
            rho_inverse(&p("D[x] P(x)"), ext.time_var),
            Err(TranslateError::TimeVariableMissing)
        ));
    }

    #[test]
    fn chi_of_identity_partition() {
        let voc = voc2();
        let e = Partition::singletons(2);
        let f = chi(&e, &voc).unwrap();
        assert_eq!(
            render(&f, &voc),
            "x == x & y == y & !(x == y) & !(y == x)"
        );
        let voc1 = Vocabulary::of_variables(&["x"]).unwrap();
        let total = Partition::universal(1);
        assert_eq!(render(&chi(&total, &voc1).unwrap(), &voc1), "x == x");
    }

    #[test]
    fn bell_numbers() {
        assert_eq!(all_partitions(1).len(), 1);
        assert_eq!(all_partitions(2).len(), 2);
        assert_eq!(all_partitions(3).len(), 5);
        assert_eq!(all_partitions(4).len(), 15);
    }

    #[test]
    fn t_e_resolves_identities() {
        let voc = voc2();
        let p = |s: &str| parse_formula(s, &voc, Dialect::TimedFuncId).unwrap();
        let ident = Partition::singletons(2);
        assert_eq!(t_e(&p("x == y"), &ident, &voc).unwrap(), IdFree::Bottom);
        let total = Partition::universal(2);
        assert_eq!(t_e(&p("x == y"), &total, &voc).unwrap(), IdFree::Top);
        // replaced variables show up elsewhere
        let out = t_e(&p("P(y) & x == y"), &total, &voc).unwrap();
        assert_eq!(out, IdFree::Formula(p("P(x)")));
        // formulas without identity pass through with representatives
        let out = t_e(&p("D[y] P(y)"), &total, &voc).unwrap();
        assert_eq!(out, IdFree::Formula(p("D[x] P(x)")));
    }

    #[test]
    fn flattening_produces_shallow_definitions() {
        let voc = Vocabulary::new(
            vec!["x".into(), "y".into()],
            BTreeMap::from([("P".into(), 1)]),
            BTreeMap::from([("S".into(), 2)]),
        )
        .unwrap();
        let f = parse_formula("P(S(S(x,y),x))", &voc, Dialect::TimedFuncId).unwrap();
        let (out, extended) = flatten_function_terms(&f, &voc).unwrap();
        assert_eq!(extended.num_variables(), 4);
        assert_eq!(render(&out, &extended), "P(w2) & w1 == S(x,y) & w2 == S(w1,x)");
        // repeated subterms share a definition
        let g = parse_formula("S(x,y) == S(x,y)", &voc, Dialect::TimedFuncId).unwrap();
        let (out, extended) = flatten_function_terms(&g, &voc).unwrap();
        assert_eq!(render(&out, &extended), "w1 == w1 & w1 == S(x,y)");
    }
}
