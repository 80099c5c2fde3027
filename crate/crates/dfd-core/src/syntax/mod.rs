//! Terms, formulas, dialects and the purely syntactic algorithms
//! (temporal depth, shifts, stripping, term universes, closure).

mod closure;
mod parse;
mod render;

pub use closure::{closure, Closure};
pub use parse::{parse_formula, parse_term, parse_term_set, ParseError, ParseErrorKind};
pub use render::{render, render_term, render_term_set};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Index of a basic variable in its [`Vocabulary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

/// Index of a predicate symbol in its [`Vocabulary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredId(pub usize);

/// Index of a function symbol in its [`Vocabulary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncId(pub usize);

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum VocabularyError {
    #[error("vocabulary needs at least one variable")]
    NoVariables,
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("invalid symbol `{0}`: {1}")]
    InvalidSymbol(String, &'static str),
}

/// Symbol table: ordered basic variables plus predicate and function
/// symbols with arities. Formulas and terms store indices into it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    variables: Vec<String>,
    /// Sorted by name; `PredId` indexes this list.
    predicates: Vec<(String, usize)>,
    /// Sorted by name; `FuncId` indexes this list.
    functions: Vec<(String, usize)>,
}

fn check_symbol(name: &str) -> Result<(), VocabularyError> {
    let bad = |why| Err(VocabularyError::InvalidSymbol(name.to_string(), why));
    if name.is_empty() {
        return bad("empty name");
    }
    let mut chars = name.chars();
    let first = chars.next().unwrap();
    if !(first.is_ascii_alphabetic() || first == '_') {
        return bad("must start with a letter or `_`");
    }
    if first == 'O' {
        return bad("names starting with `O` are reserved for the next-step prefix");
    }
    if !name
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
    {
        return bad("contains a character outside [A-Za-z0-9_']");
    }
    if name == "D" || name == "dep" {
        return bad("reserved keyword");
    }
    Ok(())
}

impl Vocabulary {
    pub fn new(
        variables: Vec<String>,
        predicates: BTreeMap<String, usize>,
        functions: BTreeMap<String, usize>,
    ) -> Result<Self, VocabularyError> {
        if variables.is_empty() {
            return Err(VocabularyError::NoVariables);
        }
        let mut seen = BTreeSet::new();
        for name in variables
            .iter()
            .chain(predicates.keys())
            .chain(functions.keys())
        {
            check_symbol(name)?;
            if !seen.insert(name.clone()) {
                return Err(VocabularyError::DuplicateSymbol(name.clone()));
            }
        }
        Ok(Vocabulary {
            variables,
            predicates: predicates.into_iter().collect(),
            functions: functions.into_iter().collect(),
        })
    }

    /// Variables only, no predicates or functions.
    pub fn of_variables(names: &[&str]) -> Result<Self, VocabularyError> {
        Self::new(
            names.iter().map(|s| s.to_string()).collect(),
            BTreeMap::new(),
            BTreeMap::new(),
        )
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> impl Iterator<Item = (VarId, &str)> {
        self.variables
            .iter()
            .enumerate()
            .map(|(i, n)| (VarId(i), n.as_str()))
    }

    pub fn var_ids(&self) -> impl Iterator<Item = VarId> {
        (0..self.variables.len()).map(VarId)
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.variables[v.0]
    }

    pub fn lookup_var(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|n| n == name).map(VarId)
    }

    pub fn predicates(&self) -> impl Iterator<Item = (PredId, &str, usize)> {
        self.predicates
            .iter()
            .enumerate()
            .map(|(i, (n, a))| (PredId(i), n.as_str(), *a))
    }

    pub fn pred_name(&self, p: PredId) -> &str {
        &self.predicates[p.0].0
    }

    pub fn pred_arity(&self, p: PredId) -> usize {
        self.predicates[p.0].1
    }

    pub fn lookup_pred(&self, name: &str) -> Option<(PredId, usize)> {
        self.predicates
            .iter()
            .position(|(n, _)| n == name)
            .map(|i| (PredId(i), self.predicates[i].1))
    }

    pub fn functions(&self) -> impl Iterator<Item = (FuncId, &str, usize)> {
        self.functions
            .iter()
            .enumerate()
            .map(|(i, (n, a))| (FuncId(i), n.as_str(), *a))
    }

    pub fn func_name(&self, f: FuncId) -> &str {
        &self.functions[f.0].0
    }

    pub fn func_arity(&self, f: FuncId) -> usize {
        self.functions[f.0].1
    }

    pub fn lookup_func(&self, name: &str) -> Option<(FuncId, usize)> {
        self.functions
            .iter()
            .position(|(n, _)| n == name)
            .map(|i| (FuncId(i), self.functions[i].1))
    }

    pub fn has_functions(&self) -> bool {
        !self.functions.is_empty()
    }

    pub fn predicates_map(&self) -> BTreeMap<String, usize> {
        self.predicates.iter().cloned().collect()
    }

    pub fn functions_map(&self) -> BTreeMap<String, usize> {
        self.functions.iter().cloned().collect()
    }

    pub fn variable_names(&self) -> &[String] {
        &self.variables
    }

    /// The set of all basic variables, as a term set.
    pub fn all_variables(&self) -> TermSet {
        TermSet::from_iter(self.var_ids().map(Term::Var))
    }
}

/// A dynamical-variable term: a basic variable, its value one step in
/// the future, or (in the functional dialect) a function application.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(VarId),
    Next(Box<Term>),
    App(FuncId, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(VarId(i))
    }

    pub fn next(self) -> Term {
        Term::Next(Box::new(self))
    }

    /// `O^n t`.
    pub fn next_n(self, n: usize) -> Term {
        (0..n).fold(self, |t, _| t.next())
    }

    /// Nesting depth of next-step markers.
    pub fn temporal_depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Next(t) => t.temporal_depth() + 1,
            Term::App(_, args) => args.iter().map(Term::temporal_depth).max().unwrap_or(0),
        }
    }

    /// Splits `O^n base` into `(n, base)` where `base` is not a `Next`.
    pub fn peel_next(&self) -> (usize, &Term) {
        match self {
            Term::Next(t) => {
                let (n, base) = t.peel_next();
                (n + 1, base)
            }
            other => (0, other),
        }
    }

    /// Replaces every basic-variable occurrence `v` by `O^n v`.
    pub fn shift(&self, n: usize) -> Term {
        match self {
            Term::Var(v) => Term::Var(*v).next_n(n),
            Term::Next(t) => t.shift(n).next(),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| a.shift(n)).collect()),
        }
    }

    /// Erases every next-step marker.
    pub fn strip_next(&self) -> Term {
        match self {
            Term::Var(v) => Term::Var(*v),
            Term::Next(t) => t.strip_next(),
            Term::App(f, args) => Term::App(*f, args.iter().map(Term::strip_next).collect()),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::Next(t) => t.collect_vars(out),
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn has_function(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Next(t) => t.has_function(),
            Term::App(..) => true,
        }
    }

    /// Does `sub` occur in `self` as a subterm?
    pub fn contains_term(&self, sub: &Term) -> bool {
        if self == sub {
            return true;
        }
        match self {
            Term::Var(_) => false,
            Term::Next(t) => t.contains_term(sub),
            Term::App(_, args) => args.iter().any(|a| a.contains_term(sub)),
        }
    }

    fn structural_cmp(&self, other: &Term) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        use Term::*;
        let rank = |t: &Term| match t {
            Var(_) => 0u8,
            Next(_) => 1,
            App(..) => 2,
        };
        match (self, other) {
            (Var(a), Var(b)) => a.cmp(b),
            (Next(a), Next(b)) => a.cmp(b),
            (App(f, xs), App(g, ys)) => f.cmp(g).then_with(|| xs.cmp(ys)),
            (a, b) => rank(a).cmp(&rank(b)).then(Ordering::Equal),
        }
    }
}

/// Canonical term order: temporal depth first, then variable index,
/// then function spelling and arguments.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.temporal_depth()
            .cmp(&other.temporal_depth())
            .then_with(|| self.structural_cmp(other))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite, duplicate-free, canonically ordered set of terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TermSet(Vec<Term>);

impl TermSet {
    pub fn new(mut terms: Vec<Term>) -> Self {
        terms.sort();
        terms.dedup();
        TermSet(terms)
    }

    pub fn empty() -> Self {
        TermSet(Vec::new())
    }

    pub fn singleton(t: Term) -> Self {
        TermSet(vec![t])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.0
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.0.binary_search(t).is_ok()
    }

    pub fn is_subset_of(&self, other: &TermSet) -> bool {
        self.0.iter().all(|t| other.contains(t))
    }

    pub fn union(&self, other: &TermSet) -> TermSet {
        TermSet::new(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    pub fn insert(&self, t: Term) -> TermSet {
        let mut v = self.0.clone();
        v.push(t);
        TermSet::new(v)
    }

    pub fn temporal_depth(&self) -> usize {
        self.0.iter().map(Term::temporal_depth).max().unwrap_or(0)
    }

    /// `O X = {O x : x in X}`.
    pub fn shift(&self, n: usize) -> TermSet {
        TermSet::new(self.0.iter().map(|t| t.shift(n)).collect())
    }

    pub fn next_n(&self, n: usize) -> TermSet {
        TermSet::new(self.0.iter().map(|t| t.clone().next_n(n)).collect())
    }

    pub fn strip_next(&self) -> TermSet {
        TermSet::new(self.0.iter().map(Term::strip_next).collect())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Term> {
        self.0.iter()
    }
}

impl FromIterator<Term> for TermSet {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        TermSet::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a TermSet {
    type Item = &'a Term;
    type IntoIter = std::slice::Iter<'a, Term>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Formulas of the dependence language. `->`, `|` and `<->` are parser
/// sugar; the tree only ever holds the constructors below.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// `P(x1,...,xk)`
    Pred(PredId, Vec<Term>),
    /// Global term identity `x == y` (functional dialect only).
    Ident(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// Truth at the next state, `O phi`.
    Next(Box<Formula>),
    /// Dependence modality `D[X] phi`.
    DepMod(TermSet, Box<Formula>),
    /// Dependence atom `dep[X] y`.
    DepAtom(TermSet, Term),
}

impl Formula {
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    /// `a | b`, desugared to `!(!a & !b)`.
    pub fn or(self, other: Formula) -> Formula {
        self.not().and(other.not()).not()
    }

    /// `a -> b`, desugared to `!(a & !b)`.
    pub fn implies(self, other: Formula) -> Formula {
        self.and(other.not()).not()
    }

    /// `a <-> b` as the conjunction of both implications.
    pub fn iff(self, other: Formula) -> Formula {
        self.clone().implies(other.clone()).and(other.implies(self))
    }

    pub fn next(self) -> Formula {
        Formula::Next(Box::new(self))
    }

    pub fn next_n(self, n: usize) -> Formula {
        (0..n).fold(self, |f, _| f.next())
    }

    pub fn dep_mod(set: TermSet, body: Formula) -> Formula {
        Formula::DepMod(set, Box::new(body))
    }

    /// `dep[X] Y` for a set-valued right-hand side: the conjunction of
    /// the pointwise atoms. `Y` must be non-empty.
    pub fn dep_set(set: &TermSet, rhs: &TermSet) -> Option<Formula> {
        let mut it = rhs.iter();
        let first = Formula::DepAtom(set.clone(), it.next()?.clone());
        Some(it.fold(first, |acc, y| {
            acc.and(Formula::DepAtom(set.clone(), y.clone()))
        }))
    }

    pub fn temporal_depth(&self) -> usize {
        match self {
            Formula::Pred(_, args) => args.iter().map(Term::temporal_depth).max().unwrap_or(0),
            Formula::Ident(x, y) => x.temporal_depth().max(y.temporal_depth()),
            Formula::Not(f) => f.temporal_depth(),
            Formula::And(a, b) => a.temporal_depth().max(b.temporal_depth()),
            Formula::Next(f) => f.temporal_depth() + 1,
            Formula::DepMod(x, f) => x.temporal_depth().max(f.temporal_depth()),
            Formula::DepAtom(x, y) => x.temporal_depth().max(y.temporal_depth()),
        }
    }

    /// Replaces every basic-variable occurrence `v` by `O^n v`,
    /// including inside dependence subscripts and functional terms.
    pub fn next_shift(&self, n: usize) -> Formula {
        if n == 0 {
            return self.clone();
        }
        match self {
            Formula::Pred(p, args) => {
                Formula::Pred(*p, args.iter().map(|t| t.shift(n)).collect())
            }
            Formula::Ident(x, y) => Formula::Ident(x.shift(n), y.shift(n)),
            Formula::Not(f) => f.next_shift(n).not(),
            Formula::And(a, b) => a.next_shift(n).and(b.next_shift(n)),
            Formula::Next(f) => f.next_shift(n).next(),
            Formula::DepMod(x, f) => Formula::dep_mod(x.shift(n), f.next_shift(n)),
            Formula::DepAtom(x, y) => Formula::DepAtom(x.shift(n), y.shift(n)),
        }
    }

    /// Erases every next-step marker, both term- and formula-level.
    pub fn strip_next(&self) -> Formula {
        match self {
            Formula::Pred(p, args) => Formula::Pred(*p, args.iter().map(Term::strip_next).collect()),
            Formula::Ident(x, y) => Formula::Ident(x.strip_next(), y.strip_next()),
            Formula::Not(f) => f.strip_next().not(),
            Formula::And(a, b) => a.strip_next().and(b.strip_next()),
            Formula::Next(f) => f.strip_next(),
            Formula::DepMod(x, f) => Formula::dep_mod(x.strip_next(), f.strip_next()),
            Formula::DepAtom(x, y) => Formula::DepAtom(x.strip_next(), y.strip_next()),
        }
    }

    /// Subformulas in the usual sense, including the formula itself.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        out.push(self);
        match self {
            Formula::Pred(..) | Formula::Ident(..) | Formula::DepAtom(..) => {}
            Formula::Not(f) | Formula::Next(f) | Formula::DepMod(_, f) => {
                f.collect_subformulas(out)
            }
            Formula::And(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            Formula::Pred(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
            Formula::Ident(x, y) => {
                x.collect_vars(out);
                y.collect_vars(out);
            }
            Formula::Not(f) | Formula::Next(f) => f.collect_vars(out),
            Formula::And(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::DepMod(x, f) => {
                x.iter().for_each(|t| t.collect_vars(out));
                f.collect_vars(out);
            }
            Formula::DepAtom(x, y) => {
                x.iter().for_each(|t| t.collect_vars(out));
                y.collect_vars(out);
            }
        }
    }

    pub fn collect_preds(&self, out: &mut BTreeSet<PredId>) {
        match self {
            Formula::Pred(p, _) => {
                out.insert(*p);
            }
            Formula::Ident(..) => {}
            Formula::Not(f) | Formula::Next(f) => f.collect_preds(out),
            Formula::And(a, b) => {
                a.collect_preds(out);
                b.collect_preds(out);
            }
            Formula::DepMod(_, f) => f.collect_preds(out),
            Formula::DepAtom(..) => {}
        }
    }

    pub fn has_formula_next(&self) -> bool {
        match self {
            Formula::Next(_) => true,
            Formula::Pred(..) | Formula::Ident(..) | Formula::DepAtom(..) => false,
            Formula::Not(f) | Formula::DepMod(_, f) => f.has_formula_next(),
            Formula::And(a, b) => a.has_formula_next() || b.has_formula_next(),
        }
    }

    pub fn has_function(&self) -> bool {
        match self {
            Formula::Pred(_, args) => args.iter().any(Term::has_function),
            Formula::Ident(x, y) => x.has_function() || y.has_function(),
            Formula::Not(f) | Formula::Next(f) => f.has_function(),
            Formula::And(a, b) => a.has_function() || b.has_function(),
            Formula::DepMod(x, f) => x.iter().any(Term::has_function) || f.has_function(),
            Formula::DepAtom(x, y) => x.iter().any(Term::has_function) || y.has_function(),
        }
    }

    pub fn has_ident(&self) -> bool {
        match self {
            Formula::Ident(..) => true,
            Formula::Pred(..) | Formula::DepAtom(..) => false,
            Formula::Not(f) | Formula::Next(f) | Formula::DepMod(_, f) => f.has_ident(),
            Formula::And(a, b) => a.has_ident() || b.has_ident(),
        }
    }

    /// Checks the dialect gates and arities against a vocabulary.
    pub fn check_dialect(&self, voc: &Vocabulary, dialect: Dialect) -> Result<(), DialectViolation> {
        match self {
            Formula::Pred(p, args) => {
                if p.0 >= voc.predicates.len() {
                    return Err(DialectViolation::UnknownPredicate(p.0));
                }
                if args.len() != voc.pred_arity(*p) {
                    return Err(DialectViolation::ArityMismatch {
                        symbol: voc.pred_name(*p).to_string(),
                        expected: voc.pred_arity(*p),
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|t| check_term(t, voc, dialect))
            }
            Formula::Ident(x, y) => {
                if !dialect.allows_identity() {
                    return Err(DialectViolation::IdentityNotInDialect(dialect));
                }
                check_term(x, voc, dialect)?;
                check_term(y, voc, dialect)
            }
            Formula::Not(f) | Formula::Next(f) => f.check_dialect(voc, dialect),
            Formula::And(a, b) => {
                a.check_dialect(voc, dialect)?;
                b.check_dialect(voc, dialect)
            }
            Formula::DepMod(x, f) => {
                check_dep_set(x, voc, dialect)?;
                f.check_dialect(voc, dialect)
            }
            Formula::DepAtom(x, y) => {
                check_dep_set(x, voc, dialect)?;
                check_term(y, voc, dialect)
            }
        }
    }
}

fn check_term(t: &Term, voc: &Vocabulary, dialect: Dialect) -> Result<(), DialectViolation> {
    match t {
        Term::Var(v) => {
            if v.0 >= voc.variables.len() {
                Err(DialectViolation::UnknownVariable(v.0))
            } else {
                Ok(())
            }
        }
        Term::Next(inner) => check_term(inner, voc, dialect),
        Term::App(f, args) => {
            if !dialect.allows_functions() {
                return Err(DialectViolation::FunctionsNotInDialect(dialect));
            }
            if f.0 >= voc.functions.len() {
                return Err(DialectViolation::UnknownFunction(f.0));
            }
            if args.len() != voc.func_arity(*f) {
                return Err(DialectViolation::ArityMismatch {
                    symbol: voc.func_name(*f).to_string(),
                    expected: voc.func_arity(*f),
                    got: args.len(),
                });
            }
            args.iter().try_for_each(|a| check_term(a, voc, dialect))
        }
    }
}

fn check_dep_set(x: &TermSet, voc: &Vocabulary, dialect: Dialect) -> Result<(), DialectViolation> {
    if x.is_empty() && !dialect.allows_empty_dep_sets() {
        return Err(DialectViolation::EmptyDependenceSet);
    }
    x.iter().try_for_each(|t| check_term(t, voc, dialect))
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum DialectViolation {
    #[error("empty dependence set is not allowed in the non-empty dialect")]
    EmptyDependenceSet,
    #[error("term identity `==` is not in dialect {0}")]
    IdentityNotInDialect(Dialect),
    #[error("function terms are not in dialect {0}")]
    FunctionsNotInDialect(Dialect),
    #[error("unknown variable index {0}")]
    UnknownVariable(usize),
    #[error("unknown predicate index {0}")]
    UnknownPredicate(usize),
    #[error("unknown function index {0}")]
    UnknownFunction(usize),
    #[error("arity mismatch for `{symbol}`: expected {expected}, got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },
}

/// The four language variants the toolkit handles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dialect {
    /// Full language with empty dependence sets allowed.
    Core,
    /// Empty dependence sets removed.
    NonEmpty,
    /// Full language under the synchronized semantics.
    Timed,
    /// Timed language plus function terms and global term identity.
    TimedFuncId,
}

impl Dialect {
    pub const ALL: [Dialect; 4] = [
        Dialect::Core,
        Dialect::NonEmpty,
        Dialect::Timed,
        Dialect::TimedFuncId,
    ];

    pub fn allows_empty_dep_sets(self) -> bool {
        !matches!(self, Dialect::NonEmpty)
    }

    pub fn allows_functions(self) -> bool {
        matches!(self, Dialect::TimedFuncId)
    }

    pub fn allows_identity(self) -> bool {
        matches!(self, Dialect::TimedFuncId)
    }

    pub fn cli_name(self) -> &'static str {
        match self {
            Dialect::Core => "dfd",
            Dialect::NonEmpty => "dfd-ne",
            Dialect::Timed => "dfd-t",
            Dialect::TimedFuncId => "dfd-tfi",
        }
    }

    pub fn from_cli_name(s: &str) -> Option<Dialect> {
        match s {
            "dfd" | "core" => Some(Dialect::Core),
            "dfd-ne" | "non-empty" => Some(Dialect::NonEmpty),
            "dfd-t" | "timed" => Some(Dialect::Timed),
            "dfd-tfi" | "timed-func-id" => Some(Dialect::TimedFuncId),
            _ => None,
        }
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

/// `td` of a whole set of formulas.
pub fn set_temporal_depth<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I) -> usize {
    formulas
        .into_iter()
        .map(Formula::temporal_depth)
        .max()
        .unwrap_or(0)
}

/// `phi` is a generalized subformula of `psi` when erasing every
/// next-step marker from `phi` yields a subformula of the erased `psi`.
pub fn is_generalized_subformula(phi: &Formula, psi: &Formula) -> bool {
    let target = phi.strip_next();
    psi.strip_next().subformulas().iter().any(|s| **s == target)
}

/// Variables occurring in a formula set, in vocabulary order, together
/// with the term universe `{O^n v : v occurring, n <= td}`.
pub fn term_universe<'a, I>(formulas: I) -> (Vec<VarId>, TermSet)
where
    I: IntoIterator<Item = &'a Formula> + Clone,
{
    let mut vars = BTreeSet::new();
    for f in formulas.clone() {
        f.collect_vars(&mut vars);
    }
    let depth = set_temporal_depth(formulas);
    let terms = vars
        .iter()
        .flat_map(|v| (0..=depth).map(|n| Term::Var(*v).next_n(n)))
        .collect();
    (vars.into_iter().collect(), terms)
}

/// All terms `O^n v` over the full vocabulary with `n <= depth`.
pub fn bounded_universe(voc: &Vocabulary, depth: usize) -> TermSet {
    voc.var_ids()
        .flat_map(|v| (0..=depth).map(move |n| Term::Var(v).next_n(n)))
        .collect()
}

/// All non-empty subsets of a term set. Intended for the small bounded
/// universes used by general models and the filtration.
pub fn nonempty_subsets(universe: &TermSet) -> Vec<TermSet> {
    let terms = universe.terms();
    assert!(terms.len() <= 20, "term universe too large to enumerate");
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << terms.len()) {
        let subset: Vec<Term> = terms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, t)| t.clone())
            .collect();
        out.push(TermSet::new(subset));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn voc() -> Vocabulary {
        Vocabulary::new(
            vec!["x".into(), "y".into()],
            BTreeMap::from([("P".into(), 1), ("Q".into(), 2)]),
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn temporal_depth_of_terms_and_formulas() {
        let v = Term::var(0);
        assert_eq!(v.temporal_depth(), 0);
        assert_eq!(v.clone().next_n(2).temporal_depth(), 2);
        // td(D_{Ox} y) = 1
        let f = Formula::DepAtom(TermSet::singleton(Term::var(0).next()), Term::var(1));
        assert_eq!(f.temporal_depth(), 1);
    }

    #[test]
    fn shift_and_strip() {
        let voc = voc();
        let f = parse_formula("P(x)", &voc, Dialect::Core).unwrap();
        assert_eq!(
            f.next_shift(1),
            parse_formula("P(Ox)", &voc, Dialect::Core).unwrap()
        );
        assert_eq!(f.next_shift(0), f);
        // next_shift(dep[x] Ox, 2) = dep[OOx] OOOx
        let g = parse_formula("dep[x] Ox", &voc, Dialect::Core).unwrap();
        assert_eq!(
            g.next_shift(2),
            parse_formula("dep[OOx] OOOx", &voc, Dialect::Core).unwrap()
        );
        // strip: D_{Ox} O P(x) -> D_{x} P(x)
        let h = parse_formula("D[Ox] O P(x)", &voc, Dialect::Core).unwrap();
        assert_eq!(
            h.strip_next(),
            parse_formula("D[x] P(x)", &voc, Dialect::Core).unwrap()
        );
        assert_eq!(h.strip_next().temporal_depth(), 0);
    }

    #[test]
    fn td_shift_law() {
        let voc = voc();
        for src in ["P(x)", "dep[x,Oy] y", "D[x] (P(x) & !Q(x,y))", "O P(Ox)"] {
            let f = parse_formula(src, &voc, Dialect::Core).unwrap();
            assert_eq!(f.next_shift(1).temporal_depth(), f.temporal_depth() + 1);
        }
    }

    #[test]
    fn identity_td_macros() {
        let voc = voc();
        let cases = [
            ("P(Ox)", "O P(x)"),
            ("dep[Ox,Oy] Oy", "O dep[x,y] y"),
            ("O D[x] P(y)", "D[Ox] O P(y)"),
        ];
        for (a, b) in cases {
            let fa = parse_formula(a, &voc, Dialect::Core).unwrap();
            let fb = parse_formula(b, &voc, Dialect::Core).unwrap();
            assert_eq!(fa.temporal_depth(), fb.temporal_depth(), "{a} vs {b}");
        }
    }

    #[test]
    fn generalized_subformula() {
        let voc = voc();
        let p = parse_formula("P(x)", &voc, Dialect::Core).unwrap();
        let q = parse_formula("O P(Ox)", &voc, Dialect::Core).unwrap();
        assert!(is_generalized_subformula(&p, &q));
        assert!(is_generalized_subformula(&q, &q));
        let r = parse_formula("Q(x,y)", &voc, Dialect::Core).unwrap();
        assert!(!is_generalized_subformula(&r, &p));
    }

    #[test]
    fn term_universe_counts() {
        let voc = voc();
        let f = parse_formula("P(Ox)", &voc, Dialect::Core).unwrap();
        let (vars, terms) = term_universe([&f]);
        assert_eq!(vars, vec![VarId(0)]);
        assert_eq!(
            terms,
            TermSet::new(vec![Term::var(0), Term::var(0).next()])
        );
        let g = parse_formula("P(x)", &voc, Dialect::Core).unwrap();
        let (_, t0) = term_universe([&g]);
        assert_eq!(t0, TermSet::singleton(Term::var(0)));
        // |T| = |V| * (td+1)
        let h = parse_formula("Q(Ox, OOy)", &voc, Dialect::Core).unwrap();
        let (vs, ts) = term_universe([&h]);
        assert_eq!(ts.len(), vs.len() * (h.temporal_depth() + 1));
    }

    #[test]
    fn term_set_canonical_order() {
        let x = Term::var(0);
        let y = Term::var(1);
        let set = TermSet::new(vec![y.clone().next(), x.clone(), y.clone(), x.clone().next()]);
        assert_eq!(
            set.terms(),
            &[x.clone(), y.clone(), x.next(), y.next()]
        );
    }

    #[test]
    fn vocabulary_rejects_reserved_names() {
        assert!(Vocabulary::of_variables(&["Ox"]).is_err());
        assert!(Vocabulary::of_variables(&["dep"]).is_err());
        assert!(Vocabulary::of_variables(&[]).is_err());
        assert!(Vocabulary::new(
            vec!["x".into()],
            BTreeMap::from([("x".into(), 1)]),
            BTreeMap::new()
        )
        .is_err());
    }
}
