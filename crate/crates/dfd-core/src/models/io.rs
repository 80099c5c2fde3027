//! The on-disk JSON model format, shared by all four model kinds.
//! Emission is canonical (sorted maps, two-space indentation), so
//! loading and re-emitting a file produced by this module is
//! byte-identical.

use super::standard::AtomKey;
use super::{
    Assignment, DynamicalModel, GeneralRelationalModel, LfdFModel, Partition,
    StandardRelationalModel, TruncationInfo, Value,
};
use crate::syntax::{
    parse_formula, parse_term_set, render_term, render_term_set, Dialect, Formula, TermSet,
    Vocabulary,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, thiserror::Error)]
pub enum ModelIoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad vocabulary: {0}")]
    Vocabulary(#[from] crate::syntax::VocabularyError),
    #[error("unknown model kind `{0}`")]
    BadKind(String),
    #[error("missing field `{0}` for this model kind")]
    MissingField(&'static str),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state `{0}` has no transition")]
    MissingTransition(String),
    #[error("state `{state}` has no value for `{variable}`")]
    MissingValue { state: String, variable: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("bad key `{key}`: {reason}")]
    BadKey { key: String, reason: String },
}

/// Any of the four model kinds, as stored in one file format.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Dynamical(DynamicalModel),
    Standard(StandardRelationalModel),
    General(GeneralRelationalModel),
    LfdF(LfdFModel),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::Dynamical(_) => "dynamical",
            Model::Standard(_) => "standard",
            Model::General(_) => "general",
            Model::LfdF(_) => "lfdf",
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        match self {
            Model::Dynamical(m) => m.vocabulary(),
            Model::Standard(m) => m.vocabulary(),
            Model::General(m) => m.vocabulary(),
            Model::LfdF(m) => m.vocabulary(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct RawVocabulary {
    variables: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    predicates: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    functions: BTreeMap<String, usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawModel {
    kind: String,
    vocabulary: RawVocabulary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    states: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    g: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    values: BTreeMap<String, BTreeMap<String, Value>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pred: BTreeMap<String, Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    func: BTreeMap<String, Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    truncated: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    depth_bound: Option<usize>,
    /// Keyed by rendered term set (single variables for the standard kind).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    eq: BTreeMap<String, Vec<Vec<String>>>,
    /// Keyed by rendered atom, e.g. `P(x,Oy)`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    atoms: BTreeMap<String, Vec<String>>,
    /// Keyed by rendered dependence atom, e.g. `dep[x] y`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    dep_atoms: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    objects: Vec<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    team: Vec<BTreeMap<String, Value>>,
}

fn state_indices(names: &[String]) -> BTreeMap<&str, usize> {
    names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect()
}

fn load_transition(
    names: &[String],
    g: &BTreeMap<String, String>,
) -> Result<Vec<usize>, ModelIoError> {
    let index = state_indices(names);
    let mut transition = Vec::with_capacity(names.len());
    for name in names {
        let target = g
            .get(name)
            .ok_or_else(|| ModelIoError::MissingTransition(name.clone()))?;
        let &t = index
            .get(target.as_str())
            .ok_or_else(|| ModelIoError::UnknownState(target.clone()))?;
        transition.push(t);
    }
    Ok(transition)
}

fn load_world_set(
    names: &[String],
    listed: &[String],
    what: &str,
) -> Result<BTreeSet<usize>, ModelIoError> {
    let index = state_indices(names);
    let mut out = BTreeSet::new();
    for name in listed {
        let &i = index.get(name.as_str()).ok_or_else(|| ModelIoError::BadKey {
            key: name.clone(),
            reason: format!("unknown state in {what}"),
        })?;
        out.insert(i);
    }
    Ok(out)
}

fn parse_atom_key(key: &str, voc: &Vocabulary) -> Result<AtomKey, ModelIoError> {
    let formula = parse_formula(key, voc, Dialect::TimedFuncId).map_err(|e| {
        ModelIoError::BadKey {
            key: key.to_string(),
            reason: e.to_string(),
        }
    })?;
    match formula {
        Formula::Pred(p, args) => Ok((p, args)),
        _ => Err(ModelIoError::BadKey {
            key: key.to_string(),
            reason: "expected a predicate atom".into(),
        }),
    }
}

fn parse_dep_key(key: &str, voc: &Vocabulary) -> Result<(TermSet, crate::syntax::Term), ModelIoError> {
    let formula = parse_formula(key, voc, Dialect::TimedFuncId).map_err(|e| {
        ModelIoError::BadKey {
            key: key.to_string(),
            reason: e.to_string(),
        }
    })?;
    match formula {
        Formula::DepAtom(x, y) => Ok((x, y)),
        _ => Err(ModelIoError::BadKey {
            key: key.to_string(),
            reason: "expected a dependence atom".into(),
        }),
    }
}

fn partition_from_classes(
    names: &[String],
    classes: &[Vec<String>],
    key: &str,
) -> Result<Partition, ModelIoError> {
    let index = state_indices(names);
    let mut label = vec![usize::MAX; names.len()];
    for (class_id, class) in classes.iter().enumerate() {
        for member in class {
            let &i = index.get(member.as_str()).ok_or_else(|| ModelIoError::BadKey {
                key: key.to_string(),
                reason: format!("unknown state `{member}`"),
            })?;
            label[i] = class_id;
        }
    }
    if label.iter().any(|&l| l == usize::MAX) {
        return Err(ModelIoError::BadKey {
            key: key.to_string(),
            reason: "partition does not cover every state".into(),
        });
    }
    Ok(Partition::from_labels(&label))
}

fn partition_to_classes(p: &Partition, names: &[String]) -> Vec<Vec<String>> {
    let mut classes = p.classes();
    // canonical: classes ordered by least member
    classes.sort_by_key(|c| c[0]);
    classes
        .into_iter()
        .map(|c| c.into_iter().map(|i| names[i].clone()).collect())
        .collect()
}

pub fn model_from_json(text: &str) -> Result<Model, ModelIoError> {
    let raw: RawModel = serde_json::from_str(text)?;
    let voc = Vocabulary::new(
        raw.vocabulary.variables.clone(),
        raw.vocabulary.predicates.clone(),
        raw.vocabulary.functions.clone(),
    )?;
    match raw.kind.as_str() {
        "dynamical" => {
            let transition = load_transition(&raw.states, &raw.g)?;
            let mut values = Vec::with_capacity(raw.states.len());
            for name in &raw.states {
                let row = raw
                    .values
                    .get(name)
                    .ok_or_else(|| ModelIoError::MissingValue {
                        state: name.clone(),
                        variable: "*".into(),
                    })?;
                let mut state_row = Vec::with_capacity(voc.num_variables());
                for var in voc.variable_names() {
                    let v = row.get(var).ok_or_else(|| ModelIoError::MissingValue {
                        state: name.clone(),
                        variable: var.clone(),
                    })?;
                    state_row.push(v.clone());
                }
                values.push(state_row);
            }
            let mut pred_interp = vec![BTreeSet::new(); voc.predicates_map().len()];
            for (name, tuples) in &raw.pred {
                let (p, _) = voc
                    .lookup_pred(name)
                    .ok_or_else(|| ModelIoError::UnknownSymbol(name.clone()))?;
                pred_interp[p.0] = tuples.iter().cloned().collect();
            }
            let mut func_interp = vec![BTreeMap::new(); voc.functions_map().len()];
            for (name, rows) in &raw.func {
                let (f, _) = voc
                    .lookup_func(name)
                    .ok_or_else(|| ModelIoError::UnknownSymbol(name.clone()))?;
                let mut table = BTreeMap::new();
                for row in rows {
                    if row.is_empty() {
                        return Err(ModelIoError::BadKey {
                            key: name.clone(),
                            reason: "function row needs at least a result".into(),
                        });
                    }
                    let (result, args) = row.split_last().unwrap();
                    table.insert(args.to_vec(), result.clone());
                }
                func_interp[f.0] = table;
            }
            let truncated: TruncationInfo = load_world_set(&raw.states, &raw.truncated, "truncated")?;
            Ok(Model::Dynamical(DynamicalModel::new(
                voc,
                raw.states,
                transition,
                values,
                pred_interp,
                func_interp,
                truncated,
            )))
        }
        "standard" => {
            let transition = load_transition(&raw.states, &raw.g)?;
            let mut var_eqv = Vec::with_capacity(voc.num_variables());
            for var in voc.variable_names() {
                let classes = raw
                    .eq
                    .get(var)
                    .ok_or_else(|| ModelIoError::BadKey {
                        key: var.clone(),
                        reason: "missing relation".into(),
                    })?;
                var_eqv.push(partition_from_classes(&raw.states, classes, var)?);
            }
            let mut atom_val = BTreeMap::new();
            for (key, worlds) in &raw.atoms {
                let atom = parse_atom_key(key, &voc)?;
                atom_val.insert(atom, load_world_set(&raw.states, worlds, "atoms")?);
            }
            Ok(Model::Standard(StandardRelationalModel::new(
                voc,
                raw.states,
                transition,
                var_eqv,
                atom_val,
                raw.depth_bound.unwrap_or(0),
            )))
        }
        "general" => {
            let transition = load_transition(&raw.states, &raw.g)?;
            let depth_bound = raw
                .depth_bound
                .ok_or(ModelIoError::MissingField("depth_bound"))?;
            let mut eq_fam = BTreeMap::new();
            for (key, classes) in &raw.eq {
                let set = parse_term_set(key, &voc, Dialect::Core).map_err(|e| {
                    ModelIoError::BadKey {
                        key: key.clone(),
                        reason: e.to_string(),
                    }
                })?;
                eq_fam.insert(set, partition_from_classes(&raw.states, classes, key)?);
            }
            let mut atom_val = BTreeMap::new();
            for (key, worlds) in &raw.atoms {
                let atom = parse_atom_key(key, &voc)?;
                atom_val.insert(atom, load_world_set(&raw.states, worlds, "atoms")?);
            }
            let mut dep_val = BTreeMap::new();
            for (key, worlds) in &raw.dep_atoms {
                let atom = parse_dep_key(key, &voc)?;
                dep_val.insert(atom, load_world_set(&raw.states, worlds, "dep_atoms")?);
            }
            Ok(Model::General(GeneralRelationalModel::new(
                voc,
                raw.states,
                transition,
                depth_bound,
                eq_fam,
                atom_val,
                dep_val,
            )))
        }
        "lfdf" => {
            let objects: BTreeSet<Value> = raw.objects.iter().cloned().collect();
            let mut pred_interp = vec![BTreeSet::new(); voc.predicates_map().len()];
            for (name, tuples) in &raw.pred {
                let (p, _) = voc
                    .lookup_pred(name)
                    .ok_or_else(|| ModelIoError::UnknownSymbol(name.clone()))?;
                pred_interp[p.0] = tuples.iter().cloned().collect();
            }
            let mut func_interp = vec![BTreeMap::new(); voc.functions_map().len()];
            for (name, rows) in &raw.func {
                let (f, _) = voc
                    .lookup_func(name)
                    .ok_or_else(|| ModelIoError::UnknownSymbol(name.clone()))?;
                let mut table = BTreeMap::new();
                for row in rows {
                    if row.is_empty() {
                        return Err(ModelIoError::BadKey {
                            key: name.clone(),
                            reason: "function row needs at least a result".into(),
                        });
                    }
                    let (result, args) = row.split_last().unwrap();
                    table.insert(args.to_vec(), result.clone());
                }
                func_interp[f.0] = table;
            }
            let mut team: Vec<Assignment> = Vec::with_capacity(raw.team.len());
            for (i, row) in raw.team.iter().enumerate() {
                let mut assignment = Vec::with_capacity(voc.num_variables());
                for var in voc.variable_names() {
                    let v = row.get(var).ok_or_else(|| ModelIoError::MissingValue {
                        state: format!("assignment {i}"),
                        variable: var.clone(),
                    })?;
                    assignment.push(v.clone());
                }
                team.push(assignment);
            }
            Ok(Model::LfdF(LfdFModel::new(
                voc,
                objects,
                pred_interp,
                func_interp,
                team,
            )))
        }
        other => Err(ModelIoError::BadKind(other.to_string())),
    }
}

pub fn model_to_json(model: &Model) -> String {
    let voc = model.vocabulary();
    let raw_voc = RawVocabulary {
        variables: voc.variable_names().to_vec(),
        predicates: voc.predicates_map(),
        functions: voc.functions_map(),
    };
    let mut raw = RawModel {
        kind: model.kind().to_string(),
        vocabulary: raw_voc,
        states: Vec::new(),
        g: BTreeMap::new(),
        values: BTreeMap::new(),
        pred: BTreeMap::new(),
        func: BTreeMap::new(),
        truncated: Vec::new(),
        depth_bound: None,
        eq: BTreeMap::new(),
        atoms: BTreeMap::new(),
        dep_atoms: BTreeMap::new(),
        objects: Vec::new(),
        team: Vec::new(),
    };
    match model {
        Model::Dynamical(m) => {
            raw.states = m.state_names().to_vec();
            for s in m.states() {
                raw.g.insert(
                    m.state_name(s).to_string(),
                    m.state_name(m.step(s)).to_string(),
                );
                let row: BTreeMap<String, Value> = voc
                    .variables()
                    .map(|(v, name)| (name.to_string(), m.var_value(s, v).clone()))
                    .collect();
                raw.values.insert(m.state_name(s).to_string(), row);
            }
            for (p, name, _) in voc.predicates() {
                if !m.pred_tuples(p).is_empty() {
                    raw.pred.insert(
                        name.to_string(),
                        m.pred_tuples(p).iter().cloned().collect(),
                    );
                }
            }
            for (f, name, _) in voc.functions() {
                let rows: Vec<Vec<Value>> = m
                    .func_table(f)
                    .iter()
                    .map(|(args, result)| {
                        let mut row = args.clone();
                        row.push(result.clone());
                        row
                    })
                    .collect();
                if !rows.is_empty() {
                    raw.func.insert(name.to_string(), rows);
                }
            }
            raw.truncated = m
                .truncated()
                .iter()
                .map(|&s| m.state_name(s).to_string())
                .collect();
        }
        Model::Standard(m) => {
            raw.states = m.world_names().to_vec();
            for w in m.worlds() {
                raw.g.insert(
                    m.world_name(w).to_string(),
                    m.world_name(m.step(w)).to_string(),
                );
            }
            for (i, var) in voc.variable_names().iter().enumerate() {
                raw.eq.insert(
                    var.clone(),
                    partition_to_classes(&m.var_eqv()[i], m.world_names()),
                );
            }
            for ((p, args), worlds) in m.atom_val() {
                raw.atoms.insert(
                    m.render_atom(*p, args),
                    worlds.iter().map(|&w| m.world_name(w).to_string()).collect(),
                );
            }
            raw.depth_bound = Some(m.depth_bound());
        }
        Model::General(m) => {
            raw.states = m.world_names().to_vec();
            for w in m.worlds() {
                raw.g.insert(
                    m.world_name(w).to_string(),
                    m.world_name(m.step(w)).to_string(),
                );
            }
            raw.depth_bound = Some(m.depth_bound());
            for (set, partition) in m.eq_fam() {
                raw.eq.insert(
                    render_term_set(set, voc),
                    partition_to_classes(partition, m.world_names()),
                );
            }
            for ((p, args), worlds) in m.atom_val() {
                let rendered: Vec<String> = args.iter().map(|t| render_term(t, voc)).collect();
                raw.atoms.insert(
                    format!("{}({})", voc.pred_name(*p), rendered.join(",")),
                    worlds.iter().map(|&w| m.world_name(w).to_string()).collect(),
                );
            }
            for ((x, y), worlds) in m.dep_val() {
                raw.dep_atoms.insert(
                    format!("dep[{}] {}", render_term_set(x, voc), render_term(y, voc)),
                    worlds.iter().map(|&w| m.world_name(w).to_string()).collect(),
                );
            }
        }
        Model::LfdF(m) => {
            raw.objects = m.objects().iter().cloned().collect();
            for (p, name, _) in voc.predicates() {
                if !m.pred_tuples(p).is_empty() {
                    raw.pred.insert(
                        name.to_string(),
                        m.pred_tuples(p).iter().cloned().collect(),
                    );
                }
            }
            for (f, name, _) in voc.functions() {
                let rows: Vec<Vec<Value>> = m
                    .func_table(f)
                    .iter()
                    .map(|(args, result)| {
                        let mut row = args.clone();
                        row.push(result.clone());
                        row
                    })
                    .collect();
                if !rows.is_empty() {
                    raw.func.insert(name.to_string(), rows);
                }
            }
            for assignment in m.team() {
                let row: BTreeMap<String, Value> = voc
                    .variables()
                    .map(|(v, name)| (name.to_string(), assignment[v.0].clone()))
                    .collect();
                raw.team.push(row);
            }
        }
    }
    let mut text = serde_json::to_string_pretty(&raw).expect("model serialization");
    text.push('\n');
    text
}
