//! Built-in example models. Figures with infinite tails are shipped as
//! finite truncations: cut-off forward tails end in sentinel states
//! flagged as truncated, and infinite pasts or bi-infinite lines are
//! compressed into plain cycles (the only finite shapes that keep every
//! time value infinite).

use crate::models::{DynamicalModel, Model, TruncationInfo, Value};
use crate::syntax::Vocabulary;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, thiserror::Error)]
#[error("unknown example `{0}`")]
pub struct UnknownExample(pub String);

pub const EXAMPLE_NAMES: &[&str] = &[
    "fib-mod-<m>",
    "galilean-mod-<m>",
    "logistic-grid[-<cells>-<alphas>]",
    "fig1-s1",
    "fig1-s2",
    "fig2-s3",
    "fig2-s4",
    "fig2-s5",
    "fig2-s6",
    "fig3-s3p",
    "fig3-s4p",
];

/// The family of Fibonacci-style recurrences reduced mod `m`: states
/// are pairs, the transition is `(a, b) -> (b, a+b mod m)`, and `S` is
/// addition mod `m`.
pub fn fib_mod(m: i64) -> DynamicalModel {
    assert!(m >= 1, "modulus must be positive");
    let voc = Vocabulary::new(
        vec!["x".into(), "y".into()],
        BTreeMap::new(),
        BTreeMap::from([("S".into(), 2)]),
    )
    .unwrap();
    let mut names = Vec::new();
    let mut values = Vec::new();
    let mut transition = Vec::new();
    let index = |a: i64, b: i64| (a * m + b) as usize;
    for a in 0..m {
        for b in 0..m {
            names.push(format!("{a},{b}"));
            values.push(vec![Value::Int(a), Value::Int(b)]);
            transition.push(index(b, (a + b) % m));
        }
    }
    let mut add = BTreeMap::new();
    for a in 0..m {
        for b in 0..m {
            add.insert(
                vec![Value::Int(a), Value::Int(b)],
                Value::Int((a + b) % m),
            );
        }
    }
    DynamicalModel::new(
        voc,
        names,
        transition,
        values,
        vec![],
        vec![add],
        TruncationInfo::new(),
    )
}

/// Uniform motion with position and velocity reduced mod `m`:
/// `(x, v) -> (x+v mod m, v)`.
pub fn galilean_mod(m: i64) -> DynamicalModel {
    assert!(m >= 1, "modulus must be positive");
    let voc = Vocabulary::new(
        vec!["x".into(), "v".into()],
        BTreeMap::new(),
        BTreeMap::new(),
    )
    .unwrap();
    let mut names = Vec::new();
    let mut values = Vec::new();
    let mut transition = Vec::new();
    let index = |x: i64, v: i64| (x * m + v) as usize;
    for x in 0..m {
        for v in 0..m {
            names.push(format!("{x},{v}"));
            values.push(vec![Value::Int(x), Value::Int(v)]);
            transition.push(index((x + v) % m, v));
        }
    }
    DynamicalModel::new(
        voc,
        names,
        transition,
        values,
        vec![],
        vec![],
        TruncationInfo::new(),
    )
}

/// A coarse finite surrogate of the logistic map: the unit interval is
/// cut into `cells` cells tracked by their midpoints, and the growth
/// parameter ranges over `alphas` grid points of `[0,4]`. The values do
/// not reproduce real logistic dynamics; this is a shape for exercising
/// the analysis passes.
pub fn logistic_grid(cells: usize, alphas: usize) -> DynamicalModel {
    assert!(cells >= 1 && alphas >= 1);
    let voc = Vocabulary::new(
        vec!["x".into(), "a".into()],
        BTreeMap::new(),
        BTreeMap::new(),
    )
    .unwrap();
    let mut names = Vec::new();
    let mut values = Vec::new();
    let mut transition = Vec::new();
    let index = |c: usize, j: usize| c * alphas + j;
    for c in 0..cells {
        for j in 0..alphas {
            names.push(format!("{c},{j}"));
            values.push(vec![Value::Int(c as i64), Value::Int(j as i64)]);
            let alpha = if alphas == 1 {
                0.0
            } else {
                4.0 * j as f64 / (alphas - 1) as f64
            };
            let midpoint = (c as f64 + 0.5) / cells as f64;
            let image = alpha * midpoint * (1.0 - midpoint);
            let next_cell = ((image * cells as f64) as usize).min(cells - 1);
            transition.push(index(next_cell, j));
        }
    }
    DynamicalModel::new(
        voc,
        names,
        transition,
        values,
        vec![],
        vec![],
        TruncationInfo::new(),
    )
}

fn chain_model(
    names: &[&str],
    edges: &[(usize, usize)],
    truncated: &[usize],
) -> DynamicalModel {
    let voc = Vocabulary::of_variables(&["x"]).unwrap();
    let mut transition = vec![usize::MAX; names.len()];
    for &(from, to) in edges {
        transition[from] = to;
    }
    let values = (0..names.len())
        .map(|i| vec![Value::Int(i as i64)])
        .collect();
    DynamicalModel::new(
        voc,
        names.iter().map(|s| s.to_string()).collect(),
        transition,
        values,
        vec![],
        vec![],
        truncated.iter().copied().collect::<BTreeSet<usize>>(),
    )
}

/// Two-state tail into a three-cycle.
pub fn fig1_s1() -> DynamicalModel {
    chain_model(
        &["s1", "s2", "s3", "s4", "s5"],
        &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 2)],
        &[],
    )
}

/// A four-cycle.
pub fn fig1_s2() -> DynamicalModel {
    chain_model(
        &["t1", "t2", "t3", "t4"],
        &[(0, 1), (1, 2), (2, 3), (3, 0)],
        &[],
    )
}

/// Two finite branches merging, with the infinite forward tail cut at a
/// sentinel.
pub fn fig2_s3() -> DynamicalModel {
    chain_model(
        &["w0", "w1", "w2", "k0", "k1", "wtail"],
        &[(0, 1), (1, 2), (3, 4), (4, 2), (2, 5), (5, 5)],
        &[5],
    )
}

/// Infinite past flowing into a terminal loop, compressed to a
/// three-cycle (every state keeps an infinite time value).
pub fn fig2_s4() -> DynamicalModel {
    chain_model(&["u0", "u1", "u2"], &[(0, 1), (1, 2), (2, 0)], &[])
}

/// Infinite past-chains into a four-cycle, compressed to the bare
/// four-cycle.
pub fn fig2_s5() -> DynamicalModel {
    chain_model(
        &["s3", "s4", "s5", "s6"],
        &[(0, 1), (1, 2), (2, 3), (3, 0)],
        &[],
    )
}

/// Disjoint union of the compressed loop component and a bi-infinite
/// line compressed to a two-cycle.
pub fn fig2_s6() -> DynamicalModel {
    chain_model(
        &["t1", "t2", "t3", "v1", "v2"],
        &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 3)],
        &[],
    )
}

/// Branches of unequal length merging: not timed. The forward tail is
/// cut at a sentinel.
pub fn fig3_s3p() -> DynamicalModel {
    chain_model(
        &["i0", "i1", "i2", "i3", "itail"],
        &[(0, 1), (1, 3), (2, 3), (3, 4), (4, 4)],
        &[4],
    )
}

/// One step into a genuine self-loop: not timed.
pub fn fig3_s4p() -> DynamicalModel {
    chain_model(&["j0", "j1"], &[(0, 1), (1, 1)], &[])
}

/// Resolves an example name, with the modulus or grid sizes read off
/// the name (`fib-mod-7`, `galilean-mod-5`, `logistic-grid-8-5`).
pub fn emit(name: &str) -> Result<Model, UnknownExample> {
    let unknown = || UnknownExample(name.to_string());
    if let Some(rest) = name.strip_prefix("fib-mod-") {
        let m: i64 = rest.parse().map_err(|_| unknown())?;
        if m < 1 {
            return Err(unknown());
        }
        return Ok(Model::Dynamical(fib_mod(m)));
    }
    if let Some(rest) = name.strip_prefix("galilean-mod-") {
        let m: i64 = rest.parse().map_err(|_| unknown())?;
        if m < 1 {
            return Err(unknown());
        }
        return Ok(Model::Dynamical(galilean_mod(m)));
    }
    if name == "logistic-grid" {
        return Ok(Model::Dynamical(logistic_grid(8, 5)));
    }
    if let Some(rest) = name.strip_prefix("logistic-grid-") {
        let parts: Vec<&str> = rest.split('-').collect();
        if parts.len() == 2 {
            let cells: usize = parts[0].parse().map_err(|_| unknown())?;
            let alphas: usize = parts[1].parse().map_err(|_| unknown())?;
            if cells >= 1 && alphas >= 1 {
                return Ok(Model::Dynamical(logistic_grid(cells, alphas)));
            }
        }
        return Err(unknown());
    }
    let fixed = match name {
        "fig1-s1" => fig1_s1(),
        "fig1-s2" => fig1_s2(),
        "fig2-s3" => fig2_s3(),
        "fig2-s4" => fig2_s4(),
        "fig2-s5" => fig2_s5(),
        "fig2-s6" => fig2_s6(),
        "fig3-s3p" => fig3_s3p(),
        "fig3-s4p" => fig3_s4p(),
        _ => return Err(unknown()),
    };
    Ok(Model::Dynamical(fixed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_example_validates() {
        let mut names: Vec<String> = vec![
            "fib-mod-5".into(),
            "galilean-mod-3".into(),
            "logistic-grid".into(),
            "logistic-grid-6-4".into(),
        ];
        names.extend(
            ["fig1-s1", "fig1-s2", "fig2-s3", "fig2-s4", "fig2-s5", "fig2-s6", "fig3-s3p", "fig3-s4p"]
                .iter()
                .map(|s| s.to_string()),
        );
        for name in names {
            match emit(&name).unwrap() {
                Model::Dynamical(m) => m.validate().unwrap_or_else(|e| {
                    panic!("{name}: {e}");
                }),
                _ => panic!("expected dynamical"),
            }
        }
        assert!(emit("no-such-example").is_err());
    }

    #[test]
    fn fib_mod_5_has_25_states() {
        assert_eq!(fib_mod(5).num_states(), 25);
    }
}
