//! JSON description of a constraint list.
//!
//! ```json
//! {"n": 16, "constraints": [
//!   {"type": "box"},
//!   {"type": "diag_zero"},
//!   {"type": "degree_eq", "value": 2},
//!   {"type": "theta_cap", "pattern": "clique:3", "bound": 4},
//!   {"type": "spectral_hull", "graph": "cycle:16"}
//! ]}
//! ```
//!
//! Graph references are builtin specs or `file:path`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::load_graph;
use crate::sets::ConstraintSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstraintSpec {
    Box {
        #[serde(default)]
        lo: Option<f64>,
        #[serde(default)]
        hi: Option<f64>,
    },
    DiagZero,
    DiagFix {
        value: f64,
    },
    DegreeEq {
        value: f64,
    },
    DegreeCap {
        value: f64,
    },
    EdgeSumEq {
        value: f64,
    },
    SpectralHull {
        graph: String,
    },
    DegreeHull {
        graph: String,
    },
    Lambda2Ge {
        value: f64,
    },
    ThetaCap {
        pattern: String,
        bound: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintConfig {
    pub n: usize,
    pub constraints: Vec<ConstraintSpec>,
}

impl ConstraintConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ConstraintConfig = serde_json::from_str(text)?;
        if cfg.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        if cfg.constraints.is_empty() {
            return Err(Error::Config("constraint list is empty".into()));
        }
        Ok(cfg)
    }

    /// Resolves graph references and checks every set against `n`.
    pub fn build(&self) -> Result<Vec<ConstraintSet>> {
        let n = self.n;
        let sized = |spec: &str| -> Result<crate::graph::SymMatrix> {
            let g = load_graph(spec)?;
            if g.n() != n {
                return Err(Error::Config(format!(
                    "`{spec}` has {} nodes, config expects {n}",
                    g.n()
                )));
            }
            Ok(g.adjacency)
        };
        let sets = self
            .constraints
            .iter()
            .map(|c| {
                let set = match c {
                    ConstraintSpec::Box { lo, hi } => ConstraintSet::Box {
                        lo: lo.unwrap_or(0.0),
                        hi: hi.unwrap_or(1.0),
                    },
                    ConstraintSpec::DiagZero => ConstraintSet::diag_zero(),
                    ConstraintSpec::DiagFix { value } => ConstraintSet::DiagFix { value: *value },
                    ConstraintSpec::DegreeEq { value } => ConstraintSet::DegreeEq { value: *value },
                    ConstraintSpec::DegreeCap { value } => {
                        ConstraintSet::DegreeCap { value: *value }
                    }
                    ConstraintSpec::EdgeSumEq { value } => {
                        ConstraintSet::EdgeSumEq { value: *value }
                    }
                    ConstraintSpec::SpectralHull { graph } => {
                        ConstraintSet::spectral_hull(&sized(graph)?)?
                    }
                    ConstraintSpec::DegreeHull { graph } => {
                        ConstraintSet::degree_hull(&sized(graph)?)
                    }
                    ConstraintSpec::Lambda2Ge { value } => {
                        ConstraintSet::Lambda2Ge { epsilon: *value }
                    }
                    ConstraintSpec::ThetaCap { pattern, bound } => {
                        ConstraintSet::theta_cap(load_graph(pattern)?.adjacency, *bound)
                    }
                };
                set.check_size(n)
                    .map_err(|e| Error::Config(e.to_string()))?;
                Ok(set)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(sets)
    }
}

pub fn load_constraints(text: &str) -> Result<(usize, Vec<ConstraintSet>)> {
    let cfg = ConstraintConfig::from_json(text)?;
    Ok((cfg.n, cfg.build()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        let text = r#"{"n": 16, "constraints": [
            {"type": "box"}, {"type": "diag_zero"}, {"type": "degree_eq", "value": 2},
            {"type": "degree_cap", "value": 2.5}, {"type": "edge_sum_eq", "value": 16},
            {"type": "spectral_hull", "graph": "cycle:16"},
            {"type": "degree_hull", "graph": "clebsch"},
            {"type": "lambda2_ge", "value": 1.1},
            {"type": "theta_cap", "pattern": "clique:3", "bound": 4}
        ]}"#;
        let (n, sets) = load_constraints(text).unwrap();
        assert_eq!(n, 16);
        let kinds: Vec<&str> = sets.iter().map(|s| s.kind()).collect();
        assert_eq!(
            kinds,
            [
                "box",
                "diag_fix",
                "degree_eq",
                "degree_cap",
                "edge_sum_eq",
                "spectral_hull",
                "degree_hull",
                "lambda2_ge",
                "theta_cap"
            ]
        );
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(load_constraints(r#"{"n": 4, "constraints": []}"#).is_err());
        assert!(load_constraints(r#"{"n": 4, "constraints": [{"type": "wat"}]}"#).is_err());
        assert!(load_constraints(
            r#"{"n": 4, "constraints": [{"type": "spectral_hull", "graph": "cycle:5"}]}"#
        )
        .is_err());
        assert!(load_constraints(
            r#"{"n": 4, "constraints": [{"type": "box", "lo": 2, "hi": 1}]}"#
        )
        .is_err());
    }
}
