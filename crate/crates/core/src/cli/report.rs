use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};
use serde_json::Value;

use crate::graph::DagInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    /// `file:PATH` or `gen:SPEC`.
    pub source: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
}

impl InstanceSummary {
    pub fn new(source: String, inst: &DagInstance) -> Self {
        Self {
            source,
            n: inst.n(),
            m: inst.m(),
            k: inst.k(),
        }
    }
}

/// Everything a command computed. Field order and map ordering are fixed,
/// so equal inputs give byte-identical JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub method: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub instance: Option<InstanceSummary>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lp_objective: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub solution_cost: Option<f64>,
    /// `cost / ((k+1) LP)` when a solution is reported. The inner `None`
    /// (`null` in JSON) stands for NaN, which happens exactly when the LP
    /// objective is 0.
    #[serde(skip_serializing_if = "Option::is_none", default, deserialize_with = "present")]
    pub ratio: Option<Option<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub deleted: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub feasible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub details: BTreeMap<String, Value>,
    /// Only filled with `--timing`, which gives up byte-identical output.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_s: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str, method: impl Into<String>) -> Self {
        Self {
            command: command.to_string(),
            method: method.into(),
            status: "ok".into(),
            instance: None,
            seed: None,
            lp_objective: None,
            solution_cost: None,
            ratio: None,
            deleted: None,
            feasible: None,
            x: None,
            details: BTreeMap::new(),
            wall_time_s: None,
        }
    }

    /// Fills cost and ratio; the ratio is left as `null` when `lp` is 0.
    pub fn set_solution(&mut self, k: usize, lp: f64, cost: f64, deleted: Vec<usize>, feasible: bool) {
        self.lp_objective = Some(lp);
        self.solution_cost = Some(cost);
        self.ratio = Some((lp > 0.0).then(|| cost / ((k + 1) as f64 * lp)));
        self.deleted = Some(deleted);
        self.feasible = Some(feasible);
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.to_string(), value.into());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// A present `ratio` key, even when `null`, means a solution was reported.
fn present<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Option<f64>>, D::Error> {
    Option::<f64>::deserialize(d).map(Some)
}
