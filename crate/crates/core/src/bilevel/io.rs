//! JSON interchange for instances. Every number is a rational string.

use serde::{Deserialize, Serialize};

use super::{BilevelError, Caps, LeaderSet, Mode, RobustBilevelInstance};
use crate::numeric::{Matrix, Rational, Vector};
use crate::uncertainty::UncertaintySet;

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum LeaderSetDoc {
    AllBinary,
    Explicit { points: Vec<Vector> },
    RelaxedBox,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum UncertaintyDoc {
    Interval { lower: Vector, upper: Vector },
    Discrete { scenarios: Vec<Vector> },
    ConvexHull { points: Vec<Vector> },
    ProductFinite { values: Vec<Vec<Rational>> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    p: usize,
    n: usize,
    #[serde(rename = "A")]
    a: Vec<Vector>,
    #[serde(rename = "B")]
    b_mat: Vec<Vector>,
    b: Vector,
    d: Vector,
    leader_set: LeaderSetDoc,
    uncertainty: UncertaintyDoc,
    mode_default: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    var_map: Option<Vec<String>>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    big_m: Option<Rational>,
}

impl From<&RobustBilevelInstance> for InstanceDoc {
    fn from(inst: &RobustBilevelInstance) -> Self {
        InstanceDoc {
            p: inst.p,
            n: inst.n,
            a: inst.a.row_vecs(),
            b_mat: inst.b_mat.row_vecs(),
            b: inst.b.clone(),
            d: inst.d.clone(),
            leader_set: match &inst.leader_set {
                LeaderSet::AllBinary => LeaderSetDoc::AllBinary,
                LeaderSet::Explicit { points } => LeaderSetDoc::Explicit { points: points.clone() },
                LeaderSet::RelaxedBox => LeaderSetDoc::RelaxedBox,
            },
            uncertainty: match &inst.uncertainty {
                UncertaintySet::Interval { lower, upper } => {
                    UncertaintyDoc::Interval { lower: lower.clone(), upper: upper.clone() }
                }
                UncertaintySet::Discrete { scenarios } => UncertaintyDoc::Discrete { scenarios: scenarios.clone() },
                UncertaintySet::ConvexHull { points } => UncertaintyDoc::ConvexHull { points: points.clone() },
                UncertaintySet::ProductFinite { values } => UncertaintyDoc::ProductFinite { values: values.clone() },
            },
            mode_default: inst.mode_default,
            var_map: inst.var_map.clone(),
            big_m: inst.big_m.clone(),
        }
    }
}

impl TryFrom<InstanceDoc> for RobustBilevelInstance {
    type Error = BilevelError;

    fn try_from(doc: InstanceDoc) -> Result<Self, BilevelError> {
        let m = doc.a.len();
        // a leader-free instance may spell B as [] instead of m empty rows
        let b_rows = if doc.p == 0 && doc.b_mat.is_empty() { vec![Vec::new(); m] } else { doc.b_mat };
        Ok(RobustBilevelInstance {
            p: doc.p,
            n: doc.n,
            a: Matrix::from_rows(doc.a, doc.n)?,
            b_mat: Matrix::from_rows(b_rows, doc.p)?,
            b: doc.b,
            d: doc.d,
            leader_set: match doc.leader_set {
                LeaderSetDoc::AllBinary => LeaderSet::AllBinary,
                LeaderSetDoc::Explicit { points } => LeaderSet::Explicit { points },
                LeaderSetDoc::RelaxedBox => LeaderSet::RelaxedBox,
            },
            uncertainty: match doc.uncertainty {
                UncertaintyDoc::Interval { lower, upper } => UncertaintySet::Interval { lower, upper },
                UncertaintyDoc::Discrete { scenarios } => UncertaintySet::Discrete { scenarios },
                UncertaintyDoc::ConvexHull { points } => UncertaintySet::ConvexHull { points },
                UncertaintyDoc::ProductFinite { values } => UncertaintySet::ProductFinite { values },
            },
            mode_default: doc.mode_default,
            var_map: doc.var_map,
            big_m: doc.big_m,
        })
    }
}

/// Parses an instance and validates it, including nonemptiness and
/// boundedness of the follower's set at every leader decision.
pub fn load_instance(text: &str, caps: &Caps) -> Result<RobustBilevelInstance, BilevelError> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| BilevelError::Format(e.to_string()))?;
    let inst = RobustBilevelInstance::try_from(doc)?;
    inst.validate(caps)?;
    Ok(inst)
}

pub fn save_instance(inst: &RobustBilevelInstance) -> String {
    serde_json::to_string_pretty(&InstanceDoc::from(inst)).expect("instances serialize")
}
