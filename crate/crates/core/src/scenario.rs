//! Domain types for algorithm selection scenarios.
//!
//! A [`Scenario`] is an immutable bundle of metadata, run records,
//! feature tables, feature-group costs and cross-validation folds.
//! Values of maximization measures are negated when a scenario is
//! assembled so that all internal logic minimizes; the writer restores
//! the declared orientation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arff::ArffTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Runtime,
    SolutionQuality,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerformanceMeasure {
    pub name: String,
    pub kind: MeasureKind,
    /// Declared orientation. Stored run values are always
    /// minimization-oriented; a `true` here means they were negated on
    /// load and must be negated back on write.
    pub maximize: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmDecl {
    pub id: String,
    pub deterministic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureStep {
    pub name: String,
    pub requires: Vec<String>,
    pub provides: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaInfo {
    pub scenario_id: String,
    pub measures: Vec<PerformanceMeasure>,
    pub algorithm_cutoff_time: f64,
    pub algorithm_cutoff_memory: Option<f64>,
    pub features_cutoff_time: Option<f64>,
    pub algorithms: Vec<AlgorithmDecl>,
    pub feature_names: Vec<String>,
    pub feature_steps: Vec<FeatureStep>,
    pub default_steps: Vec<String>,
}

impl MetaInfo {
    pub fn measure_index(&self, name: &str) -> Option<usize> {
        self.measures.iter().position(|m| m.name == name)
    }

    /// Resolves the designated measure: the named one, or the first
    /// declared by default.
    pub fn resolve_measure(&self, name: Option<&str>) -> Option<usize> {
        match name {
            Some(n) => self.measure_index(n),
            None => (!self.measures.is_empty()).then_some(0),
        }
    }

    pub fn algorithm_ids(&self) -> Vec<String> {
        self.algorithms.iter().map(|a| a.id.clone()).collect()
    }

    pub fn step_index(&self, name: &str) -> Option<usize> {
        self.feature_steps.iter().position(|s| s.name == name)
    }

    /// Step that provides the given feature, if exactly declared.
    pub fn step_of_feature(&self, feature: &str) -> Option<&FeatureStep> {
        self.feature_steps
            .iter()
            .find(|s| s.provides.iter().any(|f| f == feature))
    }
}

/// Run completion status, in tie-break order for repetition
/// aggregation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    Timeout,
    Memout,
    NotApplicable,
    Crash,
    Other,
}

impl RunStatus {
    pub const ALL: [RunStatus; 6] = [
        RunStatus::Ok,
        RunStatus::Timeout,
        RunStatus::Memout,
        RunStatus::NotApplicable,
        RunStatus::Crash,
        RunStatus::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Ok => "ok",
            RunStatus::Timeout => "timeout",
            RunStatus::Memout => "memout",
            RunStatus::NotApplicable => "not_applicable",
            RunStatus::Crash => "crash",
            RunStatus::Other => "other",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.as_str() == s)
    }
}

/// Feature-step completion status, in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureStepStatus {
    Ok,
    Timeout,
    Memout,
    Presolved,
    Crash,
    Other,
    Unknown,
}

impl FeatureStepStatus {
    pub const ALL: [FeatureStepStatus; 7] = [
        FeatureStepStatus::Ok,
        FeatureStepStatus::Timeout,
        FeatureStepStatus::Memout,
        FeatureStepStatus::Presolved,
        FeatureStepStatus::Crash,
        FeatureStepStatus::Other,
        FeatureStepStatus::Unknown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureStepStatus::Ok => "ok",
            FeatureStepStatus::Timeout => "timeout",
            FeatureStepStatus::Memout => "memout",
            FeatureStepStatus::Presolved => "presolved",
            FeatureStepStatus::Crash => "crash",
            FeatureStepStatus::Other => "other",
            FeatureStepStatus::Unknown => "unknown",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.as_str() == s)
    }
}

/// One (instance, repetition, algorithm) performance observation.
/// `values` is indexed parallel to `MetaInfo::measures`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance_id: String,
    pub repetition: u32,
    pub algorithm_id: String,
    pub values: Vec<Option<f64>>,
    pub status: RunStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub instance_id: String,
    pub repetition: u32,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureTable {
    pub feature_names: Vec<String>,
    pub rows: Vec<FeatureRow>,
}

impl FeatureTable {
    pub fn instances(&self) -> BTreeSet<&str> {
        self.rows.iter().map(|r| r.instance_id.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureStatusRow {
    pub instance_id: String,
    pub repetition: u32,
    /// Indexed parallel to the owning table's `step_names`.
    pub statuses: Vec<FeatureStepStatus>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureStatusTable {
    pub step_names: Vec<String>,
    pub rows: Vec<FeatureStatusRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureCostRow {
    pub instance_id: String,
    pub repetition: u32,
    pub costs: Vec<Option<f64>>,
}

/// Per-step feature computation costs in seconds. May be absent for a
/// scenario, in which case all costs count as zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureCostTable {
    pub step_names: Vec<String>,
    pub rows: Vec<FeatureCostRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldRow {
    pub instance_id: String,
    pub repetition: u32,
    pub fold: u32,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CvFolds {
    pub rows: Vec<FoldRow>,
}

impl CvFolds {
    pub fn fold_ids(&self) -> BTreeSet<u32> {
        self.rows.iter().map(|r| r.fold).collect()
    }

    pub fn fold_of(&self, instance: &str) -> Option<u32> {
        self.rows.iter().find(|r| r.instance_id == instance).map(|r| r.fold)
    }
}

/// Immutable scenario bundle. Construct via [`crate::io::load_scenario`],
/// [`crate::gen::generate`], or field-by-field in tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub meta: MetaInfo,
    pub runs: Vec<RunRecord>,
    pub features: FeatureTable,
    pub feature_status: FeatureStatusTable,
    pub feature_costs: Option<FeatureCostTable>,
    pub folds: CvFolds,
    pub ground_truth: Option<ArffTable>,
    pub readme: String,
    pub citations: String,
}

impl Scenario {
    /// Sorted set of instance identifiers, taken from the feature table.
    pub fn instances(&self) -> Vec<String> {
        self.features
            .instances()
            .into_iter()
            .map(str::to_string)
            .collect()
    }

    pub fn cutoff(&self) -> f64 {
        self.meta.algorithm_cutoff_time
    }

    /// Restricts the scenario to a subset of its algorithms; runs of
    /// removed algorithms are dropped. Used by portfolio subset search.
    pub fn restrict_algorithms(&self, keep: &BTreeSet<String>) -> Scenario {
        let mut out = self.clone();
        out.meta.algorithms.retain(|a| keep.contains(&a.id));
        out.runs.retain(|r| keep.contains(&r.algorithm_id));
        out
    }
}

/// Negates stored values of maximization measures, turning them into
/// minimization form. Called once when a scenario is assembled from
/// parsed files; exact and loss-free (sign-bit flip).
pub fn canonicalize_measures(scenario: &mut Scenario) {
    let flip: Vec<bool> = scenario.meta.measures.iter().map(|m| m.maximize).collect();
    if !flip.iter().any(|f| *f) {
        return;
    }
    for run in &mut scenario.runs {
        for (value, flip) in run.values.iter_mut().zip(&flip) {
            if *flip {
                if let Some(v) = value {
                    *v = -*v;
                }
            }
        }
    }
}

/// Inverse of [`canonicalize_measures`], applied on write.
pub fn decanonicalize_measures(scenario: &mut Scenario) {
    canonicalize_measures(scenario);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_parse_roundtrip() {
        for s in RunStatus::ALL {
            assert_eq!(RunStatus::parse(s.as_str()), Some(s));
        }
        for s in FeatureStepStatus::ALL {
            assert_eq!(FeatureStepStatus::parse(s.as_str()), Some(s));
        }
        assert_eq!(RunStatus::parse("presolved"), None);
    }

    #[test]
    fn canonicalization_is_involutive() {
        let meta = MetaInfo {
            scenario_id: "s".into(),
            measures: vec![
                PerformanceMeasure { name: "quality".into(), kind: MeasureKind::SolutionQuality, maximize: true },
                PerformanceMeasure { name: "runtime".into(), kind: MeasureKind::Runtime, maximize: false },
            ],
            algorithm_cutoff_time: 10.0,
            algorithm_cutoff_memory: None,
            features_cutoff_time: None,
            algorithms: vec![AlgorithmDecl { id: "a".into(), deterministic: true }],
            feature_names: vec!["f".into()],
            feature_steps: vec![FeatureStep { name: "s1".into(), requires: vec![], provides: vec!["f".into()] }],
            default_steps: vec!["s1".into()],
        };
        let mut sc = Scenario {
            meta,
            runs: vec![RunRecord {
                instance_id: "i".into(),
                repetition: 1,
                algorithm_id: "a".into(),
                values: vec![Some(0.75), Some(3.0)],
                status: RunStatus::Ok,
            }],
            features: FeatureTable { feature_names: vec!["f".into()], rows: vec![] },
            feature_status: FeatureStatusTable { step_names: vec!["s1".into()], rows: vec![] },
            feature_costs: None,
            folds: CvFolds::default(),
            ground_truth: None,
            readme: String::new(),
            citations: String::new(),
        };
        let original = sc.clone();
        canonicalize_measures(&mut sc);
        assert_eq!(sc.runs[0].values, vec![Some(-0.75), Some(3.0)]);
        decanonicalize_measures(&mut sc);
        assert_eq!(sc, original);
    }
}
