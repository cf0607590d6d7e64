//! Parser and writer for `description.txt`, the scenario metadata file.
//!
//! The grammar is a flat restricted subset of YAML: `key: value` lines,
//! inline lists `[a, b]`, `#` comment lines, and one level of nesting
//! for feature steps:
//!
//! ```text
//! scenario_id: EXAMPLE
//! performance_measures: [runtime]
//! performance_types: [runtime]
//! maximize: [false]
//! algorithm_cutoff_time: 5000
//! algorithm_cutoff_memory: 2048
//! features_cutoff_time: 60
//! algorithms: [a01, a02]
//! algorithms_deterministic: [true, true]
//! features: [f001, f002, f003]
//! feature_step s01:
//!   requires: []
//!   provides: [f001, f002]
//! feature_step s02:
//!   requires: [s01]
//!   provides: [f003]
//! default_steps: [s01]
//! ```
//!
//! `algorithm_cutoff_memory` and `features_cutoff_time` are optional;
//! everything else is mandatory. Declaration order of measures,
//! algorithms, features and steps is preserved.

use std::fmt::Write as _;

use thiserror::Error;

use crate::arff::format_number;
use crate::scenario::{AlgorithmDecl, FeatureStep, MeasureKind, MetaInfo, PerformanceMeasure};

#[derive(Debug, Error)]
pub enum DescriptionError {
    #[error("description.txt:{line}: SYNTAX: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("description.txt: MISSING_KEY: mandatory key {key:?} absent")]
    MissingKey { key: &'static str },
    #[error("description.txt:{line}: UNKNOWN_STEP: {referrer} references undeclared step {step:?}")]
    UnknownStep { line: usize, referrer: String, step: String },
}

impl DescriptionError {
    pub fn code(&self) -> &'static str {
        match self {
            DescriptionError::Syntax { .. } => "SYNTAX",
            DescriptionError::MissingKey { .. } => "MISSING_KEY",
            DescriptionError::UnknownStep { .. } => "UNKNOWN_STEP",
        }
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> DescriptionError {
    DescriptionError::Syntax { line, msg: msg.into() }
}

/// `[a, b, c]` → vec of trimmed tokens; `[]` → empty.
fn parse_list(text: &str, line: usize) -> Result<Vec<String>, DescriptionError> {
    let text = text.trim();
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| syntax(line, format!("expected [..] list, got {text:?}")))?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    let items: Vec<String> = inner.split(',').map(|s| s.trim().to_string()).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(syntax(line, "empty list item"));
    }
    Ok(items)
}

fn parse_bool(text: &str, line: usize) -> Result<bool, DescriptionError> {
    match text.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(syntax(line, format!("expected true/false, got {other:?}"))),
    }
}

fn parse_number(text: &str, line: usize) -> Result<f64, DescriptionError> {
    text.trim()
        .parse()
        .map_err(|_| syntax(line, format!("expected a number, got {:?}", text.trim())))
}

#[derive(Default)]
struct RawStep {
    name: String,
    requires: Option<(Vec<String>, usize)>,
    provides: Option<(Vec<String>, usize)>,
    line: usize,
}

/// Parses the metadata file into [`MetaInfo`].
pub fn parse_description(text: &str) -> Result<MetaInfo, DescriptionError> {
    let mut scenario_id: Option<String> = None;
    let mut measure_names: Option<(Vec<String>, usize)> = None;
    let mut measure_types: Option<(Vec<String>, usize)> = None;
    let mut maximize: Option<(Vec<String>, usize)> = None;
    let mut cutoff_time: Option<f64> = None;
    let mut cutoff_memory: Option<f64> = None;
    let mut features_cutoff_time: Option<f64> = None;
    let mut algorithms: Option<(Vec<String>, usize)> = None;
    let mut algorithms_det: Option<(Vec<String>, usize)> = None;
    let mut features: Option<(Vec<String>, usize)> = None;
    let mut default_steps: Option<(Vec<String>, usize)> = None;
    let mut steps: Vec<RawStep> = Vec::new();
    let mut in_step = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let indented = raw.starts_with("  ");
        let line = raw.trim();
        if indented {
            if !in_step {
                return Err(syntax(lineno, "indented line outside a feature_step block"));
            }
            let step = steps.last_mut().expect("in_step implies a current step");
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| syntax(lineno, "expected `key: value`"))?;
            match key.trim() {
                "requires" => {
                    if step.requires.is_some() {
                        return Err(syntax(lineno, "duplicate requires"));
                    }
                    step.requires = Some((parse_list(value, lineno)?, lineno));
                }
                "provides" => {
                    if step.provides.is_some() {
                        return Err(syntax(lineno, "duplicate provides"));
                    }
                    step.provides = Some((parse_list(value, lineno)?, lineno));
                }
                other => return Err(syntax(lineno, format!("unknown step key {other:?}"))),
            }
            continue;
        }
        in_step = false;
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| syntax(lineno, "expected `key: value`"))?;
        let key = key.trim();
        let value = value.trim();
        if let Some(step_name) = key.strip_prefix("feature_step ") {
            let step_name = step_name.trim();
            if step_name.is_empty() {
                return Err(syntax(lineno, "feature_step needs a name"));
            }
            if !value.is_empty() {
                return Err(syntax(lineno, "feature_step header takes no inline value"));
            }
            if steps.iter().any(|s| s.name == step_name) {
                return Err(syntax(lineno, format!("duplicate feature_step {step_name:?}")));
            }
            steps.push(RawStep { name: step_name.to_string(), line: lineno, ..Default::default() });
            in_step = true;
            continue;
        }
        let mut set_once = |slot: &mut Option<(Vec<String>, usize)>| -> Result<(), DescriptionError> {
            if slot.is_some() {
                return Err(syntax(lineno, format!("duplicate key {key:?}")));
            }
            *slot = Some((parse_list(value, lineno)?, lineno));
            Ok(())
        };
        match key {
            "scenario_id" => {
                if scenario_id.is_some() {
                    return Err(syntax(lineno, "duplicate key \"scenario_id\""));
                }
                if value.is_empty() {
                    return Err(syntax(lineno, "scenario_id must be nonempty"));
                }
                scenario_id = Some(value.to_string());
            }
            "performance_measures" => set_once(&mut measure_names)?,
            "performance_types" => set_once(&mut measure_types)?,
            "maximize" => set_once(&mut maximize)?,
            "algorithms" => set_once(&mut algorithms)?,
            "algorithms_deterministic" => set_once(&mut algorithms_det)?,
            "features" => set_once(&mut features)?,
            "default_steps" => set_once(&mut default_steps)?,
            "algorithm_cutoff_time" => cutoff_time = Some(parse_number(value, lineno)?),
            "algorithm_cutoff_memory" => cutoff_memory = Some(parse_number(value, lineno)?),
            "features_cutoff_time" => features_cutoff_time = Some(parse_number(value, lineno)?),
            other => return Err(syntax(lineno, format!("unknown key {other:?}"))),
        }
    }

    let scenario_id = scenario_id.ok_or(DescriptionError::MissingKey { key: "scenario_id" })?;
    let (measure_names, mline) =
        measure_names.ok_or(DescriptionError::MissingKey { key: "performance_measures" })?;
    let (measure_types, _) =
        measure_types.ok_or(DescriptionError::MissingKey { key: "performance_types" })?;
    let (maximize, _) = maximize.ok_or(DescriptionError::MissingKey { key: "maximize" })?;
    let cutoff_time = cutoff_time.ok_or(DescriptionError::MissingKey { key: "algorithm_cutoff_time" })?;
    let (algorithms, aline) = algorithms.ok_or(DescriptionError::MissingKey { key: "algorithms" })?;
    let (algorithms_det, _) =
        algorithms_det.ok_or(DescriptionError::MissingKey { key: "algorithms_deterministic" })?;
    let (features, _) = features.ok_or(DescriptionError::MissingKey { key: "features" })?;
    let (default_steps, dline) =
        default_steps.ok_or(DescriptionError::MissingKey { key: "default_steps" })?;
    if steps.is_empty() {
        return Err(DescriptionError::MissingKey { key: "feature_step" });
    }

    if measure_names.is_empty() {
        return Err(syntax(mline, "at least one performance measure required"));
    }
    if measure_types.len() != measure_names.len() || maximize.len() != measure_names.len() {
        return Err(syntax(
            mline,
            "performance_measures, performance_types and maximize must have equal length",
        ));
    }
    if algorithms.is_empty() {
        return Err(syntax(aline, "at least one algorithm required"));
    }
    if algorithms_det.len() != algorithms.len() {
        return Err(syntax(aline, "algorithms and algorithms_deterministic must have equal length"));
    }
    if cutoff_time <= 0.0 {
        return Err(syntax(mline, "algorithm_cutoff_time must be positive"));
    }

    let mut measures = Vec::new();
    for ((name, ty), max) in measure_names.iter().zip(&measure_types).zip(&maximize) {
        let kind = match ty.as_str() {
            "runtime" => MeasureKind::Runtime,
            "solution_quality" => MeasureKind::SolutionQuality,
            other => return Err(syntax(mline, format!("unknown performance type {other:?}"))),
        };
        measures.push(PerformanceMeasure {
            name: name.clone(),
            kind,
            maximize: parse_bool(max, mline)?,
        });
    }

    let algorithms = algorithms
        .iter()
        .zip(&algorithms_det)
        .map(|(id, det)| {
            Ok(AlgorithmDecl { id: id.clone(), deterministic: parse_bool(det, aline)? })
        })
        .collect::<Result<Vec<_>, DescriptionError>>()?;

    let feature_steps: Vec<FeatureStep> = steps
        .into_iter()
        .map(|s| {
            let provides = s
                .provides
                .ok_or(syntax(s.line, "feature_step missing provides"))?;
            Ok(FeatureStep {
                name: s.name,
                requires: s.requires.map(|(r, _)| r).unwrap_or_default(),
                provides: provides.0,
            })
        })
        .collect::<Result<_, DescriptionError>>()?;

    // Reference checks: requires/default_steps must name declared steps.
    // Cycles are left to scenario validation.
    let declared: Vec<&str> = feature_steps.iter().map(|s| s.name.as_str()).collect();
    for step in &feature_steps {
        for req in &step.requires {
            if !declared.contains(&req.as_str()) {
                return Err(DescriptionError::UnknownStep {
                    line: 0,
                    referrer: format!("feature_step {}", step.name),
                    step: req.clone(),
                });
            }
        }
    }
    for name in &default_steps {
        if !declared.contains(&name.as_str()) {
            return Err(DescriptionError::UnknownStep {
                line: dline,
                referrer: "default_steps".to_string(),
                step: name.clone(),
            });
        }
    }

    Ok(MetaInfo {
        scenario_id,
        measures,
        algorithm_cutoff_time: cutoff_time,
        algorithm_cutoff_memory: cutoff_memory,
        features_cutoff_time,
        algorithms,
        feature_names: features,
        feature_steps,
        default_steps,
    })
}

fn write_list(out: &mut String, items: impl IntoIterator<Item = String>) {
    out.push('[');
    for (i, item) in items.into_iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&item);
    }
    out.push(']');
}

/// Canonical form of the metadata file; `parse_description` of the
/// output reproduces the input `MetaInfo` and the text is a fixed
/// point of write∘parse.
pub fn write_description(meta: &MetaInfo) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario_id: {}", meta.scenario_id);
    out.push_str("performance_measures: ");
    write_list(&mut out, meta.measures.iter().map(|m| m.name.clone()));
    out.push_str("\nperformance_types: ");
    write_list(
        &mut out,
        meta.measures.iter().map(|m| {
            match m.kind {
                MeasureKind::Runtime => "runtime",
                MeasureKind::SolutionQuality => "solution_quality",
            }
            .to_string()
        }),
    );
    out.push_str("\nmaximize: ");
    write_list(&mut out, meta.measures.iter().map(|m| m.maximize.to_string()));
    let _ = write!(out, "\nalgorithm_cutoff_time: {}", format_number(meta.algorithm_cutoff_time));
    if let Some(mem) = meta.algorithm_cutoff_memory {
        let _ = write!(out, "\nalgorithm_cutoff_memory: {}", format_number(mem));
    }
    if let Some(fct) = meta.features_cutoff_time {
        let _ = write!(out, "\nfeatures_cutoff_time: {}", format_number(fct));
    }
    out.push_str("\nalgorithms: ");
    write_list(&mut out, meta.algorithms.iter().map(|a| a.id.clone()));
    out.push_str("\nalgorithms_deterministic: ");
    write_list(&mut out, meta.algorithms.iter().map(|a| a.deterministic.to_string()));
    out.push_str("\nfeatures: ");
    write_list(&mut out, meta.feature_names.iter().cloned());
    out.push('\n');
    for step in &meta.feature_steps {
        let _ = writeln!(out, "feature_step {}:", step.name);
        out.push_str("  requires: ");
        write_list(&mut out, step.requires.iter().cloned());
        out.push_str("\n  provides: ");
        write_list(&mut out, step.provides.iter().cloned());
        out.push('\n');
    }
    out.push_str("default_steps: ");
    write_list(&mut out, meta.default_steps.iter().cloned());
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
scenario_id: MINI
performance_measures: [runtime]
performance_types: [runtime]
maximize: [false]
algorithm_cutoff_time: 100
algorithms: [a1]
algorithms_deterministic: [true]
features: [f1]
feature_step s1:
  requires: []
  provides: [f1]
default_steps: [s1]
";

    #[test]
    fn minimal_file_preserves_order() {
        let meta = parse_description(MINIMAL).unwrap();
        assert_eq!(meta.scenario_id, "MINI");
        assert_eq!(meta.measures.len(), 1);
        assert_eq!(meta.algorithms[0].id, "a1");
        assert_eq!(meta.feature_steps[0].provides, vec!["f1"]);
        assert_eq!(meta.default_steps, vec!["s1"]);
    }

    #[test]
    fn missing_mandatory_key() {
        let src = MINIMAL.replace("algorithm_cutoff_time: 100\n", "");
        match parse_description(&src).unwrap_err() {
            DescriptionError::MissingKey { key } => assert_eq!(key, "algorithm_cutoff_time"),
            other => panic!("expected MissingKey, got {other:?}"),
        }
    }

    #[test]
    fn undeclared_default_step() {
        let src = MINIMAL.replace("default_steps: [s1]", "default_steps: [nope]");
        let err = parse_description(&src).unwrap_err();
        assert_eq!(err.code(), "UNKNOWN_STEP");
    }

    #[test]
    fn two_cycle_parses_and_is_left_to_validation() {
        let src = "\
scenario_id: CYCLE
performance_measures: [runtime]
performance_types: [runtime]
maximize: [false]
algorithm_cutoff_time: 100
algorithms: [a1]
algorithms_deterministic: [true]
features: [f1, f2]
feature_step A:
  requires: [B]
  provides: [f1]
feature_step B:
  requires: [A]
  provides: [f2]
default_steps: [A]
";
        let meta = parse_description(src).unwrap();
        assert_eq!(meta.feature_steps[0].requires, vec!["B"]);
        assert_eq!(meta.feature_steps[1].requires, vec!["A"]);
    }

    #[test]
    fn write_parse_is_identity() {
        let meta = parse_description(MINIMAL).unwrap();
        let text = write_description(&meta);
        let back = parse_description(&text).unwrap();
        assert_eq!(meta, back);
        assert_eq!(text, write_description(&back));
    }

    #[test]
    fn ordered_declarations_survive_roundtrip() {
        let src = MINIMAL
            .replace("algorithms: [a1]", "algorithms: [z9, a1]")
            .replace("algorithms_deterministic: [true]", "algorithms_deterministic: [false, true]");
        let meta = parse_description(&src).unwrap();
        assert_eq!(meta.algorithms[0].id, "z9");
        assert!(!meta.algorithms[0].deterministic);
        let back = parse_description(&write_description(&meta)).unwrap();
        assert_eq!(meta, back);
    }
}
