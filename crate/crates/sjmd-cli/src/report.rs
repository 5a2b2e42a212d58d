//! The report.json schema emitted by `sjmd decompose`. Strict on
//! deserialization so unknown fields are neither accepted nor silently
//! produced by a schema drift.

use serde::{Deserialize, Serialize};
use sjmd::signal::SolverConfig;
use sjmd::solver::StageDiagnostics;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    /// Tool version that produced the report.
    pub version: String,
    pub sample_rate: f64,
    /// True when all channels were decomposed jointly.
    pub multivariate: bool,
    /// Echo of --seed; reserved for reproducibility bookkeeping, the solver
    /// itself is deterministic.
    pub seed: Option<u64>,
    pub config: SolverConfig,
    pub duration_seconds: f64,
    /// One entry per solver invocation: a single joint entry for
    /// multivariate runs, one per channel otherwise.
    pub runs: Vec<RunEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunEntry {
    /// 1-based input channels this entry covers.
    pub channels: Vec<usize>,
    pub modes: Vec<ModeEntry>,
    pub stages: Vec<StageDiagnostics>,
    /// True when every alpha stage of every pass met the tolerance.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeEntry {
    /// 1-based extraction index.
    pub index: usize,
    pub center_frequency_hz: f64,
    /// Mean squared amplitude per channel per sample.
    pub energy: f64,
}

impl RunReport {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sjmd::solver::{AlphaStageRecord, StageDiagnostics};

    fn sample_report() -> RunReport {
        RunReport {
            version: "0.1.0".into(),
            sample_rate: 1000.0,
            multivariate: true,
            seed: Some(7),
            config: SolverConfig::new(8e4, 0.05),
            duration_seconds: 1.25,
            runs: vec![RunEntry {
                channels: vec![1, 2, 3],
                modes: vec![ModeEntry {
                    index: 1,
                    center_frequency_hz: 2.0,
                    energy: 0.54,
                }],
                stages: vec![StageDiagnostics {
                    mode_index: 1,
                    alpha_stages: vec![AlphaStageRecord {
                        alpha: 10.0,
                        iterations: 42,
                        final_relative_change: 3.2e-8,
                        converged: true,
                        relative_change_trace: vec![1.0, 1e-3, 3.2e-8],
                    }],
                    omega_trace: vec![0.002],
                    converged: true,
                }],
                converged: true,
            }],
        }
    }

    #[test]
    fn report_round_trips_losslessly() {
        let report = sample_report();
        let text = report.to_json_pretty();
        let back = RunReport::from_json(&text).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let mut value: serde_json::Value =
            serde_json::from_str(&sample_report().to_json_pretty()).unwrap();
        value
            .as_object_mut()
            .unwrap()
            .insert("surprise".into(), serde_json::json!(1));
        let text = serde_json::to_string(&value).unwrap();
        assert!(RunReport::from_json(&text).is_err());
    }
}
