//! Evaluation metrics: Pearson correlation, mean squared error, and greedy
//! matching of extracted components to references.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("zero-variance input, correlation undefined")]
    ZeroVariance,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("only {extracted} extracted components for {references} references")]
    TooFewExtracted { extracted: usize, references: usize },
}

/// Pearson correlation coefficient of two equal-length sequences.
pub fn correlation_coefficient(a: &[f64], b: &[f64]) -> Result<f64, MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::LengthMismatch(a.len(), b.len()));
    }
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let da = x - mean_a;
        let db = y - mean_b;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(MetricsError::ZeroVariance);
    }
    Ok(sab / (saa * sbb).sqrt())
}

/// Mean squared error (1/T) sum (a_t - b_t)^2.
pub fn mse(a: &[f64], b: &[f64]) -> Result<f64, MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::LengthMismatch(a.len(), b.len()));
    }
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(sum / a.len() as f64)
}

/// One matched (reference, extracted) pair and its scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentMatch {
    pub reference_index: usize,
    pub extracted_index: usize,
    pub cc: f64,
    pub mse: f64,
}

/// Scores of an injective reference-to-extracted assignment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub matches: Vec<ComponentMatch>,
}

impl EvalReport {
    pub fn mean_cc(&self) -> f64 {
        self.matches.iter().map(|m| m.cc).sum::<f64>() / self.matches.len() as f64
    }

    pub fn std_cc(&self) -> f64 {
        let mean = self.mean_cc();
        let var = self
            .matches
            .iter()
            .map(|m| (m.cc - mean) * (m.cc - mean))
            .sum::<f64>()
            / self.matches.len() as f64;
        var.sqrt()
    }

    pub fn mean_mse(&self) -> f64 {
        self.matches.iter().map(|m| m.mse).sum::<f64>() / self.matches.len() as f64
    }
}

/// Greedy injective matching: references in order each take the remaining
/// extracted component with the largest absolute correlation. Flat extracted
/// components are never matched; a reference that cannot be scored against
/// any remaining component propagates `ZeroVariance`.
pub fn match_components(
    extracted: &[Vec<f64>],
    references: &[Vec<f64>],
) -> Result<EvalReport, MetricsError> {
    assert!(
        !extracted.is_empty() && !references.is_empty(),
        "matching needs nonempty lists"
    );
    if extracted.len() < references.len() {
        return Err(MetricsError::TooFewExtracted {
            extracted: extracted.len(),
            references: references.len(),
        });
    }
    let mut used = vec![false; extracted.len()];
    let mut matches = Vec::with_capacity(references.len());
    for (ri, reference) in references.iter().enumerate() {
        let mut best: Option<(usize, f64)> = None;
        for (ei, candidate) in extracted.iter().enumerate() {
            if used[ei] {
                continue;
            }
            match correlation_coefficient(reference, candidate) {
                Ok(cc) => {
                    if best.map_or(true, |(_, b)| cc.abs() > b.abs()) {
                        best = Some((ei, cc));
                    }
                }
                Err(MetricsError::ZeroVariance) => continue,
                Err(e) => return Err(e),
            }
        }
        let (ei, cc) = best.ok_or(MetricsError::ZeroVariance)?;
        used[ei] = true;
        matches.push(ComponentMatch {
            reference_index: ri,
            extracted_index: ei,
            cc,
            mse: mse(reference, &extracted[ei])?,
        });
    }
    Ok(EvalReport { matches })
}
