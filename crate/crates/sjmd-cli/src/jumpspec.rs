//! Textual jump-spec grammar: comma-separated `time:level` pairs with
//! strictly increasing times in (0, 1). A pair at time 0 sets the starting
//! level instead of adding a breakpoint, e.g. `0:0.5,0.3:1,0.7:0`.

use sjmd::synth::JumpSpec;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JumpSpecError {
    #[error("empty jump spec")]
    Empty,
    #[error("pair {index}: expected time:level, got {token:?}")]
    BadPair { index: usize, token: String },
    #[error("pair {index}: {what} is not a finite number: {token:?}")]
    BadNumber {
        index: usize,
        what: &'static str,
        token: String,
    },
    #[error("times must be strictly increasing within [0, 1): {0}")]
    BadTimes(String),
}

pub fn parse_jump_spec(text: &str) -> Result<JumpSpec, JumpSpecError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(JumpSpecError::Empty);
    }
    let mut start_level = 0.0;
    let mut breakpoints = Vec::new();
    for (index, token) in trimmed.split(',').enumerate() {
        let token = token.trim();
        let (t_str, level_str) = token.split_once(':').ok_or_else(|| JumpSpecError::BadPair {
            index,
            token: token.to_string(),
        })?;
        let parse = |what: &'static str, s: &str| -> Result<f64, JumpSpecError> {
            let v: f64 = s.trim().parse().map_err(|_| JumpSpecError::BadNumber {
                index,
                what,
                token: s.trim().to_string(),
            })?;
            if !v.is_finite() {
                return Err(JumpSpecError::BadNumber {
                    index,
                    what,
                    token: s.trim().to_string(),
                });
            }
            Ok(v)
        };
        let t = parse("time", t_str)?;
        let level = parse("level", level_str)?;
        if t == 0.0 {
            if index != 0 {
                return Err(JumpSpecError::BadTimes(
                    "time 0 is only allowed as the first pair".into(),
                ));
            }
            start_level = level;
        } else {
            breakpoints.push((t, level));
        }
    }
    let spec = JumpSpec {
        start_level,
        breakpoints,
    };
    spec.validate()
        .map_err(|e| JumpSpecError::BadTimes(e.to_string()))?;
    Ok(spec)
}
