//! Anomaly scores built from the agreement between a classifier's outputs on
//! a sample and on its augmented version.
//!
//! The primary score is `1 − ⟨p, q⟩` where p and q are temperature-scaled
//! softmax vectors for the raw and augmented inputs. Its gap over the plain
//! max-probability baseline is carried by the remaining score: the inner
//! product mass contributed by every class except the predicted one. All
//! three scores share the orientation "higher = more anomalous".

use crate::error::{Error, Result};

/// Softmax temperature; logits are divided by it before normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Temperature(f64);

/// Temperature applied when no explicit choice is made.
pub const DEFAULT_TEMPERATURE: f64 = 5.0;

impl Temperature {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "temperature must be positive and finite, got {t}"
            )));
        }
        Ok(Self(t))
    }

    pub fn get(&self) -> f64 {
        self.0
    }
}

impl Default for Temperature {
    fn default() -> Self {
        Temperature(DEFAULT_TEMPERATURE)
    }
}

/// Pre-softmax classifier output; at least two finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct LogitVector(Vec<f64>);

impl LogitVector {
    pub fn new(logits: Vec<f64>) -> Result<Self> {
        if logits.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 logits, got {}",
                logits.len()
            )));
        }
        if logits.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite logit".to_string()));
        }
        Ok(Self(logits))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A probability vector over K ≥ 2 classes: entries in [0, 1] summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 classes, got {}",
                probs.len()
            )));
        }
        if let Some(bad) = probs
            .iter()
            .find(|p| !p.is_finite() || !(0.0..=1.0).contains(*p))
        {
            return Err(Error::InvalidInput(format!(
                "probability {bad} outside [0, 1]"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(Self(probs))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Index of the largest entry, ties broken by lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.0.iter().enumerate().skip(1) {
            if p > self.0[best] {
                best = i;
            }
        }
        best
    }

    pub fn max(&self) -> f64 {
        self.0[self.argmax()]
    }

    /// Recover logits as log-probabilities (clamped away from −∞), so a
    /// probability vector can be re-tempered exactly as if the original
    /// logits were rescaled.
    pub fn to_log_logits(&self) -> LogitVector {
        LogitVector(
            self.0
                .iter()
                .map(|&p| p.max(f64::MIN_POSITIVE).ln())
                .collect(),
        )
    }
}

/// Numerically stabilized softmax with temperature: exp(z/t − m)/Σexp(z/t − m)
/// with m the maximum of z/t.
pub fn softmax_t(z: &LogitVector, t: Temperature) -> ProbVector {
    let scaled: Vec<f64> = z.0.iter().map(|v| v / t.0).collect();
    let m = scaled.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let exps: Vec<f64> = scaled.iter().map(|v| (v - m).exp()).collect();
    let total: f64 = exps.iter().sum();
    ProbVector(exps.iter().map(|e| e / total).collect())
}

fn inner(p: &ProbVector, q: &ProbVector) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    Ok(p.0.iter().zip(&q.0).map(|(a, b)| a * b).sum())
}

/// Consistency-based anomaly score 1 − ⟨p, q⟩, in [0, 1].
pub fn anomaly_score(p: &ProbVector, q: &ProbVector) -> Result<f64> {
    Ok((1.0 - inner(p, q)?).clamp(0.0, 1.0))
}

/// Inner-product mass of the non-predicted classes:
/// ⟨p, q⟩ − p[j]·q[j] with j = argmax p.
pub fn remaining_score(p: &ProbVector, q: &ProbVector) -> Result<f64> {
    let j = p.argmax();
    Ok((inner(p, q)? - p.0[j] * q.0[j]).max(0.0))
}

/// Max-softmax-probability baseline, flipped to "higher = more anomalous":
/// 1 − max p.
pub fn msp_score(p: &ProbVector) -> f64 {
    1.0 - p.max()
}

/// Feature-space variant for models that expose embeddings instead of class
/// probabilities: 1 − cosine similarity of the two (L2-normalized) vectors.
/// Stays in [0, 1] whenever the features are non-negative.
pub fn feature_consistency_score(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let na = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let nb = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::InvalidInput(
            "cannot score a zero feature vector".to_string(),
        ));
    }
    let cos = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (na * nb);
    Ok(1.0 - cos)
}

/// All three per-sample scores for one raw/augmented logit pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreTriple {
    pub anomaly: f64,
    pub remaining: f64,
    pub msp: f64,
}

/// The per-sample unit of work: temperature-scale both logit vectors and run
/// every scorer.
pub fn score_pipeline(
    z_raw: &LogitVector,
    z_aug: &LogitVector,
    t: Temperature,
) -> Result<ScoreTriple> {
    if z_raw.len() != z_aug.len() {
        return Err(Error::DimensionMismatch {
            expected: z_raw.len(),
            got: z_aug.len(),
        });
    }
    let p = softmax_t(z_raw, t);
    let q = softmax_t(z_aug, t);
    Ok(ScoreTriple {
        anomaly: anomaly_score(&p, &q)?,
        remaining: remaining_score(&p, &q)?,
        msp: msp_score(&p),
    })
}
