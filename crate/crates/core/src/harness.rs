//! Desk-scale end-to-end demonstration: synthetic grating images, a softmax
//! linear classifier trained from scratch, and augmentation-consistency
//! scoring of held-out in- and out-distribution samples.
//!
//! In-distribution classes are sinusoidal gratings with class-specific
//! orientation, spatial frequency, and phase (frequencies 2..K+1 cycles per
//! image, safely below usual low-pass radii). Out-distribution samples are
//! gratings in a higher frequency band with held-out orientations plus a
//! structured second component, so a mid-band low-pass filter erases their
//! signature while leaving class signatures intact. Phases are asymmetric, so
//! no grating is mirror-symmetric and the horizontal flip is never an
//! identity.

use crate::beta::standard_normal;
use crate::error::{Error, Result};
use crate::image::ImageTensor;
use crate::io::records::Label;
use crate::scoring::{remaining_score, score_pipeline, softmax_t, LogitVector, Temperature};
use crate::transforms::{fft_filter_image, hflip, FilterRadius};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Parameters of the synthetic dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SyntheticSpec {
    pub n_classes: usize,
    pub height: usize,
    pub width: usize,
    pub n_train_per_class: usize,
    pub n_test_in: usize,
    pub n_test_out: usize,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    /// The frozen reference configuration used by the regression suite.
    fn default() -> Self {
        Self {
            n_classes: 4,
            height: 32,
            width: 32,
            n_train_per_class: 200,
            n_test_in: 200,
            n_test_out: 200,
            noise_sigma: 0.05,
            seed: 7,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_classes < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 classes, got {}",
                self.n_classes
            )));
        }
        if self.height < 8 || self.width < 8 {
            return Err(Error::InvalidInput(format!(
                "image size must be at least 8x8, got {}x{}",
                self.height, self.width
            )));
        }
        if self.n_train_per_class == 0 || self.n_test_in == 0 || self.n_test_out == 0 {
            return Err(Error::InvalidInput(
                "sample counts must be at least 1".to_string(),
            ));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "noise sigma must be non-negative and finite, got {}",
                self.noise_sigma
            )));
        }
        // The class band tops out at K+1 cycles; the out-distribution band
        // starts at 9/16 of Nyquist. Keep them separated so low-pass radii
        // between the bands are discriminative.
        let nyquist = self.height.min(self.width) as f64 / 2.0;
        let in_max = (self.n_classes + 1) as f64;
        let out_min = nyquist * 9.0 / 16.0;
        if in_max > 0.8 * out_min {
            return Err(Error::InvalidInput(format!(
                "{} classes need more frequency room than a {}x{} image offers",
                self.n_classes, self.height, self.width
            )));
        }
        Ok(())
    }
}

/// A training image with its class index.
#[derive(Debug, Clone)]
pub struct LabeledImage {
    pub image: ImageTensor,
    pub class: usize,
}

#[derive(Debug, Clone)]
pub struct SyntheticDataset {
    pub train: Vec<LabeledImage>,
    pub test_in: Vec<ImageTensor>,
    pub test_out: Vec<ImageTensor>,
}

#[derive(Debug, Clone, Copy)]
struct Grating {
    frequency: f64,
    orientation: f64,
    phase: f64,
    amplitude: f64,
}

impl Grating {
    fn eval(&self, y: usize, x: usize, scale: f64) -> f64 {
        let (s, c) = self.orientation.sin_cos();
        let arg = 2.0 * std::f64::consts::PI * self.frequency * (x as f64 * c + y as f64 * s)
            / scale
            + self.phase;
        self.amplitude * arg.sin()
    }
}

fn class_grating(class: usize, n_classes: usize) -> Grating {
    let spread = if n_classes > 1 {
        class as f64 / (n_classes - 1) as f64
    } else {
        0.0
    };
    Grating {
        frequency: 2.0 + class as f64,
        orientation: (20.0 + 130.0 * spread).to_radians(),
        // Deliberately irregular phases: no grating is even or odd in x.
        phase: 0.7 + 1.1 * class as f64,
        amplitude: 0.35,
    }
}

fn render(
    height: usize,
    width: usize,
    parts: &[Grating],
    sigma: f64,
    rng: &mut ChaCha8Rng,
) -> ImageTensor {
    let scale = width.max(height) as f64;
    let mut data = Vec::with_capacity(height * width);
    for y in 0..height {
        for x in 0..width {
            let mut v = 0.5;
            for p in parts {
                v += p.eval(y, x, scale);
            }
            if sigma > 0.0 {
                v += sigma * standard_normal(rng);
            }
            data.push(v);
        }
    }
    ImageTensor::from_clamped(height, width, 1, data).expect("finite synthetic pixels")
}

/// Deterministically generate train/test splits for a spec.
pub fn generate_dataset(spec: &SyntheticSpec) -> Result<SyntheticDataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (h, w, k) = (spec.height, spec.width, spec.n_classes);

    // Construction guarantee: class templates stay far apart in L2.
    let templates: Vec<ImageTensor> = (0..k)
        .map(|c| {
            let mut quiet = ChaCha8Rng::seed_from_u64(0);
            render(h, w, &[class_grating(c, k)], 0.0, &mut quiet)
        })
        .collect();
    let min_sep = 0.1 * ((h * w) as f64).sqrt();
    for i in 0..k {
        for j in (i + 1)..k {
            let dist: f64 = templates[i]
                .data()
                .iter()
                .zip(templates[j].data())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if dist <= min_sep {
                return Err(Error::InvalidInput(format!(
                    "class templates {i} and {j} are only {dist:.3} apart in L2 \
                     (need > {min_sep:.3})"
                )));
            }
        }
    }

    let mut train = Vec::with_capacity(k * spec.n_train_per_class);
    for class in 0..k {
        let g = class_grating(class, k);
        for _ in 0..spec.n_train_per_class {
            train.push(LabeledImage {
                image: render(h, w, &[g], spec.noise_sigma, &mut rng),
                class,
            });
        }
    }

    let test_in = (0..spec.n_test_in)
        .map(|i| {
            let g = class_grating(i % k, k);
            render(h, w, &[g], spec.noise_sigma, &mut rng)
        })
        .collect();

    // Out-distribution bank: frequencies at 9/16, 11/16, 13/16 of Nyquist,
    // orientations distinct from every class orientation.
    let nyquist = h.min(w) as f64 / 2.0;
    let out_freqs = [
        nyquist * 9.0 / 16.0,
        nyquist * 11.0 / 16.0,
        nyquist * 13.0 / 16.0,
    ];
    let out_orients = [40.0f64, 85.0, 130.0];
    let test_out = (0..spec.n_test_out)
        .map(|_| {
            let f = out_freqs[rng.random_range(0..out_freqs.len())];
            let theta = out_orients[rng.random_range(0..out_orients.len())].to_radians();
            let phase = rng.random::<f64>() * std::f64::consts::TAU;
            let primary = Grating {
                frequency: f,
                orientation: theta,
                phase,
                amplitude: 0.3,
            };
            // A structured second component in the same high band.
            let secondary = Grating {
                frequency: (f * 1.15).min(nyquist - 1.0),
                orientation: theta + 0.9,
                phase: phase * 1.7 + 0.4,
                amplitude: 0.12,
            };
            render(h, w, &[primary, secondary], spec.noise_sigma, &mut rng)
        })
        .collect();

    Ok(SyntheticDataset {
        train,
        test_in,
        test_out,
    })
}

/// Multinomial logistic regression on flattened pixels.
#[derive(Debug, Clone)]
pub struct LinearClassifier {
    n_classes: usize,
    input_dim: usize,
    /// Row-major K × D weight matrix.
    weights: Vec<f64>,
    biases: Vec<f64>,
}

impl LinearClassifier {
    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn logits(&self, img: &ImageTensor) -> Result<LogitVector> {
        let pixels = img.data();
        if pixels.len() != self.input_dim {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim,
                got: pixels.len(),
            });
        }
        let z: Vec<f64> = (0..self.n_classes)
            .map(|k| {
                let row = &self.weights[k * self.input_dim..(k + 1) * self.input_dim];
                row.iter().zip(pixels).map(|(w, x)| w * x).sum::<f64>() + self.biases[k]
            })
            .collect();
        LogitVector::new(z)
    }

    pub fn predict(&self, img: &ImageTensor) -> Result<usize> {
        let z = self.logits(img)?;
        let mut best = 0;
        for (i, &v) in z.values().iter().enumerate().skip(1) {
            if v > z.values()[best] {
                best = i;
            }
        }
        Ok(best)
    }
}

/// Training outcome.
#[derive(Debug, Clone)]
pub struct TrainReport {
    pub classifier: LinearClassifier,
    pub final_loss: f64,
    pub final_accuracy: f64,
    pub epochs_run: usize,
}

/// Full-batch cross-entropy gradient at the given parameters.
/// Exposed at crate level so the finite-difference check can see it.
pub(crate) fn cross_entropy_and_gradient(
    weights: &[f64],
    biases: &[f64],
    n_classes: usize,
    inputs: &[&[f64]],
    labels: &[usize],
) -> (f64, Vec<f64>, Vec<f64>) {
    let dim = weights.len() / n_classes;
    let batch = inputs.len() as f64;
    let mut grad_w = vec![0.0; weights.len()];
    let mut grad_b = vec![0.0; n_classes];
    let mut loss = 0.0;

    for (x, &y) in inputs.iter().zip(labels) {
        let mut z: Vec<f64> = (0..n_classes)
            .map(|k| {
                let row = &weights[k * dim..(k + 1) * dim];
                row.iter().zip(*x).map(|(w, v)| w * v).sum::<f64>() + biases[k]
            })
            .collect();
        let m = z.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let mut total = 0.0;
        for v in z.iter_mut() {
            *v = (*v - m).exp();
            total += *v;
        }
        loss -= (z[y] / total).ln();
        for k in 0..n_classes {
            let p = z[k] / total;
            let delta = p - if k == y { 1.0 } else { 0.0 };
            grad_b[k] += delta;
            let row = &mut grad_w[k * dim..(k + 1) * dim];
            for (g, v) in row.iter_mut().zip(*x) {
                *g += delta * v;
            }
        }
    }

    for g in grad_w.iter_mut() {
        *g /= batch;
    }
    for g in grad_b.iter_mut() {
        *g /= batch;
    }
    (loss / batch, grad_w, grad_b)
}

/// Train by full-batch gradient descent on cross-entropy, starting from zero
/// weights (softmax regression needs no symmetry breaking, and a zero start
/// makes the untrained model exactly uniform). Full-batch descent is
/// deterministic outright; the seed parameter is kept for interface stability
/// and consumed only by stochastic extensions.
pub fn train_classifier(
    train: &[LabeledImage],
    epochs: usize,
    learning_rate: f64,
    seed: u64,
) -> Result<TrainReport> {
    if train.is_empty() {
        return Err(Error::InvalidInput("empty training set".to_string()));
    }
    let n_classes = train.iter().map(|s| s.class).max().unwrap() + 1;
    if n_classes < 2 {
        return Err(Error::InvalidInput(
            "need at least 2 classes in the training set".to_string(),
        ));
    }
    let mut per_class = vec![0usize; n_classes];
    for s in train {
        per_class[s.class] += 1;
    }
    if let Some(missing) = per_class.iter().position(|&c| c == 0) {
        return Err(Error::InvalidInput(format!(
            "class {missing} has no training samples"
        )));
    }
    let input_dim = train[0].image.data().len();
    if train.iter().any(|s| s.image.data().len() != input_dim) {
        return Err(Error::InvalidInput(
            "training images disagree on dimensions".to_string(),
        ));
    }
    if !(learning_rate > 0.0 && learning_rate.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "learning rate must be positive, got {learning_rate}"
        )));
    }

    let inputs: Vec<&[f64]> = train.iter().map(|s| s.image.data()).collect();
    let labels: Vec<usize> = train.iter().map(|s| s.class).collect();

    let _ = seed;
    let mut weights = vec![0.0; n_classes * input_dim];
    let mut biases = vec![0.0; n_classes];
    let mut loss = f64::NAN;

    for epoch in 0..epochs {
        let (l, grad_w, grad_b) =
            cross_entropy_and_gradient(&weights, &biases, n_classes, &inputs, &labels);
        if !l.is_finite() {
            return Err(Error::TrainingDiverged { epoch });
        }
        loss = l;
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= learning_rate * g;
        }
        for (b, g) in biases.iter_mut().zip(&grad_b) {
            *b -= learning_rate * g;
        }
    }

    let classifier = LinearClassifier {
        n_classes,
        input_dim,
        weights,
        biases,
    };
    let correct = train
        .iter()
        .filter(|s| classifier.predict(&s.image).unwrap() == s.class)
        .count();
    let final_accuracy = correct as f64 / train.len() as f64;
    if epochs == 0 {
        let (l, _, _) = cross_entropy_and_gradient(
            &classifier.weights,
            &classifier.biases,
            n_classes,
            &inputs,
            &labels,
        );
        loss = l;
    }

    Ok(TrainReport {
        classifier,
        final_loss: loss,
        final_accuracy,
        epochs_run: epochs,
    })
}

/// The augmentation applied at test time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transform {
    FftLowpass(FilterRadius),
    HorizontalFlip,
}

impl Transform {
    pub fn apply(&self, img: &ImageTensor) -> Result<ImageTensor> {
        match *self {
            Transform::FftLowpass(r) => fft_filter_image(img, r),
            Transform::HorizontalFlip => Ok(hflip(img)),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Transform::FftLowpass(r) => format!("fft{}", r.get()),
            Transform::HorizontalFlip => "flip".to_string(),
        }
    }
}

/// All per-sample outputs of one scoring pass.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleScores {
    pub id: String,
    pub label: Label,
    pub anomaly: f64,
    pub remaining: f64,
    pub msp: f64,
    /// Max probability of the raw sample at the slice temperature.
    pub slice_pmax: f64,
    /// Remaining score at the slice temperature.
    pub slice_remaining: f64,
}

/// Score every test sample: two forward passes (raw and augmented), the three
/// scorers at temperature `t`, plus the slice-analysis quantities at
/// `slice_t`. Output order is stable (all IN samples, then all OUT) and
/// independent of the worker count.
pub fn score_test_set(
    classifier: &LinearClassifier,
    test_in: &[ImageTensor],
    test_out: &[ImageTensor],
    transform: &Transform,
    t: Temperature,
    slice_t: Temperature,
) -> Result<Vec<SampleScores>> {
    let score_one = |img: &ImageTensor, id: String, label: Label| -> Result<SampleScores> {
        let z_raw = classifier.logits(img)?;
        let z_aug = classifier.logits(&transform.apply(img)?)?;
        let triple = score_pipeline(&z_raw, &z_aug, t)?;
        let p_slice = softmax_t(&z_raw, slice_t);
        let q_slice = softmax_t(&z_aug, slice_t);
        Ok(SampleScores {
            id,
            label,
            anomaly: triple.anomaly,
            remaining: triple.remaining,
            msp: triple.msp,
            slice_pmax: p_slice.max(),
            slice_remaining: remaining_score(&p_slice, &q_slice)?,
        })
    };

    let in_scores: Result<Vec<SampleScores>> = test_in
        .par_iter()
        .enumerate()
        .map(|(i, img)| score_one(img, format!("in_{i:04}"), Label::In))
        .collect();
    let out_scores: Result<Vec<SampleScores>> = test_out
        .par_iter()
        .enumerate()
        .map(|(i, img)| score_one(img, format!("out_{i:04}"), Label::Out))
        .collect();
    let mut scores = in_scores?;
    scores.extend(out_scores?);
    Ok(scores)
}
