//! Augmentation-consistency anomaly detection and its numerical laboratory.
//!
//! A sample is scored by how much a trained classifier disagrees with itself
//! between the sample and an augmented version of it (a low-pass FFT round
//! trip or a horizontal flip): the anomaly score is one minus the inner
//! product of the two temperature-scaled softmax outputs. In-distribution
//! samples tend to be scored consistently; out-distribution samples are not.
//!
//! The crate bundles:
//! - [`transforms`]: 2-D FFT of arbitrary sizes, brick-wall low-pass
//!   filtering, horizontal flip;
//! - [`scoring`]: temperature-scaled softmax, the consistency score, the
//!   remaining-class score, and the max-softmax baseline;
//! - [`evaluation`]: AUROC as a rank statistic, ROC curves, histograms, and
//!   the per-interval remaining-score slice analysis;
//! - [`runs`]: runs counting on sorted label sequences, the expected-runs
//!   overlap integral by adaptive quadrature, seeded Monte Carlo estimation,
//!   Beta-parameter monotonicity regimes, and maximality sweeps;
//! - [`harness`]: a synthetic grating dataset plus a from-scratch softmax
//!   linear classifier for desk-scale end-to-end runs;
//! - [`io`]: PGM images and the CSV/JSON interchange formats.

#![forbid(unsafe_code)]

pub mod beta;
pub mod dist;
pub mod error;
pub mod evaluation;
pub mod fft;
pub mod harness;
pub mod image;
pub mod io;
pub mod quad;
pub mod runs;
pub mod scoring;
pub mod special;
pub mod transforms;

pub use beta::{beta_fit, beta_pdf, BetaParams};
pub use dist::{PdfOnUnit, UnitDensity};
pub use error::{Error, Result};
pub use evaluation::{
    auroc, histogram, roc_curve, slice_analysis, summarize, trapezoid_area, EvalSummary,
    HistogramCounts, RocPoint, SliceStats,
};
pub use harness::{
    generate_dataset, score_test_set, train_classifier, LabeledImage, LinearClassifier,
    SampleScores, SyntheticDataset, SyntheticSpec, TrainReport, Transform,
};
pub use image::ImageTensor;
pub use io::records::{Label, ScoreRecord, ScoreTableRow};
pub use runs::{
    classify_regime, count_runs, expected_runs_derivative, expected_runs_mc,
    expected_runs_quadrature, expected_runs_quadrature_tol, maximality_sweep,
    positive_regime_threshold, scores_to_sequence, BinarySequence, MaximalityReport, McEstimate,
    RegimeClass, SampleSizes, ShapeParam,
};
pub use scoring::{
    anomaly_score, feature_consistency_score, msp_score, remaining_score, score_pipeline,
    softmax_t, LogitVector, ProbVector, ScoreTriple, Temperature, DEFAULT_TEMPERATURE,
};
pub use special::{digamma, ln_gamma};
pub use transforms::{
    fft2d, fft_filter_image, fft_filter_plane, hflip, ifft2d, ifft2d_real, lowpass,
    ComplexSpectrum, FilterRadius,
};
