//! Runs statistics as a continuous surrogate for detection quality.
//!
//! Sorting scored samples and reading off the membership labels produces a
//! binary sequence; its number of runs (maximal blocks of adjacent equal
//! labels) measures how mixed the two populations are. Two runs means perfect
//! separation, a runs count equal to the length means perfect alternation.
//!
//! For score distributions f and g with n1 and n2 samples, the asymptotic
//! expected runs count is governed by the overlap integral
//!
//! ```text
//!   I(f, g) = ∫ n1·n2·f(x)·g(x) / (n1·f(x) + n2·g(x)) dx
//! ```
//!
//! which this module evaluates by adaptive quadrature and cross-checks by
//! seeded Monte Carlo simulation. Note the empirically measured expectation
//! tracks `1 + 2·I`, not `I` itself — simulation against the classical
//! two-block enumeration makes the factor visible, and the comparison
//! utilities here report the measured ratio rather than hiding it. Beta-shaped
//! score distributions make the integral a four-parameter family whose
//! monotonicity regimes can be classified in closed form and verified by
//! finite differences.

use crate::beta::BetaParams;
use crate::dist::{PdfOnUnit, UnitDensity};
use crate::error::{Error, Result};
use crate::io::records::{Label, ScoreRecord};
use crate::quad;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Ordered membership labels after sorting by score; 1 = in-distribution,
/// 0 = out-distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySequence {
    bits: Vec<bool>,
}

impl BinarySequence {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Parse a string of '0' and '1' characters.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidInput(format!(
                    "binary sequence may contain only 0 and 1, found '{other}'"
                ))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(Self { bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl std::fmt::Display for BinarySequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Number of maximal blocks of adjacent equal elements:
/// 1 + the count of adjacent unequal pairs.
pub fn count_runs(seq: &BinarySequence) -> Result<usize> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    Ok(1 + seq.bits.windows(2).filter(|w| w[0] != w[1]).count())
}

fn runs_of_labels(labels: &[bool]) -> usize {
    1 + labels.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Sort records by score ascending and read off labels (1 = IN, 0 = OUT).
/// Equal scores order IN before OUT, then by input position, so runs counts
/// are reproducible.
pub fn scores_to_sequence(records: &[ScoreRecord]) -> BinarySequence {
    let mut indexed: Vec<(f64, bool, usize)> = records
        .iter()
        .enumerate()
        .map(|(i, r)| (r.score, r.label == Label::In, i))
        .collect();
    indexed.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(b.1.cmp(&a.1)) // true (IN) first among ties
            .then(a.2.cmp(&b.2))
    });
    BinarySequence::new(indexed.into_iter().map(|(_, label, _)| label).collect())
}

/// Sample counts of the two populations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SampleSizes {
    n1: usize,
    n2: usize,
}

impl SampleSizes {
    pub fn new(n1: usize, n2: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidInput(format!(
                "sample sizes must be at least 1, got ({n1}, {n2})"
            )));
        }
        Ok(Self { n1, n2 })
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    /// Ratio n1/n2.
    pub fn kappa(&self) -> f64 {
        self.n1 as f64 / self.n2 as f64
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
}

/// Estimate the expected runs count by simulation: each trial draws n1 values
/// from `f` (label 1) and n2 from `g` (label 0), sorts by value, and counts
/// runs.
///
/// Each trial derives its own ChaCha stream from (seed, trial index), so the
/// result depends only on (seed, trials) and not on how rayon partitions the
/// work.
pub fn expected_runs_mc(
    f: &UnitDensity,
    g: &UnitDensity,
    n: SampleSizes,
    trials: usize,
    seed: u64,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InvalidInput("need at least 1 trial".to_string()));
    }

    let run_trial = |trial: usize| -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64 + 1);
        let mut values: Vec<(f64, bool)> = Vec::with_capacity(n.n1 + n.n2);
        for _ in 0..n.n1 {
            values.push((f.sample(&mut rng), true));
        }
        for _ in 0..n.n2 {
            values.push((g.sample(&mut rng), false));
        }
        values.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        let labels: Vec<bool> = values.iter().map(|v| v.1).collect();
        runs_of_labels(&labels) as u64
    };

    // Integer sums are exact, so the reduction order cannot change the result.
    let (sum, sum_sq) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let r = run_trial(t);
            (r, r * r)
        })
        .reduce(|| (0u64, 0u64), |a, b| (a.0 + b.0, a.1 + b.1));

    let t = trials as f64;
    let mean = sum as f64 / t;
    let stderr = if trials > 1 {
        let var = (sum_sq as f64 - (sum as f64) * (sum as f64) / t) / (t - 1.0);
        (var.max(0.0) / t).sqrt()
    } else {
        0.0
    };
    Ok(McEstimate {
        mean,
        stderr,
        trials,
    })
}

/// Default absolute tolerance for the overlap-integral quadrature.
pub const QUADRATURE_TOL: f64 = 1e-8;

/// Evaluate the overlap integral ∫ n1·n2·f·g/(n1·f + n2·g) dx over [0, 1] by
/// adaptive quadrature at the default tolerance. The integrand is taken as 0
/// wherever n1·f + n2·g vanishes.
pub fn expected_runs_quadrature(f: &PdfOnUnit, g: &PdfOnUnit, n: SampleSizes) -> Result<f64> {
    expected_runs_quadrature_tol(f, g, n, QUADRATURE_TOL)
}

/// Same as [`expected_runs_quadrature`] with an explicit absolute tolerance.
pub fn expected_runs_quadrature_tol(
    f: &PdfOnUnit,
    g: &PdfOnUnit,
    n: SampleSizes,
    abs_tol: f64,
) -> Result<f64> {
    let n1 = n.n1 as f64;
    let n2 = n.n2 as f64;
    let integrand = move |x: f64, fv: f64, gv: f64| -> f64 {
        let denom = n1 * fv + n2 * gv;
        if denom == 0.0 || !x.is_finite() {
            return 0.0;
        }
        if fv.is_infinite() || gv.is_infinite() {
            // At a shared singularity the ratio tends to the bounded branch:
            // fg/(n1 f + n2 g) ≤ min(f, g)·max(...)/..., resolved by the
            // dominant term.
            if fv.is_infinite() && gv.is_infinite() {
                return 0.0; // only reachable at measure-zero boundary points
            }
            return if fv.is_infinite() {
                n2 * gv / 1.0
            } else {
                n1 * fv / 1.0
            };
        }
        n1 * n2 * fv * gv / denom
    };
    let result = quad::integrate(
        |x| integrand(x, f.density(x), g.density(x)),
        0.0,
        1.0,
        abs_tol,
        quad::DEFAULT_MAX_INTERVALS,
    )?;
    Ok(result.value)
}

/// Sign classification of the α1-sensitivity of the overlap integral for
/// Beta-distributed scores, based on the gap α2 − α1 alone.
///
/// The classification tells the truth about the derivative sign on the
/// equal-beta family (β1 = β2), where a larger α strictly shifts mass
/// rightward. With unequal betas the two means can cross and the gap
/// conditions no longer pin the sign — see the pinned counterexamples in the
/// tests below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeClass {
    /// α2 − α1 ≤ 0.
    NegativeRegime,
    /// α2 − α1 ≥ Σ_{k=0}^{⌊β1⌋} 1/(α1 + k).
    PositiveRegime,
    /// Between the two bounds.
    Indeterminate,
}

impl std::fmt::Display for RegimeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegimeClass::NegativeRegime => "negative",
            RegimeClass::PositiveRegime => "positive",
            RegimeClass::Indeterminate => "indeterminate",
        })
    }
}

/// The positive-regime threshold Σ_{k=0}^{⌊β1⌋} 1/(α1 + k).
pub fn positive_regime_threshold(p1: BetaParams) -> f64 {
    let floor_beta = p1.beta().floor() as usize;
    (0..=floor_beta)
        .map(|k| 1.0 / (p1.alpha() + k as f64))
        .sum()
}

/// Classify (f = Beta(p1), g = Beta(p2)) into a derivative-sign regime for
/// the α1 direction.
pub fn classify_regime(p1: BetaParams, p2: BetaParams) -> RegimeClass {
    let gap = p2.alpha() - p1.alpha();
    if gap <= 0.0 {
        RegimeClass::NegativeRegime
    } else if gap >= positive_regime_threshold(p1) {
        RegimeClass::PositiveRegime
    } else {
        RegimeClass::Indeterminate
    }
}

/// Which Beta shape parameter to perturb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeParam {
    Alpha1,
    Beta1,
    Alpha2,
    Beta2,
}

impl std::str::FromStr for ShapeParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha1" => Ok(ShapeParam::Alpha1),
            "beta1" => Ok(ShapeParam::Beta1),
            "alpha2" => Ok(ShapeParam::Alpha2),
            "beta2" => Ok(ShapeParam::Beta2),
            other => Err(Error::InvalidInput(format!(
                "unknown parameter '{other}', expected alpha1|beta1|alpha2|beta2"
            ))),
        }
    }
}

/// Default finite-difference step for [`expected_runs_derivative`].
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Tolerance used for the quadrature inside the finite difference; tight
/// enough that truncation error dominates.
pub const FD_QUADRATURE_TOL: f64 = 1e-10;

fn beta_overlap(p1: BetaParams, p2: BetaParams, n: SampleSizes, tol: f64) -> Result<f64> {
    let f = UnitDensity::Beta(p1).to_pdf()?;
    let g = UnitDensity::Beta(p2).to_pdf()?;
    expected_runs_quadrature_tol(&f, &g, n, tol)
}

/// Central finite difference of the overlap integral with respect to one Beta
/// shape parameter. Fails if a perturbed parameter would leave the positive
/// domain.
pub fn expected_runs_derivative(
    p1: BetaParams,
    p2: BetaParams,
    n: SampleSizes,
    which: ShapeParam,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let perturb = |delta: f64| -> Result<(BetaParams, BetaParams)> {
        let (mut a1, mut b1, mut a2, mut b2) = (p1.alpha(), p1.beta(), p2.alpha(), p2.beta());
        match which {
            ShapeParam::Alpha1 => a1 += delta,
            ShapeParam::Beta1 => b1 += delta,
            ShapeParam::Alpha2 => a2 += delta,
            ShapeParam::Beta2 => b2 += delta,
        }
        Ok((BetaParams::new(a1, b1)?, BetaParams::new(a2, b2)?))
    };
    let (p1_plus, p2_plus) = perturb(h)?;
    let (p1_minus, p2_minus) = perturb(-h)?;
    let upper = beta_overlap(p1_plus, p2_plus, n, FD_QUADRATURE_TOL)?;
    let lower = beta_overlap(p1_minus, p2_minus, n, FD_QUADRATURE_TOL)?;
    Ok((upper - lower) / (2.0 * h))
}

/// One candidate row of a maximality sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximalityEntry {
    pub candidate: BetaParams,
    pub overlap: f64,
    pub matches_reference: bool,
}

/// Comparison of the overlap integral at f = g against a list of candidate
/// densities f ≠ g.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximalityReport {
    pub reference: BetaParams,
    pub n1: usize,
    pub n2: usize,
    /// Overlap integral with f = g.
    pub self_overlap: f64,
    pub entries: Vec<MaximalityEntry>,
    /// True when no candidate different from the reference exceeds the
    /// self-overlap value.
    pub max_at_equal: bool,
}

/// Evaluate the overlap integral for each candidate f against a fixed g and
/// check that f = g attains the maximum.
pub fn maximality_sweep(
    g: BetaParams,
    candidates: &[BetaParams],
    n: SampleSizes,
) -> Result<MaximalityReport> {
    if candidates.is_empty() {
        return Err(Error::InvalidInput(
            "candidate list must be non-empty".to_string(),
        ));
    }
    let self_overlap = beta_overlap(g, g, n, QUADRATURE_TOL)?;
    let mut entries = Vec::with_capacity(candidates.len());
    let mut max_at_equal = true;
    for &candidate in candidates {
        let overlap = beta_overlap(candidate, g, n, QUADRATURE_TOL)?;
        let matches_reference = candidate == g;
        if !matches_reference && overlap > self_overlap {
            max_at_equal = false;
        }
        entries.push(MaximalityEntry {
            candidate,
            overlap,
            matches_reference,
        });
    }
    Ok(MaximalityReport {
        reference: g,
        n1: n.n1,
        n2: n.n2,
        self_overlap,
        entries,
        max_at_equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> BinarySequence {
        BinarySequence::parse(s).unwrap()
    }

    #[test]
    fn runs_fixture_from_definition() {
        assert_eq!(count_runs(&seq("0011100011000")).unwrap(), 5);
    }

    #[test]
    fn runs_extremes() {
        assert_eq!(count_runs(&seq("1111")).unwrap(), 1);
        assert_eq!(count_runs(&seq("000111")).unwrap(), 2);
        assert_eq!(count_runs(&seq("010101")).unwrap(), 6);
        assert_eq!(count_runs(&seq("1")).unwrap(), 1);
    }

    #[test]
    fn empty_sequence_is_an_error() {
        assert!(matches!(
            count_runs(&BinarySequence::new(vec![])).unwrap_err(),
            Error::EmptySequence
        ));
    }

    #[test]
    fn parse_rejects_other_characters() {
        assert!(BinarySequence::parse("0012").is_err());
    }

    #[test]
    fn display_round_trips() {
        let s = seq("0011010");
        assert_eq!(s.to_string(), "0011010");
    }

    fn rec(label: Label, score: f64) -> ScoreRecord {
        ScoreRecord::new(None, label, score).unwrap()
    }

    #[test]
    fn sequence_from_separated_scores() {
        let records = vec![rec(Label::In, 0.1), rec(Label::Out, 0.9)];
        let s = scores_to_sequence(&records);
        assert_eq!(s.to_string(), "10");
        assert_eq!(count_runs(&s).unwrap(), 2);
    }

    #[test]
    fn sequence_from_interleaved_scores() {
        let records = vec![
            rec(Label::In, 0.1),
            rec(Label::In, 0.3),
            rec(Label::Out, 0.2),
            rec(Label::Out, 0.4),
        ];
        let s = scores_to_sequence(&records);
        assert_eq!(s.to_string(), "1010");
        assert_eq!(count_runs(&s).unwrap(), 4);
    }

    #[test]
    fn tie_rule_puts_in_before_out() {
        let records = vec![
            rec(Label::Out, 0.5),
            rec(Label::In, 0.5),
            rec(Label::Out, 0.5),
            rec(Label::In, 0.5),
        ];
        let s = scores_to_sequence(&records);
        assert_eq!(s.to_string(), "1100");
        assert_eq!(count_runs(&s).unwrap(), 2);
    }

    #[test]
    fn sample_sizes_validation_and_kappa() {
        assert!(SampleSizes::new(0, 1).is_err());
        let n = SampleSizes::new(3, 4).unwrap();
        assert!((n.kappa() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn mc_matches_exhaustive_enumeration_for_tiny_sizes() {
        // With f = g every arrangement of labels is equally likely, so the
        // expectation is the mean over all C(n1+n2, n1) label placements.
        let enumerated_mean = |n1: usize, n2: usize| -> f64 {
            let total = n1 + n2;
            let mut sum = 0usize;
            let mut count = 0usize;
            for mask in 0u32..(1 << total) {
                if mask.count_ones() as usize != n1 {
                    continue;
                }
                let labels: Vec<bool> = (0..total).map(|i| mask & (1 << i) != 0).collect();
                sum += runs_of_labels(&labels);
                count += 1;
            }
            sum as f64 / count as f64
        };
        assert_eq!(enumerated_mean(2, 2), 3.0);

        for (n1, n2) in [(1usize, 1usize), (2, 2), (3, 3)] {
            let est = expected_runs_mc(
                &UnitDensity::Uniform,
                &UnitDensity::Uniform,
                SampleSizes::new(n1, n2).unwrap(),
                100_000,
                42,
            )
            .unwrap();
            let expect = enumerated_mean(n1, n2);
            assert!(
                (est.mean - expect).abs() <= 3.0 * est.stderr.max(1e-9),
                "({n1},{n2}): mc {} vs enumerated {expect} (stderr {})",
                est.mean,
                est.stderr
            );
        }
    }

    #[test]
    fn mc_on_disjoint_supports_is_exactly_two() {
        let f = UnitDensity::uniform_on(0.0, 0.5).unwrap();
        let g = UnitDensity::uniform_on(0.5, 1.0).unwrap();
        let est = expected_runs_mc(&f, &g, SampleSizes::new(5, 5).unwrap(), 2000, 9).unwrap();
        assert_eq!(est.mean, 2.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn mc_is_deterministic_given_seed() {
        let n = SampleSizes::new(10, 10).unwrap();
        let a = expected_runs_mc(&UnitDensity::Uniform, &UnitDensity::Uniform, n, 5000, 7).unwrap();
        let b = expected_runs_mc(&UnitDensity::Uniform, &UnitDensity::Uniform, n, 5000, 7).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        let c = expected_runs_mc(&UnitDensity::Uniform, &UnitDensity::Uniform, n, 5000, 8).unwrap();
        assert_ne!(a.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    fn quadrature_equal_uniforms_gives_half_n() {
        let f = UnitDensity::Uniform.to_pdf().unwrap();
        let g = UnitDensity::Uniform.to_pdf().unwrap();
        for &n in &[10usize, 100, 1000] {
            let v = expected_runs_quadrature(&f, &g, SampleSizes::new(n, n).unwrap()).unwrap();
            assert!((v - n as f64 / 2.0).abs() < 1e-6, "n = {n}: {v}");
        }
    }

    #[test]
    fn quadrature_on_disjoint_supports_vanishes() {
        let f = UnitDensity::uniform_on(0.0, 0.5).unwrap().to_pdf().unwrap();
        let g = UnitDensity::uniform_on(0.5, 1.0).unwrap().to_pdf().unwrap();
        let v = expected_runs_quadrature(&f, &g, SampleSizes::new(50, 50).unwrap()).unwrap();
        assert!(v.abs() < 1e-8, "got {v}");
    }

    #[test]
    fn quadrature_matches_dense_simpson_oracle() {
        // Independent oracle: composite Simpson on a fixed grid of 10^6
        // intervals, nothing shared with the adaptive path.
        let p = BetaParams::new(2.0, 2.0).unwrap();
        let n = SampleSizes::new(100, 100).unwrap();
        let adaptive = expected_runs_quadrature(
            &UnitDensity::Beta(p).to_pdf().unwrap(),
            &UnitDensity::Uniform.to_pdf().unwrap(),
            n,
        )
        .unwrap();

        let integrand = |x: f64| {
            let f = crate::beta::beta_pdf(x, p);
            let denom = 100.0 * f + 100.0;
            100.0 * 100.0 * f / denom
        };
        let m = 1_000_000usize;
        let h = 1.0 / m as f64;
        let mut simpson = integrand(0.0) + integrand(1.0);
        for i in 1..m {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            simpson += w * integrand(i as f64 * h);
        }
        simpson *= h / 3.0;

        assert!(
            (adaptive - simpson).abs() < 1e-6,
            "adaptive {adaptive} vs simpson {simpson}"
        );
    }

    #[test]
    fn quadrature_is_swap_symmetric() {
        let p = BetaParams::new(2.0, 3.0).unwrap();
        let q = BetaParams::new(1.5, 1.0).unwrap();
        let f = UnitDensity::Beta(p).to_pdf().unwrap();
        let g = UnitDensity::Beta(q).to_pdf().unwrap();
        let ab = expected_runs_quadrature(&f, &g, SampleSizes::new(30, 70).unwrap()).unwrap();
        let ba = expected_runs_quadrature(&g, &f, SampleSizes::new(70, 30).unwrap()).unwrap();
        assert!((ab - ba).abs() < 1e-7, "{ab} vs {ba}");
    }

    #[test]
    fn quadrature_scales_linearly_in_common_factor() {
        let p = BetaParams::new(2.0, 2.0).unwrap();
        let f = UnitDensity::Beta(p).to_pdf().unwrap();
        let g = UnitDensity::Uniform.to_pdf().unwrap();
        let base = expected_runs_quadrature(&f, &g, SampleSizes::new(10, 20).unwrap()).unwrap();
        let scaled = expected_runs_quadrature(&f, &g, SampleSizes::new(50, 100).unwrap()).unwrap();
        assert!(
            (scaled - 5.0 * base).abs() < 1e-6,
            "{scaled} vs {}",
            5.0 * base
        );
    }

    #[test]
    fn regime_classification_fixtures() {
        let p = |a, b| BetaParams::new(a, b).unwrap();
        assert_eq!(
            classify_regime(p(3.0, 2.0), p(2.0, 2.0)),
            RegimeClass::NegativeRegime
        );
        // Threshold for (α1, β1) = (1, 1): 1/1 + 1/2 = 1.5.
        assert!((positive_regime_threshold(p(1.0, 1.0)) - 1.5).abs() < 1e-15);
        assert_eq!(
            classify_regime(p(1.0, 1.0), p(3.0, 1.0)),
            RegimeClass::PositiveRegime
        );
        assert_eq!(
            classify_regime(p(1.0, 1.0), p(2.0, 1.0)),
            RegimeClass::Indeterminate
        );
    }

    #[test]
    fn derivative_sign_tracks_regime_on_equal_beta_family() {
        let n = SampleSizes::new(100, 100).unwrap();
        let p = |a, b| BetaParams::new(a, b).unwrap();
        // Negative gap, shared beta: non-positive derivative.
        let d = expected_runs_derivative(p(3.0, 2.0), p(2.0, 2.0), n, ShapeParam::Alpha1, 1e-4)
            .unwrap();
        assert!(d < -1.0, "expected clearly negative, got {d}");
        // Positive-regime gap, shared beta: non-negative derivative.
        let d = expected_runs_derivative(p(1.0, 1.0), p(3.0, 1.0), n, ShapeParam::Alpha1, 1e-4)
            .unwrap();
        assert!(d > 1.0, "expected clearly positive, got {d}");
    }

    #[test]
    fn gap_conditions_do_not_pin_the_sign_with_unequal_betas() {
        // Pinned counterexamples, cross-checked against a dense-grid Simpson
        // evaluation and the closed-form derivative integrand: when the beta
        // shapes differ enough for the means to cross, the alpha-gap regime
        // says nothing about the derivative sign.
        let n = SampleSizes::new(100, 100).unwrap();
        let p = |a, b| BetaParams::new(a, b).unwrap();

        let p1 = p(3.0, 5.0);
        let p2 = p(2.5, 1.05);
        assert_eq!(classify_regime(p1, p2), RegimeClass::NegativeRegime);
        let d = expected_runs_derivative(p1, p2, n, ShapeParam::Alpha1, 1e-4).unwrap();
        assert!(d > 5.0, "counterexample drifted: {d}");

        let p1 = p(1.0, 1.0);
        let p2 = p(3.0, 20.0);
        assert_eq!(classify_regime(p1, p2), RegimeClass::PositiveRegime);
        let d = expected_runs_derivative(p1, p2, n, ShapeParam::Alpha1, 1e-4).unwrap();
        assert!(d < -15.0, "counterexample drifted: {d}");
    }

    #[test]
    fn derivative_vanishes_at_equal_densities() {
        let p = BetaParams::new(2.0, 2.0).unwrap();
        let n = SampleSizes::new(100, 100).unwrap();
        let d = expected_runs_derivative(p, p, n, ShapeParam::Alpha1, DEFAULT_FD_STEP).unwrap();
        let value = beta_overlap(p, p, n, QUADRATURE_TOL).unwrap();
        assert!(
            d.abs() <= 1e-3 * value,
            "derivative {d} not stationary against overlap {value}"
        );
    }

    #[test]
    fn derivative_rejects_domain_exit() {
        let p1 = BetaParams::new(5e-5, 1.0).unwrap();
        let p2 = BetaParams::new(1.0, 1.0).unwrap();
        let n = SampleSizes::new(10, 10).unwrap();
        assert!(expected_runs_derivative(p1, p2, n, ShapeParam::Alpha1, 1e-4).is_err());
    }

    #[test]
    fn maximality_sweep_prefers_equal_densities() {
        let g = BetaParams::new(2.0, 2.0).unwrap();
        let candidates = vec![
            g,
            BetaParams::new(1.0, 1.0).unwrap(),
            BetaParams::new(5.0, 1.0).unwrap(),
            BetaParams::new(1.0, 5.0).unwrap(),
        ];
        let report = maximality_sweep(g, &candidates, SampleSizes::new(100, 100).unwrap()).unwrap();
        assert!(report.max_at_equal);
        for e in &report.entries {
            if !e.matches_reference {
                assert!(e.overlap < report.self_overlap);
            }
        }
    }

    #[test]
    fn maximality_single_equal_candidate() {
        let g = BetaParams::new(3.0, 1.0).unwrap();
        let report = maximality_sweep(g, &[g], SampleSizes::new(10, 10).unwrap()).unwrap();
        assert!(report.max_at_equal);
        assert!((report.entries[0].overlap - report.self_overlap).abs() < 1e-9);
    }

    #[test]
    fn maximality_disjoint_mass_scores_near_zero() {
        let g = BetaParams::new(1.0, 50.0).unwrap();
        let far = BetaParams::new(50.0, 1.0).unwrap();
        let report = maximality_sweep(g, &[far], SampleSizes::new(100, 100).unwrap()).unwrap();
        assert!(report.entries[0].overlap < 0.05 * report.self_overlap);
        assert!(report.max_at_equal);
    }
}
