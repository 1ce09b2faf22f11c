//! Beta distributions on the unit interval: density, method-of-moments
//! fitting, and exact sampling through Gamma variates.

use crate::error::{Error, Result};
use crate::special::ln_gamma;
use rand::Rng;
use serde::Serialize;

/// Shape parameters of a Beta distribution; both strictly positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaParams {
    alpha: f64,
    beta: f64,
}

impl BetaParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite() && beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "beta shape parameters must be positive and finite, got ({alpha}, {beta})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// ln B(α, β) = ln Γ(α) + ln Γ(β) − ln Γ(α+β).
    pub fn ln_norm(&self) -> f64 {
        ln_gamma(self.alpha) + ln_gamma(self.beta) - ln_gamma(self.alpha + self.beta)
    }
}

impl std::fmt::Display for BetaParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Beta({}, {})", self.alpha, self.beta)
    }
}

/// Beta density x^(α−1) (1−x)^(β−1) / B(α, β) on [0, 1].
///
/// Endpoints are evaluated as limits: 0 when the corresponding shape exceeds
/// 1, the finite limit when it equals 1, and +∞ when it is below 1 (such
/// boundary points are never touched by the open quadrature rules). Outside
/// [0, 1] the density is 0.
pub fn beta_pdf(x: f64, p: BetaParams) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return 0.0;
    }
    let (a, b) = (p.alpha, p.beta);
    if x == 0.0 {
        return if a > 1.0 {
            0.0
        } else if a == 1.0 {
            (-p.ln_norm()).exp()
        } else {
            f64::INFINITY
        };
    }
    if x == 1.0 {
        return if b > 1.0 {
            0.0
        } else if b == 1.0 {
            (-p.ln_norm()).exp()
        } else {
            f64::INFINITY
        };
    }
    ((a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln() - p.ln_norm()).exp()
}

/// Method-of-moments fit.
///
/// With sample mean m and unbiased sample variance v, the estimate is
/// c = m(1−m)/v − 1, α = m·c, β = (1−m)·c. Requires at least two samples, all
/// strictly inside (0, 1), positive variance, and v < m(1−m) (otherwise no
/// Beta distribution matches the moments).
pub fn beta_fit(samples: &[f64]) -> Result<BetaParams> {
    if samples.len() < 2 {
        return Err(Error::FitInfeasible(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    if let Some(bad) = samples.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
        return Err(Error::FitInfeasible(format!(
            "samples must lie strictly inside (0, 1), found {bad}"
        )));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    if var <= 0.0 {
        return Err(Error::FitInfeasible("sample variance is zero".to_string()));
    }
    let bound = mean * (1.0 - mean);
    if var >= bound {
        return Err(Error::FitInfeasible(format!(
            "variance {var} is not below m(1-m) = {bound}"
        )));
    }
    let c = bound / var - 1.0;
    BetaParams::new(mean * c, (1.0 - mean) * c)
}

/// One standard normal draw via the Marsaglia polar method.
pub(crate) fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let v1 = 2.0 * rng.random::<f64>() - 1.0;
        let v2 = 2.0 * rng.random::<f64>() - 1.0;
        let s = v1 * v1 + v2 * v2;
        if s > 0.0 && s < 1.0 {
            return v1 * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

/// Gamma(shape, 1) draw, Marsaglia–Tsang squeeze-rejection.
///
/// Shapes below 1 use the boosting identity G(a) = G(a+1) · U^(1/a).
pub fn sample_gamma<R: Rng + ?Sized>(rng: &mut R, shape: f64) -> f64 {
    assert!(
        shape > 0.0 && shape.is_finite(),
        "gamma shape must be positive"
    );
    if shape < 1.0 {
        let boost = sample_gamma(rng, shape + 1.0);
        let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
        return boost * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = standard_normal(rng);
        let v_cbrt = 1.0 + c * x;
        if v_cbrt <= 0.0 {
            continue;
        }
        let v = v_cbrt * v_cbrt * v_cbrt;
        let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Beta(α, β) draw as G1/(G1+G2) with independent Gamma variates.
pub fn sample_beta<R: Rng + ?Sized>(rng: &mut R, p: BetaParams) -> f64 {
    let g1 = sample_gamma(rng, p.alpha);
    let g2 = sample_gamma(rng, p.beta);
    if g1 + g2 == 0.0 {
        // Both underflowed; only reachable with extreme shapes.
        return 0.5;
    }
    g1 / (g1 + g2)
}
