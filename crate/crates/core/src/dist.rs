//! Probability distributions supported on the unit interval, with both a
//! density view (for quadrature) and a sampling view (for Monte Carlo).

use crate::beta::{beta_pdf, sample_beta, BetaParams};
use crate::error::{Error, Result};
use crate::quad;
use rand::Rng;

/// Tolerance for the normalization check performed when a density is wrapped
/// for quadrature.
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// A closed set of distributions on [0, 1] that can be both evaluated and
/// sampled exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitDensity {
    /// Uniform on [0, 1].
    Uniform,
    Beta(BetaParams),
    /// Uniform on a subinterval [lo, hi) of the unit interval.
    UniformOn {
        lo: f64,
        hi: f64,
    },
}

impl UnitDensity {
    pub fn uniform_on(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "need 0 <= lo < hi <= 1, got [{lo}, {hi})"
            )));
        }
        Ok(UnitDensity::UniformOn { lo, hi })
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            UnitDensity::Uniform => {
                if (0.0..=1.0).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            UnitDensity::Beta(p) => beta_pdf(x, p),
            UnitDensity::UniformOn { lo, hi } => {
                if x >= lo && x < hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            UnitDensity::Uniform => rng.random::<f64>(),
            UnitDensity::Beta(p) => sample_beta(rng, p),
            UnitDensity::UniformOn { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
        }
    }

    pub fn descriptor(&self) -> String {
        match *self {
            UnitDensity::Uniform => "uniform".to_string(),
            UnitDensity::Beta(p) => p.to_string(),
            UnitDensity::UniformOn { lo, hi } => format!("uniform[{lo}, {hi})"),
        }
    }

    /// Wrap as a checked density for quadrature.
    pub fn to_pdf(&self) -> Result<PdfOnUnit> {
        let d = *self;
        PdfOnUnit::new(self.descriptor(), move |x| d.pdf(x))
    }
}

/// A density on [0, 1] given by an arbitrary evaluator.
///
/// Construction integrates the evaluator and rejects anything that does not
/// normalize to 1 within [`NORMALIZATION_TOL`].
pub struct PdfOnUnit {
    eval: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    descriptor: String,
}

impl PdfOnUnit {
    pub fn new<F>(descriptor: impl Into<String>, eval: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let descriptor = descriptor.into();
        let mass = quad::integrate(&eval, 0.0, 1.0, NORMALIZATION_TOL / 10.0, 8192)?.value;
        if (mass - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidInput(format!(
                "density '{descriptor}' integrates to {mass}, not 1"
            )));
        }
        Ok(Self {
            eval: Box::new(eval),
            descriptor,
        })
    }

    pub fn density(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }
}

impl std::fmt::Debug for PdfOnUnit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PdfOnUnit")
            .field("descriptor", &self.descriptor)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_is_beta_one_one() {
        let u = UnitDensity::Uniform;
        let b = UnitDensity::Beta(BetaParams::new(1.0, 1.0).unwrap());
        for &x in &[0.1, 0.5, 0.9] {
            assert!((u.pdf(x) - b.pdf(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn checked_wrapper_accepts_valid_densities() {
        UnitDensity::Uniform.to_pdf().unwrap();
        UnitDensity::Beta(BetaParams::new(2.0, 5.0).unwrap())
            .to_pdf()
            .unwrap();
        UnitDensity::Beta(BetaParams::new(0.6, 0.8).unwrap())
            .to_pdf()
            .unwrap();
        UnitDensity::uniform_on(0.0, 0.5).unwrap().to_pdf().unwrap();
    }

    #[test]
    fn checked_wrapper_rejects_unnormalized() {
        let err = PdfOnUnit::new("double uniform", |_| 2.0).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn subinterval_sampler_stays_inside() {
        let d = UnitDensity::uniform_on(0.25, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let x = d.sample(&mut rng);
            assert!((0.25..0.5).contains(&x));
        }
    }

    #[test]
    fn invalid_subinterval_rejected() {
        assert!(UnitDensity::uniform_on(0.5, 0.5).is_err());
        assert!(UnitDensity::uniform_on(-0.1, 0.5).is_err());
        assert!(UnitDensity::uniform_on(0.2, 1.5).is_err());
    }
}
