//! Gamma-family special functions used by the Beta distribution machinery.

/// Natural log of the Gamma function, Lanczos approximation (g = 7, 9 terms).
///
/// Relative accuracy is around 1e-13 over the positive axis, which is
/// sufficient for density normalization constants.
#[allow(clippy::excessive_precision)]
pub fn ln_gamma(z: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];

    if z < 0.5 {
        // Reflection: Γ(z) Γ(1−z) = π / sin(πz).
        let pi = std::f64::consts::PI;
        return (pi / (pi * z).sin()).ln() - ln_gamma(1.0 - z);
    }

    let z = z - 1.0;
    let mut x = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Digamma function ψ0(z) = Γ'(z)/Γ(z) for z > 0.
///
/// Uses the recurrence ψ0(z) = ψ0(z+1) − 1/z to shift the argument above 8,
/// then the asymptotic expansion in 1/z². Absolute error stays below 1e-12 on
/// (0, 50]. Returns NaN outside the domain.
pub fn digamma(z: f64) -> f64 {
    let in_domain = z > 0.0;
    if !in_domain {
        return f64::NAN;
    }
    let mut z = z;
    let mut shift = 0.0;
    while z < 8.0 {
        shift -= 1.0 / z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    // ψ0(z) ≈ ln z − 1/(2z) − Σ B_{2n} / (2n z^{2n})
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    shift + z.ln() - 0.5 * inv - series
}
