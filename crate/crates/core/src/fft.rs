//! One-dimensional complex FFT supporting arbitrary lengths.
//!
//! Power-of-two lengths run through an iterative radix-2 Cooley–Tukey kernel;
//! every other length is reduced to a power-of-two circular convolution with
//! Bluestein's chirp-z identity, so 224-pixel style inputs cost the same
//! asymptotics as 256. The transforms are unnormalized in both directions;
//! callers apply 1/n where needed.

use num_complex::Complex;
use std::f64::consts::PI;

/// Forward unnormalized DFT: X[j] = Σ_k x[k]·exp(−2πi jk/n).
pub fn fft(data: &mut [Complex<f64>]) {
    dft_in_place(data, false);
}

/// Inverse unnormalized DFT: Y[j] = Σ_k x[k]·exp(+2πi jk/n) (no 1/n factor).
pub fn ifft_unscaled(data: &mut [Complex<f64>]) {
    dft_in_place(data, true);
}

fn dft_in_place(data: &mut [Complex<f64>], inverse: bool) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(data, inverse);
    } else if inverse {
        // IDFT(x) = conj(DFT(conj(x)))
        for v in data.iter_mut() {
            *v = v.conj();
        }
        bluestein(data);
        for v in data.iter_mut() {
            *v = v.conj();
        }
    } else {
        bluestein(data);
    }
}

/// Iterative radix-2 Cooley–Tukey with bit-reversal permutation.
fn radix2(data: &mut [Complex<f64>], inverse: bool) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let bits = n.trailing_zeros();

    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }

    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let theta = sign * 2.0 * PI / len as f64;
        let half = len / 2;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                // Twiddles computed directly per index: slower than a
                // recurrence but free of accumulated rounding.
                let (s, c) = (theta * k as f64).sin_cos();
                let w = Complex::new(c, s);
                let a = data[start + k];
                let b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Chirp for Bluestein: exp(sign·iπ k²/n), with k² reduced mod 2n to keep the
/// trigonometric argument small at any length.
fn chirp(k: usize, n: usize, sign: f64) -> Complex<f64> {
    let m = ((k as u128 * k as u128) % (2 * n as u128)) as f64;
    let angle = sign * PI * m / n as f64;
    let (s, c) = angle.sin_cos();
    Complex::new(c, s)
}

/// Bluestein's algorithm: forward DFT of arbitrary length via a circular
/// convolution of power-of-two size m ≥ 2n − 1.
fn bluestein(data: &mut [Complex<f64>]) {
    let n = data.len();
    let m = (2 * n - 1).next_power_of_two();

    // a_k = x_k · exp(−iπk²/n), zero padded.
    let mut a = vec![Complex::new(0.0, 0.0); m];
    for k in 0..n {
        a[k] = data[k] * chirp(k, n, -1.0);
    }

    // b_k = exp(+iπk²/n), laid out circularly symmetric.
    let mut b = vec![Complex::new(0.0, 0.0); m];
    for k in 0..n {
        let w = chirp(k, n, 1.0);
        b[k] = w;
        if k > 0 {
            b[m - k] = w;
        }
    }

    radix2(&mut a, false);
    radix2(&mut b, false);
    for (av, bv) in a.iter_mut().zip(&b) {
        *av *= *bv;
    }
    radix2(&mut a, true);
    let scale = 1.0 / m as f64;

    for j in 0..n {
        data[j] = a[j] * scale * chirp(j, n, -1.0);
    }
}
