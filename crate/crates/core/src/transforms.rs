//! Test-time image transforms: the 2-D FFT low-pass round trip and the
//! horizontal flip.
//!
//! Conventions, fixed so filter radii are comparable across implementations:
//! the forward transform is unnormalized (DC coefficient equals the pixel
//! sum), the inverse carries the 1/(H·W) factor, and the filter radius is
//! measured in centered frequency coordinates through the wraparound rule
//! `du = min(u, H−u)` without physically shifting the spectrum.

use crate::error::{Error, Result};
use crate::fft;
use crate::image::ImageTensor;
use num_complex::Complex;

/// Frequency-domain representation of one image plane, row-major, DC at (0,0).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    height: usize,
    width: usize,
    data: Vec<Complex<f64>>,
}

impl ComplexSpectrum {
    pub fn new(height: usize, width: usize, data: Vec<Complex<f64>>) -> Result<Self> {
        if data.len() != height * width {
            return Err(Error::DimensionMismatch {
                expected: height * width,
                got: data.len(),
            });
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data(&self) -> &[Complex<f64>] {
        &self.data
    }

    /// Total squared magnitude, i.e. spectral energy.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Low-pass cutoff in frequency-bin units ("pixels" of the spectrum).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterRadius(f64);

impl FilterRadius {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "filter radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self(radius))
    }

    pub fn get(&self) -> f64 {
        self.0
    }
}

/// Forward 2-D DFT of a single-channel image. Multi-channel input is
/// rejected; callers split channels first.
pub fn fft2d(img: &ImageTensor) -> Result<ComplexSpectrum> {
    if img.channels() != 1 {
        return Err(Error::InvalidInput(format!(
            "fft2d expects a single-channel image, got {} channels",
            img.channels()
        )));
    }
    let data: Vec<Complex<f64>> = img.data().iter().map(|&v| Complex::new(v, 0.0)).collect();
    Ok(fft2d_plane(img.height(), img.width(), data))
}

fn fft2d_plane(height: usize, width: usize, mut data: Vec<Complex<f64>>) -> ComplexSpectrum {
    for row in data.chunks_exact_mut(width) {
        fft::fft(row);
    }
    let mut column = vec![Complex::new(0.0, 0.0); height];
    for x in 0..width {
        for y in 0..height {
            column[y] = data[y * width + x];
        }
        fft::fft(&mut column);
        for y in 0..height {
            data[y * width + x] = column[y];
        }
    }
    ComplexSpectrum {
        height,
        width,
        data,
    }
}

/// Real part of the inverse transform scaled by 1/(H·W), before any clamping.
pub fn ifft2d_real(spec: &ComplexSpectrum) -> Vec<f64> {
    let (h, w) = (spec.height, spec.width);
    let mut data = spec.data.clone();
    for row in data.chunks_exact_mut(w) {
        fft::ifft_unscaled(row);
    }
    let mut column = vec![Complex::new(0.0, 0.0); h];
    for x in 0..w {
        for y in 0..h {
            column[y] = data[y * w + x];
        }
        fft::ifft_unscaled(&mut column);
        for y in 0..h {
            data[y * w + x] = column[y];
        }
    }
    let scale = 1.0 / (h * w) as f64;
    data.iter().map(|c| c.re * scale).collect()
}

/// Inverse 2-D DFT back to an image, clamping into [0, 1] at this output
/// boundary only. Use [`ifft2d_real`] to observe pre-clamp values.
pub fn ifft2d(spec: &ComplexSpectrum) -> Result<ImageTensor> {
    ImageTensor::from_clamped(spec.height, spec.width, 1, ifft2d_real(spec))
}

/// Centered frequency distance of bin (u, v) under the wraparound rule.
fn bin_distance(u: usize, v: usize, height: usize, width: usize) -> f64 {
    let du = u.min(height - u) as f64;
    let dv = v.min(width - v) as f64;
    (du * du + dv * dv).sqrt()
}

/// Brick-wall low-pass: zero every coefficient farther than `r` from DC,
/// leave the rest untouched.
pub fn lowpass(spec: &ComplexSpectrum, r: FilterRadius) -> ComplexSpectrum {
    let (h, w) = (spec.height, spec.width);
    let mut data = spec.data.clone();
    for u in 0..h {
        for v in 0..w {
            if bin_distance(u, v, h, w) > r.get() {
                data[u * w + v] = Complex::new(0.0, 0.0);
            }
        }
    }
    ComplexSpectrum {
        height: h,
        width: w,
        data,
    }
}

/// Low-pass one raw plane, returning pre-clamp values.
pub fn fft_filter_plane(height: usize, width: usize, plane: &[f64], r: FilterRadius) -> Vec<f64> {
    let data = plane.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let spec = fft2d_plane(height, width, data);
    ifft2d_real(&lowpass(&spec, r))
}

/// FFT → low-pass → inverse FFT, applied channel-wise, output clamped to
/// [0, 1].
pub fn fft_filter_image(img: &ImageTensor, r: FilterRadius) -> Result<ImageTensor> {
    let (h, w) = (img.height(), img.width());
    let planes: Vec<Vec<f64>> = (0..img.channels())
        .map(|c| {
            let plane = img.channel_plane(c).expect("channel index in range");
            fft_filter_plane(h, w, &plane, r)
        })
        .collect();
    let clamped: Vec<Vec<f64>> = planes
        .into_iter()
        .map(|p| p.into_iter().map(|v| v.clamp(0.0, 1.0)).collect())
        .collect();
    ImageTensor::from_planes(h, w, &clamped)
}

/// Horizontal flip: column order reversed per row, per channel.
pub fn hflip(img: &ImageTensor) -> ImageTensor {
    let (h, w, c) = (img.height(), img.width(), img.channels());
    let mut data = Vec::with_capacity(h * w * c);
    for y in 0..h {
        for x in (0..w).rev() {
            for ch in 0..c {
                data.push(img.get(y, x, ch));
            }
        }
    }
    ImageTensor::new(h, w, c, data).expect("flip preserves shape and range")
}
