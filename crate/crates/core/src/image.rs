use crate::error::{Error, Result};

/// A raster of real values in [0, 1], row-major with channel-last layout:
/// `data[(y * width + x) * channels + c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageTensor {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl ImageTensor {
    /// Build a tensor, validating shape and value range.
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidInput(format!(
                "image dimensions must be positive, got {height}x{width}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidInput(format!(
                "channel count must be 1 or 3, got {channels}"
            )));
        }
        let expected = height * width * channels;
        if data.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: data.len(),
            });
        }
        if let Some(bad) = data
            .iter()
            .find(|v| !v.is_finite() || !(0.0..=1.0).contains(*v))
        {
            return Err(Error::InvalidInput(format!(
                "pixel value {bad} outside [0, 1]"
            )));
        }
        Ok(Self {
            height,
            width,
            channels,
            data,
        })
    }

    /// Build a tensor, clamping each value into [0, 1]. Non-finite values are
    /// rejected.
    pub fn from_clamped(
        height: usize,
        width: usize,
        channels: usize,
        data: Vec<f64>,
    ) -> Result<Self> {
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite pixel value".to_string()));
        }
        let clamped = data.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Self::new(height, width, channels, clamped)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, y: usize, x: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// Extract one channel as a contiguous plane.
    pub fn channel_plane(&self, c: usize) -> Result<Vec<f64>> {
        if c >= self.channels {
            return Err(Error::InvalidInput(format!(
                "channel {c} out of range for {}-channel image",
                self.channels
            )));
        }
        Ok(self
            .data
            .iter()
            .skip(c)
            .step_by(self.channels)
            .copied()
            .collect())
    }

    /// Stack single-channel planes into a multi-channel image.
    pub fn from_planes(height: usize, width: usize, planes: &[Vec<f64>]) -> Result<Self> {
        let channels = planes.len();
        let plane_len = height * width;
        for p in planes {
            if p.len() != plane_len {
                return Err(Error::DimensionMismatch {
                    expected: plane_len,
                    got: p.len(),
                });
            }
        }
        let mut data = Vec::with_capacity(plane_len * channels);
        for i in 0..plane_len {
            for p in planes {
                data.push(p[i]);
            }
        }
        Self::new(height, width, channels, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_shape_and_range() {
        assert!(ImageTensor::new(2, 2, 1, vec![0.0; 4]).is_ok());
        assert!(ImageTensor::new(2, 2, 1, vec![0.0; 3]).is_err());
        assert!(ImageTensor::new(0, 2, 1, vec![]).is_err());
        assert!(ImageTensor::new(2, 2, 2, vec![0.0; 8]).is_err());
        assert!(ImageTensor::new(1, 1, 1, vec![1.5]).is_err());
        assert!(ImageTensor::new(1, 1, 1, vec![f64::NAN]).is_err());
    }

    #[test]
    fn clamping_constructor() {
        let img = ImageTensor::from_clamped(1, 2, 1, vec![-0.5, 1.5]).unwrap();
        assert_eq!(img.data(), &[0.0, 1.0]);
        assert!(ImageTensor::from_clamped(1, 1, 1, vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn channel_round_trip() {
        let rgb = ImageTensor::new(1, 2, 3, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        let planes: Vec<Vec<f64>> = (0..3).map(|c| rgb.channel_plane(c).unwrap()).collect();
        assert_eq!(planes[0], vec![0.1, 0.4]);
        assert_eq!(planes[2], vec![0.3, 0.6]);
        let rebuilt = ImageTensor::from_planes(1, 2, &planes).unwrap();
        assert_eq!(rebuilt, rgb);
    }
}
