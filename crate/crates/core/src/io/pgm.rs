//! Plain (P2) and binary (P5) PGM readers and writers.
//!
//! Pixels are normalized by the file's maxval on read, so every image enters
//! the pipeline as values in [0, 1]. Color images travel as three stacked
//! grayscale planes named `<stem>.r.pgm` / `.g.pgm` / `.b.pgm`.

use crate::error::{Error, Result};
use crate::image::ImageTensor;
use std::path::Path;

const MAX_PIXELS: usize = 1 << 28;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::PgmParse {
            offset: self.pos,
            message: message.into(),
        }
    }

    /// Skip whitespace and `#` comment lines between header tokens.
    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn read_header_number(&mut self, what: &str) -> Result<usize> {
        self.skip_separators();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("digits are ascii")
            .parse::<usize>()
            .map_err(|e| Error::PgmParse {
                offset: start,
                message: format!("bad {what}: {e}"),
            })
    }
}

/// Read a P2 or P5 grayscale image as a single-channel tensor with values
/// divided by the header maxval.
pub fn read_image_pgm(path: impl AsRef<Path>) -> Result<ImageTensor> {
    let bytes = std::fs::read(path)?;
    parse_pgm(&bytes)
}

pub(crate) fn parse_pgm(bytes: &[u8]) -> Result<ImageTensor> {
    let mut cur = Cursor::new(bytes);
    if bytes.len() < 2 {
        return Err(cur.err("file too short for a magic number"));
    }
    let magic = &bytes[0..2];
    let binary = match magic {
        b"P2" => false,
        b"P5" => true,
        _ => {
            return Err(Error::PgmParse {
                offset: 0,
                message: format!(
                    "unsupported magic number {:?}, expected P2 or P5",
                    String::from_utf8_lossy(magic)
                ),
            })
        }
    };
    cur.pos = 2;

    let width = cur.read_header_number("width")?;
    let height = cur.read_header_number("height")?;
    let maxval = cur.read_header_number("maxval")?;
    if width == 0 || height == 0 || width * height > MAX_PIXELS {
        return Err(cur.err(format!("unreasonable dimensions {width}x{height}")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(cur.err(format!("maxval {maxval} outside 1..=65535")));
    }

    let n = width * height;
    let maxval_f = maxval as f64;
    let mut data = Vec::with_capacity(n);

    if binary {
        // Exactly one whitespace byte separates the header from the raster.
        if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
            return Err(cur.err("expected whitespace before binary raster"));
        }
        cur.pos += 1;
        let wide = maxval > 255;
        let needed = n * if wide { 2 } else { 1 };
        if bytes.len() - cur.pos < needed {
            return Err(Error::PgmParse {
                offset: bytes.len(),
                message: format!(
                    "truncated raster: need {needed} bytes, have {}",
                    bytes.len() - cur.pos
                ),
            });
        }
        for i in 0..n {
            let value = if wide {
                let hi = bytes[cur.pos + 2 * i] as usize;
                let lo = bytes[cur.pos + 2 * i + 1] as usize;
                (hi << 8) | lo
            } else {
                bytes[cur.pos + i] as usize
            };
            if value > maxval {
                return Err(Error::PgmParse {
                    offset: cur.pos + i * if wide { 2 } else { 1 },
                    message: format!("sample {value} exceeds maxval {maxval}"),
                });
            }
            data.push(value as f64 / maxval_f);
        }
    } else {
        for _ in 0..n {
            let value = cur.read_header_number("pixel value")?;
            if value > maxval {
                return Err(cur.err(format!("sample {value} exceeds maxval {maxval}")));
            }
            data.push(value as f64 / maxval_f);
        }
    }

    ImageTensor::new(height, width, 1, data)
}

/// Write a single-channel image as PGM with maxval 255. `binary` selects P5
/// over P2.
pub fn write_image_pgm(img: &ImageTensor, path: impl AsRef<Path>, binary: bool) -> Result<()> {
    if img.channels() != 1 {
        return Err(Error::InvalidInput(
            "pgm output requires a single-channel image; write planes separately".to_string(),
        ));
    }
    let mut out: Vec<u8> = Vec::new();
    let header = format!(
        "{}\n{} {}\n255\n",
        if binary { "P5" } else { "P2" },
        img.width(),
        img.height()
    );
    out.extend_from_slice(header.as_bytes());
    if binary {
        out.extend(img.data().iter().map(|&v| quantize_u8(v)));
    } else {
        for y in 0..img.height() {
            let row: Vec<String> = (0..img.width())
                .map(|x| quantize_u8(img.get(y, x, 0)).to_string())
                .collect();
            out.extend_from_slice(row.join(" ").as_bytes());
            out.push(b'\n');
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn quantize_u8(v: f64) -> u8 {
    (v * 255.0).round().clamp(0.0, 255.0) as u8
}

/// Read the three color planes `<stem>.r.pgm`, `<stem>.g.pgm`, `<stem>.b.pgm`
/// into one 3-channel tensor.
pub fn read_image_rgb_planes(stem: impl AsRef<Path>) -> Result<ImageTensor> {
    let stem = stem.as_ref();
    let plane = |suffix: &str| -> Result<ImageTensor> {
        let mut os = stem.as_os_str().to_owned();
        os.push(suffix);
        read_image_pgm(Path::new(&os))
    };
    let r = plane(".r.pgm")?;
    let g = plane(".g.pgm")?;
    let b = plane(".b.pgm")?;
    if g.height() != r.height()
        || g.width() != r.width()
        || b.height() != r.height()
        || b.width() != r.width()
    {
        return Err(Error::InvalidInput(
            "color planes disagree on dimensions".to_string(),
        ));
    }
    let planes = vec![r.data().to_vec(), g.data().to_vec(), b.data().to_vec()];
    ImageTensor::from_planes(r.height(), r.width(), &planes)
}
