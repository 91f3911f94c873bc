//! RGB images as vector fields over a 2D grid.
//!
//! Channels map to `c / 255 - 0.5`, red to `e1`, green to `e2` and blue to
//! `e3`. A rotation "about the red axis" is therefore a rotation in the
//! `e23` plane.

use std::f64::consts::TAU;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{apply_outer_rotation, RotationSpec, VectorField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if width * height != pixels.len() {
            return Err(Error::arg(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(RgbImage {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Row-major pixels, top row first.
    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }

    /// Largest per-channel difference between two images of equal size.
    pub fn max_channel_diff(&self, other: &RgbImage) -> Option<u8> {
        if (self.width, self.height) != (other.width, other.height) {
            return None;
        }
        Some(
            self.pixels
                .iter()
                .zip(&other.pixels)
                .flat_map(|(a, b)| (0..3).map(move |k| a[k].abs_diff(b[k])))
                .max()
                .unwrap_or(0),
        )
    }

    /// Binary PPM: `P6\n<w> <h>\n255\n` followed by raw RGB bytes.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(self.pixels.len() * 3);
        for p in &self.pixels {
            out.extend_from_slice(p);
        }
        out
    }

    /// Parse a binary (P6) PPM. Header comments are skipped; a maxval below
    /// 255 is rescaled to the full 8-bit range.
    pub fn from_ppm(data: &[u8]) -> Result<Self> {
        let mut pos = 0;
        if data.get(..2) != Some(b"P6") {
            return Err(Error::Ppm("missing P6 magic number".into()));
        }
        pos += 2;
        let width = header_number(data, &mut pos, "width")?;
        let height = header_number(data, &mut pos, "height")?;
        let maxval = header_number(data, &mut pos, "maxval")?;
        if width == 0 || height == 0 {
            return Err(Error::Ppm(format!("empty image {width}x{height}")));
        }
        if !(1..=255).contains(&maxval) {
            return Err(Error::Ppm(format!("unsupported maxval {maxval}")));
        }
        match data.get(pos) {
            Some(c) if c.is_ascii_whitespace() => pos += 1,
            _ => return Err(Error::Ppm("missing whitespace after maxval".into())),
        }
        let n = width * height * 3;
        let raster = data.get(pos..pos + n).ok_or_else(|| {
            Error::Ppm(format!(
                "expected {n} raster bytes, found {}",
                data.len() - pos
            ))
        })?;
        let scale = |c: u8| -> Result<u8> {
            if usize::from(c) > maxval {
                return Err(Error::Ppm(format!("sample {c} exceeds maxval {maxval}")));
            }
            Ok(((usize::from(c) * 255 + maxval / 2) / maxval) as u8)
        };
        let pixels = raster
            .chunks_exact(3)
            .map(|p| Ok([scale(p[0])?, scale(p[1])?, scale(p[2])?]))
            .collect::<Result<Vec<_>>>()?;
        RgbImage::new(width, height, pixels)
    }

    pub fn read_ppm(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let data = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        RgbImage::from_ppm(&data)
    }

    pub fn write_ppm(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(&self.to_ppm())
            .map_err(|e| Error::io(path, e))
    }
}

fn header_number(data: &[u8], pos: &mut usize, what: &str) -> Result<usize> {
    loop {
        match data.get(*pos) {
            Some(c) if c.is_ascii_whitespace() => *pos += 1,
            Some(b'#') => {
                while data.get(*pos).is_some_and(|c| *c != b'\n') {
                    *pos += 1;
                }
            }
            _ => break,
        }
    }
    let start = *pos;
    while data.get(*pos).is_some_and(u8::is_ascii_digit) {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Ppm(format!("missing {what} in header")));
    }
    std::str::from_utf8(&data[start..*pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Ppm(format!("invalid {what} in header")))
}

/// Pixel grid with spacing 1 and origin 0; dims are `[height, width]`.
pub fn image_to_field(img: &RgbImage) -> Result<VectorField> {
    if img.pixels.is_empty() {
        return Err(Error::arg("empty image"));
    }
    let values = img
        .pixels
        .iter()
        .map(|p| p.map(|c| f64::from(c) / 255.0 - 0.5))
        .collect();
    VectorField::new(
        vec![img.height, img.width],
        vec![1.0, 1.0],
        vec![0.0, 0.0],
        values,
    )
}

/// Inverse channel map; values outside the cube are clamped and rounded
/// half to even.
pub fn field_to_image(f: &VectorField) -> Result<RgbImage> {
    if f.dim() != 2 {
        return Err(Error::arg(format!(
            "images need a 2D grid, field has dimension {}",
            f.dim()
        )));
    }
    let channel = |x: f64| ((x + 0.5) * 255.0).clamp(0.0, 255.0).round_ties_even() as u8;
    let pixels = f.values().iter().map(|v| v.map(channel)).collect();
    RgbImage::new(f.dims()[1], f.dims()[0], pixels)
}

/// Rotate the color space; pixel positions are untouched.
pub fn distort_color_space(f: &VectorField, rot: &RotationSpec) -> VectorField {
    apply_outer_rotation(f, rot)
}

/// A deterministic test picture whose colors all lie in the plane spanned by
/// gray and green-minus-blue: each pixel is `(l, l + d, l - d)`.
///
/// Luminance `l` is mirror-symmetric about the vertical center line and the
/// chroma offset `d` is mirror-antisymmetric, so luminance and chroma are
/// exactly uncorrelated. Waves plus a handful of seeded discs.
pub fn synthetic_image(width: usize, height: usize, seed: u64) -> Result<RgbImage> {
    if width == 0 || height == 0 {
        return Err(Error::arg("synthetic image needs a nonzero size"));
    }
    const CHROMA_MAX: f64 = 70.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phase: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.0..TAU));
    let freq: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.5..2.5));
    let discs: Vec<[f64; 5]> = (0..4 + rng.gen_range(0..4))
        .map(|_| {
            [
                rng.gen_range(0.0..0.5),
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.04..0.12),
                rng.gen_range(-90.0..90.0),
                rng.gen_range(-CHROMA_MAX..CHROMA_MAX),
            ]
        })
        .collect();
    let (w, h) = (width as f64, height as f64);

    // (luminance, chroma magnitude) on the left half, indexed by the distance
    // to the nearer edge
    let half = |m: usize, y: usize| -> (f64, f64) {
        let (fx, fy) = (m as f64 / w, y as f64 / h);
        let mut l = 127.5
            + 70.0 * (TAU * freq[0] * (fx + 0.7 * fy) + phase[0]).sin()
            + 25.0 * (TAU * freq[1] * fy + phase[1]).cos();
        let mut d =
            30.0 * (TAU * freq[2] * fx + phase[2]).sin() * (TAU * freq[3] * fy + phase[3]).cos();
        for &[cx, cy, r, dl, dd] in &discs {
            let (dx, dy) = (fx - cx, (fy - cy) * h / w);
            if dx * dx + dy * dy <= r * r {
                l += dl;
                d = dd;
            }
        }
        let d = d.clamp(-CHROMA_MAX, CHROMA_MAX).round();
        (l.clamp(CHROMA_MAX, 255.0 - CHROMA_MAX).round(), d)
    };

    let mut pixels = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let mirror = width - 1 - x;
            let (l, d) = half(x.min(mirror), y);
            let d = match x.cmp(&mirror) {
                std::cmp::Ordering::Less => -d,
                std::cmp::Ordering::Equal => 0.0,
                std::cmp::Ordering::Greater => d,
            };
            pixels.push([l, l + d, l - d].map(|c| c as u8));
        }
    }
    RgbImage::new(width, height, pixels)
}
