//! In-memory raster image plus PNG / binary-PPM I/O.
//!
//! Channels are normalized reals in [0,1] internally; file boundaries are
//! 8-bit (`v / 255` on load, round half up on save). PNG alpha is carried
//! through untouched; PPM is RGB only.

use std::fmt;
use std::io::Read;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    #[error("corrupt image file: {0}")]
    CorruptFile(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Row-major RGB image, each channel in [0,1].
#[derive(Clone, PartialEq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    /// `width * height * 3` values, RGB interleaved.
    pub data: Vec<f64>,
    /// Original 8-bit alpha plane, kept only to pass through at save time.
    pub alpha: Option<Vec<u8>>,
}

impl fmt::Debug for Image {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Image")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("alpha", &self.alpha.is_some())
            .finish()
    }
}

impl Image {
    pub fn new(width: usize, height: usize) -> Self {
        Image {
            width,
            height,
            data: vec![0.0; width * height * 3],
            alpha: None,
        }
    }

    pub fn from_pixels(width: usize, height: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), width * height * 3);
        Image {
            width,
            height,
            data,
            alpha: None,
        }
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn get(&self, x: usize, y: usize) -> (f64, f64, f64) {
        let i = (y * self.width + x) * 3;
        (self.data[i], self.data[i + 1], self.data[i + 2])
    }

    pub fn set(&mut self, x: usize, y: usize, rgb: (f64, f64, f64)) {
        let i = (y * self.width + x) * 3;
        self.data[i] = rgb.0;
        self.data[i + 1] = rgb.1;
        self.data[i + 2] = rgb.2;
    }

    /// Extracts one channel plane (0 = R, 1 = G, 2 = B).
    pub fn plane(&self, channel: usize) -> Vec<f64> {
        self.data.iter().skip(channel).step_by(3).copied().collect()
    }
}

fn byte_to_unit(v: u8) -> f64 {
    v as f64 / 255.0
}

/// Round half up at the 8-bit boundary.
fn unit_to_byte(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0 + 0.5).floor() as u8
}

/// Decodes a binary PPM (P6, 8-bit) byte stream.
pub fn decode_ppm(bytes: &[u8]) -> Result<Image, ImageError> {
    if bytes.is_empty() {
        return Err(ImageError::CorruptFile("empty file".to_string()));
    }
    let mut pos = 0usize;

    // Header tokens are whitespace-separated; '#' starts a comment to EOL.
    let mut next_token = |bytes: &[u8]| -> Result<String, ImageError> {
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            break;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(ImageError::CorruptFile("truncated header".to_string()));
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };

    let magic = next_token(bytes)?;
    if magic != "P6" {
        return Err(ImageError::UnsupportedFormat(format!(
            "expected P6 magic, found {magic:?}"
        )));
    }
    let parse_dim = |tok: String, what: &str| -> Result<usize, ImageError> {
        tok.parse::<usize>()
            .map_err(|_| ImageError::CorruptFile(format!("bad {what}: {tok:?}")))
    };
    let width = parse_dim(next_token(bytes)?, "width")?;
    let height = parse_dim(next_token(bytes)?, "height")?;
    let maxval = parse_dim(next_token(bytes)?, "maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(ImageError::UnsupportedFormat(format!(
            "unsupported maxval {maxval}"
        )));
    }
    // Exactly one whitespace byte separates the header from pixel data.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(ImageError::CorruptFile("missing header terminator".to_string()));
    }
    pos += 1;

    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| ImageError::CorruptFile("dimension overflow".to_string()))?;
    let pixels = &bytes[pos..];
    if pixels.len() < expected {
        return Err(ImageError::CorruptFile(format!(
            "expected {expected} pixel bytes, found {}",
            pixels.len()
        )));
    }
    let data = pixels[..expected]
        .iter()
        .map(|&v| v as f64 / maxval as f64)
        .collect();
    Ok(Image {
        width,
        height,
        data,
        alpha: None,
    })
}

/// Encodes an image as binary PPM (P6, maxval 255).
pub fn encode_ppm(img: &Image) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend(img.data.iter().map(|&v| unit_to_byte(v)));
    out
}

fn png_from_dynamic(dynamic: image::DynamicImage) -> Image {
    let has_alpha = dynamic.color().has_alpha();
    if has_alpha {
        let rgba = dynamic.to_rgba8();
        let (w, h) = (rgba.width() as usize, rgba.height() as usize);
        let mut data = Vec::with_capacity(w * h * 3);
        let mut alpha = Vec::with_capacity(w * h);
        for p in rgba.pixels() {
            data.push(byte_to_unit(p[0]));
            data.push(byte_to_unit(p[1]));
            data.push(byte_to_unit(p[2]));
            alpha.push(p[3]);
        }
        Image {
            width: w,
            height: h,
            data,
            alpha: Some(alpha),
        }
    } else {
        let rgb = dynamic.to_rgb8();
        let (w, h) = (rgb.width() as usize, rgb.height() as usize);
        let data = rgb.as_raw().iter().map(|&v| byte_to_unit(v)).collect();
        Image {
            width: w,
            height: h,
            data,
            alpha: None,
        }
    }
}

/// Loads PNG or binary PPM, chosen by content sniffing.
pub fn load_image(path: &Path) -> Result<Image, ImageError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.is_empty() {
        return Err(ImageError::CorruptFile("empty file".to_string()));
    }
    if bytes.starts_with(b"P6") {
        return decode_ppm(&bytes);
    }
    if bytes.starts_with(&[0x89, b'P', b'N', b'G']) {
        let dynamic = image::load_from_memory_with_format(&bytes, image::ImageFormat::Png)
            .map_err(|e| ImageError::CorruptFile(e.to_string()))?;
        return Ok(png_from_dynamic(dynamic));
    }
    Err(ImageError::UnsupportedFormat(
        "only PNG and binary PPM (P6) are supported".to_string(),
    ))
}

/// Saves as PNG or PPM depending on the file extension (`.ppm` vs anything
/// else, which writes PNG). Alpha loaded from a PNG is written back as-is.
pub fn save_image(img: &Image, path: &Path) -> Result<(), ImageError> {
    let is_ppm = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("ppm"))
        .unwrap_or(false);
    if is_ppm {
        std::fs::write(path, encode_ppm(img))?;
        return Ok(());
    }
    let w = img.width as u32;
    let h = img.height as u32;
    match &img.alpha {
        Some(alpha) => {
            let mut raw = Vec::with_capacity(img.pixel_count() * 4);
            for (i, a) in alpha.iter().enumerate() {
                raw.push(unit_to_byte(img.data[i * 3]));
                raw.push(unit_to_byte(img.data[i * 3 + 1]));
                raw.push(unit_to_byte(img.data[i * 3 + 2]));
                raw.push(*a);
            }
            let buf = image::RgbaImage::from_raw(w, h, raw)
                .ok_or_else(|| ImageError::CorruptFile("buffer size mismatch".to_string()))?;
            buf.save_with_format(path, image::ImageFormat::Png)
                .map_err(|e| ImageError::CorruptFile(e.to_string()))?;
        }
        None => {
            let raw: Vec<u8> = img.data.iter().map(|&v| unit_to_byte(v)).collect();
            let buf = image::RgbImage::from_raw(w, h, raw)
                .ok_or_else(|| ImageError::CorruptFile("buffer size mismatch".to_string()))?;
            buf.save_with_format(path, image::ImageFormat::Png)
                .map_err(|e| ImageError::CorruptFile(e.to_string()))?;
        }
    }
    Ok(())
}
