//! Selective adjust: per-band saturation/luminance edits weighted by hue
//! membership.
//!
//! Band centers: red 0, orange 30, yellow 60, green 120, cyan 180, blue 240
//! (degrees). A pixel gets full weight within 15 degrees of the center and a
//! linear falloff to zero at 45 degrees. Grayscale pixels have no hue and
//! weight zero everywhere. Weights are computed once per pixel from the
//! image as it enters this stage, so earlier bands do not retarget later
//! ones.

use crate::engine::color::{clamp01, luma};
use crate::engine::image::Image;
use crate::tool_schema::SelectiveAdjustParams;

pub const BAND_CENTERS: [f64; 6] = [0.0, 30.0, 60.0, 120.0, 180.0, 240.0];
const FULL_WIDTH: f64 = 15.0;
const ZERO_WIDTH: f64 = 45.0;

/// Triangular membership of a hue (degrees) in the band centered at `center`.
pub fn band_weight(hue: f64, center: f64) -> f64 {
    let mut d = hue - center;
    while d < 0.0 {
        d += 360.0;
    }
    while d >= 360.0 {
        d -= 360.0;
    }
    if d > 180.0 {
        d = 360.0 - d;
    }
    if d <= FULL_WIDTH {
        1.0
    } else if d >= ZERO_WIDTH {
        0.0
    } else {
        (ZERO_WIDTH - d) / (ZERO_WIDTH - FULL_WIDTH)
    }
}

/// Saturation edit at weight `w`: l + (c - l) * (1 + v*w), the global
/// saturation formula scaled by band weight.
fn saturate(r: f64, g: f64, b: f64, vw: f64) -> (f64, f64, f64) {
    let l = luma(r, g, b);
    let k = 1.0 + vw;
    (
        clamp01(l + (r - l) * k),
        clamp01(l + (g - l) * k),
        clamp01(l + (b - l) * k),
    )
}

/// Luminance edit at weight `w`: c + 0.5 * v*w, the brightness formula scaled
/// by band weight.
fn lighten(r: f64, g: f64, b: f64, vw: f64) -> (f64, f64, f64) {
    let d = 0.5 * vw;
    (clamp01(r + d), clamp01(g + d), clamp01(b + d))
}

/// Applies the six bands in fixed order (red through blue); within a band,
/// saturation then luminance. All-zero params is bit-identity.
pub fn apply_selective(img: &Image, params: &SelectiveAdjustParams) -> Image {
    let mut out = img.clone();
    apply_selective_mut(&mut out, params);
    out
}

/// In-place form of [`apply_selective`].
pub fn apply_selective_mut(out: &mut Image, params: &SelectiveAdjustParams) {
    if !params.is_used() {
        return;
    }
    // Bands with both values zero contribute nothing; hoist the rest.
    let active: Vec<(f64, f64, f64)> = params
        .bands()
        .iter()
        .zip(BAND_CENTERS)
        .filter(|(band, _)| band.saturation != 0 || band.luminance != 0)
        .map(|(band, center)| {
            (
                center,
                band.saturation as f64 / 100.0,
                band.luminance as f64 / 100.0,
            )
        })
        .collect();
    for px in out.data.chunks_exact_mut(3) {
        // Same hue as rgb_to_hsl; saturation is zero exactly when max == min,
        // so the gate matches without computing s.
        let (mut r, mut g, mut b) = (px[0], px[1], px[2]);
        let max = r.max(g).max(b);
        let min = r.min(g).min(b);
        if max == min {
            continue;
        }
        let d = max - min;
        let hue = if max == r {
            let v = (g - b) / d;
            if v < 0.0 {
                v + 6.0
            } else {
                v
            }
        } else if max == g {
            (b - r) / d + 2.0
        } else {
            (r - g) / d + 4.0
        } * 60.0;
        for &(center, v_sat, v_lum) in &active {
            let w = band_weight(hue, center);
            if w == 0.0 {
                continue;
            }
            if v_sat != 0.0 {
                (r, g, b) = saturate(r, g, b, v_sat * w);
            }
            if v_lum != 0.0 {
                (r, g, b) = lighten(r, g, b, v_lum * w);
            }
        }
        px[0] = r;
        px[1] = g;
        px[2] = b;
    }
}
