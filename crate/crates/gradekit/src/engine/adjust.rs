//! Global adjust: 14 sub-operations in a fixed order.
//!
//! Order: linearOffset, exposure, contrast, brightness, highlights, shadows,
//! temperature, tint, hue, saturation, vibrance, bloom, sharpen, structure.
//! Every sub-operation is identity at zero and the image is clamped to [0,1]
//! after each one. `v` below is the parameter scaled to [-1,1] (value/100),
//! except hue which is degrees.

use crate::engine::blur::{box_blur_rgb_map_into, BlurScratch};
use crate::engine::color::{clamp01, luma, rgb_to_hsl, rotate_hue6, smoothstep};
use crate::engine::image::Image;
use crate::tool_schema::AdjustParams;

/// All pointwise sub-operations (everything except bloom/sharpen/structure)
/// in the fixed order, fused into one pass over memory. Each stage clamps
/// before the next, exactly as the one-pass-per-op formulation does: the
/// stages are pointwise, so per-pixel sequencing equals per-image sequencing.
fn pointwise_ops(img: &mut Image, p: &AdjustParams) {
    let v = |x: i32| x as f64 / 100.0;
    let exposure_k = 2f64.powf(v(p.exposure));
    let contrast_k = 1.0 + v(p.contrast);
    let saturation_k = 1.0 + v(p.saturation);
    let hue_deg6 = p.hue as f64 / 60.0;
    let rotate_hue = p.hue != 0 && (p.hue as f64).rem_euclid(360.0) != 0.0;
    for px in img.data.chunks_exact_mut(3) {
        let (mut r, mut g, mut b) = (px[0], px[1], px[2]);
        let clamp3 = |r: &mut f64, g: &mut f64, b: &mut f64| {
            *r = clamp01(*r);
            *g = clamp01(*g);
            *b = clamp01(*b);
        };
        if p.linear_offset != 0 {
            let w = 0.25 * v(p.linear_offset);
            r += w;
            g += w;
            b += w;
            clamp3(&mut r, &mut g, &mut b);
        }
        if p.exposure != 0 {
            r *= exposure_k;
            g *= exposure_k;
            b *= exposure_k;
            clamp3(&mut r, &mut g, &mut b);
        }
        if p.contrast != 0 {
            r = 0.5 + (r - 0.5) * contrast_k;
            g = 0.5 + (g - 0.5) * contrast_k;
            b = 0.5 + (b - 0.5) * contrast_k;
            clamp3(&mut r, &mut g, &mut b);
        }
        if p.brightness != 0 {
            let w = 0.5 * v(p.brightness);
            r += w;
            g += w;
            b += w;
            clamp3(&mut r, &mut g, &mut b);
        }
        if p.highlights != 0 {
            let w = 0.25 * v(p.highlights) * smoothstep(0.5, 1.0, luma(r, g, b));
            r += w;
            g += w;
            b += w;
            clamp3(&mut r, &mut g, &mut b);
        }
        if p.shadows != 0 {
            let w = 0.25 * v(p.shadows) * (1.0 - smoothstep(0.0, 0.5, luma(r, g, b)));
            r += w;
            g += w;
            b += w;
            clamp3(&mut r, &mut g, &mut b);
        }
        if p.temperature != 0 {
            let w = 0.1 * v(p.temperature);
            r += w;
            b -= w;
            clamp3(&mut r, &mut g, &mut b);
        }
        if p.tint != 0 {
            let w = v(p.tint);
            r += 0.05 * w;
            g -= 0.1 * w;
            b += 0.05 * w;
            clamp3(&mut r, &mut g, &mut b);
        }
        if rotate_hue {
            if let Some((nr, ng, nb)) = rotate_hue6(r, g, b, hue_deg6) {
                r = nr;
                g = ng;
                b = nb;
            }
            clamp3(&mut r, &mut g, &mut b);
        }
        if p.saturation != 0 {
            let l = luma(r, g, b);
            r = l + (r - l) * saturation_k;
            g = l + (g - l) * saturation_k;
            b = l + (b - l) * saturation_k;
            clamp3(&mut r, &mut g, &mut b);
        }
        if p.vibrance != 0 {
            let l = luma(r, g, b);
            let s_pix = rgb_to_hsl(r, g, b).1;
            let k = 1.0 + v(p.vibrance) * (1.0 - s_pix);
            r = l + (r - l) * k;
            g = l + (g - l) * k;
            b = l + (b - l) * k;
            clamp3(&mut r, &mut g, &mut b);
        }
        px[0] = r;
        px[1] = g;
        px[2] = b;
    }
}

/// Adds a blurred bright-pass: blur(max(c - 0.8, 0) * 5, radius 2). The
/// bright-pass is applied while the blur reads, so it is never materialized.
fn bloom(img: &mut Image, v: f64, scratch: &mut BlurScratch) {
    box_blur_rgb_map_into(
        &img.data,
        img.width,
        img.height,
        2,
        |c| (c - 0.8).max(0.0) * 5.0,
        scratch,
    );
    for (c, bl) in img.data.iter_mut().zip(&scratch.dst) {
        *c = clamp01(*c + v * bl);
    }
}

/// Unsharp mask: c + v * (c - blur(c, radius)).
fn unsharp(img: &mut Image, v: f64, radius: usize, scratch: &mut BlurScratch) {
    box_blur_rgb_map_into(&img.data, img.width, img.height, radius, |c| c, scratch);
    for (c, bl) in img.data.iter_mut().zip(&scratch.dst) {
        *c = clamp01(*c + v * (*c - bl));
    }
}

/// Applies the 14 sub-operations in the documented fixed order. Zero-valued
/// parameters are skipped entirely, so an all-zero params is bit-identity.
pub fn apply_adjust(img: &Image, params: &AdjustParams) -> Image {
    let mut out = img.clone();
    apply_adjust_mut(&mut out, params);
    out
}

/// In-place form of [`apply_adjust`].
pub fn apply_adjust_mut(out: &mut Image, params: &AdjustParams) {
    let v = |x: i32| x as f64 / 100.0;
    let any_pointwise = params.linear_offset != 0
        || params.exposure != 0
        || params.contrast != 0
        || params.brightness != 0
        || params.highlights != 0
        || params.shadows != 0
        || params.temperature != 0
        || params.tint != 0
        || (params.hue != 0 && (params.hue as f64).rem_euclid(360.0) != 0.0)
        || params.saturation != 0
        || params.vibrance != 0;
    if any_pointwise {
        pointwise_ops(out, params);
    }
    if params.bloom != 0 || params.sharpen != 0 || params.structure != 0 {
        let mut scratch = BlurScratch::default();
        if params.bloom != 0 {
            bloom(out, v(params.bloom), &mut scratch);
        }
        if params.sharpen != 0 {
            unsharp(out, v(params.sharpen), 1, &mut scratch);
        }
        if params.structure != 0 {
            unsharp(out, v(params.structure), 4, &mut scratch);
        }
    }
}
