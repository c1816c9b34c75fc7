//! LUT filter application: preset look blended with the input by intensity.

use thiserror::Error;

use crate::engine::adjust::apply_adjust_mut;
use crate::engine::color::{clamp01, luma};
use crate::engine::image::Image;
use crate::engine::registry::{PresetOp, PresetRegistry};
use crate::engine::selective::apply_selective_mut;
use crate::tool_schema::FilterParams;

#[derive(Debug, Error, PartialEq)]
pub enum FilterError {
    #[error("unknown preset: {0:?}")]
    UnknownPreset(String),
}

fn apply_ops(out: &mut Image, ops: &[PresetOp]) {
    for op in ops {
        match op {
            PresetOp::Adjust(params) => apply_adjust_mut(out, params),
            PresetOp::Band(idx, band) => {
                apply_selective_mut(out, &PresetRegistry::band_params(*idx, *band))
            }
            PresetOp::Duotone(c0, c1) => {
                for px in out.data.chunks_exact_mut(3) {
                    let l = luma(px[0], px[1], px[2]);
                    for ch in 0..3 {
                        px[ch] = clamp01(c0[ch] + (c1[ch] - c0[ch]) * l);
                    }
                }
            }
            PresetOp::Invert => {
                for v in &mut out.data {
                    *v = 1.0 - *v;
                }
            }
        }
    }
}

/// `out = (1 - a) * in + a * preset(in)`, `a = intensity / 100`, per channel.
/// Intensity 0 returns the input bit-identically.
pub fn apply_filter(
    img: &Image,
    params: &FilterParams,
    registry: &PresetRegistry,
) -> Result<Image, FilterError> {
    let mut out = img.clone();
    apply_filter_mut(&mut out, params, registry)?;
    Ok(out)
}

/// In-place form of [`apply_filter`].
pub fn apply_filter_mut(
    img: &mut Image,
    params: &FilterParams,
    registry: &PresetRegistry,
) -> Result<(), FilterError> {
    let def = registry
        .get(&params.name)
        .ok_or_else(|| FilterError::UnknownPreset(params.name.clone()))?;
    if params.intensity == 0 || def.ops.is_empty() {
        return Ok(());
    }
    let mut full = img.clone();
    apply_ops(&mut full, &def.ops);
    let a = params.intensity as f64 / 100.0;
    for (o, f) in img.data.iter_mut().zip(&full.data) {
        *o = (1.0 - a) * *o + a * f;
    }
    Ok(())
}
