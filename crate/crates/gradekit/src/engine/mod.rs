//! Deterministic grading engine: applies an [`EditPlan`] to a raster image
//! in the fixed tool order adjust, selective adjust, LUT filter.

pub mod adjust;
pub mod blur;
pub mod color;
pub mod filter;
pub mod image;
pub mod registry;
pub mod selective;

use thiserror::Error;

pub use self::image::{decode_ppm, encode_ppm, load_image, save_image, Image, ImageError};
pub use adjust::{apply_adjust, apply_adjust_mut};
pub use filter::{apply_filter, apply_filter_mut, FilterError};
pub use registry::{PresetRegistry, RegistryError};
pub use selective::{apply_selective, apply_selective_mut};

use crate::tool_schema::{EditPlan, Tool};

/// Default cap on input size (64 megapixels).
pub const DEFAULT_MAX_PIXELS: usize = 64_000_000;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("image too large: {pixels} pixels exceeds cap of {cap}")]
    ImageTooLarge { pixels: usize, cap: usize },
    #[error(transparent)]
    Filter(#[from] FilterError),
}

/// Which tools to run; defaults to all three.
#[derive(Debug, Clone, Copy)]
pub struct ToolMask {
    pub adjust: bool,
    pub selective: bool,
    pub filter: bool,
}

impl Default for ToolMask {
    fn default() -> Self {
        ToolMask {
            adjust: true,
            selective: true,
            filter: true,
        }
    }
}

impl ToolMask {
    pub fn enables(&self, tool: Tool) -> bool {
        match tool {
            Tool::Adjust => self.adjust,
            Tool::Selective => self.selective,
            Tool::Filter => self.filter,
        }
    }
}

/// Applies a plan in the fixed order, skipping tools whose `is_used` is
/// false. Identical inputs give bit-identical outputs.
pub fn apply_plan_with(
    img: &Image,
    plan: &EditPlan,
    registry: &PresetRegistry,
    mask: ToolMask,
    max_pixels: usize,
) -> Result<Image, EngineError> {
    let pixels = img.pixel_count();
    if pixels > max_pixels {
        return Err(EngineError::ImageTooLarge {
            pixels,
            cap: max_pixels,
        });
    }
    let mut out = img.clone();
    if mask.adjust {
        if let Some(params) = &plan.adjust {
            if params.is_used() {
                apply_adjust_mut(&mut out, params);
            }
        }
    }
    if mask.selective {
        if let Some(params) = &plan.selective {
            if params.is_used() {
                apply_selective_mut(&mut out, params);
            }
        }
    }
    if mask.filter {
        if let Some(params) = &plan.filter {
            if params.is_used() && params.intensity > 0 {
                apply_filter_mut(&mut out, params, registry)?;
            }
        }
    }
    Ok(out)
}

/// [`apply_plan_with`] with all tools enabled and the default size cap.
pub fn apply_plan(
    img: &Image,
    plan: &EditPlan,
    registry: &PresetRegistry,
) -> Result<Image, EngineError> {
    apply_plan_with(img, plan, registry, ToolMask::default(), DEFAULT_MAX_PIXELS)
}
