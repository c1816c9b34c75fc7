//! Typed schema for the three tonal grading tools.
//!
//! An [`EditPlan`] holds at most one parameter set per tool (adjust,
//! selective adjust, LUT filter); an absent section means the tool is not
//! used. Values are integers. Raw key/value trees coming out of a model are
//! turned into plans by [`validate`], which clamps out-of-range values (with
//! warnings) and rejects unknown parameter names.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

/// Signed-percent parameters span this closed range.
pub const SIGNED_RANGE: (i32, i32) = (-100, 100);
/// Unsigned-percent parameters span this closed range.
pub const UNSIGNED_RANGE: (i32, i32) = (0, 100);
/// Hue is expressed in degrees.
pub const HUE_RANGE: (i32, i32) = (0, 360);

/// Field order matches the flat JSON layout the grading prompts use.
pub const ADJUST_FIELDS: [&str; 14] = [
    "exposure",
    "contrast",
    "brightness",
    "highlights",
    "shadows",
    "saturation",
    "vibrance",
    "temperature",
    "tint",
    "hue",
    "bloom",
    "sharpen",
    "structure",
    "linearOffset",
];

/// Selective bands, fixed order.
pub const BAND_COLORS: [&str; 6] = ["red", "orange", "yellow", "green", "cyan", "blue"];

/// The closed LUT preset list (34 names, "none" included; duplicates in the
/// upstream source deduplicate to one entry).
pub const PRESET_NAMES: [&str; 34] = [
    "none",
    "lovely_day",
    "action",
    "vivid",
    "north",
    "purple_rain",
    "winter",
    "faded_Retro",
    "faded_HighNoon",
    "faded_Mist",
    "faded_Terra",
    "faded_Vista",
    "faded_C1",
    "faded_AL2",
    "teal_and_orange_1",
    "teal_and_orange_2",
    "teal_and_orange_3",
    "teal_and_orange_4",
    "teal_and_orange_5",
    "teal_and_orange_6",
    "fortune",
    "duotone_red",
    "spring",
    "duotone_pink",
    "enchanted",
    "duotone_green",
    "ultra",
    "duotone_yellow",
    "firecracker",
    "duotone_orange",
    "cyberpunk",
    "darkness",
    "night_vision",
    "negative",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tool {
    Adjust,
    Selective,
    Filter,
}

impl Tool {
    pub const ALL: [Tool; 3] = [Tool::Adjust, Tool::Selective, Tool::Filter];

    pub fn name(self) -> &'static str {
        match self {
            Tool::Adjust => "adjust",
            Tool::Selective => "selective",
            Tool::Filter => "filter",
        }
    }
}

impl std::fmt::Display for Tool {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Global color grading: 14 integer parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct AdjustParams {
    pub exposure: i32,
    pub contrast: i32,
    pub brightness: i32,
    pub highlights: i32,
    pub shadows: i32,
    pub saturation: i32,
    pub vibrance: i32,
    pub temperature: i32,
    pub tint: i32,
    pub hue: i32,
    pub bloom: i32,
    pub sharpen: i32,
    pub structure: i32,
    #[serde(rename = "linearOffset")]
    pub linear_offset: i32,
}

impl AdjustParams {
    /// Values in declared field order (cosine vectors, stats).
    pub fn as_vector(&self) -> [i32; 14] {
        [
            self.exposure,
            self.contrast,
            self.brightness,
            self.highlights,
            self.shadows,
            self.saturation,
            self.vibrance,
            self.temperature,
            self.tint,
            self.hue,
            self.bloom,
            self.sharpen,
            self.structure,
            self.linear_offset,
        ]
    }

    pub fn is_used(&self) -> bool {
        self.as_vector().iter().any(|&v| v != 0)
    }
}

/// One selective band: saturation and luminance edits for a color range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Band {
    pub saturation: i32,
    pub luminance: i32,
}

/// Selective color grading: six fixed bands, red through blue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SelectiveAdjustParams {
    pub red: Band,
    pub orange: Band,
    pub yellow: Band,
    pub green: Band,
    pub cyan: Band,
    pub blue: Band,
}

impl SelectiveAdjustParams {
    pub fn bands(&self) -> [Band; 6] {
        [
            self.red,
            self.orange,
            self.yellow,
            self.green,
            self.cyan,
            self.blue,
        ]
    }

    /// Twelve values: red.saturation, red.luminance, ... blue.luminance.
    pub fn as_vector(&self) -> [i32; 12] {
        let b = self.bands();
        let mut v = [0i32; 12];
        for (i, band) in b.iter().enumerate() {
            v[2 * i] = band.saturation;
            v[2 * i + 1] = band.luminance;
        }
        v
    }

    pub fn is_used(&self) -> bool {
        self.as_vector().iter().any(|&v| v != 0)
    }
}

/// LUT filter: preset name plus blend intensity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterParams {
    pub name: String,
    pub intensity: i32,
}

impl Default for FilterParams {
    fn default() -> Self {
        FilterParams {
            name: "none".to_string(),
            intensity: 0,
        }
    }
}

impl FilterParams {
    pub fn is_used(&self) -> bool {
        self.name != "none"
    }
}

/// The full structured output of one model round: which tools to apply and
/// with what parameter values. Absent section == tool not used.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct EditPlan {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adjust: Option<AdjustParams>,
    #[serde(rename = "selectiveAdjust", skip_serializing_if = "Option::is_none")]
    pub selective: Option<SelectiveAdjustParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<FilterParams>,
}

impl EditPlan {
    pub fn tool_used(&self, tool: Tool) -> bool {
        match tool {
            Tool::Adjust => self.adjust.map(|p| p.is_used()).unwrap_or(false),
            Tool::Selective => self.selective.map(|p| p.is_used()).unwrap_or(false),
            Tool::Filter => self.filter.as_ref().map(|p| p.is_used()).unwrap_or(false),
        }
    }

    pub fn is_empty(&self) -> bool {
        Tool::ALL.iter().all(|&t| !self.tool_used(t))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SchemaError {
    #[error("unknown parameter name(s): {0:?}")]
    UnknownParameter(Vec<String>),
    #[error("unknown preset name: {0:?}")]
    UnknownPreset(String),
    #[error("non-numeric value for field {0:?}")]
    NonNumericValue(String),
    #[error("expected a JSON object for {0}")]
    NotAnObject(String),
}

/// One value pulled back into range during validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClampWarning {
    pub field: String,
    pub original: f64,
    pub clamped: i32,
}

/// A plan plus the clamping report produced while validating it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidatedPlan {
    pub plan: EditPlan,
    pub warnings: Vec<ClampWarning>,
}

fn round_half_away(v: f64) -> i64 {
    // f64::round rounds half away from zero, which is the pinned rule for
    // model outputs that drift into floats.
    v.round() as i64
}

fn coerce_int(field: &str, value: &Value) -> Result<i64, SchemaError> {
    match value {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(i)
            } else if let Some(f) = n.as_f64() {
                Ok(round_half_away(f))
            } else {
                Err(SchemaError::NonNumericValue(field.to_string()))
            }
        }
        _ => Err(SchemaError::NonNumericValue(field.to_string())),
    }
}

fn clamp_field(
    field: &str,
    raw: i64,
    range: (i32, i32),
    warnings: &mut Vec<ClampWarning>,
) -> i32 {
    let clamped = raw.clamp(range.0 as i64, range.1 as i64) as i32;
    if clamped as i64 != raw {
        warnings.push(ClampWarning {
            field: field.to_string(),
            original: raw as f64,
            clamped,
        });
    }
    clamped
}

fn field_range(name: &str) -> (i32, i32) {
    match name {
        "hue" => HUE_RANGE,
        "bloom" | "sharpen" | "structure" | "intensity" => UNSIGNED_RANGE,
        _ => SIGNED_RANGE,
    }
}

/// Validates a raw adjust object: unknown keys rejected, missing keys default
/// to zero, values rounded and clamped.
pub fn validate_adjust(raw: &Value) -> Result<(AdjustParams, Vec<ClampWarning>), SchemaError> {
    let obj = raw
        .as_object()
        .ok_or_else(|| SchemaError::NotAnObject("adjust".to_string()))?;
    let unknown: Vec<String> = obj
        .keys()
        .filter(|k| !ADJUST_FIELDS.contains(&k.as_str()))
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(SchemaError::UnknownParameter(unknown));
    }
    let mut warnings = Vec::new();
    let mut get = |name: &str| -> Result<i32, SchemaError> {
        match obj.get(name) {
            Some(v) => {
                let i = coerce_int(name, v)?;
                Ok(clamp_field(name, i, field_range(name), &mut warnings))
            }
            None => Ok(0),
        }
    };
    let params = AdjustParams {
        exposure: get("exposure")?,
        contrast: get("contrast")?,
        brightness: get("brightness")?,
        highlights: get("highlights")?,
        shadows: get("shadows")?,
        saturation: get("saturation")?,
        vibrance: get("vibrance")?,
        temperature: get("temperature")?,
        tint: get("tint")?,
        hue: get("hue")?,
        bloom: get("bloom")?,
        sharpen: get("sharpen")?,
        structure: get("structure")?,
        linear_offset: get("linearOffset")?,
    };
    Ok((params, warnings))
}

/// Validates a raw selective object: color keys only, each holding
/// saturation/luminance; absent colors are zero bands.
pub fn validate_selective(
    raw: &Value,
) -> Result<(SelectiveAdjustParams, Vec<ClampWarning>), SchemaError> {
    let obj = raw
        .as_object()
        .ok_or_else(|| SchemaError::NotAnObject("selectiveAdjust".to_string()))?;
    let unknown: Vec<String> = obj
        .keys()
        .filter(|k| !BAND_COLORS.contains(&k.as_str()))
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(SchemaError::UnknownParameter(unknown));
    }
    let mut warnings = Vec::new();
    let mut band = |color: &str| -> Result<Band, SchemaError> {
        match obj.get(color) {
            None => Ok(Band::default()),
            Some(v) => {
                let inner = v
                    .as_object()
                    .ok_or_else(|| SchemaError::NotAnObject(color.to_string()))?;
                let unknown: Vec<String> = inner
                    .keys()
                    .filter(|k| k.as_str() != "saturation" && k.as_str() != "luminance")
                    .map(|k| format!("{color}.{k}"))
                    .collect();
                if !unknown.is_empty() {
                    return Err(SchemaError::UnknownParameter(unknown));
                }
                let mut get = |name: &str| -> Result<i32, SchemaError> {
                    let label = format!("{color}.{name}");
                    match inner.get(name) {
                        Some(v) => {
                            let i = coerce_int(&label, v)?;
                            Ok(clamp_field(&label, i, SIGNED_RANGE, &mut warnings))
                        }
                        None => Ok(0),
                    }
                };
                Ok(Band {
                    saturation: get("saturation")?,
                    luminance: get("luminance")?,
                })
            }
        }
    };
    let params = SelectiveAdjustParams {
        red: band("red")?,
        orange: band("orange")?,
        yellow: band("yellow")?,
        green: band("green")?,
        cyan: band("cyan")?,
        blue: band("blue")?,
    };
    Ok((params, warnings))
}

/// Validates a raw filter object; the preset name must be in the closed list.
pub fn validate_filter(raw: &Value) -> Result<(FilterParams, Vec<ClampWarning>), SchemaError> {
    let obj = raw
        .as_object()
        .ok_or_else(|| SchemaError::NotAnObject("filter".to_string()))?;
    let unknown: Vec<String> = obj
        .keys()
        .filter(|k| k.as_str() != "name" && k.as_str() != "intensity")
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(SchemaError::UnknownParameter(unknown));
    }
    let name = match obj.get("name") {
        None => "none".to_string(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(SchemaError::NonNumericValue("name".to_string())),
    };
    if !PRESET_NAMES.contains(&name.as_str()) {
        return Err(SchemaError::UnknownPreset(name));
    }
    let mut warnings = Vec::new();
    let intensity = match obj.get("intensity") {
        Some(v) => {
            let i = coerce_int("intensity", v)?;
            clamp_field("intensity", i, UNSIGNED_RANGE, &mut warnings)
        }
        None => 0,
    };
    Ok((FilterParams { name, intensity }, warnings))
}

/// Validates a loosely-typed plan tree into an [`EditPlan`].
///
/// Top-level keys are `adjust`, `selectiveAdjust` and `filter`; anything else
/// is rejected. Out-of-range values are clamped and reported, never dropped.
pub fn validate(raw: &Value) -> Result<ValidatedPlan, SchemaError> {
    let obj = raw
        .as_object()
        .ok_or_else(|| SchemaError::NotAnObject("plan".to_string()))?;
    let unknown: Vec<String> = obj
        .keys()
        .filter(|k| !matches!(k.as_str(), "adjust" | "selectiveAdjust" | "filter"))
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(SchemaError::UnknownParameter(unknown));
    }
    let mut warnings = Vec::new();
    let adjust = match obj.get("adjust") {
        Some(v) => {
            let (p, w) = validate_adjust(v)?;
            warnings.extend(w);
            Some(p)
        }
        None => None,
    };
    let selective = match obj.get("selectiveAdjust") {
        Some(v) => {
            let (p, w) = validate_selective(v)?;
            warnings.extend(w);
            Some(p)
        }
        None => None,
    };
    let filter = match obj.get("filter") {
        Some(v) => {
            let (p, w) = validate_filter(v)?;
            warnings.extend(w);
            Some(p)
        }
        None => None,
    };
    Ok(ValidatedPlan {
        plan: EditPlan {
            adjust,
            selective,
            filter,
        },
        warnings,
    })
}

/// Deterministic key-ordered serialization of a plan. Sections appear only
/// when present; key order follows the declared field layout.
pub fn canonical_serialize(plan: &EditPlan) -> String {
    serde_json::to_string(plan).expect("plan serialization is infallible")
}

/// Canonical serialization of a single tool section, for SFT completions.
pub fn canonical_serialize_tool(plan: &EditPlan, tool: Tool) -> Option<String> {
    match tool {
        Tool::Adjust => plan
            .adjust
            .as_ref()
            .map(|p| serde_json::to_string(p).expect("infallible")),
        Tool::Selective => plan
            .selective
            .as_ref()
            .map(|p| serde_json::to_string(p).expect("infallible")),
        Tool::Filter => plan
            .filter
            .as_ref()
            .map(|p| serde_json::to_string(p).expect("infallible")),
    }
}

/// Parses canonical plan text back into a validated plan.
pub fn parse_plan(text: &str) -> Result<ValidatedPlan, SchemaError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|_| SchemaError::NotAnObject("plan".to_string()))?;
    validate(&value)
}
