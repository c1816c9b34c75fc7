//! LUT preset registry: named parametric looks loaded from a text file.
//!
//! The production LUTs behind the preset names are not available, so each
//! name maps to a composition of engine operations instead. File grammar,
//! one preset per block:
//!
//! ```text
//! # comment
//! preset <name>
//!   adjust <field>=<int> ...
//!   band <color> saturation=<int> luminance=<int>
//!   duotone #rrggbb #rrggbb
//!   invert
//! end
//! ```
//!
//! `<name>` must come from the closed preset list; "none" is the implicit
//! identity and may not be redefined. Loading validates that every other
//! preset name has a definition.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::tool_schema::{
    AdjustParams, Band, SelectiveAdjustParams, ADJUST_FIELDS, BAND_COLORS, PRESET_NAMES,
};

/// One step of a preset look.
#[derive(Debug, Clone, PartialEq)]
pub enum PresetOp {
    Adjust(AdjustParams),
    /// Index into [`BAND_COLORS`] plus the band edit.
    Band(usize, Band),
    /// Luma ramp between two RGB endpoints (each channel in [0,1]).
    Duotone([f64; 3], [f64; 3]),
    Invert,
}

#[derive(Debug, Clone, Default)]
pub struct PresetDef {
    pub ops: Vec<PresetOp>,
}

#[derive(Debug, Clone)]
pub struct PresetRegistry {
    presets: BTreeMap<String, PresetDef>,
}

#[derive(Debug, Error, PartialEq)]
pub enum RegistryError {
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("line {0}: unknown preset name {1:?}")]
    UnknownName(usize, String),
    #[error("line {0}: preset {1:?} defined twice")]
    Duplicate(usize, String),
    #[error("registry is missing definitions for: {0:?}")]
    Missing(Vec<String>),
    #[error("io error: {0}")]
    Io(String),
}

fn parse_hex_color(tok: &str, line_no: usize) -> Result<[f64; 3], RegistryError> {
    let hex = tok
        .strip_prefix('#')
        .ok_or_else(|| RegistryError::Syntax(line_no, format!("expected #rrggbb, got {tok:?}")))?;
    if hex.len() != 6 || !hex.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(RegistryError::Syntax(
            line_no,
            format!("expected #rrggbb, got {tok:?}"),
        ));
    }
    let byte = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).unwrap() as f64 / 255.0;
    Ok([byte(0), byte(2), byte(4)])
}

fn parse_assignments(
    tokens: &[&str],
    line_no: usize,
) -> Result<Vec<(String, i32)>, RegistryError> {
    tokens
        .iter()
        .map(|tok| {
            let (key, val) = tok.split_once('=').ok_or_else(|| {
                RegistryError::Syntax(line_no, format!("expected key=value, got {tok:?}"))
            })?;
            let v: i32 = val.parse().map_err(|_| {
                RegistryError::Syntax(line_no, format!("bad integer in {tok:?}"))
            })?;
            Ok((key.to_string(), v))
        })
        .collect()
}

fn adjust_from_assignments(
    pairs: &[(String, i32)],
    line_no: usize,
) -> Result<AdjustParams, RegistryError> {
    let mut params = AdjustParams::default();
    for (key, v) in pairs {
        if !ADJUST_FIELDS.contains(&key.as_str()) {
            return Err(RegistryError::Syntax(
                line_no,
                format!("unknown adjust field {key:?}"),
            ));
        }
        let slot = match key.as_str() {
            "exposure" => &mut params.exposure,
            "contrast" => &mut params.contrast,
            "brightness" => &mut params.brightness,
            "highlights" => &mut params.highlights,
            "shadows" => &mut params.shadows,
            "saturation" => &mut params.saturation,
            "vibrance" => &mut params.vibrance,
            "temperature" => &mut params.temperature,
            "tint" => &mut params.tint,
            "hue" => &mut params.hue,
            "bloom" => &mut params.bloom,
            "sharpen" => &mut params.sharpen,
            "structure" => &mut params.structure,
            "linearOffset" => &mut params.linear_offset,
            _ => unreachable!(),
        };
        *slot = *v;
    }
    Ok(params)
}

impl PresetRegistry {
    /// Parses and validates registry text. Every non-"none" preset name must
    /// be defined exactly once.
    pub fn parse(text: &str) -> Result<Self, RegistryError> {
        let mut presets: BTreeMap<String, PresetDef> = BTreeMap::new();
        let mut current: Option<(String, PresetDef)> = None;

        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            // '#' also introduces duotone colors; re-split carefully.
            let line = if raw_line.trim_start().starts_with("duotone") {
                raw_line.trim()
            } else {
                line
            };
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "preset" => {
                    if current.is_some() {
                        return Err(RegistryError::Syntax(
                            line_no,
                            "nested preset block".to_string(),
                        ));
                    }
                    let name = tokens
                        .get(1)
                        .ok_or_else(|| {
                            RegistryError::Syntax(line_no, "preset needs a name".to_string())
                        })?
                        .to_string();
                    if !PRESET_NAMES.contains(&name.as_str()) || name == "none" {
                        return Err(RegistryError::UnknownName(line_no, name));
                    }
                    if presets.contains_key(&name) {
                        return Err(RegistryError::Duplicate(line_no, name));
                    }
                    current = Some((name, PresetDef::default()));
                }
                "end" => {
                    let (name, def) = current.take().ok_or_else(|| {
                        RegistryError::Syntax(line_no, "end outside preset block".to_string())
                    })?;
                    presets.insert(name, def);
                }
                op => {
                    let (_, def) = current.as_mut().ok_or_else(|| {
                        RegistryError::Syntax(line_no, format!("{op:?} outside preset block"))
                    })?;
                    match op {
                        "adjust" => {
                            let pairs = parse_assignments(&tokens[1..], line_no)?;
                            def.ops
                                .push(PresetOp::Adjust(adjust_from_assignments(&pairs, line_no)?));
                        }
                        "band" => {
                            let color = tokens.get(1).ok_or_else(|| {
                                RegistryError::Syntax(line_no, "band needs a color".to_string())
                            })?;
                            let idx =
                                BAND_COLORS.iter().position(|c| c == color).ok_or_else(|| {
                                    RegistryError::Syntax(
                                        line_no,
                                        format!("unknown band color {color:?}"),
                                    )
                                })?;
                            let mut band = Band::default();
                            for (key, v) in parse_assignments(&tokens[2..], line_no)? {
                                match key.as_str() {
                                    "saturation" => band.saturation = v,
                                    "luminance" => band.luminance = v,
                                    other => {
                                        return Err(RegistryError::Syntax(
                                            line_no,
                                            format!("unknown band field {other:?}"),
                                        ))
                                    }
                                }
                            }
                            def.ops.push(PresetOp::Band(idx, band));
                        }
                        "duotone" => {
                            if tokens.len() != 3 {
                                return Err(RegistryError::Syntax(
                                    line_no,
                                    "duotone needs two colors".to_string(),
                                ));
                            }
                            let c0 = parse_hex_color(tokens[1], line_no)?;
                            let c1 = parse_hex_color(tokens[2], line_no)?;
                            def.ops.push(PresetOp::Duotone(c0, c1));
                        }
                        "invert" => def.ops.push(PresetOp::Invert),
                        other => {
                            return Err(RegistryError::Syntax(
                                line_no,
                                format!("unknown directive {other:?}"),
                            ))
                        }
                    }
                }
            }
        }
        if current.is_some() {
            return Err(RegistryError::Syntax(
                text.lines().count(),
                "unterminated preset block".to_string(),
            ));
        }

        let missing: Vec<String> = PRESET_NAMES
            .iter()
            .filter(|&&n| n != "none" && !presets.contains_key(n))
            .map(|&n| n.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(RegistryError::Missing(missing));
        }
        Ok(PresetRegistry { presets })
    }

    /// The registry bundled with the crate.
    pub fn bundled() -> Self {
        Self::parse(include_str!("../../assets/presets.txt"))
            .expect("bundled preset registry is valid")
    }

    pub fn load(path: &Path) -> Result<Self, RegistryError> {
        let text = std::fs::read_to_string(path).map_err(|e| RegistryError::Io(e.to_string()))?;
        Self::parse(&text)
    }

    /// Definition lookup; "none" resolves to the identity (empty ops).
    pub fn get(&self, name: &str) -> Option<PresetDef> {
        if name == "none" {
            return Some(PresetDef::default());
        }
        self.presets.get(name).cloned()
    }

    /// Selective-params wrapper for a single band op.
    pub fn band_params(index: usize, band: Band) -> SelectiveAdjustParams {
        let mut p = SelectiveAdjustParams::default();
        match index {
            0 => p.red = band,
            1 => p.orange = band,
            2 => p.yellow = band,
            3 => p.green = band,
            4 => p.cyan = band,
            _ => p.blue = band,
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_registry_covers_all_presets() {
        let reg = PresetRegistry::bundled();
        for name in PRESET_NAMES {
            assert!(reg.get(name).is_some(), "missing preset {name}");
        }
    }

    #[test]
    fn none_is_identity() {
        let reg = PresetRegistry::bundled();
        assert!(reg.get("none").unwrap().ops.is_empty());
    }

    #[test]
    fn negative_is_inversion() {
        let reg = PresetRegistry::bundled();
        assert_eq!(reg.get("negative").unwrap().ops, vec![PresetOp::Invert]);
    }

    #[test]
    fn unknown_name_rejected() {
        let err = PresetRegistry::parse("preset sepia\nend\n").unwrap_err();
        assert!(matches!(err, RegistryError::UnknownName(1, _)));
    }

    #[test]
    fn missing_definitions_rejected() {
        let err = PresetRegistry::parse("preset winter\nadjust temperature=-40\nend\n")
            .unwrap_err();
        assert!(matches!(err, RegistryError::Missing(_)));
    }

    #[test]
    fn bad_integer_rejected() {
        let err = PresetRegistry::parse("preset winter\nadjust temperature=cold\nend\n")
            .unwrap_err();
        assert!(matches!(err, RegistryError::Syntax(2, _)));
    }
}
