use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::builtins::{gaussian_swirl, loss_yau, rational_swirl, zero_field, FieldModel, LossYauSpinor};
use super::{loss_yau_derived, DeriveOptions, FieldDecay};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Builtin,
    Derived,
}

/// Decay metadata as written in field documents.
pub type DecaySpec = FieldDecay;

/// `{label, kind, params, decay}` field document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub label: String,
    pub kind: FieldKind,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default)]
    pub decay: Option<DecaySpec>,
}

/// Lower-case with `_` folded to `-`.
pub fn normalize_label(label: &str) -> String {
    label.trim().to_ascii_lowercase().replace('_', "-")
}

fn take_f64(params: &mut Map<String, Value>, key: &str, default: f64) -> Result<f64> {
    match params.remove(key) {
        None => Ok(default),
        Some(Value::Number(n)) => n
            .as_f64()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::InvalidArgument(format!("parameter '{key}' is not a finite number"))),
        Some(other) => Err(Error::InvalidArgument(format!("parameter '{key}' must be a number, got {other}"))),
    }
}

fn take_seed(params: &mut Map<String, Value>) -> Result<LossYauSpinor> {
    let Some(v) = params.remove("seed") else {
        return Ok(LossYauSpinor::default());
    };
    let pairs: Vec<[f64; 2]> = serde_json::from_value(v)
        .map_err(|e| Error::InvalidArgument(format!("seed must be [[re, im], [re, im]]: {e}")))?;
    if pairs.len() != 2 {
        return Err(Error::InvalidArgument("seed must have two components".into()));
    }
    LossYauSpinor::new([Complex64::new(pairs[0][0], pairs[0][1]), Complex64::new(pairs[1][0], pairs[1][1])])
}

impl FieldSpec {
    pub fn builtin(label: &str) -> Self {
        let label = normalize_label(label);
        let kind = if label.ends_with("-derived") { FieldKind::Derived } else { FieldKind::Builtin };
        Self { label, kind, params: Map::new(), decay: None }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<FieldModel> {
        let label = normalize_label(&self.label);
        let mut params = self.params.clone();
        let mut model = match (self.kind, label.as_str()) {
            (FieldKind::Builtin, "gaussian-swirl") => gaussian_swirl(take_f64(&mut params, "amplitude", 1.0)?),
            (FieldKind::Builtin, "rational-swirl") => {
                let s = take_f64(&mut params, "s", 2.0)?;
                rational_swirl(s, take_f64(&mut params, "amplitude", 1.0)?)?
            }
            (FieldKind::Builtin, "loss-yau") => loss_yau(),
            (FieldKind::Builtin, "zero") => zero_field(),
            (_, "loss-yau-derived") | (FieldKind::Derived, "loss-yau") => {
                let seed = take_seed(&mut params)?;
                loss_yau_derived(seed, &DeriveOptions::default())?.into()
            }
            (FieldKind::Derived, other) => {
                return Err(Error::UnknownField(format!("{other} (no derived construction)")));
            }
            (FieldKind::Builtin, other) => return Err(Error::UnknownField(other.to_string())),
        };
        if let Some(key) = params.keys().next() {
            return Err(Error::InvalidArgument(format!("unknown parameter '{key}' for field '{label}'")));
        }
        if let Some(d) = self.decay {
            model.field.decay = Some(FieldDecay::new(d.c_b, d.beta, d.r0)?);
        }
        Ok(model)
    }
}

/// Resolves a built-in label, or reads a JSON field document when `source`
/// names a file.
pub fn load_field(source: &str) -> Result<(FieldSpec, FieldModel)> {
    let path = Path::new(source);
    let looks_like_path = source.contains(std::path::MAIN_SEPARATOR) || source.ends_with(".json") || path.exists();
    let spec = if looks_like_path {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?;
        FieldSpec::from_json_str(&text)?
    } else {
        FieldSpec::builtin(source)
    };
    let model = spec.build()?;
    Ok((spec, model))
}
