use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::field_zoo::VectorField;
use crate::linalg::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeTag {
    BiotSavart,
    ClosedForm,
}

/// `|A(x)| ≤ C_A |x|^(-1-α)` for `|x| ≥ r₁`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialDecay {
    #[serde(rename = "C_A")]
    pub c_a: f64,
    pub alpha: f64,
    pub r1: f64,
}

#[derive(Clone)]
pub struct GaugePotential {
    pub label: String,
    pub evaluator: Arc<dyn VectorField>,
    pub gauge: GaugeTag,
    pub decay: Option<PotentialDecay>,
}

impl GaugePotential {
    pub fn new(label: impl Into<String>, evaluator: Arc<dyn VectorField>, gauge: GaugeTag) -> Self {
        Self { label: label.into(), evaluator, gauge, decay: None }
    }

    pub fn with_decay(mut self, decay: PotentialDecay) -> Self {
        self.decay = Some(decay);
        self
    }

    pub fn zero() -> Self {
        Self::new("zero", Arc::new(crate::field_zoo::FnField(|_| [0.0; 3])), GaugeTag::ClosedForm)
    }

    #[inline]
    pub fn eval(&self, x: Vec3) -> Vec3 {
        self.evaluator.value(x)
    }
}

impl VectorField for GaugePotential {
    fn value(&self, x: Vec3) -> Vec3 {
        self.evaluator.value(x)
    }
}

impl std::fmt::Debug for GaugePotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GaugePotential")
            .field("label", &self.label)
            .field("gauge", &self.gauge)
            .field("decay", &self.decay)
            .finish_non_exhaustive()
    }
}
