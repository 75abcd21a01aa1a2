use std::sync::Arc;

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::artifacts::ArtifactWriter;
use super::{Common, Outcome, UsageError};
use crate::decay_lab::{
    bootstrap_exponents, fit_norms, fit_sphere_norm_decay, integrate_inward, integrate_radial_system, parse_rational,
    predicted_steps, propagate_envelopes, BootstrapRow, NormFit, PropagatedEnvelopes, RadialOptions,
};
use crate::error::{Error, Result};
use crate::field_zoo::{decay_report, load_field, lp_norm, DecayReport, FieldModel, FieldSpec, LpQuadrature};
use crate::gauge::{
    biot_savart_many, curl_residual, fit_decay_exponent, potential_envelope, BiotSavartOptions, BiotSavartPotential,
    DecayFit, EnvelopeConstants,
};
use crate::linalg::{fibonacci_sphere, norm3, scale3, sub3, Vec3};
use crate::quotient::{
    assemble_forms, minimize_quotient, write_spinor_grid, zero_mode_residual, EigenOptions, FormOptions, Scheme,
    SpinorSource,
};
use crate::spinor_calculus::{partial_wave_project, GridSpec, ProjectionOptions, SpinorField};

type Ran = std::result::Result<Result<Outcome>, UsageError>;

fn usage<E: std::fmt::Display>(e: E) -> UsageError {
    UsageError(e.to_string())
}

fn load(source: &str) -> std::result::Result<(FieldSpec, FieldModel), UsageError> {
    load_field(source).map_err(usage)
}

fn positive(name: &str, v: f64) -> std::result::Result<(), UsageError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(UsageError(format!("{name} must be positive and finite, got {v}")))
    }
}

fn in_pool<T: Send>(common: &Common, f: impl FnOnce() -> T + Send) -> std::result::Result<T, UsageError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(common.threads).build().map_err(usage)?;
    Ok(pool.install(f))
}

fn writer(common: &Common, command: &str, config: Value) -> Result<ArtifactWriter> {
    ArtifactWriter::create(&common.out, command, config)
}

fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SchemeArg {
    #[default]
    Centered,
    Peierls,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Centered => Scheme::Centered,
            SchemeArg::Peierls => Scheme::Peierls,
        }
    }
}

// ---------------------------------------------------------------- field

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldArgs {
    /// Built-in label or path to a JSON field document.
    #[arg(long, default_value = "loss-yau")]
    pub field: String,
    /// Exponent of the L^p norm.
    #[arg(long, default_value_t = 1.5)]
    pub p: f64,
    /// Radii for the envelope check [default: max(r0, 1) · 2^k, k = 0..5].
    #[arg(long, value_delimiter = ',')]
    pub radii: Vec<f64>,
    /// Number of probe directions per radius.
    #[arg(long, default_value_t = 64)]
    pub directions: usize,
}

#[derive(Serialize)]
struct NormOut {
    p: f64,
    value: f64,
    error: f64,
    tail: f64,
}

#[derive(Serialize)]
struct FieldOut<'a> {
    field_label: &'a str,
    field_spec: &'a FieldSpec,
    decay_report: &'a DecayReport,
    lp_norm: NormOut,
    pass: bool,
}

pub(super) fn field(common: &Common, a: &FieldArgs, config: Value) -> Ran {
    if !(a.p >= 1.0) || !a.p.is_finite() {
        return Err(UsageError(format!("p must be in [1, ∞), got {}", a.p)));
    }
    if a.directions == 0 {
        return Err(UsageError("directions must be positive".into()));
    }
    let (spec, model) = load(&a.field)?;
    let decay = model.field.decay.ok_or_else(|| UsageError(format!("field '{}' has no decay metadata", model.label())))?;
    let radii = if a.radii.is_empty() { geometric(decay.r0.max(1.0), 32.0 * decay.r0.max(1.0), 6) } else { a.radii.clone() };
    for &r in &radii {
        positive("radius", r)?;
    }
    in_pool(common, || {
        let report = decay_report(&model.field, &radii, &fibonacci_sphere(a.directions))?;
        let norm = lp_norm(&model.field, a.p, &LpQuadrature::default())?;
        let out = FieldOut {
            field_label: model.label(),
            field_spec: &spec,
            decay_report: &report,
            lp_norm: NormOut { p: a.p, value: norm.value, error: norm.error, tail: norm.tail },
            pass: report.pass,
        };
        let mut w = writer(common, "field", config)?;
        w.csv("field_decay.csv", &report.rows)?;
        w.json("field.json", &out)?;
        let mut lines = vec![
            format!("field {}: ‖B‖_{} = {} ± {}", model.label(), a.p, norm.value, norm.error),
            format!("decay envelope C_B = {}, beta = {}, r0 = {}: {}", decay.c_b, decay.beta, decay.r0, verdict(report.pass)),
        ];
        lines.extend(w.written.iter().map(|p| format!("wrote {}", p.display())));
        Ok(Outcome { lines, pass: report.pass })
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

// ---------------------------------------------------------------- gauge

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeArgs {
    #[arg(long, default_value = "gaussian-swirl")]
    pub field: String,
    /// Number of probe points.
    #[arg(long, default_value_t = 40)]
    pub probes: usize,
    /// Smallest probe radius [default: r₁ of the decay bound].
    #[arg(long)]
    pub r_min: Option<f64>,
    /// Largest probe radius [default: 10 r₁].
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Finite-difference step of the curl residual.
    #[arg(long, default_value_t = 1e-3)]
    pub curl_step: f64,
    /// Number of probes (from the first) with a curl residual.
    #[arg(long, default_value_t = 8)]
    pub curl_probes: usize,
}

#[derive(Serialize)]
struct GaugeRow {
    x: f64,
    y: f64,
    z: f64,
    r: f64,
    a_x: f64,
    a_y: f64,
    a_z: f64,
    abs_a: f64,
    quadrature_error: f64,
    envelope: f64,
    within_envelope: bool,
    closed_form_difference: Option<f64>,
    curl_residual: Option<f64>,
}

#[derive(Serialize)]
struct GaugeOut<'a> {
    field_label: &'a str,
    field_spec: &'a FieldSpec,
    envelope: &'a EnvelopeConstants,
    norm_b_32: f64,
    envelope_violations: usize,
    decay_fit: DecayFit,
    fit_threshold: f64,
    max_curl_residual: Option<f64>,
    max_closed_form_difference: Option<f64>,
    pass: bool,
}

/// Slack on the fitted exponent relative to the envelope exponent 1 + α.
pub const FIT_TOLERANCE: f64 = 0.1;

pub(super) fn gauge(common: &Common, a: &GaugeArgs, config: Value) -> Ran {
    if a.probes < 3 {
        return Err(UsageError("need at least 3 probes".into()));
    }
    positive("curl_step", a.curl_step)?;
    let (spec, model) = load(&a.field)?;
    let decay = model.field.decay.ok_or_else(|| UsageError(format!("field '{}' has no decay metadata", model.label())))?;
    in_pool(common, || -> Result<Outcome> {
        let norm = lp_norm(&model.field, 1.5, &LpQuadrature::default())?;
        let consts = potential_envelope(decay.c_b, decay.beta, decay.r0, norm.value)?;
        let r_min = a.r_min.unwrap_or(consts.r1);
        let r_max = a.r_max.unwrap_or(10.0 * consts.r1);
        if !(r_min > 0.0 && r_max > r_min) {
            return Err(Error::InvalidArgument(format!("probe radii [{r_min}, {r_max}] are not a valid range")));
        }
        let radii = geometric(r_min, r_max, a.probes);
        let dirs = fibonacci_sphere(a.probes);
        let points: Vec<Vec3> = radii.iter().zip(&dirs).map(|(&r, &w)| scale3(r, w)).collect();
        let opts = BiotSavartOptions::default();
        let estimates: Vec<_> = biot_savart_many(&model.field, &points, &opts).into_iter().collect::<Result<_>>()?;
        let bs = BiotSavartPotential { field: model.field.clone(), options: opts };
        let mut rows = Vec::with_capacity(points.len());
        for (i, (x, est)) in points.iter().zip(&estimates).enumerate() {
            let r = norm3(*x);
            let abs_a = norm3(est.value);
            let envelope = consts.envelope_biot_savart(r);
            let curl = if i < a.curl_probes { Some(curl_residual(&bs, &model.field, *x, a.curl_step)?) } else { None };
            rows.push(GaugeRow {
                x: x[0],
                y: x[1],
                z: x[2],
                r,
                a_x: est.value[0],
                a_y: est.value[1],
                a_z: est.value[2],
                abs_a,
                quadrature_error: est.error,
                envelope,
                within_envelope: r < consts.r1 || abs_a <= envelope,
                closed_form_difference: model.potential.as_ref().map(|p| norm3(sub3(est.value, p.eval(*x)))),
                curl_residual: curl,
            });
        }
        let samples: Vec<(f64, f64)> = rows.iter().map(|r| (r.r, r.abs_a)).collect();
        let fit = fit_decay_exponent(&samples)?;
        let violations = rows.iter().filter(|r| !r.within_envelope).count();
        let threshold = 1.0 + consts.alpha - FIT_TOLERANCE;
        let pass = violations == 0 && fit.exponent >= threshold;
        let max_of = |f: &dyn Fn(&GaugeRow) -> Option<f64>| rows.iter().filter_map(f).reduce(f64::max);
        let out = GaugeOut {
            field_label: model.label(),
            field_spec: &spec,
            envelope: &consts,
            norm_b_32: norm.value,
            envelope_violations: violations,
            decay_fit: fit,
            fit_threshold: threshold,
            max_curl_residual: max_of(&|r| r.curl_residual),
            max_closed_form_difference: max_of(&|r| r.closed_form_difference),
            pass,
        };
        let mut w = writer(common, "gauge", config)?;
        w.csv("gauge.csv", &rows)?;
        w.json("gauge.json", &out)?;
        let mut lines = vec![
            format!("gauge {}: {} probes in [{r_min}, {r_max}], r1 = {}", model.label(), rows.len(), consts.r1),
            format!("envelope violations: {violations}; fitted |A| exponent {} (need ≥ {threshold})", fit.exponent),
            format!("result: {}", verdict(pass)),
        ];
        lines.extend(w.written.iter().map(|p| format!("wrote {}", p.display())));
        Ok(Outcome { lines, pass })
    })
}

// ---------------------------------------------------------------- quotient

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientArgs {
    #[arg(long, default_value = "loss-yau-derived")]
    pub field: String,
    /// Grid spacing.
    #[arg(long, default_value_t = 0.25)]
    pub h: f64,
    /// Half-width of the box [-L, L]³.
    #[arg(long = "L", default_value_t = 6.0)]
    #[serde(rename = "L")]
    pub half_width: f64,
    #[arg(long, value_enum, default_value_t = SchemeArg::Centered)]
    pub scheme: SchemeArg,
    /// Relative residual at which the eigensolver stops.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 3)]
    pub block: usize,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Shift of the free preconditioner.
    #[arg(long, default_value_t = 1.0)]
    pub shift: f64,
    /// Warn when this fraction of ∫|B| lies outside the box.
    #[arg(long, default_value_t = 1e-3)]
    pub tail_fraction: f64,
    /// Also write the minimizer as a binary grid dump.
    #[arg(long)]
    pub dump_minimizer: bool,
}

#[derive(Serialize)]
struct GridOut {
    h: f64,
    #[serde(rename = "L")]
    half_width: f64,
    n: usize,
}

#[derive(Serialize)]
struct QuotientOut<'a> {
    lambda_min: f64,
    delta_surrogate: f64,
    grid: GridOut,
    iterations: usize,
    residual: f64,
    field_label: &'a str,
    scheme: Scheme,
    ritz_values: Vec<f64>,
    residual_history: Vec<f64>,
    exterior_fraction: Option<f64>,
    warnings: Vec<String>,
}

pub(super) fn quotient(common: &Common, a: &QuotientArgs, config: Value) -> Ran {
    positive("tol", a.tol)?;
    positive("shift", a.shift)?;
    positive("tail_fraction", a.tail_fraction)?;
    if a.max_iter == 0 || a.block == 0 {
        return Err(UsageError("max_iter and block must be positive".into()));
    }
    let spec = GridSpec::new(a.h, a.half_width).map_err(usage)?;
    let (_, model) = load(&a.field)?;
    let potential = model
        .potential
        .clone()
        .ok_or_else(|| UsageError(format!("field '{}' has no vector potential", model.label())))?;
    in_pool(common, || -> Result<Outcome> {
        let form_opts = FormOptions { scheme: a.scheme.into(), tail_fraction: a.tail_fraction, check_tail: true };
        let forms = assemble_forms(&potential, &model.field, spec, &form_opts)?;
        let eig = EigenOptions { tol: a.tol, max_iter: a.max_iter, block: a.block, seed: a.seed, shift: a.shift };
        let res = minimize_quotient(&forms, &eig)?;
        let out = QuotientOut {
            lambda_min: res.lambda_min,
            delta_surrogate: res.delta_surrogate,
            grid: GridOut { h: spec.h, half_width: spec.half_width, n: spec.n() },
            iterations: res.iterations,
            residual: res.residual,
            field_label: model.label(),
            scheme: a.scheme.into(),
            ritz_values: res.ritz_values.clone(),
            residual_history: res.residual_history.clone(),
            exterior_fraction: forms.exterior_fraction,
            warnings: forms.warnings.clone(),
        };
        let mut w = writer(common, "quotient", config)?;
        w.json("quotient.json", &out)?;
        if a.dump_minimizer {
            let path = w.path("minimizer.bin");
            write_spinor_grid(&path, &res.minimizer)?;
            w.record(path);
        }
        let mut lines = vec![
            format!("quotient {} on {}³ (h = {}, L = {})", model.label(), spec.n(), spec.h, spec.half_width),
            format!("lambda_min = {}  delta_surrogate = {}  iterations = {}", res.lambda_min, res.delta_surrogate, res.iterations),
        ];
        lines.extend(forms.warnings.iter().map(|s| format!("warning: {s}")));
        lines.extend(w.written.iter().map(|p| format!("wrote {}", p.display())));
        Ok(Outcome { lines, pass: true })
    })
}

// ---------------------------------------------------------------- verify

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    #[arg(long, default_value = "loss-yau-derived")]
    pub field: String,
    #[arg(long, default_value_t = 0.125)]
    pub h: f64,
    #[arg(long = "L", default_value_t = 6.0)]
    #[serde(rename = "L")]
    pub half_width: f64,
    #[arg(long, value_enum, default_value_t = SchemeArg::Centered)]
    pub scheme: SchemeArg,
    /// Also evaluate at h/2 and report the ratio.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub refine: bool,
    /// Fail (exit 1) when the residual at h exceeds this.
    #[arg(long)]
    pub max_residual: Option<f64>,
}

#[derive(Serialize)]
struct VerifyOut<'a> {
    field_label: &'a str,
    scheme: Scheme,
    grid: GridOut,
    residual: f64,
    residual_half_step: Option<f64>,
    refinement_ratio: Option<f64>,
    max_residual: Option<f64>,
    pass: bool,
}

pub(super) fn verify(common: &Common, a: &VerifyArgs, config: Value) -> Ran {
    let spec = GridSpec::new(a.h, a.half_width).map_err(usage)?;
    let half = if a.refine { Some(GridSpec::new(a.h / 2.0, a.half_width).map_err(usage)?) } else { None };
    if let Some(m) = a.max_residual {
        positive("max_residual", m)?;
    }
    let (_, model) = load(&a.field)?;
    let potential = model.potential.clone().ok_or_else(|| UsageError(format!("field '{}' has no vector potential", model.label())))?;
    let psi = model.spinor.clone().ok_or_else(|| UsageError(format!("field '{}' has no zero-mode spinor", model.label())))?;
    in_pool(common, || -> Result<Outcome> {
        let r = zero_mode_residual(&potential, SpinorSource::Evaluator(psi.as_ref()), spec, a.scheme.into())?;
        let r2 = half.map(|s| zero_mode_residual(&potential, SpinorSource::Evaluator(psi.as_ref()), s, a.scheme.into())).transpose()?;
        let pass = a.max_residual.is_none_or(|m| r <= m);
        let out = VerifyOut {
            field_label: model.label(),
            scheme: a.scheme.into(),
            grid: GridOut { h: spec.h, half_width: spec.half_width, n: spec.n() },
            residual: r,
            residual_half_step: r2,
            refinement_ratio: r2.map(|v| r / v),
            max_residual: a.max_residual,
            pass,
        };
        let mut w = writer(common, "verify", config)?;
        w.json("verify.json", &out)?;
        let mut lines = vec![format!("zero-mode residual of {} at h = {}: {r}", model.label(), spec.h)];
        if let Some(v) = r2 {
            lines.push(format!("at h/2: {v} (ratio {})", r / v));
        }
        lines.extend(w.written.iter().map(|p| format!("wrote {}", p.display())));
        Ok(Outcome { lines, pass })
    })
}

// ---------------------------------------------------------------- decay

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayArgs {
    #[arg(long, default_value = "loss-yau-derived")]
    pub field: String,
    #[arg(long, default_value_t = 3)]
    pub kappa_max: i32,
    #[arg(long, default_value_t = 5.0)]
    pub r_start: f64,
    #[arg(long, default_value_t = 40.0)]
    pub r_end: f64,
    /// Number of output radii, geometrically spaced.
    #[arg(long, default_value_t = 16)]
    pub points: usize,
    /// Start of the inward sweep [default: 2 r_end].
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Input exponent ε of ‖g‖² ≤ C r^{-ε} [default: from the fitted total norm, minus 0.2].
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
}

#[derive(Serialize)]
struct DecayRow {
    r: f64,
    norm_plus: f64,
    norm_minus: f64,
    envelope_plus: f64,
    envelope_minus: f64,
}

#[derive(Serialize)]
struct DecayOut<'a> {
    field_label: &'a str,
    direct: [&'a NormFit; 2],
    outward_ode: [NormFit; 2],
    inward_ode: [NormFit; 2],
    inward_r_max: f64,
    inward_r_max_sensitivity: f64,
    max_ode_discrepancy: f64,
    max_truncation_residual: f64,
    input_envelope: InputEnvelope,
    propagated: PropagatedEnvelopes,
    envelope_violations: usize,
    warnings: &'a [String],
    pass: bool,
}

#[derive(Serialize)]
struct InputEnvelope {
    c: f64,
    eps: f64,
    #[serde(rename = "C_A")]
    c_a: f64,
    alpha: f64,
    r1: f64,
}

pub(super) fn decay(common: &Common, a: &DecayArgs, config: Value) -> Ran {
    positive("r_start", a.r_start)?;
    positive("rtol", a.rtol)?;
    if !(a.r_end > a.r_start) || a.points < 3 || a.kappa_max < 1 {
        return Err(UsageError("need r_end > r_start, points ≥ 3 and kappa_max ≥ 1".into()));
    }
    let r_max = a.r_max.unwrap_or(2.0 * a.r_end);
    if !(r_max > a.r_end) || !r_max.is_finite() {
        return Err(UsageError("r_max must exceed r_end".into()));
    }
    let (_, model) = load(&a.field)?;
    let potential = model.potential.clone().ok_or_else(|| UsageError(format!("field '{}' has no vector potential", model.label())))?;
    let pdecay = potential.decay.ok_or_else(|| UsageError(format!("potential of '{}' has no decay metadata", model.label())))?;
    let psi: Arc<dyn SpinorField> = model.spinor.clone().ok_or_else(|| UsageError(format!("field '{}' has no zero-mode spinor", model.label())))?;
    in_pool(common, || -> Result<Outcome> {
        let radii = geometric(a.r_start, a.r_end, a.points);
        let direct = fit_sphere_norm_decay(psi.as_ref(), &radii, a.kappa_max)?;
        let proj_opts = ProjectionOptions::new(a.kappa_max);
        let start = partial_wave_project(psi.as_ref(), &[a.r_start], proj_opts)?;
        let opts = RadialOptions { rtol: a.rtol, ..RadialOptions::new(a.kappa_max) };
        let outward = integrate_radial_system(&potential, &opts, a.r_start, a.r_end, &start.amplitudes[0], &radii)?;
        let initial = |r: f64| -> Result<Vec<Complex64>> { Ok(partial_wave_project(psi.as_ref(), &[r], proj_opts)?.amplitudes.remove(0)) };
        let inward_radii: Vec<f64> = radii.iter().rev().cloned().collect();
        let inward = integrate_inward(&potential, &opts, r_max, &initial, &inward_radii)?;
        let rev = |v: &[f64]| v.iter().rev().cloned().collect::<Vec<f64>>();
        let in_plus = rev(&inward.solution.norm_plus);
        let in_minus = rev(&inward.solution.norm_minus);

        let mut discrepancy = 0.0f64;
        for i in 0..radii.len() {
            let d = outward.norm_plus[i].hypot(outward.norm_minus[i]);
            let ref_ = direct.norm_plus[i].hypot(direct.norm_minus[i]);
            discrepancy = discrepancy.max((d - ref_).abs() / ref_.max(f64::MIN_POSITIVE));
        }

        // Input envelope ‖g‖² ≤ C r^{-ε} calibrated on the samples.
        let total: Vec<f64> = direct.norm_plus.iter().zip(&direct.norm_minus).map(|(p, m)| p.hypot(*m)).collect();
        let eps = match a.eps {
            Some(e) => e,
            None => (2.0 * fit_norms(&radii, &total)?.exponent.unwrap_or(0.0) - 0.2).max(0.1),
        };
        let c = radii.iter().zip(&total).map(|(r, n)| n * n * r.powf(eps)).fold(0.0, f64::max);
        let r1 = a.r_start.max(pdecay.r1);
        let boundary = (r1.powi(2) * direct.norm_plus[0]).powi(2);
        let env = propagate_envelopes(c, pdecay.c_a, eps, pdecay.alpha, r1, boundary)?;
        let rows: Vec<DecayRow> = radii
            .iter()
            .enumerate()
            .map(|(i, &r)| DecayRow {
                r,
                norm_plus: direct.norm_plus[i],
                norm_minus: direct.norm_minus[i],
                envelope_plus: env.bar_plus.eval(r).max(0.0).sqrt() / (r * r),
                envelope_minus: env.minus.eval(r).sqrt(),
            })
            .collect();
        let slack = 1.0 + 1e-9;
        let violations = rows
            .iter()
            .filter(|row| row.r >= r1 && (row.norm_plus > row.envelope_plus * slack || row.norm_minus > row.envelope_minus * slack))
            .count();
        let pass = violations == 0;
        let truncation = outward.truncation_residual.iter().cloned().fold(0.0, f64::max);
        let out = DecayOut {
            field_label: model.label(),
            direct: [&direct.plus, &direct.minus],
            outward_ode: [fit_norms(&radii, &outward.norm_plus)?, fit_norms(&radii, &outward.norm_minus)?],
            inward_ode: [fit_norms(&radii, &in_plus)?, fit_norms(&radii, &in_minus)?],
            inward_r_max: r_max,
            inward_r_max_sensitivity: inward.r_max_sensitivity,
            max_ode_discrepancy: discrepancy,
            max_truncation_residual: truncation,
            input_envelope: InputEnvelope { c, eps, c_a: pdecay.c_a, alpha: pdecay.alpha, r1 },
            propagated: env,
            envelope_violations: violations,
            warnings: &direct.warnings,
            pass,
        };
        let mut w = writer(common, "decay", config)?;
        w.csv("decay.csv", &rows)?;
        w.json("decay.json", &out)?;
        let fmt = |f: &NormFit| f.exponent.map_or("n/a".to_string(), |e| format!("{e:.4}"));
        let mut lines = vec![
            format!("decay {} over r ∈ [{}, {}], κ_max = {}", model.label(), a.r_start, a.r_end, a.kappa_max),
            format!("sphere-norm exponents: g+ {}  g- {}", fmt(&direct.plus), fmt(&direct.minus)),
            format!("radial ODE vs direct: max relative discrepancy {discrepancy:.3e}; r_max sensitivity {:.3e}", inward.r_max_sensitivity),
            format!("envelope violations: {violations} ({})", verdict(pass)),
        ];
        lines.extend(w.written.iter().map(|p| format!("wrote {}", p.display())));
        Ok(Outcome { lines, pass })
    })
}

// ---------------------------------------------------------------- bootstrap

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BootstrapArgs {
    /// Integrability exponent p ≥ 2 (integer, fraction or decimal).
    #[arg(long, default_value = "6")]
    pub p: String,
    /// Exponent gain per step α > 0.
    #[arg(long, default_value = "1/2")]
    pub alpha: String,
}

#[derive(Serialize)]
struct BootstrapOut {
    p: String,
    alpha: String,
    steps: usize,
    predicted_steps: String,
    sequence: Vec<BootstrapRow>,
}

pub(super) fn bootstrap(common: &Common, a: &BootstrapArgs, config: Value) -> Ran {
    let p = parse_rational(&a.p).map_err(usage)?;
    let alpha = parse_rational(&a.alpha).map_err(usage)?;
    in_pool(common, || -> Result<Outcome> {
        let run = bootstrap_exponents(&p, &alpha)?;
        let table = run.table();
        let out = BootstrapOut {
            p: p.to_string(),
            alpha: alpha.to_string(),
            steps: run.steps,
            predicted_steps: predicted_steps(&p, &alpha).to_string(),
            sequence: table.clone(),
        };
        let mut w = writer(common, "bootstrap", config)?;
        w.csv("bootstrap.csv", &table)?;
        w.json("bootstrap.json", &out)?;
        let mut lines = vec![format!("bootstrap p = {p}, alpha = {alpha}: {} steps", run.steps), "step  epsilon  decimal".into()];
        lines.extend(table.iter().map(|r| format!("{:>4}  {:>7}  {}", r.step, r.epsilon, r.decimal)));
        lines.extend(w.written.iter().map(|p| format!("wrote {}", p.display())));
        Ok(Outcome { lines, pass: true })
    })
}
