use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use zeromode::decay_lab::*;
use zeromode::field_zoo::{loss_yau_derived, loss_yau_spinor, DeriveOptions, FnField};
use zeromode::linalg::norm3;
use zeromode::spinor_calculus::{partial_wave_project, FnSpinor, ProjectionOptions, SpinorField};

fn q(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

#[test]
fn bootstrap_worked_examples() {
    let run = bootstrap_exponents(&q("6"), &q("1/2")).unwrap();
    let expect: Vec<BigRational> = ["1/2", "1", "3/2", "2", "5/2", "3", "7/2", "4"].iter().map(|s| q(s)).collect();
    assert_eq!(run.steps, 7);
    assert_eq!(run.sequence, expect);
    assert_eq!(bootstrap_exponents(&q("3"), &q("4")).unwrap().steps, 1);
    let r = bootstrap_exponents(&q("2"), &q("1/4")).unwrap();
    assert_eq!((r.sequence[0].clone(), r.steps), (q("3/2"), 10));
    assert!(matches!(bootstrap_exponents(&q("19/10"), &q("1")), Err(zeromode::Error::Hypothesis(_))));
    assert!(bootstrap_exponents(&q("3"), &q("0")).is_err());
    let t = run.table();
    assert_eq!((t[2].epsilon.as_str(), t[2].decimal), ("3/2", 1.5));
}

#[test]
fn rational_parsing() {
    assert_eq!(q("0.25"), q("1/4"));
    assert_eq!(q("-1.5e1"), q("-15"));
    assert_eq!(q(" 6 "), q("12/2"));
    for bad in ["", "1/0", "x", "1.2.3", "."] {
        assert!(parse_rational(bad).is_err(), "{bad}");
    }
}

proptest! {
    #[test]
    fn bootstrap_step_count(p_num in 2u32..40, p_den in 1u32..5, a_num in 1u32..30, a_den in 1u32..12) {
        let p = BigRational::new(p_num.into(), p_den.into());
        prop_assume!(p >= q("2"));
        let alpha = BigRational::new(a_num.into(), a_den.into());
        let run = bootstrap_exponents(&p, &alpha).unwrap();
        prop_assert_eq!(num_bigint::BigInt::from(run.steps), predicted_steps(&p, &alpha));
        prop_assert!(run.sequence.windows(2).all(|w| w[1] >= w[0]));
        prop_assert_eq!(run.sequence.last().unwrap(), &q("4"));
        prop_assert!(run.sequence.iter().all(|e| *e <= q("4")));
    }
}

#[test]
fn envelope_coefficients() {
    let out = propagate_envelopes(1.0, 1.0, 0.5, 0.5, 1.0, 0.0).unwrap();
    assert_eq!(out.minus.c, 2.0);
    assert_eq!(out.minus.exponent, 1.0);
    assert_eq!(out.bar_plus.coefficient, 4.0 / 3.0);
    assert_eq!(out.bar_plus.growth_exponent, 3.0);
    let (plus, minus) = propagate_coefficients_exact(&q("1"), &q("1"), &q("1/2"), &q("1/2")).unwrap();
    assert_eq!((plus, minus), (q("4/3"), q("2")));

    let log = propagate_envelopes(2.0, 0.5, 3.0, 1.0, 2.0, 0.7).unwrap();
    assert!(log.bar_plus.logarithmic);
    assert_eq!(log.bar_plus.coefficient, 4.0);
    assert!((log.bar_plus.eval(2.0 * 1f64.exp()) - (4.0 + 0.7)).abs() < 1e-14);
    assert!(propagate_envelopes(1.0, 1.0, 0.5, -0.5, 1.0, 0.0).is_err());
    assert!(propagate_coefficients_exact(&q("1"), &q("1"), &q("1"), &q("-1")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    /// Profiles saturating `‖g‖² = C r^{-ε}` and `‖σ_A‖ = C_A r^{-1-α}` up to
    /// bounded factors; the worst-case inequalities integrated numerically
    /// stay below the propagated envelopes at 50 radii.
    #[test]
    fn envelopes_dominate_synthetic_norms(
        c in 0.1f64..5.0, c_a in 0.1f64..3.0, eps in 0.1f64..2.0, alpha in 0.1f64..1.5,
        phase in 0.0f64..6.0, theta in 0.0f64..1.0,
    ) {
        let r1 = 1.0;
        let env = propagate_envelopes(c, c_a, eps, alpha, r1, 0.0).unwrap();
        let g_sq = |s: f64| c * s.powf(-eps) * (0.75 + 0.25 * (s.ln() + phase).sin());
        let sig = |s: f64| c_a * s.powf(-1.0 - alpha) * (0.5 + 0.5 * theta * (3.0 * s.ln()).cos().abs());
        let minus_share = |s: f64| 0.5 + 0.5 * (0.7 * s.ln() + phase).cos().abs();
        let tol = zeromode::quadrature::Tolerance::new(1e-13, 1e-10);
        let u_max = 40.0 / (eps + alpha);
        let cuts: Vec<f64> = (0..=8).map(|k| u_max * k as f64 / 8.0).collect();
        for i in 0..50 {
            let r = r1 * (1.0 + 0.2 * i as f64);
            // −d/dr ‖g₋‖² ≤ 2 ‖g₋‖ ‖σ_A‖ ‖g‖ with ‖g₋‖ ≤ ‖g‖, integrated in u = ln(s/r).
            let (minus, _) = zeromode::quadrature::integrate_scalar(
                |u| { let s = r * u.exp(); 2.0 * minus_share(s) * g_sq(s) * sig(s) * s },
                &cuts, tol);
            prop_assert!(minus <= env.minus.eval(r) * (1.0 + 1e-9), "r={r} {minus} > {}", env.minus.eval(r));
            // d/dr ‖ḡ₊‖² ≤ 2 r⁴ ‖g₊‖ ‖σ_A‖ ‖g‖ with ‖g₊‖ ≤ ‖g‖.
            if i == 0 {
                continue;
            }
            let (plus, _) = zeromode::quadrature::integrate_scalar(
                |s| 2.0 * s.powi(4) * (1.0 - 0.5 * minus_share(s)) * g_sq(s) * sig(s), &[r1, r], tol);
            prop_assert!(plus <= env.bar_plus.eval(r) * (1.0 + 1e-9) + 1e-12);
        }
    }
}

#[test]
fn free_channels_follow_power_laws() {
    let zero = FnField(|_x: [f64; 3]| [0.0; 3]);
    let opts = RadialOptions::new(2);
    let probe = Coupling::new(&zero, 2, None).unwrap();
    let channels = probe.channels().to_vec();
    let initial: Vec<Complex64> = (0..channels.len()).map(|a| Complex64::new(1.0 + a as f64, 0.5 - a as f64)).collect();
    for (r0, r1) in [(0.5, 30.0), (30.0, 0.7)] {
        let sol = integrate_radial_system(&zero, &opts, r0, r1, &initial, &[]).unwrap();
        for (a, ch) in channels.iter().enumerate() {
            let exact = initial[a] * (r1 / r0).powi(-(ch.kappa + 1));
            let got = sol.amplitudes[0][a];
            assert!((got - exact).norm() <= 1e-8 * exact.norm(), "κ={} {got} vs {exact}", ch.kappa);
            if ch.kappa == -1 {
                assert_eq!(got, initial[a]);
            }
        }
    }
}

#[test]
fn radial_system_reproduces_closed_form_zero_mode() {
    let triple = loss_yau_derived(loss_yau_spinor(), &DeriveOptions::default()).unwrap();
    let psi = loss_yau_spinor();
    let kappa_max = 2;
    let start = partial_wave_project(&psi, &[2.0], ProjectionOptions::new(kappa_max)).unwrap();
    let radii: Vec<f64> = (1..=18).map(|i| 2.0 + i as f64).collect();
    let opts = RadialOptions::new(kappa_max);
    let sol = integrate_radial_system(&triple.potential, &opts, 2.0, 20.0, &start.amplitudes[0], &radii).unwrap();
    for (i, &r) in radii.iter().enumerate() {
        let direct = 4.0 * PI * (1.0 + r * r).powi(-3) * (1.0 + r * r);
        let ode = sol.norm_plus[i].powi(2) + sol.norm_minus[i].powi(2);
        assert!((ode / direct - 1.0).abs() < 1e-7, "r={r}: {ode} vs {direct}");
        assert!(sol.truncation_residual[i] < 1e-6);
    }

    // Inward sweep with the exact data at r_max is insensitive to r_max.
    let start_at = |r: f64| Ok(partial_wave_project(&psi, &[r], ProjectionOptions::new(kappa_max))?.amplitudes.remove(0));
    let rep = integrate_inward(&triple.potential, &opts, 40.0, &start_at, &[20.0, 10.0, 5.0]).unwrap();
    assert!(rep.r_max_sensitivity < 1e-6, "{}", rep.r_max_sensitivity);
    let direct5 = (4.0 * PI * 26.0f64.powi(-2)).sqrt();
    let got = rep.solution.norm_plus[2].hypot(rep.solution.norm_minus[2]);
    assert!((got / direct5 - 1.0).abs() < 1e-7);
}

fn window() -> Vec<f64> {
    (0..=15).map(|i| 5.0 * 8f64.powf(i as f64 / 15.0)).collect()
}

#[test]
fn sphere_norm_fits_match_closed_form() {
    let radii = window();
    let fits = fit_sphere_norm_decay(&loss_yau_spinor(), &radii, 3).unwrap();
    // ‖g₊‖ = √(4π) r (1+r²)^{-3/2},  ‖g₋‖ = √(4π) (1+r²)^{-3/2}
    let closed = |f: &dyn Fn(f64) -> f64| {
        let n: Vec<f64> = radii.iter().map(|&r| f(r)).collect();
        fit_norms(&radii, &n).unwrap().exponent.unwrap()
    };
    let c = (4.0 * PI).sqrt();
    let plus = closed(&|r| c * r * (1.0 + r * r).powf(-1.5));
    let minus = closed(&|r| c * (1.0 + r * r).powf(-1.5));
    assert!((fits.plus.exponent.unwrap() - plus).abs() < 1e-8);
    assert!((fits.minus.exponent.unwrap() - minus).abs() < 1e-8);
    assert!((plus - 2.0).abs() < 0.1);
    assert!((minus - 3.0).abs() < 0.1);
    assert!(!fits.plus.super_polynomial && !fits.minus.super_polynomial);

    // Same exponents from the radial ODE and from direct evaluation.
    let triple = loss_yau_derived(loss_yau_spinor(), &DeriveOptions::default()).unwrap();
    let start = partial_wave_project(&loss_yau_spinor(), &[radii[0]], ProjectionOptions::new(3)).unwrap();
    let sol = integrate_radial_system(&triple.potential, &RadialOptions::new(3), radii[0], radii[15], &start.amplitudes[0], &radii).unwrap();
    let ode_plus = fit_norms(&radii, &sol.norm_plus).unwrap().exponent.unwrap();
    let ode_minus = fit_norms(&radii, &sol.norm_minus).unwrap().exponent.unwrap();
    assert!((ode_plus - plus).abs() < 0.1 && (ode_minus - minus).abs() < 0.1);
}

#[test]
fn exponential_and_exact_power_laws() {
    let radii = window();
    let exp = FnSpinor(|x: [f64; 3]| [Complex64::new((-norm3(x)).exp(), 0.0), Complex64::new(0.0, 0.0)]);
    let f = fit_sphere_norm_decay(&exp, &radii, 2).unwrap();
    assert!(f.minus.super_polynomial && f.minus.note.is_some());
    assert!(f.minus.exponent.unwrap() > 30.0);
    assert!(f.plus.exponent.is_none() && f.plus.note.is_some());

    let p = 6.0;
    let power = FnSpinor(move |x: [f64; 3]| [Complex64::new(norm3(x).powf(-3.0 / p), 0.0), Complex64::new(0.0, 0.0)]);
    let f = fit_sphere_norm_decay(&power, &radii, 2).unwrap();
    assert!((f.minus.exponent.unwrap() - 0.5).abs() < 1e-10);
}

#[test]
fn lp_spinors_decay_at_least_three_over_p() {
    for p in [2.0, 3.0, 6.0] {
        let s = 3.0 / p + 0.05;
        let psi = FnSpinor(move |x: [f64; 3]| {
            let r2 = x.iter().map(|c| c * c).sum::<f64>();
            let v = (1.0 + r2).powf(-s / 2.0);
            [Complex64::new(v * 0.6, 0.0), Complex64::new(0.0, 0.8 * v)]
        });
        let f = fit_sphere_norm_decay(&psi, &window(), 2).unwrap();
        assert!(f.minus.exponent.unwrap() >= 3.0 / p - 0.1);
        let _ = psi.value([1.0, 0.0, 0.0]);
    }
}
