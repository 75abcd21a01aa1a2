use std::time::Instant;

use zeromode::field_zoo::{gaussian_swirl, lp_norm, rational_swirl, LpQuadrature, MagneticField};
use zeromode::gauge::{
    biot_savart, biot_savart_many, curl_residual, fit_decay_exponent, potential_envelope, BiotSavartOptions,
    BiotSavartPotential,
};
use zeromode::linalg::{fibonacci_sphere, norm3, scale3, sub3, Vec3};

fn probes() -> Vec<Vec3> {
    fibonacci_sphere(20).into_iter().enumerate().map(|(i, w)| scale3(0.25 + 0.15 * i as f64, w)).collect()
}

#[test]
fn gaussian_swirl_round_trip() {
    let m = gaussian_swirl(1.0);
    let a = m.potential.unwrap();
    let opts = BiotSavartOptions::default();
    let t = Instant::now();
    let mut worst = 0.0f64;
    for x in probes() {
        let est = biot_savart(&m.field, x, &opts).unwrap();
        worst = worst.max(norm3(sub3(est.value, a.eval(x))));
    }
    eprintln!("max error {worst:.3e} in {:?}", t.elapsed());
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn rational_swirl_round_trip_and_linearity() {
    let m = rational_swirl(2.0, 1.0).unwrap();
    let a = m.potential.unwrap();
    let opts = BiotSavartOptions::default();
    let xs: Vec<Vec3> = probes().into_iter().take(6).collect();
    let base = biot_savart_many(&m.field, &xs, &opts);
    let tripled = biot_savart_many(&m.field.scaled(3.0), &xs, &opts);
    for ((x, b), t) in xs.iter().zip(&base).zip(&tripled) {
        let b = b.as_ref().unwrap().value;
        assert!(norm3(sub3(b, a.eval(*x))) < 1e-6, "{x:?}: {b:?}");
        assert!(norm3(sub3(t.as_ref().unwrap().value, scale3(3.0, b))) < 1e-8);
    }
}

#[test]
fn curl_of_biot_savart_potential() {
    let m = gaussian_swirl(1.0);
    let field: MagneticField = m.field.clone();
    let pot = BiotSavartPotential { field: field.clone(), options: BiotSavartOptions::default() };
    let r = curl_residual(&pot, &field, [0.4, 0.3, -0.5], 1e-2).unwrap();
    assert!(r < 1e-3, "{r}");
}

#[test]
fn envelope_dominates_rational_swirl_potential() {
    let m = rational_swirl(2.0, 1.0).unwrap();
    let decay = m.field.decay.unwrap();
    let norm = lp_norm(&m.field, 1.5, &LpQuadrature::default()).unwrap();
    let c = potential_envelope(decay.c_b, decay.beta, decay.r0, norm.value).unwrap();
    let opts = BiotSavartOptions::default();
    let mut samples = Vec::new();
    for (i, w) in fibonacci_sphere(8).into_iter().enumerate() {
        let r = c.r1 * (1.0 + 9.0 * i as f64 / 7.0);
        let a = biot_savart(&m.field, scale3(r, w), &opts).unwrap();
        assert!(norm3(a.value) <= c.envelope_biot_savart(r), "r = {r}");
        samples.push((r, norm3(a.value)));
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    // |A| = ρ (1+r²)^-2 decays like r^-3 off the axis
    let fit = fit_decay_exponent(&samples).unwrap();
    assert!(fit.exponent >= 1.4, "{fit:?}");
}

/// The closed-form Loss–Yau potential has `div A = 6z/(1+r²)²`; its Coulomb
/// gauge representative is `A - ∇(z u(r))` with `(r⁴u')' = 6r⁴/(1+r²)²`.
/// Reference values from 30-digit quadrature of `u`.
const LOSS_YAU_COULOMB: [(Vec3, Vec3); 5] = [
    ([0.5, -0.3, 1.1], [0.6210701099310176, 0.2548089144335462, 1.0491160696551676]),
    ([1.0, 0.0, 0.0], [0.0, 1.5, 0.643805509807655]),
    ([0.0, 0.0, 2.0], [0.0, 0.0, 0.5303615383455679]),
    ([-1.2, 0.8, 0.4], [-0.6338088240532544, -0.5681634207576688, 0.16524214396945883]),
    ([2.5, 1.0, -1.5], [-0.1498430454149778, 0.09788591108570956, 0.01295597816537882]),
];

#[test]
fn loss_yau_biot_savart_is_coulomb_representative() {
    let m = zeromode::field_zoo::loss_yau();
    let opts = BiotSavartOptions::default();
    for (x, expect) in LOSS_YAU_COULOMB {
        let a = biot_savart(&m.field, x, &opts).unwrap();
        assert!(norm3(sub3(a.value, expect)) < 1e-6, "{x:?}: {:?} vs {expect:?}", a.value);
    }
}

#[test]
fn derived_loss_yau_biot_savart() {
    let t = zeromode::field_zoo::loss_yau_derived(Default::default(), &Default::default()).unwrap();
    let (x, expect) = LOSS_YAU_COULOMB[0];
    let a = biot_savart(&t.field, x, &BiotSavartOptions::default()).unwrap();
    assert!(norm3(sub3(a.value, expect)) < 1e-5, "{:?}", a.value);
}
