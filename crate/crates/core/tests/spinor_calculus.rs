use num_complex::Complex64;
use proptest::prelude::*;
use zeromode::field_zoo::LossYauSpinor;
use zeromode::linalg::{norm2_sq, norm3, scale3, sub2, Mat2, Spinor, Vec3};
use zeromode::quadrature::SphereQuadrature;
use zeromode::spinor_calculus::harmonics::{clebsch_gordan, spherical_harmonic};
use zeromode::spinor_calculus::{
    apply_k, channels_up_to, partial_wave_project, radial_factorization_residual, sample_sphere, sigma_dot_real,
    sphere_inner, sphere_norm, sphere_norm_derivative_check, spherical_spinor, AnalyticSpinor, Channel,
    ChannelBasis, FnSpinor, ProjectionOptions, SpinorField,
};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn unit(v: Vec3) -> Vec3 {
    scale3(1.0 / norm3(v), v)
}

fn mat_close(a: &Mat2, b: &Mat2, tol: f64) -> bool {
    (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).norm() <= tol))
}

proptest! {
    #[test]
    fn sigma_dot_squares_to_norm(v in prop::array::uniform3(-10.0f64..10.0)) {
        let s = sigma_dot_real(v);
        let sq = zeromode::linalg::mat2_mul(&s, &s);
        let n2 = v.iter().map(|x| x * x).sum::<f64>();
        let expect = [[c(n2), c(0.0)], [c(0.0), c(n2)]];
        prop_assert!(mat_close(&sq, &expect, 1e-12 * n2.max(1.0)));
    }

    #[test]
    fn sigma_dot_unit_is_involution(v in prop::array::uniform3(-1.0f64..1.0)) {
        prop_assume!(norm3(v) > 1e-3);
        let s = sigma_dot_real(unit(v));
        let sq = zeromode::linalg::mat2_mul(&s, &s);
        prop_assert!(mat_close(&sq, &[[c(1.0), c(0.0)], [c(0.0), c(1.0)]], 1e-14));
    }

    #[test]
    fn sphere_inner_is_conjugate_symmetric(seed in 0u64..1000) {
        let quad = SphereQuadrature::new(10);
        let a = seed as f64 * 0.01;
        let f: Vec<Spinor> = quad.nodes().iter().map(|w| [Complex64::new(w[0] + a, w[1]), Complex64::new(w[2], -a)]).collect();
        let g: Vec<Spinor> = quad.nodes().iter().map(|w| [Complex64::new(w[1] * w[2], 1.0), Complex64::new(a, w[0])]).collect();
        let fg = sphere_inner(&f, &g, &quad).unwrap();
        let gf = sphere_inner(&g, &f, &quad).unwrap();
        prop_assert!((fg - gf.conj()).norm() < 1e-13);
    }
}

/// `Ω_{κ,m}` expanded in `Y_{l,m∓1/2} χ_±` with Clebsch–Gordan coefficients,
/// as a list of `(component, l, m_l, coefficient)`.
fn expansion(ch: Channel) -> Vec<(usize, i32, i32, f64)> {
    let l = ch.l();
    let mut out = Vec::new();
    for (comp, two_ms) in [(0usize, 1i32), (1, -1)] {
        let two_ml = ch.two_m - two_ms;
        if two_ml.abs() > 2 * l {
            continue;
        }
        let cg = clebsch_gordan(2 * l, two_ml, 1, two_ms, ch.two_j(), ch.two_m);
        if cg != 0.0 {
            out.push((comp, l, two_ml / 2, cg));
        }
    }
    out
}

/// `K Ω` with `σ·L = σ_z L_z + (σ₊L₋ + σ₋L₊)/2` acting on the harmonic expansion.
fn k_by_ladder(ch: Channel, w: Vec3) -> Spinor {
    let ladder = |l: i32, m: i32, up: bool| {
        let mm = if up { m + 1 } else { m - 1 };
        let coef = ((l * (l + 1) - m * mm) as f64).max(0.0).sqrt();
        (mm, coef)
    };
    let mut omega = [c(0.0); 2];
    let mut sl = [c(0.0); 2];
    for (comp, l, m, cg) in expansion(ch) {
        let y = spherical_harmonic(l, m, w);
        omega[comp] += cg * y;
        if comp == 0 {
            sl[0] += cg * m as f64 * y;
            let (mm, k) = ladder(l, m, true);
            if k != 0.0 {
                sl[1] += cg * k * spherical_harmonic(l, mm, w);
            }
        } else {
            sl[1] -= cg * m as f64 * y;
            let (mm, k) = ladder(l, m, false);
            if k != 0.0 {
                sl[0] += cg * k * spherical_harmonic(l, mm, w);
            }
        }
    }
    [-omega[0] - sl[0], -omega[1] - sl[1]]
}

#[test]
fn k_eigenrelation_by_ladder_operators() {
    let dirs = zeromode::linalg::fibonacci_sphere(25);
    let channels = channels_up_to(4);
    assert!(channels.iter().all(|ch| ch.kappa != 0));
    assert!(Channel::new(0, 1).is_err());
    for ch in channels {
        for &w in &dirs {
            let omega = spherical_spinor(ch.kappa, ch.two_m, w).unwrap();
            let k = k_by_ladder(ch, w);
            let diff = sub2(&k, &[omega[0] * ch.kappa as f64, omega[1] * ch.kappa as f64]);
            assert!(norm2_sq(&diff).sqrt() < 1e-10, "{ch:?} at {w:?}");
        }
    }
}

#[test]
fn apply_k_examples() {
    let basis = ChannelBasis::new(3, ChannelBasis::default_degree(3)).unwrap();
    let w = unit([0.3, -0.5, 0.8]);
    let constant = |_: Vec3| [c(0.7), Complex64::new(0.1, -0.2)];
    let img = apply_k(constant, &basis, 1e-10).unwrap();
    let v = img.eval(w);
    assert!((v[0] + 0.7).norm() < 1e-12 && (v[1] - Complex64::new(-0.1, 0.2)).norm() < 1e-12);

    let omega21 = |w: Vec3| spherical_spinor(2, 1, w).unwrap();
    let img = apply_k(omega21, &basis, 1e-10).unwrap();
    let d = sub2(&img.eval(w), &[omega21(w)[0] * 2.0, omega21(w)[1] * 2.0]);
    assert!(norm2_sq(&d).sqrt() < 1e-12);

    let f = |w: Vec3| [Complex64::new(w[0] * w[1], w[2]), c(w[0] * w[0])];
    let g = |w: Vec3| [c(w[2] * w[2] * w[1]), Complex64::new(0.0, w[0])];
    let (a, b) = (Complex64::new(1.5, -0.5), c(-2.0));
    let basis = ChannelBasis::new(4, ChannelBasis::default_degree(4)).unwrap();
    let lhs = apply_k(|w| [a * f(w)[0] + b * g(w)[0], a * f(w)[1] + b * g(w)[1]], &basis, 1e-10).unwrap();
    let kf = apply_k(f, &basis, 1e-10).unwrap();
    let kg = apply_k(g, &basis, 1e-10).unwrap();
    let (l, rf, rg) = (lhs.eval(w), kf.eval(w), kg.eval(w));
    for i in 0..2 {
        assert!((l[i] - (a * rf[i] + b * rg[i])).norm() < 1e-12);
    }

    let rough = |w: Vec3| [c((8.0 * w[0]).sin()), c(0.0)];
    assert!(apply_k(rough, &ChannelBasis::new(1, 6).unwrap(), 1e-6).is_err());
}

#[test]
fn sphere_inner_examples() {
    let quad = SphereQuadrature::new(12);
    let one: Vec<Spinor> = vec![[c(1.0), c(0.0)]; quad.len()];
    assert!((sphere_inner(&one, &one, &quad).unwrap() - c(4.0 * std::f64::consts::PI)).norm() < 1e-12);
    let a: Vec<Spinor> = quad.nodes().iter().map(|&w| spherical_spinor(1, 1, w).unwrap()).collect();
    let b: Vec<Spinor> = quad.nodes().iter().map(|&w| spherical_spinor(-1, 1, w).unwrap()).collect();
    assert!(sphere_inner(&a, &b, &quad).unwrap().norm() < 1e-14);
    assert!(sphere_inner(&a, &b[1..], &quad).is_err());
}

#[test]
fn projection_examples() {
    let constant = FnSpinor(|_| [c(0.6), Complex64::new(0.0, 0.8)]);
    let p = partial_wave_project(&constant, &[1.0, 3.0], ProjectionOptions::new(3)).unwrap();
    for (ch, amp) in p.channels.iter().zip(&p.amplitudes[0]) {
        if ch.kappa != -1 {
            assert!(amp.norm() < 1e-13, "{ch:?}");
        }
    }
    assert!(p.norm_plus[0] < 1e-13);

    let gauss = FnSpinor(|x: Vec3| {
        let e = (-(x[0] - 0.4).powi(2) - x[1] * x[1] - x[2] * x[2]).exp();
        [c(e), Complex64::new(0.0, e * x[2])]
    });
    let mut previous = 0.0;
    for kmax in [1, 2, 4, 8] {
        let p = partial_wave_project(&gauss, &[1.2], ProjectionOptions::new(kmax)).unwrap();
        let captured = p.norm_plus[0].powi(2) + p.norm_minus[0].powi(2);
        assert!(captured <= p.sphere_norm[0].powi(2) * (1.0 + 1e-12));
        assert!(captured >= previous);
        previous = captured;
    }
    assert!((previous.sqrt() - sphere_norm(&sample_sphere(&gauss, 1.2, &SphereQuadrature::new(60)).values, &SphereQuadrature::new(60)).unwrap()).abs() < 1e-6);
}

fn gaussian_spinor() -> impl SpinorField {
    FnSpinor(|x: Vec3| [c((-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp()), c(0.0)])
}

#[test]
fn radial_factorization_converges_at_second_order() {
    let cases: Vec<(Box<dyn SpinorField>, Vec3)> = vec![
        (Box::new(gaussian_spinor()), [1.0, 0.5, -0.2]),
        (Box::new(LossYauSpinor::default()), scale3(2.0, unit([0.3, -0.6, 0.5]))),
    ];
    for (psi, x) in cases {
        let r1 = radial_factorization_residual(&*psi, x, 0.02, 3).unwrap();
        let r2 = radial_factorization_residual(&*psi, x, 0.01, 3).unwrap();
        let ratio = r1 / r2;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio} ({r1:.3e}, {r2:.3e})");
    }
    let constant = FnSpinor(|_| [c(1.0), c(0.5)]);
    assert!(radial_factorization_residual(&constant, [1.0, 1.0, 0.0], 0.01, 2).unwrap() < 1e-13);
    assert!(radial_factorization_residual(&constant, [0.05, 0.0, 0.0], 0.01, 2).is_err());
}

#[test]
fn sphere_norm_derivative_converges_at_second_order() {
    let quad = SphereQuadrature::new(24);
    let exp_decay = AnalyticSpinor {
        value: |x: Vec3| [c((-norm3(x)).exp()), c(0.0)],
        gradient: |x: Vec3| {
            let r = norm3(x);
            let e = -(-r).exp() / r;
            [0, 1, 2].map(|j| [c(e * x[j]), c(0.0)])
        },
    };
    let angular = FnSpinor(|x: Vec3| {
        let r = norm3(x);
        [c(x[2] / r * (1.0 + r * r).recip()), c(0.0)]
    });
    for (f, r) in [(&exp_decay as &dyn SpinorField, 1.3), (&angular as &dyn SpinorField, 0.9)] {
        let e1 = sphere_norm_derivative_check(f, r, 0.02, &quad).unwrap();
        let e2 = sphere_norm_derivative_check(f, r, 0.01, &quad).unwrap();
        assert!((3.5..=4.5).contains(&(e1 / e2)), "{e1:.3e} {e2:.3e}");
    }
    let zero = FnSpinor(|_| [c(0.0), c(0.0)]);
    assert_eq!(sphere_norm_derivative_check(&zero, 1.0, 0.01, &quad).unwrap(), 0.0);
}
