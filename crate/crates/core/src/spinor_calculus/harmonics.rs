//! Complex spherical harmonics (Condon–Shortley phase) and Clebsch–Gordan
//! coefficients. Angular momenta are passed doubled so half-integers stay exact.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::linalg::Vec3;

fn ln_factorials() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0.0; 171];
        for k in 1..t.len() {
            t[k] = t[k - 1] + (k as f64).ln();
        }
        t
    })
}

fn ln_fact(n: i32) -> Option<f64> {
    if n < 0 {
        None
    } else {
        ln_factorials().get(n as usize).copied()
    }
}

/// `⟨j₁ m₁; j₂ m₂ | J M⟩` by the Racah formula; all arguments doubled.
pub fn clebsch_gordan(two_j1: i32, two_m1: i32, two_j2: i32, two_m2: i32, two_j: i32, two_m: i32) -> f64 {
    if two_m1 + two_m2 != two_m {
        return 0.0;
    }
    if two_m1.abs() > two_j1 || two_m2.abs() > two_j2 || two_m.abs() > two_j {
        return 0.0;
    }
    if two_j > two_j1 + two_j2 || two_j < (two_j1 - two_j2).abs() {
        return 0.0;
    }
    if (two_j1 + two_m1) % 2 != 0 || (two_j2 + two_m2) % 2 != 0 || (two_j + two_m) % 2 != 0 {
        return 0.0;
    }
    if (two_j1 + two_j2 + two_j) % 2 != 0 {
        return 0.0;
    }
    let h = |x: i32| x / 2;
    let a = h(two_j1 + two_j2 - two_j);
    let b = h(two_j1 - two_j2 + two_j);
    let c = h(-two_j1 + two_j2 + two_j);
    let d = h(two_j1 + two_j2 + two_j) + 1;
    let lf = |n| ln_fact(n).expect("factorial argument in range");
    let ln_pref = 0.5
        * (((two_j + 1) as f64).ln() + lf(a) + lf(b) + lf(c) - lf(d)
            + lf(h(two_j1 + two_m1))
            + lf(h(two_j1 - two_m1))
            + lf(h(two_j2 + two_m2))
            + lf(h(two_j2 - two_m2))
            + lf(h(two_j + two_m))
            + lf(h(two_j - two_m)));
    let mut sum = 0.0;
    for k in 0..=a.max(0) + h(two_j1 + two_j2 + two_j) {
        let args = [
            k,
            a - k,
            h(two_j1 - two_m1) - k,
            h(two_j2 + two_m2) - k,
            h(two_j - two_j2 + two_m1) + k,
            h(two_j - two_j1 - two_m2) + k,
        ];
        if args.iter().any(|&x| x < 0) {
            continue;
        }
        let ln_den: f64 = args.iter().map(|&x| lf(x)).sum();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (ln_pref - ln_den).exp();
    }
    sum
}

/// `Y_l^m(ω)` for a unit vector ω, orthonormal on S², Condon–Shortley phase.
pub fn spherical_harmonic(l: i32, m: i32, omega: Vec3) -> Complex64 {
    if l < 0 || m.abs() > l {
        return Complex64::new(0.0, 0.0);
    }
    let ma = m.abs();
    let ct = omega[2].clamp(-1.0, 1.0);
    let rho = (omega[0] * omega[0] + omega[1] * omega[1]).sqrt();
    let st = rho;
    // normalized associated Legendre by upward recurrence in l
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for k in 1..=ma {
        let kf = k as f64;
        pmm *= -((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * st;
    }
    let p = if l == ma {
        pmm
    } else {
        let mut p_prev = pmm;
        let mut p_cur = (2.0 * ma as f64 + 3.0).sqrt() * ct * pmm;
        for ll in (ma + 2)..=l {
            let lf = ll as f64;
            let mf = ma as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            let next = a * (ct * p_cur - b * p_prev);
            p_prev = p_cur;
            p_cur = next;
        }
        p_cur
    };
    let phase = if rho > 0.0 {
        Complex64::new(omega[0] / rho, omega[1] / rho).powi(ma)
    } else {
        Complex64::new(1.0, 0.0)
    };
    let y = phase * p;
    if m >= 0 {
        y
    } else if ma % 2 == 0 {
        y.conj()
    } else {
        -y.conj()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::SphereQuadrature;

    #[test]
    fn low_order_closed_forms() {
        let w = [0.36, 0.48, 0.8];
        let (x, y, z) = (w[0], w[1], w[2]);
        let y00 = spherical_harmonic(0, 0, w);
        assert!((y00.re - (1.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
        let y10 = spherical_harmonic(1, 0, w);
        assert!((y10.re - (3.0 / (4.0 * PI)).sqrt() * z).abs() < 1e-15);
        let y11 = spherical_harmonic(1, 1, w);
        let expect = -(3.0 / (8.0 * PI)).sqrt() * Complex64::new(x, y);
        assert!((y11 - expect).norm() < 1e-15);
        let y2m2 = spherical_harmonic(2, -2, w);
        let expect = 0.25 * (15.0 / (2.0 * PI)).sqrt() * Complex64::new(x, -y).powi(2);
        assert!((y2m2 - expect).norm() < 1e-14);
    }

    #[test]
    fn orthonormal_under_exact_quadrature() {
        let q = SphereQuadrature::new(13);
        for l1 in 0..=6 {
            for m1 in -l1..=l1 {
                for l2 in 0..=6 {
                    for m2 in -l2..=l2 {
                        let s: Complex64 = q
                            .nodes()
                            .iter()
                            .zip(q.weights())
                            .map(|(&w, &wt)| wt * spherical_harmonic(l1, m1, w).conj() * spherical_harmonic(l2, m2, w))
                            .sum();
                        let expect = if l1 == l2 && m1 == m2 { 1.0 } else { 0.0 };
                        assert!((s - expect).norm() < 1e-12, "({l1},{m1}) ({l2},{m2}) -> {s}");
                    }
                }
            }
        }
    }

    #[test]
    fn clebsch_gordan_spin_half_closed_forms() {
        // j = l ± 1/2 coupling of l with spin 1/2
        for l in 0..5 {
            for two_m in (-(2 * l + 1)..=(2 * l + 1)).step_by(2) {
                let m = two_m as f64 / 2.0;
                let lf = l as f64;
                let up = clebsch_gordan(2 * l, two_m - 1, 1, 1, 2 * l + 1, two_m);
                let down = clebsch_gordan(2 * l, two_m + 1, 1, -1, 2 * l + 1, two_m);
                let e_up = ((lf + m + 0.5) / (2.0 * lf + 1.0)).sqrt();
                let e_down = ((lf - m + 0.5) / (2.0 * lf + 1.0)).sqrt();
                assert!((up - e_up).abs() < 1e-13, "l={l} m={m}");
                assert!((down - e_down).abs() < 1e-13, "l={l} m={m}");
                if l > 0 && two_m.abs() < 2 * l {
                    let up = clebsch_gordan(2 * l, two_m - 1, 1, 1, 2 * l - 1, two_m);
                    let down = clebsch_gordan(2 * l, two_m + 1, 1, -1, 2 * l - 1, two_m);
                    assert!((up + e_down).abs() < 1e-13);
                    assert!((down - e_up).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn clebsch_gordan_selection_rules() {
        assert_eq!(clebsch_gordan(2, 2, 1, 1, 1, 1), 0.0);
        assert_eq!(clebsch_gordan(2, 0, 1, 1, 7, 1), 0.0);
        // ⟨1 0; 1 0 | 0 0⟩ = -1/√3
        assert!((clebsch_gordan(2, 0, 2, 0, 0, 0) + (1.0 / 3.0_f64).sqrt()).abs() < 1e-14);
    }
}
