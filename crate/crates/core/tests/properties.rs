//! Structural invariants checked on generated inputs.

use std::f64::consts::{PI, TAU};

use normalens::{
    cross_term_magnitude, fraction_in_disk, in_delta_region, kernel_asymptotic, map_phi, map_phi_inverse,
    rescaled_kernel, sample_moduli, sine_kernel, universal_kernel, Complex64, ExactKernel, Params64,
};
use proptest::prelude::*;

fn polar(r: f64, t: f64) -> Complex64 {
    Complex64::from_polar(r, t)
}

/// Cholesky of a Hermitian matrix shifted by `jitter`; succeeds iff the
/// smallest eigenvalue exceeds `-jitter`.
fn is_psd(g: &[Vec<Complex64>], jitter: f64) -> bool {
    let n = g.len();
    let mut l = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[i][j];
            if i == j {
                s += jitter;
            }
            for (a, b) in l[i][..j].iter().zip(&l[j][..j]) {
                s -= a * b.conj();
            }
            if i == j {
                if s.re <= 0.0 {
                    return false;
                }
                l[i][i] = Complex64::new(s.re.sqrt(), 0.0);
            } else {
                l[i][j] = s / l[j][j].re;
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_kernel_is_a_reproducing_kernel(
        alpha in 2.0f64..12.0,
        n in 1usize..150,
        fz in 0.0f64..1.0, tz in -PI..PI,
        fw in 0.0f64..1.0, tw in -PI..PI,
    ) {
        let p = Params64::new(alpha, n).unwrap();
        let k = ExactKernel::new(p);
        let r = p.support_radius();
        let z = polar(r * fz, tz);
        let w = polar(r * fw, tw);
        let kzw = k.eval(z, w).unwrap();
        let kwz = k.eval(w, z).unwrap();
        prop_assert!((kzw - kwz.conj()).norm() <= 1e-12 * kzw.norm().max(1e-300));
        let kzz = k.eval(z, z).unwrap();
        let kww = k.eval(w, w).unwrap();
        prop_assert!(kzz.re >= 0.0 && kzz.im.abs() <= 1e-12 * kzz.norm());
        prop_assert!(kzw.norm_sqr() <= kzz.re * kww.re * (1.0 + 1e-10));
    }

    #[test]
    fn universal_gram_matrix_is_psd(pts in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 8)) {
        let pts: Vec<Complex64> = pts.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let g: Vec<Vec<Complex64>> = pts.iter().map(|&z| pts.iter().map(|&w| universal_kernel(z, w)).collect()).collect();
        prop_assert!(is_psd(&g, 1e-10));
    }

    #[test]
    fn closed_form_kernels_are_hermitian(
        alpha in 2.0f64..15.0,
        a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, d in -2.0f64..2.0,
    ) {
        let p = Params64::new(alpha, 10).unwrap();
        let z = Complex64::new(a, b);
        let w = Complex64::new(c, d);
        prop_assert!((universal_kernel(z, w) - universal_kernel(w, z).conj()).norm() <= 1e-15);
        prop_assert!((rescaled_kernel(&p, z, w) - rescaled_kernel(&p, w, z).conj()).norm() <= 1e-15);
    }

    #[test]
    fn phi_round_trip(alpha in 2.0f64..12.0, n in 1usize..500, r in 0.01f64..1.0, frac in -0.999f64..0.999) {
        let p = Params64::new(alpha, n).unwrap();
        let w = polar(r, frac * TAU / alpha);
        let back = map_phi_inverse(&p, map_phi(&p, w).unwrap()).unwrap();
        prop_assert!((back - w).norm() <= 1e-13 * w.norm());
    }

    #[test]
    fn sine_kernel_even_and_bounded(x in -50.0f64..50.0, y in -50.0f64..50.0) {
        prop_assert_eq!(sine_kernel(x, y), sine_kernel(y, x));
        prop_assert!(sine_kernel(x, y).abs() <= 1.0);
    }

    #[test]
    fn delta_region_symmetric_and_reflexive(
        alpha in 2.0f64..12.0,
        fz in 0.01f64..1.0, tz in -PI..PI,
        fw in 0.01f64..1.0, tw in -PI..PI,
    ) {
        let p = Params64::new(alpha, 1).unwrap();
        let r = p.support_radius();
        let z = polar(r * fz, tz);
        let w = polar(r * fw, tw);
        prop_assert_eq!(in_delta_region(&p, z, w).unwrap(), in_delta_region(&p, w, z).unwrap());
        prop_assert!(in_delta_region(&p, z, z).unwrap());
    }

    #[test]
    fn cross_term_period(alpha in 4.0f64..12.0, r in 0.1f64..0.9, s in 0.1f64..0.9, frac in 0.0f64..1.0) {
        // Both angle gaps must stay in (-π, π] so the principal branch applies.
        let p = Params64::new(alpha, 40).unwrap();
        let period = 2.0 * TAU / alpha;
        let gap = -PI + 1e-9 + frac * (TAU - period - 2e-9);
        let z = polar(r, 0.0);
        let a = cross_term_magnitude(&p, z, polar(s, -gap)).unwrap();
        let b = cross_term_magnitude(&p, z, polar(s, -(gap + period))).unwrap();
        prop_assert!((a - b).abs() <= 1e-13 * a.abs().max(1.0));
    }

    #[test]
    fn asymptotic_decays_off_diagonal(alpha in 2.0f64..12.0, f in 0.1f64..0.95, dr in 0.02f64..0.3, dt in -0.3f64..0.3) {
        let p50 = Params64::new(alpha, 50).unwrap();
        let p200 = Params64::new(alpha, 200).unwrap();
        let r = p50.support_radius() * f;
        let z = polar(r, 0.2);
        let w = polar(r * (1.0 - dr), 0.2 + dt / alpha);
        prop_assert!(kernel_asymptotic(&p200, z, w).unwrap().norm() < kernel_asymptotic(&p50, z, w).unwrap().norm());
    }

    #[test]
    fn fraction_is_monotone(seed in any::<u64>(), r1 in 0.0f64..1.5, r2 in 0.0f64..1.5) {
        let s = sample_moduli(&Params64::new(3.0, 60).unwrap(), seed);
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        prop_assert!(fraction_in_disk(&s, lo).unwrap() <= fraction_in_disk(&s, hi).unwrap());
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), alpha in 2.0f64..10.0) {
        let p = Params64::new(alpha, 25).unwrap();
        prop_assert_eq!(sample_moduli(&p, seed), sample_moduli(&p, seed));
    }
}
