//! Acceptance criteria. Each test prints one `[PASS]` / `[FAIL]` line; run with
//! `cargo test -p normalens --test acceptance -- --nocapture --test-threads 1`
//! to see them all in order.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use normalens::conformal::{default_pairs, default_radii};
use normalens::{
    error_sup, ginibre_closed_form, kernel_grid, sample_trial, spacing_check, spacing_oracle,
    verify_g_composition, verify_phi_identity, verify_u_identity, Complex64, ExactKernel, GridSpec, Params64,
    PolarSample, IDENTITY_TOLERANCE,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 7;

fn params(alpha: f64, n: usize) -> Params64 {
    Params64::new(alpha, n).unwrap()
}

fn report(id: &str, name: &str, passed: bool, elapsed: Duration, budget_s: f64, detail: String) {
    let within = elapsed.as_secs_f64() < budget_s;
    let tag = if passed && within { "PASS" } else { "FAIL" };
    println!(
        "[{tag}] {id} {name}: {detail} ({:.2}s, budget {budget_s}s)",
        elapsed.as_secs_f64()
    );
    assert!(passed, "criterion {id} failed: {detail}");
    assert!(within, "criterion {id} exceeded its {budget_s}s budget");
}

fn disk_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>())
}

/// Agreement is measured against sqrt(K(z,z) K(w,w)): off-diagonal values
/// come out of cancellations of terms up to that size, which bounds the
/// attainable accuracy of any double-precision summation.
#[test]
fn c1_ginibre_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut worst_env, mut worst_point) = (0.0f64, 0.0f64);
    for &n in &[1usize, 10, 100, 1000] {
        let k = ExactKernel::new(params(2.0, n));
        for _ in 0..400 {
            let z = disk_point(&mut rng, 1.0);
            let w = disk_point(&mut rng, 1.0);
            let got = k.eval(z, w).unwrap();
            let want = ginibre_closed_form(n, z, w).unwrap();
            let env =
                (ginibre_closed_form(n, z, z).unwrap().re * ginibre_closed_form(n, w, w).unwrap().re).sqrt();
            let diff = (got - want).norm();
            worst_env = worst_env.max(diff / env);
            worst_point = worst_point.max(diff / want.norm().max(f64::MIN_POSITIVE));
        }
    }
    report(
        "#1",
        "Ginibre oracle",
        worst_env <= 1e-12,
        start.elapsed(),
        10.0,
        format!("max |Δ|/sqrt(K(z,z)K(w,w)) = {worst_env:.2e} (pointwise relative, informational: {worst_point:.2e})"),
    );
}

#[test]
fn c2_density_limit() {
    let start = Instant::now();
    let z = Complex64::new(0.3, 0.4);
    let rel = |n| {
        let k = ExactKernel::new(params(4.0, n)).eval(z, z).unwrap().re;
        (k - 1.0 / PI).abs() * PI
    };
    let (e50, e200) = (rel(50), rel(200));
    report(
        "#2",
        "density limit at z=0.3+0.4i, alpha=4",
        e200 < e50 && e200 < 0.05,
        start.elapsed(),
        5.0,
        format!("relative error n=50: {e50:.4e}, n=200: {e200:.4e}"),
    );
}

fn fig1_grid(alpha: f64, n: usize) -> normalens::PeakSummary<f64> {
    let g = kernel_grid(
        &params(alpha, n),
        Complex64::new(0.3, 0.4),
        GridSpec::square(0.9, 181),
    )
    .unwrap();
    g.peak()
}

#[test]
fn c3a_peak_at_fixed_point() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for &alpha in &[4.0, 8.0] {
        for &n in &[50usize, 200] {
            let s = fig1_grid(alpha, n);
            ok &= s.peak_at_nearest;
            let drift = (s.peak_w - Complex64::new(0.3, 0.4)).norm();
            detail.push(format!(
                "a={alpha} n={n}: argmax {:.2}{:+.2}i drift {drift:.3}",
                s.peak_w.re, s.peak_w.im
            ));
        }
    }
    report(
        "#3a",
        "grid argmax at node nearest z",
        ok,
        start.elapsed(),
        60.0,
        detail.join("; "),
    );
}

#[test]
fn c3b_peak_sharpening() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for &alpha in &[4.0, 8.0] {
        let w50 = fig1_grid(alpha, 50).fwhm;
        let w200 = fig1_grid(alpha, 200).fwhm;
        ok &= w200 < w50;
        detail.push(format!("a={alpha}: fwhm n=50 {w50:.4}, n=200 {w200:.4}"));
    }
    report(
        "#3b",
        "grid FWHM decreases with n",
        ok,
        start.elapsed(),
        60.0,
        detail.join("; "),
    );
}

#[test]
fn c4_error_decay() {
    let start = Instant::now();
    let sample = PolarSample::default();
    let mut ok = true;
    let mut detail = Vec::new();
    for &alpha in &[6.0, 8.0, 11.0] {
        let r: Vec<f64> = [25usize, 50, 100, 200]
            .iter()
            .map(|&n| error_sup(&params(alpha, n), &sample).unwrap().r_sup)
            .collect();
        ok &= r.windows(2).all(|w| w[1] < w[0]);
        detail.push(format!(
            "a={alpha}: {}",
            r.iter()
                .map(|x| format!("{x:.4}"))
                .collect::<Vec<_>>()
                .join(" > ")
        ));
    }
    report(
        "#4",
        "R_n strictly decreasing",
        ok,
        start.elapsed(),
        120.0,
        detail.join("; "),
    );
}

#[test]
fn c5_conformal_identities() {
    let start = Instant::now();
    let mut worst = [0.0f64; 3];
    for &alpha in &[2.0, 4.0, 6.5, 8.0] {
        for &n in &[10usize, 50, 200] {
            let p = params(alpha, n);
            let pairs = default_pairs(&p);
            worst[0] = worst[0].max(verify_phi_identity(&p, &pairs).unwrap().max_rel_residual);
            worst[1] = worst[1].max(verify_u_identity(&p, &pairs).unwrap().max_rel_residual);
            worst[2] = worst[2].max(
                verify_g_composition(&p, &default_radii())
                    .unwrap()
                    .max_rel_residual,
            );
        }
    }
    report(
        "#5",
        "conformal identities",
        worst.iter().all(|&r| r <= IDENTITY_TOLERANCE),
        start.elapsed(),
        5.0,
        format!(
            "max relative residual phi {:.1e}, u {:.1e}, g {:.1e}",
            worst[0], worst[1], worst[2]
        ),
    );
}

#[test]
fn c6a_unit_spacing_ginibre() {
    let start = Instant::now();
    let p = params(2.0, 500);
    let r = spacing_check(&p, 1.0, 200, SEED).unwrap();
    let oracle = spacing_oracle(&p, 1.0).unwrap();
    report(
        "#6a",
        "unit spacing alpha=2 s=1",
        r.within(PI, 3.0) && r.within(oracle, 3.0),
        start.elapsed(),
        30.0,
        format!(
            "mean {:.4} ± {:.4}, target π = {PI:.4}, gamma-sum oracle {oracle:.4}",
            r.mean_count, r.std_error
        ),
    );
}

#[test]
fn c6b_unit_spacing_alpha4_area() {
    let start = Instant::now();
    let r = spacing_check(&params(4.0, 500), 2.0, 200, SEED).unwrap();
    let target = 4.0 * PI;
    report(
        "#6b",
        "unit spacing alpha=4 s=2 vs 4π",
        r.within(target, 3.0),
        start.elapsed(),
        30.0,
        format!(
            "mean {:.4} ± {:.4}, target {target:.4}, {:.2} standard errors away",
            r.mean_count,
            r.std_error,
            (r.mean_count - target) / r.std_error
        ),
    );
}

#[test]
fn c6c_unit_spacing_alpha4_oracle() {
    let start = Instant::now();
    let p = params(4.0, 500);
    let r = spacing_check(&p, 2.0, 200, SEED).unwrap();
    let oracle = spacing_oracle(&p, 2.0).unwrap();
    report(
        "#6c",
        "unit spacing alpha=4 s=2 vs gamma-sum oracle",
        r.within(oracle, 3.0),
        start.elapsed(),
        30.0,
        format!(
            "mean {:.4} ± {:.4}, oracle {oracle:.4}",
            r.mean_count, r.std_error
        ),
    );
}

#[test]
fn c7_structural_invariants() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut herm, mut diag_im, mut cs) = (0.0f64, 0.0f64, 0.0f64);
    let mut diag_nonneg = true;
    for &alpha in &[2.0, 3.0, 4.0, 8.0] {
        for &n in &[10usize, 100] {
            let p = params(alpha, n);
            let k = ExactKernel::new(p);
            for _ in 0..1000 {
                let z = disk_point(&mut rng, p.support_radius());
                let w = disk_point(&mut rng, p.support_radius());
                let kzw = k.eval(z, w).unwrap();
                let kwz = k.eval(w, z).unwrap();
                let kzz = k.eval(z, z).unwrap();
                let kww = k.eval(w, w).unwrap();
                herm = herm.max((kzw - kwz.conj()).norm() / kzw.norm().max(f64::MIN_POSITIVE));
                diag_nonneg &= kzz.re >= 0.0 && kww.re >= 0.0;
                diag_im = diag_im
                    .max(kzz.im.abs() / kzz.norm())
                    .max(kww.im.abs() / kww.norm());
                cs = cs.max(kzw.norm_sqr() / (kzz.re * kww.re));
            }
        }
    }
    report(
        "#7",
        "Hermitian, diagonal positivity, Cauchy-Schwarz",
        herm <= 1e-12 && diag_nonneg && diag_im < 1e-12 && cs <= 1.0 + 1e-10,
        start.elapsed(),
        10.0,
        format!(
            "hermitian rel {herm:.1e}, diagonal im/|K| {diag_im:.1e}, max |K(z,w)|²/(K(z,z)K(w,w)) {cs:.12}"
        ),
    );
}

#[test]
fn c8a_radial_histogram() {
    let start = Instant::now();
    let alpha = 4.0;
    let p = params(alpha, 500);
    let pooled: Vec<f64> = (0..100).flat_map(|t| sample_trial(&p, SEED, t).moduli).collect();
    let total = pooled.len() as f64;
    // Limit mass below r is (alpha/2) r^alpha, the integral of 2πr ρ(r).
    let cdf = |r: f64| alpha / 2.0 * r.powf(alpha);
    let inv = |m: f64| (2.0 * m / alpha).powf(1.0 / alpha);
    let big_r = p.support_radius();
    let (lo, hi) = (cdf(0.25 * big_r), cdf(0.8 * big_r));
    let bins = 4;
    let mut worst = 0.0f64;
    let mut detail = Vec::new();
    for b in 0..bins {
        let m0 = lo + (hi - lo) * b as f64 / bins as f64;
        let m1 = lo + (hi - lo) * (b + 1) as f64 / bins as f64;
        let (r0, r1) = (inv(m0), inv(m1));
        let observed = pooled.iter().filter(|&&r| r > r0 && r <= r1).count() as f64 / total;
        let rel = (observed - (m1 - m0)).abs() / (m1 - m0);
        worst = worst.max(rel);
        detail.push(format!("[{r0:.3},{r1:.3}] {rel:.4}"));
    }
    report(
        "#8a",
        "pooled radial histogram vs 2πrρ(r) in the bulk",
        worst < 0.05,
        start.elapsed(),
        30.0,
        format!("relative deviation per equal-mass bin: {}", detail.join(", ")),
    );
}

#[test]
fn c8b_max_modulus() {
    let start = Instant::now();
    let p = params(2.0, 500);
    let trials = 100;
    let mean_max = (0..trials)
        .map(|t| sample_trial(&p, SEED, t).moduli.into_iter().fold(0.0, f64::max))
        .sum::<f64>()
        / trials as f64;
    let rel = (mean_max - p.support_radius()).abs() / p.support_radius();
    report(
        "#8b",
        "mean max modulus within 2% of support radius (alpha=2)",
        rel < 0.02,
        start.elapsed(),
        30.0,
        format!("mean max {mean_max:.4}, relative gap {rel:.4}"),
    );
}
