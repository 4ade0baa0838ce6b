//! Acceptance gate. Each test checks one criterion at its stated tolerance
//! and prints a single `criterion N: PASS|FAIL` line straight to stderr so
//! the verdict shows up even for passing tests.

use std::io::Write;
use std::time::{Duration, Instant};

use projgap::analytic::{ground_overlaps_analytic, summarize};
use projgap::dynamics::{
    partial_plateau, propagate, required_time, start_state, success_probability, Schedule,
    ScheduleKind, SearchOptions,
};
use projgap::harness::fit_power_law;
use projgap::instance::{make_grover, make_random};
use projgap::spectral::{
    build_hmu, dense_eigensolver, exact_ground, min_gap_scan, DEFAULT_REFINE_TOL,
};

fn verdict(n: u32, pass: bool, detail: &str) {
    let line = format!(
        "criterion {n}: {} | {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "criterion {n} failed: {detail}");
}

#[test]
fn criterion_1_secular_matches_dense_oracle() {
    let start = Instant::now();
    let mut max_e = 0.0f64;
    let mut max_o = 0.0f64;
    for seed in 0..200u64 {
        let n = 2 + (seed % 15) as usize;
        let xi_max = 0.5 + 0.5 * (seed % 7) as f64;
        let alpha = 0.01 + 0.03 * (seed % 10) as f64;
        let inst = make_random(n, seed, xi_max, alpha).unwrap();
        for k in 0..=10 {
            let mu = k as f64 / 10.0;
            let dense = dense_eigensolver(&build_hmu(&inst, mu)).unwrap();
            let exact = exact_ground(&inst, mu);
            for (a, b) in exact.energies.iter().zip(&dense.values) {
                max_e = max_e.max((a - b).abs());
            }
            let v = dense.vector(0);
            let ot: f64 = v.iter().zip(inst.t_overlap()).map(|(a, b)| a * b).sum();
            max_o = max_o
                .max((v[0].abs() - exact.overlap_s).abs())
                .max((ot.abs() - exact.overlap_t).abs());
        }
    }
    let elapsed = start.elapsed();
    verdict(
        1,
        max_e <= 1e-10 && max_o <= 1e-8 && elapsed < Duration::from_secs(60),
        &format!("max |ΔE| = {max_e:.2e} (tol 1e-10), max |Δoverlap| = {max_o:.2e} (tol 1e-8), {elapsed:.2?}"),
    );
}

#[test]
fn criterion_2_grover_minimum_gap() {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [64usize, 256, 1024] {
        let g = make_grover(n).unwrap();
        let s = summarize(&g, 2.0).unwrap();
        let m = min_gap_scan(&g, None, DEFAULT_REFINE_TOL).unwrap();
        let target = 1.0 / (n as f64).sqrt();
        let gap_err = (m.gap - target).abs() / target;
        let dist = (m.mu - s.mu_min).abs();
        let tol = 5.0 / (s.omega * s.omega);
        ok &= gap_err <= 0.01 && dist <= tol;
        parts.push(format!("N={n}: rel gap err {gap_err:.1e}, |μ−μ_min| {dist:.2e} ≤ {tol:.2e}"));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(60);
    verdict(2, ok, &format!("{}; {elapsed:.2?}", parts.join("; ")));
}

#[test]
fn criterion_3_crossover_point() {
    let g = make_grover(64).unwrap();
    let s = summarize(&g, 2.0).unwrap();
    let m = min_gap_scan(&g, None, DEFAULT_REFINE_TOL).unwrap();
    let dist = (m.mu - s.mu_star).abs();
    let tol = 1.0 / (s.omega * s.omega);
    verdict(
        3,
        (s.mu_star - 64.0 / 127.0).abs() <= 1e-15 && dist <= tol,
        &format!("μ* = {:.15}, |argmin − μ*| = {dist:.4e} ≤ 1/ω² = {tol:.4e}", s.mu_star),
    );
}

#[test]
fn criterion_4_overlap_formulas() {
    let g = make_grover(256).unwrap();
    let c = 4.0;
    let s = summarize(&g, c).unwrap();
    let (mut es, mut et) = (0.0f64, 0.0f64);
    for i in 0..50 {
        let mu = s.mu_minus + (s.mu_plus - s.mu_minus) * i as f64 / 49.0;
        let a = ground_overlaps_analytic(&g, mu, c).unwrap();
        let e = exact_ground(&g, mu);
        es = es.max((a.overlap_s - e.overlap_s).abs());
        et = et.max((a.overlap_t - e.overlap_t).abs());
    }
    verdict(
        4,
        es <= 1e-2 && et <= 1e-2,
        &format!("max |Δ overlap_s| = {es:.4}, max |Δ overlap_t| = {et:.4} (tol 1e-2)"),
    );
}

#[test]
fn criterion_5_rapid_crossover() {
    let g = make_grover(1024).unwrap();
    let s = summarize(&g, 4.0).unwrap();
    let before = exact_ground(&g, s.mu_minus).overlap_s;
    let after = exact_ground(&g, s.mu_plus).overlap_s;
    verdict(
        5,
        before >= 0.95 && after <= 0.25,
        &format!("overlap_s(μ⁻) = {before:.4} ≥ 0.95, overlap_s(μ⁺) = {after:.4} ≤ 0.25"),
    );
}

fn grover_alpha(n: usize) -> f64 {
    1.0 / (n as f64).sqrt()
}

#[test]
fn criterion_6_scaling_separation() {
    let start = Instant::now();
    let ns = [16usize, 64, 256];
    let opts = SearchOptions::default();
    let c = 3.0;

    let full: Vec<(f64, f64)> = ns
        .iter()
        .map(|&n| {
            let g = make_grover(n).unwrap();
            let t = required_time(&g, ScheduleKind::FullLinear, 0.9, &opts).unwrap();
            (grover_alpha(n), t.gamma)
        })
        .collect();
    let partial: Vec<(f64, f64)> = ns
        .iter()
        .map(|&n| {
            let g = make_grover(n).unwrap();
            let target = 0.9 * partial_plateau(&g, c).unwrap();
            let t = required_time(&g, ScheduleKind::Partial { c }, target, &opts).unwrap();
            (grover_alpha(n), t.gamma)
        })
        .collect();
    let ff = fit_power_law(&full).unwrap();
    let fp = fit_power_law(&partial).unwrap();
    let elapsed = start.elapsed();
    verdict(
        6,
        (ff.exponent + 2.0).abs() <= 0.3
            && (fp.exponent + 1.0).abs() <= 0.3
            && elapsed < Duration::from_secs(600),
        &format!(
            "full exponent {:.3} (r² {:.4}), partial exponent {:.3} (r² {:.4}, c = {c}), {elapsed:.2?}",
            ff.exponent, ff.r_squared, fp.exponent, fp.r_squared
        ),
    );
}

#[test]
fn criterion_7_partial_algorithm_success() {
    let g = make_grover(64).unwrap();
    let c = 4.0;
    let s = summarize(&g, c).unwrap();
    let gamma = 20.0 * 2.0 * c / (s.omega * s.g_min * s.g_min);
    let p = success_probability(&g, ScheduleKind::Partial { c }, gamma, 2000).unwrap();
    verdict(
        7,
        p >= 0.8 * s.p_ad,
        &format!("Γ = {gamma:.1}, success {p:.4} ≥ 0.8·P_ad = {:.4}", 0.8 * s.p_ad),
    );
}

#[test]
fn criterion_8_final_overlap_plateau() {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [256usize, 1024, 4096] {
        let g = make_grover(n).unwrap();
        let s = summarize(&g, 4.0).unwrap();
        let ot = exact_ground(&g, s.mu_plus).overlap_t;
        let rel = (ot - s.final_overlap).abs() / s.final_overlap;
        ok &= rel <= 0.02;
        parts.push(format!("N={n}: |⟨t|E0(μ⁺)⟩| = {ot:.4}, rel err {rel:.2e}"));
    }
    verdict(8, ok, &parts.join("; "));
}

#[test]
fn criterion_9_property_suites() {
    let violations = (0..1000u64)
        .map(|seed| make_random(2 + (seed % 30) as usize, seed, 0.2 + (seed % 9) as f64, 0.05).unwrap())
        .filter(|i| i.upsilon1().powi(2) > i.upsilon2())
        .count();

    let g = make_grover(64).unwrap();
    let s = summarize(&g, 4.0).unwrap();
    let gmin = min_gap_scan(&g, None, DEFAULT_REFINE_TOL).unwrap().gap;
    let psi0 = start_state(&g);
    let runs = [
        (ScheduleKind::FullLinear, 50.0 / (gmin * gmin)),
        (ScheduleKind::LocalAdaptive, 50.0 / (gmin * gmin)),
        (ScheduleKind::Partial { c: 4.0 }, 20.0 * 8.0 / (s.omega * s.g_min * s.g_min)),
    ];
    let defect = runs
        .iter()
        .map(|&(k, gamma)| {
            propagate(&g, &Schedule::new(k, gamma, 2000).unwrap(), &psi0)
                .unwrap()
                .unitarity_defect
        })
        .fold(0.0, f64::max);

    let sudden = propagate(&g, &Schedule::new(ScheduleKind::FullLinear, 1e-12, 2000).unwrap(), &psi0).unwrap();
    let sudden_err = sudden
        .final_state
        .iter()
        .zip(&psi0)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);

    let slow = propagate(
        &g,
        &Schedule::new(ScheduleKind::FullLinear, 1e3 / (gmin * gmin), 20000).unwrap(),
        &psi0,
    )
    .unwrap();
    let adiabatic_err = 1.0 - slow.final_overlap_ground;

    verdict(
        9,
        violations == 0 && defect <= 1e-8 && sudden_err <= 1e-10 && adiabatic_err <= 1e-3,
        &format!(
            "Cauchy–Schwarz violations {violations}/1000, unitarity defect {defect:.1e}, sudden-limit error {sudden_err:.1e}, adiabatic-limit 1−fidelity {adiabatic_err:.1e}"
        ),
    );
}
