//! Two-level effective model around the crossover point.
//!
//! Keeping terms to first order in the energy, the two lowest roots of the
//! secular equation solve a quadratic whose coefficients are
//!
//! ```text
//! A_μ = Υ_1/(1−μ) − 1/μ,    B_μ = √Υ_2/(1−μ)
//! ```
//!
//! and the eigenstates rotate through the mixing angle `η_μ` with
//! `cot 2η_μ = A_μ/(2αB_μ)`. Everything in this module is a closed-form
//! expression of `α`, `Υ_1`, `Υ_2` and `ξ_1`.

use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::spectral::hs_minus_ht_norm;
use crate::{Error, Instance, Result};

pub const DEFAULT_C: f64 = 4.0;
pub const DEFAULT_VALIDITY_THRESHOLD: f64 = 0.1;

/// Effective two-level quantities at one `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticProfile {
    pub mu: f64,
    pub a: f64,
    pub b: f64,
    /// Mixing angle in `[0, π/2]`; `sin η` is the ground state's overlap
    /// with `|s⟩`.
    pub eta: f64,
    pub e_minus: f64,
    pub e_plus: f64,
    pub gap: f64,
    /// `1 − μ*/μ`.
    pub epsilon: f64,
}

fn require_alpha(inst: &Instance) -> Result<f64> {
    let alpha = inst.alpha();
    if alpha == 0.0 {
        return Err(Error::DegenerateInstance(
            "α = 0: the start state is orthogonal to the target".into(),
        ));
    }
    Ok(alpha)
}

pub fn mu_star(inst: &Instance) -> f64 {
    1.0 / (1.0 + inst.upsilon1())
}

/// Slope `ω` of `cot 2η` at the crossover: `(1+Υ_1)²/(2α√Υ_2)`.
pub fn omega(inst: &Instance) -> Result<f64> {
    let alpha = require_alpha(inst)?;
    Ok((1.0 + inst.upsilon1()).powi(2) / (2.0 * alpha * inst.upsilon2().sqrt()))
}

pub fn profile_at(inst: &Instance, mu: f64) -> Result<AnalyticProfile> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::OutOfDomain { mu });
    }
    let alpha = require_alpha(inst)?;
    let u1 = inst.upsilon1();
    let u2 = inst.upsilon2();
    let a = u1 / (1.0 - mu) - 1.0 / mu;
    let b = u2.sqrt() / (1.0 - mu);
    // cot 2η = A/(2αB), with 2η ∈ [0, π]
    let eta = 0.5 * (2.0 * alpha * b).atan2(a);
    let scale = alpha / b;
    let e_plus = scale * eta.tan();
    let e_minus = -scale / eta.tan();
    let gap = 2.0 * scale / (2.0 * eta).sin();
    Ok(AnalyticProfile {
        mu,
        a,
        b,
        eta,
        e_minus,
        e_plus,
        gap,
        epsilon: 1.0 - mu_star(inst) / mu,
    })
}

/// Closed-form summary of the crossover and the partial algorithm for a
/// given interval half-width multiplier `c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub mu_star: f64,
    /// `μ*` in the parameterization of the original problem; differs from
    /// `mu_star` only for time-reversed instances.
    pub mu_star_reported: f64,
    pub omega: f64,
    pub mu_min: f64,
    pub g_min: f64,
    pub mu_minus: f64,
    pub mu_plus: f64,
    pub c: f64,
    pub final_overlap: f64,
    pub p_ad: f64,
    pub gamma_prime_bound: f64,
    pub hs_ht_norm: f64,
    pub adiabatic_bound: f64,
    /// `min(ω/4, ξ_1/(4α))`: the margin by which `c` should stay below
    /// both `ω` and `ξ_1/α`.
    pub c_recommended_max: f64,
    pub c_recommended: bool,
}

/// Builds the summary. `c` must exceed 1 and keep `μ_min < μ⁺` and
/// `[μ⁻, μ⁺] ⊂ (0, 1)`; whether it also respects the recommended margin is
/// reported in `c_recommended` (see [`check_c_strict`]).
pub fn summarize(inst: &Instance, c: f64) -> Result<InstanceSummary> {
    let alpha = require_alpha(inst)?;
    if !(c > 1.0) || !c.is_finite() {
        return Err(Error::invalid(format!("c must exceed 1, got {c}")));
    }
    let u1 = inst.upsilon1();
    let u2 = inst.upsilon2();
    let mu_star = mu_star(inst);
    let omega = omega(inst)?;
    let shift = 1.0 / (omega * omega * (1.0 - mu_star));
    let mu_min = mu_star + shift;
    let g_min = 2.0 * alpha * (1.0 - mu_star) / u2.sqrt()
        * (1.0 - 1.0 / (2.0 * (omega * (1.0 - mu_star)).powi(2)));
    let mu_minus = mu_star - c / omega;
    let mu_plus = mu_star + c / omega;
    if !(mu_minus > 0.0) {
        return Err(Error::invalid(format!(
            "c = {c} too large: μ⁻ = μ* − c/ω = {mu_minus} is not positive"
        )));
    }
    if !(mu_plus < 1.0) {
        return Err(Error::invalid(format!(
            "c = {c} too large: μ⁺ = μ* + c/ω = {mu_plus} is not below 1"
        )));
    }
    if !(mu_plus > mu_min) {
        return Err(Error::invalid(format!(
            "c = {c} too small: μ⁺ = {mu_plus} does not reach μ_min = {mu_min}"
        )));
    }
    let eta_minus = profile_at(inst, mu_minus)?.eta;
    let p_ad = eta_minus.sin().powi(2) * u1 * u1 / u2;
    let gamma_prime_bound =
        (c / alpha) * u2.powf(2.5) / u1.powi(4) * (1.0 + 1.0 / (4.0 * c * c));
    let hs_ht_norm = hs_minus_ht_norm(inst);
    let c_recommended_max = (omega / 4.0).min(inst.xi1() / (4.0 * alpha));
    Ok(InstanceSummary {
        mu_star,
        mu_star_reported: inst.report_mu(mu_star),
        omega,
        mu_min,
        g_min,
        mu_minus,
        mu_plus,
        c,
        final_overlap: u1 / u2.sqrt(),
        p_ad,
        gamma_prime_bound,
        hs_ht_norm,
        adiabatic_bound: hs_ht_norm / (g_min * g_min),
        c_recommended_max,
        c_recommended: c < c_recommended_max,
    })
}

/// Rejects `c` unless `1 < c < min(ω/4, ξ_1/(4α))`, naming the bound that
/// failed.
pub fn check_c_strict(inst: &Instance, c: f64) -> Result<()> {
    let alpha = require_alpha(inst)?;
    let omega = omega(inst)?;
    if !(c > 1.0) {
        return Err(Error::invalid(format!("c must exceed 1, got {c}")));
    }
    if !(c < omega / 4.0) {
        return Err(Error::invalid(format!("c = {c} is not below ω/4 = {}", omega / 4.0)));
    }
    let limit = inst.xi1() / (4.0 * alpha);
    if !(c < limit) {
        return Err(Error::invalid(format!("c = {c} is not below ξ_1/(4α) = {limit}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticOverlaps {
    pub overlap_s: f64,
    pub overlap_t: f64,
    /// `|μ − μ*| ≤ 4c/ω`; outside this window the two-level model is not
    /// expected to hold.
    pub in_window: bool,
}

/// Ground-state overlaps of the two-level model: `sin η` with `|s⟩` and
/// `(1/μ − 1)·cos η/√Υ_2` with `|t⟩`.
pub fn ground_overlaps_analytic(inst: &Instance, mu: f64, c: f64) -> Result<AnalyticOverlaps> {
    let p = profile_at(inst, mu)?;
    let omega = omega(inst)?;
    Ok(AnalyticOverlaps {
        overlap_s: p.eta.sin(),
        overlap_t: (1.0 / mu - 1.0) * p.eta.cos() / inst.upsilon2().sqrt(),
        in_window: (mu - mu_star(inst)).abs() <= 4.0 * c / omega,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityReport {
    pub mu: f64,
    /// `α·csc 2η_μ`, half the analytic gap in units of `1/B`.
    pub lhs: f64,
    /// `ξ_1·√Υ_2/2`.
    pub rhs: f64,
    pub ratio: f64,
    pub threshold: f64,
    pub pass: bool,
    /// `α·√(1+c²)`, the value `lhs` cannot exceed inside `[μ⁻, μ⁺]`.
    pub interval_bound: f64,
}

/// Tests `α·csc 2η_μ ≪ ξ_1√Υ_2/2` as `ratio ≤ threshold`.
pub fn validity_check(inst: &Instance, mu: f64, c: f64, threshold: f64) -> Result<ValidityReport> {
    let p = profile_at(inst, mu)?;
    let alpha = inst.alpha();
    let lhs = alpha / (2.0 * p.eta).sin();
    let rhs = inst.xi1() * inst.upsilon2().sqrt() / 2.0;
    let ratio = lhs / rhs;
    Ok(ValidityReport {
        mu,
        lhs,
        rhs,
        ratio,
        threshold,
        pass: ratio <= threshold,
        interval_bound: alpha * (1.0 + c * c).sqrt(),
    })
}

/// `η` at the crossover, `π/4` by construction.
pub const ETA_AT_CROSSOVER: f64 = FRAC_PI_4;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{check_assumptions, make_grover, make_random, AssumptionThresholds};
    use crate::spectral::{exact_ground, lowest_levels};
    use proptest::prelude::*;

    fn two_level(alpha: f64) -> Instance {
        Instance::new(vec![0.0, 1.0], vec![alpha, (1.0 - alpha * alpha).sqrt()]).unwrap()
    }

    #[test]
    fn crossover_profile() {
        let g = make_grover(64).unwrap();
        let ms = mu_star(&g);
        assert!((ms - 64.0 / 127.0).abs() < 1e-15);
        let p = profile_at(&g, ms).unwrap();
        assert!(p.a.abs() < 1e-12);
        assert!((p.eta - ETA_AT_CROSSOVER).abs() < 1e-12);
        let e = g.alpha() * (1.0 - ms) / g.upsilon2().sqrt();
        assert!((p.e_plus - e).abs() < 1e-12 && (p.e_minus + e).abs() < 1e-12);
        assert!((p.gap - 0.125).abs() < 0.01 * 0.125);
        assert!(p.epsilon.abs() < 1e-12);
    }

    #[test]
    fn two_level_energies_against_quadratic() {
        let alpha = 0.01;
        let inst = two_level(alpha);
        let p = profile_at(&inst, 0.5).unwrap();
        let exact = lowest_levels(&inst, 0.5, 2);
        for (a, e) in [p.e_minus, p.e_plus].iter().zip(&exact) {
            assert!((a - e).abs() <= alpha * alpha / inst.xi1(), "{a} vs {e}");
        }
    }

    #[test]
    fn domain_errors() {
        let g = make_grover(16).unwrap();
        assert!(matches!(profile_at(&g, 0.0), Err(Error::OutOfDomain { .. })));
        assert!(matches!(profile_at(&g, 1.0), Err(Error::OutOfDomain { .. })));
        let orth = Instance::new(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert!(matches!(profile_at(&orth, 0.5), Err(Error::DegenerateInstance(_))));
    }

    #[test]
    fn eta_limits() {
        let g = make_grover(256).unwrap();
        assert!(profile_at(&g, 0.05).unwrap().eta > 1.5);
        assert!(profile_at(&g, 0.95).unwrap().eta < 0.07);
    }

    #[test]
    fn grover_summary() {
        let g = make_grover(64).unwrap();
        let s = summarize(&g, 4.0).unwrap();
        assert!((s.mu_star - 64.0 / 127.0).abs() < 1e-15);
        assert!((s.omega - 16.0).abs() < 0.01 * 16.0);
        assert!((s.mu_plus - s.mu_minus - 0.5).abs() < 0.01 * 0.5);
        assert!(0.0 < s.mu_minus && s.mu_minus < s.mu_star);
        assert!(s.mu_star < s.mu_min && s.mu_min < s.mu_plus && s.mu_plus < 1.0);
        assert!(!s.c_recommended);

        for &n in &[64usize, 256, 1024] {
            let g = make_grover(n).unwrap();
            let a2 = 1.0 / n as f64;
            let s = summarize(&g, 4.0).unwrap();
            let expect = 4.0 * (n as f64).sqrt() * (1.0 + 1.0 / 64.0) / (1.0 - a2).powf(1.5);
            assert!((s.gamma_prime_bound - expect).abs() < 1e-9 * expect);
            assert!((s.final_overlap - (1.0 - a2).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn summary_rejects_bad_c() {
        let g = make_grover(64).unwrap();
        let msg = |c| summarize(&g, c).unwrap_err().to_string();
        assert!(msg(0.5).contains("exceed 1"));
        assert!(msg(9.0).contains("μ⁻"));
        let e = check_c_strict(&g, 4.0).unwrap_err().to_string();
        assert!(e.contains("ω/4"), "{e}");
        assert!(check_c_strict(&g, 3.0).unwrap_err().to_string().contains("ξ_1/(4α)"));
        let r = make_random(8, 1, 1.0, 1e-4).unwrap();
        assert!(check_c_strict(&r, 4.0).is_ok());
    }

    #[test]
    fn reversed_summary_reports_flipped_crossover() {
        let inst = crate::instance::reverse_instance(
            vec![0.0, 1.0, 1.0, 1.0],
            vec![0.05, 0.5, 0.5, (1.0f64 - 0.0025 - 0.5).sqrt()],
        )
        .unwrap();
        let s = summarize(&inst, 2.0).unwrap();
        let u1 = inst.upsilon1();
        assert!((s.mu_star_reported - u1 / (1.0 + u1)).abs() < 1e-15);
    }

    #[test]
    fn adiabatic_bound_uses_exact_norm() {
        let g = make_grover(64).unwrap();
        let s = summarize(&g, 3.0).unwrap();
        let dense = crate::spectral::dense_eigensolver(&crate::spectral::build_hs_minus_ht(&g)).unwrap();
        let top = dense.values[63];
        assert!((s.hs_ht_norm - top).abs() < 1e-12);
        assert!((s.adiabatic_bound - top / (s.g_min * s.g_min)).abs() < 1e-9 * s.adiabatic_bound);
    }

    #[test]
    fn analytic_overlaps() {
        let g = make_grover(256).unwrap();
        let s = summarize(&g, 4.0).unwrap();
        let at_star = ground_overlaps_analytic(&g, s.mu_star, 4.0).unwrap();
        assert!((at_star.overlap_s - 0.5f64.sqrt()).abs() < 1e-12);
        // (1/μ − 1) drifts from Υ_1 by O(c/ω) across the interval
        let g = make_grover(1 << 20).unwrap();
        let s = summarize(&g, 4.0).unwrap();
        let at_plus = ground_overlaps_analytic(&g, s.mu_plus, 4.0).unwrap();
        assert!((at_plus.overlap_t - s.final_overlap).abs() < 0.03);
        assert!(at_plus.in_window);
        assert!(!ground_overlaps_analytic(&g, 0.05, 4.0).unwrap().in_window);
    }

    #[test]
    fn validity_examples() {
        for &(n, pass) in &[(400usize, false), (402, true), (1024, true), (64, false)] {
            let g = make_grover(n).unwrap();
            let ms = mu_star(&g);
            let v = validity_check(&g, ms, 4.0, DEFAULT_VALIDITY_THRESHOLD).unwrap();
            let expect = 2.0 * g.alpha() / (g.xi1() * g.upsilon2().sqrt());
            assert!((v.ratio - expect).abs() < 1e-12);
            assert_eq!(v.pass, pass, "N = {n}, ratio {}", v.ratio);
        }
        // cot 2η = ±c at μ± only to first order in c/ω
        let g = make_grover(1 << 16).unwrap();
        let s = summarize(&g, 4.0).unwrap();
        let slack = 1.0 + 3.0 * s.c / s.omega;
        for i in 0..=20 {
            let mu = s.mu_minus + (s.mu_plus - s.mu_minus) * i as f64 / 20.0;
            let v = validity_check(&g, mu, 4.0, 0.1).unwrap();
            assert!(v.lhs <= v.interval_bound * slack);
        }
        assert!(!validity_check(&g, 0.9, 4.0, 0.1).unwrap().pass);
    }

    #[test]
    fn eta_decreases_through_crossover() {
        let g = make_grover(1024).unwrap();
        let s = summarize(&g, 4.0).unwrap();
        let etas: Vec<f64> = (0..=200)
            .map(|i| s.mu_minus + (s.mu_plus - s.mu_minus) * i as f64 / 200.0)
            .map(|mu| profile_at(&g, mu).unwrap().eta)
            .collect();
        assert!(etas.windows(2).all(|w| w[1] < w[0]));
    }

    fn random_inst() -> impl Strategy<Value = Instance> {
        (2usize..12, any::<u64>(), 0.5f64..3.0, 1e-4f64..0.3)
            .prop_map(|(n, seed, xm, a)| make_random(n, seed, xm, a).unwrap())
    }

    proptest! {
        #[test]
        fn profile_identities(inst in random_inst(), u in 0.001f64..0.999) {
            let p = profile_at(&inst, u).unwrap();
            prop_assert!(p.e_minus <= 0.0 && p.e_plus >= 0.0);
            prop_assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&p.eta));
            let prod = -(inst.alpha() / p.b).powi(2);
            prop_assert!((p.e_plus * p.e_minus - prod).abs() <= 1e-10 * prod.abs().max(1e-300));
            prop_assert!((p.gap - (p.e_plus - p.e_minus)).abs() <= 1e-12 * p.gap.max(1.0));
        }

        #[test]
        fn mu_min_offset(inst in random_inst(), c in 1.01f64..3.0) {
            if let Ok(s) = summarize(&inst, c) {
                prop_assert!(s.mu_min > s.mu_star);
                let d = 1.0 / (s.omega * s.omega * (1.0 - s.mu_star));
                prop_assert_eq!(s.mu_min - s.mu_star, (s.mu_star + d) - s.mu_star);
            }
        }

        #[test]
        fn rescaled_crossover(inst in random_inst(), f in 0.1f64..10.0) {
            let r = inst.rescale(f).unwrap();
            let expect = 1.0 / (1.0 + inst.upsilon1() / f);
            prop_assert!((mu_star(&r) - expect).abs() <= 1e-14);
        }

        #[test]
        fn g_min_matches_grid_minimum(n in 2usize..10, seed in any::<u64>(), a in 1e-6f64..1e-4) {
            let inst = make_random(n, seed, 1.0, a).unwrap();
            let s = summarize(&inst, 2.0).unwrap();
            prop_assume!(s.omega >= 100.0);
            let w = 4.0 / s.omega;
            let grid = (0..=4000).map(|i| s.mu_star - w + 2.0 * w * i as f64 / 4000.0);
            let gmin = grid.map(|m| profile_at(&inst, m).unwrap().gap).fold(f64::INFINITY, f64::min);
            prop_assert!(s.g_min <= gmin * (1.0 + 1e-9));
            prop_assert!((s.g_min - gmin).abs() <= 1e-6 * gmin);
        }

        #[test]
        fn energies_track_exact(n in 2usize..10, seed in any::<u64>(), a in 1e-4f64..0.02) {
            let inst = make_random(n, seed, 1.0, a).unwrap();
            let rep = check_assumptions(&inst, &AssumptionThresholds::default());
            prop_assume!(rep.pass && rep.alpha_over_xi1 <= 0.05);
            let c = 2.0;
            let s = summarize(&inst, c).unwrap();
            let bound = 5.0 * (1.0 + c * c) * a * a / inst.xi1();
            for i in 0..=20 {
                let mu = s.mu_minus + (s.mu_plus - s.mu_minus) * i as f64 / 20.0;
                let p = profile_at(&inst, mu).unwrap();
                let e = lowest_levels(&inst, mu, 2);
                prop_assert!((p.e_minus - e[0]).abs() <= bound, "μ={} {} vs {}", mu, p.e_minus, e[0]);
                prop_assert!((p.e_plus - e[1]).abs() <= bound);
            }
        }
    }

    #[test]
    fn overlaps_match_exact_inside_interval() {
        // away from the interval edges the two-level overlaps agree closely
        let g = make_grover(4096).unwrap();
        let s = summarize(&g, 1.5).unwrap();
        for i in 0..=10 {
            let mu = s.mu_minus + (s.mu_plus - s.mu_minus) * i as f64 / 10.0;
            let a = ground_overlaps_analytic(&g, mu, 1.5).unwrap();
            let e = exact_ground(&g, mu);
            assert!((a.overlap_s - e.overlap_s).abs() < 2e-2);
        }
    }
}
