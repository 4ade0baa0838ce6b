use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::propagate::{final_state, overlap_with_target, start_state};
use super::schedule::{Schedule, ScheduleKind};
use crate::analytic::summarize;
use crate::spectral::Deflation;
use crate::{Error, Instance, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialStats {
    pub trials: usize,
    pub successes: usize,
    pub estimated_p: f64,
    /// Binomial standard error of `estimated_p`.
    pub std_error: f64,
    /// `|⟨t|ψ(Γ)⟩|²` of the simulated state.
    pub deterministic_p: f64,
    pub p_ad: f64,
}

/// `|⟨t|ψ(Γ)⟩|²` after evolving `|s⟩` under `kind` for time `gamma`.
pub fn success_probability(inst: &Instance, kind: ScheduleKind, gamma: f64, steps: usize) -> Result<f64> {
    let sched = Schedule::new(kind, gamma, steps)?.resolve(inst)?;
    let psi = final_state(inst, &sched, steps, start_state(inst));
    Ok(overlap_with_target(inst, &psi).powi(2))
}

/// Prepares `|s⟩`, switches suddenly to `H(μ⁻)`, sweeps linearly to
/// `H(μ⁺)` over `gamma`, and tests for `|t⟩` in each of `trials`
/// independent repetitions. Trial `i` draws from a generator seeded with
/// `seed + i`.
pub fn run_partial_algorithm(
    inst: &Instance,
    c: f64,
    gamma: f64,
    steps: usize,
    trials: usize,
    seed: u64,
) -> Result<TrialStats> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let summary = summarize(inst, c)?;
    let p = success_probability(inst, ScheduleKind::Partial { c }, gamma, steps)?;
    let successes = (0..trials)
        .into_par_iter()
        .filter(|&i| ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64)).gen::<f64>() < p)
        .count();
    let estimated_p = successes as f64 / trials as f64;
    Ok(TrialStats {
        trials,
        successes,
        estimated_p,
        std_error: (estimated_p * (1.0 - estimated_p) / trials as f64).sqrt(),
        deterministic_p: p,
        p_ad: summary.p_ad,
    })
}

/// Long-time average of the partial algorithm's success probability:
/// every eigenstate populated by the sudden switch follows its own level
/// from `μ⁻` to `μ⁺`, and interference between levels averages out, so the
/// plateau is `Σ_k |⟨E_k(μ⁻)|s⟩|²·|⟨t|E_k(μ⁺)⟩|²`.
pub fn partial_plateau(inst: &Instance, c: f64) -> Result<f64> {
    let s = summarize(inst, c)?;
    let defl = Deflation::new(inst);
    let g0 = defl
        .ground_group()
        .ok_or_else(|| Error::DegenerateInstance("α = 0".into()))?;
    let before = defl.reduced_eigen(s.mu_minus);
    let after = defl.reduced_eigen(s.mu_plus);
    let k = defl.coupled_dim();
    let plateau = (0..k)
        .map(|i| {
            let on_s = before.vectors[g0 * k + i];
            let on_t: f64 = (0..k).map(|j| defl.z()[j] * after.vectors[j * k + i]).sum();
            (on_s * on_t).powi(2)
        })
        .sum();
    Ok(plateau)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchOptions {
    pub steps: usize,
    /// Relative width at which the bisection stops.
    pub rel_tol: f64,
    pub gamma_min: f64,
    pub gamma_cap: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            steps: 2000,
            rel_tol: 0.05,
            gamma_min: 1.0,
            gamma_cap: 1e6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RequiredTime {
    pub gamma: f64,
    pub probability: f64,
    /// Some probe at a longer time did worse than one at a shorter time.
    pub non_monotone: bool,
    pub evaluations: usize,
}

/// Smallest `Γ` whose success probability reaches `target`: doubling from
/// `gamma_min` until the target is met, then bisection on the last
/// bracket. Returns the upper end of the final bracket.
pub fn required_time(
    inst: &Instance,
    kind: ScheduleKind,
    target: f64,
    opts: &SearchOptions,
) -> Result<RequiredTime> {
    if !(target < 1.0) {
        return Err(Error::invalid(format!("target probability must be below 1, got {target}")));
    }
    if !(opts.gamma_min > 0.0 && opts.gamma_cap >= opts.gamma_min) {
        return Err(Error::invalid("need 0 < gamma_min ≤ gamma_cap"));
    }
    if !(opts.rel_tol > 0.0 && opts.rel_tol < 1.0) {
        return Err(Error::invalid("rel_tol must lie in (0, 1)"));
    }
    let mut probes: Vec<(f64, f64)> = Vec::new();
    let eval = |g: f64, probes: &mut Vec<(f64, f64)>| -> Result<f64> {
        let p = success_probability(inst, kind, g, opts.steps)?;
        probes.push((g, p));
        Ok(p)
    };

    let mut hi = opts.gamma_min;
    let mut p_hi = eval(hi, &mut probes)?;
    let mut lo = 0.0;
    while p_hi < target {
        if hi >= opts.gamma_cap {
            let (best_gamma, best_probability) = probes
                .iter()
                .copied()
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("at least one probe");
            return Err(Error::CapExceeded {
                cap: opts.gamma_cap,
                best_gamma,
                best_probability,
            });
        }
        lo = hi;
        hi = (2.0 * hi).min(opts.gamma_cap);
        p_hi = eval(hi, &mut probes)?;
    }
    if lo > 0.0 {
        while (hi - lo) > opts.rel_tol * hi {
            let mid = 0.5 * (lo + hi);
            let p = eval(mid, &mut probes)?;
            if p >= target {
                hi = mid;
                p_hi = p;
            } else {
                lo = mid;
            }
        }
    }
    let mut sorted = probes.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = f64::NEG_INFINITY;
    let mut non_monotone = false;
    for &(_, p) in &sorted {
        if p < best - 1e-12 {
            non_monotone = true;
        }
        best = best.max(p);
    }
    Ok(RequiredTime {
        gamma: hi,
        probability: p_hi,
        non_monotone,
        evaluations: probes.len(),
    })
}
