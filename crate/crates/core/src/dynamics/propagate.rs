use num_complex::Complex64;
use serde::Serialize;

use super::schedule::{ResolvedSchedule, Schedule};
use crate::spectral::{ground_state_vector, Deflation};
use crate::{Error, Instance, Result};

const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub tau: f64,
    pub mu: f64,
    pub inst_ground_fidelity: f64,
    pub overlap_t: f64,
    pub norm_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionResult {
    #[serde(skip)]
    pub final_state: Vec<Complex64>,
    /// `|⟨t|ψ(Γ)⟩|`.
    pub final_overlap_t: f64,
    /// `|⟨t|ψ(Γ)⟩|²`, the probability that a projective test for `|t⟩`
    /// succeeds.
    pub success_probability: f64,
    pub final_overlap_ground: f64,
    pub min_inst_fidelity: f64,
    /// Largest `|‖ψ‖ − 1|` seen along the trajectory.
    pub unitarity_defect: f64,
    /// One row per step boundary, `steps + 1` in total.
    #[serde(skip)]
    pub trajectory: Vec<TrajectoryPoint>,
}

/// `|⟨t|ψ⟩|`.
pub fn overlap_with_target(inst: &Instance, psi: &[Complex64]) -> f64 {
    psi.iter()
        .zip(inst.t_overlap())
        .map(|(p, t)| p * t)
        .sum::<Complex64>()
        .norm()
}

fn norm(psi: &[Complex64]) -> f64 {
    psi.iter().map(|p| p.norm_sqr()).sum::<f64>().sqrt()
}

fn ground_fidelity(inst: &Instance, mu: f64, psi: &[Complex64]) -> f64 {
    ground_state_vector(inst, mu)
        .iter()
        .zip(psi)
        .map(|(g, p)| p * g)
        .sum::<Complex64>()
        .norm()
}

/// `|s⟩ = |0⟩` as a complex state.
pub fn start_state(inst: &Instance) -> Vec<Complex64> {
    let mut psi = vec![Complex64::new(0.0, 0.0); inst.dim()];
    psi[0] = Complex64::new(1.0, 0.0);
    psi
}

fn check_initial(inst: &Instance, initial: &[Complex64]) -> Result<()> {
    if initial.len() != inst.dim() {
        return Err(Error::invalid(format!(
            "initial state has dimension {}, instance has {}",
            initial.len(),
            inst.dim()
        )));
    }
    let n = norm(initial);
    if !((n - 1.0).abs() <= NORMALIZATION_TOL) {
        return Err(Error::invalid(format!("initial state is not normalized: ‖ψ‖ = {n}")));
    }
    Ok(())
}

/// Integrates `i dψ/dτ = H(μ(τ))ψ` with one exact exponential of the
/// midpoint Hamiltonian per step.
pub fn propagate(inst: &Instance, s: &Schedule, initial: &[Complex64]) -> Result<EvolutionResult> {
    check_initial(inst, initial)?;
    let sched = s.resolve(inst)?;
    Ok(run(inst, &sched, s.steps, initial.to_vec(), true))
}

/// The final state only, without trajectory bookkeeping.
pub(crate) fn final_state(
    inst: &Instance,
    sched: &ResolvedSchedule,
    steps: usize,
    initial: Vec<Complex64>,
) -> Vec<Complex64> {
    run(inst, sched, steps, initial, false).final_state
}

fn run(
    inst: &Instance,
    sched: &ResolvedSchedule,
    steps: usize,
    mut psi: Vec<Complex64>,
    record: bool,
) -> EvolutionResult {
    let defl = Deflation::new(inst);
    let gamma = sched.total_time();
    let dt = gamma / steps as f64;
    let mut trajectory = Vec::with_capacity(if record { steps + 1 } else { 0 });
    let mut unitarity_defect = (norm(&psi) - 1.0).abs();
    let mut min_fid = f64::INFINITY;

    let mut point = |k: usize, psi: &[Complex64], defect: f64, trajectory: &mut Vec<TrajectoryPoint>| {
        let f = k as f64 / steps as f64;
        let mu = sched.mu_at_fraction(f);
        let fid = ground_fidelity(inst, mu, psi);
        min_fid = min_fid.min(fid);
        trajectory.push(TrajectoryPoint {
            tau: gamma * f,
            mu,
            inst_ground_fidelity: fid,
            overlap_t: overlap_with_target(inst, psi),
            norm_defect: defect,
        });
    };

    if record {
        point(0, &psi, unitarity_defect, &mut trajectory);
    }
    if dt > 0.0 {
        for k in 0..steps {
            let mu = sched.mu_at_fraction((k as f64 + 0.5) / steps as f64);
            defl.evolve(&mut psi, mu, dt);
            let defect = (norm(&psi) - 1.0).abs();
            unitarity_defect = unitarity_defect.max(defect);
            if record {
                point(k + 1, &psi, defect, &mut trajectory);
            }
        }
    } else if record {
        for k in 1..=steps {
            point(k, &psi, unitarity_defect, &mut trajectory);
        }
    }

    let final_overlap_t = overlap_with_target(inst, &psi);
    let final_overlap_ground = if record {
        trajectory.last().map_or(0.0, |p| p.inst_ground_fidelity)
    } else {
        0.0
    };
    EvolutionResult {
        final_overlap_t,
        success_probability: final_overlap_t * final_overlap_t,
        final_overlap_ground,
        min_inst_fidelity: if record { min_fid } else { 0.0 },
        unitarity_defect,
        trajectory,
        final_state: psi,
    }
}
