use rayon::prelude::*;

use super::config::{ExperimentConfig, ScheduleName, DEFAULT_GRID, DEFAULT_NS};
use super::fit::fit_power_law;
use super::table::{Cell, Report};
use crate::analytic::{
    ground_overlaps_analytic, mu_star, omega, profile_at, summarize, validity_check,
    DEFAULT_VALIDITY_THRESHOLD,
};
use crate::dynamics::{
    partial_plateau, propagate, required_time, run_partial_algorithm, start_state, Schedule,
    ScheduleKind, SearchOptions,
};
use crate::instance::{check_assumptions, make_grover, make_random, AssumptionThresholds};
use crate::spectral::{
    build_hmu, dense_eigensolver, exact_ground, lowest_levels, min_gap_scan, DEFAULT_REFINE_TOL,
};
use crate::{Error, Instance, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    ValidationFailed,
    CapExceeded,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ValidationFailed => 3,
            Status::CapExceeded => 4,
        }
    }
}

/// Exit code for a command that failed outright.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::CapExceeded { .. } => 4,
        _ => 2,
    }
}

#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub report: Report,
    pub status: Status,
}

impl From<Report> for CommandOutput {
    fn from(report: Report) -> Self {
        Self {
            report,
            status: Status::Ok,
        }
    }
}

fn instance_meta(r: &mut Report, inst: &Instance) {
    r.meta("n", inst.dim())
        .meta("alpha", inst.alpha())
        .meta("xi1", inst.xi1())
        .meta("upsilon1", inst.upsilon1())
        .meta("upsilon2", inst.upsilon2())
        .meta("time_reversed", inst.is_time_reversed());
}

fn uniform(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect()
}

/// Uniform grid of `--grid` points, or by default a coarse uniform grid
/// merged with a refined window of width `8c/ω` around `μ*`.
pub fn mu_grid(cfg: &ExperimentConfig, inst: &Instance) -> Vec<f64> {
    if let Some(n) = cfg.grid {
        return uniform(n, 0.0, 1.0);
    }
    let mut grid = uniform(DEFAULT_GRID, 0.0, 1.0);
    if let Ok(w) = omega(inst) {
        let half = 4.0 * cfg.c() / w;
        let ms = mu_star(inst);
        grid.extend(uniform(DEFAULT_GRID, (ms - half).max(0.0), (ms + half).min(1.0)));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

pub fn spectrum(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    let inst = cfg.load_instance()?;
    let n = inst.dim();
    let levels = cfg.levels.unwrap_or(if n <= 16 { n } else { 4 }).min(n);
    let grid = mu_grid(cfg, &inst);
    let c = cfg.c();

    let mut cols: Vec<String> = vec!["mu".into(), "mu_reported".into()];
    cols.extend((0..levels).map(|k| format!("E{k}")));
    for name in [
        "gap_exact",
        "gap_analytic",
        "eta",
        "overlap_s",
        "overlap_t",
        "overlap_s_analytic",
        "overlap_t_analytic",
    ] {
        cols.push(name.into());
    }
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&mu| {
            let mut row: Vec<Cell> = vec![mu.into(), inst.report_mu(mu).into()];
            let e = lowest_levels(&inst, mu, levels.max(2));
            row.extend(e.iter().take(levels).map(|&x| Cell::from(x)));
            let g = exact_ground(&inst, mu);
            let (ga, eta) = profile_at(&inst, mu).map_or((f64::NAN, f64::NAN), |p| (p.gap, p.eta));
            let (oa_s, oa_t) = ground_overlaps_analytic(&inst, mu, c)
                .map_or((f64::NAN, f64::NAN), |o| (o.overlap_s, o.overlap_t));
            row.extend([e[1] - e[0], ga, eta, g.overlap_s, g.overlap_t, oa_s, oa_t].map(Cell::from));
            row
        })
        .collect();

    let mut r = Report::new("spectrum");
    instance_meta(&mut r, &inst);
    r.meta("levels", levels).meta("grid_points", grid.len());
    r.columns = cols;
    r.rows = rows;
    Ok(r.into())
}

pub fn summary(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    let inst = cfg.load_instance()?;
    let c = cfg.c();
    let s = summarize(&inst, c)?;
    let mut r = Report::new("summary");
    instance_meta(&mut r, &inst);
    r.meta(
        "crossover_formula",
        if inst.is_time_reversed() {
            "Υ1/(1+Υ1)"
        } else {
            "1/(1+Υ1)"
        },
    );
    r.meta_struct("", &s);
    let exact = min_gap_scan(&inst, None, DEFAULT_REFINE_TOL)?;
    r.meta("exact_mu_min", exact.mu)
        .meta("exact_mu_min_reported", inst.report_mu(exact.mu))
        .meta("exact_g_min", exact.gap);
    r.meta_struct("assumptions", &check_assumptions(&inst, &AssumptionThresholds::default()));
    for (label, mu) in [("validity_mu_minus", s.mu_minus), ("validity_mu_star", s.mu_star), ("validity_mu_plus", s.mu_plus)] {
        let v = validity_check(&inst, mu, c, DEFAULT_VALIDITY_THRESHOLD)?;
        r.meta(&format!("{label}.ratio"), v.ratio)
            .meta(&format!("{label}.pass"), v.pass);
    }
    Ok(r.into())
}

/// Default `Γ` when `--gamma` is absent: `50/g_min²` for the full and local
/// sweeps and `20·2c/(ω·g_min²)` for the partial one, with the exact `g_min`.
pub fn default_gamma(inst: &Instance, kind: ScheduleKind) -> Result<f64> {
    let g = min_gap_scan(inst, None, DEFAULT_REFINE_TOL)?.gap;
    Ok(match kind {
        ScheduleKind::Partial { c } => 20.0 * 2.0 * c / (omega(inst)? * g * g),
        _ => 50.0 / (g * g),
    })
}

pub fn evolve(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    let inst = cfg.load_instance()?;
    let kind = cfg.schedule_kind();
    let gamma = match cfg.gamma {
        Some(g) => g,
        None => default_gamma(&inst, kind)?,
    };
    let steps = cfg.steps();
    let sched = Schedule::new(kind, gamma, steps)?;
    let res = propagate(&inst, &sched, &start_state(&inst))?;

    let mut r = Report::new("evolve");
    instance_meta(&mut r, &inst);
    r.meta(
        "schedule",
        match cfg.schedule.unwrap_or(ScheduleName::Full) {
            ScheduleName::Full => "full",
            ScheduleName::Partial => "partial",
            ScheduleName::Local => "local",
        },
    )
    .meta("gamma", gamma)
    .meta("steps", steps);
    r.meta_struct("result", &res);
    if let ScheduleKind::Partial { c } = kind {
        let trials = cfg.trials.unwrap_or(1000);
        let stats = run_partial_algorithm(&inst, c, gamma, steps, trials, cfg.seed())?;
        r.meta("seed", cfg.seed() as usize);
        r.meta_struct("trials", &stats);
    }
    r.columns(&["tau", "mu", "inst_ground_fidelity", "overlap_t", "norm_defect"]);
    for p in &res.trajectory {
        r.row(vec![
            p.tau.into(),
            p.mu.into(),
            p.inst_ground_fidelity.into(),
            p.overlap_t.into(),
            p.norm_defect.into(),
        ]);
    }
    Ok(r.into())
}

/// Required `Γ` on the Grover family for every size in `--ns`, and the
/// log–log slope against `α = 1/√N`. A partial schedule's target is taken
/// relative to its long-time plateau.
pub fn scaling(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    cfg.validate()?;
    let ns = cfg.ns.clone().unwrap_or_else(|| DEFAULT_NS.to_vec());
    if ns.len() < 3 {
        return Err(Error::config("ns", format!("need ≥ 3 points, got {}", ns.len())));
    }
    let kind = cfg.schedule_kind();
    let opts = SearchOptions {
        steps: cfg.steps(),
        ..SearchOptions::default()
    };
    let target = cfg.target();

    let results: Vec<(usize, Result<(f64, f64, f64, bool)>)> = ns
        .par_iter()
        .map(|&n| {
            let run = || -> Result<(f64, f64, f64, bool)> {
                let inst = make_grover(n)?;
                let goal = match kind {
                    ScheduleKind::Partial { c } => target * partial_plateau(&inst, c)?,
                    _ => target,
                };
                let t = required_time(&inst, kind, goal, &opts)?;
                Ok((goal, t.gamma, t.probability, t.non_monotone))
            };
            (n, run())
        })
        .collect();

    let mut r = Report::new("scaling");
    r.meta("target", target).meta("steps", opts.steps);
    r.columns(&["n", "alpha", "target_probability", "gamma_required", "probability", "non_monotone"]);
    let mut points = Vec::new();
    let mut status = Status::Ok;
    for (n, res) in results {
        let alpha = 1.0 / (n as f64).sqrt();
        match res {
            Ok((goal, gamma, p, nm)) => {
                points.push((alpha, gamma));
                r.row(vec![n.into(), alpha.into(), goal.into(), gamma.into(), p.into(), nm.into()]);
            }
            Err(e @ Error::CapExceeded { .. }) => {
                status = Status::CapExceeded;
                r.meta(&format!("error_n{n}"), e.to_string().as_str());
            }
            Err(e) => return Err(e),
        }
    }
    if let Ok(fit) = fit_power_law(&points) {
        r.meta("exponent", fit.exponent)
            .meta("intercept", fit.intercept)
            .meta("r_squared", fit.r_squared);
    }
    Ok(CommandOutput { report: r, status })
}

struct Check {
    name: &'static str,
    mu: f64,
    value: f64,
    tolerance: f64,
    asserted: bool,
}

impl Check {
    fn pass(&self) -> bool {
        self.value <= self.tolerance
    }
}

const DENSE_LIMIT: usize = 128;

pub fn validate(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    let inst = cfg.load_instance()?;
    let c = cfg.c();
    let n = inst.dim();
    let mut checks = Vec::new();

    if n <= DENSE_LIMIT {
        for mu in uniform(11, 0.0, 1.0) {
            let h = build_hmu(&inst, mu);
            let dense = dense_eigensolver(&h)?;
            let exact = exact_ground(&inst, mu);
            let scale = h.max_abs().max(1.0);
            let err = exact
                .energies
                .iter()
                .zip(&dense.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            checks.push(Check {
                name: "eigenvalues_vs_dense",
                mu,
                value: err,
                tolerance: 1e-10 * scale,
                asserted: true,
            });
            if !exact.tie && exact.gap > 1e-6 {
                let v = dense.vector(0);
                let ot: f64 = v.iter().zip(inst.t_overlap()).map(|(a, b)| a * b).sum();
                let err = (v[0].abs() - exact.overlap_s).abs().max((ot.abs() - exact.overlap_t).abs());
                checks.push(Check {
                    name: "ground_overlaps_vs_dense",
                    mu,
                    value: err,
                    tolerance: 1e-8,
                    asserted: true,
                });
            }
        }
    }

    let assumptions = check_assumptions(&inst, &AssumptionThresholds::default());
    let summary = summarize(&inst, c);
    if let Ok(s) = &summary {
        let alpha = inst.alpha();
        let tol = 5.0 * (1.0 + c * c) * alpha * alpha / inst.xi1();
        let asserted = assumptions.pass && assumptions.alpha_over_xi1 <= 0.05;
        for mu in uniform(11, s.mu_minus, s.mu_plus) {
            let p = profile_at(&inst, mu)?;
            let e = lowest_levels(&inst, mu, 2);
            checks.push(Check {
                name: "analytic_e_minus",
                mu,
                value: (p.e_minus - e[0]).abs(),
                tolerance: tol,
                asserted,
            });
            checks.push(Check {
                name: "analytic_e_plus",
                mu,
                value: (p.e_plus - e[1]).abs(),
                tolerance: tol,
                asserted,
            });
        }
    }

    let ensemble = cfg.ensemble.unwrap_or(1000);
    let alpha = inst.alpha().clamp(1e-6, 0.999);
    let violations = (0..ensemble as u64)
        .into_par_iter()
        .map(|seed| make_random(n, seed, inst.xi_max().max(1e-6), alpha))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .chain(std::iter::once(&inst))
        .filter(|i| i.upsilon1().powi(2) > i.upsilon2() * (1.0 + 1e-12))
        .count();
    checks.push(Check {
        name: "cauchy_schwarz_violations",
        mu: f64::NAN,
        value: violations as f64,
        tolerance: 0.0,
        asserted: true,
    });

    let pass = checks.iter().all(|c| !c.asserted || c.pass());
    let mut r = Report::new("validate");
    instance_meta(&mut r, &inst);
    r.meta("pass", pass)
        .meta("dense_checked", n <= DENSE_LIMIT)
        .meta("ensemble", ensemble);
    if let Err(e) = &summary {
        r.meta("analytic_skipped", e.to_string().as_str());
    }
    r.meta_struct("assumptions", &assumptions);
    r.columns(&["check", "mu", "value", "tolerance", "asserted", "pass"]);
    for ch in &checks {
        r.row(vec![
            ch.name.into(),
            ch.mu.into(),
            ch.value.into(),
            ch.tolerance.into(),
            ch.asserted.into(),
            ch.pass().into(),
        ]);
    }
    Ok(CommandOutput {
        report: r,
        status: if pass { Status::Ok } else { Status::ValidationFailed },
    })
}
