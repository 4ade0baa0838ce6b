//! Interpolation schedules `μ(τ)` on `τ ∈ [0, Γ]`.

use serde::{Deserialize, Serialize};

use crate::analytic::summarize;
use crate::spectral::{gap_deflated, Deflation};
use crate::{Error, Instance, Result};

pub const MIN_STEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScheduleKind {
    /// `μ = τ/Γ`.
    FullLinear,
    /// Sudden switch to `μ⁻`, then linear in `τ` up to `μ⁺`.
    Partial { c: f64 },
    /// `dμ/dτ ∝ g(μ)²` with the exact gap, running from 0 to 1.
    LocalAdaptive,
    /// Constant `μ`.
    Fixed { mu: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Schedule {
    pub kind: ScheduleKind,
    pub total_time: f64,
    pub steps: usize,
}

impl Schedule {
    pub fn new(kind: ScheduleKind, total_time: f64, steps: usize) -> Result<Self> {
        if !(total_time >= 0.0) || !total_time.is_finite() {
            return Err(Error::invalid(format!(
                "total time must be finite and nonnegative, got {total_time}"
            )));
        }
        if steps < MIN_STEPS {
            return Err(Error::invalid(format!("steps must be at least {MIN_STEPS}, got {steps}")));
        }
        if let ScheduleKind::Fixed { mu } = kind {
            if !(0.0..=1.0).contains(&mu) {
                return Err(Error::invalid(format!("fixed μ must lie in [0, 1], got {mu}")));
            }
        }
        Ok(Self {
            kind,
            total_time,
            steps,
        })
    }

    /// Precomputes whatever `μ(τ)` needs for this instance.
    pub fn resolve(&self, inst: &Instance) -> Result<ResolvedSchedule> {
        let shape = match self.kind {
            ScheduleKind::FullLinear => Shape::Linear { from: 0.0, to: 1.0 },
            ScheduleKind::Partial { c } => {
                let s = summarize(inst, c)?;
                Shape::Linear {
                    from: s.mu_minus,
                    to: s.mu_plus,
                }
            }
            ScheduleKind::LocalAdaptive => Shape::Local(LocalTable::new(inst)?),
            ScheduleKind::Fixed { mu } => Shape::Fixed(mu),
        };
        Ok(ResolvedSchedule {
            total_time: self.total_time,
            shape,
        })
    }
}

#[derive(Debug, Clone)]
enum Shape {
    Linear { from: f64, to: f64 },
    Local(LocalTable),
    Fixed(f64),
}

/// A schedule bound to one instance.
#[derive(Debug, Clone)]
pub struct ResolvedSchedule {
    total_time: f64,
    shape: Shape,
}

impl ResolvedSchedule {
    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    /// `μ` at the fraction `f = τ/Γ ∈ [0, 1]`.
    pub fn mu_at_fraction(&self, f: f64) -> f64 {
        match &self.shape {
            Shape::Linear { from, to } => from + (to - from) * f,
            Shape::Local(t) => t.invert(f),
            Shape::Fixed(mu) => *mu,
        }
    }

    pub fn mu_at(&self, tau: f64) -> Result<f64> {
        if !(0.0..=self.total_time).contains(&tau) {
            return Err(Error::invalid(format!(
                "τ = {tau} outside [0, Γ = {}]",
                self.total_time
            )));
        }
        let f = if self.total_time > 0.0 {
            tau / self.total_time
        } else {
            0.0
        };
        Ok(self.mu_at_fraction(f))
    }
}

pub fn schedule_mu(s: &Schedule, inst: &Instance, tau: f64) -> Result<f64> {
    s.resolve(inst)?.mu_at(tau)
}

const LOCAL_PANELS: usize = 512;
const QUAD_TOL: f64 = 1e-10;
const MAX_DEPTH: u32 = 40;

/// Cumulative `F(μ) = ∫_0^μ dm/g(m)²` on panel boundaries, normalized so
/// `F(1) = 1`.
#[derive(Debug, Clone)]
struct LocalTable {
    defl: Deflation,
    inst: Instance,
    edges: Vec<f64>,
    cumulative: Vec<f64>,
    total: f64,
}

impl LocalTable {
    fn new(inst: &Instance) -> Result<Self> {
        if inst.alpha() == 0.0 {
            return Err(Error::DegenerateInstance(
                "α = 0 closes the gap; no local schedule exists".into(),
            ));
        }
        let defl = Deflation::new(inst);
        let mut table = Self {
            defl,
            inst: inst.clone(),
            edges: (0..=LOCAL_PANELS).map(|i| i as f64 / LOCAL_PANELS as f64).collect(),
            cumulative: vec![0.0; LOCAL_PANELS + 1],
            total: 1.0,
        };
        let mut acc = 0.0;
        for i in 0..LOCAL_PANELS {
            acc += table.integrate(table.edges[i], table.edges[i + 1]);
            table.cumulative[i + 1] = acc;
        }
        if !(acc.is_finite() && acc > 0.0) {
            return Err(Error::DegenerateInstance(format!("∫dμ/g² = {acc}")));
        }
        table.total = acc;
        Ok(table)
    }

    fn integrand(&self, mu: f64) -> f64 {
        let g = gap_deflated(&self.defl, &self.inst, mu);
        1.0 / (g * g)
    }

    fn integrate(&self, a: f64, b: f64) -> f64 {
        let fa = self.integrand(a);
        let fb = self.integrand(b);
        let m = 0.5 * (a + b);
        let fm = self.integrand(m);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        self.simpson(a, b, fa, fm, fb, whole, QUAD_TOL * whole.abs().max(1e-300), MAX_DEPTH)
    }

    #[allow(clippy::too_many_arguments)]
    fn simpson(&self, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.integrand(lm);
        let frm = self.integrand(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        self.simpson(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + self.simpson(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }

    /// Solves `F(μ) = f` by safeguarded Newton inside the bracketing panel.
    fn invert(&self, f: f64) -> f64 {
        if f <= 0.0 {
            return 0.0;
        }
        if f >= 1.0 {
            return 1.0;
        }
        let target = f * self.total;
        let i = self.cumulative.partition_point(|&c| c <= target).clamp(1, LOCAL_PANELS) - 1;
        let (mut lo, mut hi) = (self.edges[i], self.edges[i + 1]);
        let base = self.cumulative[i];
        let mut mu = lo + (hi - lo) * (target - base) / (self.cumulative[i + 1] - base);
        for _ in 0..60 {
            let r = base + self.integrate(self.edges[i], mu) - target;
            if r.abs() <= QUAD_TOL * self.total {
                break;
            }
            if r > 0.0 {
                hi = mu;
            } else {
                lo = mu;
            }
            let next = mu - r / self.integrand(mu);
            mu = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        mu
    }
}
