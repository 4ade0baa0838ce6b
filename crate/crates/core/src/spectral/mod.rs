//! Exact eigenstructure of `H(μ) = (1−μ)·H_s − μ·|t⟩⟨t|`.
//!
//! In the eigenbasis of `H_s` the Hamiltonian is diagonal plus rank one, so
//! its eigenvalues are the roots of
//!
//! ```text
//! Σ_ℓ |⟨ℓ|t⟩|² / (ξ_ℓ(1−μ) − E) = 1/μ
//! ```
//!
//! together with eigenvalues pinned at poles (degenerate or decoupled
//! levels). Roots are bracketed between consecutive poles and found by
//! bisection. [`dense_eigensolver`] is an independent Jacobi path kept for
//! cross-validation.

mod deflation;
mod dense;
mod secular;

use rayon::prelude::*;
use serde::Serialize;

pub use deflation::Deflation;
pub use dense::{dense_eigensolver, DenseEigen, SymMatrix};

use crate::{Error, Instance, Result};

/// Energies with a gap difference below this are reported as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

fn check_mu(mu: f64) {
    assert!((0.0..=1.0).contains(&mu), "μ = {mu} outside [0, 1]");
}

/// Exact spectrum of `H(μ)` and its ground state's overlaps with `|s⟩` and
/// `|t⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenSystem {
    pub mu: f64,
    pub energies: Vec<f64>,
    pub overlap_s: f64,
    pub overlap_t: f64,
    pub gap: f64,
    /// `E_2` coincides with `E_1` within [`TIE_TOLERANCE`].
    pub tie: bool,
}

/// `Σ_ℓ |⟨ℓ|t⟩|²/(ξ_ℓ(1−μ) − E) − 1/μ`, summed over levels with nonzero
/// overlap. Strictly increasing in `E` between consecutive poles.
pub fn secular_value(inst: &Instance, mu: f64, energy: f64) -> Result<f64> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::OutOfDomain { mu });
    }
    let mut s = -1.0 / mu;
    for (x, t) in inst.xi().iter().zip(inst.t_overlap()) {
        if *t == 0.0 {
            continue;
        }
        let d = x * (1.0 - mu) - energy;
        if d == 0.0 {
            return Err(Error::PoleEvaluation { energy });
        }
        s += t * t / d;
    }
    Ok(s)
}

/// Dense `H(μ)` with entries `(1−μ)ξ_ℓ δ_{ℓm} − μ t_ℓ t_m`.
pub fn build_hmu(inst: &Instance, mu: f64) -> SymMatrix {
    let xi = inst.xi();
    let t = inst.t_overlap();
    SymMatrix::from_fn(inst.dim(), |i, j| {
        let diag = if i == j { (1.0 - mu) * xi[i] } else { 0.0 };
        diag - mu * t[i] * t[j]
    })
}

/// Dense `H_s − H_t = diag(ξ) + |t⟩⟨t|`.
pub fn build_hs_minus_ht(inst: &Instance) -> SymMatrix {
    let xi = inst.xi();
    let t = inst.t_overlap();
    SymMatrix::from_fn(inst.dim(), |i, j| {
        let diag = if i == j { xi[i] } else { 0.0 };
        diag + t[i] * t[j]
    })
}

/// Merges two ascending lists, keeping the `count` smallest.
fn merge_lowest(a: &[f64], b: &[f64], count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let (mut i, mut j) = (0, 0);
    while out.len() < count && (i < a.len() || j < b.len()) {
        if j >= b.len() || (i < a.len() && a[i] <= b[j]) {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out
}

/// The `count` lowest eigenvalues of `H(μ)`, ascending.
pub fn lowest_levels(inst: &Instance, mu: f64, count: usize) -> Vec<f64> {
    lowest_levels_deflated(&Deflation::new(inst), inst, mu, count)
}

fn lowest_levels_deflated(defl: &Deflation, inst: &Instance, mu: f64, count: usize) -> Vec<f64> {
    check_mu(mu);
    let count = count.min(inst.dim());
    if mu == 0.0 {
        return inst.xi()[..count].to_vec();
    }
    if mu == 1.0 {
        let w: f64 = inst.t_overlap().iter().map(|t| t * t).sum();
        let mut e = vec![0.0; count];
        if count > 0 {
            e[0] = -w;
        }
        return e;
    }
    let scale = 1.0 - mu;
    let r1 = defl.rank_one(Deflation::interior_rho(mu));
    let roots: Vec<f64> = r1
        .lowest_roots(count)
        .into_iter()
        .map(|r| scale * r1.value(r))
        .collect();
    let pinned: Vec<f64> = defl.pinned_xi().iter().take(count).map(|x| scale * x).collect();
    merge_lowest(&roots, &pinned, count)
}

/// All `N` eigenvalues of `H(μ)`, ascending.
///
/// Degenerate coupled levels contribute `m−1` eigenvalues pinned at their
/// pole and decoupled levels sit at `ξ_ℓ(1−μ)`; the remaining ones are the
/// secular roots, one below the lowest pole and one in every gap between
/// consecutive coupled poles.
pub fn exact_eigenvalues(inst: &Instance, mu: f64) -> Vec<f64> {
    lowest_levels(inst, mu, inst.dim())
}

pub fn exact_gap(inst: &Instance, mu: f64) -> f64 {
    let e = lowest_levels(inst, mu, 2);
    e[1] - e[0]
}

pub(crate) fn gap_deflated(defl: &Deflation, inst: &Instance, mu: f64) -> f64 {
    let e = lowest_levels_deflated(defl, inst, mu, 2);
    e[1] - e[0]
}

/// Ground state of `H(μ)` in the full `N`-dimensional basis.
pub fn ground_state_vector(inst: &Instance, mu: f64) -> Vec<f64> {
    check_mu(mu);
    let n = inst.dim();
    if mu == 0.0 {
        let mut v = vec![0.0; n];
        v[0] = 1.0;
        return v;
    }
    if mu == 1.0 {
        return inst.t_overlap().to_vec();
    }
    let defl = Deflation::new(inst);
    match defl.reduced_ground(mu) {
        Some((root, v))
            if defl.ground_group().is_some()
                || defl.rank_one(Deflation::interior_rho(mu)).value(root) < 0.0 =>
        {
            defl.embed(&v)
        }
        _ => {
            let mut v = vec![0.0; n];
            v[0] = 1.0;
            v
        }
    }
}

/// Exact ground-state energy and overlaps at `μ`.
///
/// `|⟨t|E_0⟩|` comes from normalizing the components
/// `⟨ℓ|E_0⟩ = μ⟨ℓ|t⟩⟨t|E_0⟩/(ξ_ℓ(1−μ) − E_0)`, and `|⟨s|E_0⟩|` from the
/// `ℓ = 0` component with `ξ_0 = 0`.
pub fn exact_ground(inst: &Instance, mu: f64) -> EigenSystem {
    check_mu(mu);
    let energies = exact_eigenvalues(inst, mu);
    let gap = energies[1] - energies[0];
    let tie = energies.len() > 2 && (energies[2] - energies[1]).abs() <= TIE_TOLERANCE;
    let alpha = inst.alpha();
    let (overlap_s, overlap_t) = if mu == 0.0 {
        (1.0, alpha)
    } else if mu == 1.0 {
        (alpha, 1.0)
    } else {
        let defl = Deflation::new(inst);
        let scale = 1.0 - mu;
        let r1 = defl.rank_one(Deflation::interior_rho(mu));
        let root = r1.root_below();
        let e0 = scale * r1.value(root);
        if defl.ground_group().is_none() && e0 >= 0.0 {
            // α = 0 and |s⟩ itself is the ground state
            (1.0, 0.0)
        } else {
            let norm: f64 = defl
                .z()
                .iter()
                .enumerate()
                .map(|(g, z)| (z / (scale * r1.diff(g, root))).powi(2))
                .sum();
            let overlap_t = 1.0 / (mu * norm.sqrt());
            let overlap_s = mu * alpha * overlap_t / e0.abs();
            (overlap_s, overlap_t)
        }
    };
    EigenSystem {
        mu,
        energies,
        overlap_s,
        overlap_t,
        gap,
        tie,
    }
}

/// Location and depth of the smallest exact gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapMinimum {
    pub mu: f64,
    pub gap: f64,
    pub grid_points: usize,
}

pub const DEFAULT_REFINE_TOL: f64 = 1e-10;
const MIN_GRID: usize = 64;
const MAX_GRID: usize = 1 << 22;

/// Grid size that resolves the gap dip of width `~1/ω`:
/// `max(64, 16·ω/(1+Υ_1)²)`.
pub fn auto_grid_points(inst: &Instance) -> usize {
    let alpha = inst.alpha();
    if alpha == 0.0 {
        return MIN_GRID;
    }
    let u1 = inst.upsilon1();
    let omega = (1.0 + u1).powi(2) / (2.0 * alpha * inst.upsilon2().sqrt());
    let n = (16.0 * omega / (1.0 + u1).powi(2)).ceil();
    (n as usize).clamp(MIN_GRID, MAX_GRID)
}

/// Scans the exact gap on a uniform `μ`-grid over `[0, 1]`, then refines
/// the bracketing triple by golden-section search down to `refine_tol`.
pub fn min_gap_scan(inst: &Instance, grid_points: Option<usize>, refine_tol: f64) -> Result<GapMinimum> {
    let n = match grid_points {
        Some(n) if n < MIN_GRID => {
            return Err(Error::invalid(format!("min-gap scan needs at least {MIN_GRID} grid points, got {n}")))
        }
        Some(n) => n,
        None => auto_grid_points(inst),
    };
    if !(refine_tol > 0.0) {
        return Err(Error::invalid("refine tolerance must be positive"));
    }
    let defl = Deflation::new(inst);
    let step = 1.0 / (n - 1) as f64;
    let gaps: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| gap_deflated(&defl, inst, (i as f64 * step).min(1.0)))
        .collect();
    let (imin, &gmin) = gaps
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is non-empty");
    let lo = imin.saturating_sub(1) as f64 * step;
    let hi = ((imin + 1).min(n - 1) as f64 * step).min(1.0);
    let (mu, gap) = golden_section(|m| gap_deflated(&defl, inst, m), lo, hi, refine_tol);
    let best = if gap <= gmin {
        GapMinimum { mu, gap, grid_points: n }
    } else {
        GapMinimum {
            mu: (imin as f64 * step).min(1.0),
            gap: gmin,
            grid_points: n,
        }
    };
    Ok(best)
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Spectral norm of `H_s − H_t = diag(ξ) + |t⟩⟨t|`, its largest eigenvalue
/// since the matrix is positive semidefinite.
pub fn hs_minus_ht_norm(inst: &Instance) -> f64 {
    let defl = Deflation::new(inst);
    let r1 = defl.rank_one(1.0);
    let top = r1.value(r1.root_above());
    defl.pinned_xi().last().map_or(top, |&p| top.max(p))
}
