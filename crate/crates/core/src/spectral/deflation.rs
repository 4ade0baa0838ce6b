//! Splits `H(μ)` into the part that feels the projector and the part that
//! does not.
//!
//! Levels with `|⟨ℓ|t⟩| = 0` are eigenvectors of `H(μ)` for every `μ`. Inside
//! a group of levels sharing one energy `ξ`, only the direction of `t`
//! restricted to the group couples; its orthogonal complement is pinned at
//! `(1−μ)ξ`. What remains is a `K×K` diagonal-plus-rank-one problem with
//! one coordinate per distinct coupled energy.

use num_complex::Complex64;

use super::secular::{RankOne, Root};
use crate::Instance;

#[derive(Debug, Clone)]
pub struct Deflation {
    /// Distinct energies of the coupled groups, strictly increasing.
    poles: Vec<f64>,
    /// `‖t‖` restricted to each group.
    z: Vec<f64>,
    members: Vec<Vec<usize>>,
    /// Unit direction of `t` inside each group.
    dirs: Vec<Vec<f64>>,
    /// Levels outside every group, with their energies.
    inert: Vec<usize>,
    inert_xi: Vec<f64>,
    /// `ξ` of every pinned eigenvalue (inert levels and group complements),
    /// ascending.
    pinned_xi: Vec<f64>,
    /// Group holding level 0, when `α > 0`.
    ground_group: Option<usize>,
    dim: usize,
}

/// Eigen-decomposition of the coupled block at one `μ ∈ (0,1)`.
#[derive(Debug, Clone)]
pub(crate) struct ReducedEigen {
    /// Energies of `H(μ)` (not rescaled), ascending.
    pub values: Vec<f64>,
    /// Row-major `K×K`; column `i` is the eigenvector of `values[i]`.
    pub vectors: Vec<f64>,
}

impl Deflation {
    pub fn new(inst: &Instance) -> Self {
        let xi = inst.xi();
        let t = inst.t_overlap();
        let mut poles = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut inert = Vec::new();
        for l in 0..xi.len() {
            if t[l] == 0.0 {
                inert.push(l);
            } else if poles.last() == Some(&xi[l]) {
                members.last_mut().unwrap().push(l);
            } else {
                poles.push(xi[l]);
                members.push(vec![l]);
            }
        }
        let z: Vec<f64> = members
            .iter()
            .map(|m| m.iter().map(|&l| t[l] * t[l]).sum::<f64>().sqrt())
            .collect();
        let dirs = members
            .iter()
            .zip(&z)
            .map(|(m, w)| m.iter().map(|&l| t[l] / w).collect())
            .collect();
        let inert_xi: Vec<f64> = inert.iter().map(|&l| xi[l]).collect();
        let mut pinned_xi = inert_xi.clone();
        for (g, m) in members.iter().enumerate() {
            pinned_xi.extend(std::iter::repeat_n(poles[g], m.len() - 1));
        }
        pinned_xi.sort_by(f64::total_cmp);
        let ground_group = members.iter().position(|m| m.contains(&0));
        Self {
            poles,
            z,
            members,
            dirs,
            inert,
            inert_xi,
            pinned_xi,
            ground_group,
            dim: xi.len(),
        }
    }

    /// Number of coupled coordinates `K`.
    pub fn coupled_dim(&self) -> usize {
        self.poles.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pinned_count(&self) -> usize {
        self.pinned_xi.len()
    }

    pub(crate) fn z(&self) -> &[f64] {
        &self.z
    }

    pub(crate) fn pinned_xi(&self) -> &[f64] {
        &self.pinned_xi
    }

    pub(crate) fn ground_group(&self) -> Option<usize> {
        self.ground_group
    }

    /// Rank-one problem `diag(ξ_G) + ρ·z·zᵀ`; for `H(μ)/(1−μ)` use
    /// `ρ = −μ/(1−μ)`.
    pub(crate) fn rank_one(&self, rho: f64) -> RankOne<'_> {
        RankOne::new(&self.poles, &self.z, rho)
    }

    pub(crate) fn interior_rho(mu: f64) -> f64 {
        -mu / (1.0 - mu)
    }

    /// Lowest coupled root at `μ ∈ (0,1)` in rescaled units together with
    /// its unit vector over the coupled coordinates.
    pub(crate) fn reduced_ground(&self, mu: f64) -> Option<(Root, Vec<f64>)> {
        if self.poles.is_empty() {
            return None;
        }
        let r1 = self.rank_one(Self::interior_rho(mu));
        let root = r1.root_below();
        let v = r1.vector_with(&self.z, root);
        Some((root, v))
    }

    pub(crate) fn reduced_eigen(&self, mu: f64) -> ReducedEigen {
        let k = self.poles.len();
        if mu == 0.0 {
            let mut vectors = vec![0.0; k * k];
            (0..k).for_each(|i| vectors[i * k + i] = 1.0);
            return ReducedEigen {
                values: self.poles.clone(),
                vectors,
            };
        }
        if mu == 1.0 {
            return self.projector_eigen();
        }
        let r1 = self.rank_one(Self::interior_rho(mu));
        let roots = r1.all_roots();
        let zhat = r1.lowner_weights(&roots);
        let mut vectors = vec![0.0; k * k];
        for (i, &root) in roots.iter().enumerate() {
            for (j, c) in r1.vector_with(&zhat, root).into_iter().enumerate() {
                vectors[j * k + i] = c;
            }
        }
        let values = roots.iter().map(|&r| (1.0 - mu) * r1.value(r)).collect();
        ReducedEigen { values, vectors }
    }

    /// `−z·zᵀ`: one eigenvalue `−‖z‖²` along `z`, the rest zero. The
    /// complement comes from the Householder reflector mapping `e_0` to
    /// `z/‖z‖`.
    fn projector_eigen(&self) -> ReducedEigen {
        let k = self.poles.len();
        let norm = self.z.iter().map(|x| x * x).sum::<f64>().sqrt();
        let u: Vec<f64> = self.z.iter().map(|x| x / norm).collect();
        let mut h = vec![0.0; k * k];
        let mut w = u.clone();
        w[0] -= 1.0;
        let ww: f64 = w.iter().map(|x| x * x).sum();
        for i in 0..k {
            for j in 0..k {
                let id = if i == j { 1.0 } else { 0.0 };
                h[i * k + j] = if ww > 0.0 { id - 2.0 * w[i] * w[j] / ww } else { id };
            }
        }
        let mut values = vec![0.0; k];
        if k > 0 {
            values[0] = -norm * norm;
        }
        ReducedEigen { values, vectors: h }
    }

    /// Coupled coordinates `c_G = ⟨dir_G|ψ⟩`.
    pub(crate) fn coords(&self, psi: &[Complex64]) -> Vec<Complex64> {
        self.members
            .iter()
            .zip(&self.dirs)
            .map(|(m, d)| m.iter().zip(d).map(|(&l, &w)| psi[l] * w).sum())
            .collect()
    }

    /// Applies `exp(−i·H(μ)·dt)` to `psi` in place.
    pub(crate) fn evolve(&self, psi: &mut [Complex64], mu: f64, dt: f64) {
        if mu == 1.0 {
            // exp(i·dt·|t⟩⟨t|) with ‖t‖ = 1
            let c = self.coords(psi);
            let amp: Complex64 = c.iter().zip(&self.z).map(|(c, z)| c * z).sum();
            let factor = Complex64::from_polar(1.0, dt) - 1.0;
            for ((m, d), z) in self.members.iter().zip(&self.dirs).zip(&self.z) {
                for (&l, &w) in m.iter().zip(d) {
                    psi[l] += factor * amp * z * w;
                }
            }
            return;
        }
        let scale = 1.0 - mu;
        let c = self.coords(psi);
        let red = self.reduced_eigen(mu);
        let k = self.poles.len();
        // c' = V·exp(−iΛdt)·Vᵀ·c
        let spectral_c: Vec<Complex64> = (0..k)
            .map(|i| {
                let proj: Complex64 = (0..k).map(|j| red.vectors[j * k + i] * c[j]).sum();
                proj * Complex64::from_polar(1.0, -red.values[i] * dt)
            })
            .collect();
        let new_c: Vec<Complex64> = (0..k)
            .map(|j| (0..k).map(|i| red.vectors[j * k + i] * spectral_c[i]).sum())
            .collect();

        for (g, (m, d)) in self.members.iter().zip(&self.dirs).enumerate() {
            let phase = Complex64::from_polar(1.0, -scale * self.poles[g] * dt);
            for (&l, &w) in m.iter().zip(d) {
                let rest = psi[l] - c[g] * w;
                psi[l] = rest * phase + new_c[g] * w;
            }
        }
        for (&l, &x) in self.inert.iter().zip(&self.inert_xi) {
            psi[l] *= Complex64::from_polar(1.0, -scale * x * dt);
        }
    }

    /// Embeds a coupled-coordinate vector into the full space.
    pub(crate) fn embed(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for ((m, d), &vg) in self.members.iter().zip(&self.dirs).zip(v) {
            for (&l, &w) in m.iter().zip(d) {
                out[l] = vg * w;
            }
        }
        out
    }
}
