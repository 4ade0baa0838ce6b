//! Roots and eigenvectors of `diag(d) + ρ·z·zᵀ` with strictly increasing
//! poles `d` and nonzero `z`.
//!
//! Every root is stored relative to its nearest pole (`λ = d[origin] + δ`)
//! so that the differences `d_j − λ` entering the eigenvector components are
//! computed without cancellation.

/// Cap on bisection steps; plain float bisection needs at most ~2100 to
/// walk any bracket down to adjacent doubles.
const MAX_BISECTIONS: usize = 2200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Root {
    pub origin: usize,
    pub delta: f64,
}

pub(crate) struct RankOne<'a> {
    poles: &'a [f64],
    z: &'a [f64],
    rho: f64,
    total_weight: f64,
}

impl<'a> RankOne<'a> {
    pub fn new(poles: &'a [f64], z: &'a [f64], rho: f64) -> Self {
        debug_assert_eq!(poles.len(), z.len());
        debug_assert!(poles.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(rho != 0.0);
        let total_weight = z.iter().map(|x| x * x).sum();
        Self {
            poles,
            z,
            rho,
            total_weight,
        }
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn value(&self, root: Root) -> f64 {
        self.poles[root.origin] + root.delta
    }

    /// `d_j − λ` for the given root.
    #[inline]
    pub fn diff(&self, j: usize, root: Root) -> f64 {
        (self.poles[j] - self.poles[root.origin]) - root.delta
    }

    /// `1/ρ + Σ z_j²/(d_j − λ)` at `λ = d[origin] + δ`; increasing in `δ`
    /// between poles.
    fn secular(&self, origin: usize, delta: f64) -> f64 {
        let d0 = self.poles[origin];
        let mut s = 1.0 / self.rho;
        for (d, z) in self.poles.iter().zip(self.z) {
            s += z * z / ((d - d0) - delta);
        }
        s
    }

    fn bisect(&self, origin: usize, mut lo: f64, mut hi: f64) -> Root {
        for _ in 0..MAX_BISECTIONS {
            let mid = lo + 0.5 * (hi - lo);
            if mid <= lo || mid >= hi {
                break;
            }
            let f = self.secular(origin, mid);
            if f == 0.0 {
                return Root { origin, delta: mid };
            }
            if f < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // One end may be the pole itself (δ = 0).
        let delta = if hi == 0.0 {
            lo
        } else if lo == 0.0 {
            hi
        } else {
            lo + 0.5 * (hi - lo)
        };
        Root { origin, delta }
    }

    /// The root strictly between poles `k` and `k+1`.
    pub fn root_in_gap(&self, k: usize) -> Root {
        let half = 0.5 * (self.poles[k + 1] - self.poles[k]);
        let at_mid = self.secular(k, half);
        if at_mid == 0.0 {
            Root { origin: k, delta: half }
        } else if at_mid > 0.0 {
            self.bisect(k, 0.0, half)
        } else {
            self.bisect(k + 1, -half, 0.0)
        }
    }

    /// The root below the lowest pole; exists only for `ρ < 0`.
    pub fn root_below(&self) -> Root {
        debug_assert!(self.rho < 0.0);
        let mut lo = self.rho * self.total_weight * (1.0 + 1e-12) - f64::MIN_POSITIVE;
        while self.secular(0, lo) > 0.0 {
            lo *= 2.0;
        }
        self.bisect(0, lo, 0.0)
    }

    /// The root above the highest pole; exists only for `ρ > 0`.
    pub fn root_above(&self) -> Root {
        debug_assert!(self.rho > 0.0);
        let top = self.len() - 1;
        let mut hi = self.rho * self.total_weight * (1.0 + 1e-12) + f64::MIN_POSITIVE;
        while self.secular(top, hi) < 0.0 {
            hi *= 2.0;
        }
        self.bisect(top, 0.0, hi)
    }

    /// The `count` smallest roots, ascending.
    pub fn lowest_roots(&self, count: usize) -> Vec<Root> {
        let count = count.min(self.len());
        let mut roots = Vec::with_capacity(count);
        if self.rho < 0.0 {
            if count > 0 {
                roots.push(self.root_below());
            }
            roots.extend((0..count.saturating_sub(1)).map(|k| self.root_in_gap(k)));
        } else {
            let inner = self.len() - 1;
            roots.extend((0..count.min(inner)).map(|k| self.root_in_gap(k)));
            if count > inner {
                roots.push(self.root_above());
            }
        }
        roots
    }

    pub fn all_roots(&self) -> Vec<Root> {
        self.lowest_roots(self.len())
    }

    /// Unit eigenvector for `root` using the given weights in place of `z`.
    pub fn vector_with(&self, weights: &[f64], root: Root) -> Vec<f64> {
        let mut v: Vec<f64> = weights
            .iter()
            .enumerate()
            .map(|(j, w)| w / self.diff(j, root))
            .collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        v
    }

    /// Löwner reconstruction of `z` from the computed roots: the vector for
    /// which the roots are exact eigenvalues. Eigenvectors built from it are
    /// orthogonal to working precision.
    pub fn lowner_weights(&self, roots: &[Root]) -> Vec<f64> {
        let n = self.len();
        debug_assert_eq!(roots.len(), n);
        (0..n)
            .map(|k| {
                // Π_i (λ_i − d_k) / (ρ · Π_{i≠k} (d_i − d_k))
                let mut prod = -self.diff(k, roots[k]) / self.rho;
                for i in 0..n {
                    if i != k {
                        prod *= -self.diff(k, roots[i]) / (self.poles[i] - self.poles[k]);
                    }
                }
                prod.abs().sqrt().copysign(self.z[k])
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interlacing_negative_rho() {
        let poles = [0.0, 0.5, 1.0, 2.0];
        let z = [0.3, 0.5, 0.6, (1.0f64 - 0.09 - 0.25 - 0.36).sqrt()];
        let r = RankOne::new(&poles, &z, -0.7);
        let roots: Vec<f64> = r.all_roots().into_iter().map(|x| r.value(x)).collect();
        assert!(roots[0] < poles[0]);
        for k in 1..4 {
            assert!(roots[k] > poles[k - 1] && roots[k] < poles[k]);
        }
    }

    #[test]
    fn interlacing_positive_rho() {
        let poles = [0.0, 1.0, 3.0];
        let z = [0.6, 0.48f64.sqrt(), 0.4f64.sqrt()];
        let r = RankOne::new(&poles, &z, 1.0);
        let roots: Vec<f64> = r.all_roots().into_iter().map(|x| r.value(x)).collect();
        assert!(roots[0] > 0.0 && roots[0] < 1.0);
        assert!(roots[1] > 1.0 && roots[1] < 3.0);
        assert!(roots[2] > 3.0);
        // trace identity
        let tr: f64 = poles.iter().sum::<f64>() + z.iter().map(|x| x * x).sum::<f64>();
        assert!((roots.iter().sum::<f64>() - tr).abs() < 1e-12);
    }

    #[test]
    fn lowner_vectors_are_orthonormal() {
        let poles = [0.0, 0.3, 0.31, 0.9, 1.4];
        let z = [0.1, 0.5, 0.4, 0.6, 0.2];
        let r = RankOne::new(&poles, &z, -2.0);
        let roots = r.all_roots();
        let zh = r.lowner_weights(&roots);
        for (a, b) in zh.iter().zip(&z) {
            assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
        }
        let vs: Vec<Vec<f64>> = roots.iter().map(|&x| r.vector_with(&zh, x)).collect();
        for i in 0..5 {
            for j in 0..5 {
                let dot: f64 = vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum();
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((dot - e).abs() < 1e-13, "({i},{j}) {dot}");
            }
        }
    }
}
