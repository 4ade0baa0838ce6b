//! Problem model: the spectrum of `H_s` and the target's overlap profile.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const NORMALIZATION_TOL: f64 = 1e-12;

/// A problem in the eigenbasis of `H_s`.
///
/// `xi[ℓ]` is the `ℓ`-th eigenvalue of `H_s` (ascending, `xi[0] = 0`, with a
/// non-degenerate ground state) and `t_overlap[ℓ] = |⟨ℓ|t⟩|`. Phases of the
/// overlaps never enter any quantity computed here, so only magnitudes are
/// stored and every Hamiltonian built from an instance is real symmetric.
///
/// `time_reversed` marks instances produced by [`reverse_instance`]: the
/// roles of `|s⟩` and `|t⟩` are swapped and `μ` maps to `1−μ` when results
/// are reported in the original problem's parameterization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    xi: Vec<f64>,
    t_overlap: Vec<f64>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    time_reversed: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    xi: Vec<f64>,
    t_overlap: Vec<f64>,
    #[serde(default)]
    time_reversed: bool,
}

/// First invariant violated by a candidate `(xi, t_overlap)` pair.
#[derive(Debug, Clone, PartialEq)]
struct Violation {
    field: String,
    message: String,
}

fn check_invariants(xi: &[f64], t: &[f64]) -> std::result::Result<(), Violation> {
    let v = |field: &str, message: String| Violation {
        field: field.to_string(),
        message,
    };
    if xi.len() != t.len() {
        return Err(v(
            "t_overlap",
            format!("length {} differs from xi length {}", t.len(), xi.len()),
        ));
    }
    if xi.len() < 2 {
        return Err(v("xi", format!("need at least 2 levels, got {}", xi.len())));
    }
    if let Some(i) = xi.iter().position(|x| !x.is_finite()) {
        return Err(v(&format!("xi[{i}]"), "not finite".into()));
    }
    if let Some(i) = t.iter().position(|x| !x.is_finite()) {
        return Err(v(&format!("t_overlap[{i}]"), "not finite".into()));
    }
    if xi[0] != 0.0 {
        return Err(v("xi[0]", format!("ground energy must be 0, got {}", xi[0])));
    }
    if let Some(i) = (1..xi.len()).find(|&i| xi[i] < xi[i - 1]) {
        return Err(v(
            &format!("xi[{i}]"),
            format!("not sorted ascending ({} < {})", xi[i], xi[i - 1]),
        ));
    }
    if xi[1] <= 0.0 {
        return Err(v("xi[1]", "ground state of H_s must be non-degenerate".into()));
    }
    if let Some(i) = t.iter().position(|&x| x < 0.0) {
        return Err(v(
            &format!("t_overlap[{i}]"),
            format!("overlap magnitudes must be nonnegative, got {}", t[i]),
        ));
    }
    let norm: f64 = t.iter().map(|x| x * x).sum();
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(v(
            "t_overlap",
            format!("normalization: sum of squares is {norm}, expected 1"),
        ));
    }
    Ok(())
}

impl Instance {
    pub fn new(xi: Vec<f64>, t_overlap: Vec<f64>) -> Result<Self> {
        check_invariants(&xi, &t_overlap)
            .map_err(|e| Error::invalid(format!("{}: {}", e.field, e.message)))?;
        Ok(Self {
            xi,
            t_overlap,
            time_reversed: false,
        })
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn t_overlap(&self) -> &[f64] {
        &self.t_overlap
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    /// `α = |⟨s|t⟩|`.
    pub fn alpha(&self) -> f64 {
        self.t_overlap[0]
    }

    /// Smallest nonzero eigenvalue `ξ_1` of `H_s`.
    pub fn xi1(&self) -> f64 {
        self.xi[1]
    }

    /// Largest eigenvalue `ξ_{N−1}` of `H_s`.
    pub fn xi_max(&self) -> f64 {
        self.xi[self.xi.len() - 1]
    }

    pub fn is_time_reversed(&self) -> bool {
        self.time_reversed
    }

    /// Maps an interpolation parameter of this instance to the parameter
    /// of the problem it was built from.
    pub fn report_mu(&self, mu: f64) -> f64 {
        if self.time_reversed {
            1.0 - mu
        } else {
            mu
        }
    }

    /// `Υ_p = Σ_{ℓ≥1} |⟨ℓ|t⟩|² / ξ_ℓ^p` for `p ∈ {1, 2}`.
    pub fn upsilon(&self, p: u32) -> Result<f64> {
        match p {
            1 => Ok(self.upsilon_unchecked(1)),
            2 => Ok(self.upsilon_unchecked(2)),
            _ => Err(Error::invalid(format!("upsilon order must be 1 or 2, got {p}"))),
        }
    }

    pub(crate) fn upsilon_unchecked(&self, p: i32) -> f64 {
        self.xi[1..]
            .iter()
            .zip(&self.t_overlap[1..])
            .map(|(x, t)| t * t / x.powi(p))
            .sum()
    }

    pub fn upsilon1(&self) -> f64 {
        self.upsilon_unchecked(1)
    }

    pub fn upsilon2(&self) -> f64 {
        self.upsilon_unchecked(2)
    }

    /// Scales `H_s` by `factor`; overlaps are unchanged.
    pub fn rescale(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::invalid(format!("rescale factor must be positive, got {factor}")));
        }
        let xi: Vec<f64> = self.xi.iter().map(|x| x * factor).collect();
        check_invariants(&xi, &self.t_overlap)
            .map_err(|e| Error::invalid(format!("{}: {}", e.field, e.message)))?;
        Ok(Self {
            xi,
            t_overlap: self.t_overlap.clone(),
            time_reversed: self.time_reversed,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: InstanceFile = serde_json::from_str(text).map_err(|e| {
            Error::format(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        check_invariants(&raw.xi, &raw.t_overlap).map_err(|v| Error::format(v.field, v.message))?;
        Ok(Self {
            xi: raw.xi,
            t_overlap: raw.t_overlap,
            time_reversed: raw.time_reversed,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }
}

/// Grover search: `H_s = 1 − |u⟩⟨u|` with `|u⟩` the uniform superposition.
///
/// The excited eigenspace of `H_s` is `(N−1)`-fold degenerate; its basis is
/// rotated so the target's excited-space weight sits on a single vector,
/// giving `t_overlap = [1/√N, √(1−1/N), 0, …, 0]`.
pub fn make_grover(n: usize) -> Result<Instance> {
    if n < 2 {
        return Err(Error::invalid(format!("Grover instance needs N ≥ 2, got {n}")));
    }
    let alpha = 1.0 / (n as f64).sqrt();
    let mut xi = vec![1.0; n];
    xi[0] = 0.0;
    let mut t = vec![0.0; n];
    t[0] = alpha;
    t[1] = (1.0 - 1.0 / n as f64).sqrt();
    Instance::new(xi, t)
}

/// Random instance: excited energies uniform on `(xi_max/2, xi_max]`, target
/// weight `alpha` on `|s⟩` and the remaining `1−α²` split by normalized
/// uniform draws. A pure function of its arguments.
pub fn make_random(n: usize, seed: u64, xi_max: f64, alpha: f64) -> Result<Instance> {
    if n < 2 {
        return Err(Error::invalid(format!("random instance needs N ≥ 2, got {n}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(xi_max > 0.0) || !xi_max.is_finite() {
        return Err(Error::invalid(format!("xi_max must be positive, got {xi_max}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xi: Vec<f64> = std::iter::once(0.0)
        .chain((1..n).map(|_| xi_max * (1.0 - 0.5 * rng.gen::<f64>())))
        .collect();
    xi[1..].sort_by(f64::total_cmp);

    // Draws on (0, 1] so no excited level is accidentally decoupled.
    let draws: Vec<f64> = (1..n).map(|_| 1.0 - rng.gen::<f64>()).collect();
    let total: f64 = draws.iter().sum();
    let rest = 1.0 - alpha * alpha;
    let t: Vec<f64> = std::iter::once(alpha)
        .chain(draws.iter().map(|d| (rest * d / total).sqrt()))
        .collect();
    Instance::new(xi, t)
}

/// Builds the instance for the time-reversed problem `H_s = −|s⟩⟨s|` with a
/// general final Hamiltonian: `ht_spectrum` is the spectrum of `H_t` (min 0
/// at the target) and `s_overlap[j] = |⟨j|s⟩|`. The result is flagged so
/// reported parameters use `μ → 1−μ`.
pub fn reverse_instance(ht_spectrum: Vec<f64>, s_overlap: Vec<f64>) -> Result<Instance> {
    let mut inst = Instance::new(ht_spectrum, s_overlap)?;
    inst.time_reversed = true;
    Ok(inst)
}

/// Thresholds that turn the qualitative `≪` conditions on `H_s` into flags.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssumptionThresholds {
    pub max_alpha_over_xi1: f64,
    pub min_xi1_over_xi_max: f64,
    pub max_xi_max: f64,
}

impl Default for AssumptionThresholds {
    fn default() -> Self {
        Self {
            max_alpha_over_xi1: 0.1,
            min_xi1_over_xi_max: 0.1,
            max_xi_max: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub alpha_over_xi1: f64,
    pub xi1_over_xi_max: f64,
    pub xi_max: f64,
    pub alpha_small: bool,
    pub spectrum_ratio_ok: bool,
    pub norm_ok: bool,
    pub pass: bool,
}

pub fn check_assumptions(inst: &Instance, thresholds: &AssumptionThresholds) -> AssumptionReport {
    let alpha_over_xi1 = inst.alpha() / inst.xi1();
    let xi1_over_xi_max = inst.xi1() / inst.xi_max();
    let xi_max = inst.xi_max();
    let alpha_small = alpha_over_xi1 <= thresholds.max_alpha_over_xi1;
    let spectrum_ratio_ok = xi1_over_xi_max >= thresholds.min_xi1_over_xi_max;
    let norm_ok = xi_max <= thresholds.max_xi_max;
    AssumptionReport {
        alpha_over_xi1,
        xi1_over_xi_max,
        xi_max,
        alpha_small,
        spectrum_ratio_ok,
        norm_ok,
        pass: alpha_small && spectrum_ratio_ok && norm_ok,
    }
}
