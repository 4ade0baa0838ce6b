use serde::Serialize;

use crate::{Error, Result};

/// Least-squares line through `(ln α, ln Γ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFitResult {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(α, Γ_required)` pairs.
    pub points: Vec<(f64, f64)>,
}

pub fn fit_power_law(points: &[(f64, f64)]) -> Result<ScalingFitResult> {
    if points.len() < 3 {
        return Err(Error::invalid(format!("need ≥ 3 points, got {}", points.len())));
    }
    if points.iter().any(|&(a, g)| !(a > 0.0 && g > 0.0)) {
        return Err(Error::invalid("power-law fit needs positive α and Γ"));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("power-law fit needs at least two distinct α"));
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(ScalingFitResult {
        exponent,
        intercept,
        r_squared,
        points: points.to_vec(),
    })
}
