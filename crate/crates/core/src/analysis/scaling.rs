//! Finite-size scaling of beating amplitudes and the domain-wall profile.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_SCALING_POINTS: usize = 4;
pub const MIN_PROFILE_POINTS: usize = 3;

/// `log A = intercept + slope · log L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
}

impl ScalingFit {
    /// Whether the slope is within `tol` of the adiabatic `−1/2`.
    pub fn is_adiabatic(&self, tol: f64) -> bool {
        (self.slope + 0.5).abs() <= tol
    }
}

/// Ordinary least squares of `log A` against `log L`.
pub fn amplitude_scaling(sites: &[usize], amplitudes: &[f64]) -> Result<ScalingFit> {
    if sites.len() != amplitudes.len() {
        return Err(Error::DimensionMismatch {
            expected: sites.len(),
            got: amplitudes.len(),
        });
    }
    if sites.len() < MIN_SCALING_POINTS {
        return Err(Error::out_of_range(
            "points",
            sites.len(),
            format!(">= {MIN_SCALING_POINTS}"),
        ));
    }
    if sites.contains(&0) || amplitudes.iter().any(|&a| a.is_nan() || a <= 0.0) {
        return Err(Error::Domain(
            "sizes and amplitudes must be positive".into(),
        ));
    }
    let x: Vec<f64> = sites.iter().map(|&l| (l as f64).ln()).collect();
    let y: Vec<f64> = amplitudes.iter().map(|a| a.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("sizes must not all be equal".into()));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x
        .iter()
        .zip(&y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let slope_stderr = (rss / (n - 2.0) / sxx).sqrt();
    Ok(ScalingFit {
        slope,
        slope_stderr,
        intercept,
    })
}

/// `A(L_A) ≈ κ sin(π L_A / L)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileFit {
    pub kappa: f64,
    /// `RMS(A − κ sin) / RMS(A)`.
    pub residual: f64,
}

/// Least-squares sine profile over the given `(L_A, A)` points.
pub fn domain_wall_profile(sites: usize, points: &[(usize, f64)]) -> Result<ProfileFit> {
    if points.len() < MIN_PROFILE_POINTS {
        return Err(Error::out_of_range(
            "points",
            points.len(),
            format!(">= {MIN_PROFILE_POINTS}"),
        ));
    }
    if let Some(&(l_a, _)) = points.iter().find(|&&(l_a, _)| l_a == 0 || l_a >= sites) {
        return Err(Error::out_of_range("l_a", l_a, format!("1..{sites}")));
    }
    let s: Vec<f64> = points
        .iter()
        .map(|&(l_a, _)| (PI * l_a as f64 / sites as f64).sin())
        .collect();
    let a: Vec<f64> = points.iter().map(|&(_, v)| v).collect();
    let kappa =
        s.iter().zip(&a).map(|(x, y)| x * y).sum::<f64>() / s.iter().map(|x| x * x).sum::<f64>();
    let res: f64 = s.iter().zip(&a).map(|(x, y)| (y - kappa * x).powi(2)).sum();
    let norm: f64 = a.iter().map(|y| y * y).sum();
    if norm == 0.0 {
        return Err(Error::Domain("all amplitudes vanish".into()));
    }
    Ok(ProfileFit {
        kappa,
        residual: (res / norm).sqrt(),
    })
}
