//! Single-particle quasienergies of a one-period orthogonal map.

use std::f64::consts::PI;

use nalgebra::Schur;

use super::generator::OrthogonalMap;
use crate::error::{Error, Result};

/// Fold into `(−π, π]`, snapping values within `1e−12` of `−π` to `+π`.
pub fn fold_phase(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    if y <= -PI + 1e-12 {
        y = PI;
    }
    y
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasienergySpectrum {
    phases: Vec<f64>,
}

impl QuasienergySpectrum {
    /// Sorted ascending, in `(−π, π]`.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Distance, modulo `2π`, between the phases and their negatives as
    /// sorted multisets.
    pub fn pairing_defect(&self) -> f64 {
        let mut neg: Vec<f64> = self.phases.iter().map(|p| fold_phase(-p)).collect();
        neg.sort_by(f64::total_cmp);
        self.phases
            .iter()
            .zip(&neg)
            .map(|(a, b)| fold_phase(a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn quasienergy_spectrum(o: &OrthogonalMap) -> Result<QuasienergySpectrum> {
    let defect = o.orthogonality_defect();
    if defect > 1e-8 {
        return Err(Error::Numeric(format!(
            "map is not orthogonal (defect {defect:.3e})"
        )));
    }
    let schur = Schur::try_new(o.matrix().clone(), f64::EPSILON, 100_000)
        .ok_or_else(|| Error::Numeric("real Schur iteration did not converge".into()))?;
    let mut phases: Vec<f64> = schur
        .complex_eigenvalues()
        .iter()
        .map(|z| fold_phase(z.arg()))
        .collect();
    phases.sort_by(f64::total_cmp);
    Ok(QuasienergySpectrum { phases })
}

/// The π-mode quasienergy: the largest eigenphase.
pub fn pi_mode_gap(s: &QuasienergySpectrum) -> f64 {
    s.phases.last().copied().unwrap_or(0.0)
}
