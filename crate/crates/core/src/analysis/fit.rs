//! Single-cosine fits of the parity beating signal.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FIT_GRID: usize = 2000;
pub const MIN_FIT_LEN: usize = 8;

/// `A cos(ωn + φ) + 0.5`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub amplitude: f64,
    /// In `[0, π]`; the sign of `ω` is not identifiable from a real cosine.
    pub frequency: f64,
    /// In `(−π, π]`.
    pub phase: f64,
    /// RMS residual.
    pub residual: f64,
    /// Set for constant input; `frequency` and `phase` are then NaN.
    pub degenerate: bool,
}

impl FitResult {
    pub fn eval(&self, n: f64) -> f64 {
        if self.degenerate {
            return 0.5;
        }
        self.amplitude * (self.frequency * n + self.phase).cos() + 0.5
    }
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// `y ≈ a cos ωn − b sin ωn`; returns `(a, b, sse)`.
fn linear_solve(y: &[f64], omega: f64) -> (f64, f64, f64) {
    let (mut cc, mut cs, mut ss, mut yc, mut ys) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (n, &v) in y.iter().enumerate() {
        let (s, c) = (omega * n as f64).sin_cos();
        cc += c * c;
        cs += c * s;
        ss += s * s;
        yc += v * c;
        ys += v * s;
    }
    let det = cc * ss - cs * cs;
    let (a, b) = if det > 1e-10 * (cc * cc).max(ss * ss) {
        ((yc * ss - ys * cs) / det, -(ys * cc - yc * cs) / det)
    } else if cc > ss {
        (yc / cc, 0.0)
    } else {
        (0.0, -ys / ss)
    };
    (a, b, sse(y, a, omega, b))
}

fn sse(y: &[f64], a: f64, omega: f64, b: f64) -> f64 {
    y.iter()
        .enumerate()
        .map(|(n, &v)| {
            let (s, c) = (omega * n as f64).sin_cos();
            let r = a * c - b * s - v;
            r * r
        })
        .sum()
}

/// Levenberg–Marquardt on `(a, ω, b)`.
fn refine(y: &[f64], mut p: Vector3<f64>) -> Vector3<f64> {
    let mut cost = sse(y, p[0], p[1], p[2]);
    let mut lambda = 1e-6;
    for _ in 0..200 {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for (n, &v) in y.iter().enumerate() {
            let nf = n as f64;
            let (s, c) = (p[1] * nf).sin_cos();
            let r = p[0] * c - p[2] * s - v;
            let j = Vector3::new(c, -nf * (p[0] * s + p[2] * c), -s);
            jtj += j * j.transpose();
            jtr += j * r;
        }
        let mut improved = false;
        while lambda < 1e12 {
            let mut a = jtj;
            for i in 0..3 {
                a[(i, i)] += lambda * jtj[(i, i)].max(1e-300);
            }
            let Some(step) = a.lu().solve(&jtr) else {
                lambda *= 10.0;
                continue;
            };
            let trial = p - step;
            let c = sse(y, trial[0], trial[1], trial[2]);
            if c <= cost {
                let done = cost - c <= 1e-15 * cost.max(1e-300) && step.norm() < 1e-13;
                p = trial;
                cost = c;
                lambda = (lambda / 10.0).max(1e-12);
                improved = !done;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    p
}

/// Least-squares fit of `A cos(ωn + φ) + 0.5`: global search over a grid of
/// `FIT_GRID` frequencies in `(−π, π]`, then local refinement.
pub fn cosine_fit(series: &[f64]) -> Result<FitResult> {
    if series.len() < MIN_FIT_LEN {
        return Err(Error::out_of_range(
            "series length",
            series.len(),
            format!(">= {MIN_FIT_LEN}"),
        ));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite sample in series".into()));
    }
    let (lo, hi) = series
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if hi - lo <= 1e-14 {
        return Ok(FitResult {
            amplitude: 0.0,
            frequency: f64::NAN,
            phase: f64::NAN,
            residual: (series[0] - 0.5).abs(),
            degenerate: true,
        });
    }
    let y: Vec<f64> = series.iter().map(|v| v - 0.5).collect();
    let mut best = (f64::INFINITY, 0.0, 0.0, 0.0);
    for j in 1..=FIT_GRID {
        let omega = -PI + 2.0 * PI * j as f64 / FIT_GRID as f64;
        let (a, b, e) = linear_solve(&y, omega);
        if e < best.0 {
            best = (e, a, omega, b);
        }
    }
    let p = refine(&y, Vector3::new(best.1, best.2, best.3));
    let (a, mut omega, mut b) = (p[0], wrap(p[1]), p[2]);
    if omega < 0.0 {
        omega = -omega;
        b = -b;
    }
    let amplitude = a.hypot(b);
    let phase = if amplitude > 0.0 { b.atan2(a) } else { 0.0 };
    let residual = (sse(&y, p[0], p[1], p[2]) / y.len() as f64).sqrt();
    Ok(FitResult {
        amplitude,
        frequency: omega,
        phase: wrap(phase),
        residual,
        degenerate: false,
    })
}

/// Number of trailing samples used for the ferromagnetic-tail fit.
pub fn fm_tail_window(n_steps: usize) -> usize {
    (n_steps / 100).max(MIN_FIT_LEN)
}

/// Fit of the last `fm_tail_window(n_steps)` samples of a sweep.
pub fn fm_tail_fit(series: &[f64]) -> Result<FitResult> {
    let n_steps = series.len().saturating_sub(1);
    let w = fm_tail_window(n_steps);
    if series.len() < w {
        return Err(Error::out_of_range(
            "series length",
            series.len(),
            format!(">= {w}"),
        ));
    }
    cosine_fit(&series[series.len() - w..])
}
