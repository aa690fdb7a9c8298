//! Adiabatic sweeps, stop-and-repeat runs and π-mode traces.

use serde::{Deserialize, Serialize};

use super::engine::{make_engine, Engine, EngineKind};
use crate::error::{Error, Result};
use crate::fermion::{pi_mode_gap, quasienergy_spectrum, FloquetStep};
use crate::model::{AdiabaticPath, FloquetParams, ProductState};

const S1_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMeta {
    pub sites: usize,
    pub l_a: usize,
    pub n_steps: usize,
    /// `None` for drives that do not follow an adiabatic path.
    pub r0: Option<f64>,
    pub engine: EngineKind,
    pub initial: ProductState,
}

/// Per-step observables; index 0 is the initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSeries {
    pub s1_even: Vec<f64>,
    pub x_site: Vec<Vec<f64>>,
    pub meta: SweepMeta,
}

impl SweepSeries {
    pub fn len(&self) -> usize {
        self.s1_even.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s1_even.is_empty()
    }

    /// Largest absolute difference over `S_1(even)` and every `⟨X_l⟩`.
    pub fn max_discrepancy(&self, other: &Self) -> Result<f64> {
        if self.len() != other.len() || self.meta.sites != other.meta.sites {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        let s1 = self
            .s1_even
            .iter()
            .zip(&other.s1_even)
            .map(|(a, b)| (a - b).abs());
        let x = self
            .x_site
            .iter()
            .zip(&other.x_site)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(u, v)| (u - v).abs()));
        Ok(s1.chain(x).fold(0.0, f64::max))
    }
}

fn check_l_a(l_a: usize, sites: usize) -> Result<()> {
    if l_a == 0 || l_a >= sites {
        return Err(Error::out_of_range("l_a", l_a, format!("1..{sites}")));
    }
    Ok(())
}

fn record(engine: &dyn Engine, l_a: usize, s1: &mut Vec<f64>, x: &mut Vec<Vec<f64>>) -> Result<()> {
    let v = engine.s1_even(l_a)?;
    if !(-S1_SLACK..=1.0 + S1_SLACK).contains(&v) {
        return Err(Error::Invariant(format!("S_1(even) = {v} outside [0, 1]")));
    }
    s1.push(v);
    x.push(engine.x_expectations());
    Ok(())
}

/// Applies `drive` in order, recording after preparation and after every step.
pub fn run_sequence(
    kind: EngineKind,
    drive: &[FloquetParams],
    sites: usize,
    l_a: usize,
    init: &ProductState,
) -> Result<SweepSeries> {
    check_l_a(l_a, sites)?;
    init.check_sites(sites)?;
    if let Some(p) = drive.iter().find(|p| p.sites != sites) {
        return Err(Error::DimensionMismatch {
            expected: sites,
            got: p.sites,
        });
    }
    let mut engine = make_engine(kind, init)?;
    let mut s1 = Vec::with_capacity(drive.len() + 1);
    let mut x = Vec::with_capacity(drive.len() + 1);
    record(engine.as_ref(), l_a, &mut s1, &mut x)?;
    for p in drive {
        engine.apply(p)?;
        record(engine.as_ref(), l_a, &mut s1, &mut x)?;
    }
    Ok(SweepSeries {
        s1_even: s1,
        x_site: x,
        meta: SweepMeta {
            sites,
            l_a,
            n_steps: drive.len(),
            r0: None,
            engine: kind,
            initial: init.clone(),
        },
    })
}

/// The drive parameters of steps `1..=n_steps`.
pub fn path_drive(path: &AdiabaticPath, sites: usize) -> Result<Vec<FloquetParams>> {
    (1..=path.n_steps)
        .map(|k| path.params_at(k, sites))
        .collect()
}

/// Step `k` applies `F(params_at(path, k))`.
pub fn run_adiabatic(
    kind: EngineKind,
    path: &AdiabaticPath,
    sites: usize,
    l_a: usize,
    init: &ProductState,
) -> Result<SweepSeries> {
    let mut series = run_sequence(kind, &path_drive(path, sites)?, sites, l_a, init)?;
    series.meta.r0 = Some(path.r0);
    Ok(series)
}

/// Ramps to step `n_steps/2 + epsilon`, then applies the frozen `F` of that
/// step `r` times. The series holds the value at the stop and after each
/// repetition.
pub fn run_stop_and_repeat(
    kind: EngineKind,
    path: &AdiabaticPath,
    sites: usize,
    l_a: usize,
    epsilon: i64,
    r: usize,
    init: &ProductState,
) -> Result<SweepSeries> {
    check_l_a(l_a, sites)?;
    init.check_sites(sites)?;
    let half = (path.n_steps / 2) as i64;
    if epsilon.abs() > half {
        return Err(Error::out_of_range(
            "epsilon",
            epsilon,
            format!("-{half}..={half}"),
        ));
    }
    let stop = (half + epsilon) as usize;
    let mut engine = make_engine(kind, init)?;
    for k in 1..=stop {
        engine.apply(&path.params_at(k, sites)?)?;
    }
    let frozen = path.params_at(stop, sites)?;
    let mut s1 = Vec::with_capacity(r + 1);
    let mut x = Vec::with_capacity(r + 1);
    record(engine.as_ref(), l_a, &mut s1, &mut x)?;
    for _ in 0..r {
        engine.apply(&frozen)?;
        record(engine.as_ref(), l_a, &mut s1, &mut x)?;
    }
    Ok(SweepSeries {
        s1_even: s1,
        x_site: x,
        meta: SweepMeta {
            sites,
            l_a,
            n_steps: r,
            r0: Some(path.r0),
            engine: kind,
            initial: init.clone(),
        },
    })
}

/// Runs the whole path but records `S_1(even)` only for the last `window`
/// steps, once per entry of `l_as`. Row `i` belongs to `l_as[i]`.
pub fn run_adiabatic_tail(
    kind: EngineKind,
    path: &AdiabaticPath,
    sites: usize,
    l_as: &[usize],
    window: usize,
    init: &ProductState,
) -> Result<Vec<Vec<f64>>> {
    for &l_a in l_as {
        check_l_a(l_a, sites)?;
    }
    init.check_sites(sites)?;
    if window > path.n_steps + 1 {
        return Err(Error::out_of_range(
            "window",
            window,
            format!("0..={}", path.n_steps + 1),
        ));
    }
    let mut engine = make_engine(kind, init)?;
    let first = path.n_steps + 1 - window;
    let mut rows = vec![Vec::with_capacity(window); l_as.len()];
    for k in 0..=path.n_steps {
        if k > 0 {
            engine.apply(&path.params_at(k, sites)?)?;
        }
        if k >= first {
            for (row, &l_a) in rows.iter_mut().zip(l_as) {
                row.push(engine.s1_even(l_a)?);
            }
        }
    }
    Ok(rows)
}

pub const ENGINE_AGREEMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineComparison {
    pub max_discrepancy: f64,
    pub passed: bool,
}

/// Runs `drive` on both engines and compares every recorded observable.
pub fn compare_engines(
    drive: &[FloquetParams],
    sites: usize,
    l_a: usize,
    init: &ProductState,
) -> Result<EngineComparison> {
    let a = run_sequence(EngineKind::Fermion, drive, sites, l_a, init)?;
    let b = run_sequence(EngineKind::Statevector, drive, sites, l_a, init)?;
    let max_discrepancy = a.max_discrepancy(&b)?;
    Ok(EngineComparison {
        max_discrepancy,
        passed: max_discrepancy < ENGINE_AGREEMENT_TOL,
    })
}

/// π-mode quasienergy of `F` at a single point.
pub fn pi_mode_at(p: &FloquetParams) -> Result<f64> {
    Ok(pi_mode_gap(&quasienergy_spectrum(
        &FloquetStep::new(p).to_map(),
    )?))
}

/// π-mode quasienergy of the instantaneous `F` at steps `0..=n_steps`.
pub fn pi_mode_trace(path: &AdiabaticPath, sites: usize) -> Result<Vec<f64>> {
    (0..=path.n_steps)
        .map(|k| pi_mode_at(&path.params_at(k, sites)?))
        .collect()
}
