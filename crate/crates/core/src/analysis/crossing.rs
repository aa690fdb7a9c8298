//! Envelope crossing of the alternating parity signal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_CROSSING_STEPS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub n_c: usize,
    pub n_steps: usize,
    pub ratio: f64,
}

/// The upper envelope is whichever of the even- and odd-step subsequences
/// starts higher; both are indexed by pair `j` (steps `2j`, `2j+1`). The
/// crossing is the first linearly interpolated pair index `m_c` where the
/// upper envelope reaches 0.5, reported as `N_c = round(2 m_c)`.
///
/// `Ok(None)` means no crossing: switching persists to the end.
pub fn envelope_crossing(series: &[f64]) -> Result<Option<CrossingReport>> {
    if series.len() < MIN_CROSSING_STEPS + 1 {
        return Err(Error::out_of_range(
            "n_steps",
            series.len().saturating_sub(1),
            format!(">= {MIN_CROSSING_STEPS}"),
        ));
    }
    let n_steps = series.len() - 1;
    let even: Vec<f64> = series.iter().step_by(2).copied().collect();
    let odd: Vec<f64> = series.iter().skip(1).step_by(2).copied().collect();
    let upper = if even[0] >= odd[0] { &even } else { &odd };
    if upper[0] <= 0.5 {
        return Ok(None);
    }
    let Some(j) = upper.iter().position(|&v| v <= 0.5) else {
        return Ok(None);
    };
    let (u0, u1) = (upper[j - 1], upper[j]);
    let m_c = (j - 1) as f64 + (u0 - 0.5) / (u0 - u1);
    let n_c = ((2.0 * m_c).round() as usize).min(n_steps);
    Ok(Some(CrossingReport {
        n_c,
        n_steps,
        ratio: n_c as f64 / n_steps as f64,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decaying(n: usize, at: f64) -> Vec<f64> {
        (0..=n)
            .map(|k| {
                let env = 0.5 + 0.5 * (1.0 - k as f64 / at).clamp(-1.0, 1.0);
                if k % 2 == 0 {
                    env
                } else {
                    1.0 - env
                }
            })
            .collect()
    }

    #[test]
    fn perfect_alternation_has_no_crossing() {
        let s: Vec<f64> = (0..=20).map(|k| ((k + 1) % 2) as f64).collect();
        assert_eq!(envelope_crossing(&s).unwrap(), None);
    }

    #[test]
    fn linear_envelope() {
        let r = envelope_crossing(&decaying(100, 50.0)).unwrap().unwrap();
        assert_eq!(r.n_c, 50);
        assert!((r.ratio - 0.5).abs() < 1e-12);
    }

    #[test]
    fn swap_invariant() {
        let s = decaying(101, 37.0);
        let swapped: Vec<f64> = s
            .chunks(2)
            .flat_map(|c| {
                if c.len() == 2 {
                    vec![c[1], c[0]]
                } else {
                    c.to_vec()
                }
            })
            .collect();
        assert_eq!(
            envelope_crossing(&s).unwrap(),
            envelope_crossing(&swapped).unwrap()
        );
    }

    #[test]
    fn too_short() {
        assert!(envelope_crossing(&[1.0, 0.0, 1.0]).is_err());
    }
}
