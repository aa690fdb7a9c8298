//! The kicked Ising drive `F(α, β) = U_ZZ(β) · U_X(α)` on an open chain, the
//! adiabatic path through its phase diagram, and X-basis product states.
//!
//! `U_X(α) = exp(i α/2 Σ_l X_l)` and `U_ZZ(β) = exp(i β/2 Σ_l Z_l Z_{l+1})`.
//! One application of `F` is one unit of stroboscopic time.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TAU: f64 = 2.0 * PI;

/// One of the two gate layers of a Floquet period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layer {
    /// Transverse kick `exp(i α/2 Σ X_l)`.
    X,
    /// Ising coupling `exp(i β/2 Σ Z_l Z_{l+1})`.
    Zz,
}

/// Layers of one period in application order. Both engines consume this.
pub const FLOQUET_LAYERS: [Layer; 2] = [Layer::X, Layer::Zz];

/// Fold an angle into `(-2π, 2π]`.
fn fold_angle(x: f64) -> f64 {
    if x > -TAU && x <= TAU {
        x
    } else {
        x % TAU
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloquetParams {
    pub alpha: f64,
    pub beta: f64,
    pub sites: usize,
}

impl FloquetParams {
    pub fn new(alpha: f64, beta: f64, sites: usize) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Numeric(format!(
                "drive angles must be finite, got ({alpha}, {beta})"
            )));
        }
        if sites < 2 {
            return Err(Error::out_of_range("sites", sites as i64, ">= 2"));
        }
        Ok(Self {
            alpha: fold_angle(alpha),
            beta: fold_angle(beta),
            sites,
        })
    }

    /// The exactly solvable point `(α, β) = (0, π)` where `F ∝ Z_1 Z_L`.
    pub fn sweet_spot(sites: usize) -> Result<Self> {
        Self::new(0.0, PI, sites)
    }

    /// `(0, 0)`: the identity drive.
    pub fn trivial(sites: usize) -> Result<Self> {
        Self::new(0.0, 0.0, sites)
    }

    pub fn layer_angle(&self, layer: Layer) -> f64 {
        match layer {
            Layer::X => self.alpha,
            Layer::Zz => self.beta,
        }
    }

    pub fn with_sites(self, sites: usize) -> Result<Self> {
        Self::new(self.alpha, self.beta, sites)
    }
}

/// The path `α = r0 cos θ`, `β = π − r0 sin θ`, traversed in `n_steps` equal
/// increments of θ up to `endpoint_theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdiabaticPath {
    pub r0: f64,
    pub n_steps: usize,
    pub endpoint_theta: f64,
}

impl AdiabaticPath {
    pub fn new(n_steps: usize) -> Self {
        Self {
            r0: 1.0,
            n_steps,
            endpoint_theta: FRAC_PI_2,
        }
    }

    pub fn with_r0(mut self, r0: f64) -> Self {
        self.r0 = r0;
        self
    }

    pub fn with_endpoint(mut self, endpoint_theta: f64) -> Self {
        self.endpoint_theta = endpoint_theta;
        self
    }

    /// θ at `step`; the transition `θ = π/4` sits at `n_steps / 2` for the
    /// default endpoint.
    pub fn theta(&self, step: usize) -> Result<f64> {
        if step > self.n_steps {
            return Err(Error::out_of_range(
                "step",
                step as i64,
                format!("0..={}", self.n_steps),
            ));
        }
        if self.n_steps == 0 {
            return Ok(0.0);
        }
        Ok(self.endpoint_theta * step as f64 / self.n_steps as f64)
    }

    pub fn params_at(&self, step: usize, sites: usize) -> Result<FloquetParams> {
        let theta = self.theta(step)?;
        self.params_at_theta(theta, sites)
    }

    pub fn params_at_theta(&self, theta: f64, sites: usize) -> Result<FloquetParams> {
        FloquetParams::new(self.r0 * theta.cos(), PI - self.r0 * theta.sin(), sites)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `⊗_l |±⟩_l`, site 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProductState {
    signs: Vec<Sign>,
}

impl ProductState {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::Contract(
                "product state needs at least one site".into(),
            ));
        }
        Ok(Self { signs })
    }

    pub fn all_plus(sites: usize) -> Self {
        Self {
            signs: vec![Sign::Plus; sites.max(1)],
        }
    }

    /// `|−++…++−⟩`.
    pub fn edges_flipped(sites: usize) -> Self {
        let mut state = Self::all_plus(sites);
        state.signs[0] = Sign::Minus;
        let last = state.signs.len() - 1;
        state.signs[last] = Sign::Minus;
        state
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn sites(&self) -> usize {
        self.signs.len()
    }

    pub fn sign(&self, site: usize) -> Sign {
        self.signs[site]
    }

    pub fn check_sites(&self, sites: usize) -> Result<()> {
        if self.sites() != sites {
            return Err(Error::DimensionMismatch {
                expected: sites,
                got: self.sites(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for ProductState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            f.write_str(match s {
                Sign::Plus => "+",
                Sign::Minus => "-",
            })?;
        }
        Ok(())
    }
}

impl FromStr for ProductState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(Error::Config(format!(
                    "product state may only contain '+' and '-', found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(signs)
    }
}
