//! A common driving interface over the two simulation engines.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::{CovarianceMatrix, FloquetStep};
use crate::model::{FloquetParams, ProductState};
use crate::statevector::PureState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Fermion,
    Statevector,
}

impl EngineKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineKind::Fermion => "fermion",
            EngineKind::Statevector => "statevector",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fermion" => Ok(EngineKind::Fermion),
            "statevector" => Ok(EngineKind::Statevector),
            other => Err(Error::Config(format!("unknown engine {other:?}"))),
        }
    }
}

pub trait Engine: Send {
    fn kind(&self) -> EngineKind;
    fn sites(&self) -> usize;
    /// One Floquet period.
    fn apply(&mut self, p: &FloquetParams) -> Result<()>;
    fn s1_even(&self, l_a: usize) -> Result<f64>;
    fn x_expectations(&self) -> Vec<f64>;
}

impl Engine for CovarianceMatrix {
    fn kind(&self) -> EngineKind {
        EngineKind::Fermion
    }

    fn sites(&self) -> usize {
        CovarianceMatrix::sites(self)
    }

    fn apply(&mut self, p: &FloquetParams) -> Result<()> {
        self.apply_step(&FloquetStep::new(p))
    }

    fn s1_even(&self, l_a: usize) -> Result<f64> {
        CovarianceMatrix::s1_even(self, l_a)
    }

    fn x_expectations(&self) -> Vec<f64> {
        CovarianceMatrix::x_expectations(self)
    }
}

impl Engine for PureState {
    fn kind(&self) -> EngineKind {
        EngineKind::Statevector
    }

    fn sites(&self) -> usize {
        PureState::sites(self)
    }

    fn apply(&mut self, p: &FloquetParams) -> Result<()> {
        self.apply_floquet(p)
    }

    fn s1_even(&self, l_a: usize) -> Result<f64> {
        PureState::s1_even(self, l_a)
    }

    fn x_expectations(&self) -> Vec<f64> {
        PureState::x_expectations(self)
    }
}

/// Prepares `init` on the chosen engine.
pub fn make_engine(kind: EngineKind, init: &ProductState) -> Result<Box<dyn Engine>> {
    Ok(match kind {
        EngineKind::Fermion => Box::new(CovarianceMatrix::initial(init)),
        EngineKind::Statevector => Box::new(PureState::prepare(init)?),
    })
}
