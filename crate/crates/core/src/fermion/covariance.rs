//! Majorana covariance matrices of pure Gaussian states.
//!
//! `M_ij = ⟨γ_i γ_j⟩ − δ_ij` is purely imaginary for the states reached here,
//! so it is stored as the real antisymmetric `Γ` with `M = iΓ`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::generator::{FloquetStep, OrthogonalMap, RotationLayer};
use super::pfaffian::{pfaffian, pfaffian_unchecked};
use crate::error::{Error, Result};
use crate::model::ProductState;

const PARITY_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    gamma: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Block-diagonal state with `⟨X_l⟩ = sign_l`.
    pub fn initial(state: &ProductState) -> Self {
        let n = 2 * state.sites();
        let mut gamma = DMatrix::zeros(n, n);
        for (l, s) in state.signs().iter().enumerate() {
            gamma[(2 * l, 2 * l + 1)] = s.value();
            gamma[(2 * l + 1, 2 * l)] = -s.value();
        }
        Self { gamma }
    }

    /// From `Γ = −iM`. Checks shape and antisymmetry.
    pub fn from_gamma(gamma: DMatrix<f64>) -> Result<Self> {
        let n = gamma.nrows();
        if gamma.ncols() != n || n % 2 == 1 {
            return Err(Error::Contract(format!(
                "covariance must be square of even size, got {}x{}",
                n,
                gamma.ncols()
            )));
        }
        if (&gamma + gamma.transpose()).amax() > 1e-12 {
            return Err(Error::Contract("covariance is not antisymmetric".into()));
        }
        Ok(Self { gamma })
    }

    pub fn sites(&self) -> usize {
        self.gamma.nrows() / 2
    }

    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    /// The complex covariance `M = iΓ`.
    pub fn m(&self) -> DMatrix<Complex64> {
        self.gamma.map(|v| Complex64::new(0.0, v))
    }

    /// `O M Oᵀ`.
    pub fn evolve(&self, o: &OrthogonalMap) -> Result<Self> {
        if o.dim() != self.gamma.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.gamma.nrows(),
                got: o.dim(),
            });
        }
        let om = o.matrix();
        Ok(Self {
            gamma: om * &self.gamma * om.transpose(),
        })
    }

    pub fn apply_layer(&mut self, layer: &RotationLayer) -> Result<()> {
        if layer.dim() != self.gamma.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.gamma.nrows(),
                got: layer.dim(),
            });
        }
        layer.conjugate(&mut self.gamma);
        Ok(())
    }

    /// One Floquet period in place.
    pub fn apply_step(&mut self, step: &FloquetStep) -> Result<()> {
        for layer in step.layers() {
            self.apply_layer(layer)?;
        }
        Ok(())
    }

    fn check_site_count(&self, what: &'static str, value: usize, lo: usize) -> Result<()> {
        let l = self.sites();
        if value < lo || value > l {
            return Err(Error::out_of_range(what, value, format!("{lo}..={l}")));
        }
        Ok(())
    }

    /// `⟨X_0 ⋯ X_{l_a−1}⟩ = (−i)^{l_a} Pf(M_A) = Pf(Γ_A)` for the leftmost
    /// `l_a` sites.
    pub fn subsystem_parity(&self, l_a: usize) -> Result<f64> {
        self.check_site_count("l_a", l_a, 1)?;
        let k = 2 * l_a;
        let block = self.gamma.view((0, 0), (k, k)).into_owned();
        let p = pfaffian_unchecked(block);
        if !p.is_finite() || p.abs() > 1.0 + PARITY_SLACK {
            return Err(Error::Invariant(format!(
                "subsystem parity {p} outside [-1, 1]"
            )));
        }
        Ok(p)
    }

    /// The same parity through the complex Pfaffian of `M_A`, with the
    /// imaginary part checked and discarded.
    pub fn subsystem_parity_complex(&self, l_a: usize) -> Result<f64> {
        self.check_site_count("l_a", l_a, 1)?;
        let k = 2 * l_a;
        let block = self.m().view((0, 0), (k, k)).into_owned();
        let pf = pfaffian(&block)?;
        let phase = match l_a % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
        let p = phase * pf;
        if p.im.abs() > 1e-10 {
            return Err(Error::Invariant(format!(
                "subsystem parity has imaginary part {:.3e}",
                p.im
            )));
        }
        Ok(p.re)
    }

    /// `S_1(even) = (1 + ⟨P_A⟩)/2`.
    pub fn s1_even(&self, l_a: usize) -> Result<f64> {
        Ok(0.5 * (1.0 + self.subsystem_parity(l_a)?))
    }

    /// `⟨X_l⟩ = −i M_{2l,2l+1}`.
    pub fn site_x_expectation(&self, l: usize) -> Result<f64> {
        if l >= self.sites() {
            return Err(Error::out_of_range(
                "site",
                l,
                format!("0..{}", self.sites()),
            ));
        }
        Ok(self.gamma[(2 * l, 2 * l + 1)])
    }

    pub fn x_expectations(&self) -> Vec<f64> {
        (0..self.sites())
            .map(|l| self.gamma[(2 * l, 2 * l + 1)])
            .collect()
    }

    /// `max |M² − I|`; zero for a pure Gaussian state.
    pub fn purity_defect(&self) -> f64 {
        let n = self.gamma.nrows();
        let m2 = -(&self.gamma * &self.gamma);
        (m2 - DMatrix::<f64>::identity(n, n)).amax()
    }
}
