//! Dense `2^n` amplitude vectors with site 0 as the most significant bit.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{FloquetParams, ProductState, Sign};

/// Default largest chain length; the teleportation ancilla may add one more.
pub const DEFAULT_CAP: usize = 14;

pub type Gate = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn pauli_x() -> Gate {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub fn pauli_z() -> Gate {
    [[ONE, ZERO], [ZERO, -ONE]]
}

pub fn hadamard() -> Gate {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// `exp(iθX) = cos θ + i sin θ X`.
pub fn exp_i_x(theta: f64) -> Gate {
    let c = Complex64::new(theta.cos(), 0.0);
    let s = Complex64::new(0.0, theta.sin());
    [[c, s], [s, c]]
}

pub fn gate_mul(a: &Gate, b: &Gate) -> Gate {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn gate_adjoint(a: &Gate) -> Gate {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

/// In-place `H^{⊗n}` (fast Walsh–Hadamard transform).
pub fn hadamard_all(amps: &mut [Complex64]) {
    let n = amps.len();
    let norm = 1.0 / (n as f64).sqrt();
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (amps[i], amps[i + h]);
                amps[i] = a + b;
                amps[i + h] = a - b;
            }
        }
        h *= 2;
    }
    for a in amps.iter_mut() {
        *a *= norm;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Vec<Complex64>,
    sites: usize,
}

impl PureState {
    pub fn prepare(state: &ProductState) -> Result<Self> {
        Self::prepare_with_cap(state, DEFAULT_CAP)
    }

    pub fn prepare_with_cap(state: &ProductState, cap: usize) -> Result<Self> {
        let sites = state.sites();
        if sites > cap {
            return Err(Error::Capacity { sites, cap });
        }
        let dim = 1usize << sites;
        let norm = (dim as f64).sqrt().recip();
        let amps = (0..dim)
            .map(|i| {
                let minus_ones = state
                    .signs()
                    .iter()
                    .enumerate()
                    .filter(|&(l, s)| *s == Sign::Minus && i & (1 << (sites - 1 - l)) != 0)
                    .count();
                let sign = if minus_ones % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(sign * norm, 0.0)
            })
            .collect();
        Ok(Self { amps, sites })
    }

    /// Checks the length is a power of two and the norm is one to `1e−12`.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::Contract(format!(
                "amplitude vector length {dim} is not a power of two"
            )));
        }
        let s = Self {
            sites: dim.trailing_zeros() as usize,
            amps,
        };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Contract(format!("state has norm {norm}")));
        }
        Ok(s)
    }

    /// No normalization check; for intermediate projected vectors.
    pub(crate) fn from_raw(amps: Vec<Complex64>) -> Self {
        let sites = amps.len().trailing_zeros() as usize;
        Self { amps, sites }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `self ⊗ other`, with `self` on the leading sites.
    pub fn kron(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self {
            amps,
            sites: self.sites + other.sites,
        }
    }

    fn mask(&self, site: usize) -> usize {
        1 << (self.sites - 1 - site)
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.sites {
            return Err(Error::out_of_range(
                "site",
                site,
                format!("0..{}", self.sites),
            ));
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, site: usize, u: &Gate) -> Result<()> {
        self.apply_controlled_gate(site, u, None)
    }

    /// Applies `u` on `site` in the subspace where `control` (if any) is 1.
    pub fn apply_controlled_gate(
        &mut self,
        site: usize,
        u: &Gate,
        control: Option<usize>,
    ) -> Result<()> {
        self.check_site(site)?;
        let cmask = match control {
            Some(c) => {
                self.check_site(c)?;
                if c == site {
                    return Err(Error::Contract("control equals target".into()));
                }
                self.mask(c)
            }
            None => 0,
        };
        let m = self.mask(site);
        for i in 0..self.amps.len() {
            if i & m != 0 || i & cmask != cmask {
                continue;
            }
            let j = i | m;
            let (a0, a1) = (self.amps[i], self.amps[j]);
            self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
            self.amps[j] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ok(())
    }

    /// `⟨X_site⟩`.
    pub fn x_expectation(&self, site: usize) -> Result<f64> {
        self.check_site(site)?;
        let m = self.mask(site);
        let v: Complex64 = (0..self.amps.len())
            .map(|i| self.amps[i].conj() * self.amps[i ^ m])
            .sum();
        Ok(v.re)
    }

    pub fn x_expectations(&self) -> Vec<f64> {
        (0..self.sites)
            .map(|l| self.x_expectation(l).unwrap_or(f64::NAN))
            .collect()
    }

    /// `⟨X_0 ⋯ X_{l_a−1}⟩`.
    pub fn subsystem_parity(&self, l_a: usize) -> Result<f64> {
        if l_a == 0 || l_a > self.sites {
            return Err(Error::out_of_range(
                "l_a",
                l_a,
                format!("1..={}", self.sites),
            ));
        }
        let flip = ((1usize << l_a) - 1) << (self.sites - l_a);
        let v: Complex64 = (0..self.amps.len())
            .map(|i| self.amps[i].conj() * self.amps[i ^ flip])
            .sum();
        Ok(v.re)
    }

    pub fn s1_even(&self, l_a: usize) -> Result<f64> {
        Ok(0.5 * (1.0 + self.subsystem_parity(l_a)?))
    }

    /// One period `F = U_ZZ(β) U_X(α)` on the whole register.
    pub fn apply_floquet(&mut self, p: &FloquetParams) -> Result<()> {
        if p.sites != self.sites {
            return Err(Error::DimensionMismatch {
                expected: self.sites,
                got: p.sites,
            });
        }
        self.apply_floquet_on_leading(p, None)
    }

    /// `F` on the leading `p.sites` sites, optionally controlled by a later site.
    pub fn apply_floquet_on_leading(
        &mut self,
        p: &FloquetParams,
        control: Option<usize>,
    ) -> Result<()> {
        let l = p.sites;
        if l > self.sites {
            return Err(Error::DimensionMismatch {
                expected: self.sites,
                got: l,
            });
        }
        if let Some(c) = control {
            if c < l {
                return Err(Error::Contract("control must lie outside the chain".into()));
            }
            self.check_site(c)?;
        }
        let kick = exp_i_x(p.alpha / 2.0);
        for site in 0..l {
            self.apply_controlled_gate(site, &kick, control)?;
        }
        let cmask = control.map_or(0, |c| self.mask(c));
        let shift = self.sites - l;
        let bond_mask = (1usize << (l - 1)) - 1;
        let bonds = (l - 1) as i64;
        let phases: Vec<Complex64> = (0..=l - 1)
            .map(|walls| {
                let zz = (bonds - 2 * walls as i64) as f64;
                Complex64::from_polar(1.0, p.beta / 2.0 * zz)
            })
            .collect();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & cmask != cmask {
                continue;
            }
            let x = i >> shift;
            let walls = ((x ^ (x >> 1)) & bond_mask).count_ones() as usize;
            *a *= phases[walls];
        }
        Ok(())
    }
}
