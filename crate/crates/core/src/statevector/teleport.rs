//! Teleportation of a qubit from the left edge to the right edge through a
//! controlled Floquet operator.
//!
//! The register is the chain followed by one ancilla. On the ancilla-0
//! branch the circuit `H · C-F · Phase(χ) · H` leaves `(1 + e^{iχ}F)/2`
//! acting on the chain.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use super::spectrum::{edge_flip_operators, many_body_spectrum};
use super::state::{hadamard, Gate, PureState, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::model::{AdiabaticPath, FloquetParams, ProductState, Sign};

/// Eigenphase clustering tolerance used when selecting `χ`.
const CLUSTER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub probability: f64,
    /// Fidelity of the last site's state with `ψ`; `None` for branches of
    /// vanishing probability.
    pub fidelity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportReport {
    /// Keyed by (ancilla outcome, X-basis outcome of site 0).
    pub branches: BTreeMap<(u8, Sign), Branch>,
    pub chi: f64,
}

impl TeleportReport {
    pub fn branch(&self, ancilla: u8, q1: Sign) -> Branch {
        self.branches[&(ancilla, q1)]
    }

    pub fn total_probability(&self) -> f64 {
        self.branches.values().map(|b| b.probability).sum()
    }
}

fn check_psi(psi: [Complex64; 2]) -> Result<()> {
    let n = psi[0].norm_sqr() + psi[1].norm_sqr();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::Contract(format!("ψ has squared norm {n}")));
    }
    Ok(())
}

fn check_sites(sites: usize) -> Result<()> {
    if sites < 2 {
        return Err(Error::out_of_range("sites", sites, ">= 2"));
    }
    if sites > DEFAULT_CAP {
        return Err(Error::Capacity {
            sites,
            cap: DEFAULT_CAP,
        });
    }
    Ok(())
}

/// `χ` making `e^{iχ}F = 1` on the dominant spectral cluster of the ramped
/// edge-dressed state `(1 + v_L v_R)|+…+⟩`.
pub fn teleport_phase(ramp: &[FloquetParams], f: &FloquetParams) -> Result<f64> {
    let l = f.sites;
    let start = AdiabaticPath::new(1).params_at(0, l)?;
    let mut one = PureState::prepare(&ProductState::all_plus(l))?;
    let mut flipped = one.clone();
    let (vl, vr) = edge_flip_operators(&start);
    vl.apply(&mut flipped)?;
    vr.apply(&mut flipped)?;
    let norm = {
        let amps = one.amplitudes_mut();
        for (a, b) in amps.iter_mut().zip(flipped.amplitudes()) {
            *a += b;
        }
        amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    };
    one.amplitudes_mut().iter_mut().for_each(|a| *a /= norm);
    for p in ramp {
        one.apply_floquet(p)?;
    }
    let spec = many_body_spectrum(f)?;
    let clusters = spec.cluster_weights(&one, CLUSTER_TOL);
    Ok(clusters[0].quasienergy)
}

/// Teleports `ψ` at `θ = 0` (`n_ramp = 0`) or after an adiabatic ramp to
/// `theta1` in `n_ramp` steps and back.
pub fn teleport(
    psi: [Complex64; 2],
    sites: usize,
    theta1: f64,
    n_ramp: usize,
) -> Result<TeleportReport> {
    check_psi(psi)?;
    check_sites(sites)?;
    if theta1.is_nan() || theta1 >= FRAC_PI_4 {
        return Err(Error::Domain(format!(
            "theta1 = {theta1} is outside the topological phase (must be < π/4)"
        )));
    }
    let path = AdiabaticPath::new(n_ramp).with_endpoint(theta1);
    let ramp: Vec<FloquetParams> = (1..=n_ramp)
        .map(|k| path.params_at(k, sites))
        .collect::<Result<_>>()?;
    let f = match ramp.last() {
        Some(p) => *p,
        None => path.params_at_theta(0.0, sites)?,
    };
    let chi = teleport_phase(&ramp, &f)?;
    run(psi, sites, &ramp, Some(&f), chi)
}

/// Negative control: the same circuit with `F = 1` and `χ = 0`.
pub fn teleport_trivial(psi: [Complex64; 2], sites: usize) -> Result<TeleportReport> {
    check_psi(psi)?;
    check_sites(sites)?;
    run(psi, sites, &[], None, 0.0)
}

fn run(
    psi: [Complex64; 2],
    sites: usize,
    ramp: &[FloquetParams],
    f: Option<&FloquetParams>,
    chi: f64,
) -> Result<TeleportReport> {
    let anc = sites;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut state = PureState::from_amplitudes(psi.to_vec())?
        .kron(&PureState::prepare(&ProductState::all_plus(sites - 1))?)
        .kron(&PureState::from_amplitudes(vec![one, zero])?);

    for p in ramp {
        state.apply_floquet_on_leading(p, None)?;
    }
    let phase: Gate = [[one, zero], [zero, Complex64::from_polar(1.0, chi)]];
    state.apply_gate(anc, &hadamard())?;
    state.apply_gate(anc, &phase)?;
    if let Some(f) = f {
        state.apply_floquet_on_leading(f, Some(anc))?;
    }
    state.apply_gate(anc, &hadamard())?;
    for p in ramp.iter().rev() {
        state.apply_floquet_on_leading(p, None)?;
    }
    // measure site 0 in the X basis
    state.apply_gate(0, &hadamard())?;

    let n = sites + 1;
    let q1_mask = 1usize << (n - 1);
    let last_mask = 1usize << 1;
    let amps = state.amplitudes();
    let mut branches = BTreeMap::new();
    for a in [0u8, 1] {
        for (q, q_bit) in [(Sign::Plus, 0usize), (Sign::Minus, q1_mask)] {
            // unnormalized 2x2 density of the last chain site on this branch
            let mut rho = [[zero; 2]; 2];
            for (i, amp) in amps.iter().enumerate() {
                if (i & 1) as u8 != a || i & q1_mask != q_bit || i & last_mask != 0 {
                    continue;
                }
                let j = i | last_mask;
                let (x0, x1) = (*amp, amps[j]);
                rho[0][0] += x0 * x0.conj();
                rho[0][1] += x0 * x1.conj();
                rho[1][0] += x1 * x0.conj();
                rho[1][1] += x1 * x1.conj();
            }
            let probability = (rho[0][0] + rho[1][1]).re;
            let fidelity = (probability > 1e-14).then(|| {
                let mut f = zero;
                for r in 0..2 {
                    for c in 0..2 {
                        f += psi[r].conj() * rho[r][c] * psi[c];
                    }
                }
                f.re / probability
            });
            branches.insert(
                (a, q),
                Branch {
                    probability,
                    fidelity,
                },
            );
        }
    }
    Ok(TeleportReport { branches, chi })
}
