//! Exact diagonalization of the many-body Floquet operator.
//!
//! The total parity `P = Π_l X_l` commutes with `F`, so `F` is assembled in
//! the X basis, where `P` is diagonal, and each parity block is brought to
//! complex Schur form separately.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::state::{exp_i_x, gate_adjoint, gate_mul, hadamard_all, pauli_z, Gate, PureState};
use crate::error::{Error, Result};
use crate::fermion::fold_phase;
use crate::model::FloquetParams;

/// Largest chain for which the dense `2^L × 2^L` spectrum is computed.
pub const SPECTRUM_CAP: usize = 10;

#[derive(Debug, Clone)]
pub struct ManyBodySpectrum {
    /// `ω_j` with `F v_j = e^{−iω_j} v_j`, in `(−π, π]`.
    pub quasienergies: Vec<f64>,
    /// Columns are eigenvectors in the computational basis.
    pub eigenvectors: DMatrix<Complex64>,
    /// Total parity `±1` of each eigenvector.
    pub parities: Vec<i8>,
    sites: usize,
}

/// A group of eigenvalues closer than a tolerance, with the squared norm of
/// a state's projection onto their span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralCluster {
    pub quasienergy: f64,
    pub weight: f64,
    pub size: usize,
}

impl ManyBodySpectrum {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn len(&self) -> usize {
        self.quasienergies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quasienergies.is_empty()
    }

    pub fn eigenstate(&self, j: usize) -> PureState {
        PureState::from_raw(self.eigenvectors.column(j).iter().copied().collect())
    }

    /// `|⟨v_j|ψ⟩|²` for every eigenvector.
    pub fn overlaps(&self, psi: &PureState) -> Vec<f64> {
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        (self.eigenvectors.adjoint() * v)
            .iter()
            .map(|c| c.norm_sqr())
            .collect()
    }

    /// Clusters eigenphases within `tol` (circularly) and sums the weights
    /// of `psi` in each, sorted by decreasing weight.
    pub fn cluster_weights(&self, psi: &PureState, tol: f64) -> Vec<SpectralCluster> {
        let w = self.overlaps(psi);
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.quasienergies[a].total_cmp(&self.quasienergies[b]));
        let mut clusters: Vec<(Vec<usize>, f64)> = Vec::new();
        for &j in &order {
            let omega = self.quasienergies[j];
            match clusters.last_mut() {
                Some((members, anchor)) if fold_phase(omega - *anchor).abs() <= tol => {
                    members.push(j)
                }
                _ => clusters.push((vec![j], omega)),
            }
        }
        // join the first and last clusters across the ±π branch cut
        if clusters.len() > 1 {
            let first = clusters[0].1;
            let last_anchor = *clusters.last().map(|(m, _)| m.last().unwrap()).unwrap();
            if fold_phase(self.quasienergies[last_anchor] - first).abs() <= tol {
                let (tail, _) = clusters.pop().unwrap();
                clusters[0].0.extend(tail);
            }
        }
        let mut out: Vec<SpectralCluster> = clusters
            .into_iter()
            .map(|(members, anchor)| SpectralCluster {
                quasienergy: anchor,
                weight: members.iter().map(|&j| w[j]).sum(),
                size: members.len(),
            })
            .collect();
        out.sort_by(|a, b| b.weight.total_cmp(&a.weight));
        out
    }

    /// `max_j ‖F v_j − e^{−iω_j} v_j‖`.
    pub fn residual(&self, p: &FloquetParams) -> Result<f64> {
        let mut worst = 0.0f64;
        for j in 0..self.len() {
            let v = self.eigenstate(j);
            let mut fv = v.clone();
            fv.apply_floquet(p)?;
            let phase = Complex64::from_polar(1.0, -self.quasienergies[j]);
            let r = fv
                .amplitudes()
                .iter()
                .zip(v.amplitudes())
                .map(|(a, b)| (a - phase * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r);
        }
        Ok(worst)
    }
}

/// Full eigendecomposition of `F(p)`, `p.sites ≤ SPECTRUM_CAP`.
pub fn many_body_spectrum(p: &FloquetParams) -> Result<ManyBodySpectrum> {
    let l = p.sites;
    if l > SPECTRUM_CAP {
        return Err(Error::Capacity {
            sites: l,
            cap: SPECTRUM_CAP,
        });
    }
    let dim = 1usize << l;
    // F in the X basis, column by column.
    let mut fx = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..dim {
        let mut col = vec![Complex64::new(0.0, 0.0); dim];
        col[j] = Complex64::new(1.0, 0.0);
        hadamard_all(&mut col);
        let mut s = PureState::from_raw(col);
        s.apply_floquet(p)?;
        let mut out = s.into_amplitudes();
        hadamard_all(&mut out);
        fx.set_column(j, &nalgebra::DVector::from_vec(out));
    }

    let mut quasienergies = Vec::with_capacity(dim);
    let mut parities = Vec::with_capacity(dim);
    let mut eigenvectors = DMatrix::<Complex64>::zeros(dim, dim);
    let mut col = 0;
    for parity in [0u32, 1] {
        let idx: Vec<usize> = (0..dim).filter(|i| i.count_ones() % 2 == parity).collect();
        let k = idx.len();
        let block = DMatrix::from_fn(k, k, |a, b| fx[(idx[a], idx[b])]);
        let (q, t) = Schur::try_new(block, f64::EPSILON, 1_000_000)
            .ok_or_else(|| Error::Numeric("complex Schur iteration did not converge".into()))?
            .unpack();
        for c in 0..k {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            for (a, &i) in idx.iter().enumerate() {
                v[i] = q[(a, c)];
            }
            hadamard_all(&mut v);
            eigenvectors.set_column(col, &nalgebra::DVector::from_vec(v));
            quasienergies.push(fold_phase(-t[(c, c)].arg()));
            parities.push(if parity == 0 { 1 } else { -1 });
            col += 1;
        }
    }
    let spec = ManyBodySpectrum {
        quasienergies,
        eigenvectors,
        parities,
        sites: l,
    };
    let res = spec.residual(p)?;
    if res > 1e-9 {
        return Err(Error::Numeric(format!(
            "eigenpair residual {res:.3e} exceeds 1e-9"
        )));
    }
    Ok(spec)
}

/// Single-site unitary at a fixed site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeOperator {
    pub site: usize,
    pub matrix: Gate,
}

impl EdgeOperator {
    pub fn apply(&self, s: &mut PureState) -> Result<()> {
        s.apply_gate(self.site, &self.matrix)
    }
}

/// `v = e^{−iα/4 X} Z e^{iα/4 X}` on the first and last sites.
pub fn edge_flip_operators(p: &FloquetParams) -> (EdgeOperator, EdgeOperator) {
    let v = gate_mul(
        &gate_mul(&exp_i_x(-p.alpha / 4.0), &pauli_z()),
        &exp_i_x(p.alpha / 4.0),
    );
    debug_assert!({
        let u = gate_mul(&v, &gate_adjoint(&v));
        (u[0][0] - 1.0).norm() < 1e-12 && u[0][1].norm() < 1e-12
    });
    (
        EdgeOperator { site: 0, matrix: v },
        EdgeOperator {
            site: p.sites - 1,
            matrix: v,
        },
    )
}
