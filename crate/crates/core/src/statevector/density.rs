//! Reduced density matrices, charge projectors and symmetry-resolved moments.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::state::PureState;
use crate::cohomology::{character, AbelianGroup, SymResolvedSpectrum};
use crate::error::{Error, Result};
use crate::model::FloquetParams;

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    pub rho: DMatrix<Complex64>,
    pub subsystem_size: usize,
}

impl ReducedDensity {
    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.rho.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.rho - self.rho.adjoint()).camax()
    }
}

/// Trace over the rightmost `L − l_a` sites, `1 ≤ l_a < L`.
pub fn reduced_density(s: &PureState, l_a: usize) -> Result<ReducedDensity> {
    let l = s.sites();
    if l_a == 0 || l_a >= l {
        return Err(Error::out_of_range("l_a", l_a, format!("1..{l}")));
    }
    let psi = DMatrix::from_row_slice(1 << l_a, 1 << (l - l_a), s.amplitudes());
    Ok(ReducedDensity {
        rho: &psi * psi.adjoint(),
        subsystem_size: l_a,
    })
}

/// On-site unitary representation of a finite Abelian group: one generator
/// per cyclic factor, acting identically on every site of the subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalRepresentation {
    group: AbelianGroup,
    dim: usize,
    generators: Vec<DMatrix<Complex64>>,
}

impl LocalRepresentation {
    /// Checks `u_i^{e_i} = I`, unitarity and mutual commutation.
    pub fn new(
        group: AbelianGroup,
        dim: usize,
        generators: Vec<DMatrix<Complex64>>,
    ) -> Result<Self> {
        if generators.len() != group.rank() {
            return Err(Error::DimensionMismatch {
                expected: group.rank(),
                got: generators.len(),
            });
        }
        let id = DMatrix::<Complex64>::identity(dim, dim);
        for (u, &e) in generators.iter().zip(group.orders()) {
            if u.nrows() != dim || u.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: u.nrows(),
                });
            }
            if (u * u.adjoint() - &id).camax() > 1e-12 {
                return Err(Error::Contract("generator is not unitary".into()));
            }
            if (matrix_power(u, e) - &id).camax() > 1e-10 {
                return Err(Error::Contract(format!(
                    "generator does not have order dividing {e}"
                )));
            }
        }
        for a in &generators {
            for b in &generators {
                if (a * b - b * a).camax() > 1e-12 {
                    return Err(Error::Contract("generators do not commute".into()));
                }
            }
        }
        Ok(Self {
            group,
            dim,
            generators,
        })
    }

    /// `Z_2` acting by `X` on each qubit.
    pub fn z2_spin_flip() -> Self {
        let x = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        Self {
            group: AbelianGroup::zn(2).expect("Z_2"),
            dim: 2,
            generators: vec![x],
        }
    }

    /// `Z_n` acting by the cyclic shift `|k⟩ → |k+1 mod n⟩` on an `n`-level site.
    pub fn zn_shift(n: usize) -> Result<Self> {
        let group = AbelianGroup::zn(n)?;
        let mut u = DMatrix::zeros(n, n);
        for k in 0..n {
            u[((k + 1) % n, k)] = Complex64::new(1.0, 0.0);
        }
        Self::new(group, n, vec![u])
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn local_dim(&self) -> usize {
        self.dim
    }

    /// `u(g) = Π_i u_i^{g_i}` on one site.
    pub fn local(&self, g: &[usize]) -> DMatrix<Complex64> {
        self.generators
            .iter()
            .zip(g)
            .fold(DMatrix::identity(self.dim, self.dim), |acc, (u, &k)| {
                acc * matrix_power(u, k)
            })
    }

    /// `U_A(g) = u(g)^{⊗ sites}`.
    pub fn on_sites(&self, g: &[usize], sites: usize) -> DMatrix<Complex64> {
        let u = self.local(g);
        (1..sites).fold(u.clone(), |acc, _| acc.kronecker(&u))
    }
}

fn matrix_power(u: &DMatrix<Complex64>, k: usize) -> DMatrix<Complex64> {
    (0..k).fold(DMatrix::identity(u.nrows(), u.ncols()), |acc, _| acc * u)
}

/// `Π_Q = |G|⁻¹ Σ_g χ_Q(g) U_A(g)` on `sites` sites.
pub fn charge_projector(
    rep: &LocalRepresentation,
    q: &[usize],
    sites: usize,
) -> Result<DMatrix<Complex64>> {
    let group = rep.group();
    group.check(q)?;
    let dim = rep.local_dim().pow(sites as u32);
    let mut pi = DMatrix::zeros(dim, dim);
    for g in group.elements() {
        pi += rep.on_sites(&g, sites) * character(group, q, &g)?;
    }
    Ok(pi / Complex64::new(group.order() as f64, 0.0))
}

/// `S_n(Q) = Tr[Π_Q ρ^n]` for every charge of `rep`'s group.
pub fn sym_resolved_rho(
    rho: &DMatrix<Complex64>,
    rep: &LocalRepresentation,
    sites: usize,
    n: u32,
) -> Result<SymResolvedSpectrum> {
    if n == 0 {
        return Err(Error::out_of_range("moment order", 0usize, ">= 1"));
    }
    let dim = rep.local_dim().pow(sites as u32);
    if rho.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: rho.nrows(),
        });
    }
    let rho_n = (1..n).fold(rho.clone(), |acc, _| acc * rho);
    let mut entries = BTreeMap::new();
    for q in rep.group().elements() {
        let pi = charge_projector(rep, &q, sites)?;
        let v = (pi * &rho_n).trace();
        if v.im.abs() > 1e-10 {
            return Err(Error::Invariant(format!("S_{n}({q:?}) = {v} is not real")));
        }
        entries.insert(q, v.re);
    }
    Ok(SymResolvedSpectrum {
        entries,
        moment_order: n,
    })
}

/// `Z_2` spin-flip resolution of the leftmost `l_a` sites.
pub fn sym_resolved(s: &PureState, l_a: usize, n: u32) -> Result<SymResolvedSpectrum> {
    let rho = if l_a == s.sites() {
        let psi = DMatrix::from_column_slice(s.dim(), 1, s.amplitudes());
        &psi * psi.adjoint()
    } else {
        reduced_density(s, l_a)?.rho
    };
    sym_resolved_rho(&rho, &LocalRepresentation::z2_spin_flip(), l_a, n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CyclingReport {
    pub before: SymResolvedSpectrum,
    pub after: SymResolvedSpectrum,
    /// `max_Q |S_n^after(Q) − S_n^before(Q + c)|`.
    pub max_deviation: f64,
}

impl CyclingReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

/// Compares `S_n(Q)` after one period of `p` with `S_n(Q + c)` before it,
/// for the `Z_2` pumped charge `c`.
pub fn sre_cycling_check(
    p: &FloquetParams,
    s: &PureState,
    l_a: usize,
    n: u32,
    c: usize,
) -> Result<CyclingReport> {
    let group = AbelianGroup::zn(2)?;
    group.check(&[c])?;
    let before = sym_resolved(s, l_a, n)?;
    let mut evolved = s.clone();
    evolved.apply_floquet(p)?;
    let after = sym_resolved(&evolved, l_a, n)?;
    let max_deviation = group
        .elements()
        .map(|q| {
            let shifted = group.add(&q, &[c]);
            (after.entries[&q] - before.entries[&shifted]).abs()
        })
        .fold(0.0, f64::max);
    Ok(CyclingReport {
        before,
        after,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ProductState;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(sites: usize, seed: u64) -> PureState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut amps: Vec<Complex64> = (0..1 << sites)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        PureState::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn product_state_is_pure() {
        let s = PureState::prepare(&ProductState::edges_flipped(5)).unwrap();
        let r = reduced_density(&s, 2).unwrap();
        assert!((r.purity() - 1.0).abs() < 1e-12);
        assert!((r.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_pair_is_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        let s =
            PureState::from_amplitudes(vec![Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)])
                .unwrap();
        let r = reduced_density(&s, 1).unwrap();
        let half = DMatrix::<Complex64>::identity(2, 2) * Complex64::new(0.5, 0.0);
        assert!((r.rho - half).camax() < 1e-12);
    }

    #[test]
    fn spectrum_matches_schmidt_values() {
        let s = random_state(7, 3);
        let r = reduced_density(&s, 3).unwrap();
        let psi = DMatrix::from_row_slice(8, 16, s.amplitudes());
        let mut schmidt: Vec<f64> = psi.singular_values().iter().map(|x| x * x).collect();
        schmidt.sort_by(f64::total_cmp);
        for (a, b) in r.eigenvalues().iter().zip(&schmidt) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(r.hermiticity_defect() < 1e-12);
        assert!(r.eigenvalues()[0] > -1e-10);
    }

    #[test]
    fn z2_projectors() {
        let rep = LocalRepresentation::z2_spin_flip();
        let even = charge_projector(&rep, &[0], 1).unwrap();
        let h = Complex64::new(0.5, 0.0);
        let plus = DMatrix::from_row_slice(2, 2, &[h, h, h, h]);
        assert!((&even - plus).camax() < 1e-15);
        let odd = charge_projector(&rep, &[1], 3).unwrap();
        let even3 = charge_projector(&rep, &[0], 3).unwrap();
        assert_eq!(even3 + odd, DMatrix::identity(8, 8));
    }

    #[test]
    fn z4_qudit_projectors() {
        let rep = LocalRepresentation::zn_shift(4).unwrap();
        let ps: Vec<_> = (0..4)
            .map(|q| charge_projector(&rep, &[q], 2).unwrap())
            .collect();
        let mut total = DMatrix::zeros(16, 16);
        for (i, a) in ps.iter().enumerate() {
            assert!((a * a - a).camax() < 1e-10);
            for (j, b) in ps.iter().enumerate() {
                if i != j {
                    assert!((a * b).camax() < 1e-10);
                }
            }
            total += a;
        }
        assert!((total - DMatrix::identity(16, 16)).camax() < 1e-10);
    }

    #[test]
    fn all_plus_is_even() {
        let s = PureState::prepare(&ProductState::all_plus(6)).unwrap();
        let sr = sym_resolved(&s, 3, 1).unwrap();
        assert!((sr.even() - 1.0).abs() < 1e-12 && sr.odd().abs() < 1e-12);
    }

    #[test]
    fn first_moment_is_parity() {
        let s = random_state(6, 8);
        for l_a in 1..=6 {
            let sr = sym_resolved(&s, l_a, 1).unwrap();
            let p = s.subsystem_parity(l_a).unwrap();
            assert!((sr.even() - 0.5 * (1.0 + p)).abs() < 1e-12);
            assert!((sr.total() - 1.0).abs() < 1e-10);
        }
        assert!(sym_resolved(&s, 2, 0).is_err());
    }

    #[test]
    fn trivial_drive_has_no_cycling() {
        let s = random_state(4, 1);
        let r = sre_cycling_check(&FloquetParams::trivial(4).unwrap(), &s, 2, 2, 0).unwrap();
        assert!(r.holds(1e-14));
    }

    #[test]
    fn representation_validation() {
        let g = AbelianGroup::zn(3).unwrap();
        let x = LocalRepresentation::z2_spin_flip().local(&[1]);
        assert!(LocalRepresentation::new(g, 2, vec![x]).is_err());
    }
}
