//! Quadratic Majorana generators and the orthogonal maps they exponentiate to.
//!
//! Under the Jordan–Wigner map (site 0 leftmost)
//! `γ_{2l} = (∏_{k<l} X_k) Z_l`, `γ_{2l+1} = −(∏_{k<l} X_k) Y_l`, so that
//! `X_l = −iγ_{2l}γ_{2l+1}` and `Z_l Z_{l+1} = −iγ_{2l+1}γ_{2l+2}`.
//! A gate `exp(iθ/2 · (−iγ_aγ_b))` conjugates Majoranas by a rotation of
//! angle θ in the `(a, b)` plane, i.e. by `exp(4A)` with `A_ab = θ/4`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{FloquetParams, Layer, FLOQUET_LAYERS};

/// Real antisymmetric `A` of `H_M = Σ A_ij γ_i γ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymGenerator {
    a: DMatrix<f64>,
}

impl AntisymGenerator {
    /// Antisymmetrizes `a` exactly: stores `(a − aᵀ)/2`.
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                got: a.ncols(),
            });
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("generator has non-finite entries".into()));
        }
        let a = (&a - a.transpose()) * 0.5;
        Ok(Self { a })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            a: DMatrix::zeros(dim, dim),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// Single-particle Hamiltonian `h = 4iA`.
    pub fn single_particle_hamiltonian(&self) -> DMatrix<Complex64> {
        self.a.map(|v| Complex64::new(0.0, 4.0 * v))
    }
}

/// Majorana index pairs coupled by a layer on an `sites`-site chain.
pub fn layer_pairs(layer: Layer, sites: usize) -> Vec<(usize, usize)> {
    match layer {
        Layer::X => (0..sites).map(|l| (2 * l, 2 * l + 1)).collect(),
        Layer::Zz => (0..sites.saturating_sub(1))
            .map(|l| (2 * l + 1, 2 * l + 2))
            .collect(),
    }
}

fn layer_generator(layer: Layer, params: &FloquetParams) -> AntisymGenerator {
    let n = 2 * params.sites;
    let t = params.layer_angle(layer) / 4.0;
    let mut a = DMatrix::zeros(n, n);
    for (i, j) in layer_pairs(layer, params.sites) {
        a[(i, j)] = t;
        a[(j, i)] = -t;
    }
    AntisymGenerator { a }
}

/// Generators of `U_X(α)` and `U_ZZ(β)`, in that order.
pub fn jw_generators(params: &FloquetParams) -> (AntisymGenerator, AntisymGenerator) {
    (
        layer_generator(Layer::X, params),
        layer_generator(Layer::Zz, params),
    )
}

/// Real orthogonal `O` acting on Majorana index vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMap {
    o: DMatrix<f64>,
}

impl OrthogonalMap {
    pub fn identity(dim: usize) -> Self {
        Self {
            o: DMatrix::identity(dim, dim),
        }
    }

    /// Wraps `o` after checking `oᵀo ≈ I` to `tol`.
    pub fn from_matrix(o: DMatrix<f64>, tol: f64) -> Result<Self> {
        let map = Self { o };
        let defect = map.orthogonality_defect();
        if defect > tol {
            return Err(Error::Numeric(format!(
                "matrix is not orthogonal (defect {defect:.3e})"
            )));
        }
        Ok(map)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.o
    }

    pub fn dim(&self) -> usize {
        self.o.nrows()
    }

    /// `max |oᵀo − I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let g = self.o.transpose() * &self.o;
        let n = g.nrows();
        (&g - DMatrix::<f64>::identity(n, n)).amax()
    }

    pub fn determinant(&self) -> f64 {
        self.o.clone().determinant()
    }

    pub fn inverse(&self) -> Self {
        Self {
            o: self.o.transpose(),
        }
    }

    /// Nearest orthogonal matrix (polar factor `U Vᵀ` of the SVD).
    pub fn reorthogonalize(&mut self) {
        let svd = self.o.clone().svd(true, true);
        let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
            return;
        };
        self.o = u * v_t;
    }
}

/// `exp(4A)` via the eigendecomposition of the Hermitian `h = 4iA`:
/// `exp(4A) = U exp(−iλ) U†`.
pub fn exponentiate(g: &AntisymGenerator) -> Result<OrthogonalMap> {
    if g.a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("generator has non-finite entries".into()));
    }
    let n = g.dim();
    if n == 0 {
        return Ok(OrthogonalMap::identity(0));
    }
    let eig = SymmetricEigen::new(g.single_particle_hamiltonian());
    let u = &eig.eigenvectors;
    let phases = eig.eigenvalues.map(|lam| Complex64::new(0.0, -lam).exp());
    let mut scaled = u.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    let full = scaled * u.adjoint();
    Ok(OrthogonalMap {
        o: full.map(|z| z.re),
    })
}

/// One full period with the X layer acting first: `O_zz · O_x`.
pub fn compose_step(o_zz: &OrthogonalMap, o_x: &OrthogonalMap) -> Result<OrthogonalMap> {
    compose(o_zz, o_x)
}

/// `later · earlier`.
pub fn compose(later: &OrthogonalMap, earlier: &OrthogonalMap) -> Result<OrthogonalMap> {
    if later.dim() != earlier.dim() {
        return Err(Error::DimensionMismatch {
            expected: later.dim(),
            got: earlier.dim(),
        });
    }
    Ok(OrthogonalMap {
        o: &later.o * &earlier.o,
    })
}

/// Commuting plane rotations on disjoint index pairs: the closed form of
/// `exp(4A)` for a single gate layer. Applying it costs `O(n)` per pair.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationLayer {
    pub pairs: Vec<(usize, usize)>,
    pub angle: f64,
    dim: usize,
}

impl RotationLayer {
    pub fn new(layer: Layer, params: &FloquetParams) -> Self {
        Self {
            pairs: layer_pairs(layer, params.sites),
            angle: params.layer_angle(layer),
            dim: 2 * params.sites,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn to_map(&self) -> OrthogonalMap {
        let mut o = DMatrix::identity(self.dim, self.dim);
        let (s, c) = self.angle.sin_cos();
        for &(a, b) in &self.pairs {
            o[(a, a)] = c;
            o[(a, b)] = s;
            o[(b, a)] = -s;
            o[(b, b)] = c;
        }
        OrthogonalMap { o }
    }

    /// `m ← R m Rᵀ` in place.
    pub fn conjugate(&self, m: &mut DMatrix<f64>) {
        let (s, c) = self.angle.sin_cos();
        let n = m.nrows();
        for &(a, b) in &self.pairs {
            for j in 0..n {
                let (ra, rb) = (m[(a, j)], m[(b, j)]);
                m[(a, j)] = c * ra + s * rb;
                m[(b, j)] = -s * ra + c * rb;
            }
            for i in 0..n {
                let (ca, cb) = (m[(i, a)], m[(i, b)]);
                m[(i, a)] = c * ca + s * cb;
                m[(i, b)] = -s * ca + c * cb;
            }
        }
    }
}

/// One Floquet period as its two rotation layers, in application order.
#[derive(Debug, Clone, PartialEq)]
pub struct FloquetStep {
    layers: Vec<RotationLayer>,
    dim: usize,
}

impl FloquetStep {
    pub fn new(params: &FloquetParams) -> Self {
        Self {
            layers: FLOQUET_LAYERS
                .iter()
                .map(|&l| RotationLayer::new(l, params))
                .collect(),
            dim: 2 * params.sites,
        }
    }

    pub fn layers(&self) -> &[RotationLayer] {
        &self.layers
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dense one-period map.
    pub fn to_map(&self) -> OrthogonalMap {
        self.layers
            .iter()
            .fold(OrthogonalMap::identity(self.dim), |acc, layer| {
                OrthogonalMap {
                    o: layer.to_map().o * acc.o,
                }
            })
    }
}

/// Running product of many one-period maps, projected back onto the
/// orthogonal group every `reorth_every` compositions.
#[derive(Debug, Clone)]
pub struct MapAccumulator {
    total: OrthogonalMap,
    since_reorth: usize,
    reorth_every: usize,
    count: usize,
}

impl MapAccumulator {
    pub const DEFAULT_REORTH_EVERY: usize = 100;

    pub fn new(dim: usize) -> Self {
        Self::with_period(dim, Self::DEFAULT_REORTH_EVERY)
    }

    pub fn with_period(dim: usize, reorth_every: usize) -> Self {
        Self {
            total: OrthogonalMap::identity(dim),
            since_reorth: 0,
            reorth_every: reorth_every.max(1),
            count: 0,
        }
    }

    /// Applies `step` after everything accumulated so far.
    pub fn push(&mut self, step: &OrthogonalMap) -> Result<()> {
        self.total = compose(step, &self.total)?;
        self.count += 1;
        self.since_reorth += 1;
        if self.since_reorth == self.reorth_every {
            self.total.reorthogonalize();
            self.since_reorth = 0;
        }
        Ok(())
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn map(&self) -> &OrthogonalMap {
        &self.total
    }

    pub fn into_map(self) -> OrthogonalMap {
        self.total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_generator(n: usize, rng: &mut impl Rng) -> AntisymGenerator {
        AntisymGenerator::new(DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0))).unwrap()
    }

    #[test]
    fn generators_vanish_at_zero_angle() {
        let p = FloquetParams::new(0.0, 1.3, 5).unwrap();
        let (x, _) = jw_generators(&p);
        assert_eq!(x.matrix().amax(), 0.0);
        let p = FloquetParams::new(0.4, 0.0, 5).unwrap();
        let (_, zz) = jw_generators(&p);
        assert_eq!(zz.matrix().amax(), 0.0);
    }

    #[test]
    fn generator_is_exactly_antisymmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_generator(9, &mut rng);
        let a = g.matrix();
        assert!((a + a.transpose()).amax() < 1e-14);
    }

    #[test]
    fn zero_generator_exponentiates_to_identity() {
        let o = exponentiate(&AntisymGenerator::zeros(6)).unwrap();
        assert!((o.matrix() - DMatrix::<f64>::identity(6, 6)).amax() < 1e-15);
    }

    #[test]
    fn two_by_two_block_is_rotation_by_4t() {
        let t = 0.37;
        let g = AntisymGenerator::new(DMatrix::from_row_slice(2, 2, &[0.0, t, -t, 0.0])).unwrap();
        let o = exponentiate(&g).unwrap();
        let (s, c) = (4.0 * t).sin_cos();
        let expected = DMatrix::from_row_slice(2, 2, &[c, s, -s, c]);
        assert!((o.matrix() - expected).amax() < 1e-14);
    }

    #[test]
    fn exponential_inverse_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = random_generator(10, &mut rng);
        let neg = AntisymGenerator::new(-g.matrix().clone()).unwrap();
        let o = exponentiate(&g).unwrap();
        let o_inv = exponentiate(&neg).unwrap();
        let prod = o.matrix() * o_inv.matrix();
        assert!((prod - DMatrix::<f64>::identity(10, 10)).amax() < 1e-12);
        assert!(o.orthogonality_defect() < 1e-12);
        assert!((o.determinant() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_non_finite() {
        let mut a = DMatrix::zeros(2, 2);
        a[(0, 1)] = f64::INFINITY;
        assert!(AntisymGenerator::new(a).is_err());
    }

    #[test]
    fn rotation_layers_match_dense_exponential() {
        let p = FloquetParams::new(0.7, 2.1, 6).unwrap();
        let (gx, gzz) = jw_generators(&p);
        let ox = exponentiate(&gx).unwrap();
        let ozz = exponentiate(&gzz).unwrap();
        let dense = compose_step(&ozz, &ox).unwrap();
        let step = FloquetStep::new(&p);
        assert!((step.to_map().matrix() - dense.matrix()).amax() < 1e-13);
        assert!((RotationLayer::new(Layer::X, &p).to_map().matrix() - ox.matrix()).amax() < 1e-13);
    }

    #[test]
    fn layer_conjugation_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = FloquetParams::new(0.3, -1.9, 4).unwrap();
        let layer = RotationLayer::new(Layer::Zz, &p);
        let m = DMatrix::from_fn(8, 8, |_, _| rng.gen_range(-1.0..1.0));
        let mut fast = m.clone();
        layer.conjugate(&mut fast);
        let r = layer.to_map();
        let dense = r.matrix() * &m * r.matrix().transpose();
        assert!((fast - dense).amax() < 1e-14);
    }

    #[test]
    fn compose_with_identity() {
        let p = FloquetParams::new(0.2, 0.9, 3).unwrap();
        let o = FloquetStep::new(&p).to_map();
        let id = OrthogonalMap::identity(6);
        assert_eq!(compose(&id, &o).unwrap(), o);
        assert!(compose(&OrthogonalMap::identity(4), &o).is_err());
    }

    #[test]
    fn repeated_steps_equal_exponential_of_accumulated_generator() {
        // Constant step O = exp(4A_eff) for a single antisymmetric A_eff, so
        // O^k must equal exp(4 k A_eff).
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = random_generator(8, &mut rng);
        let o = exponentiate(&g).unwrap();
        let k = 17;
        let mut acc = MapAccumulator::new(8);
        for _ in 0..k {
            acc.push(&o).unwrap();
        }
        let gk = AntisymGenerator::new(g.matrix() * k as f64).unwrap();
        let direct = exponentiate(&gk).unwrap();
        assert!((acc.map().matrix() - direct.matrix()).amax() < 1e-10);
    }

    #[test]
    fn accumulated_product_stays_orthogonal() {
        let path = crate::model::AdiabaticPath::new(10_000);
        let mut acc = MapAccumulator::new(12);
        for k in 1..=path.n_steps {
            let p = path.params_at(k, 6).unwrap();
            acc.push(&FloquetStep::new(&p).to_map()).unwrap();
        }
        assert_eq!(acc.count(), 10_000);
        assert!(acc.map().orthogonality_defect() < 1e-9);
        assert!((acc.map().determinant() - 1.0).abs() < 1e-9);
    }
}
