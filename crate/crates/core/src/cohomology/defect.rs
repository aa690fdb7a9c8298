//! Cocycles, defect partition functions `Z_g` of SPT fixed points, and the
//! degeneracy signatures of `S_1(Q)` they produce.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::group::{character, root_of_unity, AbelianGroup, Element, SymResolvedSpectrum};
use crate::error::{Error, Result};

/// Cocycle class `p_{ij}`, `i < j`, with `0 ≤ p_{ij} < gcd(e_i, e_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SPTClass {
    p: Vec<Vec<usize>>,
}

impl SPTClass {
    /// `p` is read on its strict upper triangle; other entries must be zero.
    pub fn new(group: &AbelianGroup, p: Vec<Vec<usize>>) -> Result<Self> {
        let l = group.rank();
        if p.len() != l || p.iter().any(|row| row.len() != l) {
            return Err(Error::DimensionMismatch {
                expected: l,
                got: p.len(),
            });
        }
        let e = group.orders();
        for i in 0..l {
            for j in 0..l {
                if j <= i {
                    if p[i][j] != 0 {
                        return Err(Error::Contract(format!(
                            "p[{i}][{j}] must vanish below the diagonal"
                        )));
                    }
                } else {
                    let d = e[i].gcd(&e[j]);
                    if p[i][j] >= d {
                        return Err(Error::out_of_range("p_ij", p[i][j], format!("0..{d}")));
                    }
                }
            }
        }
        Ok(Self { p })
    }

    pub fn trivial(group: &AbelianGroup) -> Self {
        let l = group.rank();
        Self {
            p: vec![vec![0; l]; l],
        }
    }

    /// Class `m` of `Z_N × Z_N`.
    pub fn zn_zn(n: usize, m: usize) -> Result<(AbelianGroup, Self)> {
        let group = AbelianGroup::zn_zn(n)?;
        let spt = Self::new(&group, vec![vec![0, m], vec![0, 0]])?;
        Ok((group, spt))
    }

    pub fn p(&self) -> &[Vec<usize>] {
        &self.p
    }

    /// `d = gcd(N, m)` for a rank-2 group.
    pub fn d(&self, group: &AbelianGroup) -> Option<usize> {
        let e = group.orders();
        (e.len() == 2).then(|| e[0].gcd(&e[1]).gcd(&self.p[0][1]))
    }
}

fn cocycle_numerator(group: &AbelianGroup, spt: &SPTClass, a: &[usize], b: &[usize]) -> usize {
    let e = group.orders();
    let ex = group.exponent();
    let mut num = 0;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let p = spt.p[i][j];
            if p == 0 {
                continue;
            }
            let d = e[i].gcd(&e[j]);
            num += (p * a[i] % d) * b[j] % d * (ex / d);
        }
    }
    num % ex
}

/// `ω(a, b) = exp(2πi Σ_{i<j} p_{ij} a_i b_j / d_{ij})`.
pub fn cocycle(
    group: &AbelianGroup,
    spt: &SPTClass,
    a: &[usize],
    b: &[usize],
) -> Result<Complex64> {
    group.check(a)?;
    group.check(b)?;
    Ok(root_of_unity(
        cocycle_numerator(group, spt, a, b),
        group.exponent(),
    ))
}

/// A `U(1)`-valued function on the group, indexed like `AbelianGroup::elements`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coboundary {
    values: Vec<Complex64>,
}

impl Coboundary {
    pub fn trivial(group: &AbelianGroup) -> Self {
        Self {
            values: vec![Complex64::new(1.0, 0.0); group.order()],
        }
    }

    pub fn random(group: &AbelianGroup, rng: &mut impl Rng) -> Self {
        Self {
            values: (0..group.order())
                .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI)))
                .collect(),
        }
    }

    pub fn new(group: &AbelianGroup, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::DimensionMismatch {
                expected: group.order(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| (v.norm() - 1.0).abs() > 1e-12) {
            return Err(Error::Contract(
                "coboundary values must have unit modulus".into(),
            ));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

#[derive(Debug, Clone)]
pub struct DefectTable {
    group: AbelianGroup,
    z: Vec<Complex64>,
    h: Vec<usize>,
}

impl DefectTable {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn z(&self, g: &[usize]) -> Complex64 {
        self.z[self.group.index_of(g)]
    }

    pub fn z_values(&self) -> &[Complex64] {
        &self.z
    }

    /// Indices of `H = {g : Z_g ≠ 0}`.
    pub fn h_indices(&self) -> &[usize] {
        &self.h
    }

    pub fn h_elements(&self) -> Vec<Element> {
        self.h.iter().map(|&i| self.group.element(i)).collect()
    }

    pub fn max_imag(&self) -> f64 {
        self.z.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

const DEFECT_TOL: f64 = 1e-8;

/// `Z_g = |G|⁻³ [Σ_{s1} β(s1 g)/(ω(g,s1)β(s1))] [Σ_{s2} ω(s2,g)β(s2)/β(s2 g)] f(g)`
/// with `f(g) = Σ_{s3} ω(g,s3)/ω(s3,g)`.
pub fn defect_table(
    group: &AbelianGroup,
    spt: &SPTClass,
    beta: &Coboundary,
) -> Result<DefectTable> {
    let n = group.order();
    if beta.values.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: beta.values.len(),
        });
    }
    let elems: Vec<Element> = group.elements().collect();
    let omega = |a: &Element, b: &Element| {
        root_of_unity(cocycle_numerator(group, spt, a, b), group.exponent())
    };
    let b = &beta.values;
    let norm = (n as f64).powi(3);
    let mut z = Vec::with_capacity(n);
    for g in &elems {
        let mut first = Complex64::new(0.0, 0.0);
        let mut second = Complex64::new(0.0, 0.0);
        let mut f = Complex64::new(0.0, 0.0);
        for (si, s) in elems.iter().enumerate() {
            let sg = group.index_of(&group.add(s, g));
            first += b[sg] / (omega(g, s) * b[si]);
            second += omega(s, g) * b[si] / b[sg];
            f += omega(g, s) / omega(s, g);
        }
        z.push(first * second * f / norm);
    }

    let zmax = z.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let scale = zmax.max(1.0);
    for (i, g) in elems.iter().enumerate() {
        if z[i].im.abs() > DEFECT_TOL * scale {
            return Err(Error::Invariant(format!("Z_{g:?} = {} is not real", z[i])));
        }
        let inv = group.index_of(&group.neg(g));
        if (z[inv] - z[i].conj()).norm() > DEFECT_TOL * scale {
            return Err(Error::Invariant(format!(
                "Z of {g:?} and its inverse are not conjugate"
            )));
        }
    }

    let h: Vec<usize> = (0..n).filter(|&i| z[i].norm() > 1e-9 * zmax).collect();
    let mut in_h = vec![false; n];
    for &i in &h {
        in_h[i] = true;
    }
    for &i in &h {
        for &j in &h {
            let k = group.index_of(&group.add(&elems[i], &elems[j]));
            if !in_h[k] {
                return Err(Error::Invariant(format!(
                    "support of Z_g is not closed: {:?} + {:?} = {:?}",
                    elems[i], elems[j], elems[k]
                )));
            }
        }
    }
    Ok(DefectTable {
        group: group.clone(),
        z,
        h,
    })
}

fn resolve(table: &DefectTable, weights: impl Fn(usize) -> f64) -> Result<SymResolvedSpectrum> {
    let group = &table.group;
    let n = group.order() as f64;
    let h = table.h_elements();
    let mut entries = std::collections::BTreeMap::new();
    for q in group.elements() {
        let mut s = Complex64::new(0.0, 0.0);
        for (&gi, g) in table.h.iter().zip(&h) {
            s += character(group, &q, g)? * table.z[gi] * weights(gi);
        }
        s /= n;
        if s.im.abs() > 1e-10 {
            return Err(Error::Invariant(format!("S_1({q:?}) = {s} is not real")));
        }
        entries.insert(q, s.re);
    }
    Ok(SymResolvedSpectrum {
        entries,
        moment_order: 1,
    })
}

/// `S_1(Q) = |G|⁻¹ Σ_{g∈H} χ_Q(g) Z_g`.
pub fn sym_resolved_from_defects(table: &DefectTable) -> Result<SymResolvedSpectrum> {
    resolve(table, |_| 1.0)
}

/// `S_1(Q)` after multiplying `Z_g` by seeded positive weights with
/// `w(g) = w(g⁻¹)` and `w(e) = 1`. This keeps every degeneracy that the
/// support `H` and the inversion symmetry enforce and lifts accidental ones.
pub fn deformed_sym_resolved(table: &DefectTable, seed: u64) -> Result<SymResolvedSpectrum> {
    let group = &table.group;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = vec![0.0; group.order()];
    for (i, g) in group.elements().enumerate() {
        let inv = group.index_of(&group.neg(&g));
        if inv < i {
            w[i] = w[inv];
        } else {
            w[i] = rng.gen_range(0.5..1.5);
        }
    }
    w[0] = 1.0;
    resolve(table, |i| w[i])
}

/// Degeneracy counts of a list of values, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature(pub Vec<usize>);

impl Signature {
    pub fn from_counts(mut counts: Vec<usize>) -> Self {
        counts.sort_unstable();
        Self(counts)
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Groups values equal to within `1e−9` relative to the largest magnitude.
pub fn signature_of_values(values: &[f64]) -> Signature {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let scale = v
        .iter()
        .map(|x| x.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let tol = 1e-9 * scale;
    let mut counts = Vec::new();
    let mut start = None;
    for &x in &v {
        match start {
            Some(s) if x - s <= tol => *counts.last_mut().unwrap() += 1,
            _ => {
                start = Some(x);
                counts.push(1);
            }
        }
    }
    Signature::from_counts(counts)
}

pub fn signature(spectrum: &SymResolvedSpectrum) -> Signature {
    signature_of_values(&spectrum.values())
}

/// Signature of the generically deformed spectrum.
pub fn protected_signature(table: &DefectTable, seed: u64) -> Result<Signature> {
    Ok(signature(&deformed_sym_resolved(table, seed)?))
}

/// Closed form for class `m` of `Z_N × Z_N`, `d = gcd(N, m)`:
/// `(2(N/d)²` repeated `(d²−1)/2` times, `(N/d)²)` for odd `d` and
/// `(2(N/d)²` repeated `(d²−4)/2` times, `(N/d)²` four times`)` for even `d`.
pub fn zn_zn_signature(n: usize, m: usize) -> Signature {
    let d = n.gcd(&m);
    let s = (n / d) * (n / d);
    let mut counts = Vec::new();
    if d % 2 == 1 {
        counts.extend(std::iter::repeat_n(2 * s, (d * d - 1) / 2));
        counts.push(s);
    } else {
        counts.extend(std::iter::repeat_n(2 * s, (d * d - 4) / 2));
        counts.extend(std::iter::repeat_n(s, 4));
    }
    Signature::from_counts(counts)
}

/// `(|H²[G, U(1)]|, |H²[G × Z, U(1)]|) = (Π_{i<j} gcd(e_i, e_j), that · |G|)`.
pub fn fspt_count(group: &AbelianGroup) -> (usize, usize) {
    let e = group.orders();
    let mut h2 = 1;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            h2 *= e[i].gcd(&e[j]);
        }
    }
    (h2, h2 * group.order())
}

#[derive(Debug, Clone)]
pub struct GaugeFailure {
    pub trial: usize,
    pub coboundary: Vec<Complex64>,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct GaugeReport {
    pub trials: usize,
    pub signature: Signature,
    pub failure: Option<GaugeFailure>,
}

impl GaugeReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Recomputes the table under `trials` random coboundaries and checks that
/// `H`, the protected signature and the family structure of the raw `S_1`
/// are unchanged.
pub fn gauge_invariance_check(
    group: &AbelianGroup,
    spt: &SPTClass,
    trials: usize,
    seed: u64,
) -> Result<GaugeReport> {
    if trials == 0 {
        return Err(Error::out_of_range("trials", 0usize, ">= 1"));
    }
    let base = defect_table(group, spt, &Coboundary::trivial(group))?;
    let base_sig = protected_signature(&base, seed)?;
    let parts = super::families::families(&base)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let beta = Coboundary::random(group, &mut rng);
        let fail = |reason: String| GaugeReport {
            trials,
            signature: base_sig.clone(),
            failure: Some(GaugeFailure {
                trial,
                coboundary: beta.values.clone(),
                reason,
            }),
        };
        let table = match defect_table(group, spt, &beta) {
            Ok(t) => t,
            Err(e) => return Ok(fail(e.to_string())),
        };
        if table.h != base.h {
            return Ok(fail("support H changed".into()));
        }
        let sig = protected_signature(&table, seed)?;
        if sig != base_sig {
            return Ok(fail(format!("signature {sig} differs from {base_sig}")));
        }
        let s1 = sym_resolved_from_defects(&table)?;
        for members in parts.families.values() {
            let first = s1.get(&members[0]).unwrap_or(f64::NAN);
            if members
                .iter()
                .any(|q| (s1.get(q).unwrap_or(f64::NAN) - first).abs() > 1e-9)
            {
                return Ok(fail(format!(
                    "S_1 not constant on family of {:?}",
                    members[0]
                )));
            }
        }
    }
    Ok(GaugeReport {
        trials,
        signature: base_sig,
        failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_class_has_unit_cocycle() {
        let (g, spt) = SPTClass::zn_zn(4, 0).unwrap();
        for a in g.elements() {
            for b in g.elements() {
                assert!((cocycle(&g, &spt, &a, &b).unwrap() - 1.0).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn z2_z2_cocycle_value() {
        let (g, spt) = SPTClass::zn_zn(2, 1).unwrap();
        let w = cocycle(&g, &spt, &[1, 0], &[0, 1]).unwrap();
        assert!((w + 1.0).norm() < 1e-15);
    }

    #[test]
    fn cocycle_is_bilinear_z4_z4() {
        for m in 0..4 {
            let (g, spt) = SPTClass::zn_zn(4, m).unwrap();
            let els: Vec<_> = g.elements().collect();
            for a in &els {
                for b in &els {
                    for c in &els {
                        let w = |x: &[usize], y: &[usize]| cocycle(&g, &spt, x, y).unwrap();
                        let ab = g.add(a, b);
                        let bc = g.add(b, c);
                        assert!((w(&ab, c) - w(a, c) * w(b, c)).norm() < 1e-12);
                        assert!((w(a, &bc) - w(a, b) * w(a, c)).norm() < 1e-12);
                        assert!((w(a, b) * w(&ab, c) - w(a, &bc) * w(b, c)).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn spt_class_validation() {
        let g = AbelianGroup::zn_zn(4).unwrap();
        assert!(SPTClass::new(&g, vec![vec![0, 4], vec![0, 0]]).is_err());
        assert!(SPTClass::new(&g, vec![vec![0, 1], vec![1, 0]]).is_err());
        assert_eq!(
            SPTClass::zn_zn(6, 4)
                .unwrap()
                .1
                .d(&AbelianGroup::zn_zn(6).unwrap()),
            Some(2)
        );
    }

    #[test]
    fn trivial_class_support_is_whole_group() {
        let (g, spt) = SPTClass::zn_zn(3, 0).unwrap();
        let t = defect_table(&g, &spt, &Coboundary::trivial(&g)).unwrap();
        assert_eq!(t.h_indices().len(), 9);
    }

    #[test]
    fn z2_z2_nontrivial_is_fully_degenerate() {
        let (g, spt) = SPTClass::zn_zn(2, 1).unwrap();
        let t = defect_table(&g, &spt, &Coboundary::trivial(&g)).unwrap();
        assert_eq!(t.h_elements(), vec![vec![0, 0]]);
        let s = sym_resolved_from_defects(&t).unwrap();
        for v in s.values() {
            assert!((v - 0.25).abs() < 1e-12);
        }
        assert_eq!(signature(&s), Signature(vec![4]));
    }

    #[test]
    fn z4_z4_m2_support() {
        let (g, spt) = SPTClass::zn_zn(4, 2).unwrap();
        let t = defect_table(&g, &spt, &Coboundary::trivial(&g)).unwrap();
        let expected: Vec<Element> = vec![vec![0, 0], vec![0, 2], vec![2, 0], vec![2, 2]];
        assert_eq!(t.h_elements(), expected);
        assert!(t.max_imag() < 1e-10);
    }

    #[test]
    fn restricting_to_support_changes_nothing() {
        let (g, spt) = SPTClass::zn_zn(6, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = defect_table(&g, &spt, &Coboundary::random(&g, &mut rng)).unwrap();
        let s = sym_resolved_from_defects(&t).unwrap();
        for q in g.elements() {
            let full: Complex64 = g
                .elements()
                .map(|x| character(&g, &q, &x).unwrap() * t.z(&x))
                .sum::<Complex64>()
                / g.order() as f64;
            assert!((full.re - s.get(&q).unwrap()).abs() < 1e-12);
        }
        assert!((s.total() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn signature_of_example_list() {
        assert_eq!(
            signature_of_values(&[3.0, 3.0, 5.0, 5.0, 6.0]),
            Signature(vec![1, 2, 2])
        );
        assert_eq!(signature_of_values(&[0.0, 0.0]), Signature(vec![2]));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(zn_zn_signature(4, 2), Signature(vec![4, 4, 4, 4]));
        assert_eq!(zn_zn_signature(6, 3), Signature(vec![4, 8, 8, 8, 8]));
        assert_eq!(zn_zn_signature(2, 1), Signature(vec![4]));
        assert_eq!(zn_zn_signature(5, 0).total(), 25);
    }

    #[test]
    fn fspt_counts() {
        assert_eq!(fspt_count(&AbelianGroup::zn(2).unwrap()), (1, 2));
        assert_eq!(fspt_count(&AbelianGroup::zn_zn(2).unwrap()), (2, 8));
        assert_eq!(
            fspt_count(&AbelianGroup::new(vec![2, 4, 6]).unwrap()),
            (8, 384)
        );
    }

    #[test]
    fn gauge_check_trivial_class() {
        let (g, spt) = SPTClass::zn_zn(3, 0).unwrap();
        assert!(gauge_invariance_check(&g, &spt, 3, 1).unwrap().passed());
        assert!(gauge_invariance_check(&g, &spt, 0, 1).is_err());
    }
}
