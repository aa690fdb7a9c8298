//! Finite Abelian groups `Z_{e_1} × ⋯ × Z_{e_l}`, their characters, and
//! per-charge symmetry-resolved quantities.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A group element or a charge label: one residue per cyclic factor.
pub type Element = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    orders: Vec<usize>,
}

impl AbelianGroup {
    pub fn new(orders: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = orders.iter().find(|&&e| e == 0) {
            return Err(Error::out_of_range("cyclic order", bad, ">= 1"));
        }
        Ok(Self { orders })
    }

    pub fn zn(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn zn_zn(n: usize) -> Result<Self> {
        Self::new(vec![n, n])
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> usize {
        self.orders.iter().product()
    }

    /// `lcm(e_1, …, e_l)`: every character value is a power of
    /// `exp(2πi / exponent)`.
    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1, |acc, &e| acc.lcm(&e))
    }

    pub fn identity(&self) -> Element {
        vec![0; self.rank()]
    }

    pub fn check(&self, g: &[usize]) -> Result<()> {
        if g.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: g.len(),
            });
        }
        for (&gi, &e) in g.iter().zip(&self.orders) {
            if gi >= e {
                return Err(Error::out_of_range("group label", gi, format!("0..{e}")));
            }
        }
        Ok(())
    }

    /// Lexicographic index, last factor fastest.
    pub fn index_of(&self, g: &[usize]) -> usize {
        g.iter()
            .zip(&self.orders)
            .fold(0, |acc, (&gi, &e)| acc * e + gi)
    }

    pub fn element(&self, mut index: usize) -> Element {
        let mut g = vec![0; self.rank()];
        for (slot, &e) in g.iter_mut().zip(&self.orders).rev() {
            *slot = index % e;
            index /= e;
        }
        g
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    pub fn add(&self, a: &[usize], b: &[usize]) -> Element {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((&x, &y), &e)| (x + y) % e)
            .collect()
    }

    pub fn neg(&self, a: &[usize]) -> Element {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &e)| (e - x) % e)
            .collect()
    }

    /// `Σ_i q_i g_i / e_i` as an integer multiple of `1/exponent`, reduced.
    pub(crate) fn pairing_numerator(&self, q: &[usize], g: &[usize]) -> usize {
        let ex = self.exponent();
        q.iter()
            .zip(g)
            .zip(&self.orders)
            .map(|((&qi, &gi), &e)| (qi * gi % e) * (ex / e))
            .sum::<usize>()
            % ex
    }
}

/// `χ_Q(g) = exp(2πi Σ_i q_i g_i / e_i)`.
pub fn character(group: &AbelianGroup, q: &[usize], g: &[usize]) -> Result<Complex64> {
    group.check(q)?;
    group.check(g)?;
    Ok(root_of_unity(
        group.pairing_numerator(q, g),
        group.exponent(),
    ))
}

/// `exp(2πi k / n)`, exact at multiples of a quarter turn.
pub(crate) fn root_of_unity(k: usize, n: usize) -> Complex64 {
    let k = k % n;
    if (4 * k).is_multiple_of(n) {
        return match 4 * k / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

/// `S_n(Q)` for every charge `Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymResolvedSpectrum {
    pub entries: BTreeMap<Element, f64>,
    pub moment_order: u32,
}

impl SymResolvedSpectrum {
    pub fn get(&self, q: &[usize]) -> Option<f64> {
        self.entries.get(q).copied()
    }

    /// `S_n(even)` for a `Z_2` spectrum.
    pub fn even(&self) -> f64 {
        self.get(&[0]).unwrap_or(f64::NAN)
    }

    /// `S_n(odd)` for a `Z_2` spectrum.
    pub fn odd(&self) -> f64 {
        self.get(&[1]).unwrap_or(f64::NAN)
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.values().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trips() {
        let g = AbelianGroup::new(vec![3, 4, 2]).unwrap();
        assert_eq!(g.order(), 24);
        for i in 0..g.order() {
            assert_eq!(g.index_of(&g.element(i)), i);
        }
        assert_eq!(g.element(1), vec![0, 0, 1]);
        assert_eq!(g.exponent(), 12);
    }

    #[test]
    fn identity_character_is_one() {
        let g = AbelianGroup::zn_zn(5).unwrap();
        for q in g.elements() {
            let c = character(&g, &q, &g.identity()).unwrap();
            assert!((c - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn z2_odd_flip() {
        let g = AbelianGroup::zn(2).unwrap();
        let c = character(&g, &[1], &[1]).unwrap();
        assert!((c + 1.0).norm() < 1e-15);
    }

    #[test]
    fn character_orthogonality_z4_z4() {
        let g = AbelianGroup::zn_zn(4).unwrap();
        let n = g.order() as f64;
        for q in g.elements() {
            for q2 in g.elements() {
                let s: Complex64 = g
                    .elements()
                    .map(|x| {
                        character(&g, &q, &x).unwrap() * character(&g, &q2, &x).unwrap().conj()
                    })
                    .sum::<Complex64>()
                    / n;
                let expected = if q == q2 { 1.0 } else { 0.0 };
                assert!((s - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn label_range_checked() {
        let g = AbelianGroup::zn(3).unwrap();
        assert!(character(&g, &[3], &[0]).is_err());
        assert!(character(&g, &[0, 0], &[0]).is_err());
        assert!(AbelianGroup::new(vec![2, 0]).is_err());
    }
}
