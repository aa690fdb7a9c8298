//! Pfaffian of a skew-symmetric matrix by Parlett–Reid tridiagonalization
//! with partial pivoting (`O(n³)`), following Wimmer's skew-LTL scheme.

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};

/// Largest `|m_ij + m_ji|` relative to `max(1, max |m_ij|)`.
pub fn antisymmetry_defect<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    let n = m.nrows();
    let mut scale = 1.0f64;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            scale = scale.max(m[(i, j)].clone().abs());
            if j >= i {
                let s = (m[(i, j)].clone() + m[(j, i)].clone()).abs();
                worst = worst.max(s);
            }
        }
    }
    worst / scale
}

pub fn pfaffian<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Result<T> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::Contract(format!(
            "pfaffian needs a square matrix, got {}x{}",
            n,
            m.ncols()
        )));
    }
    if n % 2 == 1 {
        return Err(Error::Contract(format!(
            "pfaffian of odd dimension {n} is undefined"
        )));
    }
    let defect = antisymmetry_defect(m);
    if defect > 1e-12 {
        return Err(Error::Contract(format!(
            "matrix is not antisymmetric (defect {defect:.3e})"
        )));
    }
    Ok(pfaffian_unchecked(m.clone()))
}

/// Consumes `a` as workspace. Assumes `a` is square, even and antisymmetric.
pub(crate) fn pfaffian_unchecked<T: ComplexField<RealField = f64>>(mut a: DMatrix<T>) -> T {
    let n = a.nrows();
    let mut pf = T::one();
    let mut k = 0;
    while k + 1 < n {
        // pivot: largest entry below the diagonal in column k
        let mut kp = k + 1;
        let mut best = a[(k + 1, k)].clone().abs();
        for i in k + 2..n {
            let v = a[(i, k)].clone().abs();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }
        if best == 0.0 {
            return T::zero();
        }
        let pivot = a[(k, k + 1)].clone();
        pf *= pivot.clone();

        if k + 2 < n {
            // Gauss transform eliminating row/column k beyond the pivot:
            // A[k+2.., k+2..] += τ ⊗ A[k+2.., k+1] − A[k+2.., k+1] ⊗ τ
            let tau: Vec<T> = (k + 2..n)
                .map(|j| a[(k, j)].clone() / pivot.clone())
                .collect();
            let col: Vec<T> = (k + 2..n).map(|i| a[(i, k + 1)].clone()).collect();
            let m = n - k - 2;
            for jj in 0..m {
                let j = k + 2 + jj;
                for ii in 0..m {
                    let i = k + 2 + ii;
                    let upd = tau[ii].clone() * col[jj].clone() - col[ii].clone() * tau[jj].clone();
                    a[(i, j)] += upd;
                }
            }
        }
        k += 2;
    }
    pf
}
