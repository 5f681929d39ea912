//! Small dense helpers on top of nalgebra.

use crate::error::{Error, Result};
use crate::scalar::{CMat, CVec, Real, C};
use nalgebra::ComplexField;
use num_traits::Zero;

pub fn identity<T: Real>(dim: usize) -> CMat<T> {
    CMat::identity(dim, dim)
}

/// Entrywise conjugate.
pub fn conj<T: Real>(m: &CMat<T>) -> CMat<T> {
    m.map(|z| z.conj())
}

/// Largest entry modulus.
pub fn sup_norm<T: Real>(m: &CMat<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.modulus()))
}

pub fn singular_values<T: Real>(m: &CMat<T>) -> Vec<T> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<T> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    s
}

pub fn spectral_norm<T: Real>(m: &CMat<T>) -> T {
    singular_values(m).first().copied().unwrap_or_else(T::zero)
}

pub fn det<T: Real>(m: &CMat<T>) -> C<T> {
    if m.nrows() == 0 {
        return C::new(T::one(), T::zero());
    }
    m.clone().determinant()
}

/// sup |U†U − 1|.
pub fn unitarity_defect<T: Real>(u: &CMat<T>) -> T {
    sup_norm(&(u.adjoint() * u - identity::<T>(u.ncols())))
}

fn project_out<T: Real>(v: &mut CVec<T>, basis: &[CVec<T>]) {
    // two passes of modified Gram-Schmidt
    for _ in 0..2 {
        for b in basis {
            let coef = b.dotc(v);
            *v -= b * coef;
        }
    }
}

/// Orthonormal frame spanning the columns of `m`, in column order.
///
/// Fails when the smallest singular value is below the rank tolerance.
pub fn orthonormal_frame<T: Real>(m: &CMat<T>) -> Result<CMat<T>> {
    let sv = singular_values(m);
    let smallest = sv.last().copied().unwrap_or_else(T::zero);
    if sv.len() < m.ncols() || smallest.as_f64() < T::RANK_TOL {
        return Err(Error::RankDeficient { smallest: smallest.as_f64() });
    }
    let mut basis: Vec<CVec<T>> = Vec::with_capacity(m.ncols());
    for j in 0..m.ncols() {
        let mut v: CVec<T> = m.column(j).into_owned();
        project_out(&mut v, &basis);
        let nrm = v.norm();
        v /= C::new(nrm, T::zero());
        basis.push(v);
    }
    Ok(CMat::from_columns(&basis))
}

/// Orthonormal basis of the column span of `m`, picking at each step the
/// column with the largest residual and stopping below `tol`. Deterministic.
pub fn range_basis<T: Real>(m: &CMat<T>, tol: T) -> CMat<T> {
    let mut residual: Vec<CVec<T>> = (0..m.ncols()).map(|j| m.column(j).into_owned()).collect();
    let mut basis: Vec<CVec<T>> = Vec::new();
    loop {
        let mut best = None;
        let mut best_norm = tol;
        for (j, r) in residual.iter().enumerate() {
            let nr = r.norm();
            if nr > best_norm {
                best_norm = nr;
                best = Some(j);
            }
        }
        let Some(j) = best else { break };
        let mut v = residual[j].clone();
        project_out(&mut v, &basis);
        let nv = v.norm();
        if nv <= tol {
            residual[j].fill(C::zero());
            continue;
        }
        v /= C::new(nv, T::zero());
        for r in residual.iter_mut() {
            let coef = v.dotc(r);
            *r -= &v * coef;
        }
        basis.push(v);
        if basis.len() == m.nrows() {
            break;
        }
    }
    if basis.is_empty() {
        CMat::zeros(m.nrows(), 0)
    } else {
        CMat::from_columns(&basis)
    }
}

/// Block matrix [[a, b], [c, d]] from four equal square blocks.
pub fn blocks<T: Real>(a: &CMat<T>, b: &CMat<T>, c: &CMat<T>, d: &CMat<T>) -> CMat<T> {
    let n = a.nrows();
    let mut m = CMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(c);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}

/// Block-diagonal sum of square matrices.
pub fn block_diag<T: Real>(parts: &[CMat<T>]) -> CMat<T> {
    let dim: usize = parts.iter().map(|p| p.nrows()).sum();
    let mut m = CMat::zeros(dim, dim);
    let mut off = 0;
    for p in parts {
        m.view_mut((off, off), (p.nrows(), p.ncols())).copy_from(p);
        off += p.nrows();
    }
    m
}

pub fn scale<T: Real>(m: &CMat<T>, z: C<T>) -> CMat<T> {
    m.map(|x| x * z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn frame_is_orthonormal_and_spans_input() {
        let m = CMat::<f64>::from_row_slice(3, 2, &[c(1., 0.), c(1., 1.), c(0., 2.), c(0., 0.), c(1., 0.), c(3., -1.)]);
        let f = orthonormal_frame(&m).unwrap();
        assert!(unitarity_defect(&f) < 1e-13);
        let p = &f * f.adjoint();
        assert!(sup_norm(&(&p * &m - &m)) < 1e-12);
    }

    #[test]
    fn dependent_columns_rejected() {
        let m = CMat::<f64>::from_row_slice(2, 2, &[c(1., 0.), c(2., 0.), c(1., 0.), c(2., 0.)]);
        assert!(matches!(orthonormal_frame(&m), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn range_basis_of_projector() {
        let v = CMat::<f64>::from_row_slice(3, 1, &[c(1., 0.), c(0., 1.), c(1., 0.)]);
        let p = &v * v.adjoint() / c::<f64>(3., 0.);
        let b = range_basis(&p, 1e-10);
        assert_eq!(b.ncols(), 1);
        assert!(sup_norm(&(&b * b.adjoint() - p)) < 1e-13);
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let m = CMat::<f64>::from_diagonal(&CVec::from_vec(vec![c(0.5, 0.), c(0., -2.)]));
        assert!((spectral_norm(&m) - 2.0).abs() < 1e-14);
    }
}
