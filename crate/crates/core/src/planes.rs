//! Annihilation planes A ⊂ ℂ^{2n} as orthonormal frames with projectors.

use crate::error::{Error, Result};
use crate::linalg::{conj, identity, orthonormal_frame, range_basis, spectral_norm, sup_norm};
use crate::nambu::{Generator, NambuSpace};
use crate::scalar::{CMat, CVec, Real, C};

#[derive(Debug, Clone, PartialEq)]
pub struct Plane<T: Real> {
    frame: CMat<T>,
    projector: CMat<T>,
}

impl<T: Real> Plane<T> {
    /// Plane spanned by the columns of `m` (need not be orthonormal).
    pub fn from_columns(m: &CMat<T>) -> Result<Self> {
        let frame = orthonormal_frame(m)?;
        Ok(Self::from_orthonormal(frame))
    }

    /// Trusts that `frame` has orthonormal columns.
    pub fn from_orthonormal(frame: CMat<T>) -> Self {
        let projector = &frame * frame.adjoint();
        Self { frame, projector }
    }

    /// Plane onto the range of an orthogonal projector.
    pub fn from_projector(p: &CMat<T>) -> Self {
        let rank = p.trace().re.as_f64().round().max(0.0) as usize;
        let basis = range_basis(p, T::lit(T::ALG_TOL.sqrt()));
        let keep = rank.min(basis.ncols());
        Self::from_orthonormal(basis.columns(0, keep).into_owned())
    }

    pub fn frame(&self) -> &CMat<T> {
        &self.frame
    }

    pub fn projector(&self) -> &CMat<T> {
        &self.projector
    }

    pub fn rank(&self) -> usize {
        self.frame.ncols()
    }

    pub fn dim(&self) -> usize {
        self.frame.nrows()
    }

    /// sup |F†F − 1|
    pub fn frame_defect(&self) -> T {
        sup_norm(&(self.frame.adjoint() * &self.frame - identity::<T>(self.rank())))
    }

    pub fn apply(&self, u: &CMat<T>) -> Self {
        Self::from_orthonormal(u * &self.frame)
    }
}

pub fn plane_from_vectors<T: Real>(space: &NambuSpace, vectors: &[CVec<T>]) -> Result<Plane<T>> {
    for v in vectors {
        if v.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: v.len() });
        }
    }
    if vectors.is_empty() {
        return Ok(Plane::from_orthonormal(CMat::zeros(space.dim(), 0)));
    }
    Plane::from_columns(&CMat::from_columns(vectors))
}

pub fn complement<T: Real>(a: &Plane<T>) -> Plane<T> {
    let q = identity::<T>(a.dim()) - a.projector();
    Plane::from_projector(&q)
}

/// J(A) = i(Π_A − Π_{A^c}) = i(2Π − 1).
pub fn j_of<T: Real>(a: &Plane<T>) -> CMat<T> {
    let two = C::new(T::lit(2.0), T::zero());
    let i = C::new(T::zero(), T::one());
    (a.projector() * two - identity::<T>(a.dim())) * i
}

fn same_space<T: Real>(a: &Plane<T>, b: &Plane<T>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(())
}

/// max |FᵀBF'|; zero certifies {A, A'} = 0.
pub fn fermi_check<T: Real>(space: &NambuSpace, a: &Plane<T>, b: &Plane<T>) -> Result<T> {
    same_space(a, b)?;
    if a.dim() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: a.dim() });
    }
    if a.rank() == 0 || b.rank() == 0 {
        return Ok(T::zero());
    }
    Ok(sup_norm(&(a.frame().transpose() * space.bracket_matrix::<T>() * b.frame())))
}

/// max |J Π J† − (1 − Π)|; zero certifies J A = A^c.
pub fn pseudo_check<T: Real>(j: &Generator<T>, a: &Plane<T>) -> Result<T> {
    pseudo_deviation(j.matrix(), a)
}

pub fn pseudo_deviation<T: Real>(j: &CMat<T>, a: &Plane<T>) -> Result<T> {
    if j.nrows() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: j.nrows() });
    }
    let lhs = j * a.projector() * j.adjoint();
    let rhs = identity::<T>(a.dim()) - a.projector();
    Ok(sup_norm(&(lhs - rhs)))
}

/// The unique rank-n bracket-annihilator A^⊥ = γ(A^c).
pub fn fermi_perp<T: Real>(space: &NambuSpace, a: &Plane<T>) -> Result<Plane<T>> {
    if a.rank() != space.n() {
        return Err(Error::RankMismatch { expected: space.n(), found: a.rank() });
    }
    let ac = complement(a);
    let f = space.gamma_matrix::<T>() * conj(ac.frame());
    Ok(Plane::from_orthonormal(f))
}

/// Spectral-norm distance between projectors.
pub fn distance<T: Real>(a: &Plane<T>, b: &Plane<T>) -> T {
    spectral_norm(&(a.projector() - b.projector()))
}

/// Entrywise distance between projectors (cheap equality test).
pub fn projector_gap<T: Real>(a: &Plane<T>, b: &Plane<T>) -> T {
    sup_norm(&(a.projector() - b.projector()))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::linalg::unitarity_defect;
    use crate::scalar::c;
    use proptest::prelude::*;

    pub(crate) fn random_plane(dim: usize, rank: usize, seed: &[f64]) -> Plane<f64> {
        let m = CMat::from_fn(dim, rank, |i, j| {
            let k = 2 * (i * rank + j);
            let h = |k: usize| (k as f64 * 12.9898 + 78.233 * seed[(k * 7 + 3) % seed.len()]).sin();
            C::new(seed[k % seed.len()] + h(k), seed[(k + 1) % seed.len()] + h(k + 1))
        });
        Plane::from_columns(&m).unwrap()
    }

    fn n1() -> NambuSpace {
        NambuSpace::new(1).unwrap()
    }

    #[test]
    fn coordinate_lines() {
        let s = n1();
        let a = plane_from_vectors(&s, &[s.creator::<f64>(0)]).unwrap();
        assert!(sup_norm(&(a.projector() - CMat::from_diagonal(&CVec::from_vec(vec![c(0., 0.), c(1., 0.)])))) < 1e-15);
        let b = plane_from_vectors(&s, &[s.annihilator::<f64>(0) * c::<f64>(0., 2.)]).unwrap();
        assert!((b.projector()[(0, 0)] - c::<f64>(1., 0.)).norm() < 1e-15);
    }

    #[test]
    fn majorana_fiber_projector_at_quarter_turn() {
        let s = n1();
        let k = std::f64::consts::FRAC_PI_2;
        let v = s.creator::<f64>(0) * c::<f64>((k / 2.0).cos(), 0.) - s.annihilator::<f64>(0) * c::<f64>((k / 2.0).sin(), 0.);
        let a = plane_from_vectors(&s, &[v]).unwrap();
        let want = CMat::from_row_slice(2, 2, &[c(0.5, 0.), c(-0.5, 0.), c(-0.5, 0.), c(0.5, 0.)]);
        assert!(sup_norm(&(a.projector() - want)) < 1e-15);
    }

    #[test]
    fn rank_deficient_rejected() {
        let s = n1();
        let v = s.creator::<f64>(0);
        assert!(matches!(plane_from_vectors(&s, &[v.clone(), v * c::<f64>(2., 0.)]), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn complement_and_j_examples() {
        let s = n1();
        let a = plane_from_vectors(&s, &[s.creator::<f64>(0)]).unwrap();
        let ac = complement(&a);
        assert!((ac.projector()[(0, 0)] - c::<f64>(1., 0.)).norm() < 1e-15);
        let j = j_of(&a);
        assert!((j[(0, 0)] - c::<f64>(0., -1.)).norm() < 1e-15);
        assert!((j[(1, 1)] - c::<f64>(0., 1.)).norm() < 1e-15);
    }

    #[test]
    fn fermi_examples() {
        let s = n1();
        let a = plane_from_vectors(&s, &[s.annihilator::<f64>(0)]).unwrap();
        let b = plane_from_vectors(&s, &[s.creator::<f64>(0)]).unwrap();
        assert!(fermi_check(&s, &a, &a).unwrap() < 1e-15);
        assert!((fermi_check(&s, &a, &b).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pseudo_examples() {
        let s = n1();
        let j = Generator::new(&s, CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)])).unwrap();
        let a = plane_from_vectors(&s, &[s.annihilator::<f64>(0)]).unwrap();
        assert!(pseudo_check(&j, &a).unwrap() < 1e-15);
        assert!(pseudo_deviation(&identity::<f64>(2), &a).unwrap() > 0.5);
    }

    #[test]
    fn fermi_perp_examples() {
        let s = n1();
        let cc = s.annihilator::<f64>(0);
        let cd = s.creator::<f64>(0);
        for v in [cc.clone(), cd.clone()] {
            let a = plane_from_vectors(&s, &[v]).unwrap();
            assert!(projector_gap(&fermi_perp(&s, &a).unwrap(), &a) < 1e-15);
        }
        let a = plane_from_vectors(&s, &[&cc + &cd]).unwrap();
        let want = plane_from_vectors(&s, &[&cc - &cd]).unwrap();
        assert!(projector_gap(&fermi_perp(&s, &a).unwrap(), &want) < 1e-15);
        let wrong_rank = plane_from_vectors(&s, &[cc, cd]).unwrap();
        assert!(fermi_perp(&s, &wrong_rank).is_err());
    }

    proptest! {
        #[test]
        fn complement_involution(seed in prop::collection::vec(-1.0f64..1.0, 32)) {
            let a = random_plane(6, 2, &seed);
            let acc = complement(&complement(&a));
            prop_assert!(distance(&a, &acc) < 1e-12);
            prop_assert_eq!(a.rank() + complement(&a).rank(), 6);
        }

        #[test]
        fn j_properties(seed in prop::collection::vec(-1.0f64..1.0, 32)) {
            let a = random_plane(4, 2, &seed);
            let j = j_of(&a);
            prop_assert!(unitarity_defect(&j) < 1e-12);
            prop_assert!(sup_norm(&(&j * &j + identity::<f64>(4))) < 1e-12);
            let jf = &j * a.frame() - a.frame() * c::<f64>(0., 1.);
            prop_assert!(sup_norm(&jf) < 1e-12);
            prop_assert!(sup_norm(&(&j * a.projector() - a.projector() * &j)) < 1e-12);
            prop_assert!(sup_norm(&(j_of(&complement(&a)) + &j)) < 1e-12);
        }

        #[test]
        fn fermi_perp_involution_and_annihilates(seed in prop::collection::vec(-1.0f64..1.0, 32)) {
            let s = NambuSpace::new(2).unwrap();
            let a = random_plane(4, 2, &seed);
            let p = fermi_perp(&s, &a).unwrap();
            prop_assert!(fermi_check(&s, &a, &p).unwrap() < 1e-12);
            prop_assert!(distance(&fermi_perp(&s, &p).unwrap(), &a) < 1e-10);
        }

        #[test]
        fn distance_is_a_metric(seed in prop::collection::vec(-1.0f64..1.0, 48)) {
            let a = random_plane(4, 2, &seed[..16]);
            let b = random_plane(4, 2, &seed[16..32]);
            let cpl = random_plane(4, 2, &seed[32..]);
            prop_assert!(distance(&a, &a) < 1e-12);
            prop_assert!((distance(&a, &b) - distance(&b, &a)).abs() < 1e-12);
            prop_assert!(distance(&a, &cpl) <= distance(&a, &b) + distance(&b, &cpl) + 1e-12);
        }
    }
}
