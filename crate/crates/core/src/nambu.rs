//! The ambient single-fermion space ℂ^{2n}, its bracket, γ, and Clifford generators.
//!
//! Basis order is (c₁…c_n, c₁†…c_n†). The bracket is {v, w} = vᵀ B w.

use crate::error::{Error, Result};
use crate::linalg::{blocks, conj, identity, sup_norm, unitarity_defect};
use crate::scalar::{c, CMat, CVec, Real, C};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NambuSpace {
    n: usize,
}

impl NambuSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroBands);
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// B = [[0, 1], [1, 0]].
    pub fn bracket_matrix<T: Real>(&self) -> CMat<T> {
        let n = self.n;
        let z = CMat::zeros(n, n);
        let one = identity::<T>(n);
        blocks(&z, &one, &one, &z)
    }

    /// G with γ(v) = G·conj(v). Equal to B in this basis.
    pub fn gamma_matrix<T: Real>(&self) -> CMat<T> {
        self.bracket_matrix()
    }

    /// Ω = (1/√2)[[1, 1], [i, −i]]; Majorana coordinates are x = Ω v.
    pub fn majorana_transform<T: Real>(&self) -> CMat<T> {
        let n = self.n;
        let h = 1.0 / 2f64.sqrt();
        let one = identity::<T>(n);
        let a = one.map(|z| z * c::<T>(h, 0.0));
        let b = one.map(|z| z * c::<T>(0.0, h));
        let mb = one.map(|z| z * c::<T>(0.0, -h));
        blocks(&a, &a, &b, &mb)
    }

    /// Annihilator c_j as a coordinate vector.
    pub fn annihilator<T: Real>(&self, j: usize) -> CVec<T> {
        let mut v = CVec::zeros(self.dim());
        v[j] = c(1.0, 0.0);
        v
    }

    /// Creator c_j† as a coordinate vector.
    pub fn creator<T: Real>(&self, j: usize) -> CVec<T> {
        let mut v = CVec::zeros(self.dim());
        v[self.n + j] = c(1.0, 0.0);
        v
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: len });
        }
        Ok(())
    }

    pub fn apply_gamma<T: Real>(&self, v: &CVec<T>) -> Result<CVec<T>> {
        self.check_len(v.len())?;
        let n = self.n;
        let mut out = CVec::zeros(2 * n);
        for j in 0..n {
            out[j] = v[n + j].conj();
            out[n + j] = v[j].conj();
        }
        Ok(out)
    }

    pub fn bracket<T: Real>(&self, v: &CVec<T>, w: &CVec<T>) -> Result<C<T>> {
        self.check_len(v.len())?;
        self.check_len(w.len())?;
        let n = self.n;
        let mut s = C::new(T::zero(), T::zero());
        for j in 0..n {
            s += v[j] * w[n + j] + v[n + j] * w[j];
        }
        Ok(s)
    }

    /// Charge operator Q = diag(1_n, −1_n).
    pub fn charge<T: Real>(&self) -> CMat<T> {
        let n = self.n;
        let z = CMat::zeros(n, n);
        let one = identity::<T>(n);
        blocks(&one, &z, &z, &one.map(|x| -x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Real,
    Imaginary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Real,
    Imaginary,
    Neither,
    NotUnitary,
}

/// Bracket test only; squaring is enforced by [`Generator::new`].
pub fn classify_generator<T: Real>(space: &NambuSpace, u: &CMat<T>) -> Result<GeneratorKind> {
    let d = space.dim();
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: u.nrows().max(u.ncols()) });
    }
    let tol = T::lit(T::ALG_TOL);
    if unitarity_defect(u) > tol {
        return Ok(GeneratorKind::NotUnitary);
    }
    let b = space.bracket_matrix::<T>();
    let ubu = u.transpose() * &b * u;
    if sup_norm(&(&ubu - &b)) < tol {
        Ok(GeneratorKind::Real)
    } else if sup_norm(&(&ubu + &b)) < tol {
        Ok(GeneratorKind::Imaginary)
    } else {
        Ok(GeneratorKind::Neither)
    }
}

/// A unitary with square −1 that preserves (real) or flips (imaginary) the bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator<T: Real> {
    matrix: CMat<T>,
    parity: Parity,
}

impl<T: Real> Generator<T> {
    pub fn new(space: &NambuSpace, matrix: CMat<T>) -> Result<Self> {
        let parity = match classify_generator(space, &matrix)? {
            GeneratorKind::Real => Parity::Real,
            GeneratorKind::Imaginary => Parity::Imaginary,
            GeneratorKind::Neither => {
                return Err(Error::NotAGenerator("neither preserves nor flips the bracket".into()))
            }
            GeneratorKind::NotUnitary => return Err(Error::NotAGenerator("not unitary".into())),
        };
        let sq = &matrix * &matrix + identity::<T>(space.dim());
        let dev = sup_norm(&sq);
        if dev.as_f64() > T::ALG_TOL {
            return Err(Error::NotAGenerator(format!("square deviates from −1 by {:e}", dev.as_f64())));
        }
        Ok(Self { matrix, parity })
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Commutes with γ, i.e. B·conj(J)·B = J. Holds for real generators.
    pub fn gamma_defect(&self, space: &NambuSpace) -> T {
        let b = space.bracket_matrix::<T>();
        sup_norm(&(&b * conj(&self.matrix) * &b - &self.matrix))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliffordViolation {
    pub l: usize,
    pub m: usize,
    pub deviation: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CliffordReport {
    pub violations: Vec<CliffordViolation>,
}

impl CliffordReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn max_deviation(&self) -> f64 {
        self.violations.iter().map(|v| v.deviation).fold(0.0, f64::max)
    }
}

/// Ordered list of pseudo-symmetry generators on one Nambu space.
///
/// `complex` marks the charge-conserving classes A and AIII, for which the
/// Fermi constraint is lifted.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordSet<T: Real> {
    space: NambuSpace,
    generators: Vec<Generator<T>>,
    complex: bool,
}

impl<T: Real> CliffordSet<T> {
    pub fn new(space: NambuSpace, generators: Vec<Generator<T>>) -> Result<Self> {
        for g in &generators {
            if g.dim() != space.dim() {
                return Err(Error::DimensionMismatch { expected: space.dim(), found: g.dim() });
            }
        }
        Ok(Self { space, generators, complex: false })
    }

    pub fn empty(space: NambuSpace) -> Self {
        Self { space, generators: Vec::new(), complex: false }
    }

    pub fn with_complex(mut self, complex: bool) -> Self {
        self.complex = complex;
        self
    }

    pub fn space(&self) -> &NambuSpace {
        &self.space
    }

    pub fn generators(&self) -> &[Generator<T>] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_complex(&self) -> bool {
        self.complex
    }

    /// (count_real, count_imaginary)
    pub fn signature(&self) -> (usize, usize) {
        let r = self.generators.iter().filter(|g| g.parity == Parity::Real).count();
        (r, self.generators.len() - r)
    }

    pub fn push(&mut self, g: Generator<T>) -> Result<()> {
        if g.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch { expected: self.space.dim(), found: g.dim() });
        }
        self.generators.push(g);
        Ok(())
    }

    /// Set without the generator at `idx`.
    pub fn without(&self, idx: usize) -> Self {
        let mut out = self.clone();
        out.generators.remove(idx);
        out
    }
}

/// Pairwise anti-commutators and squares against J_l J_m + J_m J_l = −2δ_lm.
pub fn check_clifford<T: Real>(set: &CliffordSet<T>) -> CliffordReport {
    check_clifford_tol(set, T::ALG_TOL)
}

pub fn check_clifford_tol<T: Real>(set: &CliffordSet<T>, tol: f64) -> CliffordReport {
    let gens = set.generators();
    let d = set.space().dim();
    let two = identity::<T>(d).map(|z| z * c::<T>(2.0, 0.0));
    let mut violations = Vec::new();
    for l in 0..gens.len() {
        for m in l..gens.len() {
            let (a, b) = (gens[l].matrix(), gens[m].matrix());
            let mut ac = a * b + b * a;
            if l == m {
                ac += &two;
            }
            let dev = sup_norm(&ac).as_f64();
            if dev > tol {
                violations.push(CliffordViolation { l, m, deviation: dev });
            }
        }
    }
    CliffordReport { violations }
}
