//! The diagonal map A_{k,t} = exp((t/2)·K·J(A_k))·A_k and the worked examples built on it.

use crate::bundle::{make_sphere_grid, validate_bundle, wrap_angle, Bundle, BundleReport};
use crate::error::{Error, Result};
use crate::linalg::{identity, range_basis, scale, sup_norm};
use crate::nambu::{CliffordSet, Generator, NambuSpace, Parity};
use crate::planes::{j_of, plane_from_vectors, pseudo_check, Plane};
use crate::scalar::{c, CMat, CVec, Real, C};
use crate::symmetry::{imaginary_realization, kitaev_generators, ClassLabel};
use std::f64::consts::FRAC_PI_2;

/// K·J(A), checked to square to −1.
pub fn rotor_generator<T: Real>(k: &Generator<T>, a: &Plane<T>) -> Result<CMat<T>> {
    let dev = pseudo_check(k, a)?;
    if dev > T::lit(T::ALG_TOL) {
        return Err(Error::Precondition(format!("K is not a pseudo-symmetry of A (deviation {:e})", dev.as_f64())));
    }
    let x = k.matrix() * j_of(a);
    let sq = sup_norm(&(&x * &x + identity::<T>(a.dim())));
    if sq > T::lit(T::ALG_TOL) {
        return Err(Error::Numeric(format!("(K J(A))² + 1 = {:e}", sq.as_f64())));
    }
    Ok(x)
}

/// cos(t/2)·1 + sin(t/2)·K·J(A)
pub fn rotor<T: Real>(k: &Generator<T>, a: &Plane<T>, t: T) -> Result<CMat<T>> {
    let x = rotor_generator(k, a)?;
    Ok(rotor_from(&x, t))
}

fn rotor_from<T: Real>(x: &CMat<T>, t: T) -> CMat<T> {
    let h = t / T::lit(2.0);
    identity::<T>(x.nrows()).map(|z| z * h.cos()) + x.map(|z| z * h.sin())
}

/// E_λ(K) for λ = −i (`minus_i = true`) or +i.
pub fn eigenplane<T: Real>(k: &CMat<T>, minus_i: bool) -> Plane<T> {
    let s = if minus_i { 1.0 } else { -1.0 };
    let p = (identity::<T>(k.nrows()) + scale(k, c(0.0, s))).map(|z| z * T::lit(0.5));
    let rank = k.nrows() / 2;
    let basis = range_basis(&p, T::lit(T::ALG_TOL.sqrt()));
    Plane::from_orthonormal(basis.columns(0, rank.min(basis.ncols())).into_owned())
}

/// Pole fiber of a suspension: E_{−i}(K) at t = +π/2, E_{+i}(K) at t = −π/2.
pub fn pole_plane<T: Real>(k: &Generator<T>, north: bool) -> Plane<T> {
    eigenplane(k.matrix(), north)
}

/// A bundle over S^d with the imaginary generator K to consume and an optional
/// real generator I that is moved to the end of the output set.
#[derive(Debug, Clone)]
pub struct SuspensionInput<T: Real> {
    pub bundle: Bundle<T>,
    pub k_index: usize,
    pub i_index: Option<usize>,
}

impl<T: Real> SuspensionInput<T> {
    pub fn new(bundle: Bundle<T>, k_index: usize, i_index: Option<usize>) -> Self {
        Self { bundle, k_index, i_index }
    }

    pub fn k(&self) -> &Generator<T> {
        &self.bundle.clifford().generators()[self.k_index]
    }

    pub fn check(&self) -> Result<()> {
        let gens = self.bundle.clifford().generators();
        if self.k_index >= gens.len() {
            return Err(Error::Precondition(format!("K index {} out of range ({} generators)", self.k_index, gens.len())));
        }
        let k = &gens[self.k_index];
        if k.parity() != Parity::Imaginary {
            return Err(Error::Precondition(format!("generator {} is real; K must be imaginary", self.k_index)));
        }
        if let Some(i) = self.i_index {
            if i >= gens.len() || i == self.k_index {
                return Err(Error::Precondition(format!("invalid I index {i}")));
            }
            if gens[i].parity() != Parity::Real {
                return Err(Error::Precondition(format!("generator {i} is imaginary; I must be real")));
            }
        }
        let tol = T::lit(T::ALG_TOL);
        for (l, g) in gens.iter().enumerate() {
            if l == self.k_index {
                continue;
            }
            let ac = sup_norm(&(g.matrix() * k.matrix() + k.matrix() * g.matrix()));
            if ac > tol {
                return Err(Error::Precondition(format!("K does not anti-commute with generator {l} ({:e})", ac.as_f64())));
            }
        }
        if self.bundle.grid().d() > 1 {
            return Err(Error::Precondition("suspension input must live over S⁰ or S¹".into()));
        }
        let report = validate_bundle(&self.bundle);
        if let Some(v) = report.pseudo.first() {
            return Err(Error::Precondition(format!(
                "fiber {}: generator {} deviation {:e}",
                v.index, v.generator, v.magnitude
            )));
        }
        if let Some(v) = report.fermi.first() {
            return Err(Error::Precondition(format!("fiber {}: Fermi deviation {:e}", v.index, v.magnitude)));
        }
        Ok(())
    }

    /// Generator set after consuming K; I (if given) goes last.
    pub fn output_set(&self) -> Result<CliffordSet<T>> {
        let set = self.bundle.clifford();
        let mut gens = Vec::new();
        for (l, g) in set.generators().iter().enumerate() {
            if l != self.k_index && Some(l) != self.i_index {
                gens.push(g.clone());
            }
        }
        if let Some(i) = self.i_index {
            gens.push(set.generators()[i].clone());
        }
        Ok(CliffordSet::new(*set.space(), gens)?.with_complex(set.is_complex()))
    }
}

/// Suspend S⁰ → S¹ (equator resolution `resolution`) or S¹ → S² (polar resolution
/// `resolution`, odd so that t = 0 is sampled).
///
/// Over S⁰ the two hemispheres are glued: |k| ≤ π/2 rotates the fiber at 0 by t = k,
/// the rest rotates the fiber at π by t = π − k.
pub fn suspend<T: Real>(input: &SuspensionInput<T>, resolution: usize) -> Result<Bundle<T>> {
    input.check()?;
    let b = &input.bundle;
    let k = input.k();
    let gens: Vec<CMat<T>> = b
        .fibers()
        .iter()
        .enumerate()
        .map(|(i, a)| rotor_generator(k, a).map_err(|e| Error::Precondition(format!("fiber {i}: {e}"))))
        .collect::<Result<_>>()?;
    let set = input.output_set()?;
    let rotate = |base: usize, t: f64| -> Plane<T> { b.fiber(base).apply(&rotor_from(&gens[base], T::lit(t))) };
    match b.grid().d() {
        0 => {
            let grid = make_sphere_grid(1, resolution, 0)?;
            let fibers = grid
                .points()
                .iter()
                .map(|p| {
                    if p.k.abs() <= FRAC_PI_2 {
                        rotate(0, p.k)
                    } else {
                        rotate(1, wrap_angle(std::f64::consts::PI - p.k))
                    }
                })
                .collect();
            Bundle::new(grid, set, fibers)
        }
        1 => {
            if resolution % 2 == 0 {
                return Err(Error::Precondition(format!("polar resolution M = {resolution} must be odd")));
            }
            let n = b.grid().n_equator();
            let grid = make_sphere_grid(2, n, resolution)?;
            let mut fibers = Vec::with_capacity(grid.len());
            for p in &grid.points()[..n * resolution] {
                let i = b.grid().index_of_k(p.k).expect("circle grid");
                fibers.push(rotate(i, p.t));
            }
            fibers.push(rotate(0, -FRAC_PI_2));
            fibers.push(rotate(0, FRAC_PI_2));
            Bundle::new(grid, set, fibers)
        }
        d => Err(Error::Precondition(format!("cannot suspend a bundle over S^{d}"))),
    }
}

/// Largest distance of the pole fibers of a suspended bundle from E_{∓i}(K),
/// over all equator base points.
pub fn pole_defect<T: Real>(input: &SuspensionInput<T>) -> Result<f64> {
    let k = input.k();
    let (north, south) = (pole_plane(k, true), pole_plane(k, false));
    let mut worst = 0.0f64;
    for a in input.bundle.fibers() {
        let x = rotor_generator(k, a)?;
        let up = a.apply(&rotor_from(&x, T::lit(FRAC_PI_2)));
        let down = a.apply(&rotor_from(&x, T::lit(-FRAC_PI_2)));
        worst = worst.max(sup_norm(&(up.projector() - north.projector())).as_f64());
        worst = worst.max(sup_norm(&(down.projector() - south.projector())).as_f64());
    }
    Ok(worst)
}

/// Two-point data over S⁰ for the Majorana chain: span{c†} (or span{c} for the
/// trivial variant) at k = 0 and span{c} at k = π, with K₁ = iγT.
pub fn majorana_input<T: Real>(occupied_at_zero: bool) -> Result<Bundle<T>> {
    let s = NambuSpace::new(1)?;
    let set = imaginary_realization::<T>(&s, ClassLabel::BDI)?;
    let at_zero = if occupied_at_zero { s.creator::<T>(0) } else { s.annihilator::<T>(0) };
    let fibers = vec![plane_from_vectors(&s, &[at_zero])?, plane_from_vectors(&s, &[s.annihilator::<T>(0)])?];
    Bundle::new(make_sphere_grid(0, 4, 1)?, set, fibers)
}

/// Class D circle bundle of the Majorana chain on an N-point grid.
pub fn example_majorana<T: Real>(occupied_at_zero: bool, n: usize) -> Result<Bundle<T>> {
    suspend(&SuspensionInput::new(majorana_input(occupied_at_zero)?, 0, None), n)
}

/// −α/β for a line span{α c† + β c}; this is the pair amplitude of the BCS form
/// (cot(k/2) for the Majorana chain). None when β vanishes or n ≠ 1.
pub fn bcs_amplitude<T: Real>(a: &Plane<T>) -> Option<C<T>> {
    if a.dim() != 2 || a.rank() != 1 {
        return None;
    }
    let (beta, alpha) = (a.frame()[(0, 0)], a.frame()[(1, 0)]);
    if beta.norm_sqr() < T::lit(T::ALG_TOL) {
        return None;
    }
    Some(-alpha / beta)
}

/// The imaginary generator of the spin-doubled Majorana chain:
/// K c↑ = i c↓†, K c↓ = i c↑†, and likewise on the creators.
#[allow(non_snake_case)]
pub fn dIII_k<T: Real>() -> CMat<T> {
    let mut k = CMat::zeros(4, 4);
    for (r, col) in [(2, 1), (1, 2), (3, 0), (0, 3)] {
        k[(r, col)] = c(0.0, 1.0);
    }
    k
}

/// c̃±(k) = c±† cos(k/2) − c∓ sin(k/2) with c± = (c↑ ± c↓)/√2.
#[allow(non_snake_case)]
fn dIII_equator_fiber<T: Real>(s: &NambuSpace, k: f64) -> Result<Plane<T>> {
    let h = 1.0 / 2f64.sqrt();
    let (cu, cd, cud, cdd) = (s.annihilator::<T>(0), s.annihilator::<T>(1), s.creator::<T>(0), s.creator::<T>(1));
    let mix = |a: &CVec<T>, b: &CVec<T>, sign: f64| (a + b.map(|z| z * T::lit(sign))).map(|z| z * T::lit(h));
    let (cp, cm, cpd, cmd) = (mix(&cu, &cd, 1.0), mix(&cu, &cd, -1.0), mix(&cud, &cdd, 1.0), mix(&cud, &cdd, -1.0));
    let (co, si) = (T::lit((k / 2.0).cos()), T::lit((k / 2.0).sin()));
    let vp = cpd.map(|z| z * co) - cm.map(|z| z * si);
    let vm = cmd.map(|z| z * co) - cp.map(|z| z * si);
    plane_from_vectors(s, &[vp, vm])
}

/// Spin-doubled Majorana chain over S¹ with generators {I = J₁, K}.
#[allow(non_snake_case)]
pub fn dIII_input<T: Real>(n: usize) -> Result<Bundle<T>> {
    let s = NambuSpace::new(2)?;
    let (_, diii) = kitaev_generators::<T>(&s, ClassLabel::DIII)?;
    let i_gen = diii.generators()[0].clone();
    let set = CliffordSet::new(s, vec![i_gen, Generator::new(&s, dIII_k())?])?;
    let grid = make_sphere_grid(1, n, 0)?;
    let fibers = grid.points().iter().map(|p| dIII_equator_fiber(&s, p.k)).collect::<Result<_>>()?;
    Bundle::new(grid, set, fibers)
}

/// Class DIII sphere bundle: the doubled Majorana chain suspended along k₂.
#[allow(non_snake_case)]
pub fn example_dIII<T: Real>(n: usize, m: usize) -> Result<Bundle<T>> {
    suspend(&SuspensionInput::new(dIII_input(n)?, 1, Some(0)), m)
}

/// Class AI data over S⁰ with n_plus occupied bands (the first n_plus) at k = 0
/// and the vacuum at k = π; generators {K₁, K₂}.
pub fn kitaev_chain_input<T: Real>(n: usize, n_plus: usize) -> Result<Bundle<T>> {
    if n_plus > n {
        return Err(Error::Precondition(format!("n_plus = {n_plus} exceeds n = {n}")));
    }
    let s = NambuSpace::new(n)?;
    let set = imaginary_realization::<T>(&s, ClassLabel::AI)?;
    let data: Vec<_> = (0..n).map(|j| if j < n_plus { s.creator::<T>(j) } else { s.annihilator::<T>(j) }).collect();
    let vac: Vec<_> = (0..n).map(|j| s.annihilator::<T>(j)).collect();
    let fibers = vec![plane_from_vectors(&s, &data)?, plane_from_vectors(&s, &vac)?];
    Bundle::new(make_sphere_grid(0, 4, 1)?, set, fibers)
}

/// Class BDI circle bundle (Kitaev chain) from suspending with K₂.
pub fn example_kitaev_chain<T: Real>(n: usize, n_plus: usize, grid_n: usize) -> Result<Bundle<T>> {
    suspend(&SuspensionInput::new(kitaev_chain_input(n, n_plus)?, 1, None), grid_n)
}

/// Validation shortcut used by the examples' callers.
pub fn validated<T: Real>(b: Bundle<T>) -> std::result::Result<Bundle<T>, (Bundle<T>, BundleReport)> {
    let r = validate_bundle(&b);
    if r.is_empty() {
        Ok(b)
    } else {
        Err((b, r))
    }
}
