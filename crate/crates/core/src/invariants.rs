//! Topological indices of bundles: fermion parity, class-D Z₂, Pfaffian-zero Z₂,
//! chiral winding, Chern number and the class AI component index.

use crate::bundle::{Bundle, MomentumGrid};
use crate::diagonal::eigenplane;
use crate::error::{Error, Result};
use crate::linalg::{det, identity, sup_norm, unitarity_defect};
use crate::nambu::{Generator, NambuSpace, Parity};
use crate::planes::{complement, distance, fermi_check, j_of, Plane};
use crate::scalar::{c, CMat, Real, C};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::HashMap;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantKind {
    ParityBit,
    Z2Bit,
    WindingInt,
    ChernInt,
    ComponentIndex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub kind: InvariantKind,
    pub value: i64,
    pub diagnostics: Value,
}

impl InvariantResult {
    fn new(kind: InvariantKind, value: i64, diagnostics: Value) -> Self {
        debug_assert!(!matches!(kind, InvariantKind::ParityBit | InvariantKind::Z2Bit) || value == 0 || value == 1);
        Self { kind, value, diagnostics }
    }
}

/// Pfaffian by Parlett–Reid elimination with partial pivoting.
///
/// Odd dimension gives 0.
pub fn pfaffian<T: Real>(x: &CMat<T>) -> Result<C<T>> {
    let n = x.nrows();
    if x.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.ncols() });
    }
    let scale = sup_norm(x).max(T::one());
    let skew = sup_norm(&(x + x.transpose()));
    if skew > T::lit(T::ALG_TOL) * scale {
        return Err(Error::Precondition(format!("matrix is not skew-symmetric (‖X + Xᵀ‖ = {:e})", skew.as_f64())));
    }
    if n % 2 == 1 {
        return Ok(C::new(T::zero(), T::zero()));
    }
    let mut a = x.clone();
    let mut pf = C::new(T::one(), T::zero());
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        let mut best = a[(k + 1, k)].norm_sqr();
        for i in k + 2..n {
            let v = a[(i, k)].norm_sqr();
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
        let piv = a[(k, k + 1)];
        if best == T::zero() {
            return Ok(C::new(T::zero(), T::zero()));
        }
        pf *= piv;
        if k + 2 < n {
            let m = n - k - 2;
            let tau: Vec<C<T>> = (0..m).map(|i| a[(k, k + 2 + i)] / piv).collect();
            let col: Vec<C<T>> = (0..m).map(|i| a[(k + 2 + i, k + 1)]).collect();
            for i in 0..m {
                for j in 0..m {
                    a[(k + 2 + i, k + 2 + j)] += tau[i] * col[j] - col[i] * tau[j];
                }
            }
        }
        k += 2;
    }
    Ok(pf)
}

/// W with W_ab = (J₁ e_a)ᵀ B e_b, i.e. W = J₁ᵀ B.
pub fn omega_form<T: Real>(space: &NambuSpace, j1: &Generator<T>) -> Result<CMat<T>> {
    if j1.parity() != Parity::Real {
        return Err(Error::Precondition("the bilinear form needs a real generator".into()));
    }
    let w = j1.matrix().transpose() * space.bracket_matrix::<T>();
    let skew = sup_norm(&(&w + w.transpose()));
    if skew > T::lit(T::ALG_TOL) {
        return Err(Error::Numeric(format!("ω is not skew ({:e})", skew.as_f64())));
    }
    Ok(w)
}

/// Pf(Fᵀ W F) for the frame F of A.
pub fn restricted_pfaffian<T: Real>(w: &CMat<T>, a: &Plane<T>) -> Result<C<T>> {
    let f = a.frame();
    let m = f.transpose() * w * f;
    // restore exact skew symmetry lost to rounding
    let m = (&m - m.transpose()).map(|z| z * T::lit(0.5));
    pfaffian(&m)
}

fn majorana_j<T: Real>(space: &NambuSpace, a: &Plane<T>) -> Result<CMat<T>> {
    let om = space.majorana_transform::<T>();
    let x = &om * j_of(a) * om.adjoint();
    let imag = x.iter().fold(T::zero(), |acc, z| acc.max(z.im.abs()));
    let tol = T::lit(T::ALG_TOL);
    let antisym = sup_norm(&(&x + x.transpose()));
    let orth = unitarity_defect(&x);
    if imag > tol || antisym > tol || orth > tol {
        return Err(Error::Numeric(format!(
            "Majorana form not real orthogonal antisymmetric (imag {:e}, skew {:e}, orth {:e})",
            imag.as_f64(),
            antisym.as_f64(),
            orth.as_f64()
        )));
    }
    Ok(x.map(|z| C::new(z.re, T::zero())))
}

/// 0 (even) when sign Pf of the Majorana form matches the vacuum's, else 1.
pub fn fermion_parity<T: Real>(space: &NambuSpace, a: &Plane<T>) -> Result<u8> {
    if a.rank() != space.n() {
        return Err(Error::RankMismatch { expected: space.n(), found: a.rank() });
    }
    let f = fermi_check(space, a, a)?;
    if f > T::lit(T::ALG_TOL) {
        return Err(Error::Precondition(format!("plane is not Lagrangian ({{A, A}} = {:e})", f.as_f64())));
    }
    let vac = Plane::from_orthonormal(identity::<T>(space.dim()).columns(0, space.n()).into_owned());
    let s = pfaffian(&majorana_j(space, a)?)?.re;
    let s0 = pfaffian(&majorana_j(space, &vac)?)?.re;
    Ok(if (s > T::zero()) == (s0 > T::zero()) { 0 } else { 1 })
}

/// Parity(A₀) XOR parity(A_π) over S⁰ or S¹.
pub fn class_d_z2<T: Real>(b: &Bundle<T>) -> Result<InvariantResult> {
    let g = b.grid();
    let (i0, ipi) = match g.d() {
        0 => (0, 1),
        1 => (g.index_of_k(0.0).expect("circle"), g.index_of_k(PI).expect("circle")),
        d => return Err(Error::Precondition(format!("class D Z₂ needs a bundle over S⁰ or S¹, got S^{d}"))),
    };
    let p0 = fermion_parity(b.space(), b.fiber(i0)).map_err(|e| Error::Precondition(format!("fiber {i0} (k = 0): {e}")))?;
    let ppi = fermion_parity(b.space(), b.fiber(ipi)).map_err(|e| Error::Precondition(format!("fiber {ipi} (k = π): {e}")))?;
    Ok(InvariantResult::new(
        InvariantKind::Z2Bit,
        (p0 ^ ppi) as i64,
        json!({ "parity_at_0": p0, "parity_at_pi": ppi, "index_0": i0, "index_pi": ipi }),
    ))
}

/// Gauge-invariant winding of a section p of a line bundle around each plaquette:
/// (1/2π)·[Σ arg(p_b p̄_a Ō_ab) + arg Π O_ab], with O_ab the frame overlap along each edge.
pub fn plaquette_windings(
    values: &[C<f64>],
    overlap: &dyn Fn(usize, usize) -> C<f64>,
    plaquettes: &[Vec<usize>],
) -> Vec<f64> {
    plaquettes
        .iter()
        .map(|pl| {
            let mut sum = 0.0;
            let mut hol = C::new(1.0, 0.0);
            for e in 0..pl.len() {
                let (a, b) = (pl[e], pl[(e + 1) % pl.len()]);
                let o = overlap(a, b);
                sum += (values[b] * values[a].conj() * o.conj()).arg();
                hol *= o;
            }
            (sum + hol.arg()) / (2.0 * PI)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PfaffianZero {
    pub plaquette: usize,
    pub antipode_plaquette: usize,
    pub vorticity: i64,
    pub k: f64,
    pub t: f64,
    /// min over the plaquette corners of ‖Π(A_k^c) − Π(A_{−k})‖
    pub band_inversion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroScan {
    pub zeros: Vec<PfaffianZero>,
    pub pairs: usize,
    pub total_vorticity: i64,
    pub min_abs: f64,
    pub max_abs: f64,
}

fn plaquette_centroid(grid: &MomentumGrid, pl: &[usize]) -> (f64, f64) {
    let pts = grid.points();
    let (mut sx, mut sy, mut st) = (0.0, 0.0, 0.0);
    let mut count = 0.0;
    for &v in pl {
        let p = pts[v];
        st += p.t;
        if p.kind == crate::bundle::PointKind::Regular {
            sx += p.k.cos();
            sy += p.k.sin();
            count += 1.0;
        }
    }
    let k = if count > 0.0 { sy.atan2(sx) } else { 0.0 };
    (k, st / pl.len() as f64)
}

/// Locate zeros of a complex field over a d = 2 grid by plaquette winding.
///
/// `values[i]` is the field at grid index i, `overlap(a, b)` the frame overlap
/// det(F_a†F_b) (use 1 for a scalar field). `inversion(v)` reports the band
/// inversion measure at a vertex.
pub fn scan_zeros(
    grid: &MomentumGrid,
    values: &[C<f64>],
    overlap: &dyn Fn(usize, usize) -> C<f64>,
    inversion: &dyn Fn(usize) -> f64,
) -> Result<ZeroScan> {
    if grid.d() != 2 {
        return Err(Error::Precondition("zero scan needs a d = 2 grid".into()));
    }
    let abs: Vec<f64> = values.iter().map(|z| z.norm()).collect();
    let max_abs = abs.iter().cloned().fold(0.0, f64::max);
    let min_abs = abs.iter().cloned().fold(f64::INFINITY, f64::min);
    let floor = 1e-8 * max_abs.max(f64::MIN_POSITIVE);
    let on_grid: Vec<usize> = (0..values.len()).filter(|&i| abs[i] <= floor).collect();
    if !on_grid.is_empty() {
        return Err(Error::DegenerateGrid { indices: on_grid });
    }
    let plaq = grid.plaquettes();
    let windings = plaquette_windings(values, overlap, &plaq);
    let key = |pl: &[usize]| {
        let mut v = pl.to_vec();
        v.sort_unstable();
        v
    };
    let lookup: HashMap<Vec<usize>, usize> = plaq.iter().enumerate().map(|(i, p)| (key(p), i)).collect();
    let anti_plaq = |i: usize| -> usize {
        let img: Vec<usize> = plaq[i].iter().map(|&v| grid.antipode(v)).collect();
        lookup[&key(&img)]
    };
    let mut zeros = Vec::new();
    let mut total = 0;
    for (i, &w) in windings.iter().enumerate() {
        let r = w.round();
        if (w - r).abs() > 0.25 {
            return Err(Error::Resolution(format!("plaquette {i} winding {w:.3} is not near an integer")));
        }
        let r = r as i64;
        total += r;
        if r == 0 {
            continue;
        }
        let ap = anti_plaq(i);
        if ap == i || plaq[i].iter().any(|&v| grid.antipode(v) == v) {
            return Err(Error::ZeroAtTrim { plaquette: i });
        }
        if windings[ap].round() == 0.0 {
            return Err(Error::UnpairedZero { plaquette: i });
        }
        let (k, t) = plaquette_centroid(grid, &plaq[i]);
        let band_inversion = plaq[i].iter().map(|&v| inversion(v)).fold(f64::INFINITY, f64::min);
        zeros.push(PfaffianZero { plaquette: i, antipode_plaquette: ap, vorticity: r, k, t, band_inversion });
    }
    let pairs = zeros.len() / 2;
    Ok(ZeroScan { zeros, pairs, total_vorticity: total, min_abs, max_abs })
}

fn overlap_det<T: Real>(a: &Plane<T>, b: &Plane<T>) -> C<f64> {
    let d = det(&(a.frame().adjoint() * b.frame()));
    C::new(d.re.as_f64(), d.im.as_f64())
}

/// p(k) = Pf(F_kᵀ W F_k) at every grid point.
pub fn pfaffian_field<T: Real>(b: &Bundle<T>, j1: &Generator<T>) -> Result<Vec<C<f64>>> {
    let w = omega_form(b.space(), j1)?;
    b.fibers()
        .iter()
        .map(|f| restricted_pfaffian(&w, f).map(|z| C::new(z.re.as_f64(), z.im.as_f64())))
        .collect()
}

/// ‖Π(A_k^c) − Π(A_{−k})‖ at grid index i.
pub fn band_inversion<T: Real>(b: &Bundle<T>, i: usize) -> f64 {
    let j = b.grid().antipode(i);
    distance(&complement(b.fiber(i)), b.fiber(j)).as_f64()
}

/// Parity of the number of antipodal pairs of zeros of Pf(ω_k) over S².
pub fn kane_mele_z2<T: Real>(b: &Bundle<T>, j1_index: usize) -> Result<InvariantResult> {
    let j1 = b
        .clifford()
        .generators()
        .get(j1_index)
        .ok_or_else(|| Error::Precondition(format!("no generator {j1_index}")))?;
    let values = pfaffian_field(b, j1)?;
    let overlap = |x: usize, y: usize| overlap_det(b.fiber(x), b.fiber(y));
    let inversion = |v: usize| band_inversion(b, v);
    let scan = scan_zeros(b.grid(), &values, &overlap, &inversion)?;
    let value = (scan.pairs % 2) as i64;
    Ok(InvariantResult::new(InvariantKind::Z2Bit, value, serde_json::to_value(&scan).expect("plain data")))
}

/// U(k) = 2 E₊† Π_k E₋ in the ±i eigenbases of K (columns in the order
/// produced by pivoted Gram–Schmidt on the eigenprojector).
pub fn chiral_block<T: Real>(k: &Generator<T>, a: &Plane<T>) -> Result<CMat<T>> {
    let ep = eigenplane(k.matrix(), false);
    let em = eigenplane(k.matrix(), true);
    let u = ep.frame().adjoint() * a.projector() * em.frame() * c::<T>(2.0, 0.0);
    let defect = unitarity_defect(&u);
    if defect > T::lit(T::ALG_TOL.sqrt()) {
        return Err(Error::Numeric(format!("chiral block not unitary (defect {:e})", defect.as_f64())));
    }
    Ok(u)
}

/// Winding of det U(k) around S¹.
pub fn chiral_winding<T: Real>(b: &Bundle<T>, k_index: usize) -> Result<InvariantResult> {
    if b.grid().d() != 1 {
        return Err(Error::Precondition("chiral winding needs a bundle over S¹".into()));
    }
    let k = b
        .clifford()
        .generators()
        .get(k_index)
        .ok_or_else(|| Error::Precondition(format!("no generator {k_index}")))?;
    if k.parity() != Parity::Imaginary {
        return Err(Error::Precondition(format!("generator {k_index} is not imaginary")));
    }
    let dets: Vec<C<f64>> = b
        .fibers()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let pc = crate::planes::pseudo_check(k, f)?;
            if pc > T::lit(T::ALG_TOL) {
                return Err(Error::Precondition(format!("fiber {i}: K is not a pseudo-symmetry ({:e})", pc.as_f64())));
            }
            let d = det(&chiral_block(k, f)?);
            Ok(C::new(d.re.as_f64(), d.im.as_f64()))
        })
        .collect::<Result<_>>()?;
    let n = dets.len();
    let mut total = 0.0;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let step = (dets[(i + 1) % n] * dets[i].conj()).arg();
        if step.abs() >= PI * 0.999 {
            return Err(Error::Resolution(format!("phase step {step:.3} between grid points {i} and {}", (i + 1) % n)));
        }
        worst = worst.max(step.abs());
        total += step;
    }
    let w = total / (2.0 * PI);
    Ok(InvariantResult::new(
        InvariantKind::WindingInt,
        w.round() as i64,
        json!({ "raw": w, "max_step": worst, "points": n }),
    ))
}

/// Plaquette fluxes arg Π det(F_a†F_b) of a d = 2 bundle.
pub fn plaquette_fluxes<T: Real>(b: &Bundle<T>) -> Result<Vec<f64>> {
    if b.grid().d() != 2 {
        return Err(Error::Precondition("Chern number needs a bundle over S²".into()));
    }
    b.grid()
        .plaquettes()
        .iter()
        .enumerate()
        .map(|(i, pl)| {
            let mut prod = C::new(1.0, 0.0);
            for e in 0..pl.len() {
                let o = overlap_det(b.fiber(pl[e]), b.fiber(pl[(e + 1) % pl.len()]));
                if o.norm() < 1e-8 {
                    return Err(Error::Resolution(format!("singular overlap on plaquette {i}")));
                }
                prod *= o;
            }
            Ok(prod.arg())
        })
        .collect()
}

pub fn chern_number<T: Real>(b: &Bundle<T>) -> Result<InvariantResult> {
    let fluxes = plaquette_fluxes(b)?;
    let raw = fluxes.iter().sum::<f64>() / (2.0 * PI);
    let value = raw.round();
    let residual = (raw - value).abs();
    if residual >= 0.05 {
        return Err(Error::Resolution(format!("Chern sum {raw:.4} has residual {residual:.4}")));
    }
    let max_flux = fluxes.iter().fold(0.0f64, |m, f| m.max(f.abs()));
    Ok(InvariantResult::new(
        InvariantKind::ChernInt,
        value as i64,
        json!({ "raw": raw, "residual": residual, "max_flux": max_flux, "plaquettes": fluxes.len() }),
    ))
}

/// n₊ = rank of Π_A on the creator eigenspace of Q; requires QA = A.
pub fn component_index_ai<T: Real>(space: &NambuSpace, a: &Plane<T>, q: &CMat<T>) -> Result<usize> {
    if q.nrows() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: q.nrows() });
    }
    let p = a.projector();
    let comm = sup_norm(&(q * p - p * q));
    if comm > T::lit(T::ALG_TOL) {
        return Err(Error::Precondition(format!("Q does not preserve A ({:e})", comm.as_f64())));
    }
    let creators = (identity::<T>(space.dim()) - q).map(|z| z * T::lit(0.5));
    let tr = (p * creators).trace().re.as_f64();
    Ok(tr.round() as usize)
}

pub fn component_index_result<T: Real>(space: &NambuSpace, a: &Plane<T>) -> Result<InvariantResult> {
    let v = component_index_ai(space, a, &space.charge::<T>())?;
    Ok(InvariantResult::new(InvariantKind::ComponentIndex, v as i64, json!({ "n": space.n() })))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PfaffianRow {
    pub index: usize,
    pub k: f64,
    pub t: f64,
    pub abs_pf: f64,
    pub arg_pf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxRow {
    pub plaquette: usize,
    pub flux: f64,
}

pub fn pfaffian_rows<T: Real>(b: &Bundle<T>, j1: &Generator<T>) -> Result<Vec<PfaffianRow>> {
    let v = pfaffian_field(b, j1)?;
    Ok(b.grid()
        .points()
        .iter()
        .zip(v)
        .enumerate()
        .map(|(index, (p, z))| PfaffianRow { index, k: p.k, t: p.t, abs_pf: z.norm(), arg_pf: z.arg() })
        .collect())
}

pub fn flux_rows<T: Real>(b: &Bundle<T>) -> Result<Vec<FluxRow>> {
    Ok(plaquette_fluxes(b)?.into_iter().enumerate().map(|(plaquette, flux)| FluxRow { plaquette, flux }).collect())
}

pub fn rows_to_csv<S: Serialize>(rows: &[S]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Numeric(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Numeric(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Numeric(e.to_string()))
}
