#![allow(dead_code)]

use fermibundle::{CMat64, CVec64, Complex64 as C, NambuSpace, Plane64};
use rand::rngs::StdRng;
use rand::Rng;

pub fn eye(d: usize) -> CMat64 {
    CMat64::identity(d, d)
}

pub fn sup(m: &CMat64) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

/// Scaling and squaring around a 30-term Taylor series.
pub fn expm(a: &CMat64) -> CMat64 {
    let norm: f64 = a.iter().map(|z| z.norm()).sum();
    let s = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let scaled = a.map(|z| z / 2f64.powi(s));
    let mut term = eye(a.nrows());
    let mut sum = term.clone();
    for j in 1..30 {
        term = &term * &scaled / C::new(j as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Gaussian elimination with partial pivoting.
pub fn det_oracle(m: &CMat64) -> C {
    let n = m.nrows();
    let mut a = m.clone();
    let mut d = C::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm())).unwrap();
        if a[(p, k)].norm() == 0.0 {
            return C::new(0.0, 0.0);
        }
        if p != k {
            a.swap_rows(p, k);
            d = -d;
        }
        d *= a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / a[(k, k)];
            for j in k..n {
                let v = a[(k, j)];
                a[(i, j)] -= f * v;
            }
        }
    }
    d
}

pub fn random_complex(rng: &mut StdRng, r: usize, c: usize) -> CMat64 {
    CMat64::from_fn(r, c, |_, _| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

pub fn random_anti_hermitian(rng: &mut StdRng, d: usize) -> CMat64 {
    let z = random_complex(rng, d, d);
    (&z - z.adjoint()).map(|x| x * 0.5)
}

pub fn bracket(d: usize) -> CMat64 {
    let n = d / 2;
    CMat64::from_fn(d, d, |i, j| if (i + n == j) || (j + n == i) { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) })
}

/// Project Z onto {anti-Hermitian, anti-commuting with every J (or commuting),
/// B Zᵀ B = sign·Z} by alternating projections.
pub fn alternate(z: &CMat64, gens: &[CMat64], anti: bool, bsign: f64, sweeps: usize) -> CMat64 {
    let b = bracket(z.nrows());
    let mut z = z.clone();
    for _ in 0..sweeps {
        z = (&z - z.adjoint()).map(|x| x * 0.5);
        for j in gens {
            // J⁻¹ = −J
            let conj = -(j * &z * j);
            z = if anti { (&z - conj).map(|x| x * 0.5) } else { (&z + conj).map(|x| x * 0.5) };
        }
        z = (&z + (&b * z.transpose() * &b).map(|x| x * bsign)).map(|x| x * 0.5);
    }
    z
}

/// −Z² is positive; L = Z (−Z²)^{−1/2}.
pub fn normalize_complex_structure(z: &CMat64) -> CMat64 {
    let m = -(z * z);
    let h = (&m + m.adjoint()).map(|x| x * 0.5);
    let eig = h.symmetric_eigen();
    let inv_sqrt = CMat64::from_diagonal(&eig.eigenvalues.map(|l| C::new(1.0 / l.sqrt(), 0.0)));
    z * (&eig.eigenvectors * inv_sqrt * eig.eigenvectors.adjoint())
}

/// Random Lagrangian plane with J A = A^c for every J in `gens`:
/// the +i eigenplane of a random real complex structure anti-commuting with them.
pub fn random_valid_plane(rng: &mut StdRng, space: &NambuSpace, gens: &[CMat64]) -> Plane64 {
    let d = space.dim();
    loop {
        let z = alternate(&random_anti_hermitian(rng, d), gens, true, -1.0, 60);
        if sup(&z) < 1e-3 {
            continue;
        }
        let l = normalize_complex_structure(&z);
        let p = (eye(d) - l.map(|x| x * C::new(0.0, 1.0))).map(|x| x * 0.5);
        let plane = Plane64::from_projector(&p);
        if plane.rank() != space.n() || fermibundle::fermi_check(space, &plane, &plane).unwrap() > 1e-12 {
            continue;
        }
        let ok = gens.iter().all(|j| fermibundle::planes::pseudo_deviation(j, &plane).unwrap() < 1e-12);
        if ok {
            return plane;
        }
    }
}

/// Random anti-Hermitian X commuting with every generator and with B Xᵀ B = sign·X.
pub fn random_commutant(rng: &mut StdRng, d: usize, gens: &[CMat64], bsign: f64) -> CMat64 {
    alternate(&random_anti_hermitian(rng, d), gens, false, bsign, 80)
}

pub fn span(space: &NambuSpace, vs: &[CVec64]) -> Plane64 {
    fermibundle::plane_from_vectors(space, vs).unwrap()
}

pub fn proj_gap(a: &Plane64, b: &Plane64) -> f64 {
    sup(&(a.projector() - b.projector()))
}
