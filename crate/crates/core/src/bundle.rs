//! Discretized momentum spheres and bundles of planes over them.

use crate::error::{Error, Result};
use crate::nambu::{CliffordSet, Generator, NambuSpace, Parity};
use crate::planes::{distance, fermi_check, pseudo_check, Plane};
use crate::scalar::{CMat, Real, C};
use crate::symmetry::SymmetryClass;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::f64::consts::PI;

pub const SCHEMA_VERSION: u64 = 1;
pub const DEFAULT_CONTINUITY: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Regular,
    SouthPole,
    NorthPole,
}

/// `k` is the equator angle, `t` the polar angle (0 off the d = 2 grids).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub k: f64,
    pub t: f64,
    pub kind: PointKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumGrid {
    d: usize,
    n_equator: usize,
    m_polar: usize,
    points: Vec<GridPoint>,
    antipode: Vec<usize>,
    adjacency: Vec<(usize, usize)>,
}

/// k_i = −π + 2πi/N
pub fn equator_angle(i: usize, n: usize) -> f64 {
    -PI + 2.0 * PI * i as f64 / n as f64
}

/// t_j = −π/2 + (j+1)π/(M+1)
pub fn polar_angle(j: usize, m: usize) -> f64 {
    -PI / 2.0 + (j + 1) as f64 * PI / (m + 1) as f64
}

/// Reduce an angle to (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// d = 0 gives {0, π}; d = 1 gives N angles on [−π, π); d = 2 gives N×M interior
/// points (index i·M + j) followed by the south and north poles.
pub fn make_sphere_grid(d: usize, n: usize, m: usize) -> Result<MomentumGrid> {
    match d {
        0 => Ok(MomentumGrid {
            d,
            n_equator: 2,
            m_polar: 0,
            points: vec![
                GridPoint { k: 0.0, t: 0.0, kind: PointKind::Regular },
                GridPoint { k: PI, t: 0.0, kind: PointKind::Regular },
            ],
            antipode: vec![0, 1],
            adjacency: vec![],
        }),
        1 | 2 => {
            if n < 4 || n % 2 != 0 {
                return Err(Error::Precondition(format!("equator resolution N = {n} must be even and at least 4")));
            }
            let ring_anti = |i: usize| (n - i) % n;
            if d == 1 {
                let points = (0..n).map(|i| GridPoint { k: equator_angle(i, n), t: 0.0, kind: PointKind::Regular }).collect();
                let antipode = (0..n).map(ring_anti).collect();
                let adjacency = (0..n).map(|i| (i, (i + 1) % n)).collect();
                return Ok(MomentumGrid { d, n_equator: n, m_polar: 0, points, antipode, adjacency });
            }
            if m < 1 {
                return Err(Error::Precondition("polar resolution M must be at least 1".into()));
            }
            let mut points = Vec::with_capacity(n * m + 2);
            let mut antipode = Vec::with_capacity(n * m + 2);
            for i in 0..n {
                for j in 0..m {
                    points.push(GridPoint { k: equator_angle(i, n), t: polar_angle(j, m), kind: PointKind::Regular });
                    antipode.push(ring_anti(i) * m + (m - 1 - j));
                }
            }
            let (south, north) = (n * m, n * m + 1);
            points.push(GridPoint { k: 0.0, t: -PI / 2.0, kind: PointKind::SouthPole });
            points.push(GridPoint { k: 0.0, t: PI / 2.0, kind: PointKind::NorthPole });
            antipode.push(north);
            antipode.push(south);
            let mut adjacency = Vec::new();
            for i in 0..n {
                let ip = (i + 1) % n;
                for j in 0..m {
                    adjacency.push((i * m + j, ip * m + j));
                    if j + 1 < m {
                        adjacency.push((i * m + j, i * m + j + 1));
                    }
                }
                adjacency.push((south, i * m));
                adjacency.push((i * m + m - 1, north));
            }
            Ok(MomentumGrid { d, n_equator: n, m_polar: m, points, antipode, adjacency })
        }
        _ => Err(Error::Precondition(format!("sphere dimension {d} not supported (0, 1 or 2)"))),
    }
}

impl MomentumGrid {
    pub fn d(&self) -> usize {
        self.d
    }

    /// Equator resolution N (2 for d = 0).
    pub fn n_equator(&self) -> usize {
        self.n_equator
    }

    /// Polar resolution M (0 below d = 2).
    pub fn m_polar(&self) -> usize {
        self.m_polar
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn antipode(&self, i: usize) -> usize {
        self.antipode[i]
    }

    pub fn antipode_map(&self) -> &[usize] {
        &self.antipode
    }

    pub fn adjacency(&self) -> &[(usize, usize)] {
        &self.adjacency
    }

    /// Self-antipodal indices.
    pub fn trims(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.antipode[i] == i).collect()
    }

    /// Index of the equator point nearest to angle k (d = 1 and d = 0 grids).
    pub fn index_of_k(&self, k: f64) -> Option<usize> {
        if self.d == 2 {
            return None;
        }
        (0..self.len()).min_by(|&a, &b| {
            let da = wrap_angle(self.points[a].k - k).abs();
            let db = wrap_angle(self.points[b].k - k).abs();
            da.total_cmp(&db)
        })
    }

    /// d = 2 interior index of (i, j).
    pub fn index2(&self, i: usize, j: usize) -> usize {
        i * self.m_polar + j
    }

    pub fn south(&self) -> Option<usize> {
        (self.d == 2).then(|| self.n_equator * self.m_polar)
    }

    pub fn north(&self) -> Option<usize> {
        (self.d == 2).then(|| self.n_equator * self.m_polar + 1)
    }

    /// Oriented plaquettes of a d = 2 grid (quads and polar triangles), counterclockwise in (k, t).
    pub fn plaquettes(&self) -> Vec<Vec<usize>> {
        if self.d != 2 {
            return Vec::new();
        }
        let (n, m) = (self.n_equator, self.m_polar);
        let (s, no) = (n * m, n * m + 1);
        let mut out = Vec::with_capacity(n * (m + 1));
        for i in 0..n {
            let ip = (i + 1) % n;
            out.push(vec![s, ip * m, i * m]);
            for j in 0..m.saturating_sub(1) {
                out.push(vec![i * m + j, ip * m + j, ip * m + j + 1, i * m + j + 1]);
            }
            out.push(vec![i * m + m - 1, ip * m + m - 1, no]);
        }
        out
    }

    /// Grid with doubled equator resolution and, for each new point, the old
    /// index it takes its fiber from. Nearest neighbor with ties broken toward
    /// smaller |k|, which keeps the antipode pairing intact.
    pub fn refine(&self) -> Result<(MomentumGrid, Vec<usize>)> {
        if self.d != 1 {
            return Err(Error::Precondition("refinement is implemented for d = 1 grids".into()));
        }
        let n = self.n_equator;
        let fine = make_sphere_grid(1, 2 * n, 0)?;
        let src = (0..2 * n)
            .map(|i| {
                if i % 2 == 0 {
                    i / 2
                } else {
                    let (a, b) = (i / 2, (i / 2 + 1) % n);
                    if wrap_angle(self.points[a].k).abs() < wrap_angle(self.points[b].k).abs() {
                        a
                    } else {
                        b
                    }
                }
            })
            .collect();
        Ok((fine, src))
    }
}

/// Bundle of rank-n planes over a momentum grid with its pseudo-symmetries.
#[derive(Debug, Clone, PartialEq)]
pub struct Bundle<T: Real> {
    grid: MomentumGrid,
    space: NambuSpace,
    clifford: CliffordSet<T>,
    fibers: Vec<Plane<T>>,
}

impl<T: Real> Bundle<T> {
    pub fn new(grid: MomentumGrid, clifford: CliffordSet<T>, fibers: Vec<Plane<T>>) -> Result<Self> {
        let space = *clifford.space();
        if fibers.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: fibers.len() });
        }
        for f in &fibers {
            if f.dim() != space.dim() {
                return Err(Error::DimensionMismatch { expected: space.dim(), found: f.dim() });
            }
            if f.rank() != space.n() {
                return Err(Error::RankMismatch { expected: space.n(), found: f.rank() });
            }
        }
        Ok(Self { grid, space, clifford, fibers })
    }

    /// Same fiber everywhere.
    pub fn constant(grid: MomentumGrid, clifford: CliffordSet<T>, fiber: Plane<T>) -> Result<Self> {
        let fibers = vec![fiber; grid.len()];
        Self::new(grid, clifford, fibers)
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn space(&self) -> &NambuSpace {
        &self.space
    }

    pub fn clifford(&self) -> &CliffordSet<T> {
        &self.clifford
    }

    pub fn fibers(&self) -> &[Plane<T>] {
        &self.fibers
    }

    pub fn fiber(&self, i: usize) -> &Plane<T> {
        &self.fibers[i]
    }

    pub fn class(&self) -> SymmetryClass {
        SymmetryClass::of_set(&self.clifford)
    }

    /// Replace every fiber A by U·A and every generator J by U J U†.
    pub fn conjugate_by(&self, u: &CMat<T>) -> Result<Self> {
        let gens = self
            .clifford
            .generators()
            .iter()
            .map(|g| Generator::new(&self.space, u * g.matrix() * u.adjoint()))
            .collect::<Result<Vec<_>>>()?;
        let set = CliffordSet::new(self.space, gens)?.with_complex(self.clifford.is_complex());
        Self::new(self.grid.clone(), set, self.fibers.iter().map(|f| f.apply(u)).collect())
    }

    /// Pullback along the antipodal map: fiber at k becomes the fiber at −k.
    pub fn antipodal_pullback(&self) -> Self {
        let fibers = (0..self.grid.len()).map(|i| self.fibers[self.grid.antipode(i)].clone()).collect();
        Self { fibers, ..self.clone() }
    }

    /// Nearest-neighbor transfer onto the doubled d = 1 grid.
    pub fn refine(&self) -> Result<Self> {
        let (grid, src) = self.grid.refine()?;
        let fibers = src.iter().map(|&i| self.fibers[i].clone()).collect();
        Self::new(grid, self.clifford.clone(), fibers)
    }

    pub fn with_clifford(&self, clifford: CliffordSet<T>) -> Result<Self> {
        Self::new(self.grid.clone(), clifford, self.fibers.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoViolation {
    pub index: usize,
    pub generator: usize,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FermiViolation {
    pub index: usize,
    pub antipode: usize,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityViolation {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BundleReport {
    pub pseudo: Vec<PseudoViolation>,
    pub fermi: Vec<FermiViolation>,
    pub continuity: Vec<ContinuityViolation>,
}

impl BundleReport {
    pub fn is_empty(&self) -> bool {
        self.pseudo.is_empty() && self.fermi.is_empty() && self.continuity.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateOptions {
    pub tol: f64,
    pub continuity: f64,
}

impl ValidateOptions {
    pub fn for_scalar<T: Real>() -> Self {
        Self { tol: T::ALG_TOL, continuity: DEFAULT_CONTINUITY }
    }
}

/// Per-point maxima used by the report and the CSV export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDiagnostics {
    pub index: usize,
    pub k: f64,
    pub t: f64,
    pub antipode: usize,
    pub pseudo_max: f64,
    /// None for complex classes, where the Fermi constraint is lifted.
    pub fermi_max: Option<f64>,
    pub continuity_max: f64,
}

fn pseudo_values<T: Real>(b: &Bundle<T>, i: usize) -> Vec<f64> {
    b.clifford
        .generators()
        .iter()
        .map(|g| pseudo_check(g, &b.fibers[i]).map(|x| x.as_f64()).unwrap_or(f64::INFINITY))
        .collect()
}

fn fermi_value<T: Real>(b: &Bundle<T>, i: usize) -> Option<f64> {
    if b.clifford.is_complex() {
        return None;
    }
    let j = b.grid.antipode(i);
    Some(fermi_check(&b.space, &b.fibers[i], &b.fibers[j]).map(|x| x.as_f64()).unwrap_or(f64::INFINITY))
}

pub fn point_diagnostics<T: Real>(b: &Bundle<T>) -> Vec<PointDiagnostics> {
    let mut cont = vec![0.0f64; b.grid.len()];
    for &(p, q) in b.grid.adjacency() {
        let d = distance(&b.fibers[p], &b.fibers[q]).as_f64();
        cont[p] = cont[p].max(d);
        cont[q] = cont[q].max(d);
    }
    (0..b.grid.len())
        .map(|i| {
            let pt = b.grid.points[i];
            PointDiagnostics {
                index: i,
                k: pt.k,
                t: pt.t,
                antipode: b.grid.antipode(i),
                pseudo_max: pseudo_values(b, i).into_iter().fold(0.0, f64::max),
                fermi_max: fermi_value(b, i),
                continuity_max: cont[i],
            }
        })
        .collect()
}

pub fn validate_bundle<T: Real>(b: &Bundle<T>) -> BundleReport {
    validate_bundle_with(b, ValidateOptions::for_scalar::<T>())
}

pub fn validate_bundle_with<T: Real>(b: &Bundle<T>, opts: ValidateOptions) -> BundleReport {
    let mut report = BundleReport::default();
    for i in 0..b.grid.len() {
        for (g, v) in pseudo_values(b, i).into_iter().enumerate() {
            if !(v < opts.tol) {
                report.pseudo.push(PseudoViolation { index: i, generator: g, magnitude: v });
            }
        }
        if let Some(v) = fermi_value(b, i) {
            if !(v < opts.tol) {
                report.fermi.push(FermiViolation { index: i, antipode: b.grid.antipode(i), magnitude: v });
            }
        }
    }
    for &(p, q) in b.grid.adjacency() {
        let d = distance(&b.fibers[p], &b.fibers[q]).as_f64();
        if !(d < opts.continuity) {
            report.continuity.push(ContinuityViolation { a: p, b: q, distance: d });
        }
    }
    report
}

fn matrix_json<T: Real>(m: &CMat<T>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re.as_f64(), m[(i, j)].im.as_f64()])).collect()))
            .collect(),
    )
}

pub fn bundle_to_json<T: Real>(b: &Bundle<T>) -> Value {
    let class = b.class();
    let gens: Vec<Value> = b
        .clifford
        .generators()
        .iter()
        .map(|g| json!({ "parity": g.parity(), "matrix": matrix_json(g.matrix()) }))
        .collect();
    let fibers: Vec<Value> = b.fibers.iter().map(|f| json!({ "rank": f.rank(), "frame": matrix_json(f.frame()) })).collect();
    json!({
        "version": SCHEMA_VERSION,
        "class": class,
        "complex": b.clifford.is_complex(),
        "n": b.space.n(),
        "grid": { "d": b.grid.d, "N": b.grid.n_equator, "M": b.grid.m_polar },
        "generators": gens,
        "fibers": fibers,
    })
}

pub fn serialize_bundle<T: Real>(b: &Bundle<T>) -> String {
    serde_json::to_string_pretty(&bundle_to_json(b)).expect("json values always serialize")
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(&format!("{path}.{key}"), "missing field"))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn parse_matrix<T: Real>(v: &Value, rows: usize, cols: Option<usize>, path: &str) -> Result<CMat<T>> {
    let rs = as_array(v, path)?;
    if rs.len() != rows {
        return Err(schema(path, format!("expected {rows} rows, found {}", rs.len())));
    }
    let mut data: Vec<Vec<C<T>>> = Vec::with_capacity(rows);
    for (i, r) in rs.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let cells = as_array(r, &rp)?;
        let mut row = Vec::with_capacity(cells.len());
        for (j, cell) in cells.iter().enumerate() {
            let cp = format!("{rp}[{j}]");
            let pair = as_array(cell, &cp)?;
            let num = |x: &Value| x.as_f64().ok_or_else(|| schema(&cp, "expected [re, im] numbers"));
            if pair.len() != 2 {
                return Err(schema(&cp, "expected [re, im]"));
            }
            row.push(C::new(T::lit(num(&pair[0])?), T::lit(num(&pair[1])?)));
        }
        data.push(row);
    }
    let ncols = cols.unwrap_or_else(|| data.first().map_or(0, |r| r.len()));
    for (i, r) in data.iter().enumerate() {
        if r.len() != ncols {
            return Err(schema(&format!("{path}[{i}]"), format!("expected {ncols} columns, found {}", r.len())));
        }
    }
    Ok(CMat::from_fn(rows, ncols, |i, j| data[i][j]))
}

pub fn bundle_from_json<T: Real>(doc: &Value) -> Result<Bundle<T>> {
    let root = as_object(doc, "$")?;
    let version = field(root, "version", "$")?
        .as_u64()
        .ok_or_else(|| schema("$.version", "expected an integer"))?;
    if version != SCHEMA_VERSION {
        return Err(schema("$.version", format!("unsupported version {version}, expected {SCHEMA_VERSION}")));
    }
    let n = as_usize(field(root, "n", "$")?, "$.n")?;
    let space = NambuSpace::new(n).map_err(|e| schema("$.n", e.to_string()))?;
    let g = as_object(field(root, "grid", "$")?, "$.grid")?;
    let d = as_usize(field(g, "d", "$.grid")?, "$.grid.d")?;
    let big_n = as_usize(field(g, "N", "$.grid")?, "$.grid.N")?;
    let big_m = as_usize(field(g, "M", "$.grid")?, "$.grid.M")?;
    let grid = make_sphere_grid(d, big_n, big_m).map_err(|e| schema("$.grid", e.to_string()))?;
    let complex = match root.get("complex") {
        None => false,
        Some(v) => v.as_bool().ok_or_else(|| schema("$.complex", "expected a boolean"))?,
    };

    let mut gens = Vec::new();
    if let Some(gv) = root.get("generators") {
        for (l, item) in as_array(gv, "$.generators")?.iter().enumerate() {
            let p = format!("$.generators[{l}]");
            let obj = as_object(item, &p)?;
            let m = parse_matrix::<T>(field(obj, "matrix", &p)?, space.dim(), Some(space.dim()), &format!("{p}.matrix"))?;
            let gen = Generator::new(&space, m).map_err(|e| schema(&p, e.to_string()))?;
            if let Some(pv) = obj.get("parity") {
                let want: Parity =
                    serde_json::from_value(pv.clone()).map_err(|e| schema(&format!("{p}.parity"), e.to_string()))?;
                if want != gen.parity() {
                    return Err(schema(&format!("{p}.parity"), "declared parity does not match the matrix"));
                }
            }
            gens.push(gen);
        }
    }
    let clifford = CliffordSet::new(space, gens)?.with_complex(complex);

    let class_v = field(root, "class", "$")?;
    let class: SymmetryClass =
        serde_json::from_value(class_v.clone()).map_err(|e| schema("$.class", e.to_string()))?;
    let computed = SymmetryClass::of_set(&clifford);
    if class != computed {
        return Err(schema(
            "$.class",
            format!("declared class {} does not match generator signature (class {})", class.label, computed.label),
        ));
    }

    let fv = as_array(field(root, "fibers", "$")?, "$.fibers")?;
    if fv.len() != grid.len() {
        return Err(schema("$.fibers", format!("expected {} fibers for the grid, found {}", grid.len(), fv.len())));
    }
    let mut fibers = Vec::with_capacity(fv.len());
    for (i, item) in fv.iter().enumerate() {
        let p = format!("$.fibers[{i}]");
        let obj = as_object(item, &p)?;
        let frame = parse_matrix::<T>(field(obj, "frame", &p)?, space.dim(), None, &format!("{p}.frame"))?;
        if frame.ncols() != n {
            return Err(schema(&p, format!("fiber {i} has rank {}, expected n = {n}", frame.ncols())));
        }
        if let Some(r) = obj.get("rank") {
            if as_usize(r, &format!("{p}.rank"))? != n {
                return Err(schema(&format!("{p}.rank"), format!("fiber {i} declares rank {r}, expected n = {n}")));
            }
        }
        let plane = Plane::from_orthonormal(frame.clone());
        let plane = if plane.frame_defect() < T::lit(T::ORTHO_TOL) {
            plane
        } else {
            Plane::from_columns(&frame).map_err(|e| schema(&p, format!("fiber {i}: {e}")))?
        };
        fibers.push(plane);
    }
    Bundle::new(grid, clifford, fibers)
}

pub fn deserialize_bundle<T: Real>(text: &str) -> Result<Bundle<T>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| schema("$", format!("invalid JSON: {e}")))?;
    bundle_from_json(&doc)
}

/// Columns: index, k, t, antipode, pseudo_max, fermi_max, continuity_max.
pub fn diagnostics_csv<T: Real>(b: &Bundle<T>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in point_diagnostics(b) {
        w.serialize(row).map_err(|e| Error::Numeric(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Numeric(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Numeric(e.to_string()))
}
