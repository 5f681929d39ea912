//! Ground-state bundles of gapped free-fermion systems in Nambu space.
//!
//! Planes, Clifford pseudo-symmetries, the periodic-table classes, momentum-space
//! bundles over spheres, the diagonal suspension map and the low-dimensional invariants.
//!
//! Everything is generic over the real scalar (`f32` or `f64`); the `*64` aliases
//! below fix `f64`.

pub mod bundle;
pub mod diagonal;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod nambu;
pub mod planes;
pub mod scalar;
pub mod symmetry;

pub use bundle::{
    deserialize_bundle, make_sphere_grid, serialize_bundle, validate_bundle, Bundle, BundleReport, MomentumGrid,
};
pub use diagonal::{
    example_dIII, example_kitaev_chain, example_majorana, pole_plane, rotor, suspend, SuspensionInput,
};
pub use error::{Error, Result};
pub use invariants::{
    chern_number, chiral_winding, class_d_z2, component_index_ai, fermion_parity, kane_mele_z2, pfaffian, InvariantKind,
    InvariantResult,
};
pub use nambu::{
    check_clifford, check_clifford_tol, classify_generator, CliffordReport, CliffordSet, CliffordViolation, Generator,
    GeneratorKind, NambuSpace, Parity,
};
pub use planes::{complement, distance, fermi_check, fermi_perp, j_of, plane_from_vectors, pseudo_check, Plane};
pub use scalar::{CMat, CVec, Real, C};
pub use symmetry::{
    class_info, double_one_one, imaginary_realization, kitaev_generators, lift_plane, spin_embed, true_symmetries,
    unlift_plane, AntiUnitary, ClassInfo, ClassLabel, SymmetryClass, TrueSymmetries,
};

pub type Complex64 = C<f64>;
pub type CMat64 = CMat<f64>;
pub type CVec64 = CVec<f64>;
pub type Plane64 = Plane<f64>;
pub type Generator64 = Generator<f64>;
pub type CliffordSet64 = CliffordSet<f64>;
pub type Bundle64 = Bundle<f64>;
pub type Plane32 = Plane<f32>;
pub type CliffordSet32 = CliffordSet<f32>;
