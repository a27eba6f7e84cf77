pub mod arith;
pub mod error;
pub mod intlat;
pub mod klein;
pub mod lattice;
pub mod mds;
pub mod qform;
pub mod quaternion;
pub mod repnum;
pub mod verify;

pub use error::{Error, Result};
pub use klein::{CmQuadruple, KleinPair};
pub use lattice::{Plane, PluckerVector, SymMatrix4, Wedge};
pub use mds::{MultiPoly, RationalFn, SeriesTable};
pub use qform::{ClassGroup, FormClass, GenusPartition, Gl2Class, QuadForm};
pub use quaternion::{Quaternion, TracelessQuaternion};
pub use repnum::{DirichletCoeffs, RepDecomposition};
