//! Local face modules and local h-vectors of homology triangulations of a
//! simplex, computed over exact fields.
//!
//! All algebra is generic over [`field::Field`]; the aliases below fix the
//! scalar to the rationals or to a prime field.
//!
//! ```
//! use localh::face_ring::LsopConfig;
//! use localh::local::{local_h_incexc, LocalSetup};
//! use localh::{TriangulationBuilder, Q};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let t = TriangulationBuilder::new("triforce", &["u", "v", "w"])
//!     .vertex("a", &["v", "w"])
//!     .vertex("b", &["u", "w"])
//!     .vertex("c", &["u", "v"])
//!     .vertex("u", &["u"])
//!     .vertex("v", &["v"])
//!     .vertex("w", &["w"])
//!     .facet(&["a", "b", "c"])
//!     .facet(&["u", "b", "c"])
//!     .facet(&["v", "a", "c"])
//!     .facet(&["w", "a", "b"])
//!     .build()?;
//! let c = t.face_from_labels(&["c"])?;
//! let setup = LocalSetup::<Q>::new(&t, &c, 0, LsopConfig::default())?;
//! assert_eq!(setup.module(2).local_h().values, vec![0, 1, 0]);
//! assert_eq!(local_h_incexc(&t, &c)?.values, vec![0, 1, 0]);
//! # Ok(())
//! # }
//! ```

pub mod complex;
pub mod face_ring;
pub mod field;
pub mod functor;
pub mod linalg;
pub mod local;

pub use complex::{Face, SimplicialComplex, Triangulation, TriangulationBuilder};
pub use field::{Characteristic, Field};

/// The rationals.
pub type Q = field::Rational;
/// The default prime field for fast cross-checks.
pub type Gf = field::Gf32003;

pub type QMatrix = linalg::Matrix<Q>;
pub type QLinearForm = face_ring::LinearForm<Q>;
pub type QSpecialLsop = face_ring::SpecialLsop<Q>;
pub type QLocalSetup<'a> = local::LocalSetup<'a, Q>;
pub type QResolution = local::ResolutionComplex<Q>;
pub type QInducedMap<'a> = functor::InducedMap<'a, Q>;
