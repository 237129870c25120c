//! Cellular Z2 cohomology for bistable constraint systems.
//!
//! Systems of two-state elements (gears, Necker cubes, rhombi) are modelled
//! as a coupling cochain on a constraint graph inside a 2-complex. Their
//! global behaviour is read off from cohomology: H⁰ counts readings, H¹
//! holds conflicts and impossibilities, H² holds curvature and flux sectors.
//!
//! ```
//! use bistable::{builders, constraint::{classify, Level}};
//!
//! let odd = builders::gear_ring(5).unwrap();
//! assert_eq!(classify(&odd).level, Level::Impossibility);
//! let even = builders::gear_ring(6).unwrap();
//! assert_eq!(classify(&even).level, Level::Ambiguity);
//! ```

pub mod builders;
pub mod cohomology;
pub mod complex;
pub mod constraint;
pub mod error;
pub mod export;
pub mod flux;
pub mod gf2;
pub mod sweep;
pub mod torsor;

pub use complex::{CellComplex, DeltaComplex, Subcomplex};
pub use constraint::{Classification, CouplingSystem, Level};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};

/// Version tag carried by every JSON document the tools emit.
pub const SCHEMA_VERSION: u32 = 1;
