//! Exact computations with divisor classes on rational and ruled surfaces.
//!
//! The crate is organised by task:
//!
//! * [`lattice`]: surface presets, intersection pairing, class parser.
//! * [`invariants`]: J-genus, expected dimension, SW dimension.
//! * [`enumerate`]: exceptional classes, `-2` roots, negative rational classes.
//! * [`cremona`]: Cremona moves, reduction, Weyl orbits.
//! * [`sw`]: wall-crossing numbers and a forward-chaining SW deduction engine.
//! * [`nef`]: obstruction search for nefness and the fiber-class certificate.
//! * [`config`]: weighted subvariety configurations and their bounds.
//! * [`cubic`]: exact chord–tangent addition, conics and cubic pencils.

pub mod config;
pub mod cremona;
pub mod cubic;
pub mod enumerate;
pub mod error;
pub mod invariants;
pub mod lattice;
mod linalg;
mod poly;
pub mod nef;
pub mod sw;

pub use error::{CurveError, Result};
pub use lattice::{DivisorClass, SurfaceKind, SurfaceModel};
