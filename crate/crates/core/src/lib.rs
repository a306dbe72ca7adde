//! Jet-based evaluation and verification of Finsler surfaces under
//! direction-dependent conformal changes `F -> exp(phi) F`.

pub mod bundled;
pub mod chain;
pub mod classify;
pub mod conformal;
pub mod dsl;
pub mod error;
pub mod field;
pub mod geometry;
pub mod jet;
pub mod numeric;
pub mod residual;

pub use error::{Error, Result};
pub use classify::{Classifier, ClassificationReport, SamplePlan, Suite};
pub use conformal::{Conformal, ConformalPoint};
pub use field::{Field, ScalarField};
pub use geometry::{Surface, SurfacePoint};
pub use residual::Residual;
pub use jet::{Coord, Jet, Point};
