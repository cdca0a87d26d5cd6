//! Fractal sequences near nilpotent contact points of planar slow-fast
//! systems, their Minkowski dimension and the fractal codimension it encodes.
//!
//! Everything runs at the singular limit `eps = 0`:
//!
//! * [`models`] holds three contact-point families with their limit maps and
//!   slow divergence integrals,
//! * [`entryexit`] iterates the entry-exit relation into a [`FractalSequence`],
//! * [`dimension`] estimates box dimension and converts it to a codimension,
//! * [`series`] recovers the codimension of a Liénard slow-fast Hopf point
//!   directly from power series,
//! * [`cli`] implements the `slowfast` command-line tool.

pub mod cli;
pub mod dimension;
pub mod entryexit;
pub mod error;
pub mod models;
pub mod numeric;
pub mod series;

pub use dimension::{
    borel_estimate, box_count_dimension, cahen_estimate, chirp_segments, chirp_theoretical_dimension,
    codimension_from_dimension, tail_nucleus_estimate, theoretical_dimension, CodimensionReport,
    CodimensionVerdict, DimensionEstimate, JIndex, Method, Segment,
};
pub use entryexit::{generate_sequence, next_height, FractalSequence, SequenceConfig};
pub use error::{Error, Result};
pub use models::{
    orientation, Branch, ClassicalLienardModel, NormalFormModel, Orientation, SlowFastModel, TwoStrokeModel,
};
pub use series::TruncatedSeries;
