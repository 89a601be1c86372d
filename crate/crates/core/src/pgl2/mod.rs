//! PGL2 over K: canonical representatives, Mobius action and hyperbolic elements.

mod boundary;
mod hyperbolic;
mod matrix;

pub use boundary::{frame_to_matrix, BoundaryPoint};
pub use hyperbolic::{classify, classify_raw, from_quadruple, unit_from_polar, Classification, HyperbolicData};
pub use matrix::{parse_matrix_entries, Mat2, MatrixClass, PNorm, ProjMatrix};
