//! Circle orbits of Schottky groups acting on the Bruhat-Tits tree of
//! PGL2 over an unramified quadratic extension of Q_p.

pub mod config;
pub mod error;
pub mod fixtures;
pub mod orbits;
pub mod padic;
pub mod pgl2;
pub mod schottky;
pub mod tree;

pub use error::{Error, Result};
