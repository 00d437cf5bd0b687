//! Exact service rate regions of linear coded storage systems.
//!
//! A k x n generator matrix over a finite field describes n servers each
//! storing a linear combination of k objects. The service rate region is the
//! set of request rates the servers can jointly sustain. Everything here is
//! computed in exact rational arithmetic.

pub mod bounds;
pub mod code;
pub mod error;
pub mod ff;
pub mod fixtures;
pub mod generator;
pub mod guard;
pub mod io;
pub mod polyhedra;
pub mod rational;
pub mod recovery;
pub mod region;

pub use error::{Error, Result};
pub use ff::{make_field, Elem, FFMatrix, FieldContext};
pub use generator::GeneratorMatrix;
pub use rational::Rational;
pub use recovery::{RecoverySet, RecoverySystem};
