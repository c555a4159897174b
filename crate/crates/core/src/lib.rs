//! Open quantum systems and quantum thermodynamics: Markovian master
//! equations, heat and particle currents, entropy production and the
//! thermal machines built from them.

pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod meq;
pub mod models;
pub mod statmech;
pub mod thermo;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, DensityMatrix, QOperator, Superoperator, C64};
