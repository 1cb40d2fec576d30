pub mod complex;
pub mod contact;
pub mod cone;
pub mod error;
pub mod io;
pub mod lattice;
pub mod par;
pub mod subdivision;

pub use cone::{Cone, Face};
pub use error::{Error, Result};
pub use lattice::{IntegerMatrix, LatticeVector};
