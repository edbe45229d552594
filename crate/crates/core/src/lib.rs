//! Picard groups, effective semigroups and exceptional collections of
//! Burniat surfaces, computed on the bidouble-cover model over a blown-up
//! plane.

pub mod cli;
pub mod config;
pub mod degeneration;
pub mod delpezzo6;
pub mod effective;
pub mod error;
pub mod f2;
pub mod intmat;
pub mod labels;
pub mod lattice;
pub mod picard;
pub mod torsion;
pub mod verify;

pub use config::{BurniatConfig, Variant};
pub use error::{Error, Result};
pub use labels::{CurveLabel, Letter};
pub use lattice::{GroupIndex, SurfaceLattice, YClass};
pub use torsion::{Torsion2, TorsionVec};
