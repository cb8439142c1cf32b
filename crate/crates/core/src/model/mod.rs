//! Domain types, unit conventions and basis transforms.
//!
//! Frequencies are angular (rad/s) everywhere inside the crate. The `*_hz`
//! constructors apply the `2π` at the boundary.

mod curve;
mod fields;
mod params;
mod state;
mod zeeman;

pub use curve::Curve;
pub use fields::{to_circular, to_linear, FieldPair};
pub use params::{AtomParams, DriveConfig};
pub use state::{basis_change_state, level, Basis, BasisChange, DensityMatrix, StateCheck};
pub use zeeman::{zeeman_shift, BOHR_MAGNETON_OVER_H};
pub(crate) use state::rotate_ground;
