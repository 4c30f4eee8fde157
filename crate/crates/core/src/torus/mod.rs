//! Grid, transforms, exact products, norms and the torus Helmholtz split.

mod field;
mod grid;
pub mod io;
mod ops;

pub use field::{SpectralField, VectorField2, SUPPORT_THRESHOLD};
pub use grid::{auto_grid_size, TorusGrid};
pub use ops::{
    besov_holder_norm, dyadic_block_sups, exact_product, helmholtz_split, modulate, Helmholtz, Phase,
};
pub(crate) use ops::ensure_alias_free;
