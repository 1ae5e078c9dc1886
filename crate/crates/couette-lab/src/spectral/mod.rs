//! Truncated Fourier representation on `T x T_Lv`, transforms, dealiasing,
//! differential symbols, dyadic decompositions and Sobolev norms.
//!
//! The real line in `v` is replaced by a torus of period `Lv` (default
//! `32 pi`); data used throughout decay fast enough that the surrogate is
//! benign, and the acceptance suite tracks convergence in `Lv`.

mod field;
mod grid;
mod lp;

pub use field::{
    apply_delta_l, apply_nabla_l, bracket, bracket1, sobolev_norm, to_physical, to_spectral,
    weighted_l2, PhysicalField, SpectralField,
};
pub(crate) use field::{fft_v, Direction};
pub use grid::Grid;
pub use lp::{
    bands, chi_cutoff, diff_l2, lp_below, lp_project, paraproduct_split, pointwise_product,
    product_dealiased, psi_cutoff, Paraproduct,
};
