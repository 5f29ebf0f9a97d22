//! Finite disk covers of the torus, U(1) cocycles, cochains and the Ueda constant.

pub mod atlas;
pub mod cochain;
pub mod cocycle;
pub mod ueda;

pub use atlas::{build_cover, build_cover_with, CoverAtlas, CoverOptions, Overlap};
pub use cochain::{delta, norm0, norm1, Cochain0, Cochain1};
pub use cocycle::{cocycle_distance, restriction_cocycle, FlatCocycle};
pub use ueda::{schwarz_pick_s, ueda_constants, ueda_constants_exact, verify_ueda_inequality, UedaConstants};
