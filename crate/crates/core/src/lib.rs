//! Computational core for gluing K3 surfaces from blown-up planes.

pub mod cover_cech;
pub mod linalg;
pub mod linearizer;
pub mod error;
pub mod exact;
pub mod family_ks;
pub mod k3_lattice;
pub mod poly;
pub mod surgery;
pub mod torus_pic;

pub use cover_cech::{CoverAtlas, FlatCocycle, UedaConstants};
pub use error::{Error, Result};
pub use exact::Coord;
pub use torus_pic::{FlatBundleClass, TorusShape};
