pub mod dioph;
pub mod glue;
pub mod ks;
pub mod lattice;
pub mod linearize;
pub mod ueda;
