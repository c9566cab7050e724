pub mod analysis;
pub mod axioms;
pub mod builtin;
pub mod format;
pub mod lp;
pub mod margins;
pub mod model;
pub mod rational;
pub mod slices;
pub mod generate;
pub mod verify;
