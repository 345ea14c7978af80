pub mod action;
pub mod biaction;
pub mod bibundle;
pub mod error;
pub mod finset;
pub mod functor;
pub mod gen;
pub mod group;
pub mod groupoid;
pub mod laws;
pub mod morita;
pub mod par;
pub mod report;
pub mod table;

pub use error::{Error, Result};
