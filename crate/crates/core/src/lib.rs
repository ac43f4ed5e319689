//! Colimits and 2-colimits of diagrams of presented groupoids indexed by
//! subset posets, with the injectivity conditions under which they agree.

pub mod colimit;
pub mod comparison;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod groupoid;
pub mod poset;
pub mod set_colimit;
pub mod two_colimit;
pub mod union_find;

pub use error::{Error, Result};
