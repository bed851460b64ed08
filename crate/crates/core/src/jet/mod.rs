//! Truncated power series and jets of germs.

mod germ;
mod scalar;
mod space;

pub use germ::{germ_compose, germ_inverse, germ_iterate, project, GermJet};
pub(crate) use scalar::PowerTable;
pub use scalar::{jet_multiply, ScalarJet};
pub use space::{count_degree, JetSpace, MultiIndex};
pub use space::binomial;
