//! Numerical building blocks shared by the model, exact and limit layers.

mod ext;
pub mod hp;
pub mod quadrature;
pub mod special;

pub use ext::ExtReal;
pub use quadrature::{Integrator, Quad, QuadratureError};
