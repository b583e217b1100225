//! Integration, differentiation and interpolation shared by the geometry modules.

pub mod arclength;
pub mod fd;
pub mod interp;
pub mod ivp;

pub use arclength::{arclength_table, reparameterize_arclength};
pub use fd::{differentiate_uniform, fd_derivative, fd_derivative_o4, Order};
pub use interp::{Pchip, QuinticSegment};
pub use ivp::{integrate_ivp, IvpProblem, SampledPath, DEFAULT_TOLERANCE};
