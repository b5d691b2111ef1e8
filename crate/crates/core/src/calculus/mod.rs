//! Exact-derivative tensor calculus on coordinate charts.
//!
//! Everything here works on local jets produced by [`SmoothField`](crate::field::SmoothField)
//! evaluation at a single point. Vector arguments are fields: callers extend
//! tangent vectors (usually by constant coefficients) before passing them in.

mod connection;
mod curvature;
mod forms;
mod lie;

pub use connection::{christoffel, smallest_eigenvalue, Christoffel, LocalGeometry, METRIC_EIGEN_FLOOR};
pub use curvature::{Riemann, PLANE_FLOOR};
pub use forms::{d_oneform, d_twoform, exterior_derivative, CONVENTION_NOTE};
pub use lie::{
    killing_form, lie_bracket, lie_derivative, lie_derivative_metric, lie_derivative_oneform,
    lie_derivative_tensor11, nijenhuis_bracket, LieValue,
};
