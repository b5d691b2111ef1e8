//! Numerical verification engine for weak metric f-structures on coordinate charts.
//!
//! The crate builds structure packs `(f, Q, ξ_i, η^i, g)` on explicit charts,
//! evaluates every defining identity with exact forward-mode derivatives, and
//! reports residuals per identity. See the `weakf` binary for the command-line
//! front end.

// `!(x <= tol)` is used on purpose: it treats NaN as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anchors;
pub mod calculus;
pub mod catalog;
pub mod chart;
pub mod classifiers;
pub mod error;
pub mod field;
pub mod fstructure;
pub mod jet;
pub mod probe;
pub mod submanifold;
pub mod suite;

pub use catalog::{make_example, Example, ExampleObject, ExampleSpec};
pub use chart::{Chart, ChartPoint};
pub use classifiers::{ClassTag, Role, Theorem, Tolerances};
pub use error::{GeometryError, Result};
pub use field::{FieldKind, LocalCovector, LocalTensor, LocalVector, SmoothField};
pub use fstructure::{LocalPack, StructurePack};
pub use jet::Jet;
pub use submanifold::{EmbeddedSubmanifold, SubmanifoldCase};
pub use suite::{run_suite, ReportFormat, ResidualReport, Suite, SuiteConfig, SuiteError, Verdict};
