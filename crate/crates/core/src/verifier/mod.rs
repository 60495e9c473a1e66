//! Independent checks of certified solutions: float sampling, a
//! finite-difference oracle, and the solution suite.

pub mod fd;
pub mod sampling;
pub mod scan;
pub mod suite;

pub use fd::{fd_bilaplacian, fd_laplacian, fd_residual, FdError};
pub use sampling::SamplePlan;
pub use scan::{residual_scan, verify_curve, FdCheck, ResidualReport, ScanConfig, ScanError};
pub use suite::{default_cases, certify_solution_suite, CaseReport, CaseStatus, SuiteReport};
