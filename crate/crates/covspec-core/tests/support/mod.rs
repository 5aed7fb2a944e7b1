//! Shared fixtures and independent reference computations for the
//! integration suites.  Everything here is deliberately written in the
//! plainest possible style (dense matrices, exhaustive walks, literal
//! witness products) so that library results can be checked against code
//! with no shared logic.

pub mod oracle;
pub mod spaces;
pub mod witness;
