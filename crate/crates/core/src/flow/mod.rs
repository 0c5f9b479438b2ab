//! Ricci flow, the conjugate heat equation and Perelman's entropies.

pub mod conjugate;
pub mod entropy;
pub mod ricci;

pub use conjugate::{conjugate_heat_solve, constant_f, normalize_f, ConjugateSolution};
pub use entropy::{
    entropy_w, entropy_wstar, monotonicity_audit, mu_star_estimate, mu_transport_audit, perelman_rhs,
    EntropyRecord, MonotonicityAudit, MuStarConfig, MuStarEstimate,
};
pub use ricci::{
    sphere_extinction_time, sphere_flow, sphere_trajectory, warped_flow_evolve, warped_flow_evolve_with,
    FlowConfig, FlowDiagnostics, FlowTrajectory, Truncation,
};
