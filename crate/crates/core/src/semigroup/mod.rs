//! Heat semigroup of `H = −Δ + Ψ`, ultracontractivity and the Sobolev
//! inequalities it implies.

mod constants;
mod davies;
mod fractional;
mod operator;
mod sobolev_check;

pub use constants::{
    c1, c2, c5_constants, d3_constants, marcinkiewicz_k, root_sobolev_constant, shifted_heat_constant,
    sobolev_exponent, sobolev_from_heat, C5Constants, D3Constants,
};
pub use davies::{
    davies_n, davies_p, davies_samples, davies_schedule_audit, davies_tau, davies_tau_quad, davies_values,
    ultracontractivity_bound, LogBeta, UltraBounds,
};
pub use fractional::{h_neg_half_quadrature, h_power, neg_half_weights, project_out_zero_modes};
pub use operator::{contraction_audit, SchrodingerOperator};
pub use sobolev_check::{h0_potential, sobolev_check, SobolevForm};
