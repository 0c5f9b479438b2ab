//! Sobolev constants, logarithmic Sobolev budgets and their audits.

mod family;
mod lemmas;
mod lsi;
mod report;
mod sobolev;

pub use family::{normalized, FamilyMember, FunctionFamily, BUMP_KAPPAS};
pub use lemmas::{lemma41_minimum, log1_gap, log2_gap, strong_alpha};
pub use lsi::{
    lsi_check, lsi_fixed_metric, lsi_terms, rls1_check, strong_lsi_check, theorem_abc_profile, transport_profile,
    volume_corollary_audit, volume_corollary_bound, LsiProfile, LsiVariant, MetricConstants, LSI_TOL,
};
pub use report::{min_slack, InequalityReport};
pub use sobolev::{lambda0, sobolev_constants, sobolev_ratios, SobolevConstants, SAFETY_FACTOR};
