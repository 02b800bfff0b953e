//! Brute-force checks of the sensitivity and privacy claims on small
//! instances.
//!
//! Coupled sensitivities are witnessed as upper bounds under an explicit
//! coupling (identity ranking, identical coins away from the changed edge,
//! or a record alignment), never as the exact minimum over couplings. Each
//! report names the coupling it used.

mod alpha;
mod doctor;
mod greedy;
mod privacy;
mod stages;

pub use alpha::{audit_alpha, monte_carlo_alpha, true_alpha, AlphaComparison, AlphaFixture, TrueAlpha};
pub use doctor::{doctor_example, max_count_difference, Coupling, DoctorReport, Record, D1, D2};
pub use greedy::{audit_greedy_matching_cgs, audit_matched_set_difference, greedy_in_order, GreedyAudit};
pub use privacy::{audit_privacy, AuditStatus, Mechanism, PrivacyAuditConfig, PrivacyAuditReport};
pub use stages::{audit_stage_sensitivities, StageAudit, StageInstance};

use serde::Serialize;

/// Outcome of one sensitivity claim: the largest observed change against
/// the asserted bound.
#[derive(Debug, Clone, Serialize)]
pub struct SensitivityReport {
    pub claim: String,
    pub coupling: String,
    pub bound: f64,
    pub observed_max: f64,
    pub cases_checked: u64,
    pub witness: Option<serde_json::Value>,
    pub pass: bool,
}

impl SensitivityReport {
    pub(crate) fn new(
        claim: &str,
        coupling: &str,
        bound: f64,
        observed_max: f64,
        cases_checked: u64,
        witness: Option<serde_json::Value>,
    ) -> Self {
        SensitivityReport {
            claim: claim.to_string(),
            coupling: coupling.to_string(),
            bound,
            observed_max,
            cases_checked,
            witness,
            // Floating sums get a hair of slack; counts are exact anyway.
            pass: observed_max <= bound + 1e-9,
        }
    }
}
