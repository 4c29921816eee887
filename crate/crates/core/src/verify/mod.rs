//! Property checkers for objectives and auditors for solver runs.

mod audit;
mod ksub;

pub use audit::{audit_laa_trace, audit_rla, Bound, LaaAudit, RlaAudit};
pub use ksub::{
    check_ksubmodularity, check_ksubmodularity_with, CheckMode, CheckOptions, DefinitionCheck,
    DefinitionViolation, KSubReport, NonMonotoneWitness, OrthantViolation, PairwiseViolation,
    DEFAULT_TOLERANCE,
};
