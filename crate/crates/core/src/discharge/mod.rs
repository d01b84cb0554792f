//! Exact discharging: initial charges, the five rules as an itemized
//! ledger of quarter units, and an audit of the final charges.

mod audit;
mod ledger;
mod rules;
mod typing;

pub use audit::{audit, audit_with, explain, AuditReport, AuditVerdict, CapViolation, OuterIdentity, Violation};
pub use ledger::{fraction, initial_charges, Account, BadAccount, ChargeLedger, Quarters, Rule, Transfer};
pub use rules::{apply_rules, apply_rules_in_order, RuleContext, RuleNotes};
pub use typing::{classify_special_cluster, cluster_is_internal, vertex_typing, TypeEntry, VertexTyping};
