//! Exhaustive verification of reducible configurations and of small
//! instances with no transversal.

mod bits;
mod certificate;
mod config;
mod engine;
pub mod cases;
mod space;

pub use certificate::{
    check_greedy_certificate, check_precolor_margin, CertificateReport, MarginReport, RuleError,
};
pub use config::{
    config_catalog, gadget_from_cover, ConfigError, ConfigFile, ConfigKind, Configuration, GreedyRule, NamedPivot,
    NamedRule, PivotStep,
};
pub use engine::{check_reducible, EngineOptions, Mode, Status, Strategy, Verdict};

use crate::cover::{exhaustive_transversals, CoverInstance, Perm};
use crate::planar::Edge;

/// True iff no complete choice of available colors is a transversal.
pub fn verify_witness(w: &CoverInstance) -> bool {
    exhaustive_transversals(w).0 == 0
}

/// For each edge whose matching is not the identity: does straightening
/// that one edge make the instance colorable?
pub fn restraighten_each(w: &CoverInstance) -> Vec<(Edge, bool)> {
    let mut out = Vec::new();
    for (e, p) in w.matchings().iter() {
        if p.is_identity() {
            continue;
        }
        let mut m = w.matchings().clone();
        m.set_perm(e.lo, e.hi, Perm::identity(w.k())).expect("edge of the instance");
        let inst = CoverInstance::new(w.graph().clone(), w.lists().clone(), m).expect("same shape");
        out.push((e, exhaustive_transversals(&inst).0 > 0));
    }
    out
}
