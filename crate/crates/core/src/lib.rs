//! Correspondence coloring of plane graphs: an exact solver, a checker for
//! reducible configurations, and an auditor for discharging arguments.

pub mod cli;
pub mod cover;
pub mod discharge;
pub mod format;
pub mod planar;
pub mod reduce;
