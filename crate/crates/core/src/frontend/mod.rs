//! Text formats: `.apg` proof graphs, `.ug`/`.dg` reduction instances, and
//! Mizar-style proof scripts.

pub mod apg;
pub mod instance;
mod lines;
pub mod mizar;

pub use apg::{emit_apg, parse_apg, ApgDocument};
pub use instance::{emit_dg, emit_ug, parse_dg, parse_ug};
pub use mizar::{identifier_tokens, parse_mizar_lite, ExtractedProof, MizarLiteStep, StepKeyword};
