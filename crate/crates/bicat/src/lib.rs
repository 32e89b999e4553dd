//! A computation and verification engine for finite, explicitly tabulated
//! bicategories: coherence-law checking, inverter computation and
//! certification, biadjunction/pseudomonad/KZ-monad law checking, Kleisli
//! bicategories, and the biadjoint-triangle machinery with its fully
//! faithful specialization and duals.

pub mod bicat_core;
pub mod cell_calculus;
pub mod fincat;
pub mod instances;
pub mod limits;
pub mod monad_biadj;
pub mod report;
