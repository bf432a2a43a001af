//! Connected components on a simulated ARBITRARY CRCW PRAM.
//!
//! The pipeline contracts a multigraph into a parent forest in three stages
//! (filter-style contraction, budgeted densification, sample-and-solve) under
//! a cost ledger that charges the model's round/work prices rather than the
//! simulator's actual cost. A spectral lab validates the sampling arguments
//! the pipeline relies on (Laplacian concentration, diameter blowup).
//!
//! Start with the `examples/` directory; each example exercises one capability.

pub mod gen;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod orchestrator;
pub mod pram;
pub mod profile;
pub mod spectral;
pub mod stage1;
pub mod stage2;
pub mod stage3;
