//! Exact computations for one-sided topological Markov shifts `(X_A, σ_A)`:
//! locally constant integer functions, elements of the continuous full
//! group `Γ_A` as prefix-exchange tables, the cocycles `ρ^f` and the
//! subgroups they cut out, and orbit-equivalence witnesses between two
//! shifts together with the constructions that turn them into eventual
//! conjugacies.
//!
//! Every continuous `ℤ`-valued function on the compact, totally
//! disconnected space `X_A` is locally constant and therefore depends on
//! a bounded number of leading symbols; [`StepFunction`] stores exactly
//! that data, so all identities in this crate are checked exactly, cylinder
//! by cylinder, rather than sampled.

pub mod cocycle;
pub mod coe;
pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod sample;
pub mod selftest;
pub mod sft;
pub mod step;

pub use cocycle::{Membership, MembershipMode, RhoTable, ZeroProbe};
pub use coe::{CocycleTables, Coder, CoeWitness, DeriveParams, ScoeCertificate, Stage};
pub use error::{Error, Result};
pub use group::{KldData, TableHomeo};
pub use sft::{CylinderPartition, EpPoint, FlowInvariants, Sft, Word};
pub use step::{CoboundaryCertificate, StepFunction};

/// Refinement stops here unless a caller passes a different cap.
pub const DEFAULT_DEPTH_CAP: usize = 24;
