//! Exact modal quantum theory (MQT) over finite fields.
//!
//! States are subspaces of `F^n` for a finite field `F`: a pure state is a
//! one-dimensional subspace and a mixed state is any nonzero subspace. The
//! crate provides the field arithmetic, exact linear algebra and subspace
//! lattice that model is built from, composite systems and reduction,
//! measurements with the possibility predicate, and an exhaustive verifier
//! showing that diamond triples of states cannot be broadcast.
//!
//! ```
//! use mqt_core::{FieldSpec, Subspace};
//!
//! let f = FieldSpec::parse("2").unwrap();
//! let a = Subspace::from_ints(&f, 2, &[&[1, 0]]).unwrap();
//! let b = Subspace::from_ints(&f, 2, &[&[0, 1]]).unwrap();
//! assert!(a.join(&b).unwrap().is_full());
//! assert!(a.meet(&b).unwrap().is_null());
//! ```

pub mod broadcast;
pub mod composite;
pub mod error;
pub mod field;
pub mod json;
pub mod linalg;
pub mod measurement;
pub mod subspace;

pub use broadcast::{
    broadcast_discriminator, clone_feasibility, enumerate_broadcast_candidates, overlap_broadcast, pairwise_broadcast,
    slice_diamond, verify_no_broadcast, BroadcastCandidate, BroadcastCertificate, CloneVerdict, Verdict,
};
pub use composite::{reduce, reduce_pure, tensor_subspace, FactorShape};
pub use error::{Error, Result};
pub use field::{Fe, FieldElement, FieldSpec};
pub use linalg::{Matrix, Vector};
pub use measurement::{is_p_distinguishing, is_possible, simple_measurement, Effect, LinearChannel, Measurement};
pub use subspace::{
    distributivity_counterexample, enumerate_subspaces, enumerate_vectors, find_diamonds, gaussian_binomial, Budget,
    DiamondTriple, Subspace,
};
