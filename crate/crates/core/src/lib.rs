//! Belief-propagation decoding of CSS codes.
//!
//! The crate models the syndrome-decoding posterior of a CSS code under a
//! per-qubit joint Pauli prior and runs sum-product on three factorizations
//! of it: joint binary, separate binary, and four-state label graphs. A
//! brute-force oracle and an equivalence harness check the decoders against
//! each other.

pub mod channel;
pub mod code;
pub mod decoders;
pub mod equivalence;
pub mod error;
pub mod gf2;
pub mod oracle;
pub mod sim;

pub use channel::{joint_index, phi, sample_error, FourStatePrior, Label, PauliPrior};
pub use code::{paper_code_24, tree_code_4, CssCode, PauliError, ResidualClass, Syndromes, TannerGraph};
pub use decoders::{decode, decode_error, DecodeResult, DecoderConfig, DecoderKind};
pub use equivalence::{run_paired, EquivalenceReport};
pub use error::{Error, Result};
pub use oracle::exact_marginals;
pub use sim::{run_trials, StatsReport, TrialConfig};
