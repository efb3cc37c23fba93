//! MIMO lattice detection over ill-conditioned Rayleigh channels.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: small dense QR / SVD / triangular solves.
//! * [`model`]: QAM constellations, complex-to-real expansion, channel and
//!   noise generation.
//! * [`decoders`]: zero forcing, modified zero forcing, the hybrid switch,
//!   the sphere decoder and an exhaustive ML oracle, with flop accounting.
//! * [`sim`]: the seeded Monte Carlo harness producing BER, conditioning
//!   and complexity tables.

pub mod decoders;
pub mod linalg;
pub mod model;
pub mod sim;

pub use decoders::{DecodeError, DecodeOutcome, DecoderKind, SphereConfig, SphereMode};
pub use linalg::{LinalgError, Matrix};
pub use model::{Constellation, ModelError, RealChannel, SymbolVector};
pub use sim::{BerPoint, CondStudyPoint, SimError, TrialConfig};
