pub mod error;
pub mod fatgraph;
pub mod group;
pub mod quasimorphism;
pub mod lp;
pub mod sampling;
pub mod spectra;
pub mod tripods;
pub mod experiments;

pub use error::{Error, Result};
pub use fatgraph::{verify_fatgraph, Fatgraph, VerificationReport};
pub use group::{cyclic_reduce, parse_chain, reduce, Alphabet, Chain, CyclicWord, Letter, Word};
pub use lp::oracle::{scl_oracle_small, OracleResult};
pub use lp::{enumerate_pieces, extract_fatgraph, scl, solve, Mode, Number, SclResult};
