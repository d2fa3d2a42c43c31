//! Quantum operations as Choi matrices, the reshuffling composition of bipartite
//! states, and entropies of maps.
//!
//! Matrices are indexed row-major on `ℂ^N ⊗ ℂ^N`: the composite index of `(m, μ)` is
//! `m·N + μ`. Stochastic matrices are column-stochastic and act as `P' = T·P`.
//! All entropies are in nats.
//!
//! ```
//! use dynsub::channels::Channel;
//!
//! let n = 3;
//! let s = Channel::depolarizing(n).map_entropy().unwrap();
//! assert!((s - 2.0 * (n as f64).ln()).abs() < 1e-10);
//! ```

pub mod channels;
pub mod classical;
pub mod error;
pub mod matcore;
pub mod quasifree;
pub mod randgen;
pub mod statecomp;

pub use channels::{Channel, KrausSet};
pub use classical::{ProbVector, StochasticMatrix};
pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, DensityMatrix, C64};
pub use quasifree::{QFMap, QFSymbol};
pub use randgen::RngStream;
pub use statecomp::{BipartiteOperator, StateClass};

// The guide's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!(concat!("../../../book/src/", $path))]
            pub struct $name;
        };
    }

    chapter!(Introduction, "introduction.md");
    chapter!(Channels, "channels.md");
    chapter!(Entropy, "entropy.md");
    chapter!(Composition, "composition.md");
    chapter!(Exchange, "exchange.md");
    chapter!(Classical, "classical.md");
    chapter!(Quasifree, "quasifree.md");
    chapter!(Sampling, "sampling.md");
    chapter!(Cli, "cli.md");
}
