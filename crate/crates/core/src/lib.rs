//! Missing-digit sets in mixed-radix numeration systems.
//!
//! * [`gadic`]: quotient sequences, bases and the mixed-radix codec.
//! * [`digit_sets`]: forbidden-digit families and set membership.
//! * [`counting`]: exact level counts by generating-polynomial products.
//! * [`bounds`]: Markov/Chernoff tails, level-count and abscissa bounds,
//!   and the index-set convergence thresholds.
//! * [`summation`]: partial sums and certified enclosures of `Σ a^{-σ}`.
//! * [`cli`]: the `kempner-gadic` command line.

pub mod bounds;
pub mod cli;
pub mod counting;
pub mod decimal;
pub mod digit_sets;
pub mod error;
pub mod gadic;
mod grammar;
pub mod interval;
pub mod summation;

pub use digit_sets::{ForbiddenRule, ForbiddenSpec, IndexRule, IndexedFamily, Lambda, LambdaFamily};
pub use error::{Error, ParseError, Result};
pub use gadic::{Continuation, DigitVector, GadicSequence};
