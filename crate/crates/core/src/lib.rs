//! p-adic Bernoulli measures and Dirichlet-series evaluation of the branches
//! of the p-adic zeta function.
//!
//! * [`padic`]: fixed-precision `Q_p` arithmetic, Teichmüller lifts, log/exp.
//! * [`bernoulli`]: exact Bernoulli numbers/polynomials, generalized numbers.
//! * [`measures`]: Bernoulli distributions, regularizations and the
//!   alternating measure on clopen balls, with exact checks.
//! * [`lfunctions`]: the zeta branches `L_p(s, ω^(1-i))` as limits of
//!   alternating Dirichlet sums, plus cross-checks.
//! * [`cli`]: the `padzeta` command line.

pub mod bernoulli;
pub mod cli;
pub mod error;
pub mod lfunctions;
pub mod measures;
pub mod padic;
pub mod rational;

pub use error::{Error, Result};
pub use padic::{PadicContext, PadicJson, PadicNumber};
pub use rational::Rational;
