//! p-adic valuations of Tribonacci numbers.
//!
//! The crate interpolates `n -> T(n)` on residue classes by p-adic analytic
//! functions, locates their zeros, and uses them to decide for each prime
//! whether `ν_p(T(n))` follows a linear law in `ν_p(n - a)` with integer or
//! rational centres `a`.

pub mod classifier;
pub mod error;
pub mod ext;
pub mod factor;
pub mod galois;
pub mod interpolation;
pub mod padic;
pub mod rational;
pub mod tribonacci;

pub use error::{Error, Result};
pub use ext::{ExtElem, ExtRing};
pub use galois::{splitting_type, PrimeContext, Splitting};
pub use padic::{val_big, val_int, PAdicInt, Valuation, Zp};
pub use interpolation::{Interpolant, SeriesTrunc, ZeroRecord, ZeroTarget};
pub use rational::Rational;
