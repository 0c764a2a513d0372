//! Exact computation of generalized Bernoulli numbers, Euler numbers and
//! Dirichlet L-values `L(-k, χ)` for characters of prime-power modulus,
//! together with verifiers for Kummer, Stern and Voronoï type congruences.
//!
//! Every quantity is exact: rationals are arbitrary precision and character
//! values live in a cyclotomic field `Q(ζ_N)` in the power basis, where
//! "x ≡ y (mod p^n)" means every coordinate of `x - y` has p-adic valuation
//! at least `n`.
//!
//! ```
//! use lcong::characters::{build_unit_group, make_character};
//! use lcong::bernoulli::script_l;
//!
//! let group = build_unit_group(2, 3).unwrap();
//! let chi8 = make_character(&group, &[0, 1]).unwrap();
//! assert_eq!(script_l(3, &chi8).unwrap().to_string(), "22");
//! ```

pub mod arith;
pub mod bernoulli;
pub mod characters;
pub mod cli;
pub mod congruences;
pub mod cyclotomic;
mod error;
pub mod power_sums;
pub mod rational;

pub use error::{Error, Result};
