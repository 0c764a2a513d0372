//! One verifier per congruence. Each returns a [`CongruenceVerdict`] holding
//! both sides exactly, or a domain error when the hypotheses fail.

mod classical;
mod lemmas;
mod theorems;
mod verdict;

pub use classical::*;
pub use lemmas::*;
pub use theorems::*;
pub use verdict::CongruenceVerdict;

use crate::{Error, Result};

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::domain(msg()))
    }
}
