//! Strong starters over finite fields.
//!
//! Two-quotient starters `S(beta1, beta2)` for `q = 2^k t + 1` with `k > 1`
//! and `t > 1` odd, one-quotient Dinitz starters for `q = 3 mod 4`, and a
//! brute-force oracle that re-checks everything from first principles.
//!
//! ```
//! use starter_forge::{search_beta_pairs, two_quotient_starter, CosetSystem, Field};
//!
//! let field = Field::with_order(29).unwrap();
//! let sys = CosetSystem::new(&field).unwrap();
//! let first = search_beta_pairs(&sys).unwrap()[0];
//! let starter = two_quotient_starter(&sys, &first).unwrap();
//! assert!(starter.verify().is_strong);
//! ```

pub mod arith;
pub mod catalog;
pub mod cyclotomy;
mod error;
pub mod ffield;
pub mod oracle;
pub mod starter;
pub mod sweep;

pub use catalog::{BetaPairRecord, StarterRecord};
pub use cyclotomy::{decompose, BlockLabel, CosetSystem, Decomposition};
pub use error::{Error, Result};
pub use ffield::{Field, FieldElement};
pub use starter::{
    dinitz_starter, search_beta_pairs, two_quotient_starter, verify_starter, BetaPair, Pair,
    Provenance, QuotientCount, Starter, VerificationReport,
};
