//! Protocol library for two-party computation of composed functions
//! `f o G = f(G(X_1, Y_1), ..., G(X_n, Y_n))` with a symmetric outer `f`.
//!
//! The crate has three layers:
//!
//! * an engine: a distributed statevector simulator with per-register
//!   ownership and metered transfers ([`qsim`]), coherent oracle queries for
//!   the inner function ([`inner`]), and seeded tapes ([`tape`]);
//! * the protocols: Grover-style search ([`search`]), bounded counting and
//!   the spectrum-split composition ([`composed`]), and classical sparse
//!   intersection ([`sparse`]);
//! * closed-form bound calculators over the outer spectrum ([`analysis`]).
//!
//! Every protocol charges a [`meter::Meter`], and no protocol in this crate
//! ever consumes pre-shared entanglement: `epr_pairs` is identically zero in
//! every ledger.

pub mod analysis;
pub mod bits;
pub mod composed;
pub mod error;
pub mod inner;
pub mod instance;
pub mod meter;
pub mod party;
pub mod qsim;
pub mod search;
pub mod sparse;
pub mod symmetric;
pub mod tape;

pub use bits::BitString;
pub use error::{Error, Result};
pub use instance::{eval_composed, Instance};
pub use inner::InnerFunction;
pub use meter::{CostLedger, Meter, ProtocolOutcome};
pub use party::Party;
pub use symmetric::SymmetricSpec;
pub use tape::{derive_seed, ProtocolRng, RandomTape};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// How protocol runs execute.
///
/// `Sim` drives the dense statevector engine and meters the honest qubit
/// traffic including index synchronization; it is limited to small `n`.
/// `Ledger` replaces measurements by their closed-form distribution and
/// meters the claimed-cost column only, scaling to `n = 2^14` and beyond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExecMode {
    Sim,
    Ledger,
}

impl fmt::Display for ExecMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExecMode::Sim => write!(f, "sim"),
            ExecMode::Ledger => write!(f, "ledger"),
        }
    }
}

impl FromStr for ExecMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sim" => Ok(ExecMode::Sim),
            "ledger" => Ok(ExecMode::Ledger),
            _ => Err(Error::input(format!("unknown mode \"{s}\" (expected sim or ledger)"))),
        }
    }
}
