//! Cutpoint decisions computed only through residue arithmetic.
//!
//! Every decision fixes a basis size `r` from an explicit bound `V(n)` on the
//! integers it will compare, then makes one pass over the input word per
//! prime, keeping only values below that prime. Orderings between the
//! resulting residue vectors are decided with
//! [`compare_metered`](crate::residue::compare_metered). No integer larger
//! than a machine word is formed during a run; each run reports the widest
//! register it used in a [`SpaceTrace`].
//!
//! The cutpoint is fixed at 1/2 on this path. Other cutpoints are available
//! through the exact evaluation in [`crate::automata`].

mod embed;
mod integer_pfa;

use std::cmp::Ordering;

use num_bigint::BigUint;
use thiserror::Error;

use crate::automata::{Afa, AutomatonError, Pfa, Word};
use crate::residue::register_width_bound;

pub use embed::{turakainen_embed, EmbeddedAfa};
pub use integer_pfa::{clear_denominators, IntegerPfa};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(
        "register width {} bits exceeds bound {} bits (n = {}, r = {})",
        .0.max_register_bits, .0.register_bound, .0.input_len, .0.primes_used
    )]
    SpaceBoundExceeded(SpaceTrace),
}

/// Register-width instrumentation of one residue decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceTrace {
    pub input_len: usize,
    pub primes_used: usize,
    pub largest_prime: u64,
    pub max_register_bits: u32,
    /// `2⌈log₂ p_r⌉ + 4`.
    pub register_bound: u32,
    /// Number of times the input word was read, one pass per prime.
    pub input_passes: usize,
}

impl SpaceTrace {
    pub(crate) fn new(input_len: usize, primes_used: usize, largest_prime: u64) -> Self {
        Self {
            input_len,
            primes_used,
            largest_prime,
            max_register_bits: 0,
            register_bound: register_width_bound(largest_prime),
            input_passes: 0,
        }
    }

    pub fn passes_per_prime(&self) -> f64 {
        self.input_passes as f64 / self.primes_used as f64
    }

    pub fn within_bound(&self) -> bool {
        self.max_register_bits <= self.register_bound
    }

    pub(crate) fn finish(self) -> Result<Self, SimError> {
        if self.within_bound() {
            Ok(self)
        } else {
            Err(SimError::SpaceBoundExceeded(self))
        }
    }
}

impl std::fmt::Display for SpaceTrace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "n={} r={} p_r={} max_register_bits={} bound={} passes={}",
            self.input_len,
            self.primes_used,
            self.largest_prime,
            self.max_register_bits,
            self.register_bound,
            self.input_passes
        )
    }
}

/// Outcome of an equality test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RnsOutcome {
    pub decision: bool,
    pub trace: SpaceTrace,
}

/// Outcome of an ordering test between the two sides of a cutpoint
/// inequality: `ordering` is `Greater` exactly when the acceptance value
/// exceeds 1/2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RnsComparison {
    pub ordering: Ordering,
    pub trace: SpaceTrace,
}

impl RnsComparison {
    pub fn greater(&self) -> bool {
        self.ordering == Ordering::Greater
    }

    pub fn at_least(&self) -> bool {
        self.ordering != Ordering::Less
    }
}

/// A certified upper bound on every integer compared during a decision on
/// a word of length `n`.
pub trait ValueBound {
    fn value_bound(&self, n: usize) -> BigUint;
}

pub fn value_bound<M: ValueBound + ?Sized>(machine: &M, n: usize) -> BigUint {
    machine.value_bound(n)
}

/// `f_P(w) = 1/2`.
pub fn decide_eq_cutpoint_rns(pfa: &Pfa, word: &Word) -> Result<bool, SimError> {
    Ok(clear_denominators(pfa).decide_eq(word)?.decision)
}

/// `f_P(w) > 1/2`.
pub fn decide_gt_cutpoint_rns(pfa: &Pfa, word: &Word) -> Result<bool, SimError> {
    Ok(clear_denominators(pfa).compare(word)?.greater())
}

/// `f_A(w) > 1/2`.
pub fn decide_affine_cutpoint_rns(afa: &Afa, word: &Word) -> Result<bool, SimError> {
    Ok(turakainen_embed(afa).compare(word)?.greater())
}

/// `f_A(w) ≥ 1/2`.
pub fn decide_affine_at_least_rns(afa: &Afa, word: &Word) -> Result<bool, SimError> {
    Ok(turakainen_embed(afa).compare(word)?.at_least())
}
