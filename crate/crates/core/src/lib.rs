//! Exact probabilistic and affine finite automata.
//!
//! The crate has four layers:
//!
//! - [`automata`]: PFAs and AfAs over exact rationals, their acceptance
//!   values and cutpoint membership, plus the plain-text automaton format.
//! - [`residue`]: residue-number-system arithmetic over bases of odd primes,
//!   including mixed-radix modulus conversion and ordering decisions made
//!   from residues alone.
//! - [`logspace`]: cutpoint decisions for PFAs and AfAs computed only through
//!   per-prime residue passes, with register-width instrumentation.
//! - [`lab`]: desk-scale experiments on unary languages (lower density,
//!   equidistribution mod 1, the acceptance-gap sequence).
//!
//! [`random`] and [`selftest`] provide the randomized machine generators and
//! the exhaustive/oracle suites behind the `afa selftest` command.

pub mod automata;
pub mod lab;
pub mod logspace;
pub mod matrix;
pub mod random;
pub mod rational;
pub mod residue;
pub mod selftest;

pub use automata::{
    afa_state, afa_value, isolation_gap, member, pfa_value, Afa, Alphabet, Automaton,
    AutomatonError, Machine, MembershipMode, Pfa, Word,
};
pub use matrix::{mat_apply, DimensionError, Matrix};
pub use rational::Rational;
