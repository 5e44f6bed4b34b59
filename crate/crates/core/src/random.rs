//! Seeded generators of random machines for sweeps and property tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::{Afa, Alphabet, Pfa};
use crate::matrix::Matrix;
use crate::rational::{rational, Rational};

pub const MAX_STATES: usize = 5;
pub const MAX_DENOMINATOR: i64 = 10;
/// AfA entries lie in `[−ENTRY_BOUND, ENTRY_BOUND]`.
pub const ENTRY_BOUND: i64 = 3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A stochastic vector of length `k` with a common denominator at most 10.
pub fn stochastic_vector<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<Rational> {
    let d = rng.gen_range(1..=MAX_DENOMINATOR);
    // random composition of d into k nonnegative parts via sorted cut points
    let mut cuts: Vec<i64> = (0..k - 1).map(|_| rng.gen_range(0..=d)).collect();
    cuts.sort_unstable();
    cuts.push(d);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let part = c - prev;
            prev = c;
            rational(part, d)
        })
        .collect()
}

/// A vector of length `k` summing to 1 with entries in `[−3, 3]` and
/// denominators at most 10.
pub fn affine_vector<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<Rational> {
    loop {
        let d = rng.gen_range(1..=MAX_DENOMINATOR);
        let span = ENTRY_BOUND * d;
        let head: Vec<i64> = (0..k - 1).map(|_| rng.gen_range(-span..=span)).collect();
        let last = d - head.iter().sum::<i64>();
        if last.abs() <= span {
            return head.into_iter().chain([last]).map(|n| rational(n, d)).collect();
        }
    }
}

fn accepting<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<bool> {
    (0..k).map(|_| rng.gen_bool(0.5)).collect()
}

fn binary() -> Alphabet {
    Alphabet::new(["a", "b"]).expect("two distinct symbols")
}

fn matrix_from_columns(columns: Vec<Vec<Rational>>) -> Matrix<Rational> {
    Matrix::from_columns(columns).expect("square by construction")
}

pub fn random_pfa_with<R: Rng + ?Sized>(rng: &mut R, alphabet: Alphabet, k: usize) -> Pfa {
    let transitions = (0..alphabet.len())
        .map(|_| matrix_from_columns((0..k).map(|_| stochastic_vector(rng, k)).collect()))
        .collect();
    let initial = stochastic_vector(rng, k);
    let accepting = accepting(rng, k);
    Pfa::new(alphabet, initial, transitions, accepting).expect("generated PFA is valid")
}

pub fn random_afa_with<R: Rng + ?Sized>(rng: &mut R, alphabet: Alphabet, k: usize) -> Afa {
    let transitions = (0..alphabet.len())
        .map(|_| matrix_from_columns((0..k).map(|_| affine_vector(rng, k)).collect()))
        .collect();
    let initial = affine_vector(rng, k);
    let accepting = accepting(rng, k);
    Afa::new(alphabet, initial, transitions, accepting).expect("generated AfA is valid")
}

/// Binary PFA with 1 to 5 states.
pub fn random_pfa<R: Rng + ?Sized>(rng: &mut R) -> Pfa {
    let k = rng.gen_range(1..=MAX_STATES);
    random_pfa_with(rng, binary(), k)
}

/// Binary AfA with 1 to 5 states.
pub fn random_afa<R: Rng + ?Sized>(rng: &mut R) -> Afa {
    let k = rng.gen_range(1..=MAX_STATES);
    random_afa_with(rng, binary(), k)
}

/// Unary AfA with 1 to 5 states.
pub fn random_unary_afa<R: Rng + ?Sized>(rng: &mut R) -> Afa {
    let k = rng.gen_range(1..=MAX_STATES);
    random_afa_with(rng, Alphabet::unary(), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Signed};

    #[test]
    fn vectors_respect_constraints() {
        let mut r = rng(7);
        for k in 1..=MAX_STATES {
            for _ in 0..200 {
                let s = stochastic_vector(&mut r, k);
                assert_eq!(s.iter().sum::<Rational>(), Rational::one());
                assert!(s.iter().all(|x| !x.is_negative() && *x.denom() <= MAX_DENOMINATOR.into()));
                let a = affine_vector(&mut r, k);
                assert_eq!(a.iter().sum::<Rational>(), Rational::one());
                assert!(a.iter().all(|x| x.abs() <= rational(ENTRY_BOUND, 1)));
            }
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        assert_eq!(random_afa(&mut rng(3)), random_afa(&mut rng(3)));
        assert_eq!(random_pfa(&mut rng(3)), random_pfa(&mut rng(3)));
    }
}
