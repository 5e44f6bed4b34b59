//! PFAs with denominators cleared, and their residue decisions.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::automata::{Automaton, Pfa, Word};
use crate::matrix::Matrix;
use crate::rational::{lcm_of_denominators, Rational};
use crate::residue::{
    add_mod, basis_for_bound, compare_metered, mat_vec_mod, mul_mod, next_odd_prime, pow_mod,
    reduce_bigint, RegisterMeter,
};

use super::{RnsComparison, RnsOutcome, SimError, SpaceTrace, ValueBound};

/// `M′_σ = D·M_σ` with `D` the lcm of all matrix denominators, and the
/// initial vector scaled by the lcm `D_x` of its own denominators.
///
/// `f_P(w) = yᵀM′_w x̃ / (Dⁿ·D_x)`, so `f_P(w)` compares to 1/2 as
/// `2·yᵀM′_w x̃` compares to `Dⁿ·D_x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerPfa {
    source: Pfa,
    denominator: BigInt,
    matrices: Vec<Matrix<BigInt>>,
    initial_scale: BigInt,
    initial: Vec<BigInt>,
}

fn scale_to_integers(values: &[Rational], scale: &BigInt) -> Vec<BigInt> {
    values
        .iter()
        .map(|q| (q * Rational::from_integer(scale.clone())).to_integer())
        .collect()
}

pub fn clear_denominators(pfa: &Pfa) -> IntegerPfa {
    let denominator = lcm_of_denominators(pfa.transitions().iter().flat_map(|m| m.entries()));
    let d = Rational::from_integer(denominator.clone());
    let matrices = pfa
        .transitions()
        .iter()
        .map(|m| m.map(|q| (q * &d).to_integer()))
        .collect();
    let initial_scale = lcm_of_denominators(pfa.initial());
    let initial = scale_to_integers(pfa.initial(), &initial_scale);
    IntegerPfa { source: pfa.clone(), denominator, matrices, initial_scale, initial }
}

impl IntegerPfa {
    pub fn source(&self) -> &Pfa {
        &self.source
    }

    /// `D`.
    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// `D·M_σ`, entries in `[0, D]`.
    pub fn matrices(&self) -> &[Matrix<BigInt>] {
        &self.matrices
    }

    /// `D_x`.
    pub fn initial_scale(&self) -> &BigInt {
        &self.initial_scale
    }

    pub fn initial(&self) -> &[BigInt] {
        &self.initial
    }

    /// `yᵀ M′_w x̃` over the integers. Test oracle only: the residue
    /// decisions never form it.
    pub fn scaled_value(&self, word: &Word) -> Result<BigInt, SimError> {
        self.source.alphabet().check(word)?;
        let mut v = self.initial.clone();
        for &sym in word.letters() {
            v = self.matrices[sym].apply(&v).expect("square");
        }
        Ok(v.iter()
            .zip(self.source.accepting())
            .filter(|(_, &a)| a)
            .fold(BigInt::zero(), |acc, (x, _)| acc + x))
    }

    /// `Dⁿ·D_x`, the value `f_{P′}(w)` takes when `f_P(w) = 1`.
    pub fn full_scale(&self, n: usize) -> BigInt {
        self.denominator.pow(n as u32) * &self.initial_scale
    }

    /// One pass over `word` modulo `p`: returns `(2·yᵀM′_w x̃ mod p, Dⁿ·D_x mod p)`.
    fn pass(&self, word: &Word, p: u64, meter: &mut RegisterMeter) -> (u64, u64) {
        let reduced: Vec<Matrix<u64>> = self
            .matrices
            .iter()
            .map(|m| m.map(|x| meter.track(reduce_bigint(x, p))))
            .collect();
        let mut v: Vec<u64> = self.initial.iter().map(|x| meter.track(reduce_bigint(x, p))).collect();
        for &sym in word.letters() {
            v = mat_vec_mod(&reduced[sym], &v, p, meter);
        }
        let accepted = v
            .iter()
            .zip(self.source.accepting())
            .filter(|(_, &a)| a)
            .fold(0u64, |acc, (&x, _)| add_mod(acc, x, p, meter));
        let lhs = mul_mod(2, accepted, p, meter);
        let d = meter.track(reduce_bigint(&self.denominator, p));
        let dx = meter.track(reduce_bigint(&self.initial_scale, p));
        let rhs = mul_mod(pow_mod(d, word.len() as u64, p, meter), dx, p, meter);
        (lhs, rhs)
    }

    fn setup(&self, word: &Word) -> Result<SpaceTrace, SimError> {
        self.source.alphabet().check(word)?;
        let basis = basis_for_bound(&self.value_bound(word.len()));
        Ok(SpaceTrace::new(word.len(), basis.len(), basis.largest()))
    }

    /// Tests `2·f_{P′}(w) ≡ Dⁿ·D_x` prime by prime, stopping at the first
    /// failed congruence.
    pub fn decide_eq(&self, word: &Word) -> Result<RnsOutcome, SimError> {
        let mut trace = self.setup(word)?;
        let mut meter = RegisterMeter::new();
        let mut p = 2u64;
        let mut decision = true;
        for _ in 0..trace.primes_used {
            p = next_odd_prime(p, &mut meter);
            trace.input_passes += 1;
            let (lhs, rhs) = self.pass(word, p, &mut meter);
            if lhs != rhs {
                decision = false;
                break;
            }
        }
        trace.max_register_bits = meter.max_bits();
        Ok(RnsOutcome { decision, trace: trace.finish()? })
    }

    /// Orders `2·f_{P′}(w)` against `Dⁿ·D_x` from their residue vectors.
    pub fn compare(&self, word: &Word) -> Result<RnsComparison, SimError> {
        let mut trace = self.setup(word)?;
        let mut meter = RegisterMeter::new();
        let mut lhs = Vec::with_capacity(trace.primes_used);
        let mut rhs = Vec::with_capacity(trace.primes_used);
        let mut p = 2u64;
        for _ in 0..trace.primes_used {
            p = next_odd_prime(p, &mut meter);
            trace.input_passes += 1;
            let (l, r) = self.pass(word, p, &mut meter);
            lhs.push(l);
            rhs.push(r);
        }
        let ordering: Ordering = compare_metered(&lhs, &rhs, &mut meter);
        trace.max_register_bits = meter.max_bits();
        Ok(RnsComparison { ordering, trace: trace.finish()? })
    }
}

impl ValueBound for IntegerPfa {
    /// `2·D_x·Dⁿ`.
    fn value_bound(&self, n: usize) -> BigUint {
        (self.full_scale(n) * 2u32).to_biguint().expect("positive")
    }
}
