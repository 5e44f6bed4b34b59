//! Residue-number-system arithmetic over bases of odd primes.
//!
//! A basis of size `r` is always the first `r` odd primes `(3, 5, 7, …, p_r)`,
//! so a [`Residues`] value is identified with its basis by its length alone.
//! The product `P_r` is odd, which is what makes the parity criterion of
//! [`residue_compare`] work.
//!
//! The kernels that run inside simulations (`*_metered`) regenerate primes by
//! trial division instead of reading a cached list and report every
//! intermediate value to a [`RegisterMeter`].

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidueError {
    #[error("a prime basis needs at least one prime")]
    EmptyBasis,
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("residues over bases of different sizes ({left} vs {right})")]
    BasisMismatch { left: usize, right: usize },
    #[error("digit {digit} at position {index} is not below its prime {prime}")]
    DigitOutOfRange { index: usize, digit: u64, prime: u64 },
}

/// Tracks the widest value held in any working register.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RegisterMeter {
    max_bits: u32,
}

impl RegisterMeter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn track(&mut self, value: u64) -> u64 {
        let bits = u64::BITS - value.leading_zeros();
        if bits > self.max_bits {
            self.max_bits = bits;
        }
        value
    }

    pub fn max_bits(&self) -> u32 {
        self.max_bits
    }
}

/// `⌈log₂ n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        u64::BITS - (n - 1).leading_zeros()
    }
}

/// The register-width contract `2⌈log₂ p⌉ + 4`.
pub fn register_width_bound(largest_prime: u64) -> u32 {
    2 * ceil_log2(largest_prime) + 4
}

fn is_odd_prime(n: u64, meter: &mut RegisterMeter) -> bool {
    if n < 3 || n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while meter.track(d * d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest odd prime strictly greater than `after`.
pub fn next_odd_prime(after: u64, meter: &mut RegisterMeter) -> u64 {
    let mut candidate = if after < 3 { 3 } else { after + 1 + (after % 2) };
    while !is_odd_prime(candidate, meter) {
        candidate += 2;
    }
    assert!(candidate <= u32::MAX as u64, "prime basis exceeds 32-bit primes");
    candidate
}

/// The odd primes 3, 5, 7, 11, … generated by trial division.
#[derive(Debug, Clone, Default)]
pub struct OddPrimes {
    last: u64,
}

impl OddPrimes {
    pub fn new() -> Self {
        Self { last: 2 }
    }
}

impl Iterator for OddPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        self.last = next_odd_prime(self.last, &mut RegisterMeter::new());
        Some(self.last)
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64, meter: &mut RegisterMeter) -> u64 {
    let t = meter.track(a * b);
    meter.track(t % m)
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, m: u64, meter: &mut RegisterMeter) -> u64 {
    let t = meter.track(a + b);
    meter.track(t % m)
}

pub(crate) fn pow_mod(base: u64, mut exp: u64, m: u64, meter: &mut RegisterMeter) -> u64 {
    let mut result = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m, meter);
        }
        b = mul_mod(b, b, m, meter);
        exp >>= 1;
    }
    result
}

/// `x mod p` for a big integer, as the least nonnegative residue.
pub fn reduce_bigint(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits u64")
}

/// The tuple `(3, 5, …, p_r)` together with its product `P_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeBasis {
    primes: Vec<u64>,
    product: BigUint,
}

impl PrimeBasis {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn largest(&self) -> u64 {
        *self.primes.last().expect("nonempty basis")
    }

    pub fn product(&self) -> &BigUint {
        &self.product
    }
}

/// The first `r` odd primes.
pub fn prime_basis(r: usize) -> Result<PrimeBasis, ResidueError> {
    if r == 0 {
        return Err(ResidueError::EmptyBasis);
    }
    let primes: Vec<u64> = OddPrimes::new().take(r).collect();
    let product = primes.iter().map(|&p| BigUint::from(p)).product();
    Ok(PrimeBasis { primes, product })
}

/// Smallest basis whose product exceeds `bound`, so that any two integers in
/// `[0, bound]` have distinct residues.
pub fn basis_for_bound(bound: &BigUint) -> PrimeBasis {
    let mut primes = Vec::new();
    let mut product = BigUint::one();
    for p in OddPrimes::new() {
        primes.push(p);
        product *= p;
        if &product > bound {
            break;
        }
    }
    PrimeBasis { primes, product }
}

/// An integer class modulo `P_r`, stored as one digit per prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residues {
    digits: Vec<u64>,
}

impl Residues {
    pub fn new(basis: &PrimeBasis, digits: Vec<u64>) -> Result<Self, ResidueError> {
        if digits.len() != basis.len() {
            return Err(ResidueError::BasisMismatch { left: basis.len(), right: digits.len() });
        }
        for (index, (&digit, &prime)) in digits.iter().zip(basis.primes()).enumerate() {
            if digit >= prime {
                return Err(ResidueError::DigitOutOfRange { index, digit, prime });
            }
        }
        Ok(Self { digits })
    }

    pub fn basis_len(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    fn check_same_basis(&self, other: &Residues) -> Result<(), ResidueError> {
        if self.digits.len() != other.digits.len() {
            return Err(ResidueError::BasisMismatch {
                left: self.digits.len(),
                right: other.digits.len(),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Residues, f: impl Fn(u64, u64, u64) -> u64) -> Result<Residues, ResidueError> {
        self.check_same_basis(other)?;
        let digits = self
            .digits
            .iter()
            .zip(&other.digits)
            .zip(OddPrimes::new())
            .map(|((&a, &b), p)| f(a, b, p))
            .collect();
        Ok(Residues { digits })
    }

    pub fn add(&self, other: &Residues) -> Result<Residues, ResidueError> {
        self.zip_with(other, |a, b, p| (a + b) % p)
    }

    pub fn sub(&self, other: &Residues) -> Result<Residues, ResidueError> {
        self.zip_with(other, |a, b, p| (a + p - b) % p)
    }

    pub fn mul(&self, other: &Residues) -> Result<Residues, ResidueError> {
        self.zip_with(other, |a, b, p| a * b % p)
    }
}

/// Least nonnegative residues of `x` (which may be negative).
pub fn reduce(x: &BigInt, basis: &PrimeBasis) -> Residues {
    Residues { digits: basis.primes().iter().map(|&p| reduce_bigint(x, p)).collect() }
}

/// An integer matrix reduced entrywise modulo every prime of a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueMatrix {
    per_prime: Vec<Matrix<u64>>,
}

impl ResidueMatrix {
    pub fn for_prime(&self, index: usize) -> &Matrix<u64> {
        &self.per_prime[index]
    }

    pub fn basis_len(&self) -> usize {
        self.per_prime.len()
    }
}

pub fn reduce_matrix(a: &Matrix<BigInt>, basis: &PrimeBasis) -> ResidueMatrix {
    ResidueMatrix {
        per_prime: basis
            .primes()
            .iter()
            .map(|&p| a.map(|x| reduce_bigint(x, p)))
            .collect(),
    }
}

/// `M v mod p` for a single prime, with every intermediate metered.
pub fn mat_vec_mod(m: &Matrix<u64>, v: &[u64], p: u64, meter: &mut RegisterMeter) -> Vec<u64> {
    m.rows()
        .map(|row| {
            row.iter().zip(v).fold(0u64, |acc, (&a, &x)| {
                let t = meter.track(a * x);
                add_mod(acc, t, p, meter)
            })
        })
        .collect()
}

/// The unique `x ∈ [0, P_r)` with the given residues (Garner's formula over
/// big integers; not a space-bounded routine).
pub fn crt_reconstruct(res: &Residues) -> BigUint {
    let mut x = BigUint::zero();
    let mut modulus = BigUint::one();
    for (&a, p) in res.digits.iter().zip(OddPrimes::new()) {
        // x ≡ current; choose t with x + modulus·t ≡ a (mod p).
        let current = (&x % p).to_u64().expect("small");
        let m_mod_p = (&modulus % p).to_u64().expect("small");
        let inv = pow_mod(m_mod_p, p - 2, p, &mut RegisterMeter::new());
        let t = (a + p - current) % p * inv % p;
        x += &modulus * t;
        modulus *= p;
    }
    x
}

/// Streaming mixed-radix conversion: `x mod modulus` where `x ∈ [0, P_r)` is
/// the integer represented by `digits`. Only a working copy of the digits and
/// two accumulators modulo `modulus` are held.
pub fn residue_mod_metered(digits: &[u64], modulus: u64, meter: &mut RegisterMeter) -> u64 {
    let mut work = digits.to_vec();
    let mut acc = 0u64;
    let mut weight = 1 % modulus;
    let mut p_i = 2u64;
    for i in 0..work.len() {
        p_i = next_odd_prime(p_i, meter);
        // work[i] is now the i-th mixed-radix digit of x.
        let v = work[i];
        let term = mul_mod(v % modulus, weight, modulus, meter);
        acc = add_mod(acc, term, modulus, meter);
        weight = mul_mod(weight, p_i % modulus, modulus, meter);
        let mut p_j = p_i;
        for slot in work.iter_mut().skip(i + 1) {
            p_j = next_odd_prime(p_j, meter);
            let inv = pow_mod(p_i % p_j, p_j - 2, p_j, meter);
            let diff = add_mod(*slot, p_j - v % p_j, p_j, meter);
            *slot = mul_mod(diff, inv, p_j, meter);
        }
    }
    acc
}

/// `x mod modulus` computed from residues alone.
pub fn residue_mod(res: &Residues, modulus: u64) -> Result<u64, ResidueError> {
    if modulus < 2 {
        return Err(ResidueError::ModulusTooSmall(modulus));
    }
    Ok(residue_mod_metered(&res.digits, modulus, &mut RegisterMeter::new()))
}

fn sub_digits_metered(x: &[u64], y: &[u64], meter: &mut RegisterMeter) -> Vec<u64> {
    let mut p = 2u64;
    x.iter()
        .zip(y)
        .map(|(&a, &b)| {
            p = next_odd_prime(p, meter);
            add_mod(a, p - b, p, meter)
        })
        .collect()
}

/// Ordering of two integers in `[0, P_r − 1]` from their residues.
///
/// Equality is a digitwise check. Otherwise `z = x − y mod P_r` is formed
/// digitwise and `x ≥ y` holds exactly when `x − y` and `z` have the same
/// parity; all three parities come from [`residue_mod_metered`] with modulus 2.
pub fn compare_metered(x: &[u64], y: &[u64], meter: &mut RegisterMeter) -> Ordering {
    if x == y {
        return Ordering::Equal;
    }
    let z = sub_digits_metered(x, y, meter);
    let px = residue_mod_metered(x, 2, meter);
    let py = residue_mod_metered(y, 2, meter);
    let pz = residue_mod_metered(&z, 2, meter);
    if (px + 2 - py) % 2 == pz {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Residues of `|x − y|`, for `x, y ∈ [0, P_r − 1]`.
pub fn abs_diff_metered(x: &[u64], y: &[u64], meter: &mut RegisterMeter) -> Vec<u64> {
    match compare_metered(x, y, meter) {
        Ordering::Less => sub_digits_metered(y, x, meter),
        _ => sub_digits_metered(x, y, meter),
    }
}

pub fn residue_compare(x: &Residues, y: &Residues) -> Result<Ordering, ResidueError> {
    x.check_same_basis(y)?;
    Ok(compare_metered(&x.digits, &y.digits, &mut RegisterMeter::new()))
}

pub fn residue_abs_diff(x: &Residues, y: &Residues) -> Result<Residues, ResidueError> {
    x.check_same_basis(y)?;
    Ok(Residues {
        digits: abs_diff_metered(&x.digits, &y.digits, &mut RegisterMeter::new()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residues_of(x: i64, r: usize) -> Residues {
        reduce(&BigInt::from(x), &prime_basis(r).unwrap())
    }

    #[test]
    fn bases() {
        assert_eq!(prime_basis(1).unwrap().primes(), &[3]);
        assert_eq!(prime_basis(1).unwrap().product(), &BigUint::from(3u32));
        let b3 = prime_basis(3).unwrap();
        assert_eq!(b3.primes(), &[3, 5, 7]);
        assert_eq!(b3.product(), &BigUint::from(105u32));
        let b4 = prime_basis(4).unwrap();
        assert_eq!(b4.primes(), &[3, 5, 7, 11]);
        assert_eq!(b4.product(), &BigUint::from(1155u32));
        assert_eq!(prime_basis(0), Err(ResidueError::EmptyBasis));
        assert_eq!(prime_basis(10).unwrap().largest(), 31);
    }

    #[test]
    fn bases_for_bounds() {
        let r = |b: u32| basis_for_bound(&BigUint::from(b)).len();
        assert_eq!(r(0), 1);
        assert_eq!(r(1), 1);
        assert_eq!(r(100), 3);
        assert_eq!(r(104), 3);
        assert_eq!(r(105), 4);
        assert_eq!(r(14), 2);
        assert_eq!(r(15), 3);
    }

    #[test]
    fn reductions() {
        assert_eq!(residues_of(8, 2).digits(), &[2, 3]);
        assert_eq!(residues_of(0, 2).digits(), &[0, 0]);
        assert_eq!(residues_of(-7, 2).digits(), &[2, 3]);
        let m = Matrix::from_rows(vec![vec![BigInt::from(-1), BigInt::from(8)], vec![BigInt::from(15), BigInt::from(4)]]).unwrap();
        let rm = reduce_matrix(&m, &prime_basis(2).unwrap());
        assert_eq!(rm.for_prime(0), &Matrix::from_rows(vec![vec![2, 2], vec![0, 1]]).unwrap());
        assert_eq!(rm.for_prime(1), &Matrix::from_rows(vec![vec![4, 3], vec![0, 4]]).unwrap());
    }

    #[test]
    fn reconstruction() {
        let b = prime_basis(2).unwrap();
        assert_eq!(crt_reconstruct(&Residues::new(&b, vec![2, 3]).unwrap()), BigUint::from(8u32));
        assert_eq!(crt_reconstruct(&Residues::new(&b, vec![0, 0]).unwrap()), BigUint::zero());
        let b3 = prime_basis(3).unwrap();
        assert_eq!(crt_reconstruct(&Residues::new(&b3, vec![1, 1, 1]).unwrap()), BigUint::one());
    }

    #[test]
    fn digit_validation() {
        let b = prime_basis(2).unwrap();
        assert!(matches!(Residues::new(&b, vec![3, 0]), Err(ResidueError::DigitOutOfRange { index: 0, .. })));
        assert!(matches!(Residues::new(&b, vec![0]), Err(ResidueError::BasisMismatch { .. })));
    }

    #[test]
    fn modulus_conversion() {
        assert_eq!(residue_mod(&residues_of(8, 2), 2).unwrap(), 0);
        assert_eq!(residue_mod(&residues_of(9, 2), 2).unwrap(), 1);
        assert_eq!(residue_mod(&residues_of(97, 3), 105).unwrap(), 97);
        assert_eq!(residue_mod(&residues_of(8, 2), 1), Err(ResidueError::ModulusTooSmall(1)));
    }

    #[test]
    fn comparisons() {
        assert_eq!(residue_compare(&residues_of(10, 3), &residues_of(3, 3)).unwrap(), Ordering::Greater);
        assert_eq!(residue_compare(&residues_of(3, 3), &residues_of(10, 3)).unwrap(), Ordering::Less);
        assert_eq!(residue_compare(&residues_of(42, 3), &residues_of(42, 3)).unwrap(), Ordering::Equal);
        assert!(matches!(
            residue_compare(&residues_of(1, 3), &residues_of(1, 2)),
            Err(ResidueError::BasisMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn absolute_differences() {
        let seven = residues_of(7, 3);
        assert_eq!(residue_abs_diff(&residues_of(10, 3), &residues_of(3, 3)).unwrap(), seven);
        assert_eq!(residue_abs_diff(&residues_of(3, 3), &residues_of(10, 3)).unwrap(), seven);
        assert_eq!(residue_abs_diff(&residues_of(5, 3), &residues_of(5, 3)).unwrap(), residues_of(0, 3));
        assert!(residue_abs_diff(&residues_of(1, 3), &residues_of(1, 4)).is_err());
    }

    #[test]
    fn ring_operations() {
        let (x, y) = (residues_of(12, 3), residues_of(9, 3));
        assert_eq!(x.add(&y).unwrap(), residues_of(21, 3));
        assert_eq!(x.sub(&y).unwrap(), residues_of(3, 3));
        assert_eq!(y.sub(&x).unwrap(), residues_of(-3, 3));
        assert_eq!(x.mul(&y).unwrap(), residues_of(108, 3));
    }

    #[test]
    fn log2_helpers() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
        assert_eq!(register_width_bound(7), 10);
    }

    #[test]
    fn next_prime_sequence() {
        let first: Vec<u64> = OddPrimes::new().take(8).collect();
        assert_eq!(first, vec![3, 5, 7, 11, 13, 17, 19, 23]);
        let mut meter = RegisterMeter::new();
        assert_eq!(next_odd_prime(23, &mut meter), 29);
        assert_eq!(next_odd_prime(24, &mut meter), 29);
        assert_eq!(next_odd_prime(0, &mut meter), 3);
    }
}
