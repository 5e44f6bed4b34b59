use std::fmt;
use std::sync::Arc;

use super::LabError;

type Predicate = Arc<dyn Fn(u64) -> bool + Send + Sync>;
type Generator = Arc<dyn Fn() -> Box<dyn Iterator<Item = u64>> + Send + Sync>;

/// A language `L ⊆ a*`, given by which lengths `n` have `aⁿ ∈ L`.
#[derive(Clone)]
pub struct UnaryLanguage {
    name: String,
    predicate: Predicate,
    generator: Option<Generator>,
}

impl fmt::Debug for UnaryLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnaryLanguage").field("name", &self.name).finish_non_exhaustive()
    }
}

impl UnaryLanguage {
    pub fn from_predicate(name: impl Into<String>, f: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        Self { name: name.into(), predicate: Arc::new(f), generator: None }
    }

    /// Adds an enumerator of member lengths; it must yield them in strictly
    /// increasing order and agree with the predicate.
    pub fn with_generator(
        mut self,
        g: impl Fn() -> Box<dyn Iterator<Item = u64>> + Send + Sync + 'static,
    ) -> Self {
        self.generator = Some(Arc::new(g));
        self
    }

    /// `a*`.
    pub fn full() -> Self {
        Self::from_predicate("a*", |_| true)
    }

    /// `∅`.
    pub fn empty() -> Self {
        Self::from_predicate("empty", |_| false).with_generator(|| Box::new(std::iter::empty()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, n: u64) -> bool {
        (self.predicate)(n)
    }

    pub fn has_generator(&self) -> bool {
        self.generator.is_some()
    }

    /// Member lengths `≤ horizon`, increasing.
    pub fn members_up_to(&self, horizon: u64) -> Vec<u64> {
        match &self.generator {
            Some(g) => g().take_while(|&n| n <= horizon).collect(),
            None => (0..=horizon).filter(|&n| self.contains(n)).collect(),
        }
    }
}

/// A polynomial with nonnegative integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coefficients: Vec<u64>,
}

impl Polynomial {
    pub fn new(coefficients: &[i64]) -> Result<Self, LabError> {
        if let Some(&c) = coefficients.iter().find(|&&c| c < 0) {
            return Err(LabError::NegativeCoefficient(c));
        }
        let mut coefficients: Vec<u64> = coefficients.iter().map(|&c| c as u64).collect();
        while coefficients.len() > 1 && coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(0);
        }
        Ok(Self { coefficients })
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Degree above 2, the range where the image language is known to lie
    /// outside the affine cutpoint languages with algebraic entries.
    pub fn degree_exceeds_two(&self) -> bool {
        self.degree() > 2
    }

    /// `P(n)`, or `None` on overflow.
    pub fn eval(&self, n: u64) -> Option<u64> {
        self.coefficients
            .iter()
            .rev()
            .try_fold(0u64, |acc, &c| acc.checked_mul(n)?.checked_add(c))
    }

    /// Whether `target ∈ {P(0), P(1), …}`, by bisection on the nondecreasing
    /// map `n ↦ P(n)`.
    pub fn has_value(&self, target: u64) -> bool {
        if self.degree() == 0 {
            return self.coefficients[0] == target;
        }
        // P is strictly increasing and P(n) ≥ n, so a preimage lies in [0, target].
        let (mut lo, mut hi) = (0u64, target);
        while lo <= hi {
            let mid = lo + (hi - lo) / 2;
            match self.eval(mid) {
                Some(v) if v == target => return true,
                Some(v) if v < target => lo = mid + 1,
                _ => {
                    if mid == 0 {
                        return false;
                    }
                    hi = mid - 1;
                }
            }
        }
        false
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(d, &c)| match d {
                0 => c.to_string(),
                1 => format!("{c}n"),
                _ => format!("{c}n^{d}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// `{a^{P(n)} | n ∈ ℕ}`.
pub fn gen_poly_lang(poly: &Polynomial) -> UnaryLanguage {
    let p = poly.clone();
    let q = poly.clone();
    UnaryLanguage::from_predicate(format!("poly:{poly}"), move |n| p.has_value(n)).with_generator(move || {
        let q = q.clone();
        let strictly_increasing = q.degree() > 0;
        let values = (0u64..).map_while(move |n| q.eval(n));
        if strictly_increasing {
            Box::new(values)
        } else {
            Box::new(values.take(1))
        }
    })
}

/// `{a^p | p prime}`.
pub fn gen_prime_lang() -> UnaryLanguage {
    UnaryLanguage::from_predicate("primes", is_prime)
        .with_generator(|| Box::new((2u64..).filter(|&n| is_prime(n))))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_language() {
        let cubes = gen_poly_lang(&Polynomial::new(&[0, 0, 0, 1]).unwrap());
        assert_eq!(cubes.members_up_to(64), vec![0, 1, 8, 27, 64]);
        assert!(cubes.contains(27));
        assert!(!cubes.contains(26));
        assert!(Polynomial::new(&[0, 0, 0, 1]).unwrap().degree_exceeds_two());
    }

    #[test]
    fn identity_polynomial_is_full_language() {
        let p = Polynomial::new(&[0, 1]).unwrap();
        assert!(!p.degree_exceeds_two());
        let l = gen_poly_lang(&p);
        assert!((0..200).all(|n| l.contains(n)));
        assert_eq!(l.members_up_to(5), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn constant_and_zero_polynomials() {
        let l = gen_poly_lang(&Polynomial::new(&[7, 0, 0]).unwrap());
        assert_eq!(l.members_up_to(100), vec![7]);
        assert!(l.contains(7) && !l.contains(8));
        let z = Polynomial::new(&[]).unwrap();
        assert_eq!(z.degree(), 0);
        assert!(gen_poly_lang(&z).contains(0));
    }

    #[test]
    fn negative_coefficients_rejected() {
        assert_eq!(Polynomial::new(&[0, -1, 1]), Err(LabError::NegativeCoefficient(-1)));
    }

    #[test]
    fn huge_targets_do_not_overflow() {
        let p = Polynomial::new(&[1, 0, 0, 0, 0, 3]).unwrap();
        assert!(!p.has_value(u64::MAX));
        assert!(p.has_value(3 * 10u64.pow(15) + 1));
    }

    #[test]
    fn primes() {
        let l = gen_prime_lang();
        for p in [2, 3, 5, 7, 11] {
            assert!(l.contains(p));
        }
        for c in [0, 1, 4, 9, 91, 561] {
            assert!(!l.contains(c));
        }
        assert_eq!(l.members_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(18_446_744_073_709_551_555));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        assert!((0..5000).all(|n| is_prime(n) == trial(n)));
    }
}
