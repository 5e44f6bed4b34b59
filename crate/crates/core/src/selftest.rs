//! Exhaustive small-modulus checks of the residue layer and the randomized
//! oracle-equivalence sweep of the residue decisions against exact values.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::automata::{afa_value, pfa_value, Automaton, Word};
use crate::logspace::{clear_denominators, turakainen_embed, SimError};
use crate::random::{random_afa, random_pfa, rng};
use crate::rational::rational;
use crate::residue::{
    crt_reconstruct, prime_basis, reduce, residue_abs_diff, residue_compare, residue_mod,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {} cases, {} failures", self.name, self.cases, self.failures)?;
        if let Some(first) = &self.first_failure {
            write!(f, " (first: {first})")?;
        }
        Ok(())
    }
}

struct Tally {
    name: &'static str,
    cases: u64,
    failures: u64,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { name, cases: 0, failures: 0, first_failure: None }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.failures += other.failures;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
        self
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            first_failure: self.first_failure,
        }
    }
}

/// `x ≥ y` iff `x − y` and `(x − y) mod 105` share parity, for all pairs in `[0, 104]²`.
pub fn parity_criterion_suite() -> SuiteResult {
    let n = 105i64;
    let mut t = Tally::new("parity criterion, N = 105");
    for x in 0..n {
        for y in 0..n {
            let d = x - y;
            let same = d.mod_floor(&2) == d.mod_floor(&n).mod_floor(&2);
            t.check((x >= y) == same, || format!("x={x} y={y}"));
        }
    }
    t.finish()
}

/// `residue_compare` and `residue_abs_diff` against integer arithmetic on
/// all pairs in `[0, P_r − 1]²` for `r = 1, 2, 3`.
pub fn comparison_suite() -> SuiteResult {
    let mut t = Tally::new("residue comparison, r <= 3");
    for r in 1..=3 {
        let basis = prime_basis(r).expect("r >= 1");
        let p: i64 = basis.primes().iter().product::<u64>() as i64;
        let all: Vec<_> = (0..p).map(|x| reduce(&BigInt::from(x), &basis)).collect();
        for x in 0..p {
            for y in 0..p {
                let (rx, ry) = (&all[x as usize], &all[y as usize]);
                let ord = residue_compare(rx, ry).expect("same basis");
                let diff = residue_abs_diff(rx, ry).expect("same basis");
                let ok = ord == x.cmp(&y) && diff == all[(x - y).unsigned_abs() as usize];
                t.check(ok, || format!("r={r} x={x} y={y}"));
            }
        }
    }
    t.finish()
}

/// Reconstruction round trip and mixed-radix `mod M` for `M ∈ {2, 3, 4, 10}`
/// on every residue vector of bases of size 1 to 4.
pub fn roundtrip_suite() -> SuiteResult {
    let mut t = Tally::new("reconstruction and mixed-radix mod, r <= 4");
    for r in 1..=4 {
        let basis = prime_basis(r).expect("r >= 1");
        let p: u64 = basis.primes().iter().product();
        for x in 0..p {
            let res = reduce(&BigInt::from(x), &basis);
            let back = crt_reconstruct(&res);
            t.check(back == x.into(), || format!("r={r} x={x} reconstructed {back}"));
            for m in [2u64, 3, 4, 10] {
                let got = residue_mod(&res, m).expect("m >= 2");
                t.check(got == x % m, || format!("r={r} x={x} M={m} got {got}"));
            }
        }
    }
    t.finish()
}

/// Residue decisions against exact values on `machines` random binary
/// machines of each kind, over all words of length at most `max_len`.
///
/// Machines are drawn from fixed seeds; the outcome does not depend on
/// scheduling.
pub fn oracle_suites(machines: usize, max_len: usize, seed: u64) -> Vec<SuiteResult> {
    let half = rational(1, 2);
    let words: Vec<Word> = Word::all_up_to(2, max_len).collect();

    let pfa = (0..machines)
        .into_par_iter()
        .map(|i| {
            let mut t = Tally::new("PFA residue decisions vs exact values");
            let pfa = random_pfa(&mut rng(seed.wrapping_add(i as u64)));
            let integer = clear_denominators(&pfa);
            for w in &words {
                let exact = pfa_value(&pfa, w).expect("word over the alphabet");
                let eq = integer.decide_eq(w).map(|o| o.decision);
                let gt = integer.compare(w).map(|c| c.greater());
                let ok = eq == Ok(exact == half) && gt == Ok(exact > half);
                t.check(ok, || describe(i, pfa.alphabet().format_word(w, ""), &eq, &gt));
            }
            t
        })
        .reduce(|| Tally::new("PFA residue decisions vs exact values"), Tally::merge);

    let afa = (0..machines)
        .into_par_iter()
        .map(|i| {
            let mut t = Tally::new("AfA residue decisions vs exact values");
            let afa = random_afa(&mut rng(seed.wrapping_add(0x5eed_0000 + i as u64)));
            let embedded = turakainen_embed(&afa);
            for w in &words {
                let exact = afa_value(&afa, w).expect("word over the alphabet");
                let cmp = embedded.compare(w).map(|c| c.ordering);
                t.check(cmp == Ok(exact.cmp(&half)), || {
                    format!("machine {i}, word {:?}: {cmp:?}", afa.alphabet().format_word(w, ""))
                });
            }
            t
        })
        .reduce(|| Tally::new("AfA residue decisions vs exact values"), Tally::merge);

    vec![pfa.finish(), afa.finish()]
}

fn describe(i: usize, word: String, eq: &Result<bool, SimError>, gt: &Result<bool, SimError>) -> String {
    format!("machine {i}, word {word:?}: eq={eq:?} gt={gt:?}")
}

/// Everything `afa selftest` runs.
pub fn run_all(machines: usize, max_len: usize, seed: u64) -> Vec<SuiteResult> {
    let mut out = vec![parity_criterion_suite(), comparison_suite(), roundtrip_suite()];
    out.extend(oracle_suites(machines, max_len, seed));
    out
}
