//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::{Integer};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use affine_automata::lab::{
    abs_expansion_residual, expansion_bound, g_sequence, gen_poly_lang, gen_prime_lang, lower_density,
    weyl_box_ratio, weyl_sequence, Alpha, IntervalBox, Polynomial, SequenceSpec,
};
use affine_automata::logspace::{
    clear_denominators, decide_affine_cutpoint_rns, decide_eq_cutpoint_rns, decide_gt_cutpoint_rns,
    turakainen_embed,
};
use affine_automata::random::{random_afa, random_pfa, random_unary_afa, rng};
use affine_automata::rational::{integer, rational};
use affine_automata::residue::{
    crt_reconstruct, prime_basis, reduce, register_width_bound, residue_compare, residue_mod,
};
use affine_automata::{
    afa_value, member, pfa_value, Afa, Alphabet, Matrix, MembershipMode, Pfa, Rational, Word,
};

const SWEEP_MACHINES: usize = 100;
const SWEEP_MAX_LEN: usize = 8;
const SWEEP_TIME_LIMIT: Duration = Duration::from_secs(300);
const SWEEP_SEED: u64 = 0xA11CE;

const EMBED_MACHINES: usize = 20;
const EMBED_MAX_LEN: usize = 5;

const SPACE_LENGTHS: [usize; 4] = [10, 100, 1_000, 10_000];
/// The PFA below has V(n) = 2^(n+2) and every odd prime carries more than
/// log2(3) bits, so r <= (n + 2)/log2(3) + 1, which is below n for n >= 10.
const PRIMES_PER_LETTER_CEILING: f64 = 1.0;

const CUBE_HORIZON: u64 = 1_000_000;
const CUBE_DENSITY_CEILING: (i64, i64) = (1, 1000);
const PRIME_DENSITY_CEILING: (i64, i64) = (8, 100);

const WEYL_PRECISION: u32 = 50;
const WEYL_TERMS: u64 = 100_000;
const WEYL_TOLERANCE: f64 = 0.01;

const EXPANSION_CASES: usize = 10_000;

const GSEQ_MACHINES: usize = 20;
const GSEQ_NMAX: usize = 50;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn binary_words() -> Vec<Word> {
    Word::all_up_to(2, SWEEP_MAX_LEN).collect()
}

fn pfa_sweep() -> Outcome {
    let start = Instant::now();
    let words = binary_words();
    let half = rational(1, 2);
    let mismatches: usize = (0..SWEEP_MACHINES)
        .into_par_iter()
        .map(|i| {
            let pfa = random_pfa(&mut rng(SWEEP_SEED + i as u64));
            words
                .iter()
                .filter(|w| {
                    let exact = pfa_value(&pfa, w).unwrap();
                    decide_eq_cutpoint_rns(&pfa, w).unwrap() != (exact == half)
                        || decide_gt_cutpoint_rns(&pfa, w).unwrap() != (exact > half)
                })
                .count()
        })
        .sum();
    let elapsed = start.elapsed();
    let cases = SWEEP_MACHINES * words.len();
    outcome(
        mismatches == 0 && elapsed < SWEEP_TIME_LIMIT,
        format!("{mismatches} mismatches in {cases} cases, {:.1}s", elapsed.as_secs_f64()),
    )
}

fn afa_sweep() -> Outcome {
    let start = Instant::now();
    let words = binary_words();
    let half = rational(1, 2);
    let (mismatches, on_cutpoint): (usize, usize) = (0..SWEEP_MACHINES)
        .into_par_iter()
        .map(|i| {
            let afa = random_afa(&mut rng(SWEEP_SEED + 1_000 + i as u64));
            let mut bad = 0;
            let mut ties = 0;
            for w in &words {
                let exact = afa_value(&afa, w).unwrap();
                ties += usize::from(exact == half);
                bad += usize::from(decide_affine_cutpoint_rns(&afa, w).unwrap() != (exact > half));
            }
            (bad, ties)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let elapsed = start.elapsed();
    let cases = SWEEP_MACHINES * words.len();
    outcome(
        mismatches == 0 && elapsed < SWEEP_TIME_LIMIT,
        format!(
            "{mismatches} mismatches in {cases} cases ({on_cutpoint} exactly at 1/2), {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn small_modulus_comparisons() -> Outcome {
    let n = 105i64;
    let basis = prime_basis(3).unwrap();
    assert_eq!(basis.product(), &BigUint::from(105u32));
    let res: Vec<_> = (0..n).map(|x| reduce(&BigInt::from(x), &basis)).collect();
    let mut parity_bad = 0;
    let mut compare_bad = 0;
    for x in 0..n {
        for y in 0..n {
            let d = x - y;
            let same = d.mod_floor(&2) == d.mod_floor(&n).mod_floor(&2);
            parity_bad += usize::from((x >= y) != same);
            let ord = residue_compare(&res[x as usize], &res[y as usize]).unwrap();
            compare_bad += usize::from(ord != x.cmp(&y));
        }
    }
    outcome(
        parity_bad == 0 && compare_bad == 0,
        format!("parity criterion {parity_bad}/11025 failures, residue_compare {compare_bad}/11025 failures"),
    )
}

fn reconstruction() -> Outcome {
    let basis = prime_basis(4).unwrap();
    assert_eq!(basis.primes(), &[3, 5, 7, 11]);
    let mut round_bad = 0;
    let mut mod_bad = 0;
    for x in 0..1155u64 {
        let r = reduce(&BigInt::from(x), &basis);
        round_bad += usize::from(crt_reconstruct(&r) != BigUint::from(x));
        for m in [2, 3, 4, 10] {
            mod_bad += usize::from(residue_mod(&r, m).unwrap() != x % m);
        }
    }
    outcome(
        round_bad == 0 && mod_bad == 0,
        format!("round trip {round_bad}/1155 failures, residue_mod {mod_bad}/4620 failures"),
    )
}

fn embedding_identities() -> Outcome {
    let mut literal_norm_bad = 0usize;
    let mut middle_norm_bad = 0usize;
    let mut accepting_bad = 0usize;
    let mut power_bad = 0usize;
    let mut annihilate_bad = 0usize;
    let mut chain_bad = 0usize;
    let mut words_checked = 0usize;
    for i in 0..EMBED_MACHINES {
        let afa = random_afa(&mut rng(0xE0 + i as u64));
        let e = turakainen_embed(&afa);
        let size = e.size();
        let ones = e.ones();
        let zero = Matrix::<Rational>::zeros(size);

        let mut power = ones.clone();
        for n in 1..=EMBED_MAX_LEN {
            let expected = ones.scale(&integer(size as i64).pow(n as i32 - 1));
            power_bad += usize::from(power != expected);
            power = power.mul(&ones).unwrap();
        }
        for b in e.border() {
            annihilate_bad += usize::from(b.mul(&ones).unwrap() != zero || ones.mul(b).unwrap() != zero);
        }

        let m = Rational::from_integer(e.shift().clone());
        for w in Word::all_up_to(2, EMBED_MAX_LEN) {
            words_checked += 1;
            let state = afa.state(&w).unwrap();
            let bx = e.border_state(&w).unwrap();
            literal_norm_bad += usize::from(l1(&bx) != l1(&state));
            middle_norm_bad += usize::from(e.middle_norm(&bx) != l1(&state));
            accepting_bad += usize::from(e.projected_norm(&bx) != afa.projected_norm(&state));
            let n = w.len();
            if n >= 1 {
                let corr = m.pow(n as i32) * integer(size as i64).pow(n as i32 - 1);
                let expected = e.border_chain(&w).unwrap().add(&ones.scale(&corr)).unwrap();
                chain_bad += usize::from(e.shifted_chain(&w).unwrap() != expected);
            }
        }
    }
    let pass = literal_norm_bad == 0
        && middle_norm_bad == 0
        && accepting_bad == 0
        && power_bad == 0
        && annihilate_bad == 0
        && chain_bad == 0;
    outcome(
        pass,
        format!(
            "over {EMBED_MACHINES} AfAs / {words_checked} words: |B_w x'| = |M_w x| fails {literal_norm_bad} \
             (middle-coordinate norm fails {middle_norm_bad}), |F'B_w x'| = |F M_w x| fails {accepting_bad}, \
             E^n fails {power_bad}, B_iE = EB_i = 0 fails {annihilate_bad}, C_w fails {chain_bad}"
        ),
    )
}

fn l1(v: &[Rational]) -> Rational {
    v.iter().map(|x| x.abs()).sum()
}

/// 3 states, all entries in {0, 1/2, 1}: D = 2 and D_x = 2.
fn space_pfa() -> Pfa {
    let h = rational(1, 2);
    let (z, o) = (integer(0), integer(1));
    let a = Matrix::from_columns(vec![
        vec![h.clone(), h.clone(), z.clone()],
        vec![z.clone(), h.clone(), h.clone()],
        vec![h.clone(), z.clone(), h.clone()],
    ])
    .unwrap();
    let b = Matrix::from_columns(vec![
        vec![z.clone(), o.clone(), z.clone()],
        vec![h.clone(), z.clone(), h.clone()],
        vec![z.clone(), z.clone(), o.clone()],
    ])
    .unwrap();
    Pfa::new(
        Alphabet::new(["a", "b"]).unwrap(),
        vec![h.clone(), h, z],
        vec![a, b],
        vec![true, false, false],
    )
    .unwrap()
}

fn space_scaling() -> Outcome {
    let pfa = space_pfa();
    let integer = clear_denominators(&pfa);
    let mut pass = true;
    let mut parts = Vec::new();
    for &n in &SPACE_LENGTHS {
        let word = Word((0..n).map(|i| usize::from(i % 3 == 2)).collect());
        let cmp = match integer.compare(&word) {
            Ok(c) => c,
            Err(e) => return outcome(false, format!("n={n}: {e}")),
        };
        let t = &cmp.trace;
        let ratio = t.primes_used as f64 / n as f64;
        let ok = t.max_register_bits <= register_width_bound(t.largest_prime)
            && ratio < PRIMES_PER_LETTER_CEILING
            && t.input_passes == t.primes_used;
        pass &= ok;
        parts.push(format!(
            "n={n}: {}/{} bits, r={} (r/n={ratio:.3})",
            t.max_register_bits, t.register_bound, t.primes_used
        ));
    }
    outcome(pass, parts.join("; "))
}

fn densities() -> Outcome {
    let cubes = lower_density(&gen_poly_lang(&Polynomial::new(&[0, 0, 0, 1]).unwrap()), CUBE_HORIZON);
    let primes = lower_density(&gen_prime_lang(), CUBE_HORIZON);
    let cube_ok = cubes.lower_estimate() <= &rational(CUBE_DENSITY_CEILING.0, CUBE_DENSITY_CEILING.1)
        && cubes.last().members == 101;
    let prime_ok = primes.density() < &rational(PRIME_DENSITY_CEILING.0, PRIME_DENSITY_CEILING.1)
        && primes.last().members == 78_498
        && primes.trajectory.windows(2).all(|w| w[1].density < w[0].density);
    outcome(
        cube_ok && prime_ok,
        format!(
            "cubes {}/{} = {:.6}; primes {}/{} = {:.6}, {} decades strictly decreasing: {}",
            cubes.last().members,
            cubes.last().horizon + 1,
            cubes.density().to_f64().unwrap(),
            primes.last().members,
            primes.last().horizon + 1,
            primes.density().to_f64().unwrap(),
            primes.trajectory.len(),
            primes.trajectory.windows(2).all(|w| w[1].density < w[0].density)
        ),
    )
}

/// √2 to `digits` fractional digits by integer square root.
fn sqrt2_digits(digits: u32) -> String {
    let root = (BigUint::from(2u32) * BigUint::from(10u32).pow(2 * digits)).sqrt();
    let s = root.to_string();
    format!("{}.{}", &s[..1], &s[1..])
}

fn equidistribution() -> Outcome {
    let text = sqrt2_digits(WEYL_PRECISION);
    let alpha = Alpha::decimal(&text, WEYL_PRECISION).unwrap();
    let spec = SequenceSpec { offset: 0, step: 1, alpha, count: WEYL_TERMS };
    let terms = weyl_sequence(&spec).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for (lo, hi, target) in [(rational(0, 1), rational(1, 2), 0.5), (rational(1, 5), rational(3, 10), 0.1)] {
        let bx = IntervalBox::interval(lo.clone(), hi.clone()).unwrap();
        let ratio = weyl_box_ratio(&terms, &bx).unwrap().to_f64().unwrap();
        pass &= (ratio - target).abs() <= WEYL_TOLERANCE;
        parts.push(format!("[{lo}, {hi}) ratio {ratio:.5} (target {target})"));
    }
    outcome(pass, parts.join("; "))
}

fn expansion() -> Outcome {
    let mut r = rng(0xE4);
    let mut worst = 0.0f64;
    let mut violations = 0;
    for _ in 0..EXPANSION_CASES {
        let norm_a = 10f64.powf(r.gen_range(-3.0..3.0));
        let a = Complex64::from_polar(norm_a, r.gen_range(0.0..std::f64::consts::TAU));
        let z = Complex64::from_polar(norm_a / 2.0 * r.gen::<f64>(), r.gen_range(0.0..std::f64::consts::TAU));
        let residual = abs_expansion_residual(a, z).unwrap();
        let bound = expansion_bound(a, z);
        violations += usize::from(residual > bound);
        if bound > 0.0 {
            worst = worst.max(residual / bound);
        }
    }
    outcome(violations == 0, format!("{violations} violations, max residual/bound {worst:.4}"))
}

fn gseq_membership() -> Outcome {
    let mode = MembershipMode::strict(rational(1, 2)).unwrap();
    let mut mismatches = 0;
    let mut zeros = 0;
    for i in 0..GSEQ_MACHINES {
        let afa: Afa = random_unary_afa(&mut rng(0x65 + i as u64));
        let g = g_sequence(&afa, GSEQ_NMAX).unwrap();
        for (n, gn) in g.iter().enumerate() {
            let accepted = member(&afa, &Word::unary(n), &mode).unwrap();
            zeros += usize::from(gn.is_zero());
            mismatches += usize::from(gn.is_positive() != accepted);
        }
    }
    outcome(
        mismatches == 0,
        format!(
            "{mismatches} mismatches over {} (machine, n) pairs, {zeros} with g(n) = 0",
            GSEQ_MACHINES * (GSEQ_NMAX + 1)
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 PFA residue decisions match exact values", pfa_sweep),
        ("2 AfA residue decisions match exact values", afa_sweep),
        ("3 parity criterion and residue comparison, N = 105", small_modulus_comparisons),
        ("4 reconstruction and mixed-radix mod on (3,5,7,11)", reconstruction),
        ("5 embedding identities", embedding_identities),
        ("6 register width and prime count scaling", space_scaling),
        ("7 lower densities of cubes and primes", densities),
        ("8 equidistribution of m*sqrt(2)", equidistribution),
        ("9 expansion residual bound", expansion),
        ("10 g(n) sign matches strict membership", gseq_membership),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        failed += usize::from(!o.pass);
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

