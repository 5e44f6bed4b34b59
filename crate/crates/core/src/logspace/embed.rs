//! Turakainen's embedding of an AfA into nonnegative integer matrices.
//!
//! Each `M_σ` (k×k) is bordered to a (k+2)×(k+2) matrix
//!
//! ```text
//!        ⎡ 0   0ᵀ   0 ⎤
//!  B_σ = ⎢ c   M_σ  0 ⎥
//!        ⎣ e   dᵀ   0 ⎦
//! ```
//!
//! with `c`, `d`, `e` fixed by requiring every row and column of `B_σ` to sum
//! to zero. Then `B_σ E = E B_σ = 0` for the all-ones matrix `E`, so
//! `C_σ = B_σ + mE` and `D_σ = g·C_σ` satisfy
//! `D_w = gⁿ (B_w + mⁿ(k+2)ⁿ⁻¹ E)` for `|w| = n ≥ 1`.
//!
//! With `x′ = (0, x, 0)` the middle block of `B_w x′` is `M_w x`. Because
//! the columns of `B_w` sum to zero, the bottom border entry is `−Σ(M_w x) = −1`,
//! so the acceptance ratio is read off the middle coordinates only:
//! `f_A(w) = |F′B_w x′| / |Π B_w x′|` with `Π = diag(0, I_k, 0)`.
//!
//! The residue decision uses a nonnegative integer initial vector
//! `x″ = s·x′ + t·1`, where `s` clears the denominators of `x` and `t` lifts
//! the most negative entry to zero. `B_w` annihilates `1`, so for `n ≥ 1`
//! every coordinate `(D_w x″)_j − gⁿmⁿ(k+2)ⁿ⁻¹·Σx″` equals `s·gⁿ·(B_w x′)_j`.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::automata::{l1_norm, Afa, Automaton, Word};
use crate::matrix::Matrix;
use crate::rational::{lcm_of_denominators, Rational};
use crate::residue::{
    abs_diff_metered, add_mod, basis_for_bound, compare_metered, mat_vec_mod, mul_mod, next_odd_prime,
    pow_mod, reduce_bigint, RegisterMeter,
};

use super::{RnsComparison, SimError, SpaceTrace, ValueBound};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedAfa {
    source: Afa,
    border: Vec<Matrix<Rational>>,
    shift: BigInt,
    scale: BigInt,
    integer: Vec<Matrix<BigInt>>,
    initial: Vec<Rational>,
    initial_scale: BigInt,
    initial_offset: BigInt,
    shifted_initial: Vec<BigInt>,
    accepting: Vec<bool>,
}

fn border_matrix(m: &Matrix<Rational>) -> Matrix<Rational> {
    let k = m.dim();
    let size = k + 2;
    // c_r = −(row r of M), d_j = −(column j of M), e = Σ M.
    let row_sums: Vec<Rational> = (0..k).map(|r| m.row_sum(r)).collect();
    let col_sums: Vec<Rational> = (0..k).map(|c| m.column_sum(c)).collect();
    let total: Rational = row_sums.iter().sum();
    Matrix::from_fn(size, |r, c| match (r, c) {
        (0, _) => Rational::zero(),
        (_, c) if c == size - 1 => Rational::zero(),
        (r, 0) if r <= k => -row_sums[r - 1].clone(),
        (r, c) if r <= k => m.get(r - 1, c - 1).clone(),
        (_, 0) => total.clone(),
        (_, c) => -col_sums[c - 1].clone(),
    })
}

pub fn turakainen_embed(afa: &Afa) -> EmbeddedAfa {
    let k = afa.states();
    let size = k + 2;
    let border: Vec<Matrix<Rational>> = afa.transitions().iter().map(border_matrix).collect();

    let min_entry = border
        .iter()
        .flat_map(|b| b.entries())
        .min()
        .cloned()
        .unwrap_or_else(Rational::zero);
    let shift = if min_entry.is_negative() {
        (-min_entry).ceil().to_integer()
    } else {
        BigInt::zero()
    };
    let shift_q = Rational::from_integer(shift.clone());
    let shifted: Vec<Matrix<Rational>> = border.iter().map(|b| b.map(|x| x + &shift_q)).collect();
    let scale = lcm_of_denominators(shifted.iter().flat_map(|c| c.entries()));
    let scale_q = Rational::from_integer(scale.clone());
    let integer = shifted
        .iter()
        .map(|c| c.map(|x| (x * &scale_q).to_integer()))
        .collect();

    let mut initial = Vec::with_capacity(size);
    initial.push(Rational::zero());
    initial.extend(afa.initial().iter().cloned());
    initial.push(Rational::zero());
    let initial_scale = lcm_of_denominators(&initial);
    let s = Rational::from_integer(initial_scale.clone());
    let scaled: Vec<BigInt> = initial.iter().map(|x| (x * &s).to_integer()).collect();
    let min_scaled = scaled.iter().min().cloned().unwrap_or_default();
    let initial_offset = if min_scaled.is_negative() { -min_scaled } else { BigInt::zero() };
    let shifted_initial = scaled.iter().map(|x| x + &initial_offset).collect();

    let mut accepting = Vec::with_capacity(size);
    accepting.push(false);
    accepting.extend_from_slice(afa.accepting());
    accepting.push(false);

    EmbeddedAfa {
        source: afa.clone(),
        border,
        shift,
        scale,
        integer,
        initial,
        initial_scale,
        initial_offset,
        shifted_initial,
        accepting,
    }
}

impl EmbeddedAfa {
    pub fn source(&self) -> &Afa {
        &self.source
    }

    /// Original state count `k`.
    pub fn states(&self) -> usize {
        self.source.states()
    }

    /// `k + 2`.
    pub fn size(&self) -> usize {
        self.states() + 2
    }

    /// `B_σ`.
    pub fn border(&self) -> &[Matrix<Rational>] {
        &self.border
    }

    /// `m`, the smallest nonnegative integer with `B_σ + mE ≥ 0` for every σ.
    pub fn shift(&self) -> &BigInt {
        &self.shift
    }

    /// `g`, the smallest positive integer with `g·C_σ` integral for every σ.
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    /// `C_σ = B_σ + mE`.
    pub fn shifted(&self, symbol: usize) -> Matrix<Rational> {
        let m = Rational::from_integer(self.shift.clone());
        self.border[symbol].map(|x| x + &m)
    }

    /// `D_σ = g·C_σ`.
    pub fn integer(&self) -> &[Matrix<BigInt>] {
        &self.integer
    }

    /// `x′ = (0, x, 0)`.
    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    /// `x″ = s·x′ + t·1`.
    pub fn shifted_initial(&self) -> &[BigInt] {
        &self.shifted_initial
    }

    pub fn initial_scale(&self) -> &BigInt {
        &self.initial_scale
    }

    pub fn initial_offset(&self) -> &BigInt {
        &self.initial_offset
    }

    /// Diagonal of `F′`.
    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    /// The all-ones matrix of size `k + 2`.
    pub fn ones(&self) -> Matrix<Rational> {
        Matrix::ones(self.size())
    }

    /// `B_w = B_{w_n} ··· B_{w_1}`.
    pub fn border_chain(&self, word: &Word) -> Result<Matrix<Rational>, SimError> {
        self.chain(word, |sym| self.border[sym].clone())
    }

    /// `C_w = C_{w_n} ··· C_{w_1}`.
    pub fn shifted_chain(&self, word: &Word) -> Result<Matrix<Rational>, SimError> {
        self.chain(word, |sym| self.shifted(sym))
    }

    fn chain(&self, word: &Word, f: impl Fn(usize) -> Matrix<Rational>) -> Result<Matrix<Rational>, SimError> {
        self.source.alphabet().check(word)?;
        let mut acc = Matrix::identity(self.size());
        for &sym in word.letters() {
            acc = f(sym).mul(&acc).expect("square");
        }
        Ok(acc)
    }

    /// `B_w x′`.
    pub fn border_state(&self, word: &Word) -> Result<Vec<Rational>, SimError> {
        self.source.alphabet().check(word)?;
        let mut v = self.initial.clone();
        for &sym in word.letters() {
            v = self.border[sym].apply(&v).expect("square");
        }
        Ok(v)
    }

    /// `|F′ v|`.
    pub fn projected_norm(&self, v: &[Rational]) -> Rational {
        v.iter()
            .zip(&self.accepting)
            .filter(|(_, &a)| a)
            .fold(Rational::zero(), |acc, (x, _)| acc + x.abs())
    }

    /// `|Π v|`, the norm over the k original coordinates.
    pub fn middle_norm(&self, v: &[Rational]) -> Rational {
        l1_norm(&v[1..=self.states()])
    }

    /// The pair `(P_j, N_j)` of nonnegative integers for every coordinate,
    /// with `P_j − N_j = s·gⁿ·(B_w x′)_j`. Test oracle over the integers.
    pub fn coordinate_pairs(&self, word: &Word) -> Result<Vec<(BigInt, BigInt)>, SimError> {
        self.source.alphabet().check(word)?;
        let mut v = self.shifted_initial.clone();
        for &sym in word.letters() {
            v = self.integer[sym].apply(&v).expect("square");
        }
        let n = self.correction(word.len());
        Ok(v.into_iter().map(|p| (p, n.clone())).collect())
    }

    /// `N`, the same for every coordinate: `t` for the empty word, otherwise
    /// `gⁿ mⁿ (k+2)ⁿ⁻¹ Σx″`.
    pub fn correction(&self, n: usize) -> BigInt {
        if n == 0 {
            return self.initial_offset.clone();
        }
        let total: BigInt = self.shifted_initial.iter().sum();
        let base = &self.scale * &self.shift;
        base.pow(n as u32) * BigInt::from(self.size()).pow(n as u32 - 1) * total
    }

    /// One pass over `word` modulo `p`: residues of `P_j` for every `j` and of `N`.
    fn pass(&self, word: &Word, p: u64, meter: &mut RegisterMeter) -> (Vec<u64>, u64) {
        let reduced: Vec<Matrix<u64>> = self
            .integer
            .iter()
            .map(|m| m.map(|x| meter.track(reduce_bigint(x, p))))
            .collect();
        let mut v: Vec<u64> = self
            .shifted_initial
            .iter()
            .map(|x| meter.track(reduce_bigint(x, p)))
            .collect();
        for &sym in word.letters() {
            v = mat_vec_mod(&reduced[sym], &v, p, meter);
        }
        let n = word.len();
        let correction = if n == 0 {
            meter.track(reduce_bigint(&self.initial_offset, p))
        } else {
            let g = meter.track(reduce_bigint(&self.scale, p));
            let m = meter.track(reduce_bigint(&self.shift, p));
            let size = meter.track(self.size() as u64 % p);
            let total = self
                .shifted_initial
                .iter()
                .fold(0u64, |acc, x| add_mod(acc, reduce_bigint(x, p), p, meter));
            let gm = pow_mod(mul_mod(g, m, p, meter), n as u64, p, meter);
            let sz = pow_mod(size, n as u64 - 1, p, meter);
            mul_mod(mul_mod(gm, sz, p, meter), total, p, meter)
        };
        (v, correction)
    }

    /// Orders `2·Σ_{F′}|P_j − N|` against `Σ_{Π}|P_j − N|`, i.e. `2|F M_w x|`
    /// against `|M_w x|` up to the common factor `s·gⁿ`.
    pub fn compare(&self, word: &Word) -> Result<RnsComparison, SimError> {
        self.source.alphabet().check(word)?;
        let basis = basis_for_bound(&self.value_bound(word.len()));
        let mut trace = SpaceTrace::new(word.len(), basis.len(), basis.largest());
        let r = trace.primes_used;
        let mut meter = RegisterMeter::new();

        let mid = 1..=self.states();
        let mut coords: Vec<Vec<u64>> = vec![Vec::with_capacity(r); self.size()];
        let mut correction = Vec::with_capacity(r);
        let mut p = 2u64;
        for _ in 0..r {
            p = next_odd_prime(p, &mut meter);
            trace.input_passes += 1;
            let (v, n) = self.pass(word, p, &mut meter);
            for (digits, x) in coords.iter_mut().zip(v) {
                digits.push(x);
            }
            correction.push(n);
        }

        let diffs: Vec<Vec<u64>> = mid
            .clone()
            .map(|j| abs_diff_metered(&coords[j], &correction, &mut meter))
            .collect();
        let mut lhs = vec![0u64; r];
        let mut rhs = vec![0u64; r];
        let mut p = 2u64;
        for i in 0..r {
            p = next_odd_prime(p, &mut meter);
            for (diff, j) in diffs.iter().zip(mid.clone()) {
                rhs[i] = add_mod(rhs[i], diff[i], p, &mut meter);
                if self.accepting[j] {
                    lhs[i] = add_mod(lhs[i], diff[i], p, &mut meter);
                }
            }
            lhs[i] = mul_mod(2, lhs[i], p, &mut meter);
        }
        let ordering: Ordering = compare_metered(&lhs, &rhs, &mut meter);
        trace.max_register_bits = meter.max_bits();
        Ok(RnsComparison { ordering, trace: trace.finish()? })
    }
}

impl ValueBound for EmbeddedAfa {
    /// `2(k+2)·X″·(g·(m(k+2) + β))ⁿ·g`, with `X″ = max x″` and `β` the
    /// largest entry magnitude over all `B_σ`.
    fn value_bound(&self, n: usize) -> BigUint {
        let size = BigInt::from(self.size());
        let x_max = self.shifted_initial.iter().max().cloned().unwrap_or_default();
        let beta = self
            .border
            .iter()
            .flat_map(|b| b.entries())
            .map(|q| q.abs().ceil().to_integer())
            .max()
            .unwrap_or_default();
        let base = &self.scale * (&self.shift * &size + beta);
        let bound = BigInt::from(2) * &size * x_max.max(BigInt::one()) * base.pow(n as u32) * &self.scale;
        bound.to_biguint().expect("nonnegative")
    }
}
