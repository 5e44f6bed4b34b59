//! Probabilistic and affine finite automata over exact rationals.
//!
//! Both models evolve a column vector by left-multiplying one matrix per
//! input symbol, in input order: after reading `w = w_1 … w_n` the state is
//! `M_{w_n} ··· M_{w_1} x`. They differ in the final step:
//!
//! - a [`Pfa`] returns the linear functional `yᵀ v`,
//! - an [`Afa`] returns the weighted ratio `|F v| / |v|` in L1 norm.
//!
//! On the empty word both evaluate the initial vector.

mod format;

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::matrix::{DimensionError, Matrix};
use crate::rational::{format_rational, Rational};

pub use format::parse_machine;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error(transparent)]
    Dimension(#[from] DimensionError),
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("duplicate symbol `{0}` in alphabet")]
    DuplicateSymbol(String),
    #[error("invalid symbol name `{0}`")]
    InvalidSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol index {index} outside alphabet of size {size}")]
    SymbolOutOfRange { index: usize, size: usize },
    #[error("alphabet has multi-character symbols; words need a separator")]
    SeparatorRequired,
    #[error("expected {expected} transition matrices, found {found}")]
    TransitionCount { expected: usize, found: usize },
    #[error("initial vector is not {kind}: {reason}")]
    InitialVector { kind: &'static str, reason: String },
    #[error("matrix for `{symbol}` is not {kind}: column {column} {reason}")]
    TransitionMatrix { symbol: String, kind: &'static str, column: usize, reason: String },
    #[error("final flags must be 0 or 1")]
    FinalFlags,
    #[error("cutpoint {cutpoint} outside {allowed} for {mode} mode")]
    Cutpoint { mode: &'static str, allowed: &'static str, cutpoint: String },
    #[error("word set is empty")]
    EmptyWordSet,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = AutomatonError> = std::result::Result<T, E>;

/// Finite, ordered symbol set. Symbols are addressed by index in [`Word`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(AutomatonError::EmptyAlphabet);
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == '#') {
                return Err(AutomatonError::InvalidSymbol(s.clone()));
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(AutomatonError::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Self { symbols, index })
    }

    /// The one-letter alphabet `{a}`.
    pub fn unary() -> Self {
        Self::new(["a"]).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> Option<&str> {
        self.symbols.get(index).map(String::as_str)
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    /// Parses a word. Without a separator every character is one symbol;
    /// with one, the text is split on it. The empty string is the empty word.
    pub fn parse_word(&self, text: &str, sep: Option<&str>) -> Result<Word> {
        let lookup = |s: &str| {
            self.index_of(s)
                .ok_or_else(|| AutomatonError::UnknownSymbol(s.to_string()))
        };
        if text.is_empty() {
            return Ok(Word::empty());
        }
        let letters = match sep {
            Some(sep) if !sep.is_empty() => text.split(sep).map(lookup).collect::<Result<_>>()?,
            _ => {
                if self.symbols.iter().any(|s| s.chars().count() > 1) {
                    return Err(AutomatonError::SeparatorRequired);
                }
                let mut buf = [0u8; 4];
                text.chars()
                    .map(|c| lookup(c.encode_utf8(&mut buf)))
                    .collect::<Result<_>>()?
            }
        };
        Ok(Word(letters))
    }

    pub fn check(&self, word: &Word) -> Result<()> {
        match word.0.iter().find(|&&i| i >= self.len()) {
            Some(&index) => Err(AutomatonError::SymbolOutOfRange { index, size: self.len() }),
            None => Ok(()),
        }
    }

    pub fn format_word(&self, word: &Word, sep: &str) -> String {
        word.0
            .iter()
            .map(|&i| self.symbol(i).unwrap_or("?"))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

/// A word over some alphabet, as a sequence of symbol indices. `w[i]` is the
/// `(i+1)`-th letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// `a^n` over a unary alphabet.
    pub fn unary(n: usize) -> Self {
        Word(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Every word over `alphabet_len` symbols of length at most `max_len`, in
    /// length-lexicographic order.
    pub fn all_up_to(alphabet_len: usize, max_len: usize) -> impl Iterator<Item = Word> {
        (0..=max_len).flat_map(move |len| {
            let total = alphabet_len.checked_pow(len as u32).expect("word count overflow");
            (0..total).map(move |mut code| {
                let mut letters = vec![0; len];
                for slot in letters.iter_mut().rev() {
                    *slot = code % alphabet_len;
                    code /= alphabet_len;
                }
                Word(letters)
            })
        })
    }
}

impl From<Vec<usize>> for Word {
    fn from(letters: Vec<usize>) -> Self {
        Word(letters)
    }
}

fn sum(values: &[Rational]) -> Rational {
    values.iter().fold(Rational::zero(), |acc, v| acc + v)
}

/// L1 norm.
pub fn l1_norm(values: &[Rational]) -> Rational {
    values.iter().fold(Rational::zero(), |acc, v| acc + v.abs())
}

fn check_stochastic_vector(v: &[Rational]) -> std::result::Result<(), String> {
    if let Some(i) = v.iter().position(Signed::is_negative) {
        return Err(format!("entry {} is negative", i + 1));
    }
    let total = sum(v);
    if !total.is_one() {
        return Err(format!("entries sum to {}", format_rational(&total)));
    }
    Ok(())
}

fn check_affine_vector(v: &[Rational]) -> std::result::Result<(), String> {
    let total = sum(v);
    if !total.is_one() {
        return Err(format!("entries sum to {}", format_rational(&total)));
    }
    Ok(())
}

fn check_transitions(
    alphabet: &Alphabet,
    states: usize,
    transitions: &[Matrix<Rational>],
    kind: &'static str,
    check: fn(&[Rational]) -> std::result::Result<(), String>,
) -> Result<()> {
    if transitions.len() != alphabet.len() {
        return Err(AutomatonError::TransitionCount {
            expected: alphabet.len(),
            found: transitions.len(),
        });
    }
    for (sym, m) in transitions.iter().enumerate() {
        if m.dim() != states {
            return Err(DimensionError { expected: states, found: m.dim() }.into());
        }
        for col in 0..states {
            let column: Vec<Rational> = m.column(col).cloned().collect();
            if let Err(reason) = check(&column) {
                return Err(AutomatonError::TransitionMatrix {
                    symbol: alphabet.symbols[sym].clone(),
                    kind,
                    column: col + 1,
                    reason,
                });
            }
        }
    }
    Ok(())
}

/// Common interface of the two automaton models.
pub trait Automaton {
    fn alphabet(&self) -> &Alphabet;
    fn states(&self) -> usize;
    /// Acceptance value `f(w) ∈ [0, 1]`.
    fn value(&self, word: &Word) -> Result<Rational>;
}

/// A probabilistic finite automaton `(x, {M_σ}, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pfa {
    alphabet: Alphabet,
    initial: Vec<Rational>,
    transitions: Vec<Matrix<Rational>>,
    accepting: Vec<bool>,
}

impl Pfa {
    /// `transitions[i]` is the matrix of `alphabet.symbols()[i]`.
    pub fn new(
        alphabet: Alphabet,
        initial: Vec<Rational>,
        transitions: Vec<Matrix<Rational>>,
        accepting: Vec<bool>,
    ) -> Result<Self> {
        let k = initial.len();
        check_stochastic_vector(&initial)
            .map_err(|reason| AutomatonError::InitialVector { kind: "stochastic", reason })?;
        check_transitions(&alphabet, k, &transitions, "stochastic", check_stochastic_vector)?;
        if accepting.len() != k {
            return Err(DimensionError { expected: k, found: accepting.len() }.into());
        }
        Ok(Self { alphabet, initial, transitions, accepting })
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    pub fn transition(&self, symbol: usize) -> &Matrix<Rational> {
        &self.transitions[symbol]
    }

    pub fn transitions(&self) -> &[Matrix<Rational>] {
        &self.transitions
    }

    /// The final vector `y` as flags.
    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    /// `M_w x`.
    pub fn state(&self, word: &Word) -> Result<Vec<Rational>> {
        self.alphabet.check(word)?;
        let mut v = self.initial.clone();
        for &sym in word.letters() {
            v = self.transitions[sym].apply(&v)?;
        }
        Ok(v)
    }

    pub fn value_of_state(&self, state: &[Rational]) -> Rational {
        state
            .iter()
            .zip(&self.accepting)
            .filter(|(_, &acc)| acc)
            .fold(Rational::zero(), |acc, (v, _)| acc + v)
    }
}

impl Automaton for Pfa {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn states(&self) -> usize {
        self.initial.len()
    }

    fn value(&self, word: &Word) -> Result<Rational> {
        Ok(self.value_of_state(&self.state(word)?))
    }
}

/// An affine finite automaton `(x, {M_σ}, F)`, with `F` given by its
/// diagonal flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Afa {
    alphabet: Alphabet,
    initial: Vec<Rational>,
    transitions: Vec<Matrix<Rational>>,
    accepting: Vec<bool>,
}

impl Afa {
    pub fn new(
        alphabet: Alphabet,
        initial: Vec<Rational>,
        transitions: Vec<Matrix<Rational>>,
        accepting: Vec<bool>,
    ) -> Result<Self> {
        let k = initial.len();
        check_affine_vector(&initial)
            .map_err(|reason| AutomatonError::InitialVector { kind: "affine", reason })?;
        check_transitions(&alphabet, k, &transitions, "affine", check_affine_vector)?;
        if accepting.len() != k {
            return Err(DimensionError { expected: k, found: accepting.len() }.into());
        }
        Ok(Self { alphabet, initial, transitions, accepting })
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    pub fn transition(&self, symbol: usize) -> &Matrix<Rational> {
        &self.transitions[symbol]
    }

    pub fn transitions(&self) -> &[Matrix<Rational>] {
        &self.transitions
    }

    /// Diagonal of the final projection `F`.
    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    /// `M_w x`; its entries always sum to exactly 1.
    pub fn state(&self, word: &Word) -> Result<Vec<Rational>> {
        self.alphabet.check(word)?;
        let mut v = self.initial.clone();
        for &sym in word.letters() {
            v = self.transitions[sym].apply(&v)?;
        }
        Ok(v)
    }

    /// `|F v|`.
    pub fn projected_norm(&self, state: &[Rational]) -> Rational {
        state
            .iter()
            .zip(&self.accepting)
            .filter(|(_, &acc)| acc)
            .fold(Rational::zero(), |acc, (v, _)| acc + v.abs())
    }

    /// `|F v| / |v|`. For affine `v`, `|v| ≥ |Σ v_i| = 1`.
    pub fn value_of_state(&self, state: &[Rational]) -> Rational {
        self.projected_norm(state) / l1_norm(state)
    }
}

impl Automaton for Afa {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn states(&self) -> usize {
        self.initial.len()
    }

    fn value(&self, word: &Word) -> Result<Rational> {
        Ok(self.value_of_state(&self.state(word)?))
    }
}

/// Either model, as read from an automaton file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Machine {
    Pfa(Pfa),
    Afa(Afa),
}

impl Machine {
    pub fn parse(text: &str) -> Result<Self> {
        parse_machine(text)
    }

    pub fn state(&self, word: &Word) -> Result<Vec<Rational>> {
        match self {
            Machine::Pfa(p) => p.state(word),
            Machine::Afa(a) => a.state(word),
        }
    }
}

impl Automaton for Machine {
    fn alphabet(&self) -> &Alphabet {
        match self {
            Machine::Pfa(p) => p.alphabet(),
            Machine::Afa(a) => a.alphabet(),
        }
    }

    fn states(&self) -> usize {
        match self {
            Machine::Pfa(p) => p.states(),
            Machine::Afa(a) => a.states(),
        }
    }

    fn value(&self, word: &Word) -> Result<Rational> {
        match self {
            Machine::Pfa(p) => p.value(word),
            Machine::Afa(a) => a.value(word),
        }
    }
}

impl From<Pfa> for Machine {
    fn from(p: Pfa) -> Self {
        Machine::Pfa(p)
    }
}

impl From<Afa> for Machine {
    fn from(a: Afa) -> Self {
        Machine::Afa(a)
    }
}

/// How a cutpoint turns acceptance values into a language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipMode {
    /// `f(w) > λ`, with `λ ∈ [0, 1)`.
    StrictCutpoint(Rational),
    /// `f(w) ≠ λ`, with `λ ∈ [0, 1]`.
    ExclusiveCutpoint(Rational),
}

impl MembershipMode {
    pub fn strict(cutpoint: Rational) -> Result<Self> {
        if cutpoint.is_negative() || cutpoint >= Rational::one() {
            return Err(AutomatonError::Cutpoint {
                mode: "strict",
                allowed: "[0,1)",
                cutpoint: format_rational(&cutpoint),
            });
        }
        Ok(Self::StrictCutpoint(cutpoint))
    }

    pub fn exclusive(cutpoint: Rational) -> Result<Self> {
        if cutpoint.is_negative() || cutpoint > Rational::one() {
            return Err(AutomatonError::Cutpoint {
                mode: "exclusive",
                allowed: "[0,1]",
                cutpoint: format_rational(&cutpoint),
            });
        }
        Ok(Self::ExclusiveCutpoint(cutpoint))
    }

    pub fn cutpoint(&self) -> &Rational {
        match self {
            Self::StrictCutpoint(l) | Self::ExclusiveCutpoint(l) => l,
        }
    }

    pub fn accepts(&self, value: &Rational) -> bool {
        match self {
            Self::StrictCutpoint(l) => value > l,
            Self::ExclusiveCutpoint(l) => value != l,
        }
    }
}

pub fn pfa_value(pfa: &Pfa, word: &Word) -> Result<Rational> {
    pfa.value(word)
}

pub fn afa_state(afa: &Afa, word: &Word) -> Result<Vec<Rational>> {
    afa.state(word)
}

pub fn afa_value(afa: &Afa, word: &Word) -> Result<Rational> {
    afa.value(word)
}

pub fn member<A: Automaton + ?Sized>(machine: &A, word: &Word, mode: &MembershipMode) -> Result<bool> {
    Ok(mode.accepts(&machine.value(word)?))
}

/// `min_w |f(w) − λ|` over a finite word set. Zero means the cutpoint is not
/// isolated on this set.
pub fn isolation_gap<A: Automaton + ?Sized>(
    machine: &A,
    words: &[Word],
    cutpoint: &Rational,
) -> Result<Rational> {
    let mut gap: Option<Rational> = None;
    for w in words {
        let d = (machine.value(w)? - cutpoint).abs();
        if gap.as_ref().is_none_or(|g| &d < g) {
            gap = Some(d);
        }
    }
    gap.ok_or(AutomatonError::EmptyWordSet)
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format::write_machine(self, f)
    }
}
