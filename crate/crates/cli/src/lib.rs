//! The `afa` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use affine_automata::lab::{
    self, g_sequence, gen_poly_lang, gen_prime_lang, lower_density, weyl_box_ratio, weyl_sequence,
    Alpha, IntervalBox, LabError, Polynomial, SequenceSpec,
};
use affine_automata::logspace::{clear_denominators, turakainen_embed, SimError, SpaceTrace};
use affine_automata::rational::{format_rational, parse_rational, to_decimal, to_decimal_trimmed};
use affine_automata::{member, selftest, Automaton, AutomatonError, Machine, Matrix, MembershipMode, Rational, Word};

/// Digits after the point in `eval` and `member` output.
const EVAL_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "afa", version, about = "Exact probabilistic and affine automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct MachineWord {
    /// Automaton file.
    #[arg(long)]
    automaton: PathBuf,
    /// Input word; each character is a symbol unless --sep is given.
    #[arg(long, allow_hyphen_values = true)]
    word: String,
    /// Separator between multi-character symbols.
    #[arg(long)]
    sep: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Strict,
    Exclusive,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the exact acceptance value.
    Eval {
        #[command(flatten)]
        input: MachineWord,
    },
    /// Decide cutpoint membership exactly.
    Member {
        #[command(flatten)]
        input: MachineWord,
        /// Cutpoint as num/den.
        #[arg(long, allow_hyphen_values = true)]
        cutpoint: String,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Decide f(w) > 1/2 through residue arithmetic only.
    Rns {
        #[command(flatten)]
        input: MachineWord,
        /// Also print register-width instrumentation.
        #[arg(long)]
        trace_space: bool,
    },
    /// Print the nonnegative integer embedding of an AfA.
    Embed {
        #[arg(long)]
        automaton: PathBuf,
    },
    /// Lower density trajectory of a unary language, as CSV.
    Density {
        /// `poly:c0,c1,...` (constant term first) or `primes`.
        #[arg(long)]
        lang: String,
        #[arg(long)]
        horizon: u64,
        #[arg(long, default_value_t = 8)]
        digits: usize,
    },
    /// Weyl sequence ((r + mN)·α) mod 1 and its box ratio, as CSV.
    Equidist {
        /// Decimal digits of α, or an exact num/den.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// α is known to within 10^-precision.
        #[arg(long, default_value_t = 0)]
        precision: u32,
        #[arg(long, default_value_t = 0)]
        r: u64,
        #[arg(long, default_value_t = 1)]
        step: u64,
        #[arg(long)]
        count: u64,
        /// `a,b` for the interval [a, b).
        #[arg(long)]
        interval: String,
        #[arg(long, default_value_t = 10)]
        digits: usize,
    },
    /// g(n) for a unary AfA, as CSV.
    Gseq {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value_t = 8)]
        digits: usize,
    },
    /// Exhaustive residue checks and the randomized oracle sweep.
    Selftest {
        #[arg(long, default_value_t = 100)]
        machines: usize,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("space bound exceeded: {0}")]
    SpaceBound(SpaceTrace),
    #[error("selftest failed")]
    SelftestFailed,
    #[error("write failed: {0}")]
    Output(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::SpaceBound(_) => 3,
            CliError::SelftestFailed | CliError::Output(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<AutomatonError> for CliError {
    fn from(e: AutomatonError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Csv(msg) => CliError::Output(msg),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Automaton(a) => a.into(),
            SimError::SpaceBoundExceeded(t) => CliError::SpaceBound(t),
        }
    }
}

/// Runs one command; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            if !matches!(e, CliError::SelftestFailed) {
                let _ = writeln!(err, "afa: {e}");
            }
            e.exit_code()
        }
    }
}

fn load(path: &Path) -> Result<Machine, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Machine::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_with_word(input: &MachineWord) -> Result<(Machine, Word), CliError> {
    let machine = load(&input.automaton)?;
    let word = machine.alphabet().parse_word(&input.word, input.sep.as_deref())?;
    Ok((machine, word))
}

fn rational_arg(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Input(format!("--{name} `{text}`: {e}")))
}

fn show(value: &Rational) -> String {
    format!("{} ({})", format_rational(value), to_decimal_trimmed(value, EVAL_DIGITS))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Eval { input } => {
            let (machine, word) = load_with_word(&input)?;
            writeln!(out, "{}", show(&machine.value(&word)?))?;
        }
        Command::Member { input, cutpoint, mode } => {
            let (machine, word) = load_with_word(&input)?;
            let lambda = rational_arg("cutpoint", &cutpoint)?;
            let mode = match mode {
                Mode::Strict => MembershipMode::strict(lambda)?,
                Mode::Exclusive => MembershipMode::exclusive(lambda)?,
            };
            writeln!(out, "{}", member(&machine, &word, &mode)?)?;
        }
        Command::Rns { input, trace_space } => {
            let (machine, word) = load_with_word(&input)?;
            let (cmp, equal) = match &machine {
                Machine::Pfa(p) => {
                    let ip = clear_denominators(p);
                    (ip.compare(&word)?, Some(ip.decide_eq(&word)?.decision))
                }
                Machine::Afa(a) => (turakainen_embed(a).compare(&word)?, None),
            };
            writeln!(out, "{}", cmp.greater())?;
            if let Some(eq) = equal {
                writeln!(out, "equal to 1/2: {eq}")?;
            }
            writeln!(out, "primes: {}", cmp.trace.primes_used)?;
            if trace_space {
                writeln!(out, "space: {}", cmp.trace)?;
            }
        }
        Command::Embed { automaton } => {
            let afa = match load(&automaton)? {
                Machine::Afa(a) => a,
                Machine::Pfa(_) => return Err(CliError::Input("embed needs an afa file".into())),
            };
            let e = turakainen_embed(&afa);
            writeln!(out, "states {}", e.size())?;
            writeln!(out, "shift {}", e.shift())?;
            writeln!(out, "scale {}", e.scale())?;
            for (i, sym) in afa.alphabet().symbols().iter().enumerate() {
                writeln!(out, "border {sym}")?;
                write_rational_matrix(out, &e.border()[i])?;
            }
            for (i, sym) in afa.alphabet().symbols().iter().enumerate() {
                writeln!(out, "integer {sym}")?;
                write!(out, "{}", e.integer()[i])?;
            }
        }
        Command::Density { lang, horizon, digits } => {
            let language = if lang == "primes" {
                gen_prime_lang()
            } else if let Some(spec) = lang.strip_prefix("poly:") {
                let coefficients = spec
                    .split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| CliError::Input(format!("--lang `{lang}`: {e}")))?;
                gen_poly_lang(&Polynomial::new(&coefficients)?)
            } else {
                return Err(CliError::Input(format!("--lang `{lang}`: expected poly:c0,c1,... or primes")));
            };
            lab::output::write_density_csv(&mut *out, &lower_density(&language, horizon), digits)?;
        }
        Command::Equidist { alpha, precision, r, step, count, interval, digits } => {
            let alpha = if alpha.contains('/') {
                Alpha::Exact(rational_arg("alpha", &alpha)?)
            } else {
                Alpha::decimal(&alpha, precision)?
            };
            let (lo, hi) = interval
                .split_once(',')
                .ok_or_else(|| CliError::Input(format!("--interval `{interval}`: expected a,b")))?;
            let bx = IntervalBox::interval(rational_arg("interval", lo.trim())?, rational_arg("interval", hi.trim())?)?;
            let terms = weyl_sequence(&SequenceSpec { offset: r, step, alpha, count })?;
            lab::output::write_weyl_csv(&mut *out, &terms, digits)?;
            let ratio = weyl_box_ratio(&terms, &bx)?;
            writeln!(out, "ratio,{},{}", to_decimal(&ratio, digits), format_rational(&ratio))?;
        }
        Command::Gseq { automaton, nmax, digits } => {
            let afa = match load(&automaton)? {
                Machine::Afa(a) => a,
                Machine::Pfa(_) => return Err(CliError::Input("gseq needs an afa file".into())),
            };
            lab::output::write_g_csv(&mut *out, &g_sequence(&afa, nmax)?, digits)?;
        }
        Command::Selftest { machines, max_len, seed } => {
            let results = selftest::run_all(machines, max_len, seed);
            for r in &results {
                writeln!(out, "{r}")?;
            }
            if !results.iter().all(|r| r.passed()) {
                return Err(CliError::SelftestFailed);
            }
        }
    }
    Ok(())
}

fn write_rational_matrix(out: &mut dyn Write, m: &Matrix<Rational>) -> std::io::Result<()> {
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(format_rational).collect();
        writeln!(out, "{}", cells.join(" "))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let trace = SpaceTrace {
            input_len: 1,
            primes_used: 1,
            largest_prime: 3,
            max_register_bits: 20,
            register_bound: 8,
            input_passes: 1,
        };
        assert_eq!(CliError::from(SimError::SpaceBoundExceeded(trace)).exit_code(), 3);
        assert_eq!(CliError::Input(String::new()).exit_code(), 2);
        assert_eq!(CliError::SelftestFailed.exit_code(), 1);
    }
}
