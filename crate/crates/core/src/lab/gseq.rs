use num_traits::{Signed, Zero};

use crate::automata::{Afa, Automaton};
use crate::rational::Rational;

use super::LabError;

/// `g(n) = Σ_{F}|(Mⁿx)_j| − Σ_{not F}|(Mⁿx)_j|` for `n = 0..=nmax`, by exact
/// iteration; `g(n) > 0` exactly when `f_A(aⁿ) > 1/2`.
pub fn g_sequence(afa: &Afa, nmax: usize) -> Result<Vec<Rational>, LabError> {
    if afa.alphabet().len() != 1 {
        return Err(LabError::NotUnary(afa.alphabet().len()));
    }
    let m = afa.transition(0);
    let mut v = afa.initial().to_vec();
    let mut out = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        if n > 0 {
            v = m.apply(&v).expect("square");
        }
        let g = v
            .iter()
            .zip(afa.accepting())
            .fold(Rational::zero(), |acc, (x, &acc_state)| {
                if acc_state { acc + x.abs() } else { acc - x.abs() }
            });
        out.push(g);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{member, Alphabet, MembershipMode, Word};
    use crate::matrix::Matrix;
    use crate::rational::{integer, rational};

    fn q(n: i64) -> Rational {
        integer(n)
    }

    #[test]
    fn constant_gap_under_identity() {
        let a = Afa::new(Alphabet::unary(), vec![q(2), q(-1)], vec![Matrix::identity(2)], vec![true, false]).unwrap();
        assert!(g_sequence(&a, 10).unwrap().iter().all(|g| g == &q(1)));
    }

    #[test]
    fn all_accepting_is_the_norm() {
        let m = Matrix::from_columns(vec![vec![q(2), q(-1)], vec![q(-1), q(2)]]).unwrap();
        let a = Afa::new(Alphabet::unary(), vec![q(1), q(0)], vec![m], vec![true, true]).unwrap();
        let g = g_sequence(&a, 12).unwrap();
        for (n, gn) in g.iter().enumerate() {
            assert!(gn.is_positive());
            assert_eq!(gn, &crate::automata::l1_norm(&a.state(&Word::unary(n)).unwrap()));
        }
    }

    #[test]
    fn sign_tracks_strict_membership() {
        let m = Matrix::from_columns(vec![
            vec![rational(1, 2), rational(3, 2), q(-1)],
            vec![q(-2), q(1), q(2)],
            vec![q(1), rational(-1, 3), rational(1, 3)],
        ])
        .unwrap();
        let a = Afa::new(Alphabet::unary(), vec![q(1), q(1), q(-1)], vec![m], vec![true, false, false]).unwrap();
        let mode = MembershipMode::strict(rational(1, 2)).unwrap();
        for (n, g) in g_sequence(&a, 50).unwrap().iter().enumerate() {
            assert_eq!(g.is_positive(), member(&a, &Word::unary(n), &mode).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn rejects_non_unary() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let a = Afa::new(ab, vec![q(1)], vec![Matrix::identity(1), Matrix::identity(1)], vec![true]).unwrap();
        assert_eq!(g_sequence(&a, 3), Err(LabError::NotUnary(2)));
    }
}
