//! Exact arithmetic: arbitrary-precision rationals, combinatorics and the
//! exponential-polynomial algebra used by every closed-form evaluation.

mod combinatorics;
mod exppoly;
mod rational;

pub use combinatorics::{
    binomial, factorial, harmonic, hyp2f1_terminating, multinomial, Compositions,
};
pub use exppoly::{Bound, ExpPolynomial, Term};
pub use rational::{parse_rational, rational_from_f64, ratio, to_f64, Rational};
pub(crate) use rational::rpow;
