use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `(Σ parts)! / Π parts_i!`
pub fn multinomial(parts: &[u32]) -> BigInt {
    let mut total = 0u32;
    let mut acc = BigInt::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p);
    }
    acc
}

/// Harmonic number `H_{n}` (order 1) or generalized `H_{n,order}`; `H_0 = 0`.
pub fn harmonic(n: u32, order: u32) -> Rational {
    (1..=n).fold(Rational::zero(), |acc, k| {
        acc + Rational::new(BigInt::one(), BigInt::from(k).pow(order))
    })
}

/// Terminating Gauss series `₂F₁(1, b; c; x)` for integer `b ≤ 0`, `c ≥ 1`.
///
/// With `a = 1` the Pochhammer `(1)_j` cancels `j!`, so the j-th term is
/// `(b)_j / (c)_j · x^j`.
pub fn hyp2f1_terminating(b: i64, c: i64, x: &Rational) -> Result<Rational> {
    if c <= 0 {
        return Err(Error::HypergeometricPole(c));
    }
    if b > 0 {
        return Err(Error::InvalidArgument(format!(
            "b = {b} does not terminate the series"
        )));
    }
    let mut term = Rational::one();
    let mut sum = Rational::one();
    for j in 0..(-b) {
        term = term * Rational::from_integer(BigInt::from(b + j)) * x
            / Rational::from_integer(BigInt::from(c + j));
        sum += &term;
    }
    Ok(sum)
}

/// All compositions of `total` into `parts` nonnegative integers, in
/// lexicographic order of the part vector.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
    total: u32,
}

impl Compositions {
    pub fn new(total: u32, parts: usize) -> Self {
        let current = match parts {
            0 if total == 0 => Some(Vec::new()),
            0 => None,
            _ => {
                let mut v = vec![0; parts];
                v[parts - 1] = total;
                Some(v)
            }
        };
        Compositions { current, total }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.clone()?;
        let parts = out.len();
        // The successor increments the rightmost position that still has
        // mass to its right, then pushes the remaining mass to the last slot.
        let mut next = out.clone();
        let mut advanced = false;
        if parts >= 2 {
            let mut i = parts - 1;
            while i > 0 {
                i -= 1;
                let tail: u32 = next[i + 1..].iter().sum();
                if tail > 0 {
                    next[i] += 1;
                    let used: u32 = next[..=i].iter().sum();
                    for slot in next[i + 1..].iter_mut() {
                        *slot = 0;
                    }
                    next[parts - 1] = self.total - used;
                    advanced = true;
                    break;
                }
            }
        }
        self.current = advanced.then_some(next);
        Some(out)
    }
}
