//! Integer coefficient tables of the filtered standard deviations,
//!
//! `σ_k^{(N)} = √(Σ_i α_i γ^i Γ^{μ−i}) / (c γ Γ Σ_i β_i γ^i Γ^{μ/2−1−i})`,
//!
//! recovered by exact rational reconstruction of `Γ²σ²` at `γ_a = 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::variance;
use crate::error::{Error, Result};
use crate::exact::{ratio, Rational};
use crate::rates::ExactRates;

const MAX_DEGREE: usize = 80;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StdDevCoefficients {
    /// `α_0 … α_μ`, numerator under the square root.
    pub alpha: Vec<BigInt>,
    /// `β_0 … β_{μ/2−1}`, primitive denominator polynomial.
    pub beta: Vec<BigInt>,
    /// Integer `c` in front of the denominator.
    pub prefactor: BigInt,
}

impl StdDevCoefficients {
    pub fn mu(&self) -> usize {
        self.alpha.len() - 1
    }

    /// Evaluate the tabulated form at rates `(γ, Γ)`.
    pub fn eval(&self, gamma: f64, bw: f64) -> f64 {
        let mu = self.mu() as i32;
        let num: f64 = self
            .alpha
            .iter()
            .enumerate()
            .map(|(i, a)| a.to_f64().unwrap() * gamma.powi(i as i32) * bw.powi(mu - i as i32))
            .sum();
        let half = mu / 2 - 1;
        let den: f64 = self
            .beta
            .iter()
            .enumerate()
            .map(|(i, b)| b.to_f64().unwrap() * gamma.powi(i as i32) * bw.powi(half - i as i32))
            .sum();
        num.sqrt() / (self.prefactor.to_f64().unwrap() * gamma * bw * den)
    }
}

/// Solve a square linear system over the rationals; `None` when singular.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let f = &a[row][col] * &inv;
            for c in col..n {
                let delta = &f * &a[col][c];
                a[row][c] -= delta;
            }
            let delta = &f * &b[col];
            b[row] -= delta;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn horner(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Monic square root of a monic polynomial of even degree (ascending
/// coefficients), if it exists.
fn poly_sqrt(q: &[Rational]) -> Option<Vec<Rational>> {
    let deg = q.len() - 1;
    if deg % 2 == 1 {
        return None;
    }
    let d = deg / 2;
    let mut b = vec![Rational::zero(); d + 1];
    b[d] = Rational::one();
    for i in 1..=d {
        let mut acc = q[deg - i].clone();
        for j in 1..i {
            acc -= &b[d - j] * &b[d - i + j];
        }
        b[d - i] = acc / ratio(2, 1);
    }
    let mut square = vec![Rational::zero(); deg + 1];
    for (i, x) in b.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            square[i + j] += x * y;
        }
    }
    (square == q).then_some(b)
}

fn lcm_denominators(coeffs: &[Rational]) -> BigInt {
    coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

fn gcd_numerators(coeffs: &[Rational]) -> BigInt {
    coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
}

/// Smallest `c > 0` with `c²·m` a perfect square multiple of `m`.
fn square_cover(m: &BigInt) -> BigInt {
    let mut rest = m.abs();
    let mut c = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        c *= p.pow(e.div_ceil(2));
        p += 1;
    }
    c * rest
}

fn to_integers(coeffs: &[Rational]) -> Vec<BigInt> {
    coeffs.iter().map(|c| c.numer().clone()).collect()
}

fn extend_samples(samples: &mut Vec<(Rational, Rational)>, count: usize, n: u32, k: u32) -> Result<()> {
    while samples.len() < count {
        let x = Rational::from_integer(BigInt::from(samples.len() + 1));
        let r = ExactRates::filtered(Rational::one(), x.clone())?;
        let v = variance(&r, n, k)? * &x * &x;
        samples.push((x, v));
    }
    Ok(())
}

/// Reconstruct the coefficient table of `σ_k^{(N)}`.
pub fn std_dev_coefficients(n: u32, k: u32) -> Result<StdDevCoefficients> {
    let mut samples: Vec<(Rational, Rational)> = Vec::new();
    // Γ²σ² = A(Γ)/Q(Γ), deg A = μ, Q monic of degree μ−2
    for mu in (2..=MAX_DEGREE).step_by(2) {
        let unknowns = 2 * mu - 1;
        extend_samples(&mut samples, unknowns + 3, n, k)?;
        let qd = mu - 2;
        let mut rows = Vec::with_capacity(unknowns);
        let mut rhs = Vec::with_capacity(unknowns);
        for (x, v) in samples.iter().take(unknowns) {
            let mut row = Vec::with_capacity(unknowns);
            let mut p = Rational::one();
            for _ in 0..=mu {
                row.push(p.clone());
                p *= x;
            }
            let mut p = Rational::one();
            for _ in 0..qd {
                row.push(-(v * &p));
                p *= x;
            }
            rows.push(row);
            rhs.push(v * crate::exact::rpow(x, qd as u32));
        }
        let Some(sol) = solve(rows, rhs) else {
            continue;
        };
        let a: Vec<Rational> = sol[..=mu].to_vec();
        let mut q: Vec<Rational> = sol[mu + 1..].to_vec();
        q.push(Rational::one());
        let fits = samples[unknowns..]
            .iter()
            .all(|(x, v)| horner(&a, x) == v * horner(&q, x));
        if !fits || a[mu].is_zero() {
            continue;
        }
        let b = poly_sqrt(&q).ok_or_else(|| {
            Error::Inconsistent("variance denominator is not a perfect square".into())
        })?;
        // B = B₀/λ with B₀ primitive and integral
        let lambda = Rational::from_integer(lcm_denominators(&b))
            / Rational::from_integer(gcd_numerators(
                &b.iter()
                    .map(|c| c * Rational::from_integer(lcm_denominators(&b)))
                    .collect::<Vec<_>>(),
            ));
        let b0: Vec<Rational> = b.iter().map(|c| c * &lambda).collect();
        let scaled: Vec<Rational> = a.iter().map(|c| c * &lambda * &lambda).collect();
        let c = square_cover(&lcm_denominators(&scaled));
        let c2 = Rational::from_integer(&c * &c);
        let alpha: Vec<Rational> = scaled.iter().map(|x| x * &c2).collect();
        // ascending in Γ at γ = 1, i.e. α_μ … α_0; the tables list α_0 first
        let mut alpha = to_integers(&alpha);
        alpha.reverse();
        let mut beta = to_integers(&b0);
        beta.reverse();
        return Ok(StdDevCoefficients {
            alpha,
            beta,
            prefactor: c,
        });
    }
    Err(Error::Inconsistent(format!(
        "no rational form of degree ≤ {MAX_DEGREE} found for σ_{k}^({n})"
    )))
}
