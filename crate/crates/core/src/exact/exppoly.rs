use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::combinatorics::factorial;
use super::rational::{rpow, to_f64, Rational};
use crate::error::{Error, Result};

/// One term `coeff · t^power · e^{-rate·t}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub power: u32,
    pub rate: Rational,
}

/// Exact finite sum `Σ c_j t^{m_j} e^{-r_j t}` with rational data.
///
/// Terms are keyed on `(rate, power)` and merged only on exact equality;
/// zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ExpPolynomial {
    terms: BTreeMap<(Rational, u32), Rational>,
}

impl ExpPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, 0, Rational::zero())
    }

    pub fn term(coeff: Rational, power: u32, rate: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, power, rate);
        p
    }

    /// `e^{-rate·t}`
    pub fn exp(rate: Rational) -> Self {
        Self::term(Rational::one(), 0, rate)
    }

    fn add_term(&mut self, coeff: Rational, power: u32, rate: Rational) {
        if coeff.is_zero() {
            return;
        }
        let key = (rate, power);
        let merged = match self.terms.remove(&key) {
            Some(existing) => existing + coeff,
            None => coeff,
        };
        if !merged.is_zero() {
            self.terms.insert(key, merged);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms.iter().map(|((rate, power), coeff)| Term {
            coeff: coeff.clone(),
            power: *power,
            rate: rate.clone(),
        })
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        ExpPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c * factor))
                .collect(),
        }
    }

    /// Multiplies by `t^power`.
    pub fn times_t_pow(&self, power: u32) -> Self {
        ExpPolynomial {
            terms: self
                .terms
                .iter()
                .map(|((r, m), c)| ((r.clone(), m + power), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::constant(Rational::one());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for ((rate, power), coeff) in &self.terms {
            if *power > 0 {
                out.add_term(coeff * Rational::from_integer(BigInt::from(*power)), power - 1, rate.clone());
            }
            out.add_term(-(coeff * rate), *power, rate.clone());
        }
        out
    }

    /// Exact value of `f(0)`.
    pub fn value_at_zero(&self) -> Rational {
        self.terms
            .iter()
            .filter(|((_, m), _)| *m == 0)
            .fold(Rational::zero(), |acc, (_, c)| acc + c)
    }

    /// Floating-point evaluation of `f(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|((rate, power), coeff)| {
                let base = to_f64(coeff) * (-to_f64(rate) * t).exp();
                if *power == 0 {
                    base
                } else {
                    base * t.powi(*power as i32)
                }
            })
            .sum()
    }

    fn check_decaying(&self) -> Result<()> {
        for (rate, power) in self.terms.keys() {
            if !rate.is_positive() {
                return Err(Error::Divergent {
                    power: *power,
                    rate: rate.to_string(),
                });
            }
        }
        Ok(())
    }

    /// `∫₀^∞ f(t) dt`, using `∫ t^m e^{-rt} = m!/r^{m+1}`.
    pub fn integral_to_inf(&self) -> Result<Rational> {
        self.check_decaying()?;
        Ok(self
            .terms
            .iter()
            .fold(Rational::zero(), |acc, ((rate, power), coeff)| {
                acc + coeff * Rational::from_integer(factorial(*power)) / rpow(rate, power + 1)
            }))
    }

    /// `∫₀^∞ t^j f(t) dt`.
    pub fn moment(&self, j: u32) -> Result<Rational> {
        self.times_t_pow(j).integral_to_inf()
    }

    /// `x ↦ ∫_x^∞ f(t) dt` as a new exponential polynomial in `x`.
    pub fn tail_integral(&self) -> Result<Self> {
        self.check_decaying()?;
        let mut out = Self::zero();
        for ((rate, power), coeff) in &self.terms {
            // ∫_x^∞ t^m e^{-rt} dt = e^{-rx} Σ_j m!/j! · x^j / r^{m-j+1}
            let m_fact = factorial(*power);
            for j in 0..=*power {
                let c = coeff * Rational::from_integer(&m_fact / factorial(j)) / rpow(rate, power - j + 1);
                out.add_term(c, j, rate.clone());
            }
        }
        Ok(out)
    }

    /// `x ↦ ∫₀^x f(t) dt`; constant (rate-zero) terms integrate to powers of `x`.
    pub fn integral_from_zero(&self) -> Self {
        let mut out = Self::zero();
        for ((rate, power), coeff) in &self.terms {
            if rate.is_zero() {
                out.add_term(
                    coeff / Rational::from_integer(BigInt::from(power + 1)),
                    power + 1,
                    rate.clone(),
                );
                continue;
            }
            // ∫₀^x = m!/r^{m+1} − ∫_x^∞ (the identity holds for any r ≠ 0)
            let m_fact = factorial(*power);
            let total = coeff * Rational::from_integer(m_fact.clone()) / rpow(rate, power + 1);
            out.add_term(total, 0, Rational::zero());
            for j in 0..=*power {
                let c = coeff * Rational::from_integer(&m_fact / factorial(j)) / rpow(rate, power - j + 1);
                out.add_term(-c, j, rate.clone());
            }
        }
        out
    }

    /// Antiderivative selected by `bound`.
    pub fn antiderivative(&self, bound: Bound) -> Result<Self> {
        match bound {
            Bound::ToInfinity => self.tail_integral(),
            Bound::FromZero => Ok(self.integral_from_zero()),
        }
    }
}

/// Which definite antiderivative [`ExpPolynomial::antiderivative`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// `∫_x^∞ f`
    ToInfinity,
    /// `∫_0^x f`
    FromZero,
}

impl fmt::Debug for ExpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((rate, power), coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({coeff})")?;
            if *power > 0 {
                write!(f, "·t^{power}")?;
            }
            if !rate.is_zero() {
                write!(f, "·e^(-{rate}·t)")?;
            }
        }
        Ok(())
    }
}

impl Add for &ExpPolynomial {
    type Output = ExpPolynomial;
    fn add(self, rhs: &ExpPolynomial) -> ExpPolynomial {
        let mut out = self.clone();
        for ((rate, power), coeff) in &rhs.terms {
            out.add_term(coeff.clone(), *power, rate.clone());
        }
        out
    }
}

impl Sub for &ExpPolynomial {
    type Output = ExpPolynomial;
    fn sub(self, rhs: &ExpPolynomial) -> ExpPolynomial {
        let mut out = self.clone();
        for ((rate, power), coeff) in &rhs.terms {
            out.add_term(-coeff.clone(), *power, rate.clone());
        }
        out
    }
}

impl Neg for &ExpPolynomial {
    type Output = ExpPolynomial;
    fn neg(self) -> ExpPolynomial {
        self.scale(&-Rational::one())
    }
}

impl Mul for &ExpPolynomial {
    type Output = ExpPolynomial;
    fn mul(self, rhs: &ExpPolynomial) -> ExpPolynomial {
        let mut out = ExpPolynomial::zero();
        for ((ra, ma), ca) in &self.terms {
            for ((rb, mb), cb) in &rhs.terms {
                out.add_term(ca * cb, ma + mb, ra + rb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ExpPolynomial {
            type Output = ExpPolynomial;
            fn $m(self, rhs: ExpPolynomial) -> ExpPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::quadrature;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    /// g(t) for rational γ, Γ.
    fn g_of(gamma: Rational, filter: Rational) -> ExpPolynomial {
        let plus = &gamma + &filter;
        let a = ExpPolynomial::term(Rational::one() / &gamma, 0, gamma.clone());
        let b = ExpPolynomial::term(Rational::one() / &filter, 0, filter.clone());
        let c = ExpPolynomial::term(r(-4, 1) / &plus, 0, plus / r(2, 1));
        &(&a + &b) + &c
    }

    #[test]
    fn integral_examples() {
        assert_eq!(ExpPolynomial::exp(r(1, 1)).integral_to_inf().unwrap(), r(1, 1));
        assert_eq!(
            ExpPolynomial::term(r(1, 1), 2, r(2, 1)).integral_to_inf().unwrap(),
            r(1, 4)
        );
        // ∫g with γ=1, Γ=2: 1/1 + 1/4 − (4/3)(2/3) = 1/36 · (36 + 9 − 32)
        let g = g_of(r(1, 1), r(2, 1));
        let exact = g.integral_to_inf().unwrap();
        assert_eq!(exact, r(13, 36));
        let numeric = quadrature::integrate_to_inf(|t| g.eval(t), 1e-13).unwrap();
        assert!((numeric - to_f64(&exact)).abs() < 1e-12);
    }

    #[test]
    fn divergence_is_reported() {
        let f = ExpPolynomial::constant(r(1, 1));
        assert!(matches!(f.integral_to_inf(), Err(Error::Divergent { .. })));
        assert!(f.tail_integral().is_err());
        let zero_coeff = &f - &f;
        assert_eq!(zero_coeff.integral_to_inf().unwrap(), r(0, 1));
    }

    #[test]
    fn antiderivative_examples() {
        let e = ExpPolynomial::exp(r(1, 1));
        assert_eq!(e.antiderivative(Bound::ToInfinity).unwrap(), e);

        // ∫_x^∞ g'(t) dt = −g(x)
        let g = g_of(r(1, 1), r(3, 1));
        let tail = g.derivative().antiderivative(Bound::ToInfinity).unwrap();
        assert_eq!(tail, -&g);

        // ∫_0^x t e^{-t} dt = 1 − (1+x) e^{-x}
        let f = ExpPolynomial::term(r(1, 1), 1, r(1, 1));
        let expected = &(&ExpPolynomial::constant(r(1, 1)) - &ExpPolynomial::exp(r(1, 1)))
            - &ExpPolynomial::term(r(1, 1), 1, r(1, 1));
        assert_eq!(f.antiderivative(Bound::FromZero).unwrap(), expected);
    }

    #[test]
    fn merges_only_identical_keys() {
        let a = ExpPolynomial::term(r(1, 1), 1, r(1, 2));
        let b = ExpPolynomial::term(r(2, 1), 1, r(1, 2));
        let c = ExpPolynomial::term(r(2, 1), 0, r(1, 2));
        assert_eq!((&a + &b).len(), 1);
        assert_eq!((&a + &c).len(), 2);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn derivative_of_tail_is_negated_integrand() {
        let f = &ExpPolynomial::term(r(3, 2), 2, r(5, 3)) + &ExpPolynomial::term(r(-1, 4), 0, r(1, 1));
        let tail = f.tail_integral().unwrap();
        assert_eq!(tail.derivative(), -&f);
        let head = f.integral_from_zero();
        assert_eq!(head.derivative(), f);
        assert_eq!(head.value_at_zero(), r(0, 1));
    }

    fn small_poly() -> impl Strategy<Value = ExpPolynomial> {
        prop::collection::vec((-6i64..=6, 0u32..3, 1i64..=6, 1i64..=3), 1..4).prop_map(|terms| {
            terms.into_iter().fold(ExpPolynomial::zero(), |acc, (c, m, rn, rd)| {
                &acc + &ExpPolynomial::term(ratio(c, 1), m, ratio(rn, rd))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn integral_is_linear(f in small_poly(), h in small_poly()) {
            let lhs = (&f + &h).integral_to_inf().unwrap();
            let rhs = f.integral_to_inf().unwrap() + h.integral_to_inf().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn product_integral_matches_quadrature(f in small_poly(), h in small_poly()) {
            let prod = &f * &h;
            let exact = to_f64(&prod.integral_to_inf().unwrap());
            let numeric = quadrature::integrate_to_inf(|t| prod.eval(t), 1e-13).unwrap();
            let scale = exact.abs().max(
                quadrature::integrate_to_inf(|t| prod.eval(t).abs(), 1e-10).unwrap(),
            );
            prop_assert!((numeric - exact).abs() <= 1e-10 * scale.max(1e-300),
                "exact {} numeric {}", exact, numeric);
        }
    }
}
