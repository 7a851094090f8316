//! Harmonic-number closed forms of the unfiltered moments, in units where
//! `γ_a = 1` (divide by `γ_a^j` for the j-th moment).

use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::exact::{binomial, harmonic, Rational};

fn check(n: u32, k: u32) -> Result<()> {
    if k == 0 || k > n {
        return invalid(format!("photon index must lie in 1..={n}, got {k}"));
    }
    Ok(())
}

/// `⟨t_k^{(N)}⟩ = H_N − H_{N−k}`.
pub fn unfiltered_mean(n: u32, k: u32) -> Result<Rational> {
    check(n, k)?;
    Ok(harmonic(n, 1) - harmonic(n - k, 1))
}

/// `σ² = H_{N,2} − H_{N−k,2}`.
pub fn unfiltered_variance(n: u32, k: u32) -> Result<Rational> {
    check(n, k)?;
    Ok(harmonic(n, 2) - harmonic(n - k, 2))
}

/// Second moment, `mean² + σ²`.
pub fn unfiltered_second(n: u32, k: u32) -> Result<Rational> {
    let mean = unfiltered_mean(n, k)?;
    Ok(&mean * &mean + unfiltered_variance(n, k)?)
}

pub fn unfiltered_std(n: u32, k: u32) -> Result<f64> {
    Ok(crate::exact::to_f64(&unfiltered_variance(n, k)?).sqrt())
}

/// `⟨t₁ t_N⟩ = H_N/N + 1/N²`.
pub fn unfiltered_cross(n: u32) -> Result<Rational> {
    if n < 2 {
        return invalid("cross moment needs at least two photons");
    }
    let nn = Rational::from_integer(n.into());
    Ok(harmonic(n, 1) / &nn + Rational::one() / (&nn * &nn))
}

/// `k C(N,k) Σ_l (−1)^{k−1−l} C(k−1,l) j!/(N−l)^{j+1}`, the direct
/// integral of the unfiltered marginal.
pub fn unfiltered_moment_alternating(n: u32, k: u32, order: u32) -> Result<Rational> {
    check(n, k)?;
    let mut sum = Rational::zero();
    for l in 0..k {
        let base = Rational::from_integer((n - l).into());
        let term = Rational::from_integer(binomial(k - 1, l))
            / crate::exact::rpow(&base, order + 1);
        if (k - 1 - l) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let front = binomial(n, k) * k * crate::exact::factorial(order);
    Ok(sum * Rational::from_integer(front))
}

/// Mean and variance of the bundle length `t_N − t₁`: `H_{N−1}` and
/// `H_{N−1,2}`.
pub fn unfiltered_length(n: u32) -> Result<(Rational, Rational)> {
    if n < 2 {
        return invalid("bundle length needs at least two photons");
    }
    Ok((harmonic(n - 1, 1), harmonic(n - 1, 2)))
}

/// Coefficients of the small- and large-Γ asymptotes of the mean bundle
/// length, in units of `1/Γ` and `1/γ_a`.
pub fn length_asymptotes(n: u32) -> Result<(Rational, Rational)> {
    if n < 2 {
        return invalid("bundle length needs at least two photons");
    }
    let h = harmonic(n - 1, 1);
    Ok((h.clone(), h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use proptest::prelude::*;

    #[test]
    fn table_examples() {
        assert_eq!(unfiltered_mean(5, 3).unwrap(), ratio(47, 60));
        assert_eq!(unfiltered_mean(4, 4).unwrap(), ratio(25, 12));
        assert_eq!(unfiltered_cross(2).unwrap(), ratio(1, 1));
        assert!(unfiltered_mean(3, 0).is_err());
        assert!(unfiltered_mean(3, 4).is_err());
    }

    #[test]
    fn bundle_length_values() {
        let stds: Vec<Rational> = (2..=5).map(|n| unfiltered_length(n).unwrap().1).collect();
        assert_eq!(stds, vec![ratio(1, 1), ratio(5, 4), ratio(49, 36), ratio(205, 144)]);
        assert_eq!(length_asymptotes(5).unwrap(), (ratio(25, 12), ratio(25, 12)));
        assert_eq!(length_asymptotes(2).unwrap(), (ratio(1, 1), ratio(1, 1)));
    }

    proptest! {
        #[test]
        fn spacing_is_inverse_remaining_count(n in 2u32..=10, k in 1u32..10) {
            prop_assume!(k < n);
            let gap = unfiltered_mean(n, k + 1).unwrap() - unfiltered_mean(n, k).unwrap();
            prop_assert_eq!(gap, ratio(1, (n - k) as i64));
        }

        #[test]
        fn alternating_forms_match_harmonic_forms(n in 1u32..=10, k in 1u32..=10) {
            prop_assume!(k <= n);
            prop_assert_eq!(unfiltered_moment_alternating(n, k, 1).unwrap(), unfiltered_mean(n, k).unwrap());
            prop_assert_eq!(unfiltered_moment_alternating(n, k, 2).unwrap(), unfiltered_second(n, k).unwrap());
        }
    }
}
