//! Model parameters: the pair `(nu, m)` with its admissibility rules and the derived
//! spectral constants every other module consumes.

use crate::{Error, Result};

/// Guard band below which `nu - 1/2` is treated as degenerate.
const NU_GUARD: f64 = 1e-12;

/// Validated parameter pair `(nu, m)` with its derived spectral data.
///
/// Immutable value type; construct through [`ModelParams::new`]. The derived fields
/// are `beta = 2 nu` (weight exponent), `alpha = 2 (nu - m) - 1` (Laguerre/Jacobi
/// parameter, strictly positive for admissible levels) and
/// `epsilon = 4 m (2 nu - m - 1)` (the level eigenvalue).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    nu: f64,
    m: usize,
    beta: f64,
    alpha: f64,
    epsilon: f64,
}

impl ModelParams {
    /// Validates `(nu, m)` and derives the spectral constants.
    ///
    /// Rejects `nu <= 1/2` (no discrete levels exist) and `m >= nu - 1/2`
    /// (the level does not exist; the bound is strict).
    pub fn new(nu: f64, m: usize) -> Result<Self> {
        if !nu.is_finite() || nu <= 0.5 + NU_GUARD {
            return Err(Error::NuOutOfRange(nu));
        }
        let mf = m as f64;
        let bound = nu - 0.5;
        if mf >= bound {
            return Err(Error::LevelOutOfRange { m, bound });
        }
        Ok(Self {
            nu,
            m,
            beta: 2.0 * nu,
            alpha: 2.0 * (nu - mf) - 1.0,
            epsilon: 4.0 * mf * (2.0 * nu - mf - 1.0),
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Level index `m`.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn m_f64(&self) -> f64 {
        self.m as f64
    }

    /// Weight exponent `beta = 2 nu` of the measure `(1-|z|^2)^{beta-2} dA`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `alpha = 2 (nu - m) - 1 > 0`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Level eigenvalue `epsilon = 4 m (2 nu - m - 1)`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Largest admissible level index for a given `nu`: the greatest integer strictly
/// below `nu - 1/2`.
pub fn max_level(nu: f64) -> Result<usize> {
    if !nu.is_finite() || nu <= 0.5 + NU_GUARD {
        return Err(Error::NuOutOfRange(nu));
    }
    let x = nu - 0.5;
    let f = x.floor();
    let lvl = if f < x { f } else { f - 1.0 };
    Ok(lvl.max(0.0) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bottom_level_has_zero_energy() {
        let p = ModelParams::new(3.5, 0).unwrap();
        assert_eq!(p.epsilon(), 0.0);
    }

    #[test]
    fn first_level_energy() {
        // 4 * 1 * (7 - 1 - 1)
        let p = ModelParams::new(3.5, 1).unwrap();
        assert_abs_diff_eq!(p.epsilon(), 20.0);
    }

    #[test]
    fn rejects_level_out_of_range() {
        let err = ModelParams::new(3.5, 3).unwrap_err();
        assert!(err.to_string().contains("level index out of range"));
    }

    #[test]
    fn rejects_small_nu() {
        assert!(matches!(ModelParams::new(0.5, 0), Err(Error::NuOutOfRange(_))));
        assert!(ModelParams::new(f64::NAN, 0).is_err());
    }

    #[test]
    fn beta_is_exactly_twice_nu() {
        for nu in [0.7, 1.6, 3.5, 10.2, 49.9] {
            let p = ModelParams::new(nu, 0).unwrap();
            assert_eq!(p.beta(), 2.0 * nu);
        }
    }

    #[test]
    fn max_level_examples() {
        assert_eq!(max_level(3.5).unwrap(), 2);
        assert_eq!(max_level(3.2).unwrap(), 2);
        assert_eq!(max_level(0.6).unwrap(), 0);
        assert!(max_level(0.4).is_err());
    }

    #[test]
    fn max_level_is_the_last_admissible_index() {
        for nu in [0.6, 1.5, 1.7, 3.2, 3.5, 6.25, 10.2] {
            let top = max_level(nu).unwrap();
            assert!(ModelParams::new(nu, top).is_ok());
            assert!(ModelParams::new(nu, top + 1).is_err());
        }
    }

    #[test]
    fn derived_gamma_arguments_stay_positive() {
        for nu in [1.6, 3.5, 10.2] {
            for m in 0..=max_level(nu).unwrap() {
                let p = ModelParams::new(nu, m).unwrap();
                assert!(p.alpha() > 0.0);
                assert!(p.beta() - p.m_f64() > 0.0);
                for k in 0..=64 {
                    assert!(2.0 * (nu - p.m_f64()) + k as f64 > 0.0);
                }
            }
        }
    }

    #[test]
    fn epsilon_increases_on_consecutive_valid_levels() {
        for nu in [1.6, 3.5, 10.2] {
            let beta = 2.0 * nu;
            for m in 0..max_level(nu).unwrap() {
                let next = m + 1;
                if ((next) as f64) < nu - 0.5 && (next as f64) <= (beta - 1.0) / 2.0 {
                    let lo = ModelParams::new(nu, m).unwrap().epsilon();
                    let hi = ModelParams::new(nu, next).unwrap().epsilon();
                    assert!(hi > lo, "epsilon not increasing at nu={nu}, m={m}");
                }
            }
        }
    }

    #[test]
    fn epsilon_nonnegative_and_zero_only_at_bottom() {
        for nu in [0.7, 1.7, 3.5, 6.25] {
            for m in 0..=max_level(nu).unwrap() {
                let p = ModelParams::new(nu, m).unwrap();
                if m == 0 {
                    assert_eq!(p.epsilon(), 0.0);
                } else {
                    assert!(p.epsilon() > 0.0);
                }
            }
        }
    }
}
