//! Purities and moments: the closed hypergeometric forms, the diagonal
//! sum, and the mean photon number.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::fock::DiagonalFockState;
use crate::params::{StateSpec, Variant, M_MAX};

/// Largest tail mass accepted by the moment/purity sums.
pub const TAIL_LIMIT: f64 = 1e-10;

/// Closed-form purity next to its diagonal-sum cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PurityResult {
    pub analytic: f64,
    pub numeric: f64,
    pub residual: f64,
}

/// Terminating Gauss hypergeometric function
/// `2F1(-m, -m; 1; z) = sum_{j=0}^{m} C(m,j)^2 z^j`,
/// a degree-`m` polynomial evaluated by compensated summation. Valid for
/// any real `z`, including the `z > 1` arguments the purities need.
pub fn hyp2f1_terminating(m: u32, z: f64) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut zj = 1.0f64;
    for j in 0..=m {
        let c = binomial(m, j);
        let term = c * c * zj;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        zj *= z;
    }
    sum
}

// Exact in u128 for m <= 60 (C(60,30) ~ 1.2e17).
pub(crate) fn binomial(m: u32, j: u32) -> f64 {
    let j = j.min(m - j) as u128;
    let m = m as u128;
    let mut acc: u128 = 1;
    for i in 1..=j {
        acc = acc * (m - j + i) / i;
    }
    acc as f64
}

/// Closed-form purity per the hypergeometric expressions: the added
/// state uses argument `((Nbar+1)/Nbar)^2`, the subtracted one
/// `(Nbar/(Nbar+1))^2`; `m = 0` reduces to `1/(2 Nbar + 1)`. Evaluated
/// term by term in log space so large `m` and `Nbar` cannot overflow.
pub fn purity_analytic(spec: &StateSpec) -> Result<f64> {
    if spec.m > M_MAX {
        return Err(Error::InvalidParams(format!(
            "m = {} exceeds the supported maximum {M_MAX}",
            spec.m
        )));
    }
    let amp = spec.amplified()?;
    let nb = amp.nbar_amp;
    let m = spec.m;
    if m == 0 {
        return Ok(1.0 / (2.0 * nb + 1.0));
    }
    if nb == 0.0 {
        return match spec.variant {
            // Adding m photons to the vacuum gives the pure Fock state.
            Variant::Added => Ok(1.0),
            Variant::Subtracted => Err(Error::SubtractionFromVacuum { m }),
        };
    }
    let mf = f64::from(m);
    let ln_n = nb.ln();
    let ln_n1 = (nb + 1.0).ln();
    let ln_2n1 = (2.0 * nb + 1.0).ln();
    // ln prefactor + logsumexp of the polynomial terms.
    let (ln_pref, ln_z) = match spec.variant {
        Variant::Added => (2.0 * mf * ln_n, 2.0 * (ln_n1 - ln_n)),
        Variant::Subtracted => (2.0 * mf * ln_n1, 2.0 * (ln_n - ln_n1)),
    };
    let ln_pref = ln_pref - (2.0 * mf + 1.0) * ln_2n1;
    let ln_mf = ln_gamma(mf + 1.0);
    let mut max = f64::NEG_INFINITY;
    let mut ln_terms = Vec::with_capacity(m as usize + 1);
    for j in 0..=m {
        let jf = f64::from(j);
        let ln_c = ln_mf - ln_gamma(jf + 1.0) - ln_gamma(mf - jf + 1.0);
        let lt = 2.0 * ln_c + jf * ln_z;
        max = max.max(lt);
        ln_terms.push(lt);
    }
    let sum: f64 = ln_terms.iter().map(|t| (t - max).exp()).sum();
    Ok((ln_pref + max + sum.ln()).exp())
}

/// Purity as the sum of squared diagonal weights.
pub fn purity_numeric(state: &DiagonalFockState) -> Result<f64> {
    check_tail(state)?;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for w in state.weights() {
        let term = w * w;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}

/// Mean photon number of a truncated state.
pub fn mean_photon_number(state: &DiagonalFockState) -> Result<f64> {
    check_tail(state)?;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for (k, w) in state.weights().iter().enumerate() {
        let term = k as f64 * w;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}

fn check_tail(state: &DiagonalFockState) -> Result<()> {
    if state.tail_mass() > TAIL_LIMIT {
        return Err(Error::TailTooLarge {
            tail_mass: state.tail_mass(),
            limit: TAIL_LIMIT,
        });
    }
    Ok(())
}

/// Convenience: analytic purity, numeric purity from a freshly built
/// truncated state, and their residual.
pub fn purity_report(spec: &StateSpec, tail_eps: f64) -> Result<PurityResult> {
    let analytic = purity_analytic(spec)?;
    let state = crate::fock::build_state(spec, tail_eps)?;
    let numeric = purity_numeric(&state)?;
    Ok(PurityResult {
        analytic,
        numeric,
        residual: (analytic - numeric).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build_state;
    use crate::params::ModelParams;
    use approx::assert_relative_eq;

    fn spec(nbar: f64, gain: f64, m: u32, variant: Variant) -> StateSpec {
        StateSpec::new(ModelParams::new(nbar, gain).unwrap(), m, variant).unwrap()
    }

    #[test]
    fn hyp2f1_basics() {
        assert_eq!(hyp2f1_terminating(0, 7.3), 1.0);
        assert_relative_eq!(hyp2f1_terminating(1, 2.5), 3.5, max_relative = 1e-15);
        // Central binomial identity: 2F1(-m,-m;1;1) = C(2m, m).
        assert_relative_eq!(hyp2f1_terminating(3, 1.0), 20.0, max_relative = 1e-15);
        assert_relative_eq!(hyp2f1_terminating(10, 1.0), 184_756.0, max_relative = 1e-14);
    }

    #[test]
    fn thermal_purity() {
        let s = spec(1.5, 1.0, 0, Variant::Added);
        assert_relative_eq!(purity_analytic(&s).unwrap(), 0.25, max_relative = 1e-14);
        let s = spec(1.5, 1.2, 0, Variant::Added);
        assert_relative_eq!(
            purity_analytic(&s).unwrap(),
            0.07296137339055797,
            max_relative = 1e-13
        );
    }

    #[test]
    fn m1_purity_closed_form() {
        // (Nbar^2 + (Nbar+1)^2) / (2 Nbar + 1)^3, same for both variants.
        let nb = 6.352941176470585f64;
        let want = (nb * nb + (nb + 1.0) * (nb + 1.0)) / (2.0 * nb + 1.0).powi(3);
        for variant in [Variant::Added, Variant::Subtracted] {
            let s = spec(1.5, 1.2, 1, variant);
            assert_relative_eq!(purity_analytic(&s).unwrap(), want, max_relative = 1e-13);
        }
    }

    #[test]
    fn numeric_matches_geometric_sum() {
        // Thermal nbar = 1.5: sum (0.4 * 0.6^k)^2 = 0.16/(1 - 0.36) = 0.25.
        let st = build_state(&spec(1.5, 1.0, 0, Variant::Added), 1e-14).unwrap();
        assert!((purity_numeric(&st).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn analytic_vs_numeric() {
        for variant in [Variant::Added, Variant::Subtracted] {
            for m in [0u32, 1, 3, 5] {
                let s = spec(1.5, 1.2, m, variant);
                let r = purity_report(&s, 1e-14).unwrap();
                assert!(
                    r.residual <= 1e-9,
                    "m={m} {variant:?}: residual {}",
                    r.residual
                );
            }
        }
    }

    #[test]
    fn vacuum_is_pure() {
        let st = build_state(&spec(0.0, 1.3, 0, Variant::Added), 1e-14).unwrap();
        assert_eq!(purity_numeric(&st).unwrap(), 1.0);
        assert_eq!(
            purity_analytic(&spec(0.0, 1.3, 2, Variant::Added)).unwrap(),
            1.0
        );
    }

    #[test]
    fn mean_photon_numbers() {
        let st = build_state(&spec(1.5, 1.0, 0, Variant::Added), 1e-14).unwrap();
        assert!((mean_photon_number(&st).unwrap() - 1.5).abs() < 1e-10);
        let st = build_state(&spec(1.5, 1.2, 0, Variant::Added), 1e-14).unwrap();
        assert!((mean_photon_number(&st).unwrap() - 6.352941176470585).abs() < 1e-8);
    }

    #[test]
    fn mean_shift_between_variants() {
        for m in [1u32, 3, 5] {
            let add = build_state(&spec(1.5, 1.2, m, Variant::Added), 1e-14).unwrap();
            let sub = build_state(&spec(1.5, 1.2, m, Variant::Subtracted), 1e-14).unwrap();
            let diff = mean_photon_number(&add).unwrap() - mean_photon_number(&sub).unwrap();
            assert!(
                (diff - f64::from(m)).abs() < 1e-10 * f64::from(m),
                "m={m}: diff {diff}"
            );
        }
    }

    #[test]
    fn tail_gate() {
        let st = DiagonalFockState::new(vec![0.9], 0.1).unwrap();
        assert!(matches!(
            purity_numeric(&st),
            Err(Error::TailTooLarge { .. })
        ));
        assert!(matches!(
            mean_photon_number(&st),
            Err(Error::TailTooLarge { .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn purity_identity_between_variants(
                nbar in 1e-2f64..5.0,
                t in 0.01f64..0.95,
                m in 1u32..=10,
            ) {
                let gc = ((nbar + 1.0) / nbar).sqrt();
                let gain = 0.8 + t * (gc - 0.8);
                let a = purity_analytic(&spec(nbar, gain, m, Variant::Added)).unwrap();
                let b = purity_analytic(&spec(nbar, gain, m, Variant::Subtracted)).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * a);
            }

            #[test]
            fn purity_decreases_with_m(
                nbar in 1e-2f64..5.0,
                t in 0.01f64..0.9,
                m in 0u32..10,
            ) {
                let gc = ((nbar + 1.0) / nbar).sqrt();
                let gain = 0.8 + t * (gc - 0.8);
                let p1 = purity_analytic(&spec(nbar, gain, m, Variant::Added)).unwrap();
                let p2 = purity_analytic(&spec(nbar, gain, m + 1, Variant::Added)).unwrap();
                prop_assert!(p2 < p1);
                prop_assert!(p2 > 0.0 && p1 <= 1.0);
            }
        }
    }
}
