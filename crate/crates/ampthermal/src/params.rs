//! Input parameters, the amplification map `nbar -> Nbar`, physicality
//! classification, and normalization constants.
//!
//! The noiseless amplifier `g^n` maps a thermal state with mean photon
//! number `nbar` to another thermal state with mean photon number
//! `Nbar = N0 g^2 nbar`, `N0 = 1/(1 - nbar (g^2 - 1))`, provided the
//! convergence ratio `g^2 nbar / (nbar + 1)` stays below 1.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Guard band on the convergence ratio around the critical boundary.
/// Inside the band `Nbar` loses all precision, so computation is refused.
pub const GUARD_DELTA: f64 = 1e-9;

/// Largest supported photon addition/subtraction count.
pub const M_MAX: u32 = 60;

/// Thermal mean photon number `nbar >= 0` and amplifier gain `g > 0`.
///
/// Gains in `(0, 1)` (noiseless attenuation) are accepted; the closed
/// forms stay convergent there and produce `Nbar < nbar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub nbar: f64,
    pub gain: f64,
}

impl ModelParams {
    pub fn new(nbar: f64, gain: f64) -> Result<Self> {
        if !nbar.is_finite() || nbar < 0.0 {
            return Err(Error::InvalidParams(format!(
                "nbar must be finite and >= 0, got {nbar}"
            )));
        }
        if !gain.is_finite() || gain <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "gain must be finite and > 0, got {gain}"
            )));
        }
        Ok(Self { nbar, gain })
    }

    /// Convergence ratio `g^2 nbar / (nbar + 1)` of the amplified
    /// geometric series. Physical states require this to be `< 1`.
    pub fn convergence_ratio(&self) -> f64 {
        self.gain * self.gain * self.nbar / (self.nbar + 1.0)
    }
}

/// Normalization `N0` and amplified mean photon number `Nbar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplifiedParams {
    pub n0: f64,
    pub nbar_amp: f64,
}

/// Which non-Gaussian operation is applied to the amplified state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    Added,
    Subtracted,
}

impl Variant {
    pub fn label(&self) -> &'static str {
        match self {
            Variant::Added => "add",
            Variant::Subtracted => "sub",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// One of the four state families: thermal / amplified thermal (`m = 0`),
/// or its `m`-photon-added / subtracted variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub params: ModelParams,
    pub m: u32,
    pub variant: Variant,
}

impl StateSpec {
    pub fn new(params: ModelParams, m: u32, variant: Variant) -> Result<Self> {
        if m > M_MAX {
            return Err(Error::InvalidParams(format!(
                "m = {m} exceeds the supported maximum {M_MAX}"
            )));
        }
        // Subtracting from the vacuum annihilates the state. nbar = 0 is
        // the only input whose amplified mean photon number vanishes.
        if variant == Variant::Subtracted && m > 0 && params.nbar == 0.0 {
            return Err(Error::SubtractionFromVacuum { m });
        }
        Ok(Self { params, m, variant })
    }

    pub fn amplified(&self) -> Result<AmplifiedParams> {
        amplified_params(&self.params)
    }
}

/// Physicality of a parameter point relative to the critical boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionClass {
    Physical,
    Boundary,
    Unphysical,
}

impl std::fmt::Display for RegionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RegionClass::Physical => "physical",
            RegionClass::Boundary => "boundary",
            RegionClass::Unphysical => "unphysical",
        };
        f.write_str(s)
    }
}

/// Classifies a parameter point against the convergence condition,
/// with a `GUARD_DELTA`-wide boundary band. Never fails.
pub fn classify_region(params: &ModelParams) -> RegionClass {
    let ratio = params.convergence_ratio();
    if ratio < 1.0 - GUARD_DELTA {
        RegionClass::Physical
    } else if ratio > 1.0 + GUARD_DELTA {
        RegionClass::Unphysical
    } else {
        RegionClass::Boundary
    }
}

/// Computes `(N0, Nbar)` for a physical parameter point.
pub fn amplified_params(params: &ModelParams) -> Result<AmplifiedParams> {
    let ratio = params.convergence_ratio();
    match classify_region(params) {
        RegionClass::Physical => {}
        RegionClass::Boundary => return Err(Error::NearCritical { ratio }),
        RegionClass::Unphysical => {
            return Err(Error::UnphysicalRegime {
                ratio,
                critical_gain: ((params.nbar + 1.0) / params.nbar).sqrt(),
            })
        }
    }
    let g2 = params.gain * params.gain;
    let n0 = 1.0 / (1.0 - params.nbar * (g2 - 1.0));
    let nbar_amp = if params.gain == 1.0 {
        params.nbar
    } else {
        n0 * g2 * params.nbar
    };
    Ok(AmplifiedParams { n0, nbar_amp })
}

/// The algebraic `Nbar`, evaluated without any physicality claim.
/// Beyond the critical boundary this is negative; exactly on it,
/// infinite. Exposed for the formal branch of the region plots.
pub fn formal_nbar_amp(params: &ModelParams) -> f64 {
    let g2 = params.gain * params.gain;
    g2 * params.nbar / (1.0 - params.nbar * (g2 - 1.0))
}

/// Critical gain `g_c = sqrt((nbar+1)/nbar)` above which amplification
/// of a thermal state with mean photon number `nbar` diverges.
pub fn critical_gain(nbar: f64) -> Result<f64> {
    if !nbar.is_finite() || nbar <= 0.0 {
        return Err(Error::Domain(format!(
            "critical gain requires nbar > 0 (diverges at nbar = 0), got {nbar}"
        )));
    }
    Ok(((nbar + 1.0) / nbar).sqrt())
}

/// Critical mean photon number `nbar_c = 1/(g^2 - 1)` for a gain `g > 1`.
pub fn critical_nbar(gain: f64) -> Result<f64> {
    if !gain.is_finite() || gain <= 1.0 {
        return Err(Error::Domain(format!(
            "critical nbar requires gain > 1, got {gain}"
        )));
    }
    Ok(1.0 / (gain * gain - 1.0))
}

/// Normalization constants of the photon-varied amplified states:
/// `N_m` for the form built on the amplified thermal state, and
/// `N_m^(1)`, `N_m^(2)` for the two operator orderings acting on the
/// bare thermal input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormConstants {
    pub n_m: f64,
    pub n_m_1: f64,
    pub n_m_2: f64,
    /// Natural log of `n_m`, always finite; use when `n_m` would overflow.
    pub ln_n_m: f64,
}

/// `N_{m+} = m! (Nbar+1)^m` for addition, `N_{m-} = m! Nbar^m` for
/// subtraction, plus the ordering variants `N^(1) = g^{∓2m} N0 N_m` and
/// `N^(2) = N0 N_m`. All products are assembled in log space.
pub fn normalization_constants(spec: &StateSpec) -> Result<NormConstants> {
    let amp = spec.amplified()?;
    let m = spec.m;
    if spec.variant == Variant::Subtracted && m > 0 && amp.nbar_amp == 0.0 {
        return Err(Error::SubtractionFromVacuum { m });
    }
    let mf = f64::from(m);
    let ln_m_fact = ln_gamma(mf + 1.0);
    let (ln_base, order_sign) = match spec.variant {
        Variant::Added => ((amp.nbar_amp + 1.0).ln(), -1.0),
        Variant::Subtracted => (amp.nbar_amp.ln(), 1.0),
    };
    let ln_n_m = if m == 0 {
        0.0
    } else {
        ln_m_fact + mf * ln_base
    };
    let ln_gain = spec.params.gain.ln();
    let ln_n0 = amp.n0.ln();
    let ln_n_m_1 = ln_n_m + ln_n0 + order_sign * 2.0 * mf * ln_gain;
    let ln_n_m_2 = ln_n_m + ln_n0;
    let max_ln = ln_n_m.max(ln_n_m_1).max(ln_n_m_2);
    if max_ln > f64::MAX.ln() {
        return Err(Error::Overflow { ln_value: max_ln });
    }
    Ok(NormConstants {
        n_m: ln_n_m.exp(),
        n_m_1: ln_n_m_1.exp(),
        n_m_2: ln_n_m_2.exp(),
        ln_n_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(nbar: f64, gain: f64) -> ModelParams {
        ModelParams::new(nbar, gain).unwrap()
    }

    #[test]
    fn gain_one_is_identity() {
        let amp = amplified_params(&p(1.5, 1.0)).unwrap();
        assert_eq!(amp.nbar_amp, 1.5);
        assert_eq!(amp.n0, 1.0);
    }

    #[test]
    fn amplified_reference_point() {
        // nbar = 1.5, g = 1.2: N0 = 1/0.34, Nbar = N0 * 1.44 * 1.5.
        let amp = amplified_params(&p(1.5, 1.2)).unwrap();
        assert_relative_eq!(amp.n0, 2.9411764705882346, max_relative = 1e-14);
        assert_relative_eq!(amp.nbar_amp, 6.352941176470585, max_relative = 1e-14);
        // Consistency with the printed ground-state probability 0.136 of
        // the amplified thermal state.
        assert!((1.0 / (amp.nbar_amp + 1.0) - 0.136).abs() < 5e-7);
    }

    #[test]
    fn vacuum_is_fixed_point() {
        let amp = amplified_params(&p(0.0, 1.3)).unwrap();
        assert_eq!(amp.nbar_amp, 0.0);
        assert_eq!(amp.n0, 1.0);
    }

    #[test]
    fn region_classification() {
        assert_eq!(classify_region(&p(1.5, 1.2)), RegionClass::Physical);
        assert_eq!(classify_region(&p(1.5, 2.0)), RegionClass::Unphysical);
        // g_c(1.5) = 1.2909944..; within the guard band at the exact value.
        let gc = critical_gain(1.5).unwrap();
        assert_eq!(classify_region(&p(1.5, gc)), RegionClass::Boundary);
    }

    #[test]
    fn critical_values() {
        assert!((critical_gain(1.1).unwrap() - 1.3817).abs() < 1e-4);
        assert!((critical_gain(1.5).unwrap() - 1.2910).abs() < 1e-4);
        assert!((critical_nbar(1.06).unwrap() - 8.0906).abs() < 1e-4);
        assert!((critical_nbar(1.08).unwrap() - 6.0096).abs() < 1e-4);
        assert_relative_eq!(critical_gain(1.0 / 3.0).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(
            critical_nbar(std::f64::consts::SQRT_2).unwrap(),
            1.0,
            max_relative = 1e-14
        );
        assert!(critical_gain(0.0).is_err());
        assert!(critical_nbar(1.0).is_err());
    }

    #[test]
    fn attenuation_accepted() {
        let amp = amplified_params(&p(1.5, 0.9)).unwrap();
        assert!(amp.nbar_amp < 1.5);
        assert!(amp.nbar_amp > 0.0);
    }

    #[test]
    fn subtraction_from_vacuum_rejected() {
        let err = StateSpec::new(p(0.0, 1.2), 2, Variant::Subtracted).unwrap_err();
        assert!(matches!(err, Error::SubtractionFromVacuum { m: 2 }));
        // m = 0 is fine regardless of variant.
        StateSpec::new(p(0.0, 1.2), 0, Variant::Subtracted).unwrap();
    }

    #[test]
    fn norm_constants_reference() {
        // N_{3+} = 3! (Nbar+1)^3 at nbar = 1.5, g = 1.2; frozen from the
        // brute-force trace of the unnormalized pipeline (oracle tests in
        // the fock module reproduce it independently).
        let spec = StateSpec::new(p(1.5, 1.2), 3, Variant::Added).unwrap();
        let n = normalization_constants(&spec).unwrap();
        assert_relative_eq!(n.n_m, 2385.2534093222034, max_relative = 1e-12);
        let spec = StateSpec::new(p(1.5, 1.2), 1, Variant::Subtracted).unwrap();
        let n = normalization_constants(&spec).unwrap();
        assert_relative_eq!(n.n_m, 6.352941176470585, max_relative = 1e-12);
        // m = 0: all constants collapse to N0-scaled identities.
        let spec = StateSpec::new(p(1.5, 1.2), 0, Variant::Added).unwrap();
        let n = normalization_constants(&spec).unwrap();
        assert_eq!(n.n_m, 1.0);
        assert_relative_eq!(n.n_m_2, 2.9411764705882346, max_relative = 1e-14);
    }

    #[test]
    fn ordering_constants_relation() {
        let spec = StateSpec::new(p(1.5, 1.2), 3, Variant::Added).unwrap();
        let n = normalization_constants(&spec).unwrap();
        let g2m = spec.params.gain.powi(6);
        assert_relative_eq!(n.n_m_1 * g2m, n.n_m_2, max_relative = 1e-12);
        let spec = StateSpec::new(p(1.5, 1.2), 3, Variant::Subtracted).unwrap();
        let n = normalization_constants(&spec).unwrap();
        assert_relative_eq!(n.n_m_1 / g2m, n.n_m_2, max_relative = 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn critical_maps_are_inverses(nbar in 1e-3f64..100.0) {
                let gc = critical_gain(nbar).unwrap();
                let back = critical_nbar(gc).unwrap();
                prop_assert!((back - nbar).abs() <= 1e-12 * nbar.max(1.0));
            }

            #[test]
            fn classify_consistent_with_amplified(
                nbar in 0.0f64..20.0,
                gain in 0.1f64..3.0,
            ) {
                let params = p(nbar, gain);
                let ok = amplified_params(&params).is_ok();
                prop_assert_eq!(ok, classify_region(&params) == RegionClass::Physical);
                if let Ok(amp) = amplified_params(&params) {
                    prop_assert!(amp.n0 > 0.0);
                    prop_assert!(amp.nbar_amp >= 0.0);
                    if nbar > 0.0 {
                        prop_assert_eq!(amp.nbar_amp > nbar, gain > 1.0);
                    }
                }
            }

            #[test]
            fn nbar_amp_monotone_in_gain(nbar in 1e-2f64..10.0, t in 0.01f64..0.94) {
                // Nbar strictly increases in g on (1, g_c).
                let gc = critical_gain(nbar).unwrap();
                let g1 = 1.0 + t * (gc - 1.0);
                let g2 = 1.0 + (t + 0.05) * (gc - 1.0);
                let a1 = amplified_params(&p(nbar, g1)).unwrap();
                let a2 = amplified_params(&p(nbar, g2)).unwrap();
                prop_assert!(a2.nbar_amp > a1.nbar_amp);
            }
        }
    }
}
