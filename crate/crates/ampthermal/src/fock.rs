//! Photon-number distributions: closed forms, truncated state
//! construction, the brute-force operator-pipeline oracle, and the
//! generating-function density-matrix elements.
//!
//! All four state families are diagonal in the Fock basis, so a state is
//! a weight vector `rho_kk` plus a certified tail mass. The closed forms
//! are evaluated in log space with `ln_gamma` handling every factorial
//! ratio; the oracle deliberately never touches the closed forms (it
//! works from the bare thermal weights, the `g^{2n}` amplification
//! factor, and rising/falling factorial shifts).

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::params::{ModelParams, StateSpec, Variant};

/// Default hard cap on the truncation cutoff.
pub const K_MAX_DEFAULT: usize = 200_000;

/// Truncated diagonal density matrix: weights `rho_kk` for
/// `k = 0..=cutoff` plus the probability mass beyond the cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalFockState {
    weights: Vec<f64>,
    tail_mass: f64,
}

impl DiagonalFockState {
    pub fn new(weights: Vec<f64>, tail_mass: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParams("empty weight vector".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || tail_mass < 0.0 {
            return Err(Error::InvalidParams(
                "weights and tail mass must be finite and nonnegative".into(),
            ));
        }
        Ok(Self { weights, tail_mass })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight at photon number `k`; zero beyond the cutoff.
    pub fn weight(&self, k: usize) -> f64 {
        self.weights.get(k).copied().unwrap_or(0.0)
    }

    pub fn cutoff(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn retained_mass(&self) -> f64 {
        kahan_sum(self.weights.iter().copied())
    }
}

fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Log of the closed-form weight `rho_kk`, or `None` for an exact zero.
fn ln_pnd(nbar_amp: f64, m: u32, variant: Variant, k: usize) -> Option<f64> {
    let m = m as usize;
    if nbar_amp == 0.0 {
        // Vacuum input: the added state is the Fock state |m>, the plain
        // state is the vacuum. Subtraction with m > 0 never reaches here.
        let peak = if variant == Variant::Added { m } else { 0 };
        return if k == peak { Some(0.0) } else { None };
    }
    let ln_n = nbar_amp.ln();
    let ln_n1 = (nbar_amp + 1.0).ln();
    let kf = k as f64;
    let mf = m as f64;
    if m == 0 {
        return Some(kf * ln_n - (kf + 1.0) * ln_n1);
    }
    match variant {
        Variant::Added => {
            if k < m {
                None
            } else {
                let jf = (k - m) as f64;
                Some(
                    jf * ln_n - (kf + 1.0) * ln_n1 + ln_gamma(kf + 1.0)
                        - ln_gamma(mf + 1.0)
                        - ln_gamma(jf + 1.0),
                )
            }
        }
        Variant::Subtracted => Some(
            kf * ln_n - (kf + mf + 1.0) * ln_n1 + ln_gamma(mf + kf + 1.0)
                - ln_gamma(mf + 1.0)
                - ln_gamma(kf + 1.0),
        ),
    }
}

/// Closed-form photon-number probability `rho_kk` for the given state.
pub fn pnd_value(spec: &StateSpec, k: usize) -> Result<f64> {
    let amp = spec.amplified()?;
    if spec.variant == Variant::Subtracted && spec.m > 0 && amp.nbar_amp == 0.0 {
        return Err(Error::SubtractionFromVacuum { m: spec.m });
    }
    Ok(ln_pnd(amp.nbar_amp, spec.m, spec.variant, k)
        .map(f64::exp)
        .unwrap_or(0.0))
}

/// Builds the truncated state, stopping at the smallest cutoff whose
/// retained mass reaches `1 - tail_eps`. The stopping rule is backed by
/// the geometric ratio bound of the negative-binomial-shaped weights.
pub fn build_state(spec: &StateSpec, tail_eps: f64) -> Result<DiagonalFockState> {
    build_state_capped(spec, tail_eps, K_MAX_DEFAULT)
}

pub fn build_state_capped(
    spec: &StateSpec,
    tail_eps: f64,
    k_max: usize,
) -> Result<DiagonalFockState> {
    if !(tail_eps > 0.0 && tail_eps < 1.0) {
        return Err(Error::InvalidParams(format!(
            "tail_eps must lie in (0, 1), got {tail_eps}"
        )));
    }
    let amp = spec.amplified()?;
    if spec.variant == Variant::Subtracted && spec.m > 0 && amp.nbar_amp == 0.0 {
        return Err(Error::SubtractionFromVacuum { m: spec.m });
    }
    if amp.nbar_amp == 0.0 {
        let peak = if spec.variant == Variant::Added {
            spec.m as usize
        } else {
            0
        };
        let mut weights = vec![0.0; peak + 1];
        weights[peak] = 1.0;
        return DiagonalFockState::new(weights, 0.0);
    }
    let mut weights = Vec::new();
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let target = 1.0 - tail_eps;
    let mut k = 0usize;
    loop {
        let w = ln_pnd(amp.nbar_amp, spec.m, spec.variant, k)
            .map(f64::exp)
            .unwrap_or(0.0);
        weights.push(w);
        let y = w - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if sum >= target {
            break;
        }
        if k >= k_max {
            return Err(Error::CutoffExceeded { k_max, tail_eps });
        }
        k += 1;
    }
    DiagonalFockState::new(weights, (1.0 - sum).max(0.0))
}

/// Order in which the amplifier and the photon-varying operator are
/// applied to the bare thermal input. The normalized states coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorOrder {
    /// `g^n` first, then `a†^m` / `a^m`.
    AmplifyFirst,
    /// `a†^m` / `a^m` first, then `g^n`.
    VaryFirst,
}

/// Suggests a cutoff for [`oracle_pipeline`] so the unnormalized tail
/// stays below `rel_tail` of the retained mass.
pub fn oracle_cutoff(params: &ModelParams, m: u32, rel_tail: f64) -> usize {
    let r = params.convergence_ratio();
    if r <= 0.0 {
        return m as usize + 1;
    }
    // Geometric decay with a polynomial prefactor; pad generously.
    let base = (rel_tail.ln() / r.ln()).ceil().max(0.0) as usize;
    m as usize + 2 * base + 64
}

/// Brute-force construction of the state in a truncated Fock space.
///
/// Starts from the bare thermal weights `nbar^n/(nbar+1)^{n+1}`, applies
/// the amplifier (weight `n` scaled by `g^{2n}`) and the photon-varying
/// shift (addition moves weight `n -> n+m` scaled by `(n+m)!/n!`,
/// subtraction moves `n -> n-m` scaled by `n!/(n-m)!`), in the requested
/// order, then renormalizes. Never evaluates the closed-form
/// distribution or the amplified mean photon number.
pub fn oracle_pipeline(
    params: &ModelParams,
    m: u32,
    variant: Variant,
    order: OperatorOrder,
    k_cutoff: usize,
) -> Result<DiagonalFockState> {
    let m = m as usize;
    let ln_g = params.gain.ln();
    let thermal = |n: usize| -> f64 {
        if params.nbar == 0.0 {
            return if n == 0 { 1.0 } else { 0.0 };
        }
        let nf = n as f64;
        (nf * params.nbar.ln() - (nf + 1.0) * (params.nbar + 1.0).ln()).exp()
    };
    let amplify = |w: f64, n: usize| w * (2.0 * n as f64 * ln_g).exp();
    let rising = |n: usize| -> f64 {
        // (n+m)!/n!
        (1..=m).map(|i| (n + i) as f64).product()
    };
    let falling = |n: usize| -> f64 {
        // n!/(n-m)!, caller guarantees n >= m
        (0..m).map(|i| (n - i) as f64).product()
    };

    let out_len = match variant {
        Variant::Added => k_cutoff + 1,
        Variant::Subtracted => {
            if k_cutoff < m {
                return Err(Error::InvalidParams(format!(
                    "cutoff {k_cutoff} below subtraction count {m}"
                )));
            }
            k_cutoff - m + 1
        }
    };
    let mut out = vec![0.0f64; out_len];
    for n in 0..=k_cutoff {
        let w0 = thermal(n);
        match (variant, order) {
            (Variant::Added, OperatorOrder::AmplifyFirst) => {
                if n + m <= k_cutoff {
                    out[n + m] += amplify(w0, n) * rising(n);
                }
            }
            (Variant::Added, OperatorOrder::VaryFirst) => {
                if n + m <= k_cutoff {
                    out[n + m] += amplify(w0 * rising(n), n + m);
                }
            }
            (Variant::Subtracted, OperatorOrder::AmplifyFirst) => {
                if n >= m {
                    out[n - m] += amplify(w0, n) * falling(n);
                }
            }
            (Variant::Subtracted, OperatorOrder::VaryFirst) => {
                if n >= m {
                    out[n - m] += amplify(w0 * falling(n), n - m);
                }
            }
        }
    }
    let total = kahan_sum(out.iter().copied());
    if total <= 0.0 {
        return Err(Error::SubtractionFromVacuum { m: m as u32 });
    }
    for w in &mut out {
        *w /= total;
    }
    // Renormalization absorbs the truncation error; the caller chooses
    // k_cutoff large enough (see oracle_cutoff) for that to be below
    // the comparison tolerance.
    DiagonalFockState::new(out, 0.0)
}

/// Hard limit on the index range of [`matrix_element`].
pub const MATRIX_ELEMENT_INDEX_MAX: usize = 2000;

/// Density-matrix element `<k|rho|l>` from the generating-function
/// expansion. The four-variable derivative collapses to a single term
/// family under the selection rule `k = l`; off-diagonal elements are
/// exactly zero.
pub fn matrix_element(spec: &StateSpec, k: usize, l: usize) -> Result<f64> {
    if k > MATRIX_ELEMENT_INDEX_MAX || l > MATRIX_ELEMENT_INDEX_MAX {
        return Err(Error::Domain(format!(
            "matrix element indices capped at {MATRIX_ELEMENT_INDEX_MAX}, got ({k}, {l})"
        )));
    }
    if k != l {
        return Ok(0.0);
    }
    let amp = spec.amplified()?;
    let nb = amp.nbar_amp;
    let m = spec.m as usize;
    if spec.variant == Variant::Subtracted && m > 0 && nb == 0.0 {
        return Err(Error::SubtractionFromVacuum { m: spec.m });
    }
    if nb == 0.0 {
        let peak = if spec.variant == Variant::Added { m } else { 0 };
        return Ok(if k == peak { 1.0 } else { 0.0 });
    }
    let ln_t = nb.ln() - (nb + 1.0).ln();
    let ln_n1 = (nb + 1.0).ln();
    let mf = m as f64;
    let kf = k as f64;
    match spec.variant {
        Variant::Added => {
            // Surviving term: mu^m nu^m from e^{f mu + h nu}, f- and
            // h-powers completed by t^{k-m} from e^{t f h}.
            if k < m {
                return Ok(0.0);
            }
            let ln_nm = ln_gamma(mf + 1.0) + mf * ln_n1;
            let jf = (k - m) as f64;
            Ok((ln_gamma(kf + 1.0) - ln_gamma(jf + 1.0) + jf * ln_t - ln_n1 - ln_nm).exp())
        }
        Variant::Subtracted => {
            // Terms indexed by the power alpha of mu*nu; the remaining
            // powers are forced, all carrying t^{m+k} in total.
            let ln_nm = ln_gamma(mf + 1.0) + mf * nb.ln();
            let ln_prefix =
                2.0 * ln_gamma(mf + 1.0) + ln_gamma(kf + 1.0) + (mf + kf) * ln_t - ln_n1 - ln_nm;
            let alpha_lo = m.saturating_sub(k);
            let mut ln_terms = Vec::with_capacity(m - alpha_lo + 1);
            for alpha in alpha_lo..=m {
                let af = alpha as f64;
                ln_terms.push(
                    -ln_gamma(af + 1.0)
                        - 2.0 * ln_gamma(mf - af + 1.0)
                        - ln_gamma(kf - mf + af + 1.0),
                );
            }
            let max = ln_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let sum: f64 = ln_terms.iter().map(|t| (t - max).exp()).sum();
            Ok((ln_prefix + max + sum.ln()).exp())
        }
    }
}
