//! Wigner functions: closed forms from the finite bilinear-derivative
//! sum, an independent Laguerre-series oracle, negativity diagnostics,
//! and grid/section sampling.
//!
//! Phase-space coordinates follow `beta = (x + i y) / sqrt(2)`, so the
//! phase-space area element is `dx dy / 2` and every Wigner function
//! integrates to 1 against it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::DiagonalFockState;
use crate::params::{normalization_constants, StateSpec, Variant};
use crate::purity::TAIL_LIMIT;

/// Phase-space point `beta = (x + i y)/sqrt(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
}

impl PhasePoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn beta(&self) -> Complex64 {
        Complex64::new(self.x, self.y) / std::f64::consts::SQRT_2
    }

    /// `|beta|^2 = (x^2 + y^2)/2`.
    pub fn beta_sq(&self) -> f64 {
        (self.x * self.x + self.y * self.y) / 2.0
    }
}

/// The `m`-th bilinear derivative
/// `d^m/dmu^m d^m/dnu^m exp(a mu + b nu + c mu nu) |_{mu = nu = 0}
///  = sum_j C(m,j)^2 j! c^j (a b)^{m-j}`.
pub fn bilinear_derivative(a: Complex64, b: Complex64, c: f64, m: u32) -> Complex64 {
    let ab = a * b;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut factorial = 1.0f64;
    for j in 0..=m {
        if j > 0 {
            factorial *= f64::from(j);
        }
        let bc = crate::purity::binomial(m, j);
        sum += bc * bc * factorial * c.powi(j as i32) * ab.powu(m - j);
    }
    sum
}

/// Gaussian Wigner function of a thermal state with mean photon number
/// `nbar_amp`: `2/(pi (2N+1)) exp(-2|beta|^2/(2N+1))`.
pub fn wigner_thermal(nbar_amp: f64, p: &PhasePoint) -> f64 {
    let d = 2.0 * nbar_amp + 1.0;
    2.0 / (std::f64::consts::PI * d) * (-2.0 * p.beta_sq() / d).exp()
}

/// Linear coefficient of the generating-function exponent:
/// `2(Nbar+1)/(2Nbar+1)` for addition, `2 Nbar/(2Nbar+1)` for
/// subtraction; the bilinear coefficient is `-c/2` resp. `+c/2`.
fn exponent_coeffs(nbar_amp: f64, variant: Variant) -> (f64, f64) {
    let d = 2.0 * nbar_amp + 1.0;
    match variant {
        Variant::Added => {
            let c = 2.0 * (nbar_amp + 1.0) / d;
            (c, -c / 2.0)
        }
        Variant::Subtracted => {
            let c = 2.0 * nbar_amp / d;
            (c, c / 2.0)
        }
    }
}

/// Closed-form Wigner function of the state at a phase-space point.
pub fn wigner_value(spec: &StateSpec, p: &PhasePoint) -> Result<f64> {
    let amp = spec.amplified()?;
    if spec.m == 0 {
        return Ok(wigner_thermal(amp.nbar_amp, p));
    }
    let norms = normalization_constants(spec)?;
    let (lin, bil) = exponent_coeffs(amp.nbar_amp, spec.variant);
    let beta = p.beta();
    let deriv = bilinear_derivative(lin * beta.conj(), lin * beta, bil, spec.m);
    // beta* . beta is computed as an exact real in complex arithmetic.
    debug_assert!(deriv.im.abs() <= 1e-14 * deriv.re.abs().max(1.0));
    let d = 2.0 * amp.nbar_amp + 1.0;
    let prefactor = 2.0 / (std::f64::consts::PI * d) * (-2.0 * p.beta_sq() / d).exp();
    Ok(prefactor * deriv.re * (-norms.ln_n_m).exp())
}

/// Non-Gaussian factor `T_ng = W / W_thermal`, computed directly from
/// the bilinear sum rather than by division. Requires `m >= 1`.
pub fn nongaussian_term(spec: &StateSpec, p: &PhasePoint) -> Result<f64> {
    if spec.m == 0 {
        return Err(Error::InvalidParams(
            "non-Gaussian term requires m >= 1".into(),
        ));
    }
    let amp = spec.amplified()?;
    let norms = normalization_constants(spec)?;
    let (lin, bil) = exponent_coeffs(amp.nbar_amp, spec.variant);
    let beta = p.beta();
    let deriv = bilinear_derivative(lin * beta.conj(), lin * beta, bil, spec.m);
    Ok(deriv.re * (-norms.ln_n_m).exp())
}

/// Independent Wigner witness: the Fock-kernel series
/// `sum_k rho_kk (2/pi)(-1)^k e^{-2|beta|^2} L_k(4|beta|^2)` with the
/// Laguerre polynomials evaluated by the upward three-term recurrence.
pub fn wigner_oracle(state: &DiagonalFockState, p: &PhasePoint) -> Result<f64> {
    if state.tail_mass() > TAIL_LIMIT {
        return Err(Error::TailTooLarge {
            tail_mass: state.tail_mass(),
            limit: TAIL_LIMIT,
        });
    }
    let z = 4.0 * p.beta_sq();
    let envelope = (2.0 / std::f64::consts::PI) * (-2.0 * p.beta_sq()).exp();
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut l_prev = 1.0f64; // L_0
    let mut l_curr = 1.0 - z; // L_1
    for (k, w) in state.weights().iter().enumerate() {
        let lk = if k == 0 {
            l_prev
        } else if k == 1 {
            l_curr
        } else {
            let kf = (k - 1) as f64;
            let next = ((2.0 * kf + 1.0 - z) * l_curr - kf * l_prev) / (kf + 1.0);
            l_prev = l_curr;
            l_curr = next;
            next
        };
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = w * sign * lk;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(envelope * sum)
}

/// Radius in `|beta|` inside which the single-photon-added state is
/// negative: `sqrt((2Nbar+1)/(Nbar+1))/2`.
pub fn negativity_radius_m1(nbar_amp: f64) -> f64 {
    ((2.0 * nbar_amp + 1.0) / (nbar_amp + 1.0)).sqrt() / 2.0
}

/// Location and value of the minimum of `W(x, y = 0)`.
///
/// `w_min >= 0` is a valid outcome and reports the absence of
/// negativity. By rotational symmetry the `y = 0` section captures the
/// global minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionMin {
    pub x_min: f64,
    pub w_min: f64,
}

/// Minimizes `W(x, 0)` over `x in [0, x_hi]` by dense sampling followed
/// by golden-section refinement of the bracketed minimum.
pub fn min_section(spec: &StateSpec) -> Result<SectionMin> {
    let amp = spec.amplified()?;
    // A few thermal widths cover all structure.
    let x_hi = 2.0 * (2.0 * (2.0 * amp.nbar_amp + 1.0)).sqrt();
    let eval = |x: f64| wigner_value(spec, &PhasePoint::new(x, 0.0));

    let step = 1e-2;
    let n = (x_hi / step).ceil() as usize;
    let mut best_i = 0usize;
    let mut best_w = f64::INFINITY;
    for i in 0..=n {
        let x = (i as f64 * step).min(x_hi);
        let w = eval(x)?;
        if w < best_w {
            best_w = w;
            best_i = i;
        }
    }
    let mut lo = (best_i.saturating_sub(1)) as f64 * step;
    let mut hi = ((best_i + 1) as f64 * step).min(x_hi);
    // Golden-section search down to 1e-10 in x.
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    while hi - lo > 1e-10 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = eval(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = eval(x2)?;
        }
    }
    let x_min = 0.5 * (lo + hi);
    let w_min = eval(x_min)?.min(best_w);
    Ok(SectionMin { x_min, w_min })
}

/// An inclusive, uniformly spaced sampling axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) || count < 2 {
            return Err(Error::InvalidParams(format!(
                "axis needs finite min < max and count >= 2, got [{min}, {max}] x {count}"
            )));
        }
        Ok(Self { min, max, count })
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn value(&self, i: usize) -> f64 {
        self.min + self.step() * i as f64
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.value(i))
    }
}

/// Wigner values sampled on a rectangular `(x, y)` grid;
/// `values[iy][ix]` corresponds to `(x_axis.value(ix), y_axis.value(iy))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub x_axis: GridAxis,
    pub y_axis: GridAxis,
    pub values: Vec<Vec<f64>>,
}

impl WignerGrid {
    /// Trapezoid estimate of the phase-space integral
    /// `(1/2) \int W dx dy`; a diagnostic, never used to rescale.
    pub fn integral(&self) -> f64 {
        let wx = |i: usize| {
            if i == 0 || i == self.x_axis.count - 1 {
                0.5
            } else {
                1.0
            }
        };
        let wy = |j: usize| {
            if j == 0 || j == self.y_axis.count - 1 {
                0.5
            } else {
                1.0
            }
        };
        let mut sum = 0.0;
        for (j, row) in self.values.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                sum += wx(i) * wy(j) * v;
            }
        }
        sum * self.x_axis.step() * self.y_axis.step() / 2.0
    }
}

/// Samples the closed-form Wigner function on a rectangular grid.
/// Points are independent; evaluation order does not affect the result.
pub fn wigner_grid(spec: &StateSpec, x_axis: GridAxis, y_axis: GridAxis) -> Result<WignerGrid> {
    let mut values = Vec::with_capacity(y_axis.count);
    for y in y_axis.values() {
        let mut row = Vec::with_capacity(x_axis.count);
        for x in x_axis.values() {
            row.push(wigner_value(spec, &PhasePoint::new(x, y))?);
        }
        values.push(row);
    }
    Ok(WignerGrid {
        x_axis,
        y_axis,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build_state;
    use crate::params::ModelParams;
    use approx::assert_relative_eq;

    const NBAR_AMP_REF: f64 = 6.352941176470585;

    fn spec(nbar: f64, gain: f64, m: u32, variant: Variant) -> StateSpec {
        StateSpec::new(ModelParams::new(nbar, gain).unwrap(), m, variant).unwrap()
    }

    #[test]
    fn bilinear_small_orders() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(bilinear_derivative(one, one, 5.0, 0).re, 1.0);
        // m = 1: ab + c.
        let a = Complex64::new(2.0, 0.0);
        let b = Complex64::new(3.0, 0.0);
        assert_relative_eq!(
            bilinear_derivative(a, b, -1.5, 1).re,
            4.5,
            max_relative = 1e-14
        );
        // m = 2, a = b = c = 1: 1 + 4 + 2 = 7 (frozen from the symbolic
        // expansion of the second derivative).
        assert_relative_eq!(
            bilinear_derivative(one, one, 1.0, 2).re,
            7.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn thermal_values() {
        let origin = PhasePoint::new(0.0, 0.0);
        assert_relative_eq!(
            wigner_thermal(0.0, &origin),
            2.0 / std::f64::consts::PI,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            wigner_thermal(NBAR_AMP_REF, &origin),
            0.046448652919523124,
            max_relative = 1e-13
        );
        assert!(wigner_thermal(2.0, &PhasePoint::new(40.0, 0.0)) < 1e-100);
    }

    #[test]
    fn m1_origin_values() {
        let origin = PhasePoint::new(0.0, 0.0);
        let d = 2.0 * NBAR_AMP_REF + 1.0;
        let want = 2.0 / (std::f64::consts::PI * d * d);
        let w_add = wigner_value(&spec(1.5, 1.2, 1, Variant::Added), &origin).unwrap();
        assert_relative_eq!(w_add, -want, max_relative = 1e-12);
        let w_sub = wigner_value(&spec(1.5, 1.2, 1, Variant::Subtracted), &origin).unwrap();
        assert_relative_eq!(w_sub, want, max_relative = 1e-12);
    }

    #[test]
    fn m1_nongaussian_closed_form() {
        // T_ng^(1+) = 4(N+1)/(2N+1)^2 |b|^2 - 1/(2N+1) and the
        // subtracted mirror; checked on a handful of radii.
        let add = spec(1.5, 1.2, 1, Variant::Added);
        let sub = spec(1.5, 1.2, 1, Variant::Subtracted);
        let nb = NBAR_AMP_REF;
        let d = 2.0 * nb + 1.0;
        for r in [0.0f64, 0.3, 0.7, 1.3, 2.5] {
            let p = PhasePoint::new(r * std::f64::consts::SQRT_2, 0.0); // |beta| = r
            let b2 = r * r;
            let want_add = 4.0 * (nb + 1.0) / (d * d) * b2 - 1.0 / d;
            let want_sub = 4.0 * nb / (d * d) * b2 + 1.0 / d;
            assert_relative_eq!(
                nongaussian_term(&add, &p).unwrap(),
                want_add,
                max_relative = 1e-12
            );
            assert_relative_eq!(
                nongaussian_term(&sub, &p).unwrap(),
                want_sub,
                max_relative = 1e-12
            );
            // W = T_ng * W_thermal.
            assert_relative_eq!(
                wigner_value(&add, &p).unwrap(),
                want_add * wigner_thermal(nb, &p),
                max_relative = 1e-12
            );
        }
        // Frozen spot value: N = 1, |beta| = 1 gives 4*2/9 - 1/3 = 5/9.
        let nb1 = 1.0;
        let d1 = 3.0;
        assert_relative_eq!(
            4.0 * (nb1 + 1.0) / (d1 * d1) * 1.0 - 1.0 / d1,
            5.0 / 9.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn negativity_radius_values() {
        assert_relative_eq!(negativity_radius_m1(0.0), 0.5, max_relative = 1e-15);
        assert_relative_eq!(
            negativity_radius_m1(NBAR_AMP_REF),
            0.6826419266350404,
            max_relative = 1e-12
        );
        // Monotone increasing toward sqrt(2)/2.
        assert!(negativity_radius_m1(1.0) < negativity_radius_m1(10.0));
        assert!(negativity_radius_m1(1e9) < std::f64::consts::SQRT_2 / 2.0);
    }

    #[test]
    fn sign_change_at_radius() {
        let s = spec(1.5, 1.2, 1, Variant::Added);
        let r = negativity_radius_m1(NBAR_AMP_REF);
        let at = |rr: f64| {
            wigner_value(&s, &PhasePoint::new(rr * std::f64::consts::SQRT_2, 0.0)).unwrap()
        };
        assert!(at(r - 1e-6) < 0.0);
        assert!(at(r + 1e-6) > 0.0);
        assert!(at(r).abs() < 1e-8);
    }

    #[test]
    fn oracle_matches_thermal() {
        let s = spec(1.5, 1.2, 0, Variant::Added);
        let st = build_state(&s, 1e-13).unwrap();
        for x in [0.0f64, 0.5, 1.5, 3.0, 5.0] {
            let p = PhasePoint::new(x, 0.7);
            let got = wigner_oracle(&st, &p).unwrap();
            assert!((got - wigner_thermal(NBAR_AMP_REF, &p)).abs() < 1e-10);
        }
    }

    #[test]
    fn oracle_matches_closed_form() {
        let s = spec(1.5, 1.2, 3, Variant::Added);
        let st = build_state(&s, 1e-13).unwrap();
        for x in [0.0f64, 0.8, 2.0, 4.0] {
            for y in [0.0f64, 1.1, 3.0] {
                let p = PhasePoint::new(x, y);
                let got = wigner_oracle(&st, &p).unwrap();
                let want = wigner_value(&s, &p).unwrap();
                assert!((got - want).abs() < 1e-9, "({x}, {y}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn vacuum_oracle() {
        let st = DiagonalFockState::new(vec![1.0], 0.0).unwrap();
        let p = PhasePoint::new(1.0, -0.5);
        assert_relative_eq!(
            wigner_oracle(&st, &p).unwrap(),
            2.0 / std::f64::consts::PI * (-2.0 * p.beta_sq()).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn subtracted_stays_positive() {
        for m in 1u32..=8 {
            let s = spec(1.5, 1.2, m, Variant::Subtracted);
            for x in [0.0f64, 0.4, 1.0, 2.2, 4.0] {
                assert!(wigner_value(&s, &PhasePoint::new(x, 0.3)).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn section_minimum_m1_at_origin() {
        let s = spec(1.5, 1.2, 1, Variant::Added);
        let min = min_section(&s).unwrap();
        let d = 2.0 * NBAR_AMP_REF + 1.0;
        assert!(min.x_min.abs() < 1e-6);
        assert_relative_eq!(
            min.w_min,
            -2.0 / (std::f64::consts::PI * d * d),
            max_relative = 1e-10
        );
    }

    #[test]
    fn grid_positive_for_gaussian_and_normalized() {
        let s = spec(1.5, 1.05, 0, Variant::Added);
        let ax = GridAxis::new(-6.0, 6.0, 121).unwrap();
        let grid = wigner_grid(&s, ax, ax).unwrap();
        assert!(grid.values.iter().flatten().all(|v| *v > 0.0));
        assert!((grid.integral() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn grid_integral_nongaussian() {
        let s = spec(1.5, 1.0, 1, Variant::Added);
        let ax = GridAxis::new(-6.0, 6.0, 241).unwrap();
        let grid = wigner_grid(&s, ax, ax).unwrap();
        assert!((grid.integral() - 1.0).abs() < 1e-3, "{}", grid.integral());
        // Minimum cell sits at/adjacent to the origin.
        let mut min_pos = (0usize, 0usize);
        let mut min_v = f64::INFINITY;
        for (j, row) in grid.values.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                if *v < min_v {
                    min_v = *v;
                    min_pos = (i, j);
                }
            }
        }
        assert!(grid.x_axis.value(min_pos.0).abs() <= grid.x_axis.step() + 1e-12);
        assert!(grid.y_axis.value(min_pos.1).abs() <= grid.y_axis.step() + 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rotational_symmetry(
                x in -4.0f64..4.0,
                y in -4.0f64..4.0,
                m in 0u32..=6,
                add in proptest::bool::ANY,
            ) {
                let variant = if add { Variant::Added } else { Variant::Subtracted };
                let s = spec(1.5, 1.2, m, variant);
                let w = wigner_value(&s, &PhasePoint::new(x, y)).unwrap();
                let r = (x * x + y * y).sqrt();
                let w_r = wigner_value(&s, &PhasePoint::new(r, 0.0)).unwrap();
                // Near the zero rings only an absolute comparison makes
                // sense; |W| <= 2/pi so 1e-12 absolute is 12 digits.
                prop_assert!((w - w_r).abs() <= 1e-12 * w_r.abs().max(1.0));
            }
        }
    }
}
