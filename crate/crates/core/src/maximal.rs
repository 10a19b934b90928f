//! The two maximal functions — origin-ball averages of the shifted |f|
//! against plain weighted averages — the pointwise domination between them,
//! weak/strong type profiling, and differentiation of averages.

use crate::error::{Error, Result};
use crate::functions::TestFunction;
use crate::measure::{ball_measure, weighted_length, WeightedInterval};
use crate::params::GegenbauerParams;
use crate::quadrature::{integrate_finite, integrate_singular, QuadratureSpec};
use crate::shift::weighted_shift_average;
use rayon::prelude::*;

/// Log-spaced radii standing in for the sup over r > 0; spans both
/// measure-envelope regimes.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusGrid {
    radii: Vec<f64>,
}

impl RadiusGrid {
    pub fn log_spaced(min: f64, max: f64, count: usize) -> Result<Self> {
        if count < 16 {
            return Err(Error::InvalidParameter(format!(
                "radius grid needs at least 16 points (got {count})"
            )));
        }
        if !(min > 0.0 && min < max) {
            return Err(Error::InvalidParameter(format!(
                "radius grid needs 0 < min < max (got {min}, {max})"
            )));
        }
        let radii = (0..count)
            .map(|i| min * (max / min).powf(i as f64 / (count - 1) as f64))
            .collect();
        Ok(Self { radii })
    }

    /// Default grid around the regime constant: two decades below, one
    /// above, 32 points.
    pub fn default_for(params: &GegenbauerParams) -> Self {
        let c = params.regime_constant();
        Self::log_spaced(1e-3 * c, 10.0 * c, 32).unwrap()
    }

    /// Grid with twice as many points over the same span.
    pub fn refined(&self) -> Self {
        let min = self.radii[0];
        let max = *self.radii.last().unwrap();
        Self::log_spaced(min, max, 2 * self.radii.len()).unwrap()
    }

    /// The grid must reach two decades below and one above c.
    pub fn validate_span(&self, params: &GegenbauerParams) -> Result<()> {
        let c = params.regime_constant();
        if self.radii[0] > 0.01 * c || *self.radii.last().unwrap() < 10.0 * c {
            return Err(Error::InvalidParameter(format!(
                "radius grid [{}, {}] does not span two decades below and one above c = {c}",
                self.radii[0],
                self.radii.last().unwrap()
            )));
        }
        Ok(())
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }
}

/// Superlevel-set measures |{x : Tf(x) > α}|_λ over a threshold grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionProfile {
    pub thresholds: Vec<f64>,
    pub superlevel_measures: Vec<f64>,
    pub norm_input: f64,
}

impl DistributionProfile {
    /// sup over thresholds of α·measure(α)^{1/q} / norm; q = 1 recovers the
    /// weak (1,1) functional.
    pub fn weak_constant(&self, q: f64) -> f64 {
        self.thresholds
            .iter()
            .zip(&self.superlevel_measures)
            .map(|(&a, &m)| a * m.powf(1.0 / q) / self.norm_input)
            .fold(0.0, f64::max)
    }
}

/// M_G f(ch x): grid maximum over r of
/// |H(0,r)|_λ^{−1} ∫_0^r A^λ_{ch t}|f|(ch x) dμ(t).
///
/// The integrals over nested radii are accumulated segment by segment, so
/// the whole grid costs one sweep.
pub fn maximal_g(
    params: &GegenbauerParams,
    f: &TestFunction,
    x: f64,
    grid: &RadiusGrid,
) -> Result<f64> {
    let g = |y: f64| f.eval(y).abs();
    let mut cum_integral = 0.0;
    let mut cum_measure = 0.0;
    let mut prev = 0.0;
    let mut best: f64 = 0.0;
    for &r in grid.radii() {
        cum_integral += weighted_shift_average(params, g, x, prev, r)?;
        cum_measure += weighted_length(params, prev, r)?;
        prev = r;
        if cum_measure > 0.0 {
            best = best.max(cum_integral / cum_measure);
        }
    }
    Ok(best)
}

/// M_μ f(ch x): grid maximum over r of the plain weighted average of |f|
/// over H(x, r).
pub fn maximal_mu(
    params: &GegenbauerParams,
    f: &TestFunction,
    x: f64,
    grid: &RadiusGrid,
) -> Result<f64> {
    let two_lambda = 2.0 * params.lambda();
    let mut best: f64 = 0.0;
    for &r in grid.radii() {
        let iv = WeightedInterval::new(x, r)?;
        let (lo, hi) = iv.endpoints();
        let measure = ball_measure(params, &iv)?;
        let integral = if lo == 0.0 {
            let spec = QuadratureSpec::default().with_exponents(two_lambda, 0.0);
            integrate_singular(
                |t: f64| {
                    let ratio = if t == 0.0 { 1.0 } else { t.sinh() / t };
                    f.eval_x(t).abs() * ratio.powf(two_lambda)
                },
                0.0,
                hi,
                &spec,
            )?
            .value
        } else {
            integrate_finite(
                |t: f64| f.eval_x(t).abs() * t.sinh().powf(two_lambda),
                lo,
                hi,
                &QuadratureSpec::default(),
            )?
            .value
        };
        best = best.max(integral / measure);
    }
    Ok(best)
}

/// sup over the x-grid of M_G f / M_μ f, the empirical domination constant.
/// 0/0 counts as 1; a vanishing denominator against a live numerator is a
/// hard error rather than a silent skip.
pub fn domination_ratio(
    params: &GegenbauerParams,
    f: &TestFunction,
    x_grid: &[f64],
    grid: &RadiusGrid,
) -> Result<f64> {
    let pairs: Vec<Result<(f64, f64)>> = x_grid
        .par_iter()
        .map(|&x| Ok((maximal_g(params, f, x, grid)?, maximal_mu(params, f, x, grid)?)))
        .collect();
    let mut sup: f64 = 0.0;
    for pair in pairs {
        let (g, m) = pair?;
        let tiny = 1e-14;
        let ratio = if m <= tiny {
            if g <= tiny {
                1.0
            } else {
                return Err(Error::DominationDenominatorZero(g));
            }
        } else {
            g / m
        };
        sup = sup.max(ratio);
    }
    Ok(sup)
}

/// Superlevel-set measures of M_G f on a dense x-grid; trapezoid sums of the
/// weight over the cells where the condition holds, with boundary cells
/// counted fractionally by linear interpolation of M_G f.
pub fn weak_type_profile(
    params: &GegenbauerParams,
    f: &TestFunction,
    alphas: &[f64],
) -> Result<DistributionProfile> {
    let grid = RadiusGrid::default_for(params);
    let (_, hi) = f.norm_domain(1e-12)?;
    let hi = hi + 8.0;
    let n = 121usize;
    let xs: Vec<f64> = (0..n).map(|i| hi * i as f64 / (n - 1) as f64).collect();
    let values: Vec<Result<f64>> = xs
        .par_iter()
        .map(|&x| maximal_g(params, f, x, &grid))
        .collect();
    let mut m = Vec::with_capacity(n);
    for v in values {
        m.push(v?);
    }
    let norm_input = crate::spaces::lp_norm(params, f, 1.0)?;
    let measures = alphas
        .iter()
        .map(|&alpha| superlevel_measure(params, &xs, &m, alpha))
        .collect();
    Ok(DistributionProfile {
        thresholds: alphas.to_vec(),
        superlevel_measures: measures,
        norm_input,
    })
}

/// Trapezoid measure of {x : values > α} with fractional boundary cells.
pub(crate) fn superlevel_measure(
    params: &GegenbauerParams,
    xs: &[f64],
    values: &[f64],
    alpha: f64,
) -> f64 {
    let two_lambda = 2.0 * params.lambda();
    let w = |x: f64| x.sinh().powf(two_lambda);
    let mut total = 0.0;
    for i in 0..xs.len() - 1 {
        let (x0, x1) = (xs[i], xs[i + 1]);
        let (v0, v1) = (values[i], values[i + 1]);
        let above0 = v0 > alpha;
        let above1 = v1 > alpha;
        if above0 && above1 {
            total += 0.5 * (w(x0) + w(x1)) * (x1 - x0);
        } else if above0 != above1 {
            // linear crossing inside the cell
            let s = (alpha - v0) / (v1 - v0);
            let xc = x0 + s * (x1 - x0);
            if above0 {
                total += 0.5 * (w(x0) + w(xc)) * (xc - x0);
            } else {
                total += 0.5 * (w(xc) + w(x1)) * (x1 - xc);
            }
        }
    }
    total
}

/// ‖M_G f‖_{p,λ} / ‖f‖_{p,λ}, both over the same truncated domain.
pub fn strong_type_norm(params: &GegenbauerParams, f: &TestFunction, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "strong type requires p > 1 (got {p})"
        )));
    }
    let grid = RadiusGrid::default_for(params);
    let (_, hi) = f.norm_domain(1e-12)?;
    let n = 97usize;
    let xs: Vec<f64> = (0..n).map(|i| hi * i as f64 / (n - 1) as f64).collect();
    let values: Vec<Result<f64>> = xs
        .par_iter()
        .map(|&x| maximal_g(params, f, x, &grid))
        .collect();
    let mut m = Vec::with_capacity(n);
    for v in values {
        m.push(v?);
    }
    let mg = crate::functions::GridFunction::new(xs, m, crate::functions::Interpolation::Linear)?;

    let two_lambda = 2.0 * params.lambda();
    let spec = QuadratureSpec::loose().with_exponents(two_lambda, 0.0);
    let norm_of = |g: &dyn Fn(f64) -> f64| -> Result<f64> {
        let r = integrate_singular(
            |x: f64| {
                let ratio = if x == 0.0 { 1.0 } else { x.sinh() / x };
                g(x).abs().powf(p) * ratio.powf(two_lambda)
            },
            0.0,
            hi,
            &spec,
        )?;
        Ok(r.value.max(0.0).powf(1.0 / p))
    };
    let num = norm_of(&|x| mg.eval_x(x))?;
    let den = norm_of(&|x| f.eval_x(x))?;
    if den == 0.0 {
        return Err(Error::ZeroInputNorm(f.name()));
    }
    Ok(num / den)
}

/// Differentiation of averages at one radius: the deviation of the
/// origin-ball average of the shifted f from f itself, plus the
/// (sh r/2)^{−(2λ+1)}-normalized absolute-deviation integral.
pub fn differentiation_error(
    params: &GegenbauerParams,
    f: &TestFunction,
    x: f64,
    r: f64,
) -> Result<(f64, f64)> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "differentiation radius must be positive (got {r})"
        )));
    }
    let fx = f.eval_x(x);
    let avg = weighted_shift_average(params, |y| f.eval(y), x, 0.0, r)?
        / weighted_length(params, 0.0, r)?;
    let plain = (avg - fx).abs();

    let normalizer = (0.5 * r).sinh().powf(2.0 * params.lambda() + 1.0);
    let deviation = weighted_shift_average_abs_dev(params, f, x, r)?;
    Ok((plain, deviation / normalizer))
}

/// ∫_0^r |A_t f(ch x) − f(ch x)| sh^{2λ} t dt.
fn weighted_shift_average_abs_dev(
    params: &GegenbauerParams,
    f: &TestFunction,
    x: f64,
    r: f64,
) -> Result<f64> {
    let fx = f.eval_x(x);
    let two_lambda = 2.0 * params.lambda();
    let inner_spec = QuadratureSpec::default();
    let spec = QuadratureSpec::loose().with_exponents(two_lambda, 0.0);
    let integrand = |t: f64| {
        let shifted =
            crate::shift::shift_apply_fn(params, |y| f.eval(y), t, x, &inner_spec)
                .unwrap_or(f64::NAN);
        let ratio = if t == 0.0 { 1.0 } else { t.sinh() / t };
        (shifted - fx).abs() * ratio.powf(two_lambda)
    };
    Ok(integrate_singular(integrand, 0.0, r, &spec)?.value)
}
