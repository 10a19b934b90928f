//! The fractional-integral operator in kernel form (shifted power kernel
//! against the weighted measure) and in heat-semigroup form, the Sobolev
//! mapping test, the weak (1, q) profile, and the modified potential whose
//! oscillation stays bounded at the endpoint exponent relation p·α = 2λ+1.

use crate::error::{Error, Result};
use crate::functions::{GridFunction, Interpolation, TestFunction};
use crate::maximal::DistributionProfile;
use crate::params::GegenbauerParams;
use crate::quadrature::{integrate_finite, integrate_singular, QuadratureSpec};
use crate::shift::shift_apply_fn;
use rayon::prelude::*;
use std::cell::RefCell;
use std::collections::HashMap;

/// Fractional order α ∈ (0, 2λ+1) with the Lebesgue exponents tied by the
/// scaling relation 1/p − 1/q = α/(2λ+1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    alpha: f64,
    p: f64,
    q: f64,
}

impl PotentialParams {
    pub fn new(params: &GegenbauerParams, alpha: f64, p: f64) -> Result<Self> {
        let cap = 2.0 * params.lambda() + 1.0;
        if !(alpha > 0.0 && alpha < cap) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} outside (0, 2λ+1) = (0, {cap})"
            )));
        }
        if !(p >= 1.0) {
            return Err(Error::InvalidParameter(format!("p = {p} must be >= 1")));
        }
        let inv_q = 1.0 / p - alpha / cap;
        let q = if inv_q <= 0.0 { f64::INFINITY } else { 1.0 / inv_q };
        Ok(Self { alpha, p, q })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// 1 ≤ p < (2λ+1)/α, the Sobolev-mapping regime.
    pub fn in_sobolev_regime(&self, params: &GegenbauerParams) -> bool {
        self.p < (2.0 * params.lambda() + 1.0) / self.alpha
    }

    /// p·α = 2λ+1, the oscillation-space regime.
    pub fn in_bmo_regime(&self, params: &GegenbauerParams) -> bool {
        (self.p * self.alpha - (2.0 * params.lambda() + 1.0)).abs() < 1e-12
    }
}

/// Centering constants of the modified potential at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmoCenter {
    pub a1: f64,
    pub a2: f64,
}

impl BmoCenter {
    pub fn a_f(&self) -> f64 {
        self.a1 + self.a2
    }
}

/// Evaluation point floor: the kernel is singular at x = 0 and pointwise
/// values below this are not meaningful.
pub const RIESZ_X_MIN: f64 = 0.05;

/// The shifted kernel A^λ_{ch t} (sh ·)^{α−2λ−1} evaluated at ch x.
///
/// The φ-integrand is the power kernel at ch x ch t − sh x sh t cos φ, which
/// peaks sharply near φ = 0 as t approaches x; the adaptive singular rule
/// resolves it for t ≠ x.
pub fn shifted_kernel(
    params: &GegenbauerParams,
    pp: &PotentialParams,
    t: f64,
    x: f64,
) -> Result<f64> {
    let e = pp.alpha - 2.0 * params.lambda() - 1.0;
    let spec = QuadratureSpec::default();
    shift_apply_fn(
        params,
        |y| (y * y - 1.0).max(0.0).powf(0.5 * e),
        t,
        x,
        &spec,
    )
}

/// Outer integrand pieces of the kernel-form potential, split at the
/// breakpoints {0, support bounds, x}; the t = x piece carries the
/// integrable |t−x|^{α−1} blow-up of the shifted kernel and the t = 0 piece
/// the t^{2λ} weight.
fn kernel_form_pieces(
    f: &TestFunction,
    x: f64,
    extra_breaks: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = match (f.support_hint(), f.decay_hint()) {
        (Some((a, b)), _) => (a, b),
        (None, Some(_)) => {
            let (_, x_hi) = f.norm_domain(1e-12)?;
            (0.0, x_hi)
        }
        _ => {
            return Err(Error::NormDivergence(format!(
                "no domain certificate for {f}"
            )))
        }
    };
    let mut breaks = vec![lo, hi];
    if x > lo && x < hi {
        breaks.push(x);
    }
    for &b in extra_breaks {
        if b > lo && b < hi {
            breaks.push(b);
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    Ok(breaks.windows(2).map(|w| (w[0], w[1])).collect())
}

fn integrate_kernel_piece<K: Fn(f64, f64) -> f64>(
    params: &GegenbauerParams,
    pp: &PotentialParams,
    f: &TestFunction,
    x: f64,
    lo: f64,
    hi: f64,
    kernel_minus: K,
) -> Result<f64> {
    let two_lambda = 2.0 * params.lambda();
    let alpha = pp.alpha;
    let raw = |t: f64| kernel_minus(t, x) * f.eval_x(t) * t.sinh().powf(two_lambda);

    // endpoint exponents: t^{2λ} at 0, |t−x|^{α−1} where the piece abuts x
    let beta_left = if lo == 0.0 {
        two_lambda
    } else if (lo - x).abs() < 1e-14 {
        alpha - 1.0
    } else {
        0.0
    };
    let beta_right = if (hi - x).abs() < 1e-14 { alpha - 1.0 } else { 0.0 };

    if beta_left == 0.0 && beta_right == 0.0 {
        return Ok(integrate_finite(raw, lo, hi, &QuadratureSpec::loose())?.value);
    }
    let spec = QuadratureSpec::loose().with_exponents(beta_left, beta_right);
    let g = move |t: f64| {
        let mut v = raw(t);
        if beta_left != 0.0 {
            v /= (t - lo).powf(beta_left);
        }
        if beta_right != 0.0 {
            v /= (hi - t).powf(beta_right);
        }
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    Ok(integrate_singular(g, lo, hi, &spec)?.value)
}

/// Kernel-form potential: ∫_0^∞ A^λ_{ch t}(sh x)^{α−2λ−1} f(ch t) sh^{2λ} t dt.
pub fn riesz_apply(
    params: &GegenbauerParams,
    pp: &PotentialParams,
    f: &TestFunction,
    x: f64,
) -> Result<f64> {
    if !(x >= RIESZ_X_MIN) {
        return Err(Error::InvalidParameter(format!(
            "potential evaluation needs x >= {RIESZ_X_MIN} (got {x})"
        )));
    }
    let mut total = 0.0;
    for (lo, hi) in kernel_form_pieces(f, x, &[])? {
        total += integrate_kernel_piece(params, pp, f, x, lo, hi, |t, x| {
            shifted_kernel(params, pp, t, x).unwrap_or(f64::NAN)
        })?;
    }
    Ok(total)
}

/// The same integral split at a radius r into near and far parts; their sum
/// must not depend on r.
pub fn riesz_apply_split(
    params: &GegenbauerParams,
    pp: &PotentialParams,
    f: &TestFunction,
    x: f64,
    r: f64,
) -> Result<(f64, f64)> {
    if !(x >= RIESZ_X_MIN) {
        return Err(Error::InvalidParameter(format!(
            "potential evaluation needs x >= {RIESZ_X_MIN} (got {x})"
        )));
    }
    let mut near = 0.0;
    let mut far = 0.0;
    for (lo, hi) in kernel_form_pieces(f, x, &[r])? {
        let v = integrate_kernel_piece(params, pp, f, x, lo, hi, |t, x| {
            shifted_kernel(params, pp, t, x).unwrap_or(f64::NAN)
        })?;
        if hi <= r + 1e-14 {
            near += v;
        } else {
            far += v;
        }
    }
    Ok((near, far))
}

/// Γ(α/2)^{−1} ∫_0^∞ r^{α/2−1} h_r(ch x) dr: the heat-semigroup kernel of
/// the potential at one point, with the degree-γ eigenfunction values
/// memoized across the nested quadratures.
pub fn heat_riesz_kernel(params: &GegenbauerParams, pp: &PotentialParams, x: f64) -> Result<f64> {
    let lambda = params.lambda();
    let alpha = pp.alpha;
    let p_cache: RefCell<HashMap<u64, f64>> = RefCell::new(HashMap::new());
    let p_of = |g: f64| -> f64 {
        let k = g.to_bits();
        if let Some(&v) = p_cache.borrow().get(&k) {
            return v;
        }
        let v = crate::transform::legendre_p_cached_entry(params, g, x);
        p_cache.borrow_mut().insert(k, v);
        v
    };

    let h_r = |r: f64| -> f64 {
        // same split as the standalone heat kernel, inlined over the memo
        let delta = 0.5f64;
        let spec = QuadratureSpec::default().with_exponents(lambda - 0.5, 0.0);
        let near = integrate_singular(
            |g: f64| {
                (-g * (g + 2.0 * lambda) * r).exp() * p_of(g.max(1.0)) * (g + 1.0).powf(lambda - 0.5)
            },
            1.0,
            1.0 + delta,
            &spec,
        );
        let p_rate = (2.0 * x.cosh()).ln();
        let rate = (2.0 * (1.0 + delta) + 2.0 * lambda) * r + p_rate;
        let cutoff = (1.0 + (27.6 / r).sqrt().min(27.6 / p_rate)).max(2.0);
        let spec = QuadratureSpec::default().with_truncation(
            crate::quadrature::TruncationPolicy::exponential(cutoff, rate, 1e-12),
        );
        let far = crate::quadrature::integrate_semi_infinite(
            |g: f64| {
                (-g * (g + 2.0 * lambda) * r).exp()
                    * p_of(g)
                    * (g * g - 1.0).powf(lambda - 0.5)
            },
            1.0 + delta,
            &spec,
        );
        match (near, far) {
            (Ok(a), Ok(b)) => a.value + b.value,
            _ => f64::NAN,
        }
    };

    // r^{α/2−1} is singular at 0; the heat kernel bound gives the e^{−r}
    // majorant for the tail
    let spec = QuadratureSpec::loose().with_exponents(0.5 * alpha - 1.0, 0.0);
    let near = integrate_singular(|r: f64| h_r(r.max(1e-12)), 0.0, 1.0, &spec)?;
    let spec = QuadratureSpec::loose()
        .with_truncation(crate::quadrature::TruncationPolicy::exponential(30.0, 1.0, 1e-12));
    let far = crate::quadrature::integrate_semi_infinite(
        |r: f64| r.powf(0.5 * alpha - 1.0) * h_r(r),
        1.0,
        &spec,
    )?;
    let norm = crate::special::gamma_fn(0.5 * alpha)?;
    Ok((near.value + far.value) / norm)
}

/// Heat-form potential at the half-line coordinate t:
/// Γ(α/2)^{−1} ∫∫ r^{α/2−1} h_r(ch x) A^λ_{ch t} f(ch x) sh^{2λ} x dx dr,
/// computed with the r-integral inner.
pub fn riesz_heat_form(
    params: &GegenbauerParams,
    pp: &PotentialParams,
    f: &TestFunction,
    t: f64,
) -> Result<f64> {
    let two_lambda = 2.0 * params.lambda();
    let (lo, hi) = match (f.support_hint(), f.decay_hint()) {
        (Some((a, b)), _) => ((a - t).max(0.0), b + t),
        (None, Some(_)) => {
            let (_, x_hi) = f.norm_domain(1e-12)?;
            (0.0, x_hi + t)
        }
        _ => {
            return Err(Error::NormDivergence(format!(
                "no domain certificate for {f}"
            )))
        }
    };
    let inner_spec = QuadratureSpec::default();
    let integrand = |x: f64| {
        let kernel = heat_riesz_kernel(params, pp, x.max(1e-9)).unwrap_or(f64::NAN);
        let shifted =
            shift_apply_fn(params, |y| f.eval(y), t, x, &inner_spec).unwrap_or(f64::NAN);
        kernel * shifted * x.sinh().powf(two_lambda)
    };
    if lo == 0.0 {
        let spec = QuadratureSpec {
            abs_tol: 1e-7,
            rel_tol: 1e-5,
            ..QuadratureSpec::default()
        }
        .with_exponents(two_lambda, 0.0);
        let g = |x: f64| {
            if x == 0.0 {
                return 0.0;
            }
            integrand(x) / x.powf(two_lambda)
        };
        Ok(integrate_singular(g, 0.0, hi, &spec)?.value)
    } else {
        let spec = QuadratureSpec {
            abs_tol: 1e-7,
            rel_tol: 1e-5,
            ..QuadratureSpec::default()
        };
        Ok(integrate_finite(integrand, lo, hi, &spec)?.value)
    }
}

/// The majorant side of the kernel bound: ∫ |A^λ_{ch t} f(ch x)|
/// (sh x)^{α−2λ−1} sh^{2λ} x dx, whose integrand behaves like x^{α−1} at
/// the origin.
pub fn kernel_bound_majorant(
    params: &GegenbauerParams,
    pp: &PotentialParams,
    f: &TestFunction,
    t: f64,
) -> Result<f64> {
    let two_lambda = 2.0 * params.lambda();
    let e = pp.alpha - two_lambda - 1.0;
    let (_, hi) = f.norm_domain(1e-12)?;
    let hi = hi + t;
    let inner_spec = QuadratureSpec::default();
    let spec = QuadratureSpec::loose().with_exponents(pp.alpha - 1.0, 0.0);
    let g = |x: f64| {
        if x == 0.0 {
            return 0.0;
        }
        let shifted =
            shift_apply_fn(params, |y| f.eval(y), t, x, &inner_spec).unwrap_or(f64::NAN);
        let weight = x.sinh().powf(e) * x.sinh().powf(two_lambda) / x.powf(pp.alpha - 1.0);
        shifted.abs() * weight
    };
    Ok(integrate_singular(g, 0.0, hi, &spec)?.value)
}

/// ‖ℑ^α f‖_{q,λ} / ‖f‖_{p,λ} over the truncated domain, the potential
/// sampled on a grid above the kernel's singular point.
pub fn sobolev_ratio(
    params: &GegenbauerParams,
    pp: &PotentialParams,
    f: &TestFunction,
) -> Result<f64> {
    if !(pp.p > 1.0) || !pp.in_sobolev_regime(params) {
        return Err(Error::InvalidParameter(format!(
            "Sobolev regime needs 1 < p < (2λ+1)/α (p = {}, alpha = {})",
            pp.p, pp.alpha
        )));
    }
    let den = crate::spaces::lp_norm(params, f, pp.p)?;
    if den == 0.0 {
        return Err(Error::ZeroInputNorm(f.name()));
    }
    let grid = potential_grid(params, pp, f)?;
    let (_, hi) = f.norm_domain(1e-12)?;
    let num = crate::spaces::lp_norm_fn(params, &|x| grid.eval_x(x), pp.q, hi + 1.0)?;
    Ok(num / den)
}

/// Superlevel profile of the kernel-form potential at p = 1 thresholds.
pub fn weak_1q_profile(
    params: &GegenbauerParams,
    pp: &PotentialParams,
    f: &TestFunction,
    betas: &[f64],
) -> Result<DistributionProfile> {
    let grid = potential_grid(params, pp, f)?;
    let norm_input = crate::spaces::lp_norm(params, f, 1.0)?;
    let measures = betas
        .iter()
        .map(|&beta| {
            crate::maximal::superlevel_measure(params, grid.x_grid(), grid.values(), beta)
        })
        .collect();
    Ok(DistributionProfile {
        thresholds: betas.to_vec(),
        superlevel_measures: measures,
        norm_input,
    })
}

/// Potential sampled over the truncated domain, starting at the evaluation
/// floor.
fn potential_grid(
    params: &GegenbauerParams,
    pp: &PotentialParams,
    f: &TestFunction,
) -> Result<GridFunction> {
    let (_, hi) = f.norm_domain(1e-12)?;
    let hi = hi + 1.0;
    let n = 61usize;
    let xs: Vec<f64> = (0..n)
        .map(|i| RIESZ_X_MIN + (hi - RIESZ_X_MIN) * i as f64 / (n - 1) as f64)
        .collect();
    let values: Vec<Result<f64>> = xs
        .par_iter()
        .map(|&x| riesz_apply(params, pp, f, x))
        .collect();
    let mut v = Vec::with_capacity(n);
    for r in values {
        v.push(r?);
    }
    GridFunction::new(xs, v, Interpolation::Linear)
}

/// The modified potential: the kernel is corrected by
/// (sh t)^{α−2λ−1}·χ_{t>1/4}, which keeps the integral finite in the
/// borderline regime p·α = 2λ+1.
pub fn modified_riesz(
    params: &GegenbauerParams,
    pp: &PotentialParams,
    f: &TestFunction,
    x: f64,
) -> Result<f64> {
    if !pp.in_bmo_regime(params) {
        return Err(Error::InvalidParameter(format!(
            "modified potential needs p·α = 2λ+1 (p = {}, alpha = {})",
            pp.p, pp.alpha
        )));
    }
    if !(x >= RIESZ_X_MIN) {
        return Err(Error::InvalidParameter(format!(
            "potential evaluation needs x >= {RIESZ_X_MIN} (got {x})"
        )));
    }
    let e = pp.alpha - 2.0 * params.lambda() - 1.0;
    let mut total = 0.0;
    for (lo, hi) in kernel_form_pieces(f, x, &[0.25])? {
        total += integrate_kernel_piece(params, pp, f, x, lo, hi, |t, x| {
            let correction = if t > 0.25 { t.sinh().powf(e) } else { 0.0 };
            shifted_kernel(params, pp, t, x).unwrap_or(f64::NAN) - correction
        })?;
    }
    Ok(total)
}

/// Near part F₁ of the modified potential at threshold r/4.
pub fn modified_riesz_f1(
    params: &GegenbauerParams,
    pp: &PotentialParams,
    f: &TestFunction,
    x: f64,
    r: f64,
) -> Result<f64> {
    let e = pp.alpha - 2.0 * params.lambda() - 1.0;
    let quarter = 0.25 * r;
    let mut total = 0.0;
    for (lo, hi) in kernel_form_pieces(f, x, &[0.25, quarter])? {
        if lo >= quarter {
            continue;
        }
        let hi = hi.min(quarter);
        if hi <= lo {
            continue;
        }
        total += integrate_kernel_piece(params, pp, f, x, lo, hi, |t, x| {
            let correction = if t > 0.25 { t.sinh().powf(e) } else { 0.0 };
            shifted_kernel(params, pp, t, x).unwrap_or(f64::NAN) - correction
        })?;
    }
    Ok(total)
}

/// The centering constants at threshold r/4: a₁ over
/// (0, r/4) ∖ (0, min{1/4, r/4}) with a minus sign, a₂ over
/// (0, max{1/4, r/4}) ∖ (0, r/4).
pub fn bmo_center(
    params: &GegenbauerParams,
    pp: &PotentialParams,
    f: &TestFunction,
    r: f64,
) -> Result<BmoCenter> {
    let e = pp.alpha - 2.0 * params.lambda() - 1.0;
    let two_lambda = 2.0 * params.lambda();
    let quarter_r = 0.25 * r;
    let window = |lo: f64, hi: f64| -> Result<f64> {
        if hi <= lo {
            return Ok(0.0);
        }
        Ok(integrate_finite(
            |t: f64| t.sinh().powf(e) * f.eval_x(t) * t.sinh().powf(two_lambda),
            lo,
            hi,
            &QuadratureSpec::loose(),
        )?
        .value)
    };
    let a1 = -window(quarter_r.min(0.25), quarter_r)?;
    let a2 = window(quarter_r, quarter_r.max(0.25))?;
    Ok(BmoCenter { a1, a2 })
}

/// bmo_norm(modified potential) / ‖f‖_{p,λ} at the borderline exponents.
pub fn bmo_ratio(
    params: &GegenbauerParams,
    pp: &PotentialParams,
    f: &TestFunction,
) -> Result<f64> {
    let den = crate::spaces::lp_norm(params, f, pp.p)?;
    if den == 0.0 {
        return Err(Error::ZeroInputNorm(f.name()));
    }
    let (_, hi) = f.norm_domain(1e-12)?;
    let hi = hi + 1.0;
    let n = 49usize;
    let xs: Vec<f64> = (0..n)
        .map(|i| RIESZ_X_MIN + (hi - RIESZ_X_MIN) * i as f64 / (n - 1) as f64)
        .collect();
    let values: Vec<Result<f64>> = xs
        .par_iter()
        .map(|&x| modified_riesz(params, pp, f, x))
        .collect();
    let mut v = Vec::with_capacity(n);
    for r in values {
        v.push(r?);
    }
    let grid = GridFunction::new(xs, v, Interpolation::Linear)?;
    let lattice = crate::spaces::SweepLattice::default_for(params, hi);
    let num = crate::spaces::bmo_norm(params, &crate::spaces::Oscilland::Sampled(&grid), &lattice)?;
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (GegenbauerParams, PotentialParams, TestFunction) {
        let p = GegenbauerParams::with_lambda(0.25).unwrap();
        let pp = PotentialParams::new(&p, 0.5, 2.0).unwrap();
        let f = TestFunction::bump(1.0, 2.0).unwrap();
        (p, pp, f)
    }

    #[test]
    fn exponent_arithmetic() {
        let p = GegenbauerParams::with_lambda(0.25).unwrap();
        let pp = PotentialParams::new(&p, 0.5, 2.0).unwrap();
        assert!((pp.q() - 6.0).abs() < 1e-12);
        assert!(pp.in_sobolev_regime(&p));
        let pp3 = PotentialParams::new(&p, 0.5, 3.0).unwrap();
        assert!(pp3.in_bmo_regime(&p));
        assert!(pp3.q().is_infinite());
        assert!(PotentialParams::new(&p, 2.0, 2.0).is_err());
    }

    #[test]
    fn potential_of_zero_is_zero() {
        let (p, pp, f) = setup();
        let v = riesz_apply(&p, &pp, &f.scaled(0.0), 1.5).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn potential_homogeneity() {
        let (p, pp, f) = setup();
        let one = riesz_apply(&p, &pp, &f, 1.5).unwrap();
        let two = riesz_apply(&p, &pp, &f.scaled(2.0), 1.5).unwrap();
        assert!(((two - 2.0 * one) / two).abs() < 1e-9);
    }

    #[test]
    fn split_is_independent_of_radius() {
        let (p, pp, f) = setup();
        let x = 1.5;
        let unsplit = riesz_apply(&p, &pp, &f, x).unwrap();
        for &r in &[0.7, 1.3, 1.8] {
            let (near, far) = riesz_apply_split(&p, &pp, &f, x, r).unwrap();
            assert!(
                ((near + far - unsplit) / unsplit).abs() < 1e-4,
                "r {r}: {near} + {far} vs {unsplit}"
            );
        }
    }

    #[test]
    fn potential_rejects_singular_evaluation_point() {
        let (p, pp, f) = setup();
        assert!(riesz_apply(&p, &pp, &f, 0.01).is_err());
    }

    #[test]
    fn heat_form_zero_function() {
        let (p, pp, f) = setup();
        let v = riesz_heat_form(&p, &pp, &f.scaled(0.0), 0.5).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn heat_form_finite_and_kernel_bounded() {
        let (p, pp, f) = setup();
        let t = 0.5;
        let v = riesz_heat_form(&p, &pp, &f, t).unwrap();
        assert!(v.is_finite() && v > 0.0);
        let majorant = kernel_bound_majorant(&p, &pp, &f, t).unwrap();
        // the empirical constant of the kernel bound is recorded as a
        // fixture; here we only require the right shape
        assert!(majorant > 0.0);
        let ratio = v.abs() / majorant;
        assert!(ratio.is_finite());
        assert!(
            ratio <= crate::test_fixtures::C56_KERNEL_BOUND,
            "ratio {ratio} above frozen constant"
        );
    }

    #[test]
    fn sobolev_ratio_finite_and_stable() {
        let (p, pp, f) = setup();
        let v = sobolev_ratio(&p, &pp, &f).unwrap();
        assert!(v.is_finite() && v > 0.0);
        assert!(
            v <= crate::test_fixtures::C_SOBOLEV,
            "ratio {v} above frozen constant"
        );
    }

    #[test]
    fn weak_profile_monotone() {
        let p = GegenbauerParams::with_lambda(0.25).unwrap();
        let pp = PotentialParams::new(&p, 0.5, 1.0).unwrap();
        let f = TestFunction::bump(1.0, 2.0).unwrap();
        let betas = [1e-3, 1e-2, 0.1, 1.0, 1e3];
        let prof = weak_1q_profile(&p, &pp, &f, &betas).unwrap();
        for w in prof.superlevel_measures.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        assert_eq!(*prof.superlevel_measures.last().unwrap(), 0.0);
    }

    #[test]
    fn modified_potential_linearity() {
        let p = GegenbauerParams::with_lambda(0.25).unwrap();
        let pp = PotentialParams::new(&p, 0.5, 3.0).unwrap();
        let f = TestFunction::bump(1.0, 2.0).unwrap();
        let one = modified_riesz(&p, &pp, &f, 1.5).unwrap();
        let two = modified_riesz(&p, &pp, &f.scaled(2.0), 1.5).unwrap();
        assert!(((two - 2.0 * one) / two).abs() < 1e-9);
        let zero = modified_riesz(&p, &pp, &f.scaled(0.0), 1.5).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn bmo_ratio_scale_invariant() {
        let p = GegenbauerParams::with_lambda(0.25).unwrap();
        let pp = PotentialParams::new(&p, 0.5, 3.0).unwrap();
        let f = TestFunction::bump(1.0, 2.0).unwrap();
        let r1 = bmo_ratio(&p, &pp, &f).unwrap();
        let r2 = bmo_ratio(&p, &pp, &f.scaled(2.0)).unwrap();
        assert!(((r1 - r2) / r1).abs() < 1e-6, "{r1} vs {r2}");
    }
}
