//! The weighted measure μE = ∫_E sh^{2λ} t dt, the intervals H(x, r), and
//! the explicit two-sided small/large-radius envelopes of the origin-ball
//! measure.

use crate::error::{Error, Result};
use crate::params::GegenbauerParams;
use crate::quadrature::{integrate_finite, integrate_singular, QuadratureSpec};

/// The interval H(x, r) = (x−r, x+r) ∩ [0, ∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedInterval {
    center: f64,
    radius: f64,
}

impl WeightedInterval {
    pub fn new(center: f64, radius: f64) -> Result<Self> {
        if !(center >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "interval center must be >= 0 (got {center})"
            )));
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "interval radius must be > 0 (got {radius})"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// (max(x−r, 0), x+r)
    pub fn endpoints(&self) -> (f64, f64) {
        ((self.center - self.radius).max(0.0), self.center + self.radius)
    }
}

/// Which measure-envelope regime a radius falls in, split at the regime
/// constant c (boundary inclusive on the small side).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    SmallRadius,
    LargeRadius,
}

/// Explicit constants multiplying the regime's comparison function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeConstants {
    pub lower: f64,
    pub upper: f64,
    /// (sh r/2)^{2λ+1} in the small-radius regime, (ch r/2)^{4λ} in the
    /// large-radius regime.
    pub comparison: f64,
}

/// Two-sided envelope of the origin-ball measure at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeResult {
    pub lower: f64,
    pub upper: f64,
    pub measured: f64,
    pub regime: Regime,
    pub constants_used: EnvelopeConstants,
}

/// |H(x, r)|_λ = ∫_{H(x,r)} sh^{2λ} t dt.
///
/// When the interval touches the origin the integrand behaves like t^{2λ}
/// there, and the singular rule with β_left = 2λ is used for full accuracy.
pub fn ball_measure(params: &GegenbauerParams, iv: &WeightedInterval) -> Result<f64> {
    let (lo, hi) = iv.endpoints();
    weighted_length(params, lo, hi)
}

/// ∫_lo^hi sh^{2λ} t dt for 0 ≤ lo < hi.
pub fn weighted_length(params: &GegenbauerParams, lo: f64, hi: f64) -> Result<f64> {
    if !(lo >= 0.0 && lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "weighted length needs 0 <= lo < hi (got {lo}, {hi})"
        )));
    }
    let two_lambda = 2.0 * params.lambda();
    if lo == 0.0 {
        let spec = QuadratureSpec::default().with_exponents(two_lambda, 0.0);
        let r = integrate_singular(
            |t: f64| if t == 0.0 { 1.0 } else { (t.sinh() / t).powf(two_lambda) },
            0.0,
            hi,
            &spec,
        )?;
        Ok(r.value)
    } else {
        let spec = QuadratureSpec::default();
        let r = integrate_finite(|t: f64| t.sinh().powf(two_lambda), lo, hi, &spec)?;
        Ok(r.value)
    }
}

/// The two-sided origin-ball envelope with the explicit proof constants.
///
/// Small radius (0 < r ≤ c):
///   2^{λ+3/2}/((2λ+1)(1+ch c)^{1/2−λ}) · (sh r/2)^{2λ+1}
///     ≤ |H(0,r)|_λ ≤ 2^{2λ+1}/(2λ+1) · (sh r/2)^{2λ+1}.
/// Large radius (r > c):
///   2^{4λ+1}/((2λ+1) 3^{2λ+1}) · (ch r/2)^{4λ}
///     ≤ |H(0,r)|_λ ≤ 4^λ/(2λ) · (ch r/2)^{4λ}.
pub fn lemma1_envelope(params: &GegenbauerParams, r: f64) -> Result<EnvelopeResult> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "envelope radius must be positive (got {r})"
        )));
    }
    let lambda = params.lambda();
    let c = params.regime_constant();
    let measured = ball_measure(params, &WeightedInterval::new(0.0, r)?)?;

    let (regime, constants) = if r <= c {
        let comparison = (0.5 * r).sinh().powf(2.0 * lambda + 1.0);
        let lower = 2f64.powf(lambda + 1.5)
            / ((2.0 * lambda + 1.0) * (1.0 + c.cosh()).powf(0.5 - lambda));
        let upper = 2f64.powf(2.0 * lambda + 1.0) / (2.0 * lambda + 1.0);
        (
            Regime::SmallRadius,
            EnvelopeConstants {
                lower,
                upper,
                comparison,
            },
        )
    } else {
        let comparison = (0.5 * r).cosh().powf(4.0 * lambda);
        let lower = 2f64.powf(4.0 * lambda + 1.0)
            / ((2.0 * lambda + 1.0) * 3f64.powf(2.0 * lambda + 1.0));
        let upper = 4f64.powf(lambda) / (2.0 * lambda);
        (
            Regime::LargeRadius,
            EnvelopeConstants {
                lower,
                upper,
                comparison,
            },
        )
    };

    Ok(EnvelopeResult {
        lower: constants.lower * constants.comparison,
        upper: constants.upper * constants.comparison,
        measured,
        regime,
        constants_used: constants,
    })
}

/// Case-selected upper-bound comparison value of the off-origin ball
/// measure, without the unspecified proportionality constant:
/// for r ≤ c either r^{2λ+1} (x ≤ r) or ch^{2λ} x (x > r); for r > c either
/// ch^{2λ} r (x ≤ 2r) or ch^{2λ} x · ch^{2λ} r (x > 2r).
pub fn lemma2_bound(params: &GegenbauerParams, x: f64, r: f64) -> Result<f64> {
    if !(x >= 0.0) || !(r > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lemma2_bound needs x >= 0, r > 0 (got {x}, {r})"
        )));
    }
    let lambda = params.lambda();
    let c = params.regime_constant();
    let two_lambda = 2.0 * lambda;
    Ok(if r <= c {
        if x <= r {
            r.powf(two_lambda + 1.0)
        } else {
            x.cosh().powf(two_lambda)
        }
    } else if x <= 2.0 * r {
        r.cosh().powf(two_lambda)
    } else {
        x.cosh().powf(two_lambda) * r.cosh().powf(two_lambda)
    })
}

/// μ(H(x, 2r)) / μ(H(x, r)).
pub fn doubling_ratio(params: &GegenbauerParams, x: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(
            "doubling ratio requires r > 0".into(),
        ));
    }
    let small = ball_measure(params, &WeightedInterval::new(x, r)?)?;
    let big = ball_measure(params, &WeightedInterval::new(x, 2.0 * r)?)?;
    Ok(big / small)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{mc_oracle, McDomain};

    fn params() -> GegenbauerParams {
        GegenbauerParams::with_lambda(0.25).unwrap()
    }

    #[test]
    fn interval_clamps_at_origin() {
        let iv = WeightedInterval::new(0.5, 1.0).unwrap();
        assert_eq!(iv.endpoints(), (0.0, 1.5));
        let iv = WeightedInterval::new(2.0, 0.5).unwrap();
        assert_eq!(iv.endpoints(), (1.5, 2.5));
    }

    #[test]
    fn vanishing_interval_has_vanishing_measure() {
        let m = ball_measure(&params(), &WeightedInterval::new(0.0, 1e-6).unwrap()).unwrap();
        assert!(m < 1e-6);
        assert!(m > 0.0);
    }

    #[test]
    fn closed_form_at_lambda_half_edge() {
        // test-only λ = 1/2 edge: ∫_0^r sh t dt = ch r − 1
        let p = GegenbauerParams::new(0.499_999_999_9, 1.0).unwrap();
        let r = 1.3f64;
        let m = ball_measure(&p, &WeightedInterval::new(0.0, r).unwrap()).unwrap();
        assert!(((m - (r.cosh() - 1.0)) / m).abs() < 1e-6);
    }

    #[test]
    fn origin_ball_measure_matches_mc_oracle() {
        let p = params();
        let m = ball_measure(&p, &WeightedInterval::new(0.0, 1.0).unwrap()).unwrap();
        let (oracle, stderr) = mc_oracle(
            |t| t[0].sinh().powf(0.5),
            McDomain::Interval(0.0, 1.0),
            10_000_000,
            777,
        )
        .unwrap();
        assert!((m - oracle).abs() < 4.0 * stderr + 1e-9, "{m} vs {oracle}");
    }

    #[test]
    fn lemma1_small_radius_example() {
        let p = params();
        let env = lemma1_envelope(&p, 0.5).unwrap();
        assert_eq!(env.regime, Regime::SmallRadius);
        let sh = (0.25f64).sinh().powf(1.5);
        let lower = 2f64.powf(1.75) / (1.5 * (1.0 + 1f64.cosh()).powf(0.25)) * sh;
        let upper = 2f64.powf(1.5) / 1.5 * sh;
        assert!((env.lower - lower).abs() < 1e-12);
        assert!((env.upper - upper).abs() < 1e-12);
        assert!(env.lower <= env.measured && env.measured <= env.upper);
    }

    #[test]
    fn lemma1_large_radius_example() {
        let p = params();
        let env = lemma1_envelope(&p, 4.0).unwrap();
        assert_eq!(env.regime, Regime::LargeRadius);
        let ch = 2f64.cosh();
        let lower = 2f64.powf(2.0) / (1.5 * 3f64.powf(1.5)) * ch;
        let upper = 4f64.powf(0.25) / 0.5 * ch;
        assert!((env.lower - lower).abs() < 1e-12);
        assert!((env.upper - upper).abs() < 1e-12);
        assert!(env.lower <= env.measured && env.measured <= env.upper);
    }

    #[test]
    fn lemma1_boundary_radius_uses_small_regime() {
        let p = params();
        let env = lemma1_envelope(&p, 1.0).unwrap();
        assert_eq!(env.regime, Regime::SmallRadius);
        assert!(env.lower <= env.measured && env.measured <= env.upper);
    }

    #[test]
    fn lemma1_brackets_on_log_grid() {
        for lambda in [0.1, 0.25, 0.4] {
            let p = GegenbauerParams::with_lambda(lambda).unwrap();
            for i in 0..32 {
                let r = 0.01 * (10.0f64 / 0.01).powf(i as f64 / 31.0);
                let env = lemma1_envelope(&p, r).unwrap();
                assert!(
                    env.lower <= env.measured && env.measured <= env.upper,
                    "lambda {lambda}, r {r}: {} <= {} <= {} violated",
                    env.lower,
                    env.measured,
                    env.upper
                );
            }
        }
    }

    #[test]
    fn elementary_inequality_five() {
        // t ≤ sh t ≤ e^{2c} t on [0, 2c]
        let c = 1.0f64;
        for i in 0..=1000 {
            let t = 2.0 * c * i as f64 / 1000.0;
            assert!(t <= t.sinh() + 1e-15);
            assert!(t.sinh() <= (2.0 * c).exp() * t + 1e-15);
        }
    }

    #[test]
    fn lemma2_case_selection() {
        let p = params();
        assert!((lemma2_bound(&p, 0.3, 0.5).unwrap() - 0.5f64.powf(1.5)).abs() < 1e-15);
        assert!((lemma2_bound(&p, 5.0, 0.5).unwrap() - 5f64.cosh().powf(0.5)).abs() < 1e-12);
        assert!(
            (lemma2_bound(&p, 10.0, 3.0).unwrap()
                - 10f64.cosh().powf(0.5) * 3f64.cosh().powf(0.5))
            .abs()
                < 1e-9
        );
        // ratios stay finite on the covered cases
        for &(x, r) in &[(0.3, 0.5), (5.0, 0.5), (1.0, 2.0), (10.0, 3.0)] {
            let measured = ball_measure(&p, &WeightedInterval::new(x, r).unwrap()).unwrap();
            let bound = lemma2_bound(&p, x, r).unwrap();
            assert!(measured / bound > 0.0 && (measured / bound).is_finite());
        }
    }

    #[test]
    fn ball_measure_increases_with_radius() {
        let p = params();
        let mut last = 0.0;
        for i in 1..=20 {
            let r = 0.3 * i as f64;
            let m = ball_measure(&p, &WeightedInterval::new(1.0, r).unwrap()).unwrap();
            assert!(m > last);
            last = m;
        }
    }

    #[test]
    fn doubling_ratio_small_radius_limit() {
        // integrand ~ t^{2λ} at the origin forces the ratio to 2^{2λ+1}
        let p = params();
        let ratio = doubling_ratio(&p, 0.0, 1e-3).unwrap();
        assert!((ratio - 2f64.powf(1.5)).abs() < 0.01 * 2f64.powf(1.5));
    }

    #[test]
    fn doubling_ratio_lambda_half_edge() {
        let p = GegenbauerParams::new(0.499_999_999_9, 1.0).unwrap();
        let ratio = doubling_ratio(&p, 0.0, 1.0).unwrap();
        let exact = (2f64.cosh() - 1.0) / (1f64.cosh() - 1.0);
        assert!(((ratio - exact) / exact).abs() < 1e-6);
    }
}
