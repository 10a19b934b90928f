//! Adaptive quadrature for the three integral shapes used throughout the
//! crate: finite smooth intervals, finite intervals with algebraic endpoint
//! singularities (t−a)^β_left (b−t)^β_right, and semi-infinite integrals with
//! a certified tail bound. A seeded Monte-Carlo estimator serves as an
//! independent cross-check.
//!
//! The base rule is the embedded 7-point Gauss / 15-point Kronrod pair; the
//! local error is |K15 − G7| rescaled as in QUADPACK. Adaptivity is global
//! worst-interval-first bisection with a deterministic tie-break, so results
//! are bit-identical run to run.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Abscissae of the 15-point Kronrod rule on [-1, 1] (positive half).
/// Odd-index entries are the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// How the discarded tail of a semi-infinite integral is certified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailDecay {
    /// |f(t)| decays at least like e^{-rate·t} beyond the cutoff;
    /// tail ≤ |f(T)| / rate.
    Exponential { rate: f64 },
    /// |f(t)| decays at least like t^{-exponent} with exponent > 1;
    /// tail ≤ |f(T)|·T / (exponent − 1).
    PowerLaw { exponent: f64 },
}

/// Truncation policy for semi-infinite integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Initial upper limit T; doubled until the tail estimate certifies.
    pub cutoff: f64,
    /// Assumed decay of the integrand beyond the cutoff.
    pub decay: TailDecay,
    /// The discarded tail must be below this bound.
    pub tail_tol: f64,
}

impl TruncationPolicy {
    pub fn exponential(cutoff: f64, rate: f64, tail_tol: f64) -> Self {
        Self {
            cutoff,
            decay: TailDecay::Exponential { rate },
            tail_tol,
        }
    }

    pub fn power_law(cutoff: f64, exponent: f64, tail_tol: f64) -> Self {
        Self {
            cutoff,
            decay: TailDecay::PowerLaw { exponent },
            tail_tol,
        }
    }

    fn tail_estimate(&self, f_at_cutoff: f64, cutoff: f64) -> Result<f64> {
        match self.decay {
            TailDecay::Exponential { rate } => {
                if rate <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "exponential tail rate {rate} must be positive"
                    )));
                }
                Ok(f_at_cutoff.abs() / rate)
            }
            TailDecay::PowerLaw { exponent } => {
                if exponent <= 1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "power-law tail exponent {exponent} must exceed 1"
                    )));
                }
                Ok(f_at_cutoff.abs() * cutoff / (exponent - 1.0))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.cutoff > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cutoff {} must be positive",
                self.cutoff
            )));
        }
        if !(self.tail_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tail tolerance {} must be positive",
                self.tail_tol
            )));
        }
        Ok(())
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self::exponential(30.0, 1.0, 1e-12)
    }
}

/// Tolerances, subdivision budget and endpoint exponents for one integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// (β_left, β_right) of the algebraic endpoint weight, each > −1.
    pub singularity_exponents: (f64, f64),
    pub truncation: TruncationPolicy,
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerances must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        let (bl, br) = self.singularity_exponents;
        if !(bl > -1.0) {
            return Err(Error::ExponentNotIntegrable(bl));
        }
        if !(br > -1.0) {
            return Err(Error::ExponentNotIntegrable(br));
        }
        self.truncation.validate()
    }

    pub fn with_exponents(mut self, beta_left: f64, beta_right: f64) -> Self {
        self.singularity_exponents = (beta_left, beta_right);
        self
    }

    pub fn with_truncation(mut self, truncation: TruncationPolicy) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    /// Looser tolerances for the outer layer of doubly-nested operator
    /// integrals, where the inner layer already costs a full quadrature.
    pub fn loose() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-6,
            ..Self::default()
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 2000,
            singularity_exponents: (0.0, 0.0),
            truncation: TruncationPolicy::default(),
        }
    }
}

/// Value, error estimate and the number of interval splits spent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
}

impl IntegralResult {
    fn zero() -> Self {
        Self {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions_used: 0,
        }
    }

    fn merge(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            subdivisions_used: self.subdivisions_used + other.subdivisions_used,
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    if !fc.is_finite() {
        return Err(Error::NonFiniteSample { point: center });
    }
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3]; // center node is shared by the embedded rule
    let mut res_abs = kronrod.abs();
    let mut samples = [0.0f64; 15];
    samples[7] = fc;

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        if !f1.is_finite() {
            return Err(Error::NonFiniteSample { point: center - x });
        }
        if !f2.is_finite() {
            return Err(Error::NonFiniteSample { point: center + x });
        }
        samples[j] = f1;
        samples[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((samples[j] - mean).abs() + (samples[14 - j] - mean).abs());
    }

    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok((value, err))
}

/// ∫_a^b f, adaptive bisection with the embedded G7/K15 pair.
///
/// Splits the interval with the largest local error until the summed error
/// estimate meets max(abs_tol, rel_tol·|value|) or the subdivision budget is
/// exhausted.
pub fn integrate_finite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    spec.validate()?;
    if !(a < b) {
        return Err(Error::InvalidParameter(format!(
            "integration bounds must satisfy a < b (got {a}, {b})"
        )));
    }

    let (value, error) = gk15(&f, a, b)?;
    let mut segments = vec![Segment {
        a,
        b,
        value,
        error,
    }];
    let mut splits = 0usize;

    loop {
        let total_value: f64 = sorted_sum(&segments, |s| s.value);
        let total_error: f64 = sorted_sum(&segments, |s| s.error);
        let target = spec.abs_tol.max(spec.rel_tol * total_value.abs());
        if total_error <= target {
            return Ok(IntegralResult {
                value: total_value,
                error_estimate: total_error,
                subdivisions_used: splits,
            });
        }
        if splits >= spec.max_subdivisions {
            return Err(Error::ToleranceNotMet {
                subdivisions: splits,
                error_estimate: total_error,
                target,
            });
        }

        // worst interval first; ties broken by the left endpoint
        let mut worst = 0usize;
        for (i, s) in segments.iter().enumerate() {
            let w = &segments[worst];
            if s.error > w.error || (s.error == w.error && s.a < w.a) {
                worst = i;
            }
        }
        let Segment { a, b, .. } = segments.swap_remove(worst);
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // interval at floating-point resolution; keep it and stop refining
            let (v, _) = gk15(&f, a, b)?;
            segments.push(Segment {
                a,
                b,
                value: v,
                error: 0.0,
            });
            splits += 1;
            continue;
        }
        let (v1, e1) = gk15(&f, a, mid)?;
        let (v2, e2) = gk15(&f, mid, b)?;
        segments.push(Segment {
            a,
            b: mid,
            value: v1,
            error: e1,
        });
        segments.push(Segment {
            a: mid,
            b,
            value: v2,
            error: e2,
        });
        splits += 1;
    }
}

/// Deterministic summation: segments sorted by position before adding, so
/// the result does not depend on the refinement history.
fn sorted_sum<F: Fn(&Segment) -> f64>(segments: &[Segment], field: F) -> f64 {
    let mut idx: Vec<usize> = (0..segments.len()).collect();
    idx.sort_by(|&i, &j| segments[i].a.partial_cmp(&segments[j].a).unwrap());
    idx.iter().map(|&i| field(&segments[i])).sum()
}

/// ∫_a^b (t−a)^{β_left} (b−t)^{β_right} g(t) dt for bounded g.
///
/// The interval is split at its midpoint and each half is mapped by
/// t = a + u^{1/(1+β_left)} (mirrored on the right) so that the algebraic
/// weight is absorbed exactly and the transformed integrand is bounded.
pub fn integrate_singular<G: Fn(f64) -> f64>(
    g: G,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    spec.validate()?;
    if !(a < b) {
        return Err(Error::InvalidParameter(format!(
            "integration bounds must satisfy a < b (got {a}, {b})"
        )));
    }
    let (beta_left, beta_right) = spec.singularity_exponents;
    let mid = 0.5 * (a + b);

    // each half sees the opposite endpoint's weight as a smooth factor
    let left = {
        let p = 1.0 + beta_left;
        let rho = 1.0 / p;
        let upper = (mid - a).powf(p);
        let transformed = |u: f64| {
            let t = a + u.powf(rho).min(mid - a);
            (b - t).powf(beta_right) * g(t) * rho
        };
        integrate_finite(transformed, 0.0, upper, &spec_smooth(spec))?
    };
    let right = {
        let p = 1.0 + beta_right;
        let sigma = 1.0 / p;
        let upper = (b - mid).powf(p);
        let transformed = |v: f64| {
            let t = b - v.powf(sigma).min(b - mid);
            (t - a).powf(beta_left) * g(t) * sigma
        };
        integrate_finite(transformed, 0.0, upper, &spec_smooth(spec))?
    };
    Ok(left.merge(right))
}

fn spec_smooth(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        singularity_exponents: (0.0, 0.0),
        abs_tol: 0.5 * spec.abs_tol,
        ..*spec
    }
}

/// ∫_a^∞ f, truncated at a cutoff where the policy's decay majorant
/// certifies the discarded tail; the tail estimate is added to the error.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    spec.validate()?;
    let policy = spec.truncation;
    let mut cutoff = (a + policy.cutoff).max(a + 1e-6);
    let max_cutoff = a + policy.cutoff * 2f64.powi(24);

    let tail = loop {
        let sample = f(cutoff);
        if !sample.is_finite() {
            return Err(Error::NonFiniteSample { point: cutoff });
        }
        let est = policy.tail_estimate(sample, cutoff)?;
        if est <= policy.tail_tol {
            break est;
        }
        cutoff *= 2.0;
        if cutoff > max_cutoff {
            return Err(Error::TailNotCertified {
                estimate: est,
                tol: policy.tail_tol,
                cutoff,
            });
        }
    };

    // split the truncated range so decades of scale get their own segments
    let mut result = IntegralResult::zero();
    let mut lo = a;
    let mut width = (cutoff - a).min(1.0).max(1e-6);
    while lo < cutoff {
        let hi = (lo + width).min(cutoff);
        result = result.merge(integrate_finite(&f, lo, hi, spec)?);
        lo = hi;
        width *= 4.0;
    }
    result.error_estimate += tail;
    Ok(result)
}

/// Finite integration domain for the Monte-Carlo oracle.
#[derive(Debug, Clone, Copy)]
pub enum McDomain {
    Interval(f64, f64),
    Rect((f64, f64), (f64, f64)),
}

impl McDomain {
    fn volume(&self) -> f64 {
        match self {
            McDomain::Interval(a, b) => b - a,
            McDomain::Rect((a1, b1), (a2, b2)) => (b1 - a1) * (b2 - a2),
        }
    }
}

/// Unbiased Monte-Carlo estimate of an integral over a finite domain, with
/// standard error. Deterministic for a fixed seed.
pub fn mc_oracle<F: Fn(&[f64]) -> f64>(
    f: F,
    domain: McDomain,
    n: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample count must be >= 1".into()));
    }
    match domain {
        McDomain::Interval(a, b) if !(a < b) => {
            return Err(Error::InvalidParameter(format!(
                "domain must satisfy a < b (got {a}, {b})"
            )));
        }
        McDomain::Rect((a1, b1), (a2, b2)) if !(a1 < b1 && a2 < b2) => {
            return Err(Error::InvalidParameter(
                "rectangle sides must be nonempty".into(),
            ));
        }
        _ => {}
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for _ in 0..n {
        let v = match domain {
            McDomain::Interval(a, b) => {
                let t = rng.gen_range(a..b);
                f(&[t])
            }
            McDomain::Rect((a1, b1), (a2, b2)) => {
                let t1 = rng.gen_range(a1..b1);
                let t2 = rng.gen_range(a2..b2);
                f(&[t1, t2])
            }
        };
        if !v.is_finite() {
            return Err(Error::NonFiniteSample { point: v });
        }
        sum += v;
        sum_sq += v * v;
    }
    let volume = domain.volume();
    let mean = sum / n as f64;
    let var = (sum_sq / n as f64 - mean * mean).max(0.0);
    Ok((volume * mean, volume * (var / n as f64).sqrt()))
}
