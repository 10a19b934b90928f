//! Registry of analytic test functions of the argument y = ch x ≥ 1, and
//! sampled grid functions produced by the operators.

use crate::error::{Error, Result};
use std::fmt;

/// A named analytic function handle evaluable at any y = ch x ≥ 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    kind: Kind,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    /// Smooth, compactly supported in x ∈ (a, b): exp(−1/((x−a)(b−x))).
    Bump { a: f64, b: f64 },
    /// y ↦ e^{−κ·arcch y}, i.e. e^{−κ x}.
    ExpDecay { kappa: f64 },
    /// Characteristic function of x ∈ (a, b).
    Indicator { a: f64, b: f64 },
    /// y ↦ y.
    Identity,
    ConstantOne,
    /// Riesz kernel y ↦ (y²−1)^{(α−2λ−1)/2}, i.e. (sh x)^{α−2λ−1}.
    PowerKernel { exponent: f64 },
    /// Pointwise scaling of another registry function.
    Scaled { inner: Box<Kind>, factor: f64 },
}

impl TestFunction {
    pub fn bump(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && a < b) {
            return Err(Error::InvalidParameter(format!(
                "bump support requires 0 <= a < b (got {a}, {b})"
            )));
        }
        Ok(Self {
            kind: Kind::Bump { a, b },
        })
    }

    pub fn exp_decay(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "exp_decay rate must be positive (got {kappa})"
            )));
        }
        Ok(Self {
            kind: Kind::ExpDecay { kappa },
        })
    }

    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && a < b) {
            return Err(Error::InvalidParameter(format!(
                "indicator support requires 0 <= a < b (got {a}, {b})"
            )));
        }
        Ok(Self {
            kind: Kind::Indicator { a, b },
        })
    }

    pub fn identity() -> Self {
        Self {
            kind: Kind::Identity,
        }
    }

    pub fn constant_one() -> Self {
        Self {
            kind: Kind::ConstantOne,
        }
    }

    /// (sh x)^{α−2λ−1} as a function of y = ch x.
    pub fn power_kernel(alpha: f64, lambda: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0 * lambda + 1.0) {
            return Err(Error::InvalidParameter(format!(
                "power kernel requires 0 < alpha < 2λ+1 (alpha {alpha}, lambda {lambda})"
            )));
        }
        Ok(Self {
            kind: Kind::PowerKernel {
                exponent: alpha - 2.0 * lambda - 1.0,
            },
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            kind: Kind::Scaled {
                inner: Box::new(self.kind.clone()),
                factor,
            },
        }
    }

    /// Parse a registry key such as `bump:1,2`, `exp-decay:2`,
    /// `indicator:0.5,1`, `identity`, `one`.
    pub fn parse(key: &str) -> Result<Self> {
        let (name, args) = match key.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (key, None),
        };
        let two = |args: Option<&str>| -> Result<(f64, f64)> {
            let raw = args.ok_or_else(|| Error::UnknownFunction(key.into()))?;
            let mut it = raw.split(',');
            let a = it
                .next()
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::UnknownFunction(key.into()))?;
            let b = it
                .next()
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::UnknownFunction(key.into()))?;
            Ok((a, b))
        };
        match name {
            "bump" => {
                let (a, b) = two(args)?;
                Self::bump(a, b)
            }
            "exp-decay" | "exp_decay" => {
                let kappa = args
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::UnknownFunction(key.into()))?;
                Self::exp_decay(kappa)
            }
            "indicator" => {
                let (a, b) = two(args)?;
                Self::indicator(a, b)
            }
            "identity" | "id" => Ok(Self::identity()),
            "one" | "constant-one" | "constant_one" => Ok(Self::constant_one()),
            _ => Err(Error::UnknownFunction(key.into())),
        }
    }

    /// Evaluate at y = ch x; arguments below 1 (roundoff) are clamped.
    pub fn eval(&self, y: f64) -> f64 {
        self.kind.eval(y.max(1.0))
    }

    /// Evaluate at the half-line coordinate x ≥ 0.
    pub fn eval_x(&self, x: f64) -> f64 {
        self.kind.eval_x(x.abs())
    }

    /// Support interval in x, when compact.
    pub fn support_hint(&self) -> Option<(f64, f64)> {
        self.kind.support_hint()
    }

    /// Decay exponent κ with |f(ch x)| ≲ e^{−κx}, when applicable.
    pub fn decay_hint(&self) -> Option<f64> {
        self.kind.decay_hint()
    }

    /// Truncation domain [0, X] certifying the weighted p-norm tails, sized
    /// from the support/decay hints. Heavy-tail registry entries without a
    /// hint are rejected.
    pub fn norm_domain(&self, tail_tol: f64) -> Result<(f64, f64)> {
        if let Some((_, b)) = self.support_hint() {
            return Ok((0.0, b + 1.0));
        }
        if let Some(kappa) = self.decay_hint() {
            return Ok((0.0, tail_tol.ln().abs() / kappa + 1.0));
        }
        Err(Error::NormDivergence(format!(
            "no tail certificate for {self}"
        )))
    }

    pub fn name(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

impl Kind {
    fn eval(&self, y: f64) -> f64 {
        match self {
            Kind::Bump { .. } | Kind::Indicator { .. } | Kind::ExpDecay { .. } => {
                self.eval_x(y.acosh())
            }
            Kind::Identity => y,
            Kind::ConstantOne => 1.0,
            Kind::PowerKernel { exponent } => (y * y - 1.0).powf(0.5 * exponent),
            Kind::Scaled { inner, factor } => factor * inner.eval(y),
        }
    }

    fn eval_x(&self, x: f64) -> f64 {
        match self {
            Kind::Bump { a, b } => {
                if x > *a && x < *b {
                    (-1.0 / ((x - a) * (b - x))).exp()
                } else {
                    0.0
                }
            }
            Kind::ExpDecay { kappa } => (-kappa * x).exp(),
            Kind::Indicator { a, b } => {
                if x > *a && x < *b {
                    1.0
                } else {
                    0.0
                }
            }
            Kind::Identity => x.cosh(),
            Kind::ConstantOne => 1.0,
            Kind::PowerKernel { exponent } => x.sinh().powf(*exponent),
            Kind::Scaled { inner, factor } => factor * inner.eval_x(x),
        }
    }

    fn support_hint(&self) -> Option<(f64, f64)> {
        match self {
            Kind::Bump { a, b } | Kind::Indicator { a, b } => Some((*a, *b)),
            Kind::Scaled { inner, .. } => inner.support_hint(),
            _ => None,
        }
    }

    fn decay_hint(&self) -> Option<f64> {
        match self {
            Kind::ExpDecay { kappa } => Some(*kappa),
            Kind::Scaled { inner, .. } => inner.decay_hint(),
            _ => None,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Bump { a, b } => write!(f, "bump:{a},{b}"),
            Kind::ExpDecay { kappa } => write!(f, "exp-decay:{kappa}"),
            Kind::Indicator { a, b } => write!(f, "indicator:{a},{b}"),
            Kind::Identity => write!(f, "identity"),
            Kind::ConstantOne => write!(f, "one"),
            Kind::PowerKernel { exponent } => write!(f, "power-kernel:{exponent}"),
            Kind::Scaled { inner, factor } => write!(f, "{factor}*{inner}"),
        }
    }
}

/// Interpolation rule of a sampled field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    Linear,
    None,
}

/// Samples of a computed field on a finite x-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    x_grid: Vec<f64>,
    values: Vec<f64>,
    interpolation: Interpolation,
}

impl GridFunction {
    pub fn new(x_grid: Vec<f64>, values: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        if x_grid.len() != values.len() || x_grid.len() < 2 {
            return Err(Error::InvalidParameter(
                "grid and values must have equal length >= 2".into(),
            ));
        }
        if !x_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(
                "grid must be strictly increasing".into(),
            ));
        }
        if x_grid[0] < 0.0 {
            return Err(Error::InvalidParameter("grid must start at x >= 0".into()));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter(
                "grid values must all be finite".into(),
            ));
        }
        Ok(Self {
            x_grid,
            values,
            interpolation,
        })
    }

    /// Sample a callable on a uniform grid of n points over [lo, hi].
    pub fn sample<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(lo < hi) {
            return Err(Error::InvalidParameter(
                "sampling needs n >= 2 and lo < hi".into(),
            ));
        }
        let step = (hi - lo) / (n - 1) as f64;
        let x_grid: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
        let values = x_grid.iter().map(|&x| f(x)).collect::<Vec<_>>();
        Self::new(x_grid, values, Interpolation::Linear)
    }

    pub fn x_grid(&self) -> &[f64] {
        &self.x_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Evaluate at the half-line coordinate x; linear interpolation inside
    /// the grid, zero outside.
    pub fn eval_x(&self, x: f64) -> f64 {
        let n = self.x_grid.len();
        if x < self.x_grid[0] || x > self.x_grid[n - 1] {
            return 0.0;
        }
        match self.interpolation {
            Interpolation::None => {
                // nearest sample
                let i = match self
                    .x_grid
                    .binary_search_by(|g| g.partial_cmp(&x).unwrap())
                {
                    Ok(i) => i,
                    Err(i) => i.min(n - 1),
                };
                self.values[i]
            }
            Interpolation::Linear => {
                let i = match self
                    .x_grid
                    .binary_search_by(|g| g.partial_cmp(&x).unwrap())
                {
                    Ok(i) => return self.values[i],
                    Err(i) => i,
                };
                let (x0, x1) = (self.x_grid[i - 1], self.x_grid[i]);
                let w = (x - x0) / (x1 - x0);
                self.values[i - 1] * (1.0 - w) + self.values[i] * w
            }
        }
    }

    /// Evaluate at y = ch x.
    pub fn eval(&self, y: f64) -> f64 {
        self.eval_x(y.max(1.0).acosh())
    }
}
