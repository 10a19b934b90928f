//! Weighted Lebesgue, Morrey-type and bounded-mean-oscillation norms built
//! on the shift operator, plus the embedding between the Morrey scales.

use crate::error::{Error, Result};
use crate::functions::{GridFunction, TestFunction};
use crate::maximal::RadiusGrid;
use crate::params::GegenbauerParams;
use crate::quadrature::{integrate_singular, QuadratureSpec};
use crate::shift::weighted_shift_average;
use rayon::prelude::*;

/// Norm selector: p, optional Morrey exponent, modified bracket flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    pub p: f64,
    pub morrey_gamma: Option<f64>,
    pub modified: bool,
}

impl NormSpec {
    pub fn lp(p: f64) -> Self {
        Self {
            p,
            morrey_gamma: None,
            modified: false,
        }
    }

    pub fn validate(&self, params: &GegenbauerParams) -> Result<()> {
        if !(self.p >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "p = {} must be >= 1",
                self.p
            )));
        }
        if let Some(g) = self.morrey_gamma {
            let cap = 2.0 * params.lambda() + 1.0;
            if !(0.0..=cap).contains(&g) {
                return Err(Error::InvalidParameter(format!(
                    "morrey exponent {g} outside [0, 2λ+1] = [0, {cap}]"
                )));
            }
        }
        Ok(())
    }
}

/// Shared (x, radius) lattice for the grid suprema of this module and the
/// maximal-operator fixtures.
#[derive(Debug, Clone)]
pub struct SweepLattice {
    pub x_grid: Vec<f64>,
    pub radius_grid: RadiusGrid,
}

impl SweepLattice {
    pub fn default_for(params: &GegenbauerParams, f_domain_hi: f64) -> Self {
        let n = 25usize;
        let x_grid = (0..n)
            .map(|i| f_domain_hi * i as f64 / (n - 1) as f64)
            .collect();
        Self {
            x_grid,
            radius_grid: RadiusGrid::default_for(params),
        }
    }

    pub fn refined(&self) -> Self {
        let mut x_grid = Vec::with_capacity(self.x_grid.len() * 2 - 1);
        for w in self.x_grid.windows(2) {
            x_grid.push(w[0]);
            x_grid.push(0.5 * (w[0] + w[1]));
        }
        x_grid.push(*self.x_grid.last().unwrap());
        Self {
            x_grid,
            radius_grid: self.radius_grid.refined(),
        }
    }
}

/// ‖f‖_{L_{p,λ}} = (∫_0^∞ |f(ch t)|^p sh^{2λ} t dt)^{1/p} over the
/// truncation domain certified by the registry hints; p = ∞ takes the grid
/// supremum.
pub fn lp_norm(params: &GegenbauerParams, f: &TestFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("p = {p} must be >= 1")));
    }
    let (_, hi) = f.norm_domain(1e-12)?;
    if p.is_infinite() {
        let n = 800;
        let mut sup: f64 = 0.0;
        for i in 0..=n {
            let x = hi * i as f64 / n as f64;
            sup = sup.max(f.eval_x(x).abs());
        }
        return Ok(sup);
    }
    lp_norm_fn(params, &|x| f.eval_x(x), p, hi)
}

/// Weighted p-norm of a callable of the half-line coordinate over [0, hi].
pub fn lp_norm_fn(
    params: &GegenbauerParams,
    f: &dyn Fn(f64) -> f64,
    p: f64,
    hi: f64,
) -> Result<f64> {
    let two_lambda = 2.0 * params.lambda();
    let spec = QuadratureSpec::loose().with_exponents(two_lambda, 0.0);
    let r = integrate_singular(
        |x: f64| {
            let ratio = if x == 0.0 { 1.0 } else { x.sinh() / x };
            f(x).abs().powf(p) * ratio.powf(two_lambda)
        },
        0.0,
        hi,
        &spec,
    )?;
    Ok(r.value.max(0.0).powf(1.0 / p))
}

/// Morrey-scale norm: grid supremum over the lattice of
/// bracket(r)^{−γ/p} (∫_0^r (A_t|f|(ch x))^p sh^{2λ} t dt)^{1/p} with
/// bracket = sh r/2, or min{1, sh r/2} in the modified scale.
pub fn morrey_norm(
    params: &GegenbauerParams,
    f: &TestFunction,
    p: f64,
    gamma_m: f64,
    modified: bool,
) -> Result<f64> {
    let spec = NormSpec {
        p,
        morrey_gamma: Some(gamma_m),
        modified,
    };
    spec.validate(params)?;
    let (_, hi) = f.norm_domain(1e-12)?;
    let lattice = SweepLattice::default_for(params, hi);
    morrey_norm_on_lattice(params, f, p, gamma_m, modified, &lattice)
}

pub fn morrey_norm_on_lattice(
    params: &GegenbauerParams,
    f: &TestFunction,
    p: f64,
    gamma_m: f64,
    modified: bool,
    lattice: &SweepLattice,
) -> Result<f64> {
    let radii = lattice.radius_grid.radii();
    let per_x: Vec<Result<f64>> = lattice
        .x_grid
        .par_iter()
        .map(|&x| -> Result<f64> {
            // cumulative segments of ∫_0^r (A_t|f|)^p dμ over the radius grid
            let g = |y: f64| f.eval(y).abs();
            let mut cum = 0.0;
            let mut prev = 0.0;
            let mut best: f64 = 0.0;
            for &r in radii {
                cum += weighted_shift_average(params, |y| g(y).powf(p), x, prev, r)?;
                prev = r;
                let mut bracket = (0.5 * r).sinh();
                if modified {
                    bracket = bracket.min(1.0);
                }
                let v = bracket.powf(-gamma_m / p) * cum.max(0.0).powf(1.0 / p);
                best = best.max(v);
            }
            Ok(best)
        })
        .collect();
    let mut sup: f64 = 0.0;
    for v in per_x {
        sup = sup.max(v?);
    }
    Ok(sup)
}

/// Functions a mean-oscillation norm can be computed for.
pub enum Oscilland<'a> {
    Analytic(&'a TestFunction),
    Sampled(&'a GridFunction),
}

impl Oscilland<'_> {
    fn eval(&self, y: f64) -> f64 {
        match self {
            Oscilland::Analytic(f) => f.eval(y),
            Oscilland::Sampled(g) => g.eval(y),
        }
    }
}

/// BMO-scale norm: grid supremum over the lattice of
/// |H(0,r)|_λ^{−1} ∫_0^r |A_t g(ch x) − g_{H(0,r)}(ch x)| sh^{2λ} t dt,
/// where g_{H(0,r)}(ch x) is the same average of the shifted g.
///
/// Mean and oscillation are formed from one fixed-rule sample of
/// t ↦ A_t g(ch x) per ball, so the oscillation of a constant sample vector
/// is exactly zero.
pub fn bmo_norm(
    params: &GegenbauerParams,
    g: &Oscilland<'_>,
    lattice: &SweepLattice,
) -> Result<f64> {
    let radii = lattice.radius_grid.radii();
    let two_lambda = 2.0 * params.lambda();
    let inner_spec = QuadratureSpec::default();
    let nodes = 33usize;
    let per_x: Vec<Result<f64>> = lattice
        .x_grid
        .par_iter()
        .map(|&x| -> Result<f64> {
            let mut best: f64 = 0.0;
            for &r in radii {
                let h = r / (nodes - 1) as f64;
                let mut values = Vec::with_capacity(nodes);
                let mut weights = Vec::with_capacity(nodes);
                for i in 0..nodes {
                    let t = h * i as f64;
                    let simpson = if i == 0 || i == nodes - 1 {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    let v = crate::shift::shift_apply_fn(
                        params,
                        |y| g.eval(y),
                        t,
                        x,
                        &inner_spec,
                    )?;
                    values.push(v);
                    weights.push(simpson * t.sinh().powf(two_lambda));
                }
                best = best.max(discrete_mean_oscillation(&values, &weights));
            }
            Ok(best)
        })
        .collect();
    let mut sup: f64 = 0.0;
    for v in per_x {
        sup = sup.max(v?);
    }
    Ok(sup)
}

/// Weighted mean oscillation of a sample vector; exactly zero when every
/// sample is identical.
fn discrete_mean_oscillation(values: &[f64], weights: &[f64]) -> f64 {
    let first = values[0];
    if values.iter().all(|&v| v == first) {
        return 0.0;
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let mean: f64 = values
        .iter()
        .zip(weights)
        .map(|(v, w)| v * w)
        .sum::<f64>()
        / total;
    values
        .iter()
        .zip(weights)
        .map(|(v, w)| (v - mean).abs() * w)
        .sum::<f64>()
        / total
}

/// Both sides of the Morrey-scale embedding: lhs the (1, 2λ+1−α) norm, rhs
/// the (p, γ) norm, under the scaling relation αp = 2λ+1−γ.
pub fn embedding_check(
    params: &GegenbauerParams,
    f: &TestFunction,
    p: f64,
    gamma_m: f64,
) -> Result<(f64, f64)> {
    let cap = 2.0 * params.lambda() + 1.0;
    let alpha = (cap - gamma_m) / p;
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "embedding needs alpha = (2λ+1−γ)/p > 0 (got {alpha})"
        )));
    }
    let lhs = morrey_norm(params, f, 1.0, cap - alpha, false)?;
    let rhs = morrey_norm(params, f, p, gamma_m, false)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{mc_oracle, McDomain};

    fn params() -> GegenbauerParams {
        GegenbauerParams::with_lambda(0.25).unwrap()
    }

    #[test]
    fn lp_norm_of_zero() {
        let p = params();
        let f = TestFunction::bump(1.0, 2.0).unwrap().scaled(0.0);
        assert_eq!(lp_norm(&p, &f, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn l1_norm_of_indicator_is_window_measure() {
        let p = params();
        let f = TestFunction::indicator(1.0, 2.0).unwrap();
        let norm = lp_norm(&p, &f, 1.0).unwrap();
        let measure = crate::measure::weighted_length(&p, 1.0, 2.0).unwrap();
        assert!(
            ((norm - measure) / measure).abs() < 1e-5,
            "{norm} vs {measure}"
        );
    }

    #[test]
    fn l2_norm_of_exp_decay_matches_mc_oracle() {
        let p = params();
        let f = TestFunction::exp_decay(2.0).unwrap();
        let norm = lp_norm(&p, &f, 2.0).unwrap();
        let (_, hi) = f.norm_domain(1e-12).unwrap();
        let (oracle_sq, stderr) = mc_oracle(
            |t| (-2.0 * t[0]).exp().powi(2) * t[0].sinh().powf(0.5),
            McDomain::Interval(0.0, hi),
            10_000_000,
            333,
        )
        .unwrap();
        assert!(
            (norm * norm - oracle_sq).abs() < 4.0 * stderr + 1e-9,
            "{} vs {}",
            norm * norm,
            oracle_sq
        );
    }

    #[test]
    fn norm_rejects_functions_without_tail_certificate() {
        let p = params();
        assert!(matches!(
            lp_norm(&p, &TestFunction::identity(), 2.0),
            Err(Error::NormDivergence(_))
        ));
    }

    #[test]
    fn modified_morrey_at_gamma_zero_bounds_lp_from_above() {
        let p = params();
        let f = TestFunction::bump(1.0, 2.0).unwrap();
        let lp = lp_norm(&p, &f, 2.0).unwrap();
        let mm = morrey_norm(&p, &f, 2.0, 0.0, true).unwrap();
        assert!(mm >= lp * (1.0 - 1e-4), "morrey {mm} vs lp {lp}");
        assert!(mm <= lp * (1.0 + 1e-3), "approaches from below: {mm} vs {lp}");
    }

    #[test]
    fn morrey_of_zero_vanishes() {
        let p = params();
        let f = TestFunction::bump(1.0, 2.0).unwrap().scaled(0.0);
        assert_eq!(morrey_norm(&p, &f, 2.0, 0.5, false).unwrap(), 0.0);
    }

    #[test]
    fn morrey_fixture_refinement_stable() {
        let p = params();
        let f = TestFunction::bump(1.0, 2.0).unwrap();
        let coarse = morrey_norm(&p, &f, 2.0, 0.5, false).unwrap();
        let (_, hi) = f.norm_domain(1e-12).unwrap();
        let fine = morrey_norm_on_lattice(
            &p,
            &f,
            2.0,
            0.5,
            false,
            &SweepLattice::default_for(&p, hi).refined(),
        )
        .unwrap();
        assert!((coarse - fine).abs() < 0.05 * fine, "{coarse} vs {fine}");
    }

    #[test]
    fn bmo_norm_of_constant_vanishes_exactly() {
        let p = params();
        let f = TestFunction::constant_one();
        let lattice = SweepLattice::default_for(&p, 3.0);
        let v = bmo_norm(&p, &Oscilland::Analytic(&f), &lattice).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn bmo_norm_invariant_under_constant_offset() {
        let p = params();
        let f = TestFunction::bump(1.0, 2.0).unwrap();
        let lattice = SweepLattice::default_for(&p, 3.0);
        let base = bmo_norm(&p, &Oscilland::Analytic(&f), &lattice).unwrap();
        // f + 1 through a sampled grid covering every probed point
        // (lattice x up to 3 plus radii up to 10)
        let grid = GridFunction::sample(|x| f.eval_x(x) + 1.0, 0.0, 20.0, 2001).unwrap();
        let shifted = bmo_norm(&p, &Oscilland::Sampled(&grid), &lattice).unwrap();
        assert!(
            (base - shifted).abs() < 0.02 * base.max(0.05),
            "base {base} vs offset {shifted}"
        );
    }

    #[test]
    fn embedding_homogeneity() {
        let p = params();
        let f = TestFunction::bump(1.0, 2.0).unwrap();
        let (l1, r1) = embedding_check(&p, &f, 2.0, 0.5).unwrap();
        let (l3, r3) = embedding_check(&p, &f.scaled(3.0), 2.0, 0.5).unwrap();
        assert!((l3 - 3.0 * l1).abs() < 1e-6 * l3.max(1e-12));
        assert!((r3 - 3.0 * r1).abs() < 1e-6 * r3.max(1e-12));
    }

    #[test]
    fn embedding_zero_function() {
        let p = params();
        let f = TestFunction::bump(1.0, 2.0).unwrap().scaled(0.0);
        let (lhs, rhs) = embedding_check(&p, &f, 2.0, 0.5).unwrap();
        assert_eq!((lhs, rhs), (0.0, 0.0));
    }

    #[test]
    fn norm_axioms_on_corpus_pair() {
        let p = params();
        let f = TestFunction::bump(1.0, 2.0).unwrap();
        let g = TestFunction::indicator(1.2, 1.8).unwrap();
        // homogeneity
        let nf = lp_norm(&p, &f, 2.0).unwrap();
        let nf2 = lp_norm(&p, &f.scaled(-2.0), 2.0).unwrap();
        assert!((nf2 - 2.0 * nf).abs() < 1e-6 * nf2);
        // triangle inequality via a sampled sum
        let ng = lp_norm(&p, &g, 2.0).unwrap();
        let sum = GridFunction::sample(|x| f.eval_x(x) + g.eval_x(x), 0.0, 3.0, 2001).unwrap();
        let nsum = lp_norm_fn(&p, &|x| sum.eval_x(x), 2.0, 3.0).unwrap();
        assert!(nsum <= nf + ng + 1e-3);
    }
}
