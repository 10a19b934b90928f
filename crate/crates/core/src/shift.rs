//! The generalized shift A^λ_{ch t} in its direct φ-integral form, the
//! transformed kernel (z-integral) form of its radial averages, and the
//! L_{p,λ} continuity modulus.
//!
//! The dual-form identity (φ-form against z-form of the averages) is the
//! central numerical cross-check of this module: it certifies the whole
//! substitution chain behind the maximal-function domination argument.

use crate::error::{Error, Result};
use crate::functions::TestFunction;
use crate::params::GegenbauerParams;
use crate::quadrature::{integrate_finite, integrate_singular, QuadratureSpec};

/// Overshoot of the profile argument beyond [−1, 1] that is attributed to
/// roundoff and clamped; anything larger is a caller error.
const PROFILE_CLAMP: f64 = 1e-9;

/// A^λ_{ch t} f(ch x): the hyperbolic-weighted average of f over
/// φ ∈ [0, π] with weight (sin φ)^{2λ−1}, normalized by
/// Γ(λ+1/2)/(Γ(1/2)Γ(λ)).
pub fn shift_apply(params: &GegenbauerParams, f: &TestFunction, t: f64, x: f64) -> Result<f64> {
    shift_apply_fn(params, |y| f.eval(y), t, x, &QuadratureSpec::default())
}

/// Shift of an arbitrary callable of y = ch(·); the workhorse behind
/// [`shift_apply`] and the nested operator integrals.
pub fn shift_apply_fn<F: Fn(f64) -> f64>(
    params: &GegenbauerParams,
    f: F,
    t: f64,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(t >= 0.0 && x >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "shift requires t >= 0 and x >= 0 (got t {t}, x {x})"
        )));
    }
    let lambda = params.lambda();
    let beta = 2.0 * lambda - 1.0;
    let pi = std::f64::consts::PI;
    let (cx, sx) = (x.cosh(), x.sinh());
    let (ct, st) = (t.cosh(), t.sinh());
    let spec = spec.with_exponents(beta, beta);
    let g = |phi: f64| {
        let y = cx * ct - sx * st * phi.cos();
        let ratio = if phi <= 0.0 || phi >= pi {
            1.0 / pi
        } else {
            phi.sin() / (phi * (pi - phi))
        };
        f(y.max(1.0)) * ratio.powf(beta)
    };
    let r = integrate_singular(g, 0.0, pi, &spec)?;
    Ok(params.shift_normalization() * r.value)
}

/// I(x, r) = ∫_0^r A^λ_{ch t} |f|(ch x) sh^{2λ} t dt by the direct φ-form,
/// outer quadrature over t nested over the shift's inner quadrature.
pub fn shift_average_integral(
    params: &GegenbauerParams,
    f: &TestFunction,
    x: f64,
    r: f64,
) -> Result<f64> {
    weighted_shift_average(params, |y| f.eval(y).abs(), x, 0.0, r)
}

/// ∫_{r_lo}^{r_hi} A^λ_{ch t} g(ch x) sh^{2λ} t dt for an arbitrary
/// integrand g of y = ch(·); segments starting at 0 treat the t^{2λ}
/// behavior of the weight with the singular rule.
pub fn weighted_shift_average<G: Fn(f64) -> f64 + Copy>(
    params: &GegenbauerParams,
    g: G,
    x: f64,
    r_lo: f64,
    r_hi: f64,
) -> Result<f64> {
    if !(r_lo >= 0.0 && r_lo < r_hi) {
        return Err(Error::InvalidParameter(format!(
            "average segment needs 0 <= r_lo < r_hi (got {r_lo}, {r_hi})"
        )));
    }
    let two_lambda = 2.0 * params.lambda();
    let inner_spec = QuadratureSpec::default();
    let outer = QuadratureSpec::loose();
    if r_lo == 0.0 {
        let spec = outer.with_exponents(two_lambda, 0.0);
        let integrand = |t: f64| {
            let shifted = shift_apply_fn(params, g, t, x, &inner_spec).unwrap_or(f64::NAN);
            let ratio = if t == 0.0 { 1.0 } else { t.sinh() / t };
            shifted * ratio.powf(two_lambda)
        };
        Ok(integrate_singular(integrand, 0.0, r_hi, &spec)?.value)
    } else {
        let integrand = |t: f64| {
            let shifted = shift_apply_fn(params, g, t, x, &inner_spec).unwrap_or(f64::NAN);
            shifted * t.sinh().powf(two_lambda)
        };
        Ok(integrate_finite(integrand, r_lo, r_hi, &outer)?.value)
    }
}

/// The profile A(x, z, r) = ∫_{−1}^{U} (1 − u²)^{λ−1} du with
/// U = (ch r − z·ch x)/(√(z²−1)·sh x).
///
/// Admissible window: ch(x−r) ≤ z ≤ ch(x+r) (even in x−r). On it, U runs
/// from +1 at the lower edge down to −1 at the upper edge; small
/// floating-point overshoot beyond [−1, 1] is clamped.
pub fn inner_profile(params: &GegenbauerParams, x: f64, z: f64, r: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::DegenerateSubstitution);
    }
    let lo = (x - r).cosh();
    let hi = (x + r).cosh();
    if z < lo - 1e-9 * lo || z > hi + 1e-9 * hi || z <= 1.0 {
        return Err(Error::OutsideWindow { z, lo, hi });
    }
    let u = (r.cosh() - z * x.cosh()) / ((z * z - 1.0).sqrt() * x.sinh());
    profile_from_u(params, u)
}

/// The profile with U clamped structurally: below the admissible window
/// (reachable for x ≤ r, where the averaged shifts saturate the whole
/// angular range) the value is the full endpoint-to-endpoint integral.
pub(crate) fn profile_saturating(params: &GegenbauerParams, x: f64, z: f64, r: f64) -> Result<f64> {
    let u = (r.cosh() - z * x.cosh()) / ((z * z - 1.0).sqrt() * x.sinh());
    profile_from_u(params, u.clamp(-1.0, 1.0))
}

/// ∫_{−1}^{U}(1−u²)^{λ−1} du with U pre-computed and clamp policy applied.
pub(crate) fn profile_from_u(params: &GegenbauerParams, u: f64) -> Result<f64> {
    let lambda = params.lambda();
    if u > 1.0 + PROFILE_CLAMP || u < -1.0 - PROFILE_CLAMP {
        return Err(Error::OutsideWindow {
            z: u,
            lo: -1.0,
            hi: 1.0,
        });
    }
    let u = u.clamp(-1.0, 1.0);
    if u <= -1.0 + 1e-14 {
        return Ok(0.0);
    }
    let full = crate::special::gamma_fn(0.5)? * crate::special::gamma_fn(lambda)?
        / crate::special::gamma_fn(lambda + 0.5)?;
    if u >= 1.0 - 1e-14 {
        return Ok(full);
    }
    // one singular endpoint per piece: direct on [−1, u] for u ≤ 0,
    // complement of [u, 1] otherwise
    if u <= 0.0 {
        let spec = QuadratureSpec::default().with_exponents(lambda - 1.0, 0.0);
        let r = integrate_singular(|v: f64| (1.0 - v).powf(lambda - 1.0), -1.0, u, &spec)?;
        Ok(r.value)
    } else {
        let spec = QuadratureSpec::default().with_exponents(0.0, lambda - 1.0);
        let r = integrate_singular(|v: f64| (1.0 + v).powf(lambda - 1.0), u, 1.0, &spec)?;
        Ok(full - r.value)
    }
}

/// I(x, r) in the transformed kernel form:
/// Γ(λ+1/2)/(Γ(1/2)Γ(λ)) ∫ |f(z)| (z²−1)^{λ−1/2} A(x, z, r) dz over the
/// admissible z-window. For x ≤ r the window reaches down to z = 1 and the
/// (z²−1)^{λ−1/2} endpoint is handled by the singular rule.
pub fn shift_average_kernel_form(
    params: &GegenbauerParams,
    f: &TestFunction,
    x: f64,
    r: f64,
) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::DegenerateSubstitution);
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "kernel form needs r > 0 (got {r})"
        )));
    }
    let lambda = params.lambda();
    let z_hi = (x + r).cosh();
    let norm = params.shift_normalization();
    let spec = QuadratureSpec::loose();

    let value = if x <= r {
        // the integral reaches down to z = 1, where the profile saturates
        // at its full value; split at the saturation corner z = ch(r−x)
        let z_corner = (r - x).cosh().min(z_hi);
        let spec_sing = spec.with_exponents(lambda - 0.5, 0.0);
        let saturated = integrate_singular(
            |z: f64| {
                let a = profile_saturating(params, x, z, r).unwrap_or(f64::NAN);
                f.eval(z).abs() * (z + 1.0).powf(lambda - 0.5) * a
            },
            1.0,
            z_corner,
            &spec_sing,
        )?
        .value;
        let active = if z_hi > z_corner {
            integrate_finite(
                |z: f64| {
                    let a = profile_saturating(params, x, z, r).unwrap_or(f64::NAN);
                    f.eval(z).abs() * (z * z - 1.0).powf(lambda - 0.5) * a
                },
                z_corner,
                z_hi,
                &spec,
            )?
            .value
        } else {
            0.0
        };
        saturated + active
    } else {
        let z_lo = (x - r).cosh();
        let g = |z: f64| {
            let a = profile_saturating(params, x, z, r).unwrap_or(f64::NAN);
            f.eval(z).abs() * (z * z - 1.0).powf(lambda - 0.5) * a
        };
        integrate_finite(g, z_lo, z_hi, &spec)?.value
    };
    Ok(norm * value)
}

/// ‖A^λ_{ch t} f − f‖_{L_{p,λ}} over the truncation domain sized from the
/// registry hints (extended by the shift amount). p = ∞ takes a grid
/// supremum.
pub fn shift_modulus(
    params: &GegenbauerParams,
    f: &TestFunction,
    t: f64,
    p: f64,
) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "p = {p} must be >= 1"
        )));
    }
    let (_, hi) = f.norm_domain(1e-12)?;
    let hi = hi + t;
    if t == 0.0 {
        return Ok(0.0);
    }
    let inner_spec = QuadratureSpec::default();
    let diff = |x: f64| {
        let shifted = shift_apply_fn(params, |y| f.eval(y), t, x, &inner_spec).unwrap_or(f64::NAN);
        shifted - f.eval_x(x)
    };
    if p.is_infinite() {
        let n = 400;
        let mut sup: f64 = 0.0;
        for i in 0..=n {
            let x = hi * i as f64 / n as f64;
            sup = sup.max(diff(x).abs());
        }
        return Ok(sup);
    }
    let two_lambda = 2.0 * params.lambda();
    let spec = QuadratureSpec::loose().with_exponents(two_lambda, 0.0);
    let integrand = |x: f64| {
        let ratio = if x == 0.0 { 1.0 } else { x.sinh() / x };
        diff(x).abs().powf(p) * ratio.powf(two_lambda)
    };
    let r = integrate_singular(integrand, 0.0, hi, &spec)?;
    Ok(r.value.max(0.0).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{mc_oracle, McDomain};

    fn params() -> GegenbauerParams {
        GegenbauerParams::with_lambda(0.25).unwrap()
    }

    #[test]
    fn zero_shift_is_identity() {
        let p = params();
        let f = TestFunction::bump(1.0, 2.0).unwrap();
        let x = 1.3f64;
        let v = shift_apply(&p, &f, 0.0, x).unwrap();
        assert!((v - f.eval_x(x)).abs() < 1e-8);
    }

    #[test]
    fn shift_of_constant_is_one() {
        let p = params();
        let f = TestFunction::constant_one();
        for &(t, x) in &[(0.0, 0.5), (0.5, 1.5), (2.0, 0.0), (1.0, 3.0)] {
            let v = shift_apply(&p, &f, t, x).unwrap();
            assert!((v - 1.0).abs() < 1e-8, "t {t}, x {x}: {v}");
        }
    }

    #[test]
    fn shift_of_identity_multiplies_cosh() {
        // the cos φ term integrates to zero against the symmetric weight
        let p = params();
        let f = TestFunction::identity();
        let (t, x) = (0.7, 1.1);
        let v = shift_apply(&p, &f, t, x).unwrap();
        let expect = x.cosh() * t.cosh();
        assert!((v - expect).abs() < 1e-8 * expect, "{v} vs {expect}");
    }

    #[test]
    fn shift_matches_mc_oracle_on_phi_integral() {
        let p = params();
        let f = TestFunction::bump(1.0, 2.0).unwrap();
        let (t, x) = (0.5, 1.5);
        let v = shift_apply(&p, &f, t, x).unwrap();

        let lambda = p.lambda();
        let (cx, sx) = (x.cosh(), x.sinh());
        let (ct, st) = (t.cosh(), t.sinh());
        // importance-sample the (sin φ)^{2λ−1} weight through the same
        // endpoint transform used by the quadrature, left/right halves
        let beta = 2.0 * lambda - 1.0;
        let pi = std::f64::consts::PI;
        let rho = 1.0 / (1.0 + beta);
        let payload = move |phi: f64| {
            let y = (cx * ct - sx * st * phi.cos()).max(1.0);
            let ratio = phi.sin() / (phi * (pi - phi));
            f.eval(y) * ratio.powf(beta)
        };
        let upper = (pi / 2.0).powf(1.0 + beta);
        let (left, se_l) = mc_oracle(
            |u| payload(u[0].powf(rho)) * (pi - u[0].powf(rho)).powf(beta) * rho,
            McDomain::Interval(0.0, upper),
            4_000_000,
            101,
        )
        .unwrap();
        let (right, se_r) = mc_oracle(
            |u| payload(pi - u[0].powf(rho)) * (pi - u[0].powf(rho) - 0.0).powf(0.0) * {
                let t_ = pi - u[0].powf(rho);
                t_.powf(beta) * rho
            },
            McDomain::Interval(0.0, upper),
            4_000_000,
            202,
        )
        .unwrap();
        let oracle = p.shift_normalization() * (left + right);
        let se = p.shift_normalization() * (se_l + se_r);
        assert!(
            (v - oracle).abs() < 5.0 * se + 1e-6,
            "{v} vs oracle {oracle} (se {se})"
        );
    }

    #[test]
    fn positivity_preserved() {
        let p = params();
        let f = TestFunction::bump(1.0, 2.0).unwrap();
        for &t in &[0.1, 0.5, 1.5] {
            for &x in &[0.0, 0.7, 1.4, 2.5] {
                assert!(shift_apply(&p, &f, t, x).unwrap() >= -1e-12);
            }
        }
    }

    #[test]
    fn average_of_constant_is_origin_ball_measure() {
        let p = params();
        let f = TestFunction::constant_one();
        let r = 0.8f64;
        let v = shift_average_integral(&p, &f, 1.2, r).unwrap();
        let m = crate::measure::weighted_length(&p, 0.0, r).unwrap();
        assert!((v - m).abs() < 1e-6 * m, "{v} vs {m}");
    }

    #[test]
    fn average_of_zero_is_zero() {
        let p = params();
        let f = TestFunction::bump(1.0, 2.0).unwrap().scaled(0.0);
        assert_eq!(shift_average_integral(&p, &f, 1.2, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn profile_range_endpoints() {
        let p = params();
        let (x, r) = (0.4f64, 0.9f64); // x <= r
        // U = −1 at the top of the window
        let z_top = (x + r).cosh();
        let a = inner_profile(&p, x, z_top, r).unwrap();
        assert!(a.abs() < 1e-10);
        // U = +1 at the bottom of the window: the full value
        let full = crate::special::gamma_fn(0.5).unwrap()
            * crate::special::gamma_fn(p.lambda()).unwrap()
            / crate::special::gamma_fn(p.lambda() + 0.5).unwrap();
        let a = inner_profile(&p, x, (x - r).cosh(), r).unwrap();
        assert!((a - full).abs() < 1e-8, "{a} vs {full}");
    }

    #[test]
    fn profile_u_stays_admissible_for_x_below_r() {
        let p = params();
        let (x, r) = (0.3f64, 0.7f64);
        let z_lo = (x - r).cosh();
        let z_hi = (x + r).cosh();
        for i in 0..=41 {
            let z = z_lo + (z_hi - z_lo) * i as f64 / 41.0;
            let u = (r.cosh() - z * x.cosh()) / ((z * z - 1.0).sqrt() * x.sinh());
            assert!(
                (-1.0 - 1e-9..=1.0 + 1e-9).contains(&u),
                "z {z}: U = {u} escapes [-1, 1]"
            );
            assert!(inner_profile(&p, x, z, r).is_ok());
        }
    }

    #[test]
    fn profile_rejects_z_outside_window() {
        let p = params();
        assert!(matches!(
            inner_profile(&p, 1.0, 10.0, 0.2),
            Err(Error::OutsideWindow { .. })
        ));
    }

    #[test]
    fn dual_forms_agree_on_bump() {
        let p = params();
        let f = TestFunction::bump(1.0, 2.0).unwrap();
        let (x, r) = (1.5, 0.5);
        let direct = shift_average_integral(&p, &f, x, r).unwrap();
        let kernel = shift_average_kernel_form(&p, &f, x, r).unwrap();
        assert!(
            ((direct - kernel) / direct).abs() < 1e-5,
            "direct {direct} vs kernel {kernel}"
        );
    }

    #[test]
    fn kernel_form_of_constant_capped_by_full_profile() {
        // 0 < x ≤ r ≤ c: profile capped by the full Beta integral, so the
        // kernel form is at most the window's weighted length
        let p = params();
        let f = TestFunction::constant_one();
        let (x, r) = (0.3, 0.8);
        let v = shift_average_kernel_form(&p, &f, x, r).unwrap();
        let lambda = p.lambda();
        let spec = QuadratureSpec::loose().with_exponents(lambda - 0.5, 0.0);
        let cap = integrate_singular(
            |z: f64| (z + 1.0).powf(lambda - 0.5),
            1.0,
            (x + r).cosh(),
            &spec,
        )
        .unwrap()
        .value;
        assert!(v <= cap * (1.0 + 1e-9), "{v} > {cap}");
        assert!(v > 0.0);
    }

    #[test]
    fn kernel_form_rejects_x_zero() {
        let p = params();
        let f = TestFunction::constant_one();
        assert!(matches!(
            shift_average_kernel_form(&p, &f, 0.0, 0.5),
            Err(Error::DegenerateSubstitution)
        ));
    }

    #[test]
    fn modulus_vanishes_at_t_zero_and_for_constants() {
        let p = params();
        let f = TestFunction::bump(1.0, 2.0).unwrap();
        assert_eq!(shift_modulus(&p, &f, 0.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn modulus_decreases_towards_zero_shift() {
        let p = params();
        let f = TestFunction::bump(1.0, 2.0).unwrap();
        let mut last = f64::INFINITY;
        let mut first = None;
        for &t in &[0.4, 0.2, 0.1, 0.05] {
            let m = shift_modulus(&p, &f, t, 2.0).unwrap();
            assert!(m < last, "t {t}: {m} not below {last}");
            last = m;
            first.get_or_insert(m);
        }
        assert!(last < 0.1 * first.unwrap());
    }
}
